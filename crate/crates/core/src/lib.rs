//! Exact twisted de Rham cohomology `H^k_{f,p}` of a quasihomogeneous
//! polynomial `f` with an isolated singularity.
//!
//! `p = 0` is the Nambu-Poisson cohomology of `f dx_1^...^dx_n`. The crate
//! computes every space twice: from closed formulas in terms of the Milnor
//! algebra ([`closed_form`]) and by brute-force linear algebra on graded
//! slices ([`engine`]).

pub mod closed_form;
pub mod engine;
pub mod error;
pub mod exec;
pub mod forms;
pub mod grading;
pub mod linalg;
pub mod milnor;
pub mod normal_forms;
pub mod parse;
pub mod poly;

pub use error::Error;
pub use exec::Execution;
pub use forms::{DifferentialForm, IndexSet, PolyVectorField};
pub use grading::{solve_weights, QuasiDegree, WeightSystem};
pub use milnor::{milnor_algebra, CountVector, MilnorAlgebra};
pub use parse::{parse_polynomial, Variables};
pub use poly::{Monomial, Polynomial, Scalar};

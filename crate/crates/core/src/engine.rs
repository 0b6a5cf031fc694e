//! Brute-force cohomology of `(Omega^*, d_f^(p))`, one quasidegree at a time.
//!
//! `d_f^(p)` maps the finite-dimensional slice `Omega^k_m` to
//! `Omega^{k+1}_{m+N}`, so the cohomology splits as a product over `m` and
//! each factor is computed exactly:
//!
//! ```text
//! dim H^k_m = dim Omega^k_m - rank(d on Omega^k_m) - rank(d on Omega^{k-1}_{m-N})
//! ```

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::EngineError;
use crate::exec::Execution;
use crate::forms::{self, basis_form, DifferentialForm, IndexSet};
use crate::grading::{QuasiDegree, WeightSystem};
use crate::linalg::{self, RationalVec};
use crate::poly::{scalar, Monomial, Polynomial};

/// A basis of `Omega^k_m`: pairs `(x^a, I)` standing for `x^a dx_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSlice {
    k: usize,
    m: QuasiDegree,
    basis: Vec<(Monomial, IndexSet)>,
    index: HashMap<(Monomial, IndexSet), u32>,
}

impl GradedSlice {
    pub fn form_degree(&self) -> usize {
        self.k
    }

    pub fn quasidegree(&self) -> QuasiDegree {
        self.m
    }

    pub fn basis(&self) -> &[(Monomial, IndexSet)] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, m: &Monomial, i: IndexSet) -> Option<u32> {
        self.index.get(&(m.clone(), i)).copied()
    }

    /// Coordinates of a form lying in this slice.
    pub fn coordinates(&self, a: &DifferentialForm) -> Result<RationalVec, EngineError> {
        if a.is_zero() {
            return Ok(Vec::new());
        }
        if a.degree() != self.k {
            return Err(EngineError::Precondition(format!(
                "expected a {}-form, found a {}-form",
                self.k,
                a.degree()
            )));
        }
        let mut v = Vec::new();
        for (set, p) in a.components() {
            for (mono, c) in p.terms() {
                let j = self.position(mono, *set).ok_or_else(|| {
                    EngineError::Precondition(format!("form has a term outside quasidegree {}", self.m))
                })?;
                v.push((j, c.clone()));
            }
        }
        v.sort_by_key(|e| e.0);
        Ok(v)
    }

    /// The form with the given coordinates.
    pub fn form(&self, nvars: usize, v: &RationalVec) -> DifferentialForm {
        let mut out = DifferentialForm::zero(nvars, self.k);
        for (j, c) in v {
            let (mono, set) = &self.basis[*j as usize];
            out.add_component(*set, Polynomial::term(mono.clone(), c.clone()));
        }
        out
    }
}

/// Exhaustive basis of `Omega^k_m`, ordered by index set, then descending lex.
pub fn slice_basis(w: &WeightSystem, k: usize, m: QuasiDegree) -> GradedSlice {
    let mut basis = Vec::new();
    if k <= w.nvars() {
        for set in IndexSet::all_of_size(w.nvars(), k) {
            for mono in w.monomials_of_degree(m - set.weight(w)) {
                basis.push((mono, set));
            }
        }
    }
    let index = basis.iter().cloned().enumerate().map(|(j, b)| (b, j as u32)).collect();
    GradedSlice { k, m, basis, index }
}

/// The matrix of `d_f^(p): Omega^k_m -> Omega^{k+1}_{m+N}`, stored by columns.
#[derive(Clone, Debug)]
pub struct SliceMatrix {
    pub source: GradedSlice,
    pub target: GradedSlice,
    pub columns: Vec<RationalVec>,
}

impl SliceMatrix {
    pub fn rank(&self) -> usize {
        linalg::rank(&self.columns)
    }

    /// Image of a source coordinate vector.
    pub fn apply(&self, x: &RationalVec) -> RationalVec {
        linalg::apply(&self.columns, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyProfile {
    pub k: usize,
    pub p: i64,
    /// Non-zero dimensions only.
    pub per_degree: BTreeMap<QuasiDegree, usize>,
    pub window: (QuasiDegree, QuasiDegree),
    pub total: usize,
    /// All dimensions vanish on the last `N` degrees of the window.
    pub stabilized: bool,
}

impl CohomologyProfile {
    pub fn at(&self, m: QuasiDegree) -> usize {
        self.per_degree.get(&m).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisionMode {
    /// Find `beta` with `a = df ^ beta`.
    Wedge,
    /// Find `gamma` with `a = df ^ d(gamma)`.
    WedgeD,
}

/// The complex `(Omega^*, d_f^(p))` for a fixed quasihomogeneous `f`.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    f: Polynomial,
    w: WeightSystem,
    n_deg: QuasiDegree,
    p: i64,
    partials: Vec<Polynomial>,
}

impl TwistedComplex {
    pub fn new(f: &Polynomial, w: &WeightSystem, p: i64) -> Result<Self, EngineError> {
        w.check_arity(f.nvars())?;
        let n_deg = w.quasihomogeneous_degree(f)?;
        Ok(TwistedComplex {
            f: f.clone(),
            w: w.clone(),
            n_deg,
            p,
            partials: crate::milnor::jacobian_generators(f),
        })
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    pub fn f_degree(&self) -> QuasiDegree {
        self.n_deg
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.w
    }

    /// `D_max = qN + sum_i max(N - 2 w_i, 0) + 2N` with `q = max(n, n - p)`.
    pub fn default_window(&self) -> (QuasiDegree, QuasiDegree) {
        let n = self.nvars() as i64;
        let q = n.max(n - self.p);
        let socle: i64 = (0..self.nvars()).map(|i| (self.n_deg - 2 * self.w.weight(i)).max(0)).sum();
        (0, q * self.n_deg + socle + 2 * self.n_deg)
    }

    fn check_k(&self, k: usize) -> Result<(), EngineError> {
        if k > self.nvars() {
            return Err(EngineError::FormDegree { k, n: self.nvars() });
        }
        Ok(())
    }

    /// Columns of `d_f^(p)` on `Omega^k_m`, in the coordinates of `target`.
    ///
    /// `d_f^(p)(x^a dx_I) = sum_{i not in I} [a_i f x^{a-e_i} - (k-p) x^a df/dx_i] dx_i ^ dx_I`.
    fn columns(&self, source: &GradedSlice, target: &GradedSlice) -> Vec<RationalVec> {
        let n = self.nvars();
        let k = source.k as i64;
        let twist = scalar(k - self.p);
        source
            .basis
            .iter()
            .map(|(mono, set)| {
                let mut acc: BTreeMap<u32, crate::poly::Scalar> = BTreeMap::new();
                for i in 0..n {
                    let Some((new_set, sign)) = set.insert(i) else {
                        continue;
                    };
                    let mut coeff = Polynomial::zero(n);
                    if let Some(lower) = mono.lower(i) {
                        let a_i = scalar(mono.exponents()[i] as i64);
                        coeff = &coeff + &self.f.mul_monomial(&lower).scale(&a_i);
                    }
                    if !twist.is_zero() {
                        coeff = &coeff - &self.partials[i].mul_monomial(mono).scale(&twist);
                    }
                    let sign = scalar(sign);
                    for (t, c) in coeff.terms() {
                        let j = target.position(t, new_set).expect("d_f^(p) raises quasidegree by N");
                        *acc.entry(j).or_insert_with(crate::poly::Scalar::zero) += c * &sign;
                    }
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            })
            .collect()
    }

    pub fn operator_matrix(&self, k: usize, m: QuasiDegree) -> Result<SliceMatrix, EngineError> {
        self.check_k(k)?;
        let source = slice_basis(&self.w, k, m);
        let target = slice_basis(&self.w, k + 1, m + self.n_deg);
        let columns = if k == self.nvars() {
            vec![Vec::new(); source.dim()]
        } else {
            self.columns(&source, &target)
        };
        Ok(SliceMatrix { source, target, columns })
    }

    /// Rank of `d_f^(p)` on `Omega^k_m`; zero outside `0..n`.
    pub fn rank(&self, k: usize, m: QuasiDegree) -> usize {
        if k >= self.nvars() {
            return 0;
        }
        let source = slice_basis(&self.w, k, m);
        if source.dim() == 0 {
            return 0;
        }
        let target = slice_basis(&self.w, k + 1, m + self.n_deg);
        linalg::rank(&self.columns(&source, &target))
    }

    fn incoming_rank(&self, k: usize, m: QuasiDegree) -> usize {
        if k == 0 {
            0
        } else {
            self.rank(k - 1, m - self.n_deg)
        }
    }

    pub fn cohomology_dimension(&self, k: usize, m: QuasiDegree) -> Result<usize, EngineError> {
        self.check_k(k)?;
        let dim = slice_basis(&self.w, k, m).dim();
        Ok(dim - self.rank(k, m) - self.incoming_rank(k, m))
    }

    /// Profiles of every `H^k` over `window` (default: [`Self::default_window`]).
    /// Ranks are computed once per `(k, m)` and shared between neighbouring `k`.
    pub fn profiles(&self, window: Option<(QuasiDegree, QuasiDegree)>, exec: Execution) -> Vec<CohomologyProfile> {
        let n = self.nvars();
        let (lo, hi) = window.unwrap_or_else(|| self.default_window());
        let tasks: Vec<(usize, QuasiDegree)> = (0..n)
            .flat_map(|k| (lo - self.n_deg..=hi).map(move |m| (k, m)))
            .collect();
        let ranks: HashMap<(usize, QuasiDegree), usize> = exec
            .map(tasks.clone(), |(k, m)| self.rank(k, m))
            .into_iter()
            .zip(tasks)
            .map(|(r, t)| (t, r))
            .collect();
        let rank = |k: usize, m: QuasiDegree| ranks.get(&(k, m)).copied().unwrap_or(0);
        (0..=n)
            .map(|k| {
                let mut per_degree = BTreeMap::new();
                for m in lo..=hi {
                    let incoming = if k == 0 { 0 } else { rank(k - 1, m - self.n_deg) };
                    let d = slice_basis(&self.w, k, m).dim() - rank(k, m) - incoming;
                    if d > 0 {
                        per_degree.insert(m, d);
                    }
                }
                self.assemble(k, per_degree, (lo, hi))
            })
            .collect()
    }

    pub fn cohomology_profile(
        &self,
        k: usize,
        window: Option<(QuasiDegree, QuasiDegree)>,
        exec: Execution,
    ) -> Result<CohomologyProfile, EngineError> {
        self.check_k(k)?;
        let (lo, hi) = window.unwrap_or_else(|| self.default_window());
        let dims = exec.map((lo..=hi).collect(), |m| {
            self.cohomology_dimension(k, m).expect("k checked")
        });
        let per_degree = (lo..=hi).zip(dims).filter(|&(_, d)| d > 0).collect();
        Ok(self.assemble(k, per_degree, (lo, hi)))
    }

    fn assemble(&self, k: usize, per_degree: BTreeMap<QuasiDegree, usize>, window: (QuasiDegree, QuasiDegree)) -> CohomologyProfile {
        let margin_start = window.1 - self.n_deg + 1;
        let stabilized = per_degree.range(margin_start..).next().is_none();
        CohomologyProfile {
            k,
            p: self.p,
            total: per_degree.values().sum(),
            per_degree,
            window,
            stabilized,
        }
    }

    /// Cocycles in `Omega^k_m` whose classes form a basis of `H^k_m`.
    pub fn witness_cocycles(&self, k: usize, m: QuasiDegree) -> Result<Vec<DifferentialForm>, EngineError> {
        let op = self.operator_matrix(k, m)?;
        let cycles = linalg::kernel(&op.columns);
        let image = self.image_in(k, m, &op.source);
        let picked = linalg::extend_span(&image, &cycles);
        Ok(picked
            .into_iter()
            .map(|j| op.source.form(self.nvars(), &cycles[j]))
            .collect())
    }

    /// `d_f^(p)(Omega^{k-1}_{m-N})` in the coordinates of `slice`.
    fn image_in(&self, k: usize, m: QuasiDegree, slice: &GradedSlice) -> Vec<RationalVec> {
        if k == 0 {
            return Vec::new();
        }
        let source = slice_basis(&self.w, k - 1, m - self.n_deg);
        self.columns(&source, slice)
    }

    /// Checks that each form is a `d_f^(p)`-cocycle in `Omega^k_m` (using the
    /// exterior calculus, not the slice matrices) and returns how much the
    /// forms raise the rank of the coboundary space. A return value equal to
    /// `forms.len()` certifies linearly independent classes.
    pub fn certify_classes(&self, k: usize, m: QuasiDegree, forms: &[DifferentialForm]) -> Result<usize, EngineError> {
        self.check_k(k)?;
        let slice = slice_basis(&self.w, k, m);
        let mut vecs = Vec::with_capacity(forms.len());
        for a in forms {
            if !forms::d_f_p(&self.f, self.p, a)?.is_zero() {
                return Err(EngineError::Precondition(format!("not a cocycle: {a}")));
            }
            vecs.push(slice.coordinates(a)?);
        }
        let image = self.image_in(k, m, &slice);
        Ok(linalg::extend_span(&image, &vecs).len())
    }

    /// Solves `a = df ^ beta` or `a = df ^ d(gamma)` degree by degree.
    ///
    /// Below the top degree a solution exists whenever the preconditions hold
    /// and `f` has finite codimension. For `n`-forms it exists iff the
    /// coefficient lies in the Jacobian ideal.
    pub fn divide_by_df(&self, a: &DifferentialForm, mode: DivisionMode) -> Result<DifferentialForm, EngineError> {
        let n = self.nvars();
        let k = a.degree();
        let df = forms::differential(&self.f);
        let (lo, shift) = match mode {
            DivisionMode::Wedge => (1, 1),
            DivisionMode::WedgeD => (2, 2),
        };
        if k < lo || k > n {
            return Err(EngineError::Precondition(format!("form degree {k} outside {lo}..={n}")));
        }
        if !forms::wedge(&df, a)?.is_zero() {
            return Err(EngineError::Precondition("df ^ a is not zero".into()));
        }
        if mode == DivisionMode::WedgeD && !forms::exterior_d(a).is_zero() {
            return Err(EngineError::Precondition("a is not closed".into()));
        }
        let mut out = DifferentialForm::zero(n, k - shift);
        for (m, part) in a.homogeneous_parts(&self.w) {
            let target = slice_basis(&self.w, k, m);
            let rhs = target.coordinates(&part)?;
            let unknowns = slice_basis(&self.w, k - shift, m - self.n_deg);
            let cols: Vec<RationalVec> = unknowns
                .basis
                .iter()
                .map(|(mono, set)| {
                    let b = basis_form(mono, *set);
                    let b = match mode {
                        DivisionMode::Wedge => b,
                        DivisionMode::WedgeD => forms::exterior_d(&b),
                    };
                    let image = forms::wedge(&df, &b).expect("same arity");
                    target.coordinates(&image).expect("df ^ . raises quasidegree by N")
                })
                .collect();
            let x = linalg::solve(&cols, &rhs).ok_or(EngineError::NoSolution { k, m })?;
            out = out.add(&unknowns.form(n, &x))?;
        }
        Ok(out)
    }
}

/// Convenience wrapper: `dim H^k_{f,p}` in quasidegree `m`.
pub fn cohomology_dimension(
    f: &Polynomial,
    w: &WeightSystem,
    p: i64,
    k: usize,
    m: QuasiDegree,
) -> Result<usize, EngineError> {
    TwistedComplex::new(f, w, p)?.cohomology_dimension(k, m)
}

pub fn operator_matrix(
    f: &Polynomial,
    w: &WeightSystem,
    p: i64,
    k: usize,
    m: QuasiDegree,
) -> Result<SliceMatrix, EngineError> {
    TwistedComplex::new(f, w, p)?.operator_matrix(k, m)
}

pub fn cohomology_profile(
    f: &Polynomial,
    w: &WeightSystem,
    p: i64,
    k: usize,
    window: Option<(QuasiDegree, QuasiDegree)>,
) -> Result<CohomologyProfile, EngineError> {
    TwistedComplex::new(f, w, p)?.cohomology_profile(k, window, Execution::available())
}

pub fn witness_cocycles(
    f: &Polynomial,
    w: &WeightSystem,
    p: i64,
    k: usize,
    m: QuasiDegree,
) -> Result<Vec<DifferentialForm>, EngineError> {
    TwistedComplex::new(f, w, p)?.witness_cocycles(k, m)
}

pub fn divide_by_df(
    f: &Polynomial,
    w: &WeightSystem,
    a: &DifferentialForm,
    mode: DivisionMode,
) -> Result<DifferentialForm, EngineError> {
    TwistedComplex::new(f, w, 0)?.divide_by_df(a, mode)
}

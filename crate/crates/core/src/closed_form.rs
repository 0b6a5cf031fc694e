//! Dimensions and representatives of `H^k_{f,p}` from closed formulas in the
//! Milnor algebra data `c`, `r_j`, `s`. No linear algebra on forms happens
//! here; [`crate::engine`] is the independent check.
//!
//! Write `q = n - p`. The non-trivial spaces are
//!
//! | space       | condition | dimension                     |
//! |-------------|-----------|-------------------------------|
//! | `H^0`       | `p <= 0`  | 1, spanned by `f^{-p}`        |
//! | `H^1`       | `p = 0`   | 1, spanned by `df`            |
//! | `H^{n-1}`   | `q > 2`   | `r_2 + ... + r_{q-1} + s`     |
//! | `H^{n-1}`   | `q = 2`   | infinite                      |
//! | `H^n`       | `q <= 0`  | `c`                           |
//! | `H^n`       | `q > 1`   | `c + r_2 + ... + r_{q-1} + s` |
//! | `H^n`       | `q = 1`   | infinite                      |
//!
//! Middle degrees `2 <= k <= n-2` vanish unless `p` is `k` or `k-1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{EngineError, Error};
use crate::forms::{self, DifferentialForm};
use crate::grading::{QuasiDegree, WeightSystem};
use crate::milnor::{milnor_algebra, CountVector, MilnorAlgebra};
use crate::poly::{Monomial, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dimension {
    Finite(usize),
    /// Infinite-dimensional. `e_part` is the dimension of the explicit finite
    /// summand when one is known.
    Infinite { e_part: Option<usize> },
    /// No closed formula applies; only the brute-force engine can answer.
    NotCovered,
}

impl Dimension {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Dimension::Finite(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::Infinite { e_part: Some(e) } => write!(f, "infinite (E-part {e})"),
            Dimension::Infinite { e_part: None } => f.write_str("infinite"),
            Dimension::NotCovered => f.write_str("not covered"),
        }
    }
}

/// A representative cocycle together with a symbolic label such as `x1*f^2*omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub degree: QuasiDegree,
    pub form: DifferentialForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyEntry {
    pub k: usize,
    pub dimension: Dimension,
    pub generators: Vec<Generator>,
    /// Number of listed generators per quasidegree.
    pub placement: BTreeMap<QuasiDegree, usize>,
}

impl CohomologyEntry {
    fn new(k: usize, dimension: Dimension, generators: Vec<Generator>) -> Self {
        let mut placement = BTreeMap::new();
        for g in &generators {
            *placement.entry(g.degree).or_insert(0) += 1;
        }
        CohomologyEntry {
            k,
            dimension,
            generators,
            placement,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub n: usize,
    pub weights: WeightSystem,
    pub f_degree: QuasiDegree,
    pub p: i64,
    pub codimension: usize,
    pub counts: CountVector,
    /// Indexed by `k = 0..=n`.
    pub entries: Vec<CohomologyEntry>,
}

impl CohomologyReport {
    pub fn entry(&self, k: usize) -> &CohomologyEntry {
        &self.entries[k]
    }

    pub fn dimensions(&self) -> Vec<Dimension> {
        self.entries.iter().map(|e| e.dimension.clone()).collect()
    }
}

fn label(factor: Option<&Monomial>, f_power: u32, tail: &str) -> String {
    let mut parts = Vec::new();
    if let Some(m) = factor.filter(|m| !m.is_one()) {
        parts.push(m.to_string());
    }
    match f_power {
        0 => {}
        1 => parts.push("f".into()),
        e => parts.push(format!("f^{e}")),
    }
    if !tail.is_empty() || parts.is_empty() {
        parts.push(if tail.is_empty() { "1".into() } else { tail.into() });
    }
    parts.join("*")
}

/// `(dim H^0_{f,p}, generator)`: `f^{-p}` for `p <= 0`, nothing for `p > 0`.
pub fn h0_dimension(f: &Polynomial, p: i64) -> (usize, Option<Polynomial>) {
    if p > 0 {
        (0, None)
    } else {
        (1, Some(f.power((-p) as u32)))
    }
}

/// `H^1_f` is spanned by `df`.
pub fn h1_f(f: &Polynomial) -> (usize, DifferentialForm) {
    (1, forms::differential(f))
}

/// `H^k_{f,p}` for `2 <= k <= n-2`.
pub fn middle_dimension(n: usize, k: usize, p: i64) -> Result<Dimension, EngineError> {
    if k < 2 || k + 2 > n {
        return Err(EngineError::FormDegree { k, n });
    }
    let k = k as i64;
    if p == 0 || (p != k && p != k - 1) {
        Ok(Dimension::Finite(0))
    } else {
        Ok(Dimension::NotCovered)
    }
}

/// Polynomials `h_j` of degree `jN - sum w` entering the representatives:
/// basis monomials for `j >= 2`, all monomials for `j = 1`.
fn h_family(a: &MilnorAlgebra, q: i64) -> Vec<(i64, Monomial)> {
    let w = a.weights();
    let n_deg = a.f_degree();
    let mut out = Vec::new();
    for j in 1..q {
        let d = j * n_deg - w.weight_sum();
        let monos = if j == 1 {
            w.monomials_of_degree(d)
        } else {
            a.basis_of_degree(d)
        };
        out.extend(monos.into_iter().map(|m| (j, m)));
    }
    out
}

fn monomial_poly(m: &Monomial) -> Polynomial {
    Polynomial::term(m.clone(), crate::poly::scalar(1))
}

/// `H^n_{f,n-q}`.
pub fn hn_dimension(a: &MilnorAlgebra, q: i64) -> CohomologyEntry {
    let f = a.polynomial();
    let n = f.nvars();
    let w = a.weights();
    let n_deg = a.f_degree();
    let omega = DifferentialForm::volume(n);
    if q == 1 {
        return CohomologyEntry::new(n, Dimension::Infinite { e_part: None }, Vec::new());
    }
    let mut gens: Vec<Generator> = a
        .basis()
        .iter()
        .map(|b| Generator {
            label: label(Some(b), 0, "omega"),
            degree: w.monomial_degree(b) + w.weight_sum(),
            form: omega.mul_function(&monomial_poly(b)),
        })
        .collect();
    if q > 1 {
        for (j, h) in h_family(a, q) {
            let e = (q - j) as u32;
            gens.push(Generator {
                label: label(Some(&h), e, "omega"),
                degree: q * n_deg,
                form: omega.mul_function(&(&f.power(e) * &monomial_poly(&h))),
            });
        }
    }
    CohomologyEntry::new(n, Dimension::Finite(gens.len()), gens)
}

/// `H^{n-1}_{f,n-q}`.
pub fn hn1_dimension(a: &MilnorAlgebra, q: i64) -> CohomologyEntry {
    let f = a.polynomial();
    let n = f.nvars();
    let w = a.weights();
    let n_deg = a.f_degree();
    let sigma = DifferentialForm::euler_contraction(w);
    let sigma_gen = |h: &Monomial, e: u32| Generator {
        label: label(Some(h), e, "sigma"),
        degree: w.monomial_degree(h) + e as i64 * n_deg + w.weight_sum(),
        form: sigma.mul_function(&(&f.power(e) * &monomial_poly(h))),
    };
    match q {
        q if q <= 0 => CohomologyEntry::new(n - 1, Dimension::Finite(0), Vec::new()),
        1 => CohomologyEntry::new(n - 1, Dimension::NotCovered, Vec::new()),
        2 => {
            let e: Vec<Generator> = h_family(a, 2).iter().map(|(_, h)| sigma_gen(h, 0)).collect();
            CohomologyEntry::new(n - 1, Dimension::Infinite { e_part: Some(e.len()) }, e)
        }
        q => {
            let gens: Vec<Generator> = h_family(a, q)
                .iter()
                .map(|(j, h)| sigma_gen(h, (q - 1 - j) as u32))
                .collect();
            CohomologyEntry::new(n - 1, Dimension::Finite(gens.len()), gens)
        }
    }
}

/// The complete closed-form answer for one `p`, from an already computed `Q_f`.
pub fn report_from_algebra(a: &MilnorAlgebra, p: i64) -> CohomologyReport {
    let f = a.polynomial();
    let n = f.nvars();
    let q = n as i64 - p;
    let n_deg = a.f_degree();
    let mut entries = Vec::with_capacity(n + 1);

    let (d0, g0) = h0_dimension(f, p);
    let gens = g0
        .map(|g| {
            vec![Generator {
                label: label(None, (-p) as u32, ""),
                degree: -p * n_deg,
                form: DifferentialForm::function(g),
            }]
        })
        .unwrap_or_default();
    entries.push(CohomologyEntry::new(0, Dimension::Finite(d0), gens));

    if p == 0 {
        let (d1, df) = h1_f(f);
        let gens = vec![Generator {
            label: "df".into(),
            degree: n_deg,
            form: df,
        }];
        entries.push(CohomologyEntry::new(1, Dimension::Finite(d1), gens));
    } else {
        entries.push(CohomologyEntry::new(1, Dimension::NotCovered, Vec::new()));
    }

    for k in 2..n - 1 {
        let d = middle_dimension(n, k, p).expect("k in the middle range");
        entries.push(CohomologyEntry::new(k, d, Vec::new()));
    }
    entries.push(hn1_dimension(a, q));
    entries.push(hn_dimension(a, q));

    CohomologyReport {
        n,
        weights: a.weights().clone(),
        f_degree: n_deg,
        p,
        codimension: a.codimension(),
        counts: a.count_vector(q),
        entries,
    }
}

/// Computes `Q_f` and assembles the closed-form report.
pub fn full_report(f: &Polynomial, w: &WeightSystem, p: i64) -> Result<CohomologyReport, Error> {
    let a = milnor_algebra(f, w)?;
    Ok(report_from_algebra(&a, p))
}

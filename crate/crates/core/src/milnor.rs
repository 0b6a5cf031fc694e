//! Jacobian ideal and Milnor algebra `Q_f = K[x] / (df/dx_1, ..., df/dx_n)`.
//!
//! Because `f` is quasihomogeneous, `I_f` is graded and `Q_f` can be computed
//! one quasidegree at a time with plain linear algebra, no Groebner bases.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{GradingError, MilnorError};
use crate::grading::{QuasiDegree, WeightSystem};
use crate::linalg::{self, RationalVec};
use crate::poly::{Monomial, Polynomial, Scalar};

/// The partial derivatives of `f`, in variable order.
pub fn jacobian_generators(f: &Polynomial) -> Vec<Polynomial> {
    (0..f.nvars())
        .map(|i| f.partial_derivative(i).expect("index in range"))
        .collect()
}

/// Coordinates of a homogeneous polynomial in a monomial list.
fn coordinates(p: &Polynomial, index: &BTreeMap<&Monomial, u32>) -> RationalVec {
    let mut v: RationalVec = p
        .terms()
        .map(|(m, c)| (index[m], c.clone()))
        .collect();
    v.sort_by_key(|e| e.0);
    v
}

/// Spanning vectors of `(I_f)_d` in the coordinates of `monomials`
/// (all monomials of degree `d`, descending lex).
fn ideal_slice(
    generators: &[Polynomial],
    w: &WeightSystem,
    n_deg: QuasiDegree,
    d: QuasiDegree,
    monomials: &[Monomial],
) -> Vec<RationalVec> {
    let index: BTreeMap<&Monomial, u32> = monomials.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
    let mut out = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        for u in w.monomials_of_degree(d - (n_deg - w.weight(i))) {
            out.push(coordinates(&g.mul_monomial(&u), &index));
        }
    }
    out
}

fn degree_of(f: &Polynomial, w: &WeightSystem) -> Result<QuasiDegree, GradingError> {
    w.check_arity(f.nvars())?;
    w.quasihomogeneous_degree(f)
}

/// `dim (I_f)_d`, the dimension of the degree-`d` part of the Jacobian ideal.
pub fn ideal_slice_dimension(f: &Polynomial, w: &WeightSystem, d: QuasiDegree) -> Result<usize, GradingError> {
    let n_deg = degree_of(f, w)?;
    let monomials = w.monomials_of_degree(d);
    let gens = jacobian_generators(f);
    Ok(linalg::rank(&ideal_slice(&gens, w, n_deg, d, &monomials)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorAlgebra {
    f: Polynomial,
    weights: WeightSystem,
    f_degree: QuasiDegree,
    basis: Vec<Monomial>,
    degree_profile: BTreeMap<QuasiDegree, usize>,
}

/// The integers `r_j` (`j = 2..q-1`) and `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    pub q: i64,
    pub r: BTreeMap<i64, usize>,
    pub s: usize,
}

impl CountVector {
    /// `r_2 + ... + r_{q-1} + s`.
    pub fn total(&self) -> usize {
        self.r.values().sum::<usize>() + self.s
    }
}

impl MilnorAlgebra {
    pub fn polynomial(&self) -> &Polynomial {
        &self.f
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn f_degree(&self) -> QuasiDegree {
        self.f_degree
    }

    /// Monomial basis of `Q_f`, ordered by quasidegree, then descending lex.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn codimension(&self) -> usize {
        self.basis.len()
    }

    pub fn degree_profile(&self) -> &BTreeMap<QuasiDegree, usize> {
        &self.degree_profile
    }

    /// `sum_i (N - 2 w_i)`, the top degree of `Q_f`.
    pub fn socle_bound(&self) -> QuasiDegree {
        socle_bound(&self.weights, self.f_degree)
    }

    /// Basis monomials of quasidegree `d`.
    pub fn basis_of_degree(&self, d: QuasiDegree) -> Vec<Monomial> {
        self.basis
            .iter()
            .filter(|m| self.weights.monomial_degree(m) == d)
            .cloned()
            .collect()
    }

    pub fn count_vector(&self, q: i64) -> CountVector {
        let sw = self.weights.weight_sum();
        let r = (2..q)
            .map(|j| {
                let d = j * self.f_degree - sw;
                (j, self.degree_profile.get(&d).copied().unwrap_or(0))
            })
            .collect();
        let s = self.weights.monomials_of_degree(self.f_degree - sw).len();
        CountVector { q, r, s }
    }

    /// Writes a quasihomogeneous `g` as a combination of basis monomials
    /// modulo `I_f`.
    pub fn normal_form(&self, g: &Polynomial) -> Result<Polynomial, GradingError> {
        let n = self.f.nvars();
        if g.is_zero() {
            return Ok(Polynomial::zero(n));
        }
        let d = self.weights.quasihomogeneous_degree(g)?;
        let monomials = self.weights.monomials_of_degree(d);
        let index: BTreeMap<&Monomial, u32> = monomials.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
        let basis = self.basis_of_degree(d);
        let mut cols: Vec<RationalVec> = basis
            .iter()
            .map(|b| vec![(index[b], Scalar::one())])
            .collect();
        cols.extend(ideal_slice(&jacobian_generators(&self.f), &self.weights, self.f_degree, d, &monomials));
        let x = linalg::solve(&cols, &coordinates(g, &index)).expect("basis and ideal span every slice");
        Ok(Polynomial::from_terms(
            n,
            x.into_iter()
                .filter(|(j, _)| (*j as usize) < basis.len())
                .map(|(j, c)| (basis[j as usize].clone(), c)),
        ))
    }
}

pub fn socle_bound(w: &WeightSystem, n_deg: QuasiDegree) -> QuasiDegree {
    (0..w.nvars()).map(|i| n_deg - 2 * w.weight(i)).sum()
}

/// Normal monomials of the degree-`d` slice: the complement of the leading
/// monomials of `(I_f)_d` under lex order.
fn quotient_slice(gens: &[Polynomial], w: &WeightSystem, n_deg: QuasiDegree, d: QuasiDegree) -> Vec<Monomial> {
    let monomials = w.monomials_of_degree(d);
    let span = ideal_slice(gens, w, n_deg, d, &monomials);
    let leading = linalg::leading_indices(&span);
    monomials
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !leading.contains(&(*i as u32)))
        .map(|(_, m)| m)
        .collect()
}

/// Computes `Q_f` and certifies finite codimension.
pub fn milnor_algebra(f: &Polynomial, w: &WeightSystem) -> Result<MilnorAlgebra, MilnorError> {
    let n_deg = degree_of(f, w)?;
    if n_deg <= 0 || !f.constant_term().is_zero() {
        return Err(MilnorError::NonZeroAtOrigin);
    }
    let n = f.nvars();
    let gens = jacobian_generators(f);
    let has_unit = gens.iter().any(|g| !g.constant_term().is_zero());
    if !has_unit {
        for v in 0..n {
            let appears = gens.iter().any(|g| g.monomials().any(|m| m.exponents()[v] > 0));
            if !appears {
                return Err(MilnorError::InfiniteCodimension(format!(
                    "variable x{} is absent from every partial derivative",
                    v + 1
                )));
            }
        }
    }
    let top = socle_bound(w, n_deg);
    let slices = crate::exec::map_collect((0..=top.max(-1)).collect(), |d| quotient_slice(&gens, w, n_deg, d));
    let mut basis = Vec::new();
    let mut degree_profile = BTreeMap::new();
    for (d, monos) in (0..=top.max(-1)).zip(slices) {
        if !monos.is_empty() {
            degree_profile.insert(d, monos.len());
            basis.extend(monos);
        }
    }
    for d in (top + 1).max(0)..=top + n_deg {
        let rest = quotient_slice(&gens, w, n_deg, d);
        if !rest.is_empty() {
            return Err(MilnorError::InfiniteCodimension(format!(
                "quotient is non-zero in degree {d}, above the socle bound {top}"
            )));
        }
    }
    // every variable must be nilpotent in Q_f
    for v in 0..n {
        let wv = w.weight(v);
        let a = top.max(0) / wv + 1;
        let mut exps = vec![0; n];
        exps[v] = a as u32;
        let power = Monomial::from_exponents(exps);
        if quotient_slice(&gens, w, n_deg, a * wv).contains(&power) {
            return Err(MilnorError::InfiniteCodimension(format!(
                "x{}^{a} does not lie in the Jacobian ideal",
                v + 1
            )));
        }
    }
    let expected = milnor_number_oracle(w, n_deg);
    if expected != BigRational::from_integer(BigInt::from(basis.len())) {
        return Err(MilnorError::InfiniteCodimension(format!(
            "codimension {} disagrees with the weighted product formula {expected}",
            basis.len()
        )));
    }
    Ok(MilnorAlgebra {
        f: f.clone(),
        weights: w.clone(),
        f_degree: n_deg,
        basis,
        degree_profile,
    })
}

/// `prod_i (N - w_i) / w_i`, the Milnor number of an isolated quasihomogeneous singularity.
pub fn milnor_number_oracle(w: &WeightSystem, n_deg: QuasiDegree) -> BigRational {
    (0..w.nvars()).fold(BigRational::one(), |acc, i| {
        acc * BigRational::new(BigInt::from(n_deg - w.weight(i)), BigInt::from(w.weight(i)))
    })
}

/// Coefficients of `prod_i (t^{N - w_i} - 1) / (t^{w_i} - 1)`, index = degree.
/// `None` when the quotient is not a polynomial.
pub fn poincare_series_oracle(w: &WeightSystem, n_deg: QuasiDegree) -> Option<Vec<i64>> {
    fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }
    fn binomial(e: i64) -> Vec<i64> {
        let mut v = vec![0; e as usize + 1];
        v[0] = -1;
        v[e as usize] += 1;
        v
    }
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for i in 0..w.nvars() {
        let top = n_deg - w.weight(i);
        if top < 0 {
            return None;
        }
        if top == 0 {
            return Some(Vec::new());
        }
        num = mul(&num, &binomial(top));
        den = mul(&den, &binomial(w.weight(i)));
    }
    // exact long division, highest degree first
    let lead = *den.last().unwrap();
    let mut rem = num;
    if rem.len() < den.len() {
        return None;
    }
    let mut quot = vec![0i64; rem.len() - den.len() + 1];
    for shift in (0..quot.len()).rev() {
        let c = rem[shift + den.len() - 1];
        if c % lead != 0 {
            return None;
        }
        let c = c / lead;
        quot[shift] = c;
        for (j, d) in den.iter().enumerate() {
            rem[shift + j] -= c * d;
        }
    }
    rem.iter().all(|&x| x == 0).then_some(quot)
}

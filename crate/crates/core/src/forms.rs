//! Polynomial differential forms on K^n.
//!
//! A k-form is stored as a map from sorted index subsets `I` to coefficient
//! polynomials, meaning `sum_I g_I dx_I`. The volume form is pinned to
//! `omega = dx1 ^ ... ^ dxn`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::FormError;
use crate::grading::{QuasiDegree, WeightSystem};
use crate::poly::{default_names, scalar, Monomial, Polynomial, Scalar};

/// Sorted subset of `{0, ..., n-1}` stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct IndexSet(u32);

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet(0)
    }

    pub fn full(n: usize) -> Self {
        IndexSet(((1u64 << n) - 1) as u32)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        IndexSet(indices.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    /// Number of members strictly below `i`.
    fn count_below(self, i: usize) -> u32 {
        (self.0 & ((1u32 << i) - 1)).count_ones()
    }

    /// `dx_i ^ dx_I = sign * dx_{I+i}`; `None` when `i` is already present.
    pub fn insert(self, i: usize) -> Option<(IndexSet, i64)> {
        if self.contains(i) {
            return None;
        }
        let sign = if self.count_below(i).is_multiple_of(2) { 1 } else { -1 };
        Some((IndexSet(self.0 | (1 << i)), sign))
    }

    /// `dx_I ^ dx_J = sign * dx_{I+J}`; `None` when the sets meet.
    pub fn merge(self, other: IndexSet) -> Option<(IndexSet, i64)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // pairs (i in self, j in other) with i > j
        let inversions: u32 = other.iter().map(|j| self.len() as u32 - self.count_below(j)).sum();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((IndexSet(self.0 | other.0), sign))
    }

    /// All subsets of size `k` of `{0..n-1}`, in lexicographic order.
    pub fn all_of_size(n: usize, k: usize) -> Vec<IndexSet> {
        let mut out: Vec<IndexSet> = (0u32..(1u32 << n))
            .filter(|b| b.count_ones() as usize == k)
            .map(IndexSet)
            .collect();
        out.sort();
        out
    }

    pub fn weight(self, w: &WeightSystem) -> i64 {
        self.iter().map(|i| w.weight(i)).sum()
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A vector field `sum_i X_i d/dx_i` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    components: Vec<Polynomial>,
}

impl PolyVectorField {
    pub fn new(components: Vec<Polynomial>) -> Self {
        PolyVectorField { components }
    }

    /// The Euler field `W = sum w_i x_i d/dx_i`.
    pub fn euler(w: &WeightSystem) -> Self {
        let n = w.nvars();
        PolyVectorField::new(
            (0..n)
                .map(|i| Polynomial::var(n, i).scale(&scalar(w.weight(i))))
                .collect(),
        )
    }

    /// The coordinate field `d/dx_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        PolyVectorField::new(
            (0..n)
                .map(|j| if i == j { Polynomial::one(n) } else { Polynomial::zero(n) })
                .collect(),
        )
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialForm {
    nvars: usize,
    degree: usize,
    comps: BTreeMap<IndexSet, Polynomial>,
}

impl DifferentialForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        DifferentialForm {
            nvars,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// A polynomial viewed as a 0-form.
    pub fn function(p: Polynomial) -> Self {
        Self::from_components(p.nvars(), 0, [(IndexSet::empty(), p)])
    }

    /// `g dx_I`.
    pub fn monomial_form(g: Polynomial, indices: IndexSet) -> Self {
        Self::from_components(g.nvars(), indices.len(), [(indices, g)])
    }

    pub fn dx(n: usize, i: usize) -> Self {
        Self::monomial_form(Polynomial::one(n), IndexSet::from_indices(&[i]))
    }

    /// `omega = dx1 ^ ... ^ dxn`.
    pub fn volume(n: usize) -> Self {
        Self::monomial_form(Polynomial::one(n), IndexSet::full(n))
    }

    /// `sigma = i_W omega`.
    pub fn euler_contraction(w: &WeightSystem) -> Self {
        interior_product(&PolyVectorField::euler(w), &Self::volume(w.nvars()))
            .expect("omega has positive degree")
    }

    pub fn from_components(
        nvars: usize,
        degree: usize,
        comps: impl IntoIterator<Item = (IndexSet, Polynomial)>,
    ) -> Self {
        let mut out = Self::zero(nvars, degree);
        for (i, p) in comps {
            assert_eq!(i.len(), degree, "index set size must equal the form degree");
            out.add_component(i, p);
        }
        out
    }

    pub(crate) fn add_component(&mut self, i: IndexSet, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        match self.comps.remove(&i) {
            None => {
                self.comps.insert(i, p);
            }
            Some(old) => {
                let sum = &old + &p;
                if !sum.is_zero() {
                    self.comps.insert(i, sum);
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&IndexSet, &Polynomial)> + '_ {
        self.comps.iter()
    }

    pub fn component(&self, i: IndexSet) -> Polynomial {
        self.comps.get(&i).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    /// The coefficient polynomial of a 0-form or n-form.
    pub fn as_function(&self) -> Option<Polynomial> {
        if self.degree == 0 {
            Some(self.component(IndexSet::empty()))
        } else if self.degree == self.nvars {
            Some(self.component(IndexSet::full(self.nvars)))
        } else {
            None
        }
    }

    fn check(&self, other: &DifferentialForm) -> Result<(), FormError> {
        if self.nvars != other.nvars {
            return Err(FormError::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        self.check(other)?;
        if self.degree != other.degree {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(other.clone());
            }
            return Err(FormError::WrongDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (i, p) in &other.comps {
            out.add_component(*i, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        self.add(&other.scale(&scalar(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> DifferentialForm {
        if s.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        DifferentialForm {
            nvars: self.nvars,
            degree: self.degree,
            comps: self.comps.iter().map(|(i, p)| (*i, p.scale(s))).collect(),
        }
    }

    pub fn mul_function(&self, g: &Polynomial) -> DifferentialForm {
        Self::from_components(
            self.nvars,
            self.degree,
            self.comps.iter().map(|(i, p)| (*i, p * g)),
        )
    }

    /// Quasidegree when the form is quasihomogeneous; `None` for the zero
    /// form or mixed degrees.
    pub fn quasidegree(&self, w: &WeightSystem) -> Option<QuasiDegree> {
        let mut degrees = self.comps.iter().flat_map(|(i, p)| {
            let shift = i.weight(w);
            p.monomials().map(move |m| w.monomial_degree(m) + shift)
        });
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Splits into quasihomogeneous pieces keyed by quasidegree.
    pub fn homogeneous_parts(&self, w: &WeightSystem) -> BTreeMap<QuasiDegree, DifferentialForm> {
        let mut out: BTreeMap<QuasiDegree, DifferentialForm> = BTreeMap::new();
        for (i, p) in &self.comps {
            for (m, c) in p.terms() {
                let d = w.monomial_degree(m) + i.weight(w);
                out.entry(d)
                    .or_insert_with(|| Self::zero(self.nvars, self.degree))
                    .add_component(*i, Polynomial::term(m.clone(), c.clone()));
            }
        }
        out
    }

    /// Renders as e.g. `(3*x1) dx2^dx3^dx4 + (-2*x2) dx1^dx3^dx4`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        self.comps
            .iter()
            .map(|(i, p)| {
                let coeff = format!("({})", p.display_with(names));
                if i.is_empty() {
                    coeff
                } else {
                    let dxs: Vec<String> = i.iter().map(|j| format!("d{}", names[j])).collect();
                    format!("{coeff} {}", dxs.join("^"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_names(self.nvars)))
    }
}

pub fn wedge(a: &DifferentialForm, b: &DifferentialForm) -> Result<DifferentialForm, FormError> {
    a.check(b)?;
    let mut out = DifferentialForm::zero(a.nvars, a.degree + b.degree);
    for (i, p) in &a.comps {
        for (j, q) in &b.comps {
            if let Some((u, sign)) = i.merge(*j) {
                out.add_component(u, (p * q).scale(&scalar(sign)));
            }
        }
    }
    Ok(out)
}

/// Exterior derivative.
pub fn exterior_d(a: &DifferentialForm) -> DifferentialForm {
    let n = a.nvars;
    let mut out = DifferentialForm::zero(n, a.degree + 1);
    for (set, p) in &a.comps {
        for v in 0..n {
            if let Some((u, sign)) = set.insert(v) {
                let dp = p.partial_derivative(v).expect("index in range");
                out.add_component(u, dp.scale(&scalar(sign)));
            }
        }
    }
    out
}

/// Contraction `i_X a` in the first slot.
pub fn interior_product(x: &PolyVectorField, a: &DifferentialForm) -> Result<DifferentialForm, FormError> {
    if a.degree == 0 {
        return Err(FormError::ContractZeroForm);
    }
    if x.nvars() != a.nvars {
        return Err(FormError::ArityMismatch {
            left: x.nvars(),
            right: a.nvars,
        });
    }
    let mut out = DifferentialForm::zero(a.nvars, a.degree - 1);
    for (set, p) in &a.comps {
        for (pos, v) in set.iter().enumerate() {
            let xv = &x.components()[v];
            if xv.is_zero() {
                continue;
            }
            let rest = IndexSet(set.bits() & !(1 << v));
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            out.add_component(rest, (xv * p).scale(&scalar(sign)));
        }
    }
    Ok(out)
}

/// Lie derivative along the Euler field via Cartan's formula.
pub fn lie_derivative_w(w: &WeightSystem, a: &DifferentialForm) -> DifferentialForm {
    let field = PolyVectorField::euler(w);
    let first = interior_product(&field, &exterior_d(a)).expect("d raises the degree");
    if a.degree == 0 {
        return first;
    }
    let second = exterior_d(&interior_product(&field, a).expect("positive degree"));
    first.add(&second).expect("same degree")
}

/// The polynomial `div(a)` with `da = div(a) omega`, for an (n-1)-form.
pub fn divergence(a: &DifferentialForm) -> Result<Polynomial, FormError> {
    if a.degree + 1 != a.nvars {
        return Err(FormError::WrongDegree {
            expected: a.nvars - 1,
            found: a.degree,
        });
    }
    Ok(exterior_d(a).component(IndexSet::full(a.nvars)))
}

/// `df` as a 1-form.
pub fn differential(f: &Polynomial) -> DifferentialForm {
    exterior_d(&DifferentialForm::function(f.clone()))
}

/// The twisted differential `a -> f da - (k - p) df ^ a`, where `k = deg a`.
pub fn d_f_p(f: &Polynomial, p: i64, a: &DifferentialForm) -> Result<DifferentialForm, FormError> {
    if f.nvars() != a.nvars {
        return Err(FormError::ArityMismatch {
            left: f.nvars(),
            right: a.nvars,
        });
    }
    let k = a.degree as i64;
    let first = exterior_d(a).mul_function(f);
    let second = wedge(&differential(f), a)?.scale(&scalar(k - p));
    first.sub(&second)
}

/// `g * dx_I` for a single monomial, the building block of graded slices.
pub fn basis_form(m: &Monomial, indices: IndexSet) -> DifferentialForm {
    DifferentialForm::monomial_form(Polynomial::term(m.clone(), scalar(1)), indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_polynomial, Variables};

    fn poly(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, &Variables::standard(n).unwrap()).unwrap()
    }

    fn ws(w: &[u32]) -> WeightSystem {
        WeightSystem::new(w.to_vec()).unwrap()
    }

    #[test]
    fn merge_sign_matches_bubble_sort() {
        // oracle: count inversions of the concatenated index sequence
        for a in 0u32..32 {
            for b in 0u32..32 {
                let (i, j) = (IndexSet(a), IndexSet(b));
                let got = i.merge(j);
                if a & b != 0 {
                    assert!(got.is_none());
                    continue;
                }
                let seq: Vec<usize> = i.iter().chain(j.iter()).collect();
                let mut inv = 0;
                for x in 0..seq.len() {
                    for y in x + 1..seq.len() {
                        if seq[x] > seq[y] {
                            inv += 1;
                        }
                    }
                }
                let sign = if inv % 2 == 0 { 1 } else { -1 };
                assert_eq!(got, Some((IndexSet(a | b), sign)), "{a:b} {b:b}");
            }
        }
    }

    #[test]
    fn wedge_basics() {
        let dx1 = DifferentialForm::dx(3, 0);
        let dx2 = DifferentialForm::dx(3, 1);
        let w = wedge(&dx1, &dx2).unwrap();
        assert_eq!(w, DifferentialForm::monomial_form(Polynomial::one(3), IndexSet::from_indices(&[0, 1])));
        assert_eq!(wedge(&dx2, &dx1).unwrap(), w.scale(&scalar(-1)));
        let alpha = dx1
            .mul_function(&poly("x2", 3))
            .add(&dx2.mul_function(&poly("x1^2-x3", 3)))
            .unwrap();
        assert!(wedge(&alpha, &alpha).unwrap().is_zero());
    }

    #[test]
    fn df_wedge_sigma_is_euler_times_omega() {
        let f = poly("x1^3+x2^2+x3^2", 3);
        let w = ws(&[2, 3, 3]);
        let lhs = wedge(&differential(&f), &DifferentialForm::euler_contraction(&w)).unwrap();
        assert_eq!(lhs, DifferentialForm::volume(3).mul_function(&f.scale(&scalar(6))));
    }

    #[test]
    fn exterior_derivative_examples() {
        assert_eq!(exterior_d(&DifferentialForm::function(poly("x1", 3))), DifferentialForm::dx(3, 0));
        let exact = DifferentialForm::dx(3, 1)
            .mul_function(&poly("x1", 3))
            .add(&DifferentialForm::dx(3, 0).mul_function(&poly("x2", 3)))
            .unwrap();
        assert!(exterior_d(&exact).is_zero());
        let sigma = DifferentialForm::euler_contraction(&ws(&[3, 2, 4, 4]));
        assert_eq!(exterior_d(&sigma), DifferentialForm::volume(4).scale(&scalar(13)));
    }

    #[test]
    fn sigma_matches_displayed_expansion() {
        let sigma = DifferentialForm::euler_contraction(&ws(&[3, 2, 4, 4]));
        let expected = DifferentialForm::from_components(
            4,
            3,
            [
                (IndexSet::from_indices(&[1, 2, 3]), poly("3*x1", 4)),
                (IndexSet::from_indices(&[0, 2, 3]), poly("-2*x2", 4)),
                (IndexSet::from_indices(&[0, 1, 3]), poly("4*x3", 4)),
                (IndexSet::from_indices(&[0, 1, 2]), poly("-4*x4", 4)),
            ],
        );
        assert_eq!(sigma, expected);
        assert_eq!(
            sigma.to_string(),
            "(-4*x4) dx1^dx2^dx3 + (4*x3) dx1^dx2^dx4 + (-2*x2) dx1^dx3^dx4 + (3*x1) dx2^dx3^dx4"
        );
    }

    #[test]
    fn contractions() {
        let i = interior_product(&PolyVectorField::coordinate(3, 0), &DifferentialForm::dx(3, 0)).unwrap();
        assert_eq!(i, DifferentialForm::function(Polynomial::one(3)));
        assert_eq!(
            interior_product(&PolyVectorField::coordinate(3, 0), &DifferentialForm::function(poly("x1", 3))),
            Err(FormError::ContractZeroForm)
        );
        let f = poly("x1^2*x2+x2^4+x3^2+x4^2", 4);
        let w = ws(&[3, 2, 4, 4]);
        let c = interior_product(&PolyVectorField::euler(&w), &differential(&f)).unwrap();
        assert_eq!(c, DifferentialForm::function(f.scale(&scalar(8))));
    }

    #[test]
    fn lie_derivatives() {
        let w = ws(&[2, 3, 3]);
        assert_eq!(lie_derivative_w(&w, &DifferentialForm::dx(3, 0)), DifferentialForm::dx(3, 0).scale(&scalar(2)));
        let w1 = ws(&[1, 1, 1]);
        assert_eq!(lie_derivative_w(&w1, &DifferentialForm::volume(3)), DifferentialForm::volume(3).scale(&scalar(3)));
        let f = poly("x1^3+x2^2+x3^2", 3);
        let fw = DifferentialForm::volume(3).mul_function(&f);
        let lhs = lie_derivative_w(&w, &fw);
        assert_eq!(lhs, fw.scale(&scalar(6 + 8)));
    }

    #[test]
    fn divergences() {
        let w = ws(&[3, 2, 4, 4]);
        assert_eq!(divergence(&DifferentialForm::euler_contraction(&w)), Ok(poly("13", 4)));
        let x1_omega_part = interior_product(&PolyVectorField::coordinate(4, 0), &DifferentialForm::volume(4))
            .unwrap()
            .mul_function(&poly("x1", 4));
        assert_eq!(divergence(&x1_omega_part), Ok(Polynomial::one(4)));
        let f = poly("x1^2*x2+x2^4+x3^2+x4^2", 4);
        let tau = exterior_d(&DifferentialForm::dx(4, 2).mul_function(&poly("x1*x4", 4)));
        let closed = wedge(&differential(&f), &tau).unwrap();
        assert!(divergence(&closed).unwrap().is_zero());
        assert!(matches!(divergence(&DifferentialForm::dx(4, 0)), Err(FormError::WrongDegree { .. })));
    }

    #[test]
    fn twisted_differential_examples() {
        let f = poly("x1", 3);
        let got = d_f_p(&f, 0, &DifferentialForm::function(poly("x1", 3))).unwrap();
        assert_eq!(got, DifferentialForm::dx(3, 0).mul_function(&poly("x1", 3)));
        let g = poly("x1^3+x2^2+x3^2", 3);
        assert!(d_f_p(&g, 0, &differential(&g)).unwrap().is_zero());
    }

    #[test]
    fn cobord_formula_from_the_top_degree_lemma() {
        // for an (n-1)-form a: d_f^{(n-q)}(a) = df ^ beta, beta = -(q-1) a + div(a)/N sigma
        let f = poly("x1^2*x2+x2^4+x3^2+x4^2", 4);
        let w = ws(&[3, 2, 4, 4]);
        let n_deg = 8;
        let sigma = DifferentialForm::euler_contraction(&w);
        let a = DifferentialForm::from_components(
            4,
            3,
            [
                (IndexSet::from_indices(&[0, 1, 2]), poly("x1*x2", 4)),
                (IndexSet::from_indices(&[1, 2, 3]), poly("x2^3-x3", 4)),
            ],
        );
        for q in [2i64, 3, 4, 6] {
            let lhs = d_f_p(&f, 4 - q, &a).unwrap();
            let div = divergence(&a).unwrap();
            let beta = a
                .scale(&scalar(-(q - 1)))
                .add(&sigma.mul_function(&div.scale(&crate::poly::ratio(1, n_deg))))
                .unwrap();
            let rhs = wedge(&differential(&f), &beta).unwrap();
            assert_eq!(lhs, rhs, "q = {q}");
        }
    }
}

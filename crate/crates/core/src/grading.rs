//! Weight systems, quasidegrees and the Euler field `W = sum w_i x_i d/dx_i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GradingError;
use crate::poly::{scalar, Monomial, Polynomial, Scalar};

/// Weighted degree. Signed because target degrees such as `N - sum(w)` can be negative.
pub type QuasiDegree = i64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    weights: Vec<u32>,
    weight_sum: i64,
}

impl WeightSystem {
    pub fn new(weights: Vec<u32>) -> Result<Self, GradingError> {
        if weights.len() < 3 {
            return Err(GradingError::TooFewVariables(weights.len()));
        }
        if weights.contains(&0) {
            return Err(GradingError::NonPositiveWeight);
        }
        let weight_sum = weights.iter().map(|&w| w as i64).sum();
        Ok(WeightSystem {
            weights,
            weight_sum,
        })
    }

    /// All weights equal to one.
    pub fn standard(n: usize) -> Result<Self, GradingError> {
        Self::new(vec![1; n])
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i] as i64
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn weight_sum(&self) -> i64 {
        self.weight_sum
    }

    pub fn min_weight(&self) -> i64 {
        self.weights.iter().copied().min().unwrap() as i64
    }

    pub(crate) fn check_arity(&self, nvars: usize) -> Result<(), GradingError> {
        if nvars != self.nvars() {
            return Err(GradingError::ArityMismatch {
                weights: self.nvars(),
                nvars,
            });
        }
        Ok(())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> QuasiDegree {
        m.exponents()
            .iter()
            .zip(&self.weights)
            .map(|(&a, &w)| a as i64 * w as i64)
            .sum()
    }

    /// The common quasidegree of every monomial of `p`.
    pub fn quasihomogeneous_degree(&self, p: &Polynomial) -> Result<QuasiDegree, GradingError> {
        self.check_arity(p.nvars())?;
        let mut monos = p.monomials();
        let first = monos.next().ok_or(GradingError::ZeroPolynomial)?;
        let expected = self.monomial_degree(first);
        for m in monos {
            let found = self.monomial_degree(m);
            if found != expected {
                return Err(GradingError::NotQuasihomogeneous {
                    monomial: m.clone(),
                    expected,
                    found,
                });
            }
        }
        Ok(expected)
    }

    /// Every monomial of quasidegree `d`, in descending lex order
    /// (`x1 > x2 > ... > xn`). Empty when `d < 0`.
    pub fn monomials_of_degree(&self, d: QuasiDegree) -> Vec<Monomial> {
        let mut out = Vec::new();
        if d < 0 {
            return out;
        }
        let mut exps = vec![0u32; self.nvars()];
        self.enumerate(0, d, &mut exps, &mut out);
        out
    }

    fn enumerate(&self, i: usize, budget: i64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let w = self.weight(i);
        if i + 1 == self.nvars() {
            if budget % w == 0 {
                exps[i] = (budget / w) as u32;
                out.push(Monomial::from_exponents(exps.clone()));
            }
            return;
        }
        for a in (0..=budget / w).rev() {
            exps[i] = a as u32;
            self.enumerate(i + 1, budget - a * w, exps, out);
        }
        exps[i] = 0;
    }

    /// `W.p`: every monomial scaled by its quasidegree.
    pub fn euler_apply(&self, p: &Polynomial) -> Polynomial {
        Polynomial::from_terms(
            p.nvars(),
            p.terms()
                .map(|(m, c)| (m.clone(), c * scalar(self.monomial_degree(m)))),
        )
    }

    /// Solves `W.h - p h = g` monomial by monomial.
    pub fn homotopy_solve(&self, p: i64, g: &Polynomial) -> Result<Polynomial, GradingError> {
        self.check_arity(g.nvars())?;
        let mut terms = Vec::with_capacity(g.num_terms());
        for (m, c) in g.terms() {
            let shift = self.monomial_degree(m) - p;
            if shift == 0 {
                return Err(GradingError::Resonance {
                    monomial: m.clone(),
                    p,
                });
            }
            terms.push((m.clone(), c / scalar(shift)));
        }
        Ok(Polynomial::from_terms(g.nvars(), terms))
    }
}

/// Finds the minimal positive integer weights (and degree `N`) making `f`
/// quasihomogeneous, when they are unique.
///
/// Unknowns are `(w_1, ..., w_n, N)`; every monomial contributes the row
/// `a_1 w_1 + ... + a_n w_n - N = 0`. A unique solution means a
/// one-dimensional null space with a strictly positive generator.
pub fn solve_weights(f: &Polynomial) -> Result<(WeightSystem, QuasiDegree), GradingError> {
    let n = f.nvars();
    if n < 3 {
        return Err(GradingError::TooFewVariables(n));
    }
    if f.is_zero() {
        return Err(GradingError::ZeroPolynomial);
    }
    let mut rows: Vec<Vec<BigRational>> = f
        .monomials()
        .map(|m| {
            let mut row: Vec<BigRational> = m.exponents().iter().map(|&a| scalar(a as i64)).collect();
            row.push(scalar(-1));
            row
        })
        .collect();
    let cols = n + 1;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..cols {
                    let t = &rows[r][j] * &factor;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    // a pivot row without free entries pins its unknown to zero
    let forced_zero = rows
        .iter()
        .take(pivots.len())
        .any(|row| free.iter().all(|&c| row[c].is_zero()));
    if forced_zero {
        return Err(GradingError::NoWeights);
    }
    if free.len() != 1 {
        return Err(if free.is_empty() {
            GradingError::NoWeights
        } else {
            GradingError::AmbiguousWeights
        });
    }
    let fc = free[0];
    let mut sol = vec![Scalar::zero(); cols];
    sol[fc] = Scalar::one();
    for (row, &pc) in rows.iter().zip(&pivots) {
        sol[pc] = -row[fc].clone();
    }
    if sol.iter().all(|x| x.is_negative()) {
        sol.iter_mut().for_each(|x| *x = -x.clone());
    }
    if !sol.iter().all(|x| x.is_positive()) {
        return Err(GradingError::NoWeights);
    }
    let den = sol.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = sol.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let ints: Vec<i64> = ints
        .iter()
        .map(|x| (x / &g).to_i64().ok_or(GradingError::NoWeights))
        .collect::<Result<_, _>>()?;
    let weights = ints[..n]
        .iter()
        .map(|&w| u32::try_from(w).map_err(|_| GradingError::NoWeights))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((WeightSystem::new(weights)?, ints[n]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_polynomial, Variables};
    use crate::poly::ratio;

    fn poly(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, &Variables::standard(n).unwrap()).unwrap()
    }

    fn ws(w: &[u32]) -> WeightSystem {
        WeightSystem::new(w.to_vec()).unwrap()
    }

    #[test]
    fn monomial_degrees() {
        let m = Monomial::from_exponents(vec![3, 0, 0]);
        assert_eq!(ws(&[2, 3, 3]).monomial_degree(&m), 6);
        assert_eq!(ws(&[5, 7, 9]).monomial_degree(&Monomial::one(3)), 0);
        let d5 = ws(&[3, 2, 4, 4]);
        assert_eq!(d5.monomial_degree(&Monomial::var(4, 0)), 3);
        assert_eq!(2 * 8 - d5.weight_sum(), 3);
    }

    #[test]
    fn quasidegrees() {
        assert_eq!(ws(&[3, 2, 4, 4]).quasihomogeneous_degree(&poly("x1^2*x2+x2^4+x3^2+x4^2", 4)), Ok(8));
        assert!(matches!(
            ws(&[1, 1, 1]).quasihomogeneous_degree(&poly("x1+x1^2", 3)),
            Err(GradingError::NotQuasihomogeneous { .. })
        ));
        assert_eq!(ws(&[1, 1, 1]).quasihomogeneous_degree(&poly("x1^2+x2^2+x3^2", 3)), Ok(2));
        assert_eq!(
            ws(&[1, 1, 1]).quasihomogeneous_degree(&Polynomial::zero(3)),
            Err(GradingError::ZeroPolynomial)
        );
    }

    #[test]
    fn weight_validation() {
        assert_eq!(WeightSystem::new(vec![1, 0, 2]), Err(GradingError::NonPositiveWeight));
        assert_eq!(WeightSystem::new(vec![1, 2]), Err(GradingError::TooFewVariables(2)));
    }

    #[test]
    fn enumeration_examples() {
        assert!(ws(&[3, 2, 4, 4]).monomials_of_degree(-5).is_empty());
        assert_eq!(ws(&[1, 1, 1]).monomials_of_degree(0), vec![Monomial::one(3)]);
        // brute force: exponent triples with a+b+c = 2
        let brute = (0..=2u32)
            .flat_map(|a| (0..=2u32).flat_map(move |b| (0..=2u32).map(move |c| (a, b, c))))
            .filter(|&(a, b, c)| a + b + c == 2)
            .count();
        assert_eq!(brute, 6);
        assert_eq!(ws(&[1, 1, 1]).monomials_of_degree(2).len(), brute);
        // not representable
        assert!(ws(&[2, 4, 6]).monomials_of_degree(7).is_empty());
    }

    #[test]
    fn euler_field() {
        let f = poly("x1^3+x2^2+x3^2", 3);
        assert_eq!(ws(&[2, 3, 3]).euler_apply(&f), f.scale(&scalar(6)));
        assert!(ws(&[1, 1, 1]).euler_apply(&Polynomial::one(3)).is_zero());
        let g = poly("x1*x2", 4);
        assert_eq!(ws(&[3, 2, 4, 4]).euler_apply(&g), g.scale(&scalar(5)));
    }

    #[test]
    fn homotopy_examples() {
        let w = ws(&[1, 1, 1]);
        assert_eq!(w.homotopy_solve(0, &poly("x1", 3)), Ok(poly("x1", 3)));
        assert_eq!(w.homotopy_solve(1, &poly("x1^3", 3)), Ok(poly("x1^3", 3).scale(&ratio(1, 2))));
        assert!(matches!(
            w.homotopy_solve(2, &poly("x1*x2", 3)),
            Err(GradingError::Resonance { p: 2, .. })
        ));
    }

    #[test]
    fn weights_are_solved_and_minimal() {
        assert_eq!(solve_weights(&poly("x1^3+x2^2+x3^2", 3)), Ok((ws(&[2, 3, 3]), 6)));
        assert_eq!(solve_weights(&poly("x1^2*x2+x2^4+x3^2+x4^2", 4)), Ok((ws(&[3, 2, 4, 4]), 8)));
        assert_eq!(solve_weights(&poly("x1^3+x1*x2^3+x3^2", 3)), Ok((ws(&[6, 4, 9]), 18)));
        assert_eq!(solve_weights(&poly("x1", 3)), Err(GradingError::AmbiguousWeights));
        assert_eq!(solve_weights(&poly("x1+x1^2", 3)), Err(GradingError::NoWeights));
    }
}

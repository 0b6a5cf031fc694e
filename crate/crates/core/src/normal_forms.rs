//! Normal forms of simple germs, the regular model and the non-degenerate
//! quadratic, with their minimal weight systems.
//!
//! ```text
//! A_k : x1^(k+1)     ± x2^2 ± ... ± xn^2      k >= 1
//! D_k : x1^2 x2      ± x2^(k-1) ± x3^2 ± ... ± xn^2   k >= 4
//! E_6 : x1^3 + x2^4  ± x3^2 ± ... ± xn^2
//! E_7 : x1^3 + x1 x2^3 ± x3^2 ± ... ± xn^2
//! E_8 : x1^3 + x2^5  ± x3^2 ± ... ± xn^2
//! ```

use std::fmt;

use crate::error::NormalFormError;
use crate::grading::{solve_weights, QuasiDegree, WeightSystem};
use crate::poly::{scalar, Monomial, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    E,
    Regular,
    NondegenerateQuadratic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityClass {
    family: Family,
    k: u32,
    n: usize,
    signs: Vec<i8>,
}

fn invalid(msg: impl Into<String>) -> NormalFormError {
    NormalFormError::InvalidClass(msg.into())
}

impl SingularityClass {
    /// `signs` covers the `±` terms of the formula; `None` means all `+`.
    pub fn new(family: Family, k: u32, n: usize, signs: Option<Vec<i8>>) -> Result<Self, NormalFormError> {
        if n < 3 {
            return Err(invalid(format!("n = {n}, need at least 3 variables")));
        }
        let ok = match family {
            Family::A => k >= 1,
            Family::D => k >= 4,
            Family::E => (6..=8).contains(&k),
            Family::Regular | Family::NondegenerateQuadratic => true,
        };
        if !ok {
            return Err(invalid(format!("{family:?}{k} is not in the list")));
        }
        let k = match family {
            Family::Regular => 0,
            Family::NondegenerateQuadratic => 1,
            _ => k,
        };
        let tail = Self::tail_len(family, n);
        let signs = signs.unwrap_or_else(|| vec![1; tail]);
        if signs.len() != tail {
            return Err(invalid(format!("expected {tail} signs, got {}", signs.len())));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(invalid("signs must be +1 or -1"));
        }
        Ok(SingularityClass { family, k, n, signs })
    }

    /// Parses `A2`, `D5`, `E7`, `regular` or `quadratic`.
    pub fn parse(name: &str, n: usize, signs: Option<Vec<i8>>) -> Result<Self, NormalFormError> {
        let lower = name.trim().to_ascii_lowercase();
        match lower.as_str() {
            "regular" => return Self::new(Family::Regular, 0, n, signs),
            "quadratic" => return Self::new(Family::NondegenerateQuadratic, 1, n, signs),
            _ => {}
        }
        let family = match lower.chars().next() {
            Some('a') => Family::A,
            Some('d') => Family::D,
            Some('e') => Family::E,
            _ => return Err(invalid(format!("unknown class `{name}`"))),
        };
        let k: u32 = lower[1..].parse().map_err(|_| invalid(format!("unknown class `{name}`")))?;
        Self::new(family, k, n, signs)
    }

    fn tail_len(family: Family, n: usize) -> usize {
        match family {
            Family::Regular => 0,
            Family::E => n - 2,
            _ => n - 1,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Milnor number of the class.
    pub fn milnor_number(&self) -> usize {
        self.k as usize
    }

    pub fn standard_polynomial(&self) -> Result<(Polynomial, WeightSystem, QuasiDegree), NormalFormError> {
        let n = self.n;
        let mono = |exps: &[(usize, u32)]| {
            let mut e = vec![0; n];
            for &(i, a) in exps {
                e[i] = a;
            }
            Monomial::from_exponents(e)
        };
        let mut head: Vec<(usize, u32)> = Vec::new();
        let mut terms: Vec<Monomial> = Vec::new();
        let mut signed: Vec<Monomial> = Vec::new();
        match (self.family, self.k) {
            (Family::Regular, _) => terms.push(mono(&[(0, 1)])),
            (Family::A, k) | (Family::NondegenerateQuadratic, k) => head.push((0, k + 1)),
            (Family::D, k) => {
                terms.push(mono(&[(0, 2), (1, 1)]));
                signed.push(mono(&[(1, k - 1)]));
            }
            (Family::E, 6) => terms.extend([mono(&[(0, 3)]), mono(&[(1, 4)])]),
            (Family::E, 7) => terms.extend([mono(&[(0, 3)]), mono(&[(0, 1), (1, 3)])]),
            (Family::E, _) => terms.extend([mono(&[(0, 3)]), mono(&[(1, 5)])]),
        }
        if !head.is_empty() {
            terms.push(mono(&head));
        }
        let first_square = match self.family {
            Family::Regular => n,
            Family::A | Family::NondegenerateQuadratic => 1,
            Family::D | Family::E => 2,
        };
        signed.extend((first_square..n).map(|i| mono(&[(i, 2)])));
        let f = Polynomial::from_terms(
            n,
            terms
                .into_iter()
                .map(|m| (m, scalar(1)))
                .chain(signed.into_iter().zip(&self.signs).map(|(m, &s)| (m, scalar(s as i64)))),
        );
        if self.family == Family::Regular {
            // x2..xn do not occur, so any weights work for them
            let w = WeightSystem::standard(n).map_err(|e| invalid(e.to_string()))?;
            return Ok((f, w, 1));
        }
        let (w, n_deg) = solve_weights(&f).map_err(|e| invalid(e.to_string()))?;
        Ok((f, w, n_deg))
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A{}", self.k),
            Family::D => write!(f, "D{}", self.k),
            Family::E => write!(f, "E{}", self.k),
            Family::Regular => f.write_str("regular"),
            Family::NondegenerateQuadratic => f.write_str("quadratic"),
        }
    }
}

/// For each `n`, every class of the requested families with index at most
/// `max_k` (default: A1..A6, D4..D6, E6..E8). Families are visited in the
/// order given. `NondegenerateQuadratic` coincides with `A1` and is only
/// produced when requested explicitly.
pub fn catalog_sweep(
    n_range: impl IntoIterator<Item = usize>,
    families: &[Family],
    max_k: Option<u32>,
) -> Vec<SingularityClass> {
    let cap = |default: u32| max_k.map_or(default, |m| m.min(default));
    let mut out = Vec::new();
    for n in n_range {
        for &family in families {
            let ks: Vec<u32> = match family {
                Family::A => (1..=cap(6)).collect(),
                Family::D => (4..=cap(6)).collect(),
                Family::E => (6..=cap(8)).collect(),
                Family::Regular => vec![0],
                Family::NondegenerateQuadratic => vec![1],
            };
            for k in ks {
                if let Ok(c) = SingularityClass::new(family, k, n, None) {
                    out.push(c);
                }
            }
        }
    }
    out
}

pub const ALL_FAMILIES: [Family; 4] = [Family::A, Family::D, Family::E, Family::Regular];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::{milnor_algebra, milnor_number_oracle};
    use crate::parse::{parse_polynomial, Variables};

    fn poly(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, &Variables::standard(n).unwrap()).unwrap()
    }

    #[test]
    fn worked_examples() {
        let (f, w, n) = SingularityClass::parse("A2", 3, None).unwrap().standard_polynomial().unwrap();
        assert_eq!(f, poly("x1^3+x2^2+x3^2", 3));
        assert_eq!((w.weights(), n), (&[2, 3, 3][..], 6));
        let (f, w, n) = SingularityClass::parse("D5", 4, None).unwrap().standard_polynomial().unwrap();
        assert_eq!(f, poly("x1^2*x2+x2^4+x3^2+x4^2", 4));
        assert_eq!((w.weights(), n), (&[3, 2, 4, 4][..], 8));
        let (f, w, n) = SingularityClass::parse("A1", 4, None).unwrap().standard_polynomial().unwrap();
        assert_eq!(f, poly("x1^2+x2^2+x3^2+x4^2", 4));
        assert_eq!((w.weights(), n), (&[1, 1, 1, 1][..], 2));
    }

    #[test]
    fn weights_of_the_list() {
        let cases = [
            ("E6", 3, vec![4, 3, 6], 12),
            ("E7", 3, vec![6, 4, 9], 18),
            ("E8", 3, vec![10, 6, 15], 30),
            ("D4", 3, vec![2, 2, 3], 6),
            ("D6", 4, vec![4, 2, 5, 5], 10),
            ("A3", 3, vec![1, 2, 2], 4),
            ("regular", 3, vec![1, 1, 1], 1),
            ("quadratic", 3, vec![1, 1, 1], 2),
        ];
        for (name, n, w, d) in cases {
            let (_, ws, nd) = SingularityClass::parse(name, n, None).unwrap().standard_polynomial().unwrap();
            assert_eq!((ws.weights().to_vec(), nd), (w, d), "{name}");
        }
    }

    #[test]
    fn signs_are_applied() {
        let c = SingularityClass::parse("D4", 4, Some(vec![-1, 1, -1])).unwrap();
        let (f, _, _) = c.standard_polynomial().unwrap();
        assert_eq!(f, poly("x1^2*x2-1*x2^3+x3^2-1*x4^2", 4));
        let c = SingularityClass::parse("E7", 4, Some(vec![-1, -1])).unwrap();
        assert_eq!(c.standard_polynomial().unwrap().0, poly("x1^3+x1*x2^3-1*x3^2-1*x4^2", 4));
        assert!(SingularityClass::parse("A2", 3, Some(vec![1])).is_err());
        assert!(SingularityClass::parse("A2", 3, Some(vec![1, 2])).is_err());
    }

    #[test]
    fn invalid_names() {
        for bad in ["D3", "E9", "A0", "B2", "A", "regularx"] {
            assert!(SingularityClass::parse(bad, 3, None).is_err(), "{bad}");
        }
        assert!(SingularityClass::parse("A2", 2, None).is_err());
        assert_eq!(SingularityClass::parse("e7", 3, None).unwrap().to_string(), "E7");
    }

    #[test]
    fn sweeps() {
        let a = catalog_sweep([3], &[Family::A], Some(3));
        assert_eq!(a.iter().map(|c| c.to_string()).collect::<Vec<_>>(), ["A1", "A2", "A3"]);
        assert_eq!(catalog_sweep([3, 4], &ALL_FAMILIES, Some(5)).len(), 16);
        assert!(catalog_sweep([3, 4], &[], None).is_empty());
        assert_eq!(catalog_sweep([3], &ALL_FAMILIES, None).len(), 13);
    }

    #[test]
    fn catalog_milnor_numbers() {
        for c in catalog_sweep([3, 4], &ALL_FAMILIES, None) {
            let (f, w, n) = c.standard_polynomial().unwrap();
            assert_eq!(w.quasihomogeneous_degree(&f), Ok(n));
            let a = milnor_algebra(&f, &w).unwrap();
            assert_eq!(a.codimension(), c.milnor_number(), "{c}");
            assert_eq!(milnor_number_oracle(&w, n), num_rational::BigRational::from_integer(c.milnor_number().into()));
        }
    }
}

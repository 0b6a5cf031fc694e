//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are inserted one at a time into a row-echelon structure keyed by
//! leading index. Elimination is fraction-free: `v <- a*v - b*row`, followed
//! by removal of the integer content. Everything runs first on `i128` with
//! checked arithmetic and is redone on `BigInt` if any step overflows, so the
//! result never depends on the fast path.
//!
//! Insertion order is the caller's order and pivots are the leading indices,
//! so every output is deterministic.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sparse vector with strictly increasing indices and no zero entries.
pub type SparseVec<T> = Vec<(u32, T)>;

/// A rational column as produced by operator assembly.
pub type RationalVec = SparseVec<BigRational>;

trait Coeff: Clone + PartialEq + Debug {
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn from_bigint(x: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
    /// `a*x - b*y`, or `None` on overflow.
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn is_one(&self) -> bool;
    fn div_exact(&self, d: &Self) -> Self;
}

impl Coeff for i128 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn from_bigint(x: &BigInt) -> Option<Self> {
        // keep a safety bit so that negation never overflows
        x.to_i128().filter(|v| v.checked_abs().is_some())
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), other.unsigned_abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a as i128
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn div_exact(&self, d: &Self) -> Self {
        *self / *d
    }
}

impl Coeff for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_bigint(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

#[derive(Debug)]
struct Overflow;

/// `a*x - b*y` on sparse vectors.
fn combine<T: Coeff>(a: &T, x: &[(u32, T)], b: &T, y: &[(u32, T)]) -> Result<SparseVec<T>, Overflow> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let zero = T::from_bigint(&BigInt::zero()).unwrap();
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (idx, val) = if take_x {
            let r = (x[i].0, T::mul_sub(a, &x[i].1, b, &zero).ok_or(Overflow)?);
            i += 1;
            r
        } else if take_y {
            let r = (y[j].0, T::mul_sub(a, &zero, b, &y[j].1).ok_or(Overflow)?);
            j += 1;
            r
        } else {
            let r = (x[i].0, T::mul_sub(a, &x[i].1, b, &y[j].1).ok_or(Overflow)?);
            i += 1;
            j += 1;
            r
        };
        if !val.is_zero() {
            out.push((idx, val));
        }
    }
    Ok(out)
}

/// Divides both vectors by the gcd of all their entries.
fn remove_content<T: Coeff>(v: &mut SparseVec<T>, combo: &mut SparseVec<T>) {
    let mut g: Option<T> = None;
    for (_, c) in v.iter().chain(combo.iter()) {
        g = Some(match g {
            None => c.gcd(c),
            Some(g) => g.gcd(c),
        });
        if g.as_ref().is_some_and(T::is_one) {
            return;
        }
    }
    if let Some(g) = g {
        if !g.is_zero() {
            v.iter_mut().for_each(|(_, c)| *c = c.div_exact(&g));
            combo.iter_mut().for_each(|(_, c)| *c = c.div_exact(&g));
        }
    }
}

struct Row<T> {
    vec: SparseVec<T>,
    combo: SparseVec<T>,
}

/// Row echelon form with optional bookkeeping of how each row arose from
/// the inserted vectors.
struct Echelon<T> {
    rows: Vec<Row<T>>,
    pivots: HashMap<u32, usize>,
    track: bool,
}

enum Inserted<T> {
    Independent,
    /// The tracked combination that reduced to zero.
    Dependent(SparseVec<T>),
}

impl<T: Coeff> Echelon<T> {
    fn new(track: bool) -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: HashMap::new(),
            track,
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: SparseVec<T>, mut combo: SparseVec<T>) -> Result<(SparseVec<T>, SparseVec<T>), Overflow> {
        while let Some((lead, b)) = v.first().cloned() {
            let Some(&r) = self.pivots.get(&lead) else {
                break;
            };
            let row = &self.rows[r];
            let a = &row.vec[0].1;
            v = combine(a, &v, &b, &row.vec)?;
            if self.track {
                combo = combine(a, &combo, &b, &row.combo)?;
            }
            remove_content(&mut v, &mut combo);
        }
        Ok((v, combo))
    }

    fn insert(&mut self, v: SparseVec<T>, combo: SparseVec<T>) -> Result<Inserted<T>, Overflow> {
        let (mut v, mut combo) = self.reduce(v, combo)?;
        if v.is_empty() {
            return Ok(Inserted::Dependent(combo));
        }
        if v[0].1.is_negative() {
            v.iter_mut().for_each(|(_, c)| *c = c.neg());
            combo.iter_mut().for_each(|(_, c)| *c = c.neg());
        }
        self.pivots.insert(v[0].0, self.rows.len());
        self.rows.push(Row { vec: v, combo });
        Ok(Inserted::Independent)
    }
}

/// Columns scaled to coprime integers, with the scale used for each.
struct IntegerColumns {
    cols: Vec<SparseVec<BigInt>>,
    scales: Vec<BigInt>,
}

fn integerize(cols: &[RationalVec]) -> IntegerColumns {
    let mut out = Vec::with_capacity(cols.len());
    let mut scales = Vec::with_capacity(cols.len());
    for col in cols {
        let den = col.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        out.push(
            col.iter()
                .map(|(i, c)| (*i, c.numer() * (&den / c.denom())))
                .collect(),
        );
        scales.push(den);
    }
    IntegerColumns { cols: out, scales }
}

fn convert<T: Coeff>(v: &[(u32, BigInt)]) -> Result<SparseVec<T>, Overflow> {
    v.iter()
        .map(|(i, c)| T::from_bigint(c).map(|c| (*i, c)).ok_or(Overflow))
        .collect()
}

fn unit<T: Coeff>(i: u32) -> SparseVec<T> {
    vec![(i, T::from_bigint(&BigInt::one()).unwrap())]
}

/// Runs `body` on `i128`, falling back to `BigInt` on overflow.
macro_rules! with_fallback {
    ($body:ident ( $($arg:expr),* )) => {
        match $body::<i128>($($arg),*) {
            Ok(r) => r,
            Err(Overflow) => $body::<BigInt>($($arg),*).expect("BigInt arithmetic cannot overflow"),
        }
    };
}

fn rank_impl<T: Coeff>(cols: &IntegerColumns) -> Result<usize, Overflow> {
    let mut ech = Echelon::<T>::new(false);
    for c in &cols.cols {
        ech.insert(convert(c)?, Vec::new())?;
    }
    Ok(ech.rank())
}

/// Rank of the span of `cols`.
pub fn rank(cols: &[RationalVec]) -> usize {
    let ints = integerize(cols);
    with_fallback!(rank_impl(&ints))
}

fn leading_impl<T: Coeff>(cols: &IntegerColumns) -> Result<Vec<u32>, Overflow> {
    let mut ech = Echelon::<T>::new(false);
    for c in &cols.cols {
        ech.insert(convert(c)?, Vec::new())?;
    }
    let mut lead: Vec<u32> = ech.pivots.keys().copied().collect();
    lead.sort_unstable();
    Ok(lead)
}

/// The sorted set `{min index of v : v in span(cols), v != 0}`. It depends
/// only on the span, not on the order of `cols`.
pub fn leading_indices(cols: &[RationalVec]) -> Vec<u32> {
    let ints = integerize(cols);
    with_fallback!(leading_impl(&ints))
}

fn kernel_impl<T: Coeff>(cols: &IntegerColumns) -> Result<Vec<SparseVec<BigInt>>, Overflow> {
    let mut ech = Echelon::<T>::new(true);
    let mut out = Vec::new();
    for (j, c) in cols.cols.iter().enumerate() {
        if let Inserted::Dependent(combo) = ech.insert(convert(c)?, unit(j as u32))? {
            out.push(combo.iter().map(|(i, c)| (*i, c.to_bigint())).collect());
        }
    }
    Ok(out)
}

/// A basis of `{x : sum_j x_j cols[j] = 0}`, one vector per dependent column.
pub fn kernel(cols: &[RationalVec]) -> Vec<RationalVec> {
    let ints = integerize(cols);
    let raw = with_fallback!(kernel_impl(&ints));
    raw.into_iter()
        .map(|v| {
            let mut v: RationalVec = v
                .into_iter()
                .map(|(i, c)| (i, BigRational::from_integer(c * &ints.scales[i as usize])))
                .collect();
            normalize_rational(&mut v);
            v
        })
        .collect()
}

fn extend_impl<T: Coeff>(base: &IntegerColumns, candidates: &IntegerColumns) -> Result<Vec<usize>, Overflow> {
    let mut ech = Echelon::<T>::new(false);
    for c in &base.cols {
        ech.insert(convert(c)?, Vec::new())?;
    }
    let mut picked = Vec::new();
    for (j, c) in candidates.cols.iter().enumerate() {
        if let Inserted::Independent = ech.insert(convert(c)?, Vec::new())? {
            picked.push(j);
        }
    }
    Ok(picked)
}

/// Greedily picks the candidates (in order) that enlarge the span of
/// `base` plus the candidates already picked.
pub fn extend_span(base: &[RationalVec], candidates: &[RationalVec]) -> Vec<usize> {
    let b = integerize(base);
    let c = integerize(candidates);
    with_fallback!(extend_impl(&b, &c))
}

fn solve_impl<T: Coeff>(cols: &IntegerColumns, rhs: &[(u32, BigInt)]) -> Result<Option<SparseVec<BigInt>>, Overflow> {
    let mut ech = Echelon::<T>::new(true);
    for (j, c) in cols.cols.iter().enumerate() {
        ech.insert(convert(c)?, unit(j as u32))?;
    }
    let tag = cols.cols.len() as u32;
    let (rest, combo) = ech.reduce(convert(rhs)?, unit(tag))?;
    if !rest.is_empty() {
        return Ok(None);
    }
    Ok(Some(combo.iter().map(|(i, c)| (*i, c.to_bigint())).collect()))
}

/// Some `x` with `sum_j x_j cols[j] = rhs`, or `None` if `rhs` is outside the span.
pub fn solve(cols: &[RationalVec], rhs: &RationalVec) -> Option<RationalVec> {
    let ints = integerize(cols);
    let den = rhs.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let rhs_int: SparseVec<BigInt> = rhs
        .iter()
        .map(|(i, c)| (*i, c.numer() * (&den / c.denom())))
        .collect();
    let combo = with_fallback!(solve_impl(&ints, &rhs_int))?;
    // combo encodes  c_b * rhs_int + sum_j c_j * col_j = 0
    let tag = ints.cols.len() as u32;
    let cb = combo
        .iter()
        .find(|(i, _)| *i == tag)
        .map(|(_, c)| c.clone())
        .expect("rhs coefficient is always present");
    let denom = cb * &den;
    Some(
        combo
            .into_iter()
            .filter(|(i, _)| *i != tag)
            .map(|(i, c)| (i, BigRational::new(-c * &ints.scales[i as usize], denom.clone())))
            .collect(),
    )
}

/// Scales so that the leading coefficient is one.
fn normalize_rational(v: &mut RationalVec) {
    if let Some((_, lead)) = v.first().cloned() {
        v.iter_mut().for_each(|(_, c)| *c = &*c / &lead);
    }
}

/// `sum_j x_j cols[j]`, used by tests and certificates.
pub fn apply(cols: &[RationalVec], x: &RationalVec) -> RationalVec {
    let mut acc: std::collections::BTreeMap<u32, BigRational> = Default::default();
    for (j, xj) in x {
        for (i, a) in &cols[*j as usize] {
            *acc.entry(*i).or_insert_with(BigRational::zero) += a * xj;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

//! Exact detection of constant-coefficient linear recurrences in finite
//! windows of rational sequences, and the closure of recurrences under
//! term-wise sum and product.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{determinant, solve};
use crate::rational::{int, Rational};

/// A finite window `a_offset, a_{offset+1}, ...` of a bi-infinite sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSequence {
    values: Vec<Rational>,
    offset: i64,
}

impl RationalSequence {
    pub fn new(values: Vec<Rational>, offset: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateInput("empty sequence".into()));
        }
        Ok(RationalSequence { values, offset })
    }

    pub fn from_integers(values: &[i64]) -> Self {
        RationalSequence { values: values.iter().map(|&v| int(v)).collect(), offset: 0 }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first_time(&self) -> i64 {
        self.offset
    }

    pub fn last_time(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    pub fn at(&self, t: i64) -> Result<&Rational> {
        if t < self.first_time() || t > self.last_time() {
            return Err(Error::IndexOutOfWindow {
                index: t,
                first: self.first_time(),
                last: self.last_time(),
            });
        }
        Ok(&self.values[(t - self.offset) as usize])
    }

    pub fn scaled(&self, c: &Rational) -> RationalSequence {
        RationalSequence {
            values: self.values.iter().map(|v| v * c).collect(),
            offset: self.offset,
        }
    }
}

/// Determinant of the `k x k` Toeplitz matrix `m[i][j] = a_{ℓ+i-j}`,
/// `1 <= i, j <= k`.
pub fn toeplitz_det(seq: &RationalSequence, ell: i64, k: usize) -> Result<Rational> {
    let k = k as i64;
    let rows = (1..=k)
        .map(|i| (1..=k).map(|j| seq.at(ell + i - j).cloned()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(determinant(&rows))
}

/// Every `ℓ` for which the `k x k` Toeplitz matrix fits in the window.
pub fn toeplitz_range(seq: &RationalSequence, k: usize) -> std::ops::RangeInclusive<i64> {
    let k = k as i64;
    (seq.first_time() + k - 1)..=(seq.last_time() - k + 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecurrenceReport {
    /// `a_n = Σ c_i a_{n-i}` holds at every `n` in `window` whose
    /// predecessors are also in the window.
    Found {
        order: usize,
        coefficients: Vec<Rational>,
        window: (i64, i64),
    },
    NoneUpTo {
        k_max: usize,
        window: (i64, i64),
    },
    InsufficientData {
        needed: usize,
        available: usize,
    },
}

impl RecurrenceReport {
    pub fn order(&self) -> Option<usize> {
        match self {
            RecurrenceReport::Found { order, .. } => Some(*order),
            _ => None,
        }
    }

    pub fn coefficients(&self) -> Option<&[Rational]> {
        match self {
            RecurrenceReport::Found { coefficients, .. } => Some(coefficients),
            _ => None,
        }
    }

    pub fn char_poly(&self) -> Option<CharPoly> {
        self.coefficients().map(CharPoly::from_recurrence)
    }

    pub fn status(&self) -> &'static str {
        match self {
            RecurrenceReport::Found { .. } => "found",
            RecurrenceReport::NoneUpTo { .. } => "none_up_to",
            RecurrenceReport::InsufficientData { .. } => "insufficient_data",
        }
    }
}

/// Terms needed for a verdict with the given `k_max`.
pub fn window_needed(k_max: usize) -> usize {
    2 * k_max + 4
}

/// True iff `a_n = Σ c_i a_{n-i}` at every position of the window that has
/// `c.len()` predecessors.
pub fn satisfies(values: &[Rational], coefficients: &[Rational]) -> bool {
    let k = coefficients.len();
    (k..values.len()).all(|n| {
        let rhs = coefficients
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, c)| acc + c * &values[n - 1 - i]);
        rhs == values[n]
    })
}

/// Smallest order `k <= k_max` admitting rational coefficients that reproduce
/// the entire window.
pub fn minimal_order(seq: &RationalSequence, k_max: usize) -> RecurrenceReport {
    let needed = window_needed(k_max);
    let available = seq.len();
    if available < needed {
        return RecurrenceReport::InsufficientData { needed, available };
    }
    let a = seq.values();
    let window = (seq.first_time(), seq.last_time());
    for k in 1..=k_max {
        let rows: Vec<Vec<Rational>> =
            (k..a.len()).map(|n| (1..=k).map(|i| a[n - i].clone()).collect()).collect();
        let rhs: Vec<Rational> = a[k..].to_vec();
        if let Some(coefficients) = solve(&rows, &rhs) {
            debug_assert!(satisfies(a, &coefficients));
            return RecurrenceReport::Found { order: k, coefficients, window };
        }
    }
    RecurrenceReport::NoneUpTo { k_max, window }
}

/// Monic polynomial with rational coefficients, stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Sum,
    Product,
}

impl CharPoly {
    /// Monic polynomial from low-to-high coefficients; the leading one is
    /// implied and must not be included.
    pub fn from_low_coeffs(low: &[Rational]) -> Self {
        let mut coeffs = low.to_vec();
        coeffs.push(Rational::one());
        CharPoly { coeffs }
    }

    /// `t^k - c_1 t^{k-1} - ... - c_k`.
    pub fn from_recurrence(c: &[Rational]) -> Self {
        let k = c.len();
        let mut coeffs = vec![Rational::zero(); k + 1];
        for (i, ci) in c.iter().enumerate() {
            coeffs[k - 1 - i] = -ci.clone();
        }
        coeffs[k] = Rational::one();
        CharPoly { coeffs }
    }

    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut coeffs = vec![Rational::one()];
        for r in roots {
            coeffs = poly_mul(&coeffs, &[-r.clone(), Rational::one()]);
        }
        CharPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Recurrence coefficients `c_1..c_k`.
    pub fn recurrence(&self) -> Vec<Rational> {
        let k = self.degree();
        (1..=k).map(|i| -self.coeffs[k - i].clone()).collect()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Drops leading zeros; the zero polynomial is `[0]`.
fn trim(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    if a.is_empty() {
        a.push(Rational::zero());
    }
    a
}

fn derivative(a: &[Rational]) -> Vec<Rational> {
    if a.len() <= 1 {
        return vec![Rational::zero()];
    }
    a.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect()
}

/// Quotient and remainder of `a / b`, `b` nonzero.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = trim(a.to_vec());
    if rem.len() <= db {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() > db && !(rem.len() == 1 && rem[0].is_zero()) {
        let shift = rem.len() - 1 - db;
        let f = rem.last().expect("nonempty") / &lead;
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] -= &f * c;
        }
        quot[shift] = f;
        rem.pop();
        rem = trim(rem);
    }
    (quot, rem)
}

/// Monic gcd.
fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !(y.len() == 1 && y[0].is_zero()) {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().expect("nonempty").clone();
    x.iter().map(|c| c / &lead).collect()
}

fn is_squarefree(a: &[Rational]) -> bool {
    poly_gcd(a, &derivative(a)).len() == 1
}

/// Resultant of `p` (monic, degree `p.len()-1`) and `g` taken with formal
/// degree `g.len()-1`; both low-to-high.
fn resultant(p: &[Rational], g: &[Rational]) -> Rational {
    let dp = p.len() - 1;
    let dg = g.len() - 1;
    let size = dp + dg;
    if size == 0 {
        return Rational::one();
    }
    let mut syl = vec![vec![Rational::zero(); size]; size];
    for i in 0..dg {
        for (l, c) in p.iter().rev().enumerate() {
            syl[i][i + l] = c.clone();
        }
    }
    for i in 0..dp {
        for (l, c) in g.iter().rev().enumerate() {
            syl[dg + i][i + l] = c.clone();
        }
    }
    determinant(&syl)
}

/// Newton interpolation through `(x_i, y_i)`, returned low-to-high.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut poly = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        poly = poly_mul(&poly, &[-xs[i].clone(), Rational::one()]);
        poly[0] += &dd[i];
    }
    poly
}

/// Characteristic polynomial of the term-wise sum (`P·Q`) or term-wise
/// product of two sequences with polynomials `p`, `q`.
///
/// The product polynomial has the roots `x_i y_j`. When `p` and `q` are both
/// squarefree each distinct product is kept once. Otherwise the full
/// resultant is returned, whose multiplicities `m_i·m_j` cover the
/// `m_i + m_j - 1` that polynomial-times-exponential terms need.
pub fn combine(p: &CharPoly, q: &CharPoly, mode: CombineMode) -> Result<CharPoly> {
    if p.degree() == 0 || q.degree() == 0 {
        return Err(Error::DegenerateInput("zero-degree characteristic polynomial".into()));
    }
    match mode {
        CombineMode::Sum => Ok(CharPoly { coeffs: poly_mul(&p.coeffs, &q.coeffs) }),
        CombineMode::Product => {
            // R(t) = Res_x(P(x), x^deg Q · Q(t/x)), sampled at deg P · deg Q + 1
            // points and interpolated.
            let dq = q.degree();
            let deg = p.degree() * dq;
            let xs: Vec<Rational> = (0..=deg as i64).map(int).collect();
            let ys: Vec<Rational> = xs
                .iter()
                .map(|t| {
                    let mut tk = Rational::one();
                    let mut g = vec![Rational::zero(); dq + 1];
                    for (k, qk) in q.coeffs.iter().enumerate() {
                        g[dq - k] = qk * &tk;
                        tk *= t;
                    }
                    resultant(&p.coeffs, &g)
                })
                .collect();
            let mut coeffs = interpolate(&xs, &ys);
            coeffs.truncate(deg + 1);
            debug_assert!(coeffs[deg].is_one());
            if is_squarefree(&p.coeffs) && is_squarefree(&q.coeffs) {
                let g = poly_gcd(&coeffs, &derivative(&coeffs));
                coeffs = poly_divmod(&coeffs, &g).0;
            }
            Ok(CharPoly { coeffs })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn fib(n: usize) -> Vec<i64> {
        let mut f = vec![1i64, 1];
        while f.len() < n {
            let k = f.len();
            f.push(f[k - 1] + f[k - 2]);
        }
        f
    }

    #[test]
    fn fibonacci_toeplitz_three_vanishes() {
        let s = RationalSequence::from_integers(&fib(30));
        for ell in toeplitz_range(&s, 3) {
            assert!(toeplitz_det(&s, ell, 3).unwrap().is_zero());
        }
        assert!(toeplitz_range(&s, 2).any(|ell| !toeplitz_det(&s, ell, 2).unwrap().is_zero()));
    }

    #[test]
    fn toeplitz_k1_is_entry_and_bounds_checked() {
        let s = RationalSequence::from_integers(&[4, 5, 6]);
        assert_eq!(toeplitz_det(&s, 1, 1).unwrap(), int(5));
        assert!(matches!(toeplitz_det(&s, 0, 2), Err(Error::IndexOutOfWindow { index: -1, .. })));
    }

    #[test]
    fn fibonacci_order_two() {
        let s = RationalSequence::from_integers(&fib(30));
        let r = minimal_order(&s, 5);
        assert_eq!(r.order(), Some(2));
        assert_eq!(r.coefficients().unwrap(), &[int(1), int(1)]);
    }

    #[test]
    fn constant_is_order_one() {
        let s = RationalSequence::from_integers(&[5; 12]);
        let r = minimal_order(&s, 4);
        assert_eq!(r.order(), Some(1));
        assert_eq!(r.coefficients().unwrap(), &[int(1)]);
    }

    #[test]
    fn short_window_is_insufficient() {
        let s = RationalSequence::from_integers(&fib(10));
        assert_eq!(
            minimal_order(&s, 4),
            RecurrenceReport::InsufficientData { needed: 12, available: 10 }
        );
    }

    #[test]
    fn harmonic_is_not_linearizable_in_window() {
        let v: Vec<Rational> = (1..=20).map(|n| ratio(1, n)).collect();
        let s = RationalSequence::new(v, 1).unwrap();
        assert!(matches!(minimal_order(&s, 8), RecurrenceReport::NoneUpTo { k_max: 8, .. }));
    }

    #[test]
    fn char_poly_round_trip() {
        let c = vec![int(5), int(-6)];
        let p = CharPoly::from_recurrence(&c);
        assert_eq!(p.coeffs(), &[int(6), int(-5), int(1)]);
        assert_eq!(p.recurrence(), c);
        assert!(p.eval(&int(2)).is_zero());
    }

    #[test]
    fn repeated_roots_keep_full_resultant() {
        // n and n: the product n^2 needs (t - 1)^3; the resultant gives (t - 1)^4.
        let p = CharPoly::from_roots(&[int(1), int(1)]);
        let r = combine(&p, &p, CombineMode::Product).unwrap();
        assert_eq!(r, CharPoly::from_roots(&vec![int(1); 4]));
        let sq: Vec<Rational> = (0..12).map(|n| int(n * n)).collect();
        assert!(satisfies(&sq, &r.recurrence()));
    }

    #[test]
    fn polynomial_division_helpers() {
        let a = CharPoly::from_roots(&[int(2), int(2), int(3)]);
        let g = poly_gcd(a.coeffs(), &derivative(a.coeffs()));
        assert_eq!(g, vec![int(-2), int(1)]);
        assert!(!is_squarefree(a.coeffs()));
        let (q, r) = poly_divmod(a.coeffs(), &g);
        assert_eq!(trim(r), vec![int(0)]);
        assert_eq!(q, CharPoly::from_roots(&[int(2), int(3)]).coeffs());
    }

    #[test]
    fn fibonacci_squared_polynomial() {
        let f = CharPoly::from_recurrence(&[int(1), int(1)]);
        let r = combine(&f, &f, CombineMode::Product).unwrap();
        // Roots phi^2, psi^2 and phi*psi = -1 (kept once).
        assert_eq!(r.coeffs(), &[int(1), int(-2), int(-2), int(1)]);
        let sq: Vec<Rational> = fib(30).iter().map(|&x| int(x * x)).collect();
        assert!(satisfies(&sq, &r.recurrence()));
    }

    #[test]
    fn product_with_constant_is_identity() {
        let p = CharPoly::from_recurrence(&[int(3), ratio(-1, 2), int(7)]);
        let one = CharPoly::from_roots(&[int(1)]);
        assert_eq!(combine(&p, &one, CombineMode::Product).unwrap(), p);
    }

    #[test]
    fn sum_of_geometric_sequences() {
        let p = CharPoly::from_roots(&[int(2)]);
        let q = CharPoly::from_roots(&[int(3)]);
        let r = combine(&p, &q, CombineMode::Sum).unwrap();
        assert_eq!(r.recurrence(), vec![int(5), int(-6)]);
        let seq: Vec<Rational> = (0..10u32).map(|n| int(2i64.pow(n) + 3i64.pow(n))).collect();
        assert!(satisfies(&seq, &r.recurrence()));
    }

    #[test]
    fn zero_degree_rejected() {
        let p = CharPoly::from_recurrence(&[]);
        let q = CharPoly::from_roots(&[int(1)]);
        assert!(combine(&p, &q, CombineMode::Sum).is_err());
    }

    #[test]
    fn product_roots_are_pairwise_products() {
        let p = CharPoly::from_roots(&[int(2), int(-1)]);
        let q = CharPoly::from_roots(&[int(3), ratio(1, 2)]);
        let r = combine(&p, &q, CombineMode::Product).unwrap();
        let expect = CharPoly::from_roots(&[int(6), int(1), int(-3), ratio(-1, 2)]);
        assert_eq!(r, expect);
    }
}

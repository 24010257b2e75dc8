//! Exact arithmetic over ℚ and a single quadratic field ℚ(√d), integer
//! kernels of small rational relations, and rational recognition of floats.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mp::{Complex, Real};

pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements live in different quadratic fields (d = {0} and d = {1})")]
    MismatchedField(i64, i64),
    #[error("{0} is not a squarefree integer different from 0 and 1")]
    NotSquarefree(i64),
    #[error("input is not a finite number")]
    NonFinite,
    #[error("integer entry does not fit in 64 bits")]
    Overflow,
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Writes a nonzero integer as `f² · m` with `m` squarefree (sign kept in `m`).
pub fn squarefree_decomposition(n: i64) -> (i64, i64) {
    assert!(n != 0, "zero has no squarefree part");
    let mut f = 1i64;
    let mut m = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            f *= p as i64;
        }
        p += 1;
    }
    (f, n.signum() * m as i64)
}

/// Exact square root of a perfect square, `None` otherwise.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a nonnegative rational when it exists.
pub fn rational_sqrt(q: &Rat) -> Option<Rat> {
    let num = exact_isqrt(q.numer())?;
    let den = exact_isqrt(q.denom())?;
    Some(Rat::new(num, den))
}

/// `a + b√d` with rational `a`, `b` and squarefree `d` (negative allowed).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: Rat,
    pub b: Rat,
    pub d: i64,
}

impl QuadElem {
    pub fn new(a: Rat, b: Rat, d: i64) -> Result<Self, ExactError> {
        if !is_squarefree(d) {
            return Err(ExactError::NotSquarefree(d));
        }
        Ok(QuadElem { a, b, d })
    }

    /// A rational number viewed inside ℚ(√d).
    pub fn rational(a: Rat, d: i64) -> Self {
        QuadElem { a, b: Rat::zero(), d }
    }

    pub fn from_int(n: i64, d: i64) -> Self {
        QuadElem::rational(rat_int(n), d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_field(&self, other: &Self) -> Result<i64, ExactError> {
        if self.d == other.d || other.b.is_zero() {
            Ok(self.d)
        } else if self.b.is_zero() {
            Ok(other.d)
        } else {
            Err(ExactError::MismatchedField(self.d, other.d))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_field(other)?;
        Ok(QuadElem { a: &self.a + &other.a, b: &self.b + &other.b, d })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QuadElem { a: -&self.a, b: -&self.b, d: self.d }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        let d = self.common_field(other)?;
        let dr = rat_int(d);
        Ok(QuadElem {
            a: &self.a * &other.a + &self.b * &other.b * dr,
            b: &self.a * &other.b + &self.b * &other.a,
            d,
        })
    }

    pub fn conj(&self) -> Self {
        QuadElem { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// `u · conj(u) = a² − d·b²`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(self.d) * &self.b * &self.b
    }

    /// Field trace `u + conj(u) = 2a`.
    pub fn trace(&self) -> Rat {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadElem { a: &self.a / &n, b: -&self.b / &n, d: self.d })
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        self.mul(&other.inv()?)
    }

    /// Value in ℂ at the given binary precision (`√d = i√|d|` for `d < 0`).
    pub fn to_complex(&self, prec: usize) -> Complex {
        let a = Real::from_rational(&self.a, prec);
        let b = Real::from_rational(&self.b, prec);
        let root = Real::from_i64(self.d.abs(), prec).sqrt();
        if self.d < 0 {
            Complex::new(a, b * root)
        } else {
            Complex::from_real(a + b * root)
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let root = (self.d.abs() as f64).sqrt();
        if self.d < 0 {
            Complex64::new(a, b * root)
        } else {
            Complex64::new(a + b * root, 0.0)
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = if self.d < 0 { format!("√({})", self.d) } else { format!("√{}", self.d) };
        let mag = self.b.abs();
        let term = if mag.is_one() { root } else { format!("{mag}·{root}") };
        let neg = self.b.is_negative();
        match (self.a.is_zero(), neg) {
            (true, false) => write!(f, "{term}"),
            (true, true) => write!(f, "-{term}"),
            (false, false) => write!(f, "{} + {term}", self.a),
            (false, true) => write!(f, "{} - {term}", self.a),
        }
    }
}

/// Integer triple `(b, c, d)` of the relation `c·s + 2d·x − b = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Triple {
    pub fn new(b: i64, c: i64, d: i64) -> Self {
        Triple { b, c, d }
    }

    pub fn is_zero(&self) -> bool {
        self.b == 0 && self.c == 0 && self.d == 0
    }

    pub fn content(&self) -> i64 {
        self.b.gcd(&self.c).gcd(&self.d)
    }

    /// Content-reduced with `c > 0`, or `d > 0` when `c = 0`.
    pub fn primitive(&self) -> Triple {
        let g = self.content();
        if g == 0 {
            return *self;
        }
        let t = Triple::new(self.b / g, self.c / g, self.d / g);
        if t.c < 0 || (t.c == 0 && t.d < 0) || (t.c == 0 && t.d == 0 && t.b < 0) {
            t.neg()
        } else {
            t
        }
    }

    pub fn neg(&self) -> Triple {
        Triple::new(-self.b, -self.c, -self.d)
    }

    /// `d² + bc`, which is `|cτ̄ + d|²` for any τ satisfying the relation.
    pub fn abs_sq(&self) -> i64 {
        self.d * self.d + self.b * self.c
    }

    /// Evaluates `c·s + 2d·x − b`.
    pub fn residual(&self, x: f64, s: f64) -> f64 {
        self.c as f64 * s + 2.0 * self.d as f64 * x - self.b as f64
    }

    fn to_vec(self) -> Vec<BigInt> {
        vec![self.b.into(), self.c.into(), self.d.into()]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.b, self.c, self.d)
    }
}

/// A reduced basis of the integer solutions of one relation on triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntKernelBasis {
    pub rank: usize,
    pub rows: Vec<Triple>,
}

impl IntKernelBasis {
    pub fn empty() -> Self {
        IntKernelBasis { rank: 0, rows: Vec::new() }
    }

    /// Canonical basis of the lattice spanned by `rows`.
    pub fn from_rows(rows: &[Triple]) -> Result<Self, ExactError> {
        let vecs: Vec<Vec<BigInt>> = rows.iter().map(|t| t.to_vec()).collect();
        let reduced = canonical_rows(vecs, &TRIPLE_PIVOT_ORDER);
        let rows = reduced
            .into_iter()
            .map(|v| {
                let f = |x: &BigInt| x.to_i64().ok_or(ExactError::Overflow);
                Ok(Triple::new(f(&v[0])?, f(&v[1])?, f(&v[2])?))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntKernelBasis { rank: rows.len(), rows })
    }

    /// Whether an integer triple lies in the ℤ-span of the basis.
    pub fn contains(&self, t: &Triple) -> bool {
        let mut rows: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.to_vec()).collect();
        rows.push(t.to_vec());
        let before = canonical_rows(self.rows.iter().map(|r| r.to_vec()).collect(), &TRIPLE_PIVOT_ORDER);
        canonical_rows(rows, &TRIPLE_PIVOT_ORDER) == before
    }
}

// Pivots on c, then d, then b: rank-2 bases come out as the (c, d) unit
// directions whenever those are integral.
const TRIPLE_PIVOT_ORDER: [usize; 3] = [1, 2, 0];

/// Row Hermite normal form with pivots taken in `order`; zero rows dropped,
/// pivots positive, entries above each pivot reduced into `[0, pivot)`.
fn canonical_rows(mut rows: Vec<Vec<BigInt>>, order: &[usize]) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for &col in order {
        loop {
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            let mut nonzero: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            nonzero.sort_by_key(|&i| rows[i][col].abs());
            let p = nonzero[0];
            if nonzero.len() == 1 {
                let mut row = rows.swap_remove(p);
                if row[col].is_negative() {
                    row.iter_mut().for_each(|x| *x = -x.clone());
                }
                out.push(row);
                pivots.push(col);
                break;
            }
            let piv = rows[p].clone();
            for &i in &nonzero[1..] {
                let q = rows[i][col].div_floor(&piv[col]);
                for k in 0..piv.len() {
                    let sub = &q * &piv[k];
                    rows[i][k] -= sub;
                }
            }
        }
    }
    for i in 0..out.len() {
        let col = pivots[i];
        let pv = out[i][col].clone();
        for j in 0..i {
            let q = out[j][col].div_floor(&pv);
            if !q.is_zero() {
                let row_i = out[i].clone();
                for k in 0..row_i.len() {
                    out[j][k] -= &q * &row_i[k];
                }
            }
        }
    }
    out
}

/// Basis of `{n ∈ ℤ^k : A·n = 0}` for an integer matrix `A` with `k` columns.
fn integer_nullspace(a: &[Vec<BigInt>], k: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    // columns of `u` track the unimodular column operations applied to `m`
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut piv = 0usize;
    for r in 0..m.len() {
        if piv >= k {
            break;
        }
        loop {
            let nz: Vec<usize> = (piv..k).filter(|&j| !m[r][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let &jmin = nz.iter().min_by_key(|&&j| m[r][j].abs()).unwrap();
            swap_cols(&mut m, &mut u, piv, jmin);
            let mut done = true;
            for j in piv + 1..k {
                if m[r][j].is_zero() {
                    continue;
                }
                let q = m[r][j].div_floor(&m[r][piv]);
                col_axpy(&mut m, &mut u, j, piv, &q);
                if !m[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                piv += 1;
                break;
            }
        }
    }
    (piv..k).map(|j| (0..k).map(|i| u[i][j].clone()).collect()).collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut().chain(u.iter_mut()) {
        row.swap(a, b);
    }
}

/// column `dst` -= q · column `src`
fn col_axpy(m: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut().chain(u.iter_mut()) {
        let t = q * &row[src];
        row[dst] -= t;
    }
}

fn lcm_of_denominators<'a>(qs: impl Iterator<Item = &'a Rat>) -> BigInt {
    qs.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Integer solutions `(n₀, n₁, n₂)` of `n₀·u₀ + n₁·u₁ + n₂·u₂ = 0` for
/// coefficients in ℚ or one common quadratic field.
pub fn integer_kernel(coeffs: &[QuadElem; 3]) -> Result<IntKernelBasis, ExactError> {
    let mut field: Option<i64> = None;
    for c in coeffs.iter().filter(|c| !c.b.is_zero()) {
        match field {
            Some(d) if d != c.d => return Err(ExactError::MismatchedField(d, c.d)),
            _ => field = Some(c.d),
        }
    }
    let rational_row: Vec<&Rat> = coeffs.iter().map(|c| &c.a).collect();
    let irrational_row: Vec<&Rat> = coeffs.iter().map(|c| &c.b).collect();
    let mut matrix = Vec::new();
    for row in [rational_row, irrational_row] {
        if row.iter().all(|q| q.is_zero()) {
            continue;
        }
        let den = lcm_of_denominators(row.iter().copied());
        matrix.push(row.iter().map(|q| (*q * Rat::from_integer(den.clone())).to_integer()).collect::<Vec<_>>());
    }
    let kernel = integer_nullspace(&matrix, 3);
    let reduced = canonical_rows(kernel, &TRIPLE_PIVOT_ORDER);
    let rows = reduced
        .into_iter()
        .map(|v| {
            let f = |x: &BigInt| x.to_i64().ok_or(ExactError::Overflow);
            Ok(Triple::new(f(&v[0])?, f(&v[1])?, f(&v[2])?))
        })
        .collect::<Result<Vec<_>, ExactError>>()?;
    Ok(IntKernelBasis { rank: rows.len(), rows })
}

/// Kernel of `−b + c·s + d·(2x) = 0` over ℤ³.
pub fn relation_kernel(s: &QuadElem, two_x: &QuadElem) -> Result<IntKernelBasis, ExactError> {
    let minus_one = QuadElem::from_int(-1, s.d);
    integer_kernel(&[minus_one, s.clone(), two_x.clone()])
}

/// Continued-fraction recognition of a float as `p/q` with `q ≤ max_height`.
///
/// Heuristic: `None` means "not recognized at this height", nothing more.
pub fn recognize_rational(x: f64, max_height: u64) -> Result<Option<Rat>, ExactError> {
    if !x.is_finite() {
        return Err(ExactError::NonFinite);
    }
    let exact = Rat::from_float(x).ok_or(ExactError::NonFinite)?;
    let ulp = x.abs().max(f64::MIN_POSITIVE) * f64::EPSILON;
    let h = BigInt::from(max_height.max(1));

    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rem = exact.clone();
    for _ in 0..200 {
        let a = rem.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > h {
            break;
        }
        let cand = Rat::new(p2.clone(), q2.clone());
        let err = (&exact - &cand).abs().to_f64().unwrap_or(f64::INFINITY);
        let qf = q2.to_f64().unwrap_or(f64::INFINITY);
        if err <= (1e-8 / (qf * qf)).max(4.0 * ulp) {
            return Ok(Some(cand));
        }
        let frac = &rem - Rat::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rem = frac.recip();
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64, d: i64) -> QuadElem {
        QuadElem::new(rat_int(a), rat_int(b), d).unwrap()
    }

    #[test]
    fn display() {
        assert_eq!(q(0, -1, 2).to_string(), "-√2");
        assert_eq!(q(3, 2, 5).to_string(), "3 + 2·√5");
        assert_eq!(QuadElem::new(rat(1, 2), rat(-1, 2), -7).unwrap().to_string(), "1/2 - 1/2·√(-7)");
        assert_eq!(q(4, 0, 3).to_string(), "4");
    }

    #[test]
    fn conjugation_and_norm_examples() {
        assert_eq!(q(1, 2, -1).conj(), q(1, -2, -1));
        let half = QuadElem::new(rat(1, 2), rat(1, 2), -7).unwrap();
        assert_eq!(half.norm(), rat_int(2));
        let r2 = q(0, 1, 2);
        let inv = r2.inv().unwrap();
        assert_eq!(inv, QuadElem::new(Rat::zero(), rat(1, 2), 2).unwrap());
    }

    #[test]
    fn errors_are_reported() {
        assert_eq!(QuadElem::new(rat_int(1), rat_int(1), 8), Err(ExactError::NotSquarefree(8)));
        assert_eq!(q(0, 0, 3).inv(), Err(ExactError::DivisionByZero));
        assert_eq!(q(1, 1, 2).mul(&q(1, 1, 3)), Err(ExactError::MismatchedField(2, 3)));
        // rationals mix with anything
        assert!(QuadElem::from_int(3, 5).mul(&q(1, 1, 3)).is_ok());
        assert_eq!(recognize_rational(f64::NAN, 10), Err(ExactError::NonFinite));
    }

    #[test]
    fn squarefree_helpers() {
        assert_eq!(squarefree_decomposition(72), (6, 2));
        assert_eq!(squarefree_decomposition(-12), (2, -3));
        assert!(is_squarefree(-7) && !is_squarefree(1) && !is_squarefree(-4));
    }

    fn brute_force(s: &QuadElem, two_x: &QuadElem, bound: i64) -> Vec<Triple> {
        let mut out = Vec::new();
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    let val = s
                        .mul(&QuadElem::from_int(c, s.d))
                        .unwrap()
                        .add(&two_x.mul(&QuadElem::from_int(d, s.d)).unwrap())
                        .unwrap()
                        .sub(&QuadElem::from_int(b, s.d))
                        .unwrap();
                    if val.is_zero() {
                        out.push(Triple::new(b, c, d));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn kernel_matches_examples_and_brute_force() {
        // τ = i: s = 1, 2x = 0
        let k = relation_kernel(&QuadElem::from_int(1, -1), &QuadElem::from_int(0, -1)).unwrap();
        assert_eq!(k.rows, vec![Triple::new(1, 1, 0), Triple::new(0, 0, 1)]);
        // τ = (1 + √−7)/2: s = 2, 2x = 1
        let k = relation_kernel(&QuadElem::from_int(2, -7), &QuadElem::from_int(1, -7)).unwrap();
        assert_eq!(k.rows, vec![Triple::new(2, 1, 0), Triple::new(1, 0, 1)]);
        // s = √2, 2x = 0
        let s = q(0, 1, 2);
        let k = relation_kernel(&s, &QuadElem::from_int(0, 2)).unwrap();
        assert_eq!(k.rank, 1);
        assert_eq!(k.rows, vec![Triple::new(0, 0, 1)]);

        let cases = [
            (QuadElem::from_int(1, -1), QuadElem::from_int(0, -1)),
            (QuadElem::from_int(2, -7), QuadElem::from_int(1, -7)),
            (s.clone(), QuadElem::from_int(0, 2)),
            (QuadElem::rational(rat(7, 4), -3), QuadElem::rational(rat(1, 3), -3)),
            (q(1, 1, 5), q(2, 2, 5)),
        ];
        for (s, tx) in cases {
            let basis = relation_kernel(&s, &tx).unwrap();
            let bf = brute_force(&s, &tx, 6);
            for t in &bf {
                assert!(basis.contains(t), "{t} missing from span for s={s}");
            }
            for t in &basis.rows {
                assert!(bf.contains(t) || t.b.abs() > 6 || t.c.abs() > 6 || t.d.abs() > 6);
            }
        }
    }

    #[test]
    fn recognize_examples() {
        assert_eq!(recognize_rational(0.5, 100).unwrap(), Some(rat(1, 2)));
        assert_eq!(recognize_rational(0.333_333_333_333_333, 100).unwrap(), Some(rat(1, 3)));
        assert_eq!(recognize_rational(3f64.sqrt() - 1.0, 100).unwrap(), None);
        assert_eq!(recognize_rational(-2.0, 1).unwrap(), Some(rat_int(-2)));
    }

    fn arb_quad(d: i64) -> impl Strategy<Value = QuadElem> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(move |(an, ad, bn, bd)| QuadElem::new(rat(an, ad), rat(bn, bd), d).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_is_exact(u in arb_quad(-7)) {
            prop_assume!(!u.is_zero());
            let one = u.mul(&u.inv().unwrap()).unwrap();
            prop_assert_eq!(one, QuadElem::from_int(1, -7));
        }

        #[test]
        fn norm_is_multiplicative(u in arb_quad(5), v in arb_quad(5)) {
            prop_assert_eq!(u.norm(), u.conj().norm());
            prop_assert_eq!(u.mul(&v).unwrap().norm(), u.norm() * v.norm());
        }

        #[test]
        fn recognizes_small_rationals(p in -1000i64..1000, q in 1i64..200, eps in -1.0f64..1.0) {
            let target = rat(p, q);
            let x = p as f64 / q as f64 + eps * 1e-8 / (q * q) as f64;
            prop_assert_eq!(recognize_rational(x, 200).unwrap(), Some(target));
        }

        #[test]
        fn kernel_rows_satisfy_relation(sn in -30i64..30, sd in 1i64..10, xn in -30i64..30, xd in 1i64..10) {
            let s = QuadElem::rational(rat(sn, sd), -1);
            let tx = QuadElem::rational(rat(xn, xd), -1);
            let k = relation_kernel(&s, &tx).unwrap();
            prop_assert_eq!(k.rank, 2);
            for t in &k.rows {
                let v = rat_int(t.c) * &s.a + rat_int(t.d) * &tx.a - rat_int(t.b);
                prop_assert!(v.is_zero());
            }
        }
    }
}

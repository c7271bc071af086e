//! Exact arithmetic in Q(√2) and in the module of low-degree polynomials in
//! the family parameter `s`.
//!
//! The three named constants of the construction are
//! α = √2, β = √2 − 1 and ω = √2 + 1; ω is the fundamental unit of Z[√2]
//! and β = ω⁻¹.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors produced by the exact-arithmetic layer.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("division by zero in Q(\u{221a}2)")]
    DivisionByZero,
    #[error("polynomial degree {0} exceeds the hard cap of 2")]
    DegreeTooHigh(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// An element a + b·√2 of the field Q(√2), with `a`, `b` arbitrary-precision
/// rationals kept in lowest terms.
///
/// Equality is exact structural equality (the representation is unique), and
/// the ordering is the ordering of the real numbers, decided exactly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    a: BigRational,
    b: BigRational,
}

impl QSqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt2 { a, b }
    }

    /// The rational part `a` of a + b√2.
    pub fn rat_part(&self) -> &BigRational {
        &self.a
    }

    /// The irrational coefficient `b` of a + b√2.
    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn from_int(n: i64) -> Self {
        QSqrt2::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// The rational p/q.
    pub fn ratio(p: i64, q: i64) -> Self {
        QSqrt2::new(
            BigRational::new(p.into(), q.into()),
            BigRational::zero(),
        )
    }

    /// The element (p + p'√2)/q.
    pub fn from_parts(p: i64, p2: i64, q: i64) -> Self {
        QSqrt2::new(
            BigRational::new(p.into(), q.into()),
            BigRational::new(p2.into(), q.into()),
        )
    }

    /// α = √2.
    pub fn alpha() -> Self {
        QSqrt2::new(BigRational::zero(), BigRational::one())
    }

    /// β = √2 − 1, the reciprocal of the fundamental unit.
    pub fn beta() -> Self {
        QSqrt2::new(-BigRational::one(), BigRational::one())
    }

    /// ω = √2 + 1, the fundamental unit of Z[√2].
    pub fn omega() -> Self {
        QSqrt2::new(BigRational::one(), BigRational::one())
    }

    pub fn zero() -> Self {
        QSqrt2::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        QSqrt2::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The field conjugate a − b√2.
    pub fn conj(&self) -> Self {
        QSqrt2::new(self.a.clone(), -self.b.clone())
    }

    /// Exact sign of the real number a + b√2, computed from the signs of the
    /// parts and, when they disagree, by comparing a² with 2b².
    pub fn sign(&self) -> i32 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) | (0, s) => s,
            (s, t) if s == t => s,
            (s, _) => {
                // a and b√2 have opposite signs; the larger magnitude wins.
                // |a| > |b√2|  iff  a² > 2b².
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => s,
                    Ordering::Less => -s,
                    Ordering::Equal => unreachable!("√2 is irrational"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        // 1/(a + b√2) = (a − b√2)/(a² − 2b²).
        let norm = &self.a * &self.a - BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b;
        Ok(QSqrt2::new(&self.a / &norm, -&self.b / &norm))
    }

    /// Integer power, with negative exponents via the reciprocal.
    /// Panics on 0^k for k < 0.
    pub fn pow(&self, k: i64) -> Self {
        if k < 0 {
            return self.recip().expect("negative power of zero").pow(-k);
        }
        let mut acc = QSqrt2::one();
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// β^k for any integer k (β^{-1} = ω).
    pub fn beta_pow(k: i64) -> Self {
        QSqrt2::beta().pow(k)
    }

    /// Exact floor of the real number a + b√2.
    pub fn floor(&self) -> BigInt {
        // Start from a floating estimate and correct it exactly.
        let mut n = BigInt::from(self.to_f64().floor() as i64);
        loop {
            let lo = self - &QSqrt2::new(BigRational::from_integer(n.clone()), BigRational::zero());
            if lo.is_negative() {
                n -= 1;
                continue;
            }
            let hi = self
                - &QSqrt2::new(
                    BigRational::from_integer(&n + BigInt::one()),
                    BigRational::zero(),
                );
            if hi.sign() >= 0 {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Approximate value for display and plotting only; never used in a
    /// decision procedure.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + std::f64::consts::SQRT_2 * rational_to_f64(&self.b)
    }
}

fn rational_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    // Scale down huge operands together so the quotient stays in range.
    let bits = numer.bits().max(denom.bits());
    if bits <= 52 {
        let n: f64 = numer.to_string().parse().unwrap();
        let d: f64 = denom.to_string().parse().unwrap();
        n / d
    } else {
        let shift = bits - 52;
        let n = numer >> shift;
        let d = denom >> shift;
        let n: f64 = n.to_string().parse().unwrap();
        let d: f64 = d.to_string().parse().unwrap();
        n / d
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: &QSqrt2) -> QSqrt2 {
                (&self).$method(rhs)
            }
        }
        impl $trait<QSqrt2> for &QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}
forward_binop!(Add, add);

impl Sub<&QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}
forward_binop!(Sub, sub);

impl Mul<&QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        // (a + b√2)(c + d√2) = ac + 2bd + (ad + bc)√2.
        let two = BigRational::from_integer(BigInt::from(2));
        QSqrt2::new(
            &self.a * &rhs.a + two * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}
forward_binop!(Mul, mul);

impl Div<&QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn div(self, rhs: &QSqrt2) -> QSqrt2 {
        self * &rhs.recip().expect("division by zero in Q(\u{221a}2)")
    }
}
forward_binop!(Div, div);

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-&self.a, -&self.b)
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        -&self
    }
}

impl AddAssign<&QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, rhs: &QSqrt2) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QSqrt2> for QSqrt2 {
    fn sub_assign(&mut self, rhs: &QSqrt2) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&QSqrt2> for QSqrt2 {
    fn mul_assign(&mut self, rhs: &QSqrt2) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for QSqrt2 {
    /// Canonical text form `p/q + r/t*r2`, e.g. `-1/1 + 1/1*r2` for β.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} + {}/{}*r2",
            self.a.numer(),
            self.a.denom(),
            self.b.numer(),
            self.b.denom()
        )
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_rational(tok: &str) -> Result<BigRational, AlgebraError> {
    let tok = tok.trim();
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (tok, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| AlgebraError::Parse(format!("bad numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| AlgebraError::Parse(format!("bad denominator {den:?}")))?;
    if d.is_zero() {
        return Err(AlgebraError::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for QSqrt2 {
    type Err = AlgebraError;

    /// Accepts `p/q`, `p`, `r/t*r2`, and `p/q ± r/t*r2` (whitespace optional).
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(AlgebraError::Parse("empty literal".into()));
        }
        // Split at a '+' or '-' that separates the two terms (not a leading
        // sign and not the sign right after '+'/'-').
        let bytes = s.as_bytes();
        let mut split_at = None;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && bytes[i - 1] != b'+'
                && bytes[i - 1] != b'-'
                && bytes[i - 1] != b'/'
            {
                split_at = Some(i);
            }
        }
        let (first, second) = match split_at {
            Some(i) => (&s[..i], Some(&s[i..])),
            None => (s.as_str(), None),
        };
        let parse_term = |term: &str| -> Result<(BigRational, bool), AlgebraError> {
            // Returns (coefficient, is_sqrt2_term).
            let term = term.strip_prefix('+').unwrap_or(term);
            if let Some(coeff) = term.strip_suffix("*r2") {
                Ok((parse_rational(coeff)?, true))
            } else if term == "r2" {
                Ok((BigRational::one(), true))
            } else if term == "-r2" {
                Ok((-BigRational::one(), true))
            } else {
                Ok((parse_rational(term)?, false))
            }
        };
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        let mut seen_rat = false;
        let mut seen_irr = false;
        for term in std::iter::once(first).chain(second) {
            let (coeff, irr) = parse_term(term)?;
            if irr {
                if seen_irr {
                    return Err(AlgebraError::Parse(format!("duplicate r2 term in {input:?}")));
                }
                seen_irr = true;
                b = coeff;
            } else {
                if seen_rat {
                    return Err(AlgebraError::Parse(format!(
                        "duplicate rational term in {input:?}"
                    )));
                }
                seen_rat = true;
                a = coeff;
            }
        }
        Ok(QSqrt2::new(a, b))
    }
}

/// A polynomial c₀ + c₁·s + c₂·s² in the family parameter `s`, with Q(√2)
/// coefficients and a hard degree cap of 2.
///
/// Coordinates use degree ≤ 1 (the module of affine expressions in `s`);
/// degree 2 appears only in areas. Products that would exceed degree 2 are
/// an error, never a truncation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SPoly {
    coeffs: Vec<QSqrt2>, // trailing zeros trimmed; len ≤ 3
}

impl SPoly {
    pub fn new(coeffs: Vec<QSqrt2>) -> Result<Self, AlgebraError> {
        let mut coeffs = coeffs;
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() > 3 {
            return Err(AlgebraError::DegreeTooHigh(coeffs.len() - 1));
        }
        Ok(SPoly { coeffs })
    }

    pub fn zero() -> Self {
        SPoly { coeffs: vec![] }
    }

    pub fn constant(c: QSqrt2) -> Self {
        SPoly::new(vec![c]).unwrap()
    }

    pub fn from_int(n: i64) -> Self {
        SPoly::constant(QSqrt2::from_int(n))
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        SPoly::new(vec![QSqrt2::zero(), QSqrt2::one()]).unwrap()
    }

    /// c₀ + c₁·s.
    pub fn affine(c0: QSqrt2, c1: QSqrt2) -> Self {
        SPoly::new(vec![c0, c1]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, k: usize) -> QSqrt2 {
        self.coeffs.get(k).cloned().unwrap_or_else(QSqrt2::zero)
    }

    /// Horner evaluation at an exact parameter value.
    pub fn eval(&self, s: &QSqrt2) -> QSqrt2 {
        let mut acc = QSqrt2::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * s + c;
        }
        acc
    }

    pub fn checked_mul(&self, rhs: &SPoly) -> Result<SPoly, AlgebraError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(SPoly::zero());
        }
        let deg = self.degree() + rhs.degree();
        if deg > 2 {
            return Err(AlgebraError::DegreeTooHigh(deg));
        }
        let mut out = vec![QSqrt2::zero(); deg + 1];
        for (i, ci) in self.coeffs.iter().enumerate() {
            for (j, cj) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(ci * cj);
            }
        }
        SPoly::new(out)
    }

    /// Scale by an exact field element.
    pub fn scale(&self, k: &QSqrt2) -> SPoly {
        SPoly::new(self.coeffs.iter().map(|c| c * k).collect()).unwrap()
    }

    /// Substitute s ↦ c0 + c1·s (an affine reparametrization). Errors if the
    /// result would exceed the degree cap.
    pub fn compose_affine(&self, c0: &QSqrt2, c1: &QSqrt2) -> Result<SPoly, AlgebraError> {
        let inner = SPoly::affine(c0.clone(), c1.clone());
        let mut acc = SPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.checked_mul(&inner)? + &SPoly::constant(c.clone());
        }
        Ok(acc)
    }
}

impl Add<&SPoly> for &SPoly {
    type Output = SPoly;
    fn add(self, rhs: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &rhs.coeff(k));
        }
        SPoly::new(out).unwrap()
    }
}

impl Sub<&SPoly> for &SPoly {
    type Output = SPoly;
    fn sub(self, rhs: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) - &rhs.coeff(k));
        }
        SPoly::new(out).unwrap()
    }
}

impl Mul<&SPoly> for &SPoly {
    type Output = SPoly;
    /// Panics if the product degree exceeds 2; use [`SPoly::checked_mul`]
    /// where overflow is expected to be handled.
    fn mul(self, rhs: &SPoly) -> SPoly {
        self.checked_mul(rhs).expect("polynomial degree overflow")
    }
}

impl Neg for &SPoly {
    type Output = SPoly;
    fn neg(self) -> SPoly {
        SPoly::new(self.coeffs.iter().map(|c| -c).collect()).unwrap()
    }
}

impl Add for SPoly {
    type Output = SPoly;
    fn add(self, rhs: SPoly) -> SPoly {
        &self + &rhs
    }
}

impl Sub for SPoly {
    type Output = SPoly;
    fn sub(self, rhs: SPoly) -> SPoly {
        &self - &rhs
    }
}

impl Neg for SPoly {
    type Output = SPoly;
    fn neg(self) -> SPoly {
        -&self
    }
}

impl fmt::Display for SPoly {
    /// Canonical text form `[c0; c1; c2]` with QSqrt2 literals, trailing
    /// zero coefficients omitted; the zero polynomial prints as `[0/1 + 0/1*r2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "[{}]", QSqrt2::zero());
        }
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for SPoly {
    type Err = AlgebraError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let inner = input
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| AlgebraError::Parse(format!("SPoly literal must be bracketed: {input:?}")))?;
        let coeffs = inner
            .split(';')
            .map(|tok| tok.parse::<QSqrt2>())
            .collect::<Result<Vec<_>, _>>()?;
        SPoly::new(coeffs)
    }
}

/// A closed, open, or half-open subinterval of the parameter range, with
/// exact endpoints. A single point is represented with both endpoints closed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamInterval {
    pub lo: QSqrt2,
    pub hi: QSqrt2,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl ParamInterval {
    pub fn new(lo: QSqrt2, hi: QSqrt2, lo_closed: bool, hi_closed: bool) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        if lo == hi {
            assert!(
                lo_closed && hi_closed,
                "a degenerate interval must be a closed point"
            );
        }
        ParamInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn closed(lo: QSqrt2, hi: QSqrt2) -> Self {
        ParamInterval::new(lo, hi, true, true)
    }

    pub fn open(lo: QSqrt2, hi: QSqrt2) -> Self {
        ParamInterval::new(lo, hi, false, false)
    }

    pub fn point(s: QSqrt2) -> Self {
        ParamInterval::new(s.clone(), s, true, true)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, s: &QSqrt2) -> bool {
        let lo_ok = match s.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let hi_ok = match s.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        lo_ok && hi_ok
    }

    /// A point in the interior (or the point itself for a degenerate
    /// interval), used for sampling-based diagnostics.
    pub fn sample(&self) -> QSqrt2 {
        if self.is_point() {
            return self.lo.clone();
        }
        (&self.lo + &self.hi) * QSqrt2::ratio(1, 2)
    }
}

impl fmt::Display for ParamInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' },
        )
    }
}

/// Decides whether an affine polynomial g is ≥ 0 (or > 0 when `strict`) on
/// the whole interval `j`, by evaluating at the two endpoints.
///
/// For strict inequalities, equality to zero is allowed at an open endpoint
/// (the endpoint itself is excluded from the interval), but an affine
/// function vanishing at both endpoints vanishes identically and fails.
pub fn affine_nonneg_on_interval(
    g: &SPoly,
    j: &ParamInterval,
    strict: bool,
) -> Result<bool, AlgebraError> {
    if g.degree() > 1 {
        return Err(AlgebraError::DegreeTooHigh(g.degree()));
    }
    let at_lo = g.eval(&j.lo);
    let at_hi = g.eval(&j.hi);
    if j.is_point() {
        let s = at_lo.sign();
        return Ok(if strict { s > 0 } else { s >= 0 });
    }
    let lo_sign = at_lo.sign();
    let hi_sign = at_hi.sign();
    if !strict {
        return Ok(lo_sign >= 0 && hi_sign >= 0);
    }
    let lo_ok = lo_sign > 0 || (!j.lo_closed && lo_sign == 0);
    let hi_ok = hi_sign > 0 || (!j.hi_closed && hi_sign == 0);
    Ok(lo_ok && hi_ok && !(lo_sign == 0 && hi_sign == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_examples() {
        assert_eq!(QSqrt2::beta().sign(), 1);
        assert_eq!(QSqrt2::zero().sign(), 0);
        // 3 − 2√2 − 1/6 = 17/6 − 2√2 > 0 since (17/6)² = 289/36 > 8.
        let x = &QSqrt2::from_int(3) - &QSqrt2::new(BigRational::new(1.into(), 6.into()), BigRational::from_integer(2.into()));
        assert_eq!(x.sign(), 1);
    }

    #[test]
    fn units() {
        assert_eq!(&QSqrt2::omega() * &QSqrt2::beta(), QSqrt2::one());
        assert_eq!(QSqrt2::omega().pow(3), QSqrt2::from_parts(7, 5, 1));
        assert_eq!(&QSqrt2::alpha() * &QSqrt2::alpha(), QSqrt2::from_int(2));
    }

    #[test]
    fn text_round_trip() {
        for lit in ["-1/1 + 1/1*r2", "1/3", "0/1 + 1/2*r2", "2/1"] {
            let x: QSqrt2 = lit.parse().unwrap();
            let y: QSqrt2 = x.to_string().parse().unwrap();
            assert_eq!(x, y);
        }
        assert_eq!("-1/1 + 1/1*r2".parse::<QSqrt2>().unwrap(), QSqrt2::beta());
    }

    #[test]
    fn spoly_eval() {
        let p = SPoly::affine(QSqrt2::beta(), QSqrt2::one());
        assert_eq!(p.eval(&QSqrt2::zero()), QSqrt2::beta());
        assert_eq!(
            p.eval(&QSqrt2::beta()),
            &QSqrt2::from_int(2) * &QSqrt2::beta()
        );
        let sq = &SPoly::s() * &SPoly::s();
        assert_eq!(sq.eval(&QSqrt2::omega()), QSqrt2::from_parts(3, 2, 1));
    }

    #[test]
    fn degree_cap() {
        let sq = &SPoly::s() * &SPoly::s();
        assert!(sq.checked_mul(&SPoly::s()).is_err());
    }

    #[test]
    fn interval_tests() {
        let j = ParamInterval::closed(QSqrt2::zero(), QSqrt2::alpha());
        assert!(affine_nonneg_on_interval(&SPoly::s(), &j, false).unwrap());
        let open = ParamInterval::open(QSqrt2::beta(), QSqrt2::one());
        let g = SPoly::affine(QSqrt2::beta(), -QSqrt2::one()); // β − s
        assert!(!affine_nonneg_on_interval(&g, &open, false).unwrap());
        let g2 = SPoly::affine(-QSqrt2::beta(), QSqrt2::one()); // s − β
        assert!(affine_nonneg_on_interval(&g2, &open, true).unwrap());
    }

    #[test]
    fn floor_works() {
        assert_eq!(QSqrt2::alpha().floor(), BigInt::from(1));
        assert_eq!(QSqrt2::beta().floor(), BigInt::from(0));
        assert_eq!((-QSqrt2::beta()).floor(), BigInt::from(-1));
        assert_eq!(QSqrt2::from_int(3).floor(), BigInt::from(3));
    }
}

//! Exact scalar arithmetic over the field Q(sqrt 3).
//!
//! Every coordinate and distance-square in this crate is a `FieldScalar`:
//! a value `rational_part + root3_part * sqrt(3)` with arbitrary-precision
//! rational coefficients. The representation is canonical (sqrt 3 is
//! irrational, so coefficients are unique), which makes equality, ordering
//! and hashing exact. No floating point is used anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator (maintained by `num_rational`).
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot parse {0:?} as an exact scalar")]
    Parse(String),
    #[error("zero denominator in exact scalar literal")]
    ZeroDenominator,
    #[error("operation requires a strictly positive value")]
    NonPositive,
    #[error("division by zero")]
    DivisionByZero,
}

/// Builds a rational from an integer numerator and denominator.
///
/// Panics if `den == 0`; intended for literals in code and tests.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// 2^e as an exact rational, for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// floor(log2 r) for a strictly positive rational, computed exactly
/// from bit lengths plus one shift-and-compare.
pub fn floor_log2_rational(r: &Rational) -> Result<i64, ScalarError> {
    if !r.is_positive() {
        return Err(ScalarError::NonPositive);
    }
    let p = r.numer();
    let q = r.denom();
    // bits(n) = floor(log2 n) + 1 for n > 0, so floor(log2 p/q) is either
    // d - 1 or d with d = bits(p) - bits(q); one comparison resolves it.
    let d = p.bits() as i64 - q.bits() as i64;
    let ge = if d >= 0 {
        *p >= (q << d as usize)
    } else {
        (p << (-d) as usize) >= *q
    };
    Ok(if ge { d } else { d - 1 })
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    // Perfect-square detection needs the fraction in lowest terms.
    let r = r.reduced();
    let pn = r.numer().sqrt();
    let pd = r.denom().sqrt();
    if &(&pn * &pn) == r.numer() && &(&pd * &pd) == r.denom() {
        Some(Rational::new(pn, pd))
    } else {
        None
    }
}

/// An element of Q(sqrt 3): `rational_part + root3_part * sqrt(3)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    rational_part: Rational,
    root3_part: Rational,
}

impl FieldScalar {
    pub fn new(rational_part: Rational, root3_part: Rational) -> Self {
        FieldScalar {
            rational_part,
            root3_part,
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        FieldScalar {
            rational_part: r,
            root3_part: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// n/d + (rn/rd) * sqrt(3); convenience for tests and tables.
    pub fn parts(n: i64, d: i64, rn: i64, rd: i64) -> Self {
        FieldScalar::new(ratio(n, d), ratio(rn, rd))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational_part
    }

    pub fn root3_part(&self) -> &Rational {
        &self.root3_part
    }

    pub fn is_rational(&self) -> bool {
        self.root3_part.is_zero()
    }

    /// Exact sign: -1, 0 or +1.
    ///
    /// When both coefficients are nonzero with opposite signs the answer
    /// follows from comparing a^2 with 3 b^2, which decides a against
    /// -b*sqrt(3) without ever leaving the rationals.
    pub fn sign(&self) -> i8 {
        let a = &self.rational_part;
        let b = &self.root3_part;
        let sa = rational_sign(a);
        let sb = rational_sign(b);
        match (sa, sb) {
            (0, s) => s,
            (s, 0) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            (sa, _) => {
                // Opposite signs: |a| vs |b| sqrt(3), i.e. a^2 vs 3 b^2,
                // compared as integers (denominators are positive).
                let lhs = a.numer() * a.numer() * (b.denom() * b.denom());
                let rhs = BigInt::from(3) * (b.numer() * b.numer()) * (a.denom() * a.denom());
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => -sa,
                    Ordering::Equal => 0, // impossible for nonzero b: sqrt 3 is irrational
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

    pub fn abs(&self) -> FieldScalar {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn mul_rat(&self, r: &Rational) -> FieldScalar {
        FieldScalar::new(mul_r(&self.rational_part, r), mul_r(&self.root3_part, r))
    }

    pub fn div_rat(&self, r: &Rational) -> FieldScalar {
        FieldScalar::new(div_r(&self.rational_part, r), div_r(&self.root3_part, r))
    }

    /// Multiplicative inverse. The norm a^2 - 3 b^2 vanishes only at zero.
    pub fn inverse(&self) -> Result<FieldScalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let a = &self.rational_part;
        let b = &self.root3_part;
        let norm = sub_r(&mul_r(a, a), &scale_i64(&mul_r(b, b), 3));
        Ok(FieldScalar::new(div_r(a, &norm), -div_r(b, &norm)))
    }

    /// Exact square root within the field, if one exists.
    ///
    /// Returns the nonnegative root. `(p + q sqrt3)^2 = s` reduces to a
    /// rational quadratic in q^2, so representability is decidable.
    pub fn sqrt_in_field(&self) -> Option<FieldScalar> {
        match self.sign() {
            -1 => return None,
            0 => return Some(FieldScalar::zero()),
            _ => {}
        }
        let u = &self.rational_part;
        let v = &self.root3_part;
        if v.is_zero() {
            if let Some(p) = rational_sqrt(u) {
                return Some(FieldScalar::from_rational(p));
            }
            // u = 3 q^2 gives the pure sqrt(3) root q * sqrt(3).
            if let Some(q) = rational_sqrt(&(u / rat(3))) {
                return Some(FieldScalar::new(Rational::zero(), q));
            }
            return None;
        }
        // p^2 + 3 q^2 = u and 2 p q = v force q^2 = (u +- w)/6
        // with w = sqrt(u^2 - 3 v^2).
        let disc = u * u - v * v * rat(3);
        let w = rational_sqrt(&disc)?;
        for signed_w in [w.clone(), -w] {
            let q2 = (u + &signed_w) / rat(6);
            if let Some(q) = rational_sqrt(&q2) {
                if q.is_zero() {
                    continue;
                }
                let p = v / (&q * rat(2));
                let candidate = FieldScalar::new(p, q);
                if &candidate * &candidate == *self {
                    return Some(candidate.abs());
                }
                let neg = -candidate;
                if &neg * &neg == *self {
                    return Some(neg.abs());
                }
            }
        }
        None
    }

    /// floor(log2 self) for a strictly positive value.
    ///
    /// Rational values resolve from bit lengths. Otherwise a shrinking
    /// rational bracket around sqrt(3) localizes the value; the bracket
    /// tightens quadratically, so heavy cancellation costs only a few
    /// Newton refinements. A direct exact search is kept as a fallback.
    pub fn floor_log2(&self) -> Result<i64, ScalarError> {
        if self.sign() <= 0 {
            return Err(ScalarError::NonPositive);
        }
        if self.root3_part.is_zero() {
            return floor_log2_rational(&self.rational_part);
        }
        // sqrt(3) in (lo, hi); Newton from above converges quadratically
        // and 3/hi is a matching lower bound.
        let mut hi = ratio(26, 15);
        let three = rat(3);
        let two = rat(2);
        for _ in 0..64 {
            let lo = div_r(&three, &hi);
            let at_lo = add_r(&self.rational_part, &mul_r(&self.root3_part, &lo));
            let at_hi = add_r(&self.rational_part, &mul_r(&self.root3_part, &hi));
            let (vlo, vhi) = if self.root3_part.is_positive() {
                (at_lo, at_hi)
            } else {
                (at_hi, at_lo)
            };
            if vlo.is_positive() {
                let elo = floor_log2_rational(&vlo)?;
                let ehi = floor_log2_rational(&vhi)?;
                if elo == ehi {
                    return Ok(elo);
                }
            }
            hi = div_r(&add_r(&hi, &div_r(&three, &hi)), &two);
        }
        self.floor_log2_exact_search()
    }

    fn floor_log2_exact_search(&self) -> Result<i64, ScalarError> {
        let ge_pow2 = |e: i64| self.cmp(&FieldScalar::from_rational(pow2(e))) != Ordering::Less;
        // Exponential search for a bracket, then bisection.
        let (mut lo, mut hi): (i64, i64) = if ge_pow2(0) {
            let mut h = 1;
            while ge_pow2(h) {
                h *= 2;
            }
            (h / 2, h)
        } else {
            let mut l = -1;
            while !ge_pow2(l) {
                l *= 2;
            }
            (l, if l == -1 { 0 } else { l / 2 })
        };
        // Invariant: 2^lo <= self < 2^hi.
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ge_pow2(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    pub fn zero() -> FieldScalar {
        FieldScalar::from_rational(Rational::zero())
    }

    pub fn one() -> FieldScalar {
        FieldScalar::from_rational(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.rational_part.is_zero() && self.root3_part.is_zero()
    }

    /// Largest bit length among the four coefficient integers; the
    /// engine's growth watchdog reads this.
    pub fn bit_complexity(&self) -> u64 {
        self.rational_part
            .numer()
            .bits()
            .max(self.rational_part.denom().bits())
            .max(self.root3_part.numer().bits())
            .max(self.root3_part.denom().bits())
    }
}

fn rational_sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Canonical rational from a raw numerator/denominator pair.
///
/// Coordinates in long runs carry denominators of the form
/// `2^k * small_odd`, and the generic word-by-word gcd in the rational
/// crate costs quadratic time on such pairs. Stripping the shared power
/// of two with shifts and finishing with a machine-word gcd keeps each
/// construction linear in the operand size; only genuinely large odd
/// denominators fall back to the full reduction.
fn make_ratio(mut num: BigInt, mut den: BigInt) -> Rational {
    assert!(!den.is_zero(), "zero denominator in rational arithmetic");
    if num.is_zero() {
        return Rational::zero();
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    let twos = num
        .trailing_zeros()
        .unwrap_or(0)
        .min(den.trailing_zeros().unwrap_or(0));
    if twos > 0 {
        num >>= twos;
        den >>= twos;
    }
    if den.is_one() {
        return Rational::new_raw(num, den);
    }
    // No common power of two remains, so gcd(num, den) divides the odd
    // part of den; a denominator like 2^k * small_odd never needs the
    // word-by-word gcd on the full operands.
    let odd = &den >> den.trailing_zeros().unwrap_or(0);
    if odd.is_one() {
        return Rational::new_raw(num, den);
    }
    if let Some(d) = odd.to_u64() {
        let rem = (num.magnitude() % d).to_u64().unwrap_or(0);
        let g = gcd_u64(rem, d);
        if g > 1 {
            num /= g;
            den /= g;
        }
        return Rational::new_raw(num, den);
    }
    Rational::new(num, den)
}

fn add_r(a: &Rational, b: &Rational) -> Rational {
    if a.denom() == b.denom() {
        make_ratio(a.numer() + b.numer(), a.denom().clone())
    } else {
        make_ratio(
            a.numer() * b.denom() + b.numer() * a.denom(),
            a.denom() * b.denom(),
        )
    }
}

fn sub_r(a: &Rational, b: &Rational) -> Rational {
    if a.denom() == b.denom() {
        make_ratio(a.numer() - b.numer(), a.denom().clone())
    } else {
        make_ratio(
            a.numer() * b.denom() - b.numer() * a.denom(),
            a.denom() * b.denom(),
        )
    }
}

fn mul_r(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    make_ratio(a.numer() * b.numer(), a.denom() * b.denom())
}

fn div_r(a: &Rational, b: &Rational) -> Rational {
    assert!(!b.is_zero(), "division by zero in rational arithmetic");
    if a.is_zero() {
        return Rational::zero();
    }
    make_ratio(a.numer() * b.denom(), a.denom() * b.numer())
}

fn scale_i64(r: &Rational, k: i64) -> Rational {
    make_ratio(r.numer() * BigInt::from(k), r.denom().clone())
}

/// The unique integer `i` with `4^(-i) <= d_sq < 4^(1-i)`.
///
/// For a squared distance this places the distance itself in
/// `[2^(-i), 2^(1-i))`. Requires `d_sq > 0`.
pub fn level_of_sq(d_sq: &FieldScalar) -> Result<i64, ScalarError> {
    let e2 = d_sq.floor_log2()?;
    // 4^e <= x < 4^(e+1) with e = floor(e2/2), because
    // 2 e <= e2 and e2 + 1 <= 2 e + 2 hold for the floor.
    Ok(-e2.div_euclid(2))
}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldScalar {
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
        impl $trait for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&FieldScalar> for &FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        FieldScalar::new(
            add_r(&self.rational_part, &rhs.rational_part),
            add_r(&self.root3_part, &rhs.root3_part),
        )
    }
}
forward_binop!(Add, add);

impl Sub<&FieldScalar> for &FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        FieldScalar::new(
            sub_r(&self.rational_part, &rhs.rational_part),
            sub_r(&self.root3_part, &rhs.root3_part),
        )
    }
}
forward_binop!(Sub, sub);

impl Mul<&FieldScalar> for &FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        // (a + b s)(c + d s) = ac + 3 bd + (ad + bc) s  with s = sqrt(3)
        let a = &self.rational_part;
        let b = &self.root3_part;
        let c = &rhs.rational_part;
        let d = &rhs.root3_part;
        FieldScalar::new(
            add_r(&mul_r(a, c), &scale_i64(&mul_r(b, d), 3)),
            add_r(&mul_r(a, d), &mul_r(b, c)),
        )
    }
}
forward_binop!(Mul, mul);

impl Div<&FieldScalar> for &FieldScalar {
    type Output = FieldScalar;
    // Field division is multiplication by the inverse.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &FieldScalar) -> FieldScalar {
        self * &rhs
            .inverse()
            .expect("division by zero in field arithmetic")
    }
}
forward_binop!(Div, div);

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar::new(-self.rational_part, -self.root3_part)
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar::new(-&self.rational_part, -&self.root3_part)
    }
}

impl AddAssign<&FieldScalar> for FieldScalar {
    fn add_assign(&mut self, rhs: &FieldScalar) {
        self.rational_part = add_r(&self.rational_part, &rhs.rational_part);
        self.root3_part = add_r(&self.root3_part, &rhs.root3_part);
    }
}

impl SubAssign<&FieldScalar> for FieldScalar {
    fn sub_assign(&mut self, rhs: &FieldScalar) {
        self.rational_part = sub_r(&self.rational_part, &rhs.rational_part);
        self.root3_part = sub_r(&self.root3_part, &rhs.root3_part);
    }
}

impl From<Rational> for FieldScalar {
    fn from(r: Rational) -> Self {
        FieldScalar::from_rational(r)
    }
}

impl From<i64> for FieldScalar {
    fn from(n: i64) -> Self {
        FieldScalar::from_int(n)
    }
}

/// Text form of a rational: `p` when integral, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter for `Rational` fields: serialized as exact strings,
/// accepted as strings or integers.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    struct RationalVisitor;

    impl<'de> Visitor<'de> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational string like \"3/8\" or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse_rational(v).map_err(|e| E::custom(e.to_string()))
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(rat(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(Rational::from_integer(v.into()))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

impl fmt::Display for FieldScalar {
    /// Text form used in scenario and trace files: `p/q`,
    /// `p/q+r/s*sqrt3` or `r/s*sqrt3`, with `/1` elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root3_part.is_zero() {
            return write!(f, "{}", format_rational(&self.rational_part));
        }
        if self.rational_part.is_zero() {
            return write!(f, "{}*sqrt3", format_rational(&self.root3_part));
        }
        let b = &self.root3_part;
        if b.is_negative() {
            write!(
                f,
                "{}-{}*sqrt3",
                format_rational(&self.rational_part),
                format_rational(&-b)
            )
        } else {
            write!(
                f,
                "{}+{}*sqrt3",
                format_rational(&self.rational_part),
                format_rational(b)
            )
        }
    }
}

/// Parses `p`, `p/q`, with optional `+r/s*sqrt3` or `-r/s*sqrt3` tail,
/// or a bare `r/s*sqrt3`.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num_str.trim()).map_err(|_| ScalarError::Parse(s.to_string()))?;
    let den = BigInt::from_str(den_str.trim()).map_err(|_| ScalarError::Parse(s.to_string()))?;
    if den.is_zero() {
        return Err(ScalarError::ZeroDenominator);
    }
    Ok(Rational::new(num, den))
}

impl FromStr for FieldScalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ScalarError::Parse(s.to_string()));
        }
        let body = match s.strip_suffix("*sqrt3") {
            Some(prefix) => prefix,
            None => return Ok(FieldScalar::from_rational(parse_rational(s)?)),
        };
        // Split the sqrt3 coefficient off at the last +/- that is not a
        // leading sign; rational literals contain no interior signs.
        let split = body
            .char_indices()
            .rev()
            .find(|(i, c)| *i > 0 && (*c == '+' || *c == '-'));
        match split {
            None => Ok(FieldScalar::new(Rational::zero(), parse_rational(body)?)),
            Some((i, c)) => {
                let a = parse_rational(&body[..i])?;
                let b = parse_rational(&body[i + 1..])?;
                Ok(FieldScalar::new(a, if c == '-' { -b } else { b }))
            }
        }
    }
}

impl Serialize for FieldScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct FieldScalarVisitor;

impl<'de> Visitor<'de> for FieldScalarVisitor {
    type Value = FieldScalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an exact scalar string like \"3/8\" or \"1/2+1/2*sqrt3\", or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<FieldScalar, E> {
        v.parse().map_err(|e: ScalarError| E::custom(e.to_string()))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<FieldScalar, E> {
        Ok(FieldScalar::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<FieldScalar, E> {
        Ok(FieldScalar::from_rational(Rational::from_integer(v.into())))
    }
}

impl<'de> Deserialize<'de> for FieldScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(FieldScalarVisitor)
    }
}

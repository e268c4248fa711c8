//! Exact arithmetic substrate: rationals, single real quadratic extensions
//! Q(sqrt(d)), and a tolerance-based float fallback, behind one `Scalar` type.
//!
//! Exact kinds canonicalize after every operation (a quadratic element with
//! zero radical part demotes to a rational), so equality is structural.
//! Mixing two different discriminants is an error, never a silent coercion.

mod quad;
mod rational;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use quad::QuadExt;
pub use rational::Rational;

pub(crate) use rational::squarefree_decompose;

/// Default tolerance for float-mode values.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed quadratic discriminants {0} and {1}")]
    MixedDiscriminants(u64, u64),
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("square root not expressible in the current extension")]
    Inexpressible,
    #[error("discriminant {0} is not squarefree >= 2")]
    InvalidDiscriminant(u64),
    #[error("values are not comparable")]
    Incomparable,
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
}

/// Float-mode value with an explicit equality tolerance.
#[derive(Clone, Copy, Debug)]
pub struct FloatScalar {
    pub value: f64,
    pub tol: f64,
}

/// A field element: exact rational, exact quadratic, or tolerance-tagged float.
///
/// Arithmetic between a rational and a quadratic element promotes the rational
/// into the same extension. Arithmetic involving a float yields a float whose
/// tolerance is the max of the operand tolerances.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(Rational),
    Quad(QuadExt),
    Float(FloatScalar),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(Rational::from_int(n))
    }

    /// Convenience for literal fractions; panics on q = 0.
    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Rational(Rational::ratio(p, q))
    }

    /// Build a + b*sqrt(d), demoting to a rational when b = 0.
    pub fn quad(a: Rational, b: Rational, d: u64) -> Result<Self, ScalarError> {
        if b.is_zero() {
            return Ok(Scalar::Rational(a));
        }
        Ok(Scalar::Quad(QuadExt::new(a, b, d)?))
    }

    pub fn float(value: f64) -> Self {
        Scalar::Float(FloatScalar {
            value,
            tol: DEFAULT_FLOAT_TOL,
        })
    }

    pub fn float_with_tol(value: f64, tol: f64) -> Self {
        Scalar::Float(FloatScalar { value, tol })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
            Scalar::Float(f) => f.value.abs() <= f.tol,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Quad(_) => false,
            Scalar::Float(f) => (f.value - 1.0).abs() <= f.tol,
        }
    }

    /// Discriminant of the quadratic extension this value lives in, if any.
    pub fn discriminant(&self) -> Option<u64> {
        match self {
            Scalar::Quad(q) => Some(q.discriminant()),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64(),
            Scalar::Quad(q) => q.to_f64(),
            Scalar::Float(f) => f.value,
        }
    }

    pub fn tol(&self) -> f64 {
        match self {
            Scalar::Float(f) => f.tol,
            _ => 0.0,
        }
    }

    /// Convert to float mode with the given tolerance.
    pub fn to_float_mode(&self, tol: f64) -> Scalar {
        Scalar::float_with_tol(self.to_f64(), tol)
    }

    fn demote(q: QuadExt) -> Scalar {
        if q.radical_part().is_zero() {
            Scalar::Rational(q.rational_part().clone())
        } else {
            Scalar::Quad(q)
        }
    }

    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.binop(rhs, |a, b| Ok(a + b), |a, b| Ok(a.add(b)), |a, b| Ok(a + b))
    }

    pub fn try_sub(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.binop(rhs, |a, b| Ok(a - b), |a, b| Ok(a.sub(b)), |a, b| Ok(a - b))
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.binop(rhs, |a, b| Ok(a * b), |a, b| Ok(a.mul(b)), |a, b| Ok(a * b))
    }

    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        self.binop(rhs, |a, b| Ok(a / b), |a, b| a.div(b), |a, b| Ok(a / b))
    }

    fn binop(
        &self,
        rhs: &Scalar,
        on_rat: impl Fn(&Rational, &Rational) -> Result<Rational, ScalarError>,
        on_quad: impl Fn(&QuadExt, &QuadExt) -> Result<QuadExt, ScalarError>,
        on_float: impl Fn(f64, f64) -> Result<f64, ScalarError>,
    ) -> Result<Scalar, ScalarError> {
        use Scalar::*;
        match (self, rhs) {
            (Float(a), b) | (b, Float(a)) => {
                let tol = a.tol.max(b.tol());
                Ok(Scalar::float_with_tol(
                    on_float(self.to_f64(), rhs.to_f64())?,
                    tol,
                ))
            }
            (Rational(a), Rational(b)) => Ok(Rational(on_rat(a, b)?)),
            (Quad(a), Quad(b)) => {
                if a.discriminant() != b.discriminant() {
                    return Err(ScalarError::MixedDiscriminants(
                        a.discriminant(),
                        b.discriminant(),
                    ));
                }
                Ok(Self::demote(on_quad(a, b)?))
            }
            (Rational(a), Quad(b)) => {
                let a = QuadExt::new(a.clone(), self::Rational::zero(), b.discriminant())?;
                Ok(Self::demote(on_quad(&a, b)?))
            }
            (Quad(a), Rational(b)) => {
                let b = QuadExt::new(b.clone(), self::Rational::zero(), a.discriminant())?;
                Ok(Self::demote(on_quad(a, &b)?))
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quad(q) => Scalar::Quad(q.neg()),
            Scalar::Float(f) => Scalar::float_with_tol(-f.value, f.tol),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.sign() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Scalar {
        self.try_mul(self).expect("square never mixes kinds")
    }

    /// Exact sign for exact kinds; floats report zero within tolerance.
    pub fn sign(&self) -> Ordering {
        match self {
            Scalar::Rational(r) => r.sign(),
            Scalar::Quad(q) => q.sign(),
            Scalar::Float(f) => {
                if f.value.abs() <= f.tol {
                    Ordering::Equal
                } else if f.value > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn try_cmp(&self, rhs: &Scalar) -> Result<Ordering, ScalarError> {
        if !self.is_exact() || !rhs.is_exact() {
            let tol = self.tol().max(rhs.tol());
            let a = self.to_f64();
            let b = rhs.to_f64();
            if a.is_nan() || b.is_nan() {
                return Err(ScalarError::Incomparable);
            }
            if (a - b).abs() <= tol {
                return Ok(Ordering::Equal);
            }
            return Ok(if a < b {
                Ordering::Less
            } else {
                Ordering::Greater
            });
        }
        Ok(self.try_sub(rhs)?.sign())
    }

    /// sqrt of a nonnegative rational: exact rational if a perfect square,
    /// an element of Q(sqrt(d)) when the context discriminant d fits,
    /// otherwise `Inexpressible` so the caller may fall back to float mode.
    pub fn sqrt_extend(x: &Rational, context_d: Option<u64>) -> Result<Scalar, ScalarError> {
        if x.is_negative() {
            return Err(ScalarError::NegativeRadicand);
        }
        if let Some(r) = x.exact_sqrt() {
            return Ok(Scalar::Rational(r));
        }
        if let Some(d) = context_d {
            let quotient = x / &Rational::from_int(d as i64);
            if let Some(q) = quotient.exact_sqrt() {
                return Scalar::quad(Rational::zero(), q, d);
            }
        }
        Err(ScalarError::Inexpressible)
    }

    /// sqrt of a nonnegative rational, deriving the discriminant from the
    /// squarefree part of the radicand.
    pub fn sqrt_auto(x: &Rational) -> Result<Scalar, ScalarError> {
        if x.is_negative() {
            return Err(ScalarError::NegativeRadicand);
        }
        if let Some(r) = x.exact_sqrt() {
            return Ok(Scalar::Rational(r));
        }
        // sqrt(p/q) = sqrt(p*q)/q with p*q = m^2 * d, d squarefree.
        let n = x.numer() * x.denom();
        let (m, d) = squarefree_decompose(&n);
        let d: u64 = d.try_into().map_err(|_| ScalarError::Inexpressible)?;
        let coeff = Rational::new(m, x.denom().clone())?;
        Scalar::quad(Rational::zero(), coeff, d)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        use Scalar::*;
        match (self, other) {
            (Rational(a), Rational(b)) => a == b,
            (Quad(a), Quad(b)) => a == b,
            (Rational(_), Quad(_)) | (Quad(_), Rational(_)) => false,
            (Float(a), b) | (b, Float(a)) => (a.value - b.to_f64()).abs() <= a.tol.max(b.tol()),
        }
    }
}

macro_rules! scalar_binop {
    ($Op:ident, $op:ident, $method:ident) => {
        impl std::ops::$Op for &Scalar {
            type Output = Scalar;
            fn $op(self, rhs: &Scalar) -> Scalar {
                self.$method(rhs).expect("incompatible scalar operands")
            }
        }
        impl std::ops::$Op for Scalar {
            type Output = Scalar;
            fn $op(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs).expect("incompatible scalar operands")
            }
        }
    };
}

scalar_binop!(Add, add, try_add);
scalar_binop!(Sub, sub, try_sub);
scalar_binop!(Mul, mul, try_mul);
scalar_binop!(Div, div, try_div);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", r),
            Scalar::Quad(q) => write!(f, "{}", q),
            Scalar::Float(v) => write!(f, "~{}", v.value),
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Parses the serialization format: "p/q" or "p" for rationals,
    /// "a+b*sqrt(d)" / "a-b*sqrt(d)" for quadratic elements, "~x" for floats.
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::Parse(s.to_string());
        if let Some(rest) = s.strip_prefix('~') {
            let v: f64 = rest.trim().parse().map_err(|_| bad())?;
            return Ok(Scalar::float(v));
        }
        if let Some(idx) = s.find("*sqrt(") {
            let d_part = &s[idx + 6..];
            let d_str = d_part.strip_suffix(')').ok_or_else(bad)?;
            let d: u64 = d_str.trim().parse().map_err(|_| bad())?;
            let head = &s[..idx];
            // Separator is the first +/- that follows a digit (signs inside
            // a rational only occur at its start).
            let mut split = None;
            let bytes = head.as_bytes();
            for i in 1..bytes.len() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit() {
                    split = Some(i);
                    break;
                }
            }
            let i = split.ok_or_else(bad)?;
            let a: Rational = head[..i].parse()?;
            let mut b: Rational = head[i + 1..].parse()?;
            if bytes[i] == b'-' {
                b = -b;
            }
            return Scalar::quad(a, b, d);
        }
        Ok(Scalar::Rational(s.parse()?))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Summary of the scalar kinds present in a slice, used by entry points to
/// validate compatibility before running panicking operator arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KindSummary {
    pub discriminant: Option<u64>,
    pub has_float: bool,
    pub has_exact: bool,
}

pub fn check_compatible<'a, I: IntoIterator<Item = &'a Scalar>>(
    values: I,
) -> Result<KindSummary, ScalarError> {
    let mut summary = KindSummary {
        discriminant: None,
        has_float: false,
        has_exact: false,
    };
    for v in values {
        match v {
            Scalar::Float(_) => summary.has_float = true,
            Scalar::Rational(_) => summary.has_exact = true,
            Scalar::Quad(q) => {
                summary.has_exact = true;
                match summary.discriminant {
                    None => summary.discriminant = Some(q.discriminant()),
                    Some(d) if d == q.discriminant() => {}
                    Some(d) => return Err(ScalarError::MixedDiscriminants(d, q.discriminant())),
                }
            }
        }
    }
    Ok(summary)
}

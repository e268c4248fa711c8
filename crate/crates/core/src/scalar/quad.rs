use std::cmp::Ordering;
use std::fmt;

use super::{Rational, ScalarError};

/// Element a + b*sqrt(d) of the real quadratic extension Q(sqrt(d)),
/// with d a squarefree integer >= 2 fixed per value.
///
/// Equality is componentwise; the sign of any element is computable exactly
/// from integer comparisons, so ordering never consults floating point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u64,
}

pub(crate) fn is_squarefree(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        while n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, ScalarError> {
        if !is_squarefree(d) {
            return Err(ScalarError::InvalidDiscriminant(d));
        }
        Ok(QuadExt { a, b, d })
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn discriminant(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, rhs: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.d, rhs.d);
        QuadExt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            d: self.d,
        }
    }

    pub fn sub(&self, rhs: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.d, rhs.d);
        QuadExt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            d: self.d,
        }
    }

    pub fn mul(&self, rhs: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.d, rhs.d);
        let d = Rational::from_int(self.d as i64);
        QuadExt {
            a: &(&self.a * &rhs.a) + &(&(&self.b * &rhs.b) * &d),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.a),
            d: self.d,
        }
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }

    /// Field norm a^2 - d b^2; zero iff the element is zero.
    pub fn norm(&self) -> Rational {
        let d = Rational::from_int(self.d as i64);
        &self.a.square() - &(&self.b.square() * &d)
    }

    pub fn recip(&self) -> Result<QuadExt, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm();
        debug_assert!(!n.is_zero(), "nonzero quadratic element has nonzero norm");
        Ok(QuadExt {
            a: &self.a / &n,
            b: &(-&self.b) / &n,
            d: self.d,
        })
    }

    pub fn div(&self, rhs: &QuadExt) -> Result<QuadExt, ScalarError> {
        Ok(self.mul(&rhs.recip()?))
    }

    /// Exact sign via sign analysis of the parts and an integer comparison
    /// of a^2 against d b^2 when the parts disagree.
    pub fn sign(&self) -> Ordering {
        if self.b.is_zero() {
            return self.a.sign();
        }
        if self.a.is_zero() {
            return self.b.sign();
        }
        let sa = self.a.sign();
        if sa == self.b.sign() {
            return sa;
        }
        let d = Rational::from_int(self.d as i64);
        match self.a.square().cmp(&(&self.b.square() * &d)) {
            Ordering::Greater => sa,
            Ordering::Less => self.b.sign(),
            // a^2 = d b^2 with b != 0 would make sqrt(d) rational.
            Ordering::Equal => unreachable!("squarefree discriminant"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }

    /// Square root within the same field, when one exists.
    pub fn sqrt_in_field(&self) -> Option<QuadExt> {
        if self.sign() == Ordering::Less {
            return None;
        }
        // Solve (x + y sqrt(d))^2 = a + b sqrt(d):
        //   x^2 + d y^2 = a,  2 x y = b
        // => y^2 is a root of 4 d t^2 - 4 a t + b^2 = 0.
        let d = Rational::from_int(self.d as i64);
        if self.b.is_zero() {
            // a >= 0; sqrt(a) is either rational or q*sqrt(d).
            if let Some(x) = self.a.exact_sqrt() {
                return Some(QuadExt {
                    a: x,
                    b: Rational::zero(),
                    d: self.d,
                });
            }
            let over_d = &self.a / &d;
            if let Some(y) = over_d.exact_sqrt() {
                return Some(QuadExt {
                    a: Rational::zero(),
                    b: y,
                    d: self.d,
                });
            }
            return None;
        }
        let disc = &self.a.square() - &(&d * &self.b.square());
        let root = disc.exact_sqrt()?;
        let two = Rational::from_int(2);
        let two_d = &two * &d;
        for candidate in [&(&self.a + &root) / &two_d, &(&self.a - &root) / &two_d] {
            if let Some(y) = candidate.exact_sqrt() {
                if y.is_zero() {
                    continue;
                }
                let x = &self.b / &(&two * &y);
                let r = QuadExt {
                    a: x,
                    b: y,
                    d: self.d,
                };
                if r.sign() != Ordering::Less && r.mul(&r) == *self {
                    return Some(r);
                }
                let r = r.neg();
                if r.sign() != Ordering::Less && r.mul(&r) == *self {
                    return Some(r);
                }
            }
        }
        None
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt({})", self.a, self.b.abs(), self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

//! Upper and lower bounds for spherical s-distance sets, all evaluated in
//! exact big-integer arithmetic, plus a selector that reports every bound
//! whose hypotheses a given distance profile satisfies.

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::config::DistanceProfile;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Binomial coefficient with the usual conventions: 0 when b < 0 or b > a >= 0
/// (and 0 for a < 0).
pub fn binom(a: i64, b: i64) -> BigUint {
    if b < 0 || a < 0 || b > a {
        return BigUint::from(0u32);
    }
    let b = b.min(a - b);
    let mut result = BigUint::from(1u32);
    for i in 0..b {
        result *= BigUint::from((a - i) as u64);
        result /= BigUint::from((i + 1) as u64);
    }
    result
}

/// C(n+s-1, s) + C(n+s-2, s-1): the general upper bound value for a spherical
/// s-distance set in n dimensions. Defined for s >= 0 (value 1 at s = 0).
pub(crate) fn delsarte_value(n: u32, s: u32) -> BigUint {
    let n = n as i64;
    let s = s as i64;
    binom(n + s - 1, s) + binom(n + s - 2, s - 1)
}

pub fn bound_dgs(n: u32, s: u32) -> Result<BigUint, BoundsError> {
    if n < 1 || s < 1 {
        return Err(BoundsError::InvalidInput(format!(
            "need n >= 1 and s >= 1, got n={n}, s={s}"
        )));
    }
    Ok(delsarte_value(n, s))
}

/// C(n+s-1, s), valid for even s: the improved bound under antipodal-type
/// inner products.
pub fn bound_main(n: u32, s: u32) -> Result<BigUint, BoundsError> {
    if n < 1 {
        return Err(BoundsError::InvalidInput(format!("need n >= 1, got {n}")));
    }
    if s < 2 || !s.is_multiple_of(2) {
        return Err(BoundsError::HypothesisViolated(format!(
            "s must be even >= 2, got {s}"
        )));
    }
    Ok(binom((n + s - 1) as i64, s as i64))
}

pub fn bound_gerzon(n: u32) -> BigUint {
    BigUint::from(n as u64) * BigUint::from((n as u64) + 1) / BigUint::from(2u32)
}

pub fn bound_musin(n: u32) -> BigUint {
    bound_gerzon(n)
}

pub fn bound_two_distance(n: u32) -> BigUint {
    BigUint::from(n as u64) * BigUint::from((n as u64) + 3) / BigUint::from(2u32)
}

/// Value of the even-s bound under a nonnegative inner-product sum:
/// M(n, s-2) + ((n + 2s - 2) / s) * C(n+s-1, s-1), evaluated exactly as a
/// rational and floored (set cardinality is integral).
pub fn bound_barg_musin(n: u32, s: u32) -> Result<BigUint, BoundsError> {
    if n < 1 {
        return Err(BoundsError::InvalidInput(format!("need n >= 1, got {n}")));
    }
    if s < 2 || !s.is_multiple_of(2) {
        return Err(BoundsError::HypothesisViolated(format!(
            "s must be even >= 2, got {s}"
        )));
    }
    let head = delsarte_value(n, s - 2);
    let tail_num = BigInt::from((n as i64) + 2 * (s as i64) - 2)
        * BigInt::from(binom((n + s - 1) as i64, (s - 1) as i64));
    let tail = Rational::new(tail_num, BigInt::from(s as i64)).expect("s >= 2");
    let total = Rational::from_bigint(BigInt::from(head)) + tail;
    let floored = total.floor_int();
    debug_assert!(!floored.is_negative());
    Ok(floored.magnitude().clone())
}

/// Existence numbers for large equiangular families: dimension
/// n = 3 * 2^(2t-1) - 1 and cardinality 2(n+1)^2 / 9 (always integral there).
pub fn lower_de_caen(t: u32) -> (BigUint, BigUint) {
    assert!(t >= 1, "need t >= 1");
    let n =
        BigUint::from(3u32) * (BigUint::from(1u32) << ((2 * t - 1) as usize)) - BigUint::from(1u32);
    let n_plus_1 = &n + BigUint::from(1u32);
    let sq = &n_plus_1 * &n_plus_1;
    debug_assert!((BigUint::from(2u32) * &sq % BigUint::from(9u32)) == BigUint::from(0u32));
    let count = BigUint::from(2u32) * sq / BigUint::from(9u32);
    (n, count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    Main,
    Musin,
    Conjecture,
    Dgs,
    TwoDistance,
    Gerzon,
    BargMusin,
}

impl BoundId {
    pub fn name(&self) -> &'static str {
        match self {
            BoundId::Main => "main",
            BoundId::Musin => "musin",
            BoundId::Conjecture => "conjecture",
            BoundId::Dgs => "dgs",
            BoundId::TwoDistance => "two_distance",
            BoundId::Gerzon => "gerzon",
            BoundId::BargMusin => "barg_musin",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Proved,
    Conjectured,
}

/// One bound applicable to a configuration, with the hypotheses it used.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub theorem: BoundId,
    #[serde(serialize_with = "crate::serialize_biguint")]
    pub value: BigUint,
    pub hypotheses_used: Vec<String>,
    pub status: BoundStatus,
}

impl BoundReport {
    fn proved(theorem: BoundId, value: BigUint, hyps: &[&str]) -> Self {
        BoundReport {
            theorem,
            value,
            hypotheses_used: hyps.iter().map(|s| s.to_string()).collect(),
            status: BoundStatus::Proved,
        }
    }
}

/// Every bound whose hypotheses the profile satisfies, sorted ascending by
/// value (ties by theorem id). The conjectured bound is computed but always
/// labeled as such and never feeds any verdict.
pub fn applicable_bounds(profile: &DistanceProfile, n: u32) -> Vec<BoundReport> {
    let s = profile.s as u32;
    let mut reports = Vec::new();
    if s >= 1 {
        reports.push(BoundReport::proved(
            BoundId::Dgs,
            delsarte_value(n, s),
            &[
                "points on the unit sphere",
                "at most s distinct inner products",
            ],
        ));
    }
    if s >= 2 && s.is_multiple_of(2) {
        if profile.antipodal_type.is_some() {
            reports.push(BoundReport::proved(
                BoundId::Main,
                binom((n + s - 1) as i64, s as i64),
                &[
                    "s even",
                    "inner products of the form {+-a_m}",
                    "0 < a_m < 1",
                ],
            ));
        }
        if profile.sum_nonneg {
            reports.push(BoundReport::proved(
                BoundId::BargMusin,
                bound_barg_musin(n, s).expect("s even >= 2"),
                &["s even", "sum of inner products >= 0"],
            ));
            reports.push(BoundReport {
                theorem: BoundId::Conjecture,
                value: binom((n + s - 1) as i64, s as i64),
                hypotheses_used: vec![
                    "s even".to_string(),
                    "sum of inner products >= 0".to_string(),
                ],
                status: BoundStatus::Conjectured,
            });
        }
    }
    if s == 2 && profile.sum_nonneg {
        reports.push(BoundReport::proved(
            BoundId::Musin,
            bound_musin(n),
            &["s = 2", "sum of the two inner products >= 0"],
        ));
    }
    reports.sort_by(|a, b| {
        a.value
            .cmp(&b.value)
            .then_with(|| a.theorem.cmp(&b.theorem))
    });
    reports
}

/// Formula-only reports at (n, s), hypotheses not checked against any
/// configuration; used by the CLI when no profile file is supplied.
pub fn formula_bounds(n: u32, s: u32) -> Vec<BoundReport> {
    let mut reports = Vec::new();
    if s >= 1 {
        reports.push(BoundReport::proved(BoundId::Dgs, delsarte_value(n, s), &[]));
    }
    if s >= 2 && s.is_multiple_of(2) {
        reports.push(BoundReport::proved(
            BoundId::Main,
            binom((n + s - 1) as i64, s as i64),
            &["requires antipodal-type inner products"],
        ));
        reports.push(BoundReport::proved(
            BoundId::BargMusin,
            bound_barg_musin(n, s).expect("s even >= 2"),
            &["requires nonnegative inner-product sum"],
        ));
        reports.push(BoundReport {
            theorem: BoundId::Conjecture,
            value: binom((n + s - 1) as i64, s as i64),
            hypotheses_used: vec!["requires nonnegative inner-product sum".to_string()],
            status: BoundStatus::Conjectured,
        });
    }
    if s == 2 {
        reports.push(BoundReport::proved(
            BoundId::TwoDistance,
            bound_two_distance(n),
            &[],
        ));
        reports.push(BoundReport::proved(
            BoundId::Gerzon,
            bound_gerzon(n),
            &["equiangular families"],
        ));
        reports.push(BoundReport::proved(
            BoundId::Musin,
            bound_musin(n),
            &["requires nonnegative inner-product sum"],
        ));
    }
    reports.sort_by(|a, b| {
        a.value
            .cmp(&b.value)
            .then_with(|| a.theorem.cmp(&b.theorem))
    });
    reports
}

/// Sum of profile inner products, used when classifying hypotheses.
pub(crate) fn scalar_sum(values: &[Scalar]) -> Scalar {
    values.iter().fold(Scalar::zero(), |acc, v| &acc + v)
}

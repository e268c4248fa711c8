//! End-to-end linear-independence certificates for antipodal-type
//! configurations, executed on concrete Gram matrices.
//!
//! The certificate runs at two levels and requires them to agree:
//!
//! 1. Gram level (coordinate-free): the evaluation matrix
//!    B_ij = prod_m (g_ij^2 - a_m^2) must be non-singular. Under the
//!    hypotheses it is diagonal with entries prod_m (1 - a_m^2).
//! 2. Polynomial level: realize the points, build each product polynomial,
//!    rewrite away powers of the first variable using the quadric relation,
//!    check that every reduced polynomial is supported on the capped
//!    even-degree monomial set, that reduction preserved the values at every
//!    point, and that the coefficient matrix over that monomial basis has
//!    full row rank.
//!
//! The polynomial level runs in the diagonally rescaled frame of
//! [`crate::config::realize_scaled`], which keeps every quantity inside the
//! base field of the Gram entries (supports, evaluations, and ranks are
//! invariant under the rescaling). Rescaled points satisfy
//! y_1^2 = 1 - sum_{k>=2} p_k y_k^2, the exact analogue of the unit-sphere
//! relation.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::binom;
use crate::config::{profile, realize_scaled, validate, ConfigError, GramMatrix};
use crate::exec;
use crate::matrix::{
    determinant_exact, determinant_float_guarded, rank_exact, rank_float, MatrixError, ScalarMatrix,
};
use crate::monomials::{enumerate, ExponentVector, MonomialSet, SetKind};
use crate::polyring::{build_annihilator, PolyError, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertificateError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("evaluation matrix needs a nonempty product list")]
    EmptyProductList,
    #[error("numerically inconclusive: {0}")]
    NumericInconclusive(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    HypothesisFailed,
    NumericInconclusive,
}

/// Full record of a certificate run.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub r: usize,
    pub n: usize,
    pub s: u32,
    pub t: usize,
    pub a_list: Vec<Scalar>,
    pub eval_matrix_ok: bool,
    pub eval_matrix_det: Option<Scalar>,
    pub support_ok: bool,
    pub reduction_ok: bool,
    pub rank: Option<usize>,
    #[serde(serialize_with = "crate::serialize_biguint")]
    pub bound: BigUint,
    pub verdict: Verdict,
    pub failure_witness: Option<String>,
}

impl CertificateReport {
    fn failed(r: usize, n: usize, witness: String) -> Self {
        CertificateReport {
            r,
            n,
            s: 0,
            t: 0,
            a_list: Vec::new(),
            eval_matrix_ok: false,
            eval_matrix_det: None,
            support_ok: false,
            reduction_ok: false,
            rank: None,
            bound: BigUint::from(0u32),
            verdict: Verdict::HypothesisFailed,
            failure_witness: Some(witness),
        }
    }
}

/// Evaluation matrix at Gram level: entry (i, j) is prod_m (g_ij^2 - a_m^2),
/// computed from inner products alone. When the configuration's inner
/// products are exactly {+-a_m}, the matrix is diagonal with equal nonzero
/// entries.
pub fn eval_matrix(g: &GramMatrix, a_list: &[Scalar]) -> Result<ScalarMatrix, CertificateError> {
    if a_list.is_empty() {
        return Err(CertificateError::EmptyProductList);
    }
    let r = g.size();
    let squares: Vec<Scalar> = a_list.iter().map(|a| a.square()).collect();
    let mut m = ScalarMatrix::zero(r, r);
    for i in 0..r {
        for j in 0..r {
            let gij2 = g.get(i, j).square();
            let mut prod = Scalar::one();
            for a2 in &squares {
                prod = prod
                    .try_mul(&gij2.try_sub(a2).map_err(MatrixError::from)?)
                    .map_err(MatrixError::from)?;
            }
            m.set(i, j, prod);
        }
    }
    Ok(m)
}

/// Non-singularity check with the determinant as evidence: exact
/// fraction-free elimination for exact matrices, guarded LU for floats
/// (a determinant within 1e-9 of the scale is an error, never a verdict).
pub fn check_nonsingular(m: &ScalarMatrix) -> Result<(bool, Scalar), CertificateError> {
    if m.has_float() {
        match determinant_float_guarded(m) {
            Ok((ok, det)) => Ok((ok, Scalar::float(det))),
            Err(MatrixError::NumericInconclusive { det, threshold }) => {
                Err(CertificateError::NumericInconclusive(format!(
                    "|det| = {} below threshold {}",
                    det.abs(),
                    threshold
                )))
            }
            Err(e) => Err(e.into()),
        }
    } else {
        let det = determinant_exact(m)?;
        Ok((!det.is_zero(), det))
    }
}

/// Run the complete certificate, deriving the product values a_1..a_t from
/// the configuration's own profile.
pub fn full_certificate(g: &GramMatrix) -> CertificateReport {
    let prof = match profile(g) {
        Ok(p) => p,
        Err(e @ ConfigError::ProfileAmbiguous(_, _)) => {
            let mut report = CertificateReport::failed(g.size(), g.ambient_n(), e.to_string());
            report.verdict = Verdict::NumericInconclusive;
            return report;
        }
        Err(e) => {
            return CertificateReport::failed(
                g.size(),
                g.ambient_n(),
                format!("profiling failed: {e}"),
            )
        }
    };
    match prof.antipodal_type {
        Some(a_list) => certificate_with_products(g, &a_list),
        None => CertificateReport::failed(
            g.size(),
            g.ambient_n(),
            format!(
                "inner products {:?} are not of antipodal type {{+-a_m}} with 0 < a_m < 1",
                prof.inner_products
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
            ),
        ),
    }
}

/// Run the certificate against an explicit product list. Every off-diagonal
/// inner product must lie in {+-a_m} (a subset is fine, which is what makes
/// principal sub-configurations certifiable with the parent's list).
pub fn certificate_with_products(g: &GramMatrix, a_list: &[Scalar]) -> CertificateReport {
    let r = g.size();
    let n = g.ambient_n();
    match hypothesis_check(g, a_list) {
        Ok(()) => {}
        Err(witness) => return CertificateReport::failed(r, n, witness),
    }
    let t = a_list.len();
    let s = 2 * t as u32;
    let bound = binom((n as i64) + (s as i64) - 1, s as i64);
    let mut report = CertificateReport {
        r,
        n,
        s,
        t,
        a_list: a_list.to_vec(),
        eval_matrix_ok: false,
        eval_matrix_det: None,
        support_ok: false,
        reduction_ok: false,
        rank: None,
        bound,
        verdict: Verdict::HypothesisFailed,
        failure_witness: None,
    };

    // Stage 1: Gram-level evaluation matrix.
    let b = match eval_matrix(g, a_list) {
        Ok(b) => b,
        Err(e) => {
            report.failure_witness = Some(e.to_string());
            return report;
        }
    };
    match check_nonsingular(&b) {
        Ok((ok, det)) => {
            report.eval_matrix_ok = ok;
            report.eval_matrix_det = Some(det);
            if !ok {
                report.failure_witness = Some("evaluation matrix is singular".to_string());
                return report;
            }
        }
        Err(CertificateError::NumericInconclusive(msg)) => {
            report.verdict = Verdict::NumericInconclusive;
            report.failure_witness = Some(msg);
            return report;
        }
        Err(e) => {
            report.failure_witness = Some(e.to_string());
            return report;
        }
    }

    // Stage 2: polynomial level in the rescaled frame.
    match polynomial_stage(g, a_list, &b, &mut report) {
        Ok(()) => {}
        Err(CertificateError::NumericInconclusive(msg)) => {
            report.verdict = Verdict::NumericInconclusive;
            report.failure_witness = Some(msg);
            return report;
        }
        Err(e) => {
            report.failure_witness = Some(e.to_string());
            return report;
        }
    }

    let rank_full = report.rank == Some(r);
    let within_bound = BigUint::from(r) <= report.bound;
    if report.eval_matrix_ok
        && report.support_ok
        && report.reduction_ok
        && rank_full
        && within_bound
    {
        report.verdict = Verdict::Certified;
    } else if report.failure_witness.is_none() {
        report.failure_witness = Some(format!(
            "support_ok={}, reduction_ok={}, rank={:?} (need {r}), bound={}",
            report.support_ok, report.reduction_ok, report.rank, report.bound
        ));
    }
    report
}

fn hypothesis_check(g: &GramMatrix, a_list: &[Scalar]) -> Result<(), String> {
    if a_list.is_empty() {
        return Err("empty product list".to_string());
    }
    let validation = validate(g).map_err(|e| format!("validation failed: {e}"))?;
    if !validation.valid {
        return Err(format!(
            "not a valid spherical Gram matrix: {}",
            validation.witness.unwrap_or_default()
        ));
    }
    let one = Scalar::one();
    for a in a_list {
        let positive = a.sign() == std::cmp::Ordering::Greater;
        let below_one = matches!(a.try_cmp(&one), Ok(std::cmp::Ordering::Less));
        if !positive || !below_one {
            return Err(format!("product value {a} violates 0 < a < 1"));
        }
    }
    for i in 0..g.size() {
        for j in (i + 1)..g.size() {
            let v = g.get(i, j);
            let matched = a_list.iter().any(|a| v == a || v == &a.neg());
            if !matched {
                return Err(format!(
                    "inner product ({i},{j}) = {v} is outside {{+-a_m}}"
                ));
            }
        }
    }
    Ok(())
}

struct PointOutcome {
    support_ok: bool,
    reduction_ok: bool,
    coeff_row: Vec<Scalar>,
    witness: Option<String>,
}

fn polynomial_stage(
    g: &GramMatrix,
    a_list: &[Scalar],
    b: &ScalarMatrix,
    report: &mut CertificateReport,
) -> Result<(), CertificateError> {
    let float_mode = g.is_float_mode();
    let scaled = realize_scaled(g)?;
    let dim = scaled.dim.max(1);
    let s = report.s;

    // Weighted linear-form coefficients: w_i[k] = p_k * u_i[k].
    let mut weighted: Vec<Vec<Scalar>> = Vec::with_capacity(g.size());
    for u in &scaled.points {
        let mut w = Vec::with_capacity(dim);
        for (k, coord) in u.iter().enumerate() {
            w.push(scaled.pivots[k].try_mul(coord).map_err(MatrixError::from)?);
        }
        if w.is_empty() {
            w.push(Scalar::zero());
        }
        weighted.push(w);
    }

    // The quadric relation: y_1^2 = 1 - sum_{k>=2} p_k y_k^2.
    let mut rhs = Polynomial::one(dim);
    for k in 1..scaled.dim {
        let mut e = vec![0u32; dim];
        e[k] = 2;
        let term = Polynomial::from_terms(dim, [(ExponentVector::new(e), scaled.pivots[k].neg())])?;
        rhs = rhs.add(&term)?;
    }

    let columns = enumerate(MonomialSet::new(SetKind::Reduced, dim, s))
        .map_err(|e| CertificateError::NumericInconclusive(e.to_string()))?;
    let col_index: std::collections::HashMap<&ExponentVector, usize> =
        columns.iter().enumerate().map(|(i, c)| (c, i)).collect();

    let indices: Vec<usize> = (0..g.size()).collect();
    let outcomes: Vec<Result<PointOutcome, CertificateError>> =
        exec::map_indexed(&indices, |_, &i| {
            point_outcome(
                i,
                &weighted,
                &scaled.points,
                a_list,
                &rhs,
                s,
                dim,
                &columns,
                &col_index,
                b,
                float_mode,
            )
        });

    let mut rows = Vec::with_capacity(g.size());
    let mut support_ok = true;
    let mut reduction_ok = true;
    for outcome in outcomes {
        let o = outcome?;
        support_ok &= o.support_ok;
        reduction_ok &= o.reduction_ok;
        if let Some(w) = o.witness {
            if report.failure_witness.is_none() {
                report.failure_witness = Some(w);
            }
        }
        rows.push(o.coeff_row);
    }
    report.support_ok = support_ok;
    report.reduction_ok = reduction_ok;

    let coeff = ScalarMatrix::from_rows(rows)?;
    let rank = if float_mode {
        rank_float(&coeff)
    } else {
        rank_exact(&coeff)?
    };
    report.rank = Some(rank);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn point_outcome(
    i: usize,
    weighted: &[Vec<Scalar>],
    points: &[Vec<Scalar>],
    a_list: &[Scalar],
    rhs: &Polynomial,
    s: u32,
    dim: usize,
    columns: &[ExponentVector],
    col_index: &std::collections::HashMap<&ExponentVector, usize>,
    b: &ScalarMatrix,
    float_mode: bool,
) -> Result<PointOutcome, CertificateError> {
    let annihilator = build_annihilator(&weighted[i], a_list)?;
    let reduced = annihilator.reduce_first_var(rhs)?;

    let mut witness = None;
    let support_ok = if float_mode {
        support_check_float(&reduced, s, &mut witness)?
    } else {
        let ok = reduced.support_within(SetKind::Reduced, s);
        if !ok {
            witness = Some(format!(
                "reduced polynomial for point {i} has a monomial outside the capped even-degree set"
            ));
        }
        ok
    };

    // Reduction must preserve values at every realized point: the rewrite is
    // only valid on the quadric, and the points lie on it.
    let mut reduction_ok = true;
    for (j, u) in points.iter().enumerate() {
        let point: Vec<Scalar> = if u.is_empty() {
            vec![Scalar::zero(); dim]
        } else {
            u.clone()
        };
        let before = annihilator.eval(&point)?;
        let after = reduced.eval(&point)?;
        if before != after || &before != b.get(i, j) {
            reduction_ok = false;
            if witness.is_none() {
                witness = Some(format!(
                    "reduction changed the value at point pair ({i},{j}): {before} vs {after}"
                ));
            }
            break;
        }
    }

    let mut row = vec![Scalar::zero(); columns.len()];
    for (alpha, c) in reduced.terms() {
        if let Some(&col) = col_index.get(alpha) {
            row[col] = c.clone();
        }
    }
    Ok(PointOutcome {
        support_ok,
        reduction_ok,
        coeff_row: row,
        witness,
    })
}

/// Float support check: coefficients at most 1e-9 in magnitude count as zero,
/// but discarding anything above 1e-12 downgrades the run to inconclusive.
fn support_check_float(
    reduced: &Polynomial,
    s: u32,
    witness: &mut Option<String>,
) -> Result<bool, CertificateError> {
    let set = MonomialSet::new(SetKind::Reduced, reduced.ambient_n(), s);
    for (alpha, c) in reduced.terms() {
        if set.contains(alpha) {
            continue;
        }
        let magnitude = c.to_f64().abs();
        if magnitude > 1e-9 {
            *witness = Some(format!(
                "float coefficient {magnitude:e} on out-of-support monomial {alpha}"
            ));
            return Ok(false);
        }
        if magnitude > 1e-12 {
            return Err(CertificateError::NumericInconclusive(format!(
                "discarded coefficient {magnitude:e} on {alpha} exceeds 1e-12"
            )));
        }
    }
    Ok(true)
}

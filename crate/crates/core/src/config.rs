//! Spherical point configurations, modeled intrinsically by their Gram
//! matrices. Coordinates are derived on demand, never primary: every
//! hypothesis we check is determined by inner products, and staying at the
//! Gram level preserves exactness where coordinates would force radicals.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{ldl_symmetric, rank_exact, rank_float, MatrixError, ScalarMatrix};
use crate::scalar::{check_compatible, Rational, Scalar, ScalarError, DEFAULT_FLOAT_TOL};

/// Zero/distinctness tolerance used by float-mode pivots and realization.
pub const FLOAT_PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("matrix is not a valid Gram matrix: {0}")]
    InvalidGram(String),
    #[error("exact realization impossible (nested radicals); retry in float mode")]
    FallbackToFloat,
    #[error("float profile ambiguous: values {0} and {1} are within 10x tolerance but not merged")]
    ProfileAmbiguous(String, String),
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),
    #[error("point {0} does not have unit norm")]
    NotUnitNorm(usize),
    #[error("gram file is malformed: {0}")]
    MalformedFile(String),
}

/// Symmetric matrix of pairwise inner products with a claimed ambient
/// dimension. Whether it is a *valid* spherical Gram matrix (unit diagonal,
/// PSD, rank within the ambient dimension) is reported by [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    entries: ScalarMatrix,
    ambient_n: usize,
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<Scalar>>, ambient_n: usize) -> Result<Self, ConfigError> {
        let entries = ScalarMatrix::from_rows(rows)?;
        entries.check_symmetric()?;
        entries.check_kinds()?;
        Ok(GramMatrix { entries, ambient_n })
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        self.entries.get(i, j)
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.entries
    }

    pub fn is_float_mode(&self) -> bool {
        self.entries.has_float()
    }

    /// Convert every entry to float mode with the given tolerance.
    pub fn to_float_mode(&self, tol: f64) -> GramMatrix {
        GramMatrix {
            entries: self.entries.map(|s| s.to_float_mode(tol)),
            ambient_n: self.ambient_n,
        }
    }

    /// Principal sub-configuration on the given point indices.
    pub fn principal(&self, indices: &[usize]) -> GramMatrix {
        GramMatrix {
            entries: self.entries.principal_submatrix(indices),
            ambient_n: self.ambient_n,
        }
    }

    /// Re-declare the claimed minimal embedding dimension (points produced in
    /// a higher-dimensional coordinate system may span a smaller subspace).
    /// Validation still enforces rank <= ambient_n.
    pub fn with_ambient(mut self, ambient_n: usize) -> GramMatrix {
        self.ambient_n = ambient_n;
        self
    }
}

/// Validation report: unit diagonal, positive semidefiniteness via exact
/// pivoted LDL (all pivots >= 0), and rank at most the ambient dimension.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub r: usize,
    pub ambient_n: usize,
    pub unit_diagonal: bool,
    pub psd: bool,
    pub rank: usize,
    pub rank_within_ambient: bool,
    pub pivots: Vec<Scalar>,
    pub witness: Option<String>,
    pub valid: bool,
}

pub fn validate(g: &GramMatrix) -> Result<ValidationReport, ConfigError> {
    let r = g.size();
    let float_mode = g.is_float_mode();
    let mut witness = None;
    let mut unit_diagonal = true;
    for i in 0..r {
        if !g.get(i, i).is_one() {
            unit_diagonal = false;
            witness = Some(format!(
                "diagonal entry ({i},{i}) = {} is not 1",
                g.get(i, i)
            ));
            break;
        }
    }
    let tol = if float_mode { FLOAT_PIVOT_TOL } else { 0.0 };
    let ldl = ldl_symmetric(g.matrix(), tol)?;
    if !ldl.psd && witness.is_none() {
        witness = ldl.failure.clone();
    }
    // Rank by fraction-free elimination, independent of the LDL pass (whose
    // pivot count only equals the rank on PSD inputs).
    let rank = if float_mode {
        rank_float(g.matrix())
    } else {
        rank_exact(g.matrix())?
    };
    debug_assert!(
        !ldl.psd || rank == ldl.rank,
        "rank routes agree on PSD input"
    );
    let rank_within_ambient = rank <= g.ambient_n;
    if ldl.psd && unit_diagonal && !rank_within_ambient {
        witness = Some(format!(
            "rank {} exceeds ambient dimension {}",
            rank, g.ambient_n
        ));
    }
    Ok(ValidationReport {
        r,
        ambient_n: g.ambient_n,
        unit_diagonal,
        psd: ldl.psd,
        rank,
        rank_within_ambient,
        pivots: ldl.pivots,
        witness,
        valid: unit_diagonal && ldl.psd && rank_within_ambient,
    })
}

/// The distance structure of a configuration: distinct off-diagonal inner
/// products sorted ascending, their count s, the antipodal decomposition
/// {+-a_1, ..., +-a_t} when one exists with 0 < a_m < 1, and the sign of the
/// inner-product sum.
#[derive(Clone, Debug, Serialize)]
pub struct DistanceProfile {
    pub inner_products: Vec<Scalar>,
    pub s: usize,
    pub antipodal_type: Option<Vec<Scalar>>,
    pub sum_nonneg: bool,
    pub distance_squares: Vec<Scalar>,
}

pub fn profile(g: &GramMatrix) -> Result<DistanceProfile, ConfigError> {
    let r = g.size();
    let mut values: Vec<Scalar> = Vec::new();
    for i in 0..r {
        for j in (i + 1)..r {
            values.push(g.get(i, j).clone());
        }
    }
    check_compatible(values.iter())?;
    let distinct = if g.is_float_mode() {
        distinct_floats(&values)?
    } else {
        distinct_exact(values)
    };
    let two = Scalar::int(2);
    let distance_squares = distinct.iter().map(|t| &two - &(&two * t)).collect();
    let sum = crate::bounds::scalar_sum(&distinct);
    let antipodal_type = detect_antipodal(&distinct);
    Ok(DistanceProfile {
        s: distinct.len(),
        sum_nonneg: sum.sign() != Ordering::Less,
        antipodal_type,
        inner_products: distinct,
        distance_squares,
    })
}

fn distinct_exact(mut values: Vec<Scalar>) -> Vec<Scalar> {
    values.sort_by(|a, b| a.try_cmp(b).expect("compatibility checked"));
    values.dedup();
    values
}

/// Float distinctness with a guard: if two values that remain distinct fall
/// within 10x the merge tolerance of each other, fail loudly rather than
/// silently changing s.
fn distinct_floats(values: &[Scalar]) -> Result<Vec<Scalar>, ConfigError> {
    let mut sorted: Vec<Scalar> = values.to_vec();
    sorted.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
    let tol = sorted
        .iter()
        .map(|s| s.tol())
        .fold(FLOAT_PIVOT_TOL, f64::max);
    let mut distinct: Vec<Scalar> = Vec::new();
    for v in sorted {
        match distinct.last() {
            Some(last) if (last.to_f64() - v.to_f64()).abs() <= tol => {}
            _ => distinct.push(v),
        }
    }
    for pair in distinct.windows(2) {
        let gap = (pair[1].to_f64() - pair[0].to_f64()).abs();
        if gap <= 10.0 * tol {
            return Err(ConfigError::ProfileAmbiguous(
                pair[0].to_string(),
                pair[1].to_string(),
            ));
        }
    }
    Ok(distinct)
}

/// Detects inner products of the form {-a_t, ..., -a_1, a_1, ..., a_t} with
/// 0 < a_m < 1, returning the positive halves sorted ascending.
fn detect_antipodal(distinct: &[Scalar]) -> Option<Vec<Scalar>> {
    let s = distinct.len();
    if s == 0 || !s.is_multiple_of(2) {
        return None;
    }
    let one = Scalar::one();
    let t = s / 2;
    // Sorted ascending: the first t values must be the negatives of the last
    // t reversed, all nonzero and strictly inside (-1, 1).
    for m in 0..t {
        let pos = &distinct[s - 1 - m];
        let neg = &distinct[m];
        if pos.sign() != Ordering::Greater {
            return None;
        }
        if &pos.neg() != neg {
            return None;
        }
        if pos.try_cmp(&one).ok()? != Ordering::Less {
            return None;
        }
    }
    Some(distinct[t..].to_vec())
}

/// A realized configuration: points with unit norm (exactly, or within
/// tolerance in float mode).
#[derive(Clone, Debug, Serialize)]
pub struct Configuration {
    points: Vec<Vec<Scalar>>,
    ambient_n: usize,
}

impl Configuration {
    pub fn new(points: Vec<Vec<Scalar>>, ambient_n: usize) -> Result<Self, ConfigError> {
        for (idx, p) in points.iter().enumerate() {
            if p.len() != ambient_n {
                return Err(ConfigError::InvalidGram(format!(
                    "point {idx} has {} coordinates, ambient dimension is {ambient_n}",
                    p.len()
                )));
            }
            let norm2 = dot(p, p)?;
            if !norm2.is_one() {
                return Err(ConfigError::NotUnitNorm(idx));
            }
        }
        Ok(Configuration { points, ambient_n })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn point(&self, i: usize) -> &[Scalar] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    /// Gram matrix of pairwise inner products, computed exactly for exact
    /// coordinates.
    pub fn gram(&self) -> Result<GramMatrix, ConfigError> {
        let r = self.points.len();
        let mut rows = vec![vec![Scalar::zero(); r]; r];
        for i in 0..r {
            for j in i..r {
                let v = dot(&self.points[i], &self.points[j])?;
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
        GramMatrix::new(rows, self.ambient_n)
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Result<Scalar, ScalarError> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.try_add(&x.try_mul(y)?)?;
    }
    Ok(acc)
}

/// Realize coordinates from a valid Gram matrix via LDL^T: point i has
/// coordinates L[i][k] * sqrt(pivot_k) on the nonzero-pivot columns, packed
/// into the first rank(g) slots and padded with zeros to the ambient
/// dimension.
///
/// Exact mode extends Q by a single square root when needed; pivots whose
/// roots would require nested radicals signal [`ConfigError::FallbackToFloat`]
/// so the caller can decide.
pub fn realize(g: &GramMatrix) -> Result<Configuration, ConfigError> {
    if g.is_float_mode() {
        return realize_float(g);
    }
    let report = validate(g)?;
    if !report.valid {
        return Err(ConfigError::InvalidGram(report.witness.unwrap_or_default()));
    }
    let ldl = ldl_symmetric(g.matrix(), 0.0)?;
    let mut context_d = check_compatible(g.matrix().entries().iter())?.discriminant;
    let nonzero: Vec<usize> = (0..g.size())
        .filter(|&k| !ldl.pivots[k].is_zero())
        .collect();
    let mut roots = Vec::with_capacity(nonzero.len());
    for &k in &nonzero {
        let root = match &ldl.pivots[k] {
            Scalar::Rational(p) => match Scalar::sqrt_extend(p, context_d) {
                Ok(r) => r,
                Err(ScalarError::Inexpressible) if context_d.is_none() => {
                    let r = Scalar::sqrt_auto(p)?;
                    context_d = r.discriminant();
                    r
                }
                Err(ScalarError::Inexpressible) => return Err(ConfigError::FallbackToFloat),
                Err(e) => return Err(e.into()),
            },
            Scalar::Quad(q) => match q.sqrt_in_field() {
                Some(r) => Scalar::Quad(r),
                None => return Err(ConfigError::FallbackToFloat),
            },
            Scalar::Float(_) => unreachable!("exact mode"),
        };
        roots.push(root);
    }
    let mut points = Vec::with_capacity(g.size());
    for i in 0..g.size() {
        let mut coords = vec![Scalar::zero(); g.ambient_n];
        for (slot, (&k, root)) in nonzero.iter().zip(&roots).enumerate() {
            coords[slot] = ldl.lower.get(i, k).try_mul(root)?;
        }
        points.push(coords);
    }
    Configuration::new(points, g.ambient_n)
}

fn realize_float(g: &GramMatrix) -> Result<Configuration, ConfigError> {
    let ldl = ldl_symmetric(g.matrix(), FLOAT_PIVOT_TOL)?;
    if !ldl.psd {
        return Err(ConfigError::InvalidGram(ldl.failure.unwrap_or_default()));
    }
    let tol = g
        .matrix()
        .entries()
        .iter()
        .map(|s| s.tol())
        .fold(DEFAULT_FLOAT_TOL, f64::max);
    let nonzero: Vec<usize> = (0..g.size())
        .filter(|&k| ldl.pivots[k].to_f64().abs() > FLOAT_PIVOT_TOL)
        .collect();
    let mut points = Vec::with_capacity(g.size());
    for i in 0..g.size() {
        let mut coords = vec![Scalar::float_with_tol(0.0, tol); g.ambient_n];
        for (slot, &k) in nonzero.iter().enumerate() {
            let v = ldl.lower.get(i, k).to_f64() * ldl.pivots[k].to_f64().sqrt();
            coords[slot] = Scalar::float_with_tol(v, tol);
        }
        points.push(coords);
    }
    // Unit norms hold within tolerance by construction of the factorization.
    Ok(Configuration {
        points,
        ambient_n: g.ambient_n,
    })
}

/// Coordinates in a diagonally rescaled frame that stay inside the base
/// field of the Gram entries: point i is row i of the unit lower factor L on
/// the nonzero-pivot columns, and `pivots` are the corresponding LDL pivots
/// (the first is always 1 for a unit-diagonal matrix).
///
/// With the weighted inner product <u, w>_p = sum_k p_k u_k w_k these points
/// reproduce the Gram matrix exactly, and they satisfy the quadric relation
/// y_1^2 = 1 - sum_{k>=2} p_k y_k^2 wherever the original points satisfy the
/// unit-sphere relation. Monomial supports, evaluation values, and ranks are
/// invariant under this rescaling, which is what the certificate checks.
#[derive(Clone, Debug)]
pub struct ScaledRealization {
    pub points: Vec<Vec<Scalar>>,
    pub pivots: Vec<Scalar>,
    pub dim: usize,
}

pub fn realize_scaled(g: &GramMatrix) -> Result<ScaledRealization, ConfigError> {
    let float_mode = g.is_float_mode();
    let tol = if float_mode { FLOAT_PIVOT_TOL } else { 0.0 };
    let ldl = ldl_symmetric(g.matrix(), tol)?;
    if !ldl.psd {
        return Err(ConfigError::InvalidGram(ldl.failure.unwrap_or_default()));
    }
    let nonzero: Vec<usize> = (0..g.size())
        .filter(|&k| !ldl.pivots[k].is_zero())
        .collect();
    let dim = nonzero.len();
    let pivots: Vec<Scalar> = nonzero.iter().map(|&k| ldl.pivots[k].clone()).collect();
    if let Some(first) = pivots.first() {
        debug_assert!(
            first.is_one(),
            "first pivot of a unit-diagonal Gram matrix is 1"
        );
    }
    let points = (0..g.size())
        .map(|i| {
            nonzero
                .iter()
                .map(|&k| ldl.lower.get(i, k).clone())
                .collect()
        })
        .collect();
    Ok(ScaledRealization {
        points,
        pivots,
        dim,
    })
}

// ---------------------------------------------------------------------------
// Built-in catalog
// ---------------------------------------------------------------------------

/// Catalog of published Gram matrices addressable by name:
/// `simplex(n)`, `cross_polytope(n)`, `orthonormal(n)`, `hexagon_3lines`,
/// `icosahedron_6lines`.
pub fn builtin(name: &str) -> Result<GramMatrix, ConfigError> {
    let trimmed = name.trim();
    if let Some(n) = parse_paramized(trimmed, "simplex") {
        return simplex(n);
    }
    if let Some(n) = parse_paramized(trimmed, "cross_polytope") {
        return cross_polytope(n);
    }
    if let Some(n) = parse_paramized(trimmed, "orthonormal") {
        return orthonormal(n);
    }
    match trimmed {
        "hexagon_3lines" => hexagon_3lines(),
        "icosahedron_6lines" => icosahedron_6lines(),
        other => Err(ConfigError::UnknownCatalog(other.to_string())),
    }
}

pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "simplex(n)",
        "cross_polytope(n)",
        "orthonormal(n)",
        "hexagon_3lines",
        "icosahedron_6lines",
    ]
}

fn parse_paramized(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    inner.trim().parse().ok()
}

fn require(cond: bool, msg: &str) -> Result<(), ConfigError> {
    if cond {
        Ok(())
    } else {
        Err(ConfigError::InvalidGram(msg.to_string()))
    }
}

/// Regular simplex: n+1 unit points in R^n at pairwise inner product -1/n.
pub fn simplex(n: usize) -> Result<GramMatrix, ConfigError> {
    require(n >= 1, "simplex needs n >= 1")?;
    let r = n + 1;
    let off = Scalar::ratio(-1, n as i64);
    let rows = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { Scalar::one() } else { off.clone() })
                .collect()
        })
        .collect();
    GramMatrix::new(rows, n)
}

/// The 2n points +-e_i: inner products -1 (antipodal pairs) and 0.
pub fn cross_polytope(n: usize) -> Result<GramMatrix, ConfigError> {
    require(n >= 1, "cross_polytope needs n >= 1")?;
    let r = 2 * n;
    let rows = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else if i % n == j % n {
                        Scalar::int(-1)
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect();
    GramMatrix::new(rows, n)
}

pub fn orthonormal(n: usize) -> Result<GramMatrix, ConfigError> {
    require(n >= 1, "orthonormal needs n >= 1")?;
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect();
    GramMatrix::new(rows, n)
}

/// Three unit vectors in the plane at angles 0, 60, 120 degrees: the three
/// long diagonals of a regular hexagon, inner products {-1/2, 1/2}.
pub fn hexagon_3lines() -> Result<GramMatrix, ConfigError> {
    let h = Scalar::ratio(1, 2);
    let rows = vec![
        vec![Scalar::one(), h.clone(), h.neg()],
        vec![h.clone(), Scalar::one(), h.clone()],
        vec![h.neg(), h.clone(), Scalar::one()],
    ];
    GramMatrix::new(rows, 2)
}

/// The six diagonals of the regular icosahedron: representatives built from
/// the integer golden-ratio vectors, normalized exactly in Q(sqrt(5)).
/// All off-diagonal inner products are +-1/sqrt(5).
pub fn icosahedron_6lines() -> Result<GramMatrix, ConfigError> {
    let phi = Scalar::quad(Rational::ratio(1, 2), Rational::ratio(1, 2), 5)?;
    let zero = Scalar::zero();
    let one = Scalar::one();
    let reps: Vec<Vec<Scalar>> = vec![
        vec![zero.clone(), one.clone(), phi.clone()],
        vec![zero.clone(), one.clone(), phi.neg()],
        vec![one.clone(), phi.clone(), zero.clone()],
        vec![one.clone(), phi.neg(), zero.clone()],
        vec![phi.clone(), zero.clone(), one.clone()],
        vec![phi.neg(), zero.clone(), one.clone()],
    ];
    let norm2 = dot(&reps[0], &reps[0])?;
    let mut rows = vec![vec![Scalar::zero(); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            rows[i][j] = dot(&reps[i], &reps[j])?.try_div(&norm2)?;
        }
    }
    GramMatrix::new(rows, 3)
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// JSON file layout for Gram matrices: dimensions plus row-major serialized
/// scalars. `scalar_kind` is "rational", "quadratic", or "float".
#[derive(Serialize, Deserialize)]
pub struct GramFile {
    pub n: usize,
    pub r: usize,
    pub scalar_kind: String,
    pub entries: Vec<String>,
}

pub fn to_json(g: &GramMatrix) -> String {
    let kind = if g.is_float_mode() {
        "float"
    } else if g
        .matrix()
        .entries()
        .iter()
        .any(|s| s.discriminant().is_some())
    {
        "quadratic"
    } else {
        "rational"
    };
    let file = GramFile {
        n: g.ambient_n,
        r: g.size(),
        scalar_kind: kind.to_string(),
        entries: g.matrix().entries().iter().map(|s| s.to_string()).collect(),
    };
    serde_json::to_string_pretty(&file).expect("gram file serialization")
}

pub fn from_json(text: &str) -> Result<GramMatrix, ConfigError> {
    let file: GramFile =
        serde_json::from_str(text).map_err(|e| ConfigError::MalformedFile(e.to_string()))?;
    if file.entries.len() != file.r * file.r {
        return Err(ConfigError::MalformedFile(format!(
            "expected {} entries for r = {}, found {}",
            file.r * file.r,
            file.r,
            file.entries.len()
        )));
    }
    let mut parsed = Vec::with_capacity(file.entries.len());
    for e in &file.entries {
        let s: Scalar = e.parse().map_err(ConfigError::Scalar)?;
        parsed.push(s);
    }
    let expected_float = file.scalar_kind == "float";
    if parsed.iter().any(|s| !s.is_exact()) != expected_float {
        return Err(ConfigError::MalformedFile(format!(
            "scalar_kind {:?} does not match the parsed entries",
            file.scalar_kind
        )));
    }
    let rows: Vec<Vec<Scalar>> = parsed.chunks(file.r).map(|chunk| chunk.to_vec()).collect();
    GramMatrix::new(rows, file.n)
}

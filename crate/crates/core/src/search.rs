//! Search for large s-distance subsets of candidate vector families: build a
//! compatibility graph whose edges mark pairs with an allowed inner product,
//! then run exact branch-and-bound maximum clique with a greedy-coloring
//! bound. A clique is precisely a subset whose inner products stay inside the
//! allowed set, hence an s-distance set when the set has at most s values.

use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{applicable_bounds, BoundReport};
use crate::config::{self, ConfigError, Configuration, DistanceProfile, GramMatrix};
use crate::exec;
use crate::scalar::{Rational, Scalar, ScalarError};

/// Hard cap on generated family sizes.
pub const DEFAULT_FAMILY_CAP: usize = 4096;

/// Most distinct inner products a family may carry before subset iteration
/// becomes unreasonable.
pub const MAX_DISTINCT_VALUES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("unknown family spec {0:?}")]
    UnknownFamily(String),
    #[error("family would have {0} vectors, cap is {1}")]
    CapExceeded(usize, usize),
    #[error("family has {0} distinct inner products, limit is {1}")]
    FamilyTooRich(usize, usize),
    #[error("allowed value {0} is outside the permitted range")]
    AllowedOutOfRange(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("cannot read family file {path}: {message}")]
    FileRead { path: String, message: String },
}

/// Deterministic generators for candidate vector families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// The 2n signed standard basis vectors +-e_i.
    SignedBasis(usize),
    /// All sign patterns (+-1, ..., +-1)/sqrt(n).
    NormalizedPm1(usize),
    /// Normalized edge midpoints of the regular n-simplex (ambient n+1).
    EdgeMidpointsSimplex(usize),
    /// Gram matrix loaded from a JSON file.
    FromFile(PathBuf),
}

impl FromStr for FamilySpec {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, SearchError> {
        let t = s.trim();
        if let Some(path) = t.strip_prefix("file:") {
            return Ok(FamilySpec::FromFile(PathBuf::from(path)));
        }
        let parse_n = |prefix: &str| -> Option<usize> {
            t.strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?
                .trim()
                .parse()
                .ok()
        };
        if let Some(n) = parse_n("signed_basis") {
            return Ok(FamilySpec::SignedBasis(n));
        }
        if let Some(n) = parse_n("normalized_pm1") {
            return Ok(FamilySpec::NormalizedPm1(n));
        }
        if let Some(n) = parse_n("edge_midpoints_simplex") {
            return Ok(FamilySpec::EdgeMidpointsSimplex(n));
        }
        Err(SearchError::UnknownFamily(s.to_string()))
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilySpec::SignedBasis(n) => write!(f, "signed_basis({n})"),
            FamilySpec::NormalizedPm1(n) => write!(f, "normalized_pm1({n})"),
            FamilySpec::EdgeMidpointsSimplex(n) => write!(f, "edge_midpoints_simplex({n})"),
            FamilySpec::FromFile(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// A family of unit candidate vectors. The Gram matrix is the primary,
/// always-exactly-known description; explicit coordinates are carried when a
/// generator produced them.
#[derive(Clone, Debug)]
pub struct CandidateFamily {
    pub source: String,
    pub gram: GramMatrix,
    pub coordinates: Option<Configuration>,
}

impl CandidateFamily {
    pub fn len(&self) -> usize {
        self.gram.size()
    }

    pub fn is_empty(&self) -> bool {
        self.gram.size() == 0
    }
}

pub fn generate_family(spec: &FamilySpec) -> Result<CandidateFamily, SearchError> {
    match spec {
        FamilySpec::SignedBasis(n) => signed_basis(*n),
        FamilySpec::NormalizedPm1(n) => normalized_pm1(*n),
        FamilySpec::EdgeMidpointsSimplex(n) => edge_midpoints_simplex(*n),
        FamilySpec::FromFile(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| SearchError::FileRead {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            let gram = config::from_json(&text)?;
            Ok(CandidateFamily {
                source: format!("file:{}", path.display()),
                gram,
                coordinates: None,
            })
        }
    }
}

fn check_cap(size: usize) -> Result<(), SearchError> {
    if size > DEFAULT_FAMILY_CAP {
        return Err(SearchError::CapExceeded(size, DEFAULT_FAMILY_CAP));
    }
    Ok(())
}

fn family_from_points(
    source: String,
    points: Vec<Vec<Scalar>>,
    ambient: usize,
) -> Result<CandidateFamily, SearchError> {
    let configuration = Configuration::new(points, ambient)?;
    let gram = configuration.gram()?;
    Ok(CandidateFamily {
        source,
        gram,
        coordinates: Some(configuration),
    })
}

fn signed_basis(n: usize) -> Result<CandidateFamily, SearchError> {
    if n < 1 {
        return Err(SearchError::InvalidInput(
            "signed_basis needs n >= 1".into(),
        ));
    }
    check_cap(2 * n)?;
    let mut points = Vec::with_capacity(2 * n);
    for sign in [1i64, -1] {
        for i in 0..n {
            let mut p = vec![Scalar::zero(); n];
            p[i] = Scalar::int(sign);
            points.push(p);
        }
    }
    family_from_points(format!("signed_basis({n})"), points, n)
}

fn normalized_pm1(n: usize) -> Result<CandidateFamily, SearchError> {
    if n < 1 {
        return Err(SearchError::InvalidInput(
            "normalized_pm1 needs n >= 1".into(),
        ));
    }
    let size = 1usize
        .checked_shl(n as u32)
        .ok_or(SearchError::CapExceeded(usize::MAX, DEFAULT_FAMILY_CAP))?;
    check_cap(size)?;
    let inv_root = Scalar::sqrt_auto(&Rational::ratio(1, n as i64))?;
    let mut points = Vec::with_capacity(size);
    for pattern in 0..size {
        let p = (0..n)
            .map(|k| {
                if pattern >> k & 1 == 0 {
                    inv_root.clone()
                } else {
                    inv_root.neg()
                }
            })
            .collect();
        points.push(p);
    }
    family_from_points(format!("normalized_pm1({n})"), points, n)
}

fn edge_midpoints_simplex(n: usize) -> Result<CandidateFamily, SearchError> {
    if n < 2 {
        return Err(SearchError::InvalidInput(
            "edge_midpoints_simplex needs n >= 2 (midpoints would be zero below that)".into(),
        ));
    }
    let vertices = n + 1;
    let size = vertices * (vertices - 1) / 2;
    check_cap(size)?;
    // Vertex i of the regular simplex sits at (e_i - centroid), so the edge
    // midpoint of {i, j} is parallel to e_i + e_j - 2/(n+1) * ones; a single
    // radical normalizes every midpoint at once.
    let scale = Scalar::sqrt_auto(&Rational::new(
        (vertices as i64).into(),
        (2 * (n as i64 - 1)).into(),
    )?)?;
    let shift = Rational::ratio(2, vertices as i64);
    let mut points = Vec::with_capacity(size);
    for i in 0..vertices {
        for j in (i + 1)..vertices {
            let mut p = Vec::with_capacity(vertices);
            for k in 0..vertices {
                let indicator = (k == i) as i64 + (k == j) as i64;
                let base = Rational::from_int(indicator) - shift.clone();
                p.push(scale.try_mul(&Scalar::Rational(base))?);
            }
            points.push(p);
        }
    }
    let mut family = family_from_points(format!("edge_midpoints_simplex({n})"), points, vertices)?;
    // The midpoints span the n-dimensional hyperplane orthogonal to the
    // all-ones vector, so the intrinsic dimension is n, not n+1.
    family.gram = family.gram.with_ambient(n);
    Ok(family)
}

/// Graph on family indices with edges exactly where the pairwise inner
/// product belongs to the allowed set.
#[derive(Clone, Debug)]
pub struct CompatibilityGraph {
    n: usize,
    adj: Vec<Vec<bool>>,
    pub allowed: Vec<Scalar>,
}

impl CompatibilityGraph {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&b| b).count()
    }

    pub fn from_adjacency(adj: Vec<Vec<bool>>) -> Self {
        let n = adj.len();
        CompatibilityGraph {
            n,
            adj,
            allowed: Vec::new(),
        }
    }
}

/// Validates an allowed inner-product set: strictly inside (-1, 1), except
/// that -1 is admitted when `allow_antipodal` is set (then the target is the
/// general s-distance bound, not the antipodal-type certificate).
fn check_allowed(allowed: &[Scalar], allow_antipodal: bool) -> Result<(), SearchError> {
    let one = Scalar::one();
    let minus_one = Scalar::int(-1);
    for a in allowed {
        let below_one = matches!(a.try_cmp(&one), Ok(std::cmp::Ordering::Less));
        let above_minus = matches!(a.try_cmp(&minus_one), Ok(std::cmp::Ordering::Greater));
        let is_minus_one = *a == minus_one;
        let ok = below_one && (above_minus || (is_minus_one && allow_antipodal));
        if !ok {
            return Err(SearchError::AllowedOutOfRange(a.to_string()));
        }
    }
    Ok(())
}

pub fn build_graph(
    family: &CandidateFamily,
    allowed: &[Scalar],
    allow_antipodal: bool,
) -> Result<CompatibilityGraph, SearchError> {
    if allowed.is_empty() {
        return Err(SearchError::InvalidInput(
            "allowed set must be nonempty".into(),
        ));
    }
    check_allowed(allowed, allow_antipodal)?;
    let r = family.len();
    let mut adj = vec![vec![false; r]; r];
    for i in 0..r {
        for j in (i + 1)..r {
            let v = family.gram.get(i, j);
            if allowed.iter().any(|a| a == v) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    Ok(CompatibilityGraph {
        n: r,
        adj,
        allowed: allowed.to_vec(),
    })
}

/// Result of a clique search. `optimal` is true iff the search completed
/// within the node-expansion budget; budget exhaustion is reported this way,
/// never as an error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub size: usize,
    pub witness: Vec<usize>,
    pub optimal: bool,
    pub expansions: u64,
}

struct CliqueSolver<'g> {
    g: &'g CompatibilityGraph,
    best: Vec<usize>,
    expansions: u64,
    budget: u64,
    exhausted: bool,
}

impl<'g> CliqueSolver<'g> {
    fn new(g: &'g CompatibilityGraph, budget: u64) -> Self {
        CliqueSolver {
            g,
            best: Vec::new(),
            expansions: 0,
            budget,
            exhausted: false,
        }
    }

    fn charge(&mut self) -> bool {
        self.expansions += 1;
        if self.expansions > self.budget {
            self.exhausted = true;
        }
        self.exhausted
    }

    /// Greedy coloring of `p` in order; returns the vertices regrouped by
    /// color class with each vertex's 1-based color number.
    fn color_sort(&self, p: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in p {
            let slot = classes
                .iter()
                .position(|class| class.iter().all(|&u| !self.g.adjacent(u, v)));
            match slot {
                Some(c) => classes[c].push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut ordered = Vec::with_capacity(p.len());
        let mut colors = Vec::with_capacity(p.len());
        for (c, class) in classes.iter().enumerate() {
            for &v in class {
                ordered.push(v);
                colors.push(c + 1);
            }
        }
        (ordered, colors)
    }

    fn expand(&mut self, r: &mut Vec<usize>, p: &[usize]) {
        if self.charge() {
            return;
        }
        if p.is_empty() {
            if r.len() > self.best.len() {
                self.best = r.clone();
            }
            return;
        }
        let (ordered, colors) = self.color_sort(p);
        for idx in (0..ordered.len()).rev() {
            if r.len() + colors[idx] <= self.best.len() {
                return;
            }
            let v = ordered[idx];
            r.push(v);
            let next: Vec<usize> = ordered[..idx]
                .iter()
                .copied()
                .filter(|&u| self.g.adjacent(v, u))
                .collect();
            self.expand(r, &next);
            r.pop();
            if self.exhausted {
                return;
            }
        }
    }

    /// Lexicographically smallest clique of exactly `target` vertices, found
    /// by depth-first search in ascending index order. Only used after the
    /// optimum is known, to canonicalize the witness.
    fn lex_smallest(&mut self, target: usize) -> Option<Vec<usize>> {
        let all: Vec<usize> = (0..self.g.vertex_count()).collect();
        let mut chosen = Vec::new();
        self.lex_dfs(&mut chosen, &all, target)
    }

    fn lex_dfs(
        &mut self,
        chosen: &mut Vec<usize>,
        candidates: &[usize],
        target: usize,
    ) -> Option<Vec<usize>> {
        if chosen.len() == target {
            return Some(chosen.clone());
        }
        if self.charge() {
            return None;
        }
        if chosen.len() + candidates.len() < target {
            return None;
        }
        let (_, colors) = self.color_sort(candidates);
        let bound = colors.last().copied().unwrap_or(0);
        if chosen.len() + bound < target {
            return None;
        }
        for (i, &v) in candidates.iter().enumerate() {
            if chosen.len() + (candidates.len() - i) < target {
                return None;
            }
            chosen.push(v);
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&u| self.g.adjacent(v, u))
                .collect();
            if let Some(found) = self.lex_dfs(chosen, &next, target) {
                return Some(found);
            }
            chosen.pop();
            if self.exhausted {
                return None;
            }
        }
        None
    }
}

/// Degeneracy order: repeatedly remove a minimum-degree vertex (smallest
/// index on ties). Returned in removal order.
fn degeneracy_order(g: &CompatibilityGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut degrees: Vec<usize> = (0..n).map(|i| g.degree(i)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&i| !removed[i])
            .min_by_key(|&i| (degrees[i], i))
            .expect("vertices remain");
        removed[v] = true;
        order.push(v);
        for u in 0..n {
            if !removed[u] && g.adjacent(v, u) {
                degrees[u] -= 1;
            }
        }
    }
    order
}

/// Exact maximum clique by branch and bound with a per-node greedy-coloring
/// bound over a degeneracy vertex order. Deterministic: on completion the
/// witness is canonicalized to the lexicographically smallest maximum clique.
pub fn max_clique(g: &CompatibilityGraph, budget: u64) -> CliqueResult {
    let n = g.vertex_count();
    if n == 0 {
        return CliqueResult {
            size: 0,
            witness: Vec::new(),
            optimal: true,
            expansions: 0,
        };
    }
    let budget = budget.max(1);
    let mut solver = CliqueSolver::new(g, budget);
    let mut initial = degeneracy_order(g);
    initial.reverse();
    let mut r = Vec::new();
    solver.expand(&mut r, &initial);
    if solver.best.is_empty() {
        // Any single vertex is a clique; the empty best only happens when the
        // budget died immediately.
        solver.best = vec![0];
    }
    let optimal = !solver.exhausted;
    let mut witness = solver.best.clone();
    if optimal {
        if let Some(lex) = solver.lex_smallest(witness.len()) {
            witness = lex;
        }
    }
    witness.sort_unstable();
    CliqueResult {
        size: witness.len(),
        witness,
        optimal,
        expansions: solver.expansions,
    }
}

/// Outcome of a family search: the best clique over all admissible allowed
/// sets, with the bound comparison for the winning witness.
#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub family: String,
    pub s: u32,
    pub size: usize,
    pub witness: Vec<usize>,
    pub allowed: Vec<Scalar>,
    pub optimal: bool,
    pub expansions: u64,
    pub effective_n: usize,
    pub witness_profile: DistanceProfile,
    pub bounds: Vec<BoundReport>,
}

/// Iterate over every subset of at most s occurring inner products (values
/// outside the admissible range excluded), run max clique per subset, and
/// return the best witness. The budget applies per subset. Subset searches
/// are independent, so they may run in parallel; results merge in a fixed
/// order, making the outcome schedule-independent.
pub fn search_s_distance(
    family: &CandidateFamily,
    s: u32,
    budget: u64,
    allow_antipodal: bool,
) -> Result<SearchOutcome, SearchError> {
    if s < 1 {
        return Err(SearchError::InvalidInput("s must be at least 1".into()));
    }
    if family.is_empty() {
        return Err(SearchError::InvalidInput("family is empty".into()));
    }
    let prof = config::profile(&family.gram)?;
    if prof.s > MAX_DISTINCT_VALUES {
        return Err(SearchError::FamilyTooRich(prof.s, MAX_DISTINCT_VALUES));
    }
    let one = Scalar::one();
    let minus_one = Scalar::int(-1);
    let candidates: Vec<Scalar> = prof
        .inner_products
        .iter()
        .filter(|v| {
            let below_one = matches!(v.try_cmp(&one), Ok(std::cmp::Ordering::Less));
            let above_minus = matches!(v.try_cmp(&minus_one), Ok(std::cmp::Ordering::Greater));
            below_one && (above_minus || (allow_antipodal && **v == minus_one))
        })
        .cloned()
        .collect();

    let max_size = (s as usize).min(candidates.len());
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for k in 1..=max_size {
        combinations(candidates.len(), k, &mut subsets);
    }

    let per_subset: Vec<Result<(usize, CliqueResult), SearchError>> =
        exec::map_indexed(&subsets, |idx, subset| {
            let allowed: Vec<Scalar> = subset.iter().map(|&i| candidates[i].clone()).collect();
            let graph = build_graph(family, &allowed, allow_antipodal)?;
            Ok((idx, max_clique(&graph, budget)))
        });

    let mut best: Option<(usize, CliqueResult)> = None;
    let mut all_optimal = true;
    let mut total_expansions = 0u64;
    for item in per_subset {
        let (idx, result) = item?;
        all_optimal &= result.optimal;
        total_expansions += result.expansions;
        let better = match &best {
            None => true,
            Some((_, cur)) => {
                result.size > cur.size || (result.size == cur.size && result.witness < cur.witness)
            }
        };
        if better {
            best = Some((idx, result));
        }
    }

    let (winner_subset, winner) = match best {
        Some((idx, result)) => (subsets[idx].clone(), result),
        None => (
            Vec::new(),
            CliqueResult {
                size: 1,
                witness: vec![0],
                optimal: true,
                expansions: 0,
            },
        ),
    };
    let allowed: Vec<Scalar> = winner_subset
        .iter()
        .map(|&i| candidates[i].clone())
        .collect();

    let sub = family.gram.principal(&winner.witness);
    let witness_profile = config::profile(&sub)?;
    debug_assert!(witness_profile.s <= s as usize);
    let effective_n = config::validate(&sub)?.rank.max(1);
    let bounds = applicable_bounds(&witness_profile, effective_n as u32);

    Ok(SearchOutcome {
        family: family.source.clone(),
        s,
        size: winner.size,
        witness: winner.witness,
        allowed,
        optimal: all_optimal,
        expansions: total_expansions,
        effective_n,
        witness_profile,
        bounds,
    })
}

/// All k-subsets of {0..n} in lexicographic order, appended to `out`.
fn combinations(n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), out);
}

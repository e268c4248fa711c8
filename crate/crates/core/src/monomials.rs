//! Exponent-vector sets used throughout: all monomials of total degree at
//! most s, the even-degree subset, and the even-degree subset with first
//! exponent capped at 1 (the supports that survive sphere reduction).
//!
//! Enumeration order is graded lexicographic and fixed globally: lower total
//! degree first, and within a degree higher powers of earlier variables first
//! (1, x1, x2, x1^2, x1*x2, x2^2, ...). All coefficient matrices index their
//! columns by this order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonomialError {
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("exponent vector {0} is not a member of {1}")]
    NotAMember(String, String),
    #[error("operation requires an even degree bound, got {0}")]
    OddDegreeBound(u32),
    #[error("cannot parse exponent vector from {0:?}")]
    Parse(String),
}

/// A monomial exponent vector (alpha_1, ..., alpha_n).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// The exponent vector of the single variable x_{i+1} (0-based index).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExponentVector(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn first(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn is_even_degree(&self) -> bool {
        self.total_degree().is_multiple_of(2)
    }

    /// Product of monomials: componentwise exponent sum.
    pub fn combine(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for ExponentVector {
    /// Graded lexicographic: by total degree, then by descending dictionary
    /// order of the exponents, so x1^2 sorts before x1*x2 before x2^2.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for ExponentVector {
    type Err = MonomialError;

    fn from_str(s: &str) -> Result<Self, MonomialError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| MonomialError::Parse(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(ExponentVector(Vec::new()));
        }
        inner
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| MonomialError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }
}

/// Which exponent-vector family a `MonomialSet` denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    /// All vectors with total degree <= s. CLI name: N.
    All,
    /// Even total degree <= s. CLI name: E.
    Even,
    /// First exponent <= 1 and even total degree <= s. CLI name: M.
    Reduced,
}

impl SetKind {
    pub fn short_name(&self) -> &'static str {
        match self {
            SetKind::All => "N",
            SetKind::Even => "E",
            SetKind::Reduced => "M",
        }
    }
}

impl FromStr for SetKind {
    type Err = MonomialError;

    fn from_str(s: &str) -> Result<Self, MonomialError> {
        match s.trim() {
            "N" | "n" | "all" => Ok(SetKind::All),
            "E" | "e" | "even" => Ok(SetKind::Even),
            "M" | "m" | "reduced" => Ok(SetKind::Reduced),
            other => Err(MonomialError::Parse(other.to_string())),
        }
    }
}

/// A parameterized monomial set: kind plus ambient dimension n and degree bound s.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialSet {
    pub kind: SetKind,
    pub n: usize,
    pub s: u32,
}

impl MonomialSet {
    pub fn new(kind: SetKind, n: usize, s: u32) -> Self {
        MonomialSet { kind, n, s }
    }

    pub fn contains(&self, alpha: &ExponentVector) -> bool {
        if alpha.len() != self.n {
            return false;
        }
        let deg = alpha.total_degree();
        if deg > self.s {
            return false;
        }
        match self.kind {
            SetKind::All => true,
            SetKind::Even => deg.is_multiple_of(2),
            SetKind::Reduced => deg.is_multiple_of(2) && alpha.first() <= 1,
        }
    }
}

impl fmt::Display for MonomialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind.short_name(), self.n, self.s)
    }
}

/// Every member of the set exactly once, in graded-lexicographic order.
pub fn enumerate(set: MonomialSet) -> Result<Vec<ExponentVector>, MonomialError> {
    if set.n == 0 {
        return Err(MonomialError::InvalidDimension);
    }
    let mut out = Vec::new();
    let step = match set.kind {
        SetKind::All => 1,
        SetKind::Even | SetKind::Reduced => 2,
    };
    let first_cap = match set.kind {
        SetKind::Reduced => Some(1),
        _ => None,
    };
    let mut deg = 0;
    while deg <= set.s {
        push_fixed_degree(deg, set.n, first_cap, &mut Vec::new(), &mut out);
        deg += step;
    }
    Ok(out)
}

/// Compositions of `deg` into `n` parts, first coordinate descending, so the
/// output arrives already in descending dictionary order within a degree.
fn push_fixed_degree(
    deg: u32,
    n: usize,
    first_cap: Option<u32>,
    prefix: &mut Vec<u32>,
    out: &mut Vec<ExponentVector>,
) {
    if n == 1 {
        if first_cap.is_none_or(|c| deg <= c) {
            let mut v = prefix.clone();
            v.push(deg);
            out.push(ExponentVector(v));
        }
        return;
    }
    let hi = first_cap.map_or(deg, |c| deg.min(c));
    for a in (0..=hi).rev() {
        prefix.push(a);
        push_fixed_degree(deg - a, n - 1, None, prefix, out);
        prefix.pop();
    }
}

/// Closed-form cardinality of the set. For the capped-even kind the closed
/// form is only proved for even s; odd s falls back to explicit enumeration.
pub fn count(set: MonomialSet) -> Result<BigUint, MonomialError> {
    if set.n == 0 {
        return Err(MonomialError::InvalidDimension);
    }
    let n = set.n as u64;
    let s = set.s as u64;
    Ok(match set.kind {
        SetKind::All => crate::bounds::binom((n + s) as i64, s as i64),
        SetKind::Even => {
            let mut total = BigUint::from(0u32);
            let mut k = 0;
            while k <= s {
                total += crate::bounds::binom((n + k - 1) as i64, k as i64);
                k += 2;
            }
            total
        }
        SetKind::Reduced => {
            if s.is_multiple_of(2) {
                crate::bounds::binom((n + s - 1) as i64, s as i64)
            } else {
                BigUint::from(enumerate(set)?.len())
            }
        }
    })
}

/// Drop the first exponent of a member of the capped-even set; for even s
/// this is a bijection onto the full set in one fewer variable.
pub fn drop_first(alpha: &ExponentVector, s: u32) -> Result<ExponentVector, MonomialError> {
    if !s.is_multiple_of(2) {
        return Err(MonomialError::OddDegreeBound(s));
    }
    let set = MonomialSet::new(SetKind::Reduced, alpha.len(), s);
    if !set.contains(alpha) {
        return Err(MonomialError::NotAMember(
            alpha.to_string(),
            set.to_string(),
        ));
    }
    Ok(ExponentVector(alpha.exponents()[1..].to_vec()))
}

/// Inverse of `drop_first`: prepend the parity of the remaining degree sum,
/// which lands back in the capped-even set because s is even.
pub fn prepend_parity(beta: &ExponentVector, s: u32) -> Result<ExponentVector, MonomialError> {
    if !s.is_multiple_of(2) {
        return Err(MonomialError::OddDegreeBound(s));
    }
    if beta.total_degree() > s {
        return Err(MonomialError::NotAMember(
            beta.to_string(),
            MonomialSet::new(SetKind::All, beta.len().max(1), s).to_string(),
        ));
    }
    let first = beta.total_degree() % 2;
    let mut v = Vec::with_capacity(beta.len() + 1);
    v.push(first);
    v.extend_from_slice(beta.exponents());
    Ok(ExponentVector(v))
}

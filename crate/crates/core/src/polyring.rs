//! Sparse multivariate polynomials over `Scalar`: arithmetic, evaluation,
//! the quadratic rewriting that eliminates high powers of the first variable
//! on the unit sphere, and construction of the product polynomials that
//! vanish at every configuration point except one.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::monomials::{ExponentVector, MonomialSet, SetKind};
use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointDimension { expected: usize, got: usize },
    #[error("product polynomial needs at least one factor")]
    EmptyFactorList,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("cannot parse polynomial from {0:?}")]
    Parse(String),
}

/// Sparse polynomial: map from exponent vector to nonzero coefficient.
/// Terms iterate in the global graded-lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    ambient_n: usize,
    terms: BTreeMap<ExponentVector, Scalar>,
}

impl Polynomial {
    pub fn zero(ambient_n: usize) -> Self {
        Polynomial {
            ambient_n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ambient_n: usize, c: Scalar) -> Self {
        let mut p = Polynomial::zero(ambient_n);
        p.insert(ExponentVector::zero(ambient_n), c);
        p
    }

    pub fn one(ambient_n: usize) -> Self {
        Polynomial::constant(ambient_n, Scalar::one())
    }

    /// The single variable x_{i+1} (0-based index i).
    pub fn variable(ambient_n: usize, i: usize) -> Self {
        assert!(i < ambient_n);
        let mut p = Polynomial::zero(ambient_n);
        p.insert(ExponentVector::unit(ambient_n, i), Scalar::one());
        p
    }

    pub fn from_terms<I>(ambient_n: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (ExponentVector, Scalar)>,
    {
        let mut p = Polynomial::zero(ambient_n);
        for (alpha, c) in terms {
            if alpha.len() != ambient_n {
                return Err(PolyError::DimensionMismatch(alpha.len(), ambient_n));
            }
            p.add_term(&alpha, &c)?;
        }
        Ok(p)
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.total_degree()).max()
    }

    pub fn first_var_degree(&self) -> u32 {
        self.terms.keys().map(|a| a.first()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, alpha: &ExponentVector) -> Scalar {
        self.terms.get(alpha).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    /// True iff every monomial of this polynomial belongs to the set.
    pub fn support_within(&self, kind: SetKind, s: u32) -> bool {
        let set = MonomialSet::new(kind, self.ambient_n, s);
        self.terms.keys().all(|alpha| set.contains(alpha))
    }

    fn insert(&mut self, alpha: ExponentVector, c: Scalar) {
        if !c.is_zero() {
            self.terms.insert(alpha, c);
        }
    }

    fn add_term(&mut self, alpha: &ExponentVector, c: &Scalar) -> Result<(), PolyError> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(alpha) {
            Some(existing) => {
                let sum = existing.try_add(c)?;
                if sum.is_zero() {
                    self.terms.remove(alpha);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(alpha.clone(), c.clone());
            }
        }
        Ok(())
    }

    fn check_same_ambient(&self, rhs: &Polynomial) -> Result<(), PolyError> {
        if self.ambient_n != rhs.ambient_n {
            return Err(PolyError::DimensionMismatch(self.ambient_n, rhs.ambient_n));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_ambient(rhs)?;
        let mut out = self.clone();
        for (alpha, c) in &rhs.terms {
            out.add_term(alpha, c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ambient_n: self.ambient_n,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Polynomial, PolyError> {
        if c.is_zero() {
            return Ok(Polynomial::zero(self.ambient_n));
        }
        let mut out = Polynomial::zero(self.ambient_n);
        for (alpha, coeff) in &self.terms {
            out.insert(alpha.clone(), coeff.try_mul(c)?);
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_ambient(rhs)?;
        let mut out = Polynomial::zero(self.ambient_n);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(&a.combine(b), &ca.try_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    /// Evaluate at a point, exactly for exact inputs. Per-variable powers are
    /// computed once up to the maximum needed exponent.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, PolyError> {
        if point.len() != self.ambient_n {
            return Err(PolyError::PointDimension {
                expected: self.ambient_n,
                got: point.len(),
            });
        }
        let mut max_pow = vec![0u32; self.ambient_n];
        for alpha in self.terms.keys() {
            for (k, &e) in alpha.exponents().iter().enumerate() {
                max_pow[k] = max_pow[k].max(e);
            }
        }
        let mut powers: Vec<Vec<Scalar>> = Vec::with_capacity(self.ambient_n);
        for (k, &mx) in max_pow.iter().enumerate() {
            let mut col = Vec::with_capacity(mx as usize + 1);
            col.push(Scalar::one());
            for e in 1..=mx {
                let next = col[(e - 1) as usize].try_mul(&point[k])?;
                col.push(next);
            }
            powers.push(col);
        }
        let mut acc = Scalar::zero();
        for (alpha, c) in &self.terms {
            let mut term = c.clone();
            for (k, &e) in alpha.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.try_mul(&powers[k][e as usize])?;
                }
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Rewrite every occurrence of x_1^t with t >= 2 using x_1^2 := rhs,
    /// repeating until the degree in x_1 is at most 1. Each pass strictly
    /// lowers the maximum x_1-degree, so the loop terminates; the result is
    /// independent of rewrite order because the relation is a single
    /// substitution.
    pub fn reduce_first_var(&self, rhs: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_ambient(rhs)?;
        let mut current = self.clone();
        while current.first_var_degree() >= 2 {
            let mut next = Polynomial::zero(self.ambient_n);
            for (alpha, c) in &current.terms {
                if alpha.first() < 2 {
                    next.add_term(alpha, c)?;
                    continue;
                }
                let mut rest = alpha.exponents().to_vec();
                rest[0] -= 2;
                let stub = Polynomial::from_terms(
                    self.ambient_n,
                    [(ExponentVector::new(rest), c.clone())],
                )?;
                let replaced = stub.mul(rhs)?;
                next = next.add(&replaced)?;
            }
            current = next;
        }
        Ok(current)
    }

    /// Rewrite modulo the unit-sphere relation x_1^2 = 1 - sum_{j>=2} x_j^2.
    /// The result agrees with `self` as a function on the unit sphere and its
    /// total degree never increases.
    pub fn sphere_reduce(&self) -> Result<Polynomial, PolyError> {
        self.reduce_first_var(&unit_sphere_rhs(self.ambient_n))
    }
}

/// The polynomial 1 - sum_{j>=2} x_j^2, i.e. what x_1^2 equals on the sphere.
pub fn unit_sphere_rhs(ambient_n: usize) -> Polynomial {
    let mut p = Polynomial::one(ambient_n);
    for j in 1..ambient_n {
        let mut e = vec![0u32; ambient_n];
        e[j] = 2;
        p.insert(ExponentVector::new(e), Scalar::int(-1));
    }
    p
}

/// The sphere polynomial (sum of squares) - 1, vanishing exactly on the
/// unit sphere.
pub fn sphere_polynomial(ambient_n: usize) -> Polynomial {
    let mut p = Polynomial::constant(ambient_n, Scalar::int(-1));
    for j in 0..ambient_n {
        let mut e = vec![0u32; ambient_n];
        e[j] = 2;
        p.insert(ExponentVector::new(e), Scalar::one());
    }
    p
}

/// The linear form <x, v>.
pub fn linear_form(v: &[Scalar]) -> Polynomial {
    let n = v.len();
    let mut p = Polynomial::zero(n);
    for (k, coeff) in v.iter().enumerate() {
        if !coeff.is_zero() {
            p.insert(ExponentVector::unit(n, k), coeff.clone());
        }
    }
    p
}

/// The product over the given values a of (<x, v>^2 - a^2): a polynomial of
/// total degree exactly 2t for nonzero v, supported on even degrees <= 2t,
/// vanishing at every point whose inner product with v lies in {+-a}.
pub fn build_annihilator(v: &[Scalar], a_list: &[Scalar]) -> Result<Polynomial, PolyError> {
    if a_list.is_empty() {
        return Err(PolyError::EmptyFactorList);
    }
    let n = v.len();
    let linear = linear_form(v);
    let squared = linear.mul(&linear)?;
    let mut product = Polynomial::one(n);
    for a in a_list {
        let factor = squared.sub(&Polynomial::constant(n, a.square()))?;
        product = product.mul(&factor)?;
    }
    Ok(product)
}

impl fmt::Display for Polynomial {
    /// Terms in graded-lex order. Rational coefficients print bare; quadratic
    /// and float coefficients are parenthesized so the sum structure stays
    /// unambiguous for the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, c) in &self.terms {
            let (sep, coeff) = if first {
                ("", c.clone())
            } else if c.sign() == std::cmp::Ordering::Less && matches!(c, Scalar::Rational(_)) {
                (" - ", c.neg())
            } else {
                (" + ", c.clone())
            };
            first = false;
            write!(f, "{sep}")?;
            let monomial = monomial_string(alpha);
            let coeff_str = match &coeff {
                Scalar::Rational(r) => r.to_string(),
                other => format!("({other})"),
            };
            match (&monomial, coeff.is_one()) {
                (None, _) => write!(f, "{coeff_str}")?,
                (Some(m), true) => write!(f, "{m}")?,
                (Some(m), false) => write!(f, "{coeff_str}*{m}")?,
            }
        }
        Ok(())
    }
}

fn monomial_string(alpha: &ExponentVector) -> Option<String> {
    let mut parts = Vec::new();
    for (k, &e) in alpha.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", k + 1)),
            _ => parts.push(format!("x{}^{}", k + 1, e)),
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

impl Polynomial {
    /// Parse the `Display` format with an explicit ambient dimension.
    pub fn parse(input: &str, ambient_n: usize) -> Result<Polynomial, PolyError> {
        let s = input.trim();
        if s == "0" {
            return Ok(Polynomial::zero(ambient_n));
        }
        let mut out = Polynomial::zero(ambient_n);
        for (negated, chunk) in split_terms(s)? {
            let (alpha, coeff) = parse_term(chunk.trim(), ambient_n)?;
            let coeff = if negated { coeff.neg() } else { coeff };
            out.add_term(&alpha, &coeff)?;
        }
        Ok(out)
    }
}

/// Split on top-level " + " / " - " separators (never inside parentheses).
fn split_terms(s: &str) -> Result<Vec<(bool, &str)>, PolyError> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    let mut chunks = Vec::new();
    let mut start = 0usize;
    let mut negated = false;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-'
                if depth == 0
                    && i > 0
                    && i + 1 < bytes.len()
                    && bytes[i - 1] == b' '
                    && bytes[i + 1] == b' ' =>
            {
                chunks.push((negated, &s[start..i - 1]));
                negated = bytes[i] == b'-';
                start = i + 2;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(PolyError::Parse(s.to_string()));
    }
    chunks.push((negated, &s[start..]));
    Ok(chunks)
}

fn parse_term(chunk: &str, ambient_n: usize) -> Result<(ExponentVector, Scalar), PolyError> {
    let bad = || PolyError::Parse(chunk.to_string());
    let mut coeff = Scalar::one();
    let mut exponents = vec![0u32; ambient_n];
    let mut saw_coeff = false;
    let mut saw_var = false;
    for factor in split_factors(chunk) {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(bad());
        }
        if let Some(rest) = factor.strip_prefix('x') {
            if rest.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                let (idx_str, exp) = match rest.split_once('^') {
                    Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad())?),
                    None => (rest, 1),
                };
                let idx: usize = idx_str.parse().map_err(|_| bad())?;
                if idx == 0 || idx > ambient_n {
                    return Err(bad());
                }
                exponents[idx - 1] += exp;
                saw_var = true;
                continue;
            }
        }
        // Coefficient factor, possibly parenthesized.
        let inner = factor
            .strip_prefix('(')
            .and_then(|f| f.strip_suffix(')'))
            .unwrap_or(factor);
        let c: Scalar = inner.parse().map_err(PolyError::Scalar)?;
        coeff = coeff.try_mul(&c)?;
        saw_coeff = true;
    }
    if !saw_coeff && !saw_var {
        return Err(bad());
    }
    Ok((ExponentVector::new(exponents), coeff))
}

/// Split a term on top-level '*' (sqrt(d) contains no '*' at depth 0).
fn split_factors(chunk: &str) -> Vec<&str> {
    let bytes = chunk.as_bytes();
    let mut depth = 0i32;
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => {
                out.push(&chunk[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&chunk[start..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::variable(n, i)
    }

    #[test]
    fn difference_of_squares() {
        let p = x(2, 0).add(&x(2, 1)).unwrap();
        let q = x(2, 0).sub(&x(2, 1)).unwrap();
        let prod = p.mul(&q).unwrap();
        let expected = x(2, 0)
            .mul(&x(2, 0))
            .unwrap()
            .sub(&x(2, 1).mul(&x(2, 1)).unwrap())
            .unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn additive_identity() {
        let p = x(3, 0)
            .add(&Polynomial::constant(3, Scalar::ratio(2, 3)))
            .unwrap();
        assert_eq!(p.add(&Polynomial::zero(3)).unwrap(), p);
    }

    #[test]
    fn power_product() {
        let sq = x(1, 0).mul(&x(1, 0)).unwrap();
        let fourth = sq.mul(&sq).unwrap();
        assert_eq!(fourth.degree(), Some(4));
        assert_eq!(fourth.num_terms(), 1);
    }

    #[test]
    fn eval_on_circle_point() {
        let p = x(2, 0)
            .mul(&x(2, 0))
            .unwrap()
            .add(&x(2, 1).mul(&x(2, 1)).unwrap())
            .unwrap();
        let point = [Scalar::ratio(3, 5), Scalar::ratio(4, 5)];
        assert_eq!(p.eval(&point).unwrap(), Scalar::one());
    }

    #[test]
    fn sphere_polynomial_vanishes_on_unit_vectors() {
        let g = sphere_polynomial(3);
        let u = [
            Scalar::ratio(2, 3),
            Scalar::ratio(2, 3),
            Scalar::ratio(1, 3),
        ];
        assert!(g.eval(&u).unwrap().is_zero());
        assert_eq!(
            g.eval(&[Scalar::one(), Scalar::zero(), Scalar::zero()])
                .unwrap(),
            Scalar::zero()
        );
    }

    #[test]
    fn eval_vanishing_coordinate() {
        let p = x(2, 0).mul(&x(2, 1)).unwrap();
        assert!(p.eval(&[Scalar::one(), Scalar::zero()]).unwrap().is_zero());
    }

    #[test]
    fn reduce_square_of_first_variable() {
        let p = x(2, 0).mul(&x(2, 0)).unwrap();
        let r = p.sphere_reduce().unwrap();
        // 1 - x2^2
        assert_eq!(r, unit_sphere_rhs(2));
    }

    #[test]
    fn reduce_cube_of_first_variable() {
        let p = x(2, 0).mul(&x(2, 0)).unwrap().mul(&x(2, 0)).unwrap();
        let r = p.sphere_reduce().unwrap();
        let expected = Polynomial::parse("x1 - x1*x2^2", 2).unwrap();
        assert_eq!(r, expected);
        assert!(r.first_var_degree() <= 1);
    }

    #[test]
    fn reduce_leaves_other_variables_alone() {
        let p = Polynomial::parse("x2^4", 2).unwrap();
        assert_eq!(p.sphere_reduce().unwrap(), p);
    }

    #[test]
    fn annihilator_single_axis() {
        let p =
            build_annihilator(&[Scalar::one(), Scalar::zero()], &[Scalar::ratio(1, 2)]).unwrap();
        assert_eq!(p, Polynomial::parse("-1/4 + x1^2", 2).unwrap());
    }

    #[test]
    fn annihilator_self_evaluation() {
        // At its own unit point the product is (1 - a^2).
        let v = [Scalar::ratio(3, 5), Scalar::ratio(4, 5)];
        let p = build_annihilator(&v, &[Scalar::ratio(1, 2)]).unwrap();
        assert_eq!(p.eval(&v).unwrap(), Scalar::ratio(3, 4));
    }

    #[test]
    fn annihilator_even_support() {
        let v = [
            Scalar::ratio(1, 3),
            Scalar::ratio(2, 3),
            Scalar::ratio(-2, 3),
        ];
        let alist = [Scalar::ratio(1, 2), Scalar::ratio(1, 4)];
        let p = build_annihilator(&v, &alist).unwrap();
        assert_eq!(p.degree(), Some(4));
        assert!(p.support_within(SetKind::Even, 4));
    }

    #[test]
    fn reduced_annihilator_lands_in_capped_set() {
        // For unit points, reduction confines the support to the capped
        // even-degree set: first exponent <= 1, even total degree <= 2t.
        let unit_points = [
            vec![Scalar::ratio(3, 5), Scalar::ratio(4, 5)],
            vec![
                Scalar::ratio(1, 3),
                Scalar::ratio(2, 3),
                Scalar::ratio(-2, 3),
            ],
            vec![
                Scalar::ratio(2, 7),
                Scalar::ratio(3, 7),
                Scalar::ratio(-6, 7),
            ],
        ];
        let lists = [
            vec![Scalar::ratio(1, 2)],
            vec![Scalar::ratio(1, 3), Scalar::ratio(2, 5)],
        ];
        for v in &unit_points {
            for alist in &lists {
                let p = build_annihilator(v, alist).unwrap();
                let q = p.sphere_reduce().unwrap();
                let s = 2 * alist.len() as u32;
                assert!(q.support_within(SetKind::Reduced, s));
                assert_eq!(p.eval(v).unwrap(), q.eval(v).unwrap());
            }
        }
    }

    #[test]
    fn product_degree_is_additive() {
        let p = Polynomial::parse("1/2*x1^2 - x2 + 3", 3).unwrap();
        let q = Polynomial::parse("x3^4 + x1*x2", 3).unwrap();
        let prod = p.mul(&q).unwrap();
        assert_eq!(prod.degree(), Some(6));
    }

    #[test]
    fn annihilator_needs_factors() {
        assert!(matches!(
            build_annihilator(&[Scalar::one()], &[]),
            Err(PolyError::EmptyFactorList)
        ));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = Polynomial::parse("3/4 - 1/2*x1*x2 + x2^2 - x1^2*x3^2", 3).unwrap();
        let back = Polynomial::parse(&p.to_string(), 3).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn display_quadratic_coefficients() {
        let c = Scalar::quad(Rational::zero(), Rational::ratio(1, 5), 5).unwrap();
        let p = Polynomial::from_terms(2, [(ExponentVector::new(vec![1, 1]), c)]).unwrap();
        let shown = p.to_string();
        assert_eq!(shown, "(0+1/5*sqrt(5))*x1*x2");
        assert_eq!(Polynomial::parse(&shown, 2).unwrap(), p);
    }

    #[test]
    fn dimension_mismatch_detected() {
        assert!(matches!(
            x(2, 0).add(&x(3, 0)),
            Err(PolyError::DimensionMismatch(2, 3))
        ));
    }
}

//! Exact arithmetic in ℚ[b₁,…,b_r, ε].
//!
//! Every class produced by the fixed-point formulas is a rational multiple
//! of a product of integer linear forms, so classes are carried factored
//! ([`FactoredClass`]) and only expanded ([`ExpandedPoly`]) when a canonical
//! form is needed. Coefficients are arbitrary-precision rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Renders a rational as `p/q`, omitting `/1`.
pub fn format_rational(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("exact ratio with zero denominator")]
    ZeroDenominator,
}

/// Result of an exact division of one class by another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioResult {
    /// num = q · den as polynomials.
    Scalar(Rat),
    /// The quotient exists only as a genuine rational function.
    NonScalar,
}

/// An integer linear form a₁b₁ + … + a_r b_r + m·ε.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    b: Vec<i64>,
    eps: i64,
}

impl LinearForm {
    pub fn new(b: Vec<i64>, eps: i64) -> Self {
        LinearForm { b, eps }
    }

    /// m·ε in rank r.
    pub fn eps(rank: usize, m: i64) -> Self {
        LinearForm { b: vec![0; rank], eps: m }
    }

    /// b_β − b_α + m·ε, the shape every geometry factor takes (α, β are
    /// 0-based color indices; α = β collapses the b-part to zero).
    pub fn color_pair(rank: usize, beta: usize, alpha: usize, m: i64) -> Self {
        let mut b = vec![0i64; rank];
        if beta != alpha {
            b[beta] += 1;
            b[alpha] -= 1;
        }
        LinearForm { b, eps: m }
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn b_coeffs(&self) -> &[i64] {
        &self.b
    }

    pub fn eps_coeff(&self) -> i64 {
        self.eps
    }

    pub fn is_zero(&self) -> bool {
        self.eps == 0 && self.b.iter().all(|&c| c == 0)
    }

    /// Splits off the integer content with a sign convention (the first
    /// nonzero coefficient of the primitive part is positive). Returns
    /// (content, primitive) with self = content · primitive; the zero form
    /// yields content 0.
    fn content_and_primitive(&self) -> (i64, LinearForm) {
        let mut g: i64 = 0;
        for &c in self.b.iter().chain(std::iter::once(&self.eps)) {
            g = g.gcd(&c);
        }
        if g == 0 {
            return (0, self.clone());
        }
        let first = self
            .b
            .iter()
            .chain(std::iter::once(&self.eps))
            .find(|&&c| c != 0)
            .copied()
            .unwrap();
        let content = if first < 0 { -g } else { g };
        let prim = LinearForm {
            b: self.b.iter().map(|&c| c / content).collect(),
            eps: self.eps / content,
        };
        (content, prim)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self
            .b
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, format!("b{}", i + 1)))
            .chain(std::iter::once((self.eps, "eps".to_string())))
        {
            if c == 0 {
                continue;
            }
            let mag = c.abs();
            let body = if mag == 1 { name } else { format!("{}*{}", mag, name) };
            if first {
                first = false;
                write!(f, "{}{}", if c < 0 { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if c < 0 { "-" } else { "+" }, body)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A class kept in factored form: scalar × Π (linear forms). The zero class
/// is scalar 0 with no factors; any zero factor normalizes to that.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredClass {
    rank: usize,
    scalar: Rat,
    factors: Vec<LinearForm>,
}

impl FactoredClass {
    pub fn new(rank: usize, scalar: Rat, factors: Vec<LinearForm>) -> Self {
        for f in &factors {
            assert_eq!(f.rank(), rank, "mixed ranks in one class");
        }
        if scalar.is_zero() || factors.iter().any(LinearForm::is_zero) {
            return FactoredClass {
                rank,
                scalar: Rat::zero(),
                factors: Vec::new(),
            };
        }
        FactoredClass { rank, scalar, factors }
    }

    pub fn zero(rank: usize) -> Self {
        FactoredClass {
            rank,
            scalar: Rat::zero(),
            factors: Vec::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        FactoredClass::from_scalar(rank, Rat::one())
    }

    pub fn from_scalar(rank: usize, q: Rat) -> Self {
        FactoredClass::new(rank, q, Vec::new())
    }

    pub fn from_form(form: LinearForm) -> Self {
        FactoredClass::new(form.rank(), Rat::one(), vec![form])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn scalar(&self) -> &Rat {
        &self.scalar
    }

    pub fn factors(&self) -> &[LinearForm] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Polynomial degree; zero class reports 0 factors.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn multiply(&self, other: &FactoredClass) -> FactoredClass {
        assert_eq!(self.rank, other.rank, "mixed ranks in one product");
        if self.is_zero() || other.is_zero() {
            return FactoredClass::zero(self.rank);
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FactoredClass {
            rank: self.rank,
            scalar: &self.scalar * &other.scalar,
            factors,
        }
    }

    pub fn scale(&self, q: &Rat) -> FactoredClass {
        FactoredClass::new(self.rank, &self.scalar * q, self.factors.clone())
    }

    /// Distributive expansion into the canonical sparse form.
    pub fn expand(&self) -> ExpandedPoly {
        if self.is_zero() {
            return ExpandedPoly::zero(self.rank);
        }
        let mut acc = ExpandedPoly::constant(self.rank, self.scalar.clone());
        for f in &self.factors {
            acc = acc.multiply(&ExpandedPoly::from_form(f));
        }
        acc
    }

    /// Canonical factored form: each factor reduced to its primitive part,
    /// contents absorbed into the scalar, factors sorted. Two factored
    /// classes are equal as polynomials iff their normal forms agree, since
    /// linear forms are irreducible in ℚ[b₁..b_r, ε].
    fn normal_form(&self) -> (Rat, Vec<LinearForm>) {
        let mut scalar = self.scalar.clone();
        let mut prims = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let (content, prim) = f.content_and_primitive();
            scalar *= rat_int(content);
            prims.push(prim);
        }
        prims.sort();
        (scalar, prims)
    }
}

/// Exact division num / den. Returns the rational q with num = q·den when
/// the quotient is scalar, `NonScalar` otherwise, and an error on den = 0.
///
/// Identical factors cancel multiset-wise after normalization; because the
/// factors are irreducible, equality of the residual multisets decides the
/// question without any expansion.
pub fn exact_ratio(num: &FactoredClass, den: &FactoredClass) -> Result<RatioResult, PolyError> {
    assert_eq!(num.rank(), den.rank(), "mixed ranks in one ratio");
    if den.is_zero() {
        return Err(PolyError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RatioResult::Scalar(Rat::zero()));
    }
    let (num_scalar, num_factors) = num.normal_form();
    let (den_scalar, den_factors) = den.normal_form();
    if num_factors != den_factors {
        return Ok(RatioResult::NonScalar);
    }
    Ok(RatioResult::Scalar(num_scalar / den_scalar))
}

/// A polynomial in canonical expanded form: exponent vector (b₁..b_r, ε)
/// mapped to a nonzero rational coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpandedPoly {
    rank: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl ExpandedPoly {
    pub fn zero(rank: usize) -> Self {
        ExpandedPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, q: Rat) -> Self {
        let mut p = ExpandedPoly::zero(rank);
        if !q.is_zero() {
            p.terms.insert(vec![0; rank + 1], q);
        }
        p
    }

    pub fn from_form(form: &LinearForm) -> Self {
        let rank = form.rank();
        let mut p = ExpandedPoly::zero(rank);
        for (i, &c) in form.b_coeffs().iter().enumerate() {
            if c != 0 {
                let mut exp = vec![0u32; rank + 1];
                exp[i] = 1;
                p.terms.insert(exp, rat_int(c));
            }
        }
        if form.eps_coeff() != 0 {
            let mut exp = vec![0u32; rank + 1];
            exp[rank] = 1;
            p.terms.insert(exp, rat_int(form.eps_coeff()));
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree of the highest term, or None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn insert(&mut self, exp: Vec<u32>, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + coef;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &ExpandedPoly) -> ExpandedPoly {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (exp, coef) in &other.terms {
            out.insert(exp.clone(), coef.clone());
        }
        out
    }

    pub fn multiply(&self, other: &ExpandedPoly) -> ExpandedPoly {
        assert_eq!(self.rank, other.rank);
        let mut out = ExpandedPoly::zero(self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(exp, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, q: &Rat) -> ExpandedPoly {
        if q.is_zero() {
            return ExpandedPoly::zero(self.rank);
        }
        ExpandedPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * q))
                .collect(),
        }
    }

    /// `{"r": r, "terms": [{"exp": [...], "coef": "p/q"}]}`, terms in
    /// lexicographic descending order on exponent vectors.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .rev()
            .map(|(exp, coef)| json!({"exp": exp, "coef": format_rational(coef)}))
            .collect();
        json!({"r": self.rank, "terms": terms})
    }
}

impl fmt::Display for ExpandedPoly {
    /// Text form with variables b1..br, eps, terms in canonical descending
    /// order, e.g. `-b1 + b2 - 2*eps`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mono = |exp: &[u32]| -> String {
            let mut pieces = Vec::new();
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if i == self.rank {
                    "eps".to_string()
                } else {
                    format!("b{}", i + 1)
                };
                if e == 1 {
                    pieces.push(name);
                } else {
                    pieces.push(format!("{}^{}", name, e));
                }
            }
            pieces.join("*")
        };
        let mut first = true;
        for (exp, coef) in self.terms.iter().rev() {
            let m = mono(exp);
            let mag = coef.abs();
            let mag_str = format_rational(&mag);
            let body = if m.is_empty() {
                mag_str
            } else if mag.is_one() {
                m
            } else {
                format!("{}*{}", mag_str, m)
            };
            if first {
                first = false;
                if coef.is_negative() {
                    write!(f, "-{}", body)?;
                } else {
                    write!(f, "{}", body)?;
                }
            } else if coef.is_negative() {
                write!(f, " - {}", body)?;
            } else {
                write!(f, " + {}", body)?;
            }
        }
        Ok(())
    }
}

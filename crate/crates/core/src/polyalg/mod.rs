//! Sparse multivariate polynomials with complex coefficients.
//!
//! These are the generators of the diagonal restrictions handled by the rest
//! of the crate. Terms are kept in a `BTreeMap` keyed by exponent vector, so
//! iteration order (and hence printing and evaluation order) is fixed.

pub(crate) mod group;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::linalg::{C64, ONE, ZERO};

pub use group::{is_abs_symmetric, sample_zero_set, SignedPermutation, Symmetry};
pub use parse::{parse_poly, standard_vars};

/// Coefficients below this magnitude are dropped after every operation.
pub const DROP_TOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),
}

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Exponent, C64>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        Self { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: C64) -> Self {
        Self::monomial(vec![0; num_vars], c)
    }

    /// The coordinate function `x_{i+1}` (0-based `i`).
    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars, "variable index out of range");
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(e, ONE)
    }

    pub fn monomial(exponent: Exponent, c: C64) -> Self {
        let num_vars = exponent.len();
        let mut terms = BTreeMap::new();
        if c.norm() >= DROP_TOL {
            terms.insert(exponent, c);
        }
        Self { num_vars, terms }
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponent, C64)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(PolyError::DimensionMismatch { expected: num_vars, got: e.len() });
            }
            *p.terms.entry(e).or_insert(ZERO) += c;
        }
        p.normalize();
        Ok(p)
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| c.norm() >= DROP_TOL);
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: &[u32]) -> C64 {
        self.terms.get(exponent).copied().unwrap_or(ZERO)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// True when every coefficient is real (imaginary part below `DROP_TOL`).
    pub fn has_real_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < DROP_TOL)
    }

    /// The same polynomial in a ring with `num_vars >= self.num_vars()`
    /// variables; the new variables come last.
    pub fn extend_vars(&self, num_vars: usize) -> Self {
        assert!(num_vars >= self.num_vars, "cannot drop variables");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.resize(num_vars, 0);
                (e2, *c)
            })
            .collect();
        Self { num_vars, terms }
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        };
        out.normalize();
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.num_vars, ONE);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest coefficient modulus, used to scale residual tests.
    pub fn coeff_scale(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: &[C64]) -> Result<C64, PolyError> {
        if x.len() != self.num_vars {
            return Err(PolyError::DimensionMismatch { expected: self.num_vars, got: x.len() });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the length check; panics on short input.
    pub fn eval_unchecked(&self, x: &[C64]) -> C64 {
        let mut acc = ZERO;
        for (e, c) in &self.terms {
            let mut m = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m *= xi.powu(k);
                }
            }
            acc += m;
        }
        acc
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            *out.terms.entry(d).or_insert(ZERO) += c * f64::from(e[i]);
        }
        out.normalize();
        out
    }

    pub fn grad(&self) -> Vec<Self> {
        (0..self.num_vars).map(|i| self.partial(i)).collect()
    }

    pub fn act(&self, g: &SignedPermutation) -> Result<Self, PolyError> {
        g.act(self)
    }

    /// Render with variable names `x1..xn`.
    pub fn to_string_with(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], p) })
                .collect();
            let (sign, coef) = format_coeff(*c, mono.is_empty());
            if k == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            match (coef.is_empty(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono.join("*")),
                (false, true) => out.push_str(&coef),
                (false, false) => {
                    out.push_str(&coef);
                    out.push('*');
                    out.push_str(&mono.join("*"));
                }
            }
        }
        out
    }
}

/// Returns (sign, magnitude text). Empty text means a unit coefficient on a
/// non-constant monomial.
fn format_coeff(c: C64, is_constant: bool) -> (&'static str, String) {
    if c.im == 0.0 {
        let sign = if c.re < 0.0 { "-" } else { "+" };
        let a = c.re.abs();
        if a == 1.0 && !is_constant {
            return (sign, String::new());
        }
        return (sign, format!("{a}"));
    }
    if c.re == 0.0 {
        let sign = if c.im < 0.0 { "-" } else { "+" };
        let a = c.im.abs();
        return if a == 1.0 { (sign, "i".into()) } else { (sign, format!("{a}*i")) };
    }
    let op = if c.im < 0.0 { "-" } else { "+" };
    ("+", format!("({} {} {}*i)", c.re, op, c.im.abs()))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&standard_vars(self.num_vars)))
    }
}

fn combine(a: &MultiPoly, b: &MultiPoly, sign: f64) -> MultiPoly {
    assert_eq!(a.num_vars, b.num_vars, "polynomials live in different rings");
    let mut out = a.clone();
    for (e, c) in &b.terms {
        *out.terms.entry(e.clone()).or_insert(ZERO) += c * sign;
    }
    out.normalize();
    out
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        combine(self, rhs, -1.0)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "polynomials live in different rings");
        let mut out = MultiPoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.terms.entry(e).or_insert(ZERO) += ca * cb;
            }
        }
        out.normalize();
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(-ONE)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

//! Exact rational scalars, q-integers and validated parameter sets.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field at runtime. `BigRational` keeps values reduced with a
/// positive denominator, so structural equality is numeric equality.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Integer power with a possibly negative exponent. `x` must be nonzero when
/// `n < 0`.
pub fn pow(x: &Rational, n: i64) -> Rational {
    let mut base = if n < 0 { x.recip() } else { x.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = Rational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

fn check_q(q: &Rational) -> Result<()> {
    if q.is_zero() || q.abs().is_one() {
        return Err(Error::InvalidParameter(format!(
            "q = {q} is not allowed (q must avoid 0, 1, -1)"
        )));
    }
    Ok(())
}

/// `q - q^{-1}`, the denominator shared by every q-integer.
pub fn q_minus_qinv(q: &Rational) -> Rational {
    q - q.recip()
}

/// The q-integer `[n]_q = (q^n - q^{-n}) / (q - q^{-1})`.
pub fn qint(n: i64, q: &Rational) -> Result<Rational> {
    check_q(q)?;
    Ok((pow(q, n) - pow(q, -n)) / q_minus_qinv(q))
}

/// One evaluation-module tensor factor: diameter, evaluation parameter and
/// the L-operator normalization `xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub d: usize,
    pub mu: Rational,
    pub xi: Rational,
}

impl Factor {
    pub fn new(d: usize, mu: Rational, xi: Rational) -> Self {
        Factor { d, mu, xi }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    pub q: Rational,
    pub a: Rational,
    pub b: Rational,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamViolation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl ParamSet {
    /// The defaults used throughout the test suites: q=2, a=3, b=7, xi=1.
    pub fn sample(factors: &[(usize, i64)]) -> Self {
        ParamSet {
            q: rat(2),
            a: rat(3),
            b: rat(7),
            factors: factors
                .iter()
                .map(|&(d, mu)| Factor::new(d, rat(mu), rat(1)))
                .collect(),
        }
    }

    /// Total diameter `d = sum d_j`.
    pub fn diameter(&self) -> usize {
        self.factors.iter().map(|f| f.d).sum()
    }

    /// Module dimension `prod (d_j + 1)`.
    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|f| f.d + 1).product()
    }

    /// Returns the set unchanged if every invariant holds, otherwise the full
    /// list of violations.
    pub fn validate(self) -> std::result::Result<ParamSet, Vec<ParamViolation>> {
        let mut errs = Vec::new();
        let mut push = |field: String, message: &str| {
            errs.push(ParamViolation {
                field,
                message: message.to_string(),
            })
        };
        if self.q.is_zero() {
            push("q".into(), "q is zero");
        } else if self.q.abs().is_one() {
            push("q".into(), "q is a root of unity");
        }
        if self.a.is_zero() {
            push("a".into(), "a is zero");
        }
        if self.b.is_zero() {
            push("b".into(), "b is zero");
        }
        if self.factors.is_empty() {
            push("factors".into(), "at least one factor is required");
        }
        for (j, f) in self.factors.iter().enumerate() {
            if f.d == 0 {
                push(format!("factors[{j}].d"), "diameter must be positive");
            }
            if f.mu.is_zero() {
                push(format!("factors[{j}].mu"), "evaluation parameter zero");
            }
            if f.xi.is_zero() {
                push(format!("factors[{j}].xi"), "xi is zero");
            }
        }
        if errs.is_empty() {
            Ok(self)
        } else {
            Err(errs)
        }
    }
}

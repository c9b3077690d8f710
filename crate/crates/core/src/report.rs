//! Structured pass/fail records for identity checks.

use std::time::{Duration, Instant};

use crate::matrix::Matrix;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Skipped => "skipped",
        }
    }
}

/// Evidence attached to a failed (or skipped) check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Matrix(Matrix),
    Scalar(Rational),
    Text(String),
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    /// Short tag naming the family of identities the check belongs to.
    pub anchor: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        anchor: &str,
        status: Status,
        witness: Option<Witness>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.to_string(),
            status,
            witness,
            elapsed: Duration::ZERO,
        });
    }

    /// Runs `f`, records pass on `Ok` and fail with the witness on `Err`.
    pub fn check(
        &mut self,
        name: impl Into<String>,
        anchor: &str,
        f: impl FnOnce() -> Result<(), Witness>,
    ) {
        let start = Instant::now();
        let (status, witness) = match f() {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.to_string(),
            status,
            witness,
            elapsed: start.elapsed(),
        });
    }

    /// Exact matrix identity `lhs == rhs`; the residual `lhs - rhs` is the
    /// witness on failure.
    pub fn check_eq(
        &mut self,
        name: impl Into<String>,
        anchor: &str,
        f: impl FnOnce() -> (Matrix, Matrix),
    ) {
        self.check(name, anchor, || {
            let (lhs, rhs) = f();
            if lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() {
                return Err(Witness::Text(format!(
                    "shape mismatch: {}x{} vs {}x{}",
                    lhs.rows(),
                    lhs.cols(),
                    rhs.rows(),
                    rhs.cols()
                )));
            }
            if lhs == rhs {
                Ok(())
            } else {
                Err(Witness::Matrix(&lhs - &rhs))
            }
        })
    }

    /// Exact identity `m == 0`.
    pub fn check_zero(
        &mut self,
        name: impl Into<String>,
        anchor: &str,
        f: impl FnOnce() -> Matrix,
    ) {
        self.check(name, anchor, || {
            let m = f();
            if m.is_zero() {
                Ok(())
            } else {
                Err(Witness::Matrix(m))
            }
        })
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.status == Status::Pass)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

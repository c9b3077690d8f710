//! Runs the verification suites on one parameter point.
//!
//! Suites always execute in dependency order. Every suite up to the last
//! requested one runs; unrequested ones contribute a single record only if
//! they fail, so a psi check is never reported on top of a broken split
//! decomposition.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qracah_core::bockting::{psi_from_loperator, solve_psi, verify_proof_identities, verify_psi_constraints, verify_theorem};
use qracah_core::loperator::{composite_loperator, verify_intertwiner, verify_loperator_equations};
use qracah_core::report::{Check, Status, VerificationReport, Witness};
use qracah_core::tdpair::{build_td_pair, split_decomposition, verify_k_is_x31, verify_r_forms, verify_split_decomposition, verify_tridiagonal_axioms};
use qracah_core::uq::{equitable_generators, tensor_of_evaluations, verify_defining_relations, verify_equitable_relations};
use qracah_core::{Error, ParamSet};

use crate::config::{RunConfig, Suite};
use crate::report::{check_json, summary_json};
use crate::sweep::sample_nonzero;

pub const IRREDUCIBILITY_CHECK: &str = "words in A, A* span the full matrix algebra";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Degenerate,
    ConfigError,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Degenerate => "degenerate",
            Outcome::ConfigError => "config-error",
        }
    }

    /// 0 when everything passed, 1 on any failed check, 2 for configuration
    /// or parameter errors (including degenerate points).
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Degenerate | Outcome::ConfigError => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub config: Value,
    pub outcome: Outcome,
    pub dimension: Option<usize>,
    pub diagnosis: Option<String>,
    pub errors: Vec<String>,
    pub checks: Vec<(Suite, Check)>,
}

impl RunReport {
    pub fn config_error(config: Value, errors: Vec<String>) -> Self {
        RunReport {
            config,
            outcome: Outcome::ConfigError,
            dimension: None,
            diagnosis: None,
            errors,
            checks: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().map(|(_, c)| c).find(|c| c.name == name)
    }

    pub fn suite_checks(&self, suite: Suite) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |(s, _)| *s == suite).map(|(_, c)| c)
    }

    pub fn failed_names(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|(_, c)| c.status == Status::Fail)
            .map(|(s, c)| format!("{s}: {}", c.name))
            .collect()
    }

    pub fn to_json(&self, timing: bool) -> Value {
        let mut v = json!({
            "config": self.config,
            "status": self.outcome.as_str(),
            "summary": summary_json(self.checks.iter().map(|(_, c)| c)),
            "checks": self.checks.iter().map(|(s, c)| check_json(*s, c, timing)).collect::<Vec<_>>(),
        });
        if let Some(d) = self.dimension {
            v["dimension"] = json!(d);
        }
        if let Some(d) = &self.diagnosis {
            v["diagnosis"] = json!(d);
        }
        if !self.errors.is_empty() {
            v["errors"] = json!(self.errors);
        }
        v
    }

    pub fn summary_text(&self) -> String {
        let s = summary_json(self.checks.iter().map(|(_, c)| c));
        let mut out = format!(
            "status: {}  (checks: {} pass, {} fail, {} inconclusive, {} skipped)\n",
            self.outcome.as_str(),
            s["pass"],
            s["fail"],
            s["inconclusive"],
            s["skipped"]
        );
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        if let Some(d) = &self.diagnosis {
            out.push_str(&format!("diagnosis: {d}\n"));
        }
        for (suite, c) in &self.checks {
            if c.status != Status::Pass {
                out.push_str(&format!("{}: [{suite}] {}\n", c.status.as_str(), c.name));
            }
        }
        out
    }
}

struct Collector {
    requested: BTreeSet<Suite>,
    checks: Vec<(Suite, Check)>,
    diagnosis: Option<String>,
}

impl Collector {
    fn add(&mut self, suite: Suite, report: VerificationReport) {
        if self.requested.contains(&suite) {
            self.checks.extend(report.checks.into_iter().map(|c| (suite, c)));
        } else if !report.all_pass() {
            let failed: Vec<String> = report.failures().map(|c| c.name.clone()).collect();
            let mut r = VerificationReport::new();
            r.push(
                format!("prerequisite suite {suite} passes"),
                "prerequisite",
                Status::Fail,
                Some(Witness::Text(format!("failed: {}", failed.join("; ")))),
            );
            self.checks.extend(r.checks.into_iter().map(|c| (suite, c)));
        }
    }

    fn fail(&mut self, suite: Suite, name: &str, msg: String) {
        let mut r = VerificationReport::new();
        r.push(name, "construction", Status::Fail, Some(Witness::Text(msg)));
        self.checks.extend(r.checks.into_iter().map(|c| (suite, c)));
    }

    fn degenerate(&mut self, suite: Suite, msg: String) {
        let mut r = VerificationReport::new();
        r.push(
            format!("{suite}: parameter point is non-degenerate"),
            "degenerate-parameters",
            Status::Skipped,
            Some(Witness::Text(msg.clone())),
        );
        self.checks.extend(r.checks.into_iter().map(|c| (suite, c)));
        self.diagnosis = Some(msg);
    }
}

/// Runs the configured suites on `config.params`.
pub fn run(config: &RunConfig) -> RunReport {
    run_params(
        &config.params,
        &config.suites,
        config.gauges,
        config.gauge_seed,
        serde_json::to_value(&config.raw).expect("config serializes"),
    )
}

/// Runs `suites` on a validated parameter set.
pub fn run_params(params: &ParamSet, suites: &BTreeSet<Suite>, gauges: usize, gauge_seed: u64, echo: Value) -> RunReport {
    let mut col = Collector {
        requested: suites.clone(),
        checks: Vec::new(),
        diagnosis: None,
    };
    let last = suites.iter().max().copied().unwrap_or(Suite::Relations);
    let dimension = params.dimension();
    let finish = |col: Collector| {
        let failed = col.checks.iter().any(|(_, c)| c.status != Status::Pass && c.status != Status::Skipped);
        let outcome = if failed {
            Outcome::Fail
        } else if col.diagnosis.is_some() {
            Outcome::Degenerate
        } else {
            Outcome::Pass
        };
        RunReport {
            config: echo.clone(),
            outcome,
            dimension: Some(dimension),
            diagnosis: col.diagnosis,
            errors: Vec::new(),
            checks: col.checks,
        }
    };

    let q = &params.q;
    let a = &params.a;
    let spec: Vec<_> = params.factors.iter().map(|f| (f.d, f.mu.clone())).collect();
    let rep = match tensor_of_evaluations(&spec, q) {
        Ok(r) => r,
        Err(e) => {
            let mut report = finish(col);
            report.outcome = Outcome::ConfigError;
            report.errors.push(e.to_string());
            return report;
        }
    };

    col.add(Suite::Relations, verify_defining_relations(&rep));
    if last == Suite::Relations {
        return finish(col);
    }

    let x = match equitable_generators(&rep) {
        Ok(x) => x,
        Err(e) => {
            col.fail(Suite::Equitable, "equitable generators round trip", e.to_string());
            return finish(col);
        }
    };
    col.add(Suite::Equitable, verify_equitable_relations(&x, q));
    if last == Suite::Equitable {
        return finish(col);
    }

    let t = a * a;
    let l = match composite_loperator(&params.factors, &t, q) {
        Ok(l) => l,
        Err(e) => {
            col.fail(Suite::Loperator, "L-operator construction", e.to_string());
            return finish(col);
        }
    };
    let mut lrep = verify_loperator_equations(&l, &rep);
    lrep.extend(verify_intertwiner(&l, &rep));
    col.add(Suite::Loperator, lrep);
    if last == Suite::Loperator {
        return finish(col);
    }

    let td = match build_td_pair(&rep, a, &params.b) {
        Ok(td) => td,
        Err(Error::DegenerateParameters(msg)) => {
            col.degenerate(Suite::Tdpair, msg);
            return finish(col);
        }
        Err(e) => {
            col.fail(Suite::Tdpair, "TD pair construction", e.to_string());
            return finish(col);
        }
    };
    let mut trep = verify_tridiagonal_axioms(&td);
    if let Some(pos) = trep.checks.iter().position(|c| c.name == IRREDUCIBILITY_CHECK && c.status == Status::Fail) {
        let c = trep.checks.remove(pos);
        let detail = match c.witness {
            Some(Witness::Text(s)) => s,
            _ => String::new(),
        };
        col.add(Suite::Tdpair, trep);
        col.degenerate(Suite::Tdpair, format!("A, A* act reducibly ({detail})"));
        return finish(col);
    }
    let sd = match split_decomposition(&td) {
        Ok(sd) => sd,
        Err(Error::DegenerateParameters(msg)) => {
            col.add(Suite::Tdpair, trep);
            col.degenerate(Suite::Tdpair, msg);
            return finish(col);
        }
        Err(e) => {
            col.add(Suite::Tdpair, trep);
            col.fail(Suite::Tdpair, "split decomposition", e.to_string());
            return finish(col);
        }
    };
    trep.extend(verify_split_decomposition(&td, &sd));
    trep.extend(verify_k_is_x31(&sd, &x));
    trep.extend(verify_r_forms(&sd, &rep, &x, a));
    col.add(Suite::Tdpair, trep);
    if last == Suite::Tdpair {
        return finish(col);
    }

    let mut prep = VerificationReport::new();
    let solved = match solve_psi(&sd, q) {
        Ok(p) => p,
        Err(e @ Error::NonUniqueSolution { .. }) | Err(e @ Error::NoSolution) => {
            col.fail(Suite::Psi, "psi system has a unique solution", e.to_string());
            return finish(col);
        }
        Err(e) => {
            col.fail(Suite::Psi, "psi linear solve", e.to_string());
            return finish(col);
        }
    };
    prep.check("homogeneous kernel of the psi system is zero", "bockting-psi", || {
        match solved.kernel_dim {
            Some(0) => Ok(()),
            other => Err(Witness::Text(format!("kernel dimension {other:?}"))),
        }
    });
    prep.extend(verify_psi_constraints(&solved, &sd, q, "solved"));

    let mut rng = ChaCha8Rng::seed_from_u64(gauge_seed);
    let mut gauge_sets = vec![params.factors.clone()];
    for _ in 0..gauges {
        let mut fs = params.factors.clone();
        for f in fs.iter_mut() {
            f.xi = sample_nonzero(&mut rng);
        }
        gauge_sets.push(fs);
    }
    let mut base_l = None;
    for (g, fs) in gauge_sets.iter().enumerate() {
        let lg = match composite_loperator(fs, &t, q) {
            Ok(l) => l,
            Err(e) => {
                col.fail(Suite::Psi, "gauge L-operator construction", e.to_string());
                return finish(col);
            }
        };
        let hat = match psi_from_loperator(&lg, a, &sd, q) {
            Ok(h) => h,
            Err(e @ Error::SingularL00 { .. }) => {
                col.add(Suite::Psi, prep);
                col.degenerate(Suite::Psi, e.to_string());
                return finish(col);
            }
            Err(e) => {
                col.add(Suite::Psi, prep);
                col.fail(Suite::Psi, "psi-hat construction", e.to_string());
                return finish(col);
            }
        };
        if g == 0 {
            prep.extend(verify_psi_constraints(&hat, &sd, q, "psi-hat"));
        }
        for mut c in verify_theorem(&solved, &hat).checks {
            c.name = if g == 0 {
                c.name
            } else {
                format!("{} (xi gauge {g})", c.name)
            };
            prep.checks.push(c);
        }
        if g == 0 {
            base_l = Some(lg);
        }
    }
    col.add(Suite::Psi, prep);
    if last == Suite::Psi {
        return finish(col);
    }

    let l = base_l.expect("gauge 0 always runs");
    col.add(Suite::Proof, verify_proof_identities(&l, &rep, &sd, a));
    finish(col)
}

//! Randomized sweeps over small rational parameters.
//!
//! Each point draws from its own ChaCha stream (`seed`, stream = index), so a
//! point's parameters do not depend on thread scheduling or on how many
//! degenerate draws other points rejected.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use qracah_core::scalar::{ratio, Factor, ParamSet};
use qracah_core::Rational;

use crate::config::{RunConfig, Suite};
use crate::runner::{run_params, Outcome};

/// Degenerate draws are resampled at most this many times per point.
pub const MAX_REJECTIONS: usize = 16;

/// A rational n/d with 1 <= |n| <= 17 and 1 <= d <= 17.
pub fn sample_nonzero<R: Rng>(rng: &mut R) -> Rational {
    let n: i64 = rng.gen_range(1..=17);
    let sign = if rng.gen_bool(0.5) { -1 } else { 1 };
    let d: i64 = rng.gen_range(1..=17);
    ratio(sign * n, d)
}

fn sample_q<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let q = sample_nonzero(rng);
        if q != ratio(1, 1) && q != ratio(-1, 1) {
            return q;
        }
    }
}

fn sample_point<R: Rng>(rng: &mut R, shape: &[usize]) -> ParamSet {
    ParamSet {
        q: sample_q(rng),
        a: sample_nonzero(rng),
        b: sample_nonzero(rng),
        factors: shape
            .iter()
            .map(|&d| Factor::new(d, sample_nonzero(rng), sample_nonzero(rng)))
            .collect(),
    }
}

#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub index: usize,
    pub params: ParamSet,
    pub outcome: Outcome,
    pub rejected_draws: usize,
    pub failed: Vec<String>,
    pub diagnosis: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub seed: u64,
    pub shape: Vec<usize>,
    pub points: Vec<SweepPoint>,
}

impl SweepReport {
    pub fn count(&self, o: Outcome) -> usize {
        self.points.iter().filter(|p| p.outcome == o).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.count(Outcome::Fail) > 0 {
            1
        } else {
            0
        }
    }

    /// Contains no timing data: the same seed gives byte-identical output.
    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "shape": self.shape,
            "count": self.points.len(),
            "pass": self.count(Outcome::Pass),
            "fail": self.count(Outcome::Fail),
            "degenerate": self.count(Outcome::Degenerate),
            "points": self.points.iter().map(|p| {
                let mut v = json!({
                    "index": p.index,
                    "q": p.params.q.to_string(),
                    "a": p.params.a.to_string(),
                    "b": p.params.b.to_string(),
                    "factors": p.params.factors.iter().map(|f| json!({
                        "d": f.d, "mu": f.mu.to_string(), "xi": f.xi.to_string(),
                    })).collect::<Vec<_>>(),
                    "status": p.outcome.as_str(),
                    "rejected_draws": p.rejected_draws,
                });
                if !p.failed.is_empty() {
                    v["failed"] = json!(p.failed);
                }
                if let Some(d) = &p.diagnosis {
                    v["diagnosis"] = json!(d);
                }
                v
            }).collect::<Vec<_>>(),
        })
    }

    pub fn summary_text(&self) -> String {
        let mut out = format!(
            "sweep seed {}: {} points, {} pass, {} fail, {} degenerate\n",
            self.seed,
            self.points.len(),
            self.count(Outcome::Pass),
            self.count(Outcome::Fail),
            self.count(Outcome::Degenerate)
        );
        for p in self.points.iter().filter(|p| p.outcome == Outcome::Fail) {
            out.push_str(&format!("point {} failed: {}\n", p.index, p.failed.join("; ")));
        }
        out
    }
}

fn run_point(index: usize, seed: u64, shape: &[usize], suites: &BTreeSet<Suite>, gauges: usize) -> SweepPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut rejected = 0;
    loop {
        let params = sample_point(&mut rng, shape);
        let gauge_seed = rng.gen();
        let r = run_params(&params, suites, gauges, gauge_seed, Value::Null);
        if r.outcome == Outcome::Degenerate && rejected < MAX_REJECTIONS {
            rejected += 1;
            continue;
        }
        return SweepPoint {
            index,
            params,
            outcome: r.outcome,
            rejected_draws: rejected,
            failed: r.failed_names(),
            diagnosis: r.diagnosis,
        };
    }
}

/// Samples `count` points with the module shape (the list of factor
/// diameters) taken from `config` and runs its suites on each.
pub fn sweep(config: &RunConfig, count: usize, seed: u64) -> SweepReport {
    let shape: Vec<usize> = config.params.factors.iter().map(|f| f.d).collect();
    let points = (0..count)
        .into_par_iter()
        .map(|i| run_point(i, seed, &shape, &config.suites, config.gauges))
        .collect();
    SweepReport { seed, shape, points }
}

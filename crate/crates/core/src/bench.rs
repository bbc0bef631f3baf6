//! Timing harness: generate many programs per code length, attack each, and
//! collect one record per instance.

use rayon::prelude::*;
use serde::Serialize;

use crate::attack::{extract_key, AttackConfig};
use crate::error::{Error, Result};
use crate::qr_code::QrParams;
use crate::rng::derive_seed;
use crate::xprogram::{generate, GenerationConfig};

/// One attacked instance. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub q: usize,
    pub n: usize,
    pub rep: usize,
    pub seconds: f64,
    pub iterations: usize,
    pub rank_deficit: usize,
    pub candidates: usize,
}

pub const CSV_HEADER: &str = "q,n,rep,seconds,iterations,rank_deficit,candidates";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchFailure {
    pub q: usize,
    pub rep: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub q_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    /// Columns beyond the code dimension: `n = (q+1)/2 + extra_cols`.
    pub extra_cols: usize,
    /// Worker threads; 1 runs inline.
    pub jobs: usize,
    pub attack: AttackConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            q_list: vec![103],
            reps: 50,
            seed: 0,
            extra_cols: 1,
            jobs: 1,
            attack: AttackConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchOutcome {
    /// Ordered by `(q, rep)`.
    pub records: Vec<BenchRecord>,
    pub failures: Vec<BenchFailure>,
}

/// Mean and quartiles of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

impl Summary {
    /// Quartiles use linear interpolation between order statistics.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let quantile = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Some(Summary {
            count: v.len(),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            q1: quantile(0.25),
            median: quantile(0.5),
            q3: quantile(0.75),
        })
    }
}

/// Seeds of the generated program and of the attack on it.
pub fn instance_seeds(seed: u64, q: usize, rep: usize) -> (u64, u64) {
    (
        derive_seed(seed, &[q as u64, rep as u64, 0]),
        derive_seed(seed, &[q as u64, rep as u64, 1]),
    )
}

/// Generates and attacks one instance. Time covers the attack only.
pub fn run_instance(cfg: &BenchConfig, q: usize, rep: usize) -> std::result::Result<BenchRecord, BenchFailure> {
    let fail = |reason: String| BenchFailure { q, rep, reason };
    let params = QrParams::new(q).map_err(|e| fail(e.to_string()))?;
    let n = params.k + cfg.extra_cols;
    let (gen_seed, attack_seed) = instance_seeds(cfg.seed, q, rep);
    let (prog, planted) = generate(&GenerationConfig::new(q, n, gen_seed)).map_err(|e| fail(e.to_string()))?;
    let attack = AttackConfig {
        seed: attack_seed,
        ..cfg.attack.clone()
    };
    let report = extract_key(&prog, &attack);
    match &report.key {
        None => Err(fail(format!(
            "no key after {} iterations",
            report.iterations.len()
        ))),
        Some(k) if *k != planted => Err(fail("recovered key differs from planted key".into())),
        Some(_) => {
            let win = report.winning_iteration().expect("success has a last iteration");
            Ok(BenchRecord {
                q,
                n,
                rep,
                seconds: report.wall_time.as_secs_f64().max(f64::MIN_POSITIVE),
                iterations: report.iterations.len(),
                rank_deficit: win.kernel_dim,
                candidates: report.total_candidates_checked,
            })
        }
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome> {
    for &q in &cfg.q_list {
        QrParams::new(q)?;
    }
    let jobs: Vec<(usize, usize)> = cfg
        .q_list
        .iter()
        .flat_map(|&q| (0..cfg.reps).map(move |rep| (q, rep)))
        .collect();
    let results: Vec<_> = if cfg.jobs <= 1 {
        jobs.iter().map(|&(q, rep)| run_instance(cfg, q, rep)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Parameter(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(|&(q, rep)| run_instance(cfg, q, rep)).collect())
    };
    let mut outcome = BenchOutcome::default();
    for r in results {
        match r {
            Ok(rec) => outcome.records.push(rec),
            Err(f) => outcome.failures.push(f),
        }
    }
    Ok(outcome)
}

/// Per-q summary of the attack time, in the order of first appearance.
pub fn time_summaries(records: &[BenchRecord]) -> Vec<(usize, usize, Summary)> {
    let mut qs: Vec<(usize, usize)> = Vec::new();
    for r in records {
        if !qs.iter().any(|&(q, _)| q == r.q) {
            qs.push((r.q, r.n));
        }
    }
    qs.into_iter()
        .filter_map(|(q, n)| {
            let times: Vec<f64> = records.iter().filter(|r| r.q == q).map(|r| r.seconds).collect();
            Summary::of(&times).map(|s| (q, n, s))
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

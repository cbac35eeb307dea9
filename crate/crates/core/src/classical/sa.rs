use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::shuffle_order;
use crate::error::{Error, Result};
use crate::hubo::{HuboProblem, SampleSet, SpinAssignment};
use crate::ledger::FunctionEvalCounter;
use crate::seed::{self, stream};

const PROBES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaConfig {
    pub sweeps: usize,
    pub reads: usize,
    /// `None` selects the probed default.
    pub t_initial: Option<f64>,
    /// `None` selects `1e-3 · t_initial`.
    pub t_final: Option<f64>,
    pub rng_seed: u64,
}

impl SaConfig {
    pub fn new(sweeps: usize, reads: usize, rng_seed: u64) -> Self {
        Self {
            sweeps,
            reads,
            t_initial: None,
            t_final: None,
            rng_seed,
        }
    }

    /// Resolved `(t_initial, t_final)`.
    pub fn temperatures(&self, problem: &HuboProblem) -> Result<(f64, f64)> {
        let (ti, tf) = match (self.t_initial, self.t_final) {
            (Some(ti), Some(tf)) => (ti, tf),
            (Some(ti), None) => (ti, 1e-3 * ti),
            (None, tf) => {
                let (ti, default_tf) = default_temperatures(problem, self.rng_seed);
                (ti, tf.unwrap_or(default_tf))
            }
        };
        if !(ti.is_finite() && tf.is_finite() && tf > 0.0 && ti >= tf) {
            return Err(Error::Config(format!(
                "temperatures must satisfy t_initial >= t_final > 0, got {ti} and {tf}"
            )));
        }
        Ok((ti, tf))
    }

    fn validate(&self) -> Result<()> {
        if self.sweeps == 0 || self.reads == 0 {
            return Err(Error::Config("sweeps and reads must be positive".into()));
        }
        Ok(())
    }
}

/// `t_initial` = largest `|ΔE|` seen over random single-flip probes,
/// `t_final = 1e-3 · t_initial`.
pub fn default_temperatures(problem: &HuboProblem, rng_seed: u64) -> (f64, f64) {
    let n = problem.n();
    let mut max = 0.0f64;
    if n > 0 {
        let mut rng = seed::rng(rng_seed, &[stream::SA_PROBE]);
        let mut s = vec![1i8; n];
        for _ in 0..PROBES {
            for v in s.iter_mut() {
                *v = if rng.gen::<bool>() { 1 } else { -1 };
            }
            let i = rng.gen_range(0..n);
            max = max.max(problem.delta_of(&s, i).abs());
        }
    }
    let ti = if max > 0.0 { max } else { 1.0 };
    (ti, 1e-3 * ti)
}

fn temperature_ladder(ti: f64, tf: f64, sweeps: usize) -> Vec<f64> {
    if sweeps == 1 {
        return vec![ti];
    }
    let r = (tf / ti).powf(1.0 / (sweeps - 1) as f64);
    (0..sweeps).map(|s| ti * r.powi(s as i32)).collect()
}

/// Anneals `start` through `temperatures`, one shuffled sweep per entry.
/// Returns the final spins and the number of proposed flips.
pub fn anneal_from<O: Rng, A: Rng>(
    problem: &HuboProblem,
    start: &mut [i8],
    temperatures: &[f64],
    order_rng: &mut O,
    accept_rng: &mut A,
) -> u64 {
    let n = problem.n();
    let mut order: Vec<usize> = (0..n).collect();
    for &t in temperatures {
        shuffle_order(&mut order, order_rng);
        for &i in &order {
            let d = problem.delta_of(start, i);
            if d <= 0.0 || accept_rng.gen::<f64>() < (-d / t).exp() {
                start[i] = -start[i];
            }
        }
    }
    (temperatures.len() * n) as u64
}

/// Outcome of one SA read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadRecord {
    pub read: usize,
    pub energy: f64,
    pub flips: u64,
    pub assignment: SpinAssignment,
}

#[derive(Debug, Clone)]
pub struct SaResult {
    pub samples: SampleSet,
    pub reads: Vec<ReadRecord>,
    pub evals: FunctionEvalCounter,
    pub t_initial: f64,
    pub t_final: f64,
}

/// Native-HUBO simulated annealing with a geometric schedule.
pub fn simulated_annealing(problem: &HuboProblem, config: &SaConfig) -> Result<SaResult> {
    config.validate()?;
    let (ti, tf) = config.temperatures(problem)?;
    let ladder = temperature_ladder(ti, tf, config.sweeps);
    let n = problem.n();
    let base = config.rng_seed;
    let reads: Vec<ReadRecord> = (0..config.reads)
        .into_par_iter()
        .map(|r| {
            let r64 = r as u64;
            let mut start_rng = seed::rng(base, &[stream::SA_START, r64]);
            let mut order_rng = seed::rng(base, &[stream::SA_ORDER, r64]);
            let mut accept_rng = seed::rng(base, &[stream::SA_ACCEPT, r64]);
            let mut s: Vec<i8> = (0..n)
                .map(|_| if start_rng.gen::<bool>() { 1 } else { -1 })
                .collect();
            let flips = anneal_from(problem, &mut s, &ladder, &mut order_rng, &mut accept_rng);
            ReadRecord {
                read: r,
                energy: problem.energy_of(&s),
                flips,
                assignment: SpinAssignment::new(s).expect("spins stay ±1"),
            }
        })
        .collect();
    let evals = FunctionEvalCounter::sa(reads.iter().map(|r| r.flips).sum());
    let samples = SampleSet::from_counts(problem, reads.iter().map(|r| (r.assignment.clone(), 1)))?;
    Ok(SaResult {
        samples,
        reads,
        evals,
        t_initial: ti,
        t_final: tf,
    })
}

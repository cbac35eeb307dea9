use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::shuffle_order;
use crate::error::{Error, Result};
use crate::hubo::{HuboProblem, SampleRecord, SampleSet, SpinAssignment};
use crate::seed::{self, stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyConfig {
    pub sweeps: usize,
    /// Number of lowest-energy distinct records refined by post-processing.
    pub top_k: usize,
    pub rng_seed: u64,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        Self {
            sweeps: 15,
            top_k: 150,
            rng_seed: 0,
        }
    }
}

impl GreedyConfig {
    fn validate(&self) -> Result<()> {
        if self.sweeps == 0 || self.top_k == 0 {
            return Err(Error::Config(
                "greedy sweeps and top_k must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Zero-temperature descent: each sweep visits a fresh shuffle of the spins
/// and flips on strictly negative `ΔE`. Stops early after a sweep without a
/// flip. Returns the number of `ΔE` evaluations.
pub fn greedy_descent<R: Rng>(
    problem: &HuboProblem,
    s: &mut [i8],
    sweeps: usize,
    rng: &mut R,
) -> u64 {
    let n = problem.n();
    let mut order: Vec<usize> = (0..n).collect();
    let mut evals = 0;
    for _ in 0..sweeps {
        shuffle_order(&mut order, rng);
        let mut flipped = false;
        for &i in &order {
            evals += 1;
            if problem.delta_of(s, i) < 0.0 {
                s[i] = -s[i];
                flipped = true;
            }
        }
        if !flipped {
            break;
        }
    }
    evals
}

/// Greedy descent from `z`; returns the refined assignment and the number
/// of `ΔE` evaluations spent.
pub fn greedy_local_search(
    problem: &HuboProblem,
    z: &SpinAssignment,
    config: &GreedyConfig,
) -> Result<(SpinAssignment, u64)> {
    config.validate()?;
    if z.len() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            found: z.len(),
        });
    }
    let mut rng = seed::rng(config.rng_seed, &[stream::GREEDY]);
    let mut s = z.as_slice().to_vec();
    let evals = greedy_descent(problem, &mut s, config.sweeps, &mut rng);
    Ok((SpinAssignment::new(s)?, evals))
}

/// Refines the `top_k` lowest-energy distinct records, keeping their shot
/// counts, and merges any records that land on the same assignment.
pub fn greedy_post_process(
    problem: &HuboProblem,
    samples: &SampleSet,
    config: &GreedyConfig,
) -> Result<(SampleSet, u64)> {
    config.validate()?;
    if samples.n() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            found: samples.n(),
        });
    }
    let records = samples.records();
    let k = config.top_k.min(records.len());
    let refined: Vec<(SampleRecord, u64)> = records[..k]
        .par_iter()
        .enumerate()
        .map(|(idx, r)| {
            let mut rng = seed::rng(config.rng_seed, &[stream::POST, idx as u64]);
            let mut s = r.assignment.as_slice().to_vec();
            let evals = greedy_descent(problem, &mut s, config.sweeps, &mut rng);
            let energy = problem.energy_of(&s);
            let rec = SampleRecord {
                assignment: SpinAssignment::new(s).expect("spins stay ±1"),
                energy,
                count: r.count,
            };
            (rec, evals)
        })
        .collect();
    let evals = refined.iter().map(|(_, e)| e).sum();
    let all = refined
        .into_iter()
        .map(|(r, _)| r)
        .chain(records[k..].iter().cloned())
        .collect();
    Ok((SampleSet::rebuild(all)?, evals))
}

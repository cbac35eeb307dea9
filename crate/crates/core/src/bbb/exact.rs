use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::argmin_abs;
use super::relax::RelaxationOracle;
use crate::bfdcqo::{run, BfdcqoConfig, BiasField};
use crate::error::Result;
use crate::hubo::{HuboProblem, SpinAssignment};
use crate::ledger::FunctionEvalCounter;
use crate::seed::{self, stream};

/// A node is pruned once `LB ≥ UB − PRUNE_TOLERANCE`.
pub const PRUNE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactConfig {
    pub bf_config: BfdcqoConfig,
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub assignment: SpinAssignment,
    pub energy: f64,
    /// Nodes created, including the root and children pruned on creation.
    pub node_count: usize,
    /// Nodes whose BF-DCQO run was executed.
    pub expanded: usize,
    pub evals: FunctionEvalCounter,
}

struct Frontier {
    lower_bound: f64,
    id: usize,
    fixed: Vec<(usize, i8)>,
    z: Vec<f64>,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    // max-heap: reverse so the lowest bound, then the oldest node, pops first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .lower_bound
            .total_cmp(&self.lower_bound)
            .then(other.id.cmp(&self.id))
    }
}

/// Best-first branch and bound with hard spin fixing.
///
/// Each expanded node runs BF-DCQO on the substituted subproblem, biased by
/// the relaxed point, to obtain a feasible upper bound. Branching fixes the
/// free spin with the smallest `|z̃_i|` to `±1`.
pub fn exact_bbb<O: RelaxationOracle>(
    problem: &HuboProblem,
    oracle: &O,
    config: &ExactConfig,
) -> Result<ExactResult> {
    config.bf_config.validate()?;
    let base_seed = config.bf_config.rng_seed;
    let mut upper = f64::INFINITY;
    let mut incumbent: Option<SpinAssignment> = None;
    let mut evals = FunctionEvalCounter::default();
    let mut expanded = 0;

    let root = oracle.relax(problem, &[])?;
    let mut node_count = 1;
    let mut heap = BinaryHeap::new();
    heap.push(Frontier {
        lower_bound: root.lower_bound,
        id: 0,
        fixed: Vec::new(),
        z: root.z,
    });

    while let Some(node) = heap.pop() {
        if node.lower_bound >= upper - PRUNE_TOLERANCE {
            continue;
        }
        expanded += 1;
        let sub = problem.substitute(&node.fixed)?;
        let (candidate, energy) = if sub.problem.n() == 0 {
            (sub.lift(&[]), sub.offset)
        } else {
            let bias = BiasField::new(sub.restrict(&node.z))?;
            let bf = BfdcqoConfig {
                rng_seed: seed::derive(base_seed, &[stream::EXACT, node.id as u64]),
                ..config.bf_config.clone()
            };
            let out = run(&sub.problem, &bias, &bf)?;
            evals += out.evals;
            (
                sub.lift(out.best_assignment.as_slice()),
                sub.offset + out.best_energy,
            )
        };
        if energy < upper {
            upper = energy;
            incumbent = Some(candidate);
        }
        if node.lower_bound >= upper - PRUNE_TOLERANCE {
            continue;
        }
        let is_fixed = |i: usize| node.fixed.iter().any(|&(f, _)| f == i);
        let Some(i) = argmin_abs(&node.z, is_fixed) else {
            continue;
        };
        for sign in [1i8, -1] {
            let mut fixed = node.fixed.clone();
            fixed.push((i, sign));
            let r = oracle.relax(problem, &fixed)?;
            let id = node_count;
            node_count += 1;
            if r.lower_bound < upper - PRUNE_TOLERANCE {
                heap.push(Frontier {
                    lower_bound: r.lower_bound,
                    id,
                    fixed,
                    z: r.z,
                });
            }
        }
    }

    let assignment = incumbent.expect("the root is always expanded");
    Ok(ExactResult {
        assignment,
        energy: upper,
        node_count,
        expanded,
        evals,
    })
}

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::argmin_abs;
use crate::bfdcqo::{run_pinned, BfdcqoConfig, BfdcqoResult, BiasField};
use crate::error::{Error, Result};
use crate::hubo::{HuboProblem, SpinAssignment};
use crate::ledger::FunctionEvalCounter;
use crate::seed::{self, stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BbbConfig {
    /// Tree depth.
    pub k: usize,
    /// Bias magnitude imposed on a branched spin.
    pub w: f64,
    /// Largest `|h^b|` allowed on other spins when a branch is created.
    pub rescale_cap: f64,
    pub bf_config: BfdcqoConfig,
    pub warm_start: Option<SpinAssignment>,
    /// Multiplier on the warm-start spins when they become the root bias.
    pub warm_start_scale: f64,
    /// Upper bound on BF-DCQO executions; `None` is unbounded.
    pub run_budget: Option<usize>,
}

impl Default for BbbConfig {
    fn default() -> Self {
        Self {
            k: 3,
            w: 1.0,
            rescale_cap: 3.0,
            bf_config: BfdcqoConfig::default(),
            warm_start: None,
            warm_start_scale: 1.0,
            run_budget: None,
        }
    }
}

impl BbbConfig {
    pub fn planned_runs(&self) -> usize {
        2 * self.k + 1
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(self.w > 0.0 && self.w.is_finite()) {
            return Err(Error::Config(format!("W must be positive, got {}", self.w)));
        }
        if !(self.rescale_cap > 0.0 && self.rescale_cap.is_finite()) {
            return Err(Error::Config("rescale cap must be positive".into()));
        }
        if self.k > n {
            return Err(Error::Config(format!(
                "depth {} exceeds the {n} spins available for branching",
                self.k
            )));
        }
        if let Some(budget) = self.run_budget {
            if self.planned_runs() > budget {
                return Err(Error::RunBudget {
                    required: self.planned_runs(),
                    budget,
                });
            }
        }
        if let Some(z) = &self.warm_start {
            if z.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: z.len(),
                });
            }
        }
        Ok(())
    }
}

/// One node of the explored tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchNode {
    pub depth: usize,
    /// All `(index, sign)` constraints in force, in branching order.
    pub constraints: Vec<(usize, i8)>,
    /// Bias the node's BF-DCQO run started from.
    pub bias: BiasField,
    pub best_assignment: SpinAssignment,
    pub best_energy: f64,
    pub pruned: bool,
    pub evals: FunctionEvalCounter,
    pub children: Vec<BranchNode>,
}

impl BranchNode {
    fn from_run(
        depth: usize,
        constraints: Vec<(usize, i8)>,
        bias: BiasField,
        run: &BfdcqoResult,
    ) -> Self {
        Self {
            depth,
            constraints,
            bias,
            best_assignment: run.best_assignment.clone(),
            best_energy: run.best_energy,
            pruned: false,
            evals: run.evals,
            children: Vec::new(),
        }
    }

    /// Number of nodes in this subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(BranchNode::size).sum::<usize>()
    }

    /// CSV listing in depth-first order:
    /// `depth,index,sign,best_energy,pruned`. The root has no index.
    pub fn dump(&self) -> String {
        let mut out = String::from("depth,index,sign,best_energy,pruned\n");
        self.dump_into(&mut out);
        out
    }

    fn dump_into(&self, out: &mut String) {
        match self.constraints.last() {
            Some((i, s)) => {
                let _ = writeln!(
                    out,
                    "{},{i},{s},{:?},{}",
                    self.depth, self.best_energy, self.pruned
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{},,,{:?},{}",
                    self.depth, self.best_energy, self.pruned
                );
            }
        }
        for c in &self.children {
            c.dump_into(out);
        }
    }
}

/// Incumbent after each layer, for convergence curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub depth: usize,
    pub branch_index: Option<usize>,
    pub incumbent: f64,
    /// Cumulative evaluations after the layer.
    pub evals: u64,
}

#[derive(Debug, Clone)]
pub struct BbbResult {
    pub best_assignment: SpinAssignment,
    pub best_energy: f64,
    pub tree: BranchNode,
    pub evals: FunctionEvalCounter,
    pub bf_runs: usize,
    pub layers: Vec<LayerRecord>,
}

/// Branch-and-prune over bias fields.
///
/// The root run uses `bf_config.rng_seed` unchanged, so depth zero is a
/// plain BF-DCQO run. Layer `d` children draw from seeds derived from
/// `(d, ±)`.
pub fn approximate_bbb(problem: &HuboProblem, config: &BbbConfig) -> Result<BbbResult> {
    let n = problem.n();
    config.validate(n)?;
    let base_seed = config.bf_config.rng_seed;

    let root_bias = match &config.warm_start {
        Some(z) => BiasField::from_spins(z, config.warm_start_scale),
        None => BiasField::zeros(n),
    };
    let root_run = run_pinned(problem, &root_bias, &[], &config.bf_config)?;
    let mut runs = 1;
    let mut evals = root_run.evals;
    let mut best = (root_run.best_assignment.clone(), root_run.best_energy);
    let mut root = BranchNode::from_run(0, Vec::new(), root_bias, &root_run);
    let mut layers = vec![LayerRecord {
        depth: 0,
        branch_index: None,
        incumbent: best.1,
        evals: evals.total(),
    }];

    let mut constraints: Vec<(usize, i8)> = Vec::new();
    let mut bias = root_run.final_bias;
    // (plus, minus, plus_won) per layer, assembled into the tree afterwards
    let mut explored: Vec<(BranchNode, BranchNode, bool)> = Vec::new();

    for depth in 1..=config.k {
        let i = argmin_abs(bias.as_slice(), |j| {
            constraints.iter().any(|&(c, _)| c == j)
        })
        .expect("depth is at most n");
        let child = |sign: i8| -> Result<(BranchNode, BfdcqoResult)> {
            let mut cons = constraints.clone();
            cons.push((i, sign));
            let fixed: Vec<usize> = cons.iter().map(|&(c, _)| c).collect();
            let mut b = bias.clone();
            b.rescale_except(config.rescale_cap, &fixed);
            let pins: Vec<(usize, f64)> = cons
                .iter()
                .map(|&(c, s)| (c, f64::from(s) * config.w))
                .collect();
            for &(c, v) in &pins {
                b.set(c, v);
            }
            let label = if sign > 0 { 1 } else { 2 };
            let bf = BfdcqoConfig {
                rng_seed: seed::derive(base_seed, &[stream::BRANCH, depth as u64, label]),
                ..config.bf_config.clone()
            };
            let run = run_pinned(problem, &b, &pins, &bf)?;
            Ok((BranchNode::from_run(depth, cons, b, &run), run))
        };
        let (plus, minus) = rayon::join(|| child(1), || child(-1));
        let (mut plus_node, plus_run) = plus?;
        let (mut minus_node, minus_run) = minus?;
        runs += 2;
        evals += plus_run.evals + minus_run.evals;

        let plus_won = plus_run.best_energy <= minus_run.best_energy;
        let winner = if plus_won {
            minus_node.pruned = true;
            plus_run
        } else {
            plus_node.pruned = true;
            minus_run
        };
        if winner.best_energy < best.1 {
            best = (winner.best_assignment.clone(), winner.best_energy);
        }
        constraints.push((i, if plus_won { 1 } else { -1 }));
        bias = winner.final_bias;
        explored.push((plus_node, minus_node, plus_won));
        layers.push(LayerRecord {
            depth,
            branch_index: Some(i),
            incumbent: best.1,
            evals: evals.total(),
        });
    }

    let mut below: Vec<BranchNode> = Vec::new();
    for (mut plus, mut minus, plus_won) in explored.into_iter().rev() {
        if plus_won {
            plus.children = below;
        } else {
            minus.children = below;
        }
        below = vec![plus, minus];
    }
    root.children = below;

    Ok(BbbResult {
        best_assignment: best.0,
        best_energy: best.1,
        tree: root,
        evals,
        bf_runs: runs,
        layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hubo::{generate, InstanceSpec};

    fn small_config(k: usize) -> BbbConfig {
        BbbConfig {
            k,
            w: 2.0,
            bf_config: BfdcqoConfig {
                iterations: 2,
                shots: 200,
                rng_seed: 5,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    #[test]
    fn run_count_and_tree_shape() {
        let p = generate(&InstanceSpec::sparse_chain(6, 1)).unwrap();
        let r = approximate_bbb(&p, &small_config(3)).unwrap();
        assert_eq!(r.bf_runs, 7);
        assert_eq!(r.tree.size(), 7);
        assert_eq!(r.evals.quantum_shots, 7 * 2 * 200);
        assert_eq!(r.tree.dump().lines().count(), 8);
        assert!(r
            .layers
            .windows(2)
            .all(|w| w[1].incumbent <= w[0].incumbent));
    }

    #[test]
    fn budget_and_depth_errors() {
        let p = generate(&InstanceSpec::sparse_chain(4, 1)).unwrap();
        let mut c = small_config(3);
        c.run_budget = Some(5);
        assert!(matches!(
            approximate_bbb(&p, &c),
            Err(Error::RunBudget {
                required: 7,
                budget: 5
            })
        ));
        assert!(approximate_bbb(&p, &small_config(5)).is_err());
    }
}

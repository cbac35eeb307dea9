use std::time::Instant;

use bbdcqo::classical::{brute_force, EXHAUSTION_CAP};
use bbdcqo::hubo::{generate, HuboProblem};
use bbdcqo::seed::{self, stream};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::generate::spec_from_shape;
use super::solve::{
    bbb_config, bf_config, load_instance, run_bbb, run_bfdcqo, run_sa, sa_config, Outcome,
};
use crate::args::{Baseline, BenchArgs, Format, SaArgs};
use crate::error::{CliError, CliResult};
use crate::output::{emit, to_csv, to_json, write_atomic};

/// Largest relative ledger mismatch accepted without `--allow-uneven`.
pub const BUDGET_TOLERANCE: f64 = 0.05;

/// `e_min / e_ref` when both energies are negative, else the gap
/// `e_min − e_ref`.
pub fn quality(e_min: f64, e_ref: Option<f64>) -> (Option<&'static str>, Option<f64>) {
    match e_ref {
        Some(r) if r < 0.0 && e_min < 0.0 => (Some("ratio"), Some(e_min / r)),
        Some(r) => (Some("gap"), Some(e_min - r)),
        None => (None, None),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub seed: u64,
    pub e_ref: Option<f64>,
    pub e_bbb: f64,
    pub e_baseline: f64,
    /// `E_baseline − E_bbb`; positive when BBB found the lower energy.
    pub delta_e: f64,
    /// From the BBB side: win, tie or loss.
    pub outcome: &'static str,
    pub evals_bbb: u64,
    pub evals_baseline: u64,
    pub baseline_sweeps: Option<usize>,
    pub metric: Option<&'static str>,
    pub quality_bbb: Option<f64>,
    pub quality_baseline: Option<f64>,
    pub wall_time_s: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub instance: String,
    pub solver: &'static str,
    pub evals: u64,
    pub best_energy: f64,
    pub metric: Option<&'static str>,
    pub quality: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tallies {
    pub win: usize,
    pub tie: usize,
    pub loss: usize,
}

#[derive(Serialize)]
struct BenchReport<'a> {
    seed: u64,
    baseline: &'static str,
    bbb_config: Value,
    tallies: Tallies,
    rows: &'a [BenchRow],
    curve: &'a [CurvePoint],
}

struct Cell {
    row: BenchRow,
    curve: Vec<CurvePoint>,
}

fn baseline_name(b: Baseline) -> &'static str {
    match b {
        Baseline::Sa => "sa",
        Baseline::Bfdcqo => "bfdcqo",
        Baseline::Bbb => "bbb",
    }
}

fn load_all(args: &BenchArgs) -> CliResult<Vec<(String, HuboProblem)>> {
    let mut out = Vec::new();
    for path in &args.instances {
        let label = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        out.push((label, load_instance(path)?));
    }
    if let Some(count) = args.generate {
        for i in 0..count as u64 {
            let spec = spec_from_shape(&args.shape, args.instance_seed + i)?;
            out.push((format!("generated-{}", spec.seed), generate(&spec)?));
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("bench needs at least one instance".into()));
    }
    if args.reference_energy.is_some() && out.len() != 1 {
        return Err(CliError::Usage(
            "--reference-energy applies to a single instance".into(),
        ));
    }
    Ok(out)
}

fn check_budget(bbb: u64, baseline: u64, allow_uneven: bool) -> CliResult<()> {
    let percent = 100.0 * (baseline as f64 - bbb as f64).abs() / (bbb.max(1) as f64);
    if percent > 100.0 * BUDGET_TOLERANCE && !allow_uneven {
        return Err(CliError::UnevenBudget {
            bbb,
            baseline,
            percent,
        });
    }
    Ok(())
}

fn curve_points(
    label: &str,
    solver: &'static str,
    out: &Outcome,
    per_read: u64,
    e_ref: Option<f64>,
) -> Vec<CurvePoint> {
    let point = |evals: u64, e: f64| {
        let (metric, q) = quality(e, e_ref);
        CurvePoint {
            instance: label.to_string(),
            solver,
            evals,
            best_energy: e,
            metric,
            quality: q,
        }
    };
    if let Some(tree) = &out.tree {
        tree.layers
            .iter()
            .map(|l| point(l.evals, l.incumbent))
            .collect()
    } else if let Some(iters) = &out.iterations {
        iters
            .iter()
            .map(|r| point(r.evals, r.best_energy))
            .collect()
    } else if let Some(reads) = &out.read_energies {
        reads
            .iter()
            .enumerate()
            .map(|(r, &e)| point((r as u64 + 1) * per_read, e))
            .collect()
    } else {
        vec![point(out.evals.total(), out.energy)]
    }
}

fn run_cell(args: &BenchArgs, index: usize, label: &str, problem: &HuboProblem) -> CliResult<Cell> {
    let start = Instant::now();
    let n = problem.n();
    let cell_seed = seed::derive(args.seed, &[stream::BENCH, index as u64]);
    let e_ref = match args.reference_energy {
        Some(e) => Some(e),
        None if n <= EXHAUSTION_CAP => Some(brute_force(problem, false)?.energy),
        None => None,
    };

    let tree_config = bbb_config(&args.tree, &args.quantum, cell_seed)?;
    let bbb = run_bbb(problem, &tree_config)?;
    let bbb_total = bbb.evals.total();

    let mut per_read = 0;
    let (baseline, sweeps) = match args.baseline {
        Baseline::Sa => {
            if args.sa_reads == 0 || n == 0 {
                return Err(CliError::Usage("SA baseline needs reads and spins".into()));
            }
            let sweeps = args.sa_sweeps.unwrap_or_else(|| {
                let per_sweep = (args.sa_reads * n) as f64;
                ((bbb_total as f64 / per_sweep).round() as usize).max(1)
            });
            per_read = (sweeps * n) as u64;
            let sa = SaArgs {
                sweeps,
                reads: args.sa_reads,
                t_initial: None,
                t_final: None,
            };
            (run_sa(problem, &sa_config(&sa, cell_seed))?, Some(sweeps))
        }
        Baseline::Bfdcqo => {
            // one plain run spending the whole tree's shot budget per round
            let mut q = args.quantum.clone();
            q.shots *= tree_config.planned_runs() as u64;
            (run_bfdcqo(problem, &bf_config(&q, cell_seed)?)?, None)
        }
        Baseline::Bbb => (run_bbb(problem, &tree_config)?, None),
    };
    let baseline_total = baseline.evals.total();
    check_budget(bbb_total, baseline_total, args.allow_uneven)?;

    let scale = 1.0 + problem.abs_coefficient_sum();
    let delta = baseline.energy - bbb.energy;
    let outcome = if delta.abs() <= 1e-9 * scale {
        "tie"
    } else if delta > 0.0 {
        "win"
    } else {
        "loss"
    };
    let (metric, quality_bbb) = quality(bbb.energy, e_ref);
    let (_, quality_baseline) = quality(baseline.energy, e_ref);
    let name = baseline_name(args.baseline);
    let mut curve = curve_points(label, "bbb", &bbb, 0, e_ref);
    curve.extend(curve_points(label, name, &baseline, per_read, e_ref));
    Ok(Cell {
        row: BenchRow {
            instance: label.to_string(),
            n,
            seed: cell_seed,
            e_ref,
            e_bbb: bbb.energy,
            e_baseline: baseline.energy,
            delta_e: delta,
            outcome,
            evals_bbb: bbb_total,
            evals_baseline: baseline_total,
            baseline_sweeps: sweeps,
            metric,
            quality_bbb,
            quality_baseline,
            wall_time_s: args.timing.then(|| start.elapsed().as_secs_f64()),
        },
        curve,
    })
}

pub fn tally(rows: &[BenchRow]) -> Tallies {
    let mut t = Tallies::default();
    for r in rows {
        match r.outcome {
            "win" => t.win += 1,
            "tie" => t.tie += 1,
            _ => t.loss += 1,
        }
    }
    t
}

pub fn run_command(args: &BenchArgs) -> CliResult<()> {
    let instances = load_all(args)?;
    // validate shared flags once before fanning out
    let echo = serde_json::to_value(bbb_config(&args.tree, &args.quantum, args.seed)?)
        .expect("plain data");
    let cells: Vec<Cell> = instances
        .par_iter()
        .enumerate()
        .map(|(i, (label, p))| run_cell(args, i, label, p))
        .collect::<CliResult<_>>()?;
    let rows: Vec<BenchRow> = cells.iter().map(|c| c.row.clone()).collect();
    let curve: Vec<CurvePoint> = cells.into_iter().flat_map(|c| c.curve).collect();
    let tallies = tally(&rows);
    eprintln!(
        "bbb vs {}: {} win, {} tie, {} loss",
        baseline_name(args.baseline),
        tallies.win,
        tallies.tie,
        tallies.loss
    );

    if let Some(path) = &args.curve_out {
        write_atomic(path, &to_csv(&curve)?)?;
    }
    let text = match args.output.format {
        Format::Json => to_json(&BenchReport {
            seed: args.seed,
            baseline: baseline_name(args.baseline),
            bbb_config: echo,
            tallies,
            rows: &rows,
            curve: &curve,
        }),
        Format::Csv => to_csv(&rows)?,
    };
    emit(args.output.out.as_deref(), &text)
}

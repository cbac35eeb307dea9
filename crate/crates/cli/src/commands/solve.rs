use std::path::Path;
use std::time::Instant;

use bbdcqo::bbb::{
    approximate_bbb, exact_bbb, BbbConfig, BruteForceOracle, ExactConfig, LayerRecord,
    TrivialBoundOracle,
};
use bbdcqo::bfdcqo::{run, BfdcqoConfig, BiasField, FieldOrientation, IterationRecord};
use bbdcqo::cd::{CircuitOptions, Schedule};
use bbdcqo::classical::{
    brute_force, greedy_local_search, simulated_annealing, GreedyConfig, SaConfig,
};
use bbdcqo::hubo::{parse, HuboProblem, SpinAssignment};
use bbdcqo::seed::{self, stream};
use bbdcqo::FunctionEvalCounter;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    Format, OracleArg, OrientationArg, QuantumArgs, SaArgs, SolveArgs, Solver, TreeArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{emit, read, to_csv, to_json, write_atomic};

pub fn load_instance(path: &Path) -> CliResult<HuboProblem> {
    Ok(parse(&read(path)?)?.problem)
}

pub fn solver_name(s: Solver) -> &'static str {
    match s {
        Solver::Sa => "sa",
        Solver::Greedy => "greedy",
        Solver::Bfdcqo => "bfdcqo",
        Solver::Bbb => "bbb",
        Solver::ExactBbb => "exact-bbb",
        Solver::Brute => "brute",
    }
}

pub fn bf_config(q: &QuantumArgs, rng_seed: u64) -> CliResult<BfdcqoConfig> {
    let config = BfdcqoConfig {
        iterations: q.iterations,
        shots: q.shots,
        cvar_fraction: q.cvar,
        schedule: Schedule::new(q.total_time)?,
        circuit: CircuitOptions {
            quadrature_panels: q.panels,
            ..Default::default()
        },
        hx_value: q.hx,
        rng_seed,
        post_process: q.post_process.then_some(GreedyConfig {
            sweeps: q.greedy_sweeps,
            top_k: q.greedy_top_k,
            rng_seed: 0,
        }),
        qubit_cap: q.qubit_cap,
        orientation: match q.orientation {
            OrientationArg::Measured => FieldOrientation::Measured,
            OrientationArg::Reversed => FieldOrientation::Reversed,
        },
    };
    if config.circuit.quadrature_panels == 0 {
        return Err(CliError::Usage("--panels must be positive".into()));
    }
    config.validate()?;
    Ok(config)
}

pub fn bbb_config(t: &TreeArgs, q: &QuantumArgs, rng_seed: u64) -> CliResult<BbbConfig> {
    let warm_start = t
        .warm_start
        .as_deref()
        .map(SpinAssignment::from_bitstring)
        .transpose()?;
    Ok(BbbConfig {
        k: t.k,
        w: t.w,
        rescale_cap: t.rescale_cap,
        bf_config: bf_config(q, rng_seed)?,
        warm_start,
        warm_start_scale: t.warm_start_scale,
        run_budget: t.run_budget,
    })
}

pub fn sa_config(a: &SaArgs, rng_seed: u64) -> SaConfig {
    SaConfig {
        t_initial: a.t_initial,
        t_final: a.t_final,
        ..SaConfig::new(a.sweeps, a.reads, rng_seed)
    }
}

/// Evaluation ledger with its total spelled out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ledger {
    pub quantum_shots: u64,
    pub sa_flips: u64,
    pub greedy_flips: u64,
    pub total: u64,
}

impl From<FunctionEvalCounter> for Ledger {
    fn from(c: FunctionEvalCounter) -> Self {
        Self {
            quantum_shots: c.quantum_shots,
            sa_flips: c.sa_flips,
            greedy_flips: c.greedy_flips,
            total: c.total(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeRecord {
    pub bf_runs: usize,
    pub layers: Vec<LayerRecord>,
    /// `depth,index,sign,best_energy,pruned` listing.
    pub dump: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactRecord {
    pub node_count: usize,
    pub expanded: usize,
}

/// Outcome of one solver run, before formatting.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub energy: f64,
    pub assignment: SpinAssignment,
    pub evals: FunctionEvalCounter,
    pub config: Value,
    pub iterations: Option<Vec<IterationRecord>>,
    pub tree: Option<TreeRecord>,
    pub exact: Option<ExactRecord>,
    /// Best energy after each read, for SA convergence curves.
    pub read_energies: Option<Vec<f64>>,
}

impl Outcome {
    fn plain(
        energy: f64,
        assignment: SpinAssignment,
        evals: FunctionEvalCounter,
        config: Value,
    ) -> Self {
        Self {
            energy,
            assignment,
            evals,
            config,
            iterations: None,
            tree: None,
            exact: None,
            read_energies: None,
        }
    }
}

fn greedy(problem: &HuboProblem, args: &SolveArgs) -> CliResult<Outcome> {
    let n = problem.n();
    let reads = args.sa.reads;
    if reads == 0 {
        return Err(CliError::Usage("--reads must be positive".into()));
    }
    let mut best: Option<(SpinAssignment, f64)> = None;
    let mut flips = 0;
    for r in 0..reads as u64 {
        let mut start_rng = seed::rng(args.seed, &[stream::SA_START, r]);
        let start = SpinAssignment::new(
            (0..n)
                .map(|_| if start_rng.gen::<bool>() { 1 } else { -1 })
                .collect(),
        )?;
        let config = GreedyConfig {
            sweeps: args.quantum.greedy_sweeps,
            top_k: 1,
            rng_seed: seed::derive(args.seed, &[stream::SA_READ, r]),
        };
        let (z, evals) = greedy_local_search(problem, &start, &config)?;
        flips += evals;
        let e = problem.energy(&z)?;
        if best.as_ref().is_none_or(|(_, b)| e < *b) {
            best = Some((z, e));
        }
    }
    let (z, e) = best.expect("at least one read");
    let config = json!({ "sweeps": args.quantum.greedy_sweeps, "reads": reads });
    Ok(Outcome::plain(
        e,
        z,
        FunctionEvalCounter::greedy(flips),
        config,
    ))
}

pub fn run_sa(problem: &HuboProblem, config: &SaConfig) -> CliResult<Outcome> {
    let out = simulated_annealing(problem, config)?;
    let best = out.samples.best();
    let mut running = f64::INFINITY;
    let curve = out
        .reads
        .iter()
        .map(|r| {
            running = running.min(r.energy);
            running
        })
        .collect();
    let mut echo = serde_json::to_value(config).expect("plain data");
    echo["t_initial"] = json!(out.t_initial);
    echo["t_final"] = json!(out.t_final);
    let mut o = Outcome::plain(best.energy, best.assignment.clone(), out.evals, echo);
    o.read_energies = Some(curve);
    Ok(o)
}

pub fn run_bfdcqo(problem: &HuboProblem, config: &BfdcqoConfig) -> CliResult<Outcome> {
    let out = run(problem, &BiasField::zeros(problem.n()), config)?;
    let mut o = Outcome::plain(
        out.best_energy,
        out.best_assignment,
        out.evals,
        serde_json::to_value(config).expect("plain data"),
    );
    o.iterations = Some(out.iterations);
    Ok(o)
}

pub fn run_bbb(problem: &HuboProblem, config: &BbbConfig) -> CliResult<Outcome> {
    let out = approximate_bbb(problem, config)?;
    let mut o = Outcome::plain(
        out.best_energy,
        out.best_assignment,
        out.evals,
        serde_json::to_value(config).expect("plain data"),
    );
    o.tree = Some(TreeRecord {
        bf_runs: out.bf_runs,
        layers: out.layers,
        dump: out.tree.dump(),
    });
    Ok(o)
}

fn run_exact(problem: &HuboProblem, args: &SolveArgs) -> CliResult<Outcome> {
    let config = ExactConfig {
        bf_config: bf_config(&args.quantum, args.seed)?,
    };
    let out = match args.oracle {
        OracleArg::Brute => exact_bbb(problem, &BruteForceOracle::default(), &config)?,
        OracleArg::Trivial => exact_bbb(problem, &TrivialBoundOracle, &config)?,
    };
    let oracle = match args.oracle {
        OracleArg::Brute => "brute",
        OracleArg::Trivial => "trivial",
    };
    let mut echo = serde_json::to_value(&config).expect("plain data");
    echo["oracle"] = json!(oracle);
    let mut o = Outcome::plain(out.energy, out.assignment, out.evals, echo);
    o.exact = Some(ExactRecord {
        node_count: out.node_count,
        expanded: out.expanded,
    });
    Ok(o)
}

pub fn solve(problem: &HuboProblem, args: &SolveArgs) -> CliResult<Outcome> {
    match args.solver {
        Solver::Sa => run_sa(problem, &sa_config(&args.sa, args.seed)),
        Solver::Greedy => greedy(problem, args),
        Solver::Bfdcqo => run_bfdcqo(problem, &bf_config(&args.quantum, args.seed)?),
        Solver::Bbb => run_bbb(problem, &bbb_config(&args.tree, &args.quantum, args.seed)?),
        Solver::ExactBbb => run_exact(problem, args),
        Solver::Brute => {
            let out = brute_force(problem, false)?;
            Ok(Outcome::plain(
                out.energy,
                out.assignment,
                FunctionEvalCounter::default(),
                json!({}),
            ))
        }
    }
}

#[derive(Serialize)]
struct InstanceEcho {
    n: usize,
    linear: usize,
    quadratic: usize,
    cubic: usize,
}

#[derive(Serialize)]
struct SolveRecord<'a> {
    solver: &'static str,
    seed: u64,
    instance: InstanceEcho,
    config: &'a Value,
    best_energy: f64,
    /// Bit `q` is 1 when spin `q` is −1, qubit 0 first.
    best_assignment: String,
    evals: Ledger,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<&'a [IterationRecord]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<&'a TreeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<&'a ExactRecord>,
}

#[derive(Serialize)]
struct SolveRow {
    solver: &'static str,
    seed: u64,
    n: usize,
    best_energy: f64,
    best_assignment: String,
    quantum_shots: u64,
    sa_flips: u64,
    greedy_flips: u64,
    total_evals: u64,
    wall_time_s: Option<f64>,
}

pub fn run_command(args: &SolveArgs) -> CliResult<()> {
    let problem = load_instance(&args.instance)?;
    let start = Instant::now();
    let out = solve(&problem, args)?;
    let wall = args.timing.then(|| start.elapsed().as_secs_f64());

    if let (Some(path), Some(tree)) = (&args.tree_out, &out.tree) {
        write_atomic(path, &tree.dump)?;
    }
    let (l, q, c) = problem.term_counts();
    let ledger = Ledger::from(out.evals);
    let text = match args.output.format {
        Format::Json => to_json(&SolveRecord {
            solver: solver_name(args.solver),
            seed: args.seed,
            instance: InstanceEcho {
                n: problem.n(),
                linear: l,
                quadratic: q,
                cubic: c,
            },
            config: &out.config,
            best_energy: out.energy,
            best_assignment: out.assignment.to_bitstring(),
            evals: ledger,
            wall_time_s: wall,
            iterations: out.iterations.as_deref(),
            tree: out.tree.as_ref(),
            exact: out.exact.as_ref(),
        }),
        Format::Csv => to_csv(&[SolveRow {
            solver: solver_name(args.solver),
            seed: args.seed,
            n: problem.n(),
            best_energy: out.energy,
            best_assignment: out.assignment.to_bitstring(),
            quantum_shots: ledger.quantum_shots,
            sa_flips: ledger.sa_flips,
            greedy_flips: ledger.greedy_flips,
            total_evals: ledger.total,
            wall_time_s: wall,
        }])?,
    };
    emit(args.output.out.as_deref(), &text)
}

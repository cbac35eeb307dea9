use bbdcqo::quadratize::{
    binary_max_abs_coefficient, export_json, hubo_to_qubo, verify_reduction, QuboProblem,
    ReductionMap,
};
use serde::Deserialize;

use super::solve::load_instance;
use crate::args::{QuadratizeArgs, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::output::{emit, read, to_json};

/// Default penalty multiplier on the largest binary-expanded coefficient.
pub const PENALTY_FACTOR: f64 = 10.0;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuboFile {
    n: usize,
    offset: f64,
    linear: Vec<(usize, f64)>,
    quadratic: Vec<(usize, usize, f64)>,
    reduction: ReductionFile,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReductionFile {
    penalty: f64,
    original_n: usize,
    aux: Vec<(usize, usize, usize)>,
}

pub fn parse_qubo(text: &str) -> CliResult<(QuboProblem, ReductionMap)> {
    let f: QuboFile = serde_json::from_str(text)
        .map_err(|e| CliError::Usage(format!("invalid QUBO file: {e}")))?;
    let in_range = |i: usize| i < f.n;
    let ok = f.linear.iter().all(|&(i, _)| in_range(i))
        && f.quadratic
            .iter()
            .all(|&(i, j, _)| in_range(i) && in_range(j))
        && f.reduction
            .aux
            .iter()
            .all(|&(y, i, j)| in_range(y) && in_range(i) && in_range(j));
    if !ok {
        return Err(CliError::Usage(
            "QUBO file references a variable out of range".into(),
        ));
    }
    let qubo = QuboProblem {
        m: f.n,
        offset: f.offset,
        linear: f.linear,
        quadratic: f.quadratic,
    };
    let map = ReductionMap {
        n: f.reduction.original_n,
        penalty: f.reduction.penalty,
        aux: f
            .reduction
            .aux
            .into_iter()
            .map(|(y, i, j)| (y, [i, j]))
            .collect(),
    };
    Ok((qubo, map))
}

pub fn run_quadratize(args: &QuadratizeArgs) -> CliResult<()> {
    let problem = load_instance(&args.instance)?;
    let penalty = match args.penalty {
        Some(p) => p,
        None => {
            let m = PENALTY_FACTOR * binary_max_abs_coefficient(&problem);
            if m > 0.0 {
                m
            } else {
                1.0
            }
        }
    };
    let (qubo, map) = hubo_to_qubo(&problem, penalty)?;
    emit(args.out.as_deref(), &export_json(&qubo, &map))
}

/// Writes the report, then fails when any check does.
pub fn run_verify(args: &VerifyArgs) -> CliResult<()> {
    let problem = load_instance(&args.instance)?;
    let (qubo, map) = parse_qubo(&read(&args.qubo)?)?;
    if map.n != problem.n() {
        return Err(CliError::Usage(format!(
            "reduction is for {} variables, instance has {}",
            map.n,
            problem.n()
        )));
    }
    let report = verify_reduction(&problem, &qubo, &map)?;
    emit(args.out.as_deref(), &to_json(&report))?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

//! Bias-field feedback loop around the counterdiabatic circuit.
//!
//! Each round prepares the ground state of the biased driver, applies the
//! one-step counterdiabatic circuit, samples, optionally refines the samples
//! greedily, and sets the next biases to the mean spins of the lowest-energy
//! CVaR fraction of shots.

use serde::{Deserialize, Serialize};

use crate::cd::{build_cd_circuit, CircuitOptions, DriverConfig, Schedule};
use crate::classical::{greedy_post_process, GreedyConfig};
use crate::error::{Error, Result};
use crate::hubo::{HuboProblem, SampleSet, SpinAssignment};
use crate::ledger::FunctionEvalCounter;
use crate::seed::{self, stream};
use crate::sim::{run_circuit, DEFAULT_QUBIT_CAP};

/// Longitudinal biases `h^b`, one per spin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BiasField(Vec<f64>);

impl BiasField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!("bias {i} is not finite")));
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// `scale · z_i` for each spin.
    pub fn from_spins(z: &SpinAssignment, scale: f64) -> Self {
        Self(z.as_slice().iter().map(|&s| scale * f64::from(s)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: f64) {
        self.0[i] = v;
    }

    /// Scales the entries outside `skip` by `cap / max|h|` when that maximum
    /// exceeds `cap`; entries in `skip` are left alone.
    pub fn rescale_except(&mut self, cap: f64, skip: &[usize]) {
        let max = self
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max);
        if max > cap {
            let f = cap / max;
            for (i, v) in self.0.iter_mut().enumerate() {
                if !skip.contains(&i) {
                    *v *= f;
                }
            }
        }
    }
}

impl From<BiasField> for Vec<f64> {
    fn from(b: BiasField) -> Self {
        b.0
    }
}

/// How a bias entry enters the driver's `σ^z` field.
///
/// With `Measured`, the driver field is `h^b_i = ⟨σ^z_i⟩` itself, so the
/// prepared ground state leans toward the spin opposite the measured mean.
/// `Reversed` uses `-h^b_i`, which prepares a state leaning toward it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FieldOrientation {
    #[default]
    Measured,
    Reversed,
}

impl FieldOrientation {
    pub fn sign(self) -> f64 {
        match self {
            Self::Measured => 1.0,
            Self::Reversed => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfdcqoConfig {
    pub iterations: usize,
    pub shots: u64,
    /// CVaR fraction `α ∈ (0, 1]`.
    pub cvar_fraction: f64,
    pub schedule: Schedule,
    pub circuit: CircuitOptions,
    pub hx_value: f64,
    pub rng_seed: u64,
    /// Greedy refinement applied to each round's samples; `None` disables it.
    pub post_process: Option<GreedyConfig>,
    pub qubit_cap: usize,
    #[serde(default)]
    pub orientation: FieldOrientation,
}

impl Default for BfdcqoConfig {
    fn default() -> Self {
        Self {
            iterations: 3,
            shots: 1000,
            cvar_fraction: 0.1,
            schedule: Schedule::default(),
            circuit: CircuitOptions::default(),
            hx_value: -1.0,
            rng_seed: 0,
            post_process: None,
            qubit_cap: DEFAULT_QUBIT_CAP,
            orientation: FieldOrientation::Measured,
        }
    }
}

impl BfdcqoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 || self.shots == 0 {
            return Err(Error::Config(
                "iterations and shots must be positive".into(),
            ));
        }
        if !(self.cvar_fraction > 0.0 && self.cvar_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "CVaR fraction {} outside (0, 1]",
                self.cvar_fraction
            )));
        }
        if self.hx_value == 0.0 || !self.hx_value.is_finite() {
            return Err(Error::Config(
                "transverse field must be finite and nonzero".into(),
            ));
        }
        Ok(())
    }
}

/// Mean spins over the lowest `⌈α · shots⌉` shots.
pub fn cvar_bias_update(samples: &SampleSet, fraction: f64) -> Result<BiasField> {
    if samples.total_shots() == 0 {
        return Err(Error::EmptySamples);
    }
    let m = samples.tail_size(fraction);
    let mut sums = vec![0i64; samples.n()];
    for (r, take) in samples.lowest_shots(m) {
        for (acc, &s) in sums.iter_mut().zip(r.assignment.as_slice()) {
            *acc += i64::from(s) * take as i64;
        }
    }
    BiasField::new(sums.into_iter().map(|s| s as f64 / m as f64).collect())
}

/// Per-round trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Incumbent energy after this round.
    pub best_energy: f64,
    pub mean_energy: f64,
    pub cvar_energy: f64,
    /// Cumulative function evaluations.
    pub evals: u64,
}

#[derive(Debug, Clone)]
pub struct BfdcqoResult {
    pub best_assignment: SpinAssignment,
    pub best_energy: f64,
    /// Bias produced by the last round.
    pub final_bias: BiasField,
    pub evals: FunctionEvalCounter,
    /// Samples of every round, merged.
    pub samples: SampleSet,
    pub iterations: Vec<IterationRecord>,
}

/// Runs the feedback loop from `initial_bias`.
pub fn run(
    problem: &HuboProblem,
    initial_bias: &BiasField,
    config: &BfdcqoConfig,
) -> Result<BfdcqoResult> {
    run_pinned(problem, initial_bias, &[], config)
}

/// As [`run`], with `pins` written back into the bias after every update so
/// that imposed constraints persist across rounds.
pub fn run_pinned(
    problem: &HuboProblem,
    initial_bias: &BiasField,
    pins: &[(usize, f64)],
    config: &BfdcqoConfig,
) -> Result<BfdcqoResult> {
    config.validate()?;
    let n = problem.n();
    if initial_bias.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: initial_bias.len(),
        });
    }
    if let Some(&(i, _)) = pins.iter().find(|(i, _)| *i >= n) {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if n > config.qubit_cap {
        return Err(Error::QubitCap {
            n,
            cap: config.qubit_cap,
        });
    }

    let mut bias = initial_bias.clone();
    let mut evals = FunctionEvalCounter::default();
    let mut best: Option<(SpinAssignment, f64)> = None;
    let mut merged: Option<SampleSet> = None;
    let mut records = Vec::with_capacity(config.iterations);

    for round in 0..config.iterations {
        let sign = config.orientation.sign();
        let field = bias.as_slice().iter().map(|v| sign * v).collect();
        let driver = DriverConfig::uniform(config.hx_value, field)?;
        let circuit = build_cd_circuit(problem, &driver, &config.schedule, &config.circuit)?;
        let state = run_circuit(&circuit, config.qubit_cap)?;
        let round_seed = seed::derive(config.rng_seed, &[stream::SAMPLE, round as u64]);
        let mut samples = state.sample(problem, config.shots, round_seed)?;
        evals.quantum_shots += config.shots;

        if let Some(greedy) = &config.post_process {
            let g = GreedyConfig {
                rng_seed: seed::derive(config.rng_seed, &[stream::POST, round as u64]),
                ..greedy.clone()
            };
            let (refined, flips) = greedy_post_process(problem, &samples, &g)?;
            samples = refined;
            evals.greedy_flips += flips;
        }

        let top = samples.best();
        if best.as_ref().is_none_or(|(_, e)| top.energy < *e) {
            best = Some((top.assignment.clone(), top.energy));
        }

        bias = cvar_bias_update(&samples, config.cvar_fraction)?;
        for &(i, v) in pins {
            bias.set(i, v);
        }

        records.push(IterationRecord {
            iteration: round,
            best_energy: best.as_ref().map(|b| b.1).expect("set above"),
            mean_energy: samples.mean_energy(),
            cvar_energy: samples.cvar_energy(config.cvar_fraction),
            evals: evals.total(),
        });
        merged = Some(match merged {
            None => samples,
            Some(m) => m.merged(&samples)?,
        });
    }

    let (best_assignment, best_energy) = best.expect("at least one round");
    Ok(BfdcqoResult {
        best_assignment,
        best_energy,
        final_bias: bias,
        evals,
        samples: merged.expect("at least one round"),
        iterations: records,
    })
}

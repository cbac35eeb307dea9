use crate::classical::{brute_force_with_cap, EXHAUSTION_CAP};
use crate::error::{Error, Result};
use crate::hubo::HuboProblem;

/// A continuous point and a lower bound on the constrained minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Relaxation {
    /// Length `n`; fixed spins carry their fixed values.
    pub z: Vec<f64>,
    pub lower_bound: f64,
}

/// Relaxation of a HUBO with some spins fixed.
///
/// Implementations must be admissible: `lower_bound` may never exceed the
/// true minimum over assignments consistent with `fixed`.
pub trait RelaxationOracle: Sync {
    fn relax(&self, problem: &HuboProblem, fixed: &[(usize, i8)]) -> Result<Relaxation>;
}

/// Solves the free spins exactly. The bound is tight and the point is the
/// minimiser.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceOracle {
    pub cap: usize,
}

impl Default for BruteForceOracle {
    fn default() -> Self {
        Self {
            cap: EXHAUSTION_CAP,
        }
    }
}

impl RelaxationOracle for BruteForceOracle {
    fn relax(&self, problem: &HuboProblem, fixed: &[(usize, i8)]) -> Result<Relaxation> {
        let sub = problem.substitute(fixed)?;
        let bf = brute_force_with_cap(&sub.problem, false, self.cap)?;
        let full = sub.lift(bf.assignment.as_slice());
        Ok(Relaxation {
            z: full.as_slice().iter().map(|&s| f64::from(s)).collect(),
            lower_bound: sub.offset + bf.energy,
        })
    }
}

/// `offset − Σ|c|` over the substituted problem, with free spins at zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrivialBoundOracle;

impl RelaxationOracle for TrivialBoundOracle {
    fn relax(&self, problem: &HuboProblem, fixed: &[(usize, i8)]) -> Result<Relaxation> {
        let sub = problem.substitute(fixed)?;
        let mut z = vec![0.0; problem.n()];
        for &(i, s) in fixed {
            z[i] = f64::from(s);
        }
        Ok(Relaxation {
            z,
            lower_bound: sub.offset - sub.problem.abs_coefficient_sum(),
        })
    }
}

/// Wraps an oracle and rejects any bound above the exhaustive constrained
/// minimum. Intended for tests on small instances.
#[derive(Debug, Clone, Copy)]
pub struct CheckedOracle<O> {
    pub inner: O,
    pub tolerance: f64,
}

impl<O> CheckedOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            tolerance: 1e-9,
        }
    }
}

impl<O: RelaxationOracle> RelaxationOracle for CheckedOracle<O> {
    fn relax(&self, problem: &HuboProblem, fixed: &[(usize, i8)]) -> Result<Relaxation> {
        let r = self.inner.relax(problem, fixed)?;
        let exact = BruteForceOracle::default()
            .relax(problem, fixed)?
            .lower_bound;
        if r.lower_bound > exact + self.tolerance {
            return Err(Error::ContractViolation(format!(
                "lower bound {} exceeds constrained minimum {exact} with fixed {fixed:?}",
                r.lower_bound
            )));
        }
        Ok(r)
    }
}

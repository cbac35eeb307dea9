//! Function-evaluation accounting shared by all solvers.
//!
//! One evaluation is one energy measurement: a quantum shot, a proposed SA
//! spin flip, or a `ΔE` evaluation during greedy descent.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionEvalCounter {
    pub quantum_shots: u64,
    pub sa_flips: u64,
    pub greedy_flips: u64,
}

impl FunctionEvalCounter {
    pub fn shots(quantum_shots: u64) -> Self {
        Self {
            quantum_shots,
            ..Self::default()
        }
    }

    pub fn sa(sa_flips: u64) -> Self {
        Self {
            sa_flips,
            ..Self::default()
        }
    }

    pub fn greedy(greedy_flips: u64) -> Self {
        Self {
            greedy_flips,
            ..Self::default()
        }
    }

    pub fn total(&self) -> u64 {
        self.quantum_shots + self.sa_flips + self.greedy_flips
    }
}

impl Add for FunctionEvalCounter {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            quantum_shots: self.quantum_shots + rhs.quantum_shots,
            sa_flips: self.sa_flips + rhs.sa_flips,
            greedy_flips: self.greedy_flips + rhs.greedy_flips,
        }
    }
}

impl AddAssign for FunctionEvalCounter {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sum for FunctionEvalCounter {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

/// Componentwise sum.
pub fn ledger_merge<'a, I>(counters: I) -> FunctionEvalCounter
where
    I: IntoIterator<Item = &'a FunctionEvalCounter>,
{
    counters.into_iter().copied().sum()
}

/// Shots spent by an approximate tree of depth `k`: `(2k+1)` BF-DCQO runs of
/// `iterations × shots` each.
pub fn planned_bbb_shots(k: u64, iterations: u64, shots: u64) -> u64 {
    (2 * k + 1) * iterations * shots
}

/// Flips proposed by simulated annealing: `sweeps × reads × n`.
pub fn planned_sa_flips(sweeps: u64, reads: u64, n: u64) -> u64 {
    sweeps * reads * n
}

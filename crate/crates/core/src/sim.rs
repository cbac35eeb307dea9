//! Dense statevector backend.
//!
//! Qubit `q` is bit `q` of the amplitude index, and basis bit `0` measures as
//! spin `+1`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::cd::CdCircuit;
use crate::error::{Error, Result};
use crate::hubo::{HuboProblem, SampleSet};
use crate::pauli::PauliString;
use crate::seed;

pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Sampling refuses states whose squared norm is further than this from one.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Below this many amplitudes, loops run on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Product state `⊗_q R_y(θ_q)|0⟩`.
    pub fn prepare(prep_angles: &[f64]) -> Result<Self> {
        Self::prepare_with_cap(prep_angles, DEFAULT_QUBIT_CAP)
    }

    pub fn prepare_with_cap(prep_angles: &[f64], cap: usize) -> Result<Self> {
        let n = prep_angles.len();
        if n > cap || n >= 64 {
            return Err(Error::QubitCap { n, cap });
        }
        let factors: Vec<(f64, f64)> = prep_angles
            .iter()
            .map(|t| ((t / 2.0).cos(), (t / 2.0).sin()))
            .collect();
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        amplitudes.reserve((1usize << n) - 1);
        for &(c, s) in &factors {
            let len = amplitudes.len();
            amplitudes.extend_from_within(..);
            for a in &mut amplitudes[..len] {
                *a *= c;
            }
            for a in &mut amplitudes[len..] {
                *a *= s;
            }
        }
        Ok(Self { n, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::Config(format!(
                "{len} amplitudes is not a power of two"
            )));
        }
        Ok(Self {
            n: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `exp(-i θ/2 · P) = cos(θ/2) I - i sin(θ/2) P`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, angle: f64) -> Result<()> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        let (x, z) = p.masks().expect("register is below 64 qubits");
        let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
        let y_phase = match (x & z).count_ones() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        // -i·sin·(phase of P acting on |k⟩)
        let minus_is = Complex64::new(0.0, -s) * y_phase;
        let factor = move |k: usize| {
            if (k as u64 & z).count_ones().is_multiple_of(2) {
                minus_is
            } else {
                -minus_is
            }
        };
        let parallel = self.amplitudes.len() >= PARALLEL_THRESHOLD;

        if x == 0 {
            let update = |(k, a): (usize, &mut Complex64)| *a *= c + factor(k);
            if parallel {
                self.amplitudes.par_iter_mut().enumerate().for_each(update);
            } else {
                self.amplitudes.iter_mut().enumerate().for_each(update);
            }
            return Ok(());
        }

        let high = 63 - x.leading_zeros() as usize;
        let half = 1usize << high;
        let partner = (x as usize) ^ half;
        let update = |(chunk_index, chunk): (usize, &mut [Complex64])| {
            let base = chunk_index * 2 * half;
            let (lo, hi) = chunk.split_at_mut(half);
            #[allow(clippy::needless_range_loop)]
            for a in 0..half {
                let b = a ^ partner;
                let j = base + a;
                let jx = base + half + b;
                let (pj, pjx) = (lo[a], hi[b]);
                lo[a] = c * pj + factor(jx) * pjx;
                hi[b] = c * pjx + factor(j) * pj;
            }
        };
        if parallel {
            self.amplitudes
                .par_chunks_mut(2 * half)
                .with_min_len((PARALLEL_THRESHOLD / (2 * half)).max(1))
                .enumerate()
                .for_each(update);
        } else {
            self.amplitudes
                .chunks_mut(2 * half)
                .enumerate()
                .for_each(update);
        }
        Ok(())
    }

    /// Applies every rotation of `circuit` in order.
    pub fn apply_rotations(&mut self, circuit: &CdCircuit) -> Result<()> {
        for (p, theta) in &circuit.rotations {
            self.apply_pauli_rotation(p, *theta)?;
        }
        Ok(())
    }

    /// `⟨σ^z_q⟩` for every qubit.
    pub fn z_expectations(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (k, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            for (q, e) in out.iter_mut().enumerate() {
                if k >> q & 1 == 0 {
                    *e += p;
                } else {
                    *e -= p;
                }
            }
        }
        out
    }

    /// Raw basis-index counts from `shots` inverse-CDF draws.
    pub fn sample_indices(&self, shots: u64, rng_seed: u64) -> Result<BTreeMap<u64, u64>> {
        if shots == 0 {
            return Err(Error::Config("at least one shot is required".into()));
        }
        let mut acc = 0.0;
        let cdf: Vec<f64> = self
            .amplitudes
            .iter()
            .map(|a| {
                acc += a.norm_sqr();
                acc
            })
            .collect();
        if (acc - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Unnormalized(acc));
        }
        let mut rng = seed::rng(rng_seed, &[seed::stream::SAMPLE]);
        let last = cdf.len() - 1;
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = rng.gen::<f64>() * acc;
            let k = cdf.partition_point(|&c| c <= u).min(last);
            *counts.entry(k as u64).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// Measures `shots` times in the computational basis.
    pub fn sample(&self, problem: &HuboProblem, shots: u64, rng_seed: u64) -> Result<SampleSet> {
        if problem.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: problem.n(),
            });
        }
        SampleSet::from_index_counts(problem, &self.sample_indices(shots, rng_seed)?)
    }
}

/// Prepares and evolves the state for `circuit`.
pub fn run_circuit(circuit: &CdCircuit, cap: usize) -> Result<StateVector> {
    let mut state = StateVector::prepare_with_cap(&circuit.prep_angles, cap)?;
    state.apply_rotations(circuit)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn product_states() {
        let s = StateVector::prepare(&[0.0, 0.0]).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        let s = StateVector::prepare(&[PI, PI]).unwrap();
        assert!((s.amplitudes()[3].re - 1.0).abs() < 1e-15);
        let s = StateVector::prepare(&[PI / 2.0, PI / 2.0]).unwrap();
        assert!(s.amplitudes().iter().all(|a| (a.re - 0.5).abs() < 1e-15));
    }

    #[test]
    fn qubit_zero_is_low_bit() {
        // qubit 0 flipped to |1⟩, qubit 1 left at |0⟩
        let s = StateVector::prepare(&[PI, 0.0]).unwrap();
        assert!((s.amplitudes()[1].norm() - 1.0).abs() < 1e-15);
        let p = HuboProblem::empty(2);
        let set = s.sample(&p, 10, 1).unwrap();
        assert_eq!(set.records()[0].assignment.as_slice(), &[-1, 1]);
        assert_eq!(
            s.z_expectations()
                .iter()
                .map(|v| v.round())
                .collect::<Vec<_>>(),
            vec![-1.0, 1.0]
        );
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            StateVector::prepare_with_cap(&[0.0; 5], 4),
            Err(Error::QubitCap { n: 5, cap: 4 })
        ));
    }

    #[test]
    fn z_rotation_is_phase_only() {
        let mut s = StateVector::prepare(&[0.0]).unwrap();
        s.apply_pauli_rotation(&"Z".parse().unwrap(), PI).unwrap();
        assert!((s.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unnormalised_state_rejected() {
        let s = StateVector::from_amplitudes(vec![Complex64::new(0.5, 0.0); 2]).unwrap();
        assert!(matches!(
            s.sample_indices(3, 0),
            Err(Error::Unnormalized(_))
        ));
    }
}

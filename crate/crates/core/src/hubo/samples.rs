use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::problem::{HuboProblem, SpinAssignment};
use crate::error::{Error, Result};

/// One distinct measured configuration with its multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub assignment: SpinAssignment,
    pub energy: f64,
    pub count: u64,
}

/// Measured configurations sorted by ascending energy.
///
/// Duplicates are merged; equal energies are ordered by canonical bitstring
/// order, so the shot-expanded sequence is fully determined by the multiset
/// of outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    records: Vec<SampleRecord>,
    total_shots: u64,
}

impl SampleSet {
    /// Builds a sample set from `(assignment, count)` pairs, computing
    /// energies with `problem`.
    pub fn from_counts<I>(problem: &HuboProblem, outcomes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SpinAssignment, u64)>,
    {
        let mut merged: BTreeMap<Vec<i8>, u64> = BTreeMap::new();
        for (z, count) in outcomes {
            if z.len() != problem.n() {
                return Err(Error::DimensionMismatch {
                    expected: problem.n(),
                    found: z.len(),
                });
            }
            if count > 0 {
                *merged.entry(z.into()).or_default() += count;
            }
        }
        let mut records = Vec::with_capacity(merged.len());
        for (spins, count) in merged {
            let energy = problem.energy_of(&spins);
            records.push(SampleRecord {
                assignment: SpinAssignment::new(spins)?,
                energy,
                count,
            });
        }
        Self::from_records(records)
    }

    fn from_records(mut records: Vec<SampleRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptySamples);
        }
        records.sort_by(|a, b| {
            a.energy
                .total_cmp(&b.energy)
                .then_with(|| a.assignment.canonical_cmp(&b.assignment))
        });
        let total_shots = records.iter().map(|r| r.count).sum();
        Ok(Self {
            records,
            total_shots,
        })
    }

    /// Builds from basis-index counts (qubit 0 = least significant bit).
    pub fn from_index_counts(problem: &HuboProblem, counts: &BTreeMap<u64, u64>) -> Result<Self> {
        let n = problem.n();
        Self::from_counts(
            problem,
            counts
                .iter()
                .map(|(&idx, &c)| (SpinAssignment::from_index(idx, n), c)),
        )
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn n(&self) -> usize {
        self.records[0].assignment.len()
    }

    /// Lowest-energy record.
    pub fn best(&self) -> &SampleRecord {
        &self.records[0]
    }

    /// Shot-weighted mean energy.
    pub fn mean_energy(&self) -> f64 {
        let sum: f64 = self.records.iter().map(|r| r.energy * r.count as f64).sum();
        sum / self.total_shots as f64
    }

    /// Number of shots `ceil(fraction * total_shots)` in the CVaR tail. A
    /// product that lands within rounding of an integer is not rounded up.
    pub fn tail_size(&self, fraction: f64) -> u64 {
        let x = fraction * self.total_shots as f64;
        let m = (x - 1e-9 * x.max(1.0)).ceil() as u64;
        m.clamp(1, self.total_shots)
    }

    /// The lowest `m` shots as `(record, shots taken)` pairs.
    pub fn lowest_shots(&self, m: u64) -> impl Iterator<Item = (&SampleRecord, u64)> {
        let mut remaining = m;
        self.records.iter().map_while(move |r| {
            if remaining == 0 {
                return None;
            }
            let take = r.count.min(remaining);
            remaining -= take;
            Some((r, take))
        })
    }

    /// Mean energy of the lowest `ceil(fraction * total_shots)` shots.
    pub fn cvar_energy(&self, fraction: f64) -> f64 {
        let m = self.tail_size(fraction);
        let sum: f64 = self.lowest_shots(m).map(|(r, k)| r.energy * k as f64).sum();
        sum / m as f64
    }

    /// Merges another sample set over the same problem.
    pub fn merged(&self, other: &SampleSet) -> Result<SampleSet> {
        Self::rebuild(self.records.iter().chain(&other.records).cloned().collect())
    }

    /// Builds from records with precomputed energies, merging duplicates.
    pub(crate) fn rebuild(records: Vec<SampleRecord>) -> Result<SampleSet> {
        let mut map: BTreeMap<Vec<i8>, (f64, u64)> = BTreeMap::new();
        for r in records {
            map.entry(r.assignment.into()).or_insert((r.energy, 0)).1 += r.count;
        }
        let records = map
            .into_iter()
            .map(|(spins, (energy, count))| {
                Ok(SampleRecord {
                    assignment: SpinAssignment::new(spins)?,
                    energy,
                    count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_records(records)
    }
}

use std::collections::BTreeMap;

use rand::distributions::{Distribution, Uniform};
use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::problem::HuboProblem;
use crate::error::{Error, Result};
use crate::seed;

/// Interaction graph of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Topology {
    /// Nearest-neighbour chain: pairs `(i, i+1)` and triples `(i, i+1, i+2)`.
    SparseChain,
    /// `n2` distinct pairs and `n3` distinct triples drawn uniformly
    /// without replacement.
    DenseRandom { n2: usize, n3: usize },
}

/// Distribution of generated coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CoefficientDistribution {
    /// Continuous uniform on `[low, high]`, exact zeros redrawn.
    Uniform { low: f64, high: f64 },
}

impl Default for CoefficientDistribution {
    fn default() -> Self {
        CoefficientDistribution::Uniform {
            low: -1.0,
            high: 1.0,
        }
    }
}

/// Everything needed to regenerate an instance bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub topology: Topology,
    #[serde(default)]
    pub distribution: CoefficientDistribution,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn sparse_chain(n: usize, seed: u64) -> Self {
        Self {
            n,
            topology: Topology::SparseChain,
            distribution: CoefficientDistribution::default(),
            seed,
        }
    }

    pub fn dense(n: usize, n2: usize, n3: usize, seed: u64) -> Self {
        Self {
            n,
            topology: Topology::DenseRandom { n2, n3 },
            distribution: CoefficientDistribution::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let CoefficientDistribution::Uniform { low, high } = self.distribution;
        if !(low.is_finite() && high.is_finite() && low < high) {
            return Err(Error::Config(format!(
                "uniform coefficient range [{low}, {high}] is empty or non-finite"
            )));
        }
        match self.topology {
            Topology::SparseChain => {
                if self.n == 0 {
                    return Err(Error::Config("sparse chain needs n >= 1".into()));
                }
            }
            Topology::DenseRandom { n2, n3 } => {
                let max2 = binomial(self.n, 2);
                let max3 = binomial(self.n, 3);
                if n2 > max2 || n3 > max3 {
                    return Err(Error::Config(format!(
                        "requested {n2} pairs / {n3} triples but n={} admits {max2} / {max3}",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

type Pair = (usize, usize);
type Triple = (usize, usize, usize);

/// Generates the instance described by `spec`.
///
/// Every spin carries a linear term. The output is a pure function of
/// `spec`: coefficients are drawn in the order linear, pairs, triples, each
/// in canonical index order, from a stream derived from `spec.seed`.
pub fn generate(spec: &InstanceSpec) -> Result<HuboProblem> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = seed::rng(spec.seed, &[seed::stream::GENERATE]);
    let CoefficientDistribution::Uniform { low, high } = spec.distribution;
    let dist = Uniform::new_inclusive(low, high);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let c = dist.sample(rng);
        if c != 0.0 {
            break c;
        }
    };

    let (pairs, triples): (Vec<Pair>, Vec<Triple>) = match spec.topology {
        Topology::SparseChain => (
            (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            (0..n.saturating_sub(2))
                .map(|i| (i, i + 1, i + 2))
                .collect(),
        ),
        Topology::DenseRandom { n2, n3 } => {
            let all_pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            let all_triples: Vec<(usize, usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
                .collect();
            let mut pick2 = index::sample(&mut rng, all_pairs.len(), n2).into_vec();
            pick2.sort_unstable();
            let mut pick3 = index::sample(&mut rng, all_triples.len(), n3).into_vec();
            pick3.sort_unstable();
            (
                pick2.into_iter().map(|p| all_pairs[p]).collect(),
                pick3.into_iter().map(|p| all_triples[p]).collect(),
            )
        }
    };

    let linear: BTreeMap<usize, f64> = (0..n).map(|i| (i, draw(&mut rng))).collect();
    let quadratic: BTreeMap<(usize, usize), f64> =
        pairs.into_iter().map(|p| (p, draw(&mut rng))).collect();
    let cubic: BTreeMap<(usize, usize, usize), f64> =
        triples.into_iter().map(|t| (t, draw(&mut rng))).collect();
    HuboProblem::new(n, linear, quadratic, cubic)
}

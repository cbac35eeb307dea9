use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A configuration of `n` Ising spins, each `+1` or `-1`.
///
/// Bit convention: computational-basis bit `b` maps to spin `1 - 2b`, so
/// `|0>` is `+1`. Qubit `q` is bit `q` of a basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinAssignment(Vec<i8>);

impl SpinAssignment {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(pos) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInstance(format!(
                "spin {pos} has value {}, expected +1 or -1",
                spins[pos]
            )));
        }
        Ok(Self(spins))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Decodes a basis index (qubit 0 = least significant bit).
    pub fn from_index(index: u64, n: usize) -> Self {
        debug_assert!(n <= 64);
        Self(
            (0..n)
                .map(|q| if (index >> q) & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    /// Basis index of this configuration. Only meaningful for `n <= 64`.
    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0u64, |acc, (q, _)| acc | (1u64 << q))
    }

    /// Parses a bitstring written qubit 0 first, e.g. `"0110"`.
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        bits.chars()
            .map(|c| match c {
                '0' => Ok(1),
                '1' => Ok(-1),
                other => Err(Error::Parse(format!("invalid bit '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn to_bitstring(&self) -> String {
        self.0
            .iter()
            .map(|&s| if s > 0 { '0' } else { '1' })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut z = self.clone();
        z.flip(i);
        z
    }

    /// Global spin flip.
    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|&s| -s).collect())
    }

    /// Canonical bitstring order: compare as binary numbers with qubit 0 as
    /// the least significant bit. Equals basis-index order for `n <= 64`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
                // spin +1 is bit 0, so the larger spin is the smaller bit
                match b.cmp(a) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl TryFrom<Vec<i8>> for SpinAssignment {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpinAssignment> for Vec<i8> {
    fn from(z: SpinAssignment) -> Self {
        z.0
    }
}

impl fmt::Display for SpinAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// Per-order contributions to the energy of one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderEnergies {
    pub linear: f64,
    pub quadratic: f64,
    pub cubic: f64,
}

impl OrderEnergies {
    pub fn total(&self) -> f64 {
        self.linear + self.quadratic + self.cubic
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Incidence {
    linear: f64,
    pairs: Vec<(usize, f64)>,
    triples: Vec<(usize, usize, f64)>,
}

/// A cubic spin-glass objective
/// `E(z) = Σ h_i z_i + Σ_{i<j} J_ij z_i z_j + Σ_{i<j<k} K_ijk z_i z_j z_k`.
///
/// Terms are stored in canonical sparse form: strictly increasing indices,
/// sorted, no duplicates and no explicit zeros. The per-spin incidence lists
/// used by [`HuboProblem::delta_energy`] are built once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HuboProblem {
    n: usize,
    linear: Vec<(usize, f64)>,
    quadratic: Vec<([usize; 2], f64)>,
    cubic: Vec<([usize; 3], f64)>,
    incidence: Vec<Incidence>,
}

impl HuboProblem {
    /// Builds a problem from canonical term maps. Zeros are dropped; index
    /// ordering and range are validated.
    pub fn new(
        n: usize,
        linear: BTreeMap<usize, f64>,
        quadratic: BTreeMap<(usize, usize), f64>,
        cubic: BTreeMap<(usize, usize, usize), f64>,
    ) -> Result<Self> {
        let check = |idx: &[usize]| -> Result<()> {
            if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange { index: bad, n });
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInstance(format!(
                    "term indices {idx:?} are not strictly increasing"
                )));
            }
            Ok(())
        };
        let finite = |c: f64| -> Result<()> {
            if c.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInstance(format!(
                    "non-finite coefficient {c}"
                )))
            }
        };
        let mut lin = Vec::with_capacity(linear.len());
        for (i, c) in linear {
            check(&[i])?;
            finite(c)?;
            if c != 0.0 {
                lin.push((i, c));
            }
        }
        let mut quad = Vec::with_capacity(quadratic.len());
        for ((i, j), c) in quadratic {
            check(&[i, j])?;
            finite(c)?;
            if c != 0.0 {
                quad.push(([i, j], c));
            }
        }
        let mut cub = Vec::with_capacity(cubic.len());
        for ((i, j, k), c) in cubic {
            check(&[i, j, k])?;
            finite(c)?;
            if c != 0.0 {
                cub.push(([i, j, k], c));
            }
        }
        Ok(Self::from_canonical(n, lin, quad, cub))
    }

    fn from_canonical(
        n: usize,
        linear: Vec<(usize, f64)>,
        quadratic: Vec<([usize; 2], f64)>,
        cubic: Vec<([usize; 3], f64)>,
    ) -> Self {
        let mut incidence = vec![Incidence::default(); n];
        for &(i, c) in &linear {
            incidence[i].linear = c;
        }
        for &([i, j], c) in &quadratic {
            incidence[i].pairs.push((j, c));
            incidence[j].pairs.push((i, c));
        }
        for &([i, j, k], c) in &cubic {
            incidence[i].triples.push((j, k, c));
            incidence[j].triples.push((i, k, c));
            incidence[k].triples.push((i, j, c));
        }
        Self {
            n,
            linear,
            quadratic,
            cubic,
            incidence,
        }
    }

    /// A problem with no terms.
    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new(), Vec::new(), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn linear(&self) -> &[(usize, f64)] {
        &self.linear
    }

    pub fn quadratic(&self) -> &[([usize; 2], f64)] {
        &self.quadratic
    }

    pub fn cubic(&self) -> &[([usize; 3], f64)] {
        &self.cubic
    }

    /// `(linear, quadratic, cubic)` term counts.
    pub fn term_counts(&self) -> (usize, usize, usize) {
        (self.linear.len(), self.quadratic.len(), self.cubic.len())
    }

    /// Number of terms touching spin `i`.
    pub fn degree(&self, i: usize) -> usize {
        let inc = &self.incidence[i];
        usize::from(inc.linear != 0.0) + inc.pairs.len() + inc.triples.len()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = f64> + '_ {
        self.linear
            .iter()
            .map(|t| t.1)
            .chain(self.quadratic.iter().map(|t| t.1))
            .chain(self.cubic.iter().map(|t| t.1))
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coefficients().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `Σ |c|` over all terms; `-Σ|c|` lower-bounds every energy.
    pub fn abs_coefficient_sum(&self) -> f64 {
        self.coefficients().map(f64::abs).sum()
    }

    fn check_len(&self, z: &SpinAssignment) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: z.len(),
            });
        }
        Ok(())
    }

    /// Classical energy of `z`.
    pub fn energy(&self, z: &SpinAssignment) -> Result<f64> {
        self.check_len(z)?;
        Ok(self.energy_of(z.as_slice()))
    }

    /// Energy of a raw spin slice; the caller guarantees `s.len() == n`.
    pub fn energy_of(&self, s: &[i8]) -> f64 {
        self.order_energies_of(s).total()
    }

    pub fn order_energies(&self, z: &SpinAssignment) -> Result<OrderEnergies> {
        self.check_len(z)?;
        Ok(self.order_energies_of(z.as_slice()))
    }

    fn order_energies_of(&self, s: &[i8]) -> OrderEnergies {
        let sp = |i: usize| f64::from(s[i]);
        OrderEnergies {
            linear: self.linear.iter().map(|&(i, c)| c * sp(i)).sum(),
            quadratic: self
                .quadratic
                .iter()
                .map(|&([i, j], c)| c * sp(i) * sp(j))
                .sum(),
            cubic: self
                .cubic
                .iter()
                .map(|&([i, j, k], c)| c * sp(i) * sp(j) * sp(k))
                .sum(),
        }
    }

    /// Energy change from flipping spin `i`.
    pub fn delta_energy(&self, z: &SpinAssignment, i: usize) -> Result<f64> {
        self.check_len(z)?;
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        Ok(self.delta_of(z.as_slice(), i))
    }

    /// `ΔE = -2 z_i (h_i + Σ J_ij z_j + Σ K_ijk z_j z_k)`, unchecked.
    #[inline]
    pub fn delta_of(&self, s: &[i8], i: usize) -> f64 {
        let inc = &self.incidence[i];
        let mut field = inc.linear;
        for &(j, c) in &inc.pairs {
            field += c * f64::from(s[j]);
        }
        for &(j, k, c) in &inc.triples {
            field += c * f64::from(s[j] * s[k]);
        }
        -2.0 * f64::from(s[i]) * field
    }

    /// Substitutes fixed spins, returning the problem over the remaining
    /// free spins plus the constant energy of the fixed part.
    pub fn substitute(&self, fixed: &[(usize, i8)]) -> Result<Substitution> {
        let mut value = vec![0i8; self.n];
        for &(i, s) in fixed {
            if i >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
            if s != 1 && s != -1 {
                return Err(Error::InvalidInstance(format!("fixed spin value {s}")));
            }
            if value[i] != 0 {
                return Err(Error::InvalidInstance(format!("spin {i} fixed twice")));
            }
            value[i] = s;
        }
        let free: Vec<usize> = (0..self.n).filter(|&i| value[i] == 0).collect();
        let mut new_index = vec![usize::MAX; self.n];
        for (k, &i) in free.iter().enumerate() {
            new_index[i] = k;
        }

        let mut offset = 0.0;
        let mut lin: BTreeMap<usize, f64> = BTreeMap::new();
        let mut quad: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut cub: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
        let mut add = |idx: &[usize], c: f64| {
            let mut coef = c;
            let mut rest = Vec::with_capacity(3);
            for &i in idx {
                if value[i] == 0 {
                    rest.push(new_index[i]);
                } else {
                    coef *= f64::from(value[i]);
                }
            }
            match rest.as_slice() {
                [] => offset += coef,
                [a] => *lin.entry(*a).or_default() += coef,
                [a, b] => *quad.entry((*a, *b)).or_default() += coef,
                [a, b, c] => *cub.entry((*a, *b, *c)).or_default() += coef,
                _ => unreachable!(),
            }
        };
        for &(i, c) in &self.linear {
            add(&[i], c);
        }
        for &(ij, c) in &self.quadratic {
            add(&ij, c);
        }
        for &(ijk, c) in &self.cubic {
            add(&ijk, c);
        }
        let problem = HuboProblem::new(free.len(), lin, quad, cub)?;
        Ok(Substitution {
            problem,
            free,
            fixed: value,
            offset,
        })
    }
}

/// Result of [`HuboProblem::substitute`].
#[derive(Debug, Clone)]
pub struct Substitution {
    /// Problem over the free spins, re-indexed `0..free.len()`.
    pub problem: HuboProblem,
    /// Original index of each free spin.
    pub free: Vec<usize>,
    fixed: Vec<i8>,
    /// Energy contribution of terms made constant by the substitution.
    pub offset: f64,
}

impl Substitution {
    /// Rebuilds a full assignment from values of the free spins.
    pub fn lift(&self, z_free: &[i8]) -> SpinAssignment {
        let mut full = self.fixed.clone();
        for (k, &i) in self.free.iter().enumerate() {
            full[i] = z_free[k];
        }
        SpinAssignment(full)
    }

    /// Restricts a full-length vector to the free indices.
    pub fn restrict<T: Copy>(&self, full: &[T]) -> Vec<T> {
        self.free.iter().map(|&i| full[i]).collect()
    }
}

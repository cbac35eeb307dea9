use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hubo::{HuboProblem, SpinAssignment};

pub const EXHAUSTION_CAP: usize = 24;

/// Low bits enumerated by one Gray-code block; higher bits index blocks.
const BLOCK_BITS: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    /// Global minimiser; among ties, the one with the lowest basis index.
    pub assignment: SpinAssignment,
    pub energy: f64,
    /// Every energy in ascending order, when requested.
    pub spectrum: Option<Vec<f64>>,
}

pub fn brute_force(problem: &HuboProblem, spectrum: bool) -> Result<BruteForceResult> {
    brute_force_with_cap(problem, spectrum, EXHAUSTION_CAP)
}

struct BlockBest {
    index: u64,
    energy: f64,
}

/// Exhaustive enumeration with incremental `ΔE` along a Gray code.
///
/// Candidates within a tolerance of the running best are re-evaluated
/// directly, so accumulated rounding never decides the winner.
pub fn brute_force_with_cap(
    problem: &HuboProblem,
    spectrum: bool,
    cap: usize,
) -> Result<BruteForceResult> {
    let n = problem.n();
    if n > cap || n >= 64 {
        return Err(Error::ExhaustionCap { n, cap });
    }
    let scale = 1.0 + problem.abs_coefficient_sum();
    let near = 1e-9 * scale;
    let tie = 1e-12 * scale;
    let low = n.min(BLOCK_BITS);
    let blocks = 1u64 << (n - low);
    let per_block = 1usize << low;

    let mut energies = if spectrum {
        vec![0.0; 1usize << n]
    } else {
        Vec::new()
    };

    let better = |a: &BlockBest, b: &BlockBest| {
        a.energy < b.energy - tie || (a.energy <= b.energy + tie && a.index < b.index)
    };

    let scan = |block: u64, out: &mut [f64]| -> BlockBest {
        let base = block << low;
        let mut s = SpinAssignment::from_index(base, n).as_slice().to_vec();
        let mut e = problem.energy_of(&s);
        let mut best = BlockBest {
            index: base,
            energy: e,
        };
        if !out.is_empty() {
            out[0] = e;
        }
        for k in 1..per_block as u64 {
            let bit = k.trailing_zeros() as usize;
            e += problem.delta_of(&s, bit);
            s[bit] = -s[bit];
            let gray = k ^ (k >> 1);
            if k % 4096 == 0 {
                e = problem.energy_of(&s);
            }
            if !out.is_empty() {
                out[gray as usize] = e;
            }
            if e <= best.energy + near {
                let cand = BlockBest {
                    index: base | gray,
                    energy: problem.energy_of(&s),
                };
                if better(&cand, &best) {
                    best = cand;
                }
            }
        }
        best
    };

    let bests: Vec<BlockBest> = if spectrum {
        energies
            .par_chunks_mut(per_block)
            .enumerate()
            .map(|(b, out)| scan(b as u64, out))
            .collect()
    } else {
        (0..blocks)
            .into_par_iter()
            .map(|b| scan(b, &mut []))
            .collect()
    };
    let best = bests
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least one block");

    let spectrum = spectrum.then(|| {
        energies.sort_by(f64::total_cmp);
        energies
    });
    Ok(BruteForceResult {
        assignment: SpinAssignment::from_index(best.index, n),
        energy: best.energy,
        spectrum,
    })
}

//! Branch-and-bound drivers over bias fields.
//!
//! [`approximate_bbb`] grows a single path of a binary tree, imposing a
//! strong bias `±W` on the least decided spin at each layer and keeping the
//! better sibling. [`exact_bbb`] is a best-first search with hard spin
//! fixing and pruning by an admissible relaxation bound.

mod approx;
mod exact;
mod relax;

pub use crate::ledger::{ledger_merge, planned_bbb_shots, planned_sa_flips, FunctionEvalCounter};
pub use approx::{approximate_bbb, BbbConfig, BbbResult, BranchNode, LayerRecord};
pub use exact::{exact_bbb, ExactConfig, ExactResult, PRUNE_TOLERANCE};
pub use relax::{
    BruteForceOracle, CheckedOracle, Relaxation, RelaxationOracle, TrivialBoundOracle,
};

/// Index of the smallest `|v_i|` outside `excluded`, lowest index on ties.
pub(crate) fn argmin_abs(values: &[f64], excluded: impl Fn(usize) -> bool) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if excluded(i) {
            continue;
        }
        let a = v.abs();
        if best.is_none_or(|(_, b)| a < b) {
            best = Some((i, a));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::argmin_abs;

    #[test]
    fn argmin_ties_and_exclusion() {
        assert_eq!(argmin_abs(&[0.5, -0.2, 0.2], |_| false), Some(1));
        assert_eq!(argmin_abs(&[0.5, -0.2, 0.2], |i| i == 1), Some(2));
        assert_eq!(argmin_abs(&[0.5], |_| true), None);
    }
}

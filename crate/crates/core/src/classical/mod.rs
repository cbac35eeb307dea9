//! Classical baselines: simulated annealing, greedy descent and exhaustive
//! search.

mod brute;
mod greedy;
mod sa;

pub use brute::{brute_force, brute_force_with_cap, BruteForceResult, EXHAUSTION_CAP};
pub use greedy::{greedy_descent, greedy_local_search, greedy_post_process, GreedyConfig};
pub use sa::{
    anneal_from, default_temperatures, simulated_annealing, ReadRecord, SaConfig, SaResult,
};

use rand::seq::SliceRandom;
use rand::Rng;

/// Reshuffles `order` in place; both SA and greedy draw proposals this way so
/// that equal order streams give equal proposal sequences.
pub(crate) fn shuffle_order<R: Rng>(order: &mut [usize], rng: &mut R) {
    order.shuffle(rng);
}

#![allow(dead_code)]

use bbdcqo::hubo::HuboProblem;
use bbdcqo::pauli::PauliSum;
use bbdcqo_oracle::{pauli_sum, Dense, Term};

/// Flattens a problem into independent oracle terms.
pub fn terms(p: &HuboProblem) -> Vec<Term> {
    let mut out: Vec<Term> = p.linear().iter().map(|&(i, c)| (vec![i], c)).collect();
    out.extend(p.quadratic().iter().map(|(ij, c)| (ij.to_vec(), *c)));
    out.extend(p.cubic().iter().map(|(ijk, c)| (ijk.to_vec(), *c)));
    out
}

/// Dense matrix of a Pauli sum, built letter by letter from its text form.
pub fn dense(sum: &PauliSum) -> Dense {
    let words: Vec<_> = sum.iter().map(|(p, c)| (p.to_string(), *c)).collect();
    pauli_sum(sum.n(), &words)
}

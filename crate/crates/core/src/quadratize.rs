//! HUBO to QUBO reduction by auxiliary product variables.
//!
//! Spins become binaries through `s = 1 - 2x`. Every cubic monomial
//! `x_i x_j x_k` then has one pair replaced by an auxiliary `y = x_i x_j`,
//! enforced by the penalty `M (x_i x_j - 2 x_i y - 2 x_j y + 3 y)`, which is
//! zero exactly when the product constraint holds and at least `M`
//! otherwise. The expansion constant is kept as `offset`, so the QUBO
//! energy of `(x, y = x_i x_j)` equals the HUBO energy of `s = 1 - 2x`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hubo::HuboProblem;

/// Exhaustive verification limit on original variables.
pub const VERIFY_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboProblem {
    /// Total variables, originals first, then auxiliaries.
    pub m: usize,
    pub offset: f64,
    pub linear: Vec<(usize, f64)>,
    pub quadratic: Vec<(usize, usize, f64)>,
}

impl QuboProblem {
    /// Energy of a binary vector of length `m`, offset included.
    pub fn energy(&self, x: &[u8]) -> Result<f64> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: x.len(),
            });
        }
        let lin: f64 = self.linear.iter().map(|&(i, c)| c * f64::from(x[i])).sum();
        let quad: f64 = self
            .quadratic
            .iter()
            .map(|&(i, j, c)| c * f64::from(x[i] * x[j]))
            .sum();
        Ok(self.offset + lin + quad)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionMap {
    /// Original variable count.
    pub n: usize,
    pub penalty: f64,
    /// `(auxiliary index, [i, j])` with `y = x_i x_j`.
    pub aux: Vec<(usize, [usize; 2])>,
}

/// Polynomial in binaries keyed by sorted variable sets.
type Poly = BTreeMap<Vec<usize>, f64>;

/// Expands the spin polynomial in `x` with `s = 1 - 2x`. The empty key holds
/// the constant.
pub fn binary_expansion(problem: &HuboProblem) -> Poly {
    let mut poly = Poly::new();
    let mut add = |vars: &[usize], c: f64| {
        for mask in 0u32..(1 << vars.len()) {
            let subset: Vec<usize> = vars
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let coef = c * (-2f64).powi(subset.len() as i32);
            *poly.entry(subset).or_default() += coef;
        }
    };
    for &(i, c) in problem.linear() {
        add(&[i], c);
    }
    for (ij, c) in problem.quadratic() {
        add(ij, *c);
    }
    for (ijk, c) in problem.cubic() {
        add(ijk, *c);
    }
    poly.retain(|k, c| k.is_empty() || *c != 0.0);
    poly
}

/// Largest nonconstant coefficient magnitude of the binary expansion.
pub fn binary_max_abs_coefficient(problem: &HuboProblem) -> f64 {
    binary_expansion(problem)
        .iter()
        .filter(|(k, _)| !k.is_empty())
        .map(|(_, c)| c.abs())
        .fold(0.0, f64::max)
}

/// Most frequent pair among cubic monomials, smallest pair on ties.
fn most_frequent_pair(cubic: &BTreeMap<[usize; 3], f64>) -> Option<[usize; 2]> {
    let mut counts: BTreeMap<[usize; 2], usize> = BTreeMap::new();
    for &[i, j, k] in cubic.keys() {
        for p in [[i, j], [i, k], [j, k]] {
            *counts.entry(p).or_default() += 1;
        }
    }
    let mut best: Option<([usize; 2], usize)> = None;
    for (p, c) in counts {
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((p, c));
        }
    }
    best.map(|(p, _)| p)
}

/// Standard product reduction `y = x_i x_j` with penalty
/// `M (x_i x_j − 2 x_i y − 2 x_j y + 3 y)`.
///
/// Pairs are chosen most-frequent first. An auxiliary absorbs the cubic
/// monomials on its pair, smallest first, while the summed magnitude of
/// their binary coefficients stays below `M`; the rest wait for another
/// auxiliary. Breaking `y = x_i x_j` then costs at least `M` and gains less,
/// so the reduction is exact whenever `M` exceeds every single binary cubic
/// coefficient.
pub fn hubo_to_qubo(problem: &HuboProblem, penalty: f64) -> Result<(QuboProblem, ReductionMap)> {
    if !(penalty > 0.0 && penalty.is_finite()) {
        return Err(Error::Config(format!(
            "penalty must be positive, got {penalty}"
        )));
    }
    let n = problem.n();
    let poly = binary_expansion(problem);
    let mut offset = 0.0;
    let mut lin: BTreeMap<usize, f64> = BTreeMap::new();
    let mut quad: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut cubic: BTreeMap<[usize; 3], f64> = BTreeMap::new();
    for (k, c) in poly {
        match k.as_slice() {
            [] => offset += c,
            [i] => *lin.entry(*i).or_default() += c,
            [i, j] => *quad.entry((*i, *j)).or_default() += c,
            [i, j, l] => {
                cubic.insert([*i, *j, *l], c);
            }
            _ => unreachable!("spin terms have degree at most three"),
        }
    }

    let mut aux = Vec::new();
    let mut next = n;
    while let Some([a, b]) = most_frequent_pair(&cubic) {
        let y = next;
        next += 1;
        aux.push((y, [a, b]));
        let mut covered: Vec<([usize; 3], f64)> = cubic
            .iter()
            .filter(|(t, _)| t.contains(&a) && t.contains(&b))
            .map(|(t, &c)| (*t, c))
            .collect();
        covered.sort_by(|x, y| x.1.abs().total_cmp(&y.1.abs()).then(x.0.cmp(&y.0)));
        let mut load = 0.0;
        for (k, (t, c)) in covered.into_iter().enumerate() {
            if k > 0 && load + c.abs() >= penalty {
                break;
            }
            load += c.abs();
            cubic.remove(&t);
            let other = *t
                .iter()
                .find(|&&v| v != a && v != b)
                .expect("three distinct");
            *quad.entry((other, y)).or_default() += c;
        }
        *quad.entry((a, b)).or_default() += penalty;
        *quad.entry((a, y)).or_default() -= 2.0 * penalty;
        *quad.entry((b, y)).or_default() -= 2.0 * penalty;
        *lin.entry(y).or_default() += 3.0 * penalty;
    }

    let qubo = QuboProblem {
        m: next,
        offset,
        linear: lin.into_iter().filter(|&(_, c)| c != 0.0).collect(),
        quadratic: quad
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|((i, j), c)| (i, j, c))
            .collect(),
    };
    Ok((qubo, ReductionMap { n, penalty, aux }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub hubo_min: f64,
    pub qubo_min: f64,
    /// Offset-adjusted QUBO minimum equals the HUBO minimum.
    pub min_matches: bool,
    /// Every QUBO minimiser satisfies every product constraint.
    pub constraints_hold: bool,
    /// Every QUBO minimiser projects onto a HUBO minimiser.
    pub projection_optimal: bool,
    /// Smallest penalty found by bisection for which all checks pass.
    pub minimal_penalty: Option<f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.min_matches && self.constraints_hold && self.projection_optimal
    }
}

struct Checks {
    hubo_min: f64,
    qubo_min: f64,
    min_matches: bool,
    constraints_hold: bool,
    projection_optimal: bool,
}

/// Per-`x` view of the QUBO: constant part and the linear coefficient of
/// each auxiliary.
struct SplitQubo {
    offset: f64,
    x_lin: Vec<(usize, f64)>,
    x_quad: Vec<(usize, usize, f64)>,
    y_lin: Vec<f64>,
    y_x: Vec<Vec<(usize, f64)>>,
    pairs: Vec<[usize; 2]>,
}

impl SplitQubo {
    fn new(qubo: &QuboProblem, map: &ReductionMap) -> Result<Self> {
        let n = map.n;
        if qubo.m != n + map.aux.len() {
            return Err(Error::DimensionMismatch {
                expected: n + map.aux.len(),
                found: qubo.m,
            });
        }
        let na = map.aux.len();
        let mut pairs = vec![[0, 0]; na];
        for &(y, p) in &map.aux {
            if y < n || y >= qubo.m {
                return Err(Error::IndexOutOfRange {
                    index: y,
                    n: qubo.m,
                });
            }
            pairs[y - n] = p;
        }
        let mut split = SplitQubo {
            offset: qubo.offset,
            x_lin: Vec::new(),
            x_quad: Vec::new(),
            y_lin: vec![0.0; na],
            y_x: vec![Vec::new(); na],
            pairs,
        };
        for &(i, c) in &qubo.linear {
            if i < n {
                split.x_lin.push((i, c));
            } else {
                split.y_lin[i - n] += c;
            }
        }
        for &(i, j, c) in &qubo.quadratic {
            match (i < n, j < n) {
                (true, true) => split.x_quad.push((i, j, c)),
                (true, false) => split.y_x[j - n].push((i, c)),
                (false, true) => split.y_x[i - n].push((j, c)),
                (false, false) => return Err(Error::InvalidInstance(
                    "auxiliary-auxiliary coupling; exhaustive check needs separable auxiliaries"
                        .into(),
                )),
            }
        }
        Ok(split)
    }

    fn bit(x: u64, i: usize) -> f64 {
        (x >> i & 1) as f64
    }

    fn base(&self, x: u64) -> f64 {
        let lin: f64 = self.x_lin.iter().map(|&(i, c)| c * Self::bit(x, i)).sum();
        let quad: f64 = self
            .x_quad
            .iter()
            .map(|&(i, j, c)| c * Self::bit(x, i) * Self::bit(x, j))
            .sum();
        self.offset + lin + quad
    }

    fn gain(&self, x: u64, a: usize) -> f64 {
        self.y_lin[a]
            + self.y_x[a]
                .iter()
                .map(|&(i, c)| c * Self::bit(x, i))
                .sum::<f64>()
    }
}

fn check(problem: &HuboProblem, qubo: &QuboProblem, map: &ReductionMap) -> Result<Checks> {
    let n = problem.n();
    if n > VERIFY_CAP {
        return Err(Error::ExhaustionCap { n, cap: VERIFY_CAP });
    }
    if map.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: map.n,
        });
    }
    let split = SplitQubo::new(qubo, map)?;
    let tol = 1e-9 * (1.0 + problem.abs_coefficient_sum() + map.penalty * map.aux.len() as f64);
    let na = map.aux.len();

    // (hubo energy, min over y, y minimiser sets agree with the products)
    let rows: Vec<(f64, f64, bool)> = (0..1u64 << n)
        .into_par_iter()
        .map(|x| {
            let s: Vec<i8> = (0..n)
                .map(|i| if x >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            let h = problem.energy_of(&s);
            let mut q = split.base(x);
            let mut consistent = true;
            for a in 0..na {
                let g = split.gain(x, a);
                let [i, j] = split.pairs[a];
                let product = x >> i & x >> j & 1 == 1;
                if g < -tol {
                    q += g;
                    consistent &= product;
                } else if g > tol {
                    consistent &= !product;
                } else {
                    q += g.min(0.0);
                    consistent = false;
                }
            }
            (h, q, consistent)
        })
        .collect();

    let hubo_min = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let qubo_min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let minimisers = rows.iter().filter(|r| r.1 <= qubo_min + tol);
    let (mut constraints_hold, mut projection_optimal) = (true, true);
    for r in minimisers {
        constraints_hold &= r.2;
        projection_optimal &= r.0 <= hubo_min + tol;
    }
    Ok(Checks {
        hubo_min,
        qubo_min,
        min_matches: (qubo_min - hubo_min).abs() <= tol,
        constraints_hold,
        projection_optimal,
    })
}

fn passes_at(problem: &HuboProblem, penalty: f64) -> Result<bool> {
    let (q, m) = hubo_to_qubo(problem, penalty)?;
    let c = check(problem, &q, &m)?;
    Ok(c.min_matches && c.constraints_hold && c.projection_optimal)
}

/// Smallest passing penalty, to relative precision `1e-6`, searched below
/// `upper`. `None` if `upper` itself fails.
pub fn minimal_penalty(problem: &HuboProblem, upper: f64) -> Result<Option<f64>> {
    if !passes_at(problem, upper)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, upper);
    while hi - lo > 1e-6 * upper {
        let mid = 0.5 * (lo + hi);
        if passes_at(problem, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Exhaustive equivalence check of a reduction over all `2^n` originals,
/// minimising the separable auxiliaries in closed form.
pub fn verify_reduction(
    problem: &HuboProblem,
    qubo: &QuboProblem,
    map: &ReductionMap,
) -> Result<VerificationReport> {
    let c = check(problem, qubo, map)?;
    let minimal = if map.aux.is_empty() {
        None
    } else {
        minimal_penalty(problem, map.penalty)?
    };
    Ok(VerificationReport {
        hubo_min: c.hubo_min,
        qubo_min: c.qubo_min,
        min_matches: c.min_matches,
        constraints_hold: c.constraints_hold,
        projection_optimal: c.projection_optimal,
        minimal_penalty: minimal,
    })
}

#[derive(Serialize)]
struct QuboDocument {
    n: usize,
    offset: f64,
    linear: Vec<(usize, f64)>,
    quadratic: Vec<(usize, usize, f64)>,
    reduction: ReductionDocument,
}

#[derive(Serialize)]
struct ReductionDocument {
    penalty: f64,
    original_n: usize,
    aux: Vec<(usize, usize, usize)>,
}

/// JSON in the instance layout (no `cubic`), with the reduction map under
/// `reduction`.
pub fn export_json(qubo: &QuboProblem, map: &ReductionMap) -> String {
    let doc = QuboDocument {
        n: qubo.m,
        offset: qubo.offset,
        linear: qubo.linear.clone(),
        quadratic: qubo.quadratic.clone(),
        reduction: ReductionDocument {
            penalty: map.penalty,
            original_n: map.n,
            aux: map.aux.iter().map(|&(y, [i, j])| (y, i, j)).collect(),
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serialises");
    s.push('\n');
    s
}

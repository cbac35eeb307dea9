//! Reference oracles for the bbdcqo test suites.
//!
//! Everything here works on plain data (letter strings, index lists, dense
//! matrices) and shares no code path with the library it checks. Dense
//! operators use the same basis convention as the simulator: qubit `q` is
//! bit `q` of the basis index, `|0>` has spin `+1`.

use num_complex::Complex64;

pub type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Row-major dense complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<C>,
}

impl Dense {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C::default(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = c(v, 0.0);
        }
        m
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let n = self.dim;
        let mut r = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C::default() {
                    continue;
                }
                for j in 0..n {
                    r.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        r
    }

    pub fn add(&self, o: &Dense) -> Dense {
        Dense {
            dim: self.dim,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Dense) -> Dense {
        Dense {
            dim: self.dim,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: C) -> Dense {
        Dense {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn commutator(&self, o: &Dense) -> Dense {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn dagger(&self) -> Dense {
        let n = self.dim;
        let mut r = Dense::zeros(n);
        for i in 0..n {
            for j in 0..n {
                r[(j, i)] = self[(i, j)].conj();
            }
        }
        r
    }

    pub fn trace(&self) -> C {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Tr[A† B] / dim`.
    pub fn hs_inner(&self, o: &Dense) -> C {
        let mut s = C::default();
        for (a, b) in self.data.iter().zip(&o.data) {
            s += a.conj() * b;
        }
        s / self.dim as f64
    }

    /// `self ⊗ o` (self acts on the more significant bits).
    pub fn kron(&self, o: &Dense) -> Dense {
        let (a, b) = (self.dim, o.dim);
        let mut r = Dense::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                for k in 0..b {
                    for l in 0..b {
                        r[(i * b + k, j * b + l)] = self[(i, j)] * o[(k, l)];
                    }
                }
            }
        }
        r
    }

    pub fn max_abs_diff(&self, o: &Dense) -> f64 {
        self.data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    fn one_norm(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Matrix exponential by scaling and squaring with a Taylor series.
    pub fn expm(&self) -> Dense {
        let norm = self.one_norm();
        let mut squarings = 0u32;
        let mut scaled = self.clone();
        if norm > 0.5 {
            squarings = (norm / 0.5).log2().ceil() as u32;
            scaled = self.scale(c(0.5f64.powi(squarings as i32), 0.0));
        }
        let mut result = Dense::identity(self.dim);
        let mut term = Dense::identity(self.dim);
        for k in 1..=30 {
            term = term.mul(&scaled).scale(c(1.0 / k as f64, 0.0));
            result = result.add(&term);
        }
        for _ in 0..squarings {
            result = result.mul(&result);
        }
        result
    }
}

impl std::ops::Index<(usize, usize)> for Dense {
    type Output = C;

    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Dense {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.data[i * self.dim + j]
    }
}

/// 2×2 matrix of a single Pauli letter.
pub fn letter(ch: char) -> Dense {
    let z = C::default();
    let o = c(1.0, 0.0);
    let data = match ch {
        'I' => vec![o, z, z, o],
        'X' => vec![z, o, o, z],
        'Y' => vec![z, c(0.0, -1.0), c(0.0, 1.0), z],
        'Z' => vec![o, z, z, -o],
        other => panic!("not a Pauli letter: {other}"),
    };
    Dense { dim: 2, data }
}

/// Dense matrix of a Pauli word written qubit 0 first.
pub fn pauli_string(word: &str) -> Dense {
    // the last letter is the most significant qubit, so it goes leftmost
    word.chars()
        .rev()
        .map(letter)
        .reduce(|acc, m| acc.kron(&m))
        .unwrap_or_else(|| Dense::identity(1))
}

/// Dense matrix of `Σ c_k P_k`.
pub fn pauli_sum(n: usize, terms: &[(String, C)]) -> Dense {
    let mut m = Dense::zeros(1 << n);
    for (word, coef) in terms {
        assert_eq!(word.len(), n);
        m = m.add(&pauli_string(word).scale(*coef));
    }
    m
}

/// A spin-glass term: product of `z` over `indices`, times `coef`.
pub type Term = (Vec<usize>, f64);

/// Energy of basis index `idx` by direct term-by-term summation.
pub fn term_energy(terms: &[Term], idx: u64) -> f64 {
    terms
        .iter()
        .map(|(ix, c)| {
            ix.iter()
                .map(|&q| if (idx >> q) & 1 == 1 { -1.0 } else { 1.0 })
                .product::<f64>()
                * c
        })
        .sum()
}

/// Energy of an explicit spin vector by direct summation.
pub fn spin_energy(terms: &[Term], spins: &[i8]) -> f64 {
    terms
        .iter()
        .map(|(ix, c)| ix.iter().map(|&q| f64::from(spins[q])).product::<f64>() * c)
        .sum()
}

/// Diagonal of the cost Hamiltonian `Σ c Π Z_q`.
pub fn cost_diagonal(n: usize, terms: &[Term]) -> Vec<f64> {
    (0..1u64 << n).map(|i| term_energy(terms, i)).collect()
}

/// Naive `2^n` scan: `(lowest-energy index, energy)`; ties go to the
/// lowest index.
pub fn naive_minimum(n: usize, terms: &[Term]) -> (u64, f64) {
    let mut best = (0u64, f64::INFINITY);
    for i in 0..1u64 << n {
        let e = term_energy(terms, i);
        if e < best.1 {
            best = (i, e);
        }
    }
    best
}

/// All `2^n` energies, ascending.
pub fn naive_spectrum(n: usize, terms: &[Term]) -> Vec<f64> {
    let mut v = cost_diagonal(n, terms);
    v.sort_by(f64::total_cmp);
    v
}

/// Minimum of a binary polynomial `Σ c Π x_q` over `{0,1}^m`, by full scan.
/// Returns the minimum and every minimiser within `tol`.
pub fn binary_minimisers(m: usize, terms: &[Term], tol: f64) -> (f64, Vec<u64>) {
    let value = |x: u64| -> f64 {
        terms
            .iter()
            .filter(|(ix, _)| ix.iter().all(|&q| (x >> q) & 1 == 1))
            .map(|(_, c)| c)
            .sum()
    };
    let vals: Vec<f64> = (0..1u64 << m).map(value).collect();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let arg = (0..1u64 << m)
        .filter(|&x| vals[x as usize] <= min + tol)
        .collect();
    (min, arg)
}

/// Golden-section search for the minimiser of a unimodal `f` on `[a, b]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Numerical minimiser of a smooth convex `f`: coarse grid, golden-section
/// bracketing, then bisection on the central-difference slope, which stays
/// accurate where `f` itself is too flat to resolve.
pub fn minimise_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let grid = 400;
    let step = (hi - lo) / grid as f64;
    let (mut best_x, mut best_f) = (lo, f(lo));
    for k in 1..=grid {
        let x = lo + step * k as f64;
        let v = f(x);
        if v < best_f {
            best_x = x;
            best_f = v;
        }
    }
    let centre = golden_section(&f, best_x - step, best_x + step, step * 1e-4);
    let h = step.max(1e-3);
    let slope = |x: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let (mut a, mut b) = (centre - step, centre + step);
    if slope(a) > 0.0 || slope(b) < 0.0 {
        return centre;
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if slope(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

/// `Σ_j hx_j X_j + hb_j Z_j` assembled from single-letter words.
pub fn driver_dense(hx: &[f64], hb: &[f64]) -> Dense {
    let n = hx.len();
    assert_eq!(hb.len(), n);
    let mut m = Dense::zeros(1 << n);
    for j in 0..n {
        let word = |ch: char| {
            (0..n)
                .map(|q| if q == j { ch } else { 'I' })
                .collect::<String>()
        };
        m = m.add(&pauli_string(&word('X')).scale(c(hx[j], 0.0)));
        m = m.add(&pauli_string(&word('Z')).scale(c(hb[j], 0.0)));
    }
    m
}

/// Minimiser of `S(α) = Tr[G²]/2ⁿ` with `G = ∂H + α[H, [H, ∂H]]`,
/// `H = (1−λ)H_i + λH_f`, found numerically over a widening bracket.
pub fn alpha_by_action(h_i: &Dense, h_f: &Dense, lam: f64, tol: f64) -> f64 {
    let h = h_i.scale(c(1.0 - lam, 0.0)).add(&h_f.scale(c(lam, 0.0)));
    let dh = h_f.sub(h_i);
    let o2 = h.commutator(&h.commutator(&dh));
    let action = |a: f64| {
        let g = dh.add(&o2.scale(c(a, 0.0)));
        g.hs_inner(&g).re
    };
    let mut r = 1.0;
    loop {
        let x = minimise_1d(action, -r, r, tol);
        if x.abs() < 0.9 * r || r > 1e12 {
            return x;
        }
        r *= 4.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_square_to_identity() {
        for ch in ['I', 'X', 'Y', 'Z'] {
            let m = letter(ch);
            assert!(m.mul(&m).max_abs_diff(&Dense::identity(2)) < 1e-15);
        }
        // ZX = iY
        let zx = letter('Z').mul(&letter('X'));
        assert!(zx.max_abs_diff(&letter('Y').scale(c(0.0, 1.0))) < 1e-15);
    }

    #[test]
    fn qubit_zero_is_least_significant() {
        // X on qubit 0 maps |00> (index 0) to |01> (index 1)
        let m = pauli_string("XI");
        assert_eq!(m[(1, 0)], c(1.0, 0.0));
        let d = cost_diagonal(2, &[(vec![1], 1.0)]);
        assert_eq!(d, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn expm_of_pauli_rotation() {
        let theta: f64 = 0.7;
        let gen = pauli_string("Y").scale(c(0.0, -theta / 2.0));
        let u = gen.expm();
        let expect = Dense::identity(2)
            .scale(c((theta / 2.0).cos(), 0.0))
            .sub(&letter('Y').scale(c(0.0, (theta / 2.0).sin())));
        assert!(u.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn minimiser_of_quadratic() {
        let x = minimise_1d(
            |a| 3.0 * (a - 0.123_456_789).powi(2) + 5.0,
            -10.0,
            10.0,
            1e-12,
        );
        assert!((x - 0.123_456_789).abs() < 1e-10);
    }
}

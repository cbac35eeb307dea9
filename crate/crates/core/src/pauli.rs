//! Exact algebra over `n`-qubit Pauli strings.
//!
//! Strings are stored in symplectic form: one `x` bit and one `z` bit per
//! qubit, packed 64 qubits to a word (`I=(0,0)`, `X=(1,0)`, `Y=(1,1)`,
//! `Z=(0,1)`). Letter `q` of a string acts on qubit `q`, and the text form
//! lists qubit 0 first: `"XZI"` is `X` on qubit 0 and `Z` on qubit 1.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients with modulus at or below this are dropped after merging.
pub const PRUNE_TOLERANCE: f64 = 1e-14;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A power of `i`: one of `1, i, -1, -i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// An `n`-qubit Pauli word, without phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
        }
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut s = Self::identity(letters.len());
        for (q, &p) in letters.iter().enumerate() {
            s.set(q, p);
        }
        s
    }

    /// Identity everywhere except the listed `(qubit, letter)` sites.
    pub fn from_sparse(n: usize, sites: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(q, p) in sites {
            s.set(q, p);
        }
        s
    }

    /// `Z` on each listed qubit.
    pub fn z_product(n: usize, qubits: &[usize]) -> Self {
        let mut s = Self::identity(n);
        for &q in qubits {
            s.set(q, Pauli::Z);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / 64, q % 64);
        let (xb, zb) = p.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | (u64::from(xb) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | (u64::from(zb) << b);
    }

    pub fn letter(&self, q: usize) -> Pauli {
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(|q| self.letter(q))
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// `(x_mask, z_mask)` for registers of at most 64 qubits.
    pub fn masks(&self) -> Option<(u64, u64)> {
        (self.n <= 64).then(|| {
            (
                self.x.first().copied().unwrap_or(0),
                self.z.first().copied().unwrap_or(0),
            )
        })
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// True iff the two strings commute (even symplectic product).
    pub fn commutes_with(&self, other: &Self) -> bool {
        let anti: u32 = (0..self.x.len())
            .map(|w| ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones())
            .sum();
        anti.is_multiple_of(2)
    }

    /// Letterwise product `self · other = phase · product`.
    pub fn multiply(&self, other: &Self) -> Result<(Phase, PauliString)> {
        self.check_len(other)?;
        Ok(self.multiply_unchecked(other))
    }

    fn multiply_unchecked(&self, other: &Self) -> (Phase, PauliString) {
        let mut exp: i64 = 0;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], other.x[w], other.z[w]);
            let (px, py, pz) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (qx, qy, qz) = (x2 & !z2, x2 & z2, !x2 & z2);
            // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i
            let plus = (px & qy) | (py & qz) | (pz & qx);
            let minus = (px & qz) | (py & qx) | (pz & qy);
            exp += i64::from(plus.count_ones()) - i64::from(minus.count_ones());
            x.push(x1 ^ x2);
            z.push(z1 ^ z2);
        }
        (Phase::from_exponent(exp), PauliString { n: self.n, x, z })
    }
}

impl Ord for PauliString {
    /// Lexicographic by letter, qubit 0 first, with `I < X < Y < Z`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for w in 0..self.x.len() {
                let diff = (self.x[w] ^ other.x[w]) | (self.z[w] ^ other.z[w]);
                if diff != 0 {
                    let q = w * 64 + diff.trailing_zeros() as usize;
                    return self.letter(q).cmp(&other.letter(q));
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters().map(Pauli::as_char).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!("invalid Pauli letter '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_letters(&letters))
    }
}

/// A complex-weighted sum of Pauli strings on a fixed register.
#[derive(Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut s = Self::zero(n);
        for (p, c) in terms {
            s.add_term(p, c)?;
        }
        s.prune();
        Ok(s)
    }

    /// Single string with a real coefficient.
    pub fn single(p: PauliString, c: f64) -> Self {
        let mut s = Self::zero(p.len());
        s.terms.insert(p, Complex64::new(c, 0.0));
        s.prune();
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical string order.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }

    /// Adds `c · p` without pruning.
    pub fn add_term(&mut self, p: PauliString, c: Complex64) -> Result<()> {
        self.check(p.len())?;
        *self.terms.entry(p).or_default() += c;
        Ok(())
    }

    /// Drops coefficients with modulus at or below [`PRUNE_TOLERANCE`].
    pub fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > PRUNE_TOLERANCE);
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut s = Self {
            n: self.n,
            terms: self.terms.iter().map(|(p, v)| (p.clone(), v * c)).collect(),
        };
        s.prune();
        s
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: f64, other: &PauliSum, b: f64) -> Result<Self> {
        self.check(other.n)?;
        let mut s = self.scaled(Complex64::new(a, 0.0));
        for (p, c) in &other.terms {
            *s.terms.entry(p.clone()).or_default() += c * b;
        }
        s.prune();
        Ok(s)
    }

    /// Operator product `self · other`.
    pub fn product(&self, other: &PauliSum) -> Result<Self> {
        self.check(other.n)?;
        let mut s = Self::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (phase, r) = p.multiply_unchecked(q);
                *s.terms.entry(r).or_default() += a * b * phase.to_complex();
            }
        }
        s.prune();
        Ok(s)
    }

    /// Commutator `[self, other] = self·other - other·self`.
    ///
    /// Commuting string pairs cancel exactly; an anticommuting pair
    /// contributes `2ab·(p·q)`.
    pub fn commutator(&self, other: &PauliSum) -> Result<Self> {
        self.check(other.n)?;
        let mut s = Self::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if p.commutes_with(q) {
                    continue;
                }
                let (phase, r) = p.multiply_unchecked(q);
                *s.terms.entry(r).or_default() += 2.0 * a * b * phase.to_complex();
            }
        }
        s.prune();
        Ok(s)
    }

    /// Normalised Hilbert–Schmidt inner product `Tr[A†B] / 2^n`.
    pub fn hs_inner(&self, other: &PauliSum) -> Result<Complex64> {
        self.check(other.n)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(p, a)| other.terms.get(p).map(|b| a.conj() * b))
            .sum())
    }

    /// `hs_inner(self, self)`, the squared coefficient two-norm.
    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    /// All coefficients real to within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// All coefficients imaginary to within `tol`.
    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    /// Largest string weight, 0 for the empty sum.
    pub fn max_weight(&self) -> usize {
        self.terms
            .keys()
            .map(PauliString::weight)
            .max()
            .unwrap_or(0)
    }
}

fn fmt_complex(c: Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("({}{}{}j)", c.re, sign, c.im.abs())
}

impl fmt::Display for PauliSum {
    /// Debug text form, e.g. `(0.5-0j)*XZI + (0+2j)*YII`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| format!("{}*{}", fmt_complex(*c), p))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliSum[{}]({self})", self.n)
    }
}

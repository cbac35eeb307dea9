//! Annealing Hamiltonians and the first-order adiabatic gauge potential.
//!
//! With `H_ad(λ) = (1-λ)H_i + λH_f`, the gauge potential is truncated to
//! `A = iα O₁` where `O₁ = [H_ad, ∂_λH_ad]`. The action
//! `S(α) = ‖∂_λH_ad + α O₂‖²` with `O₂ = [H_ad, O₁]` is a real quadratic in
//! `α`, minimised at `α* = -Re⟨∂_λH_ad, O₂⟩ / ‖O₂‖²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hubo::HuboProblem;
use crate::pauli::{Pauli, PauliString, PauliSum, PRUNE_TOLERANCE};

/// Transverse and longitudinal fields of the initial Hamiltonian
/// `H_i = Σ_j (hx_j X_j + hb_j Z_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverConfig {
    pub hx: Vec<f64>,
    pub hb: Vec<f64>,
}

impl DriverConfig {
    pub fn new(hx: Vec<f64>, hb: Vec<f64>) -> Result<Self> {
        if hx.len() != hb.len() {
            return Err(Error::DimensionMismatch {
                expected: hx.len(),
                found: hb.len(),
            });
        }
        if let Some(i) = hx.iter().position(|&h| h == 0.0 || !h.is_finite()) {
            return Err(Error::Config(format!(
                "transverse field {i} must be finite and nonzero, got {}",
                hx[i]
            )));
        }
        if let Some(i) = hb.iter().position(|h| !h.is_finite()) {
            return Err(Error::Config(format!("bias {i} is not finite")));
        }
        Ok(Self { hx, hb })
    }

    /// Uniform transverse field `hx_value` with the given biases.
    pub fn uniform(hx_value: f64, hb: Vec<f64>) -> Result<Self> {
        Self::new(vec![hx_value; hb.len()], hb)
    }

    pub fn n(&self) -> usize {
        self.hx.len()
    }
}

fn check_sizes(problem: &HuboProblem, driver: &DriverConfig) -> Result<()> {
    if problem.n() != driver.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            found: driver.n(),
        });
    }
    Ok(())
}

fn real(c: f64) -> Complex64 {
    Complex64::new(c, 0.0)
}

/// `H_f` as a Pauli sum of `Z` products.
pub fn problem_hamiltonian(problem: &HuboProblem) -> PauliSum {
    let n = problem.n();
    let mut h = PauliSum::zero(n);
    let terms = problem
        .linear()
        .iter()
        .map(|&(i, c)| (PauliString::z_product(n, &[i]), c))
        .chain(
            problem
                .quadratic()
                .iter()
                .map(|(ij, c)| (PauliString::z_product(n, ij), *c)),
        )
        .chain(
            problem
                .cubic()
                .iter()
                .map(|(ijk, c)| (PauliString::z_product(n, ijk), *c)),
        );
    for (p, c) in terms {
        h.add_term(p, real(c)).expect("sizes agree by construction");
    }
    h.prune();
    h
}

/// `H_i = Σ_j (hx_j X_j + hb_j Z_j)`.
pub fn driver_hamiltonian(driver: &DriverConfig) -> PauliSum {
    let n = driver.n();
    let mut h = PauliSum::zero(n);
    for j in 0..n {
        h.add_term(
            PauliString::from_sparse(n, &[(j, Pauli::X)]),
            real(driver.hx[j]),
        )
        .expect("sizes agree");
        h.add_term(
            PauliString::from_sparse(n, &[(j, Pauli::Z)]),
            real(driver.hb[j]),
        )
        .expect("sizes agree");
    }
    h.prune();
    h
}

fn check_lambda(lam: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lam) {
        return Err(Error::Config(format!("λ = {lam} outside [0, 1]")));
    }
    Ok(())
}

/// `H_ad(λ) = (1-λ)H_i + λH_f`.
pub fn build_h_ad(problem: &HuboProblem, driver: &DriverConfig, lam: f64) -> Result<PauliSum> {
    check_sizes(problem, driver)?;
    check_lambda(lam)?;
    driver_hamiltonian(driver).linear_combination(1.0 - lam, &problem_hamiltonian(problem), lam)
}

/// Action-minimising first-order coefficient `α₁(λ)`, computed directly from
/// the nested commutators at `λ`.
///
/// Returns [`Error::UndefinedCoefficient`] when `‖O₂‖ = 0`.
pub fn alpha1(problem: &HuboProblem, driver: &DriverConfig, lam: f64) -> Result<f64> {
    check_sizes(problem, driver)?;
    check_lambda(lam)?;
    let hi = driver_hamiltonian(driver);
    let hf = problem_hamiltonian(problem);
    let h_ad = hi.linear_combination(1.0 - lam, &hf, lam)?;
    let dh = hf.linear_combination(1.0, &hi, -1.0)?;
    let o1 = h_ad.commutator(&dh)?;
    let o2 = h_ad.commutator(&o1)?;
    let den = o2.norm_sqr();
    if den <= PRUNE_TOLERANCE * PRUNE_TOLERANCE {
        return Err(Error::UndefinedCoefficient);
    }
    Ok(-dh.hs_inner(&o2)?.re / den)
}

/// Precomputed first-order expansion for a fixed `(problem, driver)` pair.
///
/// Because `O₁ = [H_ad, H_f - H_i] = [H_i, H_f]` does not depend on `λ`, and
/// `O₂ = (1-λ)[H_i, O₁] + λ[H_f, O₁]` is affine in `λ`, the numerator and
/// denominator of `α₁(λ)` are polynomials whose coefficients are computed
/// once here.
#[derive(Debug, Clone)]
pub struct GaugeExpansion {
    /// `i·O₁`, Hermitian with real coefficients.
    pub generator: PauliSum,
    num_i: f64,
    num_f: f64,
    den_ii: f64,
    den_ff: f64,
    den_if: f64,
}

impl GaugeExpansion {
    pub fn new(problem: &HuboProblem, driver: &DriverConfig) -> Result<Self> {
        check_sizes(problem, driver)?;
        let hi = driver_hamiltonian(driver);
        let hf = problem_hamiltonian(problem);
        let dh = hf.linear_combination(1.0, &hi, -1.0)?;
        let o1 = hi.commutator(&hf)?;
        let pi = hi.commutator(&o1)?;
        let pf = hf.commutator(&o1)?;
        Ok(Self {
            generator: o1.scaled(Complex64::new(0.0, 1.0)),
            num_i: dh.hs_inner(&pi)?.re,
            num_f: dh.hs_inner(&pf)?.re,
            den_ii: pi.norm_sqr(),
            den_ff: pf.norm_sqr(),
            den_if: pi.hs_inner(&pf)?.re,
        })
    }

    /// `α₁(λ)`, or `None` where the coefficient is undefined.
    pub fn alpha(&self, lam: f64) -> Option<f64> {
        let a = 1.0 - lam;
        let num = a * self.num_i + lam * self.num_f;
        let den = a * a * self.den_ii + lam * lam * self.den_ff + 2.0 * a * lam * self.den_if;
        (den > PRUNE_TOLERANCE * PRUNE_TOLERANCE).then(|| -num / den)
    }
}

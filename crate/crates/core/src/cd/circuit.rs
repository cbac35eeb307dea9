use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::agp::{DriverConfig, GaugeExpansion};
use super::schedule::Schedule;
use crate::error::{Error, Result};
use crate::hubo::HuboProblem;
use crate::pauli::PauliString;

/// How `α₁` enters the time integral of the counterdiabatic angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "lambda")]
pub enum AlphaMode {
    /// Re-evaluate `α₁(λ(t))` at every quadrature node.
    #[default]
    PerNode,
    /// Hold `α₁` at one representative `λ`.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitOptions {
    /// Composite Simpson panels; the rule uses `2·panels + 1` nodes.
    pub quadrature_panels: usize,
    pub alpha_mode: AlphaMode,
}

impl Default for CircuitOptions {
    fn default() -> Self {
        Self {
            quadrature_panels: 64,
            alpha_mode: AlphaMode::PerNode,
        }
    }
}

/// One effective Trotter step: a `R_y` product-state preparation followed by
/// Pauli rotations `exp(-i θ/2 · P)` applied in list order.
#[derive(Debug, Clone, PartialEq)]
pub struct CdCircuit {
    pub prep_angles: Vec<f64>,
    pub rotations: Vec<(PauliString, f64)>,
}

impl CdCircuit {
    pub fn n(&self) -> usize {
        self.prep_angles.len()
    }

    /// Text listing: `Ry(q,θ)` lines followed by `PRot(string,θ)` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (q, theta) in self.prep_angles.iter().enumerate() {
            let _ = writeln!(out, "Ry({q},{theta:?})");
        }
        for (p, theta) in &self.rotations {
            let _ = writeln!(out, "PRot({p},{theta:?})");
        }
        out
    }
}

/// `θ` such that `R_y(θ)|0⟩` is the ground state of `hx·X + hb·Z`.
///
/// The ratio `(λ_min - hb)/hx` fixes `tan(θ/2)`; normalising the sign onto
/// the numerator keeps `θ/2` in `(-π/2, π/2)`.
pub fn prep_angle(hx: f64, hb: f64) -> f64 {
    let lambda_min = -hb.hypot(hx);
    2.0 * ((lambda_min - hb) * hx.signum()).atan2(hx.abs())
}

/// `∫₀ᵀ λ̇(t)·α₁(λ(t)) dt` by composite Simpson. Nodes where `α₁` is
/// undefined contribute zero.
pub fn alpha_integral(
    expansion: &GaugeExpansion,
    schedule: &Schedule,
    options: &CircuitOptions,
) -> Result<f64> {
    if options.quadrature_panels == 0 {
        return Err(Error::Config("quadrature needs at least one panel".into()));
    }
    if let AlphaMode::Fixed(lam) = options.alpha_mode {
        if !(0.0..=1.0).contains(&lam) {
            return Err(Error::Config(format!("fixed λ = {lam} outside [0, 1]")));
        }
        // ∫ λ̇ dt = λ(T) - λ(0) = 1
        return Ok(expansion.alpha(lam).unwrap_or(0.0));
    }
    let intervals = 2 * options.quadrature_panels;
    let big_t = schedule.total_time();
    let h = big_t / intervals as f64;
    let mut sum = 0.0;
    for k in 0..=intervals {
        let t = if k == intervals { big_t } else { k as f64 * h };
        let ld = schedule.lambda_dot_unchecked(t);
        let f = if ld == 0.0 {
            0.0
        } else {
            expansion
                .alpha(schedule.lambda_unchecked(t))
                .map_or(0.0, |a| ld * a)
        };
        let w = if k == 0 || k == intervals {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += w * f;
    }
    Ok(sum * h / 3.0)
}

/// Builds the counterdiabatic circuit for `problem` under `driver`.
pub fn build_cd_circuit(
    problem: &HuboProblem,
    driver: &DriverConfig,
    schedule: &Schedule,
    options: &CircuitOptions,
) -> Result<CdCircuit> {
    let expansion = GaugeExpansion::new(problem, driver)?;
    let integral = alpha_integral(&expansion, schedule, options)?;
    let prep_angles = driver
        .hx
        .iter()
        .zip(&driver.hb)
        .map(|(&hx, &hb)| prep_angle(hx, hb))
        .collect();
    // BTreeMap iteration is already the canonical string order
    let rotations = expansion
        .generator
        .iter()
        .map(|(p, c)| (p.clone(), 2.0 * c.re * integral))
        .collect();
    Ok(CdCircuit {
        prep_angles,
        rotations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn unbiased_prep_is_plus_state() {
        assert!((prep_angle(-1.0, 0.0) - FRAC_PI_2).abs() < 1e-15);
        assert!((prep_angle(1.0, 0.0) + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn prep_is_ground_state() {
        for &(hx, hb) in &[
            (-1.0, 0.0),
            (-1.0, 0.7),
            (-1.0, -2.5),
            (0.4, 1.3),
            (2.0, -0.1),
        ] {
            let th: f64 = prep_angle(hx, hb);
            let (c, s) = ((th / 2.0).cos(), (th / 2.0).sin());
            let lm = -f64::hypot(hx, hb);
            // [[hb, hx], [hx, -hb]] · (c, s)
            let r0 = hb * c + hx * s;
            let r1 = hx * c - hb * s;
            assert!((r0 - lm * c).abs() < 1e-12 && (r1 - lm * s).abs() < 1e-12);
        }
    }

    #[test]
    fn single_spin_has_one_y_rotation() {
        let p = HuboProblem::new(
            1,
            BTreeMap::from([(0, 1.0)]),
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .unwrap();
        let d = DriverConfig::uniform(-1.0, vec![0.0]).unwrap();
        let c = build_cd_circuit(&p, &d, &Schedule::default(), &CircuitOptions::default()).unwrap();
        assert_eq!(c.rotations.len(), 1);
        assert_eq!(c.rotations[0].0.to_string(), "Y");
        assert!(c.rotations[0].1.abs() > 1e-3);
        assert!(c.dump().starts_with("Ry(0,"));
    }

    #[test]
    fn zero_panels_rejected() {
        let p = HuboProblem::empty(2);
        let d = DriverConfig::uniform(-1.0, vec![0.0; 2]).unwrap();
        let o = CircuitOptions {
            quadrature_panels: 0,
            ..Default::default()
        };
        assert!(build_cd_circuit(&p, &d, &Schedule::default(), &o).is_err());
    }
}

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The annealing schedule `λ(t) = sin²((π/2)·sin²(πt/2T))` on `[0, T]`.
///
/// `λ(0) = 0`, `λ(T) = 1`, and `λ̇` vanishes at both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    total_time: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self { total_time: 1.0 }
    }
}

impl Schedule {
    pub fn new(total_time: f64) -> Result<Self> {
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(Error::Config(format!(
                "total time must be positive, got {total_time}"
            )));
        }
        Ok(Self { total_time })
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    fn check(&self, t: f64) -> Result<()> {
        if !(0.0..=self.total_time).contains(&t) {
            return Err(Error::Config(format!(
                "time {t} outside [0, {}]",
                self.total_time
            )));
        }
        Ok(())
    }

    pub fn lambda(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.lambda_unchecked(t))
    }

    pub fn lambda_dot(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.lambda_dot_unchecked(t))
    }

    pub(crate) fn lambda_unchecked(&self, t: f64) -> f64 {
        let u = (PI * t / (2.0 * self.total_time)).sin().powi(2);
        (0.5 * PI * u).sin().powi(2)
    }

    /// `λ̇ = (π²/4T)·sin(π·u)·sin(πt/T)` with `u = sin²(πt/2T)`.
    pub(crate) fn lambda_dot_unchecked(&self, t: f64) -> f64 {
        let big_t = self.total_time;
        let u = (PI * t / (2.0 * big_t)).sin().powi(2);
        PI * PI / (4.0 * big_t) * (PI * u).sin() * (PI * t / big_t).sin()
    }
}

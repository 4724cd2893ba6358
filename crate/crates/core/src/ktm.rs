//! Pairwise classical-channel quantities for two point masses.
//!
//! The two-particle generator is
//! `-(i/ħ)[H₀ + V₀, ρ] - (1/4D + K²D/4ħ²) Σᵢ [xᵢ, [xᵢ, ρ]]`
//! with force gradient `K = 2Gm₁m₂/d³`. The noise parameter `D` carries
//! units of m²·s so that both terms of the coefficient are m⁻²·s⁻¹.

use crate::constants::{G, HBAR};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::math::{abs, cube};

/// Relative tolerance for `D = τσ` when both collision parameters are given.
const COLLISION_REL_TOL: f64 = 1e-12;

/// Parameters of one pairwise channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairChannelParams {
    pub m1: f64,
    pub m2: f64,
    pub d: f64,
    pub noise: f64,
    pub tau: Option<f64>,
    pub sigma: Option<f64>,
}

impl PairChannelParams {
    pub fn new(m1: f64, m2: f64, d: f64, noise: f64) -> Result<Self> {
        require_non_negative("m1", m1)?;
        require_non_negative("m2", m2)?;
        require_positive("d", d)?;
        require_positive("D", noise)?;
        Ok(Self {
            m1,
            m2,
            d,
            noise,
            tau: None,
            sigma: None,
        })
    }

    /// Builds the channel from the collision timescale and ancilla width.
    pub fn from_collisions(m1: f64, m2: f64, d: f64, tau: f64, sigma: f64) -> Result<Self> {
        let noise = collisional_noise(tau, sigma)?;
        let mut p = Self::new(m1, m2, d, noise)?;
        p.tau = Some(tau);
        p.sigma = Some(sigma);
        Ok(p)
    }

    /// Checks every field invariant, including `D = τσ` when both are present.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.m1, self.m2, self.d, self.noise)?;
        if let (Some(tau), Some(sigma)) = (self.tau, self.sigma) {
            let product = collisional_noise(tau, sigma)?;
            if abs(product - self.noise) > COLLISION_REL_TOL * self.noise {
                return Err(Error::Invalid {
                    field: "D",
                    reason: "D must equal tau * sigma",
                });
            }
        }
        Ok(())
    }

    pub fn force_gradient(&self) -> f64 {
        2.0 * G * (self.m1 * self.m2) / cube(self.d)
    }

    pub fn coefficient(&self) -> f64 {
        coefficient_unchecked(self.force_gradient(), self.noise)
    }

    pub fn rate(&self, dx: f64) -> Result<DecoherenceRate> {
        DecoherenceRate::new(self.coefficient(), dx)
    }
}

/// A position-basis dephasing rate `Γ = coefficient · Δx²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceRate {
    pub gamma: f64,
    pub dx: f64,
    pub coefficient: f64,
}

impl DecoherenceRate {
    pub fn new(coefficient: f64, dx: f64) -> Result<Self> {
        require_non_negative("coefficient", coefficient)?;
        require_non_negative("dx", dx)?;
        Ok(Self {
            gamma: coefficient * dx * dx,
            dx,
            coefficient,
        })
    }

    /// Decoherence time 1/Γ (infinite for Γ = 0).
    pub fn time(&self) -> f64 {
        1.0 / self.gamma
    }
}

/// `K = 2Gm₁m₂/d³` in N·m⁻¹.
pub fn force_gradient(m1: f64, m2: f64, d: f64) -> Result<f64> {
    require_positive("d", d)?;
    Ok(2.0 * G * (m1 * m2) / cube(d))
}

fn coefficient_unchecked(k: f64, noise: f64) -> f64 {
    1.0 / (4.0 * noise) + k * k * noise / (4.0 * HBAR * HBAR)
}

/// Per-particle dephasing coefficient `1/4D + K²D/4ħ²` (m⁻²·s⁻¹).
pub fn decoherence_coefficient(k: f64, noise: f64) -> Result<f64> {
    require_positive("D", noise)?;
    Ok(coefficient_unchecked(k, noise))
}

/// The noise parameter minimising the coefficient, `D* = ħ/K`.
pub fn optimal_noise(k: f64) -> Result<f64> {
    require_positive("K", k)?;
    Ok(HBAR / k)
}

/// Minimal rate `Γ = (K/2ħ)Δx²`.
pub fn min_decoherence_rate(k: f64, dx: f64) -> Result<DecoherenceRate> {
    require_non_negative("K", k)?;
    DecoherenceRate::new(k / (2.0 * HBAR), dx)
}

/// Second-order expansion of the Newtonian pair potential in the
/// displacements, `-Gm₁m₂/d · (1 - u + u²)` with `u = (x₁ + x₂)/d`.
pub fn newtonian_expansion(m1: f64, m2: f64, d: f64, x1: f64, x2: f64) -> Result<f64> {
    require_positive("d", d)?;
    let u = (x1 + x2) / d;
    Ok(-G * m1 * m2 / d * (1.0 - u + u * u))
}

/// Continuum limit of the collisional model, `D = τσ`.
pub fn collisional_noise(tau: f64, sigma: f64) -> Result<f64> {
    require_positive("tau", tau)?;
    require_positive("sigma", sigma)?;
    Ok(tau * sigma)
}

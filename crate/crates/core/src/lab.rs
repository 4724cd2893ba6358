//! Torsion-balance reduction and constraint chain, plus the optomechanical
//! feasibility thresholds.
//!
//! Four small bodies `m` on an arm of radius `r` and four large bodies `M` on
//! radius `R` interact through
//!
//! ```text
//! V(α) = Σₙ 4GmM / √(r² + R² − 2rR sin(α + nπ/2)),   n = 0..3
//! ```
//!
//! Expanding about α₀ gives `B δα + C (δα)²`, and the channel coupling is
//! `K = 2C`. The position-dephasing coefficient is then `(C/2ħ)(ε + 1/ε)` in
//! the angle variable.

use crate::constants::{EARTH_MASS, EARTH_RADIUS, G, HBAR, KB};
use crate::error::{require_positive, Error, Result};
use crate::math::{abs, cos, cube, sin, sqrt};

/// Reduced moment of inertia quoted for the reference balance (kg·m²).
pub const QUOTED_I_EFF: f64 = 8.35e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionBalanceConfig {
    pub m: f64,
    pub big_m: f64,
    pub r: f64,
    pub big_r: f64,
    /// Equilibrium angle (rad).
    pub alpha0: f64,
}

impl TorsionBalanceConfig {
    /// m = 1.2 kg, M = 11 kg, r = 120 mm, R = 214 mm, α₀ = 18.9°.
    pub fn reference() -> Self {
        Self {
            m: 1.2,
            big_m: 11.0,
            r: 0.120,
            big_r: 0.214,
            alpha0: 18.9_f64.to_radians(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("m", self.m)?;
        require_positive("M", self.big_m)?;
        require_positive("r", self.r)?;
        require_positive("R", self.big_r)?;
        if !(self.alpha0 > 0.0 && self.alpha0 < core::f64::consts::FRAC_PI_2) {
            return Err(Error::Domain {
                name: "alpha0",
                value: self.alpha0,
                reason: "must lie in (0, π/2)",
            });
        }
        Ok(())
    }

    /// Squared small-to-large body distance for the `n`-th pair at angle α.
    fn distance_sq(&self, alpha: f64, n: u32) -> f64 {
        let phase = alpha + n as f64 * core::f64::consts::FRAC_PI_2;
        self.r * self.r + self.big_r * self.big_r - 2.0 * self.r * self.big_r * sin(phase)
    }

    /// Closest small-to-large body distance at equilibrium.
    pub fn nearest_separation(&self) -> f64 {
        (0..4)
            .map(|n| sqrt(self.distance_sq(self.alpha0, n)))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `2mr²MR²/(mr² + MR²)`.
pub fn effective_inertia(cfg: &TorsionBalanceConfig) -> Result<f64> {
    cfg.validate()?;
    let a = cfg.m * cfg.r * cfg.r;
    let b = cfg.big_m * cfg.big_r * cfg.big_r;
    Ok(2.0 * a * b / (a + b))
}

/// Which pair terms enter the expansion sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairTerms {
    /// All four small/large pairs, n = 0..3: the Taylor coefficients of V.
    Full,
    /// The printed sums, n = 1..3 only.
    Printed,
}

impl PairTerms {
    fn range(self) -> core::ops::RangeInclusive<u32> {
        match self {
            PairTerms::Full => 0..=3,
            PairTerms::Printed => 1..=3,
        }
    }
}

/// Potential summed over the selected pair terms (constant terms dropped).
pub fn pair_potential(cfg: &TorsionBalanceConfig, alpha: f64, terms: PairTerms) -> Result<f64> {
    cfg.validate()?;
    let mut v = 0.0;
    for n in terms.range() {
        let d2 = cfg.distance_sq(alpha, n);
        if d2 <= 0.0 {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha,
                reason: "bodies coincide",
            });
        }
        v += 4.0 * G * cfg.m * cfg.big_m / sqrt(d2);
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionReduction {
    pub i_eff: f64,
    /// Linear coefficient B (J/rad).
    pub b_coeff: f64,
    /// Quadratic coefficient C (J/rad²).
    pub c_quad: f64,
}

/// `(B, C)` from the expansion sums over the selected terms.
pub fn quadratic_coeffs(cfg: &TorsionBalanceConfig, terms: PairTerms) -> Result<(f64, f64)> {
    cfg.validate()?;
    let gmm = G * cfg.m * cfg.big_m;
    let rr = cfg.r * cfg.big_r;
    let (mut b, mut c) = (0.0, 0.0);
    for n in terms.range() {
        let d2 = cfg.distance_sq(cfg.alpha0, n);
        if d2 <= 0.0 {
            return Err(Error::Domain {
                name: "alpha0",
                value: cfg.alpha0,
                reason: "touching bodies: zero distance in the expansion",
            });
        }
        let phase = cfg.alpha0 + n as f64 * core::f64::consts::FRAC_PI_2;
        let d = sqrt(d2);
        let (s, cph) = (sin(phase), cos(phase));
        b += 4.0 * gmm * rr * cph / cube(d);
        c += -2.0 * gmm * rr * s / cube(d) + 6.0 * gmm * rr * rr * cph * cph / (cube(d) * d2);
    }
    Ok((b, c))
}

/// Formula inertia with the full-sum coefficients.
pub fn torsion_reduction(cfg: &TorsionBalanceConfig) -> Result<TorsionReduction> {
    let (b_coeff, c_quad) = quadratic_coeffs(cfg, PairTerms::Full)?;
    Ok(TorsionReduction {
        i_eff: effective_inertia(cfg)?,
        b_coeff,
        c_quad,
    })
}

/// `ħ/(8 I_eff)`, the variance per unit `T(ε + 1/ε)` (s⁻¹ in the paper's units).
pub fn variance_coefficient(i_eff: f64) -> Result<f64> {
    require_positive("i_eff", i_eff)?;
    Ok(HBAR / (8.0 * i_eff))
}

/// `⟨(δα)²⟩ = (ħ/8I_eff) T (ε + 1/ε)`.
pub fn angle_variance(i_eff: f64, t: f64, epsilon: f64) -> Result<f64> {
    require_positive("T", t)?;
    require_positive("epsilon", epsilon)?;
    Ok(variance_coefficient(i_eff)? * t * (epsilon + 1.0 / epsilon))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InertiaChoice {
    /// The quoted 8.35e-3 kg·m².
    Quoted,
    /// `2mr²MR²/(mr² + MR²)` at the configured geometry.
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintChain {
    pub i_eff_used: f64,
    pub i_eff_formula: f64,
    pub i_eff_quoted: f64,
    pub variance_coefficient: f64,
    /// Upper bound on `T(ε + 1/ε)` (s).
    pub t_eps_bound: f64,
    /// Upper bound on `ε + 1/ε`.
    pub eps_bound: f64,
    pub c_quad: f64,
    /// Upper bound on the dephasing rate `(C/2ħ)(ε + 1/ε)` (s⁻¹).
    pub rate_bound: f64,
}

impl ConstraintChain {
    /// `I_formula / I_quoted`.
    pub fn inertia_discrepancy(&self) -> f64 {
        self.i_eff_formula / self.i_eff_quoted
    }
}

/// `√(coeff·T(ε+1/ε))/Δα ≤ ΔG/G` solved for `T(ε+1/ε)`, then `ε+1/ε` at the
/// given run time, then the rate bound.
pub fn constraint_chain(
    cfg: &TorsionBalanceConfig,
    t: f64,
    dg_over_g: f64,
    delta_alpha: f64,
    inertia: InertiaChoice,
) -> Result<ConstraintChain> {
    require_positive("T", t)?;
    require_positive("dg_over_g", dg_over_g)?;
    require_positive("delta_alpha", delta_alpha)?;
    let red = torsion_reduction(cfg)?;
    let i_eff_used = match inertia {
        InertiaChoice::Quoted => QUOTED_I_EFF,
        InertiaChoice::Formula => red.i_eff,
    };
    let coeff = variance_coefficient(i_eff_used)?;
    let allowed = dg_over_g * delta_alpha;
    let t_eps_bound = allowed * allowed / coeff;
    let eps_bound = t_eps_bound / t;
    Ok(ConstraintChain {
        i_eff_used,
        i_eff_formula: red.i_eff,
        i_eff_quoted: QUOTED_I_EFF,
        variance_coefficient: coeff,
        t_eps_bound,
        eps_bound,
        c_quad: red.c_quad,
        rate_bound: abs(red.c_quad) / (2.0 * HBAR) * eps_bound,
    })
}

/// `(GmM/(d³ħ)) Δx²` for two bodies a distance `d` apart.
pub fn ktm_torsion_estimate(m: f64, big_m: f64, separation: f64, dx: f64) -> Result<f64> {
    require_positive("m", m)?;
    require_positive("M", big_m)?;
    require_positive("separation", separation)?;
    crate::error::require_non_negative("dx", dx)?;
    Ok(G * m * big_m / (cube(separation) * HBAR) * dx * dx)
}

/// Minimal rate in the angle variable, `(K/2ħ)Δα²` with `K = 2C`.
pub fn torsion_angular_rate(c_quad: f64, delta_alpha: f64) -> Result<f64> {
    crate::error::require_non_negative("delta_alpha", delta_alpha)?;
    Ok(abs(c_quad) / HBAR * delta_alpha * delta_alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptomechThresholds {
    /// `GħM/(2k_B R³)` (K/s): `TΩ/Q` must stay below this.
    pub thermal: f64,
    /// `GM/R³` (s⁻²): the measurement frequency squared must stay below this.
    pub freq_sq: f64,
    /// `TΩ/Q` for Q = 2e7, Ω/2π = 1 Hz, T = 4 K.
    pub thermal_state_of_art: f64,
    /// ω² at the standard quantum limit of the same setup.
    pub freq_sq_state_of_art: f64,
}

pub fn optomech_thresholds() -> OptomechThresholds {
    optomech_thresholds_for(EARTH_MASS, EARTH_RADIUS)
}

pub fn optomech_thresholds_for(mass: f64, radius: f64) -> OptomechThresholds {
    OptomechThresholds {
        thermal: G * HBAR * mass / (2.0 * KB * cube(radius)),
        freq_sq: G * mass / cube(radius),
        thermal_state_of_art: 4.0 * 2.0 * core::f64::consts::PI / 2e7,
        freq_sq_state_of_art: 1e6,
    }
}

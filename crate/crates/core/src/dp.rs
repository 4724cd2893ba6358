//! Self-energy (Diosi–Penrose) decoherence rates and the comparison against
//! the pairwise-channel prediction.
//!
//! The general rate for a rigid body in a superposition of configurations
//! `X`, `Y` is `Γ = (1/2ħ)|U(XX) + U(YY) − 2U(XY)|` with `U` the mutual
//! Newtonian energy of the two mass densities. For a point mass smeared over
//! a uniform ball of radius δ this gives `(Gm²/δħ)(6/5 − δ/Δx)` once
//! `Δx ≥ 2δ` and `Gm²Δx²/(2δ³ħ)` as `Δx/δ → 0`.

use alloc::string::String;

use crate::composite::{cm_point_coefficient, d_min_with, BallQuadrature, Constituent, MassDistribution, SuperpositionAxis};
use crate::constants::{schwarzschild_radius, C, G, HBAR};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::ktm::DecoherenceRate;
use crate::math::{abs, cube, gauss_legendre, norm, sub, Vec3};
use crate::scenario::Scenario;

/// Default smearing radius δ (m).
pub const DEFAULT_DELTA: f64 = 1e-15;

/// Above this δ/Δx the rate is taken from the general self-energy expression
/// instead of the small-δ asymptote.
pub const REGIME_SWITCH: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DPParams {
    pub delta: f64,
    pub mass: f64,
    pub dx: f64,
    /// Number of constituents of a composite body.
    pub n1: u64,
}

impl DPParams {
    pub fn new(delta: f64, mass: f64, dx: f64, n1: u64) -> Result<Self> {
        let p = Self { delta, mass, dx, n1 };
        p.validate()?;
        Ok(p)
    }

    pub fn single(mass: f64, dx: f64) -> Result<Self> {
        Self::new(DEFAULT_DELTA, mass, dx, 1)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("delta", self.delta)?;
        require_positive("mass", self.mass)?;
        require_non_negative("dx", self.dx)?;
        if self.n1 == 0 {
            return Err(Error::Invalid {
                field: "n1",
                reason: "need at least one constituent",
            });
        }
        Ok(())
    }
}

/// A mass density: a point or a uniform ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Point { mass: f64, center: Vec3 },
    UniformBall { mass: f64, radius: f64, center: Vec3 },
}

impl Density {
    pub fn mass(&self) -> f64 {
        match self {
            Density::Point { mass, .. } | Density::UniformBall { mass, .. } => *mass,
        }
    }

    fn center(&self) -> Vec3 {
        match self {
            Density::Point { center, .. } | Density::UniformBall { center, .. } => *center,
        }
    }

    fn validate(&self) -> Result<()> {
        require_positive("mass", self.mass())?;
        if let Density::UniformBall { radius, .. } = self {
            require_positive("radius", *radius)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassDensityPair {
    pub x: Density,
    pub y: Density,
}

impl MassDensityPair {
    pub fn new(x: Density, y: Density) -> Result<Self> {
        x.validate()?;
        y.validate()?;
        if abs(x.mass() - y.mass()) > 1e-12 * x.mass() {
            return Err(Error::Invalid {
                field: "mass",
                reason: "both configurations must carry the same total mass",
            });
        }
        Ok(Self { x, y })
    }

    /// Two uniform balls of radius `delta` a distance `s` apart.
    pub fn balls(mass: f64, delta: f64, s: f64) -> Result<Self> {
        Self::new(
            Density::UniformBall {
                mass,
                radius: delta,
                center: [0.0; 3],
            },
            Density::UniformBall {
                mass,
                radius: delta,
                center: [s, 0.0, 0.0],
            },
        )
    }
}

/// Mutual gravitational energy `U(XY) = −G∫∫ f_X f_Y / |r − r′|` (J).
pub fn dp_pair_energy(pair: &MassDensityPair) -> Result<f64> {
    pair.x.validate()?;
    pair.y.validate()?;
    let s = norm(&sub(&pair.x.center(), &pair.y.center()));
    let (m1, m2) = (pair.x.mass(), pair.y.mass());
    match (pair.x, pair.y) {
        (Density::Point { .. }, Density::Point { .. }) => {
            if s == 0.0 {
                Err(Error::Divergence("coincident point masses"))
            } else {
                Ok(-G * m1 * m2 / s)
            }
        }
        (Density::Point { .. }, Density::UniformBall { radius, .. })
        | (Density::UniformBall { radius, .. }, Density::Point { .. }) => Ok(m1 * ball_potential(m2, radius, s)),
        (Density::UniformBall { radius: r1, .. }, Density::UniformBall { radius: r2, .. }) => {
            if s >= r1 + r2 {
                Ok(-G * m1 * m2 / s)
            } else if abs(r1 - r2) <= 1e-12 * r1 {
                Ok(equal_ball_energy(m1, m2, r1, s))
            } else {
                Ok(ball_ball_quadrature(m1, r1, m2, r2, s))
            }
        }
    }
}

/// Potential energy per unit mass at distance `s` from the centre of a
/// uniform ball.
fn ball_potential(mass: f64, radius: f64, s: f64) -> f64 {
    if s >= radius {
        -G * mass / s
    } else {
        -G * mass * (3.0 * radius * radius - s * s) / (2.0 * cube(radius))
    }
}

/// Closed form for two uniform balls of equal radius `δ` with overlapping
/// supports (`s < 2δ`).
pub fn equal_ball_energy(m1: f64, m2: f64, delta: f64, s: f64) -> f64 {
    if s >= 2.0 * delta {
        return -G * m1 * m2 / s;
    }
    let u = s / delta;
    let u3 = u * u * u;
    -G * m1 * m2 / delta * (1.2 - 0.5 * u * u + 3.0 / 16.0 * u3 - u3 * u * u / 160.0)
}

/// Unequal overlapping balls: the angular integral over ball 1 is done in
/// closed form, the radial one by Gauss–Legendre split at every kink.
fn ball_ball_quadrature(m1: f64, r1: f64, m2: f64, r2: f64, s: f64) -> f64 {
    // antiderivative of ρ·φ(ρ) for the potential of ball 2
    let f = |rho: f64| {
        if rho <= r2 {
            -G * m2 * (1.5 * r2 * r2 * rho * rho - 0.25 * rho * rho * rho * rho) / (2.0 * cube(r2))
        } else {
            -G * m2 * (0.625 * r2 + (rho - r2))
        }
    };
    let density = 3.0 * m1 / (4.0 * core::f64::consts::PI * cube(r1));
    if s == 0.0 {
        let g = |r: f64| 4.0 * core::f64::consts::PI * r * r * ball_potential(m2, r2, r);
        let knots = [0.0, r2.min(r1), r1];
        return density * knots.windows(2).map(|w| gauss_legendre(g, w[0], w[1], 64)).sum::<f64>();
    }
    let g = |r: f64| 2.0 * core::f64::consts::PI * r * (f(s + r) - f(abs(s - r))) / s;
    let mut knots = alloc::vec![0.0, r1];
    for k in [r2 - s, s + r2, s - r2] {
        if k > 0.0 && k < r1 {
            knots.push(k);
        }
    }
    knots.sort_by(f64::total_cmp);
    density * knots.windows(2).map(|w| gauss_legendre(g, w[0], w[1], 64)).sum::<f64>()
}

/// `(2Gm²/δħ)(6/5 − δ/Δx)`, the small-δ asymptote.
pub fn small_delta_rate(mass: f64, delta: f64, dx: f64) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("delta", delta)?;
    require_positive("dx", dx)?;
    Ok(2.0 * G * mass * mass / (delta * HBAR) * (1.2 - delta / dx))
}

/// `Gm²Δx²/(2δ³ħ)`, the large-δ asymptote.
pub fn large_delta_rate(mass: f64, delta: f64, dx: f64) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("delta", delta)?;
    require_non_negative("dx", dx)?;
    Ok(G * mass * mass * dx * dx / (2.0 * cube(delta) * HBAR))
}

/// `(1/2ħ)|U(XX) + U(YY) − 2U(XY)|` for uniform balls of radius δ.
pub fn self_energy_rate(mass: f64, delta: f64, dx: f64) -> Result<f64> {
    require_non_negative("dx", dx)?;
    let same = dp_pair_energy(&MassDensityPair::balls(mass, delta, 0.0)?)?;
    let cross = dp_pair_energy(&MassDensityPair::balls(mass, delta, dx)?)?;
    Ok(abs(2.0 * same - 2.0 * cross) / (2.0 * HBAR))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DPRegime {
    /// δ/Δx ≤ [`REGIME_SWITCH`]: `(2Gm²/δħ)(6/5 − δ/Δx)`.
    SmallDelta,
    /// Everything else: the general self-energy expression, which tends to
    /// `Gm²Δx²/(2δ³ħ)` for δ ≫ Δx.
    General,
}

pub fn dp_regime(params: &DPParams) -> DPRegime {
    if params.dx > 0.0 && params.delta / params.dx <= REGIME_SWITCH {
        DPRegime::SmallDelta
    } else {
        DPRegime::General
    }
}

/// Self-energy decoherence rate; composite bodies scale by `n1`.
pub fn dp_rate(params: &DPParams) -> Result<DecoherenceRate> {
    params.validate()?;
    let single = match dp_regime(params) {
        DPRegime::SmallDelta => small_delta_rate(params.mass, params.delta, params.dx)?,
        DPRegime::General => self_energy_rate(params.mass, params.delta, params.dx)?,
    };
    let gamma = params.n1 as f64 * single;
    let coefficient = if params.dx > 0.0 {
        gamma / (params.dx * params.dx)
    } else {
        params.n1 as f64 * G * params.mass * params.mass / (2.0 * cube(params.delta) * HBAR)
    };
    Ok(DecoherenceRate {
        gamma,
        dx: params.dx,
        coefficient,
    })
}

/// Range of the pairwise-channel rate for a test mass `m` near a mass `M`:
/// 0 as `d → ∞`, and `(mc²/ħ)(Δx/R_S)²` at the Schwarzschild radius.
pub fn ktm_rate_range(m: f64, source_mass: f64, dx: f64) -> Result<(f64, f64)> {
    require_positive("m", m)?;
    require_positive("M", source_mass)?;
    require_non_negative("dx", dx)?;
    let rs = schwarzschild_radius(source_mass);
    Ok((0.0, m * C * C / HBAR * (dx / rs) * (dx / rs)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub name: String,
    pub dx: f64,
    pub one_over_gamma_dp: f64,
    pub one_over_gamma_ktm: f64,
    /// Pairwise-channel dephasing coefficient (m⁻²·s⁻¹).
    pub ktm_coefficient: f64,
}

/// Both decoherence times for one scenario. The test mass sits at the origin.
pub fn comparison_row(scenario: &Scenario) -> Result<ComparisonRow> {
    comparison_row_with(scenario, &BallQuadrature::default())
}

/// As [`comparison_row`] with an explicit ball estimator (seed, samples).
pub fn comparison_row_with(scenario: &Scenario, quad: &BallQuadrature) -> Result<ComparisonRow> {
    scenario.validate()?;
    let dx = scenario.dx();
    let dp = dp_rate(&DPParams::new(scenario.dp_delta, scenario.test_mass, dx, 1)?)?;
    let origin = [0.0; 3];
    let coefficient = if scenario.single_particle_sources {
        cm_point_coefficient(scenario.test_mass, &origin, &scenario.sources, scenario.c_factor)?
    } else {
        let body = MassDistribution::PointSet(alloc::vec![Constituent::new(scenario.test_mass, origin)?]);
        let axis = SuperpositionAxis::along(scenario.axis, dx)?;
        let mut total = 0.0;
        for s in &scenario.sources {
            total += d_min_with(&body, s, &axis, quad)?;
        }
        total
    };
    let ktm = DecoherenceRate::new(coefficient, dx)?;
    Ok(ComparisonRow {
        name: scenario.name.clone(),
        dx,
        one_over_gamma_dp: dp.time(),
        one_over_gamma_ktm: ktm.time(),
        ktm_coefficient: coefficient,
    })
}

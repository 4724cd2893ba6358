//! Multi-constituent bodies: 3-D force gradients, the minimal dephasing
//! coefficient summed over constituent pairs, and the homogeneous-ball
//! geometric factor.
//!
//! For a test body `s₁` superposed along `ê` next to matter `s₂`,
//!
//! ```text
//! D_min = (1/2ħ) ( Σ_{i≠j ∈ s₁} |K_ij| + Σ_{i ∈ s₁} Σ_{j ∈ s₂} |K_ij| )
//! K_ij  = 2 G m_i m_j (d∥² − ½ d⊥²) / d⁵
//! ```
//!
//! Cross-body sums against balls use a continuum estimate; the intra-body
//! sum always needs explicit constituents.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::{G, HBAR};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::ktm::DecoherenceRate;
use crate::math::{abs, cos, cube, dot, ln, norm, sin, sqrt, sub, Vec3};

/// Geometric factor for a test mass at the surface of a homogeneous ball:
/// the cone-and-half-ball region holds 3M/4 with its centre of mass at 7R/6.
pub const BALL_GEOMETRIC_FACTOR: f64 = 162.0 / 343.0;

/// Default closest-approach cutoff for continuum sources (m), the interatomic
/// spacing scale. The continuum |K| integral diverges logarithmically for a
/// test mass on the surface.
pub const DEFAULT_MIN_DISTANCE: f64 = 2.5e-10;

/// Two-sided 99% normal quantile.
const Z99: f64 = 2.575_829_303_548_901;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constituent {
    pub mass: f64,
    pub position: Vec3,
}

impl Constituent {
    pub fn new(mass: f64, position: Vec3) -> Result<Self> {
        require_positive("mass", mass)?;
        Ok(Self { mass, position })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MassDistribution {
    /// Explicit constituents of a body whose own pairs contribute.
    PointSet(Vec<Constituent>),
    /// Explicit external point sources.
    PointSourceList(Vec<Constituent>),
    HomogeneousBall {
        mass: f64,
        radius: f64,
        center: Vec3,
    },
    /// `count` equal constituents spread over a sphere in antipodal pairs.
    SphericalShell {
        mass: f64,
        radius: f64,
        center: Vec3,
        count: usize,
    },
}

impl MassDistribution {
    pub fn ball(mass: f64, radius: f64, center: Vec3) -> Result<Self> {
        let d = MassDistribution::HomogeneousBall {
            mass,
            radius,
            center,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn shell(mass: f64, radius: f64, center: Vec3, count: usize) -> Result<Self> {
        let d = MassDistribution::SphericalShell {
            mass,
            radius,
            center,
            count,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MassDistribution::PointSet(pts) | MassDistribution::PointSourceList(pts) => {
                for c in pts {
                    require_positive("mass", c.mass)?;
                }
                Ok(())
            }
            MassDistribution::HomogeneousBall { mass, radius, .. } => {
                require_positive("mass", *mass)?;
                require_positive("radius", *radius)?;
                Ok(())
            }
            MassDistribution::SphericalShell {
                mass,
                radius,
                count,
                ..
            } => {
                require_positive("mass", *mass)?;
                require_positive("radius", *radius)?;
                if *count < 2 || count % 2 != 0 {
                    return Err(Error::Invalid {
                        field: "count",
                        reason: "shell needs an even number of constituents (antipodal pairs)",
                    });
                }
                Ok(())
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            MassDistribution::PointSet(pts) | MassDistribution::PointSourceList(pts) => {
                pts.iter().map(|c| c.mass).sum()
            }
            MassDistribution::HomogeneousBall { mass, .. }
            | MassDistribution::SphericalShell { mass, .. } => *mass,
        }
    }

    /// Centre of mass of the distribution.
    pub fn center_of_mass(&self) -> Vec3 {
        match self {
            MassDistribution::PointSet(pts) | MassDistribution::PointSourceList(pts) => {
                let total = self.total_mass();
                let mut c = [0.0; 3];
                for p in pts {
                    for (ci, xi) in c.iter_mut().zip(p.position.iter()) {
                        *ci += p.mass * xi / total;
                    }
                }
                c
            }
            MassDistribution::HomogeneousBall { center, .. }
            | MassDistribution::SphericalShell { center, .. } => *center,
        }
    }

    /// Explicit constituents, if the distribution has a finite list of them.
    pub fn constituents(&self) -> Option<Vec<Constituent>> {
        match self {
            MassDistribution::PointSet(pts) | MassDistribution::PointSourceList(pts) => {
                Some(pts.clone())
            }
            MassDistribution::SphericalShell {
                mass,
                radius,
                center,
                count,
            } => Some(shell_constituents(*mass, *radius, *center, *count)),
            MassDistribution::HomogeneousBall { .. } => None,
        }
    }
}

/// Antipodally paired Fibonacci lattice on a sphere.
fn shell_constituents(mass: f64, radius: f64, center: Vec3, count: usize) -> Vec<Constituent> {
    let half = count / 2;
    let each = mass / count as f64;
    let golden = core::f64::consts::PI * (3.0 - sqrt(5.0));
    let mut out = Vec::with_capacity(count);
    for i in 0..half {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / half as f64;
        let rho = sqrt((1.0 - z * z).max(0.0));
        let phi = golden * i as f64;
        let u = [rho * cos(phi), rho * sin(phi), z];
        for s in [1.0, -1.0] {
            out.push(Constituent {
                mass: each,
                position: [
                    center[0] + s * radius * u[0],
                    center[1] + s * radius * u[1],
                    center[2] + s * radius * u[2],
                ],
            });
        }
    }
    out
}

/// Direction and size of the test body's spatial superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionAxis {
    pub direction: Vec3,
    pub dx: f64,
}

impl SuperpositionAxis {
    pub fn new(direction: Vec3, dx: f64) -> Result<Self> {
        require_non_negative("dx", dx)?;
        if abs(norm(&direction) - 1.0) > 1e-12 {
            return Err(Error::Invalid {
                field: "direction",
                reason: "superposition direction must have unit norm",
            });
        }
        Ok(Self { direction, dx })
    }

    /// Normalises `direction` before validating.
    pub fn along(direction: Vec3, dx: f64) -> Result<Self> {
        let n = norm(&direction);
        require_positive("direction norm", n)?;
        Self::new(
            [direction[0] / n, direction[1] / n, direction[2] / n],
            dx,
        )
    }
}

/// Signed gradient `2Gm_im_j(d∥² − ½d⊥²)/d⁵`.
pub fn pairwise_gradient_3d(mi: f64, mj: f64, d_par: f64, d_perp: f64) -> Result<f64> {
    let d2 = d_par * d_par + d_perp * d_perp;
    if d2 == 0.0 {
        return Err(Error::Overlap("coincident constituents (i = j is excluded)"));
    }
    let d = sqrt(d2);
    Ok(2.0 * G * mi * mj * (d_par * d_par - 0.5 * d_perp * d_perp) / (d2 * d2 * d))
}

/// Signed gradient between two constituents projected on `direction`.
pub fn gradient_between(a: &Constituent, b: &Constituent, direction: &Vec3) -> Result<f64> {
    let sep = sub(&b.position, &a.position);
    let d_par = dot(&sep, direction);
    let d_perp = sqrt((dot(&sep, &sep) - d_par * d_par).max(0.0));
    pairwise_gradient_3d(a.mass, b.mass, d_par, d_perp)
}

/// Monte Carlo estimate with its 99% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub half_width: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn relative_half_width(&self) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.half_width / abs(self.value)
        }
    }
}

/// Settings for the ball cross-sum estimator.
///
/// Directions from the test mass are sampled uniformly; along each ray the
/// radial integral of `ρ|K|` is done in closed form (it is `ln(s_out/s_in)`
/// times the angular factor), which removes the `1/d³` peak under the test
/// mass from the sampled integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallQuadrature {
    pub samples: usize,
    pub seed: u64,
    pub min_distance: f64,
    pub rel_tol: f64,
}

impl Default for BallQuadrature {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
            min_distance: DEFAULT_MIN_DISTANCE,
            rel_tol: 5e-3,
        }
    }
}

pub const MIN_BALL_SAMPLES: usize = 10_000;

/// Estimates `(1/2ħ) ∫ ρ |K(m, dm)| d³r` over a homogeneous ball for a point
/// test mass at `point`, superposed along `direction`.
pub fn ball_cross_coefficient(
    m: f64,
    point: &Vec3,
    ball_mass: f64,
    radius: f64,
    center: &Vec3,
    direction: &Vec3,
    quad: &BallQuadrature,
) -> Result<Estimate> {
    require_positive("m", m)?;
    require_positive("ball mass", ball_mass)?;
    require_positive("radius", radius)?;
    require_positive("min_distance", quad.min_distance)?;
    let w = sub(point, center);
    let w2 = dot(&w, &w);
    let c0 = w2 - radius * radius;
    if c0 < -1e-12 * radius * radius {
        return Err(Error::Overlap("test mass lies inside the ball"));
    }
    let c0 = c0.max(0.0);

    // Sample only the cone of directions that meets the ball.
    let dist = sqrt(w2);
    let cos_max = if dist > 0.0 { sqrt(c0) / dist } else { -1.0 };
    let frame = if dist > 0.0 {
        orthonormal_frame(&[-w[0] / dist, -w[1] / dist, -w[2] / dist])
    } else {
        orthonormal_frame(&[0.0, 0.0, 1.0])
    };
    let solid_angle = 2.0 * core::f64::consts::PI * (1.0 - cos_max);

    let mut rng = ChaCha8Rng::seed_from_u64(quad.seed);
    let n = quad.samples.max(2);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..n {
        let ct = 1.0 - (1.0 - cos_max) * rng.random::<f64>();
        let phi = 2.0 * core::f64::consts::PI * rng.random::<f64>();
        let st = sqrt((1.0 - ct * ct).max(0.0));
        let (a, b, c) = (st * cos(phi), st * sin(phi), ct);
        let u = [
            a * frame[0][0] + b * frame[1][0] + c * frame[2][0],
            a * frame[0][1] + b * frame[1][1] + c * frame[2][1],
            a * frame[0][2] + b * frame[1][2] + c * frame[2][2],
        ];
        let g = ray_integrand(&u, &w, c0, direction, quad.min_distance);
        // Welford update
        let delta = g - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (g - mean);
    }
    let var = m2 / (n - 1) as f64;
    let density = ball_mass / (4.0 / 3.0 * core::f64::consts::PI * cube(radius));
    // ∫dΩ = Ω_cap · E[g];  (1/2ħ)·2Gmρ
    let prefactor = G * m * density / HBAR * solid_angle;
    let value = prefactor * mean;
    let half_width = prefactor * Z99 * sqrt(var / n as f64);
    let est = Estimate {
        value,
        half_width,
        samples: quad.samples,
    };
    if quad.samples < MIN_BALL_SAMPLES || est.relative_half_width() > quad.rel_tol {
        return Err(Error::Precision {
            estimate: est.value,
            half_width: est.half_width,
            samples: quad.samples,
        });
    }
    Ok(est)
}

/// Rows are two unit vectors orthogonal to `axis`, then `axis` itself.
fn orthonormal_frame(axis: &Vec3) -> [Vec3; 3] {
    let helper = if abs(axis[0]) < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = dot(&helper, axis);
    let t = sub(&helper, &[axis[0] * d, axis[1] * d, axis[2] * d]);
    let tn = norm(&t);
    let e1 = [t[0] / tn, t[1] / tn, t[2] / tn];
    let e2 = [
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    [e1, e2, *axis]
}

/// `|P(u·ê)| ln(s_out/s_lo)` for the chord of the ray `point + s u` in the ball.
fn ray_integrand(u: &Vec3, w: &Vec3, c0: f64, e: &Vec3, cutoff: f64) -> f64 {
    let b = dot(u, w);
    let disc = b * b - c0;
    if disc <= 0.0 {
        return 0.0;
    }
    let root = sqrt(disc);
    let s_out = -b + root;
    if s_out <= 0.0 {
        return 0.0;
    }
    let s_in = (-b - root).max(0.0);
    let s_lo = s_in.max(cutoff);
    if s_out <= s_lo {
        return 0.0;
    }
    let c = dot(u, e);
    let angular = c * c - 0.5 * (1.0 - c * c);
    abs(angular) * ln(s_out / s_lo)
}

/// `Σ_j 2 G m M_j / d_j³ / 2ħ` with every source collapsed to its centre of
/// mass and treated as lying on the superposition axis (the single-particle
/// reading of the original pairwise model). Ball contributions are scaled by
/// `ball_factor`.
pub fn cm_point_coefficient(
    m: f64,
    point: &Vec3,
    sources: &[MassDistribution],
    ball_factor: f64,
) -> Result<f64> {
    require_positive("m", m)?;
    let mut total = 0.0;
    for s in sources {
        s.validate()?;
        let terms: Vec<(f64, Vec3, f64)> = match s {
            MassDistribution::PointSet(pts) | MassDistribution::PointSourceList(pts) => {
                pts.iter().map(|c| (c.mass, c.position, 1.0)).collect()
            }
            MassDistribution::HomogeneousBall { mass, center, .. } => {
                alloc::vec![(*mass, *center, ball_factor)]
            }
            MassDistribution::SphericalShell { mass, center, .. } => {
                alloc::vec![(*mass, *center, 1.0)]
            }
        };
        for (mass, pos, factor) in terms {
            let d = norm(&sub(&pos, point));
            if d == 0.0 {
                return Err(Error::Overlap("test mass at a source centre of mass"));
            }
            total += factor * G * (m * mass) / (HBAR * cube(d));
        }
    }
    Ok(total)
}

fn explicit_sum(
    s1: &[Constituent],
    s2: &[Constituent],
    direction: &Vec3,
) -> Result<f64> {
    let mut sum = 0.0;
    for a in s1 {
        for b in s2 {
            sum += abs(gradient_between(a, b, direction)?);
        }
    }
    Ok(sum)
}

/// `D_min` with the default ball estimator.
pub fn d_min(s1: &MassDistribution, s2: &MassDistribution, axis: &SuperpositionAxis) -> Result<f64> {
    d_min_with(s1, s2, axis, &BallQuadrature::default())
}

/// Minimal dephasing coefficient of the composite test body (m⁻²·s⁻¹).
pub fn d_min_with(
    s1: &MassDistribution,
    s2: &MassDistribution,
    axis: &SuperpositionAxis,
    quad: &BallQuadrature,
) -> Result<f64> {
    s1.validate()?;
    s2.validate()?;
    let e = &axis.direction;
    let body = match s1 {
        MassDistribution::PointSet(pts) | MassDistribution::PointSourceList(pts) => pts,
        _ => {
            return Err(Error::UnsupportedGeometry(
                "the test body needs explicit constituents",
            ))
        }
    };

    // Σ_{i≠j}: every unordered pair counted twice.
    let mut internal = 0.0;
    for (i, a) in body.iter().enumerate() {
        for b in &body[i + 1..] {
            internal += 2.0 * abs(gradient_between(a, b, e)?);
        }
    }

    let cross = match s2 {
        MassDistribution::HomogeneousBall {
            mass,
            radius,
            center,
        } => {
            let mut c = 0.0;
            for a in body {
                let est = ball_cross_coefficient(a.mass, &a.position, *mass, *radius, center, e, quad)?;
                // the estimator already includes 1/2ħ
                c += est.value * 2.0 * HBAR;
            }
            c
        }
        other => {
            let pts = other
                .constituents()
                .ok_or(Error::UnsupportedGeometry("source without constituents"))?;
            explicit_sum(body, &pts, e)?
        }
    };
    Ok((internal + cross) / (2.0 * HBAR))
}

/// `Γ = D_min Δx²`.
pub fn composite_min_rate(dmin: f64, dx: f64) -> Result<DecoherenceRate> {
    DecoherenceRate::new(dmin, dx)
}

/// Lower bound for a point test mass at the surface of a homogeneous ball:
/// returns `(C, C·G·m·M/(ħR³))`.
pub fn ball_rate_bound(m: f64, ball_mass: f64, radius: f64) -> Result<(f64, f64)> {
    require_positive("m", m)?;
    require_positive("M", ball_mass)?;
    require_positive("R", radius)?;
    let c = BALL_GEOMETRIC_FACTOR;
    Ok((c, c * G * m * ball_mass / (HBAR * cube(radius))))
}

/// Numerical `|K|` sum over a homogeneous ball for a test mass at
/// `R + standoff` from the centre, superposed radially.
pub fn ball_rate_numeric(
    m: f64,
    ball_mass: f64,
    radius: f64,
    standoff: f64,
    quad: &BallQuadrature,
) -> Result<Estimate> {
    require_non_negative("standoff", standoff)?;
    let point = [0.0, 0.0, radius + standoff];
    ball_cross_coefficient(m, &point, ball_mass, radius, &[0.0; 3], &[0.0, 0.0, 1.0], quad)
}

/// Coefficient for a point test mass inside a shell of explicit constituents,
/// displaced by `offset` from the centre along `direction` (also the
/// superposition direction).
pub fn shell_rate(m: f64, shell: &MassDistribution, offset: f64, direction: &Vec3) -> Result<f64> {
    require_positive("m", m)?;
    require_non_negative("offset", offset)?;
    let (radius, center) = match shell {
        MassDistribution::SphericalShell { radius, center, .. } => (*radius, *center),
        _ => return Err(Error::UnsupportedGeometry("shell_rate needs a spherical shell")),
    };
    shell.validate()?;
    if offset >= radius {
        return Err(Error::Domain {
            name: "offset",
            value: offset,
            reason: "test mass must be inside the shell",
        });
    }
    let axis = SuperpositionAxis::along(*direction, 0.0)?;
    let e = axis.direction;
    let probe = Constituent::new(
        m,
        [
            center[0] + offset * e[0],
            center[1] + offset * e[1],
            center[2] + offset * e[2],
        ],
    )?;
    d_min(&MassDistribution::PointSet(alloc::vec![probe]), shell, &axis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{EARTH_MASS, EARTH_RADIUS};
    use crate::ktm::{force_gradient, min_decoherence_rate};
    use alloc::vec;
    use proptest::prelude::*;
    use rand::Rng;

    const RB87: f64 = 1.4e-25;
    const Z: Vec3 = [0.0, 0.0, 1.0];

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn atom_at_origin() -> MassDistribution {
        MassDistribution::PointSet(vec![Constituent::new(RB87, [0.0; 3]).unwrap()])
    }

    #[test]
    fn gradient_3d_examples() {
        let (mi, mj, d) = (2.0, 5.0, 0.7);
        let on_axis = pairwise_gradient_3d(mi, mj, d, 0.0).unwrap();
        assert!(rel(on_axis, force_gradient(mi, mj, d).unwrap()) < 1e-14);
        let perp = 1.3;
        let root = pairwise_gradient_3d(mi, mj, perp / 2f64.sqrt(), perp).unwrap();
        assert!(root.abs() < 1e-14 * on_axis);
        let transverse = pairwise_gradient_3d(mi, mj, 0.0, d).unwrap();
        assert!(rel(transverse, -G * mi * mj / (d * d * d)) < 1e-14);
        assert!(matches!(pairwise_gradient_3d(1.0, 1.0, 0.0, 0.0), Err(Error::Overlap(_))));
    }

    #[test]
    fn d_min_single_pair_matches_pairwise_model() {
        let d = 3.0;
        let src = MassDistribution::PointSourceList(vec![Constituent::new(10.0, [0.0, 0.0, -d]).unwrap()]);
        let axis = SuperpositionAxis::new(Z, 1e-3).unwrap();
        let got = d_min(&atom_at_origin(), &src, &axis).unwrap();
        let want = min_decoherence_rate(force_gradient(RB87, 10.0, d).unwrap(), 1.0)
            .unwrap()
            .coefficient;
        assert!(rel(got, want) < 1e-14);

        let two = MassDistribution::PointSourceList(vec![
            Constituent::new(10.0, [0.0, 0.0, -d]).unwrap(),
            Constituent::new(10.0, [0.0, 0.0, d]).unwrap(),
        ]);
        assert!(rel(d_min(&atom_at_origin(), &two, &axis).unwrap(), 2.0 * want) < 1e-14);
    }

    #[test]
    fn rosi_single_particle_time() {
        // Earth as a point at R plus 6 tungsten bars at each of four distances.
        let mut pts = vec![Constituent::new(EARTH_MASS, [0.0, 0.0, -EARTH_RADIUS]).unwrap()];
        for d in [0.1076, 0.1776, 0.2795, 0.3131] {
            for _ in 0..6 {
                pts.push(Constituent::new(21.5, [0.0, 0.0, d]).unwrap());
            }
        }
        let axis = SuperpositionAxis::new(Z, 1.86e-3).unwrap();
        let dmin = d_min(&atom_at_origin(), &MassDistribution::PointSourceList(pts), &axis).unwrap();
        let t = composite_min_rate(dmin, axis.dx).unwrap().time();
        assert!(t > 10.0 && t < 40.0, "{t}");
    }

    #[test]
    fn composite_rate_scaling() {
        assert_eq!(composite_min_rate(5.0, 0.0).unwrap().gamma, 0.0);
        let a = composite_min_rate(7.0, 0.3).unwrap().gamma;
        let b = composite_min_rate(7.0, 0.6).unwrap().gamma;
        assert!(rel(b, 4.0 * a) < 1e-15);
        let k = force_gradient(RB87, EARTH_MASS, EARTH_RADIUS).unwrap();
        let kovachy = composite_min_rate(k / (2.0 * HBAR), 0.54).unwrap().gamma;
        assert!(kovachy > 6e2 && kovachy < 8e2, "{kovachy}");
    }

    #[test]
    fn overlap_and_unsupported() {
        let axis = SuperpositionAxis::new(Z, 1.0).unwrap();
        let same = MassDistribution::PointSourceList(vec![Constituent::new(1.0, [0.0; 3]).unwrap()]);
        assert!(matches!(d_min(&atom_at_origin(), &same, &axis), Err(Error::Overlap(_))));
        let ball = MassDistribution::ball(1.0, 2.0, [0.0; 3]).unwrap();
        assert!(matches!(d_min(&atom_at_origin(), &ball, &axis), Err(Error::Overlap(_))));
        assert!(matches!(
            d_min(&ball, &same, &axis),
            Err(Error::UnsupportedGeometry(_))
        ));
        assert!(SuperpositionAxis::new([1.0, 1.0, 0.0], 1.0).is_err());
        assert!(SuperpositionAxis::new(Z, -1.0).is_err());
        assert!(MassDistribution::shell(1.0, 1.0, [0.0; 3], 3).is_err());
    }

    #[test]
    fn geometric_factor() {
        let (c, coeff) = ball_rate_bound(RB87, EARTH_MASS, EARTH_RADIUS).unwrap();
        assert_eq!(c, BALL_GEOMETRIC_FACTOR);
        // (3/4)(6/7)³ = 648/1372 = 162/343
        assert_eq!((3 * 6 * 6 * 6 * 343, 4 * 7 * 7 * 7 * 162), (222_264, 222_264));
        assert!((0.75 * (6.0f64 / 7.0).powi(3) - c).abs() < 1e-15);
        assert!((c - 0.4723).abs() < 1e-4);
        assert_eq!((c * 100.0).round() / 100.0, 0.47);
        let full = G * RB87 * EARTH_MASS / (HBAR * EARTH_RADIUS.powi(3));
        assert!(rel(coeff / full, c) < 1e-14);
    }

    #[test]
    fn ball_numeric_above_bound() {
        let quad = BallQuadrature {
            samples: 200_000,
            rel_tol: 0.02,
            ..Default::default()
        };
        let est = ball_rate_numeric(RB87, EARTH_MASS, EARTH_RADIUS, 0.0, &quad).unwrap();
        let (_, bound) = ball_rate_bound(RB87, EARTH_MASS, EARTH_RADIUS).unwrap();
        assert!(est.value + est.half_width >= bound);
        assert!(est.value > bound);
    }

    #[test]
    fn ball_far_field_decay() {
        let quad = BallQuadrature {
            samples: 100_000,
            rel_tol: 0.05,
            ..Default::default()
        };
        let surface = ball_rate_numeric(1.0, 1.0, 1.0, 0.0, &quad).unwrap().value;
        let far = ball_rate_numeric(1.0, 1.0, 1.0, 10.0, &quad).unwrap().value;
        assert!(far < 0.01 * surface, "{far} vs {surface}");
        // far away the ball acts like its centre of mass on axis
        let point = G * 1.0 * 1.0 / (HBAR * 11f64.powi(3));
        assert!(rel(far, point) < 0.05, "{far} vs {point}");
    }

    #[test]
    fn ball_seeds_agree() {
        let mk = |seed| BallQuadrature {
            samples: 50_000,
            seed,
            rel_tol: 0.05,
            ..Default::default()
        };
        let a = ball_rate_numeric(1.0, 1.0, 1.0, 0.2, &mk(1)).unwrap();
        let b = ball_rate_numeric(1.0, 1.0, 1.0, 0.2, &mk(2)).unwrap();
        assert!((a.value - b.value).abs() <= a.half_width + b.half_width);
        assert_ne!(a.value, b.value);
    }

    #[test]
    fn ball_insufficient_samples() {
        let quad = BallQuadrature {
            samples: 100,
            ..Default::default()
        };
        match ball_rate_numeric(1.0, 1.0, 1.0, 0.0, &quad) {
            Err(Error::Precision { half_width, samples, .. }) => {
                assert_eq!(samples, 100);
                assert!(half_width > 0.0);
            }
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn ball_matches_plain_volume_sampling() {
        // Independent route: uniform points in the ball, |K| averaged directly.
        let (m, big_m, r, standoff) = (1.0, 1.0, 1.0, 0.3);
        let quad = BallQuadrature {
            samples: 400_000,
            rel_tol: 0.01,
            ..Default::default()
        };
        let est = ball_rate_numeric(m, big_m, r, standoff, &quad).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let p = [0.0, 0.0, r + standoff];
        let (mut sum, mut sum2, mut n) = (0.0, 0.0, 0usize);
        while n < 400_000 {
            let q: Vec3 = [
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
            ];
            if dot(&q, &q) > 1.0 {
                continue;
            }
            let s = sub(&q, &p);
            let dpar = s[2];
            let dperp = (s[0] * s[0] + s[1] * s[1]).sqrt();
            let k = pairwise_gradient_3d(m, big_m, dpar, dperp).unwrap().abs() / (2.0 * HBAR);
            sum += k;
            sum2 += k * k;
            n += 1;
        }
        let mean = sum / n as f64;
        let hw = Z99 * ((sum2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - est.value).abs() < hw + est.half_width, "{mean} {hw} {est:?}");
    }

    #[test]
    fn shell_examples() {
        let shell = MassDistribution::shell(100.0, 1.0, [0.0; 3], 200).unwrap();
        let base = shell_rate(RB87, &shell, 0.0, &Z).unwrap();
        assert!(base > 0.0 && base.is_finite());
        let big = MassDistribution::shell(100.0, 10.0, [0.0; 3], 200).unwrap();
        let scaled = shell_rate(RB87, &big, 0.0, &Z).unwrap();
        assert!(rel(base / scaled, 1e3) < 1e-9, "{}", base / scaled);
        // naive centre-of-mass model diverges as the offset shrinks
        let naive = |off: f64| {
            cm_point_coefficient(RB87, &[0.0, 0.0, off], core::slice::from_ref(&shell), 1.0).unwrap()
        };
        assert!(naive(1e-3) > 1e6 * base);
        assert!(shell_rate(RB87, &shell, 1e-3, &Z).unwrap() < 2.0 * base);
        assert!(shell_rate(RB87, &shell, 1.0, &Z).is_err());
    }

    #[test]
    fn shell_antipodal_symmetry() {
        let pts = shell_constituents(10.0, 2.0, [0.0; 3], 50);
        let probe = Constituent::new(1.0, [0.0; 3]).unwrap();
        for pair in pts.chunks(2) {
            let a = gradient_between(&probe, &pair[0], &Z).unwrap();
            let b = gradient_between(&probe, &pair[1], &Z).unwrap();
            assert!(rel(a, b) < 1e-12 || (a - b).abs() < 1e-30);
        }
        let total: f64 = pts.iter().map(|c| c.mass).sum();
        assert!(rel(total, 10.0) < 1e-14);
    }

    #[test]
    fn rigid_body_brute_force() {
        // Exhaustive pair enumeration over the combined set: pairs inside s₁
        // enter twice (2Σ_{i<j}), cross pairs once, pairs inside s₂ not at all.
        let s1_pts = vec![
            Constituent::new(1.0, [0.0, 0.0, 0.0]).unwrap(),
            Constituent::new(2.0, [0.1, 0.0, 0.05]).unwrap(),
            Constituent::new(1.5, [0.0, -0.08, 0.02]).unwrap(),
        ];
        let s2_pts = vec![
            Constituent::new(30.0, [1.0, 0.2, -0.5]).unwrap(),
            Constituent::new(20.0, [-0.7, 0.9, 0.1]).unwrap(),
            Constituent::new(25.0, [0.3, -1.1, 1.4]).unwrap(),
        ];
        let e = [0.6, 0.0, 0.8];
        let all: Vec<(usize, Constituent)> = s1_pts
            .iter()
            .map(|c| (1, *c))
            .chain(s2_pts.iter().map(|c| (2, *c)))
            .collect();
        let mut brute = 0.0;
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                let (bi, ci) = all[i];
                let (bj, cj) = all[j];
                let s = sub(&cj.position, &ci.position);
                let d = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
                let par = s[0] * e[0] + s[1] * e[1] + s[2] * e[2];
                let k = (2.0 * G * ci.mass * cj.mass * (par * par - 0.5 * (d * d - par * par)) / d.powi(5)).abs();
                let gamma = k / (2.0 * HBAR);
                brute += match (bi, bj) {
                    (1, 1) => 2.0 * gamma,
                    (2, 2) => 0.0,
                    _ => gamma,
                };
            }
        }
        let axis = SuperpositionAxis::new(e, 1.0).unwrap();
        let got = d_min(
            &MassDistribution::PointSet(s1_pts),
            &MassDistribution::PointSourceList(s2_pts),
            &axis,
        )
        .unwrap();
        assert!(rel(got, brute) < 1e-12, "{got} {brute}");
    }

    fn arb_source() -> impl Strategy<Value = Constituent> {
        (1.0f64..100.0, -5.0f64..5.0, -5.0f64..5.0, 1.0f64..5.0)
            .prop_map(|(m, x, y, z)| Constituent { mass: m, position: [x, y, z] })
    }

    proptest! {
        #[test]
        fn additivity_over_disjoint_sources(a in prop::collection::vec(arb_source(), 1..6),
                                            b in prop::collection::vec(arb_source(), 1..6)) {
            let axis = SuperpositionAxis::new(Z, 1.0).unwrap();
            let atom = atom_at_origin();
            let da = d_min(&atom, &MassDistribution::PointSourceList(a.clone()), &axis).unwrap();
            let db = d_min(&atom, &MassDistribution::PointSourceList(b.clone()), &axis).unwrap();
            let mut union = a;
            union.extend(b);
            let du = d_min(&atom, &MassDistribution::PointSourceList(union), &axis).unwrap();
            prop_assert!(rel(du, da + db) < 1e-12);
            prop_assert!(du >= da && du >= db);
        }

        #[test]
        fn rotation_about_axis(par in -3.0f64..3.0, perp in 0.1f64..3.0, theta in 0.0f64..core::f64::consts::TAU) {
            let probe = Constituent { mass: 1.0, position: [0.0; 3] };
            let base = Constituent { mass: 2.0, position: [perp, 0.0, par] };
            let rotated = Constituent { mass: 2.0, position: [perp * theta.cos(), perp * theta.sin(), par] };
            let a = gradient_between(&probe, &base, &Z).unwrap();
            let b = gradient_between(&probe, &rotated, &Z).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-30));
        }
    }
}

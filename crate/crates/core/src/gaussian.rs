//! Two-mode Gaussian dynamics under the pairwise channel generator.
//!
//! Ordering is `(x₁, p₁, x₂, p₂)`; `cov` holds symmetrised second moments
//! `½⟨{Δvᵢ, Δvⱼ}⟩`. The generator `-(i/ħ)[H, ρ] - D_c Σᵢ [xᵢ, [xᵢ, ρ]]`
//! with `H` quadratic gives
//!
//! ```text
//! d⟨v⟩/dt = A ⟨v⟩
//! dσ/dt   = A σ + σ Aᵀ + Dm,   Dm = diag(0, 2ħ²D_c, 0, 2ħ²D_c)
//! ```
//!
//! States carry the value of ħ in the units their moments are expressed in,
//! so the same code runs in SI and in rescaled units with ħ = 1.

use alloc::vec::Vec;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::math::{abs, cosh_sinh, log2, pow, sqrt};

pub type Mat4 = [[f64; 4]; 4];
pub type Mat2 = [[f64; 2]; 2];

const SYMMETRY_TOL: f64 = 1e-12;
const UNCERTAINTY_TOL: f64 = 1e-10;
const MAX_STEPS: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub means: [f64; 4],
    pub cov: Mat4,
    pub hbar: f64,
}

impl GaussianState {
    pub fn new(means: [f64; 4], cov: Mat4, hbar: f64) -> Result<Self> {
        let s = Self { means, cov, hbar };
        s.validate()?;
        Ok(s)
    }

    /// Product of two single-mode covariance blocks with zero means.
    pub fn product(a: Mat2, b: Mat2, hbar: f64) -> Result<Self> {
        let mut cov = [[0.0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                cov[i][j] = a[i][j];
                cov[i + 2][j + 2] = b[i][j];
            }
        }
        Self::new([0.0; 4], cov, hbar)
    }

    pub fn vacuum(hbar: f64) -> Self {
        let h = 0.5 * hbar;
        Self {
            means: [0.0; 4],
            cov: diag4([h, h, h, h]),
            hbar,
        }
    }

    /// Two-mode squeezed vacuum with squeezing parameter `r`.
    pub fn two_mode_squeezed(r: f64, hbar: f64) -> Self {
        let (ch, sh) = cosh_sinh(2.0 * r);
        let h = 0.5 * hbar;
        let mut cov = diag4([h * ch; 4]);
        cov[0][2] = h * sh;
        cov[2][0] = h * sh;
        cov[1][3] = -h * sh;
        cov[3][1] = -h * sh;
        Self {
            means: [0.0; 4],
            cov,
            hbar,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("hbar", self.hbar)?;
        let scale = self.cov.iter().flatten().fold(0.0f64, |m, v| m.max(abs(*v)));
        for i in 0..4 {
            for j in 0..i {
                if abs(self.cov[i][j] - self.cov[j][i]) > SYMMETRY_TOL * scale {
                    return Err(Error::Invalid {
                        field: "cov",
                        reason: "covariance matrix is not symmetric",
                    });
                }
            }
        }
        if !positive_definite(&self.cov) {
            return Err(Error::Invalid {
                field: "cov",
                reason: "covariance matrix is not positive definite",
            });
        }
        let (nu_minus, _) = symplectic_eigenvalues(&self.cov);
        if nu_minus < 0.5 * self.hbar * (1.0 - UNCERTAINTY_TOL) {
            return Err(Error::Invalid {
                field: "cov",
                reason: "covariance violates the uncertainty principle",
            });
        }
        Ok(())
    }

    /// Applies `v → S v` (and `σ → S σ Sᵀ`).
    pub fn transformed(&self, s: &Mat4) -> Self {
        Self {
            means: mat_vec(s, &self.means),
            cov: mat_mul(&mat_mul(s, &self.cov), &transpose(s)),
            hbar: self.hbar,
        }
    }

    /// Swaps the two modes.
    pub fn swapped(&self) -> Self {
        let mut p = [[0.0; 4]; 4];
        p[0][2] = 1.0;
        p[1][3] = 1.0;
        p[2][0] = 1.0;
        p[3][1] = 1.0;
        self.transformed(&p)
    }

    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        symplectic_eigenvalues(&self.cov)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hamiltonian {
    Free,
    /// Local harmonic traps with angular frequencies ω₁, ω₂.
    Harmonic { omega1: f64, omega2: f64 },
}

/// Parameters of the two-particle generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsSpec {
    pub m1: f64,
    pub m2: f64,
    pub hamiltonian: Hamiltonian,
    /// Bilinear coupling `K x₁ x₂`.
    pub coupling: f64,
    /// Position-dephasing coefficient per particle.
    pub dephasing: f64,
    pub hbar: f64,
}

impl DynamicsSpec {
    /// Free particles with `ħ = m₁ = m₂ = 1`.
    pub fn rescaled(coupling: f64, dephasing: f64) -> Self {
        Self {
            m1: 1.0,
            m2: 1.0,
            hamiltonian: Hamiltonian::Free,
            coupling,
            dephasing,
            hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("m1", self.m1)?;
        require_positive("m2", self.m2)?;
        require_non_negative("dephasing", self.dephasing)?;
        require_positive("hbar", self.hbar)?;
        if !self.coupling.is_finite() {
            return Err(Error::Invalid {
                field: "coupling",
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Dephasing at the minimal level `K/2ħ` allowed for a classical channel.
    pub fn minimal_dephasing(&self) -> f64 {
        abs(self.coupling) / (2.0 * self.hbar)
    }

    pub fn with_dephasing(mut self, dephasing: f64) -> Self {
        self.dephasing = dephasing;
        self
    }
}

/// Drift and diffusion matrices of the moment equations.
pub fn drift_diffusion(spec: &DynamicsSpec) -> Result<(Mat4, Mat4)> {
    spec.validate()?;
    let (w1, w2) = match spec.hamiltonian {
        Hamiltonian::Free => (0.0, 0.0),
        Hamiltonian::Harmonic { omega1, omega2 } => (omega1, omega2),
    };
    let k = spec.coupling;
    let a = [
        [0.0, 1.0 / spec.m1, 0.0, 0.0],
        [-spec.m1 * w1 * w1, 0.0, -k, 0.0],
        [0.0, 0.0, 0.0, 1.0 / spec.m2],
        [-k, 0.0, -spec.m2 * w2 * w2, 0.0],
    ];
    let p_diff = 2.0 * spec.hbar * spec.hbar * spec.dephasing;
    let dm = diag4([0.0, p_diff, 0.0, p_diff]);
    Ok((a, dm))
}

/// Flattened ODE state: four means followed by the 16 covariance entries.
type Flat = [f64; 20];

fn flatten(s: &GaussianState) -> Flat {
    let mut y = [0.0; 20];
    y[..4].copy_from_slice(&s.means);
    for i in 0..4 {
        y[4 + 4 * i..8 + 4 * i].copy_from_slice(&s.cov[i]);
    }
    y
}

fn unflatten(y: &Flat, hbar: f64) -> GaussianState {
    let mut means = [0.0; 4];
    means.copy_from_slice(&y[..4]);
    let mut cov = [[0.0; 4]; 4];
    for i in 0..4 {
        cov[i].copy_from_slice(&y[4 + 4 * i..8 + 4 * i]);
    }
    // keep exact symmetry
    for i in 0..4 {
        for j in 0..i {
            let m = 0.5 * (cov[i][j] + cov[j][i]);
            cov[i][j] = m;
            cov[j][i] = m;
        }
    }
    GaussianState { means, cov, hbar }
}

fn rhs(a: &Mat4, dm: &Mat4, y: &Flat) -> Flat {
    let mut out = [0.0; 20];
    for i in 0..4 {
        out[i] = (0..4).map(|k| a[i][k] * y[k]).sum();
    }
    let s = |i: usize, j: usize| y[4 + 4 * i + j];
    for i in 0..4 {
        for j in 0..4 {
            let mut v = dm[i][j];
            for k in 0..4 {
                v += a[i][k] * s(k, j) + s(i, k) * a[j][k];
            }
            out[4 + 4 * i + j] = v;
        }
    }
    out
}

fn rk4_step(a: &Mat4, dm: &Mat4, y: &Flat, h: f64) -> Flat {
    let axpy = |y: &Flat, k: &Flat, c: f64| {
        let mut o = *y;
        for (oi, ki) in o.iter_mut().zip(k.iter()) {
            *oi += c * ki;
        }
        o
    };
    let k1 = rhs(a, dm, y);
    let k2 = rhs(a, dm, &axpy(y, &k1, 0.5 * h));
    let k3 = rhs(a, dm, &axpy(y, &k2, 0.5 * h));
    let k4 = rhs(a, dm, &axpy(y, &k3, h));
    let mut out = *y;
    for i in 0..20 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Natural magnitude of each component: `√(σᵢᵢσⱼⱼ)` for covariance entries,
/// `max(|⟨vᵢ⟩|, √σᵢᵢ)` for means.
fn component_scales(y: &Flat, z: &Flat) -> Flat {
    let mut diag = [0.0; 4];
    for (i, d) in diag.iter_mut().enumerate() {
        let k = 4 + 5 * i;
        *d = abs(y[k]).max(abs(z[k]));
    }
    let mut sc = [0.0; 20];
    for i in 0..4 {
        sc[i] = abs(y[i]).max(abs(z[i])).max(sqrt(diag[i]));
        for j in 0..4 {
            sc[4 + 4 * i + j] = sqrt(diag[i] * diag[j]);
        }
    }
    sc
}

/// Integrates the moment equations to time `t` with adaptive RK4 (step
/// doubling). `tol` bounds the local error of every entry relative to its
/// natural scale.
pub fn evolve(state: &GaussianState, spec: &DynamicsSpec, t: f64, tol: f64) -> Result<GaussianState> {
    require_non_negative("t", t)?;
    require_positive("tol", tol)?;
    state.validate()?;
    if abs(state.hbar - spec.hbar) > 1e-12 * spec.hbar {
        return Err(Error::Invalid {
            field: "hbar",
            reason: "state and dynamics use different units",
        });
    }
    if t == 0.0 {
        return Ok(*state);
    }
    let (a, dm) = drift_diffusion(spec)?;
    let mut y = flatten(state);
    let mut now = 0.0;
    let mut h = t;
    let mut steps = 0usize;
    while now < t {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Integration {
                time: now,
                reason: "step budget exhausted",
            });
        }
        if now + h > t {
            h = t - now;
        }
        let full = rk4_step(&a, &dm, &y, h);
        let half = rk4_step(&a, &dm, &y, 0.5 * h);
        let two_halves = rk4_step(&a, &dm, &half, 0.5 * h);
        let scales = component_scales(&y, &two_halves);
        let mut err = 0.0f64;
        for i in 0..20 {
            if scales[i] > 0.0 {
                err = err.max(abs(two_halves[i] - full[i]) / 15.0 / scales[i]);
            }
        }
        if err <= tol || h <= t * 1e-14 {
            for i in 0..20 {
                y[i] = two_halves[i] + (two_halves[i] - full[i]) / 15.0;
            }
            now += h;
            let grow = if err == 0.0 { 4.0 } else { (0.9 * pow(tol / err, 0.2)).min(4.0) };
            h *= grow;
        } else {
            h *= (0.9 * pow(tol / err, 0.2)).max(0.1);
        }
    }
    let out = unflatten(&y, state.hbar);
    out.validate().map_err(|_| Error::Integration {
        time: t,
        reason: "evolved state violates the uncertainty principle",
    })?;
    Ok(out)
}

/// Symplectic eigenvalues `(ν₋, ν₊)` of a two-mode covariance matrix.
///
/// Computed as the singular values of `σ^½ Ω σ^½` with symmetric Jacobi
/// sweeps, which stays accurate when the two values coincide (pure states,
/// symmetric modes) where the closed-form discriminant loses half the digits.
pub fn symplectic_eigenvalues(cov: &Mat4) -> (f64, f64) {
    let (w, v) = jacobi_eigen(cov);
    let mut root = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            root[i][j] = (0..4).map(|k| v[i][k] * sqrt(w[k].max(0.0)) * v[j][k]).sum();
        }
    }
    let omega = [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ];
    let a = mat_mul(&mat_mul(&root, &omega), &root);
    let ata = mat_mul(&transpose(&a), &a);
    let (ev, _) = jacobi_eigen(&ata);
    let lo = ev.iter().fold(f64::INFINITY, |m, x| m.min(*x));
    let hi = ev.iter().fold(0.0f64, |m, x| m.max(*x));
    (sqrt(lo.max(0.0)), sqrt(hi))
}

/// Smallest symplectic eigenvalue of the partial transpose (p₂ → −p₂).
pub fn partial_transpose_min_eigenvalue(cov: &Mat4) -> f64 {
    let mut t = *cov;
    for i in 0..3 {
        t[i][3] = -t[i][3];
        t[3][i] = -t[3][i];
    }
    symplectic_eigenvalues(&t).0
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix; eigenvectors are
/// the columns of the returned matrix.
fn jacobi_eigen(m: &Mat4) -> ([f64; 4], Mat4) {
    let mut a = *m;
    let mut v = diag4([1.0; 4]);
    for _ in 0..50 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: f64 = (0..4).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-34 * diag || off == 0.0 {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (abs(theta) + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..4 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..4 {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2], a[3][3]], v)
}

/// Logarithmic negativity in bits, `max(0, −log₂(2ν̃₋/ħ))`.
pub fn log_negativity(state: &GaussianState) -> Result<f64> {
    state.validate().map_err(|_| Error::Domain {
        name: "cov",
        value: det4(&state.cov),
        reason: "not a physical covariance matrix",
    })?;
    let nu = partial_transpose_min_eigenvalue(&state.cov);
    Ok((-log2(2.0 * nu / state.hbar)).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub dephasing: f64,
    pub max_log_negativity: f64,
}

/// Number of equally spaced checkpoints at which the negativity is sampled.
pub const SCAN_CHECKPOINTS: usize = 200;
const SCAN_TOL: f64 = 1e-10;

/// Maximum of `E_N` over `[0, horizon]` for each dephasing value.
pub fn entanglement_threshold_scan(
    spec_base: &DynamicsSpec,
    dephasing_values: &[f64],
    horizon: f64,
    initial: &GaussianState,
) -> Result<Vec<ScanRow>> {
    require_positive("horizon", horizon)?;
    if log_negativity(initial)? > 0.0 {
        return Err(Error::Invalid {
            field: "initial",
            reason: "initial state must be separable",
        });
    }
    dephasing_values
        .iter()
        .map(|&dc| {
            let spec = spec_base.with_dephasing(dc);
            let max = max_negativity(initial, &spec, horizon, SCAN_CHECKPOINTS)?;
            Ok(ScanRow {
                dephasing: dc,
                max_log_negativity: max,
            })
        })
        .collect()
}

/// `max E_N(t)` sampled at `checkpoints` equally spaced times in `(0, horizon]`.
pub fn max_negativity(
    initial: &GaussianState,
    spec: &DynamicsSpec,
    horizon: f64,
    checkpoints: usize,
) -> Result<f64> {
    let path = trajectory(initial, spec, horizon, checkpoints)?;
    path.iter()
        .try_fold(0.0f64, |m, s| Ok(m.max(log_negativity(s)?)))
}

/// States at `checkpoints + 1` equally spaced times from 0 to `horizon`.
pub fn trajectory(
    initial: &GaussianState,
    spec: &DynamicsSpec,
    horizon: f64,
    checkpoints: usize,
) -> Result<Vec<GaussianState>> {
    let n = checkpoints.max(1);
    let dt = horizon / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    out.push(*initial);
    let mut s = *initial;
    for _ in 0..n {
        s = evolve(&s, spec, dt, SCAN_TOL)?;
        out.push(s);
    }
    Ok(out)
}

// -- small dense helpers ----------------------------------------------------

pub fn diag4(d: [f64; 4]) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        m[i][i] = d[i];
    }
    m
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut t = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = a[j][i];
        }
    }
    t
}

fn mat_vec(a: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    let mut o = [0.0; 4];
    for i in 0..4 {
        o[i] = (0..4).map(|k| a[i][k] * v[k]).sum();
    }
    o
}

#[cfg(test)]
fn det2(b: Mat2) -> f64 {
    b[0][0] * b[1][1] - b[0][1] * b[1][0]
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det4(m: &Mat4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| abs(a[i][col]).total_cmp(&abs(a[j][col])))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// Cholesky test for positive definiteness.
fn positive_definite(m: &Mat4) -> bool {
    let mut l = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i][i] = sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

/// Single-mode symplectic map: squeeze by `r` then rotate by `theta`.
pub fn local_symplectic(r: f64, theta: f64) -> Mat2 {
    let (e_minus, e_plus) = (libm::exp(-r), libm::exp(r));
    let (c, s) = (libm::cos(theta), libm::sin(theta));
    [[c * e_minus, -s * e_plus], [s * e_minus, c * e_plus]]
}

/// Block-diagonal embedding `S₁ ⊕ S₂`.
pub fn direct_sum(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][j];
            m[i + 2][j + 2] = b[i][j];
        }
    }
    m
}

/// Random separable state: independently squeezed, rotated thermal modes plus
/// a classically correlated positive term `c·wwᵀ`.
pub fn sample_separable<R: rand::Rng + ?Sized>(rng: &mut R, hbar: f64) -> GaussianState {
    let mode = |rng: &mut R| {
        let nu = 0.5 * hbar * (1.0 + 2.0 * rng.random::<f64>());
        let s = local_symplectic(rng.random_range(-1.0..1.0), rng.random_range(0.0..core::f64::consts::PI));
        let mut b = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                b[i][j] = nu * (s[i][0] * s[j][0] + s[i][1] * s[j][1]);
            }
        }
        b
    };
    let a = mode(rng);
    let b = mode(rng);
    let mut cov = direct_sum(&a, &b);
    let w: [f64; 4] = core::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let c = 0.5 * hbar * rng.random::<f64>();
    for i in 0..4 {
        for j in 0..4 {
            cov[i][j] += c * w[i] * w[j];
        }
    }
    GaussianState {
        means: [0.0; 4],
        cov,
        hbar,
    }
}

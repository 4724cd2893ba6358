//! Large-momentum-transfer fountain interferometers: the triangular
//! separation profile, the visibility left after position-basis dephasing,
//! the Fig.-1-style comparison rows and a two-interferometer gradiometer.

use alloc::string::String;
use alloc::vec::Vec;

use crate::composite::{pairwise_gradient_3d, BALL_GEOMETRIC_FACTOR};
use crate::constants::{EARTH_MASS, EARTH_RADIUS, G, HBAR};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::math::{abs, cube, exp, gauss_legendre, sqrt};

/// Rubidium-87 mass used by both fountain experiments (kg).
pub const RB87_MASS: f64 = 1.4e-25;
/// Single-photon recoil velocity ħk/m of the fountain lasers (m/s).
pub const RB87_RECOIL: f64 = 5.8e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LMTSequence {
    /// Pulses per beam splitter; the arms differ in momentum by `2Nħk`.
    pub n: u32,
    /// Laser wave number (m⁻¹).
    pub k: f64,
    /// Half-sequence duration T (s).
    pub t_half: f64,
    pub m: f64,
}

impl LMTSequence {
    pub fn new(n: u32, k: f64, t_half: f64, m: f64) -> Result<Self> {
        let s = Self { n, k, t_half, m };
        s.validate()?;
        Ok(s)
    }

    /// Builds the sequence from the recoil velocity `ħk/m` instead of `k`.
    pub fn from_recoil(n: u32, recoil: f64, t_half: f64, m: f64) -> Result<Self> {
        require_positive("recoil_velocity", recoil)?;
        require_positive("m", m)?;
        Self::new(n, recoil * m / HBAR, t_half, m)
    }

    /// Both `k` and the recoil velocity given: they must agree to 1e-9.
    pub fn with_recoil(n: u32, k: f64, recoil: f64, t_half: f64, m: f64) -> Result<Self> {
        let s = Self::new(n, k, t_half, m)?;
        if abs(s.recoil_velocity() - recoil) > 1e-9 * recoil {
            return Err(Error::Invalid {
                field: "recoil_velocity",
                reason: "inconsistent with k and m",
            });
        }
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid {
                field: "n",
                reason: "LMT order must be at least 1",
            });
        }
        require_positive("k", self.k)?;
        require_positive("t_half", self.t_half)?;
        require_positive("m", self.m)?;
        Ok(())
    }

    pub fn recoil_velocity(&self) -> f64 {
        HBAR * self.k / self.m
    }

    /// Relative velocity of the two arms, `2Nħk/m`.
    pub fn arm_velocity(&self) -> f64 {
        2.0 * self.n as f64 * self.recoil_velocity()
    }

    pub fn peak_separation(&self) -> f64 {
        self.arm_velocity() * self.t_half
    }

    pub fn with_order(mut self, n: u32) -> Self {
        self.n = n;
        self
    }
}

/// Arm separation at time `t ∈ [0, 2T]`.
pub fn separation_profile(seq: &LMTSequence, t: f64) -> Result<f64> {
    seq.validate()?;
    let tt = seq.t_half;
    if !(0.0..=2.0 * tt).contains(&t) {
        return Err(Error::Domain {
            name: "t",
            value: t,
            reason: "outside the interferometer sequence [0, 2T]",
        });
    }
    let v = seq.arm_velocity();
    Ok(if t <= tt { v * t } else { v * (2.0 * tt - t) })
}

/// Eq.-7 visibility bound for a source ball of mass `M`, radius `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityPrediction {
    pub c_factor: f64,
    pub v_max: f64,
    pub exponent: f64,
}

/// `V = exp(−(2/3) C (GħM/(mR³)) (2Nk)² T³)`.
pub fn visibility_max(seq: &LMTSequence, c_factor: f64, source_mass: f64, radius: f64) -> Result<VisibilityPrediction> {
    seq.validate()?;
    require_non_negative("c_factor", c_factor)?;
    require_positive("M", source_mass)?;
    require_positive("R", radius)?;
    let nk = 2.0 * seq.n as f64 * seq.k;
    let exponent = 2.0 / 3.0 * c_factor * (G * HBAR * source_mass / (seq.m * cube(radius))) * nk * nk * cube(seq.t_half);
    Ok(VisibilityPrediction {
        c_factor,
        v_max: exp(-exponent),
        exponent,
    })
}

/// `∫₀^{2T} Δx(t)² dt` by Gauss–Legendre on each linear leg.
pub fn separation_squared_integral(seq: &LMTSequence) -> Result<f64> {
    seq.validate()?;
    let tt = seq.t_half;
    let f = |t: f64| {
        let dx = separation_profile(seq, t).unwrap_or(0.0);
        dx * dx
    };
    Ok(gauss_legendre(f, 0.0, tt, 4) + gauss_legendre(f, tt, 2.0 * tt, 4))
}

/// `V(2T)/V(0) = exp(−coefficient · ∫Δx² dt)` for a constant dephasing
/// coefficient (m⁻²·s⁻¹).
pub fn visibility_numeric(seq: &LMTSequence, rate_coefficient: f64) -> Result<f64> {
    require_non_negative("rate_coefficient", rate_coefficient)?;
    let integral = separation_squared_integral(seq)?;
    Ok(exp(-rate_coefficient * integral))
}

/// Visibility of a static superposition `Δx` held for time `t`.
pub fn static_visibility(rate_coefficient: f64, dx: f64, t: f64) -> Result<f64> {
    require_non_negative("rate_coefficient", rate_coefficient)?;
    require_non_negative("dx", dx)?;
    require_non_negative("t", t)?;
    Ok(exp(-rate_coefficient * dx * dx * t))
}

/// Fountain parameters of one experiment in the comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct FountainExperiment {
    pub id: String,
    pub t_half: f64,
    pub recoil: f64,
    pub m: f64,
    pub max_order: u32,
    pub source_mass: f64,
    pub source_radius: f64,
}

impl FountainExperiment {
    /// 10 m fountain, T = 1.04 s, 54 cm peak separation.
    pub fn kovachy() -> Self {
        Self {
            id: "kovachy".into(),
            t_half: 1.04,
            recoil: RB87_RECOIL,
            m: RB87_MASS,
            max_order: order_for_peak(0.54, RB87_RECOIL, 1.04),
            source_mass: EARTH_MASS,
            source_radius: EARTH_RADIUS,
        }
    }

    /// T = 1.15 s, 8.2 cm peak separation.
    pub fn sugarbaker() -> Self {
        Self {
            id: "sugarbaker".into(),
            t_half: 1.15,
            recoil: RB87_RECOIL,
            m: RB87_MASS,
            max_order: order_for_peak(0.082, RB87_RECOIL, 1.15),
            source_mass: EARTH_MASS,
            source_radius: EARTH_RADIUS,
        }
    }

    pub fn sequence(&self, n: u32) -> Result<LMTSequence> {
        LMTSequence::from_recoil(n, self.recoil, self.t_half, self.m)
    }

    pub fn orders(&self) -> Vec<u32> {
        (1..=self.max_order).collect()
    }
}

/// LMT order `N` whose peak separation `2N v_r T` is closest to `peak`,
/// with `2N` rounded to the nearest even integer.
pub fn order_for_peak(peak: f64, recoil: f64, t_half: f64) -> u32 {
    let two_n = peak / (recoil * t_half);
    let n = libm::round(two_n / 2.0);
    if n < 1.0 {
        1
    } else {
        n as u32
    }
}

/// One measured visibility, keyed by experiment and LMT order.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredPoint {
    pub experiment: String,
    pub order: u32,
    pub visibility: f64,
    pub error: f64,
}

impl MeasuredPoint {
    pub fn validate(&self) -> Result<()> {
        if !(self.visibility > 0.0 && self.visibility <= 1.0) {
            return Err(Error::Domain {
                name: "visibility",
                value: self.visibility,
                reason: "must lie in (0, 1]",
            });
        }
        require_non_negative("error", self.error)?;
        if self.order == 0 {
            return Err(Error::Invalid {
                field: "order",
                reason: "LMT order must be at least 1",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Row {
    pub experiment: String,
    pub order: u32,
    pub c_factor: f64,
    pub log10_v_pred: f64,
    pub log10_v_meas: Option<f64>,
}

impl Fig1Row {
    /// `V_measured / V_predicted`, if a measurement exists.
    pub fn ratio(&self) -> Option<f64> {
        self.log10_v_meas.map(|m| libm::pow(10.0, m - self.log10_v_pred))
    }
}

/// One row per (order, C), orders outermost.
pub fn fig1_dataset(
    exp: &FountainExperiment,
    c_values: &[f64],
    orders: &[u32],
    measured: Option<&[MeasuredPoint]>,
) -> Result<Vec<Fig1Row>> {
    if let Some(pts) = measured {
        for p in pts {
            p.validate()?;
        }
    }
    let mut rows = Vec::with_capacity(c_values.len() * orders.len());
    for &n in orders {
        let seq = exp.sequence(n)?;
        let meas = measured.and_then(|pts| {
            pts.iter()
                .find(|p| p.experiment == exp.id && p.order == n)
                .map(|p| libm::log10(p.visibility))
        });
        for &c in c_values {
            let pred = visibility_max(&seq, c, exp.source_mass, exp.source_radius)?;
            rows.push(Fig1Row {
                experiment: exp.id.clone(),
                order: n,
                c_factor: c,
                // exponent / ln 10 stays finite where v_max underflows
                log10_v_pred: -pred.exponent / core::f64::consts::LN_10,
                log10_v_meas: meas,
            });
        }
    }
    Ok(rows)
}

/// How the point source's gradient along the vertical superposition axis is
/// evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMode {
    /// Full 3-D projection `2GmM(d∥² − ½d⊥²)/d⁵`.
    ThreeD,
    /// Distance-only `2GmM/d³`, as if the source sat on the axis.
    OnAxis,
}

/// Two fountains stacked a distance `separation` apart; the source mass sits
/// level with the lower one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradiometerConfig {
    pub source_mass: f64,
    pub separation: f64,
    pub lmt_order: u32,
    pub t_half: f64,
    pub recoil: f64,
    pub m: f64,
    /// Geometric factor applied to the Earth term.
    pub c_factor: f64,
    pub earth_mass: f64,
    pub earth_radius: f64,
    pub mode: GradientMode,
}

impl Default for GradiometerConfig {
    fn default() -> Self {
        Self {
            source_mass: 252.0,
            separation: 1.0,
            lmt_order: 5,
            t_half: 0.5,
            recoil: RB87_RECOIL,
            m: RB87_MASS,
            c_factor: BALL_GEOMETRIC_FACTOR,
            earth_mass: EARTH_MASS,
            earth_radius: EARTH_RADIUS,
            mode: GradientMode::ThreeD,
        }
    }
}

/// Contrast of the (lower, upper) interferometers with the source at
/// horizontal distance `d_h`.
pub fn gradiometer_contrast(cfg: &GradiometerConfig, d_h: f64) -> Result<(f64, f64)> {
    require_positive("d_h", d_h)?;
    require_non_negative("separation", cfg.separation)?;
    require_positive("source_mass", cfg.source_mass)?;
    let seq = LMTSequence::from_recoil(cfg.lmt_order, cfg.recoil, cfg.t_half, cfg.m)?;
    let earth = cfg.c_factor * G * cfg.m * cfg.earth_mass / (HBAR * cube(cfg.earth_radius));
    let source = |vertical: f64| -> Result<f64> {
        let k = match cfg.mode {
            GradientMode::ThreeD => pairwise_gradient_3d(cfg.m, cfg.source_mass, vertical, d_h)?,
            GradientMode::OnAxis => {
                let d = sqrt(vertical * vertical + d_h * d_h);
                2.0 * G * cfg.m * cfg.source_mass / cube(d)
            }
        };
        Ok(abs(k) / (2.0 * HBAR))
    };
    let lower = visibility_numeric(&seq, earth + source(0.0)?)?;
    let upper = visibility_numeric(&seq, earth + source(cfg.separation)?)?;
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kovachy_seq() -> LMTSequence {
        FountainExperiment::kovachy().sequence(45).unwrap()
    }

    #[test]
    fn profile_endpoints_and_peak() {
        let s = kovachy_seq();
        assert_eq!(separation_profile(&s, 0.0).unwrap(), 0.0);
        assert!(separation_profile(&s, 2.0 * s.t_half).unwrap().abs() < 1e-15);
        let peak = separation_profile(&s, s.t_half).unwrap();
        assert!((peak - 0.54).abs() < 0.01, "{peak}");
        assert!(separation_profile(&s, -0.1).is_err());
        assert!(separation_profile(&s, 2.0 * s.t_half + 1e-9).is_err());
    }

    #[test]
    fn back_computed_orders() {
        assert_eq!(FountainExperiment::kovachy().max_order, 45);
        assert_eq!(FountainExperiment::sugarbaker().max_order, 6);
    }

    #[test]
    fn recoil_round_trip() {
        let s = LMTSequence::from_recoil(3, 5.8e-3, 1.0, RB87_MASS).unwrap();
        assert!((s.recoil_velocity() - 5.8e-3).abs() < 1e-15);
        assert!(LMTSequence::with_recoil(3, s.k, 5.8e-3, 1.0, RB87_MASS).is_ok());
        assert!(LMTSequence::with_recoil(3, s.k, 5.9e-3, 1.0, RB87_MASS).is_err());
        assert!(LMTSequence::new(0, s.k, 1.0, RB87_MASS).is_err());
    }

    #[test]
    fn zero_c_gives_full_visibility() {
        let p = visibility_max(&kovachy_seq(), 0.0, EARTH_MASS, EARTH_RADIUS).unwrap();
        assert_eq!(p.v_max, 1.0);
        assert_eq!(visibility_numeric(&kovachy_seq(), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn closed_form_matches_time_integral() {
        // independent Simpson rule on the rising leg, doubled by symmetry
        let s = kovachy_seq();
        let coeff = G * s.m * EARTH_MASS / (HBAR * cube(EARTH_RADIUS));
        let n = 64;
        let h = s.t_half / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let t = h * i as f64;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let dx = s.arm_velocity() * t;
            acc += w * coeff * dx * dx;
        }
        let quad = 2.0 * acc * h / 3.0;
        let closed = visibility_max(&s, 1.0, EARTH_MASS, EARTH_RADIUS).unwrap().exponent;
        assert!((quad - closed).abs() <= 1e-10 * closed);
        let numeric = visibility_numeric(&s, coeff).unwrap();
        assert!((numeric.ln() + closed).abs() <= 1e-10 * closed);
    }

    #[test]
    fn kovachy_exponent_scale() {
        let p = visibility_max(&kovachy_seq(), 1.0, EARTH_MASS, EARTH_RADIUS).unwrap();
        assert!((p.exponent / (45.0 * 45.0) - 0.2485).abs() < 0.002, "{}", p.exponent);
    }

    #[test]
    fn static_superposition_decay() {
        let v = static_visibility(2460.0, 1e-3, 10.0).unwrap();
        assert!((v - (-0.0246f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn fig1_shape_and_ordering() {
        let e = FountainExperiment::kovachy();
        let cs = [1.0, BALL_GEOMETRIC_FACTOR, 0.1];
        let orders = e.orders();
        let rows = fig1_dataset(&e, &cs, &orders, None).unwrap();
        assert_eq!(rows.len(), cs.len() * orders.len());
        for c in cs {
            let curve: Vec<f64> = rows.iter().filter(|r| r.c_factor == c).map(|r| r.log10_v_pred).collect();
            assert!(curve.windows(2).all(|w| w[1] < w[0]));
        }
        for chunk in rows.chunks(3) {
            assert!(chunk[0].log10_v_pred < chunk[1].log10_v_pred);
            assert!(chunk[1].log10_v_pred < chunk[2].log10_v_pred);
        }
    }

    #[test]
    fn fig1_attaches_measurements() {
        let e = FountainExperiment::sugarbaker();
        let pts = [MeasuredPoint {
            experiment: "sugarbaker".into(),
            order: 6,
            visibility: 0.75,
            error: 0.05,
        }];
        let rows = fig1_dataset(&e, &[0.1], &[5, 6], Some(&pts)).unwrap();
        assert!(rows[0].log10_v_meas.is_none());
        let r = rows[1].ratio().unwrap();
        assert!(r > 2.0 && r < 3.0, "{r}");
        let bad = [MeasuredPoint { visibility: 1.5, ..pts[0].clone() }];
        assert!(fig1_dataset(&e, &[0.1], &[6], Some(&bad)).is_err());
    }

    #[test]
    fn gradiometer_far_source_is_earth_only() {
        let cfg = GradiometerConfig::default();
        let seq = LMTSequence::from_recoil(5, RB87_RECOIL, 0.5, RB87_MASS).unwrap();
        let earth = visibility_numeric(&seq, cfg.c_factor * G * RB87_MASS * EARTH_MASS / (HBAR * cube(EARTH_RADIUS))).unwrap();
        let (lo, up) = gradiometer_contrast(&cfg, 1e4).unwrap();
        assert!((lo - earth).abs() < 1e-9 && (up - earth).abs() < 1e-9);
    }

    #[test]
    fn gradiometer_lower_varies_more() {
        for mode in [GradientMode::ThreeD, GradientMode::OnAxis] {
            let cfg = GradiometerConfig { mode, ..Default::default() };
            let (l1, u1) = gradiometer_contrast(&cfg, 0.25).unwrap();
            let (l2, u2) = gradiometer_contrast(&cfg, 0.5).unwrap();
            assert!((l2 - l1).abs() > (u2 - u1).abs());
            assert!(l1 < l2);
        }
    }

    proptest! {
        #[test]
        fn exponent_scales_as_n_squared_and_t_cubed(n in 1u32..60, t in 0.1f64..3.0) {
            let base = LMTSequence::from_recoil(1, RB87_RECOIL, 1.0, RB87_MASS).unwrap();
            let e1 = visibility_max(&base, 1.0, EARTH_MASS, EARTH_RADIUS).unwrap().exponent;
            let s = LMTSequence::from_recoil(n, RB87_RECOIL, t, RB87_MASS).unwrap();
            let e = visibility_max(&s, 1.0, EARTH_MASS, EARTH_RADIUS).unwrap().exponent;
            let want = e1 * (n as f64).powi(2) * t.powi(3);
            prop_assert!((e - want).abs() <= 1e-12 * want);
        }

        #[test]
        fn profile_integral_is_exact(n in 1u32..60, t in 0.1f64..3.0) {
            let s = LMTSequence::from_recoil(n, RB87_RECOIL, t, RB87_MASS).unwrap();
            let want = 2.0 / 3.0 * s.arm_velocity().powi(2) * t.powi(3);
            let got = separation_squared_integral(&s).unwrap();
            prop_assert!((got - want).abs() <= 1e-12 * want);
        }

        #[test]
        fn numeric_visibility_bounded(c in 0.0f64..1e4, n in 1u32..40) {
            let s = LMTSequence::from_recoil(n, RB87_RECOIL, 1.0, RB87_MASS).unwrap();
            let v = visibility_numeric(&s, c).unwrap();
            prop_assert!(v <= 1.0);
            prop_assert_eq!(v == 1.0, c == 0.0);
        }
    }
}

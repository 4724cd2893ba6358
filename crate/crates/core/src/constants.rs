//! Physical constants (CODATA 2018, SI) and the rounded Earth model used as
//! scenario defaults.

/// Fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConsts {
    /// Gravitational constant, m³·kg⁻¹·s⁻².
    pub g: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light, m·s⁻¹.
    pub c: f64,
    /// Boltzmann constant, J·K⁻¹.
    pub kb: f64,
}

pub const G: f64 = 6.674_30e-11;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const C: f64 = 299_792_458.0;
pub const KB: f64 = 1.380_649e-23;

const CONSTS: PhysConsts = PhysConsts {
    g: G,
    hbar: HBAR,
    c: C,
    kb: KB,
};

pub const fn constants() -> PhysConsts {
    CONSTS
}

/// Rounded Earth mass used throughout the fountain and table comparisons (kg).
pub const EARTH_MASS: f64 = 6.0e24;
/// Rounded Earth radius (m).
pub const EARTH_RADIUS: f64 = 6.0e6;

/// Schwarzschild radius 2GM/c² of a mass `m` (kg).
pub fn schwarzschild_radius(m: f64) -> f64 {
    2.0 * G * m / (C * C)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let k = constants();
        assert!((k.g - 6.674e-11).abs() / 6.674e-11 < 1e-3);
        assert!((k.hbar - 1.055e-34).abs() / 1.055e-34 < 1e-3);
        assert_eq!(k, constants());
        assert!(k.g > 0.0 && k.hbar > 0.0 && k.c > 0.0 && k.kb > 0.0);
    }

    #[test]
    fn earth_schwarzschild_radius() {
        let rs = schwarzschild_radius(6e24);
        assert!((rs - 8.9e-3).abs() / 8.9e-3 < 0.01, "{rs}");
    }

    #[test]
    fn schwarzschild_ratio_is_constant() {
        let expected = 2.0 * G / (C * C);
        for m in [1e-20, 1.0, 6e24, 2e30] {
            let r = schwarzschild_radius(m) / m;
            assert!((r - expected).abs() / expected < 1e-14);
        }
    }
}

//! Experiment scenarios: a test mass at the origin, the surrounding matter,
//! and the superposition it is put into.

use alloc::string::String;
use alloc::vec::Vec;

use crate::composite::MassDistribution;
use crate::constants::{EARTH_MASS, EARTH_RADIUS};
use crate::dp::DEFAULT_DELTA;
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::interferometry::LMTSequence;
use crate::math::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Displacement {
    /// Static superposition size (m).
    Fixed(f64),
    /// Fountain sequence; the peak separation is used where a single size is needed.
    Fountain(LMTSequence),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub test_mass: f64,
    pub sources: Vec<MassDistribution>,
    pub displacement: Displacement,
    pub dp_delta: f64,
    pub c_factor: f64,
    /// Collapse every source to an on-axis point at its centre of mass.
    pub single_particle_sources: bool,
    /// Superposition direction (unit vector).
    pub axis: Vec3,
}

impl Scenario {
    /// A test mass `dx`-superposed vertically on the surface of the default Earth.
    pub fn on_earth(name: &str, test_mass: f64, dx: f64) -> Self {
        Self {
            name: name.into(),
            test_mass,
            sources: alloc::vec![MassDistribution::HomogeneousBall {
                mass: EARTH_MASS,
                radius: EARTH_RADIUS,
                center: [0.0, 0.0, -EARTH_RADIUS],
            }],
            displacement: Displacement::Fixed(dx),
            dp_delta: DEFAULT_DELTA,
            c_factor: 1.0,
            single_particle_sources: true,
            axis: [0.0, 0.0, 1.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Invalid {
                field: "name",
                reason: "must not be empty",
            });
        }
        require_positive("test_mass", self.test_mass)?;
        match &self.displacement {
            Displacement::Fixed(dx) => {
                require_non_negative("dx", *dx)?;
            }
            Displacement::Fountain(seq) => seq.validate()?,
        }
        require_positive("dp_delta", self.dp_delta)?;
        require_non_negative("c_factor", self.c_factor)?;
        for s in &self.sources {
            s.validate()?;
        }
        let n = crate::math::norm(&self.axis);
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid {
                field: "axis",
                reason: "must be a unit vector",
            });
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        match &self.displacement {
            Displacement::Fixed(dx) => *dx,
            Displacement::Fountain(seq) => seq.peak_separation(),
        }
    }
}

/// Validates each scenario and checks names are unique.
pub fn validate_all(scenarios: &[Scenario]) -> Result<()> {
    for (i, s) in scenarios.iter().enumerate() {
        s.validate()?;
        if scenarios[..i].iter().any(|o| o.name == s.name) {
            return Err(Error::Invalid {
                field: "name",
                reason: "scenario names must be unique",
            });
        }
    }
    Ok(())
}

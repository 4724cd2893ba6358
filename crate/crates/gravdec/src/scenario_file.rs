//! Scenario files: TOML with one `[[scenario]]` table per experiment.
//!
//! ```toml
//! [[scenario]]
//! name = "fountain"
//! test_mass = 1.4e-25
//! dx = 0.54                      # or an [scenario.lmt] table
//! c_factor = 1.0
//! single_particle_sources = true
//!
//! [[scenario.sources]]
//! kind = "homogeneous_ball"      # Earth unless mass/radius/center are given
//! ```
//!
//! Source kinds: `homogeneous_ball`, `spherical_shell`, `point_source_list`
//! and `point_set`. Positions are relative to the test mass.

use std::path::Path;

use gravdec_core::composite::{Constituent, MassDistribution};
use gravdec_core::constants::{EARTH_MASS, EARTH_RADIUS};
use gravdec_core::dp::DEFAULT_DELTA;
use gravdec_core::interferometry::LMTSequence;
use gravdec_core::scenario::{validate_all, Displacement, Scenario};
use serde::Deserialize;

use crate::error::ReportError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    scenario: Vec<RawScenario>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    test_mass: f64,
    dx: Option<f64>,
    lmt: Option<RawLmt>,
    dp_delta: Option<f64>,
    c_factor: Option<f64>,
    single_particle_sources: Option<bool>,
    axis: Option<[f64; 3]>,
    sources: Option<Vec<RawSource>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLmt {
    n: u32,
    t_half: f64,
    k: Option<f64>,
    recoil: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawSource {
    HomogeneousBall {
        mass: Option<f64>,
        radius: Option<f64>,
        center: Option<[f64; 3]>,
    },
    SphericalShell {
        mass: f64,
        radius: f64,
        center: [f64; 3],
        count: usize,
    },
    PointSourceList {
        points: Vec<RawPoint>,
    },
    PointSet {
        points: Vec<RawPoint>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    mass: f64,
    position: [f64; 3],
}

fn earth() -> MassDistribution {
    MassDistribution::HomogeneousBall {
        mass: EARTH_MASS,
        radius: EARTH_RADIUS,
        center: [0.0, 0.0, -EARTH_RADIUS],
    }
}

fn invalid(scenario: &str, source: gravdec_core::Error) -> ReportError {
    ReportError::Scenario {
        scenario: scenario.to_string(),
        source,
    }
}

fn convert(raw: RawScenario) -> Result<Scenario, ReportError> {
    let name = raw.name;
    let displacement = match (raw.dx, raw.lmt) {
        (Some(dx), None) => Displacement::Fixed(dx),
        (None, Some(l)) => {
            let seq = match (l.k, l.recoil) {
                (Some(k), Some(v)) => LMTSequence::with_recoil(l.n, k, v, l.t_half, raw.test_mass),
                (Some(k), None) => LMTSequence::new(l.n, k, l.t_half, raw.test_mass),
                (None, Some(v)) => LMTSequence::from_recoil(l.n, v, l.t_half, raw.test_mass),
                (None, None) => Err(gravdec_core::Error::Invalid {
                    field: "lmt",
                    reason: "needs k or recoil",
                }),
            }
            .map_err(|e| invalid(&name, e))?;
            Displacement::Fountain(seq)
        }
        _ => {
            return Err(invalid(
                &name,
                gravdec_core::Error::Invalid {
                    field: "dx",
                    reason: "give exactly one of dx or lmt",
                },
            ))
        }
    };
    let sources = match raw.sources {
        None => vec![earth()],
        Some(list) => list
            .into_iter()
            .map(|s| source(s).map_err(|e| invalid(&name, e)))
            .collect::<Result<_, _>>()?,
    };
    Ok(Scenario {
        name,
        test_mass: raw.test_mass,
        sources,
        displacement,
        dp_delta: raw.dp_delta.unwrap_or(DEFAULT_DELTA),
        c_factor: raw.c_factor.unwrap_or(1.0),
        single_particle_sources: raw.single_particle_sources.unwrap_or(false),
        axis: raw.axis.unwrap_or([0.0, 0.0, 1.0]),
    })
}

fn source(raw: RawSource) -> gravdec_core::Result<MassDistribution> {
    let points = |pts: Vec<RawPoint>| {
        pts.into_iter()
            .map(|p| Constituent::new(p.mass, p.position))
            .collect::<gravdec_core::Result<Vec<_>>>()
    };
    match raw {
        RawSource::HomogeneousBall { mass, radius, center } => {
            let radius = radius.unwrap_or(EARTH_RADIUS);
            MassDistribution::ball(mass.unwrap_or(EARTH_MASS), radius, center.unwrap_or([0.0, 0.0, -radius]))
        }
        RawSource::SphericalShell {
            mass,
            radius,
            center,
            count,
        } => MassDistribution::shell(mass, radius, center, count),
        RawSource::PointSourceList { points: p } => Ok(MassDistribution::PointSourceList(points(p)?)),
        RawSource::PointSet { points: p } => Ok(MassDistribution::PointSet(points(p)?)),
    }
}

/// Parses and validates scenario text. Names must be unique.
pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>, ReportError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|s| line_col(text, s.start))
            .unwrap_or((0, 0));
        ReportError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let scenarios = raw
        .scenario
        .into_iter()
        .map(convert)
        .collect::<Result<Vec<_>, _>>()?;
    for s in &scenarios {
        s.validate().map_err(|e| invalid(&s.name, e))?;
    }
    validate_all(&scenarios).map_err(|e| invalid("<file>", e))?;
    Ok(scenarios)
}

pub fn load_scenarios(path: &Path) -> Result<Vec<Scenario>, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenarios(&text)
}

/// 1-based line and column of a byte offset.
pub(crate) fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

//! Scenario configuration files.
//!
//! ```toml
//! [units]
//! system = "natural"          # or "scaled" with mass, c, hbar
//!
//! [barrier]
//! a = -5.0
//! b = -3.0
//! V0 = 0.5
//!
//! [packet]
//! q0 = -50.0
//! sigma = 5.0
//! k0 = 2.0
//!
//! [quadrature]                # any QuadratureSpec field, all optional
//! rel_tolerance = 1e-10
//!
//! [outputs]
//! directory = "out"
//! stem = "reltoa"
//!
//! [sweep]
//! axis = "k0"                 # k0 | sigma | V0 | L
//! start = 0.2
//! stop = 3.0
//! step = 0.1                  # or: values = [...]
//!
//! [kernel_grid]
//! eta = [-10.0, -4.0, 1.0]
//! zeta = [0.5, 1.0, 2.0]
//!
//! [[classical.states]]
//! q0 = -10.0
//! p0 = 2.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classical::{ClassicalState, SquareBarrier};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::oracle::reference_scenario;
use crate::units::Units;
use crate::wavepacket::GaussianPacket;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "system", rename_all = "lowercase", deny_unknown_fields)]
pub enum UnitsConfig {
    #[default]
    Natural,
    Scaled {
        mass: f64,
        c: f64,
        hbar: f64,
    },
}

impl UnitsConfig {
    pub fn units(&self) -> Units {
        match *self {
            UnitsConfig::Natural => Units::natural(),
            UnitsConfig::Scaled { mass, c, hbar } => Units { mass, c, hbar },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub stem: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("out"),
            stem: "reltoa".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "k0")]
    K0,
    #[serde(rename = "sigma")]
    Sigma,
    #[serde(rename = "V0", alias = "v0")]
    V0,
    #[serde(rename = "L")]
    L,
}

impl SweepAxis {
    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::K0 => "k0",
            SweepAxis::Sigma => "sigma",
            SweepAxis::V0 => "V0",
            SweepAxis::L => "L",
        }
    }

    /// The scenario at one sweep value. L moves the left edge, keeping b.
    pub fn apply(&self, barrier: &SquareBarrier, packet: &GaussianPacket, x: f64) -> (SquareBarrier, GaussianPacket) {
        let (mut barrier, mut packet) = (*barrier, *packet);
        match self {
            SweepAxis::K0 => packet.k0 = x,
            SweepAxis::Sigma => packet.sigma = x,
            SweepAxis::V0 => barrier.v0 = x,
            SweepAxis::L => barrier.a = barrier.b - x,
        }
        (barrier, packet)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

impl SweepConfig {
    /// Explicit values, or the inclusive range start..=stop by step. Range
    /// points are computed as start + i·step so they do not drift.
    pub fn points(&self) -> Result<Vec<f64>> {
        let range = (self.start, self.stop, self.step);
        match range {
            (None, None, None) => Ok(self.values.clone()),
            (Some(start), Some(stop), Some(step)) if self.values.is_empty() => {
                if !(step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start) {
                    return Err(Error::invalid("sweep", "need finite start <= stop and step > 0"));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                Ok((0..=n).map(|i| start + i as f64 * step).collect())
            }
            _ => Err(Error::invalid(
                "sweep",
                "give either values or all of start, stop and step",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelGrid {
    pub eta: Vec<f64>,
    pub zeta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ClassicalConfig {
    pub states: Vec<ClassicalState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub units: UnitsConfig,
    pub barrier: SquareBarrier,
    pub packet: GaussianPacket,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_grid: Option<KernelGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalConfig>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let (barrier, packet, _) = reference_scenario();
        ScenarioConfig {
            units: UnitsConfig::Natural,
            barrier,
            packet,
            quadrature: QuadratureSpec::default(),
            outputs: OutputConfig::default(),
            sweep: Some(SweepConfig {
                axis: SweepAxis::K0,
                values: Vec::new(),
                start: Some(0.2),
                stop: Some(3.0),
                step: Some(0.1),
            }),
            kernel_grid: Some(KernelGrid {
                eta: vec![-10.0, -4.0, 1.0],
                zeta: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            }),
            classical: Some(ClassicalConfig {
                states: vec![
                    ClassicalState { q0: -10.0, p0: 2.0 },
                    ClassicalState { q0: -4.0, p0: 2.0 },
                    ClassicalState { q0: -2.0, p0: 0.5 },
                ],
            }),
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::invalid("config", e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn units(&self) -> Units {
        self.units.units()
    }

    /// Every invariant the modules check, run up front.
    pub fn validate(&self) -> Result<()> {
        let units = self.units();
        units.validate()?;
        self.barrier.validate(&units)?;
        self.packet.validate()?;
        self.packet.check_support(&self.barrier)?;
        self.quadrature.validate()?;
        if self.outputs.stem.is_empty() || self.outputs.stem.contains(['/', '\\']) {
            return Err(Error::invalid("outputs.stem", "must be a non-empty file name"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.points()?.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("sweep.values", "must be finite"));
            }
        }
        if let Some(grid) = &self.kernel_grid {
            if grid.eta.iter().chain(&grid.zeta).any(|v| !v.is_finite()) {
                return Err(Error::invalid("kernel_grid", "eta and zeta must be finite"));
            }
        }
        if let Some(classical) = &self.classical {
            for s in &classical.states {
                if !(s.q0.is_finite() && s.p0.is_finite() && s.p0 != 0.0) {
                    return Err(Error::invalid("classical.states", "need finite q0 and p0 != 0"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let config = ScenarioConfig::default();
        config.validate().unwrap();
        let back = ScenarioConfig::from_toml(&config.to_toml()).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn minimal_file() {
        let text = "[barrier]\na = -5.0\nb = -3.0\nV0 = 0.5\n[packet]\nq0 = -50.0\nsigma = 5.0\nk0 = 2.0\n";
        let config = ScenarioConfig::from_toml(text).unwrap();
        assert_eq!(config.units(), Units::natural());
        assert_eq!(config.quadrature, QuadratureSpec::default());
        assert!(config.sweep.is_none());
    }

    #[test]
    fn scaled_units_and_overrides() {
        let text = "[units]\nsystem = \"scaled\"\nmass = 2.0\nc = 3.0\nhbar = 0.5\n\
                    [barrier]\na = -5.0\nb = -3.0\nV0 = 0.5\n[packet]\nq0 = -50.0\nsigma = 5.0\nk0 = 2.0\n\
                    [quadrature]\nrel_tolerance = 1e-8\n";
        let config = ScenarioConfig::from_toml(text).unwrap();
        assert_eq!(config.units(), Units { mass: 2.0, c: 3.0, hbar: 0.5 });
        assert_eq!(config.quadrature.rel_tolerance, 1e-8);
        assert_eq!(config.quadrature.contour_nodes, 64);
    }

    #[test]
    fn invalid_files_name_the_field() {
        let bad_barrier = "[barrier]\na = -3.0\nb = -5.0\nV0 = 0.5\n[packet]\nq0 = -50.0\nsigma = 5.0\nk0 = 2.0\n";
        let msg = ScenarioConfig::from_toml(bad_barrier).unwrap_err().to_string();
        assert!(msg.starts_with("barrier: require a < b < 0"), "{msg}");
        let close = "[barrier]\na = -5.0\nb = -3.0\nV0 = 0.5\n[packet]\nq0 = -30.0\nsigma = 5.0\nk0 = 2.0\n";
        assert!(ScenarioConfig::from_toml(close).unwrap_err().to_string().contains("packet.q0"));
        let unknown = "[barrier]\na = -5.0\nb = -3.0\nV0 = 0.5\nwidth = 2\n[packet]\nq0 = -50.0\nsigma = 5.0\nk0 = 2.0\n";
        assert!(ScenarioConfig::from_toml(unknown).is_err());
    }

    #[test]
    fn sweep_ranges() {
        let sweep = SweepConfig {
            axis: SweepAxis::K0,
            values: vec![],
            start: Some(0.2),
            stop: Some(3.0),
            step: Some(0.1),
        };
        let pts = sweep.points().unwrap();
        assert_eq!(pts.len(), 29);
        assert!((pts[28] - 3.0).abs() < 1e-12);
        let partial = SweepConfig { step: None, ..sweep };
        assert!(partial.points().is_err());
    }
}

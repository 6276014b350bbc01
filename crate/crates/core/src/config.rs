//! Run configuration: one JSON file plus command line overrides.
//!
//! Every field is optional. Lengths are in model units, defaults scale with
//! the torus side `s`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curves::CurveParams;
use crate::geometry::TorusSpec;
use crate::planner::KeyPolicy;
use crate::split::SplitSpec;
use crate::vertex::VertexParams;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    #[default]
    Hex,
    Square,
}

impl GridKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hex" => Some(GridKind::Hex),
            "square" => Some(GridKind::Square),
            _ => None,
        }
    }

    /// Interior valence of the tessellation.
    pub fn valence(self) -> usize {
        match self {
            GridKind::Hex => 3,
            GridKind::Square => 4,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTorus {
    pub revolve_radius: Option<f64>,
    pub side: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCurves {
    pub valence: Option<usize>,
    pub amplitude: Option<f64>,
    pub ripple: Option<f64>,
    pub gap_degrees: Option<f64>,
    pub samples: Option<usize>,
    pub radial_offset: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub kind: Option<GridKind>,
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub edge_length: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSplit {
    pub target_label: Option<usize>,
    pub peg_side: Option<f64>,
    pub peg_length: Option<f64>,
    pub clearance: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub torus: RawTorus,
    #[serde(default)]
    pub curves: RawCurves,
    #[serde(default)]
    pub grid: RawGrid,
    #[serde(default)]
    pub split: RawSplit,
    pub resolution: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub policy: Option<KeyPolicy>,
    pub random_directions: Option<usize>,
    pub min_separation: Option<f64>,
    pub attachment_depth: Option<f64>,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridConfig {
    pub kind: GridKind,
    pub width: usize,
    pub height: usize,
    pub edge_length: f64,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub torus: TorusSpec,
    pub curves: CurveParams,
    pub grid: GridConfig,
    pub split: SplitSpec,
    /// Voxels per cross-section side.
    pub resolution: usize,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub policy: KeyPolicy,
    pub random_directions: usize,
    pub min_separation: f64,
    pub attachment_depth: f64,
}

const MAX_VALENCE: usize = 32;

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    /// Fills defaults and re-validates every component.
    pub fn resolve(raw: RawConfig) -> Result<Self> {
        let torus = TorusSpec::new(raw.torus.revolve_radius.unwrap_or(2.0), raw.torus.side.unwrap_or(1.0))?;
        let s = torus.side();

        let kind = raw.grid.kind.unwrap_or_default();
        let width = raw.grid.width.unwrap_or(3);
        let height = raw.grid.height.unwrap_or(width);
        if width == 0 || height == 0 {
            return Err(Error::Config(format!("grid dimensions must be at least 1, got {width}x{height}")));
        }
        let min_edge = 2.0 * torus.outer_radius();
        let edge_length = positive("grid.edge_length", raw.grid.edge_length.unwrap_or(min_edge + 3.0 * s))?;
        if edge_length <= min_edge {
            return Err(Error::Config(format!(
                "grid.edge_length {edge_length} must exceed 2(R + s/2) = {min_edge}"
            )));
        }

        let valence = raw.curves.valence.unwrap_or(kind.valence());
        if !(1..=MAX_VALENCE).contains(&valence) {
            return Err(Error::Config(format!("curves.valence must lie in 1..={MAX_VALENCE}, got {valence}")));
        }
        let mut curves = CurveParams::defaults(valence, &torus);
        if let Some(a) = raw.curves.amplitude {
            curves.amplitude = a;
        }
        if let Some(b) = raw.curves.ripple {
            curves.ripple = b;
        }
        if let Some(g) = raw.curves.gap_degrees {
            curves.gap = g.to_radians();
        }
        if let Some(m) = raw.curves.samples {
            curves.samples = m;
        }
        if let Some(u) = raw.curves.radial_offset {
            curves.radial_offset = u;
        }
        curves.validate(&torus)?;

        let mut split = SplitSpec::defaults(&torus);
        if let Some(l) = raw.split.target_label {
            split.target_label = l;
        }
        if let Some(p) = raw.split.peg_side {
            split.peg_side = p;
        }
        if let Some(l) = raw.split.peg_length {
            split.peg_length = l;
        }
        if let Some(c) = raw.split.clearance {
            split.clearance = c;
        }
        split.validate(&torus, valence)?;

        let resolution = raw.resolution.unwrap_or(64);
        if resolution < 4 {
            return Err(Error::Config(format!("resolution must be at least 4 voxels per side, got {resolution}")));
        }
        let min_separation = raw.min_separation.unwrap_or(0.05 * s);
        if !(min_separation.is_finite() && min_separation >= 0.0) {
            return Err(Error::Config(format!("min_separation must be non-negative, got {min_separation}")));
        }
        let attachment_depth = positive("attachment_depth", raw.attachment_depth.unwrap_or(s / 8.0))?;
        if attachment_depth > s {
            return Err(Error::Config(format!("attachment_depth {attachment_depth} must not exceed s = {s}")));
        }

        Ok(Self {
            torus,
            curves,
            grid: GridConfig { kind, width, height, edge_length },
            split,
            resolution,
            output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
            seed: raw.seed.unwrap_or(42),
            policy: raw.policy.unwrap_or_default(),
            random_directions: raw.random_directions.unwrap_or(72),
            min_separation,
            attachment_depth,
        })
    }

    pub fn vertex_params(&self) -> VertexParams {
        VertexParams {
            torus: self.torus.clone(),
            curves: self.curves.clone(),
            split: self.split.clone(),
            resolution: self.resolution,
            min_separation: self.min_separation,
            attachment_depth: self.attachment_depth,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let c = RunConfig::resolve(RawConfig::from_json("{}").unwrap()).unwrap();
        assert_eq!(c.curves.valence, 3);
        assert_eq!(c.resolution, 64);
        assert_eq!(c.seed, 42);
        assert_eq!(c.grid.edge_length, 8.0);
        assert_eq!(c.grid.height, c.grid.width);
        assert_eq!(c.policy, KeyPolicy::EdgeKey);
    }

    #[test]
    fn valence_follows_grid_kind() {
        let c = RunConfig::resolve(RawConfig::from_json(r#"{"grid": {"kind": "square"}}"#).unwrap()).unwrap();
        assert_eq!(c.curves.valence, 4);
    }

    #[test]
    fn defaults_scale_with_side() {
        let c = RunConfig::resolve(RawConfig::from_json(r#"{"torus": {"revolve_radius": 4, "side": 2}}"#).unwrap())
            .unwrap();
        assert!((c.curves.amplitude - 0.6).abs() < 1e-12);
        assert!((c.split.peg_side - 0.8).abs() < 1e-12);
        assert!((c.grid.edge_length - 16.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            r#"{"unknown": 1}"#,
            r#"{"curves": {"amplitude": 0.6}}"#,
            r#"{"curves": {"gap_degrees": 90}}"#,
            r#"{"torus": {"revolve_radius": 0.4}}"#,
            r#"{"grid": {"edge_length": 4}}"#,
            r#"{"grid": {"width": 0}}"#,
            r#"{"split": {"target_label": 3}}"#,
            r#"{"resolution": 2}"#,
            r#"{"policy": "sometimes"}"#,
        ] {
            let r = RawConfig::from_json(text).and_then(RunConfig::resolve);
            assert!(r.is_err(), "{text} accepted");
        }
    }
}

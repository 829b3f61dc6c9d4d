//! Experiment configuration, loadable from TOML.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::hole_detect::DetectionConfig;
use crate::netgen::Area;
use crate::scenario::CarveSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub node_counts: Vec<usize>,
    pub networks_per_count: usize,
    pub area_width: f64,
    pub area_height: f64,
    pub radius: f64,
    pub delta: f64,
    /// Gap, in degrees, above which a node launches probes.
    pub angle_threshold_deg: f64,
    /// Probes abort at single-neighbor nodes instead of turning around.
    pub stop_at_leaves: bool,
    /// Outer-outline loops are tested like any other.
    pub test_outer_faces: bool,
    pub pairs_per_network: usize,
    /// Minimum source-destination separation, in multiples of `radius`.
    pub min_separation_radii: f64,
    pub carve: Vec<CarveSpec>,
    pub seed_base: u64,
    /// Gap threshold of the comparison detector, in radians.
    pub hagr_angle_threshold: f64,
    /// Loop-diameter threshold of the comparison detector, in meters.
    pub hagr_diameter_threshold: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            node_counts: vec![50, 100, 150, 200, 250, 300],
            networks_per_count: 50,
            area_width: 400.0,
            area_height: 400.0,
            radius: 20.0,
            delta: 2.25,
            angle_threshold_deg: 120.0,
            stop_at_leaves: false,
            test_outer_faces: false,
            pairs_per_network: 50,
            min_separation_radii: 5.0,
            carve: Vec::new(),
            seed_base: 20_240_101,
            hagr_angle_threshold: 5.0 * PI / 6.0,
            hagr_diameter_threshold: 60.0,
        }
    }
}

impl ExperimentConfig {
    pub fn area(&self) -> Area {
        Area::new(self.area_width, self.area_height)
    }

    pub fn detection(&self) -> DetectionConfig {
        DetectionConfig {
            delta: self.delta,
            angle_threshold_deg: self.angle_threshold_deg,
            probe_hop_budget: None,
            stop_at_leaves: self.stop_at_leaves,
            test_outer_faces: self.test_outer_faces,
        }
    }

    pub fn min_separation(&self) -> f64 {
        self.min_separation_radii * self.radius
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |why: &str| Err(HarnessError::Config(why.to_string()));
        if self.node_counts.is_empty() || self.node_counts.contains(&0) {
            return bad("node_counts must be non-empty and positive");
        }
        if self.networks_per_count == 0 || self.pairs_per_network == 0 {
            return bad("networks_per_count and pairs_per_network must be positive");
        }
        if self.delta.is_nan() || self.delta <= 1.0 {
            return bad("delta must exceed 1");
        }
        if !(self.radius > 0.0 && self.area_width > 0.0 && self.area_height > 0.0) {
            return bad("radius and area must be positive");
        }
        if !(self.angle_threshold_deg > 0.0 && self.angle_threshold_deg < 360.0) {
            return bad("angle_threshold_deg must lie in (0, 360)");
        }
        if !(self.hagr_angle_threshold > 0.0 && self.hagr_diameter_threshold > 0.0) {
            return bad("comparison-detector thresholds must be positive");
        }
        if self.min_separation_radii.is_nan() || self.min_separation_radii < 0.0 {
            return bad("min_separation_radii must be non-negative");
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String, HarnessError> {
        Ok(toml::to_string(self)?)
    }
}

//! Scenario files: one TOML document describing one network.
//!
//! ```toml
//! seed = 42
//! n = 300
//! area_width = 400.0
//! area_height = 400.0
//! radius = 20.0
//!
//! [[nodes]]          # optional; overrides seeded generation
//! id = 0
//! x = 12.5
//! y = 80.0
//!
//! [[carve]]          # optional, applied in order
//! cx = 200.0
//! cy = 200.0
//! hole_radius = 60.0
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point;
use crate::netgen::{generate, Area, Network, NetworkError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("reading scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing scenario: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("writing scenario: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("scenario lists {listed} nodes but declares n = {declared}")]
    CountMismatch { listed: usize, declared: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarveSpec {
    pub cx: f64,
    pub cy: f64,
    pub hole_radius: f64,
}

impl CarveSpec {
    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub seed: u64,
    pub n: usize,
    pub area_width: f64,
    pub area_height: f64,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<NodeSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub carve: Vec<CarveSpec>,
}

fn default_radius() -> f64 {
    20.0
}

impl Scenario {
    pub fn seeded(seed: u64, n: usize, area: Area, radius: f64) -> Self {
        Self {
            seed,
            n,
            area_width: area.width,
            area_height: area.height,
            radius,
            nodes: Vec::new(),
            carve: Vec::new(),
        }
    }

    /// Scenario pinning every node of `net` explicitly.
    pub fn from_network(seed: u64, net: &Network) -> Self {
        Self {
            seed,
            n: net.len(),
            area_width: net.area().width,
            area_height: net.area().height,
            radius: net.radius(),
            nodes: net
                .positions()
                .iter()
                .enumerate()
                .map(|(id, p)| NodeSpec { id, x: p.x, y: p.y })
                .collect(),
            carve: Vec::new(),
        }
    }

    pub fn area(&self) -> Area {
        Area::new(self.area_width, self.area_height)
    }

    /// Materializes the network: explicit nodes if listed, otherwise seeded
    /// generation, then each carve directive in order.
    pub fn build(&self) -> Result<Network, ScenarioError> {
        let mut net = if self.nodes.is_empty() {
            generate(self.seed, self.n, self.area(), self.radius)?
        } else {
            if self.nodes.len() != self.n {
                return Err(ScenarioError::CountMismatch {
                    listed: self.nodes.len(),
                    declared: self.n,
                });
            }
            let mut sorted = self.nodes.clone();
            sorted.sort_by_key(|s| s.id);
            if let Some((index, s)) = sorted.iter().enumerate().find(|(i, s)| s.id != *i) {
                return Err(NetworkError::SparseIds { index, found: s.id }.into());
            }
            let pts = sorted.iter().map(|s| Point::new(s.x, s.y)).collect();
            Network::from_positions(pts, self.radius, self.area())?
        };
        for c in &self.carve {
            net = net.carve_hole(c.center(), c.hole_radius)?.network;
        }
        Ok(net)
    }

    pub fn to_toml(&self) -> Result<String, ScenarioError> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ScenarioError> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }
}

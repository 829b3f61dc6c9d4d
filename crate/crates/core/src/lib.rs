//! Geographic routing around network holes.
//!
//! The crate simulates unit-disk wireless networks and implements:
//!
//! * probe-based hole detection driven by a path-length to Euclidean-distance
//!   ratio test ([`hole_detect`]),
//! * a shape-free hole record built from the boundary's two most distant
//!   vertices, plus its announcement region ([`hole_model`]),
//! * double-landmark forwarding that steers packets around announced holes
//!   ([`hddl_route`]), with GPSR as the fallback and baseline ([`gpsr`]),
//! * an experiment harness comparing the two ([`harness`]).

pub mod geometry;
pub mod gpsr;
pub mod harness;
pub mod hddl_route;
pub mod hole_detect;
pub mod hole_model;
pub mod netgen;
pub mod scenario;

pub use geometry::{AnnouncementTriangle, Landmark, Point, Segment, ShadedRegion, Side};
pub use gpsr::{route_gpsr, ForwardMode, Path};
pub use hddl_route::{route_hddl, HddlRoute};
pub use hole_detect::{BoundaryLoop, DetectionConfig, DetectionReport};
pub use hole_model::{HoleCaches, HoleRecord};
pub use netgen::{bfs_hops, generate, Area, Network, NodeId};
pub use scenario::Scenario;

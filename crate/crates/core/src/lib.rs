//! Interlocking planar truss elements.
//!
//! Every truss vertex is replaced by a solid torus with a square cross-section.
//! The torus is split into `n` woven Connectors by a voxel Voronoi decomposition
//! whose sites are sampled sinusoidal curves, one curve per Connector. One
//! Connector per vertex is cut into two halves and a key so the otherwise
//! interlocked vertex can be assembled. Connectors, keys and square tubes are
//! combined into modular Edge Elements, grids are planned with a bill of
//! materials, and every solid can be exported as a watertight mesh.
//!
//! The modules follow the pipeline order:
//!
//! - [`geometry`]: the torus domain, voxel grids and rigid transforms
//! - [`curves`]: Voronoi site curves
//! - [`voronoi`]: voxel labeling and Connector regions
//! - [`split`]: split Connector and locking peg
//! - [`elements`]: tubes and Edge Elements
//! - [`interlock`]: translational escape analysis
//! - [`planner`]: truss graphs and assembly plans
//! - [`mesh`]: voxel meshing and STL/OBJ output
//! - [`vertex`]: one-call construction of a complete vertex design
//! - [`config`] and [`cli`]: the command line front end

pub mod cli;
pub mod config;
pub mod curves;
pub mod elements;
pub mod error;
pub mod geometry;
pub mod interlock;
mod kdtree;
pub mod mesh;
pub mod planner;
pub mod split;
pub mod vertex;
pub mod voronoi;
pub mod voxel;

pub use error::{Error, Result};
pub use geometry::{RigidTransform, TorusSpec, VoxelGrid};
pub use voxel::{Voxel, VoxelSet};

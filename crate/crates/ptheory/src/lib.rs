//! Discrete nonlinear potential theory on graphs.
//!
//! The crate provides, on finite graphs and their exhaustions:
//!
//! - p-Dirichlet energies, p-Laplacians and a convex solver for p-harmonic
//!   Dirichlet problems ([`potential`]);
//! - p-capacities, capacity curves and parabolic-index trend scans,
//!   p-modulus / extremal length of path families, resolving-metric checks
//!   and exact Cheeger constants ([`capmod`]);
//! - quasi-ball packings, contact graphs, the packing edge metric and the
//!   harmonic-series blocking metric around an accumulation point
//!   ([`packing`]);
//! - circle packings of triangulated disks ([`circlepack`]);
//! - generators for the standard families: lattice boxes, regular trees,
//!   tree x Z products, hyperbolic {p,q} tessellations, hexagonal disks
//!   ([`generators`]).
//!
//! Everything is deterministic: solvers use fixed sweep orders, random
//! sampling is confined to [`randgen`] behind caller-provided seeds.

pub mod capmod;
pub mod circlepack;
pub mod generators;
pub mod graph;
pub mod linear;
pub mod packing;
pub mod potential;
pub mod randgen;

pub use graph::{EdgeMetric, Graph, Path, VertexFunction};

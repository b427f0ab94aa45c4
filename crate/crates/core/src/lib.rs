//! Facility-location mechanisms on continuous metric networks.
//!
//! A network is a connected graph whose edges are curves of positive
//! length; agents and the facility may sit anywhere on it, including
//! edge interiors. The crate provides:
//!
//! - an exact-rational metric-graph model ([`MetricGraph`], [`Point`],
//!   shortest-path distance, path centers, grid enumeration),
//! - circle-specific machinery (antipodes, arcs, semicircle analysis,
//!   nearly-antipodal pairs with critical arcs),
//! - the mechanisms themselves ([`mechanisms`]): random dictator,
//!   left-right-middle, random center, the circle hybrid, tree median,
//!   dictatorship, and the tree center lottery — all returning exact
//!   finite-support distributions,
//! - cost functionals and optimal-location oracles ([`costs`]),
//! - strategyproofness / group-strategyproofness audits and empirical
//!   approximation-ratio checks ([`verify`]),
//! - the recursive-tree lower-bound harness ([`lowerbound`]).
//!
//! Every coordinate, length, probability and cost is a [`Rational`];
//! there is no floating point anywhere in the core, so inequalities
//! such as "expected cost ≤ c/4" are decided exactly.

pub mod circle;
pub mod costs;
pub mod error;
pub mod gen;
pub mod graph;
pub mod lowerbound;
pub mod mechanisms;
pub mod rational;
pub mod verify;

pub use circle::{Arc, NearlyAntipodal, SemicircleAnalysis};
pub use costs::{CostReport, GridOracle, Optimum, RatioValue};
pub use error::Error;
pub use graph::{EdgeId, LocationProfile, MetricGraph, Point, Topology, VertexId};
pub use lowerbound::{LowerBoundInstance, ProfileChain};
pub use mechanisms::{LocationDistribution, Mechanism, MechanismId};
pub use rational::Rational;
pub use verify::{CandidateSet, DeviationReport, GspWitness};

//! Error type shared across the crate.

use crate::graph::Topology;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("location profile is empty")]
    EmptyProfile,

    #[error("agent index {index} out of range for profile of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{operation} requires a {expected} graph, got {found}")]
    WrongTopology {
        operation: &'static str,
        expected: &'static str,
        found: Topology,
    },

    #[error("path center is ambiguous for antipodal points; an arc selector is required")]
    AmbiguousCenter,

    #[error("profile contains duplicate or antipodal points")]
    AntipodalOrDuplicatePoints,

    #[error("profile lies on one semicircle; the random-center mechanism does not apply")]
    ProfileOnSemicircle,

    #[error("covering arc longer than a semicircle; the left-right-middle mechanism does not apply")]
    CoveringArcTooLong,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("combinatorial budget exceeded after {} evaluations", partial.candidates_checked)]
    BudgetExceeded { partial: Box<crate::verify::DeviationReport> },

    #[error("no witness index satisfies the circle inequality (theorem violation)")]
    NoWitness,
}

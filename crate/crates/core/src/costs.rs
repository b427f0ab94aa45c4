//! Cost functionals and optimal-location oracles.
//!
//! Agent cost is distance to the facility; for a distribution it is the
//! expected distance. Social cost sums agent costs. The maximum cost of
//! a distribution is the expectation of the per-outcome maximum, not
//! the maximum of per-agent expectations — the two differ and the
//! former is the one every bound here refers to.
//!
//! Optima are exact on trees (median / center), exact on circles
//! (candidate enumeration at the piecewise-linear breakpoints, plus the
//! closed-form center), and grid-oracle approximations on general
//! graphs, flagged as such.

use serde_json::{json, Value};

use crate::circle::{antipode, semicircle_analysis};
use crate::error::Error;
use crate::graph::{circle_distance, DistanceField, LocationProfile, MetricGraph, Point, Topology};
use crate::mechanisms::{tree_center, tree_median, LocationDistribution};
use crate::rational::{format_rational, rat, rem_euclid, rint, Rational};

/// Optimization target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Social,
    Max,
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Objective::Social => "social",
            Objective::Max => "max",
        })
    }
}

/// Distances from one point to all agents, via the topology-appropriate
/// fast path (circle positions or one Dijkstra).
fn distances_to_agents(
    g: &MetricGraph,
    from: &Point,
    x: &LocationProfile,
) -> Result<Vec<Rational>, Error> {
    if g.is_circle() {
        let c = g.circumference()?;
        let fp = g.circle_position(from)?;
        x.points()
            .iter()
            .map(|p| Ok(circle_distance(&c, &fp, &g.circle_position(p)?)))
            .collect()
    } else {
        let field = DistanceField::new(g, from)?;
        Ok(x.points().iter().map(|p| field.to_point(p)).collect())
    }
}

/// Expected distance from `p` to an outcome of the distribution.
pub fn expected_cost(
    g: &MetricGraph,
    dist: &LocationDistribution,
    p: &Point,
) -> Result<Rational, Error> {
    if g.is_circle() {
        let c = g.circumference()?;
        let pp = g.circle_position(p)?;
        let mut acc = rint(0);
        for (point, prob) in dist.support() {
            acc += prob * circle_distance(&c, &pp, &g.circle_position(point)?);
        }
        return Ok(acc);
    }
    let field = DistanceField::new(g, p)?;
    let mut acc = rint(0);
    for (point, prob) in dist.support() {
        acc += prob * field.to_point(point);
    }
    Ok(acc)
}

/// Social cost of a fixed facility point: sum of agent distances.
pub fn social_cost_at(g: &MetricGraph, y: &Point, x: &LocationProfile) -> Result<Rational, Error> {
    Ok(distances_to_agents(g, y, x)?.into_iter().sum())
}

/// Maximum cost of a fixed facility point: largest agent distance.
pub fn max_cost_at(g: &MetricGraph, y: &Point, x: &LocationProfile) -> Result<Rational, Error> {
    Ok(distances_to_agents(g, y, x)?.into_iter().max().expect("nonempty profile"))
}

/// Social cost of a distribution: expectation of the per-outcome sum.
pub fn social_cost(
    g: &MetricGraph,
    dist: &LocationDistribution,
    x: &LocationProfile,
) -> Result<Rational, Error> {
    let mut acc = rint(0);
    for (point, prob) in dist.support() {
        acc += prob * social_cost_at(g, point, x)?;
    }
    Ok(acc)
}

/// Maximum cost of a distribution: expectation of the per-outcome max.
pub fn max_cost(
    g: &MetricGraph,
    dist: &LocationDistribution,
    x: &LocationProfile,
) -> Result<Rational, Error> {
    let mut acc = rint(0);
    for (point, prob) in dist.support() {
        acc += prob * max_cost_at(g, point, x)?;
    }
    Ok(acc)
}

/// An optimal (or grid-optimal) facility location with its cost.
#[derive(Debug, Clone)]
pub struct Optimum {
    pub point: Point,
    pub value: Rational,
    /// True when the value comes from a grid sweep rather than an exact
    /// solver (general graphs).
    pub approximate: bool,
}

impl Optimum {
    pub fn to_json(&self, g: &MetricGraph) -> Value {
        json!({
            "point": self.point.to_json(g),
            "value": format_rational(&self.value),
            "approximate": self.approximate,
        })
    }
}

/// Approximation ratio value; infinite when the optimum is zero but the
/// mechanism cost is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioValue {
    Finite(Rational),
    Infinite,
}

impl RatioValue {
    pub fn of(cost: &Rational, optimum: &Rational) -> RatioValue {
        use num_traits::Zero;
        if optimum.is_zero() {
            if cost.is_zero() {
                RatioValue::Finite(rint(1))
            } else {
                RatioValue::Infinite
            }
        } else {
            RatioValue::Finite(cost / optimum)
        }
    }

    pub fn le(&self, bound: &Rational) -> bool {
        match self {
            RatioValue::Finite(r) => r <= bound,
            RatioValue::Infinite => false,
        }
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            RatioValue::Finite(r) => Some(r),
            RatioValue::Infinite => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            RatioValue::Finite(r) => Value::String(format_rational(r)),
            RatioValue::Infinite => Value::String("inf".into()),
        }
    }
}

impl std::fmt::Display for RatioValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RatioValue::Finite(r) => f.write_str(&format_rational(r)),
            RatioValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Default grid step for general-graph oracles: a thousandth of the
/// longest edge.
pub fn default_resolution(g: &MetricGraph) -> Rational {
    g.longest_edge_length() / rint(1000)
}

/// Brute-force optimum over grid points; the independent oracle used to
/// validate the exact solvers, and the only solver for general graphs.
#[derive(Debug, Clone)]
pub struct GridOracle {
    pub resolution: Rational,
}

impl GridOracle {
    pub fn new(resolution: Rational) -> Self {
        GridOracle { resolution }
    }

    pub fn optimal(
        &self,
        g: &MetricGraph,
        x: &LocationProfile,
        objective: Objective,
    ) -> Result<Optimum, Error> {
        let grid = g.grid_points(&self.resolution)?;
        let fields: Vec<DistanceField> = x
            .points()
            .iter()
            .map(|p| DistanceField::new(g, p))
            .collect::<Result<_, _>>()?;
        let mut best: Option<(Rational, Point)> = None;
        for candidate in grid {
            let value = match objective {
                Objective::Social => fields.iter().map(|f| f.to_point(&candidate)).sum(),
                Objective::Max => fields
                    .iter()
                    .map(|f| f.to_point(&candidate))
                    .max()
                    .expect("nonempty profile"),
            };
            let better = match &best {
                None => true,
                Some((v, p)) => {
                    value < *v
                        || (value == *v && candidate.canonical_cmp(p) == std::cmp::Ordering::Less)
                }
            };
            if better {
                best = Some((value, candidate));
            }
        }
        let (value, point) = best.expect("grid is nonempty");
        Ok(Optimum { point, value, approximate: true })
    }
}

/// Exact candidate-set 1-median on a circle. Social cost is piecewise
/// linear in the facility position with breakpoints only at agent
/// positions and their antipodes, so the minimum is attained on that
/// candidate set; gap midpoints and vertices are included for good
/// measure.
fn circle_optimal_social(g: &MetricGraph, x: &LocationProfile) -> Result<Optimum, Error> {
    let c = g.circumference()?;
    let positions = crate::circle::profile_positions(g, x)?;
    let mut candidates: Vec<Rational> = Vec::new();
    candidates.extend(positions.iter().cloned());
    candidates.extend(positions.iter().map(|p| antipode(&c, p)));
    let mut sorted = positions.clone();
    sorted.sort();
    sorted.dedup();
    for i in 0..sorted.len() {
        let a = &sorted[i];
        let b = &sorted[(i + 1) % sorted.len()];
        let gap = rem_euclid(&(b - a), &c);
        candidates.push(rem_euclid(&(a + gap / rint(2)), &c));
    }
    for v in 0..g.n_vertices() {
        candidates.push(g.circle_position(&Point::Vertex(v))?);
    }
    candidates.sort();
    candidates.dedup();

    let mut best: Option<(Rational, Rational)> = None;
    for cand in candidates {
        let value: Rational = positions
            .iter()
            .map(|p| circle_distance(&c, &cand, p))
            .sum();
        let better = match &best {
            None => true,
            Some((v, p)) => value < *v || (value == *v && cand < *p),
        };
        if better {
            best = Some((value, cand));
        }
    }
    let (value, pos) = best.unwrap();
    let point = g.circle_point(&pos)?;
    // Position order and canonical point order can disagree on ties;
    // re-normalize the tie-break to canonical point order.
    Ok(Optimum { point, value, approximate: false })
}

/// Exact 1-center on a circle: the covering-arc center when the agents
/// fit in a semicircle (value: half the covering length), otherwise the
/// antipode of the longest gap's midpoint (value: (c - gap)/2).
fn circle_optimal_max(g: &MetricGraph, x: &LocationProfile) -> Result<Optimum, Error> {
    let c = g.circumference()?;
    let positions = crate::circle::profile_positions(g, x)?;
    let analysis = semicircle_analysis(&c, &positions)?;
    if analysis.on_semicircle {
        let len = &analysis.covering_arc.length;
        let pos = rem_euclid(&(&analysis.covering_arc.start + len / rint(2)), &c);
        Ok(Optimum {
            point: g.circle_point(&pos)?,
            value: len / rint(2),
            approximate: false,
        })
    } else {
        let gap = &analysis.longest_gap;
        let gap_mid = rem_euclid(&(&analysis.covering_arc.end + gap / rint(2)), &c);
        let pos = antipode(&c, &gap_mid);
        Ok(Optimum {
            point: g.circle_point(&pos)?,
            value: (&c - gap) / rint(2),
            approximate: false,
        })
    }
}

/// Optimal social cost: exact tree median, exact circle candidate
/// enumeration, or a grid oracle at `resolution` on general graphs.
pub fn optimal_social(
    g: &MetricGraph,
    x: &LocationProfile,
    resolution: Option<&Rational>,
) -> Result<Optimum, Error> {
    match g.topology() {
        Topology::Line | Topology::Tree => {
            let point = tree_median(g, x)?;
            let value = social_cost_at(g, &point, x)?;
            Ok(Optimum { point, value, approximate: false })
        }
        Topology::Circle => circle_optimal_social(g, x),
        Topology::General => {
            let res = resolution.cloned().unwrap_or_else(|| default_resolution(g));
            GridOracle::new(res).optimal(g, x, Objective::Social)
        }
    }
}

/// Optimal maximum cost: exact tree center, exact circle formula, or a
/// grid oracle on general graphs.
pub fn optimal_max(
    g: &MetricGraph,
    x: &LocationProfile,
    resolution: Option<&Rational>,
) -> Result<Optimum, Error> {
    match g.topology() {
        Topology::Line | Topology::Tree => {
            let point = tree_center(g, x)?;
            let value = max_cost_at(g, &point, x)?;
            Ok(Optimum { point, value, approximate: false })
        }
        Topology::Circle => circle_optimal_max(g, x),
        Topology::General => {
            let res = resolution.cloned().unwrap_or_else(|| default_resolution(g));
            GridOracle::new(res).optimal(g, x, Objective::Max)
        }
    }
}

/// Full cost breakdown of a mechanism outcome against a profile.
#[derive(Debug, Clone)]
pub struct CostReport {
    pub social_cost: Rational,
    pub max_cost: Rational,
    pub per_agent: Vec<Rational>,
    pub opt_social: Optimum,
    pub opt_max: Optimum,
    pub sc_ratio: RatioValue,
    pub mc_ratio: RatioValue,
}

impl CostReport {
    pub fn build(
        g: &MetricGraph,
        x: &LocationProfile,
        outcome: &LocationDistribution,
        resolution: Option<&Rational>,
    ) -> Result<CostReport, Error> {
        let per_agent: Vec<Rational> = x
            .points()
            .iter()
            .map(|p| expected_cost(g, outcome, p))
            .collect::<Result<_, _>>()?;
        let sc: Rational = per_agent.iter().cloned().sum();
        let mc = max_cost(g, outcome, x)?;
        debug_assert_eq!(sc, social_cost(g, outcome, x)?);
        debug_assert!(mc >= per_agent.iter().max().cloned().unwrap());
        let opt_social = optimal_social(g, x, resolution)?;
        let opt_max = optimal_max(g, x, resolution)?;
        let sc_ratio = RatioValue::of(&sc, &opt_social.value);
        let mc_ratio = RatioValue::of(&mc, &opt_max.value);
        Ok(CostReport {
            social_cost: sc,
            max_cost: mc,
            per_agent,
            opt_social,
            opt_max,
            sc_ratio,
            mc_ratio,
        })
    }

    pub fn to_json(&self, g: &MetricGraph) -> Value {
        json!({
            "social_cost": format_rational(&self.social_cost),
            "max_cost": format_rational(&self.max_cost),
            "per_agent": self.per_agent.iter().map(format_rational).collect::<Vec<_>>(),
            "opt_social": self.opt_social.to_json(g),
            "opt_max": self.opt_max.to_json(g),
            "sc_ratio": self.sc_ratio.to_json(),
            "mc_ratio": self.mc_ratio.to_json(),
        })
    }
}

/// Lipschitz bound used when validating exact optima against the grid
/// oracle: costs change by at most n (social) or 1 (max) per unit of
/// facility movement, and some grid point lies within `resolution` of
/// the true optimum.
pub fn grid_tolerance(x: &LocationProfile, objective: Objective, resolution: &Rational) -> Rational {
    match objective {
        Objective::Social => rat(x.len() as i64, 1) * resolution,
        Objective::Max => resolution.clone(),
    }
}

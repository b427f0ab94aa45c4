//! The mechanisms: random dictator, left-right-middle, random center,
//! the circle hybrid, tree median, dictatorship, and the tree center
//! lottery.
//!
//! Every mechanism returns a [`LocationDistribution`] — an exact
//! finite-support distribution over points (deterministic mechanisms
//! return a point mass). Mechanisms never sample; drawing an outcome is
//! the job of a separate seeded sampler, because strategyproofness
//! checks need the distribution itself.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::circle::{antipode, semicircle_analysis, Arc};
use crate::error::Error;
use crate::graph::{
    path_center, DistanceField, EdgeId, LocationProfile, MetricGraph, Point, Topology, VertexId,
};
use crate::rational::{rat, rem_euclid, rint, Rational};

/// Finite-support probability distribution over points. Probabilities
/// are positive rationals summing to exactly 1; support points are
/// distinct (coincident entries merge) and stored in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocationDistribution {
    support: Vec<(Point, Rational)>,
}

impl LocationDistribution {
    pub fn new(entries: Vec<(Point, Rational)>) -> Result<Self, Error> {
        let mut entries: Vec<(Point, Rational)> = entries
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        if entries.iter().any(|(_, p)| p < &Rational::zero()) {
            return Err(Error::InvalidParameter("negative probability".into()));
        }
        entries.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let mut merged: Vec<(Point, Rational)> = Vec::with_capacity(entries.len());
        for (point, prob) in entries {
            match merged.last_mut() {
                Some((last, acc)) if *last == point => *acc += prob,
                _ => merged.push((point, prob)),
            }
        }
        let total: Rational = merged.iter().map(|(_, p)| p.clone()).sum();
        if total != rint(1) {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(LocationDistribution { support: merged })
    }

    pub fn point_mass(p: Point) -> Self {
        LocationDistribution { support: vec![(p, rint(1))] }
    }

    pub fn support(&self) -> &[(Point, Rational)] {
        &self.support
    }

    pub fn is_point_mass(&self) -> bool {
        self.support.len() == 1
    }

    pub fn probability_of(&self, p: &Point) -> Rational {
        self.support
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, prob)| prob.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn to_json(&self, g: &MetricGraph) -> serde_json::Value {
        serde_json::Value::Array(
            self.support
                .iter()
                .map(|(p, prob)| {
                    serde_json::json!({
                        "point": p.to_json(g),
                        "probability": crate::rational::format_rational(prob),
                    })
                })
                .collect(),
        )
    }
}

/// A pluggable mechanism: anything mapping profiles to distributions.
/// `Sync` so verifiers can evaluate candidates concurrently.
pub trait Mechanism: Sync {
    fn name(&self) -> String;
    fn run(&self, g: &MetricGraph, x: &LocationProfile) -> Result<LocationDistribution, Error>;
}

/// Identifier for the built-in mechanisms, used as CLI names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MechanismId {
    RandomDictator,
    Lrm,
    Rc,
    HybridCircle,
    TreeMedian,
    Dictator(usize),
    TreeCenterLottery,
}

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismId::RandomDictator => write!(f, "random-dictator"),
            MechanismId::Lrm => write!(f, "lrm"),
            MechanismId::Rc => write!(f, "rc"),
            MechanismId::HybridCircle => write!(f, "hybrid"),
            MechanismId::TreeMedian => write!(f, "tree-median"),
            MechanismId::Dictator(i) => write!(f, "dictator:{i}"),
            MechanismId::TreeCenterLottery => write!(f, "tree-center-lottery"),
        }
    }
}

impl FromStr for MechanismId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if let Some(idx) = s.strip_prefix("dictator:") {
            let i: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad dictator index {idx:?}")))?;
            return Ok(MechanismId::Dictator(i));
        }
        match s {
            "random-dictator" | "rd" => Ok(MechanismId::RandomDictator),
            "lrm" => Ok(MechanismId::Lrm),
            "rc" | "random-center" => Ok(MechanismId::Rc),
            "hybrid" | "hybrid-circle" => Ok(MechanismId::HybridCircle),
            "tree-median" | "median" => Ok(MechanismId::TreeMedian),
            "dictator" => Ok(MechanismId::Dictator(0)),
            "tree-center-lottery" | "center-lottery" => Ok(MechanismId::TreeCenterLottery),
            other => Err(Error::Parse(format!("unknown mechanism {other:?}"))),
        }
    }
}

impl Mechanism for MechanismId {
    fn name(&self) -> String {
        self.to_string()
    }

    fn run(&self, g: &MetricGraph, x: &LocationProfile) -> Result<LocationDistribution, Error> {
        match self {
            MechanismId::RandomDictator => random_dictator(x),
            MechanismId::Lrm => lrm(g, x),
            MechanismId::Rc => rc(g, x),
            MechanismId::HybridCircle => hybrid_circle(g, x),
            MechanismId::TreeMedian => tree_median(g, x).map(LocationDistribution::point_mass),
            MechanismId::Dictator(i) => dictator(x, *i).map(LocationDistribution::point_mass),
            MechanismId::TreeCenterLottery => tree_center_lottery(g, x),
        }
    }
}

/// Probability 1/n on each reported location (coincident agents merge
/// weights). Strategyproof on every graph.
pub fn random_dictator(x: &LocationProfile) -> Result<LocationDistribution, Error> {
    let n = x.len();
    let w = rat(1, n as i64);
    LocationDistribution::new(x.points().iter().map(|p| (p.clone(), w.clone())).collect())
}

/// Returns agent `i`'s reported location unchanged.
pub fn dictator(x: &LocationProfile, i: usize) -> Result<Point, Error> {
    if i >= x.len() {
        return Err(Error::IndexOutOfRange { index: i, len: x.len() });
    }
    Ok(x.point(i).clone())
}

/// Left-right-middle: 1/4 on the leftmost agent, 1/4 on the rightmost,
/// 1/2 on the midpoint between them. On a line the interval is the
/// whole graph; on a circle the profile must fit in a closed
/// semicircle, and the minimal covering arc is the interval.
pub fn lrm(g: &MetricGraph, x: &LocationProfile) -> Result<LocationDistribution, Error> {
    x.validate_on(g)?;
    match g.topology() {
        Topology::Line => {
            let coords: Vec<Rational> = x
                .points()
                .iter()
                .map(|p| g.line_coordinate(p))
                .collect::<Result<_, _>>()?;
            let left = coords.iter().min().unwrap().clone();
            let right = coords.iter().max().unwrap().clone();
            let mid = (&left + &right) / rint(2);
            LocationDistribution::new(vec![
                (g.line_point(&left)?, rat(1, 4)),
                (g.line_point(&right)?, rat(1, 4)),
                (g.line_point(&mid)?, rat(1, 2)),
            ])
        }
        Topology::Circle => {
            let c = g.circumference()?;
            let positions = crate::circle::profile_positions(g, x)?;
            let analysis = semicircle_analysis(&c, &positions)?;
            if !analysis.on_semicircle {
                return Err(Error::CoveringArcTooLong);
            }
            lrm_on_arc(g, &c, &analysis.covering_arc)
        }
        _ => Err(g.wrong_topology("lrm", "line or circle")),
    }
}

/// LRM restricted to a covering arc whose endpoints are the extreme
/// agents. The midpoint is taken inside the arc, so an arc of exactly
/// half the circumference stays unambiguous.
fn lrm_on_arc(g: &MetricGraph, c: &Rational, covering: &Arc) -> Result<LocationDistribution, Error> {
    let left = g.circle_point(&covering.start)?;
    let right = g.circle_point(&covering.end)?;
    let mid_pos = rem_euclid(&(&covering.start + &covering.length / rint(2)), c);
    let mid = g.circle_point(&mid_pos)?;
    LocationDistribution::new(vec![
        (left, rat(1, 4)),
        (right, rat(1, 4)),
        (mid, rat(1, 2)),
    ])
}

/// Random center: the center of each arc between circularly adjacent
/// antipodal points, with probability proportional to the arc's length.
/// Zero-length arcs (duplicate agents) get zero probability and are
/// dropped. Requires a profile not contained in one semicircle.
pub fn rc(g: &MetricGraph, x: &LocationProfile) -> Result<LocationDistribution, Error> {
    x.validate_on(g)?;
    if !g.is_circle() {
        return Err(g.wrong_topology("rc", "circle"));
    }
    let c = g.circumference()?;
    let positions = crate::circle::profile_positions(g, x)?;
    let analysis = semicircle_analysis(&c, &positions)?;
    if analysis.on_semicircle {
        return Err(Error::ProfileOnSemicircle);
    }
    LocationDistribution::new(rc_support(g, &c, &positions)?)
}

fn rc_support(
    g: &MetricGraph,
    c: &Rational,
    positions: &[Rational],
) -> Result<Vec<(Point, Rational)>, Error> {
    let mut antipodes: Vec<Rational> = positions.iter().map(|p| antipode(c, p)).collect();
    antipodes.sort();
    antipodes.dedup();
    let m = antipodes.len();
    let mut entries = Vec::with_capacity(m);
    for i in 0..m {
        let start = &antipodes[i];
        let end = &antipodes[(i + 1) % m];
        let len = rem_euclid(&(end - start), c);
        if len.is_zero() {
            continue;
        }
        let center = rem_euclid(&(start + &len / rint(2)), c);
        entries.push((g.circle_point(&center)?, &len / c));
    }
    Ok(entries)
}

/// The circle hybrid: LRM on the covering arc when the agents fit in a
/// closed semicircle, random center otherwise.
pub fn hybrid_circle(g: &MetricGraph, x: &LocationProfile) -> Result<LocationDistribution, Error> {
    x.validate_on(g)?;
    if !g.is_circle() {
        return Err(g.wrong_topology("hybrid", "circle"));
    }
    let c = g.circumference()?;
    let positions = crate::circle::profile_positions(g, x)?;
    let analysis = semicircle_analysis(&c, &positions)?;
    if analysis.on_semicircle {
        lrm_on_arc(g, &c, &analysis.covering_arc)
    } else {
        LocationDistribution::new(rc_support(g, &c, &positions)?)
    }
}

/// Which branch [`hybrid_circle`] takes for a profile.
pub fn hybrid_branch(g: &MetricGraph, x: &LocationProfile) -> Result<bool, Error> {
    let c = g.circumference()?;
    let positions = crate::circle::profile_positions(g, x)?;
    Ok(semicircle_analysis(&c, &positions)?.on_semicircle)
}

/// Median of a tree profile via root-anchored descent: starting from
/// the lowest-id vertex, repeatedly move into the unique component
/// holding more than half the agents, and stop at the first point where
/// no component exceeds half. The output minimizes social cost; the
/// fixed root makes the even-`n` plateau case deterministic.
pub fn tree_median(g: &MetricGraph, x: &LocationProfile) -> Result<Point, Error> {
    if !g.is_tree() {
        return Err(g.wrong_topology("tree_median", "tree"));
    }
    x.validate_on(g)?;
    let n = x.len();
    let mut current: VertexId = 0;
    for _ in 0..=g.n_vertices() {
        // Branch of each vertex relative to `current`: the incident
        // edge at `current` through which it is reached.
        let mut first_edge: Vec<Option<EdgeId>> = vec![None; g.n_vertices()];
        let mut queue = VecDeque::new();
        let mut visited = vec![false; g.n_vertices()];
        visited[current] = true;
        queue.push_back(current);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in g.neighbors(v) {
                if !visited[w] {
                    visited[w] = true;
                    first_edge[w] = if v == current { Some(e) } else { first_edge[v] };
                    queue.push_back(w);
                }
            }
        }
        let branch_of = |p: &Point| -> Option<EdgeId> {
            match p {
                Point::Vertex(v) if *v == current => None,
                Point::Vertex(v) => first_edge[*v],
                Point::Interior { edge, .. } => {
                    let e = g.edge(*edge);
                    if e.u == current || e.v == current {
                        Some(*edge)
                    } else {
                        first_edge[e.u]
                    }
                }
            }
        };
        let mut heavy: Option<EdgeId> = None;
        for &(e, _) in g.neighbors(current) {
            let count = x.points().iter().filter(|p| branch_of(p) == Some(e)).count();
            if 2 * count > n {
                heavy = Some(e);
                break;
            }
        }
        let Some(e) = heavy else {
            return Ok(Point::Vertex(current));
        };
        let edge = g.edge(e);
        let toward = if edge.u == current { edge.v } else { edge.u };
        let total_branch = x.points().iter().filter(|p| branch_of(p) == Some(e)).count();
        // Interior agents on this edge, offsets measured from `current`.
        let mut offsets: Vec<Rational> = x
            .points()
            .iter()
            .filter_map(|p| match p {
                Point::Interior { edge: pe, offset } if *pe == e => {
                    Some(if edge.u == current { offset.clone() } else { &edge.length - offset })
                }
                _ => None,
            })
            .collect();
        offsets.sort();
        let interior_count = offsets.len();
        let s_beyond = total_branch - interior_count;
        // Scan distinct offsets ascending; stop at the first point
        // where the far side no longer exceeds half the agents.
        let mut passed = 0usize;
        let mut stop: Option<Rational> = None;
        let mut idx = 0;
        while idx < offsets.len() {
            let t = offsets[idx].clone();
            let mut multiplicity = 0;
            while idx < offsets.len() && offsets[idx] == t {
                multiplicity += 1;
                idx += 1;
            }
            passed += multiplicity;
            let beyond = s_beyond + (interior_count - passed);
            if 2 * beyond <= n {
                stop = Some(t);
                break;
            }
        }
        match stop {
            Some(t) => {
                let offset = if edge.u == current { t } else { &edge.length - &t };
                return Point::on_edge(g, e, offset);
            }
            None => current = toward,
        }
    }
    unreachable!("median descent did not terminate");
}

/// The unique minimizer of the maximum cost on a tree: the midpoint of
/// a diametral pair of agents, found by a double sweep.
pub fn tree_center(g: &MetricGraph, x: &LocationProfile) -> Result<Point, Error> {
    if !g.is_tree() {
        return Err(g.wrong_topology("tree_center", "tree"));
    }
    x.validate_on(g)?;
    let farthest_from = |p: &Point| -> Result<usize, Error> {
        let field = DistanceField::new(g, p)?;
        let mut best = 0usize;
        let mut best_d = field.to_point(x.point(0));
        for i in 1..x.len() {
            let d = field.to_point(x.point(i));
            if d > best_d {
                best_d = d;
                best = i;
            }
        }
        Ok(best)
    };
    let a = farthest_from(x.point(0))?;
    let b = farthest_from(x.point(a))?;
    path_center(g, x.point(a), x.point(b))
}

/// Tree center lottery: probability 1/(n+2) on each reported location
/// and 2/(n+2) on the center of the tree with respect to the profile.
pub fn tree_center_lottery(
    g: &MetricGraph,
    x: &LocationProfile,
) -> Result<LocationDistribution, Error> {
    if !g.is_tree() {
        return Err(g.wrong_topology("tree_center_lottery", "tree"));
    }
    let n = x.len() as i64;
    let center = tree_center(g, x)?;
    let mut entries: Vec<(Point, Rational)> = x
        .points()
        .iter()
        .map(|p| (p.clone(), rat(1, n + 2)))
        .collect();
    entries.push((center, rat(2, n + 2)));
    LocationDistribution::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{expected_cost, max_cost, social_cost};
    use crate::rational::rat;

    fn unit_circle() -> MetricGraph {
        let labels = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        let len = rat(1, 4);
        let edges = (0..4).map(|i| (i, (i + 1) % 4, len.clone())).collect();
        MetricGraph::new(labels, edges).unwrap()
    }

    fn unit_line() -> MetricGraph {
        MetricGraph::new(vec!["a".into(), "b".into()], vec![(0, 1, rint(1))]).unwrap()
    }

    fn circle_profile(g: &MetricGraph, positions: &[(i64, i64)]) -> LocationProfile {
        LocationProfile::new(
            positions
                .iter()
                .map(|(n, d)| g.circle_point(&rat(*n, *d)).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn line_profile(g: &MetricGraph, coords: &[(i64, i64)]) -> LocationProfile {
        LocationProfile::new(
            coords
                .iter()
                .map(|(n, d)| g.line_point(&rat(*n, *d)).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn random_dictator_merges_coincident_agents() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(0, 1), (0, 1), (3, 10)]);
        let d = random_dictator(&x).unwrap();
        assert_eq!(d.support().len(), 2);
        assert_eq!(d.probability_of(&g.circle_point(&rat(0, 1)).unwrap()), rat(2, 3));
        assert_eq!(d.probability_of(&g.circle_point(&rat(3, 10)).unwrap()), rat(1, 3));
        assert_eq!(social_cost(&g, &d, &x).unwrap(), rat(2, 5));
    }

    #[test]
    fn random_dictator_point_mass_and_symmetry() {
        let g = unit_line();
        let all_same = line_profile(&g, &[(1, 2), (1, 2), (1, 2)]);
        let d = random_dictator(&all_same).unwrap();
        assert!(d.is_point_mass());

        let two = line_profile(&g, &[(0, 1), (1, 1)]);
        let d2 = random_dictator(&two).unwrap();
        assert_eq!(d2.probability_of(&Point::vertex(0)), rat(1, 2));
        assert_eq!(d2.probability_of(&Point::vertex(1)), rat(1, 2));
    }

    #[test]
    fn lrm_line_three_quarters_split() {
        let g = unit_line();
        let x = line_profile(&g, &[(0, 1), (2, 5)]);
        let d = lrm(&g, &x).unwrap();
        assert_eq!(d.probability_of(&g.line_point(&rat(0, 1)).unwrap()), rat(1, 4));
        assert_eq!(d.probability_of(&g.line_point(&rat(2, 5)).unwrap()), rat(1, 4));
        assert_eq!(d.probability_of(&g.line_point(&rat(1, 5)).unwrap()), rat(1, 2));
        assert_eq!(max_cost(&g, &d, &x).unwrap(), rat(3, 10));
    }

    #[test]
    fn lrm_interior_agents_are_ignored() {
        let g = unit_line();
        let x = line_profile(&g, &[(0, 1), (1, 5), (1, 1)]);
        let d = lrm(&g, &x).unwrap();
        assert_eq!(d.probability_of(&Point::vertex(0)), rat(1, 4));
        assert_eq!(d.probability_of(&Point::vertex(1)), rat(1, 4));
        assert_eq!(d.probability_of(&g.line_point(&rat(1, 2)).unwrap()), rat(1, 2));
    }

    #[test]
    fn lrm_coincident_profile_collapses() {
        let g = unit_line();
        let x = line_profile(&g, &[(1, 3), (1, 3)]);
        let d = lrm(&g, &x).unwrap();
        assert!(d.is_point_mass());
        assert_eq!(d.probability_of(&g.line_point(&rat(1, 3)).unwrap()), rint(1));
    }

    #[test]
    fn rc_equilateral_thirds() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(0, 1), (1, 3), (2, 3)]);
        let d = rc(&g, &x).unwrap();
        for (n, dd) in [(0i64, 1i64), (1, 3), (2, 3)] {
            let p = g.circle_point(&rat(n, dd)).unwrap();
            assert_eq!(d.probability_of(&p), rat(1, 3));
        }
        for i in 0..3 {
            assert_eq!(expected_cost(&g, &d, x.point(i)).unwrap(), rat(2, 9));
        }
    }

    #[test]
    fn rc_uneven_profile() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(0, 1), (3, 10), (11, 20)]);
        let d = rc(&g, &x).unwrap();
        let expect = [
            ((11i64, 40i64), (9i64, 20i64)),
            ((13, 20), (3, 10)),
            ((37, 40), (1, 4)),
        ];
        for ((pn, pd), (wn, wd)) in expect {
            let p = g.circle_point(&rat(pn, pd)).unwrap();
            assert_eq!(d.probability_of(&p), rat(wn, wd), "at {pn}/{pd}");
        }
        assert_eq!(max_cost(&g, &d, &x).unwrap(), rat(129, 400));
    }

    #[test]
    fn rc_rejects_semicircle_profiles() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(0, 1), (2, 5)]);
        assert!(matches!(rc(&g, &x), Err(Error::ProfileOnSemicircle)));
    }

    #[test]
    fn hybrid_picks_the_right_branch() {
        let g = unit_circle();
        let narrow = circle_profile(&g, &[(0, 1), (2, 5)]);
        let d = hybrid_circle(&g, &narrow).unwrap();
        assert_eq!(d.probability_of(&g.circle_point(&rat(1, 5)).unwrap()), rat(1, 2));

        let wide = circle_profile(&g, &[(0, 1), (3, 10), (11, 20)]);
        let d = hybrid_circle(&g, &wide).unwrap();
        assert_eq!(d.support().len(), 3);
        assert_eq!(d.probability_of(&g.circle_point(&rat(11, 40)).unwrap()), rat(9, 20));

        // Exactly half the circumference still goes to the LRM branch.
        let boundary = circle_profile(&g, &[(0, 1), (1, 2)]);
        let d = hybrid_circle(&g, &boundary).unwrap();
        assert_eq!(d.probability_of(&g.circle_point(&rat(1, 4)).unwrap()), rat(1, 2));
        assert_eq!(d.probability_of(&g.circle_point(&rat(0, 1)).unwrap()), rat(1, 4));
    }

    #[test]
    fn tree_median_odd_profile_is_middle_agent() {
        let g = unit_line();
        let x = line_profile(&g, &[(0, 1), (3, 10), (1, 1)]);
        let m = tree_median(&g, &x).unwrap();
        assert_eq!(g.line_coordinate(&m).unwrap(), rat(3, 10));
    }

    #[test]
    fn tree_median_star_balances_at_center() {
        let g = MetricGraph::new(
            vec!["c".into(), "u1".into(), "u2".into(), "u3".into()],
            vec![(0, 1, rint(1)), (0, 2, rint(1)), (0, 3, rint(1))],
        )
        .unwrap();
        let x = LocationProfile::new(vec![
            Point::vertex(1),
            Point::vertex(2),
            Point::vertex(3),
        ])
        .unwrap();
        assert_eq!(tree_median(&g, &x).unwrap(), Point::vertex(0));
    }

    #[test]
    fn tree_median_coincident_profile() {
        let g = unit_line();
        let p = g.line_point(&rat(2, 7)).unwrap();
        let x = LocationProfile::new(vec![p.clone(), p.clone(), p.clone(), p.clone()]).unwrap();
        assert_eq!(tree_median(&g, &x).unwrap(), p);
    }

    #[test]
    fn dictator_returns_the_agents_point() {
        let g = unit_line();
        let x = line_profile(&g, &[(0, 1), (1, 1)]);
        assert_eq!(dictator(&x, 0).unwrap(), Point::vertex(0));
        assert_eq!(dictator(&x, 1).unwrap(), Point::vertex(1));
        assert!(matches!(dictator(&x, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn tree_center_examples() {
        let g = unit_line();
        let x = line_profile(&g, &[(0, 1), (1, 1)]);
        let c = tree_center(&g, &x).unwrap();
        assert_eq!(g.line_coordinate(&c).unwrap(), rat(1, 2));

        let star = MetricGraph::new(
            vec!["c".into(), "u1".into(), "u2".into(), "u3".into()],
            vec![(0, 1, rint(1)), (0, 2, rint(1)), (0, 3, rint(1))],
        )
        .unwrap();
        let two = LocationProfile::new(vec![Point::vertex(1), Point::vertex(2)]).unwrap();
        assert_eq!(tree_center(&star, &two).unwrap(), Point::vertex(0));

        let single = LocationProfile::new(vec![Point::vertex(2)]).unwrap();
        assert_eq!(tree_center(&star, &single).unwrap(), Point::vertex(2));
    }

    #[test]
    fn tree_center_lottery_two_agents() {
        let g = unit_line();
        let x = line_profile(&g, &[(0, 1), (1, 1)]);
        let d = tree_center_lottery(&g, &x).unwrap();
        assert_eq!(d.probability_of(&Point::vertex(0)), rat(1, 4));
        assert_eq!(d.probability_of(&Point::vertex(1)), rat(1, 4));
        assert_eq!(d.probability_of(&g.line_point(&rat(1, 2)).unwrap()), rat(1, 2));
        assert_eq!(max_cost(&g, &d, &x).unwrap(), rat(3, 4));
    }

    #[test]
    fn tree_center_lottery_coincident_merges_to_mass() {
        let g = unit_line();
        let p = g.line_point(&rat(1, 3)).unwrap();
        let x = LocationProfile::new(vec![p.clone(), p.clone()]).unwrap();
        let d = tree_center_lottery(&g, &x).unwrap();
        assert!(d.is_point_mass());
    }

    #[test]
    fn distribution_rejects_bad_weights() {
        let g = unit_line();
        let p = Point::vertex(0);
        let q = Point::vertex(1);
        assert!(LocationDistribution::new(vec![(p.clone(), rat(1, 2))]).is_err());
        assert!(
            LocationDistribution::new(vec![(p, rat(3, 2)), (q, rat(-1, 2))]).is_err()
        );
        let _ = g;
    }

    #[test]
    fn mechanism_names_round_trip() {
        for id in [
            MechanismId::RandomDictator,
            MechanismId::Lrm,
            MechanismId::Rc,
            MechanismId::HybridCircle,
            MechanismId::TreeMedian,
            MechanismId::Dictator(3),
            MechanismId::TreeCenterLottery,
        ] {
            let parsed: MechanismId = id.to_string().parse().unwrap();
            assert_eq!(parsed, id);
        }
        assert!("nope".parse::<MechanismId>().is_err());
    }

    #[test]
    fn topology_mismatches_are_reported() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(0, 1), (1, 3), (2, 3)]);
        assert!(matches!(
            tree_median(&g, &x),
            Err(Error::WrongTopology { .. })
        ));
        let line = unit_line();
        let lx = line_profile(&line, &[(0, 1), (1, 1)]);
        assert!(matches!(rc(&line, &lx), Err(Error::WrongTopology { .. })));
    }
}

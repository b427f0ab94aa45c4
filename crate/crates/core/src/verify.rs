//! Executable strategyproofness checks.
//!
//! These are necessary-condition audits: a finite candidate set cannot
//! prove strategyproofness over a continuum, so reports say "no
//! profitable deviation found among N candidates", never "SP proven".
//! Candidate sets combine structural points (agent positions, antipodes
//! and arc midpoints on circles, pairwise path centers on trees, all
//! vertices) — where the mechanisms' piecewise behavior has its
//! breakpoints — with a uniform grid as a guard against reasoning
//! errors.

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::circle::antipode;
use crate::costs::{expected_cost, max_cost, optimal_max, optimal_social, Objective, RatioValue};
use crate::error::Error;
use crate::graph::{path_center, LocationProfile, MetricGraph, Point};
use crate::mechanisms::{LocationDistribution, Mechanism};
use crate::rational::{format_rational, rem_euclid, rint, Rational};

/// How a candidate set was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateSource {
    Structural,
    Grid,
    /// Structural points plus a uniform grid — the full audit set.
    Exhaustive,
}

/// Deviation candidates, deduplicated, in deterministic order.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub points: Vec<Point>,
    pub source: CandidateSource,
}

impl CandidateSet {
    fn dedup(mut points: Vec<Point>, source: CandidateSource) -> CandidateSet {
        points.sort_by(|a, b| a.canonical_cmp(b));
        points.dedup();
        CandidateSet { points, source }
    }

    /// Breakpoint-bearing points of the instance: vertices and agent
    /// positions everywhere; antipodes, agent-gap midpoints and
    /// antipode-gap centers on circles; pairwise agent path centers on
    /// trees.
    pub fn structural(g: &MetricGraph, x: &LocationProfile) -> Result<CandidateSet, Error> {
        let mut points: Vec<Point> = (0..g.n_vertices()).map(Point::Vertex).collect();
        points.extend(x.points().iter().cloned());
        if g.is_circle() {
            let c = g.circumference()?;
            let positions = crate::circle::profile_positions(g, x)?;
            for p in &positions {
                points.push(g.circle_point(&antipode(&c, p))?);
            }
            let mut sorted = positions.clone();
            sorted.sort();
            sorted.dedup();
            let m = sorted.len();
            for i in 0..m {
                let gap = rem_euclid(&(&sorted[(i + 1) % m] - &sorted[i]), &c);
                let mid = rem_euclid(&(&sorted[i] + gap / rint(2)), &c);
                points.push(g.circle_point(&mid)?);
            }
            let mut antipodes: Vec<Rational> =
                positions.iter().map(|p| antipode(&c, p)).collect();
            antipodes.sort();
            antipodes.dedup();
            let m = antipodes.len();
            for i in 0..m {
                let gap = rem_euclid(&(&antipodes[(i + 1) % m] - &antipodes[i]), &c);
                let mid = rem_euclid(&(&antipodes[i] + gap / rint(2)), &c);
                points.push(g.circle_point(&mid)?);
            }
        } else if g.is_tree() {
            for i in 0..x.len() {
                for j in (i + 1)..x.len() {
                    points.push(path_center(g, x.point(i), x.point(j))?);
                }
            }
        }
        Ok(CandidateSet::dedup(points, CandidateSource::Structural))
    }

    /// Uniform grid at the given resolution.
    pub fn grid(g: &MetricGraph, resolution: &Rational) -> Result<CandidateSet, Error> {
        Ok(CandidateSet::dedup(g.grid_points(resolution)?, CandidateSource::Grid))
    }

    /// Structural points plus a uniform grid, structural first so that
    /// bounded searches hit the interesting points early.
    pub fn structural_and_grid(
        g: &MetricGraph,
        x: &LocationProfile,
        resolution: &Rational,
    ) -> Result<CandidateSet, Error> {
        let mut points = CandidateSet::structural(g, x)?.points;
        let structural: std::collections::HashSet<Point> = points.iter().cloned().collect();
        for p in g.grid_points(resolution)? {
            if !structural.contains(&p) {
                points.push(p);
            }
        }
        Ok(CandidateSet { points, source: CandidateSource::Exhaustive })
    }
}

/// A profitable deviation found by an audit.
#[derive(Debug, Clone)]
pub struct Deviation {
    pub agent: usize,
    pub point: Point,
    pub gain: Rational,
}

/// Outcome of an SP or GSP audit.
#[derive(Debug, Clone)]
pub struct DeviationReport {
    pub profitable: bool,
    /// Present iff `profitable`; the gain is strictly positive.
    pub best_deviation: Option<Deviation>,
    pub candidates_checked: usize,
    pub candidate_source: CandidateSource,
    /// For coalition audits: the full joint deviation, one entry per
    /// coalition member.
    pub coalition: Option<Vec<(usize, Point)>>,
}

impl DeviationReport {
    pub fn to_json(&self, g: &MetricGraph) -> Value {
        json!({
            "profitable": self.profitable,
            "best_deviation": self.best_deviation.as_ref().map(|d| json!({
                "agent": d.agent,
                "point": d.point.to_json(g),
                "gain": format_rational(&d.gain),
            })),
            "candidates_checked": self.candidates_checked,
            "candidate_source": serde_json::to_value(self.candidate_source).unwrap(),
            "coalition": self.coalition.as_ref().map(|moves| {
                moves
                    .iter()
                    .map(|(i, p)| json!({ "agent": i, "point": p.to_json(g) }))
                    .collect::<Vec<_>>()
            }),
        })
    }
}

/// Single-agent strategyproofness audit: for every agent and every
/// candidate misreport, compares the agent's expected cost after the
/// deviation with its truthful cost, in exact arithmetic. Reports the
/// largest strictly positive gain (ties break to the first agent, then
/// the first candidate in set order). Candidates where the mechanism's
/// own preconditions fail (e.g. a raw RC evaluation pushed onto one
/// semicircle) are skipped, not errors: the mechanism is undefined
/// there.
pub fn check_sp(
    f: &dyn Mechanism,
    g: &MetricGraph,
    x: &LocationProfile,
    candidates: &CandidateSet,
) -> Result<DeviationReport, Error> {
    if candidates.points.is_empty() {
        return Err(Error::InvalidParameter("empty candidate set".into()));
    }
    let truthful = f.run(g, x)?;
    let base: Vec<Rational> = x
        .points()
        .iter()
        .map(|p| expected_cost(g, &truthful, p))
        .collect::<Result<_, _>>()?;

    let n = x.len();
    let m = candidates.points.len();
    let results: Vec<Option<(Rational, usize, usize)>> = (0..n * m)
        .into_par_iter()
        .map(|idx| -> Result<Option<(Rational, usize, usize)>, Error> {
            let i = idx / m;
            let j = idx % m;
            let cand = &candidates.points[j];
            if cand == x.point(i) {
                return Ok(None);
            }
            let deviated = x.with_point(i, cand.clone())?;
            let outcome = match f.run(g, &deviated) {
                Ok(d) => d,
                Err(Error::ProfileOnSemicircle) | Err(Error::CoveringArcTooLong) => {
                    return Ok(None)
                }
                Err(e) => return Err(e),
            };
            let after = expected_cost(g, &outcome, x.point(i))?;
            let gain = &base[i] - &after;
            Ok(Some((gain, i, j)))
        })
        .collect::<Result<_, _>>()?;

    let mut checked = 0usize;
    let mut best: Option<(Rational, usize, usize)> = None;
    for entry in results.into_iter().flatten() {
        checked += 1;
        let better = match &best {
            None => true,
            Some((g0, i0, j0)) => {
                entry.0 > *g0 || (entry.0 == *g0 && (entry.1, entry.2) < (*i0, *j0))
            }
        };
        if better {
            best = Some(entry);
        }
    }
    let best_deviation = best.and_then(|(gain, i, j)| {
        if gain.is_positive() {
            Some(Deviation { agent: i, point: candidates.points[j].clone(), gain })
        } else {
            None
        }
    });
    Ok(DeviationReport {
        profitable: best_deviation.is_some(),
        best_deviation,
        candidates_checked: checked,
        candidate_source: candidates.source,
        coalition: None,
    })
}

/// Per-member gains of a joint deviation: each entry is the member's
/// truthful cost minus its cost after the whole coalition moves.
pub fn coalition_gains(
    f: &dyn Mechanism,
    g: &MetricGraph,
    x: &LocationProfile,
    moves: &[(usize, Point)],
) -> Result<Vec<Rational>, Error> {
    let truthful = f.run(g, x)?;
    let mut deviated = x.clone();
    for (i, p) in moves {
        deviated = deviated.with_point(*i, p.clone())?;
    }
    let outcome = f.run(g, &deviated)?;
    moves
        .iter()
        .map(|(i, _)| {
            let before = expected_cost(g, &truthful, x.point(*i))?;
            let after = expected_cost(g, &outcome, x.point(*i))?;
            Ok(before - after)
        })
        .collect()
}

/// Group strategyproofness audit under the weak notion: a joint
/// deviation counts as profitable only when every coalition member
/// strictly gains. Enumerates coalitions up to `max_coalition` members
/// and joint deviations over the candidate set, in deterministic order,
/// stopping at the first profitable deviation. `budget` caps the number
/// of mechanism evaluations; exceeding it yields
/// [`Error::BudgetExceeded`] carrying the partial (negative) report.
pub fn check_gsp(
    f: &dyn Mechanism,
    g: &MetricGraph,
    x: &LocationProfile,
    max_coalition: usize,
    candidates: &CandidateSet,
    budget: usize,
) -> Result<DeviationReport, Error> {
    if max_coalition <= 1 {
        return check_sp(f, g, x, candidates);
    }
    let n = x.len();
    let truthful = f.run(g, x)?;
    let base: Vec<Rational> = x
        .points()
        .iter()
        .map(|p| expected_cost(g, &truthful, p))
        .collect::<Result<_, _>>()?;
    let m = candidates.points.len();
    let mut checked = 0usize;

    let negative = |checked: usize| DeviationReport {
        profitable: false,
        best_deviation: None,
        candidates_checked: checked,
        candidate_source: candidates.source,
        coalition: None,
    };

    for size in 1..=max_coalition.min(n) {
        let mut members: Vec<usize> = (0..size).collect();
        loop {
            // Odometer over candidate assignments for this coalition.
            let mut assignment = vec![0usize; size];
            loop {
                if checked >= budget {
                    return Err(Error::BudgetExceeded {
                        partial: Box::new(negative(checked)),
                    });
                }
                let moves: Vec<(usize, Point)> = members
                    .iter()
                    .zip(&assignment)
                    .map(|(&i, &j)| (i, candidates.points[j].clone()))
                    .collect();
                if moves.iter().any(|(i, p)| p != x.point(*i)) {
                    let mut deviated = x.clone();
                    for (i, p) in &moves {
                        deviated = deviated.with_point(*i, p.clone())?;
                    }
                    checked += 1;
                    let outcome = match f.run(g, &deviated) {
                        Ok(d) => Some(d),
                        Err(Error::ProfileOnSemicircle) | Err(Error::CoveringArcTooLong) => None,
                        Err(e) => return Err(e),
                    };
                    if let Some(outcome) = outcome {
                        let mut min_gain: Option<Rational> = None;
                        let mut all_gain = true;
                        for (i, _) in &moves {
                            let after = expected_cost(g, &outcome, x.point(*i))?;
                            let gain = &base[*i] - &after;
                            if !gain.is_positive() {
                                all_gain = false;
                                break;
                            }
                            min_gain = Some(match min_gain {
                                None => gain,
                                Some(mg) => mg.min(gain),
                            });
                        }
                        if all_gain {
                            let gain = min_gain.unwrap();
                            let (agent, point) = moves[0].clone();
                            return Ok(DeviationReport {
                                profitable: true,
                                best_deviation: Some(Deviation { agent, point, gain }),
                                candidates_checked: checked,
                                candidate_source: candidates.source,
                                coalition: Some(moves),
                            });
                        }
                    }
                }
                // Advance the odometer.
                let mut k = size;
                loop {
                    if k == 0 {
                        break;
                    }
                    assignment[k - 1] += 1;
                    if assignment[k - 1] < m {
                        break;
                    }
                    assignment[k - 1] = 0;
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
            }
            // Next coalition (lexicographic k-subset).
            let mut k = size;
            loop {
                if k == 0 {
                    break;
                }
                members[k - 1] += 1;
                if members[k - 1] <= n - (size - k) - 1 {
                    for t in k..size {
                        members[t] = members[t - 1] + 1;
                    }
                    break;
                }
                k -= 1;
            }
            if k == 0 {
                break;
            }
        }
    }
    Ok(negative(checked))
}

/// Witness output of [`gsp_circle_witness`].
#[derive(Debug, Clone, Serialize)]
pub struct GspWitness {
    pub witness_index: usize,
    #[serde(with = "crate::rational::fraction_string")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::fraction_string")]
    pub rhs: Rational,
}

/// Searches for an index `i` whose summed distances to the profile `x`
/// do not exceed its summed distances to the profile `y`; on a circle
/// one always exists. Returns the first such index. [`Error::NoWitness`]
/// would falsify the underlying theorem and is a test-failure signal.
pub fn gsp_circle_witness(
    g: &MetricGraph,
    x: &LocationProfile,
    y: &LocationProfile,
) -> Result<GspWitness, Error> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter("profiles must have equal size".into()));
    }
    if !g.is_circle() {
        return Err(g.wrong_topology("gsp_circle_witness", "circle"));
    }
    let c = g.circumference()?;
    let xs = crate::circle::profile_positions(g, x)?;
    let ys = crate::circle::profile_positions(g, y)?;
    witness_positions(&c, &xs, &ys).ok_or(Error::NoWitness)
}

/// Position-level witness search, shared with the exhaustive test
/// oracle.
pub fn witness_positions(c: &Rational, xs: &[Rational], ys: &[Rational]) -> Option<GspWitness> {
    for (i, xi) in xs.iter().enumerate() {
        let lhs: Rational = xs
            .iter()
            .map(|xk| crate::graph::circle_distance(c, xi, xk))
            .sum();
        let rhs: Rational = ys
            .iter()
            .map(|yk| crate::graph::circle_distance(c, xi, yk))
            .sum();
        if lhs <= rhs {
            return Some(GspWitness { witness_index: i, lhs, rhs });
        }
    }
    None
}

/// Empirical approximation ratio of a mechanism on one instance:
/// mechanism cost over optimal cost. The second component is true when
/// the optimum is grid-approximate (general graphs).
pub fn approx_ratio(
    f: &dyn Mechanism,
    g: &MetricGraph,
    x: &LocationProfile,
    objective: Objective,
    resolution: Option<&Rational>,
) -> Result<(RatioValue, bool), Error> {
    let outcome = f.run(g, x)?;
    let (cost, opt) = match objective {
        Objective::Social => {
            let cost = crate::costs::social_cost(g, &outcome, x)?;
            (cost, optimal_social(g, x, resolution)?)
        }
        Objective::Max => {
            let cost = max_cost(g, &outcome, x)?;
            (cost, optimal_max(g, x, resolution)?)
        }
    };
    Ok((RatioValue::of(&cost, &opt.value), opt.approximate))
}

/// Mean-of-coordinates mechanism on a line. Not strategyproof — an
/// agent drags the mean by misreporting — and kept as a control so the
/// audits demonstrably have power, not just soundness.
#[derive(Debug, Clone, Copy)]
pub struct MeanOnLine;

impl Mechanism for MeanOnLine {
    fn name(&self) -> String {
        "mean-on-line".into()
    }

    fn run(&self, g: &MetricGraph, x: &LocationProfile) -> Result<LocationDistribution, Error> {
        if g.topology() != crate::graph::Topology::Line {
            return Err(g.wrong_topology("mean-on-line", "line"));
        }
        let sum: Rational = x
            .points()
            .iter()
            .map(|p| g.line_coordinate(p))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .sum();
        let mean = sum / rint(x.len() as i64);
        Ok(LocationDistribution::point_mass(g.line_point(&mean)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::MechanismId;
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

    fn star3() -> MetricGraph {
        MetricGraph::new(
            vec!["c".into(), "u1".into(), "u2".into(), "u3".into()],
            vec![(0, 1, rint(1)), (0, 2, rint(1)), (0, 3, rint(1))],
        )
        .unwrap()
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

    #[test]
    fn hybrid_passes_grid_audit_on_example_instance() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(0, 1), (3, 10), (11, 20)]);
        let cands = CandidateSet::structural_and_grid(&g, &x, &rat(1, 100)).unwrap();
        let report = check_sp(&MechanismId::HybridCircle, &g, &x, &cands).unwrap();
        assert!(!report.profitable, "unexpected deviation: {report:?}");
        assert!(report.candidates_checked > 100);
    }

    #[test]
    fn mean_control_is_flagged_with_exact_gain() {
        let g = unit_line();
        let x = LocationProfile::new(vec![
            g.line_point(&rat(0, 1)).unwrap(),
            g.line_point(&rat(1, 2)).unwrap(),
        ])
        .unwrap();
        let cands = CandidateSet::structural_and_grid(&g, &x, &rat(1, 4)).unwrap();
        let report = check_sp(&MeanOnLine, &g, &x, &cands).unwrap();
        assert!(report.profitable);
        let dev = report.best_deviation.unwrap();
        assert_eq!(dev.agent, 1);
        assert_eq!(dev.gain, rat(1, 4));
        assert_eq!(g.line_coordinate(&dev.point).unwrap(), rint(1));
    }

    #[test]
    fn single_agent_cannot_profit() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(1, 3)]);
        let cands = CandidateSet::structural(&g, &x).unwrap();
        let report = check_sp(&MechanismId::RandomDictator, &g, &x, &cands).unwrap();
        assert!(!report.profitable);
    }

    #[test]
    fn star_coalition_counterexample_is_found() {
        let g = star3();
        let x = LocationProfile::new(vec![
            Point::vertex(1),
            Point::vertex(2),
            Point::vertex(3),
        ])
        .unwrap();
        let cands = CandidateSet::structural(&g, &x).unwrap();
        let report =
            check_gsp(&MechanismId::RandomDictator, &g, &x, 3, &cands, 1_000_000).unwrap();
        assert!(report.profitable);
        let coalition = report.coalition.unwrap();
        assert_eq!(coalition.len(), 3);
        assert!(coalition.iter().all(|(_, p)| *p == Point::vertex(0)));
        assert_eq!(report.best_deviation.unwrap().gain, rat(1, 3));
    }

    #[test]
    fn coalition_of_one_matches_check_sp() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(0, 1), (2, 5)]);
        let cands = CandidateSet::structural(&g, &x).unwrap();
        let sp = check_sp(&MechanismId::RandomDictator, &g, &x, &cands).unwrap();
        let gsp = check_gsp(&MechanismId::RandomDictator, &g, &x, 1, &cands, 10_000).unwrap();
        assert_eq!(sp.profitable, gsp.profitable);
    }

    #[test]
    fn budget_exhaustion_carries_partial_report() {
        let g = star3();
        let x = LocationProfile::new(vec![
            Point::vertex(1),
            Point::vertex(2),
            Point::vertex(3),
        ])
        .unwrap();
        let cands = CandidateSet::structural(&g, &x).unwrap();
        let err = check_gsp(&MechanismId::RandomDictator, &g, &x, 3, &cands, 3).unwrap_err();
        match err {
            Error::BudgetExceeded { partial } => {
                assert!(!partial.profitable);
                assert_eq!(partial.candidates_checked, 3);
            }
            other => panic!("expected budget error, got {other}"),
        }
    }

    #[test]
    fn witness_trivial_and_hand_computed() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(0, 1), (2, 5)]);
        let w = gsp_circle_witness(&g, &x, &x).unwrap();
        assert_eq!(w.lhs, w.rhs);

        let y = circle_profile(&g, &[(1, 5), (1, 5)]);
        let w = gsp_circle_witness(&g, &x, &y).unwrap();
        assert_eq!(w.witness_index, 0);
        assert_eq!(w.lhs, rat(2, 5));
        assert_eq!(w.rhs, rat(2, 5));
    }

    #[test]
    fn approx_ratio_examples() {
        let g = unit_circle();
        let x = circle_profile(&g, &[(0, 1), (0, 1), (3, 10)]);
        let (ratio, approx) =
            approx_ratio(&MechanismId::RandomDictator, &g, &x, Objective::Social, None).unwrap();
        assert_eq!(ratio, RatioValue::Finite(rat(4, 3)));
        assert!(!approx);

        let line = unit_line();
        let lx = LocationProfile::new(vec![
            line.line_point(&rat(0, 1)).unwrap(),
            line.line_point(&rat(2, 5)).unwrap(),
        ])
        .unwrap();
        let (ratio, _) = approx_ratio(&MechanismId::Lrm, &line, &lx, Objective::Max, None).unwrap();
        assert_eq!(ratio, RatioValue::Finite(rat(3, 2)));

        let coincident = circle_profile(&g, &[(1, 8), (1, 8)]);
        let (ratio, _) =
            approx_ratio(&MechanismId::RandomDictator, &g, &coincident, Objective::Social, None)
                .unwrap();
        assert_eq!(ratio, RatioValue::Finite(rint(1)));
    }
}

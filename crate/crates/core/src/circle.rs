//! Circle-specific machinery: antipodes, arcs with explicit open/closed
//! endpoints, clockwise order, minimal covering arcs, nearly-antipodal
//! pairs and their critical arcs.
//!
//! Everything here works on circular positions in `[0, c)` where `c` is
//! the circumference; increasing position is "clockwise". Use
//! [`MetricGraph::circle_position`](crate::graph::MetricGraph::circle_position)
//! to convert profile points.

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::graph::{LocationProfile, MetricGraph};
use crate::rational::{rem_euclid, rint, Rational};

/// Directed arc on a circle of circumference `c`, walked clockwise from
/// `start` over `length`, with explicit endpoint closure flags. Open
/// and closed arcs are distinct objects here because membership tests
/// must honor the difference exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub start: Rational,
    pub end: Rational,
    pub length: Rational,
    pub clockwise: bool,
    pub closed_start: bool,
    pub closed_end: bool,
}

impl Arc {
    /// Clockwise arc from `start` spanning `length` (taken mod `c`).
    pub fn clockwise(
        c: &Rational,
        start: Rational,
        length: Rational,
        closed_start: bool,
        closed_end: bool,
    ) -> Arc {
        debug_assert!(!length.is_negative() && length <= *c);
        let start = rem_euclid(&start, c);
        let end = rem_euclid(&(&start + &length), c);
        Arc { start, end, length, clockwise: true, closed_start, closed_end }
    }

    /// Exact membership test, honoring wrap-around and closure flags.
    pub fn contains(&self, c: &Rational, pos: &Rational) -> bool {
        let (from, closed_from, closed_to) = if self.clockwise {
            (&self.start, self.closed_start, self.closed_end)
        } else {
            (&self.end, self.closed_end, self.closed_start)
        };
        let t = rem_euclid(&(pos - from), c);
        if t.is_zero() {
            // Also covers the degenerate full-circle arc.
            return closed_from || self.length == *c;
        }
        if t == self.length {
            return closed_to;
        }
        t < self.length
    }
}

/// Antipode of a circular position: the diametrically opposite point.
pub fn antipode(c: &Rational, pos: &Rational) -> Rational {
    rem_euclid(&(pos + c / rint(2)), c)
}

/// Result of scanning the gaps between circularly adjacent agents.
#[derive(Debug, Clone)]
pub struct SemicircleAnalysis {
    /// Largest arc between two circularly adjacent agents.
    pub longest_gap: Rational,
    /// Minimal closed arc containing all agents (complement of the
    /// longest gap). Degenerate (zero length) for a single location.
    pub covering_arc: Arc,
    /// True iff the covering arc fits in a closed semicircle.
    pub on_semicircle: bool,
}

/// Scans sorted circular positions (including the wrap-around gap) for
/// the longest empty arc. When several gaps tie for longest, the
/// covering arc starting at the lowest-indexed agent wins; breaking the
/// tie by agent rather than by position keeps the choice invariant
/// under rotation of the whole profile.
pub fn semicircle_analysis(
    c: &Rational,
    positions: &[Rational],
) -> Result<SemicircleAnalysis, Error> {
    if positions.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let normalized: Vec<Rational> = positions.iter().map(|p| rem_euclid(p, c)).collect();
    let mut sorted = normalized.clone();
    sorted.sort();
    sorted.dedup();
    let min_index_at = |pos: &Rational| -> usize {
        normalized
            .iter()
            .position(|p| p == pos)
            .expect("sorted positions come from the profile")
    };
    let n = sorted.len();
    // (gap length, covering start, agent index at the start) per gap.
    let mut best: Option<(Rational, Rational, usize)> = None;
    for i in 0..n {
        let here = &sorted[i];
        let next = &sorted[(i + 1) % n];
        let gap = if n == 1 { c.clone() } else { rem_euclid(&(next - here), c) };
        let start_index = min_index_at(next);
        let better = match &best {
            None => true,
            Some((g, _, idx)) => gap > *g || (gap == *g && start_index < *idx),
        };
        if better {
            best = Some((gap, next.clone(), start_index));
        }
    }
    let (longest_gap, covering_start, _) = best.unwrap();
    let covering_len = c - &longest_gap;
    let covering_arc = Arc::clockwise(c, covering_start, covering_len.clone(), true, true);
    let on_semicircle = &covering_len * rint(2) <= *c;
    Ok(SemicircleAnalysis { longest_gap, covering_arc, on_semicircle })
}

/// The nearly-antipodal pair structure of a profile: pairs `(i, j)` such
/// that no profile point lies strictly inside the short arc from one
/// point to the other's antipode (in either direction), each with its
/// critical arc (the long open arc between the two antipodes) and the
/// number of defining-profile points on that arc.
#[derive(Debug, Clone)]
pub struct NearlyAntipodal {
    /// Index pairs with `i < j`, lexicographic order.
    pub pairs: Vec<(usize, usize)>,
    /// Critical arc per pair: the circle minus the closed short arc
    /// between the two antipodes.
    pub critical_arcs: Vec<Arc>,
    /// Per-pair count of defining-profile points on the critical arc.
    pub membership_x: Vec<usize>,
}

impl NearlyAntipodal {
    /// Number of pairs; always odd for valid input.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Membership counts of an arbitrary profile (multiset, duplicates
    /// counted with multiplicity) against the critical arcs.
    pub fn membership_counts(&self, c: &Rational, positions: &[Rational]) -> Vec<usize> {
        self.critical_arcs
            .iter()
            .map(|arc| positions.iter().filter(|p| arc.contains(c, p)).count())
            .collect()
    }
}

/// Short open arc between two distinct, non-antipodal positions.
fn short_open_arc(c: &Rational, a: &Rational, b: &Rational) -> Arc {
    let fwd = rem_euclid(&(b - a), c);
    let half = c / rint(2);
    debug_assert!(!fwd.is_zero() && fwd != half);
    if fwd < half {
        Arc::clockwise(c, a.clone(), fwd, false, false)
    } else {
        Arc::clockwise(c, b.clone(), c - fwd, false, false)
    }
}

/// Computes the nearly-antipodal pairs of a profile whose points are
/// pairwise distinct and pairwise non-antipodal; errors otherwise
/// rather than perturbing, since perturbation would silently change the
/// answer.
pub fn nearly_antipodal_pairs(
    c: &Rational,
    positions: &[Rational],
) -> Result<NearlyAntipodal, Error> {
    let n = positions.len();
    if n == 0 {
        return Err(Error::EmptyProfile);
    }
    let pts: Vec<Rational> = positions.iter().map(|p| rem_euclid(p, c)).collect();
    let half = c / rint(2);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = rem_euclid(&(&pts[j] - &pts[i]), c);
            if d.is_zero() || d == half {
                return Err(Error::AntipodalOrDuplicatePoints);
            }
        }
    }

    let mut pairs = Vec::new();
    let mut critical_arcs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let arc_i = short_open_arc(c, &pts[i], &antipode(c, &pts[j]));
            let arc_j = short_open_arc(c, &pts[j], &antipode(c, &pts[i]));
            let blocked = pts.iter().any(|p| arc_i.contains(c, p) || arc_j.contains(c, p));
            if !blocked {
                pairs.push((i, j));
                critical_arcs.push(critical_arc(c, &pts[i], &pts[j]));
            }
        }
    }
    let mut structure = NearlyAntipodal { pairs, critical_arcs, membership_x: Vec::new() };
    structure.membership_x = structure.membership_counts(c, &pts);
    Ok(structure)
}

/// Critical arc of a pair: the circle minus the closed short arc
/// between the two antipodes — the long open arc between them.
fn critical_arc(c: &Rational, xi: &Rational, xj: &Rational) -> Arc {
    let ai = antipode(c, xi);
    let aj = antipode(c, xj);
    let fwd = rem_euclid(&(&aj - &ai), c);
    let half = c / rint(2);
    debug_assert!(!fwd.is_zero() && fwd != half);
    if fwd < half {
        // Short closed arc runs ai -> aj; long open arc is aj -> ai.
        Arc::clockwise(c, aj, c - fwd, false, false)
    } else {
        Arc::clockwise(c, ai, fwd, false, false)
    }
}

/// Circular positions of a profile on a circle graph.
pub fn profile_positions(g: &MetricGraph, x: &LocationProfile) -> Result<Vec<Rational>, Error> {
    x.points().iter().map(|p| g.circle_position(p)).collect()
}

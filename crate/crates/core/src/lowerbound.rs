//! Recursive-tree lower-bound harness.
//!
//! The construction: a unit edge joins a left root and a right root;
//! every left vertex on level d sprouts m children on level d+1 via
//! edges of length 2^d, down to level k, and symmetrically on the right.
//! A chain of profiles starts with half the agents on each root and
//! repeatedly spreads the agents at the currently selected vertex over
//! its children, selecting the child with the largest expected distance
//! from the mechanism's output.
//!
//! For a strategyproof mechanism the selected expected distances
//! dominate the closed-form per-level values, forcing a maximum-cost
//! ratio approaching 2. For a concrete mechanism run through the chain
//! the harness reports the realized numbers next to the closed-form
//! bounds; it never asserts the comparison, since per-instance slack is
//! expected.

use crate::costs::{expected_cost, max_cost, max_cost_at, RatioValue};
use crate::error::Error;
use crate::graph::{LocationProfile, MetricGraph, Point, VertexId};
use crate::mechanisms::Mechanism;
use crate::rational::{pow2, rat, rint, Rational};

/// One level of the construction.
#[derive(Debug, Clone)]
pub struct LevelInfo {
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
    /// Length of the edges entering this level (1 for the root pair's
    /// shared edge at level 0, 2^(d-1) for level d).
    pub edge_length: Rational,
}

#[derive(Debug, Clone)]
pub struct LowerBoundInstance {
    pub m: usize,
    pub k: usize,
    /// Number of agents for the chain; 2·m^k must divide it.
    pub n: usize,
    pub graph: MetricGraph,
    pub left_root: VertexId,
    pub right_root: VertexId,
    pub levels: Vec<LevelInfo>,
    children: Vec<Vec<VertexId>>,
}

/// Builds the recursive tree for branching factor `m` and depth `k`,
/// with the minimum viable agent count 2·m^k attached.
pub fn build_tree(m: usize, k: usize) -> Result<LowerBoundInstance, Error> {
    if m < 2 {
        return Err(Error::InvalidParameter("branching factor m must be at least 2".into()));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("depth k must be at least 1".into()));
    }
    let mut labels: Vec<String> = vec!["l0".into(), "r0".into()];
    let mut edges: Vec<(VertexId, VertexId, Rational)> = vec![(0, 1, rint(1))];
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new(), Vec::new()];
    let mut levels = vec![LevelInfo { left: vec![0], right: vec![1], edge_length: rint(1) }];

    for d in 1..=k {
        let length = pow2((d - 1) as u32);
        let mut level = LevelInfo { left: Vec::new(), right: Vec::new(), edge_length: length.clone() };
        let parents = levels[d - 1].clone();
        for (side_parents, side_level) in [
            (&parents.left, &mut level.left),
            (&parents.right, &mut level.right),
        ] {
            for &parent in side_parents {
                for c in 0..m {
                    let id = labels.len();
                    labels.push(format!("{}.{c}", labels[parent]));
                    edges.push((parent, id, length.clone()));
                    children.push(Vec::new());
                    children[parent].push(id);
                    side_level.push(id);
                }
            }
        }
        levels.push(level);
    }
    let graph = MetricGraph::new(labels, edges)?;
    debug_assert!(graph.is_tree());
    let n = 2 * m.pow(k as u32);
    Ok(LowerBoundInstance { m, k, n, graph, left_root: 0, right_root: 1, levels, children })
}

impl LowerBoundInstance {
    /// Attaches an agent count; 2·m^k must divide it.
    pub fn with_agents(mut self, n: usize) -> Result<Self, Error> {
        let block = 2 * self.m.pow(self.k as u32);
        if n == 0 || n % block != 0 {
            return Err(Error::InvalidParameter(format!(
                "agent count {n} is not a positive multiple of 2*m^k = {block}"
            )));
        }
        self.n = n;
        Ok(self)
    }

    pub fn children_of(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }
}

/// The closed-form value 2 - 1/2^k - 4/m.
pub fn formula_bound(m: usize, k: usize) -> Rational {
    rint(2) - rint(1) / pow2(k as u32) - rat(4, m as i64)
}

/// Per-level closed-form value (2^(d+1) - 1)/2 - (2^(d+1) - (d+2))/m.
pub fn lemma_ind_value(d: usize, m: usize) -> Rational {
    let p = pow2((d + 1) as u32);
    (&p - rint(1)) / rint(2) - (&p - rint(d as i64 + 2)) / rat(m as i64, 1)
}

/// One inductive step of the recursion: (1/m)·(2^d·m + (m-2)·value).
/// The step applied to the closed form dominates the next closed-form
/// value (with equality at d = 0).
pub fn lemma_ind_step(d: usize, m: usize, value: &Rational) -> Rational {
    (pow2(d as u32) * rat(m as i64, 1) + rat(m as i64 - 2, 1) * value) / rat(m as i64, 1)
}

/// Recorded gain for one single-agent move in fine-grained mode.
#[derive(Debug, Clone)]
pub struct StepGain {
    pub level: usize,
    pub agent: usize,
    /// Truthful-cost reduction for the moved agent (whose true location
    /// is the vertex it was moved away from); positive values are
    /// strategyproofness violations of the mechanism under audit.
    pub gain: Rational,
}

/// The profile chain and everything observed along it.
#[derive(Debug, Clone)]
pub struct ProfileChain {
    /// x^0 ... x^k.
    pub profiles: Vec<LocationProfile>,
    /// Selected vertex per level (root side first).
    pub chosen_path: Vec<VertexId>,
    /// E[d(f(x^d), chosen_path[d])] per level.
    pub expected_distances: Vec<Rational>,
    /// Closed-form per-level values, for side-by-side reporting.
    pub bounds: Vec<Rational>,
    /// For d >= 1: E[d(f(x^d), chosen_path[d-1])] — the quantity that
    /// cannot decrease across the agent moves for an SP mechanism.
    pub carried_expected: Vec<Rational>,
    /// Per-move gains in fine-grained mode; empty in block mode.
    pub step_gains: Vec<StepGain>,
    /// Expected maximum cost of the mechanism on the final profile.
    pub final_mc: Rational,
    /// Maximum cost of placing the facility at the level k-1 selected
    /// vertex under the final profile (2^(k-1) by construction).
    pub reference_mc: Rational,
    pub final_ratio: RatioValue,
    pub formula: Rational,
}

/// Runs a mechanism through the profile chain. `one_by_one` moves the
/// agents individually and logs the per-move gain; block mode produces
/// the same profiles with one evaluation per level.
pub fn profile_chain(
    inst: &LowerBoundInstance,
    f: &dyn Mechanism,
    one_by_one: bool,
) -> Result<ProfileChain, Error> {
    let g = &inst.graph;
    let n = inst.n;
    let block = 2 * inst.m.pow(inst.k as u32);
    if n % block != 0 {
        return Err(Error::InvalidParameter(format!(
            "agent count {n} is not a multiple of 2*m^k = {block}"
        )));
    }
    let half = n / 2;
    let mut points = Vec::with_capacity(n);
    points.extend(std::iter::repeat_n(Point::Vertex(inst.left_root), half));
    points.extend(std::iter::repeat_n(Point::Vertex(inst.right_root), half));
    let mut x = LocationProfile::new(points)?;

    let p0 = f.run(g, &x)?;
    let e_left = expected_cost(g, &p0, &Point::Vertex(inst.left_root))?;
    let e_right = expected_cost(g, &p0, &Point::Vertex(inst.right_root))?;
    let (mut selected, e0) = if e_left >= e_right {
        (inst.left_root, e_left)
    } else {
        (inst.right_root, e_right)
    };

    let mut profiles = vec![x.clone()];
    let mut chosen_path = vec![selected];
    let mut expected_distances = vec![e0];
    let mut bounds = vec![lemma_ind_value(0, inst.m)];
    let mut carried_expected = Vec::new();
    let mut step_gains = Vec::new();

    for level in 1..=inst.k {
        let movers: Vec<usize> = (0..n)
            .filter(|&i| *x.point(i) == Point::Vertex(selected))
            .collect();
        let kids = inst.children_of(selected);
        debug_assert_eq!(kids.len(), inst.m);
        debug_assert_eq!(movers.len() % inst.m, 0);
        let per_child = movers.len() / inst.m;

        if one_by_one {
            let mut before = f.run(g, &x)?;
            for (slot, &agent) in movers.iter().enumerate() {
                let target = kids[slot / per_child];
                let moved = x.with_point(agent, Point::Vertex(target))?;
                let after = f.run(g, &moved)?;
                let cost_before = expected_cost(g, &before, &Point::Vertex(selected))?;
                let cost_after = expected_cost(g, &after, &Point::Vertex(selected))?;
                step_gains.push(StepGain { level, agent, gain: cost_before - cost_after });
                x = moved;
                before = after;
            }
        } else {
            let mut moved = x.clone();
            for (slot, &agent) in movers.iter().enumerate() {
                moved = moved.with_point(agent, Point::Vertex(kids[slot / per_child]))?;
            }
            x = moved;
        }

        let p = f.run(g, &x)?;
        carried_expected.push(expected_cost(g, &p, &Point::Vertex(selected))?);
        let mut best: Option<(Rational, VertexId)> = None;
        for &kid in kids {
            let e = expected_cost(g, &p, &Point::Vertex(kid))?;
            let better = match &best {
                None => true,
                Some((be, bv)) => e > *be || (e == *be && kid < *bv),
            };
            if better {
                best = Some((e, kid));
            }
        }
        let (e, kid) = best.expect("m >= 2 children");
        selected = kid;
        profiles.push(x.clone());
        chosen_path.push(selected);
        expected_distances.push(e);
        bounds.push(lemma_ind_value(level, inst.m));
    }

    let final_dist = f.run(g, &x)?;
    let final_mc = max_cost(g, &final_dist, &x)?;
    let reference_vertex = chosen_path[inst.k - 1];
    let reference_mc = max_cost_at(g, &Point::Vertex(reference_vertex), &x)?;
    let final_ratio = RatioValue::of(&final_mc, &reference_mc);

    Ok(ProfileChain {
        profiles,
        chosen_path,
        expected_distances,
        bounds,
        carried_expected,
        step_gains,
        final_mc,
        reference_mc,
        final_ratio,
        formula: formula_bound(inst.m, inst.k),
    })
}

/// Parameter choice for a given agent budget: depth k of order
/// sqrt(log n), the largest branching factor m with 2·m^k <= n, and the
/// largest usable multiple of 2·m^k. Guarantees n_used/(2·m^k) >= 1.
pub fn auto_params(n: usize) -> Result<(usize, usize, usize), Error> {
    if n < 8 {
        return Err(Error::InvalidParameter("auto mode needs at least 8 agents".into()));
    }
    let log2n = (usize::BITS - 1 - n.leading_zeros()) as usize;
    let k = ((log2n as f64).sqrt().floor() as usize).max(1);
    let mut m = 2usize;
    while 2 * (m + 1).pow(k as u32) <= n {
        m += 1;
    }
    let block = 2 * m.pow(k as u32);
    let n_used = (n / block) * block;
    debug_assert!(n_used >= block);
    Ok((m, k, n_used))
}

//! Seeded random instance generation for sweeps, property tests and the
//! table suite. Everything is driven by a ChaCha stream, so a seed
//! pins the whole sequence of instances. Positions and lengths are
//! rationals with small denominators to keep exact arithmetic fast.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circle::semicircle_analysis;
use crate::error::Error;
use crate::graph::{LocationProfile, MetricGraph, Point, VertexId};
use crate::rational::{rat, rem_euclid, Rational};

const DENOMS: [i64; 5] = [12, 60, 360, 720, 997];
const LENGTHS: [(i64, i64); 8] =
    [(1, 4), (1, 3), (1, 2), (2, 3), (1, 1), (3, 2), (2, 1), (3, 1)];

pub struct InstanceGen {
    rng: ChaCha8Rng,
}

impl InstanceGen {
    pub fn new(seed: u64) -> Self {
        InstanceGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform integer in `lo..=hi`.
    pub fn size(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi.max(lo))
    }

    /// Random rational in [0, 1) with a denominator from the pool.
    pub fn unit_fraction(&mut self) -> Rational {
        let d = DENOMS[self.rng.gen_range(0..DENOMS.len())];
        rat(self.rng.gen_range(0..d), d)
    }

    /// Random edge length from the small positive pool.
    pub fn edge_length(&mut self) -> Rational {
        let (n, d) = LENGTHS[self.rng.gen_range(0..LENGTHS.len())];
        rat(n, d)
    }

    /// Circle with 1 to 4 vertices and random edge lengths (the
    /// circumference is their sum).
    pub fn circle(&mut self) -> MetricGraph {
        let v = self.rng.gen_range(1..=4usize);
        let labels: Vec<String> = (0..v).map(|i| format!("v{i}")).collect();
        let edges: Vec<(VertexId, VertexId, Rational)> = (0..v)
            .map(|i| (i, (i + 1) % v, self.edge_length()))
            .collect();
        MetricGraph::new(labels, edges).expect("cycle is a valid circle")
    }

    /// Line with `2..=max_vertices` vertices and random segment lengths.
    pub fn line(&mut self, max_vertices: usize) -> MetricGraph {
        let v = self.rng.gen_range(2..=max_vertices.max(2));
        let labels: Vec<String> = (0..v).map(|i| format!("v{i}")).collect();
        let edges = (0..v - 1).map(|i| (i, i + 1, self.edge_length())).collect();
        MetricGraph::new(labels, edges).expect("path is a valid line")
    }

    /// Random tree via uniform parent choice.
    pub fn tree(&mut self, max_vertices: usize) -> MetricGraph {
        let v = self.rng.gen_range(2..=max_vertices.max(2));
        let labels: Vec<String> = (0..v).map(|i| format!("v{i}")).collect();
        let edges = (1..v)
            .map(|i| (self.rng.gen_range(0..i), i, self.edge_length()))
            .collect();
        MetricGraph::new(labels, edges).expect("parent forest is a tree")
    }

    /// Random connected graph that is neither a tree nor a single
    /// cycle: a tree plus one or two chords, retried when the chords
    /// happen to close the whole graph into one cycle. Needs 4+
    /// vertices.
    pub fn general(&mut self, max_vertices: usize) -> MetricGraph {
        loop {
            let v = self.rng.gen_range(4..=max_vertices.max(4));
            let labels: Vec<String> = (0..v).map(|i| format!("v{i}")).collect();
            let mut edges: Vec<(VertexId, VertexId, Rational)> = (1..v)
                .map(|i| (self.rng.gen_range(0..i), i, self.edge_length()))
                .collect();
            let mut present: std::collections::HashSet<(usize, usize)> =
                edges.iter().map(|(u, w, _)| (*u.min(w), *u.max(w))).collect();
            let extra = self.rng.gen_range(1..=2usize);
            let mut added = 0;
            for _ in 0..50 {
                if added == extra {
                    break;
                }
                let a = self.rng.gen_range(0..v);
                let b = self.rng.gen_range(0..v);
                let key = (a.min(b), a.max(b));
                if a != b && !present.contains(&key) {
                    present.insert(key);
                    edges.push((a, b, self.edge_length()));
                    added += 1;
                }
            }
            let g = MetricGraph::new(labels, edges).expect("chorded tree is valid");
            if g.topology() == crate::graph::Topology::General {
                return g;
            }
        }
    }

    /// Uniform-ish random point: mostly edge interiors, occasionally a
    /// vertex.
    pub fn point_on(&mut self, g: &MetricGraph) -> Point {
        if self.rng.gen_bool(0.15) {
            return Point::Vertex(self.rng.gen_range(0..g.n_vertices()));
        }
        let e = self.rng.gen_range(0..g.n_edges());
        let offset = &g.edge(e).length * self.unit_fraction();
        Point::on_edge(g, e, offset).expect("offset within edge")
    }

    pub fn profile(&mut self, g: &MetricGraph, n: usize) -> LocationProfile {
        LocationProfile::new((0..n).map(|_| self.point_on(g)).collect()).expect("n >= 1")
    }

    /// Random circular positions in [0, c).
    pub fn circle_positions(&mut self, c: &Rational, n: usize) -> Vec<Rational> {
        (0..n).map(|_| c * self.unit_fraction()).collect()
    }

    /// Circle profile guaranteed to span more than a semicircle
    /// (n >= 3): rejection sampling with a planted spread fallback.
    pub fn profile_not_on_semicircle(
        &mut self,
        g: &MetricGraph,
        n: usize,
    ) -> Result<LocationProfile, Error> {
        assert!(n >= 3, "a semicircle always covers fewer than 3 points");
        let c = g.circumference()?;
        for _ in 0..200 {
            let positions = self.circle_positions(&c, n);
            if !semicircle_analysis(&c, &positions)?.on_semicircle {
                let points = positions
                    .iter()
                    .map(|p| g.circle_point(p))
                    .collect::<Result<Vec<_>, _>>()?;
                return LocationProfile::new(points);
            }
        }
        // Plant a spread triple; any superset still spans over half.
        let mut positions = vec![
            Rational::from_integer(0.into()),
            &c / rat(3, 1),
            &c * rat(2, 3),
        ];
        positions.extend(self.circle_positions(&c, n - 3));
        let points = positions
            .iter()
            .map(|p| g.circle_point(p))
            .collect::<Result<Vec<_>, _>>()?;
        LocationProfile::new(points)
    }

    /// Pairwise distinct, pairwise non-antipodal circular positions.
    pub fn distinct_non_antipodal_positions(&mut self, c: &Rational, n: usize) -> Vec<Rational> {
        let half = c / rat(2, 1);
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        while out.len() < n {
            let candidate = c * self.unit_fraction();
            let ok = out.iter().all(|p| {
                let d = rem_euclid(&(&candidate - p), c);
                !num_traits::Zero::is_zero(&d) && d != half
            });
            if ok {
                out.push(candidate);
            }
        }
        out
    }
}

/// Rotates every point of a circle profile by `delta`.
pub fn rotate_profile(
    g: &MetricGraph,
    x: &LocationProfile,
    delta: &Rational,
) -> Result<LocationProfile, Error> {
    let c = g.circumference()?;
    let points = x
        .points()
        .iter()
        .map(|p| {
            let pos = g.circle_position(p)?;
            g.circle_point(&rem_euclid(&(&pos + delta), &c))
        })
        .collect::<Result<Vec<_>, _>>()?;
    LocationProfile::new(points)
}

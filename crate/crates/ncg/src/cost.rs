//! Exact individual and social cost computation.
//!
//! Each agent pays `alpha` per edge it buys plus the sum of its hop
//! distances to every other vertex; a vertex cut off from any part of the
//! graph pays infinity. The social cost is the sum over all agents, which
//! equals `alpha * (number of purchases, duplicates counted) + (sum of
//! distances over ordered pairs)`.

use serde::Serialize;

use crate::game::{GameParams, StrategyProfile};
use crate::graph::{all_pairs_distances, build_graph};
use crate::scalar::{Cost, ExactScalar};

/// Per-vertex cost breakdown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCost {
    pub vertex: usize,
    /// `alpha * |S_v|`.
    pub edge_cost: ExactScalar,
    /// Sum of hop distances to all other vertices; `None` when some vertex
    /// is unreachable.
    pub distance_sum: Option<u64>,
    pub total: Cost,
}

/// The full cost account of a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub per_vertex: Vec<VertexCost>,
    pub social_cost: Cost,
    pub connected: bool,
}

/// Exact cost of a single vertex: `alpha * |S_v| + sum_w dist(v, w)`,
/// infinite iff `v`'s component misses any vertex.
pub fn vertex_cost(game: &GameParams, profile: &StrategyProfile, v: usize) -> Cost {
    assert!(v < game.n(), "vertex id out of range");
    let graph = build_graph(profile);
    let dist = graph.distances_from(v);
    let mut sum = 0u64;
    for d in &dist {
        match d.hops() {
            Some(h) => sum += u64::from(h),
            None => return Cost::Infinite,
        }
    }
    let edge_cost = game.alpha() * &ExactScalar::from_usize(profile.purchases(v).len());
    Cost::Finite(edge_cost + ExactScalar::from_int(sum as i64))
}

/// Exact social cost with the per-vertex breakdown.
pub fn social_cost(game: &GameParams, profile: &StrategyProfile) -> CostReport {
    let graph = build_graph(profile);
    let dist = all_pairs_distances(&graph);
    let mut per_vertex = Vec::with_capacity(game.n());
    let mut total = Cost::Finite(ExactScalar::zero());
    let mut connected = true;
    for v in 0..game.n() {
        let edge_cost = game.alpha() * &ExactScalar::from_usize(profile.purchases(v).len());
        let distance_sum = dist.row_sum(v);
        let vc_total = match distance_sum {
            Some(s) => Cost::Finite(&edge_cost + &ExactScalar::from_int(s as i64)),
            None => {
                connected = false;
                Cost::Infinite
            }
        };
        total = total + vc_total.clone();
        per_vertex.push(VertexCost {
            vertex: v,
            edge_cost,
            distance_sum,
            total: vc_total,
        });
    }
    CostReport {
        per_vertex,
        social_cost: total,
        connected,
    }
}

/// Closed-form social cost of the star on `n` vertices:
/// `alpha (n-1) + 2 (n-1)^2`.
pub fn star_social_cost(alpha: &ExactScalar, n: usize) -> ExactScalar {
    if n <= 1 {
        return ExactScalar::zero();
    }
    let m = ExactScalar::from_usize(n - 1);
    alpha * &m + ExactScalar::from_int(2) * &m * &m
}

/// Closed-form social cost of the clique on `n` vertices with each pair
/// bought once: `alpha n(n-1)/2 + n(n-1)`.
pub fn clique_social_cost(alpha: &ExactScalar, n: usize) -> ExactScalar {
    if n <= 1 {
        return ExactScalar::zero();
    }
    let pairs = ExactScalar::from_usize(n * (n - 1) / 2);
    let ordered = ExactScalar::from_usize(n * (n - 1));
    alpha * &pairs + ordered
}

/// The social optimum and a profile realizing it: the clique for
/// `alpha < 2`, the star for `alpha >= 2` (at `alpha = 2` the two have equal
/// cost and the star is the canonical witness).
pub fn social_optimum_cost(game: &GameParams) -> (ExactScalar, StrategyProfile) {
    let n = game.n();
    if n == 1 {
        return (ExactScalar::zero(), StrategyProfile::empty(1));
    }
    let two = ExactScalar::from_int(2);
    if *game.alpha() < two {
        (
            clique_social_cost(game.alpha(), n),
            crate::constructions::make_clique(n),
        )
    } else {
        (
            star_social_cost(game.alpha(), n),
            crate::constructions::make_star(n),
        )
    }
}

//! The undirected network induced by a profile, and exact hop distances.

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::game::StrategyProfile;

/// A hop count, or the sentinel for a pair split across components.
/// `Unreachable` orders above every finite distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Hops(u32),
    Unreachable,
}

impl Distance {
    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Hops(_))
    }

    pub fn hops(self) -> Option<u32> {
        match self {
            Distance::Hops(d) => Some(d),
            Distance::Unreachable => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Hops(d) => write!(f, "{d}"),
            Distance::Unreachable => write!(f, "inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Hops(d) => serializer.serialize_u32(*d),
            Distance::Unreachable => serializer.serialize_str("inf"),
        }
    }
}

/// Simple undirected graph: the union of all purchased pairs with duplicates
/// collapsed. Edge `{v, w}` is present iff `w ∈ S_v` or `v ∈ S_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Builds the induced network of a profile.
pub fn build_graph(profile: &StrategyProfile) -> NetworkGraph {
    let n = profile.n();
    let mut adj = vec![Vec::new(); n];
    for (v, set) in profile.iter() {
        for &w in set {
            adj[v].push(w);
            adj[w].push(v);
        }
    }
    let mut edge_count = 0;
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
        edge_count += list.len();
    }
    NetworkGraph {
        adj,
        edge_count: edge_count / 2,
    }
}

impl NetworkGraph {
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.adj[v].binary_search(&w).is_ok()
    }

    /// Hop distances from `src` to every vertex, by breadth-first search.
    pub fn distances_from(&self, src: usize) -> Vec<Distance> {
        let mut dist = vec![Distance::Unreachable; self.n()];
        dist[src] = Distance::Hops(0);
        let mut queue = VecDeque::with_capacity(self.n());
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            let dv = match dist[v] {
                Distance::Hops(d) => d,
                Distance::Unreachable => unreachable!(),
            };
            for &w in &self.adj[v] {
                if dist[w] == Distance::Unreachable {
                    dist[w] = Distance::Hops(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(|d| d.is_finite())
    }

    /// Largest distance over all ordered pairs; `Unreachable` iff the graph
    /// is disconnected.
    pub fn diameter(&self) -> Distance {
        let mut max = Distance::Hops(0);
        for v in 0..self.n() {
            for d in self.distances_from(v) {
                max = max.max(d);
                if max == Distance::Unreachable {
                    return max;
                }
            }
        }
        max
    }
}

/// All-pairs hop counts with an explicit unreachable sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    rows: Vec<Vec<Distance>>,
}

/// One breadth-first search per vertex.
pub fn all_pairs_distances(graph: &NetworkGraph) -> DistanceMatrix {
    DistanceMatrix {
        rows: (0..graph.n()).map(|v| graph.distances_from(v)).collect(),
    }
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, v: usize, w: usize) -> Distance {
        self.rows[v][w]
    }

    pub fn row(&self, v: usize) -> &[Distance] {
        &self.rows[v]
    }

    /// Sum of one row, `None` if any entry is unreachable.
    pub fn row_sum(&self, v: usize) -> Option<u64> {
        let mut sum = 0u64;
        for d in &self.rows[v] {
            sum += u64::from(d.hops()?);
        }
        Some(sum)
    }

    pub fn max_entry(&self) -> Distance {
        self.rows
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or(Distance::Hops(0))
    }
}

//! Structural analysis of equilibrium networks: distance layers around a
//! root, the children relation, and the lemma audit.
//!
//! The audit re-checks, on a concrete profile, every structural inequality
//! that holds at weak Nash equilibria: the per-vertex children bound, the
//! layer-size bound, the eccentricity bound for high-degree vertices, the
//! diameter bound, and the two fractional-part bounds on edges inside the
//! second layer. Checks whose preconditions fail are reported as skipped
//! with a reason — skipped is never silently treated as passed.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{GameParams, StrategyProfile};
use crate::graph::{build_graph, Distance, NetworkGraph};
use crate::scalar::ExactScalar;

/// Distance layers around a root: `layers[i]` holds the vertices at distance
/// exactly `i + 1`. Only defined on connected graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerPartition {
    pub root: usize,
    pub layers: Vec<Vec<usize>>,
}

impl LayerPartition {
    /// Vertices at distance exactly `i` from the root (`i >= 1`); empty
    /// beyond the last layer.
    pub fn layer(&self, i: usize) -> &[usize] {
        assert!(i >= 1, "layer 0 is the root itself");
        self.layers.get(i - 1).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Layer index of a vertex (the root is 0).
    pub fn layer_of(&self, v: usize) -> Option<usize> {
        if v == self.root {
            return Some(0);
        }
        self.layers
            .iter()
            .position(|layer| layer.contains(&v))
            .map(|i| i + 1)
    }
}

/// Exact distance layers from `root`. Errors if any vertex is unreachable.
pub fn layer_partition(graph: &NetworkGraph, root: usize) -> Result<LayerPartition> {
    let dist = graph.distances_from(root);
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (v, d) in dist.iter().enumerate() {
        match d.hops() {
            None => return Err(Error::Disconnected { root }),
            Some(0) => {}
            Some(h) => {
                let idx = h as usize - 1;
                if layers.len() <= idx {
                    layers.resize_with(idx + 1, Vec::new);
                }
                layers[idx].push(v);
            }
        }
    }
    Ok(LayerPartition { root, layers })
}

/// For each vertex `w` in the second layer, the vertices of deeper layers
/// reachable from `w` by a path that advances one layer per step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChildrenMap {
    pub children: Vec<(usize, BTreeSet<usize>)>,
}

impl ChildrenMap {
    pub fn of(&self, w: usize) -> Option<&BTreeSet<usize>> {
        self.children
            .iter()
            .find(|(v, _)| *v == w)
            .map(|(_, set)| set)
    }

    /// Union of all children sets.
    pub fn covered(&self) -> BTreeSet<usize> {
        self.children
            .iter()
            .flat_map(|(_, set)| set.iter().copied())
            .collect()
    }
}

/// Children by forward layer-monotone reachability from each second-layer
/// vertex.
pub fn children_map(partition: &LayerPartition, graph: &NetworkGraph) -> ChildrenMap {
    let n = graph.n();
    let mut layer_index = vec![usize::MAX; n];
    layer_index[partition.root] = 0;
    for (i, layer) in partition.layers.iter().enumerate() {
        for &v in layer {
            layer_index[v] = i + 1;
        }
    }

    let mut children = Vec::new();
    for &w in partition.layer(2) {
        let mut reached: BTreeSet<usize> = BTreeSet::new();
        let mut frontier = vec![w];
        let mut depth = 2usize;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &u in &frontier {
                for &x in graph.neighbors(u) {
                    if layer_index[x] == depth + 1 && reached.insert(x) {
                        next.push(x);
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        children.push((w, reached));
    }
    ChildrenMap { children }
}

/// Maximum distance over all pairs; `Unreachable` iff disconnected.
pub fn diameter(graph: &NetworkGraph) -> Distance {
    graph.diameter()
}

/// Outcome of a single audited inequality. Pass and fail record both sides
/// exactly, so any failure is reproducible from the report alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckResult {
    Pass { lhs: ExactScalar, rhs: ExactScalar },
    Fail { lhs: ExactScalar, rhs: ExactScalar },
    Skipped { reason: String },
}

impl CheckResult {
    fn le(lhs: ExactScalar, rhs: ExactScalar) -> Self {
        if lhs <= rhs {
            CheckResult::Pass { lhs, rhs }
        } else {
            CheckResult::Fail { lhs, rhs }
        }
    }

    fn lt(lhs: ExactScalar, rhs: ExactScalar) -> Self {
        if lhs < rhs {
            CheckResult::Pass { lhs, rhs }
        } else {
            CheckResult::Fail { lhs, rhs }
        }
    }

    fn ge(lhs: ExactScalar, rhs: ExactScalar) -> Self {
        if lhs >= rhs {
            CheckResult::Pass { lhs, rhs }
        } else {
            CheckResult::Fail { lhs, rhs }
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, CheckResult::Pass { .. })
    }

    pub fn failed(&self) -> bool {
        matches!(self, CheckResult::Fail { .. })
    }

    pub fn skipped(&self) -> bool {
        matches!(self, CheckResult::Skipped { .. })
    }
}

/// Edges one second-layer vertex pays for into its own layer, against the
/// fractional-part bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerPurchase {
    pub vertex: usize,
    pub paid_same_layer_edges: u64,
}

/// All checks for one root choice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootAudit {
    pub root: usize,
    /// Every second-layer vertex has at most `⌊alpha - 1⌋` children.
    pub children_bound: CheckResult,
    /// `|N1| + |N2| + 1 >= n / alpha`.
    pub layer_size: CheckResult,
    /// Per-vertex same-layer purchase counts behind `n2_purchase_bound`.
    pub n2_purchases: Vec<LayerPurchase>,
    /// max same-layer purchases `d <= |N1| alpha / (alpha - ⌊alpha⌋)`
    /// (non-integral alpha only).
    pub n2_purchase_bound: CheckResult,
    /// `|N3 ∪ N4| < |N1| * 5 alpha^3 / (alpha - ⌊alpha⌋)` (non-integral
    /// alpha only).
    pub n34_bound: CheckResult,
}

/// The whole audit: per-root checks plus the two root-independent ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaAuditReport {
    pub n: usize,
    pub alpha: ExactScalar,
    pub certified_weak_nash: bool,
    pub per_root: Vec<RootAudit>,
    /// Every vertex of degree `>= alpha` has eccentricity at most 3.
    pub high_degree_eccentricity: CheckResult,
    /// Diameter at most 4, applicable when `n > alpha^3`.
    pub diameter_bound: CheckResult,
}

impl LemmaAuditReport {
    /// True when no applicable check failed (skips do not count as passes).
    pub fn all_passed(&self) -> bool {
        !self.any_failed()
    }

    pub fn any_failed(&self) -> bool {
        self.high_degree_eccentricity.failed()
            || self.diameter_bound.failed()
            || self.per_root.iter().any(|r| {
                r.children_bound.failed()
                    || r.layer_size.failed()
                    || r.n2_purchase_bound.failed()
                    || r.n34_bound.failed()
            })
    }

    /// One line per check: `root,check,status,lhs,rhs,detail`. Root-free
    /// checks leave the root column empty.
    pub fn to_csv(&self) -> String {
        fn line(out: &mut String, root: &str, check: &str, r: &CheckResult) {
            let (status, lhs, rhs, detail) = match r {
                CheckResult::Pass { lhs, rhs } => {
                    ("pass", lhs.to_string(), rhs.to_string(), String::new())
                }
                CheckResult::Fail { lhs, rhs } => {
                    ("fail", lhs.to_string(), rhs.to_string(), String::new())
                }
                CheckResult::Skipped { reason } => {
                    ("skipped", String::new(), String::new(), reason.clone())
                }
            };
            out.push_str(&format!("{root},{check},{status},{lhs},{rhs},{detail}\n"));
        }

        let mut out = String::from("root,check,status,lhs,rhs,detail\n");
        line(
            &mut out,
            "",
            "high_degree_eccentricity",
            &self.high_degree_eccentricity,
        );
        line(&mut out, "", "diameter_bound", &self.diameter_bound);
        for audit in &self.per_root {
            let root = audit.root.to_string();
            line(&mut out, &root, "children_bound", &audit.children_bound);
            line(&mut out, &root, "layer_size", &audit.layer_size);
            line(
                &mut out,
                &root,
                "n2_purchase_bound",
                &audit.n2_purchase_bound,
            );
            line(&mut out, &root, "n34_bound", &audit.n34_bound);
        }
        out
    }
}

fn skip(reason: &str) -> CheckResult {
    CheckResult::Skipped {
        reason: reason.to_string(),
    }
}

/// Runs every structural check on `profile`, for every root choice.
///
/// With `require_nash` the profile is first certified as a weak Nash
/// equilibrium by the exhaustive checker (bounded by `exhaustive_limit`);
/// an uncertified profile is an error, because the audited inequalities are
/// claims about equilibria only. Without it, the audit runs as a plain
/// diagnostic on any connected profile.
pub fn lemma_audit(
    game: &GameParams,
    profile: &StrategyProfile,
    require_nash: bool,
    exhaustive_limit: usize,
) -> Result<LemmaAuditReport> {
    let n = game.n();
    let alpha = game.alpha().clone();
    let graph = build_graph(profile);
    if !graph.is_connected() {
        return Err(Error::Disconnected { root: 0 });
    }

    let mut certified = false;
    if require_nash {
        let verdict = crate::equilibria::is_nash(game, profile, exhaustive_limit)?;
        if !verdict.is_weak_nash {
            let improving_vertex = verdict.witness.map(|w| w.vertex).unwrap_or(0);
            return Err(Error::NotWeakNash { improving_vertex });
        }
        certified = true;
    }

    let fract = alpha.fract();
    let integral_alpha = fract.is_zero();
    let children_cap = ExactScalar::from_bigint((alpha.clone() - ExactScalar::one()).floor());

    // Root-independent checks.
    let matrix: Vec<Vec<Distance>> = (0..n).map(|v| graph.distances_from(v)).collect();
    let high_degree_eccentricity = {
        let mut worst: Option<(u64, u64)> = None; // (ecc, degree) of worst offender
        for v in 0..n {
            if ExactScalar::from_usize(graph.degree(v)) < alpha {
                continue;
            }
            let ecc = matrix[v]
                .iter()
                .map(|d| d.hops().expect("connected"))
                .max()
                .unwrap_or(0) as u64;
            if worst.is_none_or(|(e, _)| ecc > e) {
                worst = Some((ecc, graph.degree(v) as u64));
            }
        }
        match worst {
            None => skip(&format!("no vertex has degree >= alpha = {alpha}")),
            Some((ecc, _)) => {
                CheckResult::le(ExactScalar::from_int(ecc as i64), ExactScalar::from_int(3))
            }
        }
    };

    let diameter_bound = if ExactScalar::from_usize(n) <= alpha.pow(3) {
        skip(&format!(
            "diameter bound needs n > alpha^3 = {}",
            alpha.pow(3)
        ))
    } else {
        let diam = graph.diameter().hops().expect("connected") as i64;
        CheckResult::le(ExactScalar::from_int(diam), ExactScalar::from_int(4))
    };

    let mut per_root = Vec::with_capacity(n);
    for root in 0..n {
        let partition = layer_partition(&graph, root)?;
        let n1 = partition.layer(1).len();
        let n2 = partition.layer(2).len();

        let children = children_map(&partition, &graph);
        let children_bound = {
            let max_children = children.children.iter().map(|(_, set)| set.len()).max();
            match max_children {
                None => skip("second layer is empty"),
                Some(m) => CheckResult::le(ExactScalar::from_usize(m), children_cap.clone()),
            }
        };

        // The layer-size bound divides the purchase inequality by alpha,
        // which is only valid from alpha = 1 up; below that, complete-graph
        // equilibria are immediate counterexamples to the raw inequality.
        let layer_size = if alpha < ExactScalar::one() {
            skip("layer-size bound needs alpha >= 1")
        } else {
            CheckResult::ge(
                ExactScalar::from_usize(n1 + n2 + 1),
                ExactScalar::from_usize(n) / alpha.clone(),
            )
        };

        let n2_set: BTreeSet<usize> = partition.layer(2).iter().copied().collect();
        let n2_purchases: Vec<LayerPurchase> = partition
            .layer(2)
            .iter()
            .map(|&w| LayerPurchase {
                vertex: w,
                paid_same_layer_edges: profile
                    .purchases(w)
                    .iter()
                    .filter(|t| n2_set.contains(t))
                    .count() as u64,
            })
            .collect();

        let n2_purchase_bound = if integral_alpha {
            skip("fractional-part bound undefined at integral alpha")
        } else if n2_purchases.is_empty() {
            skip("second layer is empty")
        } else {
            let d_max = n2_purchases
                .iter()
                .map(|p| p.paid_same_layer_edges)
                .max()
                .unwrap_or(0);
            let bound = ExactScalar::from_usize(n1) * alpha.clone() / fract.clone();
            CheckResult::le(ExactScalar::from_int(d_max as i64), bound)
        };

        let n34_bound = if integral_alpha {
            skip("fractional-part bound undefined at integral alpha")
        } else {
            let n34 = partition.layer(3).len() + partition.layer(4).len();
            let bound = ExactScalar::from_usize(n1) * ExactScalar::from_int(5) * alpha.pow(3)
                / fract.clone();
            CheckResult::lt(ExactScalar::from_usize(n34), bound)
        };

        per_root.push(RootAudit {
            root,
            children_bound,
            layer_size,
            n2_purchases,
            n2_purchase_bound,
            n34_bound,
        });
    }

    Ok(LemmaAuditReport {
        n,
        alpha,
        certified_weak_nash: certified,
        per_root,
        high_degree_eccentricity,
        diameter_bound,
    })
}

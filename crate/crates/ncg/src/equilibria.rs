//! Best responses, Nash verification, deviation heuristics, dynamics, and
//! the randomized restart strategy.
//!
//! The exhaustive scan over all `2^(n-1)` candidate strategies per vertex is
//! the ground truth here; the heuristic deviation classes exist only for
//! instances beyond the exhaustive limit and never claim completeness.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{GameParams, StrategyProfile};
use crate::graph::{build_graph, NetworkGraph};
use crate::scalar::{Cost, ExactScalar};

/// A unilateral strategy change and its exact effect on the deviator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeviationWitness {
    pub vertex: usize,
    pub new_purchases: BTreeSet<usize>,
    pub old_cost: Cost,
    pub new_cost: Cost,
}

impl DeviationWitness {
    pub fn is_strict_improvement(&self) -> bool {
        self.new_cost < self.old_cost
    }
}

/// Outcome of a full Nash check. `witness` carries an improving deviation
/// when the profile is not weak Nash, and a break-even deviation when it is
/// weak but not strict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NashVerdict {
    pub is_weak_nash: bool,
    pub is_strict_nash: bool,
    pub witness: Option<DeviationWitness>,
}

/// Evaluates unilateral deviations over one frozen profile. The induced
/// network is built once; a candidate strategy for vertex `v` then costs a
/// single breadth-first search seeded with the candidate's targets plus the
/// edges others bought toward `v`. Paths never revisit their source, so the
/// full graph serves every vertex: edges funded solely by `v` only matter
/// at the seeding step.
struct DeviationScanner {
    graph: NetworkGraph,
    /// `inbound[v]`: vertices that bought an edge to `v`; those edges
    /// survive any deviation of `v`.
    inbound: Vec<Vec<usize>>,
    alpha: ExactScalar,
    /// `alpha` as `(p, q)` when both fit `u64`, enabling exact integer
    /// scoring of `p * purchases + q * dist_sum`.
    parts: Option<(u128, u128)>,
    dist: Vec<u32>,
    stamp: Vec<u64>,
    epoch: u64,
    queue: Vec<usize>,
}

/// Outcome of one scanned deviation: enough to rank it exactly and to
/// materialize its cost on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Eval {
    purchases: usize,
    /// `None` when some vertex is unreachable.
    dist_sum: Option<u64>,
    max_dist: u32,
}

fn int_score(p: u128, q: u128, purchases: usize, dist_sum: u64) -> Option<u128> {
    p.checked_mul(purchases as u128)?
        .checked_add(q.checked_mul(dist_sum as u128)?)
}

impl DeviationScanner {
    fn new(game: &GameParams, profile: &StrategyProfile) -> Self {
        use num_traits::ToPrimitive;
        let n = game.n();
        let mut inbound = vec![Vec::new(); n];
        for (buyer, set) in profile.iter() {
            for &t in set {
                inbound[t].push(buyer);
            }
        }
        let alpha = game.alpha().clone();
        let parts = match (alpha.numer().to_u64(), alpha.denom().to_u64()) {
            (Some(p), Some(q)) => Some((u128::from(p), u128::from(q))),
            _ => None,
        };
        DeviationScanner {
            graph: build_graph(profile),
            inbound,
            alpha,
            parts,
            dist: vec![0; n],
            stamp: vec![0; n],
            epoch: 0,
            queue: Vec::with_capacity(n),
        }
    }

    fn graph(&self) -> &NetworkGraph {
        &self.graph
    }

    /// Distances from `v` when `v`'s own purchases are exactly `targets`.
    fn scan(&mut self, v: usize, targets: &[usize]) -> Eval {
        self.epoch += 1;
        let epoch = self.epoch;
        let Self {
            graph,
            inbound,
            dist,
            stamp,
            queue,
            ..
        } = self;
        let n = graph.n();

        queue.clear();
        stamp[v] = epoch;
        dist[v] = 0;
        queue.push(v);
        let mut reached = 1usize;
        let mut sum = 0u64;
        let mut max = 0u32;

        // v's effective neighborhood: its candidate purchases plus every
        // edge someone else pays for.
        for &w in targets.iter().chain(&inbound[v]) {
            if stamp[w] != epoch {
                stamp[w] = epoch;
                dist[w] = 1;
                queue.push(w);
                reached += 1;
                sum += 1;
                max = 1;
            }
        }

        let mut head = 1; // queue[0] is v; its expansion was the seeding
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let du = dist[u];
            for &w in graph.neighbors(u) {
                if stamp[w] != epoch {
                    stamp[w] = epoch;
                    dist[w] = du + 1;
                    queue.push(w);
                    sum += u64::from(du) + 1;
                    max = max.max(du + 1);
                    reached += 1;
                }
            }
        }

        Eval {
            purchases: targets.len(),
            dist_sum: (reached == n).then_some(sum),
            max_dist: max,
        }
    }

    fn scan_set(&mut self, v: usize, set: &BTreeSet<usize>) -> Eval {
        let targets: Vec<usize> = set.iter().copied().collect();
        self.scan(v, &targets)
    }

    /// Exact cost order of two evaluations under this scanner's `alpha`:
    /// integer arithmetic when it provably cannot overflow, exact rationals
    /// otherwise.
    fn cmp(&self, a: &Eval, b: &Eval) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (a.dist_sum, b.dist_sum) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(da), Some(db)) => {
                if let Some((p, q)) = self.parts {
                    if let (Some(sa), Some(sb)) = (
                        int_score(p, q, a.purchases, da),
                        int_score(p, q, b.purchases, db),
                    ) {
                        return sa.cmp(&sb);
                    }
                }
                self.cost(a).cmp(&self.cost(b))
            }
        }
    }

    fn cost(&self, e: &Eval) -> Cost {
        match e.dist_sum {
            Some(sum) => Cost::Finite(
                &self.alpha * &ExactScalar::from_usize(e.purchases)
                    + ExactScalar::from_int(sum as i64),
            ),
            None => Cost::Infinite,
        }
    }

    fn cost_of_set(&mut self, v: usize, set: &BTreeSet<usize>) -> Cost {
        let e = self.scan_set(v, set);
        self.cost(&e)
    }
}

/// Cost of `v` after replacing `S_v` by `new_purchases`, everyone else
/// unchanged.
pub fn deviation_cost(
    game: &GameParams,
    profile: &StrategyProfile,
    v: usize,
    new_purchases: &BTreeSet<usize>,
) -> Cost {
    assert!(v < game.n(), "vertex id out of range");
    assert!(!new_purchases.contains(&v), "self-purchase in deviation");
    let mut scanner = DeviationScanner::new(game, profile);
    scanner.cost_of_set(v, new_purchases)
}

fn check_exhaustive_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::ExhaustiveLimitExceeded { n, limit });
    }
    // Strategies are indexed by u64 masks over the n-1 other vertices.
    assert!(n <= 64, "exhaustive scans support at most 64 vertices");
    Ok(())
}

/// Exhaustive best response: the minimum cost `v` can reach by any of the
/// `2^(n-1)` strategies, and the lexicographically least minimizing set.
/// Refuses `n > limit`.
pub fn best_response_exact(
    game: &GameParams,
    profile: &StrategyProfile,
    v: usize,
    limit: usize,
) -> Result<(Cost, BTreeSet<usize>)> {
    check_exhaustive_limit(game.n(), limit)?;
    let mut scanner = DeviationScanner::new(game, profile);
    let others: Vec<usize> = (0..game.n()).filter(|&w| w != v).collect();

    let mut best_eval = scanner.scan(v, &[]);
    let mut best_set: Vec<usize> = Vec::new();
    let mut targets: Vec<usize> = Vec::with_capacity(others.len());
    for mask in 1u64..(1u64 << others.len()) {
        targets.clear();
        for (i, &w) in others.iter().enumerate() {
            if mask & (1 << i) != 0 {
                targets.push(w);
            }
        }
        let eval = scanner.scan(v, &targets);
        let better = match scanner.cmp(&eval, &best_eval) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => targets.as_slice() < best_set.as_slice(),
            std::cmp::Ordering::Greater => false,
        };
        if better {
            best_eval = eval;
            best_set = targets.clone();
        }
    }
    Ok((scanner.cost(&best_eval), best_set.into_iter().collect()))
}

/// Exhaustive weak/strict Nash verification with a witness.
///
/// Weak fails on the first vertex (in ascending order) holding a strictly
/// improving deviation; the witness is then that vertex's cheapest deviation
/// (lexicographically least on ties). A weak-but-not-strict profile carries
/// the first break-even deviation found instead.
pub fn is_nash(game: &GameParams, profile: &StrategyProfile, limit: usize) -> Result<NashVerdict> {
    check_exhaustive_limit(game.n(), limit)?;
    let n = game.n();
    let mut scanner = DeviationScanner::new(game, profile);
    let mut break_even: Option<DeviationWitness> = None;

    for v in 0..n {
        let others: Vec<usize> = (0..n).filter(|&w| w != v).collect();
        let current_set = profile.purchases(v);
        let current = scanner.scan_set(v, current_set);

        let mut current_mask = 0u64;
        for (i, &w) in others.iter().enumerate() {
            if current_set.contains(&w) {
                current_mask |= 1 << i;
            }
        }

        // Best deviation over every strategy except the incumbent.
        let mut best: Option<(Eval, Vec<usize>)> = None;
        let mut targets: Vec<usize> = Vec::with_capacity(others.len());
        for mask in 0u64..(1u64 << others.len()) {
            if mask == current_mask {
                continue;
            }
            targets.clear();
            for (i, &w) in others.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    targets.push(w);
                }
            }
            let eval = scanner.scan(v, &targets);
            let replace = match &best {
                None => true,
                Some((be, bs)) => match scanner.cmp(&eval, be) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => targets.as_slice() < bs.as_slice(),
                    std::cmp::Ordering::Greater => false,
                },
            };
            if replace {
                best = Some((eval, targets.clone()));
            }
        }

        if let Some((best_eval, best_set)) = best {
            match scanner.cmp(&best_eval, &current) {
                std::cmp::Ordering::Less => {
                    return Ok(NashVerdict {
                        is_weak_nash: false,
                        is_strict_nash: false,
                        witness: Some(DeviationWitness {
                            vertex: v,
                            new_purchases: best_set.into_iter().collect(),
                            old_cost: scanner.cost(&current),
                            new_cost: scanner.cost(&best_eval),
                        }),
                    });
                }
                std::cmp::Ordering::Equal => {
                    if break_even.is_none() {
                        break_even = Some(DeviationWitness {
                            vertex: v,
                            new_purchases: best_set.into_iter().collect(),
                            old_cost: scanner.cost(&current),
                            new_cost: scanner.cost(&best_eval),
                        });
                    }
                }
                std::cmp::Ordering::Greater => {}
            }
        }
    }

    Ok(NashVerdict {
        is_weak_nash: true,
        is_strict_nash: break_even.is_none(),
        witness: break_even,
    })
}

/// Polynomial deviation families for instances beyond the exhaustive limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationClass {
    /// Buy one extra edge.
    SingleAdd,
    /// Drop one owned edge.
    SingleDelete,
    /// Drop one owned edge, buy one elsewhere.
    SingleSwap,
    /// For every vertex `r` at distance 2: drop purchases into `r`'s
    /// distance-2 layer and buy every neighbor of `r` instead.
    ConnectToNeighborhood,
}

impl DeviationClass {
    pub const ALL: [DeviationClass; 4] = [
        DeviationClass::SingleAdd,
        DeviationClass::SingleDelete,
        DeviationClass::SingleSwap,
        DeviationClass::ConnectToNeighborhood,
    ];
}

/// Searches the given deviation classes for a strictly improving move of
/// `v`, in class order then ascending target order. Sound: any returned
/// witness strictly improves. Not complete: `None` does not certify
/// equilibrium.
pub fn improving_move_heuristic(
    game: &GameParams,
    profile: &StrategyProfile,
    v: usize,
    classes: &[DeviationClass],
) -> Option<DeviationWitness> {
    let mut scanner = DeviationScanner::new(game, profile);
    let current_set = profile.purchases(v).clone();
    let current = scanner.scan_set(v, &current_set);
    let n = game.n();

    let try_set = |scanner: &mut DeviationScanner, set: BTreeSet<usize>| {
        let eval = scanner.scan_set(v, &set);
        if scanner.cmp(&eval, &current) == std::cmp::Ordering::Less {
            Some(DeviationWitness {
                vertex: v,
                new_purchases: set,
                old_cost: scanner.cost(&current),
                new_cost: scanner.cost(&eval),
            })
        } else {
            None
        }
    };

    for class in classes {
        match class {
            DeviationClass::SingleAdd => {
                for w in 0..n {
                    if w == v || current_set.contains(&w) {
                        continue;
                    }
                    let mut set = current_set.clone();
                    set.insert(w);
                    if let Some(wit) = try_set(&mut scanner, set) {
                        return Some(wit);
                    }
                }
            }
            DeviationClass::SingleDelete => {
                for &w in &current_set {
                    let mut set = current_set.clone();
                    set.remove(&w);
                    if let Some(wit) = try_set(&mut scanner, set) {
                        return Some(wit);
                    }
                }
            }
            DeviationClass::SingleSwap => {
                for &w in &current_set {
                    for x in 0..n {
                        if x == v || current_set.contains(&x) {
                            continue;
                        }
                        let mut set = current_set.clone();
                        set.remove(&w);
                        set.insert(x);
                        if let Some(wit) = try_set(&mut scanner, set) {
                            return Some(wit);
                        }
                    }
                }
            }
            DeviationClass::ConnectToNeighborhood => {
                let dist_v = scanner.graph().distances_from(v);
                for r in 0..n {
                    if dist_v[r] != crate::graph::Distance::Hops(2) {
                        continue;
                    }
                    let dist_r = scanner.graph().distances_from(r);
                    let mut set: BTreeSet<usize> = current_set
                        .iter()
                        .copied()
                        .filter(|&u| dist_r[u] != crate::graph::Distance::Hops(2))
                        .collect();
                    for u in scanner.graph().neighbors(r).to_vec() {
                        if u != v {
                            set.insert(u);
                        }
                    }
                    if set == current_set {
                        continue;
                    }
                    if let Some(wit) = try_set(&mut scanner, set) {
                        return Some(wit);
                    }
                }
            }
        }
    }
    None
}

/// Vertex visit order for best-response dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    RoundRobin,
    /// Fresh seeded shuffle before every pass.
    Random {
        seed: u64,
    },
}

/// Outcome of a dynamics run. The trajectory holds the initial profile and
/// one snapshot after every pass that changed something; `fixed_point` is
/// true exactly when the final profile is a weak Nash equilibrium.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsRun {
    pub trajectory: Vec<StrategyProfile>,
    pub fixed_point: bool,
    pub rounds: usize,
}

impl DynamicsRun {
    pub fn final_profile(&self) -> &StrategyProfile {
        self.trajectory.last().expect("trajectory never empty")
    }
}

/// Iterated exact best responses. Each step replaces `S_v` by its best
/// response, preferring the incumbent strategy on cost ties and the
/// lexicographically least set otherwise. Stops after a full pass without a
/// strict improvement (a weak Nash fixed point) or after `max_rounds`.
pub fn best_response_dynamics(
    game: &GameParams,
    initial: StrategyProfile,
    schedule: Schedule,
    max_rounds: usize,
    limit: usize,
) -> Result<DynamicsRun> {
    check_exhaustive_limit(game.n(), limit)?;
    let n = game.n();
    let mut rng = match schedule {
        Schedule::RoundRobin => None,
        Schedule::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
    };

    let mut profile = initial.clone();
    let mut trajectory = vec![initial];
    let mut fixed_point = false;
    let mut rounds = 0;

    while rounds < max_rounds {
        rounds += 1;
        let mut order: Vec<usize> = (0..n).collect();
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }

        let mut changed = false;
        for &v in &order {
            let (best_cost, best_set) = best_response_exact(game, &profile, v, limit)?;
            let current_cost = deviation_cost(game, &profile, v, profile.purchases(v));
            if best_cost < current_cost {
                profile.set_purchases(v, best_set);
                changed = true;
            }
        }

        if changed {
            trajectory.push(profile.clone());
        } else {
            fixed_point = true;
            break;
        }
    }

    Ok(DynamicsRun {
        trajectory,
        fixed_point,
        rounds,
    })
}

/// Checks the single-edge reduction on one instance: if buying all of
/// `addition` at once strictly improves `v`'s cost, does some single member
/// already improve it? Returns the truth of that implication.
pub fn addition_convexity_check(
    game: &GameParams,
    profile: &StrategyProfile,
    v: usize,
    addition: &BTreeSet<usize>,
) -> bool {
    assert!(!addition.contains(&v), "v in its own addition set");
    assert!(
        addition.is_disjoint(profile.purchases(v)),
        "addition set overlaps current purchases"
    );
    let mut scanner = DeviationScanner::new(game, profile);
    let current_set = profile.purchases(v);
    let current = scanner.scan_set(v, current_set);

    let mut all: BTreeSet<usize> = current_set.clone();
    all.extend(addition.iter().copied());
    let all_eval = scanner.scan_set(v, &all);
    if scanner.cmp(&all_eval, &current) != std::cmp::Ordering::Less {
        return true; // antecedent false
    }
    addition.iter().any(|&s| {
        let mut one = current_set.clone();
        one.insert(s);
        let eval = scanner.scan_set(v, &one);
        scanner.cmp(&eval, &current) == std::cmp::Ordering::Less
    })
}

/// The randomized restart strategy: when every vertex has degree above
/// `sqrt(n ln n)`, vertex `w` drops everything it pays for and buys
/// `⌈sqrt(n ln n)⌉` random targets, retrying until its eccentricity is at
/// most 2. Returns the chosen set and the resulting cost, which is then at
/// most `alpha ⌈sqrt(n ln n)⌉ + 2n`.
pub fn random_restart_strategy(
    game: &GameParams,
    profile: &StrategyProfile,
    w: usize,
    seed: u64,
    max_trials: usize,
) -> Result<(BTreeSet<usize>, Cost)> {
    let n = game.n();
    assert!(w < n, "vertex id out of range");
    let graph = build_graph(profile);
    let threshold = (n as f64 * (n as f64).ln()).sqrt();
    for v in 0..n {
        if (graph.degree(v) as f64) <= threshold {
            return Err(Error::DegreeTooSmall {
                vertex: v,
                degree: graph.degree(v),
                threshold,
            });
        }
    }
    let target_count = threshold.ceil() as usize;
    debug_assert!(target_count < n);

    let mut scanner = DeviationScanner::new(game, profile);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_trials {
        let sample = rand::seq::index::sample(&mut rng, n - 1, target_count);
        let mut targets: Vec<usize> = sample
            .into_iter()
            .map(|i| if i < w { i } else { i + 1 })
            .collect();
        targets.sort_unstable();
        let eval = scanner.scan(w, &targets);
        if eval.dist_sum.is_some() && eval.max_dist <= 2 {
            let cost = scanner.cost(&eval);
            return Ok((targets.into_iter().collect(), cost));
        }
    }
    Err(Error::TrialsExhausted { trials: max_trials })
}

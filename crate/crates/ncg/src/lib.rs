//! An exact engine for the network creation game.
//!
//! Each of `n` agents is a vertex that may buy edges to other vertices at a
//! price of `alpha` per edge; once built, an edge is free for everyone to
//! use. An agent's cost is its edge budget plus the sum of its hop distances
//! to every other vertex, infinite if anything is unreachable. This crate
//! computes those costs exactly (arbitrary-precision rationals end to end),
//! verifies weak and strict Nash equilibria with counterexample witnesses,
//! enumerates every equilibrium at small `n`, measures the exact price of
//! anarchy, generates the clique-with-leaves family that keeps the price of
//! anarchy away from 1 at integer edge prices, and audits the structural
//! inequalities that certified equilibria must satisfy.
//!
//! ```
//! use ncg::{GameParams, ExactScalar, make_star, is_nash, DEFAULT_EXHAUSTIVE_LIMIT};
//!
//! // The star is a weak Nash equilibrium as soon as edges cost at least 1.
//! let game = GameParams::new(5, ExactScalar::ratio(3, 2)).unwrap();
//! let verdict = is_nash(&game, &make_star(5), DEFAULT_EXHAUSTIVE_LIMIT).unwrap();
//! assert!(verdict.is_weak_nash);
//! ```

#![forbid(unsafe_code)]

pub mod constructions;
pub mod cost;
pub mod enumeration;
pub mod equilibria;
pub mod error;
pub mod game;
pub mod graph;
pub mod scalar;
pub mod structure;

pub use constructions::{
    counterexample_cost_exact, make_clique, make_clique_with_leaves, make_random_profile,
    make_star, poa_lower_bound_asymptote, poa_upper_bound_formula, CliqueLeavesSpec,
};
pub use cost::{
    clique_social_cost, social_cost, social_optimum_cost, star_social_cost, vertex_cost,
    CostReport, VertexCost,
};
pub use enumeration::{
    brute_force_optimum, decode_profile, encode_profile, enumerate_equilibria, enumerate_profiles,
    poa_sweep, price_of_anarchy_exact, profile_space_size, sweep_to_csv, EquilibriumMode,
    PoaResult, ProfileCode, MAX_ENUMERABLE_N,
};
pub use equilibria::{
    addition_convexity_check, best_response_dynamics, best_response_exact, deviation_cost,
    improving_move_heuristic, is_nash, random_restart_strategy, DeviationClass, DeviationWitness,
    DynamicsRun, NashVerdict, Schedule,
};
pub use error::{Error, Result};
pub use game::{
    GameParams, ProfileDocument, StrategyProfile, DEFAULT_ENUMERATION_LIMIT,
    DEFAULT_EXHAUSTIVE_LIMIT,
};
pub use graph::{all_pairs_distances, build_graph, Distance, DistanceMatrix, NetworkGraph};
pub use scalar::{Cost, ExactScalar};
pub use structure::{
    children_map, diameter, layer_partition, lemma_audit, CheckResult, ChildrenMap, LayerPartition,
    LemmaAuditReport, RootAudit,
};

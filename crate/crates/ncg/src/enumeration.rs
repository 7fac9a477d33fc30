//! Exhaustive equilibrium enumeration at tiny `n`, brute-force optima, and
//! exact price-of-anarchy computation.
//!
//! The duplicate-free profile space is indexed by base-3 codes: one trit per
//! vertex pair (absent / lower id buys / higher id buys), pairs ordered
//! lexicographically. Profiles where both endpoints buy the same pair are
//! excluded up front: dropping one copy of a doubly-bought edge saves
//! `alpha` with zero distance change, so such profiles are never weak Nash
//! for positive `alpha`, and `is_nash` on the unrestricted space confirms
//! this in tests.

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{social_cost, CostReport};
use crate::error::{Error, Result};
use crate::game::{GameParams, StrategyProfile};
use crate::graph::build_graph;
use crate::scalar::{Cost, ExactScalar};

/// Hard ceiling: `3^C(n,2)` must fit in a `u64`, which caps enumerable games
/// at 9 vertices no matter the configured limit.
pub const MAX_ENUMERABLE_N: usize = 9;

/// Base-3 index of a duplicate-free profile. Rendered in decimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ProfileCode(pub u64);

impl std::fmt::Display for ProfileCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which equilibrium notion a scan certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumMode {
    Weak,
    Strict,
}

impl std::fmt::Display for EquilibriumMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EquilibriumMode::Weak => write!(f, "weak"),
            EquilibriumMode::Strict => write!(f, "strict"),
        }
    }
}

impl std::str::FromStr for EquilibriumMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "weak" => Ok(EquilibriumMode::Weak),
            "strict" => Ok(EquilibriumMode::Strict),
            other => Err(format!("unknown mode {other:?}; expected weak or strict")),
        }
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for v in 0..n {
        for w in (v + 1)..n {
            out.push((v, w));
        }
    }
    out
}

/// `3^C(n,2)`, the size of the duplicate-free profile space.
pub fn profile_space_size(n: usize) -> u64 {
    3u64.pow((n * (n - 1) / 2) as u32)
}

fn check_enumeration_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::EnumerationLimitExceeded { n, limit });
    }
    if n > MAX_ENUMERABLE_N {
        return Err(Error::EnumerationLimitExceeded {
            n,
            limit: MAX_ENUMERABLE_N,
        });
    }
    Ok(())
}

/// Decodes a base-3 code into its profile.
pub fn decode_profile(n: usize, code: ProfileCode) -> StrategyProfile {
    let mut profile = StrategyProfile::empty(n);
    let mut rest = code.0;
    for (v, w) in pairs(n) {
        match rest % 3 {
            0 => {}
            1 => profile.buy(v, w),
            2 => profile.buy(w, v),
            _ => unreachable!(),
        }
        rest /= 3;
    }
    debug_assert_eq!(rest, 0, "code out of range for n = {n}");
    profile
}

/// Encodes a duplicate-free profile. Doubly-bought pairs have no code.
pub fn encode_profile(profile: &StrategyProfile) -> Result<ProfileCode> {
    if let Some((v, w)) = profile.duplicate_purchase() {
        return Err(Error::InvalidProfile(format!(
            "pair ({v}, {w}) is bought by both endpoints and has no profile code"
        )));
    }
    let n = profile.n();
    let mut code = 0u64;
    let mut scale = 1u64;
    for (v, w) in pairs(n) {
        let digit = if profile.purchases(v).contains(&w) {
            1
        } else if profile.purchases(w).contains(&v) {
            2
        } else {
            0
        };
        code += digit * scale;
        scale = scale.saturating_mul(3);
    }
    Ok(ProfileCode(code))
}

/// All `3^C(n,2)` duplicate-free profiles in code order.
pub fn enumerate_profiles(
    n: usize,
    limit: usize,
) -> Result<impl Iterator<Item = (ProfileCode, StrategyProfile)>> {
    check_enumeration_limit(n, limit)?;
    let total = profile_space_size(n);
    Ok((0..total).map(move |c| (ProfileCode(c), decode_profile(n, ProfileCode(c)))))
}

/// Social cost without the per-vertex report; the hot path for scans.
fn social_cost_value(game: &GameParams, profile: &StrategyProfile) -> Cost {
    let graph = build_graph(profile);
    let mut ordered = 0u64;
    for v in 0..game.n() {
        for d in graph.distances_from(v) {
            match d.hops() {
                Some(h) => ordered += u64::from(h),
                None => return Cost::Infinite,
            }
        }
    }
    Cost::Finite(
        game.alpha() * &ExactScalar::from_usize(profile.purchase_count())
            + ExactScalar::from_int(ordered as i64),
    )
}

fn shard_ranges(total: u64) -> Vec<(u64, u64)> {
    // Fixed-size shards keep the merged output independent of worker count.
    let shard = 8192u64;
    let mut out = Vec::with_capacity((total / shard + 1) as usize);
    let mut start = 0;
    while start < total {
        let end = (start + shard).min(total);
        out.push((start, end));
        start = end;
    }
    out
}

/// Every profile whose verdict matches `mode`, with its exact social cost,
/// in code order. Shards are processed in parallel on the current rayon
/// pool and merged by code, so the output does not depend on thread count.
pub fn enumerate_equilibria(
    game: &GameParams,
    mode: EquilibriumMode,
    limit: usize,
) -> Result<Vec<(ProfileCode, CostReport)>> {
    let n = game.n();
    check_enumeration_limit(n, limit)?;
    let total = profile_space_size(n);

    let shards = shard_ranges(total);
    let nested: Vec<Vec<(ProfileCode, CostReport)>> = shards
        .into_par_iter()
        .map(|(start, end)| {
            let mut found = Vec::new();
            for c in start..end {
                let code = ProfileCode(c);
                let profile = decode_profile(n, code);
                // Disconnected profiles are never equilibria: any vertex cuts
                // its infinite cost to a finite one by buying every edge.
                if n > 1 && !build_graph(&profile).is_connected() {
                    continue;
                }
                let verdict =
                    crate::equilibria::is_nash(game, &profile, n).expect("n within its own limit");
                let keep = match mode {
                    EquilibriumMode::Weak => verdict.is_weak_nash,
                    EquilibriumMode::Strict => verdict.is_strict_nash,
                };
                if keep {
                    found.push((code, social_cost(game, &profile)));
                }
            }
            found
        })
        .collect();

    Ok(nested.into_iter().flatten().collect())
}

/// Exact minimum social cost over every duplicate-free profile, with the
/// least-code witness.
pub fn brute_force_optimum(game: &GameParams, limit: usize) -> Result<(ExactScalar, ProfileCode)> {
    let n = game.n();
    check_enumeration_limit(n, limit)?;
    let total = profile_space_size(n);

    let shards = shard_ranges(total);
    let best = shards
        .into_par_iter()
        .map(|(start, end)| {
            let mut local: Option<(ExactScalar, ProfileCode)> = None;
            for c in start..end {
                let code = ProfileCode(c);
                let profile = decode_profile(n, code);
                if let Cost::Finite(cost) = social_cost_value(game, &profile) {
                    let better = match &local {
                        None => true,
                        Some((bc, _)) => cost < *bc,
                    };
                    if better {
                        local = Some((cost, code));
                    }
                }
            }
            local
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) => x,
                (x, None) => x,
                (Some((ca, pa)), Some((cb, pb))) => {
                    // Prefer lower cost, then lower code.
                    if cb < ca || (cb == ca && pb < pa) {
                        Some((cb, pb))
                    } else {
                        Some((ca, pa))
                    }
                }
            },
        );

    best.ok_or(Error::NoEquilibrium)
}

/// Exact price of anarchy with both witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoaResult {
    pub n: usize,
    pub alpha: ExactScalar,
    pub mode: EquilibriumMode,
    pub equilibrium_count: u64,
    pub optimum: ExactScalar,
    pub optimum_code: ProfileCode,
    pub worst_equilibrium: ExactScalar,
    pub worst_code: ProfileCode,
    pub poa: ExactScalar,
}

/// Worst equilibrium social cost over the optimum, both found by exhaustive
/// scan. Errors when no equilibrium of the requested kind exists.
pub fn price_of_anarchy_exact(
    game: &GameParams,
    mode: EquilibriumMode,
    limit: usize,
) -> Result<PoaResult> {
    let equilibria = enumerate_equilibria(game, mode, limit)?;
    if equilibria.is_empty() {
        return Err(Error::NoEquilibrium);
    }
    let (optimum, optimum_code) = brute_force_optimum(game, limit)?;

    let mut worst: Option<(ExactScalar, ProfileCode)> = None;
    for (code, report) in &equilibria {
        let cost = report
            .social_cost
            .as_finite()
            .expect("equilibria are connected")
            .clone();
        let take = match &worst {
            None => true,
            Some((wc, _)) => cost > *wc,
        };
        if take {
            worst = Some((cost, *code));
        }
    }
    let (worst_equilibrium, worst_code) = worst.expect("nonempty");

    let poa = if optimum.is_zero() {
        // Only n = 1: both sides are zero and the ratio is 1 by convention.
        ExactScalar::one()
    } else {
        &worst_equilibrium / &optimum
    };

    Ok(PoaResult {
        n: game.n(),
        alpha: game.alpha().clone(),
        mode,
        equilibrium_count: equilibria.len() as u64,
        optimum,
        optimum_code,
        worst_equilibrium,
        worst_code,
        poa,
    })
}

/// One exact price-of-anarchy row per `(n, alpha)` grid point, `n` outer,
/// `alpha` inner.
pub fn poa_sweep(
    n_list: &[usize],
    alpha_list: &[ExactScalar],
    mode: EquilibriumMode,
    limit: usize,
) -> Result<Vec<PoaResult>> {
    let mut rows = Vec::with_capacity(n_list.len() * alpha_list.len());
    for &n in n_list {
        for alpha in alpha_list {
            let game = GameParams::new(n, alpha.clone())?;
            rows.push(price_of_anarchy_exact(&game, mode, limit)?);
        }
    }
    Ok(rows)
}

/// The sweep CSV schema:
/// `n,alpha,mode,equilibrium_count,optimum,worst_equilibrium,poa,optimum_code,worst_code`.
pub fn sweep_to_csv(rows: &[PoaResult]) -> String {
    let mut out = String::from(
        "n,alpha,mode,equilibrium_count,optimum,worst_equilibrium,poa,optimum_code,worst_code\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.alpha,
            r.mode,
            r.equilibrium_count,
            r.optimum,
            r.worst_equilibrium,
            r.poa,
            r.optimum_code,
            r.worst_code
        ));
    }
    out
}

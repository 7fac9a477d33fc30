//! The game itself: parameters and strategy profiles.
//!
//! A game is `(n, alpha)`: `n` vertex-agents, each free to buy edges at price
//! `alpha`. A strategy profile assigns every vertex `v` a purchase set
//! `S_v ⊆ V ∖ {v}`. A pair may be bought by both endpoints — the model allows
//! it, and both buyers pay — but equilibrium checks will always find such
//! profiles refutable for positive `alpha`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// Default per-vertex ceiling for exhaustive deviation scans (`2^(n-1)`
/// candidate strategies per vertex).
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;

/// Default ceiling for exhaustive profile enumeration (`3^C(n,2)` profiles).
pub const DEFAULT_ENUMERATION_LIMIT: usize = 6;

/// Everything that defines one game: the number of agents and the edge price.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameParams {
    n: usize,
    alpha: ExactScalar,
}

impl GameParams {
    pub fn new(n: usize, alpha: ExactScalar) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGame("n must be at least 1".into()));
        }
        if alpha.is_negative() {
            return Err(Error::InvalidGame(format!(
                "alpha must be non-negative, got {alpha}"
            )));
        }
        Ok(GameParams { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &ExactScalar {
        &self.alpha
    }
}

/// One purchase set per vertex; the complete strategy tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyProfile {
    purchases: Vec<BTreeSet<usize>>,
}

impl StrategyProfile {
    /// The empty profile on `n` vertices: nobody buys anything.
    pub fn empty(n: usize) -> Self {
        StrategyProfile {
            purchases: vec![BTreeSet::new(); n],
        }
    }

    /// Validates ids and the no-self-purchase rule.
    pub fn from_purchases(n: usize, purchases: Vec<BTreeSet<usize>>) -> Result<Self> {
        if purchases.len() != n {
            return Err(Error::InvalidProfile(format!(
                "expected {n} purchase sets, got {}",
                purchases.len()
            )));
        }
        for (v, set) in purchases.iter().enumerate() {
            for &w in set {
                if w >= n {
                    return Err(Error::InvalidProfile(format!(
                        "vertex {v} buys an edge to {w}, outside [0, {n})"
                    )));
                }
                if w == v {
                    return Err(Error::InvalidProfile(format!(
                        "vertex {v} buys an edge to itself"
                    )));
                }
            }
        }
        Ok(StrategyProfile { purchases })
    }

    pub fn n(&self) -> usize {
        self.purchases.len()
    }

    pub fn purchases(&self, v: usize) -> &BTreeSet<usize> {
        &self.purchases[v]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BTreeSet<usize>)> {
        self.purchases.iter().enumerate()
    }

    /// Adds `w` to `S_v`. Panics on self-purchase or out-of-range ids; this
    /// is a construction-time error, not an input error.
    pub fn buy(&mut self, v: usize, w: usize) {
        assert!(v != w, "self-purchase");
        assert!(v < self.n() && w < self.n(), "vertex id out of range");
        self.purchases[v].insert(w);
    }

    /// Replaces `S_v` wholesale (the unilateral-deviation primitive).
    pub fn set_purchases(&mut self, v: usize, set: BTreeSet<usize>) {
        assert!(!set.contains(&v), "self-purchase");
        assert!(set.iter().all(|&w| w < self.n()), "vertex id out of range");
        self.purchases[v] = set;
    }

    /// Total number of purchases, counting a doubly-bought pair twice.
    pub fn purchase_count(&self) -> usize {
        self.purchases.iter().map(BTreeSet::len).sum()
    }

    /// First pair bought by both endpoints, if any.
    pub fn duplicate_purchase(&self) -> Option<(usize, usize)> {
        for (v, set) in self.purchases.iter().enumerate() {
            for &w in set {
                if w > v && self.purchases[w].contains(&v) {
                    return Some((v, w));
                }
            }
        }
        None
    }

    /// Moves the purchase of an existing bought pair to the other endpoint.
    /// The induced network is unchanged; only who pays moves.
    pub fn reverse_purchase(&mut self, buyer: usize, target: usize) {
        assert!(
            self.purchases[buyer].remove(&target),
            "purchase {buyer}->{target} not present"
        );
        self.purchases[target].insert(buyer);
    }
}

/// The canonical on-disk form of a profile: `n`, the edge price, and the
/// ascending purchase lists. This single schema is the interchange format
/// for every module and the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub n: usize,
    pub alpha: ExactScalar,
    pub purchases: Vec<Vec<usize>>,
}

impl ProfileDocument {
    pub fn new(game: &GameParams, profile: &StrategyProfile) -> Self {
        ProfileDocument {
            n: game.n(),
            alpha: game.alpha().clone(),
            purchases: profile
                .purchases
                .iter()
                .map(|s| s.iter().copied().collect())
                .collect(),
        }
    }

    /// Validates the schema and splits the document back into game and
    /// profile. Rejects out-of-range ids, self-purchases, and repeated ids
    /// within one list; accepts unsorted lists and normalizes them.
    pub fn into_parts(self) -> Result<(GameParams, StrategyProfile)> {
        let game = GameParams::new(self.n, self.alpha)?;
        let mut sets = Vec::with_capacity(self.purchases.len());
        for (v, list) in self.purchases.iter().enumerate() {
            let set: BTreeSet<usize> = list.iter().copied().collect();
            if set.len() != list.len() {
                return Err(Error::InvalidProfile(format!(
                    "purchase list of vertex {v} repeats an id"
                )));
            }
            sets.push(set);
        }
        let profile = StrategyProfile::from_purchases(self.n, sets)?;
        Ok((game, profile))
    }

    /// Canonical pretty JSON with a trailing newline; byte-stable for a
    /// given document.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("profile document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidProfile(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn game_params_validate() {
        assert!(GameParams::new(0, ExactScalar::one()).is_err());
        assert!(GameParams::new(3, ExactScalar::from_int(-1)).is_err());
        assert!(GameParams::new(1, ExactScalar::zero()).is_ok());
    }

    #[test]
    fn profile_rejects_self_purchase_and_bad_ids() {
        let mut sets = vec![BTreeSet::new(); 3];
        sets[0].insert(0);
        assert!(StrategyProfile::from_purchases(3, sets).is_err());

        let mut sets = vec![BTreeSet::new(); 3];
        sets[1].insert(3);
        assert!(StrategyProfile::from_purchases(3, sets).is_err());

        assert!(StrategyProfile::from_purchases(3, vec![BTreeSet::new(); 2]).is_err());
    }

    #[test]
    fn duplicate_purchase_detection() {
        let mut p = StrategyProfile::empty(3);
        p.buy(0, 1);
        assert_eq!(p.duplicate_purchase(), None);
        p.buy(1, 0);
        assert_eq!(p.duplicate_purchase(), Some((0, 1)));
        assert_eq!(p.purchase_count(), 2);
    }

    #[test]
    fn document_round_trip_and_canonical_order() {
        let doc = ProfileDocument {
            n: 3,
            alpha: ExactScalar::ratio(3, 2),
            purchases: vec![vec![2, 1], vec![], vec![]],
        };
        let (game, profile) = doc.clone().into_parts().unwrap();
        assert_eq!(game.n(), 3);
        let canon = ProfileDocument::new(&game, &profile);
        assert_eq!(canon.purchases[0], vec![1, 2]);
        let parsed = ProfileDocument::from_json(&canon.to_json()).unwrap();
        assert_eq!(parsed, canon);
    }

    #[test]
    fn document_rejects_repeated_id_in_one_list() {
        let doc = ProfileDocument {
            n: 3,
            alpha: ExactScalar::one(),
            purchases: vec![vec![1, 1], vec![], vec![]],
        };
        assert!(doc.into_parts().is_err());
    }

    #[test]
    fn document_rejects_unknown_fields() {
        let json = r#"{"n": 2, "alpha": "1", "purchases": [[1], []], "extra": 1}"#;
        assert!(ProfileDocument::from_json(json).is_err());
    }
}

//! Named profile generators and the closed-form price-of-anarchy bounds.
//!
//! The load-bearing generator is the clique-with-leaves family: a `k`-clique
//! in which every clique vertex additionally buys `alpha - 1` pendant
//! leaves. For integer `alpha >= 2` it is a weak Nash equilibrium whose cost
//! exceeds the optimum by a constant factor, which is what keeps the price
//! of anarchy away from 1 at integral edge prices.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::StrategyProfile;
use crate::scalar::ExactScalar;

/// Star on `n` vertices: vertex 0 buys every edge.
pub fn make_star(n: usize) -> StrategyProfile {
    assert!(n >= 1);
    let mut p = StrategyProfile::empty(n);
    for w in 1..n {
        p.buy(0, w);
    }
    p
}

/// Clique on `n` vertices, each pair bought exactly once with the canonical
/// orientation: the lower id buys.
pub fn make_clique(n: usize) -> StrategyProfile {
    assert!(n >= 1);
    let mut p = StrategyProfile::empty(n);
    for v in 0..n {
        for w in (v + 1)..n {
            p.buy(v, w);
        }
    }
    p
}

/// Parameters of the clique-with-leaves construction: a `k`-clique whose
/// vertices each own `alpha - 1` leaves, so `n = k * alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueLeavesSpec {
    k: usize,
    alpha: u64,
}

impl CliqueLeavesSpec {
    /// Requires `k >= 3` (with `k = 2`, deleting one clique edge can
    /// disconnect the graph, and the analysis assumes a large clique) and
    /// integer `alpha >= 2` (at `alpha = 1` there are no leaves and the
    /// construction degenerates to the plain clique).
    pub fn new(k: usize, alpha: u64) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidConstruction(format!(
                "clique size k must be at least 3, got {k}"
            )));
        }
        if alpha < 2 {
            return Err(Error::InvalidConstruction(format!(
                "alpha must be an integer >= 2, got {alpha}"
            )));
        }
        Ok(CliqueLeavesSpec { k, alpha })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn alpha_scalar(&self) -> ExactScalar {
        ExactScalar::from_int(self.alpha as i64)
    }

    /// Total vertex count `n = k * alpha`.
    pub fn n(&self) -> usize {
        self.k * self.alpha as usize
    }

    /// Leaves of clique vertex `i` occupy a contiguous id block after the
    /// clique ids `0..k`.
    pub fn leaves_of(&self, i: usize) -> std::ops::Range<usize> {
        let per = self.alpha as usize - 1;
        let start = self.k + i * per;
        start..start + per
    }
}

/// Vertices `0..k` form the canonical clique; clique vertex `i` additionally
/// buys its `alpha - 1` leaves; leaves buy nothing.
pub fn make_clique_with_leaves(spec: CliqueLeavesSpec) -> StrategyProfile {
    let mut p = StrategyProfile::empty(spec.n());
    for v in 0..spec.k() {
        for w in (v + 1)..spec.k() {
            p.buy(v, w);
        }
        for leaf in spec.leaves_of(v) {
            p.buy(v, leaf);
        }
    }
    p
}

/// Closed-form exact social cost of the clique-with-leaves profile:
///
/// ```text
/// alpha [ C(k,2) + (alpha-1) k ]                      edge budget
/// + k [ (k-1) + (alpha-1) + 2 (k-1)(alpha-1) ]        clique-vertex distances
/// + k (alpha-1) [ 1 + 2(k-1) + 2(alpha-2) + 3(k-1)(alpha-1) ]   leaf distances
/// ```
///
/// Equals the simulated social cost exactly for every valid spec.
pub fn counterexample_cost_exact(spec: CliqueLeavesSpec) -> ExactScalar {
    let k = BigInt::from(spec.k());
    let a = BigInt::from(spec.alpha());
    let one = BigInt::from(1);
    let two = BigInt::from(2);
    let three = BigInt::from(3);

    let k1 = &k - &one; // k - 1
    let a1 = &a - &one; // alpha - 1
    let a2 = &a - &two; // alpha - 2

    let edges = &a * (&k * &k1 / &two + &a1 * &k);
    let clique_dist = &k * (&k1 + &a1 + &two * &k1 * &a1);
    let leaf_dist = &k * &a1 * (&one + &two * &k1 + &two * &a2 + &three * &k1 * &a1);

    ExactScalar::from_bigint(edges + clique_dist + leaf_dist)
}

/// The integral-alpha lower-bound asymptote `3/2 - 3/(4 alpha) + 1/alpha^2`,
/// evaluated exactly. Rejects non-integral `alpha` (and `alpha < 2`, where
/// the construction does not exist).
pub fn poa_lower_bound_asymptote(alpha: &ExactScalar) -> Result<ExactScalar> {
    if !alpha.is_integer() || *alpha < ExactScalar::from_int(2) {
        return Err(Error::AlphaNotIntegral {
            alpha: alpha.clone(),
        });
    }
    let three_halves = ExactScalar::ratio(3, 2);
    let three_quarters = ExactScalar::ratio(3, 4);
    Ok(three_halves - three_quarters / alpha.clone() + ExactScalar::one() / (alpha * alpha))
}

/// The non-integral upper bound
/// `1 + 150 alpha^6 / (alpha - ⌊alpha⌋)^2 * sqrt(ln n / n)`.
///
/// This is the one deliberately floating-point evaluation in the crate; the
/// logarithm is natural. Requires non-integral `alpha > 2` and `n > alpha^3`.
pub fn poa_upper_bound_formula(alpha: &ExactScalar, n: usize) -> Result<f64> {
    if alpha.is_integer() {
        return Err(Error::AlphaIntegral {
            alpha: alpha.clone(),
        });
    }
    if *alpha <= ExactScalar::from_int(2) {
        return Err(Error::BoundPrecondition(format!(
            "the upper bound requires alpha > 2, got {alpha}"
        )));
    }
    if ExactScalar::from_usize(n) <= alpha.pow(3) {
        return Err(Error::BoundPrecondition(format!(
            "the upper bound requires n > alpha^3 = {}, got n = {n}",
            alpha.pow(3)
        )));
    }
    let coeff = ExactScalar::from_int(150) * alpha.pow(6) / alpha.fract().pow(2);
    let nf = n as f64;
    Ok(1.0 + coeff.to_f64() * (nf.ln() / nf).sqrt())
}

/// Seeded random profile: each pair `(v, w)`, `v < w`, appears with
/// probability `edge_prob` and is bought by a uniformly chosen endpoint.
/// Identical seeds give identical profiles.
pub fn make_random_profile(n: usize, edge_prob: f64, seed: u64) -> StrategyProfile {
    assert!(
        (0.0..=1.0).contains(&edge_prob),
        "edge_prob must be in [0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = StrategyProfile::empty(n);
    for v in 0..n {
        for w in (v + 1)..n {
            if rng.random_bool(edge_prob) {
                if rng.random_bool(0.5) {
                    p.buy(v, w);
                } else {
                    p.buy(w, v);
                }
            }
        }
    }
    p
}

/// Random strategy sets for every vertex (duplicates permitted), for tests
/// that must cover the unrestricted profile space.
pub fn make_random_directed_profile(n: usize, buy_prob: f64, seed: u64) -> StrategyProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = StrategyProfile::empty(n);
    for v in 0..n {
        for w in 0..n {
            if v != w && rng.random_bool(buy_prob) {
                p.buy(v, w);
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{social_cost, star_social_cost};
    use crate::game::GameParams;
    use crate::graph::build_graph;
    use crate::scalar::Cost;

    #[test]
    fn star_profile_shape() {
        assert_eq!(make_star(1), StrategyProfile::empty(1));
        let s = make_star(4);
        assert_eq!(
            s.purchases(0).iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        for v in 1..4 {
            assert!(s.purchases(v).is_empty());
        }
    }

    #[test]
    fn star_cost_matches_closed_form() {
        for n in 1..=10 {
            let alpha = ExactScalar::ratio(7, 3);
            let game = GameParams::new(n, alpha.clone()).unwrap();
            let sim = social_cost(&game, &make_star(n)).social_cost;
            assert_eq!(sim, Cost::Finite(star_social_cost(&alpha, n)));
        }
    }

    #[test]
    fn star_cost_is_at_least_2n_n_minus_1_for_alpha_at_least_two() {
        for n in 2..=30 {
            for a in [2i64, 3, 7] {
                let alpha = ExactScalar::from_int(a);
                let cost = star_social_cost(&alpha, n);
                assert!(cost >= ExactScalar::from_usize(2 * n * (n - 1)));
            }
        }
    }

    #[test]
    fn clique_profile_counts_and_diameter() {
        assert_eq!(make_clique(2).purchases(0).len(), 1);
        let c = make_clique(4);
        assert_eq!(c.purchase_count(), 6);
        assert_eq!(c.duplicate_purchase(), None);
        let g = build_graph(&c);
        assert_eq!(g.diameter(), crate::graph::Distance::Hops(1));
    }

    #[test]
    fn clique_leaves_spec_validates() {
        assert!(CliqueLeavesSpec::new(2, 2).is_err());
        assert!(CliqueLeavesSpec::new(3, 1).is_err());
        let spec = CliqueLeavesSpec::new(3, 2).unwrap();
        assert_eq!(spec.n(), 6);
        assert_eq!(spec.leaves_of(0), 3..4);
        assert_eq!(spec.leaves_of(2), 5..6);
    }

    #[test]
    fn clique_leaves_purchase_counts() {
        // (k=3, alpha=2): 3 clique purchases + 3 leaf purchases.
        let spec = CliqueLeavesSpec::new(3, 2).unwrap();
        let p = make_clique_with_leaves(spec);
        assert_eq!(p.n(), 6);
        assert_eq!(p.purchase_count(), 6);

        for (k, a) in [(3usize, 2u64), (5, 3), (8, 4), (4, 6)] {
            let spec = CliqueLeavesSpec::new(k, a).unwrap();
            let p = make_clique_with_leaves(spec);
            let expect = k * (k - 1) / 2 + (a as usize - 1) * k;
            assert_eq!(p.purchase_count(), expect);
            assert_eq!(p.duplicate_purchase(), None);
        }
    }

    #[test]
    fn counterexample_cost_small_cases() {
        // (k=3, alpha=2): edge cost 12, distance sum 54, total 66.
        let spec = CliqueLeavesSpec::new(3, 2).unwrap();
        assert_eq!(counterexample_cost_exact(spec), ExactScalar::from_int(66));
        let game = GameParams::new(6, ExactScalar::from_int(2)).unwrap();
        let report = social_cost(&game, &make_clique_with_leaves(spec));
        assert_eq!(report.social_cost, Cost::Finite(ExactScalar::from_int(66)));

        // Ratio to the star optimum at n = 6: 66/60 = 11/10.
        let ratio =
            counterexample_cost_exact(spec) / star_social_cost(&ExactScalar::from_int(2), 6);
        assert_eq!(ratio, ExactScalar::ratio(11, 10));
    }

    #[test]
    fn counterexample_closed_form_matches_simulation_on_a_small_grid() {
        for k in 3..=12 {
            for a in 2..=6u64 {
                let spec = CliqueLeavesSpec::new(k, a).unwrap();
                let game = GameParams::new(spec.n(), spec.alpha_scalar()).unwrap();
                let sim = social_cost(&game, &make_clique_with_leaves(spec)).social_cost;
                assert_eq!(
                    sim,
                    Cost::Finite(counterexample_cost_exact(spec)),
                    "mismatch at k={k}, alpha={a}"
                );
            }
        }
    }

    #[test]
    fn lower_bound_asymptote_values() {
        let a2 = poa_lower_bound_asymptote(&ExactScalar::from_int(2)).unwrap();
        assert_eq!(a2, ExactScalar::ratio(11, 8));
        let a3 = poa_lower_bound_asymptote(&ExactScalar::from_int(3)).unwrap();
        assert_eq!(a3, ExactScalar::ratio(49, 36));
        assert!(poa_lower_bound_asymptote(&ExactScalar::ratio(5, 2)).is_err());
        assert!(poa_lower_bound_asymptote(&ExactScalar::from_int(1)).is_err());
    }

    #[test]
    fn lower_bound_asymptote_approaches_three_halves() {
        // Monotone increasing from alpha = 3 on (the formula dips from
        // alpha = 2 to 3 before climbing), always below 3/2.
        let limit = ExactScalar::ratio(3, 2);
        let mut prev = poa_lower_bound_asymptote(&ExactScalar::from_int(3)).unwrap();
        assert!(prev < limit);
        for a in 4..=64 {
            let cur = poa_lower_bound_asymptote(&ExactScalar::from_int(a)).unwrap();
            assert!(cur > prev, "not increasing at alpha = {a}");
            assert!(cur < limit);
            prev = cur;
        }
        // Within 1/64 of the limit at alpha = 64.
        assert!(&limit - &prev < ExactScalar::ratio(1, 64));
    }

    #[test]
    fn upper_bound_formula_reference_value() {
        // alpha = 5/2, n = 10^6: coefficient 150 (5/2)^6 / (1/2)^2 = 146484.375,
        // bound = 1 + 146484.375 sqrt(ln(10^6)/10^6) ~ 545.5.
        let alpha = ExactScalar::ratio(5, 2);
        let b = poa_upper_bound_formula(&alpha, 1_000_000).unwrap();
        let coeff = 146484.375f64;
        let expect = 1.0 + coeff * (1_000_000f64.ln() / 1_000_000f64).sqrt();
        assert!((b - expect).abs() < 1e-9);
        assert!((545.0..546.0).contains(&b));
    }

    #[test]
    fn upper_bound_formula_preconditions() {
        assert!(matches!(
            poa_upper_bound_formula(&ExactScalar::from_int(3), 100),
            Err(Error::AlphaIntegral { .. })
        ));
        assert!(matches!(
            poa_upper_bound_formula(&ExactScalar::ratio(3, 2), 100),
            Err(Error::BoundPrecondition(_))
        ));
        // n <= alpha^3 rejected: alpha = 5/2 has alpha^3 = 125/8 = 15.625.
        assert!(matches!(
            poa_upper_bound_formula(&ExactScalar::ratio(5, 2), 15),
            Err(Error::BoundPrecondition(_))
        ));
        assert!(poa_upper_bound_formula(&ExactScalar::ratio(5, 2), 16).is_ok());
    }

    #[test]
    fn upper_bound_decreases_along_a_doubling_sweep() {
        let alpha = ExactScalar::ratio(5, 2);
        let mut n = 32usize;
        let mut prev = poa_upper_bound_formula(&alpha, n).unwrap();
        for _ in 0..20 {
            n *= 2;
            let cur = poa_upper_bound_formula(&alpha, n).unwrap();
            assert!(cur < prev, "bound not decreasing at n = {n}");
            assert!(cur >= 1.0);
            prev = cur;
        }
        // The sqrt(ln n / n) term only brings the bound near 1 at
        // astronomical n: the coefficient is 146484.375 at alpha = 5/2.
        let far = poa_upper_bound_formula(&alpha, 1_000_000_000_000_000).unwrap();
        assert!(
            far < 1.1,
            "bound at n = 10^15 should be close to 1, got {far}"
        );
    }

    #[test]
    fn smaller_fractional_part_gives_larger_upper_bound() {
        let n = 1_000_000;
        let loose = poa_upper_bound_formula(&ExactScalar::ratio(5, 2), n).unwrap();
        let tight = poa_upper_bound_formula(&ExactScalar::ratio(9, 4), n).unwrap();
        assert!(tight > loose);
    }

    #[test]
    fn random_profile_determinism_and_extremes() {
        assert_eq!(make_random_profile(6, 0.0, 99), StrategyProfile::empty(6));

        let full = make_random_profile(5, 1.0, 7);
        assert_eq!(full.purchase_count(), 10);
        assert_eq!(full.duplicate_purchase(), None);
        let g = build_graph(&full);
        assert_eq!(g.edge_count(), 10);

        let a = make_random_profile(8, 0.37, 12345);
        let b = make_random_profile(8, 0.37, 12345);
        assert_eq!(a, b);
        let c = make_random_profile(8, 0.37, 12346);
        assert_ne!(a, c);
    }
}

//! Property tests for the threshold formulas: bounds, monotonicity, limits,
//! the mapping identity, and consistency of the `c*` bound.

use mcp_core::rng::{stream_rng, u01};
use mcp_core::thresholds::{
    c_star, cpree_broman_params, lambda_bar_broman, lambda_bar_mcp, survival_sufficient,
    BromanParams, McpParams,
};
use proptest::prelude::*;

fn mcp_strategy() -> impl Strategy<Value = McpParams> {
    // Log-uniform over a moderate range in each rate, dimensions 1..=3.
    (
        -3.0f64..4.0,
        -3.0f64..4.0,
        -3.0f64..4.0,
        1u32..=3,
    )
        .prop_map(|(lb, lc, la, dim)| {
            McpParams::new(lb.exp(), lc.exp(), la.exp(), dim).unwrap()
        })
}

fn broman_strategy() -> impl Strategy<Value = BromanParams> {
    (0.0f64..10.0, 0.0f64..10.0, 0.01f64..50.0, 0.01f64..0.99).prop_map(
        |(a, extra, gamma, p)| BromanParams::new(a, a + extra, gamma, p).unwrap(),
    )
}

proptest! {
    #[test]
    fn mcp_bound_below_both_limits(p in mcp_strategy()) {
        let l = lambda_bar_mcp(&p);
        let d = f64::from(p.dim());
        prop_assert!(l.is_finite());
        prop_assert!(l < p.alpha());
        prop_assert!(l < p.beta2() / (1.0 + 2.0 * d * p.beta()));
    }

    #[test]
    fn broman_bound_within_interval(b in broman_strategy()) {
        let l = lambda_bar_broman(&b);
        prop_assert!(l >= b.alpha0());
        prop_assert!(l <= b.mean_rate());
    }

    #[test]
    fn mapping_identity(p in mcp_strategy()) {
        let direct = lambda_bar_mcp(&p);
        let mapped = lambda_bar_broman(&cpree_broman_params(&p));
        prop_assert!(
            (direct - mapped).abs() <= 1e-12 * direct.abs().max(1.0),
            "direct {direct} vs mapped {mapped}"
        );
    }

    #[test]
    fn strictly_increasing_in_c_and_alpha(p in mcp_strategy()) {
        let l = lambda_bar_mcp(&p);
        let up_c =
            McpParams::new(p.beta(), p.c() * 1.001, p.alpha(), p.dim()).unwrap();
        prop_assert!(lambda_bar_mcp(&up_c) > l, "not increasing in c at {p:?}");
        let up_a =
            McpParams::new(p.beta(), p.c(), p.alpha() * 1.001, p.dim()).unwrap();
        prop_assert!(lambda_bar_mcp(&up_a) > l, "not increasing in alpha at {p:?}");
    }

    #[test]
    fn c_star_exceeds_one_and_solves_threshold(
        la in -1.0f64..4.0,
        lb in -3.0f64..4.0,
        dim in 1u32..=3,
    ) {
        // alpha strictly above 1/(2d-1).
        let bound = 1.0 / (2.0 * f64::from(dim) - 1.0);
        let alpha = bound * (1.0 + la.exp());
        let beta = lb.exp();
        let c = c_star(alpha, beta, dim).unwrap();
        prop_assert!(c > 1.0, "c* = {c} at alpha={alpha}, beta={beta}, d={dim}");
        // By construction, lambda_bar at c* equals 1/(2d-1).
        let p = McpParams::new(beta, c, alpha, dim).unwrap();
        let l = lambda_bar_mcp(&p);
        prop_assert!(
            (l - bound).abs() <= 1e-9 * bound.max(1.0),
            "lambda_bar(c*) = {l}, expected {bound}"
        );
    }

    #[test]
    fn above_lower_bound_implies_c_above_c_star(p in mcp_strategy()) {
        let bound = 1.0 / (2.0 * f64::from(p.dim()) - 1.0);
        if lambda_bar_mcp(&p) > bound {
            // lambda_bar < alpha, so alpha > bound and c* is defined.
            let cs = c_star(p.alpha(), p.beta(), p.dim()).unwrap();
            prop_assert!(p.c() > cs);
        }
    }

    #[test]
    fn sufficiency_matches_definition(p in mcp_strategy(), lref in 0.01f64..10.0) {
        let verdict = survival_sufficient(&p, lref).unwrap();
        prop_assert_eq!(verdict, lambda_bar_mcp(&p) > lref);
        // c*beta at or below the reference can never be sufficient.
        if p.beta2() <= lref {
            prop_assert!(!verdict);
        }
    }
}

#[test]
fn limits_approach_with_decreasing_gaps() {
    for (beta, alpha, dim) in [(1.0, 2.0, 1), (4.0, 8.0, 1), (0.5, 3.0, 2)] {
        let mut prev_gap = f64::INFINITY;
        for c in [1e3, 1e6, 1e9] {
            let p = McpParams::new(beta, c, alpha, dim).unwrap();
            let gap = alpha - lambda_bar_mcp(&p);
            assert!(gap > 0.0, "bound not strict at c={c}");
            assert!(gap < prev_gap, "gap not shrinking at c={c}");
            prev_gap = gap;
        }
        assert!(prev_gap / alpha < 1e-6, "limit not reached: gap {prev_gap}");

        let target = |c: f64| c * beta / (1.0 + 2.0 * f64::from(dim) * beta);
        let mut prev_gap = f64::INFINITY;
        for alpha_big in [1e3, 1e6, 1e9] {
            let p = McpParams::new(beta, 2.0, alpha_big, dim).unwrap();
            let gap = target(2.0) - lambda_bar_mcp(&p);
            assert!(gap > 0.0);
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap / target(2.0) < 1e-6);
    }
}

#[test]
fn broman_fast_switching_approaches_mean_rate() {
    let b = BromanParams::new(0.0, 1.0, 1e6, 0.5).unwrap();
    assert!((lambda_bar_broman(&b) - 0.5).abs() < 1e-5);
}

/// The identity at bulk scale with an independent sampling loop, mirroring
/// the acceptance criterion with a different generator stream.
#[test]
fn mapping_identity_bulk() {
    let mut rng = stream_rng(0xB20_1D, 0);
    for _ in 0..10_000 {
        let beta = (-3.0 + 7.0 * u01(&mut rng)).exp();
        let c = (-3.0 + 7.0 * u01(&mut rng)).exp();
        let alpha = (-3.0 + 7.0 * u01(&mut rng)).exp();
        let dim = 1 + (u01(&mut rng) * 3.0) as u32;
        let p = McpParams::new(beta, c, alpha, dim).unwrap();
        let direct = lambda_bar_mcp(&p);
        let mapped = lambda_bar_broman(&cpree_broman_params(&p));
        assert!(
            (direct - mapped).abs() <= 1e-12 * direct.abs().max(1.0),
            "identity failed at {p:?}: {direct} vs {mapped}"
        );
    }
}

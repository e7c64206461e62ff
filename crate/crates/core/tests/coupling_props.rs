//! Pathwise coupling properties: the subset relations preserved by every
//! graphical symbol, parameter monotonicity via stream subsetting, the
//! perturbed-death ordering, and Monte Carlo sanity of survival estimates.

use mcp_core::graphical::{generate, Boundary, Event, EventKind, Lattice, Site};
use mcp_core::processes::{
    couple_cpree_mcp, couple_mcp_attractive, couple_prop1, estimate_survival, evolve,
    Configuration, CoupleOptions, InitSpec, ProcessKind, ProcessState, EMPTY, TYPE1, TYPE2,
};
use mcp_core::rng::{below, split_seed, stream_rng};
use mcp_core::thresholds::{GenericMcpRates, McpParams};
use rand_core::RngCore;

fn line(side: u32) -> Lattice {
    Lattice::new(1, side, Boundary::Periodic).unwrap()
}

#[test]
fn cpree_mcp_coupling_holds_over_replicas() {
    let p = McpParams::new(4.0, 6.0, 8.0, 1).unwrap();
    let rates = p.rates();
    let lat = line(32);
    let init = Configuration::single_seed(lat, TYPE2, TYPE1).unwrap();
    let opts = CoupleOptions::default_for_horizon(10.0);
    for r in 0..100u64 {
        let log = generate(lat, &rates, 10.0, split_seed(0xC0, r)).unwrap();
        let report = couple_cpree_mcp(&log, init.clone(), init.clone(), &opts).unwrap();
        assert!(report.passed(), "replica {r}: {:?}", report.violations);
        assert!(report.checked_events > 0);
    }
}

#[test]
fn attractive_coupling_all1_under_all2() {
    let p = McpParams::new(4.0, 6.0, 8.0, 1).unwrap();
    let rates = p.rates();
    let lat = line(32);
    let lower = Configuration::uniform(lat, TYPE1).unwrap();
    let upper = Configuration::uniform(lat, TYPE2).unwrap();
    let opts = CoupleOptions::default_for_horizon(10.0);
    for r in 0..100u64 {
        let log = generate(lat, &rates, 10.0, split_seed(0xC1, r)).unwrap();
        let report =
            couple_mcp_attractive(&log, lower.clone(), upper.clone(), &opts).unwrap();
        assert!(report.passed(), "replica {r}: {:?}", report.violations);
    }
}

/// Degrade an upper configuration into a valid ordered partner: some 2s
/// fall to 0 or 1, some 0s fall to 1; 1s stay.
fn degrade(upper: &Configuration, rng: &mut impl RngCore) -> Configuration {
    let mut lower = upper.clone();
    for site in 0..upper.lattice().site_count() as Site {
        let state = match upper.get(site) {
            TYPE2 => match below(rng, 3) {
                0 => TYPE2,
                1 => EMPTY,
                _ => TYPE1,
            },
            EMPTY => {
                if below(rng, 2) == 0 {
                    EMPTY
                } else {
                    TYPE1
                }
            }
            other => other,
        };
        lower.set(site, state).unwrap();
    }
    lower
}

#[test]
fn attractive_coupling_random_ordered_pairs() {
    let rates = GenericMcpRates::new(2.0, 1.5, 3.0, 1.0, 1).unwrap();
    let lat = line(24);
    let opts = CoupleOptions::default_for_horizon(8.0);
    for r in 0..100u64 {
        let mut rng = stream_rng(0xC2, r);
        let upper = Configuration::product(lat, 0.3, 0.4, &mut rng).unwrap();
        let lower = degrade(&upper, &mut rng);
        let log = generate(lat, &rates, 8.0, split_seed(0xC3, r)).unwrap();
        let report = couple_mcp_attractive(&log, lower, upper, &opts).unwrap();
        assert!(report.passed(), "replica {r}: {:?}", report.violations);
    }
}

#[test]
fn prop1_coupling_and_occupancy_ordering() {
    // sigma = 1, beta1 = 1, beta2 = 2, shared death marks at rate 1.
    let sigma = 1.0;
    let rates = GenericMcpRates::new(1.0, sigma, 2.0, 1.0, 1).unwrap();
    let lat = line(32);
    let init = Configuration::single_seed(lat, TYPE2, TYPE1).unwrap();
    let opts = CoupleOptions::with_checkpoints(vec![10.0]);
    let mut unpert_origin_type1 = 0u64;
    let mut pert_origin_type1 = 0u64;
    for r in 0..300u64 {
        let log = generate(lat, &rates, 10.0, split_seed(0xC4, r)).unwrap();
        let report = couple_prop1(&log, sigma, init.clone(), &opts).unwrap();
        assert!(report.passed(), "replica {r}: {:?}", report.violations);
        // Pathwise, the perturbed copy's type-1 set is contained in the
        // unperturbed one's, so the origin counts are surely ordered.
        let origin = lat.origin();
        unpert_origin_type1 += u64::from(report.final_configs[0].get(origin) == TYPE1);
        pert_origin_type1 += u64::from(report.final_configs[1].get(origin) == TYPE1);
    }
    assert!(pert_origin_type1 <= unpert_origin_type1);
}

/// Parameter monotonicity realized by stream subsetting: the upper process
/// gets extra 2-arrows and extra type-1 deaths, the lower gets extra
/// 1-arrows and extra all-type deaths; the shared base log carries the
/// common rates. Every extra symbol preserves the four relations.
#[test]
fn parameter_monotonicity_by_stream_subsetting() {
    // lower rates (b1, d1, b2, d2) = (2.0, 1.0, 1.5, 1.2)
    // upper rates               = (1.0, 2.0, 3.0, 0.6)
    let base = GenericMcpRates::new(1.0, 1.0, 1.5, 0.6, 1).unwrap();
    let extra_lower = GenericMcpRates::new(1.0, 0.0, 0.0, 0.6, 1).unwrap();
    let extra_upper = GenericMcpRates::new(0.0, 1.0, 1.5, 0.0, 1).unwrap();
    let lat = line(24);
    let horizon = 8.0;

    #[derive(Clone, Copy, PartialEq)]
    enum Target {
        Both,
        Lower,
        Upper,
    }

    for r in 0..100u64 {
        let mut rng = stream_rng(0xC5, r);
        let upper_init = Configuration::product(lat, 0.3, 0.4, &mut rng).unwrap();
        let lower_init = degrade(&upper_init, &mut rng);

        let mut merged: Vec<(Event, Target)> = Vec::new();
        for (rates, target, stream) in [
            (&base, Target::Both, 0u64),
            (&extra_lower, Target::Lower, 1),
            (&extra_upper, Target::Upper, 2),
        ] {
            let log = generate(lat, rates, horizon, split_seed(0xC6 + stream, r)).unwrap();
            merged.extend(log.events().iter().map(|e| (*e, target)));
        }
        merged.sort_by(|a, b| a.0.time.total_cmp(&b.0.time));

        let mut lower = ProcessState::new(&ProcessKind::Mcp, lower_init).unwrap();
        let mut upper = ProcessState::new(&ProcessKind::Mcp, upper_init).unwrap();
        for (e, target) in &merged {
            if *target != Target::Upper {
                lower.apply(e);
            }
            if *target != Target::Lower {
                upper.apply(e);
            }
            let (lo, up) = (lower.cell(e.tip), upper.cell(e.tip));
            // The four set relations, checked at the only site that moved.
            assert!(!(up == TYPE1 && lo != TYPE1), "r{r}: type1-superset broken");
            assert!(!(up != TYPE2 && lo == TYPE2), "r{r}: non2-superset broken");
            assert!(!(lo != TYPE1 && up == TYPE1), "r{r}: non1-subset broken");
            assert!(!(lo == TYPE2 && up != TYPE2), "r{r}: type2-subset broken");
        }
    }
}

#[test]
fn subcritical_cp_rarely_survives() {
    // lambda = 0.5 sits below the rigorous lower bound 1/(2d-1) = 1.
    let p = McpParams::new(1.0, 1.0, 1.0, 1).unwrap();
    let est = estimate_survival(
        &ProcessKind::Cp { lambda: 0.5 },
        &p,
        line(51),
        25.0,
        300,
        0xC7,
        &InitSpec::SingleSeedAtOrigin,
    )
    .unwrap();
    assert!(
        est.estimate < 0.05,
        "subcritical survival fraction {} too high",
        est.estimate
    );
}

#[test]
fn type1_occupancy_trend_from_product_start() {
    // With type 2 carrying the larger birth-to-death ratio, the type-1
    // origin occupancy from a half-half product start is nonincreasing in
    // time up to confidence-interval noise.
    let p = McpParams::new(4.0, 6.0, 8.0, 1).unwrap();
    let rates = p.rates();
    let lat = line(31);
    let checkpoints = [5.0, 10.0, 20.0, 40.0];
    let replicas = 600u64;
    let mut ones = [0u64; 4];
    for r in 0..replicas {
        let seed = split_seed(0xC8, r);
        let log = generate(lat, &rates, 40.0, seed).unwrap();
        let mut rng = stream_rng(seed, 1);
        let init = Configuration::product(lat, 0.5, 0.5, &mut rng).unwrap();
        let traj = evolve(&ProcessKind::Mcp, &log, &init, &checkpoints).unwrap();
        for (i, s) in traj.samples.iter().enumerate() {
            ones[i] += u64::from(s.origin_state == TYPE1);
        }
    }
    let n = replicas as f64;
    let est: Vec<f64> = ones.iter().map(|&c| c as f64 / n).collect();
    let hw: Vec<f64> =
        ones.iter().map(|&c| mcp_core::stats::binomial_half_width(c, replicas, 1.96)).collect();
    for i in 1..est.len() {
        assert!(
            est[i] <= est[i - 1] + hw[i] + hw[i - 1],
            "type-1 occupancy increased: {est:?}"
        );
    }
    // And it visibly decays from the initial 0.5 by the last checkpoint.
    assert!(est[3] < 0.25, "no decay visible: {est:?}");
}

#[test]
fn couple_reports_record_occupancy_series() {
    let p = McpParams::new(2.0, 3.0, 2.0, 1).unwrap();
    let rates = p.rates();
    let lat = line(16);
    let log = generate(lat, &rates, 4.0, 0xC9).unwrap();
    let init = Configuration::single_seed(lat, TYPE2, TYPE1).unwrap();
    let opts = CoupleOptions::with_checkpoints(vec![1.0, 2.0, 4.0]);
    let report = couple_cpree_mcp(&log, init.clone(), init, &opts).unwrap();
    assert_eq!(report.occupancy.len(), 6); // two processes, three checkpoints
    assert!(report.occupancy.iter().any(|s| s.process == "mcp"));
    assert!(report.occupancy.iter().any(|s| s.process == "cpree"));
    let times: Vec<f64> = report.occupancy.iter().map(|s| s.time).collect();
    assert_eq!(times, vec![1.0, 1.0, 2.0, 2.0, 4.0, 4.0]);
    assert_eq!(report.final_configs.len(), 2);
}

#[test]
fn evolve_checkpoint_populations_consistent() {
    let p = McpParams::new(2.0, 2.0, 1.0, 1).unwrap();
    let rates = p.rates();
    let lat = line(20);
    let log = generate(lat, &rates, 6.0, 0xCA).unwrap();
    let init = Configuration::single_seed(lat, TYPE2, TYPE1).unwrap();
    let traj = evolve(&ProcessKind::Mcp, &log, &init, &[3.0, 6.0]).unwrap();
    for s in &traj.samples {
        assert_eq!(s.pop1, s.config.population(TYPE1));
        assert_eq!(s.pop2, s.config.population(TYPE2));
    }
    assert_eq!(traj.events_applied, log.events().len() as u64);
}

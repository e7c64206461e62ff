//! Structural and distributional tests for the graphical construction:
//! replay determinism, Poisson stream statistics, brute-force agreement of
//! the blocked-arrow classifier, background flip rates, and stochastic
//! domination of the equilibrium-start modulated process by the per-edge
//! unblocked 2-arrow counts.

use mcp_core::graphical::{
    classify_arrows, generate, unblocked_counts, ArrowLabel, Boundary, Event, EventKind, EventLog,
    Lattice, Site,
};
use mcp_core::pointproc::{simulate_modulated, BackgroundInit};
use mcp_core::rng::{below, split_seed, stream_rng, u01};
use mcp_core::stats::{ks_critical, ks_statistic};
use mcp_core::thresholds::{cpree_broman_params, GenericMcpRates, McpParams};
use rand_core::RngCore;

fn line(side: u32) -> Lattice {
    Lattice::new(1, side, Boundary::Periodic).unwrap()
}

#[test]
fn death_mark_counts_match_poisson_mean() {
    // 100 sites, unit DeathAll rate, horizon 10: mean 1000 per log; the
    // replica-mean has standard error sqrt(1000 / R).
    let lat = line(100);
    let rates = GenericMcpRates::new(0.0, 0.0, 0.0, 1.0, 1).unwrap();
    let replicas = 1000u64;
    let total: usize = (0..replicas)
        .map(|r| generate(lat, &rates, 10.0, split_seed(0xA0, r)).unwrap().events().len())
        .sum();
    let mean = total as f64 / replicas as f64;
    let se = (1000.0f64 / replicas as f64).sqrt();
    assert!(
        (mean - 1000.0).abs() < 3.0 * se,
        "mean DeathAll count {mean:.2} outside 1000 +/- {:.2}",
        3.0 * se
    );
}

#[test]
fn stream_counts_match_their_rates() {
    // One long log; each stream's realized count is Poisson with mean
    // rate * horizon * multiplicity.
    let lat = line(50);
    let rates = GenericMcpRates::new(0.7, 1.3, 0.4, 0.9, 1).unwrap();
    let horizon = 40.0;
    let log = generate(lat, &rates, horizon, 0xA1).unwrap();
    let n = lat.site_count() as f64;
    let edges = lat.directed_edge_count() as f64;
    for (kind, mean) in [
        (EventKind::Arrow1, rates.b1() * edges * horizon),
        (EventKind::Arrow2, rates.b2() * edges * horizon),
        (EventKind::Death1, rates.d1() * n * horizon),
        (EventKind::DeathAll, rates.d2() * n * horizon),
    ] {
        let count = log.events().iter().filter(|e| e.kind == kind).count() as f64;
        assert!(
            (count - mean).abs() < 3.0 * mean.sqrt(),
            "{kind:?}: count {count} outside {mean} +/- {:.1}",
            3.0 * mean.sqrt()
        );
    }
}

#[test]
fn per_edge_arrow2_gaps_are_exponential() {
    let lat = line(10);
    let rates = GenericMcpRates::new(0.0, 0.0, 2.0, 0.0, 1).unwrap();
    let log = generate(lat, &rates, 500.0, 0xA2).unwrap();
    // Gaps per directed edge are iid Exp(b2); pooling edges keeps them iid.
    let mut gaps = Vec::new();
    for x in 0..lat.site_count() as Site {
        for y in lat.neighbors(x) {
            let mut prev = 0.0;
            for e in log.events() {
                if e.kind == EventKind::Arrow2 && e.tip == x && e.source == Some(y) {
                    gaps.push(e.time - prev);
                    prev = e.time;
                }
            }
        }
    }
    assert!(gaps.len() > 10_000);
    let d = ks_statistic(&gaps, |t| 1.0 - (-2.0 * t).exp());
    let crit = ks_critical(gaps.len(), 1e-3);
    assert!(d < crit, "KS {d:.5} over critical {crit:.5}");
}

#[test]
fn replay_and_reserialization_invariance() {
    let lat = Lattice::new(2, 6, Boundary::Periodic).unwrap();
    let rates = GenericMcpRates::new(1.0, 0.8, 1.2, 1.0, 2).unwrap();
    let log = generate(lat, &rates, 5.0, 0xA3).unwrap();
    assert_eq!(log, generate(lat, &rates, 5.0, 0xA3).unwrap());

    let reserialized = EventLog::from_text(&log.to_text()).unwrap();
    assert_eq!(classify_arrows(&reserialized), classify_arrows(&log));
}

/// Brute-force oracle: for each 2-arrow, rescan every earlier event on its
/// tip timeline for the most recent of {Arrow1, Death1}.
fn classify_by_rescan(log: &EventLog) -> Vec<ArrowLabel> {
    let events = log.events();
    let mut labels = Vec::new();
    for (i, e) in events.iter().enumerate() {
        if e.kind != EventKind::Arrow2 {
            continue;
        }
        let mut label = ArrowLabel::Unblocked;
        for f in &events[..i] {
            if f.tip == e.tip {
                match f.kind {
                    EventKind::Arrow1 => label = ArrowLabel::Blocked,
                    EventKind::Death1 => label = ArrowLabel::Unblocked,
                    _ => {}
                }
            }
        }
        labels.push(label);
    }
    labels
}

fn random_small_log(rng: &mut impl RngCore) -> EventLog {
    let side = 3 + below(rng, 6) as u32;
    let lat = line(side);
    let rates = GenericMcpRates::new(1.0, 1.0, 1.0, 1.0, 1).unwrap();
    let horizon = 10.0;
    let n_events = below(rng, 51) as usize;
    let mut times: Vec<f64> = (0..n_events).map(|_| horizon * u01(rng)).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let events = times
        .into_iter()
        .map(|time| {
            let tip = below(rng, u64::from(side)) as Site;
            let (kind, source) = match below(rng, 4) {
                0 => (EventKind::DeathAll, None),
                1 => (EventKind::Death1, None),
                k => {
                    let neighbors: Vec<Site> = lat.neighbors(tip).collect();
                    let y = neighbors[below(rng, neighbors.len() as u64) as usize];
                    (if k == 2 { EventKind::Arrow1 } else { EventKind::Arrow2 }, Some(y))
                }
            };
            Event { time, kind, tip, source }
        })
        .collect();
    EventLog::from_parts(lat, horizon, 0, rates, events).unwrap()
}

#[test]
fn classifier_agrees_with_rescan_oracle() {
    let mut rng = stream_rng(0xA4, 0);
    for _ in 0..2000 {
        let log = random_small_log(&mut rng);
        let sweep = classify_arrows(&log);
        assert_eq!(sweep.labels(), classify_by_rescan(&log).as_slice());
    }
}

#[test]
fn background_flips_only_on_transitions() {
    let lat = line(8);
    let rates = GenericMcpRates::new(2.0, 1.5, 1.0, 1.0, 1).unwrap();
    let log = generate(lat, &rates, 20.0, 0xA5).unwrap();
    let cls = classify_arrows(&log);
    for site in 0..lat.site_count() as Site {
        let mut prev = false; // sites start unblocked
        for flip in cls.background(site) {
            assert_ne!(flip.blocked, prev, "non-transition flip recorded");
            prev = flip.blocked;
        }
    }
}

#[test]
fn background_rates_and_unblocked_fraction() {
    // Theorem-style rates: the per-site background flips
    // unblocked -> blocked at 2d*b1 and blocked -> unblocked at d1, with
    // long-run unblocked fraction 1/(1 + 2*d*beta).
    let p = McpParams::new(4.0, 6.0, 8.0, 1).unwrap();
    let rates = p.rates();
    let lat = line(4);
    let horizon = 150.0;
    let replicas = 40u64;

    let mut time_unblocked = 0.0f64;
    let mut time_blocked = 0.0f64;
    let mut to_blocked = 0u64;
    let mut to_unblocked = 0u64;
    let mut fractions = Vec::new();
    for r in 0..replicas {
        let log = generate(lat, &rates, horizon, split_seed(0xA6, r)).unwrap();
        let cls = classify_arrows(&log);
        let mut replica_unblocked = 0.0;
        for site in 0..lat.site_count() as Site {
            let mut last = 0.0;
            let mut blocked = false;
            for flip in cls.background(site) {
                if blocked {
                    time_blocked += flip.time - last;
                } else {
                    time_unblocked += flip.time - last;
                    replica_unblocked += flip.time - last;
                }
                if flip.blocked {
                    to_blocked += 1;
                } else {
                    to_unblocked += 1;
                }
                last = flip.time;
                blocked = flip.blocked;
            }
            if blocked {
                time_blocked += horizon - last;
            } else {
                time_unblocked += horizon - last;
                replica_unblocked += horizon - last;
            }
        }
        fractions.push(replica_unblocked / (horizon * lat.site_count() as f64));
    }

    // Events while unblocked at rate 2d*b1 = 64, while blocked at d1 = 8.
    let rate_to_blocked = to_blocked as f64 / time_unblocked;
    let se = (to_blocked as f64).sqrt() / time_unblocked;
    assert!(
        (rate_to_blocked - 64.0).abs() < 3.0 * se,
        "unblocked->blocked rate {rate_to_blocked:.3} outside 64 +/- {:.3}",
        3.0 * se
    );
    let rate_to_unblocked = to_unblocked as f64 / time_blocked;
    let se = (to_unblocked as f64).sqrt() / time_blocked;
    assert!(
        (rate_to_unblocked - 8.0).abs() < 3.0 * se,
        "blocked->unblocked rate {rate_to_unblocked:.3} outside 8 +/- {:.3}",
        3.0 * se
    );

    let mean = mcp_core::stats::mean(&fractions);
    let se = mcp_core::stats::sample_sd(&fractions) / (replicas as f64).sqrt();
    let p_star = 1.0 / 9.0;
    assert!(
        (mean - p_star).abs() < 3.0 * se,
        "unblocked fraction {mean:.5} outside {p_star:.5} +/- {:.5}",
        3.0 * se
    );
}

/// The per-edge unblocked 2-arrow counting process started all-unblocked
/// stochastically dominates the equilibrium-start modulated process with
/// the mapped parameters: its empirical tails may not fall significantly
/// below the modulated ones on any (t, k) cell.
#[test]
fn unblocked_counts_dominate_equilibrium_modulated_process() {
    let p = McpParams::new(4.0, 6.0, 8.0, 1).unwrap();
    let rates = p.rates();
    let b = cpree_broman_params(&p);
    let lat = line(3); // distinct neighbors, single edge 1 -> 0
    let time_grid = [0.5, 1.0, 2.0];
    let horizon = 2.0;
    let k_max = 14u64;
    let replicas = 30_000u32;

    let mut graph_hist = vec![vec![0u64; k_max as usize + 2]; time_grid.len()];
    let mut mod_hist = vec![vec![0u64; k_max as usize + 2]; time_grid.len()];
    for r in 0..replicas {
        let log = generate(lat, &rates, horizon, split_seed(0xA7, u64::from(r))).unwrap();
        let cls = classify_arrows(&log);
        let counts = unblocked_counts(&log, &cls, 1, 0, &time_grid).unwrap();
        for (i, c) in counts.iter().enumerate() {
            graph_hist[i][(*c).min(k_max + 1) as usize] += 1;
        }
        let traj = simulate_modulated(
            &b,
            horizon,
            split_seed(0xA8, u64::from(r)),
            BackgroundInit::Equilibrium,
        )
        .unwrap();
        for (i, t) in time_grid.iter().enumerate() {
            mod_hist[i][traj.count_at(*t).min(k_max + 1) as usize] += 1;
        }
    }

    let n = f64::from(replicas);
    for (i, t) in time_grid.iter().enumerate() {
        let tail = |hist: &Vec<u64>, k: u64| -> f64 {
            hist.iter().skip(k as usize).sum::<u64>() as f64 / n
        };
        for k in 1..=k_max {
            let tg = tail(&graph_hist[i], k);
            let tm = tail(&mod_hist[i], k);
            let se = ((tg * (1.0 - tg) + tm * (1.0 - tm)) / n).sqrt();
            assert!(
                tg >= tm - 4.0 * se,
                "domination violated at t={t}, k={k}: graphical {tg:.5} vs modulated {tm:.5} (se {se:.5})"
            );
        }
    }
}

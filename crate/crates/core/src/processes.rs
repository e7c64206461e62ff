//! Process evolution over a graphical structure.
//!
//! All processes read the same event log; only the interpretation rule
//! differs:
//!
//! * standard contact process — `Arrow1` infects an empty tip from an
//!   occupied source, `DeathAll` kills the particle;
//! * MCP — `Arrow1`/`Arrow2` give type-1/type-2 births from occupied
//!   sources, `DeathAll` kills type 2, `Death1` kills type 1;
//! * CPREE — as MCP except type-1 births are spontaneous at 1-arrow tips;
//! * perturbed MCP — death marks on the `DeathAll` stream kill *every* type
//!   (the shared-death construction) and `Death1` marks add extra type-1
//!   deaths at rate `sigma`.
//!
//! Coupled runs evolve two processes on the identical log and assert the
//! claimed subset relations after every event; these relations are
//! deterministic consequences of the construction, so a single violation is
//! a defect, not noise.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::graphical::{generate, Event, EventKind, EventLog, Lattice, Site};
use crate::rng::{split_seed, stream_rng, u01};
use crate::stats::binomial_half_width;
use crate::thresholds::{DomainError, GenericMcpRates, McpParams};

#[cfg(feature = "serde")]
use serde::Serialize;

/// Cell states.
pub const EMPTY: u8 = 0;
pub const TYPE1: u8 = 1;
pub const TYPE2: u8 = 2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProcessError {
    #[error("configuration lattice does not match the event log lattice")]
    LatticeMismatch,
    #[error("invalid cell state {state}")]
    BadState { state: u8 },
    #[error("a standard contact process configuration may not contain type 2")]
    Type2InContactProcess,
    #[error("initial configurations violate relation `{relation}` at site {site}")]
    Precondition { site: Site, relation: &'static str },
    #[error("log death1 rate {log_d1} does not equal the requested sigma {sigma}")]
    SigmaMismatch { log_d1: f64, sigma: f64 },
    #[error("survival estimation needs at least {min} replicas, got {got}")]
    TooFewReplicas { got: u32, min: u32 },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Graphical(#[from] crate::graphical::GraphicalError),
}

/// Lattice state map with values in `{EMPTY, TYPE1, TYPE2}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Configuration {
    lattice: Lattice,
    cells: Vec<u8>,
}

impl Configuration {
    /// Every site in the same state.
    pub fn uniform(lattice: Lattice, state: u8) -> Result<Self, ProcessError> {
        if state > TYPE2 {
            return Err(ProcessError::BadState { state });
        }
        Ok(Self { lattice, cells: vec![state; lattice.site_count()] })
    }

    /// `origin_state` at the center site, `background` everywhere else.
    pub fn single_seed(lattice: Lattice, origin_state: u8, background: u8) -> Result<Self, ProcessError> {
        let mut cfg = Self::uniform(lattice, background)?;
        if origin_state > TYPE2 {
            return Err(ProcessError::BadState { state: origin_state });
        }
        cfg.cells[lattice.origin() as usize] = origin_state;
        Ok(cfg)
    }

    /// Product measure: independently per site, type 1 with probability
    /// `p1`, type 2 with probability `p2`, empty otherwise.
    pub fn product(
        lattice: Lattice,
        p1: f64,
        p2: f64,
        rng: &mut impl RngCore,
    ) -> Result<Self, ProcessError> {
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(DomainError::ProbabilityClosed { name, value: p }.into());
            }
        }
        if p1 + p2 > 1.0 {
            return Err(DomainError::ProbabilityClosed { name: "p1 + p2", value: p1 + p2 }.into());
        }
        let cells = (0..lattice.site_count())
            .map(|_| {
                let u = u01(rng);
                if u < p1 {
                    TYPE1
                } else if u < p1 + p2 {
                    TYPE2
                } else {
                    EMPTY
                }
            })
            .collect();
        Ok(Self { lattice, cells })
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn get(&self, site: Site) -> u8 {
        self.cells[site as usize]
    }

    pub fn set(&mut self, site: Site, state: u8) -> Result<(), ProcessError> {
        if state > TYPE2 {
            return Err(ProcessError::BadState { state });
        }
        self.cells[site as usize] = state;
        Ok(())
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn population(&self, state: u8) -> u64 {
        self.cells.iter().filter(|&&c| c == state).count() as u64
    }
}

/// Which dynamics interpret the log.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum ProcessKind {
    /// Standard contact process with birth rate `lambda`; expects a log
    /// with rates `(b1 = lambda, d1 = 0, b2 = 0, d2 = 1)`.
    Cp { lambda: f64 },
    Mcp,
    Cpree,
    /// MCP with shared death marks (`DeathAll` kills every type) plus an
    /// extra type-1 death stream of rate `sigma` on the `Death1` marks.
    McpPerturbed { sigma: f64 },
}

impl ProcessKind {
    fn rule(&self) -> Rule {
        match self {
            ProcessKind::Cp { .. } => Rule::Cp,
            ProcessKind::Mcp => Rule::Mcp,
            ProcessKind::Cpree => Rule::Cpree,
            ProcessKind::McpPerturbed { .. } => Rule::McpPerturbed,
        }
    }

    /// The particle type whose survival this process tracks.
    pub fn tracked_state(&self) -> u8 {
        match self {
            ProcessKind::Cp { .. } => TYPE1,
            _ => TYPE2,
        }
    }
}

/// The rates a log must be generated with for `kind` to have its intended
/// transition table.
pub fn log_rates_for(kind: &ProcessKind, p: &McpParams) -> Result<GenericMcpRates, DomainError> {
    match kind {
        ProcessKind::Cp { lambda } => GenericMcpRates::standard_cp(*lambda, p.dim()),
        ProcessKind::Mcp | ProcessKind::Cpree => Ok(p.rates()),
        ProcessKind::McpPerturbed { sigma } => p.rates().with_d1(*sigma),
    }
}

/// Event-application rule. `McpSharedDeath` is the unperturbed side of the
/// perturbed-death coupling: shared death marks, type-1 marks ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    Cp,
    Mcp,
    Cpree,
    McpSharedDeath,
    McpPerturbed,
}

/// One process being driven over a log: configuration plus incrementally
/// maintained populations.
#[derive(Debug, Clone)]
pub struct ProcessState {
    rule: Rule,
    config: Configuration,
    pop: [u64; 3],
}

impl ProcessState {
    pub fn new(kind: &ProcessKind, init: Configuration) -> Result<Self, ProcessError> {
        Self::with_rule(kind.rule(), init)
    }

    fn with_rule(rule: Rule, init: Configuration) -> Result<Self, ProcessError> {
        let mut pop = [0u64; 3];
        for &c in init.cells() {
            if c > TYPE2 {
                return Err(ProcessError::BadState { state: c });
            }
            pop[c as usize] += 1;
        }
        if rule == Rule::Cp && pop[TYPE2 as usize] > 0 {
            return Err(ProcessError::Type2InContactProcess);
        }
        Ok(Self { rule, config: init, pop })
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn into_config(self) -> Configuration {
        self.config
    }

    pub fn cell(&self, site: Site) -> u8 {
        self.config.get(site)
    }

    pub fn population(&self, state: u8) -> u64 {
        self.pop[state as usize]
    }

    fn set_cell(&mut self, site: Site, state: u8) {
        let old = self.config.get(site);
        if old != state {
            self.pop[old as usize] -= 1;
            self.pop[state as usize] += 1;
            self.config.cells[site as usize] = state;
        }
    }

    /// Apply one graphical symbol. Only the tip site can change.
    pub fn apply(&mut self, e: &Event) {
        let x = e.tip;
        let cur = self.cell(x);
        match e.kind {
            EventKind::Arrow1 => {
                let born = match self.rule {
                    // Spontaneous at the tip for the CPREE.
                    Rule::Cpree => cur == EMPTY,
                    _ => {
                        cur == EMPTY
                            && e.source.map(|y| self.cell(y) == TYPE1).unwrap_or(false)
                    }
                };
                if born {
                    self.set_cell(x, TYPE1);
                }
            }
            EventKind::Arrow2 => {
                if self.rule != Rule::Cp
                    && cur == EMPTY
                    && e.source.map(|y| self.cell(y) == TYPE2).unwrap_or(false)
                {
                    self.set_cell(x, TYPE2);
                }
            }
            EventKind::DeathAll => match self.rule {
                Rule::Cp => {
                    if cur == TYPE1 {
                        self.set_cell(x, EMPTY);
                    }
                }
                Rule::Mcp | Rule::Cpree => {
                    if cur == TYPE2 {
                        self.set_cell(x, EMPTY);
                    }
                }
                Rule::McpSharedDeath | Rule::McpPerturbed => {
                    if cur != EMPTY {
                        self.set_cell(x, EMPTY);
                    }
                }
            },
            EventKind::Death1 => match self.rule {
                Rule::Mcp | Rule::Cpree | Rule::McpPerturbed => {
                    if cur == TYPE1 {
                        self.set_cell(x, EMPTY);
                    }
                }
                Rule::Cp | Rule::McpSharedDeath => {}
            },
        }
    }
}

/// State sampled at one checkpoint time.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct CheckpointSample {
    pub time: f64,
    pub origin_state: u8,
    pub pop1: u64,
    pub pop2: u64,
    pub config: Configuration,
}

/// Result of evolving one process over a log.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Trajectory {
    pub samples: Vec<CheckpointSample>,
    pub final_config: Configuration,
    pub events_applied: u64,
}

/// Evolve `kind` over the log from `init`, sampling the configuration at
/// the requested checkpoint times (states are right-continuous: a
/// checkpoint at `t` sees every event with `time <= t`). The final
/// configuration is the state at the log horizon.
pub fn evolve(
    kind: &ProcessKind,
    log: &EventLog,
    init: &Configuration,
    checkpoints: &[f64],
) -> Result<Trajectory, ProcessError> {
    if init.lattice() != log.lattice() {
        return Err(ProcessError::LatticeMismatch);
    }
    let mut state = ProcessState::new(kind, init.clone())?;
    let origin = log.lattice().origin();

    let mut cps: Vec<f64> = checkpoints.to_vec();
    cps.sort_by(f64::total_cmp);
    cps.dedup();

    let mut samples = Vec::with_capacity(cps.len());
    let mut cp_idx = 0;
    let mut record_until = |t_next: f64, state: &ProcessState, cp_idx: &mut usize| {
        while *cp_idx < cps.len() && cps[*cp_idx] < t_next {
            samples.push(CheckpointSample {
                time: cps[*cp_idx],
                origin_state: state.cell(origin),
                pop1: state.population(TYPE1),
                pop2: state.population(TYPE2),
                config: state.config().clone(),
            });
            *cp_idx += 1;
        }
    };

    let mut events_applied = 0u64;
    for e in log.events() {
        record_until(e.time, &state, &mut cp_idx);
        state.apply(e);
        events_applied += 1;
    }
    record_until(f64::INFINITY, &state, &mut cp_idx);

    Ok(Trajectory { samples, final_config: state.into_config(), events_applied })
}

/// A single broken relation, recorded at the event that broke it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Violation {
    pub time: f64,
    pub site: Site,
    pub relation: &'static str,
}

/// Occupancy of one process at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct OccupancySample {
    pub process: &'static str,
    pub time: f64,
    pub origin_state: u8,
    pub pop1: u64,
    pub pop2: u64,
}

/// Outcome of a coupled run. A passing run has no violations.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct CoupledRunReport {
    pub checked_events: u64,
    pub violations: Vec<Violation>,
    pub final_configs: Vec<Configuration>,
    pub occupancy: Vec<OccupancySample>,
}

impl CoupledRunReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Test hook: after event index `after_event`, force a violating pair of
/// states at `site` so the detector itself can be exercised.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct FaultInjection {
    pub after_event: u64,
    pub site: Site,
}

/// Options shared by the coupled runs.
#[derive(Debug, Clone, Default)]
pub struct CoupleOptions {
    /// Times at which both processes' occupancies are sampled.
    pub checkpoints: Vec<f64>,
    pub fault: Option<FaultInjection>,
}

impl CoupleOptions {
    pub fn with_checkpoints(checkpoints: Vec<f64>) -> Self {
        Self { checkpoints, fault: None }
    }

    /// Default checkpoints `{T/4, T/2, T}`.
    pub fn default_for_horizon(horizon: f64) -> Self {
        Self::with_checkpoints(vec![horizon / 4.0, horizon / 2.0, horizon])
    }
}

/// Per-site relation check: pushes one violation per broken relation.
type SiteCheck = fn(u8, u8, f64, Site, &mut Vec<Violation>);

struct CouplingSetup {
    names: [&'static str; 2],
    check: SiteCheck,
    /// States forced at the fault site `(first, second)`.
    fault_states: (u8, u8),
    /// Checkpoint-level assertion that `pop2(first) <= pop2(second)`.
    check_pop2_order: bool,
}

fn run_coupled(
    log: &EventLog,
    mut first: ProcessState,
    mut second: ProcessState,
    opts: &CoupleOptions,
    setup: &CouplingSetup,
) -> Result<CoupledRunReport, ProcessError> {
    // Preconditions: the relations must hold at t = 0.
    for site in 0..log.lattice().site_count() as Site {
        let mut init_violations = Vec::new();
        (setup.check)(first.cell(site), second.cell(site), 0.0, site, &mut init_violations);
        if let Some(v) = init_violations.first() {
            return Err(ProcessError::Precondition { site, relation: v.relation });
        }
    }

    let mut cps: Vec<f64> = opts.checkpoints.clone();
    cps.sort_by(f64::total_cmp);
    cps.dedup();

    let origin = log.lattice().origin();
    let mut violations = Vec::new();
    let mut occupancy = Vec::new();
    let mut cp_idx = 0usize;

    macro_rules! record_until {
        ($t_next:expr) => {
            while cp_idx < cps.len() && cps[cp_idx] < $t_next {
                let t = cps[cp_idx];
                for (name, st) in
                    [(setup.names[0], &first), (setup.names[1], &second)]
                {
                    occupancy.push(OccupancySample {
                        process: name,
                        time: t,
                        origin_state: st.cell(origin),
                        pop1: st.population(TYPE1),
                        pop2: st.population(TYPE2),
                    });
                }
                if setup.check_pop2_order
                    && first.population(TYPE2) > second.population(TYPE2)
                {
                    violations.push(Violation { time: t, site: origin, relation: "type2-population" });
                }
                cp_idx += 1;
            }
        };
    }

    let mut checked_events = 0u64;
    for (index, e) in log.events().iter().enumerate() {
        record_until!(e.time);
        first.apply(e);
        second.apply(e);
        checked_events += 1;
        (setup.check)(first.cell(e.tip), second.cell(e.tip), e.time, e.tip, &mut violations);

        if let Some(fault) = &opts.fault {
            if index as u64 == fault.after_event {
                first.set_cell(fault.site, setup.fault_states.0);
                second.set_cell(fault.site, setup.fault_states.1);
                (setup.check)(
                    first.cell(fault.site),
                    second.cell(fault.site),
                    e.time,
                    fault.site,
                    &mut violations,
                );
            }
        }
    }
    record_until!(f64::INFINITY);

    Ok(CoupledRunReport {
        checked_events,
        violations,
        final_configs: vec![first.into_config(), second.into_config()],
        occupancy,
    })
}

fn check_lattices(log: &EventLog, configs: &[&Configuration]) -> Result<(), ProcessError> {
    if configs.iter().any(|c| c.lattice() != log.lattice()) {
        return Err(ProcessError::LatticeMismatch);
    }
    Ok(())
}

/// Couple an MCP and a CPREE on the identical log and assert after every
/// event that the CPREE's type-1 set covers the MCP's and the CPREE's
/// type-2 set sits inside the MCP's. Both relations are preserved by every
/// symbol of the construction, so any violation is reported exactly.
pub fn couple_cpree_mcp(
    log: &EventLog,
    init_mcp: Configuration,
    init_cpree: Configuration,
    opts: &CoupleOptions,
) -> Result<CoupledRunReport, ProcessError> {
    check_lattices(log, &[&init_mcp, &init_cpree])?;
    let mcp = ProcessState::with_rule(Rule::Mcp, init_mcp)?;
    let cpree = ProcessState::with_rule(Rule::Cpree, init_cpree)?;
    fn check(mcp: u8, cpree: u8, time: f64, site: Site, out: &mut Vec<Violation>) {
        if mcp == TYPE1 && cpree != TYPE1 {
            out.push(Violation { time, site, relation: "type1-cover" });
        }
        if cpree == TYPE2 && mcp != TYPE2 {
            out.push(Violation { time, site, relation: "type2-subset" });
        }
    }
    run_coupled(
        log,
        mcp,
        cpree,
        opts,
        &CouplingSetup {
            names: ["mcp", "cpree"],
            check,
            // Violating pair: a CPREE type 2 the MCP does not carry.
            fault_states: (EMPTY, TYPE2),
            check_pop2_order: false,
        },
    )
    .map(|mut report| {
        // Corollary of type2-subset: CPREE type-2 population never exceeds
        // the MCP's. Asserted directly at checkpoints.
        let mut extra = Vec::new();
        for pair in report.occupancy.chunks(2) {
            if let [mcp, cpree] = pair {
                if cpree.pop2 > mcp.pop2 {
                    extra.push(Violation {
                        time: mcp.time,
                        site: log.lattice().origin(),
                        relation: "type2-population",
                    });
                }
            }
        }
        report.violations.extend(extra);
        report
    })
}

/// Couple two MCPs on the identical log and assert the four attractiveness
/// relations after every event: the lower process has more type 1 and
/// less type 2, in the set-nesting sense, for all time.
pub fn couple_mcp_attractive(
    log: &EventLog,
    init_lower: Configuration,
    init_upper: Configuration,
    opts: &CoupleOptions,
) -> Result<CoupledRunReport, ProcessError> {
    check_lattices(log, &[&init_lower, &init_upper])?;
    let lower = ProcessState::with_rule(Rule::Mcp, init_lower)?;
    let upper = ProcessState::with_rule(Rule::Mcp, init_upper)?;
    fn check(lower: u8, upper: u8, time: f64, site: Site, out: &mut Vec<Violation>) {
        if upper == TYPE1 && lower != TYPE1 {
            out.push(Violation { time, site, relation: "type1-superset" });
        }
        if upper != TYPE2 && lower == TYPE2 {
            out.push(Violation { time, site, relation: "non2-superset" });
        }
        if lower != TYPE1 && upper == TYPE1 {
            out.push(Violation { time, site, relation: "non1-subset" });
        }
        if lower == TYPE2 && upper != TYPE2 {
            out.push(Violation { time, site, relation: "type2-subset" });
        }
    }
    run_coupled(
        log,
        lower,
        upper,
        opts,
        &CouplingSetup {
            names: ["lower", "upper"],
            check,
            fault_states: (TYPE2, EMPTY),
            check_pop2_order: true,
        },
    )
}

/// Couple the shared-death MCP against its death-perturbed copy on a log
/// whose `Death1` stream carries the extra rate `sigma`. Both share arrows
/// and all-type death marks; only the perturbed copy loses type 1 at the
/// `Death1` marks. Asserts that the unperturbed process keeps more type 1
/// and less type 2.
pub fn couple_prop1(
    log: &EventLog,
    sigma: f64,
    init: Configuration,
    opts: &CoupleOptions,
) -> Result<CoupledRunReport, ProcessError> {
    check_lattices(log, &[&init])?;
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(DomainError::Negative { name: "sigma", value: sigma }.into());
    }
    if log.rates().d1() != sigma {
        return Err(ProcessError::SigmaMismatch { log_d1: log.rates().d1(), sigma });
    }
    let unperturbed = ProcessState::with_rule(Rule::McpSharedDeath, init.clone())?;
    let perturbed = ProcessState::with_rule(Rule::McpPerturbed, init)?;
    fn check(unpert: u8, pert: u8, time: f64, site: Site, out: &mut Vec<Violation>) {
        if pert == TYPE1 && unpert != TYPE1 {
            out.push(Violation { time, site, relation: "type1-superset" });
        }
        if unpert == TYPE2 && pert != TYPE2 {
            out.push(Violation { time, site, relation: "type2-subset" });
        }
    }
    run_coupled(
        log,
        unperturbed,
        perturbed,
        opts,
        &CouplingSetup {
            names: ["mcp", "mcp-perturbed"],
            check,
            fault_states: (TYPE2, EMPTY),
            check_pop2_order: false,
        },
    )
}

/// How replicas are initialized in survival experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum InitSpec {
    /// Contact process: origin infected, all else empty. MCP/CPREE: origin
    /// type 2, all other sites type 1.
    SingleSeedAtOrigin,
    /// Independent per site: type 1 w.p. `p1`, type 2 w.p. `p2`.
    Product { p1: f64, p2: f64 },
    /// Every site holds the tracked type.
    All2,
}

impl InitSpec {
    fn build(
        &self,
        kind: &ProcessKind,
        lattice: Lattice,
        rng: &mut impl RngCore,
    ) -> Result<Configuration, ProcessError> {
        let tracked = kind.tracked_state();
        match self {
            InitSpec::SingleSeedAtOrigin => {
                let background = if tracked == TYPE2 { TYPE1 } else { EMPTY };
                Configuration::single_seed(lattice, tracked, background)
            }
            InitSpec::Product { p1, p2 } => {
                if matches!(kind, ProcessKind::Cp { .. }) && *p2 > 0.0 {
                    return Err(ProcessError::Type2InContactProcess);
                }
                Configuration::product(lattice, *p1, *p2, rng)
            }
            InitSpec::All2 => Configuration::uniform(lattice, tracked),
        }
    }
}

/// Survival and origin-occupancy counts over a replica range. Replica `r`
/// generates its own log with seed `split_seed(seed, r)`, so disjoint
/// ranges may run in parallel and sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SurvivalCounts {
    pub replicas: u32,
    pub survived: u64,
    pub origin_occupied: u64,
}

impl SurvivalCounts {
    pub fn merge(mut self, other: SurvivalCounts) -> SurvivalCounts {
        self.replicas += other.replicas;
        self.survived += other.survived;
        self.origin_occupied += other.origin_occupied;
        self
    }
}

/// Monte Carlo survival output: population survival at the horizon and
/// occupancy of the origin by the tracked type at the horizon (the
/// finite-horizon proxy for strong survival), with 95% normal-approximation
/// half-widths.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct SurvivalEstimate {
    pub replicas: u32,
    pub survive_count: u64,
    pub origin_occupied_count: u64,
    /// Fraction of replicas whose tracked-type population was positive at
    /// the horizon.
    pub estimate: f64,
    pub half_width: f64,
    /// Fraction of replicas with the tracked type at the origin at the
    /// horizon.
    pub origin_estimate: f64,
    pub origin_half_width: f64,
}

impl SurvivalEstimate {
    pub fn from_counts(counts: SurvivalCounts) -> Self {
        let n = counts.replicas;
        let nf = f64::from(n);
        SurvivalEstimate {
            replicas: n,
            survive_count: counts.survived,
            origin_occupied_count: counts.origin_occupied,
            estimate: counts.survived as f64 / nf,
            half_width: binomial_half_width(counts.survived, u64::from(n), 1.96),
            origin_estimate: counts.origin_occupied as f64 / nf,
            origin_half_width: binomial_half_width(counts.origin_occupied, u64::from(n), 1.96),
        }
    }
}

/// Run replicas `range` of the survival experiment. The tracked type's
/// extinction is absorbing under every rule here, so a replica stops as
/// soon as its tracked population hits zero.
pub fn survival_counts(
    kind: &ProcessKind,
    params: &McpParams,
    lattice: Lattice,
    horizon: f64,
    seed: u64,
    init: &InitSpec,
    range: core::ops::Range<u32>,
) -> Result<SurvivalCounts, ProcessError> {
    let rates = log_rates_for(kind, params)?;
    let tracked = kind.tracked_state();
    let origin = lattice.origin();
    let mut counts = SurvivalCounts::default();
    for r in range {
        let replica_seed = split_seed(seed, u64::from(r));
        let log = generate(lattice, &rates, horizon, replica_seed)?;
        let mut init_rng = stream_rng(replica_seed, 1);
        let config = init.build(kind, lattice, &mut init_rng)?;
        let mut state = ProcessState::new(kind, config)?;
        for e in log.events() {
            if state.population(tracked) == 0 {
                break;
            }
            state.apply(e);
        }
        counts.replicas += 1;
        if state.population(tracked) > 0 {
            counts.survived += 1;
        }
        if state.cell(origin) == tracked {
            counts.origin_occupied += 1;
        }
    }
    Ok(counts)
}

/// Monte Carlo survival estimate over `replicas` independent replicas.
pub fn estimate_survival(
    kind: &ProcessKind,
    params: &McpParams,
    lattice: Lattice,
    horizon: f64,
    replicas: u32,
    seed: u64,
    init: &InitSpec,
) -> Result<SurvivalEstimate, ProcessError> {
    if replicas < 100 {
        return Err(ProcessError::TooFewReplicas { got: replicas, min: 100 });
    }
    let counts = survival_counts(kind, params, lattice, horizon, seed, init, 0..replicas)?;
    Ok(SurvivalEstimate::from_counts(counts))
}

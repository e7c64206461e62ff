//! Harris graphical constructions on finite lattice boxes.
//!
//! An [`EventLog`] is the full space-time Poisson structure a run is read
//! off from: per-site death marks on two independent streams (`DeathAll`,
//! the marks killing type 2 — or every type, depending on the process rule —
//! and `Death1`, the marks killing type 1 only) and per-directed-edge birth
//! arrows (`Arrow1`, `Arrow2`). Arrows are generated indexed by their tip
//! site; the blocked-arrow classifier depends on that convention.
//!
//! Logs are immutable after generation, bit-reproducible from
//! `(lattice, rates, horizon, seed)`, and replayable: evolving any process
//! twice over the same log yields identical trajectories.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::rng::{exp_time, stream_rng};
use crate::thresholds::GenericMcpRates;

#[cfg(feature = "serde")]
use serde::Serialize;

/// Site index into a lattice box, row-major mixed radix over the axes.
pub type Site = u32;

/// Default cap on the expected number of events a single log may hold.
pub const DEFAULT_EVENT_CAP: u64 = 100_000_000;

/// Largest site count a box may have (dense per-site state arrays).
pub const MAX_SITES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphicalError {
    #[error("lattice dimension must be at least 1")]
    BadDimension,
    #[error("side must be at least {min} for this boundary, got {side}")]
    BadSide { side: u32, min: u32 },
    #[error("box has {sites} sites, over the {MAX_SITES} dense-state limit")]
    TooManySites { sites: u64 },
    #[error("horizon must be strictly positive and finite, got {value}")]
    BadHorizon { value: f64 },
    #[error("rates dimension {rates_dim} does not match lattice dimension {lattice_dim}")]
    DimensionMismatch { rates_dim: u32, lattice_dim: u32 },
    #[error("expected event count {expected:.3e} exceeds the cap {cap:.3e}")]
    ResourceCap { expected: f64, cap: f64 },
    #[error("event {index}: {reason}")]
    BadEvent { index: usize, reason: &'static str },
    #[error("({src}, {tip}) is not a directed neighbor pair of this box")]
    UnknownEdge { src: Site, tip: Site },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: &'static str },
}

/// Boundary condition of the finite box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum Boundary {
    /// Wrap around every axis; preserves translation invariance.
    Periodic,
    /// Sites on the boundary simply have fewer neighbors.
    Free,
}

/// A finite box of `side^dim` sites in the `dim`-dimensional lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Lattice {
    dim: u32,
    side: u32,
    boundary: Boundary,
}

impl Lattice {
    /// Periodic boxes need `side >= 2`; free boxes allow a single site.
    pub fn new(dim: u32, side: u32, boundary: Boundary) -> Result<Self, GraphicalError> {
        if dim == 0 {
            return Err(GraphicalError::BadDimension);
        }
        let min = match boundary {
            Boundary::Periodic => 2,
            Boundary::Free => 1,
        };
        if side < min {
            return Err(GraphicalError::BadSide { side, min });
        }
        let mut sites: u64 = 1;
        for _ in 0..dim {
            sites = sites.saturating_mul(u64::from(side));
            if sites > MAX_SITES {
                return Err(GraphicalError::TooManySites { sites });
            }
        }
        Ok(Self { dim, side, boundary })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn site_count(&self) -> usize {
        (0..self.dim).fold(1usize, |n, _| n * self.side as usize)
    }

    /// The center site, used as the default seed location.
    pub fn origin(&self) -> Site {
        let half = self.side / 2;
        let mut site = 0u64;
        let mut stride = 1u64;
        for _ in 0..self.dim {
            site += u64::from(half) * stride;
            stride *= u64::from(self.side);
        }
        site as Site
    }

    /// Neighbors of `site`, one per (axis, direction). Under periodic
    /// boundary this always yields `2 * dim` entries (a multiset when
    /// `side == 2`); under free boundary, out-of-box directions are skipped.
    pub fn neighbors(&self, site: Site) -> Neighbors {
        Neighbors { lattice: *self, site, step: 0 }
    }

    /// Whether `(source, tip)` is a directed neighbor pair.
    pub fn are_neighbors(&self, source: Site, tip: Site) -> bool {
        self.neighbors(tip).any(|y| y == source)
    }

    pub fn contains(&self, site: Site) -> bool {
        (site as usize) < self.site_count()
    }

    /// Total number of directed neighbor pairs `(y, x)`.
    pub fn directed_edge_count(&self) -> u64 {
        (0..self.site_count() as Site)
            .map(|x| self.neighbors(x).count() as u64)
            .sum()
    }

    fn neighbor_along(&self, site: Site, axis: u32, positive: bool) -> Option<Site> {
        let mut stride = 1u64;
        for _ in 0..axis {
            stride *= u64::from(self.side);
        }
        let coord = (u64::from(site) / stride) % u64::from(self.side);
        let last = u64::from(self.side) - 1;
        let site = u64::from(site);
        let next = match (positive, self.boundary) {
            (true, _) if coord < last => site + stride,
            (true, Boundary::Periodic) => site - last * stride,
            (true, Boundary::Free) => return None,
            (false, _) if coord > 0 => site - stride,
            (false, Boundary::Periodic) => site + last * stride,
            (false, Boundary::Free) => return None,
        };
        Some(next as Site)
    }
}

/// Iterator over the neighbors of a site.
pub struct Neighbors {
    lattice: Lattice,
    site: Site,
    step: u32,
}

impl Iterator for Neighbors {
    type Item = Site;

    fn next(&mut self) -> Option<Site> {
        while self.step < 2 * self.lattice.dim {
            let axis = self.step / 2;
            let positive = self.step % 2 == 1;
            self.step += 1;
            if let Some(n) = self.lattice.neighbor_along(self.site, axis, positive) {
                return Some(n);
            }
        }
        None
    }
}

/// The four Poisson symbol kinds of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum EventKind {
    /// Death mark on the `d2` stream: kills type 2 in the MCP, the particle
    /// in the standard contact process, every type in the shared-death rule.
    DeathAll,
    /// Death mark on the `d1` stream: kills type 1 only.
    Death1,
    /// Type-1 birth arrow `source -> tip`.
    Arrow1,
    /// Type-2 birth arrow `source -> tip`.
    Arrow2,
}

impl EventKind {
    pub fn is_arrow(&self) -> bool {
        matches!(self, EventKind::Arrow1 | EventKind::Arrow2)
    }

    fn token(&self) -> &'static str {
        match self {
            EventKind::DeathAll => "death_all",
            EventKind::Death1 => "death1",
            EventKind::Arrow1 => "arrow1",
            EventKind::Arrow2 => "arrow2",
        }
    }

    fn from_token(tok: &str) -> Option<Self> {
        Some(match tok {
            "death_all" => EventKind::DeathAll,
            "death1" => EventKind::Death1,
            "arrow1" => EventKind::Arrow1,
            "arrow2" => EventKind::Arrow2,
            _ => return None,
        })
    }
}

/// One symbol of the graphical structure. Arrows carry a source; death
/// marks do not.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub tip: Site,
    pub source: Option<Site>,
}

/// A time-sorted, replayable graphical structure on a finite box.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct EventLog {
    lattice: Lattice,
    horizon: f64,
    seed: u64,
    rates: GenericMcpRates,
    events: Vec<Event>,
}

impl EventLog {
    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rates(&self) -> &GenericMcpRates {
        &self.rates
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Validating constructor for logs built outside [`generate`]
    /// (synthetic tests, parsed text logs). Events must be non-decreasing in
    /// time, inside `(0, horizon]`, on valid sites, with sources present
    /// exactly on arrows and forming directed neighbor pairs.
    pub fn from_parts(
        lattice: Lattice,
        horizon: f64,
        seed: u64,
        rates: GenericMcpRates,
        events: Vec<Event>,
    ) -> Result<Self, GraphicalError> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(GraphicalError::BadHorizon { value: horizon });
        }
        if rates.dim() != lattice.dim() {
            return Err(GraphicalError::DimensionMismatch {
                rates_dim: rates.dim(),
                lattice_dim: lattice.dim(),
            });
        }
        let mut prev = 0.0f64;
        for (index, e) in events.iter().enumerate() {
            let bad = |reason| GraphicalError::BadEvent { index, reason };
            if !e.time.is_finite() || e.time <= 0.0 || e.time > horizon {
                return Err(bad("time outside (0, horizon]"));
            }
            if e.time < prev {
                return Err(bad("events not sorted by time"));
            }
            prev = e.time;
            if !lattice.contains(e.tip) {
                return Err(bad("tip outside the box"));
            }
            match (e.kind.is_arrow(), e.source) {
                (true, Some(src)) => {
                    if !lattice.are_neighbors(src, e.tip) {
                        return Err(bad("arrow source is not a neighbor of its tip"));
                    }
                }
                (true, None) => return Err(bad("arrow without a source")),
                (false, Some(_)) => return Err(bad("death mark with a source")),
                (false, None) => {}
            }
        }
        Ok(Self { lattice, horizon, seed, rates, events })
    }

    /// Line-delimited debug format: a header, then one `time kind tip
    /// [source]` line per event. Times use the shortest representation that
    /// round-trips exactly, so `from_text(to_text(log)) == log`.
    pub fn to_text(&self) -> String {
        let boundary = match self.lattice.boundary {
            Boundary::Periodic => "periodic",
            Boundary::Free => "free",
        };
        let mut out = String::new();
        out.push_str("# event-log v1\n");
        out.push_str(&format!(
            "# lattice dim={} side={} boundary={}\n",
            self.lattice.dim, self.lattice.side, boundary
        ));
        out.push_str(&format!(
            "# rates b1={} d1={} b2={} d2={}\n",
            self.rates.b1(),
            self.rates.d1(),
            self.rates.b2(),
            self.rates.d2()
        ));
        out.push_str(&format!("# horizon={} seed={}\n", self.horizon, self.seed));
        for e in &self.events {
            match e.source {
                Some(src) => {
                    out.push_str(&format!("{} {} {} {}\n", e.time, e.kind.token(), e.tip, src));
                }
                None => out.push_str(&format!("{} {} {}\n", e.time, e.kind.token(), e.tip)),
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GraphicalError> {
        let parse = |line: usize, reason: &'static str| GraphicalError::Parse { line, reason };
        let mut lattice = None;
        let mut rates = None;
        let mut horizon_seed = None;
        let mut events = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line == "# event-log v1" {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# lattice ") {
                let mut dim = None;
                let mut side = None;
                let mut boundary = None;
                for field in rest.split_whitespace() {
                    let (key, value) =
                        field.split_once('=').ok_or(parse(lineno, "malformed lattice field"))?;
                    match key {
                        "dim" => dim = value.parse::<u32>().ok(),
                        "side" => side = value.parse::<u32>().ok(),
                        "boundary" => {
                            boundary = match value {
                                "periodic" => Some(Boundary::Periodic),
                                "free" => Some(Boundary::Free),
                                _ => None,
                            }
                        }
                        _ => return Err(parse(lineno, "unknown lattice field")),
                    }
                }
                let (Some(dim), Some(side), Some(boundary)) = (dim, side, boundary) else {
                    return Err(parse(lineno, "incomplete lattice header"));
                };
                lattice = Some(Lattice::new(dim, side, boundary)?);
            } else if let Some(rest) = line.strip_prefix("# rates ") {
                let mut vals = [None::<f64>; 4];
                for field in rest.split_whitespace() {
                    let (key, value) =
                        field.split_once('=').ok_or(parse(lineno, "malformed rates field"))?;
                    let slot = match key {
                        "b1" => 0,
                        "d1" => 1,
                        "b2" => 2,
                        "d2" => 3,
                        _ => return Err(parse(lineno, "unknown rates field")),
                    };
                    vals[slot] = value.parse::<f64>().ok();
                }
                let [Some(b1), Some(d1), Some(b2), Some(d2)] = vals else {
                    return Err(parse(lineno, "incomplete rates header"));
                };
                rates = Some((b1, d1, b2, d2));
            } else if let Some(rest) = line.strip_prefix("# horizon=") {
                let (h, s) = rest.split_once(" seed=").ok_or(parse(lineno, "malformed horizon header"))?;
                let h = h.parse::<f64>().map_err(|_| parse(lineno, "bad horizon"))?;
                let s = s.parse::<u64>().map_err(|_| parse(lineno, "bad seed"))?;
                horizon_seed = Some((h, s));
            } else if line.starts_with('#') {
                return Err(parse(lineno, "unknown header line"));
            } else {
                let mut fields = line.split_whitespace();
                let time = fields
                    .next()
                    .and_then(|t| t.parse::<f64>().ok())
                    .ok_or(parse(lineno, "bad event time"))?;
                let kind = fields
                    .next()
                    .and_then(EventKind::from_token)
                    .ok_or(parse(lineno, "bad event kind"))?;
                let tip = fields
                    .next()
                    .and_then(|t| t.parse::<Site>().ok())
                    .ok_or(parse(lineno, "bad event tip"))?;
                let source = match fields.next() {
                    Some(tok) => {
                        Some(tok.parse::<Site>().map_err(|_| parse(lineno, "bad event source"))?)
                    }
                    None => None,
                };
                if fields.next().is_some() {
                    return Err(parse(lineno, "trailing fields on event line"));
                }
                events.push(Event { time, kind, tip, source });
            }
        }

        let lattice = lattice.ok_or(parse(0, "missing lattice header"))?;
        let (b1, d1, b2, d2) = rates.ok_or(parse(0, "missing rates header"))?;
        let (horizon, seed) = horizon_seed.ok_or(parse(0, "missing horizon header"))?;
        let rates = GenericMcpRates::new(b1, d1, b2, d2, lattice.dim())
            .map_err(|_| parse(0, "invalid rates"))?;
        Self::from_parts(lattice, horizon, seed, rates, events)
    }
}

/// Generate the graphical structure with the default event cap.
pub fn generate(
    lattice: Lattice,
    rates: &GenericMcpRates,
    horizon: f64,
    seed: u64,
) -> Result<EventLog, GraphicalError> {
    generate_with_cap(lattice, rates, horizon, seed, DEFAULT_EVENT_CAP)
}

/// Generate the graphical structure.
///
/// Streams are sampled in a fixed canonical order — per site: `DeathAll`,
/// `Death1`, then per neighbor (axis-minor order) `Arrow1`, `Arrow2`, with
/// arrows indexed by their tip — and merged with a stable sort, so the log
/// is bit-reproducible from its inputs. Errors before sampling when the
/// expected event count exceeds `cap`.
pub fn generate_with_cap(
    lattice: Lattice,
    rates: &GenericMcpRates,
    horizon: f64,
    seed: u64,
    cap: u64,
) -> Result<EventLog, GraphicalError> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(GraphicalError::BadHorizon { value: horizon });
    }
    if rates.dim() != lattice.dim() {
        return Err(GraphicalError::DimensionMismatch {
            rates_dim: rates.dim(),
            lattice_dim: lattice.dim(),
        });
    }
    let sites = lattice.site_count() as f64;
    let edges = lattice.directed_edge_count() as f64;
    let expected =
        horizon * (sites * (rates.d1() + rates.d2()) + edges * (rates.b1() + rates.b2()));
    if expected > cap as f64 {
        return Err(GraphicalError::ResourceCap { expected, cap: cap as f64 });
    }

    fn push_stream<R: RngCore>(
        rng: &mut R,
        rate: f64,
        horizon: f64,
        kind: EventKind,
        tip: Site,
        source: Option<Site>,
        events: &mut Vec<Event>,
    ) {
        if rate <= 0.0 {
            return;
        }
        let mut t = exp_time(rng, rate);
        while t <= horizon {
            events.push(Event { time: t, kind, tip, source });
            t += exp_time(rng, rate);
        }
    }

    let mut rng = stream_rng(seed, 0);
    let mut events = Vec::with_capacity(expected as usize + 16);
    for x in 0..lattice.site_count() as Site {
        push_stream(&mut rng, rates.d2(), horizon, EventKind::DeathAll, x, None, &mut events);
        push_stream(&mut rng, rates.d1(), horizon, EventKind::Death1, x, None, &mut events);
        for y in lattice.neighbors(x) {
            push_stream(&mut rng, rates.b1(), horizon, EventKind::Arrow1, x, Some(y), &mut events);
            push_stream(&mut rng, rates.b2(), horizon, EventKind::Arrow2, x, Some(y), &mut events);
        }
    }

    // Stable sort: floating-point ties (measure zero) keep generation order.
    events.sort_by(|a, b| a.time.total_cmp(&b.time));

    Ok(EventLog { lattice, horizon, seed, rates: *rates, events })
}

/// Label of a 2-arrow in the domination argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum ArrowLabel {
    /// A 1-arrow tip sits below this 2-arrow on the same timeline with no
    /// type-1 death mark in between; conservatively discarded.
    Blocked,
    Unblocked,
}

/// One recorded change of a site's background bit.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct BackgroundFlip {
    pub time: f64,
    pub blocked: bool,
}

/// Blocked/unblocked labels for every 2-arrow of a log, plus the
/// reconstructed per-site background paths.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct ArrowClassification {
    labels: Vec<ArrowLabel>,
    background: Vec<Vec<BackgroundFlip>>,
}

impl ArrowClassification {
    /// Labels parallel to the log's `Arrow2` events in log order.
    pub fn labels(&self) -> &[ArrowLabel] {
        &self.labels
    }

    /// State changes of one site's background bit; sites start unblocked.
    pub fn background(&self, site: Site) -> &[BackgroundFlip] {
        &self.background[site as usize]
    }

    pub fn site_count(&self) -> usize {
        self.background.len()
    }
}

/// Classify every 2-arrow in one chronological sweep.
///
/// Each site carries one background bit, initially unblocked (nothing sits
/// below `t = 0`). An `Arrow1` tip event sets its site blocked, a `Death1`
/// mark sets it unblocked, and each `Arrow2` is labeled with its tip's
/// current bit. Only `(time, kind, tip)` matter, so the classification is
/// invariant under re-serialization of the log.
#[must_use]
pub fn classify_arrows(log: &EventLog) -> ArrowClassification {
    let n = log.lattice().site_count();
    let mut blocked = alloc::vec![false; n];
    let mut background = alloc::vec![Vec::new(); n];
    let mut labels = Vec::new();
    for e in log.events() {
        let site = e.tip as usize;
        match e.kind {
            EventKind::Arrow1 => {
                if !blocked[site] {
                    blocked[site] = true;
                    background[site].push(BackgroundFlip { time: e.time, blocked: true });
                }
            }
            EventKind::Death1 => {
                if blocked[site] {
                    blocked[site] = false;
                    background[site].push(BackgroundFlip { time: e.time, blocked: false });
                }
            }
            EventKind::Arrow2 => {
                labels.push(if blocked[site] { ArrowLabel::Blocked } else { ArrowLabel::Unblocked });
            }
            EventKind::DeathAll => {}
        }
    }
    ArrowClassification { labels, background }
}

/// Cumulative counts of unblocked 2-arrows on the directed edge
/// `source -> tip` at each grid time.
pub fn unblocked_counts(
    log: &EventLog,
    cls: &ArrowClassification,
    source: Site,
    tip: Site,
    time_grid: &[f64],
) -> Result<Vec<u64>, GraphicalError> {
    if !log.lattice().are_neighbors(source, tip) {
        return Err(GraphicalError::UnknownEdge { src: source, tip });
    }
    let mut times = Vec::new();
    let mut arrow2_index = 0usize;
    for e in log.events() {
        if e.kind == EventKind::Arrow2 {
            if e.tip == tip
                && e.source == Some(source)
                && cls.labels()[arrow2_index] == ArrowLabel::Unblocked
            {
                times.push(e.time);
            }
            arrow2_index += 1;
        }
    }
    Ok(time_grid
        .iter()
        .map(|t| times.partition_point(|x| x <= t) as u64)
        .collect())
}

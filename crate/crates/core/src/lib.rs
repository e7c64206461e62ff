//! Simulation and verification laboratory for the multitype contact process
//! (MCP) with unequal death rates.
//!
//! The crate has four layers:
//!
//! * [`thresholds`] — closed-form stochastic-domination thresholds for the
//!   four-parameter MCP family, the two-state modulated point process bound,
//!   the consistency bound `c*`, and sufficiency predicates.
//! * [`pointproc`] — exact simulation of background-modulated and homogeneous
//!   Poisson processes plus statistical tail-dominance testing.
//! * [`graphical`] — Harris graphical constructions on finite lattice boxes:
//!   generation, deterministic replay, text serialization, and blocked-arrow
//!   classification.
//! * [`processes`] — contact process / MCP / CPREE evolution over an event
//!   log, coupled runs with event-by-event invariant checking, and Monte
//!   Carlo survival estimation.
//!
//! Everything here is deterministic given `(parameters, seed)`: replicas are
//! keyed by `(seed, replica index)` through [`rng::split_seed`] so results do
//! not depend on execution order. The crate is `no_std` (with `alloc`);
//! orchestration, parallelism and file I/O live in the companion `mcp-lab`
//! crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod graphical;
mod math;
pub mod pointproc;
pub mod processes;
pub mod rng;
pub mod stats;
pub mod thresholds;

pub use graphical::{
    ArrowClassification, ArrowLabel, Boundary, Event, EventKind, EventLog, Lattice, Site,
};
pub use pointproc::{BackgroundInit, DominanceReport, ModulatedTrajectory, TailViolation};
pub use processes::{
    Configuration, CoupleOptions, CoupledRunReport, FaultInjection, InitSpec, ProcessKind,
    SurvivalEstimate, Trajectory,
};
pub use thresholds::{BromanParams, DomainError, GenericMcpRates, McpParams};

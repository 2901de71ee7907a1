//! Engine for user-centric N-of-1 trials.
//!
//! A trial pairs a goal with one intervention (withdrawal design) or two
//! (alternating-treatment design), a set of typed measures and a phase
//! schedule. From that description the engine derives the A/B phase sequence,
//! the daily tasks and notification times, validates recorded measurements
//! and summarizes them per phase.
//!
//! Everything here is a pure function over immutable values and needs only
//! `alloc`. Persistence, the command line and the local HTTP service live in
//! the `nof1` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
mod error;
pub mod ids;
pub mod interchange;
pub mod library;
pub mod lifecycle;
pub mod model;
pub mod schedule;
pub mod tasks;
#[cfg(feature = "testkit")]
pub mod testkit;
pub mod time;

pub use error::{Error, ParseError, ValidationError};
pub use ids::{IdSource, SequentialIds};
pub use interchange::{export_trial, import_trial, SCHEMA_VERSION};
pub use model::{
    validate_draft, validate_measurement, ComponentId, ComponentKind, Design, Goal, Intervention, LogBook, Measure,
    MeasureInput, Measurement, MeasurementValue, Reminder, Schedule, Stage, TaskCheck, Trial, Violation, ViolationCode,
};
pub use schedule::{default_schedule, phase_sequence, OrderStrategy, PhaseLabel, PhasePlan, PhasePosition};
pub use time::{TimeOfDay, Timestamp};

pub type Result<T, E = Error> = core::result::Result<T, E>;

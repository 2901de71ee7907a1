//! Phase sequences and the mapping from trial days to phases.
//!
//! A trial is a run of phase pairs. Each pair holds one A phase and one B
//! phase, so every sequence is balanced. Alternating order repeats `AB`;
//! counterbalanced order flips the orientation of every other pair
//! (`AB`, `BA`, `AB`, ...).

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::model::Schedule;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PhaseLabel {
    A,
    B,
}

impl PhaseLabel {
    pub fn other(self) -> PhaseLabel {
        match self {
            PhaseLabel::A => PhaseLabel::B,
            PhaseLabel::B => PhaseLabel::A,
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseLabel::A => "A",
            PhaseLabel::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderStrategy {
    Alternating,
    Counterbalanced,
}

/// `{7 days, 2 pairs, alternating}`, i.e. `ABAB` over 28 days.
pub fn default_schedule() -> Schedule {
    Schedule { phase_duration_days: 7, phase_pairs: 2, order: OrderStrategy::Alternating }
}

/// Label of the phase at `ordinal` (0-based) under `order`.
pub fn phase_label(order: OrderStrategy, ordinal: u32) -> PhaseLabel {
    let first = match order {
        OrderStrategy::Alternating => PhaseLabel::A,
        OrderStrategy::Counterbalanced if (ordinal / 2).is_multiple_of(2) => PhaseLabel::A,
        OrderStrategy::Counterbalanced => PhaseLabel::B,
    };
    if ordinal.is_multiple_of(2) {
        first
    } else {
        first.other()
    }
}

pub fn phase_sequence(order: OrderStrategy, pairs: u32) -> Result<Vec<PhaseLabel>, Error> {
    if pairs < 1 {
        return Err(Error::InvalidPairs);
    }
    Ok((0..2 * pairs).map(|k| phase_label(order, k)).collect())
}

/// A phase sequence with its per-phase length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhasePlan {
    pub sequence: Vec<PhaseLabel>,
    pub phase_duration_days: u32,
}

/// Where a trial day falls in the phase plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhasePosition {
    pub label: PhaseLabel,
    pub phase_ordinal: u32,
    pub day_within_phase: u32,
}

impl Schedule {
    pub fn plan(&self) -> Result<PhasePlan, Error> {
        Ok(PhasePlan {
            sequence: phase_sequence(self.order, self.phase_pairs)?,
            phase_duration_days: self.phase_duration_days,
        })
    }

    pub fn phase_count(&self) -> u32 {
        2 * self.phase_pairs
    }

    /// Maps a 0-based day (day 0 is the start date) onto its phase.
    pub fn phase_on_day(&self, day: i64) -> Result<PhasePosition, Error> {
        let total = self.total_days();
        if day < 0 || day >= total as i64 || self.phase_duration_days == 0 {
            return Err(Error::DayOutOfRange { day, total });
        }
        let day = day as u32;
        let ordinal = day / self.phase_duration_days;
        Ok(PhasePosition {
            label: phase_label(self.order, ordinal),
            phase_ordinal: ordinal,
            day_within_phase: day % self.phase_duration_days,
        })
    }
}

/// `2 × pairs × phase duration`.
pub fn total_duration(schedule: &Schedule) -> u32 {
    schedule.total_days()
}

//! Descriptive per-phase summaries of logged measurements.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{ComponentId, MeasureInput, Measurement, MeasurementValue, Stage, Trial};
use crate::schedule::PhaseLabel;
use crate::tasks::{day_index_of, generate};
use crate::time::Timestamp;
use crate::Error;

/// The phase a timestamp falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhaseRef {
    pub day_index: u32,
    pub phase_ordinal: u32,
    pub label: PhaseLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhaseSummary {
    pub phase_ordinal: u32,
    pub label: PhaseLabel,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    /// List measures only: how often each item index was chosen.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub item_counts: BTreeMap<u32, usize>,
}

/// Pooled A-phase values against pooled B-phase values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionComparison {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_b: Option<f64>,
    /// `mean_a - mean_b`, defined only when both sides have data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difference: Option<f64>,
    pub n_a: usize,
    pub n_b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Adherence {
    pub completed: usize,
    pub generated: usize,
    pub fraction: f64,
}

/// Phase of a timestamp, by calendar day; the time of day is ignored.
pub fn assign_phase(trial: &Trial, timestamp: Timestamp) -> Result<PhaseRef, Error> {
    let day = day_index_of(trial, timestamp.date).ok_or(Error::NotStarted)?;
    let position = trial.effective_schedule().phase_on_day(day).map_err(|_| Error::OutOfWindow)?;
    Ok(PhaseRef { day_index: day as u32, phase_ordinal: position.phase_ordinal, label: position.label })
}

fn measurements_for<'a>(trial: &'a Trial, measure_id: &ComponentId) -> impl Iterator<Item = &'a Measurement> {
    let id = measure_id.clone();
    trial.logs.measurements.iter().filter(move |m| m.measure_id == id)
}

/// One summary per phase of the schedule, in sequence order. Measurements
/// outside the trial window are ignored.
pub fn phase_summaries(trial: &Trial, measure_id: &ComponentId) -> Result<Vec<PhaseSummary>, Error> {
    trial.measure(measure_id).ok_or_else(|| Error::UnknownMeasure(measure_id.0.clone()))?;
    let schedule = trial.effective_schedule();
    let mut summaries: Vec<PhaseSummary> = (0..schedule.phase_count())
        .map(|ordinal| PhaseSummary {
            phase_ordinal: ordinal,
            label: crate::schedule::phase_label(schedule.order, ordinal),
            count: 0,
            mean: None,
            min: None,
            max: None,
            item_counts: BTreeMap::new(),
        })
        .collect();
    let mut sums = alloc::vec![0.0f64; summaries.len()];

    for m in measurements_for(trial, measure_id) {
        let Ok(phase) = assign_phase(trial, m.timestamp) else { continue };
        let n = phase.phase_ordinal as usize;
        let summary = &mut summaries[n];
        summary.count += 1;
        match m.value {
            MeasurementValue::List { index } => *summary.item_counts.entry(index).or_default() += 1,
            value => {
                let x = value.as_f64().unwrap_or_default();
                sums[n] += x;
                summary.min = Some(summary.min.map_or(x, |v| v.min(x)));
                summary.max = Some(summary.max.map_or(x, |v| v.max(x)));
            }
        }
    }
    for (summary, sum) in summaries.iter_mut().zip(sums) {
        if summary.count > 0 && summary.min.is_some() {
            summary.mean = Some(sum / summary.count as f64);
        }
    }
    Ok(summaries)
}

pub fn condition_comparison(trial: &Trial, measure_id: &ComponentId) -> Result<ConditionComparison, Error> {
    let measure = trial.measure(measure_id).ok_or_else(|| Error::UnknownMeasure(measure_id.0.clone()))?;
    if matches!(measure.input, MeasureInput::List { .. }) {
        return Err(Error::UnsupportedForList);
    }
    let (mut sum_a, mut n_a, mut sum_b, mut n_b) = (0.0, 0usize, 0.0, 0usize);
    for m in measurements_for(trial, measure_id) {
        let (Ok(phase), Some(x)) = (assign_phase(trial, m.timestamp), m.value.as_f64()) else { continue };
        match phase.label {
            PhaseLabel::A => {
                sum_a += x;
                n_a += 1;
            }
            PhaseLabel::B => {
                sum_b += x;
                n_b += 1;
            }
        }
    }
    let mean = |sum: f64, n: usize| (n > 0).then(|| sum / n as f64);
    let (mean_a, mean_b) = (mean(sum_a, n_a), mean(sum_b, n_b));
    let difference = mean_a.zip(mean_b).map(|(a, b)| a - b);
    Ok(ConditionComparison { mean_a, mean_b, difference, n_a, n_b })
}

/// Completed share of the tasks generated from day 0 through `today`
/// (inclusive, capped at the last trial day).
pub fn adherence(trial: &Trial, today: chrono::NaiveDate) -> Result<Adherence, Error> {
    if trial.stage == Stage::Draft {
        return Err(Error::NotStarted);
    }
    let total = trial.effective_schedule().total_days() as i64;
    let today = day_index_of(trial, today).ok_or(Error::NotStarted)?;
    let last = today.min(total - 1);

    let (mut generated, mut completed) = (0, 0);
    for day in 0..=last {
        for task in generate(trial, day)? {
            generated += 1;
            let done = trial.logs.task_checks.iter().any(|c| {
                c.completed && c.component_id == task.component_id && c.date == task.date && c.time == task.time
            });
            if done {
                completed += 1;
            }
        }
    }
    let fraction = if generated == 0 { 0.0 } else { completed as f64 / generated as f64 };
    Ok(Adherence { completed, generated, fraction })
}

//! Trial lifecycle: draft → running → finished.
//!
//! Each operation takes the current trial by reference and returns the next
//! value; on error the caller's trial is untouched.

use chrono::NaiveDate;

use crate::ids::IdSource;
use crate::model::{
    validate_draft, validate_measurement, ComponentId, ComponentKind, LogBook, Measurement, MeasurementValue, Stage,
    TaskCheck, Trial,
};
use crate::schedule::default_schedule;
use crate::tasks::{day_index_of, generate, progress};
use crate::time::{format_date, TimeOfDay, Timestamp};
use crate::Error;

/// Checks a draft and fills in the default schedule when none was set.
pub fn finalize_draft(draft: &Trial) -> Result<Trial, Error> {
    if draft.stage != Stage::Draft {
        return Err(Error::AlreadyStarted);
    }
    let violations = validate_draft(draft);
    if !violations.is_empty() {
        return Err(Error::DraftInvalid(violations));
    }
    let mut trial = draft.clone();
    trial.schedule.get_or_insert_with(default_schedule);
    Ok(trial)
}

/// Finalizes the draft and starts it on `start_date` (trial day 0).
pub fn start_trial(trial: &Trial, start_date: NaiveDate) -> Result<Trial, Error> {
    let mut trial = finalize_draft(trial)?;
    trial.stage = Stage::Running;
    trial.start_date = Some(start_date);
    trial.logs = LogBook::default();
    Ok(trial)
}

fn in_window(trial: &Trial, date: NaiveDate) -> bool {
    let total = trial.effective_schedule().total_days() as i64;
    matches!(day_index_of(trial, date), Some(day) if (0..total).contains(&day))
}

pub fn log_measurement(
    trial: &Trial,
    measure_id: &ComponentId,
    timestamp: Timestamp,
    value: MeasurementValue,
) -> Result<Trial, Error> {
    if trial.stage != Stage::Running {
        return Err(Error::TrialNotRunning);
    }
    let measure = trial.measure(measure_id).ok_or_else(|| Error::UnknownMeasure(measure_id.0.clone()))?;
    let value = validate_measurement(measure, value)?;
    if !in_window(trial, timestamp.date) {
        return Err(Error::OutOfWindow);
    }
    let mut next = trial.clone();
    next.logs.measurements.push(Measurement { measure_id: measure_id.clone(), timestamp, value });
    Ok(next)
}

/// Records (or updates) the completion state of a generated task.
pub fn mark_task(
    trial: &Trial,
    component_id: &ComponentId,
    date: NaiveDate,
    time: TimeOfDay,
    completed: bool,
) -> Result<Trial, Error> {
    if trial.stage != Stage::Running {
        return Err(Error::TrialNotRunning);
    }
    let no_such_task = || Error::NoSuchTask {
        component: component_id.0.clone(),
        date: alloc::format!("{}", format_date(date)),
        time: alloc::format!("{time}"),
    };
    let day = day_index_of(trial, date).ok_or_else(no_such_task)?;
    let tasks = generate(trial, day).map_err(|_| no_such_task())?;
    if !tasks.iter().any(|t| &t.component_id == component_id && t.time == time) {
        return Err(no_such_task());
    }

    let mut next = trial.clone();
    let checks = &mut next.logs.task_checks;
    match checks.iter_mut().find(|c| &c.component_id == component_id && c.date == date && c.time == time) {
        Some(check) => check.completed = completed,
        None => checks.push(TaskCheck { component_id: component_id.clone(), date, time, completed }),
    }
    Ok(next)
}

/// Moves a running trial to `Finished` once `today` is past its last day.
/// Returns `None` when nothing changes.
pub fn observe_finish(trial: &Trial, today: NaiveDate) -> Option<Trial> {
    if trial.stage != Stage::Running {
        return None;
    }
    let finished = progress(trial, today).map(|p| p.finished).unwrap_or(false);
    finished.then(|| {
        let mut next = trial.clone();
        next.stage = Stage::Finished;
        next
    })
}

/// A new draft copying the components and schedule of a finished trial,
/// with fresh ids and no logs.
pub fn restart_from(previous: &Trial, ids: &mut impl IdSource) -> Result<Trial, Error> {
    if previous.stage != Stage::Finished {
        return Err(Error::NotFinished);
    }
    let mut draft = Trial::draft(previous.design);
    draft.goal = previous.goal.clone();
    draft.schedule = previous.schedule;
    draft.intervention_a = previous.intervention_a.clone().map(|mut i| {
        i.id = ids.fresh_id(ComponentKind::Intervention);
        i
    });
    draft.intervention_b = previous.intervention_b.clone().map(|mut i| {
        i.id = ids.fresh_id(ComponentKind::Intervention);
        i
    });
    draft.measures = previous
        .measures
        .iter()
        .cloned()
        .map(|mut m| {
            m.id = ids.fresh_id(ComponentKind::Measure);
            m
        })
        .collect();
    Ok(draft)
}

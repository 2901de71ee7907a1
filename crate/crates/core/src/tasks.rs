//! Daily tasks and notification events generated from reminders.
//!
//! Measures are collected in every phase. An intervention only produces tasks
//! on days of its own phase: intervention A on A days, intervention B on B
//! days, and nothing on B days of a withdrawal design.

use alloc::string::String;
use alloc::vec::Vec;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::model::{ComponentId, ComponentKind, Design, Reminder, Stage, Trial};
use crate::schedule::PhaseLabel;
use crate::time::{days_between, TimeOfDay, Timestamp};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Task {
    pub component_id: ComponentId,
    pub component_kind: ComponentKind,
    #[serde(with = "crate::time::date_format")]
    pub date: NaiveDate,
    pub time: TimeOfDay,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NotificationEvent {
    pub task: Task,
    pub fire_at: Timestamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Progress {
    pub day_index: i64,
    pub fraction: f64,
    pub finished: bool,
}

/// Reminders are anchored at trial day 0.
pub fn reminder_fires_on(reminder: &Reminder, day: u32) -> bool {
    reminder.every_n_days != 0 && day.is_multiple_of(reminder.every_n_days)
}

pub fn tasks_for_day(trial: &Trial, day: i64) -> Result<Vec<Task>, Error> {
    if trial.stage != Stage::Running {
        return Err(Error::TrialNotRunning);
    }
    generate(trial, day)
}

/// Tasks for `day` regardless of stage, for any started trial.
pub(crate) fn generate(trial: &Trial, day: i64) -> Result<Vec<Task>, Error> {
    let start = trial.start_date.ok_or(Error::NotStarted)?;
    let schedule = trial.effective_schedule();
    let phase = schedule.phase_on_day(day)?;
    let date = start + Days::new(day as u64);
    let day = day as u32;

    let mut tasks = Vec::new();
    let mut push = |id: &ComponentId, kind, title: &str, reminders: &[Reminder]| {
        for r in reminders.iter().filter(|r| reminder_fires_on(r, day)) {
            for &time in &r.times {
                tasks.push(Task { component_id: id.clone(), component_kind: kind, date, time, title: title.into() });
            }
        }
    };

    for m in &trial.measures {
        push(&m.id, ComponentKind::Measure, &m.name, &m.reminders);
    }
    let active = match (trial.design, phase.label) {
        (_, PhaseLabel::A) => trial.intervention_a.as_ref(),
        (Design::AlternatingTreatment, PhaseLabel::B) => trial.intervention_b.as_ref(),
        (Design::Withdrawal, PhaseLabel::B) => None,
    };
    if let Some(i) = active {
        push(&i.id, ComponentKind::Intervention, &i.name, &i.reminders);
    }

    tasks.sort_by(|a, b| (a.time, a.component_kind, &a.component_id).cmp(&(b.time, b.component_kind, &b.component_id)));
    // Two reminders of one component may share a time; keep one task.
    tasks.dedup_by(|a, b| a.time == b.time && a.component_id == b.component_id);
    Ok(tasks)
}

/// Notification events for days `from..=to`, ordered by firing time.
pub fn notification_schedule(trial: &Trial, from: i64, to: i64) -> Result<Vec<NotificationEvent>, Error> {
    if trial.stage != Stage::Running {
        return Err(Error::TrialNotRunning);
    }
    let total = trial.effective_schedule().total_days();
    if from > to {
        return Err(Error::DayOutOfRange { day: from, total });
    }
    let mut events = Vec::new();
    for day in from..=to {
        events.extend(
            tasks_for_day(trial, day)?
                .into_iter()
                .map(|task| NotificationEvent { fire_at: Timestamp::new(task.date, task.time), task }),
        );
    }
    Ok(events)
}

pub fn progress(trial: &Trial, today: NaiveDate) -> Result<Progress, Error> {
    let start = match (trial.stage, trial.start_date) {
        (Stage::Draft, _) | (_, None) => return Err(Error::NotStarted),
        (_, Some(start)) => start,
    };
    let total = trial.effective_schedule().total_days();
    let day_index = days_between(start, today);
    Ok(Progress {
        day_index,
        fraction: (day_index as f64 / total as f64).clamp(0.0, 1.0),
        finished: day_index >= total as i64,
    })
}

/// 0-based trial day of `date`, or `None` before the start.
pub fn day_index_of(trial: &Trial, date: NaiveDate) -> Option<i64> {
    trial.start_date.map(|start| days_between(start, date))
}

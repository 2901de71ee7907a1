//! Store-level operations shared by the command line and the HTTP service.
//!
//! Each function resolves the relevant trial in the store, calls the engine
//! and records the result. Callers wrap mutations in [`Store::transact`] so a
//! failed operation leaves the store untouched.

use chrono::{Local, NaiveDate, Timelike};
use nof1_core::analysis::{self, Adherence, ConditionComparison, PhaseSummary};
use nof1_core::lifecycle;
use nof1_core::tasks::{self, Progress};
use nof1_core::{
    export_trial, import_trial, ComponentId, ComponentKind, IdSource, MeasureInput, MeasurementValue, Schedule, Stage,
    TimeOfDay, Timestamp, Trial,
};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StoreError};
use crate::store::{Store, StoredTrial};

/// Source of "now". Fixed clocks make every command reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clock {
    System,
    Fixed(Timestamp),
}

impl Clock {
    pub fn now(&self) -> Timestamp {
        match self {
            Clock::Fixed(ts) => *ts,
            Clock::System => {
                let now = Local::now().naive_local();
                let time = TimeOfDay::new(now.hour() as u8, now.minute() as u8).expect("valid wall clock");
                Timestamp::new(now.date(), time)
            }
        }
    }

    pub fn today(&self) -> NaiveDate {
        self.now().date
    }
}

/// Component ids like `measure-3f9a1c2e`.
#[derive(Debug, Default, Clone, Copy)]
pub struct RandomIds;

impl IdSource for RandomIds {
    fn fresh_id(&mut self, kind: ComponentKind) -> ComponentId {
        let kind = match kind {
            ComponentKind::Intervention => "intervention",
            ComponentKind::Measure => "measure",
        };
        let uuid = uuid::Uuid::new_v4().simple().to_string();
        ComponentId(format!("{kind}-{}", &uuid[..8]))
    }
}

/// A task as shown to the user, with its completion state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaskView {
    #[serde(flatten)]
    pub task: tasks::Task,
    pub done: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeriesPoint {
    pub timestamp: Timestamp,
    pub value: MeasurementValue,
}

/// History of one measure: per-phase summaries, the A/B comparison
/// (numeric and scale measures) and the raw series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryView {
    pub measure_id: ComponentId,
    pub measure_name: String,
    pub phases: Vec<PhaseSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ConditionComparison>,
    pub series: Vec<SeriesPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StatusView {
    pub stage: Stage,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub progress: Option<Progress>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adherence: Option<Adherence>,
    pub archived: usize,
}

/// Marks the active trial finished once its last day has passed.
pub fn refresh(store: &mut Store, today: NaiveDate) -> bool {
    let Some(active) = store.active.as_mut() else { return false };
    match lifecycle::observe_finish(&active.trial, today) {
        Some(done) => {
            active.trial = done;
            true
        }
        None => false,
    }
}

/// Installs a new active trial. A running trial blocks replacement; a
/// finished one moves to the archive; a draft is discarded.
fn install_active(store: &mut Store, trial: Trial) -> Result<()> {
    match store.active.take() {
        Some(current) if current.trial.stage == Stage::Running => {
            store.active = Some(current);
            return Err(StoreError::TrialRunning);
        }
        Some(current) if current.trial.stage == Stage::Finished => store.archive.push(current),
        _ => {}
    }
    store.active = Some(StoredTrial::new(trial));
    Ok(())
}

pub fn create_draft(store: &mut Store, draft: Trial) -> Result<Trial> {
    if draft.stage != Stage::Draft {
        return Err(StoreError::NotDraft);
    }
    let draft = import_trial(&export_trial(&draft))?;
    install_active(store, draft.clone())?;
    Ok(draft)
}

pub fn active_draft(store: &mut Store) -> Result<&mut Trial> {
    let active = store.active.as_mut().ok_or(StoreError::NoTrial)?;
    if active.trial.stage != Stage::Draft {
        return Err(nof1_core::Error::AlreadyStarted.into());
    }
    Ok(&mut active.trial)
}

/// Replaces top-level fields of the active draft. `patch` is a JSON object
/// in the interchange vocabulary; `null` removes an optional field.
pub fn patch_draft(store: &mut Store, patch: &serde_json::Value) -> Result<Trial> {
    let draft = active_draft(store)?;
    let patch = patch.as_object().ok_or_else(|| nof1_core::ParseError::Malformed("patch is not an object".into()))?;
    let mut doc = nof1_core::interchange::to_canonical_value(draft);
    let fields = doc.as_object_mut().expect("trial is an object");
    for (key, value) in patch {
        if matches!(key.as_str(), "stage" | "startDate" | "logs" | "schemaVersion") {
            return Err(nof1_core::ParseError::Malformed(format!("{key} cannot be patched")).into());
        }
        if value.is_null() {
            fields.remove(key);
        } else {
            fields.insert(key.clone(), value.clone());
        }
    }
    let next = nof1_core::interchange::trial_from_value(doc)?;
    *draft = next.clone();
    Ok(next)
}

pub fn edit_schedule(store: &mut Store, schedule: Schedule) -> Result<Trial> {
    let draft = active_draft(store)?;
    if !schedule.is_well_formed() {
        return Err(
            nof1_core::ParseError::InvariantViolation { path: "schedule".into(), code: "INVALID_SCHEDULE" }.into()
        );
    }
    draft.schedule = Some(schedule);
    Ok(draft.clone())
}

pub fn start(store: &mut Store, date: NaiveDate) -> Result<Trial> {
    let active = store.active.as_mut().ok_or(StoreError::NoTrial)?;
    active.trial = lifecycle::start_trial(&active.trial, date)?;
    Ok(active.trial.clone())
}

fn running(store: &Store) -> Result<&Trial> {
    match store.active_trial() {
        Some(t) if t.stage == Stage::Running => Ok(t),
        _ => Err(StoreError::NotRunning),
    }
}

fn running_mut(store: &mut Store) -> Result<&mut Trial> {
    running(store)?;
    Ok(&mut store.active.as_mut().expect("checked").trial)
}

pub fn tasks_on(store: &Store, date: NaiveDate) -> Result<Vec<TaskView>> {
    let trial = running(store)?;
    let day = tasks::day_index_of(trial, date).expect("running trials have a start date");
    Ok(tasks::tasks_for_day(trial, day)?
        .into_iter()
        .map(|task| {
            let done = trial.logs.task_checks.iter().any(|c| {
                c.completed && c.component_id == task.component_id && c.date == task.date && c.time == task.time
            });
            TaskView { task, done }
        })
        .collect())
}

pub fn check_task(
    store: &mut Store,
    component: &ComponentId,
    date: NaiveDate,
    time: TimeOfDay,
    completed: bool,
) -> Result<TaskView> {
    let trial = running_mut(store)?;
    *trial = lifecycle::mark_task(trial, component, date, time, completed)?;
    tasks_on(store, date)?
        .into_iter()
        .find(|v| &v.task.component_id == component && v.task.time == time)
        .ok_or(StoreError::NoTrial)
}

pub fn log(store: &mut Store, measure: &ComponentId, at: Timestamp, value: MeasurementValue) -> Result<SeriesPoint> {
    let trial = running_mut(store)?;
    *trial = lifecycle::log_measurement(trial, measure, at, value)?;
    Ok(SeriesPoint { timestamp: at, value })
}

/// Parses command-line text into a value of the measure's type. List
/// measures accept an item index or the item text.
pub fn parse_value(trial: &Trial, measure: &ComponentId, raw: &str) -> Result<MeasurementValue> {
    let m = trial.measure(measure).ok_or_else(|| nof1_core::Error::UnknownMeasure(measure.0.clone()))?;
    let mismatch = |found| nof1_core::ValidationError::TypeMismatch { expected: m.input.kind_name(), found };
    let raw = raw.trim();
    let value = match &m.input {
        MeasureInput::Numeric { .. } => MeasurementValue::Numeric { value: raw.parse().map_err(|_| mismatch("text"))? },
        MeasureInput::Scale { .. } => MeasurementValue::Scale { value: raw.parse().map_err(|_| mismatch("text"))? },
        MeasureInput::List { items } => match raw.parse::<u32>() {
            Ok(index) => MeasurementValue::List { index },
            Err(_) => {
                let index = items.iter().position(|i| i == raw).ok_or_else(|| mismatch("text"))?;
                MeasurementValue::List { index: index as u32 }
            }
        },
    };
    Ok(value)
}

/// Resolves a measure reference given as id or as exact name.
pub fn resolve_measure(trial: &Trial, reference: &str) -> ComponentId {
    let id = ComponentId::new(reference);
    if trial.measure(&id).is_some() {
        return id;
    }
    trial.measures.iter().find(|m| m.name == reference).map(|m| m.id.clone()).unwrap_or(id)
}

pub fn summary(trial: &Trial, measure: &ComponentId) -> Result<SummaryView> {
    let phases = analysis::phase_summaries(trial, measure)?;
    let m = trial.measure(measure).expect("phase_summaries checked the id");
    let comparison = match analysis::condition_comparison(trial, measure) {
        Ok(c) => Some(c),
        Err(nof1_core::Error::UnsupportedForList) => None,
        Err(e) => return Err(e.into()),
    };
    let mut series: Vec<SeriesPoint> = trial
        .logs
        .measurements
        .iter()
        .filter(|x| &x.measure_id == measure)
        .map(|x| SeriesPoint { timestamp: x.timestamp, value: x.value })
        .collect();
    series.sort_by_key(|p| p.timestamp);
    Ok(SummaryView { measure_id: measure.clone(), measure_name: m.name.clone(), phases, comparison, series })
}

pub fn current(store: &Store) -> Result<&Trial> {
    store.current().ok_or(StoreError::NoTrial)
}

pub fn status(store: &Store, today: NaiveDate) -> Result<StatusView> {
    let trial = current(store)?;
    let started = trial.stage != Stage::Draft;
    Ok(StatusView {
        stage: trial.stage,
        goal: trial.goal.as_ref().map(|g| g.name.clone()),
        progress: started.then(|| tasks::progress(trial, today)).transpose()?,
        adherence: started.then(|| analysis::adherence(trial, today)).transpose()?,
        archived: store.archive.len(),
    })
}

pub fn export(store: &Store) -> Result<String> {
    Ok(export_trial(current(store)?))
}

/// Validates and installs an interchange document: finished trials go to
/// the archive, anything else becomes the active trial.
pub fn import(store: &mut Store, doc: &str) -> Result<Trial> {
    let trial = import_trial(doc)?;
    if trial.stage == Stage::Finished {
        store.archive.push(StoredTrial::new(trial.clone()));
    } else {
        install_active(store, trial.clone())?;
    }
    Ok(trial)
}

/// Starts a new draft from the finished active trial, or from the most
/// recent archived one.
pub fn restart(store: &mut Store, ids: &mut impl IdSource) -> Result<Trial> {
    let source = match store.active_trial() {
        Some(t) if t.stage != Stage::Draft => t,
        _ => store.archive.last().map(|t| &t.trial).ok_or(StoreError::NoTrial)?,
    };
    let draft = lifecycle::restart_from(source, ids)?;
    install_active(store, draft.clone())?;
    Ok(draft)
}

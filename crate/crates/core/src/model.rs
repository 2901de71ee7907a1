//! Trial domain types, their invariants and draft validation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::ValidationError;
use crate::time::{opt_date_format, TimeOfDay, Timestamp};

/// Opaque identifier of an intervention or measure, unique within a trial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComponentId(pub String);

impl ComponentId {
    pub fn new(id: impl Into<String>) -> Self {
        ComponentId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ComponentId {
    fn from(s: &str) -> Self {
        ComponentId(s.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    // Declared first: measures sort before interventions at equal times.
    Measure,
    Intervention,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Goal {
    pub name: String,
}

impl Goal {
    pub fn new(name: impl Into<String>) -> Self {
        Goal { name: name.into() }
    }
}

/// Fires at each of `times` on every `every_n_days`-th trial day, counted
/// from trial day 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Reminder {
    pub times: Vec<TimeOfDay>,
    #[serde(rename = "everyNDays")]
    pub every_n_days: u32,
}

impl Reminder {
    pub fn daily(times: impl IntoIterator<Item = TimeOfDay>) -> Self {
        Self::every(1, times)
    }

    /// Builds a reminder, sorting and de-duplicating the times.
    pub fn every(every_n_days: u32, times: impl IntoIterator<Item = TimeOfDay>) -> Self {
        let times: BTreeSet<_> = times.into_iter().collect();
        Reminder { times: times.into_iter().collect(), every_n_days }
    }

    fn is_well_formed(&self) -> bool {
        self.every_n_days >= 1 && !self.times.is_empty() && self.times.windows(2).all(|w| w[0] < w[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Intervention {
    pub id: ComponentId,
    pub name: String,
    #[serde(default)]
    pub instructions: String,
    pub reminders: Vec<Reminder>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureInput {
    Numeric {
        unit: String,
    },
    List {
        items: Vec<String>,
    },
    Scale {
        min: i32,
        max: i32,
        #[serde(default, with = "annotation_keys")]
        annotations: BTreeMap<i32, String>,
    },
}

// Scale annotations are keyed by integers, written as JSON object keys.
// Internally tagged enums buffer their content, which loses serde_json's
// integer-key handling, so the keys are converted here.
mod annotation_keys {
    use alloc::collections::BTreeMap;
    use alloc::format;
    use alloc::string::String;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<i32, String>, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(map.iter().map(|(k, v)| (format!("{k}"), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BTreeMap<i32, String>, D::Error> {
        BTreeMap::<String, String>::deserialize(deserializer)?
            .into_iter()
            .map(|(k, v)| match k.parse::<i32>() {
                Ok(n) if format!("{n}") == k => Ok((n, v)),
                _ => Err(serde::de::Error::custom(format!("annotation key {k:?} is not an integer"))),
            })
            .collect()
    }
}

impl MeasureInput {
    pub fn kind_name(&self) -> &'static str {
        match self {
            MeasureInput::Numeric { .. } => "numeric",
            MeasureInput::List { .. } => "list",
            MeasureInput::Scale { .. } => "scale",
        }
    }

    fn is_well_formed(&self) -> bool {
        match self {
            MeasureInput::Numeric { .. } => true,
            MeasureInput::List { items } => {
                let unique: BTreeSet<&str> = items.iter().map(|s| s.as_str()).collect();
                items.len() >= 2 && unique.len() == items.len() && items.iter().all(|s| !s.trim().is_empty())
            }
            MeasureInput::Scale { min, max, annotations } => {
                min < max && annotations.keys().all(|k| (min..=max).contains(&k))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Measure {
    pub id: ComponentId,
    pub name: String,
    pub input: MeasureInput,
    pub reminders: Vec<Reminder>,
}

/// A recorded value, matching the variant of the measure's input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasurementValue {
    Numeric {
        value: f64,
    },
    /// 0-based position in the measure's item list.
    List {
        index: u32,
    },
    Scale {
        value: i64,
    },
}

impl MeasurementValue {
    pub fn kind_name(&self) -> &'static str {
        match self {
            MeasurementValue::Numeric { .. } => "numeric",
            MeasurementValue::List { .. } => "list",
            MeasurementValue::Scale { .. } => "scale",
        }
    }

    /// The value as a decimal, for numeric and scale measurements.
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            MeasurementValue::Numeric { value } => Some(value),
            MeasurementValue::Scale { value } => Some(value as f64),
            MeasurementValue::List { .. } => None,
        }
    }
}

/// Re-checks a raw value against the measure's input constraints.
pub fn validate_measurement(measure: &Measure, raw: MeasurementValue) -> Result<MeasurementValue, ValidationError> {
    match (&measure.input, raw) {
        (MeasureInput::Numeric { .. }, MeasurementValue::Numeric { value }) => {
            if value.is_finite() {
                Ok(raw)
            } else {
                Err(ValidationError::NotFinite)
            }
        }
        (MeasureInput::List { items }, MeasurementValue::List { index }) => {
            if (index as usize) < items.len() {
                Ok(raw)
            } else {
                Err(ValidationError::BadIndex { index, len: items.len() })
            }
        }
        (MeasureInput::Scale { min, max, .. }, MeasurementValue::Scale { value }) => {
            if (*min as i64..=*max as i64).contains(&value) {
                Ok(raw)
            } else {
                Err(ValidationError::OutOfRange { value, min: *min, max: *max })
            }
        }
        (input, raw) => Err(ValidationError::TypeMismatch { expected: input.kind_name(), found: raw.kind_name() }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Schedule {
    pub phase_duration_days: u32,
    pub phase_pairs: u32,
    pub order: crate::schedule::OrderStrategy,
}

impl Schedule {
    pub fn is_well_formed(&self) -> bool {
        self.phase_duration_days >= 1 && self.phase_pairs >= 1 && self.total_days_checked().is_some()
    }

    fn total_days_checked(&self) -> Option<u32> {
        2u32.checked_mul(self.phase_pairs)?.checked_mul(self.phase_duration_days)
    }

    /// Total trial length: `2 × pairs × phase duration`.
    pub fn total_days(&self) -> u32 {
        self.total_days_checked().unwrap_or(u32::MAX)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Design {
    /// One intervention (phase A) against no intervention (phase B).
    #[serde(rename = "withdrawal")]
    Withdrawal,
    /// Intervention A against intervention B.
    #[serde(rename = "alternating")]
    AlternatingTreatment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Draft,
    Running,
    Finished,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Measurement {
    pub measure_id: ComponentId,
    pub timestamp: Timestamp,
    pub value: MeasurementValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct TaskCheck {
    pub component_id: ComponentId,
    #[serde(with = "crate::time::date_format")]
    pub date: NaiveDate,
    pub time: TimeOfDay,
    pub completed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct LogBook {
    pub measurements: Vec<Measurement>,
    pub task_checks: Vec<TaskCheck>,
}

impl LogBook {
    pub fn is_empty(&self) -> bool {
        self.measurements.is_empty() && self.task_checks.is_empty()
    }
}

/// The aggregate root.
///
/// Drafts may be incomplete: goal, first intervention and schedule are
/// optional until the draft is finalized. [`validate_draft`] lists what is
/// still missing. Once running, every optional part except `intervention_b`
/// (withdrawal designs) is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Trial {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<Goal>,
    pub design: Design,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervention_a: Option<Intervention>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervention_b: Option<Intervention>,
    pub measures: Vec<Measure>,
    /// `None` until edited or finalized; finalizing applies the default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_date_format")]
    pub start_date: Option<NaiveDate>,
    pub stage: Stage,
    #[serde(default)]
    pub logs: LogBook,
}

impl Trial {
    /// An empty draft.
    pub fn draft(design: Design) -> Self {
        Trial {
            schema_version: crate::interchange::SCHEMA_VERSION,
            goal: None,
            design,
            intervention_a: None,
            intervention_b: None,
            measures: Vec::new(),
            schedule: None,
            start_date: None,
            stage: Stage::Draft,
            logs: LogBook::default(),
        }
    }

    pub fn measure(&self, id: &ComponentId) -> Option<&Measure> {
        self.measures.iter().find(|m| &m.id == id)
    }

    pub fn interventions(&self) -> impl Iterator<Item = &Intervention> {
        self.intervention_a.iter().chain(self.intervention_b.iter())
    }

    pub fn intervention(&self, id: &ComponentId) -> Option<&Intervention> {
        self.interventions().find(|i| &i.id == id)
    }

    /// The schedule in effect: the explicit one or the default.
    pub fn effective_schedule(&self) -> Schedule {
        self.schedule.unwrap_or_else(crate::schedule::default_schedule)
    }

    /// Ids of every intervention and measure, in document order.
    pub fn component_ids(&self) -> impl Iterator<Item = &ComponentId> {
        self.interventions().map(|i| &i.id).chain(self.measures.iter().map(|m| &m.id))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    MissingGoal,
    EmptyName,
    MissingIntervention,
    MissingSecondIntervention,
    UnexpectedSecondIntervention,
    NoMeasures,
    NoReminders,
    InvalidReminder,
    InvalidMeasureInput,
    DuplicateId,
    InvalidSchedule,
    MissingSchedule,
    StageMismatch,
    DanglingReference,
    InvalidMeasurement,
    DuplicateTaskCheck,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::MissingGoal => "MISSING_GOAL",
            ViolationCode::EmptyName => "EMPTY_NAME",
            ViolationCode::MissingIntervention => "MISSING_INTERVENTION",
            ViolationCode::MissingSecondIntervention => "MISSING_SECOND_INTERVENTION",
            ViolationCode::UnexpectedSecondIntervention => "UNEXPECTED_SECOND_INTERVENTION",
            ViolationCode::NoMeasures => "NO_MEASURES",
            ViolationCode::NoReminders => "NO_REMINDERS",
            ViolationCode::InvalidReminder => "INVALID_REMINDER",
            ViolationCode::InvalidMeasureInput => "INVALID_MEASURE_INPUT",
            ViolationCode::DuplicateId => "DUPLICATE_ID",
            ViolationCode::InvalidSchedule => "INVALID_SCHEDULE",
            ViolationCode::MissingSchedule => "MISSING_SCHEDULE",
            ViolationCode::StageMismatch => "STAGE_MISMATCH",
            ViolationCode::DanglingReference => "DANGLING_REFERENCE",
            ViolationCode::InvalidMeasurement => "INVALID_MEASUREMENT",
            ViolationCode::DuplicateTaskCheck => "DUPLICATE_TASK_CHECK",
        }
    }

    /// Violations a draft may carry while it is being edited.
    pub fn is_incompleteness(self) -> bool {
        matches!(
            self,
            ViolationCode::MissingGoal
                | ViolationCode::MissingIntervention
                | ViolationCode::MissingSecondIntervention
                | ViolationCode::UnexpectedSecondIntervention
                | ViolationCode::NoMeasures
                | ViolationCode::NoReminders
        )
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A broken rule and the document path where it was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub path: String,
}

impl Violation {
    fn new(code: ViolationCode, path: impl Into<String>) -> Self {
        Violation { code, path: path.into() }
    }
}

/// Lists everything that keeps a draft from being finalized. Empty means the
/// draft can be started.
pub fn validate_draft(trial: &Trial) -> Vec<Violation> {
    violations(trial)
}

/// Every invariant violation in document order, including incompleteness.
pub(crate) fn violations(trial: &Trial) -> Vec<Violation> {
    let mut out = Vec::new();

    match &trial.goal {
        None => out.push(Violation::new(ViolationCode::MissingGoal, "goal")),
        Some(goal) if goal.name.trim().is_empty() => out.push(Violation::new(ViolationCode::EmptyName, "goal.name")),
        Some(_) => {}
    }

    match &trial.intervention_a {
        None => out.push(Violation::new(ViolationCode::MissingIntervention, "interventionA")),
        Some(i) => check_intervention(i, "interventionA", &mut out),
    }
    match (trial.design, &trial.intervention_b) {
        (Design::AlternatingTreatment, None) => {
            out.push(Violation::new(ViolationCode::MissingSecondIntervention, "interventionB"))
        }
        (Design::Withdrawal, Some(_)) => {
            out.push(Violation::new(ViolationCode::UnexpectedSecondIntervention, "interventionB"))
        }
        (_, Some(i)) => check_intervention(i, "interventionB", &mut out),
        (Design::Withdrawal, None) => {}
    }

    if trial.measures.is_empty() {
        out.push(Violation::new(ViolationCode::NoMeasures, "measures"));
    }
    for (n, m) in trial.measures.iter().enumerate() {
        let path = format!("measures[{n}]");
        if m.name.trim().is_empty() {
            out.push(Violation::new(ViolationCode::EmptyName, format!("{path}.name")));
        }
        if !m.input.is_well_formed() {
            out.push(Violation::new(ViolationCode::InvalidMeasureInput, format!("{path}.input")));
        }
        check_reminders(&m.reminders, &path, &mut out);
    }

    let mut seen = BTreeSet::new();
    let paths = trial
        .intervention_a
        .iter()
        .map(|i| (&i.id, String::from("interventionA.id")))
        .chain(trial.intervention_b.iter().map(|i| (&i.id, String::from("interventionB.id"))))
        .chain(trial.measures.iter().enumerate().map(|(n, m)| (&m.id, format!("measures[{n}].id"))));
    for (id, path) in paths {
        if !seen.insert(id) {
            out.push(Violation::new(ViolationCode::DuplicateId, path));
        }
    }

    match trial.schedule {
        Some(s) if !s.is_well_formed() => out.push(Violation::new(ViolationCode::InvalidSchedule, "schedule")),
        None if trial.stage != Stage::Draft => out.push(Violation::new(ViolationCode::MissingSchedule, "schedule")),
        _ => {}
    }

    let started = trial.stage != Stage::Draft;
    if started != trial.start_date.is_some() {
        out.push(Violation::new(ViolationCode::StageMismatch, "startDate"));
    }
    if !started && !trial.logs.is_empty() {
        out.push(Violation::new(ViolationCode::StageMismatch, "logs"));
    }

    check_logs(trial, &mut out);
    out
}

fn check_intervention(i: &Intervention, path: &str, out: &mut Vec<Violation>) {
    if i.name.trim().is_empty() {
        out.push(Violation::new(ViolationCode::EmptyName, format!("{path}.name")));
    }
    check_reminders(&i.reminders, path, out);
}

fn check_reminders(reminders: &[Reminder], path: &str, out: &mut Vec<Violation>) {
    if reminders.is_empty() {
        out.push(Violation::new(ViolationCode::NoReminders, format!("{path}.reminders")));
    }
    for (n, r) in reminders.iter().enumerate() {
        if !r.is_well_formed() {
            out.push(Violation::new(ViolationCode::InvalidReminder, format!("{path}.reminders[{n}]")));
        }
    }
}

fn check_logs(trial: &Trial, out: &mut Vec<Violation>) {
    for (n, entry) in trial.logs.measurements.iter().enumerate() {
        let path = format!("logs.measurements[{n}]");
        match trial.measure(&entry.measure_id) {
            None => out.push(Violation::new(ViolationCode::DanglingReference, format!("{path}.measureId"))),
            Some(m) => {
                if validate_measurement(m, entry.value).is_err() {
                    out.push(Violation::new(ViolationCode::InvalidMeasurement, format!("{path}.value")));
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    for (n, check) in trial.logs.task_checks.iter().enumerate() {
        let path = format!("logs.taskChecks[{n}]");
        if !trial.component_ids().any(|id| id == &check.component_id) {
            out.push(Violation::new(ViolationCode::DanglingReference, format!("{path}.componentId")));
        }
        if !seen.insert((&check.component_id, check.date, check.time)) {
            out.push(Violation::new(ViolationCode::DuplicateTaskCheck, path));
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn codes(v: &[Violation]) -> Vec<ViolationCode> {
        v.iter().map(|v| v.code).collect()
    }

    #[test]
    fn measurement_validation_examples() {
        let m = measure("m", scale(0, 10), &["08:00"]);
        assert_eq!(validate_measurement(&m, MeasurementValue::Scale { value: 11 }).unwrap_err().code(), "OUT_OF_RANGE");
        assert!(validate_measurement(&m, MeasurementValue::Scale { value: 10 }).is_ok());
        assert!(validate_measurement(&m, MeasurementValue::Scale { value: 0 }).is_ok());
        assert_eq!(
            validate_measurement(&m, MeasurementValue::Numeric { value: 3.0 }).unwrap_err().code(),
            "TYPE_MISMATCH"
        );

        let l = measure("l", list(&["poor", "ok", "good"]), &["08:00"]);
        let two = MeasurementValue::List { index: 2 };
        assert_eq!(validate_measurement(&l, two), Ok(two));
        assert_eq!(validate_measurement(&l, MeasurementValue::List { index: 3 }).unwrap_err().code(), "BAD_INDEX");

        let n = measure("n", MeasureInput::Numeric { unit: "kg".into() }, &["08:00"]);
        let v = MeasurementValue::Numeric { value: 72.5 };
        assert_eq!(validate_measurement(&n, v), Ok(v));
        assert!(validate_measurement(&n, MeasurementValue::Numeric { value: f64::NAN }).is_err());
    }

    #[test]
    fn minimal_withdrawal_draft_is_complete() {
        assert_eq!(validate_draft(&minimal_draft()), []);
    }

    #[test]
    fn alternating_without_second_intervention() {
        let mut trial = minimal_draft();
        trial.design = Design::AlternatingTreatment;
        assert_eq!(codes(&validate_draft(&trial)), [ViolationCode::MissingSecondIntervention]);
        trial.intervention_b = Some(intervention("i-b", "Arnica gel", &["20:00"]));
        assert_eq!(validate_draft(&trial), []);
        trial.design = Design::Withdrawal;
        assert_eq!(codes(&validate_draft(&trial)), [ViolationCode::UnexpectedSecondIntervention]);
    }

    #[test]
    fn zero_measures() {
        let mut trial = minimal_draft();
        trial.measures.clear();
        assert_eq!(codes(&validate_draft(&trial)), [ViolationCode::NoMeasures]);
    }

    #[test]
    fn empty_draft_reports_each_missing_section() {
        let trial = Trial::draft(Design::Withdrawal);
        assert_eq!(
            codes(&validate_draft(&trial)),
            [ViolationCode::MissingGoal, ViolationCode::MissingIntervention, ViolationCode::NoMeasures]
        );
    }

    #[test]
    fn component_rules() {
        let mut trial = minimal_draft();
        trial.intervention_a.as_mut().unwrap().reminders.clear();
        trial.measures[0].id = "i-a".into();
        trial.measures.push(measure("m2", scale(5, 5), &["08:00"]));
        trial.measures[1].reminders[0].every_n_days = 0;
        trial.goal = Some(Goal::new("   "));
        trial.schedule =
            Some(Schedule { phase_duration_days: 0, phase_pairs: 2, order: crate::OrderStrategy::Alternating });
        let v = validate_draft(&trial);
        let got: Vec<_> = v.iter().map(|v| (v.code.as_str(), v.path.as_str())).collect();
        assert_eq!(
            got,
            [
                ("EMPTY_NAME", "goal.name"),
                ("NO_REMINDERS", "interventionA.reminders"),
                ("INVALID_MEASURE_INPUT", "measures[1].input"),
                ("INVALID_REMINDER", "measures[1].reminders[0]"),
                ("DUPLICATE_ID", "measures[0].id"),
                ("INVALID_SCHEDULE", "schedule"),
            ]
        );
    }

    #[test]
    fn measure_input_invariants() {
        assert!(!list(&["only"]).is_well_formed());
        assert!(!list(&["a", "a"]).is_well_formed());
        assert!(!list(&["a", " "]).is_well_formed());
        assert!(list(&["a", "b"]).is_well_formed());
        let mut annotated = BTreeMap::new();
        annotated.insert(11, String::from("beyond"));
        assert!(!MeasureInput::Scale { min: 0, max: 10, annotations: annotated }.is_well_formed());
    }

    #[test]
    fn reminder_times_sorted_unique() {
        let r = Reminder::daily([t("12:00"), t("06:30"), t("12:00")]);
        assert_eq!(r.times, [t("06:30"), t("12:00")]);
        assert!(r.is_well_formed());
        let unsorted = Reminder { times: alloc::vec![t("12:00"), t("06:30")], every_n_days: 1 };
        assert!(!unsorted.is_well_formed());
    }
}

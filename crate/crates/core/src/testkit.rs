//! Random trial generation for property and acceptance tests.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::{Days, NaiveDate};
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::lifecycle::start_trial;
use crate::model::{
    ComponentId, Design, Goal, Intervention, LogBook, Measure, MeasureInput, Measurement, MeasurementValue, Reminder,
    Schedule, Stage, TaskCheck, Trial,
};
use crate::schedule::OrderStrategy;
use crate::tasks::generate;
use crate::time::{TimeOfDay, Timestamp};

/// Bounds for generated trials.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_pairs: u32,
    pub max_phase_days: u32,
    pub max_every_n_days: u32,
    pub max_times_per_reminder: usize,
    pub max_reminders: usize,
    pub max_measures: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_pairs: 4,
            max_phase_days: 10,
            max_every_n_days: 4,
            max_times_per_reminder: 3,
            max_reminders: 2,
            max_measures: 3,
        }
    }
}

const NAMES: &[&str] = &[
    "Magnesium",
    "Pain level",
    "Morning stretch",
    "Schlafqualität",
    "Tea \"strong\"",
    "back\\slash",
    "línea\nbreak",
    "🙂 mood",
];

fn name(rng: &mut impl Rng) -> String {
    String::from(*NAMES.choose(rng).unwrap())
}

fn time(rng: &mut impl Rng) -> TimeOfDay {
    TimeOfDay::new(rng.random_range(0..24), rng.random_range(0..60)).unwrap()
}

pub fn reminder(rng: &mut impl Rng, shape: &Shape) -> Reminder {
    let n = rng.random_range(1..=shape.max_times_per_reminder);
    Reminder::every(rng.random_range(1..=shape.max_every_n_days), (0..n).map(|_| time(rng)))
}

fn reminders(rng: &mut impl Rng, shape: &Shape) -> Vec<Reminder> {
    (0..rng.random_range(1..=shape.max_reminders)).map(|_| reminder(rng, shape)).collect()
}

fn input(rng: &mut impl Rng) -> MeasureInput {
    match rng.random_range(0..3) {
        0 => MeasureInput::Numeric { unit: String::from(*["kg", "mmHg", "", "steps"].choose(rng).unwrap()) },
        1 => MeasureInput::List { items: (0..rng.random_range(2..6)).map(|i| format!("item {i}")).collect() },
        _ => {
            let min = rng.random_range(-5..=5);
            let max = min + rng.random_range(1..=10);
            let mut annotations = BTreeMap::new();
            if rng.random_bool(0.5) {
                annotations.insert(min, String::from("worst"));
                annotations.insert(max, String::from("best"));
            }
            MeasureInput::Scale { min, max, annotations }
        }
    }
}

fn intervention(rng: &mut impl Rng, shape: &Shape, id: &str) -> Intervention {
    Intervention {
        id: ComponentId::new(id),
        name: name(rng),
        instructions: if rng.random_bool(0.5) { name(rng) } else { String::new() },
        reminders: reminders(rng, shape),
    }
}

/// A complete draft with an explicit schedule.
pub fn draft(rng: &mut impl Rng, shape: &Shape) -> Trial {
    let design = if rng.random_bool(0.5) { Design::Withdrawal } else { Design::AlternatingTreatment };
    let mut trial = Trial::draft(design);
    trial.goal = Some(Goal::new(name(rng)));
    trial.intervention_a = Some(intervention(rng, shape, "int-a"));
    if design == Design::AlternatingTreatment {
        trial.intervention_b = Some(intervention(rng, shape, "int-b"));
    }
    trial.measures = (0..rng.random_range(1..=shape.max_measures))
        .map(|n| Measure {
            id: ComponentId(format!("measure-{n}")),
            name: name(rng),
            input: input(rng),
            reminders: reminders(rng, shape),
        })
        .collect();
    trial.schedule = Some(Schedule {
        phase_duration_days: rng.random_range(1..=shape.max_phase_days),
        phase_pairs: rng.random_range(1..=shape.max_pairs),
        order: if rng.random_bool(0.5) { OrderStrategy::Alternating } else { OrderStrategy::Counterbalanced },
    });
    trial
}

fn start(rng: &mut impl Rng) -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + Days::new(rng.random_range(0..2000))
}

/// A running trial without logs.
pub fn running(rng: &mut impl Rng, shape: &Shape) -> Trial {
    let d = draft(rng, shape);
    start_trial(&d, start(rng)).expect("generated drafts are complete")
}

/// A valid value for `measure`.
pub fn value(rng: &mut impl Rng, measure: &Measure) -> MeasurementValue {
    match &measure.input {
        MeasureInput::Numeric { .. } => MeasurementValue::Numeric { value: rng.random_range(-1000.0..1000.0) },
        MeasureInput::List { items } => MeasurementValue::List { index: rng.random_range(0..items.len() as u32) },
        MeasureInput::Scale { min, max, .. } => MeasurementValue::Scale { value: rng.random_range(*min..=*max) as i64 },
    }
}

/// Fills `trial` (started) with `n` in-window measurements and checks on
/// some generated tasks.
pub fn with_logs(rng: &mut impl Rng, mut trial: Trial, n: usize) -> Trial {
    let start = trial.start_date.expect("trial is started");
    let total = trial.effective_schedule().total_days();
    let mut logs = LogBook::default();
    for _ in 0..n {
        let measure = trial.measures.choose(rng).unwrap().clone();
        let day = rng.random_range(0..total) as u64;
        logs.measurements.push(Measurement {
            measure_id: measure.id.clone(),
            timestamp: Timestamp::new(start + Days::new(day), time(rng)),
            value: value(rng, &measure),
        });
    }
    for day in 0..total.min(5) {
        for task in generate(&trial, day as i64).expect("day in range") {
            if rng.random_bool(0.5) {
                logs.task_checks.push(TaskCheck {
                    component_id: task.component_id,
                    date: task.date,
                    time: task.time,
                    completed: rng.random_bool(0.7),
                });
            }
        }
    }
    trial.logs = logs;
    trial
}

/// Any stage: drafts (sometimes without a schedule), running or finished
/// trials with logs.
pub fn any_trial(rng: &mut impl Rng, shape: &Shape) -> Trial {
    match rng.random_range(0..3) {
        0 => {
            let mut d = draft(rng, shape);
            if rng.random_bool(0.5) {
                d.schedule = None;
            }
            d
        }
        stage => {
            let t = running(rng, shape);
            let n = rng.random_range(0..20);
            let mut t = with_logs(rng, t, n);
            if stage == 2 {
                t.stage = Stage::Finished;
            }
            t
        }
    }
}

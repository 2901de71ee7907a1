//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every randomized check is seeded.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::Request;
use chrono::{Days, NaiveDate};
use http_body_util::BodyExt;
use nof1::cli::run;
use nof1::ops::Clock;
use nof1::store::Store;
use nof1_core::analysis::{condition_comparison, phase_summaries};
use nof1_core::library::{list_entries, suggestions_for_goal, EntryKind};
use nof1_core::lifecycle::{log_measurement, start_trial};
use nof1_core::tasks::tasks_for_day;
use nof1_core::testkit::{self, Shape};
use nof1_core::{
    default_schedule, export_trial, import_trial, phase_sequence, validate_draft, validate_measurement, ComponentId,
    ComponentKind, Design, Goal, Intervention, Measure, MeasureInput, MeasurementValue, OrderStrategy, PhaseLabel,
    Reminder, Schedule, Stage, TimeOfDay, Timestamp, Trial, ValidationError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tower::ServiceExt;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn letters(seq: &[PhaseLabel]) -> String {
    seq.iter().map(|l| l.to_string()).collect()
}

fn default_schedule_check() -> Check {
    let t = Instant::now();
    let s = default_schedule();
    let seq = letters(&phase_sequence(s.order, s.phase_pairs).map_err(|e| e.to_string())?);
    let total = s.total_days();
    let elapsed = t.elapsed();
    let expected = Schedule { phase_duration_days: 7, phase_pairs: 2, order: OrderStrategy::Alternating };
    ensure(s == expected, || format!("default schedule is {s:?}"))?;
    ensure(seq == "ABAB", || format!("sequence {seq}"))?;
    ensure(total == 28, || format!("total {total}"))?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("{{7, 2, alternating}} -> ABAB, 28 days in {elapsed:?}"))
}

fn counterbalancing_check() -> Check {
    let t = Instant::now();
    let abba = letters(&phase_sequence(OrderStrategy::Counterbalanced, 2).map_err(|e| e.to_string())?);
    ensure(abba == "ABBA", || format!("counterbalanced p=2 gives {abba}"))?;
    for p in 1..=10u32 {
        for order in [OrderStrategy::Alternating, OrderStrategy::Counterbalanced] {
            let seq = phase_sequence(order, p).map_err(|e| e.to_string())?;
            let a = seq.iter().filter(|l| **l == PhaseLabel::A).count();
            let b = seq.iter().filter(|l| **l == PhaseLabel::B).count();
            ensure(a == p as usize && b == p as usize, || format!("{order:?} p={p}: A={a} B={b}"))?;
        }
    }
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("ABBA; count(A)=count(B)=p for p in 1..=10, both orders, in {:?}", t.elapsed()))
}

fn evaluation_schedules_check() -> Check {
    let long = Schedule { phase_duration_days: 28, phase_pairs: 2, order: OrderStrategy::Alternating };
    ensure(long.total_days() == 112, || format!("28-day phases x 2 pairs = {}", long.total_days()))?;
    let one = phase_sequence(OrderStrategy::Alternating, 1).map_err(|e| e.to_string())?;
    ensure(letters(&one) == "AB", || format!("1 pair gives {}", letters(&one)))?;
    Ok("{28 days, 2 pairs} -> 112 days; 1 pair -> AB".into())
}

/// Phase letters by brute-force string expansion, independent of the engine.
fn oracle_day_letters(s: &Schedule) -> Vec<char> {
    let mut pattern = String::new();
    for pair in 0..s.phase_pairs {
        let flip = s.order == OrderStrategy::Counterbalanced && pair % 2 == 1;
        pattern.push_str(if flip { "BA" } else { "AB" });
    }
    pattern.chars().flat_map(|c| std::iter::repeat_n(c, s.phase_duration_days as usize)).collect()
}

type OracleTask = (TimeOfDay, u8, String);

fn oracle_tasks(trial: &Trial, day: usize, letter: char) -> Vec<OracleTask> {
    let mut out = Vec::new();
    let mut add = |reminders: &[Reminder], kind: u8, id: &ComponentId| {
        for r in reminders {
            if day.is_multiple_of(r.every_n_days as usize) {
                for t in &r.times {
                    out.push((*t, kind, id.0.clone()));
                }
            }
        }
    };
    for m in &trial.measures {
        add(&m.reminders, 0, &m.id);
    }
    let active = match (letter, trial.design) {
        ('A', _) => trial.intervention_a.as_ref(),
        ('B', Design::AlternatingTreatment) => trial.intervention_b.as_ref(),
        _ => None,
    };
    if let Some(i) = active {
        add(&i.reminders, 1, &i.id);
    }
    out.sort();
    out.dedup_by(|x, y| x.0 == y.0 && x.2 == y.2);
    out
}

fn random_fixtures(seed: u64, n: usize) -> Vec<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| testkit::running(&mut rng, &Shape::default())).collect()
}

fn task_oracle_check() -> Check {
    let t = Instant::now();
    let fixtures = random_fixtures(0xAB1, 100);
    let designs = fixtures.iter().filter(|t| t.design == Design::Withdrawal).count();
    ensure(designs > 0 && designs < 100, || "fixtures cover only one design".into())?;
    let (mut days, mut mismatches) = (0, 0);
    for trial in &fixtures {
        let start = trial.start_date.unwrap();
        for (day, letter) in oracle_day_letters(&trial.effective_schedule()).into_iter().enumerate() {
            days += 1;
            let engine: Vec<OracleTask> = tasks_for_day(trial, day as i64)
                .map_err(|e| e.to_string())?
                .into_iter()
                .inspect(|task| {
                    if task.date != start + Days::new(day as u64) {
                        mismatches += 1;
                    }
                })
                .map(|task| {
                    (task.time, (task.component_kind == ComponentKind::Intervention) as u8, task.component_id.0)
                })
                .collect();
            if engine != oracle_tasks(trial, day, letter) {
                mismatches += 1;
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatching days"))?;
    within(t.elapsed(), Duration::from_secs(10))?;
    Ok(format!("100 trials, {days} days, 0 mismatches in {:?}", t.elapsed()))
}

fn phase_activity_check() -> Check {
    let fixtures = random_fixtures(0xAC7, 100);
    let mut days = 0;
    for trial in &fixtures {
        let a = trial.intervention_a.as_ref().map(|i| &i.id);
        let b = trial.intervention_b.as_ref().map(|i| &i.id);
        for (day, letter) in oracle_day_letters(&trial.effective_schedule()).into_iter().enumerate() {
            days += 1;
            let tasks = tasks_for_day(trial, day as i64).map_err(|e| e.to_string())?;
            let has = |id: Option<&ComponentId>| tasks.iter().any(|t| Some(&t.component_id) == id);
            match trial.design {
                Design::Withdrawal => {
                    let interventions =
                        tasks.iter().filter(|t| t.component_kind == ComponentKind::Intervention).count();
                    ensure(letter == 'A' || interventions == 0, || format!("intervention task on B day {day}"))?;
                }
                Design::AlternatingTreatment => {
                    ensure(!(has(a) && has(b)), || format!("A and B share day {day}"))?;
                }
            }
        }
    }
    Ok(format!("{days} fixture days checked"))
}

fn round_trip_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut logged = 0;
    for n in 0..200 {
        let trial = testkit::any_trial(&mut rng, &Shape::default());
        logged += !trial.logs.measurements.is_empty() as usize;
        let doc = export_trial(&trial);
        ensure(doc == export_trial(&trial), || format!("trial {n}: export not deterministic"))?;
        let back = import_trial(&doc).map_err(|e| format!("trial {n}: {e}"))?;
        ensure(back == trial, || format!("trial {n}: round trip changed the trial"))?;
        ensure(export_trial(&back) == doc, || format!("trial {n}: re-export differs"))?;
    }
    ensure(logged > 0, || "no trial carried logs".into())?;
    Ok(format!("200 trials ({logged} with measurements), 0 failures"))
}

const LINKED_GOALS: [(&str, [&str; 3]); 4] = [
    ("Reduce back pain", ["Willow bark tea", "Arnica gel", "Warning pad"]),
    ("Treat leg cramps", ["Magnesium", "Vitamin B12", "Massage"]),
    ("Treat rheumatoid arthritis", ["Omega-3 supplement", "Olive oil massage", "Cold patch"]),
    ("Treat irritable bowel syndrome", ["Gluten-free diet", "Fructose-free diet", "Low-fibre diet"]),
];

fn library_check() -> Check {
    let goals: Vec<String> = list_entries(EntryKind::Goal).iter().map(|e| e.name().to_string()).collect();
    let golden_goals: Vec<&str> = LINKED_GOALS.iter().map(|(g, _)| *g).collect();
    ensure(goals.iter().take(4).eq(golden_goals.iter()), || format!("goals {goals:?}"))?;
    for (goal, interventions) in LINKED_GOALS {
        let names: Vec<String> = suggestions_for_goal(goal).into_iter().map(|i| i.name).collect();
        ensure(names == interventions, || format!("{goal}: {names:?}"))?;
    }
    let links = list_entries(EntryKind::Intervention).iter().filter(|e| e.linked_goal.is_some()).count();
    ensure(links == 12, || format!("{links} links"))?;
    let linked_goals: std::collections::BTreeSet<_> =
        list_entries(EntryKind::Intervention).into_iter().filter_map(|e| e.linked_goal).collect();
    ensure(linked_goals.len() == 4, || format!("linked goals {linked_goals:?}"))?;
    ensure(suggestions_for_goal("Sleep better").is_empty(), || "unlinked goal has suggestions".into())?;
    Ok("4 goals x 3 interventions verbatim, 12 links".into())
}

fn reminder(time: &str) -> Reminder {
    Reminder::daily([time.parse().unwrap()])
}

fn measure(id: &str, input: MeasureInput) -> Measure {
    Measure { id: ComponentId::new(id), name: id.into(), input, reminders: vec![reminder("09:00")] }
}

fn intervention(id: &str) -> Intervention {
    Intervention {
        id: ComponentId::new(id),
        name: id.into(),
        instructions: String::new(),
        reminders: vec![reminder("18:00")],
    }
}

fn validation_check() -> Check {
    let scale = measure("pain", MeasureInput::Scale { min: 0, max: 10, annotations: BTreeMap::new() });
    let code = validate_measurement(&scale, MeasurementValue::Scale { value: 11 }).map_err(|e| e.code());
    ensure(code == Err("OUT_OF_RANGE"), || format!("scale 11: {code:?}"))?;
    let list = measure("sleep", MeasureInput::List { items: vec!["bad".into(), "good".into()] });
    let err = validate_measurement(&list, MeasurementValue::List { index: 2 });
    ensure(matches!(err, Err(ValidationError::BadIndex { .. })), || format!("index 2: {err:?}"))?;
    ensure(err.unwrap_err().code() == "BAD_INDEX", || "bad index code".into())?;

    let mut draft = Trial::draft(Design::AlternatingTreatment);
    draft.goal = Some(Goal::new("Reduce back pain"));
    draft.intervention_a = Some(intervention("a"));
    draft.measures = vec![scale];
    let codes: Vec<_> = validate_draft(&draft).iter().map(|v| v.code.as_str()).collect();
    ensure(codes == ["MISSING_SECOND_INTERVENTION"], || format!("no B: {codes:?}"))?;

    draft.design = Design::Withdrawal;
    draft.measures.clear();
    let codes: Vec<_> = validate_draft(&draft).iter().map(|v| v.code.as_str()).collect();
    ensure(codes == ["NO_MEASURES"], || format!("no measures: {codes:?}"))?;
    Ok("OUT_OF_RANGE, BAD_INDEX, MISSING_SECOND_INTERVENTION, NO_MEASURES".into())
}

fn analysis_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11);
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    for n in 0..50 {
        let trial = testkit::running(&mut rng, &Shape::default());
        let count = rng.random_range(10..80);
        let trial = testkit::with_logs(&mut rng, trial, count);
        for m in &trial.measures {
            let phases = phase_summaries(&trial, &m.id).map_err(|e| format!("logbook {n}: {e}"))?;
            if matches!(m.input, MeasureInput::List { .. }) {
                continue;
            }
            let cmp = condition_comparison(&trial, &m.id).map_err(|e| format!("logbook {n}: {e}"))?;
            for (label, pooled, n_pooled) in
                [(PhaseLabel::A, cmp.mean_a, cmp.n_a), (PhaseLabel::B, cmp.mean_b, cmp.n_b)]
            {
                let side: Vec<_> = phases.iter().filter(|p| p.label == label && p.count > 0).collect();
                let total: usize = side.iter().map(|p| p.count).sum();
                ensure(total == n_pooled, || format!("logbook {n}: count {total} vs {n_pooled}"))?;
                let weighted = (total > 0)
                    .then(|| side.iter().map(|p| p.count as f64 * p.mean.unwrap()).sum::<f64>() / total as f64);
                match (pooled, weighted) {
                    (None, None) => {}
                    (Some(x), Some(y)) => {
                        let err = (x - y).abs() / x.abs().max(1.0);
                        worst = worst.max(err);
                        ensure(err <= 1e-9, || format!("logbook {n}: {x} vs {y}"))?;
                    }
                    other => return Err(format!("logbook {n}: {other:?}")),
                }
            }
            compared += 1;
        }
    }

    // Fixture: 5 in every A-phase measurement, 3 in every B-phase one.
    let mut trial = Trial::draft(Design::Withdrawal);
    trial.goal = Some(Goal::new("Reduce back pain"));
    trial.intervention_a = Some(intervention("heat"));
    trial.measures = vec![measure("pain", MeasureInput::Scale { min: 0, max: 10, annotations: BTreeMap::new() })];
    let start = NaiveDate::from_ymd_opt(2024, 1, 1).unwrap();
    let mut trial = start_trial(&trial, start).map_err(|e| e.to_string())?;
    for (day, letter) in oracle_day_letters(&default_schedule()).into_iter().enumerate() {
        let value = if letter == 'A' { 5 } else { 3 };
        let at = Timestamp::new(start + Days::new(day as u64), "09:00".parse().unwrap());
        trial = log_measurement(&trial, &ComponentId::new("pain"), at, MeasurementValue::Scale { value })
            .map_err(|e| e.to_string())?;
    }
    let cmp = condition_comparison(&trial, &ComponentId::new("pain")).map_err(|e| e.to_string())?;
    ensure(cmp.difference == Some(2.0), || format!("difference {:?}", cmp.difference))?;
    Ok(format!("{compared} measures on 50 logbooks, max relative error {worst:.1e} <= 1e-9; A=5/B=3 -> +2.0"))
}

/// The scripted run used by the differential check.
struct Run {
    dir: tempfile::TempDir,
}

impl Run {
    fn cli(&self, now: &str, args: &[&str]) -> Result<String, String> {
        let mut argv = vec!["nof1", "--store", self.dir.path().to_str().unwrap(), "--now", now, "--format", "json"];
        argv.extend_from_slice(args);
        let out = run(argv);
        ensure(out.exit_code == 0, || format!("{args:?}: {}", out.stderr))?;
        Ok(out.stdout)
    }

    fn trial(&self) -> Result<Trial, String> {
        let store = Store::load(self.dir.path()).map_err(|e| e.to_string())?;
        store.current().cloned().ok_or_else(|| "no trial".into())
    }
}

fn json(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("{e}: {text}"))
}

fn engine_tasks(trial: &Trial, day: i64) -> Result<Value, String> {
    let tasks = tasks_for_day(trial, day).map_err(|e| e.to_string())?;
    Ok(Value::Array(
        tasks
            .into_iter()
            .map(|t| {
                let done =
                    trial.logs.task_checks.iter().any(|c| {
                        c.completed && c.component_id == t.component_id && c.date == t.date && c.time == t.time
                    });
                serde_json::json!({
                    "componentId": t.component_id,
                    "componentKind": t.component_kind,
                    "date": nof1_core::time::format_date(t.date).to_string(),
                    "time": t.time,
                    "title": t.title,
                    "done": done,
                })
            })
            .collect(),
    ))
}

fn engine_summary(trial: &Trial, id: &ComponentId) -> Result<Value, String> {
    let phases = phase_summaries(trial, id).map_err(|e| e.to_string())?;
    let m = trial.measure(id).ok_or("unknown measure")?;
    let mut series: Vec<_> = trial.logs.measurements.iter().filter(|x| &x.measure_id == id).collect();
    series.sort_by_key(|x| x.timestamp);
    let mut out = serde_json::json!({
        "measureId": id,
        "measureName": m.name,
        "phases": phases,
        "series": series.iter().map(|x| serde_json::json!({"timestamp": x.timestamp, "value": x.value})).collect::<Vec<_>>(),
    });
    if !matches!(m.input, MeasureInput::List { .. }) {
        out["comparison"] = serde_json::to_value(condition_comparison(trial, id).map_err(|e| e.to_string())?).unwrap();
    }
    Ok(out)
}

fn api_summary(trial_dir: &std::path::Path, now: Timestamp, id: &str) -> Result<Value, String> {
    let rt = tokio::runtime::Builder::new_current_thread().build().map_err(|e| e.to_string())?;
    let store = Store::load(trial_dir).map_err(|e| e.to_string())?;
    let app = nof1::service::router(store, Clock::Fixed(now));
    rt.block_on(async {
        let req = Request::get(format!("/trial/summary/{id}")).body(Body::empty()).unwrap();
        let res = app.oneshot(req).await.map_err(|e| e.to_string())?;
        ensure(res.status().is_success(), || format!("status {}", res.status()))?;
        let bytes = res.into_body().collect().await.map_err(|e| e.to_string())?.to_bytes();
        serde_json::from_slice(&bytes).map_err(|e| e.to_string())
    })
}

fn differential_check() -> Check {
    let run = Run { dir: tempfile::tempdir().map_err(|e| e.to_string())? };
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1F);
    let start = NaiveDate::from_ymd_opt(2024, 2, 1).unwrap();
    run.cli(
        "2024-02-01T07:00",
        &[
            "new",
            "--goal",
            "Reduce back pain",
            "--intervention",
            "Willow bark tea",
            "--intervention-b",
            "Arnica gel",
            "--measure",
            "Pain=scale:0..10",
            "--measure",
            "Weight",
            "--measure",
            "Sleep quality",
            "--measure-reminder",
            "08:00,20:00/2",
        ],
    )?;
    run.cli("2024-02-01T07:00", &["schedule", "edit", "--order", "counterbalanced"])?;
    run.cli("2024-02-01T07:00", &["start", "--date", "2024-02-01"])?;
    let ids: Vec<ComponentId> = run.trial()?.measures.iter().map(|m| m.id.clone()).collect();

    let mut compared = 0;
    for day in 0..28i64 {
        let date = nof1_core::time::format_date(start + Days::new(day as u64)).to_string();
        let morning = format!("{date}T08:30");
        let cli_tasks = json(&run.cli(&morning, &["tasks"])?)?;
        let direct = engine_tasks(&run.trial()?, day)?;
        ensure(cli_tasks == direct, || format!("day {day} tasks: {cli_tasks} vs {direct}"))?;
        compared += 1;

        let n_tasks = direct.as_array().unwrap().len();
        if n_tasks > 0 && rng.random_bool(0.6) {
            let pick = rng.random_range(1..=n_tasks).to_string();
            run.cli(&morning, &["check", &pick])?;
        }
        let pain = rng.random_range(0..=10).to_string();
        run.cli(&morning, &["log", "Pain", &pain])?;
        if day % 3 == 0 {
            let kg = format!("{:.1}", rng.random_range(60.0..90.0));
            run.cli(&format!("{date}T20:00"), &["log", "Weight", &kg])?;
        }
        if day % 2 == 1 {
            let item = ["poor", "ok", "good"][rng.random_range(0..3)];
            run.cli(&format!("{date}T20:00"), &["log", "Sleep quality", item])?;
        }
        // Re-list after mutations.
        let cli_tasks = json(&run.cli(&format!("{date}T21:00"), &["tasks"])?)?;
        let direct = engine_tasks(&run.trial()?, day)?;
        ensure(cli_tasks == direct, || format!("day {day} tasks after checks"))?;
        compared += 1;
    }

    let now = "2024-02-28T22:00";
    let trial = run.trial()?;
    ensure(trial.stage == Stage::Running, || "trial ended early".into())?;
    for id in &ids {
        let direct = engine_summary(&trial, id)?;
        let cli = json(&run.cli(now, &["history", id.as_str()])?)?;
        ensure(cli == direct, || format!("history {id}: {cli} vs {direct}"))?;
        let api = api_summary(run.dir.path(), now.parse().unwrap(), id.as_str())?;
        ensure(api == direct, || format!("/trial/summary/{id}: {api} vs {direct}"))?;
        compared += 2;
    }
    Ok(format!("28 days, {compared} CLI/API outputs equal to direct engine results"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("default schedule", default_schedule_check),
        ("counterbalancing", counterbalancing_check),
        ("evaluation schedules", evaluation_schedules_check),
        ("task oracle equivalence", task_oracle_check),
        ("phase activity", phase_activity_check),
        ("interchange round trip", round_trip_check),
        ("library goal links", library_check),
        ("validation codes", validation_check),
        ("analysis consistency", analysis_check),
        ("CLI/API differential", differential_check),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

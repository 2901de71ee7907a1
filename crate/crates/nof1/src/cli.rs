//! The `nof1` command line.
//!
//! [`run`] executes one command against a store directory and returns the
//! exit code and captured output instead of printing, so tests drive it
//! in-process. Exit codes: 0 success, 1 engine or store error (stable error
//! name in the message), 2 usage error.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use chrono::{Days, NaiveDate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nof1_core::library::{self, EntryKind, Template};
use nof1_core::time::{format_date, parse_date};
use nof1_core::{
    ComponentId, Design, Goal, IdSource, Intervention, Measure, MeasureInput, MeasurementValue, OrderStrategy,
    Reminder, Schedule, Stage, TimeOfDay, Timestamp, Trial,
};
use serde::Serialize;

use crate::error::StoreError;
use crate::ops::{self, Clock, RandomIds, SummaryView, TaskView};
use crate::store::{Store, StoreLock};

pub const STORE_ENV: &str = "NOF1_STORE";

#[derive(Debug, Parser)]
#[command(name = "nof1", version, about = "Plan, run and review personal N-of-1 trials")]
pub struct Cli {
    /// Store directory.
    #[arg(long, global = true, env = STORE_ENV)]
    store: Option<PathBuf>,
    /// Frozen local time, YYYY-MM-DDTHH:MM, used as "now".
    #[arg(long, global = true, value_parser = parse_timestamp)]
    now: Option<Timestamp>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Create a new draft trial (interactive without flags).
    New(NewArgs),
    /// Browse the component library.
    Lib {
        #[arg(value_enum)]
        kind: LibKind,
        /// Only interventions suggested for this goal.
        #[arg(long)]
        goal: Option<String>,
    },
    /// Show or edit the draft's schedule.
    Schedule {
        #[command(subcommand)]
        action: ScheduleAction,
    },
    /// Start the draft.
    Start {
        /// First trial day (default: today).
        #[arg(long, value_parser = parse_day)]
        date: Option<NaiveDate>,
    },
    /// Stage, progress and adherence of the current trial.
    Status,
    /// Tasks for a day of the running trial.
    Tasks {
        #[arg(long, value_parser = parse_day)]
        date: Option<NaiveDate>,
    },
    /// Mark a task done. TASK is `<componentId>@HH:MM` or its number in `tasks`.
    Check {
        task: String,
        #[arg(long, value_parser = parse_day)]
        date: Option<NaiveDate>,
        /// Mark the task as not done.
        #[arg(long)]
        undo: bool,
    },
    /// Record a measurement.
    Log {
        /// Measure id or name.
        measure: String,
        /// Number, scale value, or list item (index or text).
        value: String,
        /// Measurement time (default: now).
        #[arg(long, value_parser = parse_timestamp)]
        at: Option<Timestamp>,
    },
    /// Per-phase summaries of one measure, or of all.
    History { measure: Option<String> },
    /// Print the current trial as an interchange document.
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Install a trial from an interchange document.
    Import { file: PathBuf },
    /// New draft based on the last finished trial.
    Restart,
    /// Serve the HTTP API on the loopback interface.
    Serve {
        #[arg(long, default_value_t = 7878)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: std::net::IpAddr,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LibKind {
    Goals,
    Interventions,
    Measures,
    /// The whole embedded library document.
    Dump,
}

#[derive(Debug, Subcommand)]
enum ScheduleAction {
    Show,
    Edit {
        #[arg(long)]
        phase_days: Option<u32>,
        #[arg(long)]
        pairs: Option<u32>,
        #[arg(long, value_enum)]
        order: Option<Order>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Order {
    Alternating,
    Counterbalanced,
}

#[derive(Debug, Args, Default)]
struct NewArgs {
    #[arg(long)]
    goal: Option<String>,
    /// Intervention name; library names copy the library template.
    #[arg(long)]
    intervention: Option<String>,
    #[arg(long)]
    instructions: Option<String>,
    /// Second intervention; makes the trial an alternating-treatment design.
    #[arg(long)]
    intervention_b: Option<String>,
    #[arg(long)]
    instructions_b: Option<String>,
    /// Reminder for custom interventions: `HH:MM[,HH:MM...][/N]`.
    #[arg(long, value_parser = parse_reminder)]
    intervention_reminder: Option<Reminder>,
    /// Library measure name, or `Name=numeric:UNIT`, `Name=scale:MIN..MAX`,
    /// `Name=list:ITEM,ITEM,...`. Repeatable.
    #[arg(long = "measure")]
    measures: Vec<String>,
    /// Reminder for custom measures: `HH:MM[,HH:MM...][/N]`.
    #[arg(long, value_parser = parse_reminder)]
    measure_reminder: Option<Reminder>,
}

impl NewArgs {
    fn is_empty(&self) -> bool {
        self.goal.is_none() && self.intervention.is_none() && self.measures.is_empty()
    }
}

fn parse_timestamp(s: &str) -> Result<Timestamp, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_day(s: &str) -> Result<NaiveDate, String> {
    parse_date(s).map_err(|e| format!("{e}"))
}

/// `HH:MM[,HH:MM...][/N]`
fn parse_reminder(s: &str) -> Result<Reminder, String> {
    let (times, every) = match s.split_once('/') {
        Some((t, n)) => (t, n.trim().parse::<u32>().map_err(|_| format!("bad day interval in {s:?}"))?),
        None => (s, 1),
    };
    if every == 0 {
        return Err("day interval must be at least 1".into());
    }
    let times = times
        .split(',')
        .map(|t| t.trim().parse::<TimeOfDay>().map_err(|e| format!("{e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Reminder::every(every, times))
}

fn default_reminder(hour: u8) -> Reminder {
    Reminder::daily([TimeOfDay::new(hour, 0).expect("valid hour")])
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn ok(stdout: String) -> Self {
        CommandOutcome { exit_code: 0, stdout, stderr: String::new() }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("{0}")]
    Usage(String),
}

impl From<nof1_core::Error> for CliError {
    fn from(e: nof1_core::Error) -> Self {
        CliError::Store(e.into())
    }
}

/// Runs one command non-interactively: `new` without flags creates an
/// empty draft.
pub fn run<I, S>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::empty(), false)
}

/// Runs one command. With `interactive`, `new` without flags runs the
/// wizard, reading answers from `input`.
pub fn run_with<I, S>(args: I, input: &mut dyn BufRead, interactive: bool) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandOutcome::ok(text)
                }
                _ => CommandOutcome { exit_code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let format = cli.format;
    let mut out = Vec::new();
    match execute(cli, input, interactive, &mut out) {
        Ok(()) => CommandOutcome::ok(String::from_utf8_lossy(&out).into_owned()),
        Err(CliError::Usage(msg)) => {
            CommandOutcome { exit_code: 2, stdout: String::from_utf8_lossy(&out).into_owned(), stderr: msg + "\n" }
        }
        Err(CliError::Store(e)) => {
            let stderr = match format {
                Format::Json => serde_json::to_string(&e.body()).expect("error body serializes") + "\n",
                Format::Text => match e.path() {
                    Some(path) => format!("error: {}: {e} (at {path})\n", e.code()),
                    None => format!("error: {}: {e}\n", e.code()),
                },
            };
            CommandOutcome { exit_code: 1, stdout: String::from_utf8_lossy(&out).into_owned(), stderr }
        }
    }
}

fn default_store_dir() -> PathBuf {
    match std::env::var_os("HOME") {
        Some(home) => Path::new(&home).join(".local/share/nof1"),
        None => PathBuf::from(".nof1"),
    }
}

fn json_line(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("view serializes") + "\n"
}

fn execute(cli: Cli, input: &mut dyn BufRead, interactive: bool, out: &mut Vec<u8>) -> Result<(), CliError> {
    let dir = cli.store.unwrap_or_else(default_store_dir);
    let clock = cli.now.map(Clock::Fixed).unwrap_or(Clock::System);
    let json = cli.format == Format::Json;

    if let Command::Lib { kind, goal } = &cli.command {
        out.extend(lib_listing(*kind, goal.as_deref(), json).into_bytes());
        return Ok(());
    }
    if let Command::Serve { port, bind } = cli.command {
        return crate::service::serve_blocking(dir, clock, std::net::SocketAddr::new(bind, port))
            .map_err(|e| CliError::Usage(format!("server failed: {e:#}")));
    }

    let _lock = StoreLock::acquire(&dir)?;
    let mut store = Store::load(&dir)?;
    let today = clock.today();
    store.transact(|s| Ok(ops::refresh(s, today)))?;

    let text = match cli.command {
        Command::New(args) => {
            let draft = if args.is_empty() && interactive {
                wizard(input, out)?
            } else {
                draft_from_flags(args, &mut RandomIds)?
            };
            let draft = store.transact(|s| ops::create_draft(s, draft))?;
            if json {
                json_line(&nof1_core::interchange::to_canonical_value(&draft))
            } else {
                describe_draft(&draft)
            }
        }
        Command::Schedule { action: ScheduleAction::Show } => {
            let trial = ops::current(&store)?;
            schedule_text(&trial.effective_schedule(), json)
        }
        Command::Schedule { action: ScheduleAction::Edit { phase_days, pairs, order } } => {
            let trial = store.transact(|s| {
                let current = ops::active_draft(s)?.effective_schedule();
                let schedule = Schedule {
                    phase_duration_days: phase_days.unwrap_or(current.phase_duration_days),
                    phase_pairs: pairs.unwrap_or(current.phase_pairs),
                    order: match order {
                        Some(Order::Alternating) => OrderStrategy::Alternating,
                        Some(Order::Counterbalanced) => OrderStrategy::Counterbalanced,
                        None => current.order,
                    },
                };
                ops::edit_schedule(s, schedule)
            })?;
            schedule_text(&trial.effective_schedule(), json)
        }
        Command::Start { date } => {
            let date = date.unwrap_or(today);
            let trial = store.transact(|s| ops::start(s, date))?;
            let total = trial.effective_schedule().total_days();
            if json {
                json_line(&nof1_core::interchange::to_canonical_value(&trial))
            } else {
                let last = date + Days::new(total as u64 - 1);
                format!(
                    "Trial started on {}. It runs {total} days, through {}.\n",
                    format_date(date),
                    format_date(last)
                )
            }
        }
        Command::Status => {
            let status = ops::status(&store, today)?;
            if json {
                json_line(&status)
            } else {
                status_text(&status)
            }
        }
        Command::Tasks { date } => {
            let tasks = ops::tasks_on(&store, date.unwrap_or(today))?;
            if json {
                json_line(&tasks)
            } else {
                tasks_text(&tasks)
            }
        }
        Command::Check { task, date, undo } => {
            let date = date.unwrap_or(today);
            let (component, time) = resolve_task_ref(&store, &task, date)?;
            let view = store.transact(|s| ops::check_task(s, &component, date, time, !undo))?;
            if json {
                json_line(&view)
            } else {
                tasks_text(std::slice::from_ref(&view))
            }
        }
        Command::Log { measure, value, at } => {
            let at = at.unwrap_or_else(|| clock.now());
            let trial = store.active_trial().filter(|t| t.stage == Stage::Running).ok_or(StoreError::NotRunning)?;
            let id = ops::resolve_measure(trial, &measure);
            let value = ops::parse_value(trial, &id, &value)?;
            let point = store.transact(|s| ops::log(s, &id, at, value))?;
            if json {
                json_line(&serde_json::json!({ "measureId": id, "timestamp": point.timestamp, "value": point.value }))
            } else {
                let trial = store.active_trial().expect("logged into the active trial");
                format!("Logged {} = {} at {}\n", id, value_text(trial, &id, &point.value), point.timestamp)
            }
        }
        Command::History { measure } => {
            let trial = ops::current(&store)?;
            let views = match measure {
                Some(m) => vec![ops::summary(trial, &ops::resolve_measure(trial, &m))?],
                None => trial.measures.iter().map(|m| ops::summary(trial, &m.id)).collect::<Result<_, _>>()?,
            };
            match (json, views.as_slice()) {
                (true, [one]) => json_line(one),
                (true, _) => json_line(&views),
                (false, _) => views.iter().map(|v| history_text(trial, v)).collect::<Vec<_>>().join("\n"),
            }
        }
        Command::Export { out: Some(path) } => {
            let doc = ops::export(&store)?;
            std::fs::write(&path, doc).map_err(|e| StoreError::io(&path, e))?;
            format!("Exported to {}\n", path.display())
        }
        Command::Export { out: None } => ops::export(&store)? + "\n",
        Command::Import { file } => {
            let doc = std::fs::read_to_string(&file).map_err(|e| StoreError::io(&file, e))?;
            let trial = store.transact(|s| ops::import(s, &doc))?;
            if json {
                json_line(&serde_json::json!({ "stage": trial.stage }))
            } else {
                format!("Imported {:?} trial.\n", trial.stage).to_lowercase()
            }
        }
        Command::Restart => {
            let draft = store.transact(|s| ops::restart(s, &mut RandomIds))?;
            if json {
                json_line(&nof1_core::interchange::to_canonical_value(&draft))
            } else {
                describe_draft(&draft)
            }
        }
        Command::Lib { .. } | Command::Serve { .. } => unreachable!("handled above"),
    };
    out.extend(text.into_bytes());
    Ok(())
}

fn resolve_task_ref(store: &Store, task: &str, date: NaiveDate) -> Result<(ComponentId, TimeOfDay), CliError> {
    if let Some((id, time)) = task.rsplit_once('@') {
        let time = time.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
        return Ok((ComponentId::new(id), time));
    }
    let n: usize = task
        .parse()
        .map_err(|_| CliError::Usage(format!("task must be <componentId>@HH:MM or a number, got {task:?}")))?;
    let tasks = ops::tasks_on(store, date)?;
    let view = n.checked_sub(1).and_then(|i| tasks.get(i)).ok_or_else(|| {
        StoreError::from(nof1_core::Error::NoSuchTask {
            component: format!("#{n}"),
            date: format_date(date).to_string(),
            time: "-".into(),
        })
    })?;
    Ok((view.task.component_id.clone(), view.task.time))
}

fn value_text(trial: &Trial, measure: &ComponentId, value: &MeasurementValue) -> String {
    let input = trial.measure(measure).map(|m| &m.input);
    match (input, value) {
        (Some(MeasureInput::Numeric { unit }), MeasurementValue::Numeric { value }) if !unit.is_empty() => {
            format!("{value} {unit}")
        }
        (Some(MeasureInput::List { items }), MeasurementValue::List { index }) => {
            items.get(*index as usize).cloned().unwrap_or_else(|| format!("#{index}"))
        }
        (_, v) => match v.as_f64() {
            Some(x) => format!("{x}"),
            None => format!("{v:?}"),
        },
    }
}

fn tasks_text(tasks: &[TaskView]) -> String {
    if tasks.is_empty() {
        return "No tasks.\n".into();
    }
    tasks
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let mark = if v.done { "x" } else { " " };
            let kind = match v.task.component_kind {
                nof1_core::ComponentKind::Measure => "measure",
                nof1_core::ComponentKind::Intervention => "intervention",
            };
            format!("{:>2}. [{mark}] {}  {}  ({kind} {})\n", n + 1, v.task.time, v.task.title, v.task.component_id)
        })
        .collect()
}

fn letters(schedule: &Schedule) -> String {
    match schedule.plan() {
        Ok(plan) => plan.sequence.iter().map(|l| l.to_string()).collect(),
        Err(_) => "-".into(),
    }
}

fn schedule_text(schedule: &Schedule, json: bool) -> String {
    if json {
        return json_line(&serde_json::json!({
            "schedule": schedule,
            "sequence": letters(schedule),
            "totalDays": schedule.total_days(),
        }));
    }
    let order = match schedule.order {
        OrderStrategy::Alternating => "alternating",
        OrderStrategy::Counterbalanced => "counterbalanced",
    };
    format!(
        "{}: {} days per phase, {} phase pairs, {order} order, {} days in total\n",
        letters(schedule),
        schedule.phase_duration_days,
        schedule.phase_pairs,
        schedule.total_days()
    )
}

fn status_text(status: &ops::StatusView) -> String {
    let mut s = format!("Stage: {:?}\n", status.stage).to_lowercase();
    if let Some(goal) = &status.goal {
        s += &format!("Goal: {goal}\n");
    }
    if let Some(p) = status.progress {
        s += &format!("Day {} ({:.0}% done)\n", p.day_index + 1, p.fraction * 100.0);
    }
    if let Some(a) = status.adherence {
        s += &format!("Tasks completed: {} of {}\n", a.completed, a.generated);
    }
    s += &format!("Archived trials: {}\n", status.archived);
    s
}

fn num(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |x| format!("{x:.2}"))
}

fn history_text(trial: &Trial, view: &SummaryView) -> String {
    let mut s = format!("{} ({})\n", view.measure_name, view.measure_id);
    let items = match trial.measure(&view.measure_id).map(|m| &m.input) {
        Some(MeasureInput::List { items }) => Some(items),
        _ => None,
    };
    for p in &view.phases {
        s += &format!("  phase {} ({}): n={}", p.phase_ordinal + 1, p.label, p.count);
        match items {
            Some(items) => {
                for (index, count) in &p.item_counts {
                    let name = items.get(*index as usize).map(String::as_str).unwrap_or("?");
                    s += &format!("  {name}: {count}");
                }
            }
            None => s += &format!("  mean={}  min={}  max={}", num(p.mean), num(p.min), num(p.max)),
        }
        s.push('\n');
    }
    if let Some(c) = view.comparison {
        s += &format!(
            "  A: mean {} (n={})  B: mean {} (n={})  difference {}\n",
            num(c.mean_a),
            c.n_a,
            num(c.mean_b),
            c.n_b,
            c.difference.map_or_else(|| "-".into(), |d| format!("{d:+.2}"))
        );
    }
    s
}

fn describe_draft(trial: &Trial) -> String {
    let mut s = String::from("Your experiment (draft)\n");
    if let Some(goal) = &trial.goal {
        s += &format!("  Goal: {}\n", goal.name);
    }
    for (label, i) in [("A", &trial.intervention_a), ("B", &trial.intervention_b)] {
        if let Some(i) = i {
            s += &format!("  Intervention {label}: {} ({})\n", i.name, i.id);
        }
    }
    for m in &trial.measures {
        s += &format!("  Measure: {} ({}, {})\n", m.name, m.id, m.input.kind_name());
    }
    s += &format!("  Schedule: {}", schedule_text(&trial.effective_schedule(), false));
    let missing = nof1_core::validate_draft(trial);
    if !missing.is_empty() {
        let codes: Vec<_> = missing.iter().map(|v| v.code.as_str()).collect();
        s += &format!("  Still missing: {}\n", codes.join(", "));
    }
    s
}

fn lib_listing(kind: LibKind, goal: Option<&str>, json: bool) -> String {
    if kind == LibKind::Dump {
        let doc: serde_json::Value = serde_json::from_str(library::LIBRARY_DOCUMENT).expect("library parses");
        return json_line(&doc);
    }
    let entries = match (kind, goal) {
        (LibKind::Interventions, Some(goal)) => library::list_entries(EntryKind::Intervention)
            .into_iter()
            .filter(|e| e.linked_goal.as_deref() == Some(goal))
            .collect(),
        (LibKind::Goals, _) => library::list_entries(EntryKind::Goal),
        (LibKind::Interventions, None) => library::list_entries(EntryKind::Intervention),
        (LibKind::Measures, _) => library::list_entries(EntryKind::Measure),
        (LibKind::Dump, _) => unreachable!(),
    };
    if json {
        return json_line(&entries);
    }
    entries
        .iter()
        .map(|e| match (&e.template, &e.linked_goal) {
            (Template::Measure(m), _) => format!("{} ({})\n", m.name, m.input.kind_name()),
            (_, Some(goal)) => format!("{}  [suggested for: {goal}]\n", e.name()),
            _ => format!("{}\n", e.name()),
        })
        .collect()
}

fn library_intervention(name: &str, ids: &mut impl IdSource) -> Option<Intervention> {
    let entry = library::find(EntryKind::Intervention, name)?;
    match library::instantiate(&entry, ids) {
        Template::Intervention(i) => Some(i),
        _ => None,
    }
}

fn build_intervention(
    name: &str,
    instructions: Option<String>,
    reminder: Option<Reminder>,
    ids: &mut impl IdSource,
) -> Intervention {
    let mut i = library_intervention(name, ids).unwrap_or_else(|| Intervention {
        id: ids.fresh_id(nof1_core::ComponentKind::Intervention),
        name: name.into(),
        instructions: String::new(),
        reminders: vec![default_reminder(18)],
    });
    if let Some(text) = instructions {
        i.instructions = text;
    }
    if let Some(r) = reminder {
        i.reminders = vec![r];
    }
    i
}

/// Parses a `--measure` argument.
fn build_measure(spec: &str, reminder: Option<Reminder>, ids: &mut impl IdSource) -> Result<Measure, CliError> {
    let mut measure = match spec.split_once('=') {
        None => {
            let entry = library::find(EntryKind::Measure, spec)
                .ok_or_else(|| CliError::Usage(format!("no library measure named {spec:?}")))?;
            match library::instantiate(&entry, ids) {
                Template::Measure(m) => m,
                _ => unreachable!("measure entries hold measures"),
            }
        }
        Some((name, kind)) => {
            let bad = || CliError::Usage(format!("bad measure definition {spec:?}"));
            let input = match kind.split_once(':').unwrap_or((kind, "")) {
                ("numeric", unit) => MeasureInput::Numeric { unit: unit.into() },
                ("scale", range) => {
                    let (min, max) = range.split_once("..").ok_or_else(bad)?;
                    MeasureInput::Scale {
                        min: min.trim().parse().map_err(|_| bad())?,
                        max: max.trim().parse().map_err(|_| bad())?,
                        annotations: Default::default(),
                    }
                }
                ("list", items) => {
                    MeasureInput::List { items: items.split(',').map(|s| s.trim().to_string()).collect() }
                }
                _ => return Err(bad()),
            };
            Measure {
                id: ids.fresh_id(nof1_core::ComponentKind::Measure),
                name: name.trim().into(),
                input,
                reminders: vec![default_reminder(9)],
            }
        }
    };
    if let Some(r) = reminder {
        measure.reminders = vec![r];
    }
    Ok(measure)
}

fn draft_from_flags(args: NewArgs, ids: &mut impl IdSource) -> Result<Trial, CliError> {
    let design = if args.intervention_b.is_some() { Design::AlternatingTreatment } else { Design::Withdrawal };
    let mut draft = Trial::draft(design);
    draft.goal = args.goal.map(Goal::new);
    draft.intervention_a = args
        .intervention
        .map(|name| build_intervention(&name, args.instructions, args.intervention_reminder.clone(), ids));
    draft.intervention_b = args
        .intervention_b
        .map(|name| build_intervention(&name, args.instructions_b, args.intervention_reminder.clone(), ids));
    draft.measures = args
        .measures
        .iter()
        .map(|spec| build_measure(spec, args.measure_reminder.clone(), ids))
        .collect::<Result<_, _>>()?;
    Ok(draft)
}

struct Prompter<'a> {
    input: &'a mut dyn BufRead,
    out: &'a mut Vec<u8>,
}

impl Prompter<'_> {
    fn ask(&mut self, question: &str) -> Result<String, CliError> {
        write!(self.out, "{question} ").expect("writing to memory");
        let mut line = String::new();
        let n = self.input.read_line(&mut line).map_err(|e| CliError::Usage(format!("reading input: {e}")))?;
        if n == 0 {
            return Err(CliError::Usage("input ended before the wizard finished".into()));
        }
        Ok(line.trim().to_string())
    }

    fn say(&mut self, text: &str) {
        writeln!(self.out, "{text}").expect("writing to memory");
    }

    /// Offers numbered choices; returns a choice or free text.
    fn choose(&mut self, question: &str, options: &[String]) -> Result<String, CliError> {
        for (n, o) in options.iter().enumerate() {
            self.say(&format!("  {}. {o}", n + 1));
        }
        loop {
            let answer = self.ask(question)?;
            if answer.is_empty() {
                continue;
            }
            return Ok(match answer.parse::<usize>() {
                Ok(n) if (1..=options.len()).contains(&n) => options[n - 1].clone(),
                _ => answer,
            });
        }
    }

    fn yes(&mut self, question: &str) -> Result<bool, CliError> {
        loop {
            match self.ask(question)?.to_lowercase().as_str() {
                "y" | "yes" => return Ok(true),
                "n" | "no" | "" => return Ok(false),
                _ => continue,
            }
        }
    }
}

fn wizard_intervention(p: &mut Prompter, goal: &str, ids: &mut impl IdSource) -> Result<Intervention, CliError> {
    let mut options: Vec<String> = library::suggestions_for_goal(goal).into_iter().map(|i| i.name).collect();
    options.extend(
        library::list_entries(EntryKind::Intervention)
            .into_iter()
            .filter(|e| e.linked_goal.is_none())
            .map(|e| e.name().to_string()),
    );
    let name = p.choose("Pick a number or type your own:", &options)?;
    if let Some(i) = library_intervention(&name, ids) {
        return Ok(i);
    }
    let instructions = p.ask("Instructions for yourself (optional):")?;
    Ok(build_intervention(&name, Some(instructions), None, ids))
}

/// Interactive creation in five sections: goal, intervention, comparison
/// question, second intervention (only when comparing), measures.
fn wizard(input: &mut dyn BufRead, out: &mut Vec<u8>) -> Result<Trial, CliError> {
    let mut ids = RandomIds;
    let mut p = Prompter { input, out };

    p.say("1/5 Your goal: what do you want to achieve?");
    let goals: Vec<String> = library::list_entries(EntryKind::Goal).iter().map(|e| e.name().to_string()).collect();
    let goal = p.choose("Pick a number or type your own:", &goals)?;

    p.say("2/5 What is one thing you want to try out to achieve your goal?");
    let first = wizard_intervention(&mut p, &goal, &mut ids)?;

    p.say("3/5 Comparison");
    let compare = p.yes("Do you want to compare it with a second intervention? [y/N]")?;

    let second = if compare {
        p.say("4/5 What do you want to compare it with?");
        Some(wizard_intervention(&mut p, &goal, &mut ids)?)
    } else {
        None
    };

    p.say("5/5 Measures: how will you track your progress?");
    let library_measures: Vec<String> =
        library::list_entries(EntryKind::Measure).iter().map(|e| e.name().to_string()).collect();
    let mut measures = Vec::new();
    loop {
        p.say("Measures (numbers separated by commas), or a definition like Name=scale:0..10:");
        let answer = p.choose("Your choice:", &library_measures)?;
        for part in answer.split(';').flat_map(|a| if a.contains('=') { vec![a] } else { a.split(',').collect() }) {
            let part = part.trim();
            let spec = match part.parse::<usize>() {
                Ok(n) if (1..=library_measures.len()).contains(&n) => library_measures[n - 1].clone(),
                _ => part.to_string(),
            };
            match build_measure(&spec, None, &mut ids) {
                Ok(m) => measures.push(m),
                Err(e) => p.say(&format!("{e}")),
            }
        }
        if !measures.is_empty() {
            break;
        }
    }

    let mut draft = Trial::draft(if compare { Design::AlternatingTreatment } else { Design::Withdrawal });
    draft.goal = Some(Goal::new(goal));
    draft.intervention_a = Some(first);
    draft.intervention_b = second;
    draft.measures = measures;
    Ok(draft)
}

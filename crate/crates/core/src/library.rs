//! Preconfigured goals, interventions and measures.
//!
//! The library ships as an embedded JSON document using the interchange
//! component format. Interventions may name the goal they are suggested for.
//! Templates are copied out on every call, so editing an instantiated
//! component never touches the library.
//!
//! "Warning pad" is kept under that name; it is the warming pad applied to
//! the lower back.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::ids::IdSource;
use crate::model::{ComponentKind, Goal, Intervention, Measure};

/// Source text of the embedded library.
pub const LIBRARY_DOCUMENT: &str = include_str!("../library.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Goal,
    Intervention,
    Measure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "template", rename_all = "lowercase")]
pub enum Template {
    Goal(Goal),
    Intervention(Intervention),
    Measure(Measure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LibraryEntry {
    #[serde(flatten)]
    pub template: Template,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linked_goal: Option<String>,
}

impl LibraryEntry {
    pub fn kind(&self) -> EntryKind {
        match self.template {
            Template::Goal(_) => EntryKind::Goal,
            Template::Intervention(_) => EntryKind::Intervention,
            Template::Measure(_) => EntryKind::Measure,
        }
    }

    pub fn name(&self) -> &str {
        match &self.template {
            Template::Goal(g) => &g.name,
            Template::Intervention(i) => &i.name,
            Template::Measure(m) => &m.name,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    goals: Vec<Goal>,
    interventions: Vec<InterventionEntry>,
    measures: Vec<Measure>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct InterventionEntry {
    #[serde(flatten)]
    intervention: FlatIntervention,
    #[serde(default)]
    linked_goal: Option<String>,
}

// `deny_unknown_fields` cannot be combined with `flatten`, so the flattened
// half is a plain mirror of `Intervention`.
#[derive(Deserialize)]
struct FlatIntervention {
    id: crate::ComponentId,
    name: String,
    instructions: String,
    reminders: Vec<crate::Reminder>,
}

fn document() -> Document {
    serde_json::from_str(LIBRARY_DOCUMENT).expect("embedded library document is valid")
}

/// All entries of one kind, in library order.
pub fn list_entries(kind: EntryKind) -> Vec<LibraryEntry> {
    let doc = document();
    match kind {
        EntryKind::Goal => {
            doc.goals.into_iter().map(|g| LibraryEntry { template: Template::Goal(g), linked_goal: None }).collect()
        }
        EntryKind::Intervention => doc
            .interventions
            .into_iter()
            .map(|e| {
                let FlatIntervention { id, name, instructions, reminders } = e.intervention;
                LibraryEntry {
                    template: Template::Intervention(Intervention { id, name, instructions, reminders }),
                    linked_goal: e.linked_goal,
                }
            })
            .collect(),
        EntryKind::Measure => doc
            .measures
            .into_iter()
            .map(|m| LibraryEntry { template: Template::Measure(m), linked_goal: None })
            .collect(),
    }
}

/// Interventions linked to `goal_name`, in library order. Empty for goals
/// without links.
pub fn suggestions_for_goal(goal_name: &str) -> Vec<Intervention> {
    list_entries(EntryKind::Intervention)
        .into_iter()
        .filter(|e| e.linked_goal.as_deref() == Some(goal_name))
        .filter_map(|e| match e.template {
            Template::Intervention(i) => Some(i),
            _ => None,
        })
        .collect()
}

/// Looks up an entry by exact name.
pub fn find(kind: EntryKind, name: &str) -> Option<LibraryEntry> {
    list_entries(kind).into_iter().find(|e| e.name() == name)
}

/// An editable copy of the entry's template with a fresh id.
pub fn instantiate(entry: &LibraryEntry, ids: &mut impl IdSource) -> Template {
    match &entry.template {
        Template::Goal(g) => Template::Goal(g.clone()),
        Template::Intervention(i) => {
            let mut copy = i.clone();
            copy.id = ids.fresh_id(ComponentKind::Intervention);
            Template::Intervention(copy)
        }
        Template::Measure(m) => {
            let mut copy = m.clone();
            copy.id = ids.fresh_id(ComponentKind::Measure);
            Template::Measure(copy)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_draft, Design, MeasureInput, Trial};
    use crate::SequentialIds;

    fn names(v: &[LibraryEntry]) -> Vec<&str> {
        v.iter().map(|e| e.name()).collect()
    }

    #[test]
    fn goals_and_interventions() {
        let goals = list_entries(EntryKind::Goal);
        assert_eq!(
            names(&goals),
            ["Reduce back pain", "Treat leg cramps", "Treat rheumatoid arthritis", "Treat irritable bowel syndrome"]
        );
        let interventions = list_entries(EntryKind::Intervention);
        assert!(names(&interventions).contains(&"Magnesium"));
        assert!(names(&interventions).contains(&"Gluten-free diet"));
        for e in &interventions {
            if let Some(g) = &e.linked_goal {
                assert!(find(EntryKind::Goal, g).is_some(), "{g}");
            }
        }
        assert!(goals.iter().all(|g| g.linked_goal.is_none()));
    }

    #[test]
    fn suggestions() {
        let s = |g| suggestions_for_goal(g).into_iter().map(|i| i.name).collect::<Vec<_>>();
        assert_eq!(s("Reduce back pain"), ["Willow bark tea", "Arnica gel", "Warning pad"]);
        assert_eq!(s("Treat irritable bowel syndrome"), ["Gluten-free diet", "Fructose-free diet", "Low-fibre diet"]);
        assert!(s("My custom goal").is_empty());
    }

    #[test]
    fn measures_cover_every_input_type() {
        let measures = list_entries(EntryKind::Measure);
        let kinds: Vec<_> = measures
            .iter()
            .map(|e| match &e.template {
                Template::Measure(m) => m.input.kind_name(),
                _ => unreachable!(),
            })
            .collect();
        for k in ["numeric", "list", "scale"] {
            assert!(kinds.contains(&k));
        }
        assert!(measures.iter().any(|e| matches!(
            &e.template,
            Template::Measure(Measure { input: MeasureInput::Numeric { unit }, .. }) if unit == "kg"
        )));
    }

    #[test]
    fn instantiate_gives_fresh_isolated_copies() {
        let entry = find(EntryKind::Intervention, "Magnesium").unwrap();
        let mut ids = SequentialIds::new();
        let (Template::Intervention(mut a), Template::Intervention(b)) =
            (instantiate(&entry, &mut ids), instantiate(&entry, &mut ids))
        else {
            panic!()
        };
        assert_ne!(a.id, b.id);
        assert_eq!((&a.name, &a.reminders), (&b.name, &b.reminders));
        a.name.push_str(" (evening)");
        assert_eq!(find(EntryKind::Intervention, "Magnesium").unwrap(), entry);
    }

    #[test]
    fn every_template_fits_a_valid_draft() {
        let mut ids = SequentialIds::new();
        let goal = list_entries(EntryKind::Goal).remove(0);
        let first_measure = list_entries(EntryKind::Measure).remove(0);
        for entry in list_entries(EntryKind::Intervention) {
            let mut draft = Trial::draft(Design::Withdrawal);
            let (Template::Goal(g), Template::Intervention(i), Template::Measure(m)) =
                (instantiate(&goal, &mut ids), instantiate(&entry, &mut ids), instantiate(&first_measure, &mut ids))
            else {
                panic!()
            };
            draft.goal = Some(g);
            draft.intervention_a = Some(i);
            draft.measures.push(m);
            assert_eq!(validate_draft(&draft), []);
        }
        for entry in list_entries(EntryKind::Measure) {
            let mut draft = Trial::draft(Design::Withdrawal);
            draft.goal = Some(Goal::new("g"));
            let Template::Intervention(i) = instantiate(&find(EntryKind::Intervention, "Massage").unwrap(), &mut ids)
            else {
                panic!()
            };
            draft.intervention_a = Some(i);
            let Template::Measure(m) = instantiate(&entry, &mut ids) else { panic!() };
            draft.measures.push(m);
            assert_eq!(validate_draft(&draft), []);
        }
    }
}

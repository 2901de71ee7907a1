//! Sources of fresh component identifiers.

use alloc::format;

use crate::model::{ComponentId, ComponentKind};

/// Hands out component ids that are unique for the lifetime of the source.
pub trait IdSource {
    fn fresh_id(&mut self, kind: ComponentKind) -> ComponentId;
}

/// Deterministic ids `intervention-1`, `measure-2`, ... from a shared counter.
#[derive(Debug, Clone)]
pub struct SequentialIds {
    prefix: &'static str,
    next: u64,
}

impl SequentialIds {
    pub fn new() -> Self {
        Self::with_prefix("")
    }

    /// Ids become `{prefix}{kind}-{n}`.
    pub fn with_prefix(prefix: &'static str) -> Self {
        SequentialIds { prefix, next: 1 }
    }
}

impl Default for SequentialIds {
    fn default() -> Self {
        Self::new()
    }
}

impl IdSource for SequentialIds {
    fn fresh_id(&mut self, kind: ComponentKind) -> ComponentId {
        let n = self.next;
        self.next += 1;
        let kind = match kind {
            ComponentKind::Intervention => "intervention",
            ComponentKind::Measure => "measure",
        };
        ComponentId(format!("{}{kind}-{n}", self.prefix))
    }
}

impl<T: IdSource + ?Sized> IdSource for &mut T {
    fn fresh_id(&mut self, kind: ComponentKind) -> ComponentId {
        (**self).fresh_id(kind)
    }
}

//! On-disk store for one user's trials.
//!
//! Layout of a store directory:
//!
//! ```text
//! store.json            {"activeTrial": "trial-<key>.json", "archive": ["trial-<key>.json", ...]}
//! trial-<key>.json      one trial in the interchange format
//! store.lock            advisory lock held by the process using the store
//! ```
//!
//! Every file is written to a temporary name and renamed into place, trial
//! files first and the manifest last, so a crash leaves either the old or the
//! new manifest pointing at complete files.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use nof1_core::{export_trial, import_trial, Stage, Trial};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StoreError};

pub const MANIFEST: &str = "store.json";
const LOCK: &str = "store.lock";

#[derive(Debug, Clone, PartialEq)]
pub struct StoredTrial {
    /// Store-assigned key; the file is `trial-<key>.json`.
    pub key: String,
    pub trial: Trial,
}

impl StoredTrial {
    pub fn new(trial: Trial) -> Self {
        StoredTrial { key: uuid::Uuid::new_v4().simple().to_string(), trial }
    }

    pub fn file_name(&self) -> String {
        format!("trial-{}.json", self.key)
    }
}

/// At most one active trial (draft, running, or finished and not yet
/// replaced) plus an archive of finished trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Store {
    pub active: Option<StoredTrial>,
    pub archive: Vec<StoredTrial>,
    dir: PathBuf,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct Manifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    active_trial: Option<String>,
    archive: Vec<String>,
}

fn key_of(file: &str) -> Option<&str> {
    let key = file.strip_prefix("trial-")?.strip_suffix(".json")?;
    (!key.is_empty() && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-')).then_some(key)
}

impl Store {
    pub fn empty(dir: impl Into<PathBuf>) -> Self {
        Store { active: None, archive: Vec::new(), dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Reads the store in `dir`. A directory without a manifest is an empty
    /// store.
    pub fn load(dir: impl Into<PathBuf>) -> Result<Store> {
        let dir = dir.into();
        let manifest_path = dir.join(MANIFEST);
        let text = match fs::read_to_string(&manifest_path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Store::empty(dir)),
            Err(e) => return Err(StoreError::io(manifest_path, e)),
        };
        let manifest: Manifest = serde_json::from_str(&text)
            .map_err(|e| StoreError::Corrupt { file: MANIFEST.into(), reason: e.to_string() })?;

        let read = |file: &str| -> Result<StoredTrial> {
            let corrupt = |reason: String| StoreError::Corrupt { file: file.into(), reason };
            let key = key_of(file).ok_or_else(|| corrupt("not a trial file name".into()))?;
            let path = dir.join(file);
            let doc = fs::read_to_string(&path).map_err(|e| corrupt(e.to_string()))?;
            let trial = import_trial(&doc).map_err(|e| corrupt(e.to_string()))?;
            Ok(StoredTrial { key: key.into(), trial })
        };

        let active = manifest.active_trial.as_deref().map(read).transpose()?;
        let archive = manifest.archive.iter().map(|f| read(f)).collect::<Result<Vec<_>>>()?;
        if let Some(t) = archive.iter().find(|t| t.trial.stage != Stage::Finished) {
            return Err(StoreError::Corrupt { file: t.file_name(), reason: "archived trial is not finished".into() });
        }
        Ok(Store { active, archive, dir })
    }

    pub fn save(&self) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| StoreError::io(&self.dir, e))?;
        for t in self.active.iter().chain(&self.archive) {
            write_atomically(&self.dir.join(t.file_name()), export_trial(&t.trial).as_bytes())?;
        }
        let manifest = Manifest {
            active_trial: self.active.as_ref().map(StoredTrial::file_name),
            archive: self.archive.iter().map(StoredTrial::file_name).collect(),
        };
        let text = serde_json::to_string(&manifest).expect("manifest serializes");
        write_atomically(&self.dir.join(MANIFEST), text.as_bytes())?;
        self.remove_unreferenced()
    }

    fn remove_unreferenced(&self) -> Result<()> {
        let live: Vec<String> = self.active.iter().chain(&self.archive).map(StoredTrial::file_name).collect();
        let entries = fs::read_dir(&self.dir).map_err(|e| StoreError::io(&self.dir, e))?;
        for entry in entries.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            if key_of(&name).is_some() && !live.contains(&name) {
                fs::remove_file(entry.path()).map_err(|e| StoreError::io(entry.path(), e))?;
            }
        }
        Ok(())
    }

    /// The trial most relevant to read-only commands: the active one, else
    /// the most recently archived.
    pub fn current(&self) -> Option<&Trial> {
        self.active.as_ref().or(self.archive.last()).map(|t| &t.trial)
    }

    pub fn active_trial(&self) -> Option<&Trial> {
        self.active.as_ref().map(|t| &t.trial)
    }

    /// Applies `f` to a copy of the store, persists the copy, and only then
    /// replaces `self`. On error nothing changes, in memory or on disk.
    pub fn transact<T>(&mut self, f: impl FnOnce(&mut Store) -> Result<T>) -> Result<T> {
        let mut next = self.clone();
        let out = f(&mut next)?;
        if next != *self {
            next.save()?;
            *self = next;
        }
        Ok(out)
    }
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    let write = || -> std::io::Result<()> {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| StoreError::io(path, e))
}

/// Exclusive advisory lock on a store directory, released on drop.
#[derive(Debug)]
pub struct StoreLock {
    _file: File,
}

impl StoreLock {
    pub fn acquire(dir: &Path) -> Result<StoreLock> {
        fs::create_dir_all(dir).map_err(|e| StoreError::io(dir, e))?;
        let path = dir.join(LOCK);
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(|e| StoreError::io(&path, e))?;
        match file.try_lock() {
            Ok(()) => Ok(StoreLock { _file: file }),
            Err(fs::TryLockError::WouldBlock) => Err(StoreError::Locked(path)),
            Err(fs::TryLockError::Error(e)) => Err(StoreError::io(path, e)),
        }
    }
}

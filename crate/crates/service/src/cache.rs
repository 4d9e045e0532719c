//! On-disk cache of solve records, one JSON file per game.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use containment::solver::{SolveSummary, StrategyTable};
use serde::{Deserialize, Serialize};

use crate::session::Variant;

pub const RECORD_VERSION: u32 = 1;

/// Identifies a game: labelled graph (no isomorphism reduction), cop count
/// and rule variant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub graph6: String,
    pub k: usize,
    pub variant: Variant,
}

impl CacheKey {
    fn file_name(&self) -> String {
        let hex: String = self.graph6.bytes().map(|b| format!("{b:02x}")).collect();
        format!("{hex}-k{}-{}.json", self.k, self.variant.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveRecord {
    pub version: u32,
    pub key: CacheKey,
    pub summary: SolveSummary,
    pub cop_strategy: StrategyTable,
    pub robber_strategy: StrategyTable,
}

pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<DiskCache> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// The stored record, if present, readable and of the current version.
    pub fn load(&self, key: &CacheKey) -> Option<SolveRecord> {
        let bytes = fs::read(self.dir.join(key.file_name())).ok()?;
        let record: SolveRecord = serde_json::from_slice(&bytes).ok()?;
        (record.version == RECORD_VERSION && &record.key == key).then_some(record)
    }

    /// Writes atomically: a temporary file in the same directory, renamed.
    pub fn store(&self, record: &SolveRecord) -> io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, record)?;
        tmp.flush()?;
        tmp.persist(self.dir.join(record.key.file_name()))
            .map_err(|e| e.error)?;
        Ok(())
    }
}

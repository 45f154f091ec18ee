//! Run-directory layout: every command writes its artifacts under a fresh
//! timestamped directory containing a copy of the resolved configuration.

use crate::error::CliError;
use serde::Serialize;
use std::path::{Path, PathBuf};
use time::format_description::FormatItem;
use time::macros::format_description;
use time::OffsetDateTime;

const STAMP: &[FormatItem<'_>] = format_description!("[year][month][day]-[hour][minute][second]");

pub struct RunDir {
    pub path: PathBuf,
}

impl RunDir {
    /// Creates `<base>/<utc timestamp>-<command>`, suffixing a counter on
    /// same-second collisions.
    pub fn create(base: &Path, command: &str) -> Result<Self, CliError> {
        let stamp = OffsetDateTime::now_utc()
            .format(STAMP)
            .map_err(|e| CliError::Internal(format!("timestamp formatting: {e}")))?;
        let mut path = base.join(format!("{stamp}-{command}"));
        let mut counter = 1;
        while path.exists() {
            counter += 1;
            path = base.join(format!("{stamp}-{command}-{counter}"));
        }
        std::fs::create_dir_all(&path)?;
        Ok(Self { path })
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let path = self.path.join(name);
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Internal(format!("serializing {name}: {e}")))?;
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.path.join(name);
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

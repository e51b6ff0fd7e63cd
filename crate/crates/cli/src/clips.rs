//! Finding clips under an input directory and mirroring them on output.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use dynaug::io::{ClipFormat, ClipLocator};

pub const RAW_EXTENSION: &str = "dvclip";

/// One input clip: its entry name and where to read it.
#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub locator: ClipLocator,
}

impl Entry {
    /// Same entry name and format under `root`.
    pub fn mirrored(&self, root: &Path) -> ClipLocator {
        ClipLocator::new(root.join(&self.name), self.locator.format)
    }
}

/// Subdirectories (frame sequences) and `.dvclip` files, sorted by name.
pub fn discover(input: &Path) -> anyhow::Result<Vec<Entry>> {
    let mut entries = Vec::new();
    for item in fs::read_dir(input).with_context(|| format!("cannot list {}", input.display()))? {
        let item = item.with_context(|| format!("cannot list {}", input.display()))?;
        let path: PathBuf = item.path();
        let name = item.file_name().to_string_lossy().into_owned();
        let format = if path.is_dir() {
            ClipFormat::ImageSequence
        } else if path.extension().is_some_and(|e| e == RAW_EXTENSION) {
            ClipFormat::RawClip
        } else {
            continue;
        };
        entries.push(Entry {
            name,
            locator: ClipLocator::new(path, format),
        });
    }
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(entries)
}

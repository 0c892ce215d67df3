//! Staged output: every file of a command is first written to a temporary
//! file next to its destination and renamed into place only once the whole
//! command has succeeded.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::NamedTempFile;

use super::Failure;

#[derive(Default)]
pub struct Staging {
    files: Vec<(NamedTempFile, PathBuf)>,
}

impl Staging {
    pub fn new() -> Self {
        Staging::default()
    }

    /// Writes `path` through `fill` into a temporary sibling file.
    pub fn write<F>(&mut self, path: &Path, fill: F) -> Result<(), Failure>
    where
        F: FnOnce(&mut BufWriter<&File>) -> Result<(), Failure>,
    {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir).map_err(|e| Failure::output(&dir, e))?;
        let tmp = tempfile::Builder::new()
            .prefix(".wikirank-")
            .tempfile_in(&dir)
            .map_err(|e| Failure::output(&dir, e))?;
        {
            let mut w = BufWriter::new(tmp.as_file());
            fill(&mut w)?;
            w.flush().map_err(|e| Failure::output(path, e))?;
        }
        self.files.push((tmp, path.to_path_buf()));
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<(), Failure> {
        self.write(path, |w| {
            serde_json::to_writer_pretty(&mut *w, value)
                .map_err(|e| Failure::output(path, e.into()))?;
            writeln!(w).map_err(|e| Failure::output(path, e))
        })
    }

    /// Renames every staged file onto its destination.
    pub fn commit(self) -> Result<(), Failure> {
        for (tmp, path) in self.files {
            tmp.persist(&path)
                .map_err(|e| Failure::output(&path, e.error))?;
        }
        Ok(())
    }
}

/// File name of an input as recorded in manifests.
pub fn input_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// `# metric<TAB>value` table.
pub fn write_counts<W: Write>(mut w: W, rows: &[(String, u64)]) -> std::io::Result<()> {
    writeln!(w, "# metric\tvalue")?;
    for (k, v) in rows {
        writeln!(w, "{k}\t{v}")?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_lands_before_commit() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("sub/out.tsv");
        let mut s = Staging::new();
        s.write(&target, |w| {
            writeln!(w, "x").map_err(|e| Failure::output(&target, e))
        })
        .unwrap();
        assert!(!target.exists());
        s.commit().unwrap();
        assert_eq!(fs::read_to_string(&target).unwrap(), "x\n");
    }

    #[test]
    fn dropped_staging_leaves_no_files() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out.tsv");
        {
            let mut s = Staging::new();
            s.write(&target, |_| Ok(())).unwrap();
        }
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}

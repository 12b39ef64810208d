//! Conversion of CCGBank AUTO files into diagrams.

use std::path::{Path, PathBuf};

use qnlp_core::ccg::{parse_auto_entries, tree_to_diagram};
use qnlp_core::Diagram;

use crate::error::{Error, Result};

/// Outcome for one derivation line.
#[derive(Debug)]
pub struct CorpusItem {
    pub id: String,
    pub file: PathBuf,
    pub line: usize,
    pub diagram: qnlp_core::Result<Diagram>,
}

/// Converts every derivation in an AUTO file, or in every `.auto` file of a
/// directory (recursively, in path order). Bad derivations are logged and
/// kept as errors; only unreadable files fail the call.
pub fn section_to_diagrams(path: &Path) -> Result<Vec<CorpusItem>> {
    let mut files = Vec::new();
    collect(path, &mut files)?;
    let mut out = Vec::new();
    for file in files {
        let text = std::fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
        for entry in parse_auto_entries(&text) {
            let diagram = entry.result.and_then(|t| tree_to_diagram(&t));
            if let Err(e) = &diagram {
                log::warn!("{}:{} ({}): {e}", file.display(), entry.line, entry.id);
            }
            out.push(CorpusItem { id: entry.id, file: file.clone(), line: entry.line, diagram });
        }
    }
    Ok(out)
}

fn collect(path: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    let meta = std::fs::metadata(path).map_err(|e| Error::io(path, e))?;
    if meta.is_file() {
        files.push(path.to_path_buf());
        return Ok(());
    }
    let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| Error::io(path, e))?
        .map(|e| e.map(|e| e.path()).map_err(|err| Error::io(path, err)))
        .collect::<Result<_>>()?;
    entries.sort();
    for p in entries {
        if p.is_dir() {
            collect(&p, files)?;
        } else if p.extension().is_some_and(|x| x == "auto") {
            files.push(p);
        }
    }
    Ok(())
}

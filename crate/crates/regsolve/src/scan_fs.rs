//! Corpus scanning over directories.

use std::path::{Path, PathBuf};

use regsolve_core::scan::ScanReport;
use walkdir::WalkDir;

const EXTENSIONS: [&str; 3] = ["js", "mjs", "cjs"];

#[derive(Debug, Default)]
pub struct ScanOutcome {
    pub report: ScanReport,
    /// Files or directories that could not be read.
    pub errors: Vec<(PathBuf, String)>,
}

fn is_script(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()).is_some_and(|e| EXTENSIONS.contains(&e))
}

/// Scans every `.js`, `.mjs` and `.cjs` file under the roots in path order.
pub fn scan_paths<P: AsRef<Path>>(roots: &[P]) -> ScanOutcome {
    let mut out = ScanOutcome::default();
    for root in roots {
        for entry in WalkDir::new(root).sort_by_file_name() {
            let entry = match entry {
                Ok(e) => e,
                Err(e) => {
                    let path = e.path().map(Path::to_path_buf).unwrap_or_else(|| root.as_ref().to_path_buf());
                    out.errors.push((path, e.to_string()));
                    continue;
                }
            };
            if !entry.file_type().is_file() || !is_script(entry.path()) {
                continue;
            }
            match std::fs::read(entry.path()) {
                Ok(bytes) => out.report.add_source(&String::from_utf8_lossy(&bytes)),
                Err(e) => out.errors.push((entry.path().to_path_buf(), e.to_string())),
            }
        }
    }
    out
}

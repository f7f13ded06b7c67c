use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::checks::CheckOutput;
use crate::scenario::{Format, RunError};

pub const REPORT_VERSION: u32 = 1;

#[derive(Serialize)]
struct Document<'a> {
    version: u32,
    checks: &'a [CheckOutput],
}

#[derive(Serialize)]
struct CsvRow<'a> {
    theorem_id: String,
    t: Option<f64>,
    hausdorff: f64,
    verdict: &'a str,
}

/// Serializes the results. Output depends only on the results, so equal
/// inputs give identical bytes.
pub fn emit_report(results: &[CheckOutput], format: Format) -> Result<Vec<u8>, RunError> {
    if results.is_empty() {
        return Err(RunError::Config("no results to report".into()));
    }
    match format {
        Format::Json => {
            let doc = Document {
                version: REPORT_VERSION,
                checks: results,
            };
            let mut bytes =
                serde_json::to_vec_pretty(&doc).map_err(|e| RunError::Config(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            // one row per entry; the measured value goes in the `hausdorff` column
            let mut rows: Vec<(&str, CsvRow)> = results
                .iter()
                .flat_map(|r| {
                    r.report.entries.iter().map(move |e| {
                        (
                            r.report.id.as_str(),
                            CsvRow {
                                theorem_id: format!("{}/{}", r.report.id, e.name),
                                t: e.t,
                                hausdorff: e.value,
                                verdict: e.verdict.as_str(),
                            },
                        )
                    })
                })
                .collect();
            rows.sort_by(|(a, x), (b, y)| {
                a.cmp(b).then_with(|| match (x.t, y.t) {
                    (None, None) => std::cmp::Ordering::Equal,
                    (None, Some(_)) => std::cmp::Ordering::Less,
                    (Some(_), None) => std::cmp::Ordering::Greater,
                    (Some(p), Some(q)) => p.total_cmp(&q),
                })
            });
            let mut wtr = csv::Writer::from_writer(Vec::new());
            for (_, row) in rows {
                wtr.serialize(row)
                    .map_err(|e| RunError::Config(e.to_string()))?;
            }
            wtr.into_inner()
                .map_err(|e| RunError::Config(e.to_string()))
        }
    }
}

/// Writes to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| RunError::Config(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
}

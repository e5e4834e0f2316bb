//! File formats: edge-list ingestion, curve and trace export, and the
//! 12-significant-digit number policy that makes outputs reproducible.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use centric_core::{
    BipartiteGraph, DisruptionCurve, DisruptionStep, EdgeRecord, UnipartiteGraph, UnipartiteRecord,
};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Environment variable naming the default output directory. Relative
/// output paths are resolved under it when set.
pub const OUTPUT_DIR_ENV: &str = "CENTRIC_OUTPUT_DIR";

/// Round to 12 significant digits; all exported floating-point numbers go
/// through this, so re-parsing an output reproduces the serialized values
/// exactly.
pub fn sig12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap_or(x)
    } else {
        x
    }
}

/// Display form of a rounded number for CSV cells.
pub fn cell(x: f64) -> String {
    format!("{}", sig12(x))
}

/// Accounting produced while ingesting an edge list.
#[derive(Debug, Clone, Serialize)]
pub struct IngestReport {
    pub rows: usize,
    pub distinct_edges: usize,
    pub duplicates_compressed: usize,
    pub communities: usize,
    pub users: usize,
    pub total_weight: u64,
}

fn open(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn check_header(path: &Path, headers: &csv::StringRecord, expected: [&str; 2]) -> Result<bool> {
    let names: Vec<&str> = headers.iter().collect();
    match names.as_slice() {
        [a, b] if [*a, *b] == expected => Ok(false),
        [a, b, "weight"] if [*a, *b] == expected => Ok(true),
        _ => Err(CliError::Header {
            path: path.to_path_buf(),
            message: format!(
                "expected header `{},{}[,weight]`, found `{}`",
                expected[0],
                expected[1],
                names.join(",")
            ),
        }),
    }
}

fn parse_weight(path: &Path, line: u64, field: Option<&str>, has_weight: bool) -> Result<i64> {
    match field {
        None if !has_weight => Ok(1),
        Some(raw) => raw.parse::<i64>().map_err(|_| CliError::Format {
            path: path.to_path_buf(),
            line,
            message: format!("weight `{raw}` is not an integer"),
        }),
        None => Err(CliError::Format {
            path: path.to_path_buf(),
            line,
            message: "missing weight field".into(),
        }),
    }
}

/// Reads a `user,community[,weight]` CSV into a graph plus its ingest
/// accounting. Weightless files default every edge to weight 1.
pub fn ingest_edge_list(path: &Path) -> Result<(BipartiteGraph, IngestReport)> {
    let mut reader = open(path)?;
    let has_weight = check_header(
        path,
        reader.headers().map_err(|e| csv_error(path, e))?,
        ["user", "community"],
    )?;

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let expected_fields = if has_weight { 3 } else { 2 };
        if row.len() != expected_fields {
            return Err(CliError::Format {
                path: path.to_path_buf(),
                line,
                message: format!("expected {expected_fields} fields, found {}", row.len()),
            });
        }
        let weight = parse_weight(path, line, row.get(2), has_weight)?;
        records.push(EdgeRecord::new(&row[0], &row[1], weight));
    }

    let graph = BipartiteGraph::from_records(&records)?;
    let report = IngestReport {
        rows: records.len(),
        distinct_edges: graph.distinct_edges(),
        duplicates_compressed: records.len() - graph.distinct_edges(),
        communities: graph.num_communities(),
        users: graph.num_users(),
        total_weight: graph.total_weight(),
    };
    Ok((graph, report))
}

/// Reads a unipartite `source,target[,weight]` CSV.
pub fn ingest_unipartite(path: &Path) -> Result<UnipartiteGraph> {
    let mut reader = open(path)?;
    let has_weight = check_header(
        path,
        reader.headers().map_err(|e| csv_error(path, e))?,
        ["source", "target"],
    )?;

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let expected_fields = if has_weight { 3 } else { 2 };
        if row.len() != expected_fields {
            return Err(CliError::Format {
                path: path.to_path_buf(),
                line,
                message: format!("expected {expected_fields} fields, found {}", row.len()),
            });
        }
        let weight = parse_weight(path, line, row.get(2), has_weight)?;
        records.push(UnipartiteRecord::new(&row[0], &row[1], weight));
    }
    Ok(UnipartiteGraph::from_records(&records)?)
}

fn csv_error(path: &Path, error: csv::Error) -> CliError {
    let line = error
        .position()
        .map(|position| position.line())
        .unwrap_or(0);
    CliError::Format {
        path: path.to_path_buf(),
        line,
        message: error.to_string(),
    }
}

/// Where output goes: a file (resolved against the output-directory
/// environment variable) or stdout.
pub enum OutputTarget {
    Stdout,
    File(PathBuf),
}

pub fn resolve_output(path: Option<&Path>) -> OutputTarget {
    match path {
        None => OutputTarget::Stdout,
        Some(p) if p.is_absolute() => OutputTarget::File(p.to_path_buf()),
        Some(p) => match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) => OutputTarget::File(PathBuf::from(dir).join(p)),
            None => OutputTarget::File(p.to_path_buf()),
        },
    }
}

impl OutputTarget {
    pub fn writer(&self) -> Result<Box<dyn Write>> {
        match self {
            OutputTarget::Stdout => Ok(Box::new(std::io::stdout().lock())),
            OutputTarget::File(path) => {
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        std::fs::create_dir_all(parent).map_err(|source| CliError::Io {
                            path: path.clone(),
                            source,
                        })?;
                    }
                }
                let file = File::create(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(Box::new(BufWriter::new(file)))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            OutputTarget::Stdout => "<stdout>".into(),
            OutputTarget::File(path) => path.display().to_string(),
        }
    }
}

pub fn write_json<T: Serialize>(target: &OutputTarget, value: &T) -> Result<()> {
    let mut writer = target.writer()?;
    let rendered = serde_json::to_string_pretty(value).expect("serializable report");
    writeln!(writer, "{rendered}").map_err(|source| CliError::Io {
        path: PathBuf::from(target.describe()),
        source,
    })
}

pub fn write_csv(target: &OutputTarget, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut writer = target.writer()?;
    let render = |fields: &[String]| fields.join(",");
    let header: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    writeln!(writer, "{}", render(&header)).map_err(|source| CliError::Io {
        path: PathBuf::from(target.describe()),
        source,
    })?;
    for row in rows {
        writeln!(writer, "{}", render(row)).map_err(|source| CliError::Io {
            path: PathBuf::from(target.describe()),
            source,
        })?;
    }
    Ok(())
}

/// Writes a graph as the canonical `user,community,weight` edge list, rows
/// ordered by dense community then user index.
pub fn export_edge_list(target: &OutputTarget, graph: &BipartiteGraph) -> Result<()> {
    let rows: Vec<Vec<String>> = graph
        .sorted_edges()
        .iter()
        .map(|edge| {
            vec![
                graph.user_id(edge.user).to_string(),
                graph.community_id(edge.community).to_string(),
                edge.weight.to_string(),
            ]
        })
        .collect();
    write_csv(target, &["user", "community", "weight"], &rows)
}

/// Reads back a curve exported as `k,fraction_removed,disruption`.
pub fn load_curve(path: &Path) -> Result<DisruptionCurve> {
    let mut reader = open(path)?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?;
    let names: Vec<&str> = headers.iter().collect();
    if names != ["k", "fraction_removed", "disruption"] {
        return Err(CliError::Header {
            path: path.to_path_buf(),
            message: format!(
                "expected header `k,fraction_removed,disruption`, found `{}`",
                names.join(",")
            ),
        });
    }
    let mut steps = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let parse = |index: usize| -> Result<f64> {
            row.get(index)
                .and_then(|raw| raw.parse::<f64>().ok())
                .ok_or_else(|| CliError::Format {
                    path: path.to_path_buf(),
                    line,
                    message: format!("field {index} is not a number"),
                })
        };
        steps.push(DisruptionStep {
            removed: parse(0)? as usize,
            fraction_removed: parse(1)?,
            disruption: parse(2)?,
            surviving_users: 0,
            surviving_edge_weight: 0,
        });
    }
    if steps.is_empty() {
        return Err(CliError::Core(centric_core::Error::EmptyCurve));
    }
    Ok(DisruptionCurve::from_steps(steps))
}

//! Input parsing (distance matrices, point clouds, JSON) and atomic output.

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::Error;
use crate::metric::{FiniteMetricSpace, MMSpace};
use crate::{tol, Result};

/// Input layout. `Auto` sniffs JSON by a leading `{`, then tries a distance
/// matrix (square, symmetric, zero diagonal, triangle inequality) and falls
/// back to rows-as-points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Auto,
    Matrix,
    Points,
    Json,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(InputFormat::Auto),
            "matrix" => Ok(InputFormat::Matrix),
            "points" => Ok(InputFormat::Points),
            "json" => Ok(InputFormat::Json),
            other => Err(Error::parse(format!(
                "unknown input format '{other}' (expected auto|matrix|points|json)"
            ))),
        }
    }
}

/// Numeric CSV rows; blank lines and `#` comments are skipped. Errors name
/// the offending 1-based line.
fn parse_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let field = field.trim();
            row.push(field.parse::<f64>().map_err(|_| {
                Error::parse(format!(
                    "line {}: invalid number '{field}'",
                    lineno + 1
                ))
            })?);
        }
        if let Some(w) = width {
            if row.len() != w {
                return Err(Error::parse(format!(
                    "line {}: expected {w} fields, got {}",
                    lineno + 1,
                    row.len()
                )));
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse("input contains no data rows"));
    }
    Ok(rows)
}

#[derive(Deserialize)]
struct JsonInput {
    #[serde(default)]
    d: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    mu: Option<Vec<f64>>,
}

fn space_from_json(text: &str) -> Result<MMSpace> {
    let input: JsonInput =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("json: {e}")))?;
    let space = match (input.d, input.points) {
        (Some(d), None) => FiniteMetricSpace::new(d, tol::EPS_TRI)?,
        (None, Some(p)) => FiniteMetricSpace::from_points(&p)?,
        (Some(_), Some(_)) => {
            return Err(Error::parse("json: give either \"d\" or \"points\", not both"))
        }
        (None, None) => return Err(Error::parse("json: missing \"d\" or \"points\"")),
    };
    match input.mu {
        Some(mu) => MMSpace::new(space, mu),
        None => Ok(MMSpace::uniform(space)),
    }
}

/// Reads an mm-space (uniform measure unless JSON provides `mu`).
pub fn read_mm_space(path: &Path, format: InputFormat) -> Result<MMSpace> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    parse_mm_space(&text, format)
}

/// Same as [`read_mm_space`] but from in-memory text.
pub fn parse_mm_space(text: &str, format: InputFormat) -> Result<MMSpace> {
    match format {
        InputFormat::Json => space_from_json(text),
        InputFormat::Matrix => {
            let rows = parse_csv(text)?;
            Ok(MMSpace::uniform(FiniteMetricSpace::new(rows, tol::EPS_TRI)?))
        }
        InputFormat::Points => {
            let rows = parse_csv(text)?;
            Ok(MMSpace::uniform(FiniteMetricSpace::from_points(&rows)?))
        }
        InputFormat::Auto => {
            if text.trim_start().starts_with('{') {
                return space_from_json(text);
            }
            let rows = parse_csv(text)?;
            if rows.len() == rows[0].len() {
                if let Ok(space) = FiniteMetricSpace::new(rows.clone(), tol::EPS_TRI) {
                    return Ok(MMSpace::uniform(space));
                }
            }
            Ok(MMSpace::uniform(FiniteMetricSpace::from_points(&rows)?))
        }
    }
}

/// Writes via a sibling temp file and rename, so readers never observe a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_detects_a_distance_matrix() {
        let text = "0,1,2\n1,0,2\n2,2,0\n";
        let mm = parse_mm_space(text, InputFormat::Auto).unwrap();
        assert_eq!(mm.space.len(), 3);
        assert_eq!(mm.space.dist(0, 2), 2.0);
        assert!((mm.mass(0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn auto_falls_back_to_points() {
        // Square but not a metric matrix (nonzero diagonal): read as three
        // 3-d points.
        let text = "0,0,1\n3,4,1\n6,8,1\n";
        let mm = parse_mm_space(text, InputFormat::Auto).unwrap();
        assert_eq!(mm.space.len(), 3);
        assert!((mm.space.dist(0, 1) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_points_format_skips_matrix_sniffing() {
        let text = "0,1\n1,0\n";
        let as_points = parse_mm_space(text, InputFormat::Points).unwrap();
        assert!((as_points.space.dist(0, 1) - 2.0f64.sqrt()).abs() < 1e-12);
        let as_matrix = parse_mm_space(text, InputFormat::Matrix).unwrap();
        assert_eq!(as_matrix.space.dist(0, 1), 1.0);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let err = parse_mm_space("0,1\n1,zero\n", InputFormat::Matrix).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "message: {msg}");
        assert!(matches!(err, Error::Parse(_)));
        let ragged = parse_mm_space("0,1\n1\n", InputFormat::Matrix).unwrap_err();
        assert!(ragged.to_string().contains("line 2"));
    }

    #[test]
    fn json_with_measure() {
        let text = r#"{"d": [[0,1],[1,0]], "mu": [0.25, 0.75]}"#;
        let mm = parse_mm_space(text, InputFormat::Auto).unwrap();
        assert_eq!(mm.mass(1), 0.75);
        let bad = r#"{"d": [[0,1],[1,0]], "mu": [0.5, 0.75]}"#;
        assert!(matches!(
            parse_mm_space(bad, InputFormat::Auto).unwrap_err(),
            Error::Validation(_)
        ));
    }

    #[test]
    fn json_points_input() {
        let text = r#"{"points": [[0,0],[1,0],[0,1]]}"#;
        let mm = parse_mm_space(text, InputFormat::Json).unwrap();
        assert_eq!(mm.space.len(), 3);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"second");
        // No temp file left behind.
        let leftovers: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
            .collect();
        assert!(leftovers.is_empty());
    }
}

//! Plain-text point files: one point per line, whitespace-separated
//! coordinates, `#` starts a comment line.

use std::path::Path;

use atsp_core::geometry::GeometryError;
use atsp_core::{Point, PointCloud};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: cannot parse {token:?} as a number")]
    Number { line: usize, token: String },
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    Dimension { line: usize, expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Point { line: usize, source: GeometryError },
    #[error(transparent)]
    Cloud(GeometryError),
    #[error("no points in input")]
    Empty,
}

/// A parsed input with exact duplicates removed.
#[derive(Clone, Debug, PartialEq)]
pub struct Loaded {
    pub cloud: PointCloud,
    pub duplicates: usize,
}

pub fn parse_points(text: &str) -> Result<Loaded, InputError> {
    let mut points = Vec::new();
    let mut dim = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let coords = body
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| InputError::Number { line, token: t.to_string() }))
            .collect::<Result<Vec<_>, _>>()?;
        let expected = *dim.get_or_insert(coords.len());
        if coords.len() != expected {
            return Err(InputError::Dimension { line, expected, found: coords.len() });
        }
        points.push(Point::new(coords).map_err(|source| InputError::Point { line, source })?);
    }
    if points.is_empty() {
        return Err(InputError::Empty);
    }
    let (cloud, duplicates) = PointCloud::from_points(points).map_err(InputError::Cloud)?;
    Ok(Loaded { cloud, duplicates })
}

pub fn read_points(path: &Path) -> Result<Loaded, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
    parse_points(&text)
}

/// Inverse of [`parse_points`] up to comments.
pub fn format_points(cloud: &PointCloud) -> String {
    let mut out = String::new();
    for p in cloud.points() {
        let row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

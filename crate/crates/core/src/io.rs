//! Plain-text curve files and the structured result documents.
//!
//! A curve file holds one vertex per line, coordinates separated by commas
//! and/or whitespace. Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{FrechetError, Result};
use crate::geometry::Chain;

/// Parses a curve file; the first data line fixes the dimension.
pub fn parse_curve(text: &str) -> Result<Chain> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let row = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                let x: f64 = tok.parse().map_err(|_| FrechetError::Parse {
                    line,
                    message: format!("cannot parse {tok:?} as a number"),
                })?;
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(FrechetError::Parse { line, message: format!("{tok} is not finite") })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(FrechetError::Parse {
                    line,
                    message: format!("expected {d} coordinates, found {}", row.len()),
                })
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FrechetError::Parse { line: 0, message: "no vertices".into() });
    }
    Chain::new(rows)
}

/// One vertex per line, comma separated. Rust's float formatting prints the
/// shortest decimal that parses back to the same double, so
/// `parse_curve(&format_curve(c)) == c`.
pub fn format_curve(chain: &Chain) -> String {
    let mut out = String::new();
    for v in chain.vertices() {
        for (k, x) in v.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            write!(out, "{x:?}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub exact: bool,
}

/// Either a verdict or a computed distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    Verdict(String),
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct DocStats {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals_stored: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decisions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: String,
    pub params: Params,
    pub result: Outcome,
    pub cost: Option<f64>,
    pub breakpoints: Vec<[f64; 2]>,
    pub stats: DocStats,
}

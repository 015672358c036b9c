//! Plain-text graph files.
//!
//! - edges: `i<TAB>j` per line, 0-based, `i < j`, sorted
//! - labels: `node<TAB>label` per line, label in `1..=k`
//! - attributes: CSV with header `node,a0,...,a{d-1}`, 9 significant digits
//!
//! Readers accept any whitespace as separator and skip blank lines and
//! lines starting with `#`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use gencat_core::{Labels, Matrix};

use crate::error::{CliError, CliResult};

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::io(path, e))
}

/// Content lines with their 1-based line numbers.
fn content_lines(path: &Path) -> CliResult<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (idx, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push((idx + 1, trimmed.to_string()));
    }
    Ok(out)
}

fn parse_error(path: &Path, line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{}:{line}: {msg}", path.display()))
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, s: &str) -> CliResult<T> {
    s.parse::<T>()
        .map_err(|_| parse_error(path, line, format!("'{s}' is not a valid id")))
}

fn two_fields<A: std::str::FromStr, B: std::str::FromStr>(
    path: &Path,
    line: usize,
    text: &str,
) -> CliResult<(A, B)> {
    let mut it = text.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(parse_error(path, line, "expected two fields"));
    };
    Ok((parse_field(path, line, a)?, parse_field(path, line, b)?))
}

pub fn write_edges(path: &Path, edges: &[(u32, u32)]) -> CliResult<()> {
    let mut w = create(path)?;
    for &(i, j) in edges {
        writeln!(w, "{i}\t{j}").map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Reads an edge list; pairs are returned as written.
pub fn read_edges(path: &Path) -> CliResult<Vec<(u32, u32)>> {
    content_lines(path)?
        .into_iter()
        .map(|(line, text)| two_fields(path, line, &text))
        .collect()
}

pub fn write_labels(path: &Path, labels: &Labels) -> CliResult<()> {
    let mut w = create(path)?;
    for (node, label) in labels.as_slice().iter().enumerate() {
        writeln!(w, "{node}\t{label}").map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Reads a label file. Nodes must be exactly `0..n` (any order), where
/// `n - 1` is the largest node listed; the number of classes is the largest
/// label.
pub fn read_labels(path: &Path) -> CliResult<(Labels, usize)> {
    let rows: Vec<(usize, u32)> = content_lines(path)?
        .into_iter()
        .map(|(line, text)| two_fields(path, line, &text))
        .collect::<CliResult<_>>()?;
    let n = rows.iter().map(|&(node, _)| node + 1).max().unwrap_or(0);
    let mut values = vec![0u32; n];
    for &(node, label) in &rows {
        if values[node] != 0 {
            return Err(CliError::Invalid(format!(
                "{}: node {node} is labeled twice",
                path.display()
            )));
        }
        if label == 0 {
            return Err(CliError::Invalid(format!(
                "{}: node {node} has label 0; labels start at 1",
                path.display()
            )));
        }
        values[node] = label;
    }
    if let Some(node) = values.iter().position(|&l| l == 0) {
        return Err(CliError::Invalid(format!(
            "{}: no label for node {node}",
            path.display()
        )));
    }
    let k = values.iter().copied().max().unwrap_or(0) as usize;
    let labels = Labels::new(values, k)?;
    Ok((labels, k))
}

/// Formats `v` with 9 significant digits, plain notation for moderate
/// magnitudes and scientific otherwise.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{v:.8e}");
    let exp: i32 = sci[sci.find('e').expect("scientific") + 1..]
        .parse()
        .expect("exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        sci
    }
}

pub fn write_attributes(path: &Path, attributes: &Matrix) -> CliResult<()> {
    let mut w = create(path)?;
    let io = |e| CliError::io(path, e);
    write!(w, "node").map_err(io)?;
    for delta in 0..attributes.cols() {
        write!(w, ",a{delta}").map_err(io)?;
    }
    writeln!(w).map_err(io)?;
    for (node, row) in attributes.iter_rows().enumerate() {
        write!(w, "{node}").map_err(io)?;
        for &v in row {
            write!(w, ",{}", format_sig9(v)).map_err(io)?;
        }
        writeln!(w).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads an attribute CSV for `n` nodes; every node needs exactly one row.
pub fn read_attributes(path: &Path, n: usize) -> CliResult<Matrix> {
    let lines = content_lines(path)?;
    let Some((_, header)) = lines.first() else {
        return Err(parse_error(path, 1, "missing header"));
    };
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    if columns.first() != Some(&"node") {
        return Err(parse_error(path, 1, "header must start with 'node'"));
    }
    let d = columns.len() - 1;
    let mut values = Matrix::zeros(n, d);
    let mut seen = vec![false; n];
    for (line, text) in &lines[1..] {
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        if fields.len() != d + 1 {
            return Err(parse_error(
                path,
                *line,
                format!("expected {} fields, found {}", d + 1, fields.len()),
            ));
        }
        let node: usize = fields[0]
            .parse()
            .map_err(|_| parse_error(path, *line, format!("'{}' is not a node id", fields[0])))?;
        if node >= n || seen[node] {
            return Err(parse_error(
                path,
                *line,
                format!("node {node} is out of range or repeated"),
            ));
        }
        seen[node] = true;
        for (delta, f) in fields[1..].iter().enumerate() {
            let v: f64 = f
                .parse()
                .map_err(|_| parse_error(path, *line, format!("'{f}' is not a number")))?;
            values.set(node, delta, v);
        }
    }
    if let Some(node) = seen.iter().position(|&s| !s) {
        return Err(CliError::Invalid(format!(
            "{}: no attribute row for node {node}",
            path.display()
        )));
    }
    Ok(values)
}

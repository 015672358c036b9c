//! The `generate`, `reproduce`, and `measure` commands.

use std::path::Path;
use std::time::Instant;

use gencat_core::stats::{extract_params, losses_against, mean_deviation_losses};
use gencat_core::{generate, AttributedGraph, GenerationOutput, GeneratorConfig, Matrix};
use serde::Serialize;

use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};
use crate::io;
use crate::report::{
    estimate_generation_bytes, CommunityDelta, Comparison, GenerateReport, GenerationSummary,
    MeasureReport, Measurement, ReproduceReport, StageMillis,
};

pub const EDGES_FILE: &str = "edges.tsv";
pub const LABELS_FILE: &str = "labels.tsv";
pub const ATTRIBUTES_FILE: &str = "attributes.csv";
pub const REPORT_FILE: &str = "report.json";

/// A finished command: its JSON report and any warnings it raised.
#[derive(Debug)]
pub struct CommandOutput {
    pub report: serde_json::Value,
    pub warnings: Vec<String>,
}

fn to_json<T: Serialize>(report: &T) -> serde_json::Value {
    serde_json::to_value(report).expect("reports serialize")
}

fn summarize(cfg: &GeneratorConfig, out: &GenerationOutput) -> GenerationSummary {
    GenerationSummary {
        seed: cfg.seed,
        requested_nodes: cfg.n,
        requested_edges: cfg.m,
        realized_edges: out.graph.edge_count(),
        under_generation_gap: cfg.m as i64 - out.graph.edge_count() as i64,
        degree_mape: out.degree_mape(),
        degree_exponent: out.degree_exponent,
        edge_stats: out.edge_stats,
        class_adjustments: out.class_adjustments.clone(),
        attribute_adjustments: out.attribute_adjustments.clone(),
        clamped_entries: out.clamped_entries,
        constant_columns: out.constant_columns,
        stage_ms: StageMillis::from(&out.timings),
    }
}

/// Writes the graph files and the report into `dir`, creating it.
fn write_outputs(dir: &Path, graph: &AttributedGraph, report: &serde_json::Value) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    io::write_edges(&dir.join(EDGES_FILE), graph.edges())?;
    io::write_labels(&dir.join(LABELS_FILE), graph.labels())?;
    if graph.attribute_count() > 0 {
        io::write_attributes(&dir.join(ATTRIBUTES_FILE), graph.attributes())?;
    }
    let path = dir.join(REPORT_FILE);
    let text = serde_json::to_string_pretty(report).expect("reports serialize");
    std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))
}

/// Generates a graph from a config file. Nothing is written unless
/// generation succeeds.
pub fn cmd_generate(config: &Path, out_dir: &Path, seed: Option<u64>) -> CliResult<CommandOutput> {
    let clock = Instant::now();
    let cfg = ConfigFile::load(config)?.to_generator_config(seed)?;
    let out = generate(&cfg)?;
    let measured = Measurement::of(&out.graph)?;
    let target_losses =
        mean_deviation_losses(&cfg.class_pref_mean, &cfg.class_pref_dev, &out.graph)?;
    let mut warnings = out.warnings.clone();
    warnings.extend(measured.warnings());
    let report = GenerateReport {
        command: "generate",
        generation: summarize(&cfg, &out),
        target_losses,
        measured,
        wall_time_ms: clock.elapsed().as_secs_f64() * 1e3,
        peak_memory_bytes_estimate: estimate_generation_bytes(cfg.n, cfg.m, cfg.k, cfg.d),
        warnings: warnings.clone(),
    };
    let report = to_json(&report);
    write_outputs(out_dir, &out.graph, &report)?;
    Ok(CommandOutput { report, warnings })
}

/// Reads an edge list and label file (plus optional attributes) into a
/// graph. Every node in the edge list needs a label.
pub fn load_graph(graph: &Path, labels: &Path, attrs: Option<&Path>) -> CliResult<AttributedGraph> {
    let (labels, k) = io::read_labels(labels)?;
    let n = labels.len();
    let edges = io::read_edges(graph)?;
    if let Some(&(i, j)) = edges
        .iter()
        .find(|&&(i, j)| i as usize >= n || j as usize >= n)
    {
        let node = if i as usize >= n { i } else { j };
        return Err(CliError::Invalid(format!(
            "node {node} appears in the edge list but has no label"
        )));
    }
    let attributes = match attrs {
        Some(path) => io::read_attributes(path, n)?,
        None => Matrix::zeros(n, 0),
    };
    Ok(AttributedGraph::new(n, k, edges, attributes, labels)?)
}

/// Extracts the class structure of a labeled graph and generates a new one,
/// optionally at another size. With only `nodes` given, the edge count
/// scales with it (same mean degree); with only `edges`, `n` is kept.
pub fn cmd_reproduce(
    graph: &Path,
    labels: &Path,
    out_dir: &Path,
    nodes: Option<usize>,
    edges: Option<usize>,
    seed: u64,
) -> CliResult<CommandOutput> {
    let clock = Instant::now();
    let input_graph = load_graph(graph, labels, None)?;
    let input = Measurement::of(&input_graph)?;
    let mut params = extract_params(&input_graph)?;
    let rescaled = nodes.is_some() || edges.is_some();
    if rescaled {
        let new_n = nodes.unwrap_or(params.n);
        let new_m = edges
            .unwrap_or_else(|| (params.m as f64 * new_n as f64 / params.n as f64).round() as usize);
        params = params.rescale(new_n, new_m)?;
    }
    let cfg = params.to_config(seed);
    let out = generate(&cfg)?;
    let output = Measurement::of(&out.graph)?;

    let (fi, fo) = (&input.class_features, &output.class_features);
    let losses = losses_against(&fi.mean, &fi.deviation, &fo.mean, &fo.deviation);
    let comparison = Comparison {
        mse_mean: losses.mean_mse,
        mse_deviation: losses.deviation_mse,
        losses,
        community_delta: CommunityDelta::between(&input.community, &output.community),
    };
    let mut warnings = out.warnings.clone();
    for &l in &params.substituted_rows {
        warnings.push(format!(
            "class {l} has no edges in the input; it was generated with a uniform preference row"
        ));
    }
    warnings.extend(output.warnings());
    let report = ReproduceReport {
        command: "reproduce",
        input,
        rescaled,
        substituted_rows: params.substituted_rows.clone(),
        generation: summarize(&cfg, &out),
        output,
        comparison,
        wall_time_ms: clock.elapsed().as_secs_f64() * 1e3,
        peak_memory_bytes_estimate: estimate_generation_bytes(cfg.n, cfg.m, cfg.k, 0)
            + estimate_generation_bytes(input_graph.node_count(), input_graph.edge_count(), 0, 0),
        warnings: warnings.clone(),
    };
    let report = to_json(&report);
    write_outputs(out_dir, &out.graph, &report)?;
    Ok(CommandOutput { report, warnings })
}

/// Measures class features and community statistics of a labeled graph.
pub fn cmd_measure(graph: &Path, labels: &Path, attrs: Option<&Path>) -> CliResult<CommandOutput> {
    let g = load_graph(graph, labels, attrs)?;
    let measured = Measurement::of(&g)?;
    let warnings = measured.warnings();
    let report = MeasureReport {
        command: "measure",
        measured,
        warnings: warnings.clone(),
    };
    Ok(CommandOutput {
        report: to_json(&report),
        warnings,
    })
}

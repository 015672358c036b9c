//! JSON reports. Every field is always present (undefined values are
//! `null`), so reports of the same command share one schema.

use gencat_core::adjust::{AttributeAdjustment, ClassAdjustment};
use gencat_core::edges::EdgeGenStats;
use gencat_core::stats::{
    community_stats, measure_class_features, CommunityStats, MeanDeviationLosses,
};
use gencat_core::{AttributedGraph, ClassFeatureReport, StageTimings};
use serde::Serialize;

use crate::error::CliResult;

/// Seed for the sampled path length of large graphs.
pub const STATS_SEED: u64 = 0;

/// Everything measured on one graph.
#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub nodes: usize,
    pub edges: usize,
    pub classes: usize,
    pub attributes: usize,
    pub class_features: ClassFeatureReport,
    pub community: CommunityStats,
}

impl Measurement {
    pub fn of(graph: &AttributedGraph) -> CliResult<Self> {
        Ok(Measurement {
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            classes: graph.class_count(),
            attributes: graph.attribute_count(),
            class_features: measure_class_features(graph)?,
            community: community_stats(graph, STATS_SEED),
        })
    }

    /// Warnings about rows that could not be measured.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.edges == 0 {
            out.push("the graph has no edges".to_string());
        }
        for &l in &self.class_features.undefined_rows {
            out.push(format!(
                "every node of class {l} is isolated; its class preference rows are undefined"
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageMillis {
    pub latent: f64,
    pub adjust: f64,
    pub degrees: f64,
    pub edges: f64,
    pub attributes: f64,
}

impl From<&StageTimings> for StageMillis {
    fn from(t: &StageTimings) -> Self {
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        StageMillis {
            latent: ms(t.latent),
            adjust: ms(t.adjust),
            degrees: ms(t.degrees),
            edges: ms(t.edges),
            attributes: ms(t.attributes),
        }
    }
}

/// Generation results shared by `generate` and `reproduce`.
#[derive(Debug, Clone, Serialize)]
pub struct GenerationSummary {
    pub seed: u64,
    pub requested_nodes: usize,
    pub requested_edges: usize,
    pub realized_edges: usize,
    /// `m - |S|`; positive when fewer edges were generated than requested.
    pub under_generation_gap: i64,
    pub degree_mape: f64,
    pub degree_exponent: Option<f64>,
    pub edge_stats: EdgeGenStats,
    pub class_adjustments: Vec<ClassAdjustment>,
    pub attribute_adjustments: Vec<AttributeAdjustment>,
    pub clamped_entries: usize,
    pub constant_columns: usize,
    pub stage_ms: StageMillis,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerateReport {
    pub command: &'static str,
    pub generation: GenerationSummary,
    /// Measured class preference against the requested `M` and `D`; the
    /// per-class mean losses are the achieved `L_mean` of each class.
    pub target_losses: MeanDeviationLosses,
    pub measured: Measurement,
    pub wall_time_ms: f64,
    pub peak_memory_bytes_estimate: u64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommunityDelta {
    pub intra_density: f64,
    pub inter_density: f64,
    pub components: i64,
    pub largest_component: i64,
    pub characteristic_path_length: f64,
}

impl CommunityDelta {
    /// `output - input` for each statistic.
    pub fn between(input: &CommunityStats, output: &CommunityStats) -> Self {
        CommunityDelta {
            intra_density: output.intra_density - input.intra_density,
            inter_density: output.inter_density - input.inter_density,
            components: output.components as i64 - input.components as i64,
            largest_component: output.largest_component as i64 - input.largest_component as i64,
            characteristic_path_length: output.characteristic_path_length
                - input.characteristic_path_length,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub mse_mean: f64,
    pub mse_deviation: f64,
    /// Output class preference against the input's.
    pub losses: MeanDeviationLosses,
    pub community_delta: CommunityDelta,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceReport {
    pub command: &'static str,
    pub input: Measurement,
    pub rescaled: bool,
    /// 1-based classes whose input rows were undefined and replaced by
    /// uniform rows before generating.
    pub substituted_rows: Vec<usize>,
    pub generation: GenerationSummary,
    pub output: Measurement,
    pub comparison: Comparison,
    pub wall_time_ms: f64,
    pub peak_memory_bytes_estimate: u64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub command: &'static str,
    pub measured: Measurement,
    pub warnings: Vec<String>,
}

/// Rough size of the main buffers of one generation run: latent factors,
/// sampler tables, degree plan, edge bookkeeping, edges, and attributes.
pub fn estimate_generation_bytes(n: usize, m: usize, k: usize, d: usize) -> u64 {
    let (n, m, k, d) = (n as u64, m as u64, k as u64, d as u64);
    let latent = 2 * n * k * 8 + d * k * 8;
    let tables = k * ((n + 1) * 8 + n * 4);
    let plan = 2 * n * 4;
    let bookkeeping = 2 * m * 4 + (n + 1) * 8 + n * 4;
    let edges = m * 8;
    let attributes = 2 * n * d * 8;
    let labels = n * 4;
    latent + tables + plan + bookkeeping + edges + attributes + labels
}

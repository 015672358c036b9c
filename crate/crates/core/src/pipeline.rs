//! The full generator: labels, latent factors, adjustment, edges, and
//! attributes, in that order.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::adjust::{
    adjust_attributes, adjust_membership, class_mean_membership, AttributeAdjustment,
    ClassAdjustment,
};
use crate::attributes::{apply_bernoulli, apply_normal, base_attributes};
use crate::edges::{
    build_degree_plan, degree_mape, degree_plan_from_list, fit_degree_exponent, generate_edges,
    EdgeGenStats,
};
use crate::error::Result;
use crate::latent::{
    assign_labels, derive_connection_proportions, exponent_is_atypical, init_attr_proportions,
    init_membership, sample_class_sizes, stratify_labels,
};
use crate::model::{
    validate_config, AttrDist, AttributedGraph, ClassSizeDistribution, ClassSizeMode, DegreePlan,
    DegreeSpec, GeneratorConfig, LabelPlacement, LatentFactors, Matrix,
};
use crate::rng::{stream_rng, Stream};

/// Warn when edges (or the degree plan) fall below this fraction of their
/// target.
pub const UNDER_GENERATION_WARN: f64 = 0.95;

/// Wall time per stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StageTimings {
    pub latent: Duration,
    pub adjust: Duration,
    pub degrees: Duration,
    pub edges: Duration,
    pub attributes: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.latent + self.adjust + self.degrees + self.edges + self.attributes
    }
}

/// Everything produced by one run of [`generate`].
#[derive(Debug, Clone)]
pub struct GenerationOutput {
    pub graph: AttributedGraph,
    pub factors: LatentFactors,
    pub class_sizes: ClassSizeDistribution,
    /// Expected and realized degrees, indexed by node id.
    pub plan: DegreePlan,
    /// Fitted exponent when degrees come from the power law.
    pub degree_exponent: Option<f64>,
    pub class_adjustments: Vec<ClassAdjustment>,
    pub attribute_adjustments: Vec<AttributeAdjustment>,
    pub edge_stats: EdgeGenStats,
    /// Bernoulli mode: base entries clamped into [0, 1].
    pub clamped_entries: usize,
    /// Normal mode: attribute columns that were constant after noise.
    pub constant_columns: usize,
    pub timings: StageTimings,
    pub warnings: Vec<String>,
}

impl GenerationOutput {
    /// Degree MAPE over nodes with positive expected degree.
    pub fn degree_mape(&self) -> f64 {
        let (expected, actual): (Vec<u32>, Vec<u32>) = self
            .plan
            .expected()
            .iter()
            .zip(self.plan.actual())
            .filter(|(e, _)| **e > 0)
            .map(|(&e, &a)| (e, a))
            .unzip();
        if expected.is_empty() {
            return 0.0;
        }
        degree_mape(&expected, &actual).expect("expected degrees are positive")
    }
}

/// Generates one attributed graph. Every random draw comes from a stream of
/// `cfg.seed`, so the output is a function of `cfg` alone.
pub fn generate(cfg: &GeneratorConfig) -> Result<GenerationOutput> {
    validate_config(cfg)?;
    let seed = cfg.seed;
    let k = cfg.k;
    let mut timings = StageTimings::default();
    let mut warnings = Vec::new();

    let clock = Instant::now();
    if let ClassSizeMode::PowerLaw { exponent } = cfg.class_sizes {
        if exponent_is_atypical(exponent) {
            warnings.push(format!(
                "class size exponent {exponent} is outside the typical range [1, 2]"
            ));
        }
    }
    let class_sizes = sample_class_sizes(
        &cfg.class_sizes,
        k,
        &mut stream_rng(seed, Stream::ClassSizes),
    )?;
    let mut label_rng = stream_rng(seed, Stream::Labels);
    let mut labels = assign_labels(&class_sizes, cfg.n, &mut label_rng)?;
    if cfg.label_placement == LabelPlacement::Stratified {
        labels = stratify_labels(&labels, k, &mut label_rng);
    }
    let mut membership = init_membership(
        &labels,
        &cfg.class_pref_mean,
        &cfg.class_pref_dev,
        &mut stream_rng(seed, Stream::Membership),
    )?;
    let mut connection = derive_connection_proportions(&membership, &labels, &cfg.class_pref_mean)?;
    let mut attr_proportions = init_attr_proportions(&cfg.attr_class_corr);
    timings.latent = clock.elapsed();

    let clock = Instant::now();
    let mut class_adjustments = Vec::new();
    let mut attribute_adjustments = Vec::new();
    if cfg.adjust {
        class_adjustments = adjust_membership(
            &mut membership,
            &mut connection,
            &labels,
            &cfg.class_pref_mean,
        )?;
        if cfg.d > 0 {
            let p = class_mean_membership(&membership, &labels, k)?;
            attribute_adjustments =
                adjust_attributes(&mut attr_proportions, &p, &cfg.attr_class_corr)?;
        }
    }
    timings.adjust = clock.elapsed();

    let clock = Instant::now();
    let (mut plan, degree_exponent) = match &cfg.degrees {
        DegreeSpec::PowerLaw => {
            let phi = fit_degree_exponent(cfg.n, cfg.m)?;
            (build_degree_plan(cfg.n, phi, cfg.m), Some(phi))
        }
        DegreeSpec::Explicit { degrees } => (degree_plan_from_list(degrees), None),
    };
    let planned = plan.expected_sum() as f64 / 2.0;
    if matches!(cfg.degrees, DegreeSpec::PowerLaw) && planned < UNDER_GENERATION_WARN * cfg.m as f64
    {
        warnings.push(format!(
            "the degree plan carries {planned} edges, short of the budget m = {}",
            cfg.m
        ));
    }
    timings.degrees = clock.elapsed();

    let clock = Instant::now();
    let (edges, edge_stats) = generate_edges(
        &membership,
        &connection,
        &mut plan,
        cfg.max_rounds,
        cfg.target_selection,
        &mut stream_rng(seed, Stream::Edges),
    )?;
    timings.edges = clock.elapsed();
    // a small shortfall is normal; only a large one is worth a warning
    let target_edges = (plan.expected_sum() / 2) as usize;
    if (edges.len() as f64) < UNDER_GENERATION_WARN * target_edges as f64 {
        warnings.push(format!(
            "generated {} of {} planned edges",
            edges.len(),
            target_edges
        ));
    }

    let clock = Instant::now();
    let (mut clamped_entries, mut constant_columns) = (0, 0);
    let attributes = if cfg.d == 0 {
        Matrix::zeros(cfg.n, 0)
    } else {
        let base = base_attributes(&membership, &attr_proportions)?;
        match cfg.attr_dist {
            AttrDist::Normal => {
                let out = apply_normal(&base, cfg.omega, seed)?;
                constant_columns = out.constant_columns;
                out.values
            }
            AttrDist::Bernoulli => {
                let out = apply_bernoulli(&base, seed);
                clamped_entries = out.clamped_entries;
                out.values
            }
        }
    };
    timings.attributes = clock.elapsed();
    if constant_columns > 0 {
        warnings.push(format!(
            "{constant_columns} attribute column(s) were constant and set to 0.5"
        ));
    }
    if clamped_entries > 0 {
        warnings.push(format!(
            "{clamped_entries} attribute probabilities were clamped to [0, 1]"
        ));
    }

    let graph = AttributedGraph::new(cfg.n, k, edges, attributes, labels)?;
    Ok(GenerationOutput {
        graph,
        factors: LatentFactors {
            membership,
            connection,
            attr_proportions,
        },
        class_sizes,
        plan,
        degree_exponent,
        class_adjustments,
        attribute_adjustments,
        edge_stats,
        clamped_entries,
        constant_columns,
        timings,
        warnings,
    })
}

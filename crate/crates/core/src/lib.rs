//! Generator for attributed graphs with controllable class structure.
//!
//! Given a class preference mean `M` and deviation `D` (how nodes of each
//! class spread their edges over classes), an attribute-class correlation
//! `H`, class sizes and an edge budget, [`generate`] produces a labeled
//! graph whose measured statistics follow the inputs. The [`stats`] module
//! measures the same quantities on any labeled graph, so the generator can
//! also reproduce an existing graph at a different size.
//!
//! ```
//! use gencat_core::{generate, presets::lfr_preset, GeneratorConfig};
//!
//! let p = lfr_preset(3, 0.8).unwrap();
//! let cfg = GeneratorConfig::new(500, 2000, p.class_pref_mean, p.class_pref_dev).with_seed(1);
//! let out = generate(&cfg).unwrap();
//! assert!(out.graph.edge_count() <= 2000);
//! ```

// `!(x > 0.0)` is used on purpose so NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adjust;
pub mod attributes;
pub mod edges;
pub mod error;
pub mod latent;
pub mod model;
pub mod pipeline;
pub mod presets;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use model::{
    AttrDist, AttributedGraph, ClassFeatureReport, ClassSizeDistribution, ClassSizeMode,
    DegreePlan, DegreeSpec, GeneratorConfig, LabelPlacement, Labels, LatentFactors, Matrix,
    TargetSelection,
};
pub use pipeline::{generate, GenerationOutput, StageTimings};

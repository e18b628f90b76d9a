//! Exact AUROC and AUPRC, mistake-level analysis of ranking errors, synthetic
//! score sets with a target AUROC, metric-greedy optimization over groups,
//! and the statistics used to compare the two metrics' effect on subgroup
//! disparities.
//!
//! ```
//! use auclab_core::metrics::{auprc, auroc, ScoreSet};
//!
//! let s = ScoreSet::from_binary(&[0.1, 0.4, 0.35, 0.8], &[0, 0, 1, 1]).unwrap();
//! assert_eq!(auroc(&s).unwrap(), 0.75);
//! assert!((auprc(&s).unwrap() - 5.0 / 6.0).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod error;
pub mod exec;
pub mod io;
pub mod metrics;
pub mod mistakes;
pub mod optimizer;
pub mod synthgen;

pub use error::{Error, Result};
pub use exec::Execution;
pub use metrics::{Metric, ScoreSet};

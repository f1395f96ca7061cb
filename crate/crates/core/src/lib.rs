//! Design metrics for Java interfaces.
//!
//! A [`CodeModel`] of classes and interfaces is built from Java sources
//! ([`java::scan_paths`]) or from the neutral JSON model ([`model_json`]).
//! On top of it:
//!
//! * [`similarity`]: IS, IIS, IC and IIC, measuring how much interfaces
//!   redeclare each other's methods;
//! * [`hierarchy`]: multiset sub-hierarchies and IRIH, measuring repeated
//!   sub-typing toward an interface, plus the redundant edges themselves;
//! * [`report`]: findings, refactoring suggestions, corpus statistics and CSV
//!   datasets;
//! * [`analysis`]: the whole pipeline and its JSON report.

pub mod analysis;
pub mod hierarchy;
pub mod java;
pub mod model;
pub mod model_json;
pub mod report;
pub mod signature;
pub mod similarity;

pub use analysis::{analyze, Analysis, AnalysisConfig, Report};
pub use model::{CodeModel, ExclusionPolicy, ModelError, TypeDecl, TypeFlags, TypeKind, TypeName};
pub use signature::{normalize_signature, signature_key, MethodSignature, NormalizeError};

use thiserror::Error;

/// Any failure of the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Scan(#[from] java::ScanError),
    #[error(transparent)]
    ModelJson(#[from] model_json::ModelJsonError),
    #[error(transparent)]
    Similarity(#[from] similarity::SimilarityError),
    #[error(transparent)]
    Hierarchy(#[from] hierarchy::HierarchyError),
    #[error(transparent)]
    Report(#[from] report::ReportError),
}

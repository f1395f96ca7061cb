//! Filter, measure and report in one pass.

use serde::Serialize;

use crate::hierarchy::{hierarchy_report, HierarchyReport};
use crate::model::{CodeModel, ExclusionPolicy, ExclusionReason, TypeName};
use crate::report::{
    corpus_stats, detect_findings, hierarchy_csv, similarity_csv, suggest, validate_threshold, CorpusStats, Finding,
    Suggestion, DEFAULT_THRESHOLD,
};
use crate::similarity::{similarity_pairs, similarity_report, PairScore, SimilarityReport};
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub threshold: f64,
    pub policy: ExclusionPolicy,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            policy: ExclusionPolicy::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    /// The filtered model the metrics were computed on.
    pub model: CodeModel,
    pub threshold: f64,
    pub similarity: SimilarityReport,
    pub hierarchy: HierarchyReport,
    /// Pairs with IS at or above the threshold.
    pub pairs: Vec<PairScore>,
    pub findings: Vec<Finding>,
    pub suggestions: Vec<Suggestion>,
    pub stats: CorpusStats,
}

pub fn analyze(model: &CodeModel, config: &AnalysisConfig) -> Result<Analysis, Error> {
    let threshold = validate_threshold(config.threshold)?;
    let model = model.filter(&config.policy);
    let similarity = similarity_report(&model);
    let hierarchy = hierarchy_report(&model)?;
    let pairs = similarity_pairs(&model, threshold)?;
    let findings = detect_findings(&model, &similarity, &hierarchy, threshold)?;
    let suggestions = suggest(&findings, &model);
    let stats = corpus_stats(&model);
    Ok(Analysis {
        model,
        threshold,
        similarity,
        hierarchy,
        pairs,
        findings,
        suggestions,
        stats,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportStats {
    #[serde(flatten)]
    pub corpus: CorpusStats,
    pub system_iis: f64,
    pub system_iic: f64,
    /// Mean IRIH over interfaces with a non-empty sub-hierarchy.
    pub system_irih: f64,
    pub threshold: f64,
    pub excluded_external: usize,
    pub excluded_marker: usize,
    pub excluded_test: usize,
    pub unresolved_supertypes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterfaceRow {
    pub name: TypeName,
    pub size: usize,
    pub iis: f64,
    pub iic: f64,
    pub irih: f64,
    pub subh_size: u64,
    pub iis_partner: Option<TypeName>,
    pub iic_partner: Option<TypeName>,
}

/// The serialized analysis report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub stats: ReportStats,
    pub interfaces: Vec<InterfaceRow>,
    pub pairs: Vec<PairScore>,
    pub findings: Vec<Finding>,
    pub suggestions: Vec<Suggestion>,
}

impl Analysis {
    pub fn report(&self) -> Report {
        let excluded = |reason| self.model.exclusions().iter().filter(|e| e.reason == reason).count();
        let interfaces = self
            .similarity
            .per_interface
            .iter()
            .map(|(name, sim)| {
                let hier = self.hierarchy.per_interface.get(name);
                InterfaceRow {
                    name: name.clone(),
                    size: sim.size,
                    iis: sim.iis,
                    iic: sim.iic,
                    irih: hier.map_or(0.0, |h| h.irih),
                    subh_size: hier.map_or(0, |h| h.subh_size),
                    iis_partner: sim.iis_partner.clone(),
                    iic_partner: sim.iic_partner.clone(),
                }
            })
            .collect();
        Report {
            stats: ReportStats {
                corpus: self.stats.clone(),
                system_iis: self.similarity.system_iis,
                system_iic: self.similarity.system_iic,
                system_irih: self.hierarchy.system_irih,
                threshold: self.threshold,
                excluded_external: excluded(ExclusionReason::External),
                excluded_marker: excluded(ExclusionReason::Marker),
                excluded_test: excluded(ExclusionReason::Test),
                unresolved_supertypes: self.model.unresolved().len(),
            },
            interfaces,
            pairs: self.pairs.clone(),
            findings: self.findings.clone(),
            suggestions: self.suggestions.clone(),
        }
    }

    pub fn report_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.report()).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn similarity_csv(&self) -> String {
        similarity_csv(&self.similarity)
    }

    pub fn hierarchy_csv(&self) -> String {
        hierarchy_csv(&self.hierarchy)
    }
}

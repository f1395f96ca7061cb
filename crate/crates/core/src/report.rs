//! Findings, refactoring suggestions, corpus statistics and plot datasets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::hierarchy::HierarchyReport;
use crate::model::{CodeModel, TypeName};
use crate::similarity::{partners, shared_keys, SimilarityReport};

/// Critical IIS/IIC value; interfaces strictly above it are suspects.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    SuspectSimilarity,
    SuspectClone,
    IdenticalInterfaces,
    FullClone,
    RedundantEdge,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FindingKind::SuspectSimilarity => "suspect-similarity",
            FindingKind::SuspectClone => "suspect-clone",
            FindingKind::IdenticalInterfaces => "identical-interfaces",
            FindingKind::FullClone => "full-clone",
            FindingKind::RedundantEdge => "redundant-edge",
        })
    }
}

/// One detected anomaly.
///
/// `subjects` is ordered by role: suspect findings list the interface then its
/// argmax partner, full clones list the contained interface then the
/// container, redundant edges list the subtype then the interface. Evidence is
/// the shared signature keys, or the witness path for redundant edges, whose
/// score is always 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub subjects: Vec<TypeName>,
    pub score: f64,
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuggestionAction {
    MergeInterfaces,
    ExtractSubInterface,
    RemoveRedundantEdge,
}

impl fmt::Display for SuggestionAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuggestionAction::MergeInterfaces => "merge-interfaces",
            SuggestionAction::ExtractSubInterface => "extract-sub-interface",
            SuggestionAction::RemoveRedundantEdge => "remove-redundant-edge",
        })
    }
}

/// A proposed refactoring.
///
/// * merge: `[kept, removed]`; dependents of `removed` move to `kept`.
/// * extract: `[super, container]`; `container` extends `super` and drops the
///   declarations it duplicates.
/// * remove: `[subtype, interface]`; the explicit edge is deleted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Suggestion {
    pub action: SuggestionAction,
    pub subjects: Vec<TypeName>,
    pub rationale: String,
}

/// Counts over a filtered model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub class_count: usize,
    pub interface_count: usize,
    /// Fraction of classes with at least one resolved interface among their
    /// direct supertypes.
    pub pct_classes_implementing: f64,
    pub size_min: Option<usize>,
    pub size_max: Option<usize>,
    pub size_sum: usize,
}

impl CorpusStats {
    pub const TABLE_HEADER: &'static str = "System\t|C|\t|I|\t|C_I|%\tmin\tmax\tsum";

    /// One tab-separated row in the layout of [`Self::TABLE_HEADER`].
    pub fn table_row(&self, system: &str) -> String {
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        format!(
            "{system}\t{}\t{}\t{:.0}%\t{}\t{}\t{}",
            self.class_count,
            self.interface_count,
            self.pct_classes_implementing * 100.0,
            opt(self.size_min),
            opt(self.size_max),
            self.size_sum
        )
    }
}

pub fn corpus_stats(model: &CodeModel) -> CorpusStats {
    let mut class_count = 0;
    let mut implementing = 0;
    for class in model.classes() {
        class_count += 1;
        if model
            .direct_supertypes(&class.name)
            .iter()
            .any(|s| model.get(s).is_some_and(|d| d.is_interface()))
        {
            implementing += 1;
        }
    }
    let sizes: Vec<usize> = model.interfaces().map(|d| d.size()).collect();
    CorpusStats {
        class_count,
        interface_count: sizes.len(),
        pct_classes_implementing: if class_count == 0 {
            0.0
        } else {
            implementing as f64 / class_count as f64
        },
        size_min: sizes.iter().copied().min(),
        size_max: sizes.iter().copied().max(),
        size_sum: sizes.iter().sum(),
    }
}

pub fn validate_threshold(threshold: f64) -> Result<f64, ReportError> {
    if (0.0..=1.0).contains(&threshold) {
        Ok(threshold)
    } else {
        Err(ReportError::InvalidThreshold(threshold))
    }
}

/// Turns metric tables into findings, ordered by kind, score (descending) and
/// subject names.
pub fn detect_findings(
    model: &CodeModel,
    similarity: &SimilarityReport,
    hierarchy: &HierarchyReport,
    threshold: f64,
) -> Result<Vec<Finding>, ReportError> {
    validate_threshold(threshold)?;
    let mut findings = Vec::new();
    let evidence = |a: &TypeName, b: &TypeName| shared_keys(model, a, b).expect("interfaces from the same model");

    for (name, row) in &similarity.per_interface {
        if row.iis > threshold {
            if let Some(partner) = &row.iis_partner {
                findings.push(Finding {
                    kind: FindingKind::SuspectSimilarity,
                    subjects: vec![name.clone(), partner.clone()],
                    score: row.iis,
                    evidence: evidence(name, partner),
                });
            }
        }
        if row.iic > threshold {
            if let Some(partner) = &row.iic_partner {
                findings.push(Finding {
                    kind: FindingKind::SuspectClone,
                    subjects: vec![name.clone(), partner.clone()],
                    score: row.iic,
                    evidence: evidence(name, partner),
                });
            }
        }
        for pair in partners(model, name).expect("interfaces from the same model") {
            if pair.is == 1.0 {
                if pair.a < pair.b {
                    findings.push(Finding {
                        kind: FindingKind::IdenticalInterfaces,
                        subjects: vec![pair.a.clone(), pair.b.clone()],
                        score: 1.0,
                        evidence: evidence(&pair.a, &pair.b),
                    });
                }
            } else if pair.ic_ab == 1.0 {
                findings.push(Finding {
                    kind: FindingKind::FullClone,
                    subjects: vec![pair.a.clone(), pair.b.clone()],
                    score: 1.0,
                    evidence: evidence(&pair.a, &pair.b),
                });
            }
        }
    }
    for edge in &hierarchy.redundant_edges {
        findings.push(Finding {
            kind: FindingKind::RedundantEdge,
            subjects: vec![edge.subtype.clone(), edge.interface.clone()],
            score: 1.0,
            evidence: edge.witness.iter().map(ToString::to_string).collect(),
        });
    }
    findings.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then_with(|| b.score.total_cmp(&a.score))
            .then_with(|| a.subjects.cmp(&b.subjects))
    });
    Ok(findings)
}

/// Derives refactoring suggestions from findings.
///
/// Identical interfaces are merged into the lexicographically smallest member
/// of their group, provided their inherited contracts agree too. Each
/// container of fully cloned interfaces is asked to extend the maximal ones
/// (after merges) instead of redeclaring their methods, unless that would add
/// inherited methods to the container or close a cycle. Redundant edges are
/// proposed for removal.
pub fn suggest(findings: &[Finding], model: &CodeModel) -> Vec<Suggestion> {
    let mut out = Vec::new();

    // identical groups: union-find keyed by name, representative = smallest
    let mut rep: BTreeMap<TypeName, TypeName> = BTreeMap::new();
    fn find(rep: &BTreeMap<TypeName, TypeName>, x: &TypeName) -> TypeName {
        let mut cur = x.clone();
        while let Some(next) = rep.get(&cur) {
            if *next == cur {
                break;
            }
            cur = next.clone();
        }
        cur
    }
    for f in findings.iter().filter(|f| f.kind == FindingKind::IdenticalInterfaces) {
        // same declarations but different inherited contracts: merging would widen one of them
        if model.visible_signatures(&f.subjects[0]) != model.visible_signatures(&f.subjects[1]) {
            continue;
        }
        let a = find(&rep, &f.subjects[0]);
        let b = find(&rep, &f.subjects[1]);
        let (keep, drop) = if a <= b { (a, b) } else { (b, a) };
        rep.insert(keep.clone(), keep.clone());
        rep.insert(drop, keep);
    }
    let mut groups: BTreeMap<TypeName, BTreeSet<TypeName>> = BTreeMap::new();
    for name in rep.keys() {
        let root = find(&rep, name);
        if root != *name {
            groups.entry(root).or_default().insert(name.clone());
        }
    }
    for (keep, drops) in &groups {
        for drop in drops {
            out.push(Suggestion {
                action: SuggestionAction::MergeInterfaces,
                subjects: vec![keep.clone(), drop.clone()],
                rationale: format!(
                    "`{drop}` declares exactly the same methods as `{keep}`: replace it by `{keep}`, \
                     retarget its implementors and clients, then delete it"
                ),
            });
        }
    }

    // container -> contained interfaces (after merging)
    let mut contained_by: BTreeMap<TypeName, BTreeSet<TypeName>> = BTreeMap::new();
    for f in findings.iter().filter(|f| f.kind == FindingKind::FullClone) {
        let small = find(&rep, &f.subjects[0]);
        let container = find(&rep, &f.subjects[1]);
        if small != container {
            contained_by.entry(container).or_default().insert(small);
        }
    }
    let size = |n: &TypeName| model.get(n).map_or(0, |d| d.size());
    for (container, candidates) in &contained_by {
        // extending must neither add inherited methods to the container nor close a cycle
        let visible = model.visible_signatures(container);
        let candidates: BTreeSet<&TypeName> = candidates
            .iter()
            .filter(|c| !model.is_subtype_of(c, container) && model.visible_signatures(c).is_subset(&visible))
            .collect();
        // keep only maximal candidates: drop any that another candidate contains
        let maximal: Vec<&TypeName> = candidates
            .iter()
            .copied()
            .filter(|c| {
                !candidates.iter().any(|other| {
                    *other != *c
                        && size(other) > size(c)
                        && model.get(c).zip(model.get(other)).is_some_and(|(dc, doth)| dc.signatures.is_subset(&doth.signatures))
                })
            })
            .collect();
        for sup in maximal {
            let already = model.is_subtype_of(container, sup);
            let mut rationale = format!(
                "all {} methods of `{sup}` are redeclared in `{container}`: make `{container}` extend `{sup}` \
                 and delete the duplicated declarations",
                size(sup)
            );
            if already {
                rationale.push_str(&format!(" (`{container}` already inherits from `{sup}`; only the deletions remain)"));
            } else {
                rationale.push_str(
                    "; alternatively, when the two contracts should stay unrelated, only delete the duplicates \
                     from the interface with fewer clients",
                );
            }
            out.push(Suggestion {
                action: SuggestionAction::ExtractSubInterface,
                subjects: vec![sup.clone(), container.clone()],
                rationale,
            });
        }
    }

    for f in findings.iter().filter(|f| f.kind == FindingKind::RedundantEdge) {
        let path = f.evidence.join(" -> ");
        out.push(Suggestion {
            action: SuggestionAction::RemoveRedundantEdge,
            subjects: f.subjects.clone(),
            rationale: format!(
                "`{}` already inherits `{}` through {path}; the explicit declaration is a repeated dependency",
                f.subjects[0], f.subjects[1]
            ),
        });
    }
    out
}

/// `name,size,iis,iic`, one row per interface, by size ascending then name.
pub fn similarity_csv(similarity: &SimilarityReport) -> String {
    let mut rows: Vec<_> = similarity.per_interface.iter().collect();
    rows.sort_by(|a, b| a.1.size.cmp(&b.1.size).then_with(|| a.0.cmp(b.0)));
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["name", "size", "iis", "iic"]).expect("in-memory write");
    for (name, row) in rows {
        writer
            .write_record([name.to_string(), row.size.to_string(), row.iis.to_string(), row.iic.to_string()])
            .expect("in-memory write");
    }
    into_string(writer)
}

/// `name,subh,irih`, one row per interface, by sub-hierarchy size ascending
/// then name.
pub fn hierarchy_csv(hierarchy: &HierarchyReport) -> String {
    let mut rows: Vec<_> = hierarchy.per_interface.iter().collect();
    rows.sort_by(|a, b| a.1.subh_size.cmp(&b.1.subh_size).then_with(|| a.0.cmp(b.0)));
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["name", "subh", "irih"]).expect("in-memory write");
    for (name, row) in rows {
        writer
            .write_record([name.to_string(), row.subh_size.to_string(), row.irih.to_string()])
            .expect("in-memory write");
    }
    into_string(writer)
}

fn into_string(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("csv of utf-8 fields")
}

//! Interface similarity (IS/IIS) and interface clone (IC/IIC) metrics.
//!
//! For interfaces `a` and `b` with declared signature sets `A` and `B`:
//!
//! * `IS(a, b) = |A ∩ B| / |A ∪ B|`, 0 if either set is empty.
//! * `IC(a, b) = |A ∩ B| / |A|`, 0 if either set is empty. Not symmetric.
//! * `semi(i)` is every other interface with `IS(i, x) > 0`.
//! * `IIS(i)` / `IIC(i)` are the maxima of `IS(i, x)` / `IC(i, x)` over
//!   `semi(i)`, 0 when it is empty; the system values are their means over all
//!   interfaces in the model.
//!
//! Partners are found through the model's signature index, so the work is
//! proportional to actual signature collisions rather than to all pairs.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{CodeModel, ModelError, TypeDecl, TypeName};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimilarityError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("minimum similarity {0} outside [0, 1]")]
    InvalidMinimum(f64),
}

/// Overlap between two interfaces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairScore {
    pub a: TypeName,
    pub b: TypeName,
    pub shared: usize,
    #[serde(rename = "union")]
    pub union_size: usize,
    pub is: f64,
    pub ic_ab: f64,
    pub ic_ba: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterfaceSimilarity {
    pub size: usize,
    pub iis: f64,
    pub iic: f64,
    pub iis_partner: Option<TypeName>,
    pub iic_partner: Option<TypeName>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub per_interface: BTreeMap<TypeName, InterfaceSimilarity>,
    pub system_iis: f64,
    pub system_iic: f64,
    pub warnings: Vec<String>,
}

/// `|A ∩ B| / |A ∪ B|`, shared by every IS computation so results agree bit for bit.
pub fn is_ratio(shared: usize, size_a: usize, size_b: usize) -> f64 {
    if size_a == 0 || size_b == 0 {
        return 0.0;
    }
    shared as f64 / (size_a + size_b - shared) as f64
}

/// `|A ∩ B| / |A|`.
pub fn ic_ratio(shared: usize, size_a: usize, size_b: usize) -> f64 {
    if size_a == 0 || size_b == 0 {
        return 0.0;
    }
    shared as f64 / size_a as f64
}

fn shared_count(a: &TypeDecl, b: &TypeDecl) -> usize {
    let (small, large) = if a.signatures.len() <= b.signatures.len() { (a, b) } else { (b, a) };
    small.signatures.iter().filter(|s| large.signatures.contains(s)).count()
}

/// IS between two interfaces.
pub fn is_score(model: &CodeModel, a: &TypeName, b: &TypeName) -> Result<f64, SimilarityError> {
    let da = model.interface(a)?;
    let db = model.interface(b)?;
    Ok(is_ratio(shared_count(da, db), da.size(), db.size()))
}

/// IC: the fraction of `a` that is duplicated in `b`.
pub fn ic_score(model: &CodeModel, a: &TypeName, b: &TypeName) -> Result<f64, SimilarityError> {
    let da = model.interface(a)?;
    let db = model.interface(b)?;
    Ok(ic_ratio(shared_count(da, db), da.size(), db.size()))
}

/// Number of shared signatures with every interface in `semi(i)`, via the
/// signature index.
pub fn shared_counts(model: &CodeModel, i: &TypeName) -> Result<BTreeMap<TypeName, usize>, SimilarityError> {
    Ok(borrowed_counts(model, i)?.into_iter().map(|(name, n)| (name.clone(), n)).collect())
}

fn borrowed_counts<'m>(model: &'m CodeModel, i: &TypeName) -> Result<BTreeMap<&'m TypeName, usize>, SimilarityError> {
    let decl = model.interface(i)?;
    let mut counts: BTreeMap<&TypeName, usize> = BTreeMap::new();
    for sig in &decl.signatures {
        for other in model.postings(&sig.key()) {
            if other != i {
                *counts.entry(other).or_default() += 1;
            }
        }
    }
    Ok(counts)
}

pub fn semi(model: &CodeModel, i: &TypeName) -> Result<BTreeSet<TypeName>, SimilarityError> {
    Ok(borrowed_counts(model, i)?.into_keys().cloned().collect())
}

/// IS and IC against every member of `semi(i)`, one row per partner.
pub fn partners(model: &CodeModel, i: &TypeName) -> Result<Vec<PairScore>, SimilarityError> {
    let size = model.interface(i)?.size();
    let counts = borrowed_counts(model, i)?;
    Ok(counts
        .into_iter()
        .map(|(other, shared)| {
            let other_size = model.get(other).map_or(0, TypeDecl::size);
            PairScore {
                a: i.clone(),
                b: other.clone(),
                shared,
                union_size: size + other_size - shared,
                is: is_ratio(shared, size, other_size),
                ic_ab: ic_ratio(shared, size, other_size),
                ic_ba: ic_ratio(shared, other_size, size),
            }
        })
        .collect())
}

/// IIS, IIC and their argmax partners for one interface. Ties go to the
/// smallest qualified name.
pub fn interface_similarity(model: &CodeModel, i: &TypeName) -> Result<InterfaceSimilarity, SimilarityError> {
    let size = model.interface(i)?.size();
    let mut out = InterfaceSimilarity {
        size,
        iis: 0.0,
        iic: 0.0,
        iis_partner: None,
        iic_partner: None,
    };
    // partners arrive in ascending name order, so strict `>` keeps the smallest
    for pair in partners(model, i)? {
        if pair.is > out.iis {
            out.iis = pair.is;
            out.iis_partner = Some(pair.b.clone());
        }
        if pair.ic_ab > out.iic {
            out.iic = pair.ic_ab;
            out.iic_partner = Some(pair.b);
        }
    }
    Ok(out)
}

pub fn iis(model: &CodeModel, i: &TypeName) -> Result<f64, SimilarityError> {
    interface_similarity(model, i).map(|s| s.iis)
}

pub fn iic(model: &CodeModel, i: &TypeName) -> Result<f64, SimilarityError> {
    interface_similarity(model, i).map(|s| s.iic)
}

/// Per-interface values for every interface plus the system means.
pub fn similarity_report(model: &CodeModel) -> SimilarityReport {
    let names: Vec<&TypeName> = model.interfaces().map(|d| &d.name).collect();
    let rows: Vec<(TypeName, InterfaceSimilarity)> = names
        .par_iter()
        .map(|name| {
            let row = interface_similarity(model, name).expect("listed interfaces exist");
            ((*name).clone(), row)
        })
        .collect();
    let mut warnings = Vec::new();
    let (system_iis, system_iic) = if rows.is_empty() {
        warnings.push("model has no interfaces; system IIS/IIC reported as 0".to_string());
        (0.0, 0.0)
    } else {
        let n = rows.len() as f64;
        let sum_iis: f64 = rows.iter().map(|(_, r)| r.iis).sum();
        let sum_iic: f64 = rows.iter().map(|(_, r)| r.iic).sum();
        (sum_iis / n, sum_iic / n)
    };
    SimilarityReport {
        per_interface: rows.into_iter().collect(),
        system_iis,
        system_iic,
        warnings,
    }
}

pub fn system_iis(model: &CodeModel) -> f64 {
    similarity_report(model).system_iis
}

pub fn system_iic(model: &CodeModel) -> f64 {
    similarity_report(model).system_iic
}

/// Every unordered pair with `IS >= min_is` (`IS > 0` when `min_is` is 0),
/// most similar first, then by names.
pub fn similarity_pairs(model: &CodeModel, min_is: f64) -> Result<Vec<PairScore>, SimilarityError> {
    if !(0.0..=1.0).contains(&min_is) {
        return Err(SimilarityError::InvalidMinimum(min_is));
    }
    let names: Vec<&TypeName> = model.interfaces().map(|d| &d.name).collect();
    let mut pairs: Vec<PairScore> = names
        .par_iter()
        .map(|name| partners(model, name).expect("listed interfaces exist"))
        .flatten()
        .filter(|p| p.a < p.b && p.is > 0.0 && p.is >= min_is)
        .collect();
    pairs.sort_by(|x, y| {
        y.is.total_cmp(&x.is)
            .then_with(|| x.a.cmp(&y.a))
            .then_with(|| x.b.cmp(&y.b))
    });
    Ok(pairs)
}

/// Signature keys declared by both interfaces, sorted.
pub fn shared_keys(model: &CodeModel, a: &TypeName, b: &TypeName) -> Result<Vec<String>, SimilarityError> {
    let da = model.interface(a)?;
    let db = model.interface(b)?;
    Ok(da
        .signatures
        .iter()
        .filter(|s| db.signatures.contains(s))
        .map(|s| s.key())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

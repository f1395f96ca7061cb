//! Fixture access and brute-force oracles shared by the integration tests.
//!
//! The oracles work on plain sets and adjacency lists and never call into the
//! metric modules, so agreement with the library is a real cross-check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use iface_core::java::scan_paths;
use iface_core::{normalize_signature, CodeModel, ExclusionPolicy, MethodSignature, TypeDecl, TypeFlags, TypeKind, TypeName};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub const FIXTURES: [&str; 7] = ["duplicated_requests", "diverged_requests", "work_units", "ui_templates", "mbeans", "diamond", "clean"];

/// Works from both workspace crates; the fixtures live with the core crate.
pub fn fixture_dir(name: &str) -> PathBuf {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let local = manifest.join("tests/fixtures");
    let root = if local.is_dir() { local } else { manifest.join("../core/tests/fixtures") };
    root.join(name)
}

/// Unfiltered model of a fixture tree.
pub fn load_fixture(name: &str) -> CodeModel {
    let scan = scan_paths(&[fixture_dir(name)], &ExclusionPolicy::default()).expect("fixture scans");
    assert!(scan.warnings.is_empty(), "{name}: {:?}", scan.warnings);
    CodeModel::build(scan.decls).expect("fixture builds")
}

pub fn tn(name: &str) -> TypeName {
    TypeName::new(name).unwrap()
}

/// `int m{id}()`: one distinct signature per id.
pub fn sig(id: u32) -> MethodSignature {
    normalize_signature(&format!("m{id}"), "int", &[] as &[&str]).unwrap()
}

pub fn interface(name: &str, sigs: impl IntoIterator<Item = u32>, supers: &[&str]) -> TypeDecl {
    TypeDecl::new(tn(name), TypeKind::Interface)
        .with_signatures(sigs.into_iter().map(sig))
        .with_supertypes(supers.iter().map(|s| tn(s)))
}

pub fn class(name: &str, supers: &[&str]) -> TypeDecl {
    TypeDecl::new(tn(name), TypeKind::Class).with_supertypes(supers.iter().map(|s| tn(s)))
}

// ---------------------------------------------------------------------------
// similarity oracle

/// Interfaces as name -> signature id set.
pub type SetModel = BTreeMap<String, BTreeSet<u32>>;

pub fn to_code_model(sets: &SetModel) -> CodeModel {
    CodeModel::build(sets.iter().map(|(name, ids)| interface(name, ids.iter().copied(), &[]))).unwrap()
}

pub fn oracle_is(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let inter = a.intersection(b).count();
    let union = a.union(b).count();
    inter as f64 / union as f64
}

pub fn oracle_ic(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    a.intersection(b).count() as f64 / a.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub semi: BTreeSet<String>,
    pub iis: f64,
    pub iic: f64,
    pub iis_partner: Option<String>,
    pub iic_partner: Option<String>,
}

/// All-pairs scan; maxima ties go to the smallest name.
pub fn oracle_similarity(sets: &SetModel) -> BTreeMap<String, OracleRow> {
    let mut out = BTreeMap::new();
    for (i, a) in sets {
        let mut row = OracleRow {
            semi: BTreeSet::new(),
            iis: 0.0,
            iic: 0.0,
            iis_partner: None,
            iic_partner: None,
        };
        for (j, b) in sets {
            if i == j {
                continue;
            }
            let is = oracle_is(a, b);
            if is <= 0.0 {
                continue;
            }
            row.semi.insert(j.clone());
            if is > row.iis {
                row.iis = is;
                row.iis_partner = Some(j.clone());
            }
            let ic = oracle_ic(a, b);
            if ic > row.iic {
                row.iic = ic;
                row.iic_partner = Some(j.clone());
            }
        }
        out.insert(i.clone(), row);
    }
    out
}

pub fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Up to `max_ifaces` interfaces drawing 1..=`max_sigs` ids from a small pool
/// so overlaps, containments and exact duplicates all show up.
pub fn random_set_model(rng: &mut impl Rng, max_ifaces: usize, max_sigs: usize) -> SetModel {
    let n = rng.gen_range(1..=max_ifaces);
    let pool = rng.gen_range(1..=(3 * max_sigs) as u32);
    let mut sets = SetModel::new();
    let mut previous: Vec<BTreeSet<u32>> = Vec::new();
    for k in 0..n {
        let ids: BTreeSet<u32> = match rng.gen_range(0..10) {
            0 if !previous.is_empty() => previous.choose(rng).unwrap().clone(),
            1 if !previous.is_empty() => {
                let base = previous.choose(rng).unwrap();
                base.iter().copied().filter(|_| rng.gen_bool(0.7)).collect()
            }
            _ => {
                let len = rng.gen_range(1..=max_sigs);
                (0..len).map(|_| rng.gen_range(0..pool)).collect()
            }
        };
        let ids = if ids.is_empty() { BTreeSet::from([0]) } else { ids };
        previous.push(ids.clone());
        sets.insert(format!("p{}.I{k}", k % 7), ids);
    }
    sets
}

// ---------------------------------------------------------------------------
// hierarchy oracle

/// A DAG over nodes `0..n`; `supers[k]` lists direct supertypes of `k`, all
/// with smaller indices. `interface[k]` tells the node kind.
#[derive(Debug, Clone)]
pub struct Dag {
    pub supers: Vec<Vec<usize>>,
    pub interface: Vec<bool>,
}

impl Dag {
    pub fn name(k: usize) -> String {
        format!("g.N{k:02}")
    }

    pub fn len(&self) -> usize {
        self.supers.len()
    }

    pub fn subs(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&s| self.supers[s].contains(&k)).collect()
    }

    pub fn to_code_model(&self) -> CodeModel {
        let decls = (0..self.len()).map(|k| {
            let supers: Vec<String> = self.supers[k].iter().map(|&s| Dag::name(s)).collect();
            let supers: Vec<&str> = supers.iter().map(String::as_str).collect();
            if self.interface[k] {
                interface(&Dag::name(k), [k as u32], &supers)
            } else {
                class(&Dag::name(k), &supers)
            }
        });
        CodeModel::build(decls).unwrap()
    }
}

/// Classes never sit above interfaces, as in Java; at most `max_supers` direct
/// supertypes per node.
pub fn random_dag(rng: &mut impl Rng, max_nodes: usize, max_supers: usize) -> Dag {
    let n = rng.gen_range(1..=max_nodes);
    let mut interface = Vec::with_capacity(n);
    let mut supers = Vec::with_capacity(n);
    for k in 0..n {
        let is_iface = k == 0 || rng.gen_bool(0.5);
        let candidates: Vec<usize> = (0..k).filter(|&s| interface[s] || !is_iface).collect();
        let want = rng.gen_range(0..=max_supers.min(candidates.len()));
        let mut chosen: Vec<usize> = candidates.choose_multiple(rng, want).copied().collect();
        chosen.sort_unstable();
        interface.push(is_iface);
        supers.push(chosen);
    }
    Dag { supers, interface }
}

/// Counts, for every node below `root`, the downward paths reaching it.
/// Enumerates the paths one by one.
pub fn oracle_paths(dag: &Dag, root: usize) -> BTreeMap<usize, u64> {
    let mut counts = BTreeMap::new();
    let mut stack: Vec<usize> = dag.subs(root);
    while let Some(node) = stack.pop() {
        *counts.entry(node).or_insert(0) += 1;
        stack.extend(dag.subs(node));
    }
    counts
}

fn reaches(dag: &Dag, from: usize, to: usize) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack = vec![from];
    while let Some(node) = stack.pop() {
        if node == to {
            return true;
        }
        if seen.insert(node) {
            stack.extend(dag.supers[node].iter().copied());
        }
    }
    false
}

/// Declared edges `t -> i` (i an interface) also reachable through another
/// direct supertype of `t`.
pub fn oracle_redundant(dag: &Dag) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for t in 0..dag.len() {
        for &i in &dag.supers[t] {
            if !dag.interface[i] {
                continue;
            }
            if dag.supers[t].iter().any(|&s| s != i && reaches(dag, s, i)) {
                out.insert((t, i));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// library vs oracle

/// Compares semi, IIS, IIC, their partners and the system means.
pub fn check_similarity(sets: &SetModel) -> Result<(), String> {
    use iface_core::similarity::{semi, similarity_report};
    let model = to_code_model(sets);
    let expected = oracle_similarity(sets);
    let report = similarity_report(&model);
    for (name, want) in &expected {
        let got = report.per_interface.get(&tn(name)).ok_or_else(|| format!("{name} missing"))?;
        let got_semi: BTreeSet<String> = semi(&model, &tn(name))
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|n| n.to_string())
            .collect();
        if got_semi != want.semi {
            return Err(format!("semi({name}): {got_semi:?} != {:?}", want.semi));
        }
        if got.iis != want.iis || got.iic != want.iic {
            return Err(format!("{name}: iis/iic {}/{} != {}/{}", got.iis, got.iic, want.iis, want.iic));
        }
        let partner = |p: &Option<TypeName>| p.as_ref().map(|n| n.to_string());
        if partner(&got.iis_partner) != want.iis_partner || partner(&got.iic_partner) != want.iic_partner {
            return Err(format!("{name}: partners {:?}/{:?} != {want:?}", got.iis_partner, got.iic_partner));
        }
    }
    let want_iis = mean(expected.values().map(|r| r.iis));
    let want_iic = mean(expected.values().map(|r| r.iic));
    if report.system_iis != want_iis || report.system_iic != want_iic {
        return Err(format!(
            "system {}/{} != {want_iis}/{want_iic}",
            report.system_iis, report.system_iic
        ));
    }
    Ok(())
}

/// Compares every interface bag with path enumeration, the rep identity and
/// the redundant-edge set.
pub fn check_dag(dag: &Dag) -> Result<(), String> {
    use iface_core::hierarchy::{redundant_edges, sub_h};
    let model = dag.to_code_model();
    for root in (0..dag.len()).filter(|&k| dag.interface[k]) {
        let bag = sub_h(&model, &tn(&Dag::name(root))).map_err(|e| e.to_string())?;
        let want = oracle_paths(dag, root);
        let got: BTreeMap<usize, u64> = bag
            .counts
            .iter()
            .map(|(name, &c)| (name.as_str()[3..].parse::<usize>().unwrap(), c))
            .collect();
        if got != want {
            return Err(format!("bag of {root}: {got:?} != {want:?}"));
        }
        let total: u64 = want.values().sum();
        if bag.total != total {
            return Err(format!("total of {root}: {} != {total}", bag.total));
        }
        if bag.rep_total() != total - want.len() as u64 {
            return Err(format!("rep of {root}: {} != {}", bag.rep_total(), total - want.len() as u64));
        }
        let irih = if total == 0 { 0.0 } else { (total - want.len() as u64) as f64 / total as f64 };
        if bag.irih() != irih {
            return Err(format!("irih of {root}: {} != {irih}", bag.irih()));
        }
    }
    let got: BTreeSet<(usize, usize)> = redundant_edges(&model)
        .iter()
        .map(|e| {
            let idx = |n: &TypeName| n.as_str()[3..].parse::<usize>().unwrap();
            (idx(&e.subtype), idx(&e.interface))
        })
        .collect();
    let want = oracle_redundant(dag);
    if got != want {
        return Err(format!("redundant edges {got:?} != {want:?}"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// random code models for property tests

const PACKAGES: [&str; 5] = ["app", "app.core", "lib", "app.test", "tests.util"];

#[derive(Debug, Clone)]
pub struct NodeSpec {
    pub interface: bool,
    pub sigs: BTreeSet<u8>,
    pub supers: Vec<u8>,
    pub package: usize,
    pub test: bool,
    pub external: bool,
}

pub fn node_spec() -> impl Strategy<Value = NodeSpec> {
    (
        any::<bool>(),
        prop::collection::btree_set(0u8..16, 0..7),
        prop::collection::vec(any::<u8>(), 0..4),
        0..PACKAGES.len(),
        prop::bool::weighted(0.1),
        prop::bool::weighted(0.1),
    )
        .prop_map(|(interface, sigs, supers, package, test, external)| NodeSpec {
            interface,
            sigs,
            supers,
            package,
            test,
            external,
        })
}

fn node_name(k: usize, spec: &NodeSpec) -> String {
    format!("{}.T{k}", PACKAGES[spec.package])
}

/// Supertypes point to earlier nodes only, so the graph is acyclic; interfaces
/// only extend interfaces.
pub fn decls_of(specs: &[NodeSpec]) -> Vec<TypeDecl> {
    specs
        .iter()
        .enumerate()
        .map(|(k, spec)| {
            let kind = if spec.interface { TypeKind::Interface } else { TypeKind::Class };
            let mut supers: BTreeSet<usize> = BTreeSet::new();
            if k > 0 {
                for &s in &spec.supers {
                    let s = s as usize % k;
                    if specs[s].interface || !spec.interface {
                        supers.insert(s);
                    }
                }
            }
            let mut decl = TypeDecl::new(tn(&node_name(k, spec)), kind)
                .with_supertypes(supers.iter().map(|&s| tn(&node_name(s, &specs[s]))));
            if spec.interface {
                decl = decl.with_signatures(spec.sigs.iter().map(|&id| sig(id as u32)));
            }
            decl.flags = TypeFlags {
                test: spec.test,
                external: spec.external,
            };
            decl
        })
        .collect()
}

pub fn model_strategy() -> impl Strategy<Value = CodeModel> {
    prop::collection::vec(node_spec(), 1..24).prop_map(|specs| CodeModel::build(decls_of(&specs)).unwrap())
}

pub fn id_set() -> impl Strategy<Value = BTreeSet<u32>> {
    prop::collection::btree_set(0u32..12, 1..8)
}

// ---------------------------------------------------------------------------
// metric laws

pub fn check_pair_laws(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> Result<(), String> {
    use iface_core::similarity::{ic_score, is_score};
    let sets: SetModel = [("x.A".to_string(), a.clone()), ("x.B".to_string(), b.clone())].into();
    let model = to_code_model(&sets);
    let (na, nb) = (tn("x.A"), tn("x.B"));
    let is_ab = is_score(&model, &na, &nb).unwrap();
    let is_ba = is_score(&model, &nb, &na).unwrap();
    let ic_ab = ic_score(&model, &na, &nb).unwrap();
    let ic_ba = ic_score(&model, &nb, &na).unwrap();
    let fail = |law: &str| Err(format!("{law} violated for {a:?} / {b:?}"));
    if ![is_ab, ic_ab, ic_ba].iter().all(|v| (0.0..=1.0).contains(v)) {
        return fail("bounds");
    }
    if is_ab != is_ba {
        return fail("IS symmetry");
    }
    if (is_ab == 1.0) != (a == b) {
        return fail("IS = 1 iff equal sets");
    }
    if (ic_ab == 1.0) != a.is_subset(b) || (ic_ba == 1.0) != b.is_subset(a) {
        return fail("IC = 1 iff containment");
    }
    if ic_ab < is_ab {
        return fail("IC >= IS");
    }
    Ok(())
}

/// Bounds and IIC >= IIS on every interface of the filtered model.
pub fn check_system_laws(model: &CodeModel) -> Result<(), String> {
    use iface_core::hierarchy::hierarchy_report;
    use iface_core::similarity::similarity_report;
    let model = model.filter(&ExclusionPolicy::default());
    let unit = |v: f64| (0.0..=1.0).contains(&v);
    let sim = similarity_report(&model);
    for (name, row) in &sim.per_interface {
        if !unit(row.iis) || !unit(row.iic) {
            return Err(format!("{name}: IIS/IIC out of bounds"));
        }
        if row.iic < row.iis {
            return Err(format!("{name}: IIC {} < IIS {}", row.iic, row.iis));
        }
    }
    if !unit(sim.system_iis) || !unit(sim.system_iic) {
        return Err("system IIS/IIC out of bounds".into());
    }
    let hier = hierarchy_report(&model).map_err(|e| e.to_string())?;
    for (name, row) in &hier.per_interface {
        if !unit(row.irih) || row.irih >= 1.0 {
            return Err(format!("{name}: IRIH {} out of bounds", row.irih));
        }
        if row.rep != row.subh_size - row.distinct as u64 {
            return Err(format!("{name}: rep != total - distinct"));
        }
    }
    if !unit(hier.system_irih) {
        return Err("system IRIH out of bounds".into());
    }
    Ok(())
}

pub fn check_filter_idempotent(model: &CodeModel, policy: &ExclusionPolicy) -> Result<(), String> {
    let once = model.filter(policy);
    let twice = once.filter(policy);
    if once.decls() != twice.decls() {
        return Err("filter changed declarations on second pass".into());
    }
    for decl in once.types() {
        if once.direct_supertypes(&decl.name) != twice.direct_supertypes(&decl.name) {
            return Err(format!("{}: edges changed on second pass", decl.name));
        }
        if policy.exclude_external && decl.flags.external || policy.exclude_markers && decl.is_marker() {
            return Err(format!("{} survived filtering", decl.name));
        }
    }
    Ok(())
}

/// Renames every type (reversing name order) and every method; metric values
/// must follow the renaming.
pub fn check_rename_invariance(model: &CodeModel, salt: u32) -> Result<(), String> {
    use iface_core::hierarchy::hierarchy_report;
    use iface_core::similarity::similarity_report;
    let model = model.filter(&ExclusionPolicy::default());
    let rename = |n: &TypeName| -> TypeName {
        let digits: String = n.simple().chars().filter(char::is_ascii_digit).collect();
        tn(&format!("r{salt}.Z{:04}", 9999 - digits.parse::<u32>().unwrap()))
    };
    let renamed: Vec<TypeDecl> = model
        .types()
        .map(|d| {
            let mut out = TypeDecl::new(rename(&d.name), d.kind).with_supertypes(model.direct_supertypes(&d.name).iter().map(rename));
            out.signatures = d
                .signatures
                .iter()
                .map(|s| normalize_signature(&format!("q{salt}{}", s.name()), s.return_type(), s.params()).unwrap())
                .collect();
            out
        })
        .collect();
    let other = CodeModel::build(renamed).map_err(|e| e.to_string())?;
    let (s1, s2) = (similarity_report(&model), similarity_report(&other));
    let (h1, h2) = (hierarchy_report(&model).unwrap(), hierarchy_report(&other).unwrap());
    for (name, row) in &s1.per_interface {
        let twin = &s2.per_interface[&rename(name)];
        if (row.size, row.iis, row.iic) != (twin.size, twin.iis, twin.iic) {
            return Err(format!("{name}: similarity changed under renaming"));
        }
        if h1.per_interface[name] != h2.per_interface[&rename(name)] {
            return Err(format!("{name}: hierarchy changed under renaming"));
        }
    }
    // means are summed in name order, which the renaming reverses
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12;
    if h1.redundant_edges.len() != h2.redundant_edges.len()
        || !close(s1.system_iis, s2.system_iis)
        || !close(s1.system_iic, s2.system_iic)
        || !close(h1.system_irih, h2.system_irih)
    {
        return Err("system values changed under renaming".into());
    }
    Ok(())
}

pub fn check_json_round_trip(model: &CodeModel) -> Result<(), String> {
    use iface_core::model_json::{model_to_json, parse_model_json};
    let text = model_to_json(model.types());
    let back = CodeModel::build(parse_model_json(&text).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    if &back != model {
        return Err("model changed through JSON".into());
    }
    if model_to_json(back.types()) != text {
        return Err("JSON text changed on second serialization".into());
    }
    Ok(())
}

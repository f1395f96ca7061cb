//! Sub-hierarchy multisets and redundancy in interface hierarchies (IRIH).
//!
//! `with_sub_h(x)` is `{x}` plus the multiset union of `with_sub_h(y)` for
//! every direct subtype `y` of `x`; `sub_h(i)` is the union of `with_sub_h(x)`
//! over the direct subtypes of `i`, so `i` itself is not a member. A node is
//! counted once per distinct downward path from `i`, which is where repeated
//! elements come from. With `rep(i) = Σ (occurrences(x) - 1)` over the
//! distinct members, `IRIH(i) = rep(i) / |sub_h(i)|` for a non-empty bag and 0
//! otherwise.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::model::{CodeModel, ModelError, TypeName};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("subtype cycle through `{0}`")]
    Cycle(TypeName),
    #[error("occurrence count overflow below `{0}`")]
    Overflow(TypeName),
    #[error("`{node}` is not in the sub-hierarchy of `{root}`")]
    NotInSubHierarchy { node: TypeName, root: TypeName },
}

pub type Counts = BTreeMap<TypeName, u64>;

/// `sub_h(root)` with repeated elements kept as counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyBag {
    pub root: TypeName,
    pub counts: Counts,
    pub total: u64,
}

impl HierarchyBag {
    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn occurrences(&self, node: &TypeName) -> Option<u64> {
        self.counts.get(node).copied()
    }

    pub fn rep_node(&self, node: &TypeName) -> Option<u64> {
        self.occurrences(node).map(|c| c - 1)
    }

    /// Repetitions summed over distinct members.
    pub fn rep_total(&self) -> u64 {
        self.counts.values().map(|c| c - 1).sum()
    }

    pub fn irih(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.rep_total() as f64 / self.total as f64
        }
    }
}

/// Memoized `with_sub_h` bags; each node's bag is merged once.
pub struct BagCache<'m> {
    model: &'m CodeModel,
    memo: HashMap<TypeName, Arc<Counts>>,
}

impl<'m> BagCache<'m> {
    pub fn new(model: &'m CodeModel) -> Self {
        Self {
            model,
            memo: HashMap::new(),
        }
    }

    pub fn with_sub_h(&mut self, x: &TypeName) -> Result<Arc<Counts>, HierarchyError> {
        if !self.model.contains(x) {
            return Err(ModelError::UnknownType(x.clone()).into());
        }
        if let Some(bag) = self.memo.get(x) {
            return Ok(Arc::clone(bag));
        }
        let mut stack: Vec<(&TypeName, bool)> = vec![(x, false)];
        let mut on_path: HashSet<&TypeName> = HashSet::new();
        while let Some((node, expanded)) = stack.pop() {
            if self.memo.contains_key(node) {
                continue;
            }
            if !expanded {
                on_path.insert(node);
                stack.push((node, true));
                for sub in self.model.direct_subtypes(node) {
                    if on_path.contains(sub) {
                        return Err(HierarchyError::Cycle(sub.clone()));
                    }
                    if !self.memo.contains_key(sub) {
                        stack.push((sub, false));
                    }
                }
                continue;
            }
            let mut counts = Counts::new();
            counts.insert(node.clone(), 1);
            for sub in self.model.direct_subtypes(node) {
                merge_into(&mut counts, &self.memo[sub], node)?;
            }
            on_path.remove(node);
            self.memo.insert(node.clone(), Arc::new(counts));
        }
        Ok(Arc::clone(&self.memo[x]))
    }

    pub fn sub_h(&mut self, i: &TypeName) -> Result<HierarchyBag, HierarchyError> {
        self.model.interface(i)?;
        let mut counts = Counts::new();
        for sub in self.model.direct_subtypes(i) {
            let bag = self.with_sub_h(sub)?;
            merge_into(&mut counts, &bag, i)?;
        }
        let total = counts
            .values()
            .try_fold(0u64, |acc, c| acc.checked_add(*c))
            .ok_or_else(|| HierarchyError::Overflow(i.clone()))?;
        Ok(HierarchyBag {
            root: i.clone(),
            counts,
            total,
        })
    }
}

fn merge_into(into: &mut Counts, from: &Counts, at: &TypeName) -> Result<(), HierarchyError> {
    for (name, count) in from {
        let slot = into.entry(name.clone()).or_insert(0);
        *slot = slot.checked_add(*count).ok_or_else(|| HierarchyError::Overflow(at.clone()))?;
    }
    Ok(())
}

/// `{x}` plus everything below it, with multiplicities.
pub fn with_sub_h(model: &CodeModel, x: &TypeName) -> Result<Counts, HierarchyError> {
    BagCache::new(model).with_sub_h(x).map(|bag| (*bag).clone())
}

pub fn sub_h(model: &CodeModel, i: &TypeName) -> Result<HierarchyBag, HierarchyError> {
    BagCache::new(model).sub_h(i)
}

pub fn occurrences(model: &CodeModel, x: &TypeName, i: &TypeName) -> Result<u64, HierarchyError> {
    sub_h(model, i)?.occurrences(x).ok_or_else(|| HierarchyError::NotInSubHierarchy {
        node: x.clone(),
        root: i.clone(),
    })
}

pub fn rep_node(model: &CodeModel, x: &TypeName, i: &TypeName) -> Result<u64, HierarchyError> {
    occurrences(model, x, i).map(|c| c - 1)
}

pub fn rep_total(model: &CodeModel, i: &TypeName) -> Result<u64, HierarchyError> {
    sub_h(model, i).map(|bag| bag.rep_total())
}

pub fn irih(model: &CodeModel, i: &TypeName) -> Result<f64, HierarchyError> {
    sub_h(model, i).map(|bag| bag.irih())
}

/// A declared `subtype -> interface` edge that another inheritance path
/// already implies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RedundantEdge {
    pub subtype: TypeName,
    pub interface: TypeName,
    /// `subtype, ..., interface` along a shortest alternative path.
    pub witness: Vec<TypeName>,
}

/// Every declared edge to an interface that is also reachable through another
/// direct supertype, sorted by subtype then interface.
pub fn redundant_edges(model: &CodeModel) -> Vec<RedundantEdge> {
    let mut out = Vec::new();
    for decl in model.types() {
        let supers = model.direct_supertypes(&decl.name);
        if supers.len() < 2 {
            continue;
        }
        for target in supers {
            if !model.get(target).is_some_and(|d| d.is_interface()) {
                continue;
            }
            let starts = supers.iter().filter(|s| *s != target);
            if let Some(path) = shortest_path(model, starts, target) {
                let mut witness = Vec::with_capacity(path.len() + 1);
                witness.push(decl.name.clone());
                witness.extend(path);
                out.push(RedundantEdge {
                    subtype: decl.name.clone(),
                    interface: target.clone(),
                    witness,
                });
            }
        }
    }
    out.sort_by(|a, b| a.subtype.cmp(&b.subtype).then_with(|| a.interface.cmp(&b.interface)));
    out
}

/// BFS along supertype edges from several starts to `target`.
fn shortest_path<'a>(
    model: &'a CodeModel,
    starts: impl Iterator<Item = &'a TypeName>,
    target: &TypeName,
) -> Option<Vec<TypeName>> {
    let mut parent: HashMap<&TypeName, Option<&TypeName>> = HashMap::new();
    let mut queue = VecDeque::new();
    for start in starts {
        if parent.insert(start, None).is_none() {
            queue.push_back(start);
        }
    }
    while let Some(node) = queue.pop_front() {
        if node == target {
            let mut path = vec![node.clone()];
            let mut cursor = node;
            while let Some(Some(prev)) = parent.get(cursor) {
                path.push((*prev).clone());
                cursor = prev;
            }
            path.reverse();
            return Some(path);
        }
        for sup in model.direct_supertypes(node) {
            if !parent.contains_key(sup) {
                parent.insert(sup, Some(node));
                queue.push_back(sup);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterfaceHierarchy {
    pub subh_size: u64,
    pub distinct: usize,
    pub rep: u64,
    pub irih: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyReport {
    pub per_interface: BTreeMap<TypeName, InterfaceHierarchy>,
    /// Mean IRIH over interfaces with a non-empty sub-hierarchy; 0 if none.
    pub system_irih: f64,
    pub redundant_edges: Vec<RedundantEdge>,
}

pub fn hierarchy_report(model: &CodeModel) -> Result<HierarchyReport, HierarchyError> {
    let mut cache = BagCache::new(model);
    let mut per_interface = BTreeMap::new();
    for decl in model.interfaces() {
        let bag = cache.sub_h(&decl.name)?;
        per_interface.insert(
            decl.name.clone(),
            InterfaceHierarchy {
                subh_size: bag.total,
                distinct: bag.distinct(),
                rep: bag.rep_total(),
                irih: bag.irih(),
            },
        );
    }
    let nonempty: Vec<f64> = per_interface.values().filter(|h| h.subh_size > 0).map(|h| h.irih).collect();
    let system_irih = if nonempty.is_empty() {
        0.0
    } else {
        nonempty.iter().sum::<f64>() / nonempty.len() as f64
    };
    Ok(HierarchyReport {
        per_interface,
        system_irih,
        redundant_edges: redundant_edges(model),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{TypeDecl, TypeKind};
    use crate::signature::normalize_signature;

    fn name(s: &str) -> TypeName {
        TypeName::new(s).unwrap()
    }

    fn iface(n: &str, supers: &[&str]) -> TypeDecl {
        TypeDecl::new(name(n), TypeKind::Interface)
            .with_signatures([normalize_signature(&format!("m{}", n.len()), "void", &[] as &[&str]).unwrap()])
            .with_supertypes(supers.iter().map(|s| name(s)))
    }

    fn class(n: &str, supers: &[&str]) -> TypeDecl {
        TypeDecl::new(name(n), TypeKind::Class).with_supertypes(supers.iter().map(|s| name(s)))
    }

    fn counts(pairs: &[(&str, u64)]) -> Counts {
        pairs.iter().map(|(n, c)| (name(n), *c)).collect()
    }

    fn diamond() -> CodeModel {
        CodeModel::build([iface("I", &[]), iface("A", &["I"]), iface("B", &["I"]), class("C", &["A", "B"])]).unwrap()
    }

    #[test]
    fn leaf_and_tree_bags() {
        let model = CodeModel::build([class("A", &[]), class("B", &["A"]), class("C", &["A"]), class("L", &[])]).unwrap();
        assert_eq!(with_sub_h(&model, &name("L")).unwrap(), counts(&[("L", 1)]));
        assert_eq!(with_sub_h(&model, &name("A")).unwrap(), counts(&[("A", 1), ("B", 1), ("C", 1)]));
    }

    #[test]
    fn with_sub_h_counts_both_paths() {
        let model = CodeModel::build([iface("A", &[]), iface("B", &["A"]), iface("C", &["A"]), class("D", &["B", "C"])]).unwrap();
        assert_eq!(
            with_sub_h(&model, &name("A")).unwrap(),
            counts(&[("A", 1), ("B", 1), ("C", 1), ("D", 2)])
        );
    }

    #[test]
    fn diamond_bag() {
        let model = diamond();
        let bag = sub_h(&model, &name("I")).unwrap();
        assert_eq!(bag.counts, counts(&[("A", 1), ("B", 1), ("C", 2)]));
        assert_eq!(bag.total, 4);
        assert_eq!(bag.rep_total(), 1);
        assert_eq!(bag.irih(), 0.25);
        assert_eq!(occurrences(&model, &name("C"), &name("I")), Ok(2));
        assert_eq!(rep_node(&model, &name("A"), &name("I")), Ok(0));
        assert!(matches!(
            occurrences(&model, &name("I"), &name("I")),
            Err(HierarchyError::NotInSubHierarchy { .. })
        ));
        // C's edges to A and B are both needed
        assert!(redundant_edges(&model).is_empty());
    }

    #[test]
    fn empty_sub_hierarchy() {
        let model = CodeModel::build([iface("I", &[])]).unwrap();
        let bag = sub_h(&model, &name("I")).unwrap();
        assert!(bag.is_empty());
        assert_eq!(bag.irih(), 0.0);
        let report = hierarchy_report(&model).unwrap();
        assert_eq!(report.system_irih, 0.0);
    }

    #[test]
    fn tree_has_no_redundancy() {
        let model = CodeModel::build([iface("I", &[]), class("A", &["I"]), class("B", &["A"]), class("C", &["A"])]).unwrap();
        assert_eq!(rep_total(&model, &name("I")), Ok(0));
        assert_eq!(irih(&model, &name("I")), Ok(0.0));
        assert!(redundant_edges(&model).is_empty());
    }

    #[test]
    fn redundant_implements_through_superclass() {
        let model = CodeModel::build([
            iface("ii", &[]),
            class("a", &["ii"]),
            class("b", &["a", "ii"]),
            class("c", &["ii", "a"]),
        ])
        .unwrap();
        let edges = redundant_edges(&model);
        let listed: Vec<_> = edges
            .iter()
            .map(|e| (e.subtype.as_str(), e.witness.iter().map(TypeName::as_str).collect::<Vec<_>>()))
            .collect();
        assert_eq!(listed, [("b", vec!["b", "a", "ii"]), ("c", vec!["c", "a", "ii"])]);
        let bag = sub_h(&model, &name("ii")).unwrap();
        assert_eq!((bag.total, bag.rep_total()), (5, 2));
    }

    #[test]
    fn class_argument_is_rejected_for_sub_h() {
        let model = CodeModel::build([class("C", &[])]).unwrap();
        assert!(matches!(
            sub_h(&model, &name("C")),
            Err(HierarchyError::Model(ModelError::NotAnInterface(_)))
        ));
    }
}

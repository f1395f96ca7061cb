//! The resolved class/interface graph every metric runs on.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::signature::{is_identifier, MethodSignature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid type name `{0}`")]
    InvalidTypeName(String),
    #[error("duplicate type `{0}`")]
    DuplicateType(TypeName),
    #[error("supertype cycle: {}", join_names(.0))]
    Cycle(Vec<TypeName>),
    #[error("unknown type `{0}`")]
    UnknownType(TypeName),
    #[error("`{0}` is not an interface")]
    NotAnInterface(TypeName),
}

fn join_names(names: &[TypeName]) -> String {
    names.iter().map(TypeName::as_str).collect::<Vec<_>>().join(" -> ")
}

/// Dot-separated qualified type name (`pkg.sub.Outer.Inner`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TypeName(String);

impl TypeName {
    pub fn new(qualified: impl Into<String>) -> Result<Self, ModelError> {
        let qualified = qualified.into();
        if qualified.split('.').all(is_identifier) {
            Ok(Self(qualified))
        } else {
            Err(ModelError::InvalidTypeName(qualified))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn simple(&self) -> &str {
        self.0.rsplit('.').next().unwrap_or(&self.0)
    }

    /// Everything before the simple name; empty for the default package.
    pub fn qualifier(&self) -> &str {
        self.0.rfind('.').map_or("", |idx| &self.0[..idx])
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('.')
    }

    pub fn is_qualified(&self) -> bool {
        self.0.contains('.')
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for TypeName {
    type Error = ModelError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl TryFrom<&str> for TypeName {
    type Error = ModelError;

    fn try_from(value: &str) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<TypeName> for String {
    fn from(value: TypeName) -> Self {
        value.0
    }
}

impl AsRef<str> for TypeName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeKind {
    Interface,
    Class,
}

impl fmt::Display for TypeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeKind::Interface => "interface",
            TypeKind::Class => "class",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeFlags {
    pub test: bool,
    pub external: bool,
}

/// One class or interface with its declared methods and supertypes.
///
/// The marker flag is derived: an interface is a marker exactly when it
/// declares no signatures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: TypeName,
    pub kind: TypeKind,
    pub signatures: BTreeSet<MethodSignature>,
    /// Supertype references as written (possibly simple names).
    pub supertypes: Vec<TypeName>,
    pub flags: TypeFlags,
}

impl TypeDecl {
    pub fn new(name: TypeName, kind: TypeKind) -> Self {
        Self {
            name,
            kind,
            signatures: BTreeSet::new(),
            supertypes: Vec::new(),
            flags: TypeFlags::default(),
        }
    }

    pub fn with_signatures(mut self, sigs: impl IntoIterator<Item = MethodSignature>) -> Self {
        self.signatures.extend(sigs);
        self
    }

    pub fn with_supertypes(mut self, supers: impl IntoIterator<Item = TypeName>) -> Self {
        self.supertypes.extend(supers);
        self
    }

    pub fn is_interface(&self) -> bool {
        self.kind == TypeKind::Interface
    }

    pub fn is_marker(&self) -> bool {
        self.is_interface() && self.signatures.is_empty()
    }

    pub fn size(&self) -> usize {
        self.signatures.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct UnresolvedRef {
    pub declaring: TypeName,
    pub reference: TypeName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionReason {
    External,
    Marker,
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Exclusion {
    pub name: TypeName,
    pub reason: ExclusionReason,
}

/// Which types are taken out of metric scope by [`CodeModel::filter`], plus
/// scan-time knobs of the Java frontend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionPolicy {
    pub exclude_tests: bool,
    pub exclude_external: bool,
    pub exclude_markers: bool,
    /// Glob patterns matched against scanned file paths.
    pub exclude_globs: Vec<String>,
    /// Count `static` interface methods toward the interface size.
    pub include_static_interface_methods: bool,
}

impl Default for ExclusionPolicy {
    fn default() -> Self {
        Self {
            exclude_tests: true,
            exclude_external: true,
            exclude_markers: true,
            exclude_globs: Vec::new(),
            include_static_interface_methods: false,
        }
    }
}

const TEST_PACKAGE_SEGMENTS: &[&str] = &["test", "tests"];
const TEST_BASE_CLASS: &str = "TestCase";

/// Immutable, resolved type graph.
///
/// Supertype edges point from a type to the declarations its references
/// resolved to; `subtypes` is their exact inverse. The signature index maps
/// every signature key of an interface to the interfaces declaring it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CodeModel {
    types: BTreeMap<TypeName, TypeDecl>,
    supertypes: BTreeMap<TypeName, Vec<TypeName>>,
    subtypes: BTreeMap<TypeName, BTreeSet<TypeName>>,
    signature_index: BTreeMap<String, BTreeSet<TypeName>>,
    unresolved: Vec<UnresolvedRef>,
    exclusions: Vec<Exclusion>,
}

static EMPTY_SET: BTreeSet<TypeName> = BTreeSet::new();

impl CodeModel {
    /// Resolves supertype references and checks the graph is acyclic.
    ///
    /// A reference resolves to the declaration with the same qualified name,
    /// otherwise to the unique declaration whose qualified name ends with the
    /// reference on a segment boundary (for a simple name: the unique type with
    /// that simple name). Anything else is recorded as unresolved.
    pub fn build(decls: impl IntoIterator<Item = TypeDecl>) -> Result<Self, ModelError> {
        let mut types = BTreeMap::new();
        for decl in decls {
            if types.contains_key(&decl.name) {
                return Err(ModelError::DuplicateType(decl.name));
            }
            types.insert(decl.name.clone(), decl);
        }

        let mut by_simple: HashMap<&str, Vec<&TypeName>> = HashMap::new();
        for name in types.keys() {
            by_simple.entry(name.simple()).or_default().push(name);
        }

        let mut supertypes = BTreeMap::new();
        let mut unresolved = Vec::new();
        for decl in types.values() {
            let mut resolved: Vec<TypeName> = Vec::with_capacity(decl.supertypes.len());
            for reference in &decl.supertypes {
                match resolve(reference, &types, &by_simple) {
                    Some(target) => {
                        if !resolved.contains(target) {
                            resolved.push(target.clone());
                        }
                    }
                    None => unresolved.push(UnresolvedRef {
                        declaring: decl.name.clone(),
                        reference: reference.clone(),
                    }),
                }
            }
            supertypes.insert(decl.name.clone(), resolved);
        }

        if let Some(cycle) = find_cycle(&supertypes) {
            return Err(ModelError::Cycle(cycle));
        }

        Ok(Self::assemble(types, supertypes, unresolved, Vec::new()))
    }

    fn assemble(
        types: BTreeMap<TypeName, TypeDecl>,
        supertypes: BTreeMap<TypeName, Vec<TypeName>>,
        unresolved: Vec<UnresolvedRef>,
        exclusions: Vec<Exclusion>,
    ) -> Self {
        let mut subtypes: BTreeMap<TypeName, BTreeSet<TypeName>> = BTreeMap::new();
        for (sub, supers) in &supertypes {
            for sup in supers {
                subtypes.entry(sup.clone()).or_default().insert(sub.clone());
            }
        }
        let mut signature_index: BTreeMap<String, BTreeSet<TypeName>> = BTreeMap::new();
        for decl in types.values().filter(|d| d.is_interface()) {
            for sig in &decl.signatures {
                signature_index.entry(sig.key()).or_default().insert(decl.name.clone());
            }
        }
        Self {
            types,
            supertypes,
            subtypes,
            signature_index,
            unresolved,
            exclusions,
        }
    }

    /// Removes external types, marker interfaces and test classes from the
    /// model, dropping every edge that touched them. Idempotent.
    pub fn filter(&self, policy: &ExclusionPolicy) -> Self {
        let mut removed: BTreeMap<&TypeName, ExclusionReason> = BTreeMap::new();
        for decl in self.types.values() {
            let reason = if policy.exclude_external && decl.flags.external {
                Some(ExclusionReason::External)
            } else if policy.exclude_markers && decl.is_marker() {
                Some(ExclusionReason::Marker)
            } else if policy.exclude_tests && self.is_test(decl) {
                Some(ExclusionReason::Test)
            } else {
                None
            };
            if let Some(reason) = reason {
                removed.insert(&decl.name, reason);
            }
        }
        if removed.is_empty() {
            return self.clone();
        }

        let types: BTreeMap<_, _> = self
            .types
            .iter()
            .filter(|(name, _)| !removed.contains_key(name))
            .map(|(name, decl)| (name.clone(), decl.clone()))
            .collect();
        let supertypes = self
            .supertypes
            .iter()
            .filter(|(name, _)| types.contains_key(*name))
            .map(|(name, supers)| {
                let kept = supers.iter().filter(|s| types.contains_key(*s)).cloned().collect();
                (name.clone(), kept)
            })
            .collect();
        let unresolved = self
            .unresolved
            .iter()
            .filter(|u| types.contains_key(&u.declaring))
            .cloned()
            .collect();
        let mut exclusions = self.exclusions.clone();
        exclusions.extend(removed.into_iter().map(|(name, reason)| Exclusion {
            name: name.clone(),
            reason,
        }));
        exclusions.sort();
        Self::assemble(types, supertypes, unresolved, exclusions)
    }

    /// Test flag, `test`/`tests` package segment, or a `TestCase` superclass
    /// anywhere up the class chain.
    fn is_test(&self, decl: &TypeDecl) -> bool {
        if decl.flags.test {
            return true;
        }
        let mut segments: Vec<&str> = decl.name.segments().collect();
        segments.pop();
        if segments.iter().any(|s| TEST_PACKAGE_SEGMENTS.contains(s)) {
            return true;
        }
        if decl.kind != TypeKind::Class {
            return false;
        }
        let mut stack = vec![decl];
        let mut seen = BTreeSet::new();
        while let Some(current) = stack.pop() {
            if !seen.insert(&current.name) {
                continue;
            }
            if current.supertypes.iter().any(|s| s.simple() == TEST_BASE_CLASS) {
                return true;
            }
            for sup in self.direct_supertypes(&current.name) {
                if let Some(sup_decl) = self.types.get(sup) {
                    if sup_decl.kind == TypeKind::Class {
                        stack.push(sup_decl);
                    }
                }
            }
        }
        false
    }

    pub fn types(&self) -> impl ExactSizeIterator<Item = &TypeDecl> {
        self.types.values()
    }

    pub fn decls(&self) -> Vec<TypeDecl> {
        self.types.values().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn get(&self, name: &TypeName) -> Option<&TypeDecl> {
        self.types.get(name)
    }

    pub fn contains(&self, name: &TypeName) -> bool {
        self.types.contains_key(name)
    }

    pub fn interfaces(&self) -> impl Iterator<Item = &TypeDecl> {
        self.types.values().filter(|d| d.is_interface())
    }

    pub fn classes(&self) -> impl Iterator<Item = &TypeDecl> {
        self.types.values().filter(|d| !d.is_interface())
    }

    /// Looks up `name` and checks it is an interface.
    pub fn interface(&self, name: &TypeName) -> Result<&TypeDecl, ModelError> {
        let decl = self.types.get(name).ok_or_else(|| ModelError::UnknownType(name.clone()))?;
        if decl.is_interface() {
            Ok(decl)
        } else {
            Err(ModelError::NotAnInterface(name.clone()))
        }
    }

    /// Number of signatures `name` declares.
    pub fn interface_size(&self, name: &TypeName) -> Result<usize, ModelError> {
        self.interface(name).map(TypeDecl::size)
    }

    /// Resolved direct supertypes, in declaration order.
    pub fn direct_supertypes(&self, name: &TypeName) -> &[TypeName] {
        self.supertypes.get(name).map_or(&[], Vec::as_slice)
    }

    /// dSub: types that directly name `name` as a supertype.
    pub fn direct_subtypes(&self, name: &TypeName) -> &BTreeSet<TypeName> {
        self.subtypes.get(name).unwrap_or(&EMPTY_SET)
    }

    pub fn signature_index(&self) -> &BTreeMap<String, BTreeSet<TypeName>> {
        &self.signature_index
    }

    /// Interfaces declaring the signature with this key.
    pub fn postings(&self, key: &str) -> &BTreeSet<TypeName> {
        self.signature_index.get(key).unwrap_or(&EMPTY_SET)
    }

    pub fn unresolved(&self) -> &[UnresolvedRef] {
        &self.unresolved
    }

    pub fn exclusions(&self) -> &[Exclusion] {
        &self.exclusions
    }

    /// True when `sup` is reachable from `sub` by one or more supertype edges.
    pub fn is_subtype_of(&self, sub: &TypeName, sup: &TypeName) -> bool {
        let mut stack: Vec<&TypeName> = self.direct_supertypes(sub).iter().collect();
        let mut seen = BTreeSet::new();
        while let Some(current) = stack.pop() {
            if current == sup {
                return true;
            }
            if seen.insert(current) {
                stack.extend(self.direct_supertypes(current));
            }
        }
        false
    }

    /// Declared signatures of `name` plus those of every resolved supertype.
    pub fn visible_signatures(&self, name: &TypeName) -> BTreeSet<&MethodSignature> {
        let mut out: BTreeSet<&MethodSignature> = BTreeSet::new();
        let mut stack: Vec<&TypeName> = vec![name];
        let mut seen = BTreeSet::new();
        while let Some(current) = stack.pop() {
            if !seen.insert(current) {
                continue;
            }
            if let Some(decl) = self.types.get(current) {
                out.extend(decl.signatures.iter());
            }
            stack.extend(self.direct_supertypes(current));
        }
        out
    }
}

fn resolve<'a>(
    reference: &TypeName,
    types: &'a BTreeMap<TypeName, TypeDecl>,
    by_simple: &HashMap<&str, Vec<&'a TypeName>>,
) -> Option<&'a TypeName> {
    if let Some((name, _)) = types.get_key_value(reference) {
        return Some(name);
    }
    let candidates = by_simple.get(reference.simple())?;
    let mut matching = candidates.iter().filter(|candidate| {
        let full = candidate.as_str();
        let suffix = reference.as_str();
        full.len() > suffix.len() && full.ends_with(suffix) && full.as_bytes()[full.len() - suffix.len() - 1] == b'.'
    });
    match (matching.next(), matching.next()) {
        (Some(only), None) => Some(only),
        _ => None,
    }
}

fn find_cycle(supertypes: &BTreeMap<TypeName, Vec<TypeName>>) -> Option<Vec<TypeName>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: HashMap<&TypeName, Mark> = HashMap::new();
    for start in supertypes.keys() {
        if marks.contains_key(start) {
            continue;
        }
        // (node, index of next supertype to visit)
        let mut stack: Vec<(&TypeName, usize)> = vec![(start, 0)];
        marks.insert(start, Mark::Active);
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            let supers = supertypes.get(node).map_or(&[][..], Vec::as_slice);
            if let Some(sup) = supers.get(*next) {
                *next += 1;
                match marks.get(sup) {
                    Some(Mark::Active) => {
                        let from = stack.iter().position(|(n, _)| *n == sup).unwrap_or(0);
                        let mut cycle: Vec<TypeName> = stack[from..].iter().map(|(n, _)| (*n).clone()).collect();
                        cycle.push(sup.clone());
                        return Some(cycle);
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(sup, Mark::Active);
                        stack.push((sup, 0));
                    }
                }
            } else {
                marks.insert(node, Mark::Done);
                stack.pop();
            }
        }
    }
    None
}

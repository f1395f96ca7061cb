//! Java source frontend: parses `*.java` trees into [`TypeDecl`]s.

mod lexer;
mod parser;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use globset::{Glob, GlobSet, GlobSetBuilder};
use rayon::prelude::*;
use thiserror::Error;
use walkdir::WalkDir;

use crate::model::{ExclusionPolicy, TypeDecl, TypeKind, TypeName};
use crate::signature::normalize_signature;

pub use parser::{parse_source, Import, MethodModifiers, RawKind, RawMethod, RawTypeDecl, SourceUnit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}:{line}: {message}", path.display())]
pub struct ParseError {
    pub path: PathBuf,
    pub line: usize,
    pub message: &'static str,
}

impl ParseError {
    pub(crate) fn new(path: &Path, line: usize, message: &'static str) -> Self {
        Self {
            path: path.to_path_buf(),
            line,
            message,
        }
    }
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("cannot read input `{}`: {source}", path.display())]
    Root {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid exclude pattern `{pattern}`: {source}")]
    Glob {
        pattern: String,
        #[source]
        source: globset::Error,
    },
}

/// Non-fatal problem met while scanning; the scan carries on without it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanWarning {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ScanWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{line}: {}", self.path.display(), self.message),
            None => write!(f, "{}: {}", self.path.display(), self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scan {
    pub decls: Vec<TypeDecl>,
    pub warnings: Vec<ScanWarning>,
    pub files: usize,
}

/// Recursively parses every `*.java` file under `roots`.
///
/// Files are processed in lexicographic path order; a file that fails to read
/// or parse becomes a warning. Supertype references are qualified through the
/// enclosing types, single-type imports, the same package, then wildcard
/// imports that have exactly one candidate in the scanned corpus. References
/// that stay unqualified are left for [`crate::CodeModel::build`] to match by
/// simple name.
///
/// Exclude globs match paths relative to their root; a root given as a file is
/// matched as written.
pub fn scan_paths<P: AsRef<Path>>(roots: &[P], policy: &ExclusionPolicy) -> Result<Scan, ScanError> {
    let excludes = build_globs(&policy.exclude_globs)?;
    let mut files: Vec<PathBuf> = Vec::new();
    for root in roots {
        let root = root.as_ref();
        let meta = std::fs::metadata(root).map_err(|source| ScanError::Root {
            path: root.to_path_buf(),
            source,
        })?;
        if meta.is_file() {
            if !excludes.is_match(root) {
                files.push(root.to_path_buf());
            }
            continue;
        }
        for entry in WalkDir::new(root).follow_links(true) {
            let entry = match entry {
                Ok(entry) => entry,
                Err(err) if err.depth() == 0 => {
                    return Err(ScanError::Root {
                        path: root.to_path_buf(),
                        source: err.into(),
                    })
                }
                Err(_) => continue,
            };
            let path = entry.path();
            if !entry.file_type().is_file() || path.extension().is_none_or(|ext| ext != "java") {
                continue;
            }
            let relative = path.strip_prefix(root).unwrap_or(path);
            if excludes.is_match(relative) {
                continue;
            }
            files.push(path.to_path_buf());
        }
    }
    files.sort();
    files.dedup();

    let parsed: Vec<Result<SourceUnit, ScanWarning>> = files
        .par_iter()
        .map(|path| {
            let text = std::fs::read(path).map_err(|err| ScanWarning {
                path: path.clone(),
                line: None,
                message: format!("unreadable: {err}"),
            })?;
            let text = String::from_utf8_lossy(&text);
            parse_source(&text, path).map_err(|err| ScanWarning {
                path: err.path,
                line: Some(err.line),
                message: err.message.to_string(),
            })
        })
        .collect();

    let mut scan = Scan {
        files: files.len(),
        ..Scan::default()
    };
    let mut units = Vec::new();
    for result in parsed {
        match result {
            Ok(unit) => units.push(unit),
            Err(warning) => scan.warnings.push(warning),
        }
    }
    let (decls, warnings) = units_to_decls(&units, policy);
    scan.decls = decls;
    scan.warnings.extend(warnings);
    Ok(scan)
}

fn build_globs(patterns: &[String]) -> Result<GlobSet, ScanError> {
    let mut builder = GlobSetBuilder::new();
    for pattern in patterns {
        let glob = Glob::new(pattern).map_err(|source| ScanError::Glob {
            pattern: pattern.clone(),
            source,
        })?;
        builder.add(glob);
    }
    builder.build().map_err(|source| ScanError::Glob {
        pattern: patterns.join(","),
        source,
    })
}

fn qualify(package: Option<&str>, name: &str) -> String {
    match package {
        Some(pkg) if !pkg.is_empty() => format!("{pkg}.{name}"),
        _ => name.to_string(),
    }
}

/// Converts parsed units into declarations, resolving supertype references
/// against the whole set of units.
pub fn units_to_decls(units: &[SourceUnit], policy: &ExclusionPolicy) -> (Vec<TypeDecl>, Vec<ScanWarning>) {
    let mut warnings = Vec::new();
    let mut corpus: BTreeSet<String> = BTreeSet::new();
    let mut owner: HashMap<String, &Path> = HashMap::new();
    let mut keep: Vec<Vec<bool>> = Vec::with_capacity(units.len());
    for unit in units {
        let mut flags = Vec::with_capacity(unit.declarations.len());
        for decl in &unit.declarations {
            let qualified = qualify(unit.package.as_deref(), &decl.name);
            if let Some(first) = owner.get(&qualified) {
                warnings.push(ScanWarning {
                    path: unit.path.clone(),
                    line: Some(decl.line),
                    message: format!("duplicate type `{qualified}` (first declared in {}); ignored", first.display()),
                });
                flags.push(false);
            } else {
                owner.insert(qualified.clone(), &unit.path);
                corpus.insert(qualified);
                flags.push(true);
            }
        }
        keep.push(flags);
    }

    let mut decls = Vec::new();
    for (unit, flags) in units.iter().zip(&keep) {
        let resolver = Resolver { unit, corpus: &corpus };
        for (raw, _) in unit.declarations.iter().zip(flags).filter(|(_, keep)| **keep) {
            let qualified = qualify(unit.package.as_deref(), &raw.name);
            let name = match TypeName::new(qualified) {
                Ok(name) => name,
                Err(err) => {
                    warnings.push(ScanWarning {
                        path: unit.path.clone(),
                        line: Some(raw.line),
                        message: err.to_string(),
                    });
                    continue;
                }
            };
            let kind = match raw.kind {
                RawKind::Interface => TypeKind::Interface,
                RawKind::Class | RawKind::Record => TypeKind::Class,
            };
            let mut decl = TypeDecl::new(name, kind);
            for method in &raw.methods {
                if kind == TypeKind::Interface
                    && (method.modifiers.is_private
                        || (method.modifiers.is_static && !policy.include_static_interface_methods))
                {
                    continue;
                }
                match normalize_signature(&method.name, &method.return_type, &method.params) {
                    Ok(sig) => {
                        decl.signatures.insert(sig);
                    }
                    Err(err) => warnings.push(ScanWarning {
                        path: unit.path.clone(),
                        line: Some(method.line),
                        message: format!("method `{}` skipped: {err}", method.name),
                    }),
                }
            }
            for text in &raw.supertypes {
                let resolved = resolver.resolve(&raw.name, text);
                match TypeName::new(resolved) {
                    Ok(sup) => decl.supertypes.push(sup),
                    Err(err) => warnings.push(ScanWarning {
                        path: unit.path.clone(),
                        line: Some(raw.line),
                        message: err.to_string(),
                    }),
                }
            }
            decls.push(decl);
        }
    }
    (decls, warnings)
}

struct Resolver<'a> {
    unit: &'a SourceUnit,
    corpus: &'a BTreeSet<String>,
}

impl Resolver<'_> {
    /// Qualifies `text`, a supertype reference written inside the declaration
    /// named `declaring` (package-relative, `Outer.Inner` for nested types).
    fn resolve(&self, declaring: &str, text: &str) -> String {
        let (head, rest) = match text.split_once('.') {
            Some((head, rest)) => (head, Some(rest)),
            None => (text, None),
        };
        if let Some(head) = self.resolve_head(declaring, head) {
            return match rest {
                Some(rest) => format!("{head}.{rest}"),
                None => head,
            };
        }
        text.to_string()
    }

    fn resolve_head(&self, declaring: &str, head: &str) -> Option<String> {
        let package = self.unit.package.as_deref();

        // member types of enclosing declarations, innermost first
        let mut scope = declaring;
        while let Some((outer, _)) = scope.rsplit_once('.') {
            let candidate = qualify(package, &format!("{outer}.{head}"));
            if self.corpus.contains(&candidate) {
                return Some(candidate);
            }
            scope = outer;
        }

        if let Some(import) = self
            .unit
            .imports
            .iter()
            .find(|i| !i.wildcard && i.path.rsplit('.').next() == Some(head))
        {
            return Some(import.path.clone());
        }

        let sibling = qualify(package, head);
        if self.corpus.contains(&sibling) {
            return Some(sibling);
        }

        let mut candidates = self
            .unit
            .imports
            .iter()
            .filter(|i| i.wildcard)
            .map(|i| format!("{}.{head}", i.path))
            .filter(|c| self.corpus.contains(c));
        match (candidates.next(), candidates.next()) {
            (Some(only), None) => Some(only),
            _ => None,
        }
    }
}

//! Neutral JSON code-model (`iface-model/1`).
//!
//! ```json
//! {"schema":"iface-model/1","types":[{"name":"p.I","kind":"interface",
//!   "signatures":[{"name":"m","returns":"int","params":["byte[]"]}],
//!   "supertypes":["p.J"],"flags":{"test":false,"external":false}}]}
//! ```
//!
//! Unknown fields are rejected. Errors carry the JSON pointer of the node at
//! fault.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{CodeModel, TypeDecl, TypeFlags, TypeKind, TypeName};
use crate::signature::normalize_signature;

pub const MODEL_SCHEMA: &str = "iface-model/1";

#[derive(Debug, Error)]
pub enum ModelJsonError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("schema violation at `{pointer}`: {message}")]
    Schema { pointer: String, message: String },
}

impl ModelJsonError {
    pub fn pointer(&self) -> Option<&str> {
        match self {
            ModelJsonError::Schema { pointer, .. } => Some(pointer),
            ModelJsonError::Io { .. } => None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    schema: String,
    types: Vec<TypeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TypeDoc {
    name: String,
    kind: TypeKind,
    #[serde(default)]
    signatures: Vec<SignatureDoc>,
    #[serde(default)]
    supertypes: Vec<String>,
    #[serde(default)]
    flags: FlagsDoc,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagsDoc {
    #[serde(default)]
    test: bool,
    #[serde(default)]
    external: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureDoc {
    name: String,
    returns: String,
    #[serde(default)]
    params: Vec<String>,
}

/// Parses a model document into declarations.
pub fn parse_model_json(text: &str) -> Result<Vec<TypeDecl>, ModelJsonError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ModelDoc = serde_path_to_error::deserialize(de).map_err(|err| ModelJsonError::Schema {
        pointer: to_pointer(err.path()),
        message: err.inner().to_string(),
    })?;
    if doc.schema != MODEL_SCHEMA {
        return Err(schema_error("/schema".into(), format!("expected `{MODEL_SCHEMA}`, found `{}`", doc.schema)));
    }
    let mut decls = Vec::with_capacity(doc.types.len());
    for (idx, ty) in doc.types.into_iter().enumerate() {
        let at = format!("/types/{idx}");
        let name = TypeName::new(ty.name).map_err(|err| schema_error(format!("{at}/name"), err.to_string()))?;
        let mut decl = TypeDecl::new(name, ty.kind);
        decl.flags = TypeFlags {
            test: ty.flags.test,
            external: ty.flags.external,
        };
        for (sig_idx, sig) in ty.signatures.iter().enumerate() {
            let sig = normalize_signature(&sig.name, &sig.returns, &sig.params)
                .map_err(|err| schema_error(format!("{at}/signatures/{sig_idx}"), err.to_string()))?;
            decl.signatures.insert(sig);
        }
        for (sup_idx, sup) in ty.supertypes.into_iter().enumerate() {
            let sup = TypeName::new(sup).map_err(|err| schema_error(format!("{at}/supertypes/{sup_idx}"), err.to_string()))?;
            decl.supertypes.push(sup);
        }
        decls.push(decl);
    }
    Ok(decls)
}

/// Serializes declarations, sorted by name, as a pretty-printed document.
pub fn model_to_json<'a>(decls: impl IntoIterator<Item = &'a TypeDecl>) -> String {
    let mut types: Vec<&TypeDecl> = decls.into_iter().collect();
    types.sort_by(|a, b| a.name.cmp(&b.name));
    let doc = ModelDoc {
        schema: MODEL_SCHEMA.to_string(),
        types: types
            .into_iter()
            .map(|decl| TypeDoc {
                name: decl.name.to_string(),
                kind: decl.kind,
                signatures: decl
                    .signatures
                    .iter()
                    .map(|sig| SignatureDoc {
                        name: sig.name().to_string(),
                        returns: sig.return_type().to_string(),
                        params: sig.params().to_vec(),
                    })
                    .collect(),
                supertypes: decl.supertypes.iter().map(ToString::to_string).collect(),
                flags: FlagsDoc {
                    test: decl.flags.test,
                    external: decl.flags.external,
                },
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("model document serializes");
    out.push('\n');
    out
}

pub fn load_model_json(path: impl AsRef<Path>) -> Result<Vec<TypeDecl>, ModelJsonError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ModelJsonError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_model_json(&text)
}

pub fn save_model_json(model: &CodeModel, path: impl AsRef<Path>) -> Result<(), ModelJsonError> {
    let path = path.as_ref();
    std::fs::write(path, model_to_json(model.types())).map_err(|source| ModelJsonError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn schema_error(pointer: String, message: String) -> ModelJsonError {
    ModelJsonError::Schema { pointer, message }
}

fn to_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for segment in path.iter() {
        out.push('/');
        match segment {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } | Segment::Enum { variant: key } => {
                out.push_str(&key.replace('~', "~0").replace('/', "~1"))
            }
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

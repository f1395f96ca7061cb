//! Method signatures and the textual normalization that defines their identity.
//!
//! Two signatures are the same service when return type, name and the ordered
//! list of parameter types agree. Type texts are compared after normalization:
//! package qualifiers are dropped (also inside generic arguments), whitespace is
//! removed, annotations and modifiers disappear, parameter names are discarded
//! and varargs `T...` become `T[]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("malformed type text `{text}`: {reason}")]
    MalformedType { text: String, reason: &'static str },
    #[error("invalid method name `{0}`")]
    InvalidName(String),
}

/// A normalized `(return type, name, parameter types)` triple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MethodSignature {
    name: String,
    return_type: String,
    params: Vec<String>,
}

impl MethodSignature {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn return_type(&self) -> &str {
        &self.return_type
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Canonical inverted-index key: `ret name(p1,p2)`.
    pub fn key(&self) -> String {
        let mut key = String::with_capacity(
            self.return_type.len() + self.name.len() + 3 + self.params.iter().map(|p| p.len() + 1).sum::<usize>(),
        );
        key.push_str(&self.return_type);
        key.push(' ');
        key.push_str(&self.name);
        key.push('(');
        for (idx, param) in self.params.iter().enumerate() {
            if idx > 0 {
                key.push(',');
            }
            key.push_str(param);
        }
        key.push(')');
        key
    }
}

impl fmt::Display for MethodSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// See [`MethodSignature::key`].
pub fn signature_key(sig: &MethodSignature) -> String {
    sig.key()
}

/// Builds a normalized signature from raw header pieces.
///
/// `raw_params` entries may carry parameter names, `final`, annotations and
/// C-style array brackets after the name (`int xs[]`).
pub fn normalize_signature<S: AsRef<str>>(
    raw_name: &str,
    raw_return: &str,
    raw_params: &[S],
) -> Result<MethodSignature, NormalizeError> {
    let name = raw_name.trim();
    if !is_identifier(name) {
        return Err(NormalizeError::InvalidName(raw_name.to_string()));
    }
    let return_type = normalize_type(raw_return)?;
    let params = raw_params
        .iter()
        .map(|p| normalize_param(p.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MethodSignature {
        name: name.to_string(),
        return_type,
        params,
    })
}

/// Normalizes a bare type expression such as `java.util.Map<K, java.lang.String> []`.
pub fn normalize_type(text: &str) -> Result<String, NormalizeError> {
    let mut parser = TypeParser::new(text)?;
    parser.skip_modifiers()?;
    let ty = parser.parse_type(true)?;
    parser.expect_end()?;
    Ok(ty)
}

/// Normalizes one formal parameter, dropping its name.
pub fn normalize_param(text: &str) -> Result<String, NormalizeError> {
    let mut parser = TypeParser::new(text)?;
    parser.skip_modifiers()?;
    let mut ty = parser.parse_type(true)?;
    if let Some(Tok::Ident(_)) = parser.peek() {
        parser.pos += 1;
        // `int xs[]` style dimensions on the name belong to the type
        while parser.eat(&Tok::Sym('[')) {
            parser.expect(&Tok::Sym(']'), "expected `]`")?;
            ty.push_str("[]");
        }
    }
    parser.expect_end()?;
    Ok(ty)
}

pub(crate) fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if is_ident_start(c) => chars.all(is_ident_part),
        _ => false,
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

pub(crate) fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

const MODIFIERS: &[&str] = &["final"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Sym(char),
    Ellipsis,
}

struct TypeParser<'a> {
    text: &'a str,
    toks: Vec<Tok<'a>>,
    pos: usize,
}

impl<'a> TypeParser<'a> {
    fn new(text: &'a str) -> Result<Self, NormalizeError> {
        let mut toks = Vec::new();
        let mut iter = text.char_indices().peekable();
        while let Some(&(start, c)) = iter.peek() {
            if c.is_whitespace() {
                iter.next();
            } else if is_ident_start(c) {
                let mut end = start;
                while let Some(&(idx, c)) = iter.peek() {
                    if !is_ident_part(c) {
                        break;
                    }
                    end = idx + c.len_utf8();
                    iter.next();
                }
                toks.push(Tok::Ident(&text[start..end]));
            } else if c == '.' {
                if text[start..].starts_with("...") {
                    iter.next();
                    iter.next();
                    iter.next();
                    toks.push(Tok::Ellipsis);
                } else {
                    iter.next();
                    toks.push(Tok::Sym('.'));
                }
            } else if "<>,[]?&@()".contains(c) {
                iter.next();
                toks.push(Tok::Sym(c));
            } else if c.is_ascii_digit() || c == '"' || c == '=' || c == '-' || c == '+' {
                // only legal inside annotation arguments; the annotation skipper
                // consumes them as opaque tokens
                iter.next();
                toks.push(Tok::Sym(c));
            } else {
                return Err(malformed(text, "unexpected character"));
            }
        }
        if toks.is_empty() {
            return Err(malformed(text, "empty type"));
        }
        Ok(Self { text, toks, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok<'a>> {
        self.toks.get(self.pos + offset)
    }

    fn eat(&mut self, tok: &Tok<'_>) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok<'_>, reason: &'static str) -> Result<(), NormalizeError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(malformed(self.text, reason))
        }
    }

    fn expect_end(&self) -> Result<(), NormalizeError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(malformed(self.text, "trailing tokens"))
        }
    }

    fn skip_modifiers(&mut self) -> Result<(), NormalizeError> {
        loop {
            match self.peek() {
                Some(Tok::Ident(word)) if MODIFIERS.contains(word) => self.pos += 1,
                Some(Tok::Sym('@')) => self.skip_annotation()?,
                _ => return Ok(()),
            }
        }
    }

    fn skip_annotations(&mut self) -> Result<(), NormalizeError> {
        while self.peek() == Some(&Tok::Sym('@')) {
            self.skip_annotation()?;
        }
        Ok(())
    }

    fn skip_annotation(&mut self) -> Result<(), NormalizeError> {
        self.expect(&Tok::Sym('@'), "expected `@`")?;
        self.ident("annotation name")?;
        while self.peek() == Some(&Tok::Sym('.')) && matches!(self.peek_at(1), Some(Tok::Ident(_))) {
            self.pos += 2;
        }
        if self.eat(&Tok::Sym('(')) {
            let mut depth = 1usize;
            while depth > 0 {
                match self.peek() {
                    None => return Err(malformed(self.text, "unclosed annotation arguments")),
                    Some(Tok::Sym('(')) => depth += 1,
                    Some(Tok::Sym(')')) => depth -= 1,
                    _ => {}
                }
                self.pos += 1;
            }
        }
        Ok(())
    }

    fn ident(&mut self, what: &'static str) -> Result<&'a str, NormalizeError> {
        match self.peek() {
            Some(Tok::Ident(word)) => {
                let word = *word;
                self.pos += 1;
                Ok(word)
            }
            _ => Err(malformed(self.text, what)),
        }
    }

    /// `allow_varargs` is only true at the outermost level of a parameter.
    fn parse_type(&mut self, allow_varargs: bool) -> Result<String, NormalizeError> {
        self.skip_annotations()?;
        let mut segment = self.ident("expected type name")?;
        if matches!(segment, "extends" | "super") {
            return Err(malformed(self.text, "keyword in type position"));
        }
        let mut args = String::new();
        loop {
            if self.peek() == Some(&Tok::Sym('<')) {
                args = self.parse_type_args()?;
            }
            if self.peek() == Some(&Tok::Sym('.')) {
                self.pos += 1;
                self.skip_annotations()?;
                segment = self.ident("expected name after `.`")?;
                args.clear();
            } else {
                break;
            }
        }
        let mut out = String::with_capacity(segment.len() + args.len());
        out.push_str(segment);
        out.push_str(&args);
        loop {
            self.skip_annotations()?;
            if self.eat(&Tok::Sym('[')) {
                self.expect(&Tok::Sym(']'), "expected `]`")?;
                out.push_str("[]");
            } else {
                break;
            }
        }
        if self.peek() == Some(&Tok::Ellipsis) {
            if !allow_varargs {
                return Err(malformed(self.text, "varargs inside type arguments"));
            }
            self.pos += 1;
            out.push_str("[]");
        }
        Ok(out)
    }

    fn parse_type_args(&mut self) -> Result<String, NormalizeError> {
        self.expect(&Tok::Sym('<'), "expected `<`")?;
        let mut out = String::from("<");
        if self.eat(&Tok::Sym('>')) {
            out.push('>');
            return Ok(out);
        }
        loop {
            self.skip_annotations()?;
            if self.eat(&Tok::Sym('?')) {
                out.push('?');
                if let Some(&Tok::Ident(word)) = self.peek() {
                    // normalized text glues the bound keyword to its type: `?extendsB`
                    let bound = ["extends", "super"].into_iter().find(|b| word.starts_with(b));
                    if let Some(bound) = bound {
                        out.push_str(bound);
                        if word.len() == bound.len() {
                            self.pos += 1;
                        } else {
                            self.toks[self.pos] = Tok::Ident(&word[bound.len()..]);
                        }
                        out.push_str(&self.parse_type(false)?);
                    }
                }
            } else {
                out.push_str(&self.parse_type(false)?);
            }
            if self.eat(&Tok::Sym(',')) {
                out.push(',');
            } else {
                self.expect(&Tok::Sym('>'), "expected `>` or `,` in type arguments")?;
                out.push('>');
                return Ok(out);
            }
        }
    }
}

fn malformed(text: &str, reason: &'static str) -> NormalizeError {
    NormalizeError::MalformedType {
        text: text.to_string(),
        reason,
    }
}

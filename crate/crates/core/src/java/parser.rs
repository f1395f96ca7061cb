//! Declaration-level parser for a pragmatic subset of Java.
//!
//! Only package, imports, class/interface/record headers and method headers are
//! recovered. Method bodies, initializers, enums and annotation types are
//! skipped by bracket matching.

use std::path::{Path, PathBuf};

use super::lexer::{tokenize, TokKind, Token};
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    pub path: String,
    pub wildcard: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawKind {
    Class,
    Interface,
    Record,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MethodModifiers {
    pub is_static: bool,
    pub is_private: bool,
    pub is_default: bool,
}

/// A method header as written, before normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMethod {
    pub name: String,
    pub return_type: String,
    pub params: Vec<String>,
    pub modifiers: MethodModifiers,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTypeDecl {
    pub kind: RawKind,
    /// Name relative to the package, `Outer.Inner` for nested types.
    pub name: String,
    /// Supertype references with type arguments and annotations removed.
    pub supertypes: Vec<String>,
    pub methods: Vec<RawMethod>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub path: PathBuf,
    pub package: Option<String>,
    pub imports: Vec<Import>,
    pub declarations: Vec<RawTypeDecl>,
}

const MODIFIER_WORDS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "abstract",
    "final",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "sealed",
];

/// Parses one compilation unit.
pub fn parse_source(text: &str, path: &Path) -> Result<SourceUnit, ParseError> {
    let toks = tokenize(text).map_err(|e| ParseError::new(path, e.line, e.message))?;
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        path,
        declarations: Vec::new(),
    };
    let mut unit = SourceUnit {
        path: path.to_path_buf(),
        package: None,
        imports: Vec::new(),
        declarations: Vec::new(),
    };
    parser.compilation_unit(&mut unit)?;
    unit.declarations = parser.declarations;
    Ok(unit)
}

struct Parser<'t, 'a> {
    toks: &'t [Token<'a>],
    pos: usize,
    path: &'t Path,
    declarations: Vec<RawTypeDecl>,
}

impl<'a> Parser<'_, 'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token<'a>> {
        self.toks.get(self.pos + offset)
    }

    fn line(&self) -> usize {
        self.peek()
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.line)
    }

    fn error(&self, message: &'static str) -> ParseError {
        ParseError::new(self.path, self.line(), message)
    }

    fn bump(&mut self) -> Result<Token<'a>, ParseError> {
        let tok = *self.peek().ok_or_else(|| self.error("unexpected end of file"))?;
        self.pos += 1;
        Ok(tok)
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.is_punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char, message: &'static str) -> Result<(), ParseError> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(self.error(message))
        }
    }

    fn ident(&mut self, message: &'static str) -> Result<&'a str, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokKind::Ident => {
                let text = t.text;
                self.pos += 1;
                Ok(text)
            }
            _ => Err(self.error(message)),
        }
    }

    fn qualified_name(&mut self) -> Result<String, ParseError> {
        let mut name = self.ident("expected name")?.to_string();
        while self.peek().is_some_and(|t| t.is_punct('.')) && self.peek_at(1).is_some_and(|t| t.kind == TokKind::Ident) {
            self.pos += 1;
            name.push('.');
            name.push_str(self.ident("expected name")?);
        }
        Ok(name)
    }

    fn compilation_unit(&mut self, unit: &mut SourceUnit) -> Result<(), ParseError> {
        while let Some(tok) = self.peek().copied() {
            if tok.is_punct(';') {
                self.pos += 1;
            } else if tok.is_ident("package") && unit.package.is_none() && self.declarations.is_empty() {
                self.pos += 1;
                unit.package = Some(self.qualified_name()?);
                self.expect_punct(';', "expected `;` after package")?;
            } else if tok.is_ident("import") {
                self.pos += 1;
                if self.peek().is_some_and(|t| t.is_ident("static")) {
                    self.pos += 1;
                    self.skip_past(';')?;
                    continue;
                }
                let path = self.qualified_name()?;
                let wildcard = self.eat_punct('.') && {
                    self.expect_punct('*', "expected `*` in import")?;
                    true
                };
                self.expect_punct(';', "expected `;` after import")?;
                unit.imports.push(Import { path, wildcard });
            } else if (tok.is_ident("module") || tok.is_ident("open")) && self.declarations.is_empty() {
                // module-info.java
                self.skip_past('{')?;
                self.skip_block_body()?;
            } else {
                self.modifiers()?;
                if !self.type_declaration("")? {
                    return Err(self.error("expected type declaration"));
                }
            }
        }
        Ok(())
    }

    /// Skips annotations and modifier keywords, reporting the interesting ones.
    fn modifiers(&mut self) -> Result<MethodModifiers, ParseError> {
        let mut mods = MethodModifiers::default();
        loop {
            let Some(tok) = self.peek().copied() else {
                return Ok(mods);
            };
            if tok.is_punct('@') && !self.peek_at(1).is_some_and(|t| t.is_ident("interface")) {
                self.annotation()?;
            } else if tok.kind == TokKind::Ident && MODIFIER_WORDS.contains(&tok.text) {
                // switch labels never reach here: bodies are skipped
                match tok.text {
                    "static" => mods.is_static = true,
                    "private" => mods.is_private = true,
                    "default" => mods.is_default = true,
                    _ => {}
                }
                self.pos += 1;
            } else if tok.is_ident("non")
                && self.peek_at(1).is_some_and(|t| t.is_punct('-'))
                && self.peek_at(2).is_some_and(|t| t.is_ident("sealed"))
            {
                self.pos += 3;
            } else {
                return Ok(mods);
            }
        }
    }

    fn annotation(&mut self) -> Result<(), ParseError> {
        self.expect_punct('@', "expected `@`")?;
        self.qualified_name()?;
        if self.peek().is_some_and(|t| t.is_punct('(')) {
            self.skip_balanced()?;
        }
        Ok(())
    }

    /// Parses a type declaration at the cursor if there is one.
    fn type_declaration(&mut self, outer: &str) -> Result<bool, ParseError> {
        let Some(tok) = self.peek().copied() else {
            return Ok(false);
        };
        let kind = if tok.is_ident("class") {
            RawKind::Class
        } else if tok.is_ident("interface") {
            RawKind::Interface
        } else if tok.is_ident("record")
            && self.peek_at(1).is_some_and(|t| t.kind == TokKind::Ident)
            && self.peek_at(2).is_some_and(|t| t.is_punct('(') || t.is_punct('<'))
        {
            RawKind::Record
        } else if tok.is_ident("enum") && self.peek_at(1).is_some_and(|t| t.kind == TokKind::Ident) {
            self.pos += 2;
            self.skip_past('{')?;
            self.skip_block_body()?;
            return Ok(true);
        } else if tok.is_punct('@') && self.peek_at(1).is_some_and(|t| t.is_ident("interface")) {
            self.pos += 2;
            self.ident("expected annotation type name")?;
            self.skip_past('{')?;
            self.skip_block_body()?;
            return Ok(true);
        } else {
            return Ok(false);
        };
        self.pos += 1;
        let simple = self.ident("expected type name")?;
        let name = if outer.is_empty() {
            simple.to_string()
        } else {
            format!("{outer}.{simple}")
        };
        if self.peek().is_some_and(|t| t.is_punct('<')) {
            self.skip_angles()?;
        }
        if kind == RawKind::Record {
            if !self.peek().is_some_and(|t| t.is_punct('(')) {
                return Err(self.error("expected record components"));
            }
            self.skip_balanced()?;
        }

        let mut supertypes = Vec::new();
        loop {
            let Some(tok) = self.peek().copied() else {
                return Err(self.error("unexpected end of file in type header"));
            };
            if tok.is_punct('{') {
                break;
            }
            if tok.is_ident("extends") || tok.is_ident("implements") {
                self.pos += 1;
                supertypes.extend(self.type_list()?);
            } else if tok.is_ident("permits") {
                self.pos += 1;
                self.type_list()?;
            } else {
                return Err(self.error("unexpected token in type header"));
            }
        }
        let open_line = self.bump()?.line;

        let index = self.declarations.len();
        self.declarations.push(RawTypeDecl {
            kind,
            name: name.clone(),
            supertypes,
            methods: Vec::new(),
            line: tok.line,
        });
        let methods = self.type_body(&name, simple, open_line)?;
        self.declarations[index].methods = methods;
        Ok(true)
    }

    /// Comma-separated type references up to `{` or the next clause keyword.
    fn type_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = Vec::new();
        loop {
            while self.peek().is_some_and(|t| t.is_punct('@')) {
                self.annotation()?;
            }
            let mut name = self.ident("expected supertype name")?.to_string();
            loop {
                if self.peek().is_some_and(|t| t.is_punct('<')) {
                    self.skip_angles()?;
                }
                if self.eat_punct('.') {
                    while self.peek().is_some_and(|t| t.is_punct('@')) {
                        self.annotation()?;
                    }
                    name.push('.');
                    name.push_str(self.ident("expected name after `.`")?);
                } else {
                    break;
                }
            }
            out.push(name);
            if !self.eat_punct(',') {
                return Ok(out);
            }
        }
    }

    fn type_body(&mut self, name: &str, simple: &str, open_line: usize) -> Result<Vec<RawMethod>, ParseError> {
        let mut methods = Vec::new();
        loop {
            let Some(tok) = self.peek().copied() else {
                return Err(ParseError::new(self.path, open_line, "unbalanced braces: `{` never closed"));
            };
            if tok.is_punct('}') {
                self.pos += 1;
                return Ok(methods);
            }
            if tok.is_punct(';') {
                self.pos += 1;
                continue;
            }
            if tok.is_punct('{') {
                self.skip_balanced()?;
                continue;
            }
            let mods = self.modifiers()?;
            if self.peek().is_some_and(|t| t.is_punct('{')) {
                // static initializer
                self.skip_balanced()?;
                continue;
            }
            if self.type_declaration(name)? {
                continue;
            }
            if let Some(method) = self.member(simple, mods)? {
                methods.push(method);
            }
        }
    }

    /// Field, constructor or method. Returns the method header when it is one.
    fn member(&mut self, simple: &str, modifiers: MethodModifiers) -> Result<Option<RawMethod>, ParseError> {
        let line = self.line();
        if self.peek().is_some_and(|t| t.is_punct('<')) {
            self.skip_angles()?;
        }
        let start = self.pos;
        // header runs to the first `(`, `=`, `;` or `{` outside type arguments
        let mut angle = 0usize;
        loop {
            let tok = *self.peek().ok_or_else(|| self.error("unexpected end of file in member"))?;
            match tok.kind {
                TokKind::Punct('<') => angle += 1,
                TokKind::Punct('>') => angle = angle.saturating_sub(1),
                TokKind::Punct('(' | '=' | ';' | '{') if angle == 0 => break,
                TokKind::Punct('}') => return Err(self.error("unexpected `}` in member declaration")),
                _ => {}
            }
            self.pos += 1;
        }
        let header = &self.toks[start..self.pos];
        let stop = *self.peek().expect("loop stops on a token");

        match stop.kind {
            TokKind::Punct('(') => {
                if header.len() == 1 && header[0].text == simple {
                    self.skip_balanced()?;
                    self.skip_member_tail()?;
                    return Ok(None);
                }
                if header.len() < 2 || header.last().is_none_or(|t| t.kind != TokKind::Ident) {
                    return Err(self.error("malformed method header"));
                }
                let name = header[header.len() - 1].text.to_string();
                let mut return_type = join_tokens(&header[..header.len() - 1]);
                let params = self.parameters()?;
                while self.peek().is_some_and(|t| t.is_punct('[')) {
                    self.pos += 1;
                    self.expect_punct(']', "expected `]`")?;
                    return_type.push_str("[]");
                }
                self.skip_member_tail()?;
                Ok(Some(RawMethod {
                    name,
                    return_type,
                    params,
                    modifiers,
                    line,
                }))
            }
            TokKind::Punct('=') => {
                self.skip_past(';')?;
                Ok(None)
            }
            TokKind::Punct(';') => {
                self.pos += 1;
                Ok(None)
            }
            _ => {
                // compact canonical constructor of a record
                self.skip_balanced()?;
                Ok(None)
            }
        }
    }

    /// Parameter texts between the parentheses at the cursor, split on
    /// top-level commas. Receiver parameters (`Foo this`) are dropped.
    fn parameters(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect_punct('(', "expected `(`")?;
        let mut params = Vec::new();
        let mut current: Vec<Token<'a>> = Vec::new();
        let mut depth = 0usize;
        loop {
            let tok = self.bump()?;
            match tok.kind {
                TokKind::Punct('<' | '(' | '[') => depth += 1,
                TokKind::Punct('>' | ']') => depth = depth.saturating_sub(1),
                TokKind::Punct(')') if depth == 0 => break,
                TokKind::Punct(')') => depth -= 1,
                TokKind::Punct(',') if depth == 0 => {
                    params.push(std::mem::take(&mut current));
                    continue;
                }
                TokKind::Punct('{' | '}' | ';') => return Err(self.error("unexpected token in parameter list")),
                _ => {}
            }
            current.push(tok);
        }
        if !current.is_empty() {
            params.push(current);
        }
        Ok(params
            .into_iter()
            .filter(|p| !p.last().is_some_and(|t| t.is_ident("this")))
            .map(|p| join_tokens(&p))
            .collect())
    }

    /// After a parameter list: `throws ...`, an annotation default value, then
    /// either `;` or a body.
    fn skip_member_tail(&mut self) -> Result<(), ParseError> {
        loop {
            let tok = *self.peek().ok_or_else(|| self.error("unexpected end of file after method header"))?;
            match tok.kind {
                TokKind::Punct(';') => {
                    self.pos += 1;
                    return Ok(());
                }
                TokKind::Punct('{') => return self.skip_balanced(),
                TokKind::Punct('}') => return Err(self.error("unexpected `}` after method header")),
                TokKind::Punct('(' | '[') => self.skip_balanced()?,
                _ => self.pos += 1,
            }
        }
    }

    /// Skips tokens through the next `stop` that is not nested in brackets.
    fn skip_past(&mut self, stop: char) -> Result<(), ParseError> {
        loop {
            let tok = *self.peek().ok_or_else(|| self.error("unexpected end of file"))?;
            if tok.is_punct(stop) {
                self.pos += 1;
                return Ok(());
            }
            match tok.kind {
                TokKind::Punct('(' | '[' | '{') => self.skip_balanced()?,
                TokKind::Punct(')' | ']' | '}') => return Err(self.error("unbalanced brackets")),
                _ => self.pos += 1,
            }
        }
    }

    /// Cursor is just past an opening `{`; skip through its matching `}`.
    fn skip_block_body(&mut self) -> Result<(), ParseError> {
        self.pos -= 1;
        self.skip_balanced()
    }

    /// Skips one bracketed group starting at the cursor.
    fn skip_balanced(&mut self) -> Result<(), ParseError> {
        let mut stack: Vec<(char, usize)> = Vec::new();
        loop {
            let Some(tok) = self.peek().copied() else {
                let line = stack.last().map_or(self.line(), |&(_, line)| line);
                return Err(ParseError::new(self.path, line, "unbalanced braces: bracket never closed"));
            };
            self.pos += 1;
            match tok.kind {
                TokKind::Punct(c @ ('(' | '[' | '{')) => stack.push((c, tok.line)),
                TokKind::Punct(c @ (')' | ']' | '}')) => {
                    let expected = match c {
                        ')' => '(',
                        ']' => '[',
                        _ => '{',
                    };
                    match stack.pop() {
                        Some((open, _)) if open == expected => {}
                        _ => return Err(ParseError::new(self.path, tok.line, "unbalanced braces: mismatched closing bracket")),
                    }
                }
                _ => {}
            }
            if stack.is_empty() {
                return Ok(());
            }
        }
    }

    /// Skips `<...>` at the cursor, tolerating nested generics.
    fn skip_angles(&mut self) -> Result<(), ParseError> {
        let mut depth = 0usize;
        loop {
            let tok = self.bump()?;
            match tok.kind {
                TokKind::Punct('<') => depth += 1,
                TokKind::Punct('>') => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                TokKind::Punct('(') => {
                    self.pos -= 1;
                    self.skip_balanced()?;
                }
                TokKind::Punct('{' | '}' | ';' | ')') => return Err(self.error("unterminated type parameters")),
                _ => {}
            }
        }
    }
}

fn join_tokens(toks: &[Token<'_>]) -> String {
    let mut out = String::new();
    for (idx, tok) in toks.iter().enumerate() {
        if idx > 0 {
            out.push(' ');
        }
        out.push_str(tok.text);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> SourceUnit {
        parse_source(src, Path::new("T.java")).unwrap()
    }

    #[test]
    fn minimal_interface() {
        let unit = parse("package p; interface I { int getLength(); }");
        assert_eq!(unit.package.as_deref(), Some("p"));
        let decl = &unit.declarations[0];
        assert_eq!((decl.kind, decl.name.as_str()), (RawKind::Interface, "I"));
        assert_eq!(decl.methods.len(), 1);
        assert_eq!(decl.methods[0].name, "getLength");
        assert_eq!(decl.methods[0].return_type, "int");
        assert!(decl.methods[0].params.is_empty());
    }

    #[test]
    fn class_header_lists() {
        let unit = parse("class C extends A implements I, J { void m(){} }");
        let decl = &unit.declarations[0];
        assert_eq!(decl.kind, RawKind::Class);
        assert_eq!(decl.supertypes, ["A", "I", "J"]);
        assert_eq!(decl.methods.len(), 1);
        assert_eq!(decl.methods[0].return_type, "void");
    }

    #[test]
    fn marker_with_two_supers() {
        let unit = parse("interface K extends I, J {}");
        assert_eq!(unit.declarations[0].supertypes, ["I", "J"]);
        assert!(unit.declarations[0].methods.is_empty());
    }

    #[test]
    fn realistic_unit() {
        let src = r#"
            package com.example.io;

            import java.util.List;
            import java.util.*;
            import static java.lang.Math.max;

            /** Docs { with braces */
            @Deprecated
            public abstract class Reader<T extends Comparable<T>> extends java.io.Base<T>
                    implements Source<List<T>>, java.io.@Ann Closeable {
                private static final String X = "}";
                private final Map<String, List<T>> cache = new HashMap<>() {{ put("a", null); }};
                static { init(); }
                protected Reader(int n) { super(n); }
                public <R> R map(java.util.function.Function<? super T, R> f, final int... rest) throws IOException {
                    if (x > 0) { return null; } else { char c = '{'; }
                    return null;
                }
                abstract int[] values()[];
                interface Nested extends Source<String> {
                    void nested(@Nullable String s);
                    default int d() { return 1; }
                    static Nested of() { return null; }
                    private void hidden() {}
                }
                enum Mode { A { void f() {} }, B; interface Hidden { void h(); } }
                public @interface Marker { String value() default "x"; }
                record Pair<A, B>(A a, B b) implements Comparable<Pair<A, B>> {
                    Pair { java.util.Objects.requireNonNull(a); }
                    public int compareTo(Pair<A, B> o) { return 0; }
                }
            }
        "#;
        let unit = parse(src);
        assert_eq!(unit.imports, [
            Import { path: "java.util.List".into(), wildcard: false },
            Import { path: "java.util".into(), wildcard: true },
        ]);
        let names: Vec<_> = unit.declarations.iter().map(|d| d.name.as_str()).collect();
        assert_eq!(names, ["Reader", "Reader.Nested", "Reader.Pair"]);
        let reader = &unit.declarations[0];
        assert_eq!(reader.supertypes, ["java.io.Base", "Source", "java.io.Closeable"]);
        let methods: Vec<_> = reader.methods.iter().map(|m| (m.name.as_str(), m.return_type.as_str())).collect();
        assert_eq!(methods, [("map", "R"), ("values", "int [ ][]")]);
        assert_eq!(reader.methods[0].params, ["java . util . function . Function < ? super T , R > f", "final int ... rest"]);

        let nested = &unit.declarations[1];
        assert_eq!(nested.kind, RawKind::Interface);
        let flags: Vec<_> = nested
            .methods
            .iter()
            .map(|m| (m.name.as_str(), m.modifiers.is_static, m.modifiers.is_private, m.modifiers.is_default))
            .collect();
        assert_eq!(flags, [
            ("nested", false, false, false),
            ("d", false, false, true),
            ("of", true, false, false),
            ("hidden", false, true, false),
        ]);
        assert_eq!(nested.methods[0].params, ["@ Nullable String s"]);

        let pair = &unit.declarations[2];
        assert_eq!(pair.kind, RawKind::Record);
        assert_eq!(pair.supertypes, ["Comparable"]);
        assert_eq!(pair.methods.len(), 1);
    }

    #[test]
    fn receiver_parameter_dropped() {
        let unit = parse("interface I { void m(@A I this, int x); }");
        assert_eq!(unit.declarations[0].methods[0].params, ["int x"]);
    }

    #[test]
    fn unbalanced_braces_report_line() {
        let err = parse_source("package p;\nclass A {\n void m() {\n", Path::new("A.java")).unwrap_err();
        assert_eq!(err.path, Path::new("A.java"));
        assert!(err.line >= 2, "{err}");
        let err = parse_source("class A { void m() { } } }", Path::new("A.java")).unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn module_info_is_skipped() {
        let unit = parse("module com.x { requires java.base; exports com.x; }");
        assert!(unit.declarations.is_empty());
    }
}

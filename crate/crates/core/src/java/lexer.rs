//! Token stream for the declaration scanner. Comments and literal contents are
//! dropped; only enough structure survives to find headers and match brackets.

use crate::signature::{is_ident_part, is_ident_start};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TokKind {
    Ident,
    Punct(char),
    Ellipsis,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub kind: TokKind,
    pub text: &'a str,
    pub line: usize,
}

impl Token<'_> {
    pub fn is_punct(&self, c: char) -> bool {
        self.kind == TokKind::Punct(c)
    }

    pub fn is_ident(&self, word: &str) -> bool {
        self.kind == TokKind::Ident && self.text == word
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LexError {
    pub line: usize,
    pub message: &'static str,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token<'_>>, LexError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut pos = 0;
    let mut line = 1;

    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b'\n' => {
                line += 1;
                pos += 1;
            }
            b' ' | b'\t' | b'\r' | 0x0c => pos += 1,
            b'/' if bytes.get(pos + 1) == Some(&b'/') => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            b'/' if bytes.get(pos + 1) == Some(&b'*') => {
                let start_line = line;
                pos += 2;
                loop {
                    match bytes.get(pos) {
                        None => {
                            return Err(LexError {
                                line: start_line,
                                message: "unterminated block comment",
                            })
                        }
                        Some(b'*') if bytes.get(pos + 1) == Some(&b'/') => {
                            pos += 2;
                            break;
                        }
                        Some(b'\n') => {
                            line += 1;
                            pos += 1;
                        }
                        Some(_) => pos += 1,
                    }
                }
            }
            b'"' if src[pos..].starts_with("\"\"\"") => {
                let start = pos;
                let start_line = line;
                pos += 3;
                loop {
                    match bytes.get(pos) {
                        None => {
                            return Err(LexError {
                                line: start_line,
                                message: "unterminated text block",
                            })
                        }
                        Some(b'\\') => pos += 2,
                        Some(b'"') if src[pos..].starts_with("\"\"\"") => {
                            pos += 3;
                            break;
                        }
                        Some(b'\n') => {
                            line += 1;
                            pos += 1;
                        }
                        Some(_) => pos += 1,
                    }
                }
                toks.push(Token {
                    kind: TokKind::Literal,
                    text: &src[start..pos.min(src.len())],
                    line: start_line,
                });
            }
            b'"' | b'\'' => {
                let start = pos;
                pos += 1;
                loop {
                    match bytes.get(pos) {
                        None | Some(b'\n') => {
                            return Err(LexError {
                                line,
                                message: "unterminated literal",
                            })
                        }
                        Some(b'\\') => pos += 2,
                        Some(&c) if c == b => {
                            pos += 1;
                            break;
                        }
                        Some(_) => pos += 1,
                    }
                }
                toks.push(Token {
                    kind: TokKind::Literal,
                    text: &src[start..pos.min(src.len())],
                    line,
                });
            }
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_' || bytes[pos] == b'.') {
                    pos += 1;
                }
                toks.push(Token {
                    kind: TokKind::Literal,
                    text: &src[start..pos],
                    line,
                });
            }
            b'.' if src[pos..].starts_with("...") => {
                toks.push(Token {
                    kind: TokKind::Ellipsis,
                    text: &src[pos..pos + 3],
                    line,
                });
                pos += 3;
            }
            _ => {
                let c = src[pos..].chars().next().unwrap_or('\u{fffd}');
                let len = c.len_utf8();
                if is_ident_start(c) {
                    let start = pos;
                    pos += len;
                    while let Some(c) = src[pos..].chars().next() {
                        if !is_ident_part(c) {
                            break;
                        }
                        pos += c.len_utf8();
                    }
                    toks.push(Token {
                        kind: TokKind::Ident,
                        text: &src[start..pos],
                        line,
                    });
                } else {
                    toks.push(Token {
                        kind: TokKind::Punct(c),
                        text: &src[pos..pos + len],
                        line,
                    });
                    pos += len;
                }
            }
        }
    }
    Ok(toks)
}

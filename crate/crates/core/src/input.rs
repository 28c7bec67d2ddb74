//! Surface-knot group data and the line-oriented `.skg` text format.
//!
//! ```text
//! # dihedral group of order 8, non-orientable test input
//! group: r s
//! rel: r^4
//! rel: s^2
//! rel: r s r s
//! P: r^2 , s
//! P+: r^2
//! n: s
//! orientable: false
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::word::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: generator `{name}` declared twice")]
    DuplicateGenerator { line: usize, name: String },
    #[error("line {line}, column {column}: unknown generator `{name}`")]
    UnknownGenerator {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("missing section `{0}:`")]
    MissingSection(&'static str),
}

/// A finite presentation `<generators | relators>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    /// Builds a presentation, dropping relators that reduce to the empty word.
    ///
    /// Panics if a relator mentions a generator outside the alphabet or if
    /// two generators share a name.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        for (i, g) in generators.iter().enumerate() {
            assert!(
                !generators[..i].contains(g),
                "duplicate generator name {g:?}"
            );
        }
        for r in &relators {
            if let Some(max) = r.max_generator() {
                assert!(max < generators.len(), "relator uses unknown generator");
            }
        }
        let relators = relators.into_iter().filter(|r| !r.is_empty()).collect();
        GroupPresentation {
            generators,
            relators,
        }
    }

    /// Parses `"a b | a^2, b^3, a b a b"`; a convenience for tests and bindings.
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let (gens, rels) = text.split_once('|').unwrap_or((text, ""));
        let names = parse_generator_list(gens, 1, 1)?;
        let mut relators = Vec::new();
        for piece in rels.split(',') {
            if piece.trim().is_empty() {
                continue;
            }
            relators.push(parse_word(piece, &names, 1, 1)?);
        }
        Ok(GroupPresentation::new(names, relators))
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Parses a word in `.skg` word syntax against this alphabet.
    pub fn word(&self, text: &str) -> Result<Word, InputError> {
        parse_word(text, &self.generators, 1, 1)
    }

    pub fn render(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }
}

/// Group-theoretic data of a surface-knot: the knot group, peripheral
/// subgroup generators, and for non-orientable surfaces the positive
/// peripheral subgroup and the element `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceKnotInput {
    pub presentation: GroupPresentation,
    pub p_generators: Vec<Word>,
    pub p_plus_generators: Option<Vec<Word>>,
    pub n_word: Option<Word>,
    pub surface_orientable: bool,
    pub label: String,
}

impl SurfaceKnotInput {
    /// Serializes to `.skg` text. `parse_input` of the result reproduces `self`.
    pub fn to_skg(&self) -> String {
        let pres = &self.presentation;
        let mut out = String::new();
        if !self.label.is_empty() {
            let _ = writeln!(out, "label: {}", self.label);
        }
        let _ = writeln!(out, "group: {}", pres.generators.join(" "));
        for r in &pres.relators {
            let _ = writeln!(out, "rel: {}", pres.render(r));
        }
        let list = |ws: &[Word]| {
            ws.iter()
                .map(|w| pres.render(w))
                .collect::<Vec<_>>()
                .join(" , ")
        };
        let _ = writeln!(out, "P: {}", list(&self.p_generators));
        if let Some(pp) = &self.p_plus_generators {
            let _ = writeln!(out, "P+: {}", list(pp));
        }
        if let Some(n) = &self.n_word {
            let _ = writeln!(out, "n: {}", pres.render(n));
        }
        let _ = writeln!(out, "orientable: {}", self.surface_orientable);
        out
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Whitespace tokens with their 1-based character columns.
fn tokens(text: &str, base_column: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (bi, ch)) in text.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((s, c)) = start.take() {
                out.push((base_column + c, &text[s..bi]));
            }
        } else if start.is_none() {
            start = Some((bi, col));
        }
    }
    if let Some((s, c)) = start {
        out.push((base_column + c, &text[s..]));
    }
    out
}

fn parse_generator_list(
    text: &str,
    line: usize,
    base_column: usize,
) -> Result<Vec<String>, InputError> {
    let mut names: Vec<String> = Vec::new();
    for (column, tok) in tokens(text, base_column) {
        if !valid_name(tok) {
            return Err(InputError::Syntax {
                line,
                column,
                message: format!("invalid generator name `{tok}`"),
            });
        }
        if names.iter().any(|n| n == tok) {
            return Err(InputError::DuplicateGenerator {
                line,
                name: tok.to_string(),
            });
        }
        names.push(tok.to_string());
    }
    if names.is_empty() {
        return Err(InputError::Syntax {
            line,
            column: base_column,
            message: "at least one generator is required".into(),
        });
    }
    Ok(names)
}

/// Parses whitespace-separated tokens `name` or `name^k`; `1` is the identity.
pub(crate) fn parse_word(
    text: &str,
    names: &[String],
    line: usize,
    base_column: usize,
) -> Result<Word, InputError> {
    let mut letters: Vec<Letter> = Vec::new();
    let mut seen_token = false;
    for (column, tok) in tokens(text, base_column) {
        seen_token = true;
        if tok == "1" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((name, exp)) => {
                let k: i64 = exp.parse().map_err(|_| InputError::Syntax {
                    line,
                    column,
                    message: format!("invalid exponent in `{tok}`"),
                })?;
                (name, k)
            }
            None => (tok, 1),
        };
        if !valid_name(name) {
            return Err(InputError::Syntax {
                line,
                column,
                message: format!("invalid token `{tok}`"),
            });
        }
        let g =
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| InputError::UnknownGenerator {
                    line,
                    column,
                    name: name.to_string(),
                })?;
        if exp.unsigned_abs() > 1 << 20 {
            return Err(InputError::Syntax {
                line,
                column,
                message: format!("exponent too large in `{tok}`"),
            });
        }
        let l = Letter::new(g, exp < 0);
        letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
    }
    if !seen_token {
        return Err(InputError::Syntax {
            line,
            column: base_column,
            message: "empty word (write `1` for the identity)".into(),
        });
    }
    Ok(Word::free_reduce(letters))
}

fn parse_word_list(
    text: &str,
    names: &[String],
    line: usize,
    base_column: usize,
) -> Result<Vec<Word>, InputError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let col = base_column + text[..offset].chars().count();
        out.push(parse_word(piece, names, line, col)?);
        offset += piece.len() + 1;
    }
    Ok(out)
}

/// Parses `.skg` text.
pub fn parse_input(text: &str) -> Result<SurfaceKnotInput, InputError> {
    let mut label: Option<String> = None;
    let mut names: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    let mut p: Option<Vec<Word>> = None;
    let mut p_plus: Option<(usize, Vec<Word>)> = None;
    let mut n: Option<Word> = None;
    let mut orientable: Option<bool> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            return Err(InputError::Syntax {
                line,
                column: 1,
                message: "expected `key: value`".into(),
            });
        };
        let key = content[..colon].trim();
        let value = &content[colon + 1..];
        let value_col = content[..colon].chars().count() + 2;
        let dup = |what: &str| InputError::Syntax {
            line,
            column: 1,
            message: format!("`{what}:` given more than once"),
        };

        if key == "label" {
            if label.is_some() {
                return Err(dup("label"));
            }
            label = Some(value.trim().to_string());
            continue;
        }
        if key == "group" {
            if names.is_some() {
                return Err(dup("group"));
            }
            names = Some(parse_generator_list(value, line, value_col)?);
            continue;
        }
        let Some(names) = names.as_ref() else {
            return Err(InputError::Syntax {
                line,
                column: 1,
                message: "`group:` must be the first section".into(),
            });
        };
        match key {
            "rel" => {
                let w = parse_word(value, names, line, value_col)?;
                if w.is_empty() {
                    return Err(InputError::Syntax {
                        line,
                        column: value_col,
                        message: "relator reduces to the empty word".into(),
                    });
                }
                relators.push(w);
            }
            "P" => {
                if p.is_some() {
                    return Err(dup("P"));
                }
                p = Some(parse_word_list(value, names, line, value_col)?);
            }
            "P+" => {
                if p_plus.is_some() {
                    return Err(dup("P+"));
                }
                p_plus = Some((line, parse_word_list(value, names, line, value_col)?));
            }
            "n" => {
                if n.is_some() {
                    return Err(dup("n"));
                }
                n = Some(parse_word(value, names, line, value_col)?);
            }
            "orientable" => {
                if orientable.is_some() {
                    return Err(dup("orientable"));
                }
                orientable = Some(match value.trim() {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(InputError::Syntax {
                            line,
                            column: value_col,
                            message: format!("expected `true` or `false`, found `{other}`"),
                        })
                    }
                });
            }
            other => {
                return Err(InputError::Syntax {
                    line,
                    column: 1,
                    message: format!("unknown section `{other}:`"),
                })
            }
        }
    }

    let names = names.ok_or(InputError::MissingSection("group"))?;
    let p = p.ok_or(InputError::MissingSection("P"))?;
    let orientable = orientable.ok_or(InputError::MissingSection("orientable"))?;
    if orientable {
        if let Some((line, _)) = p_plus {
            return Err(InputError::Syntax {
                line,
                column: 1,
                message: "`P+:` is only meaningful for non-orientable surfaces".into(),
            });
        }
    } else {
        if p_plus.is_none() {
            return Err(InputError::MissingSection("P+"));
        }
        if n.is_none() {
            return Err(InputError::MissingSection("n"));
        }
    }

    Ok(SurfaceKnotInput {
        presentation: GroupPresentation::new(names, relators),
        p_generators: p,
        p_plus_generators: p_plus.map(|(_, w)| w),
        n_word: n,
        surface_orientable: orientable,
        label: label.unwrap_or_default(),
    })
}

//! Line-oriented text format for SSTs.
//!
//! ```text
//! alphabet: 0 1
//! vars: X1 X0
//! states: qA qB
//! initial: qA qB
//! init X0 = 1
//! final qA -> X0 X1
//! trans qA 0 qA { X0 := 0 X0 ; X1 := X1 }
//! ```
//!
//! Variables not mentioned in a `trans` block keep their value. An empty
//! right-hand side denotes the empty word.

use thiserror::Error;

use super::{Sst, SstParts, StateId, Sym, Transition, Update, VarId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("{line}:{col}: update is not copyless: variable `{var}` occurs more than once")]
    Copyless { line: usize, col: usize, var: String },

    #[error("{line}:{col}: unknown {kind} `{name}`")]
    UnknownSymbol {
        line: usize,
        col: usize,
        kind: &'static str,
        name: String,
    },
}

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut toks = Vec::new();
    let mut start: Option<usize> = None;
    let col_of = |byte: usize| code[..byte].chars().count() + 1;
    for (i, c) in code.char_indices() {
        if c.is_whitespace() || matches!(c, '{' | '}' | ';') {
            if let Some(s) = start.take() {
                toks.push(Tok {
                    text: &code[s..i],
                    col: col_of(s),
                });
            }
            if !c.is_whitespace() {
                toks.push(Tok {
                    text: &code[i..i + c.len_utf8()],
                    col: col_of(i),
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        toks.push(Tok {
            text: &code[s..],
            col: col_of(s),
        });
    }
    toks
}

struct Parser {
    line: usize,
    parts: SstParts,
    finals: Vec<bool>,
}

impl Parser {
    fn syntax(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse(ParseError::Syntax {
            line: self.line,
            col,
            msg: msg.into(),
        })
    }

    fn unknown(&self, tok: Tok<'_>, kind: &'static str) -> Error {
        Error::Parse(ParseError::UnknownSymbol {
            line: self.line,
            col: tok.col,
            kind,
            name: tok.text.to_string(),
        })
    }

    fn state(&self, tok: Tok<'_>) -> Result<StateId> {
        self.parts
            .states
            .iter()
            .position(|s| s == tok.text)
            .ok_or_else(|| self.unknown(tok, "state"))
    }

    fn var(&self, tok: Tok<'_>) -> Result<VarId> {
        self.parts
            .vars
            .iter()
            .position(|s| s == tok.text)
            .ok_or_else(|| self.unknown(tok, "variable"))
    }

    fn letter(&self, tok: Tok<'_>) -> Result<char> {
        let mut chars = tok.text.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if self.parts.alphabet.contains(&c) => Ok(c),
            _ => Err(self.unknown(tok, "letter")),
        }
    }

    /// Right-hand side tokens: variable names, or words over the alphabet.
    fn rhs(&self, toks: &[Tok<'_>]) -> Result<Vec<Sym>> {
        let mut syms = Vec::new();
        for &tok in toks {
            if let Some(x) = self.parts.vars.iter().position(|v| v == tok.text) {
                syms.push(Sym::Var(x));
            } else if tok.text == "ε" && !self.parts.alphabet.contains(&'ε') {
                continue;
            } else if tok.text.chars().all(|c| self.parts.alphabet.contains(&c)) {
                syms.extend(tok.text.chars().map(Sym::Letter));
            } else {
                return Err(self.unknown(tok, "symbol"));
            }
        }
        Ok(syms)
    }

    fn check_copyless(&self, syms: &[Sym], col: usize) -> Result<()> {
        match super::update::first_repeated_var(syms.iter(), self.parts.vars.len()) {
            Some(x) => Err(Error::Parse(ParseError::Copyless {
                line: self.line,
                col,
                var: self.parts.vars[x].clone(),
            })),
            None => Ok(()),
        }
    }

    fn names(&self, toks: &[Tok<'_>], what: &str) -> Result<Vec<String>> {
        let mut out: Vec<String> = Vec::new();
        for tok in toks {
            if matches!(tok.text, "{" | "}" | ";" | ":=" | "->" | "=") {
                return Err(self.syntax(tok.col, format!("`{}` is not a valid {what} name", tok.text)));
            }
            if out.iter().any(|n| n == tok.text) {
                return Err(self.syntax(tok.col, format!("duplicate {what} `{}`", tok.text)));
            }
            out.push(tok.text.to_string());
        }
        Ok(out)
    }

    fn declaration(&mut self, toks: &[Tok<'_>]) -> Result<()> {
        let head = toks[0];
        let (key, rest) = match head.text.strip_suffix(':') {
            Some(k) => (k, &toks[1..]),
            None if toks.get(1).map(|t| t.text) == Some(":") => (head.text, &toks[2..]),
            None => (head.text, &toks[1..]),
        };
        match key {
            "alphabet" => {
                let mut letters = Vec::new();
                for tok in rest {
                    let mut chars = tok.text.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) if !matches!(c, '{' | '}' | ';' | '#') => {
                            if letters.contains(&c) {
                                return Err(self.syntax(tok.col, format!("duplicate letter `{c}`")));
                            }
                            letters.push(c)
                        }
                        _ => {
                            return Err(self.syntax(
                                tok.col,
                                format!("letters must be single characters, found `{}`", tok.text),
                            ))
                        }
                    }
                }
                self.parts.alphabet = letters;
            }
            "vars" => {
                let vars = self.names(rest, "variable")?;
                if let Some(tok) = rest.iter().find(|t| {
                    let mut cs = t.text.chars();
                    matches!((cs.next(), cs.next()), (Some(c), None) if self.parts.alphabet.contains(&c))
                }) {
                    return Err(self.syntax(tok.col, format!("variable `{}` clashes with a letter", tok.text)));
                }
                if vars.is_empty() {
                    return Err(self.syntax(head.col, "at least one variable is required"));
                }
                self.parts.vars = vars;
            }
            "states" => {
                self.parts.states = self.names(rest, "state")?;
                self.finals = vec![false; self.parts.states.len()];
            }
            "initial" => {
                for &tok in rest {
                    let q = self.state(tok)?;
                    self.parts.initial.push(q);
                }
            }
            "init" => {
                if rest.len() < 2 || rest[1].text != "=" {
                    return Err(self.syntax(head.col, "expected `init <var> = <word>`"));
                }
                let x = self.var(rest[0])?;
                let syms = self.rhs(&rest[2..])?;
                let mut word = String::new();
                for s in syms {
                    match s {
                        Sym::Letter(c) => word.push(c),
                        Sym::Var(_) => {
                            return Err(self.syntax(head.col, "initial values must be constant words"))
                        }
                    }
                }
                if self.parts.initial_assignment.iter().any(|(y, _)| *y == x) {
                    return Err(self.syntax(rest[0].col, "variable initialized twice"));
                }
                self.parts.initial_assignment.push((x, word));
            }
            "final" => {
                if rest.len() < 2 || rest[1].text != "->" {
                    return Err(self.syntax(head.col, "expected `final <state> -> <expression>`"));
                }
                let q = self.state(rest[0])?;
                if self.finals[q] {
                    return Err(self.syntax(rest[0].col, "final output declared twice"));
                }
                let expr = self.rhs(&rest[2..])?;
                self.check_copyless(&expr, rest[1].col)?;
                self.finals[q] = true;
                self.parts.final_output.push((q, expr));
            }
            "trans" => self.transition(head, rest)?,
            _ => return Err(self.syntax(head.col, format!("unknown declaration `{}`", head.text))),
        }
        Ok(())
    }

    fn transition(&mut self, head: Tok<'_>, rest: &[Tok<'_>]) -> Result<()> {
        if rest.len() < 5 {
            return Err(self.syntax(head.col, "expected `trans <src> <letter> <dst> { ... }`"));
        }
        let source = self.state(rest[0])?;
        let letter = self.letter(rest[1])?;
        let target = self.state(rest[2])?;
        let open = rest[3];
        if open.text != "{" {
            return Err(self.syntax(open.col, "expected `{`"));
        }
        let close = rest[rest.len() - 1];
        if close.text != "}" {
            return Err(self.syntax(close.col, "expected `}` at end of line"));
        }
        let nvars = self.parts.vars.len();
        let mut images: Vec<Option<Vec<Sym>>> = vec![None; nvars];
        let body = &rest[4..rest.len() - 1];
        for entry in body.split(|t| t.text == ";") {
            if entry.is_empty() {
                continue;
            }
            if entry.len() < 2 || entry[1].text != ":=" {
                return Err(self.syntax(entry[0].col, "expected `<var> := <expression>`"));
            }
            let x = self.var(entry[0])?;
            if images[x].is_some() {
                return Err(self.syntax(entry[0].col, format!("variable `{}` assigned twice", entry[0].text)));
            }
            if let Some(tok) = entry[2..].iter().find(|t| matches!(t.text, "{" | "}" | ":=")) {
                return Err(self.syntax(tok.col, format!("unexpected `{}`", tok.text)));
            }
            images[x] = Some(self.rhs(&entry[2..])?);
        }
        let images: Vec<Vec<Sym>> = images
            .into_iter()
            .enumerate()
            .map(|(x, img)| img.unwrap_or_else(|| vec![Sym::Var(x)]))
            .collect();
        let update = Update::new(images);
        if let Some(x) = update.copy_violation() {
            return Err(Error::Parse(ParseError::Copyless {
                line: self.line,
                col: open.col,
                var: self.parts.vars[x].clone(),
            }));
        }
        self.parts.transitions.push(Transition {
            source,
            letter,
            update,
            target,
        });
        Ok(())
    }
}

/// Parses and validates an SST document.
pub fn parse_sst(text: &str) -> Result<Sst> {
    let mut p = Parser {
        line: 0,
        parts: SstParts::default(),
        finals: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        p.line = i + 1;
        let toks = tokenize(line);
        if toks.is_empty() {
            continue;
        }
        p.declaration(&toks)?;
    }
    if p.parts.vars.is_empty() {
        return Err(Error::Parse(ParseError::Syntax {
            line: p.line.max(1),
            col: 1,
            msg: "missing `vars:` declaration".into(),
        }));
    }
    Sst::new(p.parts)
}

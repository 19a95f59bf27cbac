//! Lexer and recursive-descent parser shared by the term and λ grammars.
//!
//! Term atoms: `B C I K W cc a p gamma kappa e chi chi' frak-c`, `hN`, `delta`,
//! `$name` (other oracles), `n:N` (numeral sugar). The usual Greek spellings
//! `γ κ χ χ′ 𝔠 δ` are accepted too. Application is juxtaposition and
//! associates to the left; parentheses group.

use std::sync::Arc;

use thiserror::Error;

use super::term::{numeral, Instr, Term};
use crate::compile::LambdaTerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Lambda,
    Dot,
    Atom(Term),
    Ident(String),
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn classify(word: &str) -> Tok {
    if let Some(i) = Instr::from_name(word) {
        return Tok::Atom(Term::Instr(i));
    }
    if word == "delta" {
        return Tok::Atom(Term::delta());
    }
    if let Some(digits) = word.strip_prefix('h') {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(i) = digits.parse() {
                return Tok::Atom(Term::H(i));
            }
        }
    }
    Tok::Ident(word.to_string())
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '\\' | 'λ' => Some(Tok::Lambda),
            '.' => Some(Tok::Dot),
            'γ' => Some(Tok::Atom(Term::FORK)),
            'κ' => Some(Tok::Atom(Term::KAPPA)),
            '𝔠' => Some(Tok::Atom(Term::FRAK)),
            'δ' => Some(Tok::Atom(Term::delta())),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((pos, tok));
            continue;
        }
        if c == 'χ' {
            chars.next();
            let primed = matches!(chars.peek(), Some((_, '\'' | '′')));
            if primed {
                chars.next();
            }
            let atom = if primed { Term::CHI_PRIME } else { Term::CHI };
            out.push((pos, Tok::Atom(atom)));
            continue;
        }
        if c == '$' {
            chars.next();
            let mut name = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !is_word_char(d) {
                    break;
                }
                name.push(d);
                chars.next();
            }
            if name.is_empty() {
                return Err(ParseError::new(pos, "expected oracle name after `$`"));
            }
            out.push((pos, Tok::Atom(Term::oracle(&name))));
            continue;
        }
        if !is_word_start(c) {
            return Err(ParseError::new(pos, format!("unexpected character `{c}`")));
        }
        let mut word = String::new();
        while let Some(&(_, d)) = chars.peek() {
            if !is_word_char(d) {
                break;
            }
            word.push(d);
            chars.next();
        }
        if word == "n" && matches!(chars.peek(), Some((_, ':'))) {
            chars.next();
            let mut digits = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                chars.next();
            }
            let n: u64 = digits
                .parse()
                .map_err(|_| ParseError::new(pos, "expected decimal after `n:`"))?;
            out.push((pos, Tok::Atom(numeral(n))));
            continue;
        }
        if word == "frak" && src[pos + 4..].starts_with("-c") {
            chars.next();
            chars.next();
            if matches!(chars.peek(), Some(&(_, d)) if is_word_char(d)) {
                return Err(ParseError::new(pos, "malformed `frak-c`"));
            }
            out.push((pos, Tok::Atom(Term::FRAK)));
            continue;
        }
        out.push((pos, classify(&word)));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    binders: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn lterm(&mut self) -> Result<LambdaTerm, ParseError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let mut acc = self
            .latom()?
            .ok_or_else(|| ParseError::new(self.offset(), "expected a term"))?;
        loop {
            if self.peek() == Some(&Tok::Lambda) {
                let body = self.lambda()?;
                return Ok(LambdaTerm::app_merged(acc, body));
            }
            match self.latom()? {
                Some(arg) => acc = LambdaTerm::app_merged(acc, arg),
                None => return Ok(acc),
            }
        }
    }

    fn lambda(&mut self) -> Result<LambdaTerm, ParseError> {
        let at = self.offset();
        if !self.binders {
            return Err(ParseError::new(at, "λ-abstraction is not allowed in a combinator term"));
        }
        self.pos += 1;
        let mut names = Vec::new();
        while let Some(Tok::Ident(name)) = self.peek() {
            names.push(name.clone());
            self.pos += 1;
        }
        if names.is_empty() {
            return Err(ParseError::new(self.offset(), "expected a variable after λ"));
        }
        if self.peek() != Some(&Tok::Dot) {
            return Err(ParseError::new(self.offset(), "expected `.`"));
        }
        self.pos += 1;
        let body = self.lterm()?;
        Ok(names.into_iter().rev().fold(body, |b, x| LambdaTerm::lam(&x, b)))
    }

    fn latom(&mut self) -> Result<Option<LambdaTerm>, ParseError> {
        let at = self.offset();
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Ok(None),
        };
        match tok {
            Tok::Atom(t) => {
                self.pos += 1;
                Ok(Some(LambdaTerm::Const(t)))
            }
            Tok::Ident(name) => {
                if !self.binders {
                    return Err(ParseError::new(at, format!("unknown atom `{name}`")));
                }
                self.pos += 1;
                Ok(Some(LambdaTerm::Var(Arc::from(name.as_str()))))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.lterm()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(ParseError::new(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(Some(inner))
            }
            Tok::RParen | Tok::Dot | Tok::Lambda => Ok(None),
        }
    }
}

fn parse_with(src: &str, binders: bool) -> Result<LambdaTerm, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0, end: src.len(), binders };
    let t = parser.lterm()?;
    if parser.pos != parser.toks.len() {
        return Err(ParseError::new(parser.offset(), "unexpected trailing input"));
    }
    Ok(t)
}

/// Parses a λc-term: the term grammar extended with `\x. body` (or `λx. body`).
pub fn parse_lambda(src: &str) -> Result<LambdaTerm, ParseError> {
    parse_with(src, true)
}

/// Parses a combinator term.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let lt = parse_with(src, false)?;
    Ok(lt.to_term().expect("binder-free parse yields a closed term"))
}

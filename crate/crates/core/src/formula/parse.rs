//! Text syntax:
//!
//! ```text
//! decl     := ("var" | "param") ident {"," ident} ";"
//! input    := {decl} formula
//! formula  := iff ; iff := impl {"<->" impl} ; impl := disj ["->" impl]
//! disj     := conj {"|" conj} ; conj := unary {"&" unary}
//! unary    := "!" unary | "exists" ident "." unary | "forall" ident "." unary
//!           | "(" formula ")" | atom | "true" | "false"
//! atom     := ident ("=" | "!=") ident                      (pure set)
//!           | linterm ("=" | "!=") linterm                  (vector space)
//! linterm  := [coeff "*"] ident {("+" | "-") [coeff "*"] ident} | "0"
//! ```
//!
//! Documents start with a `theory pure_set` or `theory vector_space p=<prime>`
//! header and may be split into named sections (`V:`, `W:`, `E:`, `PSI:`).
//! `#` starts a comment that runs to the end of the line.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use super::transform::{rename_with, NameGen};
use super::{Atom, Formula, Fp, LinTerm, Symbol, SymbolKind, TheoryTag};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String, found: String },
    ZeroCoefficient(String),
    ParamRebound(String),
    Redeclared(String),
    Header(String),
    Section(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error: expected {expected}, found {found}")
            }
            ParseErrorKind::ZeroCoefficient(c) => {
                write!(f, "coefficient {c} is not a nonzero element of F_p")
            }
            ParseErrorKind::ParamRebound(n) => write!(f, "parameter `{n}` cannot be bound"),
            ParseErrorKind::Redeclared(n) => write!(f, "symbol `{n}` declared more than once"),
            ParseErrorKind::Header(m) => write!(f, "bad theory header: {m}"),
            ParseErrorKind::Section(m) => write!(f, "bad section layout: {m}"),
        }
    }
}

impl ParseError {
    fn shifted(mut self, by: usize) -> Self {
        self.offset += by;
        self
    }
}

const KEYWORDS: &[&str] = &["var", "param", "exists", "forall", "true", "false", "theory"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    Bang,
    NotEq,
    Eq,
    Amp,
    Pipe,
    Arrow,
    Iff,
    Dot,
    Comma,
    Semi,
    Star,
    Plus,
    Minus,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Num(s) => return write!(f, "`{s}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Bang => "`!`",
            Tok::NotEq => "`!=`",
            Tok::Eq => "`=`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Arrow => "`->`",
            Tok::Iff => "`<->`",
            Tok::Dot => "`.`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Star => "`*`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let (tok, len) = if c.is_ascii_alphabetic() || c == b'_' {
            let mut j = i + 1;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            (Tok::Ident(text[i..j].to_owned()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i + 1;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            (Tok::Num(text[i..j].to_owned()), j - i)
        } else if two(b"<->") {
            (Tok::Iff, 3)
        } else if two(b"->") {
            (Tok::Arrow, 2)
        } else if two(b"!=") {
            (Tok::NotEq, 2)
        } else {
            let t = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'!' => Tok::Bang,
                b'=' => Tok::Eq,
                b'&' => Tok::Amp,
                b'|' => Tok::Pipe,
                b'.' => Tok::Dot,
                b',' => Tok::Comma,
                b';' => Tok::Semi,
                b'*' => Tok::Star,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                _ => {
                    let ch = text[i..].chars().next().unwrap();
                    return Err(ParseError {
                        offset: i,
                        kind: ParseErrorKind::Syntax {
                            expected: "a token".into(),
                            found: format!("`{ch}`"),
                        },
                    });
                }
            };
            (t, 1)
        };
        toks.push((tok, start));
        i += len;
    }
    toks.push((Tok::Eof, text.len()));
    Ok(toks)
}

/// A parsed `input`: declarations plus a formula with bound variables
/// renamed apart from each other and from every free symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Input {
    /// `var` declarations, one group per declaration statement.
    pub var_groups: Vec<Vec<Symbol>>,
    pub params: Vec<Symbol>,
    pub formula: Formula,
}

impl Input {
    /// Declared variables followed by undeclared free ones.
    pub fn variables(&self) -> Vec<Symbol> {
        let mut vars: Vec<Symbol> = self.var_groups.iter().flatten().cloned().collect();
        for v in self.formula.free_symbols().variables {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }

    /// Declared parameters followed by undeclared ones (none can exist
    /// after parsing, but inherited declarations may be unused).
    pub fn parameters(&self) -> Vec<Symbol> {
        let mut ps = self.params.clone();
        for p in self.formula.free_symbols().parameters {
            if !ps.contains(&p) {
                ps.push(p);
            }
        }
        ps
    }
}

/// Parses an `input` (declarations then a formula) and returns the formula.
pub fn parse(text: &str, theory: TheoryTag) -> Result<Formula, ParseError> {
    parse_input(text, theory).map(|i| i.formula)
}

pub fn parse_input(text: &str, theory: TheoryTag) -> Result<Input, ParseError> {
    parse_input_with(text, theory, &[])
}

fn parse_input_with(
    text: &str,
    theory: TheoryTag,
    inherited_params: &[Symbol],
) -> Result<Input, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        theory,
        params: BTreeSet::new(),
    };
    let mut decls = p.declarations()?;
    for ip in inherited_params.iter().rev() {
        if !decls.params.contains(ip) {
            decls.params.insert(0, ip.clone());
        }
    }
    p.params = decls.params.iter().map(|s| s.name().to_owned()).collect();
    let raw = p.formula()?;
    p.expect(Tok::Eof, "end of input")?;
    let formula = resolve(raw, &decls);
    Ok(Input {
        var_groups: decls.var_groups,
        params: decls.params,
        formula,
    })
}

#[derive(Default)]
struct Decls {
    var_groups: Vec<Vec<Symbol>>,
    params: Vec<Symbol>,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    theory: TheoryTag,
    /// declared parameter names, which may not be bound
    params: BTreeSet<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Syntax {
                expected: expected.to_owned(),
                found: self.peek().to_string(),
            },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("an identifier")),
        }
    }

    fn declarations(&mut self) -> Result<Decls, ParseError> {
        let mut decls = Decls::default();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        while self.is_keyword("var") || self.is_keyword("param") {
            let is_param = self.is_keyword("param");
            self.bump();
            let mut group = Vec::new();
            loop {
                let at = self.offset();
                let name = self.ident()?;
                if !seen.insert(name.clone()) {
                    return Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::Redeclared(name),
                    });
                }
                group.push(name);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::Semi, "`,` or `;`")?;
            if is_param {
                decls
                    .params
                    .extend(group.iter().map(|n| Symbol::param(n)));
            } else {
                decls
                    .var_groups
                    .push(group.iter().map(|n| Symbol::var(n)).collect());
            }
        }
        Ok(decls)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::And(vec![
                Formula::implies(lhs.clone(), rhs.clone()),
                Formula::implies(rhs, lhs),
            ]);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Pipe {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "exists" || kw == "forall" => {
                self.bump();
                let at = self.offset();
                let name = self.ident()?;
                if self.params.contains(&name) {
                    return Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::ParamRebound(name),
                    });
                }
                let v = Symbol::var(&name);
                self.expect(Tok::Dot, "`.`")?;
                let body = self.unary()?;
                Ok(if kw == "exists" {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                })
            }
            Tok::Ident(kw) if kw == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(kw) if kw == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(_) | Tok::Num(_) => self.atom(),
            _ => Err(self.error("a formula")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.theory {
            TheoryTag::PureSet => {
                let a = Symbol::var(&self.ident()?);
                let negated = self.relation()?;
                let b = Symbol::var(&self.ident()?);
                let atom = Formula::Atom(Atom::Eq(a, b));
                Ok(if negated { Formula::not(atom) } else { atom })
            }
            TheoryTag::VectorSpace(fp) => {
                let lhs = self.linterm(fp)?;
                let negated = self.relation()?;
                let rhs = self.linterm(fp)?;
                let atom = Formula::Atom(Atom::Lin(lhs.sub(&rhs)));
                Ok(if negated { Formula::not(atom) } else { atom })
            }
        }
    }

    /// Returns true for `!=`.
    fn relation(&mut self) -> Result<bool, ParseError> {
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(false)
            }
            Tok::NotEq => {
                self.bump();
                Ok(true)
            }
            _ => Err(self.error("`=` or `!=`")),
        }
    }

    fn linterm(&mut self, fp: Fp) -> Result<LinTerm, ParseError> {
        if let Tok::Num(n) = self.peek() {
            if *self.peek_at(1) != Tok::Star {
                if n.bytes().all(|b| b == b'0') {
                    self.bump();
                    return Ok(LinTerm::zero(fp));
                }
                return Err(self.error("`0`, an identifier or `coeff *`"));
            }
        }
        let mut term = LinTerm::zero(fp);
        let mut sign_negative = false;
        loop {
            let coeff = self.coefficient(fp)?;
            let name = self.ident()?;
            let c = if sign_negative { fp.neg(coeff) } else { coeff };
            term = term.plus(&Symbol::var(&name), c);
            match self.peek() {
                Tok::Plus => sign_negative = false,
                Tok::Minus => sign_negative = true,
                _ => break,
            }
            self.bump();
        }
        Ok(term)
    }

    fn coefficient(&mut self, fp: Fp) -> Result<u64, ParseError> {
        if let Tok::Num(n) = self.peek().clone() {
            let at = self.offset();
            self.bump();
            self.expect(Tok::Star, "`*`")?;
            let reduced = n
                .bytes()
                .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % fp.p());
            if reduced == 0 {
                return Err(ParseError {
                    offset: at,
                    kind: ParseErrorKind::ZeroCoefficient(n),
                });
            }
            return Ok(reduced);
        }
        Ok(1)
    }
}

/// Classifies free identifiers by declaration and renames bound variables
/// apart.
fn resolve(raw: Formula, decls: &Decls) -> Formula {
    let params: BTreeSet<&str> = decls.params.iter().map(|s| s.name()).collect();
    let mut names = NameGen::new(
        decls
            .var_groups
            .iter()
            .flatten()
            .chain(&decls.params)
            .map(|s| s.name()),
    );
    for s in raw.free_symbols().variables {
        names.reserve(s.name());
    }
    let mut scope: Vec<(Symbol, Symbol)> = Vec::new();
    rebuild(&raw, &params, &mut names, &mut scope)
}

fn rebuild(
    f: &Formula,
    params: &BTreeSet<&str>,
    names: &mut NameGen,
    scope: &mut Vec<(Symbol, Symbol)>,
) -> Formula {
    let lookup = |s: &Symbol, scope: &[(Symbol, Symbol)]| -> Symbol {
        if let Some((_, to)) = scope.iter().rev().find(|(from, _)| from == s) {
            return to.clone();
        }
        if params.contains(s.name()) {
            s.with_kind(SymbolKind::Parameter)
        } else {
            s.clone()
        }
    };
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => {
            let table: HashMap<Symbol, Symbol> = a
                .symbols()
                .into_iter()
                .map(|s| (s.clone(), lookup(s, scope)))
                .collect();
            rename_with(f, &table)
        }
        Formula::Not(g) => Formula::not(rebuild(g, params, names, scope)),
        Formula::And(fs) => Formula::And(
            fs.iter()
                .map(|g| rebuild(g, params, names, scope))
                .collect(),
        ),
        Formula::Or(fs) => Formula::Or(
            fs.iter()
                .map(|g| rebuild(g, params, names, scope))
                .collect(),
        ),
        Formula::Implies(a, b) => Formula::implies(
            rebuild(a, params, names, scope),
            rebuild(b, params, names, scope),
        ),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let nv = Symbol::var(&names.fresh(v.name()));
            scope.push((v.clone(), nv.clone()));
            let body = rebuild(g, params, names, scope);
            scope.pop();
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(nv, body)
            } else {
                Formula::forall(nv, body)
            }
        }
    }
}

/// A named section of a document, e.g. `E: var x, y; x != y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub input: Input,
}

/// A whole input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub theory: TheoryTag,
    /// The formula of a file without sections.
    pub main: Option<Input>,
    pub sections: Vec<Section>,
}

impl Document {
    pub fn section(&self, name: &str) -> Option<&Input> {
        self.sections
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.input)
    }
}

fn section_header(line: &str) -> Option<(&str, usize)> {
    let trimmed = line.trim_start();
    let lead = line.len() - trimmed.len();
    let bytes = trimmed.as_bytes();
    if !bytes.first()?.is_ascii_uppercase() {
        return None;
    }
    let end = bytes
        .iter()
        .position(|b| !(b.is_ascii_uppercase() || b.is_ascii_digit() || *b == b'_'))?;
    (bytes[end] == b':').then(|| (&trimmed[..end], lead + end + 1))
}

fn parse_header(line: &str, at: usize) -> Result<TheoryTag, ParseError> {
    let err = |m: &str| ParseError {
        offset: at,
        kind: ParseErrorKind::Header(m.to_owned()),
    };
    let mut words = line.split_whitespace();
    if words.next() != Some("theory") {
        return Err(err("first line must be `theory pure_set` or `theory vector_space p=<prime>`"));
    }
    match words.next() {
        Some("pure_set") if words.next().is_none() => Ok(TheoryTag::PureSet),
        Some("vector_space") => {
            let rest: String = words.collect::<Vec<_>>().join("");
            let p = rest
                .strip_prefix("p=")
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| err("expected `p=<prime>`"))?;
            Fp::new(p)
                .map(TheoryTag::VectorSpace)
                .ok_or_else(|| err(&format!("{p} is not a prime")))
        }
        _ => Err(err("unknown theory")),
    }
}

/// Parses a complete file: theory header, optional shared `param`
/// declarations, then either a single input or named sections. Shared
/// parameter declarations are visible in every section.
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut offset = 0;
    let mut theory = None;
    let mut header_end = 0;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("").trim();
        if !content.is_empty() {
            theory = Some(parse_header(content, offset)?);
            header_end = offset + line.len();
            break;
        }
        offset += line.len();
    }
    let theory = theory.ok_or(ParseError {
        offset: text.len(),
        kind: ParseErrorKind::Header("missing theory header".into()),
    })?;

    // (name, body start, body end)
    let mut cuts: Vec<(Option<String>, usize)> = vec![(None, header_end)];
    let mut pos = header_end;
    for line in text[header_end..].split_inclusive('\n') {
        if let Some((name, body)) = section_header(line) {
            cuts.push((Some(name.to_owned()), pos + body));
        }
        pos += line.len();
    }
    let span = |i: usize| -> (usize, usize) {
        let start = cuts[i].1;
        let end = if i + 1 < cuts.len() {
            // the next body starts after its `NAME:` header
            let next = cuts[i + 1].1;
            let hdr = text[..next].rfind('\n').map_or(0, |n| n + 1);
            hdr.max(start)
        } else {
            text.len()
        };
        (start, end)
    };

    if cuts.len() == 1 {
        let (s, e) = span(0);
        let main = parse_input(&text[s..e], theory).map_err(|er| er.shifted(s))?;
        return Ok(Document {
            theory,
            main: Some(main),
            sections: Vec::new(),
        });
    }

    let (s, e) = span(0);
    let pre_toks = lex(&text[s..e]).map_err(|er| er.shifted(s))?;
    let mut pre = Parser {
        toks: pre_toks,
        pos: 0,
        theory,
        params: BTreeSet::new(),
    };
    let decls = pre.declarations().map_err(|er| er.shifted(s))?;
    if *pre.peek() != Tok::Eof {
        return Err(pre.error("only `param` declarations before sections").shifted(s));
    }
    if !decls.var_groups.is_empty() {
        return Err(ParseError {
            offset: s,
            kind: ParseErrorKind::Section("`var` declarations belong inside sections".into()),
        });
    }

    let mut sections: Vec<Section> = Vec::new();
    for i in 1..cuts.len() {
        let name = cuts[i].0.clone().unwrap();
        let (s, e) = span(i);
        if sections.iter().any(|sec| sec.name == name) {
            return Err(ParseError {
                offset: s,
                kind: ParseErrorKind::Section(format!("duplicate section `{name}`")),
            });
        }
        let input =
            parse_input_with(&text[s..e], theory, &decls.params).map_err(|er| er.shifted(s))?;
        sections.push(Section { name, input });
    }
    Ok(Document {
        theory,
        main: None,
        sections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> TheoryTag {
        TheoryTag::VectorSpace(Fp::new(2).unwrap())
    }

    #[test]
    fn disequality_is_negated_atom() {
        let f = parse("x != y", TheoryTag::PureSet).unwrap();
        assert_eq!(f, Formula::neq(Symbol::var("x"), Symbol::var("y")));
    }

    #[test]
    fn vector_space_existential() {
        let fp = Fp::new(2).unwrap();
        let f = parse("exists z. x + z = 0", f2()).unwrap();
        let t = LinTerm::symbol(fp, Symbol::var("x")).plus(&Symbol::var("z"), 1);
        assert_eq!(f, Formula::exists(Symbol::var("z"), Formula::lin_zero(t)));
    }

    #[test]
    fn incomplete_input_reports_offset() {
        let e = parse("x = ", TheoryTag::PureSet).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(matches!(e.kind, ParseErrorKind::Syntax { .. }));
    }

    #[test]
    fn zero_coefficient_rejected() {
        let e = parse("2*x = 0", f2()).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ZeroCoefficient(_)));
        assert_eq!(e.offset, 0);
    }

    #[test]
    fn coefficients_reduce_mod_p() {
        let f3 = Fp::new(3).unwrap();
        let f = parse("4*x = y", TheoryTag::VectorSpace(f3)).unwrap();
        let t = LinTerm::from_pairs(f3, [(Symbol::var("x"), 1), (Symbol::var("y"), -1)]);
        assert_eq!(f, Formula::lin_zero(t));
    }

    #[test]
    fn parameters_cannot_be_bound() {
        let e = parse("param a; exists a. a = a", TheoryTag::PureSet).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ParamRebound(_)));
        assert_eq!(e.offset, 16);
    }

    #[test]
    fn redeclaration_rejected() {
        let e = parse("var x; param x; x = x", TheoryTag::PureSet).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Redeclared(_)));
    }

    #[test]
    fn bound_variables_renamed_apart() {
        let input = parse_input(
            "var x; x = y & (exists x. x != y) & (exists x. exists x. x = y)",
            TheoryTag::PureSet,
        )
        .unwrap();
        let names = input.formula.all_names();
        assert!(names.contains("x_1") && names.contains("x_2") && names.contains("x_3"));
        assert_eq!(input.variables(), vec![Symbol::var("x"), Symbol::var("y")]);
    }

    #[test]
    fn precedence() {
        let f = parse("a = b | b = c & c = d -> a = d", TheoryTag::PureSet).unwrap();
        let atom = |x: &str, y: &str| Formula::eq(Symbol::var(x), Symbol::var(y));
        assert_eq!(
            f,
            Formula::implies(
                Formula::Or(vec![
                    atom("a", "b"),
                    Formula::And(vec![atom("b", "c"), atom("c", "d")])
                ]),
                atom("a", "d")
            )
        );
    }

    #[test]
    fn documents_with_sections() {
        let text = "theory vector_space p=3\nparam a;\nV: var x; true\nW: var y;\n true\nE: var x, y; x + y = a\n";
        let doc = parse_document(text).unwrap();
        assert!(doc.main.is_none());
        assert_eq!(doc.sections.len(), 3);
        let e = doc.section("E").unwrap();
        assert_eq!(e.params, vec![Symbol::param("a")]);
        assert_eq!(e.variables(), vec![Symbol::var("x"), Symbol::var("y")]);
        assert_eq!(doc.section("W").unwrap().formula, Formula::True);
    }

    #[test]
    fn document_header_errors() {
        assert!(parse_document("var x; true").is_err());
        assert!(parse_document("theory vector_space p=4\ntrue").is_err());
        let doc = parse_document("# comment\ntheory pure_set\nvar x, y; x != y\n").unwrap();
        assert_eq!(doc.theory, TheoryTag::PureSet);
        assert!(doc.main.is_some());
    }

    #[test]
    fn document_errors_are_offset_into_file() {
        let text = "theory pure_set\nvar x; x = ";
        let e = parse_document(text).unwrap_err();
        assert_eq!(e.offset, text.len());
    }
}

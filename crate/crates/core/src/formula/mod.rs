//! First-order formulas over the two built-in theories: syntax tree,
//! parser, printer and the usual syntactic transformations.

mod linear;
mod parse;
mod render;
mod transform;

use std::fmt;
use std::sync::Arc;

pub use linear::{is_prime, Fp, LinTerm};
pub use parse::{parse, parse_document, parse_input, Document, Input, ParseError, Section};
pub use transform::{FreeSymbols, NameGen};

/// Whether a symbol ranges over the structure (a variable, possibly bound)
/// or names a fixed but unknown element (a parameter).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Variable,
    Parameter,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: Arc<str>,
    kind: SymbolKind,
}

impl Symbol {
    pub fn new(name: &str, kind: SymbolKind) -> Self {
        Self {
            name: Arc::from(name),
            kind,
        }
    }

    pub fn var(name: &str) -> Self {
        Self::new(name, SymbolKind::Variable)
    }

    pub fn param(name: &str) -> Self {
        Self::new(name, SymbolKind::Parameter)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_param(&self) -> bool {
        self.kind == SymbolKind::Parameter
    }

    pub fn with_kind(&self, kind: SymbolKind) -> Self {
        Self {
            name: self.name.clone(),
            kind,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Which atom grammar a formula uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoryTag {
    PureSet,
    VectorSpace(Fp),
}

impl fmt::Display for TheoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryTag::PureSet => f.write_str("pure_set"),
            TheoryTag::VectorSpace(fp) => write!(f, "vector_space p={}", fp.p()),
        }
    }
}

/// An atomic formula.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `s = t` in the language of pure equality.
    Eq(Symbol, Symbol),
    /// `t = 0` for a linear term over `F_p`.
    Lin(LinTerm),
}

impl Atom {
    /// `Some(true)` for `x = x` and `0 = 0`; atoms are never trivially false.
    pub fn trivial_value(&self) -> Option<bool> {
        match self {
            Atom::Eq(a, b) if a == b => Some(true),
            Atom::Lin(t) if t.is_zero() => Some(true),
            _ => None,
        }
    }

    pub fn symbols(&self) -> Vec<&Symbol> {
        match self {
            Atom::Eq(a, b) => vec![a, b],
            Atom::Lin(t) => t.symbols().collect(),
        }
    }

    pub fn mentions(&self, s: &Symbol) -> bool {
        match self {
            Atom::Eq(a, b) => a == s || b == s,
            Atom::Lin(t) => t.coeff(s) != 0,
        }
    }

    pub fn substitute(&self, s: &Symbol, t: &Term) -> Atom {
        match self {
            Atom::Eq(a, b) => {
                let pick = |x: &Symbol| match t {
                    Term::Sym(r) if x == s => r.clone(),
                    _ => x.clone(),
                };
                if let Term::Lin(lt) = t {
                    // mixing is only meaningful through the linear route
                    let f = lt.field();
                    let lhs = LinTerm::symbol(f, a.clone()).sub(&LinTerm::symbol(f, b.clone()));
                    return Atom::Lin(lhs.substitute(s, lt));
                }
                Atom::Eq(pick(a), pick(b))
            }
            Atom::Lin(lt) => {
                let rep = match t {
                    Term::Sym(r) => LinTerm::symbol(lt.field(), r.clone()),
                    Term::Lin(r) => r.clone(),
                };
                Atom::Lin(lt.substitute(s, &rep))
            }
        }
    }

    pub fn rename(&self, map: &impl Fn(&Symbol) -> Symbol) -> Atom {
        match self {
            Atom::Eq(a, b) => Atom::Eq(map(a), map(b)),
            Atom::Lin(t) => Atom::Lin(t.rename(map)),
        }
    }

    /// Symmetric-pair ordering for equalities, monic scaling for linear atoms.
    pub fn canonical(&self) -> Atom {
        match self {
            Atom::Eq(a, b) if b < a => Atom::Eq(b.clone(), a.clone()),
            Atom::Eq(..) => self.clone(),
            Atom::Lin(t) => Atom::Lin(t.monic()),
        }
    }
}

/// A replacement for a symbol in [`Formula::substitute`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Sym(Symbol),
    Lin(LinTerm),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Symbol, Box<Formula>),
    Forall(Symbol, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn eq(a: Symbol, b: Symbol) -> Self {
        Formula::Atom(Atom::Eq(a, b))
    }

    pub fn neq(a: Symbol, b: Symbol) -> Self {
        Formula::not(Formula::eq(a, b))
    }

    pub fn lin_zero(t: LinTerm) -> Self {
        Formula::Atom(Atom::Lin(t))
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: Symbol, body: Formula) -> Self {
        Formula::Exists(v, Box::new(body))
    }

    pub fn forall(v: Symbol, body: Formula) -> Self {
        Formula::Forall(v, Box::new(body))
    }

    /// Conjunction; the empty conjunction is `True`, a singleton is unwrapped.
    pub fn and(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; the empty disjunction is `False`, a singleton is unwrapped.
    pub fn or(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Implies(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
        }
    }

    /// Visits every atom.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.push(a),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => {
                f.collect_atoms(out)
            }
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

/// An atom or its negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Self {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Self {
            atom,
            positive: false,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }

    pub fn to_formula(&self) -> Formula {
        let a = Formula::Atom(self.atom.clone());
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }
}

/// A conjunction of literals.
pub type Cube = Vec<Literal>;

pub fn cube_to_formula(cube: &[Literal]) -> Formula {
    Formula::and(cube.iter().map(Literal::to_formula).collect())
}

/// Disjunction of conjunctions.
pub fn cubes_to_formula(cubes: &[Cube]) -> Formula {
    Formula::or(cubes.iter().map(|c| cube_to_formula(c)).collect())
}

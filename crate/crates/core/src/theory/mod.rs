//! Theory plugins: literal normalization, one-variable quantifier
//! elimination, exact cell counting and parameter patterns for the pure set
//! and for `F_p`-vector spaces.

pub mod linalg;
pub mod pure_set;
pub mod vector_space;

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Atom, Cube, Formula, LinTerm, Symbol, Term, TheoryTag};

pub use pure_set::EqPattern;
pub use vector_space::LinPattern;

/// The two built-in theories.
pub type Theory = TheoryTag;

/// A complete description of how the parameters relate to each other,
/// under which the count of a formula is a single polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParamPattern {
    Eq(EqPattern),
    Lin(LinPattern),
}

impl ParamPattern {
    /// All parameters distinct (pure set) or linearly independent (vector
    /// space).
    pub fn generic(theory: Theory, params: &[Symbol]) -> Self {
        match theory {
            Theory::PureSet => ParamPattern::Eq(EqPattern::discrete(params)),
            Theory::VectorSpace(f) => ParamPattern::Lin(LinPattern::independent(f, params)),
        }
    }

    pub fn params(&self) -> Vec<Symbol> {
        match self {
            ParamPattern::Eq(p) => p.params(),
            ParamPattern::Lin(p) => p.params().to_vec(),
        }
    }

    pub fn covers(&self, s: &Symbol) -> bool {
        match self {
            ParamPattern::Eq(p) => p.block_of(s).is_some(),
            ParamPattern::Lin(p) => p.params().contains(s),
        }
    }

    pub fn check_covers<'a>(&self, params: impl IntoIterator<Item = &'a Symbol>) -> Result<()> {
        for s in params {
            if !self.covers(s) {
                return Err(Error::PatternIncomplete(s.name().to_owned()));
            }
        }
        Ok(())
    }

    pub fn check_theory(&self, theory: Theory) -> Result<()> {
        match (self, theory) {
            (ParamPattern::Eq(_), Theory::PureSet) => Ok(()),
            (ParamPattern::Lin(p), Theory::VectorSpace(f)) if p.field() == f => Ok(()),
            _ => Err(Error::TheoryMismatch(format!(
                "pattern `{self}` does not belong to theory {theory}"
            ))),
        }
    }

    /// The parameters-only formula that holds exactly of the tuples
    /// realizing this pattern.
    pub fn to_formula(&self) -> Formula {
        match self {
            ParamPattern::Eq(p) => p.to_formula(),
            ParamPattern::Lin(p) => p.to_formula(),
        }
    }

    /// Reads a pattern over `params`. Pure set: blocks of equal parameters
    /// separated by `|`, members by `,`, e.g. `a,b|c`. Vector space: linear
    /// relations separated by `;`, e.g. `a + b = 0; c = 0`. Parameters left
    /// out are distinct from everything (resp. independent).
    pub fn parse(theory: Theory, params: &[Symbol], text: &str) -> Result<Self> {
        let lookup = |name: &str| -> Result<Symbol> {
            params
                .iter()
                .find(|s| s.name() == name)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("`{name}` is not a declared parameter")))
        };
        match theory {
            Theory::PureSet => {
                let mut blocks = Vec::new();
                for block in text.split('|').map(str::trim).filter(|b| !b.is_empty()) {
                    blocks.push(
                        block
                            .split(',')
                            .map(|n| lookup(n.trim()))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                for s in params {
                    if !blocks.iter().flatten().any(|t| t == s) {
                        blocks.push(vec![s.clone()]);
                    }
                }
                Ok(ParamPattern::Eq(EqPattern::from_blocks(blocks)?))
            }
            Theory::VectorSpace(field) => {
                let decl = params.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ");
                let mut terms = Vec::new();
                for rel in text.split(';').map(str::trim).filter(|r| !r.is_empty()) {
                    let src = if decl.is_empty() {
                        rel.to_owned()
                    } else {
                        format!("param {decl}; {rel}")
                    };
                    let f = crate::formula::parse(&src, theory)?;
                    if let Some(v) = f.free_symbols().variables.first() {
                        return Err(Error::Invalid(format!("`{v}` is not a declared parameter")));
                    }
                    match f {
                        Formula::Atom(Atom::Lin(t)) => terms.push(t),
                        Formula::Atom(Atom::Eq(a, b)) => terms.push(
                            LinTerm::symbol(field, a).sub(&LinTerm::symbol(field, b)),
                        ),
                        _ => {
                            return Err(Error::Invalid(format!(
                                "`{rel}` is not a linear equation between parameters"
                            )))
                        }
                    }
                }
                Ok(ParamPattern::Lin(LinPattern::from_relations(field, params, &terms)?))
            }
        }
    }

    /// Smallest model size admitting a realization.
    pub fn min_model_size(&self) -> u64 {
        match self {
            ParamPattern::Eq(p) => p.blocks().len() as u64,
            ParamPattern::Lin(p) => p.field().p().pow(p.independent_params().len() as u32),
        }
    }

    /// Adds `extra` as new parameters in general position with respect to
    /// everything already present.
    pub fn extend_generic(&self, extra: &[Symbol]) -> Self {
        match self {
            ParamPattern::Eq(p) => ParamPattern::Eq(p.extend_discrete(extra)),
            ParamPattern::Lin(p) => ParamPattern::Lin(p.extend_independent(extra)),
        }
    }
}

impl fmt::Display for ParamPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// Outcome of eliminating `exists v` from a conjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    /// The equivalent conjunction, or `None` if it is unsatisfiable.
    pub cube: Option<Cube>,
    /// Equivalence holds in every model of size greater than this.
    pub threshold: usize,
    /// The value `v` was solved to, when an equation determined it.
    pub solved: Option<Term>,
}

impl Elimination {
    pub fn to_formula(&self) -> Formula {
        match &self.cube {
            Some(c) => crate::formula::cube_to_formula(c),
            None => Formula::False,
        }
    }
}

/// Normalizes a conjunction and prunes it if it is inconsistent under the
/// pattern. Parameter-only literals are decided by the pattern and dropped.
pub fn simplify_cube(theory: Theory, cube: Cube, pattern: Option<&ParamPattern>) -> Option<Cube> {
    match (theory, pattern) {
        (Theory::PureSet, Some(ParamPattern::Eq(p))) => pure_set::simplify_cube(cube, Some(p)),
        (Theory::PureSet, _) => pure_set::simplify_cube(cube, None),
        (Theory::VectorSpace(f), Some(ParamPattern::Lin(p))) => {
            vector_space::simplify_cube(f, cube, Some(p))
        }
        (Theory::VectorSpace(f), _) => vector_space::simplify_cube(f, cube, None),
    }
}

/// Eliminates `exists v` from a simplified conjunction.
pub fn eliminate_exists(
    theory: Theory,
    v: &Symbol,
    cube: &Cube,
    pattern: Option<&ParamPattern>,
) -> Elimination {
    match (theory, pattern) {
        (Theory::PureSet, Some(ParamPattern::Eq(p))) => pure_set::eliminate_exists(v, cube, Some(p)),
        (Theory::PureSet, _) => pure_set::eliminate_exists(v, cube, None),
        (Theory::VectorSpace(f), Some(ParamPattern::Lin(p))) => {
            vector_space::eliminate_exists(f, v, cube, Some(p))
        }
        (Theory::VectorSpace(f), _) => vector_space::eliminate_exists(f, v, cube, None),
    }
}

/// Enumerates every parameter pattern for `params`.
pub fn enumerate_patterns(
    theory: Theory,
    params: &[Symbol],
    limits: &crate::Limits,
) -> Result<Vec<ParamPattern>> {
    Ok(match theory {
        Theory::PureSet => pure_set::enumerate_patterns(params, limits.max_pure_params)?
            .into_iter()
            .map(ParamPattern::Eq)
            .collect(),
        Theory::VectorSpace(f) => {
            vector_space::enumerate_patterns(f, params, limits.max_vs_pattern_space)?
                .into_iter()
                .map(ParamPattern::Lin)
                .collect()
        }
    })
}

/// The formula `a = b` in the theory's atom grammar.
pub fn equality(theory: Theory, a: &Symbol, b: &Symbol) -> Formula {
    match theory {
        Theory::PureSet => Formula::eq(a.clone(), b.clone()),
        Theory::VectorSpace(f) => Formula::lin_zero(
            crate::formula::LinTerm::symbol(f, a.clone()).sub(&crate::formula::LinTerm::symbol(f, b.clone())),
        ),
    }
}

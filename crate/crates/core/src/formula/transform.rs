use std::collections::{BTreeSet, HashMap};

use super::{Atom, Formula, Symbol, SymbolKind, Term};
use crate::error::{Error, Result};

/// Free symbols split by kind, each in order of first occurrence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeSymbols {
    pub variables: Vec<Symbol>,
    pub parameters: Vec<Symbol>,
}

impl FreeSymbols {
    pub fn all(&self) -> impl Iterator<Item = &Symbol> {
        self.variables.iter().chain(&self.parameters)
    }
}

/// Generates names not present in a reserved set.
#[derive(Clone, Debug, Default)]
pub struct NameGen {
    used: BTreeSet<String>,
}

impl NameGen {
    pub fn new<'a>(reserved: impl IntoIterator<Item = &'a str>) -> Self {
        Self {
            used: reserved.into_iter().map(str::to_owned).collect(),
        }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_owned());
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// `base` itself if free, else `base_1`, `base_2`, ...
    pub fn fresh(&mut self, base: &str) -> String {
        let name = if self.used.contains(base) {
            (1..)
                .map(|i| format!("{base}_{i}"))
                .find(|n| !self.used.contains(n))
                .unwrap()
        } else {
            base.to_owned()
        };
        self.used.insert(name.clone());
        name
    }

    /// Always a new name derived from `base`, never `base` itself.
    pub fn fresh_derived(&mut self, base: &str) -> String {
        self.used.insert(base.to_owned());
        self.fresh(base)
    }
}

impl Formula {
    pub fn free_symbols(&self) -> FreeSymbols {
        let mut out = FreeSymbols::default();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    /// Every symbol name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut names = BTreeSet::new();
        walk_names(self, &mut names);
        names
    }

    /// Negation normal form: `Implies` eliminated, negations only on atoms,
    /// quantifiers kept (with `!exists` turned into `forall !` and dually).
    pub fn to_nnf(&self) -> Formula {
        nnf(self, true)
    }

    /// Capture-avoiding replacement of the free symbol `s` by `t`.
    pub fn substitute(&self, s: &Symbol, t: &Term) -> Result<Formula> {
        let t_syms: Vec<Symbol> = match t {
            Term::Sym(x) => vec![x.clone()],
            Term::Lin(l) => l.symbols().cloned().collect(),
        };
        subst(self, s, t, &t_syms)
    }

    /// Applies `map` to every symbol occurrence, bound or free.
    pub fn rename_symbols(&self, map: &impl Fn(&Symbol) -> Symbol) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.rename(map)),
            Formula::Not(f) => Formula::not(f.rename_symbols(map)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename_symbols(map)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename_symbols(map)).collect()),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_symbols(map), b.rename_symbols(map))
            }
            Formula::Exists(v, f) => Formula::exists(map(v), f.rename_symbols(map)),
            Formula::Forall(v, f) => Formula::forall(map(v), f.rename_symbols(map)),
        }
    }

    /// Renames every bound variable to a fresh name from `names`.
    pub fn freshen_bound(&self, names: &mut NameGen) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.freshen_bound(names)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.freshen_bound(names)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.freshen_bound(names)).collect()),
            Formula::Implies(a, b) => {
                Formula::implies(a.freshen_bound(names), b.freshen_bound(names))
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let nv = Symbol::new(&names.fresh_derived(v.name()), SymbolKind::Variable);
                let body = f
                    .substitute(v, &Term::Sym(nv.clone()))
                    .expect("fresh names cannot be captured")
                    .freshen_bound(names);
                if matches!(self, Formula::Exists(..)) {
                    Formula::exists(nv, body)
                } else {
                    Formula::forall(nv, body)
                }
            }
        }
    }

    /// Folds trivially true atoms and `True`/`False` constants.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => match a.trivial_value() {
                Some(true) => Formula::True,
                Some(false) => Formula::False,
                None => self.clone(),
            },
            Formula::Not(f) => match f.simplify() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                g => Formula::not(g),
            },
            Formula::And(fs) => {
                let mut parts = Vec::new();
                for f in fs {
                    match f.simplify() {
                        Formula::True => {}
                        Formula::False => return Formula::False,
                        g => parts.push(g),
                    }
                }
                Formula::and(parts)
            }
            Formula::Or(fs) => {
                let mut parts = Vec::new();
                for f in fs {
                    match f.simplify() {
                        Formula::False => {}
                        Formula::True => return Formula::True,
                        g => parts.push(g),
                    }
                }
                Formula::or(parts)
            }
            Formula::Implies(a, b) => {
                Formula::or(vec![Formula::not(*a.clone()), *b.clone()]).simplify()
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => match f.simplify() {
                c @ (Formula::True | Formula::False) => c,
                g if matches!(self, Formula::Exists(..)) => Formula::exists(v.clone(), g),
                g => Formula::forall(v.clone(), g),
            },
        }
    }
}

fn push_unique(list: &mut Vec<Symbol>, s: &Symbol) {
    if !list.contains(s) {
        list.push(s.clone());
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<Symbol>, out: &mut FreeSymbols) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom(a) => {
            let syms: Vec<&Symbol> = match a {
                Atom::Eq(x, y) => vec![x, y],
                Atom::Lin(t) => t.symbols().collect(),
            };
            for s in syms {
                if bound.contains(s) {
                    continue;
                }
                match s.kind() {
                    SymbolKind::Variable => push_unique(&mut out.variables, s),
                    SymbolKind::Parameter => push_unique(&mut out.parameters, s),
                }
            }
        }
        Formula::Not(g) => collect_free(g, bound, out),
        Formula::And(fs) | Formula::Or(fs) => {
            fs.iter().for_each(|g| collect_free(g, bound, out))
        }
        Formula::Implies(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            bound.push(v.clone());
            collect_free(g, bound, out);
            bound.pop();
        }
    }
}

fn walk_names(f: &Formula, names: &mut BTreeSet<String>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom(a) => names.extend(a.symbols().into_iter().map(|s| s.name().to_owned())),
        Formula::Not(g) => walk_names(g, names),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| walk_names(g, names)),
        Formula::Implies(a, b) => {
            walk_names(a, names);
            walk_names(b, names);
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            names.insert(v.name().to_owned());
            walk_names(g, names);
        }
    }
}

fn nnf(f: &Formula, positive: bool) -> Formula {
    match (f, positive) {
        (Formula::True, true) | (Formula::False, false) => Formula::True,
        (Formula::True, false) | (Formula::False, true) => Formula::False,
        (Formula::Atom(_), true) => f.clone(),
        (Formula::Atom(_), false) => Formula::not(f.clone()),
        (Formula::Not(g), _) => nnf(g, !positive),
        (Formula::And(fs), true) | (Formula::Or(fs), false) => {
            Formula::And(fs.iter().map(|g| nnf(g, positive)).collect())
        }
        (Formula::Or(fs), true) | (Formula::And(fs), false) => {
            Formula::Or(fs.iter().map(|g| nnf(g, positive)).collect())
        }
        (Formula::Implies(a, b), true) => Formula::Or(vec![nnf(a, false), nnf(b, true)]),
        (Formula::Implies(a, b), false) => Formula::And(vec![nnf(a, true), nnf(b, false)]),
        (Formula::Exists(v, g), true) | (Formula::Forall(v, g), false) => {
            Formula::exists(v.clone(), nnf(g, positive))
        }
        (Formula::Forall(v, g), true) | (Formula::Exists(v, g), false) => {
            Formula::forall(v.clone(), nnf(g, positive))
        }
    }
}

fn subst(f: &Formula, s: &Symbol, t: &Term, t_syms: &[Symbol]) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(a.substitute(s, t)),
        Formula::Not(g) => Formula::not(subst(g, s, t, t_syms)?),
        Formula::And(fs) => Formula::And(
            fs.iter()
                .map(|g| subst(g, s, t, t_syms))
                .collect::<Result<_>>()?,
        ),
        Formula::Or(fs) => Formula::Or(
            fs.iter()
                .map(|g| subst(g, s, t, t_syms))
                .collect::<Result<_>>()?,
        ),
        Formula::Implies(a, b) => {
            Formula::implies(subst(a, s, t, t_syms)?, subst(b, s, t, t_syms)?)
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            if v == s {
                // s is not free below this binder
                return Ok(f.clone());
            }
            if t_syms.contains(v) && mentions_free(g, s) {
                return Err(Error::Capture(s.name().to_owned()));
            }
            let body = subst(g, s, t, t_syms)?;
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(v.clone(), body)
            } else {
                Formula::forall(v.clone(), body)
            }
        }
    })
}

fn mentions_free(f: &Formula, s: &Symbol) -> bool {
    f.free_symbols().all().any(|x| x == s)
}

/// Maps each symbol through a lookup table, leaving others untouched.
pub(crate) fn rename_with(f: &Formula, table: &HashMap<Symbol, Symbol>) -> Formula {
    f.rename_symbols(&|s: &Symbol| table.get(s).cloned().unwrap_or_else(|| s.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Fp, LinTerm, TheoryTag};

    fn ps(text: &str) -> Formula {
        parse(text, TheoryTag::PureSet).unwrap()
    }

    #[test]
    fn free_symbols_in_first_occurrence_order() {
        let f = ps("x != y");
        let fs = f.free_symbols();
        assert_eq!(fs.variables, vec![Symbol::var("x"), Symbol::var("y")]);
        assert!(fs.parameters.is_empty());

        let g = ps("param a; exists x. x != a");
        let fs = g.free_symbols();
        assert!(fs.variables.is_empty());
        assert_eq!(fs.parameters, vec![Symbol::param("a")]);

        assert_eq!(ps("true").free_symbols(), FreeSymbols::default());
    }

    #[test]
    fn nnf_examples() {
        let a = Formula::eq(Symbol::var("x"), Symbol::var("y"));
        let b = Formula::eq(Symbol::var("y"), Symbol::var("z"));
        let f = Formula::not(Formula::And(vec![a.clone(), b.clone()]));
        assert_eq!(
            f.to_nnf(),
            Formula::Or(vec![Formula::not(a.clone()), Formula::not(b.clone())])
        );
        let g = Formula::not(Formula::exists(Symbol::var("x"), a.clone()));
        assert_eq!(
            g.to_nnf(),
            Formula::forall(Symbol::var("x"), Formula::not(a.clone()))
        );
        assert_eq!(Formula::not(Formula::not(a.clone())).to_nnf(), a);
    }

    #[test]
    fn substitution_examples() {
        let f = ps("x = y");
        let g = f
            .substitute(&Symbol::var("x"), &Term::Sym(Symbol::param("a")))
            .unwrap();
        assert_eq!(g, Formula::eq(Symbol::param("a"), Symbol::var("y")));

        let h = ps("x != y")
            .substitute(&Symbol::var("y"), &Term::Sym(Symbol::var("x")))
            .unwrap();
        assert_eq!(h.simplify(), Formula::False);

        let f2 = Fp::new(2).unwrap();
        let v = parse("x + y = 0", TheoryTag::VectorSpace(f2)).unwrap();
        let w = v
            .substitute(&Symbol::var("x"), &Term::Lin(LinTerm::symbol(f2, Symbol::var("y"))))
            .unwrap();
        assert_eq!(w, Formula::lin_zero(LinTerm::zero(f2)));
        assert_eq!(w.simplify(), Formula::True);
    }

    #[test]
    fn substitution_detects_capture() {
        let x = Symbol::var("x");
        let y = Symbol::var("y");
        let f = Formula::exists(y.clone(), Formula::eq(x.clone(), y.clone()));
        assert!(matches!(
            f.substitute(&x, &Term::Sym(y)),
            Err(Error::Capture(_))
        ));
    }

    #[test]
    fn freshen_keeps_meaning_and_changes_names() {
        let f = ps("var y; exists x. (x != y & forall z. z = x)");
        let mut names = NameGen::new(f.all_names().iter().map(String::as_str));
        let g = f.freshen_bound(&mut names);
        assert_eq!(f.free_symbols(), g.free_symbols());
        assert!(!g.all_names().contains("x"));
        assert!(!g.all_names().contains("z"));
    }
}

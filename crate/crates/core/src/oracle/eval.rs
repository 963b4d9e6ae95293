//! Exhaustive evaluation of formulas in a finite model.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, Symbol};

use super::FiniteModel;

#[derive(Clone, Copy, Debug)]
enum Slot {
    Var(usize),
    Const(u32),
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Eq(Slot, Slot),
    Lin(Vec<(Slot, u32)>),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

/// A formula with symbols resolved to environment slots. The first slots are
/// the frame variables, in order; bound variables follow.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: Node,
    slots: usize,
    free: usize,
    depth: usize,
    atoms: usize,
}

struct Compiler<'a> {
    model: &'a FiniteModel,
    scope: Vec<(Symbol, usize)>,
    next: usize,
}

impl Compiler<'_> {
    fn slot(&self, s: &Symbol) -> Result<Slot> {
        if let Some((_, i)) = self.scope.iter().rev().find(|(v, _)| v == s) {
            return Ok(Slot::Var(*i));
        }
        match self.model.param(s) {
            Some(value) if s.is_param() => Ok(Slot::Const(value)),
            _ => Err(Error::UnknownSymbol(s.name().to_owned())),
        }
    }

    fn node(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom(Atom::Eq(a, b)) => Node::Eq(self.slot(a)?, self.slot(b)?),
            Formula::Atom(Atom::Lin(t)) => {
                if self.model.field().is_none() {
                    return Err(Error::TheoryMismatch("linear atom in a pure-set model".into()));
                }
                Node::Lin(
                    t.iter()
                        .map(|(s, c)| Ok((self.slot(s)?, c as u32)))
                        .collect::<Result<_>>()?,
                )
            }
            Formula::Not(g) => Node::Not(Box::new(self.node(g)?)),
            Formula::And(fs) => Node::And(fs.iter().map(|g| self.node(g)).collect::<Result<_>>()?),
            Formula::Or(fs) => Node::Or(fs.iter().map(|g| self.node(g)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.node(a)?), Box::new(self.node(b)?)),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let slot = self.next;
                self.next += 1;
                self.scope.push((v.clone(), slot));
                let body = Box::new(self.node(g)?);
                self.scope.pop();
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(slot, body)
                } else {
                    Node::Forall(slot, body)
                }
            }
        })
    }
}

impl Compiled {
    pub fn new(model: &FiniteModel, vars: &[Symbol], f: &Formula) -> Result<Self> {
        let mut c = Compiler {
            model,
            scope: vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect(),
            next: vars.len(),
        };
        let root = c.node(f)?;
        Ok(Self {
            root,
            slots: c.next,
            free: vars.len(),
            depth: f.quantifier_depth(),
            atoms: f.atoms().len(),
        })
    }

    /// Atomic evaluations of a full count, at most.
    pub fn cost(&self, q: u64) -> u128 {
        cost_estimate(q, self.free + self.depth, self.atoms)
    }

    pub fn check_budget(&self, q: u64, budget: u128) -> Result<()> {
        let estimate = self.cost(q);
        if estimate > budget {
            return Err(Error::BudgetExceeded { estimate, budget });
        }
        Ok(())
    }

    /// Truth value under an assignment to the frame variables.
    pub fn eval(&self, model: &FiniteModel, tuple: &[u32]) -> bool {
        let mut env = vec![0u32; self.slots];
        env[..self.free].copy_from_slice(tuple);
        eval(&self.root, model, &mut env)
    }

    /// Satisfying tuples, in lexicographic order, passed to `visit` in
    /// parallel over the first coordinate; returns the per-chunk results in
    /// order.
    fn scan<T: Send>(
        &self,
        model: &FiniteModel,
        visit: impl Fn(&[u32], bool) -> Option<T> + Sync,
    ) -> Vec<T> {
        let q = model.size() as u32;
        if self.free == 0 {
            let mut env = vec![0u32; self.slots];
            let truth = eval(&self.root, model, &mut env);
            return visit(&[], truth).into_iter().collect();
        }
        (0..q)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut env = vec![0u32; self.slots];
                env[0] = first;
                let mut found = Vec::new();
                loop {
                    let truth = eval(&self.root, model, &mut env);
                    if let Some(t) = visit(&env[..self.free], truth) {
                        found.push(t);
                    }
                    // odometer over coordinates 1..free
                    let mut i = self.free;
                    loop {
                        i -= 1;
                        if i == 0 {
                            return found;
                        }
                        env[i] += 1;
                        if env[i] < q {
                            break;
                        }
                        env[i] = 0;
                    }
                }
            })
            .collect()
    }
}

fn value(slot: Slot, env: &[u32]) -> u32 {
    match slot {
        Slot::Var(i) => env[i],
        Slot::Const(c) => c,
    }
}

fn eval(node: &Node, model: &FiniteModel, env: &mut [u32]) -> bool {
    match node {
        Node::Const(b) => *b,
        Node::Eq(a, b) => value(*a, env) == value(*b, env),
        Node::Lin(terms) => {
            let mut acc = 0;
            for &(s, c) in terms {
                acc = model.add(acc, model.scale(c, value(s, env)));
            }
            acc == 0
        }
        Node::Not(g) => !eval(g, model, env),
        Node::And(gs) => gs.iter().all(|g| eval(g, model, env)),
        Node::Or(gs) => gs.iter().any(|g| eval(g, model, env)),
        Node::Implies(a, b) => !eval(a, model, env) || eval(b, model, env),
        Node::Exists(slot, g) => {
            let q = model.size() as u32;
            (0..q).any(|x| {
                env[*slot] = x;
                eval(g, model, env)
            })
        }
        Node::Forall(slot, g) => {
            let q = model.size() as u32;
            (0..q).all(|x| {
                env[*slot] = x;
                eval(g, model, env)
            })
        }
    }
}

/// Number of tuples over `vars` satisfying `f` in `model`.
fn cost_estimate(q: u64, exponent: usize, atoms: usize) -> u128 {
    (q as u128)
        .checked_pow(exponent as u32)
        .and_then(|n| n.checked_mul(atoms.max(1) as u128))
        .unwrap_or(u128::MAX)
}

/// Upper bound on the atomic evaluations needed to scan every assignment of
/// `free` variables to `f` in a model of size `q`.
pub fn evaluation_cost(q: u64, free: usize, f: &Formula) -> u128 {
    cost_estimate(q, free + f.quantifier_depth(), f.atoms().len())
}

pub fn brute_count(model: &FiniteModel, vars: &[Symbol], f: &Formula, budget: u128) -> Result<u64> {
    let c = Compiled::new(model, vars, f)?;
    c.check_budget(model.size(), budget)?;
    Ok(c.scan(model, |_, t| t.then_some(())).len() as u64)
}

/// Satisfying tuples of `f` over `vars`, in lexicographic order.
pub fn solutions(
    model: &FiniteModel,
    vars: &[Symbol],
    f: &Formula,
    budget: u128,
) -> Result<Vec<Vec<u32>>> {
    let c = Compiled::new(model, vars, f)?;
    c.check_budget(model.size(), budget)?;
    Ok(c.scan(model, |tuple, t| t.then(|| tuple.to_vec())))
}

/// The first tuple (in lexicographic order) on which `f` and `g` differ.
pub fn find_disagreement(
    model: &FiniteModel,
    vars: &[Symbol],
    f: &Formula,
    g: &Formula,
    budget: u128,
) -> Result<Option<Vec<u32>>> {
    let cf = Compiled::new(model, vars, f)?;
    let cg = Compiled::new(model, vars, g)?;
    let q = model.size();
    let estimate = cf.cost(q).saturating_add(cg.cost(q));
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    let diffs = cf.scan(model, |tuple, t| (cg.eval(model, tuple) != t).then(|| tuple.to_vec()));
    Ok(diffs.into_iter().next())
}

/// Truth value of a sentence (parameters allowed) in `model`.
pub fn holds(model: &FiniteModel, f: &Formula, budget: u128) -> Result<bool> {
    let c = Compiled::new(model, &[], f)?;
    c.check_budget(model.size(), budget)?;
    Ok(c.eval(model, &[]))
}

//! The theory of an infinite set with equality only.
//!
//! Definable sets here are unions of complete equality types: once it is
//! fixed which variables coincide with each other and with which parameter
//! block, the number of tuples of that type in a model of size `q` is the
//! falling factorial `(q - c)(q - c - 1)...(q - c - k + 1)` where `c` is the
//! number of parameter blocks and `k` the number of fresh variable blocks.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::formula::{Atom, Cube, Formula, Literal, Symbol, Term};
use crate::poly::IntPolynomial;

use super::Elimination;

/// A set partition of the parameters. Blocks are ordered by their first
/// member in the parameter order the pattern was built with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EqPattern {
    blocks: Vec<Vec<Symbol>>,
}

impl EqPattern {
    /// Every parameter in its own block.
    pub fn discrete(params: &[Symbol]) -> Self {
        Self {
            blocks: params.iter().map(|p| vec![p.clone()]).collect(),
        }
    }

    /// Builds a pattern from explicit blocks; empty blocks are dropped and a
    /// parameter listed twice is an error.
    pub fn from_blocks(blocks: Vec<Vec<Symbol>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in blocks.iter().flatten() {
            if !seen.insert(s.clone()) {
                return Err(Error::Invalid(format!("parameter `{s}` is in two blocks")));
            }
        }
        Ok(Self {
            blocks: blocks.into_iter().filter(|b| !b.is_empty()).collect(),
        })
    }

    pub fn blocks(&self) -> &[Vec<Symbol>] {
        &self.blocks
    }

    pub fn params(&self) -> Vec<Symbol> {
        self.blocks.iter().flatten().cloned().collect()
    }

    pub fn block_of(&self, s: &Symbol) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(s))
    }

    pub fn extend_discrete(&self, extra: &[Symbol]) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.extend(extra.iter().map(|s| vec![s.clone()]));
        Self { blocks }
    }

    /// Equalities inside blocks, disequalities between block leaders.
    pub fn to_formula(&self) -> Formula {
        let mut parts = Vec::new();
        for block in &self.blocks {
            for other in &block[1..] {
                parts.push(Formula::eq(block[0].clone(), other.clone()));
            }
        }
        for (i, a) in self.blocks.iter().enumerate() {
            for b in &self.blocks[i + 1..] {
                parts.push(Formula::neq(a[0].clone(), b[0].clone()));
            }
        }
        Formula::and(parts)
    }
}

/// All set partitions of `params` in restricted-growth order.
pub fn enumerate_patterns(params: &[Symbol], cap: usize) -> Result<Vec<EqPattern>> {
    if params.len() > cap {
        return Err(Error::CapExceeded {
            what: "pure-set parameter",
            limit: cap,
            actual: params.len(),
        });
    }
    let mut out = Vec::new();
    let mut growth = Vec::with_capacity(params.len());
    fn rec(params: &[Symbol], growth: &mut Vec<usize>, max: usize, out: &mut Vec<EqPattern>) {
        if growth.len() == params.len() {
            let mut blocks = vec![Vec::new(); max];
            for (s, &b) in params.iter().zip(growth.iter()) {
                blocks[b].push(s.clone());
            }
            out.push(EqPattern { blocks });
            return;
        }
        for b in 0..=max {
            growth.push(b);
            rec(params, growth, max.max(b + 1), out);
            growth.pop();
        }
    }
    rec(params, &mut growth, 0, &mut out);
    Ok(out)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn eq_sides(lit: &Literal) -> (&Symbol, &Symbol) {
    match &lit.atom {
        Atom::Eq(a, b) => (a, b),
        Atom::Lin(_) => panic!("linear atom in a pure-set formula"),
    }
}

/// Canonicalizes a conjunction and returns `None` if it is inconsistent
/// (given the pattern, when one is supplied).
pub fn simplify_cube(cube: Cube, pattern: Option<&EqPattern>) -> Option<Cube> {
    let mut out = Vec::with_capacity(cube.len());
    for lit in cube {
        let atom = lit.atom.canonical();
        let Atom::Eq(a, b) = &atom else {
            panic!("linear atom in a pure-set formula");
        };
        if a == b {
            if lit.positive {
                continue;
            }
            return None;
        }
        if let Some(p) = pattern {
            if let (Some(ba), Some(bb)) = (p.block_of(a), p.block_of(b)) {
                if (ba == bb) != lit.positive {
                    return None;
                }
                continue;
            }
        }
        out.push(Literal {
            atom,
            positive: lit.positive,
        });
    }
    out.sort();
    out.dedup();

    // Nodes: one per pattern block, then one per other symbol.
    let blocks = pattern.map_or(0, |p| p.blocks.len());
    let mut index: HashMap<&Symbol, usize> = HashMap::new();
    let mut next = blocks;
    for lit in &out {
        let (a, b) = eq_sides(lit);
        for s in [a, b] {
            if !index.contains_key(s) {
                let node = match pattern.and_then(|p| p.block_of(s)) {
                    Some(bl) => bl,
                    None => {
                        next += 1;
                        next - 1
                    }
                };
                index.insert(s, node);
            }
        }
    }
    let mut uf = UnionFind::new(next);
    for lit in out.iter().filter(|l| l.positive) {
        let (a, b) = eq_sides(lit);
        uf.union(index[a], index[b]);
    }
    let mut roots = BTreeSet::new();
    for bl in 0..blocks {
        if !roots.insert(uf.find(bl)) {
            return None;
        }
    }
    for lit in out.iter().filter(|l| !l.positive) {
        let (a, b) = eq_sides(lit);
        if uf.find(index[a]) == uf.find(index[b]) {
            return None;
        }
    }
    Some(out)
}

/// `exists v` of a conjunction. If some literal `v = t` is present, `t` is
/// substituted for `v`; otherwise `v` only occurs in disequations `v != t_i`,
/// which hold for some `v` as soon as the model has more elements than there
/// are distinct `t_i`.
pub fn eliminate_exists(v: &Symbol, cube: &Cube, pattern: Option<&EqPattern>) -> Elimination {
    let Some(cube) = simplify_cube(cube.clone(), pattern) else {
        return Elimination {
            cube: None,
            threshold: 0,
            solved: None,
        };
    };
    let witness = cube.iter().find_map(|l| {
        let (a, b) = eq_sides(l);
        match (l.positive, a == v, b == v) {
            (true, true, false) => Some(b.clone()),
            (true, false, true) => Some(a.clone()),
            _ => None,
        }
    });
    if let Some(t) = witness {
        let term = Term::Sym(t);
        let substituted: Cube = cube
            .iter()
            .map(|l| Literal {
                atom: l.atom.substitute(v, &term),
                positive: l.positive,
            })
            .collect();
        return Elimination {
            cube: simplify_cube(substituted, pattern),
            threshold: 0,
            solved: Some(term),
        };
    }
    let mut excluded = BTreeSet::new();
    let mut rest = Vec::new();
    for l in cube {
        let (a, b) = eq_sides(&l);
        if a == v {
            excluded.insert(b.clone());
        } else if b == v {
            excluded.insert(a.clone());
        } else {
            rest.push(l);
        }
    }
    Elimination {
        cube: Some(rest),
        threshold: excluded.len(),
        solved: None,
    }
}

/// A complete equality type of the frame variables over a parameter
/// pattern. `classes[i] < param_blocks` places variable `i` in that parameter
/// block; larger ids are fresh blocks shared only among variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EqCell {
    pub classes: Vec<usize>,
    pub param_blocks: usize,
    pub new_blocks: usize,
}

impl EqCell {
    pub fn rank(&self) -> usize {
        self.new_blocks
    }

    pub fn poly(&self) -> IntPolynomial {
        IntPolynomial::falling_factorial(self.param_blocks, self.new_blocks)
    }

    /// The literals pinning down this type.
    pub fn cube(&self, vars: &[Symbol], pattern: &EqPattern) -> Cube {
        let mut lits = Vec::new();
        let mut leaders: Vec<Option<&Symbol>> = vec![None; self.new_blocks];
        for (v, &c) in vars.iter().zip(&self.classes) {
            if c < self.param_blocks {
                let rep = pattern.blocks[c][0].clone();
                lits.push(Literal::pos(Atom::Eq(v.clone(), rep)));
                continue;
            }
            let slot = c - self.param_blocks;
            if let Some(leader) = leaders[slot] {
                lits.push(Literal::pos(Atom::Eq(leader.clone(), v.clone())));
                continue;
            }
            for block in &pattern.blocks {
                lits.push(Literal::neg(Atom::Eq(v.clone(), block[0].clone())));
            }
            for other in leaders.iter().flatten() {
                lits.push(Literal::neg(Atom::Eq((*other).clone(), v.clone())));
            }
            leaders[slot] = Some(v);
        }
        lits
    }

    /// Truth value of a quantifier-free formula on this type.
    pub fn satisfies(&self, f: &Formula, vars: &[Symbol], pattern: &EqPattern) -> Result<bool> {
        let class = |s: &Symbol| -> Result<usize> {
            if let Some(i) = vars.iter().position(|v| v == s) {
                return Ok(self.classes[i]);
            }
            pattern
                .block_of(s)
                .ok_or_else(|| Error::UnknownSymbol(s.name().to_owned()))
        };
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(Atom::Eq(a, b)) => class(a)? == class(b)?,
            Formula::Atom(Atom::Lin(_)) => {
                return Err(Error::TheoryMismatch("linear atom in pure-set formula".into()))
            }
            Formula::Not(g) => !self.satisfies(g, vars, pattern)?,
            Formula::And(fs) => {
                for g in fs {
                    if !self.satisfies(g, vars, pattern)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for g in fs {
                    if self.satisfies(g, vars, pattern)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => {
                !self.satisfies(a, vars, pattern)? || self.satisfies(b, vars, pattern)?
            }
            Formula::Exists(..) | Formula::Forall(..) => {
                return Err(Error::Invalid("quantifier in a cell test".into()))
            }
        })
    }
}

/// Every complete equality type of `vars` over `pattern`.
pub fn complete_cells(vars: &[Symbol], pattern: &EqPattern, cap: usize) -> Result<Vec<EqCell>> {
    let c = pattern.blocks.len();
    let mut out = Vec::new();
    let mut classes = Vec::with_capacity(vars.len());
    fn rec(
        n: usize,
        c: usize,
        k: usize,
        classes: &mut Vec<usize>,
        out: &mut Vec<EqCell>,
        cap: usize,
    ) -> Result<()> {
        if classes.len() == n {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "cell",
                    limit: cap,
                    actual: out.len() + 1,
                });
            }
            out.push(EqCell {
                classes: classes.clone(),
                param_blocks: c,
                new_blocks: k,
            });
            return Ok(());
        }
        for class in 0..=(c + k) {
            classes.push(class);
            let k_next = if class == c + k { k + 1 } else { k };
            rec(n, c, k_next, classes, out, cap)?;
            classes.pop();
        }
        Ok(())
    }
    rec(vars.len(), c, 0, &mut classes, &mut out, cap)?;
    Ok(out)
}

/// Count of the tuples over `vars` satisfying the conjunction `literals`
/// when the parameters realize `pattern`: a sum of falling factorials, one
/// per complete type consistent with the literals. Exact in every model of
/// size at least the number of parameter blocks.
pub fn count_cell_pureset(
    vars: &[Symbol],
    literals: &[Literal],
    pattern: &EqPattern,
    cap: usize,
) -> Result<IntPolynomial> {
    let conj = crate::formula::cube_to_formula(literals);
    let mut total = IntPolynomial::zero();
    for cell in complete_cells(vars, pattern, cap)? {
        if cell.satisfies(&conj, vars, pattern)? {
            total = total + cell.poly();
        }
    }
    Ok(total)
}

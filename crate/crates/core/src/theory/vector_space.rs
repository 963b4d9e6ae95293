//! Infinite vector spaces over a prime field `F_p`.
//!
//! A conjunction of linear literals defines an affine subspace (the
//! equations) with finitely many sub-cosets cut out (the disequations). In a
//! model of size `q` the subspace of codimension `e` in `V^n` has `q^(n-e)`
//! points, and inclusion-exclusion over the disequations gives the exact count.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::{Atom, Cube, Formula, Fp, LinTerm, Literal, Symbol, Term};
use crate::poly::IntPolynomial;

use super::linalg::{rref, EchelonBasis, Matrix};
use super::Elimination;

/// The linear relations holding among the parameters, as a reduced row
/// echelon matrix over the parameter columns. Pivot columns are the
/// dependent parameters; the others are linearly independent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinPattern {
    field: Fp,
    params: Vec<Symbol>,
    relations: Matrix,
    pivots: Vec<usize>,
}

impl LinPattern {
    /// No relations: the parameters are linearly independent.
    pub fn independent(field: Fp, params: &[Symbol]) -> Self {
        Self {
            field,
            params: params.to_vec(),
            relations: Matrix::zeros(0, params.len()),
            pivots: Vec::new(),
        }
    }

    /// The pattern whose relation space is spanned by `terms = 0`.
    pub fn from_relations(field: Fp, params: &[Symbol], terms: &[LinTerm]) -> Result<Self> {
        let mut rows = Vec::with_capacity(terms.len());
        for t in terms {
            let mut row = vec![0; params.len()];
            for (s, c) in t.iter() {
                let i = params
                    .iter()
                    .position(|p| p.name() == s.name())
                    .ok_or_else(|| Error::UnknownSymbol(s.name().to_owned()))?;
                row[i] = c;
            }
            rows.push(row);
        }
        let r = rref(&Matrix::new(params.len(), rows), field);
        Ok(Self {
            field,
            params: params.to_vec(),
            relations: r.matrix,
            pivots: r.pivots,
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn independent_params(&self) -> Vec<Symbol> {
        self.params
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.pivots.contains(i))
            .map(|(_, s)| s.clone())
            .collect()
    }

    fn row_term(&self, row: &[u64]) -> LinTerm {
        self.params
            .iter()
            .zip(row)
            .fold(LinTerm::zero(self.field), |t, (s, &c)| t.plus(s, c))
    }

    /// Each dependent parameter as a combination of independent ones.
    pub fn solved(&self) -> Vec<(Symbol, LinTerm)> {
        let f = self.field;
        self.relations
            .rows()
            .iter()
            .zip(&self.pivots)
            .map(|(row, &pc)| {
                let mut rest = row.clone();
                rest[pc] = 0;
                (self.params[pc].clone(), self.row_term(&rest).scale(f.neg(1)))
            })
            .collect()
    }

    /// Rewrites a term so that only independent parameters remain.
    pub fn rewrite(&self, t: &LinTerm) -> LinTerm {
        self.solved()
            .iter()
            .fold(t.clone(), |acc, (s, rep)| acc.substitute(s, rep))
    }

    /// Relation basis `= 0`, and `!= 0` for every monic combination outside
    /// the relation space.
    pub fn to_formula(&self) -> Formula {
        let f = self.field;
        let m = self.params.len();
        let mut parts: Vec<Formula> = self
            .relations
            .rows()
            .iter()
            .map(|r| Formula::lin_zero(self.row_term(r)))
            .collect();
        let mut span = EchelonBasis::new(f);
        for r in self.relations.rows() {
            span.insert(r);
        }
        let total = f.p().pow(m as u32);
        for code in 1..total {
            let mut row = vec![0; m];
            let mut c = code;
            for x in row.iter_mut() {
                *x = c % f.p();
                c /= f.p();
            }
            let lead = row.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            if lead != 1 || span.contains(&row) {
                continue;
            }
            parts.push(Formula::not(Formula::lin_zero(self.row_term(&row))));
        }
        Formula::and(parts)
    }

    /// Adds parameters independent of everything present.
    pub fn extend_independent(&self, extra: &[Symbol]) -> Self {
        let mut params = self.params.clone();
        params.extend(extra.iter().cloned());
        let cols = params.len();
        let rows = self
            .relations
            .rows()
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.resize(cols, 0);
                r
            })
            .collect();
        Self {
            field: self.field,
            params,
            relations: Matrix::new(cols, rows),
            pivots: self.pivots.clone(),
        }
    }
}

/// Every relation space on `params`, one per subspace of `F_p^m`, in order
/// of increasing rank.
pub fn enumerate_patterns(field: Fp, params: &[Symbol], cap: usize) -> Result<Vec<LinPattern>> {
    let m = params.len();
    let size = (field.p() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::CapExceeded {
            what: "vector-space pattern space",
            limit: cap,
            actual: size.min(usize::MAX as u128) as usize,
        });
    }
    let mut out = Vec::new();
    for rank in 0..=m {
        let mut pivots = Vec::with_capacity(rank);
        choose_pivots(field, params, rank, 0, &mut pivots, &mut out);
    }
    Ok(out)
}

fn choose_pivots(
    field: Fp,
    params: &[Symbol],
    rank: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<LinPattern>,
) {
    if pivots.len() == rank {
        fill_rref(field, params, pivots, out);
        return;
    }
    for c in start..params.len() {
        pivots.push(c);
        choose_pivots(field, params, rank, c + 1, pivots, out);
        pivots.pop();
    }
}

/// All reduced matrices with the given pivot columns: the free entries are
/// the non-pivot columns right of each row's pivot.
fn fill_rref(field: Fp, params: &[Symbol], pivots: &[usize], out: &mut Vec<LinPattern>) {
    let m = params.len();
    let slots: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(r, &pc)| {
            (pc + 1..m)
                .filter(|c| !pivots.contains(c))
                .map(move |c| (r, c))
        })
        .collect();
    let p = field.p();
    let combos = p.pow(slots.len() as u32);
    for code in 0..combos {
        let mut rows = vec![vec![0; m]; pivots.len()];
        for (r, &pc) in pivots.iter().enumerate() {
            rows[r][pc] = 1;
        }
        let mut c = code;
        for &(r, col) in &slots {
            rows[r][col] = c % p;
            c /= p;
        }
        out.push(LinPattern {
            field,
            params: params.to_vec(),
            relations: Matrix::new(m, rows),
            pivots: pivots.to_vec(),
        });
    }
}

fn lin_term(lit: &Literal) -> &LinTerm {
    match &lit.atom {
        Atom::Lin(t) => t,
        Atom::Eq(..) => panic!("equality atom in a vector-space cube"),
    }
}

fn only_params(t: &LinTerm) -> bool {
    t.symbols().all(Symbol::is_param)
}

/// Canonicalizes a conjunction and returns `None` when it is inconsistent.
/// Under a pattern, parameters are rewritten to independent ones and literals
/// about parameters alone are decided.
pub fn simplify_cube(field: Fp, cube: Cube, pattern: Option<&LinPattern>) -> Option<Cube> {
    let mut out = Vec::with_capacity(cube.len());
    for lit in cube {
        let mut t = match lit.atom {
            Atom::Lin(t) => t,
            Atom::Eq(a, b) => LinTerm::symbol(field, a).sub(&LinTerm::symbol(field, b)),
        };
        if let Some(p) = pattern {
            t = p.rewrite(&t);
        }
        if t.is_zero() {
            if lit.positive {
                continue;
            }
            return None;
        }
        if pattern.is_some() && only_params(&t) {
            if lit.positive {
                return None;
            }
            continue;
        }
        out.push(Literal {
            atom: Atom::Lin(t.monic()),
            positive: lit.positive,
        });
    }
    out.sort();
    out.dedup();
    let system = System::build(field, &out, pattern.is_some())?;
    if system.diseqs.iter().any(|d| d.iter().all(|&x| x == 0)) {
        return None;
    }
    Some(out)
}

/// `exists v` of a conjunction: solve an equation for `v` and substitute, or,
/// if `v` occurs only in disequations, drop them. Each such disequation
/// excludes a single value of `v`.
pub fn eliminate_exists(
    field: Fp,
    v: &Symbol,
    cube: &Cube,
    pattern: Option<&LinPattern>,
) -> Elimination {
    let Some(cube) = simplify_cube(field, cube.clone(), pattern) else {
        return Elimination {
            cube: None,
            threshold: 0,
            solved: None,
        };
    };
    let pivot = cube
        .iter()
        .find(|l| l.positive && lin_term(l).coeff(v) != 0)
        .map(lin_term);
    if let Some(eq) = pivot {
        let c = eq.coeff(v);
        let mut rest = eq.clone();
        rest = rest.plus(v, field.neg(c));
        // c*v + rest = 0  =>  v = -(rest)/c
        let value = rest.scale(field.neg(field.inv(c)));
        let term = Term::Lin(value);
        let substituted = cube
            .iter()
            .map(|l| Literal {
                atom: l.atom.substitute(v, &term),
                positive: l.positive,
            })
            .collect();
        return Elimination {
            cube: simplify_cube(field, substituted, pattern),
            threshold: 0,
            solved: Some(term),
        };
    }
    let mut excluded = BTreeSet::new();
    let mut rest = Vec::new();
    for l in cube {
        let t = lin_term(&l);
        let c = t.coeff(v);
        if c == 0 {
            rest.push(l);
        } else {
            excluded.insert(t.scale(field.inv(c)));
        }
    }
    Elimination {
        cube: Some(rest),
        threshold: excluded.len(),
        solved: None,
    }
}

/// Literals as coefficient rows. Variables come first, then parameters (or
/// only the independent ones under a pattern).
struct System {
    eqs: EchelonBasis,
    diseqs: Vec<Vec<u64>>,
    nvars: usize,
}

impl System {
    /// `None` if the equations are inconsistent, which can only happen when
    /// parameters are pinned independent.
    fn build(field: Fp, cube: &[Literal], params_fixed: bool) -> Option<Self> {
        let mut vars: BTreeSet<&Symbol> = BTreeSet::new();
        let mut params: BTreeSet<&Symbol> = BTreeSet::new();
        for l in cube {
            for s in lin_term(l).symbols() {
                if params_fixed && s.is_param() {
                    params.insert(s);
                } else {
                    vars.insert(s);
                }
            }
        }
        Self::with_columns(
            field,
            cube,
            &vars.into_iter().cloned().collect::<Vec<_>>(),
            &params.into_iter().cloned().collect::<Vec<_>>(),
        )
    }

    fn with_columns(
        field: Fp,
        cube: &[Literal],
        vars: &[Symbol],
        params: &[Symbol],
    ) -> Option<Self> {
        let nvars = vars.len();
        let row = |t: &LinTerm| -> Vec<u64> {
            let mut r = vec![0; nvars + params.len()];
            for (s, c) in t.iter() {
                let i = vars
                    .iter()
                    .position(|v| v == s)
                    .or_else(|| params.iter().position(|p| p == s).map(|j| nvars + j))
                    .expect("symbol outside the column frame");
                r[i] = c;
            }
            r
        };
        let mut eqs = EchelonBasis::new(field);
        let mut diseqs = Vec::new();
        for l in cube {
            let r = row(lin_term(l));
            if l.positive {
                if let Some(pc) = eqs.insert(&r) {
                    if pc >= nvars {
                        return None;
                    }
                }
            } else {
                diseqs.push(r);
            }
        }
        let diseqs = diseqs
            .into_iter()
            .map(|d| eqs.reduce(&d))
            .filter(|d| d[..nvars].iter().any(|&x| x != 0) || d.iter().all(|&x| x == 0))
            .collect();
        Some(Self {
            eqs,
            diseqs,
            nvars,
        })
    }

    fn degree(&self) -> usize {
        self.nvars - self.eqs.rank()
    }

    /// Inclusion-exclusion over the disequations, pruning every superset of
    /// an inconsistent subset.
    fn count(&self) -> IntPolynomial {
        let mut total = IntPolynomial::zero();
        self.walk(0, &self.eqs, false, &mut total);
        total
    }

    fn walk(&self, i: usize, basis: &EchelonBasis, odd: bool, total: &mut IntPolynomial) {
        if i == self.diseqs.len() {
            let term = IntPolynomial::monomial(self.nvars - basis.rank());
            *total = if odd { &*total - &term } else { &*total + &term };
            return;
        }
        self.walk(i + 1, basis, odd, total);
        let mut with = basis.clone();
        match with.insert(&self.diseqs[i]) {
            Some(pc) if pc >= self.nvars => {}
            _ => self.walk(i + 1, &with, !odd, total),
        }
    }
}

/// Count of the tuples over `vars` satisfying the conjunction when the
/// parameters realize `pattern`. Exact in every model of size at least
/// `p^r`, `r` the number of independent parameters.
pub fn count_cell_vs(
    field: Fp,
    vars: &[Symbol],
    cube: &[Literal],
    pattern: &LinPattern,
    max_disequations: usize,
) -> Result<IntPolynomial> {
    Ok(match prepare(field, vars, cube, pattern, max_disequations)? {
        Some(sys) => sys.count(),
        None => IntPolynomial::zero(),
    })
}

/// Identifies the affine subspace cut out by the equations of a cell: two
/// cells with the same key have the same top-dimensional part. Also returns
/// that dimension.
pub fn coset_key(
    field: Fp,
    vars: &[Symbol],
    cube: &[Literal],
    pattern: &LinPattern,
) -> Option<(usize, Matrix)> {
    let sys = prepare(field, vars, cube, pattern, usize::MAX).ok()??;
    if sys.diseqs.iter().any(|d| d.iter().all(|&x| x == 0)) {
        return None;
    }
    let cols = sys.nvars + pattern.independent_params().len();
    let rows: Vec<Vec<u64>> = sys.eqs.rows_iter().cloned().collect();
    let key = rref(&Matrix::new(cols, rows), field).matrix;
    Some((sys.degree(), key))
}

fn prepare(
    field: Fp,
    vars: &[Symbol],
    cube: &[Literal],
    pattern: &LinPattern,
    max_disequations: usize,
) -> Result<Option<System>> {
    let mut lits = Vec::with_capacity(cube.len());
    for l in cube {
        let t = pattern.rewrite(lin_term(l));
        if let Some(s) = t.symbols().find(|s| !s.is_param() && !vars.contains(s)) {
            return Err(Error::UnknownSymbol(s.name().to_owned()));
        }
        match (t.is_zero() || only_params(&t), l.positive) {
            (true, true) if t.is_zero() => continue,
            (true, true) => return Ok(None),
            (true, false) if t.is_zero() => return Ok(None),
            (true, false) => continue,
            _ => lits.push(Literal {
                atom: Atom::Lin(t),
                positive: l.positive,
            }),
        }
    }
    let indep = pattern.independent_params();
    let Some(sys) = System::with_columns(field, &lits, vars, &indep) else {
        return Ok(None);
    };
    if sys.diseqs.len() > max_disequations {
        return Err(Error::CapExceeded {
            what: "disequation",
            limit: max_disequations,
            actual: sys.diseqs.len(),
        });
    }
    Ok(Some(sys))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }
    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }
    fn v(n: &str) -> Symbol {
        Symbol::var(n)
    }
    fn p(n: &str) -> Symbol {
        Symbol::param(n)
    }
    fn t(f: Fp, pairs: &[(Symbol, i64)]) -> LinTerm {
        LinTerm::from_pairs(f, pairs.iter().cloned())
    }
    fn eq(t: LinTerm) -> Literal {
        Literal::pos(Atom::Lin(t))
    }
    fn ne(t: LinTerm) -> Literal {
        Literal::neg(Atom::Lin(t))
    }

    #[test]
    fn count_examples() {
        let f = f2();
        let none = LinPattern::independent(f, &[]);
        let xyz = [v("x"), v("y"), v("z")];
        let cube = vec![
            eq(t(f, &[(v("x"), 1), (v("y"), 1), (v("z"), 1)])),
            ne(t(f, &[(v("x"), 1), (v("y"), 1)])),
        ];
        assert_eq!(
            count_cell_vs(f, &xyz, &cube, &none, 20).unwrap(),
            IntPolynomial::from_i64s(&[0, -1, 1])
        );
        // x != 0 and x != a, with a independent
        let a = LinPattern::independent(f, &[p("a")]);
        let cube = vec![ne(t(f, &[(v("x"), 1)])), ne(t(f, &[(v("x"), 1), (p("a"), 1)]))];
        assert_eq!(
            count_cell_vs(f, &[v("x")], &cube, &a, 20).unwrap(),
            IntPolynomial::from_i64s(&[-2, 1])
        );
        // with a = 0 the two disequations coincide
        let zero = LinPattern::from_relations(f, &[p("a")], &[t(f, &[(p("a"), 1)])]).unwrap();
        assert_eq!(
            count_cell_vs(f, &[v("x")], &cube, &zero, 20).unwrap(),
            IntPolynomial::from_i64s(&[-1, 1])
        );
        // x = a is a point, x = a & x = 0 is empty when a != 0
        let cube = vec![eq(t(f, &[(v("x"), 1), (p("a"), 1)])), eq(t(f, &[(v("x"), 1)]))];
        assert!(count_cell_vs(f, &[v("x")], &cube, &a, 20).unwrap().is_zero());
    }

    #[test]
    fn disequation_cap() {
        let f = f3();
        let x = v("x");
        let params: Vec<Symbol> = (0..3).map(|i| p(&format!("a{i}"))).collect();
        let pat = LinPattern::independent(f, &params);
        let cube: Vec<Literal> = params
            .iter()
            .map(|a| ne(t(f, &[(x.clone(), 1), (a.clone(), 1)])))
            .collect();
        assert!(matches!(
            count_cell_vs(f, &[x.clone()], &cube, &pat, 2),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(
            count_cell_vs(f, &[x], &cube, &pat, 3).unwrap(),
            IntPolynomial::from_i64s(&[-3, 1])
        );
    }

    #[test]
    fn eliminate_solves_equations() {
        let f = f3();
        let cube = vec![eq(t(f, &[(v("x"), 2), (v("y"), -1)]))];
        let e = eliminate_exists(f, &v("x"), &cube, None);
        assert_eq!(e.cube, Some(vec![]));
        assert_eq!(e.solved, Some(Term::Lin(t(f, &[(v("y"), 2)]))));
        assert_eq!(e.threshold, 0);

        let cube = vec![ne(t(f, &[(v("x"), 1)])), ne(t(f, &[(v("x"), 1), (v("y"), 1)]))];
        let e = eliminate_exists(f, &v("x"), &cube, None);
        assert_eq!(e.cube, Some(vec![]));
        assert_eq!(e.threshold, 2);
    }

    #[test]
    fn simplify_detects_span() {
        let f = f2();
        let cube = vec![
            eq(t(f, &[(v("x"), 1), (v("y"), 1)])),
            ne(t(f, &[(v("x"), 1), (v("y"), 1)])),
        ];
        assert!(simplify_cube(f, cube, None).is_none());
        let a = LinPattern::independent(f, &[p("a")]);
        assert!(simplify_cube(f, vec![eq(t(f, &[(p("a"), 1)]))], Some(&a)).is_none());
        assert_eq!(simplify_cube(f, vec![ne(t(f, &[(p("a"), 1)]))], Some(&a)), Some(vec![]));
        let cube = vec![eq(t(f, &[(v("x"), 1), (p("a"), 1)])), eq(t(f, &[(v("x"), 1)]))];
        assert!(simplify_cube(f, cube, Some(&a)).is_none());
    }

    #[test]
    fn pattern_enumeration_counts_subspaces() {
        let two = [p("a"), p("b")];
        assert_eq!(enumerate_patterns(f2(), &two, 256).unwrap().len(), 5);
        assert_eq!(enumerate_patterns(f2(), &two[..1], 256).unwrap().len(), 2);
        assert_eq!(enumerate_patterns(f2(), &[], 256).unwrap().len(), 1);
        // subspaces of F_3^2: 1 + 4 + 1
        assert_eq!(enumerate_patterns(f3(), &two, 256).unwrap().len(), 6);
        let many: Vec<Symbol> = (0..9).map(|i| p(&format!("c{i}"))).collect();
        assert!(enumerate_patterns(f2(), &many, 256).is_err());
    }

    #[test]
    fn pattern_rewrites_dependent_params() {
        let f = f2();
        let ab = [p("a"), p("b")];
        let pat = LinPattern::from_relations(f, &ab, &[t(f, &[(p("a"), 1), (p("b"), 1)])]).unwrap();
        assert_eq!(pat.independent_params(), vec![p("b")]);
        let x_plus_a = t(f, &[(v("x"), 1), (p("a"), 1)]);
        assert_eq!(pat.rewrite(&x_plus_a), t(f, &[(v("x"), 1), (p("b"), 1)]));
        assert_eq!(pat.to_formula().to_string(), "(a + b = 0) & (a != 0) & (b != 0)");
    }
}

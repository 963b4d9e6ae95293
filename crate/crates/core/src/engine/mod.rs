//! Quantifier elimination, cell decomposition and exact counting.

mod normal;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::{cube_to_formula, cubes_to_formula, Cube, Formula, Symbol};
use crate::poly::IntPolynomial;
use crate::theory::linalg::Matrix;
use crate::theory::{
    eliminate_exists, enumerate_patterns, pure_set, vector_space, ParamPattern, Theory,
};
use crate::Limits;

pub use normal::{disjointify, dnf};

/// One piece of a disjoint decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub cube: Cube,
    pub poly: IntPolynomial,
    /// Identifies the top-dimensional part: vector-space cells with the same
    /// coset share it. `None` for pure-set cells, each of which is its own
    /// complete type.
    pub coset: Option<Matrix>,
}

impl Cell {
    pub fn rank(&self) -> i64 {
        self.poly.signed_degree()
    }

    pub fn to_formula(&self) -> Formula {
        cube_to_formula(&self.cube)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub poly: IntPolynomial,
    /// The count equals `poly(q)` in every model of size `q >= threshold_q0`
    /// that realizes the pattern.
    pub threshold_q0: u64,
    /// Degree of `poly`, or -1 for the empty set.
    pub morley_rank: i64,
    pub morley_degree: u64,
    pub leading_coefficient: BigInt,
}

impl CountResult {
    pub fn is_empty(&self) -> bool {
        self.poly.is_zero()
    }
}

/// One block of a parametric count: the patterns sharing a polynomial, their
/// disjunction, and the count.
#[derive(Clone, Debug)]
pub struct PartitionEntry {
    pub patterns: Vec<ParamPattern>,
    pub formula: Formula,
    pub result: CountResult,
}

#[derive(Clone, Debug)]
pub struct PartitionResult {
    pub params: Vec<Symbol>,
    pub entries: Vec<PartitionEntry>,
}

impl PartitionResult {
    /// The entry whose patterns include `pattern`.
    pub fn entry_for(&self, pattern: &ParamPattern) -> Option<&PartitionEntry> {
        self.entries.iter().find(|e| e.patterns.contains(pattern))
    }
}

/// Outcome of [`Engine::product_check`].
#[derive(Clone, Debug)]
pub struct ProductCheck {
    pub left: CountResult,
    pub right: CountResult,
    pub product: CountResult,
    pub holds: bool,
}

/// Top-rank pieces of a definable set, each of Morley degree 1, and the rest.
#[derive(Clone, Debug)]
pub struct TopSplit {
    pub pieces: Vec<Formula>,
    pub remainder: Formula,
    pub rank: i64,
}

#[derive(Clone, Debug)]
pub struct Engine {
    theory: Theory,
    limits: Limits,
}

impl Engine {
    pub fn new(theory: Theory) -> Self {
        Self::with_limits(theory, Limits::default())
    }

    pub fn with_limits(theory: Theory, limits: Limits) -> Self {
        Self { theory, limits }
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// A pattern covering the free parameters of `f`, defaulting to the
    /// generic one.
    pub fn resolve_pattern(&self, f: &Formula, pattern: Option<&ParamPattern>) -> Result<ParamPattern> {
        let params = f.free_symbols().parameters;
        match pattern {
            Some(p) => {
                p.check_theory(self.theory)?;
                p.check_covers(&params)?;
                Ok(p.clone())
            }
            None => Ok(ParamPattern::generic(self.theory, &params)),
        }
    }

    /// Quantifier-free equivalent of `f` and the size above which the
    /// equivalence holds. Quantifiers are eliminated innermost first; under a
    /// pattern, literals about parameters alone are decided along the way.
    pub fn quantifier_eliminate(
        &self,
        f: &Formula,
        pattern: Option<&ParamPattern>,
    ) -> Result<(Formula, usize)> {
        let mut threshold = 0;
        let qf = self.eliminate(&f.to_nnf(), pattern, &mut threshold)?;
        Ok((qf.simplify(), threshold))
    }

    fn eliminate(
        &self,
        f: &Formula,
        pattern: Option<&ParamPattern>,
        threshold: &mut usize,
    ) -> Result<Formula> {
        Ok(match f {
            Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
            Formula::Not(g) if matches!(g.as_ref(), Formula::Atom(_)) => f.clone(),
            Formula::Not(g) => Formula::not(self.eliminate(g, pattern, threshold)?).to_nnf(),
            Formula::And(fs) => Formula::And(
                fs.iter()
                    .map(|g| self.eliminate(g, pattern, threshold))
                    .collect::<Result<_>>()?,
            ),
            Formula::Or(fs) => Formula::Or(
                fs.iter()
                    .map(|g| self.eliminate(g, pattern, threshold))
                    .collect::<Result<_>>()?,
            ),
            Formula::Implies(a, b) => {
                let nnf = Formula::implies((**a).clone(), (**b).clone()).to_nnf();
                self.eliminate(&nnf, pattern, threshold)?
            }
            Formula::Exists(v, body) => {
                let inner = self.eliminate(body, pattern, threshold)?;
                self.exists_qf(v, &inner, pattern, threshold)?
            }
            Formula::Forall(v, body) => {
                let inner = self.eliminate(body, pattern, threshold)?;
                let negated = Formula::not(inner).to_nnf();
                Formula::not(self.exists_qf(v, &negated, pattern, threshold)?).to_nnf()
            }
        })
    }

    fn exists_qf(
        &self,
        v: &Symbol,
        body: &Formula,
        pattern: Option<&ParamPattern>,
        threshold: &mut usize,
    ) -> Result<Formula> {
        let cubes = dnf(self.theory, body, pattern, self.limits.cell_cap)?;
        let mut out = Vec::with_capacity(cubes.len());
        for cube in &cubes {
            let e = eliminate_exists(self.theory, v, cube, pattern);
            *threshold = (*threshold).max(e.threshold);
            if let Some(c) = e.cube {
                out.push(c);
            }
        }
        out.sort();
        out.dedup();
        Ok(cubes_to_formula(&out))
    }

    /// Splits a quantifier-free formula over the frame `vars` into pairwise
    /// disjoint cells with exact counts.
    pub fn decompose(
        &self,
        vars: &[Symbol],
        qf: &Formula,
        pattern: &ParamPattern,
    ) -> Result<Vec<Cell>> {
        if !qf.is_quantifier_free() {
            return Err(Error::Invalid("decompose expects a quantifier-free formula".into()));
        }
        self.check_frame(vars, qf)?;
        let cap = cell_cap(&self.limits);
        match (self.theory, pattern) {
            (Theory::PureSet, ParamPattern::Eq(p)) => {
                let mut cells = Vec::new();
                for cell in pure_set::complete_cells(vars, p, cap)? {
                    if cell.satisfies(qf, vars, p)? {
                        cells.push(Cell {
                            cube: cell.cube(vars, p),
                            poly: cell.poly(),
                            coset: None,
                        });
                    }
                }
                Ok(cells)
            }
            (Theory::VectorSpace(f), ParamPattern::Lin(p)) => {
                let cubes = dnf(self.theory, qf, Some(pattern), cap)?;
                let disjoint = disjointify(self.theory, &cubes, Some(pattern), cap)?;
                let max_diseq = self.limits.max_disequations;
                disjoint
                    .into_par_iter()
                    .map(|cube| {
                        let poly = vector_space::count_cell_vs(f, vars, &cube, p, max_diseq)?;
                        let coset = vector_space::coset_key(f, vars, &cube, p).map(|(_, k)| k);
                        Ok(Cell { cube, poly, coset })
                    })
                    .filter(|c: &Result<Cell>| c.as_ref().map_or(true, |c| !c.poly.is_zero()))
                    .collect()
            }
            _ => Err(Error::TheoryMismatch(format!(
                "pattern `{pattern}` does not belong to theory {}",
                self.theory
            ))),
        }
    }

    fn check_frame(&self, vars: &[Symbol], f: &Formula) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in vars {
            if v.is_param() {
                return Err(Error::Invalid(format!("`{v}` is a parameter, not a variable")));
            }
            if !seen.insert(v) {
                return Err(Error::Invalid(format!("variable `{v}` listed twice")));
            }
        }
        if let Some(v) = f.free_symbols().variables.iter().find(|v| !seen.contains(v)) {
            return Err(Error::UnknownSymbol(v.name().to_owned()));
        }
        Ok(())
    }

    /// The cells of `f` (quantifiers allowed) and the elimination threshold.
    pub fn cells(
        &self,
        vars: &[Symbol],
        f: &Formula,
        pattern: &ParamPattern,
    ) -> Result<(Vec<Cell>, usize)> {
        let pattern = self.resolve_pattern(f, Some(pattern))?;
        self.check_frame(vars, f)?;
        let (qf, threshold) = self.quantifier_eliminate(f, Some(&pattern))?;
        Ok((self.decompose(vars, &qf, &pattern)?, threshold))
    }

    /// Exact count of `f` over the frame `vars` as a polynomial in the model
    /// size, under `pattern` (the generic pattern when `None`).
    pub fn count(
        &self,
        vars: &[Symbol],
        f: &Formula,
        pattern: Option<&ParamPattern>,
    ) -> Result<CountResult> {
        let pattern = self.resolve_pattern(f, pattern)?;
        let (cells, threshold) = self.cells(vars, f, &pattern)?;
        let poly: IntPolynomial = cells.iter().map(|c| c.poly.clone()).sum();
        let qe_bound = if threshold > 0 { threshold as u64 + 1 } else { 0 };
        let threshold_q0 = qe_bound.max(pattern.min_model_size());
        let morley_rank = poly.signed_degree();
        let top: Vec<&Cell> = cells.iter().filter(|c| c.rank() == morley_rank).collect();
        let morley_degree = match self.theory {
            Theory::PureSet => top.len(),
            Theory::VectorSpace(_) => top
                .iter()
                .map(|c| c.coset.as_ref())
                .collect::<BTreeSet<_>>()
                .len(),
        } as u64;
        let result = CountResult {
            leading_coefficient: poly.leading_coefficient(),
            poly,
            threshold_q0,
            morley_rank,
            morley_degree: if morley_rank < 0 { 0 } else { morley_degree },
        };
        if !result.is_empty() {
            let lc = &result.leading_coefficient;
            if !lc.is_positive() || result.morley_degree < 1 || BigInt::from(result.morley_degree) > *lc {
                return Err(Error::Invariant(format!(
                    "degree {} against leading coefficient {lc}",
                    result.morley_degree
                )));
            }
        }
        Ok(result)
    }

    /// Counts `f` under every parameter pattern and groups patterns with the
    /// same polynomial.
    pub fn parametric_count(&self, vars: &[Symbol], f: &Formula) -> Result<PartitionResult> {
        let params = f.free_symbols().parameters;
        self.parametric_count_over(vars, f, &params)
    }

    /// As [`Self::parametric_count`], with an explicit parameter list (which
    /// may include parameters not occurring in `f`).
    pub fn parametric_count_over(
        &self,
        vars: &[Symbol],
        f: &Formula,
        params: &[Symbol],
    ) -> Result<PartitionResult> {
        let patterns = enumerate_patterns(self.theory, params, &self.limits)?;
        let results: Vec<CountResult> = patterns
            .par_iter()
            .map(|p| self.count(vars, f, Some(p)))
            .collect::<Result<_>>()?;
        let mut entries: Vec<PartitionEntry> = Vec::new();
        for (pattern, result) in patterns.into_iter().zip(results) {
            match entries.iter_mut().find(|e| e.result.poly == result.poly) {
                Some(e) => {
                    e.result.threshold_q0 = e.result.threshold_q0.max(result.threshold_q0);
                    e.patterns.push(pattern);
                }
                None => entries.push(PartitionEntry {
                    patterns: vec![pattern],
                    formula: Formula::True,
                    result,
                }),
            }
        }
        for e in &mut entries {
            e.formula = Formula::or(e.patterns.iter().map(ParamPattern::to_formula).collect());
        }
        Ok(PartitionResult {
            params: params.to_vec(),
            entries,
        })
    }

    /// Checks that the count of `f & g` over the joined frame is the product
    /// of the counts, with ranks adding and degrees multiplying.
    pub fn product_check(
        &self,
        (vars_f, f): (&[Symbol], &Formula),
        (vars_g, g): (&[Symbol], &Formula),
        pattern: Option<&ParamPattern>,
    ) -> Result<ProductCheck> {
        if vars_f.iter().any(|v| vars_g.contains(v)) {
            return Err(Error::Invalid("product factors share a variable".into()));
        }
        let both = Formula::And(vec![f.clone(), g.clone()]);
        let pattern = self.resolve_pattern(&both, pattern)?;
        let left = self.count(vars_f, f, Some(&pattern))?;
        let right = self.count(vars_g, g, Some(&pattern))?;
        let joined: Vec<Symbol> = vars_f.iter().chain(vars_g).cloned().collect();
        let product = self.count(&joined, &both, Some(&pattern))?;
        let holds = if left.is_empty() || right.is_empty() {
            product.is_empty()
        } else {
            product.poly == &left.poly * &right.poly
                && product.morley_rank == left.morley_rank + right.morley_rank
                && product.morley_degree == left.morley_degree * right.morley_degree
        };
        Ok(ProductCheck {
            left,
            right,
            product,
            holds,
        })
    }

    /// Groups the top-rank cells of `f` into pieces of Morley degree 1 (one
    /// per complete type or coset) and collects the lower-rank cells.
    pub fn top_split(
        &self,
        vars: &[Symbol],
        f: &Formula,
        pattern: &ParamPattern,
    ) -> Result<TopSplit> {
        let (cells, _) = self.cells(vars, f, pattern)?;
        let rank = cells.iter().map(Cell::rank).max().unwrap_or(-1);
        let mut groups: Vec<(Option<Matrix>, Vec<Cube>)> = Vec::new();
        let mut rest = Vec::new();
        for c in cells {
            if c.rank() != rank {
                rest.push(c.cube);
                continue;
            }
            let key = match self.theory {
                Theory::PureSet => None,
                Theory::VectorSpace(_) => c.coset.clone(),
            };
            match groups.iter_mut().find(|(k, _)| key.is_some() && *k == key) {
                Some((_, cubes)) => cubes.push(c.cube),
                None => groups.push((key, vec![c.cube])),
            }
        }
        Ok(TopSplit {
            pieces: groups.iter().map(|(_, cubes)| cubes_to_formula(cubes)).collect(),
            remainder: cubes_to_formula(&rest),
            rank,
        })
    }
}

/// The configured cell cap, overridden by `SMCOUNT_CELL_CAP` when set.
fn cell_cap(limits: &Limits) -> usize {
    std::env::var("SMCOUNT_CELL_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(limits.cell_cap)
}

//! The dense/sparse dichotomy for definable bipartite graphs.
//!
//! For `E` contained in `V x W` with `V` and `W` of Morley degree 1, either
//! `|E| = |V||W| - R(q)` or `|E| = R(q)` with `deg R < RM(V) + RM(W)`. The
//! verifier checks the induced bounds on `|E ∩ (A x B)|` for subsets of a
//! finite model.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::formula::{Formula, Symbol};
use crate::oracle::{solutions, FiniteModel};
use crate::poly::IntPolynomial;
use crate::theory::ParamPattern;

/// A bipartite graph: `E` is a formula over `v_vars` followed by `w_vars`.
#[derive(Clone, Debug)]
pub struct Graph {
    pub v_vars: Vec<Symbol>,
    pub v: Formula,
    pub w_vars: Vec<Symbol>,
    pub w: Formula,
    pub e: Formula,
}

impl Graph {
    pub fn frame(&self) -> Vec<Symbol> {
        self.v_vars.iter().chain(&self.w_vars).cloned().collect()
    }

    fn restrict(&self, v: Formula, w: Formula) -> Graph {
        Graph {
            e: Formula::and(vec![self.e.clone(), v.clone(), w.clone()]),
            v_vars: self.v_vars.clone(),
            v,
            w_vars: self.w_vars.clone(),
            w,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Dense,
    Sparse,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Dense => "dense",
            Case::Sparse => "sparse",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub label: String,
    pub graph: Graph,
    pub d1: i64,
    pub d2: i64,
    /// `None` on a split report, whose pairs carry the cases.
    pub case: Option<Case>,
    pub r_poly: Option<IntPolynomial>,
    pub v_poly: IntPolynomial,
    pub w_poly: IntPolynomial,
    pub e_poly: IntPolynomial,
    pub threshold_q0: u64,
    pub pairs: Vec<RegularityReport>,
    /// Lower-rank leftovers of a split, with their counts.
    pub remainders: Vec<(String, Formula, IntPolynomial)>,
}

impl RegularityReport {
    /// `|E|` predicted by the case formula at `q`.
    pub fn predicted_edges(&self, q: u64) -> Option<BigInt> {
        let r = self.r_poly.as_ref()?.eval_u64(q);
        Some(match self.case? {
            Case::Dense => self.v_poly.eval_u64(q) * self.w_poly.eval_u64(q) - r,
            Case::Sparse => r,
        })
    }

    /// The reports carrying a dichotomy claim: this one, or the pairs of a
    /// split.
    pub fn leaves(&self) -> Vec<&RegularityReport> {
        if self.case.is_some() {
            vec![self]
        } else {
            self.pairs.iter().collect()
        }
    }
}

/// Classifies `E` when both sides have Morley degree 1.
pub fn regularity_analyze(
    engine: &Engine,
    graph: &Graph,
    pattern: Option<&ParamPattern>,
) -> Result<RegularityReport> {
    analyze_labelled(engine, graph, pattern, "E".into())
}

fn analyze_labelled(
    engine: &Engine,
    graph: &Graph,
    pattern: Option<&ParamPattern>,
    label: String,
) -> Result<RegularityReport> {
    let all = Formula::and(vec![graph.v.clone(), graph.w.clone(), graph.e.clone()]);
    let pattern = engine.resolve_pattern(&all, pattern)?;
    let p = Some(&pattern);
    let v = engine.count(&graph.v_vars, &graph.v, p)?;
    let w = engine.count(&graph.w_vars, &graph.w, p)?;
    for (side, r) in [("V", &v), ("W", &w)] {
        if r.morley_degree != 1 {
            return Err(Error::Rejected(format!(
                "{side} has Morley degree {}; use the split refinement",
                r.morley_degree
            )));
        }
    }
    let frame = graph.frame();
    let outside = Formula::and(vec![
        graph.e.clone(),
        Formula::not(Formula::and(vec![graph.v.clone(), graph.w.clone()])),
    ]);
    if !engine.count(&frame, &outside, p)?.is_empty() {
        return Err(Error::Invalid("E is not contained in V x W".into()));
    }
    let e = engine.count(&frame, &graph.e, p)?;
    let full = v.morley_rank + w.morley_rank;
    let (case, r_poly) = if e.morley_rank == full {
        (Case::Dense, &(&v.poly * &w.poly) - &e.poly)
    } else {
        (Case::Sparse, e.poly.clone())
    };
    if r_poly.signed_degree() >= full {
        return Err(Error::Invariant(format!(
            "remainder {r_poly} has degree at least {full}"
        )));
    }
    Ok(RegularityReport {
        label,
        graph: graph.clone(),
        d1: v.morley_rank,
        d2: w.morley_rank,
        case: Some(case),
        r_poly: Some(r_poly),
        threshold_q0: v.threshold_q0.max(w.threshold_q0).max(e.threshold_q0),
        v_poly: v.poly,
        w_poly: w.poly,
        e_poly: e.poly,
        pairs: Vec::new(),
        remainders: Vec::new(),
    })
}

/// Splits `V` and `W` into top-rank pieces of Morley degree 1 and analyzes
/// every pair of pieces with `E` restricted to it.
pub fn regularity_split(
    engine: &Engine,
    graph: &Graph,
    pattern: Option<&ParamPattern>,
) -> Result<RegularityReport> {
    let all = Formula::and(vec![graph.v.clone(), graph.w.clone(), graph.e.clone()]);
    let pattern = engine.resolve_pattern(&all, pattern)?;
    let p = Some(&pattern);
    let vs = engine.top_split(&graph.v_vars, &graph.v, &pattern)?;
    let ws = engine.top_split(&graph.w_vars, &graph.w, &pattern)?;
    let mut pairs = Vec::new();
    for (i, vi) in vs.pieces.iter().enumerate() {
        for (j, wj) in ws.pieces.iter().enumerate() {
            let sub = graph.restrict(vi.clone(), wj.clone());
            pairs.push(analyze_labelled(engine, &sub, p, format!("V{}xW{}", i + 1, j + 1))?);
        }
    }
    let mut remainders = Vec::new();
    for (name, vars, rest) in [("V0", &graph.v_vars, &vs.remainder), ("W0", &graph.w_vars, &ws.remainder)] {
        if *rest != Formula::False {
            let r = engine.count(vars, rest, p)?;
            remainders.push((name.to_owned(), rest.clone(), r.poly));
        }
    }
    let v = engine.count(&graph.v_vars, &graph.v, p)?;
    let w = engine.count(&graph.w_vars, &graph.w, p)?;
    let e = engine.count(&graph.frame(), &graph.e, p)?;
    let threshold_q0 = pairs
        .iter()
        .map(|r: &RegularityReport| r.threshold_q0)
        .chain([v.threshold_q0, w.threshold_q0, e.threshold_q0])
        .max()
        .unwrap_or(0);
    Ok(RegularityReport {
        label: "E".into(),
        graph: graph.clone(),
        d1: v.morley_rank,
        d2: w.morley_rank,
        case: None,
        r_poly: None,
        v_poly: v.poly,
        w_poly: w.poly,
        e_poly: e.poly,
        threshold_q0,
        pairs,
        remainders,
    })
}

/// Outcome of checking one dichotomy claim in one model.
#[derive(Clone, Debug)]
pub struct PairVerification {
    pub label: String,
    pub case: Case,
    /// `|E|` from the case formula and from the model.
    pub expected_edges: BigInt,
    pub actual_edges: u64,
    pub count_matches: bool,
    /// Subset pairs `(A, B)` covered.
    pub pairs_checked: u128,
    pub exhaustive: bool,
    /// Smallest slack of the case inequality; negative means a violation.
    pub worst_margin: i128,
    pub violations: u64,
}

impl PairVerification {
    pub fn passed(&self) -> bool {
        self.count_matches && self.violations == 0
    }
}

#[derive(Clone, Debug)]
pub struct VerifySummary {
    pub q: u64,
    pub pairs: Vec<PairVerification>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(PairVerification::passed)
    }

    pub fn worst_margin(&self) -> Option<i128> {
        self.pairs.iter().map(|p| p.worst_margin).min()
    }
}

/// Sides up to this many elements in total are checked over all subset
/// pairs.
const EXHAUSTIVE_ELEMENTS: usize = 20;

/// Checks every dichotomy claim of `report` in `model`: the exact edge count,
/// and the subset inequality on all subset pairs for small sides, otherwise
/// on `trials` random pairs plus the empty, full and singleton subsets.
pub fn regularity_verify(
    model: &FiniteModel,
    report: &RegularityReport,
    trials: usize,
    seed: u64,
    budget: u128,
) -> Result<VerifySummary> {
    let q = model.size();
    if q < report.threshold_q0 {
        return Err(Error::InvalidSize(format!(
            "model size {q} is below the threshold {}",
            report.threshold_q0
        )));
    }
    let pairs = report
        .leaves()
        .into_iter()
        .enumerate()
        .map(|(i, leaf)| verify_leaf(model, leaf, trials, seed.wrapping_add(i as u64), budget))
        .collect::<Result<_>>()?;
    Ok(VerifySummary { q, pairs })
}

fn verify_leaf(
    model: &FiniteModel,
    leaf: &RegularityReport,
    trials: usize,
    seed: u64,
    budget: u128,
) -> Result<PairVerification> {
    let q = model.size();
    let case = leaf.case.expect("leaf reports carry a case");
    let g = &leaf.graph;
    let vs = solutions(model, &g.v_vars, &g.v, budget)?;
    let ws = solutions(model, &g.w_vars, &g.w, budget)?;
    let es = solutions(model, &g.frame(), &g.e, budget)?;
    let nv = g.v_vars.len();
    // adjacency as one bit row over V per element of W
    let words = vs.len().div_ceil(64).max(1);
    let mut cols = vec![vec![0u64; words]; ws.len()];
    for t in &es {
        let (Ok(i), Ok(j)) = (vs.binary_search(&t[..nv].to_vec()), ws.binary_search(&t[nv..].to_vec()))
        else {
            return Err(Error::Invalid("E has an edge outside V x W".into()));
        };
        cols[j][i / 64] |= 1 << (i % 64);
    }
    let expected_edges = leaf.predicted_edges(q).expect("leaf reports carry a case");
    let actual_edges = es.len() as u64;
    let r = leaf
        .r_poly
        .as_ref()
        .expect("leaf reports carry R")
        .eval_u64(q)
        .to_i128()
        .ok_or_else(|| Error::Invalid("R(q) out of range".into()))?;

    let margin = |a: i128, b: i128, edges: i128| match case {
        Case::Dense => edges - (a * b - r),
        Case::Sparse => r - edges,
    };
    let mut worst = i128::MAX;
    let mut violations = 0u64;
    let mut checked = 0u128;
    let exhaustive = vs.len() + ws.len() <= EXHAUSTIVE_ELEMENTS;
    if exhaustive {
        // For a fixed A the worst B is determined column by column: each w
        // contributes deg_A(w) edges and, in the dense case, |A| - deg_A(w)
        // missing ones.
        let b_all = 1u128 << ws.len();
        for mask in 0u64..(1u64 << vs.len()) {
            let a = mask.count_ones() as i128;
            let degs: Vec<i128> = cols.iter().map(|c| (c[0] & mask).count_ones() as i128).collect();
            let m = match case {
                Case::Dense => r - degs.iter().map(|d| a - d).sum::<i128>(),
                Case::Sparse => r - degs.iter().sum::<i128>(),
            };
            worst = worst.min(m);
            if m < 0 {
                violations += count_violating(case, a, r, &degs);
            }
            checked += b_all;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples: Vec<(Vec<u64>, Vec<bool>)> = Vec::new();
        let full_a = vec![u64::MAX; words];
        let empty_a = vec![0u64; words];
        let full_b = vec![true; ws.len()];
        let empty_b = vec![false; ws.len()];
        for (a, b) in [(&empty_a, &empty_b), (&empty_a, &full_b), (&full_a, &empty_b), (&full_a, &full_b)] {
            samples.push((a.clone(), b.clone()));
        }
        for i in 0..vs.len() {
            let mut a = empty_a.clone();
            a[i / 64] |= 1 << (i % 64);
            samples.push((a, full_b.clone()));
        }
        for j in 0..ws.len() {
            let mut b = empty_b.clone();
            b[j] = true;
            samples.push((full_a.clone(), b));
        }
        for _ in 0..trials {
            let a: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
            let b: Vec<bool> = (0..ws.len()).map(|_| rng.gen()).collect();
            samples.push((a, b));
        }
        for (mut a, b) in samples {
            // clear bits past |V|
            for (w, word) in a.iter_mut().enumerate() {
                let lo = w * 64;
                if lo + 64 > vs.len() {
                    let keep = vs.len().saturating_sub(lo);
                    *word &= if keep == 0 { 0 } else { u64::MAX >> (64 - keep) };
                }
            }
            let size_a: i128 = a.iter().map(|x| x.count_ones() as i128).sum();
            let size_b = b.iter().filter(|&&x| x).count() as i128;
            let edges: i128 = cols
                .iter()
                .zip(&b)
                .filter(|(_, &inb)| inb)
                .map(|(c, _)| c.iter().zip(&a).map(|(x, y)| (x & y).count_ones() as i128).sum::<i128>())
                .sum();
            let m = margin(size_a, size_b, edges);
            worst = worst.min(m);
            if m < 0 {
                violations += 1;
            }
            checked += 1;
        }
    }
    Ok(PairVerification {
        label: leaf.label.clone(),
        case,
        count_matches: expected_edges == BigInt::from(actual_edges),
        expected_edges,
        actual_edges,
        pairs_checked: checked,
        exhaustive,
        worst_margin: worst,
        violations,
    })
}

/// Number of subsets B violating the inequality for a fixed A, by a
/// subset-sum count over the per-column contributions.
fn count_violating(case: Case, a: i128, r: i128, degs: &[i128]) -> u64 {
    // loss of B = sum over w in B of the column's contribution; violation
    // iff loss > r
    let contrib: Vec<usize> = degs
        .iter()
        .map(|&d| match case {
            Case::Dense => (a - d) as usize,
            Case::Sparse => d as usize,
        })
        .collect();
    let max: usize = contrib.iter().sum();
    let mut ways = vec![0u64; max + 1];
    ways[0] = 1;
    for c in contrib {
        for s in (c..=max).rev() {
            ways[s] += ways[s - c];
        }
    }
    ways.iter()
        .enumerate()
        .filter(|(s, _)| *s as i128 > r)
        .map(|(_, w)| w)
        .sum()
}

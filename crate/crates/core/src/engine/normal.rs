//! Disjunctive normal form with pruning, and disjointification.

use crate::error::{Error, Result};
use crate::formula::{Cube, Formula, Literal};
use crate::theory::{simplify_cube, ParamPattern, Theory};

fn cap_error(limit: usize, actual: usize) -> Error {
    Error::CapExceeded {
        what: "cell",
        limit,
        actual,
    }
}

/// DNF of a quantifier-free formula. Inconsistent conjunctions are dropped as
/// soon as they appear, so the cap applies to the pruned size.
pub fn dnf(
    theory: Theory,
    f: &Formula,
    pattern: Option<&ParamPattern>,
    cap: usize,
) -> Result<Vec<Cube>> {
    let nnf = f.to_nnf();
    let mut cubes = dnf_rec(theory, &nnf, pattern, cap)?;
    cubes.sort();
    cubes.dedup();
    Ok(cubes)
}

fn dnf_rec(
    theory: Theory,
    f: &Formula,
    pattern: Option<&ParamPattern>,
    cap: usize,
) -> Result<Vec<Cube>> {
    Ok(match f {
        Formula::True => vec![vec![]],
        Formula::False => vec![],
        Formula::Atom(a) => simplify_cube(theory, vec![Literal::pos(a.clone())], pattern)
            .into_iter()
            .collect(),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(a) => simplify_cube(theory, vec![Literal::neg(a.clone())], pattern)
                .into_iter()
                .collect(),
            _ => return Err(Error::Invariant("formula not in negation normal form".into())),
        },
        Formula::Or(fs) => {
            let mut out = Vec::new();
            for g in fs {
                out.extend(dnf_rec(theory, g, pattern, cap)?);
                if out.len() > cap {
                    return Err(cap_error(cap, out.len()));
                }
            }
            out
        }
        Formula::And(fs) => {
            let mut acc: Vec<Cube> = vec![vec![]];
            for g in fs {
                let right = dnf_rec(theory, g, pattern, cap)?;
                let mut next = Vec::new();
                for a in &acc {
                    for b in &right {
                        let mut c = a.clone();
                        c.extend(b.iter().cloned());
                        if let Some(c) = simplify_cube(theory, c, pattern) {
                            next.push(c);
                            if next.len() > cap {
                                return Err(cap_error(cap, next.len()));
                            }
                        }
                    }
                }
                next.sort();
                next.dedup();
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        Formula::Implies(..) | Formula::Exists(..) | Formula::Forall(..) => {
            return Err(Error::Invalid(format!("expected a quantifier-free formula, got `{f}`")))
        }
    })
}

/// Rewrites a list of conjunctions into pairwise inconsistent ones with the
/// same union. Each cube has the earlier ones subtracted: `c - (l1 & ... &
/// lm)` is the union of `c & l1 & ... & l(t-1) & !lt` for `t = 1..m`.
pub fn disjointify(
    theory: Theory,
    cubes: &[Cube],
    pattern: Option<&ParamPattern>,
    cap: usize,
) -> Result<Vec<Cube>> {
    let mut out: Vec<Cube> = Vec::new();
    for (i, c) in cubes.iter().enumerate() {
        let mut pieces = vec![c.clone()];
        for d in &cubes[..i] {
            let mut next = Vec::new();
            for p in pieces {
                next.extend(sharp(theory, &p, d, pattern));
            }
            pieces = next;
            if pieces.is_empty() {
                break;
            }
            if out.len() + pieces.len() > cap {
                return Err(cap_error(cap, out.len() + pieces.len()));
            }
        }
        out.extend(pieces);
        if out.len() > cap {
            return Err(cap_error(cap, out.len()));
        }
    }
    Ok(out)
}

fn sharp(theory: Theory, c: &Cube, d: &Cube, pattern: Option<&ParamPattern>) -> Vec<Cube> {
    let mut both = c.clone();
    both.extend(d.iter().cloned());
    if simplify_cube(theory, both, pattern).is_none() {
        return vec![c.clone()];
    }
    let mut out = Vec::new();
    let mut prefix = c.clone();
    for lit in d {
        let mut piece = prefix.clone();
        piece.push(lit.negated());
        if let Some(p) = simplify_cube(theory, piece, pattern) {
            out.push(p);
        }
        prefix.push(lit.clone());
        match simplify_cube(theory, prefix, pattern) {
            Some(p) => prefix = p,
            None => break,
        }
    }
    out
}

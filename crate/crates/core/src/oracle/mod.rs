//! Concrete finite models and brute-force ground truth.
//!
//! Pure-set models have domain `0..q`. Vector-space models are `F_p^e`,
//! with each vector stored as the integer whose base-`p` digits are its
//! coordinates (first coordinate in the lowest digit).

mod eval;
mod interp;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Fp, Symbol};
use crate::theory::linalg::EchelonBasis;
use crate::theory::{ParamPattern, Theory};

pub use eval::{brute_count, evaluation_cost, find_disagreement, holds, solutions, Compiled};
pub use interp::interpolate;

/// Domains larger than this are refused: elements are stored as `u32` and
/// every count enumerates at least the whole domain.
const MAX_DOMAIN: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    theory: Theory,
    size: u64,
    dim: u32,
    assignment: Vec<(Symbol, u32)>,
}

impl FiniteModel {
    /// A model without parameters. For vector spaces `q` must be a power
    /// of `p`.
    pub fn new(theory: Theory, q: u64) -> Result<Self> {
        if q == 0 || q > MAX_DOMAIN {
            return Err(Error::InvalidSize(format!("model size {q} out of range")));
        }
        let dim = match theory {
            Theory::PureSet => 0,
            Theory::VectorSpace(f) => exponent(f, q)
                .ok_or_else(|| Error::InvalidSize(format!("{q} is not a power of {}", f.p())))?,
        };
        Ok(Self {
            theory,
            size: q,
            dim,
            assignment: Vec::new(),
        })
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Dimension over `F_p`; 0 for pure-set models.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn field(&self) -> Option<Fp> {
        match self.theory {
            Theory::VectorSpace(f) => Some(f),
            Theory::PureSet => None,
        }
    }

    pub fn assignment(&self) -> &[(Symbol, u32)] {
        &self.assignment
    }

    pub fn param(&self, s: &Symbol) -> Option<u32> {
        self.assignment.iter().find(|(p, _)| p == s).map(|&(_, v)| v)
    }

    /// The same domain with a different parameter assignment.
    pub fn with_assignment(&self, assignment: Vec<(Symbol, u32)>) -> Result<Self> {
        if let Some((s, v)) = assignment.iter().find(|(_, v)| *v as u64 >= self.size) {
            return Err(Error::Invalid(format!("value {v} for `{s}` is outside the domain")));
        }
        Ok(Self {
            assignment,
            ..self.clone()
        })
    }

    /// Vector addition, or `a` itself for pure-set models.
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let Some(f) = self.field() else { return a };
        let p = f.p() as u32;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut r, mut place) = (a, b, 0, 1);
        for _ in 0..self.dim {
            r += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        r
    }

    /// Scalar multiple `c * a`.
    pub fn scale(&self, c: u32, a: u32) -> u32 {
        let Some(f) = self.field() else { return a };
        let p = f.p() as u32;
        match c % p {
            0 => 0,
            1 => a,
            c => {
                let (mut a, mut r, mut place) = (a, 0, 1);
                for _ in 0..self.dim {
                    r += ((a % p) * c % p) * place;
                    a /= p;
                    place *= p;
                }
                r
            }
        }
    }

    /// Coordinates of a vector, or the element itself.
    pub fn coords(&self, a: u32) -> Vec<u32> {
        match self.field() {
            None => vec![a],
            Some(f) => {
                let p = f.p() as u32;
                (0..self.dim).map(|i| a / p.pow(i) % p).collect()
            }
        }
    }

    pub fn element_from_coords(&self, coords: &[u32]) -> u32 {
        match self.field() {
            None => coords[0],
            Some(f) => {
                let p = f.p() as u32;
                coords.iter().rev().fold(0, |acc, &c| acc * p + c % p)
            }
        }
    }

    pub fn render_element(&self, a: u32) -> String {
        match self.field() {
            None => a.to_string(),
            Some(_) => {
                let parts: Vec<String> = self.coords(a).iter().map(u32::to_string).collect();
                format!("({})", parts.join(","))
            }
        }
    }

    /// Whether the current assignment realizes `pattern` exactly.
    pub fn realizes(&self, pattern: &ParamPattern) -> bool {
        let Some(values) = pattern
            .params()
            .iter()
            .map(|s| self.param(s))
            .collect::<Option<Vec<u32>>>()
        else {
            return false;
        };
        match pattern {
            ParamPattern::Eq(p) => {
                let params = p.params();
                params.iter().enumerate().all(|(i, a)| {
                    params.iter().enumerate().all(|(j, b)| {
                        (p.block_of(a) == p.block_of(b)) == (values[i] == values[j])
                    })
                })
            }
            ParamPattern::Lin(p) => {
                // relation space of the values equals the pattern's
                let f = p.field();
                let m = values.len();
                let vectors: Vec<Vec<u64>> = values
                    .iter()
                    .map(|&v| self.coords(v).into_iter().map(u64::from).collect())
                    .collect();
                let relation_dim = m - rank_of(f, &vectors);
                if relation_dim != p.rank() {
                    return false;
                }
                p.relations().rows().iter().all(|row| {
                    let combo = row
                        .iter()
                        .zip(&values)
                        .fold(0, |acc, (&c, &v)| self.add(acc, self.scale(c as u32, v)));
                    combo == 0
                })
            }
        }
    }
}

fn rank_of(f: Fp, vectors: &[Vec<u64>]) -> usize {
    let mut basis = EchelonBasis::new(f);
    vectors.iter().filter(|v| basis.insert(v).is_some()).count()
}

fn exponent(f: Fp, q: u64) -> Option<u32> {
    let mut e = 0;
    let mut x = 1;
    while x < q {
        x *= f.p();
        e += 1;
    }
    (x == q).then_some(e)
}

/// Model sizes `>= from` of the theory in increasing order: every integer
/// for the pure set, the powers of `p` for vector spaces.
pub fn sizes_from(theory: Theory, from: u64) -> impl Iterator<Item = u64> {
    let mut next = match theory {
        Theory::PureSet => from.max(1),
        Theory::VectorSpace(f) => {
            let mut x = 1;
            while x < from {
                x *= f.p();
            }
            x
        }
    };
    std::iter::from_fn(move || {
        let q = next;
        next = match theory {
            Theory::PureSet => q + 1,
            Theory::VectorSpace(f) => q * f.p(),
        };
        Some(q)
    })
}

/// A model of size `q` with parameters realizing `pattern`. Seed 0 gives
/// the first-fit assignment (blocks to `0, 1, ...`; independent parameters to
/// the unit vectors); other seeds pick a random realization.
pub fn build_model(theory: Theory, q: u64, pattern: &ParamPattern, seed: u64) -> Result<FiniteModel> {
    pattern.check_theory(theory)?;
    let model = FiniteModel::new(theory, q)?;
    let assignment = match pattern {
        ParamPattern::Eq(p) => {
            let c = p.blocks().len();
            if (c as u64) > q {
                return Err(Error::Unrealizable(format!(
                    "{c} distinct parameter blocks need at least {c} elements, model has {q}"
                )));
            }
            let values: Vec<u32> = if seed == 0 {
                (0..c as u32).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                sample(&mut rng, q as usize, c).into_iter().map(|v| v as u32).collect()
            };
            p.blocks()
                .iter()
                .zip(values)
                .flat_map(|(block, v)| block.iter().map(move |s| (s.clone(), v)))
                .collect::<Vec<_>>()
        }
        ParamPattern::Lin(p) => {
            let f = p.field();
            let indep = p.independent_params();
            let r = indep.len() as u32;
            if r > model.dim {
                return Err(Error::Unrealizable(format!(
                    "{r} independent parameters need dimension {r}, model has {}",
                    model.dim
                )));
            }
            let values: Vec<u32> = if seed == 0 {
                (0..r).map(|j| (f.p() as u32).pow(j)).collect()
            } else {
                random_independent(&model, r as usize, seed)
            };
            let mut assignment: Vec<(Symbol, u32)> = indep.into_iter().zip(values).collect();
            for (dep, term) in p.solved() {
                let v = term.iter().fold(0, |acc, (s, c)| {
                    let sv = assignment.iter().find(|(x, _)| x == s).map(|&(_, v)| v).unwrap_or(0);
                    model.add(acc, model.scale(c as u32, sv))
                });
                assignment.push((dep, v));
            }
            let order = p.params();
            assignment.sort_by_key(|(s, _)| order.iter().position(|x| x == s));
            assignment
        }
    };
    let model = model.with_assignment(assignment)?;
    if !model.realizes(pattern) {
        return Err(Error::Invariant(format!("assignment does not realize `{pattern}`")));
    }
    Ok(model)
}

fn random_independent(model: &FiniteModel, r: usize, seed: u64) -> Vec<u32> {
    let f = model.field().expect("vector-space model");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = EchelonBasis::new(f);
    let mut out = Vec::with_capacity(r);
    while out.len() < r {
        let v: u32 = rng.gen_range(1..model.size() as u32);
        let coords: Vec<u64> = model.coords(v).into_iter().map(u64::from).collect();
        if basis.insert(&coords).is_some() {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, parse_input, TheoryTag};
    use crate::theory::{EqPattern, LinPattern};

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    #[test]
    fn build_examples() {
        let ab = [Symbol::param("a"), Symbol::param("b")];
        let pat = ParamPattern::Eq(EqPattern::discrete(&ab));
        let m = build_model(TheoryTag::PureSet, 5, &pat, 0).unwrap();
        assert_eq!(m.size(), 5);
        assert_eq!(m.assignment(), &[(ab[0].clone(), 0), (ab[1].clone(), 1)]);
        assert!(matches!(
            build_model(TheoryTag::PureSet, 1, &pat, 0),
            Err(Error::Unrealizable(_))
        ));

        let a = [Symbol::param("a")];
        let pat = ParamPattern::Lin(LinPattern::independent(f2(), &a));
        let m = build_model(TheoryTag::VectorSpace(f2()), 4, &pat, 0).unwrap();
        assert_eq!(m.render_element(m.param(&a[0]).unwrap()), "(1,0)");
    }

    #[test]
    fn build_is_deterministic_per_seed() {
        let ps: Vec<Symbol> = ["a", "b", "c"].iter().map(|n| Symbol::param(n)).collect();
        let pat = ParamPattern::Eq(EqPattern::discrete(&ps));
        for seed in 1..20 {
            let m1 = build_model(TheoryTag::PureSet, 9, &pat, seed).unwrap();
            let m2 = build_model(TheoryTag::PureSet, 9, &pat, seed).unwrap();
            assert_eq!(m1, m2);
        }
        let f3 = Fp::new(3).unwrap();
        let rel = LinPattern::from_relations(
            f3,
            &ps,
            &[crate::formula::LinTerm::from_pairs(f3, [(ps[0].clone(), 1), (ps[2].clone(), 1)])],
        )
        .unwrap();
        let pat = ParamPattern::Lin(rel);
        for seed in 0..20 {
            let m = build_model(TheoryTag::VectorSpace(f3), 27, &pat, seed).unwrap();
            assert!(m.realizes(&pat));
        }
    }

    #[test]
    fn count_examples() {
        let m = FiniteModel::new(TheoryTag::PureSet, 5).unwrap();
        let input = parse_input("var x, y; x != y", TheoryTag::PureSet).unwrap();
        assert_eq!(brute_count(&m, &input.variables(), &input.formula, 1 << 20).unwrap(), 20);

        let vs = TheoryTag::VectorSpace(f2());
        let m = FiniteModel::new(vs, 4).unwrap();
        let input = parse_input("var x, y; x + y = 0", vs).unwrap();
        assert_eq!(brute_count(&m, &input.variables(), &input.formula, 1 << 20).unwrap(), 4);

        let x = [Symbol::var("x")];
        assert_eq!(brute_count(&m, &x, &crate::formula::Formula::False, 100).unwrap(), 0);
    }

    #[test]
    fn quantified_counts_and_budget() {
        let m = FiniteModel::new(TheoryTag::PureSet, 6).unwrap();
        let f = parse("var x; forall y. exists z. (z != x & z != y)", TheoryTag::PureSet).unwrap();
        assert_eq!(brute_count(&m, &[Symbol::var("x")], &f, 1 << 20).unwrap(), 6);
        assert!(matches!(
            brute_count(&m, &[Symbol::var("x")], &f, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn arithmetic_in_f3() {
        let f3 = Fp::new(3).unwrap();
        let m = FiniteModel::new(TheoryTag::VectorSpace(f3), 9).unwrap();
        let a = m.element_from_coords(&[1, 2]);
        let b = m.element_from_coords(&[2, 2]);
        assert_eq!(m.coords(m.add(a, b)), vec![0, 1]);
        assert_eq!(m.coords(m.scale(2, a)), vec![2, 1]);
        assert!(FiniteModel::new(TheoryTag::VectorSpace(f3), 10).is_err());
    }

    #[test]
    fn sizes() {
        let s: Vec<u64> = sizes_from(TheoryTag::VectorSpace(f2()), 3).take(3).collect();
        assert_eq!(s, vec![4, 8, 16]);
        let s: Vec<u64> = sizes_from(TheoryTag::PureSet, 0).take(3).collect();
        assert_eq!(s, vec![1, 2, 3]);
    }
}

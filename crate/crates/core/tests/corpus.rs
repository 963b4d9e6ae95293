mod common;

use common::*;
use num_bigint::BigInt;
use smcount_core::engine::Engine;
use smcount_core::oracle::{brute_count, interpolate, sizes_from, FiniteModel};
use smcount_core::theory::ParamPattern;
use smcount_core::IntPolynomial;

/// Interpolates oracle counts over every affordable size, independently of
/// the engine. Run with `--ignored --nocapture` to regenerate the frozen
/// polynomials in the corpus.
#[test]
#[ignore]
fn print_oracle_polynomials() {
    for fx in corpus() {
        let input = fx.input();
        let vars = input.variables();
        let params = input.parameters();
        let pattern = ParamPattern::generic(fx.theory, &params);
        let start = match fx.theory {
            // small models can make quantified formulas degenerate
            PURE => (params.len() + 2 * input.formula.quantifier_depth()) as u64 + 1,
            _ => 2,
        };
        let mut points = Vec::new();
        for q in sizes_from(fx.theory, start).take(10) {
            if (fx.theory == PURE && q > 14) || !affordable(q, vars.len(), &input.formula) {
                break;
            }
            let Ok(model) = smcount_core::oracle::build_model(fx.theory, q, &pattern, 0) else {
                continue;
            };
            let n = brute_count(&model, &vars, &input.formula, BUDGET).unwrap();
            points.push((BigInt::from(q), BigInt::from(n)));
        }
        let poly = interpolate(&points).map(|p| p.coeffs_i64().unwrap());
        println!("{:<24} {} points {:?}", fx.name, points.len(), poly);
    }
}

#[test]
fn engine_matches_frozen_polynomials() {
    for fx in corpus() {
        let input = fx.input();
        let engine = Engine::new(fx.theory);
        let r = engine.count(&input.variables(), &input.formula, None).unwrap();
        assert_eq!(r.poly, IntPolynomial::from_i64s(fx.expected), "{}", fx.name);
    }
}

#[test]
fn corpus_shape() {
    let all = corpus();
    let pure = all.iter().filter(|f| f.theory == PURE).count();
    assert!(all.len() >= 30 && pure >= 15 && all.len() - pure >= 15);
    let max_vars = all.iter().map(|f| f.input().variables().len()).max();
    assert_eq!(max_vars, Some(4));
    assert!(all.iter().any(|f| f.input().formula.quantifier_depth() >= 2));
    assert!(all.iter().any(|f| f.expected.is_empty()));
}

#[test]
fn full_space_is_a_power() {
    for theory in [PURE, vs(2), vs(3)] {
        let engine = Engine::new(theory);
        for n in 0..=4 {
            let vars: Vec<_> = (0..n).map(|i| smcount_core::formula::Symbol::var(&format!("x{i}"))).collect();
            let r = engine.count(&vars, &smcount_core::formula::Formula::True, None).unwrap();
            assert_eq!(r.poly, IntPolynomial::monomial(n));
            assert_eq!((r.morley_rank, r.morley_degree), (n as i64, 1));
        }
    }
    let _ = FiniteModel::new(PURE, 1).unwrap();
}

//! Shared fixtures: the formula corpus, parametric formulas, product pairs,
//! correspondences and graphs, with the sizes each is checked at.

#![allow(dead_code)]

use smcount_core::formula::{parse_document, parse_input, Formula, Fp, Input, TheoryTag};
use smcount_core::oracle::{evaluation_cost, sizes_from};

pub const PURE: TheoryTag = TheoryTag::PureSet;

pub fn vs(p: u64) -> TheoryTag {
    TheoryTag::VectorSpace(Fp::new(p).unwrap())
}

/// Brute-force work allowed per count.
pub const BUDGET: u128 = 10_000_000;

pub struct Fixture {
    pub name: &'static str,
    pub theory: TheoryTag,
    pub text: &'static str,
    /// Ascending coefficients, frozen from oracle interpolation.
    pub expected: &'static [i64],
}

impl Fixture {
    pub fn input(&self) -> Input {
        parse_input(self.text, self.theory).unwrap_or_else(|e| panic!("{}: {e}", self.name))
    }
}

macro_rules! fixture {
    ($name:literal, $theory:expr, $text:literal, $expected:expr) => {
        Fixture {
            name: $name,
            theory: $theory,
            text: $text,
            expected: $expected,
        }
    };
}

pub fn corpus() -> Vec<Fixture> {
    vec![
        // pure set
        fixture!("distinct_pair", PURE, "var x, y; x != y", &[0, -1, 1]),
        fixture!("distinct_triple", PURE, "var x, y, z; x != y & y != z & x != z", &[0, 2, -3, 1]),
        fixture!("meets_either", PURE, "var x, y, z; x = y | x = z", &[0, -1, 2]),
        fixture!("avoid_two", PURE, "param a, b; var x; x != a & x != b", &[-2, 1]),
        fixture!("self_distinct", PURE, "var x; x != x", &[]),
        fixture!("closed_true", PURE, "exists x. x = x", &[1]),
        fixture!("third_point", PURE, "param a; var x; exists y. (y != x & y != a)", &[0, 1]),
        fixture!("alternating", PURE, "var x; forall y. exists z. (z != x & z != y)", &[0, 1]),
        fixture!("four_blocks", PURE, "var x, y, z, w; (x = y & z != w) | (x != y & z = w)", &[0, 0, -2, 2]),
        fixture!("pinned", PURE, "param a; var x, y; x = a & y != a", &[-1, 1]),
        fixture!("singleton_model", PURE, "var x; forall y. y = x", &[]),
        fixture!("implication", PURE, "param a; var x, y; x = a -> y = a", &[1, -1, 1]),
        fixture!("equivalence", PURE, "var x, y, z; (x = y) <-> (y = z)", &[0, 2, -2, 1]),
        fixture!("small_universe", PURE, "param a; var x; exists y. forall z. (z = y | z = x | z = a)", &[]),
        fixture!("either_param", PURE, "param a, b; var x; x = a | x = b", &[2]),
        fixture!("chain", PURE, "param a, b, c; var x, y; x != a & y != b & x != y & (x = c | y = c)", &[-4, 2]),
        fixture!("four_with_witness", PURE, "var x, y, z, w; x != y & exists u. (u = z & u != w)", &[0, 0, 1, -2, 1]),
        fixture!("plane", PURE, "var x, y; true", &[0, 0, 1]),
        // vector spaces over F_2
        fixture!("line", vs(2), "var x, y; x + y = 0", &[0, 1]),
        fixture!("plane_minus_line", vs(2), "var x, y, z; x + y + z = 0 & x != y", &[0, -1, 1]),
        fixture!("two_cosets", vs(2), "param a; var x, y; y = x | y = x + a", &[0, 2]),
        fixture!("avoid_zero_and_a", vs(2), "param a; var x; x != 0 & x != a", &[-2, 1]),
        fixture!("forall_solved", vs(2), "var y, z; forall x. (x + y = 0 -> x = z)", &[0, 1]),
        fixture!("exists_nonzero_sum", vs(2), "var y; exists x. x + y != 0", &[0, 1]),
        fixture!("empty_f2", vs(2), "var x; x != x", &[]),
        fixture!("four_sum", vs(2), "var x, y, z, w; x + y = z + w & x != y", &[0, 0, -1, 1]),
        fixture!("shifted_line", vs(2), "param a, b; var x, y; x + y = a & x != b", &[-1, 1]),
        fixture!("always", vs(2), "var x; forall y. exists z. z = x + y", &[0, 1]),
        fixture!("closed_nonzero", vs(2), "exists x. x != 0", &[1]),
        fixture!("three_lines", vs(2), "var x, y; x = 0 | y = 0 | x = y", &[-2, 3]),
        fixture!("space3", vs(2), "var x, y, z; true", &[0, 0, 0, 1]),
        // vector spaces over F_3
        fixture!("scaled_line", vs(3), "var x, y; y = 2*x", &[0, 1]),
        fixture!("three_cosets", vs(3), "param a; var x, y; y = x | y = x + a | y = x + 2*a", &[0, 3]),
        fixture!("halving", vs(3), "var y; exists x. 2*x = y", &[0, 1]),
        fixture!("f3_plane_minus_line", vs(3), "var x, y, z; x + y + z = 0 & x != y", &[0, -1, 1]),
        fixture!("f3_avoid", vs(3), "param a; var x; x != a & 2*x != a", &[-2, 1]),
        fixture!("f3_nested", vs(3), "var x; forall y. (y = x | exists z. (z != y & z + x != 0))", &[0, 1]),
        fixture!("f3_closed_empty", vs(3), "forall x. x = 0", &[]),
    ]
}

/// Model sizes at which a formula is checked exhaustively: for the pure set
/// `q0..=q0+8` capped at 12, for vector spaces every `p^e >= q0` costing at
/// most 10^6 atomic evaluations.
pub fn check_sizes(theory: TheoryTag, q0: u64, free: usize, f: &Formula) -> Vec<u64> {
    match theory {
        TheoryTag::PureSet => (q0.max(1)..=q0 + 8).filter(|&q| q <= 12).collect(),
        TheoryTag::VectorSpace(_) => sizes_from(theory, q0.max(1))
            .take_while(|&q| evaluation_cost(q, free, f) <= 1_000_000)
            .collect(),
    }
}

pub fn affordable(q: u64, free: usize, f: &Formula) -> bool {
    evaluation_cost(q, free, f) <= BUDGET
}

pub struct Parametric {
    pub name: &'static str,
    pub theory: TheoryTag,
    pub text: &'static str,
}

pub fn parametric() -> Vec<Parametric> {
    let p = |name, theory, text| Parametric { name, theory, text };
    vec![
        p("two_excluded", PURE, "param y1, y2; var x; x != y1 & x != y2"),
        p("either_param", PURE, "param a, b; var x; x = a | x = b"),
        p("pinned_pair", PURE, "param a, b; var x, y; x = a & y != b"),
        p("three_params", PURE, "param a, b, c; var x; x != a & (x = b | x != c)"),
        p("witness", PURE, "param a, b; var x; exists y. (y != x & y != a & y != b)"),
        p("pair_vs_params", PURE, "param a, b; var x, y; x != y & (x = a | y = b)"),
        p("singleton_vs", vs(2), "param a; var x; x = a"),
        p("two_cosets", vs(2), "param a; var x, y; y = x | y = x + a"),
        p("avoid_pair", vs(2), "param a, b; var x; x != a & x != b"),
        p("sum_line", vs(2), "param a, b; var x, y; x + y = a & x != b"),
        p("f3_three_cosets", vs(3), "param a; var x, y; y = x | y = x + a | y = x + 2*a"),
        p("f3_avoid", vs(3), "param a; var x; x != a & 2*x != a & x != 0"),
    ]
}

pub struct ProductPair {
    pub theory: TheoryTag,
    pub left: &'static str,
    pub right: &'static str,
}

pub fn product_pairs() -> Vec<ProductPair> {
    let p = |theory, left, right| ProductPair { theory, left, right };
    vec![
        p(PURE, "param a; var x; x != a", "param b; var y; y != b"),
        p(PURE, "var x; true", "var y; true"),
        p(PURE, "var x; false", "var y; y = y"),
        p(PURE, "var x1, x2; x1 != x2", "var y1, y2; y1 = y2"),
        p(PURE, "param a, b; var x; x = a | x = b", "param a; var y, z; y != a & z != y"),
        p(PURE, "var x; exists u. u != x", "var y1, y2, y3; y1 != y2 | y2 = y3"),
        p(vs(2), "var x, y; x + y = 0", "var z; z != 0"),
        p(vs(2), "param a; var x1, x2; x2 = x1 | x2 = x1 + a", "param b; var y; y != b"),
        p(vs(2), "var x; x != x", "var y; true"),
        p(vs(3), "var x1, x2; x2 = 2*x1", "param a; var y1, y2; y1 + y2 = a | y1 = 0"),
        p(vs(3), "var x; exists u. 2*u = x", "var y; y != 0"),
        p(vs(2), "param a, b; var x; x = a | x = b", "param a, b; var y; y = a + b"),
    ]
}

pub struct Correspondence {
    pub name: &'static str,
    pub theory: TheoryTag,
    /// Two `var` groups: the x tuple, then the y tuple.
    pub text: &'static str,
    pub k: usize,
    pub ell: usize,
}

pub fn correspondences() -> Vec<Correspondence> {
    let c = |name, theory, text, k, ell| Correspondence { name, theory, text, k, ell };
    vec![
        c("identity", vs(2), "var x; var y; y = x", 1, 1),
        c("two_to_two", vs(2), "param a; var x; var y; y = x | y = x + a", 2, 2),
        c("scaled", vs(3), "var x; var y; y = 2*x", 1, 1),
        c("three_to_three", vs(3), "param a; var x; var y; y = x | y = x + a | y = x + 2*a", 3, 3),
        c("pure_identity", PURE, "var x; var y; y = x", 1, 1),
        c("swap", PURE, "var x1, x2; var y1, y2; (y1 = x1 & y2 = x2) | (y1 = x2 & y2 = x1)", 2, 2),
        c("shear", vs(2), "var x1, x2; var y1, y2; y1 = x1 + x2 & y2 = x2", 1, 1),
        c("four_to_four", vs(2), "param a, b; var x; var y; y = x | y = x + a | y = x + b | y = x + a + b", 4, 4),
    ]
}

pub const REJECTED_CORRESPONDENCE: &str = "var x; var y; x != y";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Dense,
    Sparse,
    Split,
}

pub struct GraphFixture {
    pub name: &'static str,
    pub kind: GraphKind,
    /// A document with `V:`, `W:` and `E:` sections.
    pub text: &'static str,
    pub sizes: &'static [u64],
}

pub fn graphs() -> Vec<GraphFixture> {
    let g = |name, kind, text, sizes| GraphFixture { name, kind, text, sizes };
    vec![
        g(
            "off_diagonal",
            GraphKind::Dense,
            "theory pure_set\nV:\nvar x; true\nW:\nvar y; true\nE:\nvar x, y; x != y\n",
            &[2, 5, 7, 10, 12],
        ),
        g(
            "off_diagonal_punctured",
            GraphKind::Dense,
            "theory pure_set\nparam a;\nV:\nvar x; x != a\nW:\nvar y; y != a\nE:\nvar x, y; x != y & x != a & y != a\n",
            &[3, 6, 9, 11],
        ),
        g(
            "sum_avoids_a",
            GraphKind::Dense,
            "theory vector_space p=2\nparam a;\nV:\nvar x; true\nW:\nvar y; true\nE:\nvar x, y; x + y != a\n",
            &[2, 4, 8, 16, 32],
        ),
        g(
            "diagonal",
            GraphKind::Sparse,
            "theory pure_set\nV:\nvar x; true\nW:\nvar y; true\nE:\nvar x, y; x = y\n",
            &[1, 4, 7, 10, 12],
        ),
        g(
            "sum_is_a",
            GraphKind::Sparse,
            "theory vector_space p=2\nparam a;\nV:\nvar x; true\nW:\nvar y; true\nE:\nvar x, y; x + y = a\n",
            &[2, 4, 8, 16, 64],
        ),
        g(
            "doubling",
            GraphKind::Sparse,
            "theory vector_space p=3\nV:\nvar x; true\nW:\nvar y; true\nE:\nvar x, y; y = 2*x\n",
            &[1, 3, 9, 27],
        ),
        g(
            "two_planes",
            GraphKind::Split,
            "theory vector_space p=2\nparam a;\nV:\nvar x1, x2; x1 = 0 | x1 = a\nW:\nvar y; true\n\
             E:\nvar x1, x2, y; (x1 = 0 & y = x2) | (x1 = a & y != x2)\n",
            &[2, 4, 8, 16],
        ),
        g(
            "two_rows",
            GraphKind::Split,
            "theory pure_set\nparam a, b;\nV:\nvar x1, x2; x1 = a | x1 = b\nW:\nvar y; true\n\
             E:\nvar x1, x2, y; (x1 = a & x2 = y) | (x1 = b & x2 != y)\n",
            &[2, 3, 5, 8],
        ),
        g(
            "coset_pair",
            GraphKind::Split,
            "theory vector_space p=2\nparam a;\nV:\nvar x; true\nW:\nvar y; true\nE:\nvar x, y; y = x | y = x + a\n",
            &[2, 4, 8, 16],
        ),
    ]
}

pub struct ParsedGraph {
    pub theory: TheoryTag,
    pub graph: smcount_core::analyses::Graph,
}

pub fn parse_graph(text: &str) -> ParsedGraph {
    let doc = parse_document(text).unwrap();
    let v = doc.section("V").unwrap();
    let w = doc.section("W").unwrap();
    let e = doc.section("E").unwrap();
    ParsedGraph {
        theory: doc.theory,
        graph: smcount_core::analyses::Graph {
            v_vars: v.variables(),
            v: v.formula.clone(),
            w_vars: w.variables(),
            w: w.formula.clone(),
            e: e.formula.clone(),
        },
    }
}

//! Shared workloads for the benchmarks.

use smcount_core::formula::{parse_input, Fp, Input, TheoryTag};

pub struct Workload {
    pub name: &'static str,
    pub theory: TheoryTag,
    pub text: &'static str,
}

impl Workload {
    pub fn input(&self) -> Input {
        parse_input(self.text, self.theory).expect("benchmark formula parses")
    }
}

fn vs(p: u64) -> TheoryTag {
    TheoryTag::VectorSpace(Fp::new(p).expect("prime"))
}

/// Formulas spanning cell enumeration, elimination and inclusion-exclusion.
pub fn workloads() -> Vec<Workload> {
    let w = |name, theory, text| Workload { name, theory, text };
    vec![
        w("pure/distinct4", TheoryTag::PureSet, "var x1, x2, x3, x4; x1 != x2 & x1 != x3 & x1 != x4 & x2 != x3 & x2 != x4 & x3 != x4"),
        w("pure/avoid_params", TheoryTag::PureSet, "param a, b, c; var x, y; x != a & x != b & y != c & x != y"),
        w("pure/quantified", TheoryTag::PureSet, "param a; var x, y; exists z. (z != x & z != y & z != a) & forall w. (w = x | w != y)"),
        w("f2/plane_minus_lines", vs(2), "var x, y, z; x + y + z = 0 & x != y & y != z & x != z & x != 0"),
        w("f3/cosets", vs(3), "param a; var x, y; y = x | y = x + a | y = x + 2*a"),
        w("f5/avoid", vs(5), "param a, b; var x, y; x != a & y != b & x + y != a + b & x != y"),
        w("f2/nested", vs(2), "var x; forall y. exists z. (z != y & z + x != 0)"),
    ]
}

/// Formulas with parameters, for the pattern enumeration.
pub fn parametric() -> Vec<Workload> {
    let w = |name, theory, text| Workload { name, theory, text };
    vec![
        w("pure/three_params", TheoryTag::PureSet, "param a, b, c; var x; x != a & x != b & x != c"),
        w("f2/three_params", vs(2), "param a, b, c; var x; x != a & x != b & x + c != 0"),
        w("f3/two_params", vs(3), "param a, b; var x, y; x + y = a & x != b"),
    ]
}

use std::fmt;

use super::{Atom, Formula};

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
            Atom::Lin(t) => write!(f, "{t} = 0"),
        }
    }
}

fn joined(f: &mut fmt::Formatter<'_>, parts: &[Formula], sep: &str) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "({p})")?;
    }
    Ok(())
}

/// Prints in the input syntax; `parse` of the output gives back the same
/// tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(Atom::Eq(a, b)) => write!(f, "{a} != {b}"),
                Formula::Atom(Atom::Lin(t)) => write!(f, "{t} != 0"),
                g => write!(f, "!({g})"),
            },
            Formula::And(parts) => joined(f, parts, " & "),
            Formula::Or(parts) => joined(f, parts, " | "),
            Formula::Implies(a, b) => write!(f, "({a}) -> ({b})"),
            Formula::Exists(v, body) => write!(f, "exists {v}. ({body})"),
            Formula::Forall(v, body) => write!(f, "forall {v}. ({body})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::formula::{parse, Formula, Symbol, TheoryTag};

    #[test]
    fn examples() {
        let x = Symbol::var("x");
        let y = Symbol::var("y");
        let a = Symbol::param("a");
        assert_eq!(Formula::neq(x.clone(), y.clone()).to_string(), "x != y");
        assert_eq!(Formula::True.to_string(), "true");
        let f = Formula::And(vec![Formula::eq(x, y.clone()), Formula::eq(y, a)]);
        assert_eq!(f.to_string(), "(x = y) & (y = a)");
    }

    #[test]
    fn round_trip_with_quantifiers() {
        let text = "param a; forall x. (x = a -> exists y. !(y = x | y = a))";
        let f = parse(text, TheoryTag::PureSet).unwrap();
        let again = parse(&format!("param a; {f}"), TheoryTag::PureSet).unwrap();
        assert_eq!(f, again);
    }
}

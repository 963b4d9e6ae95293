//! Prime-field scalars and sparse linear terms over them.

use std::collections::BTreeMap;
use std::fmt;

use super::Symbol;

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp {
    p: u64,
}

impl Fp {
    /// Returns `None` unless `p` is a prime below 2^31.
    pub fn new(p: u64) -> Option<Self> {
        (p < (1 << 31) && is_prime(p)).then_some(Self { p })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn reduce(self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A linear combination `c1*s1 + ... + ck*sk` over `F_p`, kept canonical:
/// no zero coefficients. The empty map is the origin `0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinTerm {
    field: Fp,
    coeffs: BTreeMap<Symbol, u64>,
}

impl LinTerm {
    pub fn zero(field: Fp) -> Self {
        Self {
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn symbol(field: Fp, s: Symbol) -> Self {
        Self::zero(field).plus(&s, 1)
    }

    pub fn from_pairs(field: Fp, pairs: impl IntoIterator<Item = (Symbol, i64)>) -> Self {
        pairs.into_iter().fold(Self::zero(field), |t, (s, c)| {
            t.plus(&s, field.reduce(c as i128))
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, s: &Symbol) -> u64 {
        self.coeffs.get(s).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, u64)> {
        self.coeffs.iter().map(|(s, &c)| (s, c))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `self + c*s`
    pub fn plus(mut self, s: &Symbol, c: u64) -> Self {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return self;
        }
        let entry = self.coeffs.entry(s.clone()).or_insert(0);
        *entry = f.add(*entry, c);
        if *entry == 0 {
            self.coeffs.remove(s);
        }
        self
    }

    pub fn add(&self, other: &LinTerm) -> LinTerm {
        other
            .coeffs
            .iter()
            .fold(self.clone(), |t, (s, &c)| t.plus(s, c))
    }

    pub fn sub(&self, other: &LinTerm) -> LinTerm {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: u64) -> LinTerm {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return LinTerm::zero(f);
        }
        LinTerm {
            field: f,
            coeffs: self
                .coeffs
                .iter()
                .map(|(s, &a)| (s.clone(), f.mul(a, c)))
                .collect(),
        }
    }

    /// Replaces `s` by `t`, combining coefficients mod p.
    pub fn substitute(&self, s: &Symbol, t: &LinTerm) -> LinTerm {
        let c = self.coeff(s);
        if c == 0 {
            return self.clone();
        }
        let mut rest = self.clone();
        rest.coeffs.remove(s);
        rest.add(&t.scale(c))
    }

    pub fn rename(&self, map: &impl Fn(&Symbol) -> Symbol) -> LinTerm {
        self.coeffs
            .iter()
            .fold(LinTerm::zero(self.field), |t, (s, &c)| t.plus(&map(s), c))
    }

    /// Scaled so that the first coefficient (in symbol order) is 1.
    /// `t = 0` and `c*t = 0` define the same set, so this is a canonical
    /// representative of the atom.
    pub fn monic(&self) -> LinTerm {
        match self.coeffs.values().next() {
            Some(&lead) if lead != 1 => self.scale(self.field.inv(lead)),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for LinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, &c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{c}*{s}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let f = Fp::new(3).unwrap();
        assert_eq!(f.inv(2), 2);
        assert_eq!(f.neg(1), 2);
        assert_eq!(f.reduce(-4), 2);
        assert!(Fp::new(4).is_none());
        assert!(Fp::new(1).is_none());
        let f7 = Fp::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f7.mul(a, f7.inv(a)), 1);
        }
    }

    #[test]
    fn terms_cancel_mod_p() {
        let f = Fp::new(2).unwrap();
        let x = Symbol::var("x");
        let y = Symbol::var("y");
        let t = LinTerm::symbol(f, x.clone()).plus(&y, 1);
        let sub = t.substitute(&x, &LinTerm::symbol(f, y.clone()));
        assert!(sub.is_zero());
    }

    #[test]
    fn monic_scaling() {
        let f = Fp::new(5).unwrap();
        let t = LinTerm::from_pairs(f, [(Symbol::var("a"), 2), (Symbol::var("b"), 4)]);
        let m = t.monic();
        assert_eq!(m.coeff(&Symbol::var("a")), 1);
        assert_eq!(m.coeff(&Symbol::var("b")), 2);
    }
}

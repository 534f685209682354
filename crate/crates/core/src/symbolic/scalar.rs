//! The ground ring: polynomials with exact rational coefficients in named
//! parameters (central charge, level, form entries, ...).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use smallvec::{smallvec, SmallVec};

use super::rational::Q;
use super::symbol::Symbol;

/// Monomial in parameters: sorted `(name, exponent)` pairs, exponents > 0.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(name: Symbol) -> Monomial {
        Monomial(vec![(name, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0.iter().find(|(s, _)| s.as_str() == name).map_or(0, |(_, e)| *e)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        if self.0.is_empty() {
            return other.clone();
        }
        if other.0.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the sorted factor list.
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by the non-constant scalar `{0}`")]
    NonConstantDivisor(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Most scalars are constants, so one term is stored inline.
type Terms = SmallVec<[(Monomial, Q); 1]>;

/// Exact element of `Q[params]`; terms sorted by [`Monomial`] order, no zero
/// coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Terms,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { terms: SmallVec::new() }
    }

    pub fn one() -> Scalar {
        Scalar::from_q(Q::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::from_q(Q::int(n))
    }

    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::from_q(Q::new(num, den))
    }

    pub fn from_q(q: Q) -> Scalar {
        if q.is_zero() {
            Scalar::zero()
        } else {
            Scalar { terms: smallvec![(Monomial::one(), q)] }
        }
    }

    pub fn param(name: &str) -> Scalar {
        Scalar { terms: smallvec![(Monomial::var(Symbol::new(name)), Q::one())] }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Scalar {
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, q) in terms {
            let e = map.entry(m).or_default();
            *e = &*e + &q;
        }
        Scalar { terms: map.into_iter().filter(|(_, q)| !q.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The rational value if this scalar has no parameter dependence.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, q)] if m.is_one() => Some(q.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Nonzero rational constant, i.e. a unit of the ring.
    pub fn is_unit(&self) -> bool {
        matches!(self.terms.as_slice(), [(m, _)] if m.is_one())
    }

    pub fn scale(&self, q: &Q) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    /// Exact division; only nonzero rational divisors are allowed.
    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match other.as_constant() {
            Some(q) if q.is_zero() => Err(ScalarError::DivisionByZero),
            Some(q) => Ok(self.scale(&q.recip())),
            None => Err(ScalarError::NonConstantDivisor(other.to_string())),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Parameters occurring in this scalar.
    pub fn params(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.factors().iter().map(|(s, _)| s.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Substitutes scalars for parameters; unassigned parameters stay symbolic.
    pub fn substitute(&self, assignment: &BTreeMap<Symbol, Scalar>) -> Scalar {
        if assignment.is_empty() {
            return self.clone();
        }
        let mut acc = Scalar::zero();
        for (m, q) in &self.terms {
            let mut term = Scalar::from_q(q.clone());
            let mut rest = Vec::new();
            for (s, e) in m.factors() {
                match assignment.get(s) {
                    Some(v) => term = &term * &v.pow(*e),
                    None => rest.push((s.clone(), *e)),
                }
            }
            let rest = Scalar { terms: smallvec![(Monomial(rest), Q::one())] };
            acc += &(&term * &rest);
        }
        acc
    }

    /// In-place `self ± other` when both have the same monomials; returns
    /// false (leaving `self` untouched) otherwise.
    fn accumulate_same_support(&mut self, other: &Scalar, sign: bool) -> bool {
        if self.terms.len() != other.terms.len() || self.terms.iter().zip(&other.terms).any(|(a, b)| a.0 != b.0) {
            return false;
        }
        for (a, b) in self.terms.iter_mut().zip(&other.terms) {
            a.1 = if sign { &a.1 + &b.1 } else { &a.1 - &b.1 };
        }
        self.terms.retain(|(_, q)| !q.is_zero());
        true
    }

    fn merge(&self, other: &Scalar, sign: bool) -> Scalar {
        if other.terms.is_empty() {
            return self.clone();
        }
        if self.terms.is_empty() {
            return if sign { other.clone() } else { -other };
        }
        let mut out = Terms::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), if sign { b[j].1.clone() } else { -&b[j].1 }));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = if sign { &a[i].1 + &b[j].1 } else { &a[i].1 - &b[j].1 };
                    if !s.is_zero() {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, q)| (m.clone(), if sign { q.clone() } else { -q })));
        Scalar { terms: out }
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Scalar {
        Scalar::from_q(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.merge(rhs, true)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.merge(rhs, false)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return Scalar::zero();
        }
        if let [(m, q)] = self.terms.as_slice() {
            if m.is_one() {
                return rhs.scale(q);
            }
        }
        if let [(m, q)] = rhs.terms.as_slice() {
            if m.is_one() {
                return self.scale(q);
            }
        }
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &rhs.terms {
                let e = map.entry(ma.mul(mb)).or_default();
                *e = &*e + &(qa * qb);
            }
        }
        Scalar { terms: map.into_iter().filter(|(_, q)| !q.is_zero()).collect() }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if rhs.terms.is_empty() {
            return;
        }
        if self.accumulate_same_support(rhs, true) {
            return;
        }
        *self = self.merge(rhs, true);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if rhs.terms.is_empty() {
            return;
        }
        if self.accumulate_same_support(rhs, false) {
            return;
        }
        *self = self.merge(rhs, false);
    }
}

impl fmt::Display for Scalar {
    /// Canonical rendering, highest monomial first: `3/2*c^2 - k + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, q)) in self.terms.iter().rev().enumerate() {
            let neg = q.is_negative();
            let abs = if neg { -q } else { q.clone() };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> Scalar {
        Scalar::param("c")
    }

    #[test]
    fn zero_terms_are_pruned() {
        let x = &c() - &c();
        assert!(x.is_zero());
        assert_eq!(x, Scalar::zero());
    }

    #[test]
    fn rendering_is_canonical() {
        let k = Scalar::param("k");
        let x = &(&c() * &c()).scale(&Q::new(3, 2)) + &(&(-&k) + &Scalar::one());
        assert_eq!(x.to_string(), "3/2*c^2 - k + 1");
        assert_eq!((&c() * &k).to_string(), "c*k");
    }

    #[test]
    fn division_by_parameter_is_rejected() {
        assert!(matches!(Scalar::one().try_div(&c()), Err(ScalarError::NonConstantDivisor(_))));
        assert_eq!(c().try_div(&Scalar::int(2)).unwrap(), c().scale(&Q::new(1, 2)));
    }

    #[test]
    fn substitution_keeps_unassigned_params() {
        let k = Scalar::param("k");
        let x = &(&c() * &k) + &c();
        let mut a = BTreeMap::new();
        a.insert(Symbol::new("c"), Scalar::int(2));
        assert_eq!(x.substitute(&a), &k.scale(&Q::int(2)) + &Scalar::int(2));
    }
}

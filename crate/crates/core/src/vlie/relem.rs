use std::collections::BTreeMap;
use std::fmt;

use crate::symbolic::{binom, Coeff, DPoly, Exps, Q, Scalar, Symbol, Var};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Parity of a product of homogeneous elements.
    pub fn combine(self, other: Parity) -> Parity {
        if self.is_odd() != other.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Koszul sign `(-1)^{|a||b|}`.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Element of `R = E[T] ⊕ K`: a combination of divided translates
/// `T^(k) g` of generators plus central symbols (on which T acts by zero).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RElem {
    gens: BTreeMap<(Symbol, u16), Scalar>,
    centrals: BTreeMap<Symbol, Scalar>,
}

impl RElem {
    pub fn zero() -> RElem {
        RElem::default()
    }

    /// The generator `g` itself.
    pub fn gen(name: &str) -> RElem {
        RElem::t_gen(name, 0)
    }

    /// `T^(k) g`.
    pub fn t_gen(name: &str, k: u16) -> RElem {
        let mut r = RElem::zero();
        r.gens.insert((Symbol::new(name), k), Scalar::one());
        r
    }

    pub fn central(name: &str) -> RElem {
        let mut r = RElem::zero();
        r.centrals.insert(Symbol::new(name), Scalar::one());
        r
    }

    pub fn gen_terms(&self) -> impl Iterator<Item = (&Symbol, u16, &Scalar)> {
        self.gens.iter().map(|((g, k), s)| (g, *k, s))
    }

    pub fn central_terms(&self) -> impl Iterator<Item = (&Symbol, &Scalar)> {
        self.centrals.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty() && self.centrals.is_empty()
    }

    /// Only central symbols occur.
    pub fn is_central(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gen_coeff(&self, name: &str, k: u16) -> Scalar {
        self.gens.get(&(Symbol::new(name), k)).cloned().unwrap_or_default()
    }

    pub fn central_coeff(&self, name: &str) -> Scalar {
        self.centrals.get(name).cloned().unwrap_or_default()
    }

    pub fn add_gen(&mut self, name: Symbol, k: u16, s: Scalar) {
        add_into(&mut self.gens, (name, k), s);
    }

    pub fn add_central(&mut self, name: Symbol, s: Scalar) {
        add_into(&mut self.centrals, name, s);
    }

    pub fn plus(&self, other: &RElem) -> RElem {
        let mut out = self.clone();
        for (k, s) in &other.gens {
            add_into(&mut out.gens, k.clone(), s.clone());
        }
        for (k, s) in &other.centrals {
            add_into(&mut out.centrals, k.clone(), s.clone());
        }
        out
    }

    pub fn minus(&self, other: &RElem) -> RElem {
        self.plus(&other.times(&Scalar::int(-1)))
    }

    pub fn times(&self, s: &Scalar) -> RElem {
        if s.is_zero() {
            return RElem::zero();
        }
        RElem {
            gens: self.gens.iter().map(|(k, c)| (k.clone(), c * s)).filter(|(_, c)| !c.is_zero()).collect(),
            centrals: self.centrals.iter().map(|(k, c)| (k.clone(), c * s)).filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// `T^(k)` applied: `T^(k) T^(j) g = binom(j+k, k) T^(j+k) g`, centrals die.
    pub fn t_divided(&self, k: u16) -> RElem {
        if k == 0 {
            return self.clone();
        }
        let mut out = RElem::zero();
        for ((g, j), s) in &self.gens {
            let f = binom((*j + k) as i64, k as i64);
            out.add_gen(g.clone(), j + k, s.scale(&f));
        }
        out
    }

    /// Substitutes scalars for parameters in every coefficient.
    pub fn substitute_params(&self, a: &BTreeMap<Symbol, Scalar>) -> RElem {
        let mut out = RElem::zero();
        for ((g, k), s) in &self.gens {
            out.add_gen(g.clone(), *k, s.substitute(a));
        }
        for (c, s) in &self.centrals {
            out.add_central(c.clone(), s.substitute(a));
        }
        out
    }

    /// All parameter symbols occurring in coefficients.
    pub fn params(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> =
            self.gens.values().chain(self.centrals.values()).flat_map(|s| s.params()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// The element modulo `T·R`: keeps only untranslated generator terms and centrals.
    pub fn mod_translations(&self) -> RElem {
        RElem {
            gens: self.gens.iter().filter(|((_, k), _)| *k == 0).map(|(k, s)| (k.clone(), s.clone())).collect(),
            centrals: self.centrals.clone(),
        }
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, s: Scalar) {
    if s.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(old) => {
            *old += &s;
            if old.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, s);
        }
    }
}

fn gen_label(g: &Symbol, k: u16) -> String {
    match k {
        0 => g.to_string(),
        1 => format!("T*{g}"),
        k => format!("T^({k})*{g}"),
    }
}

impl Coeff for RElem {
    fn zero() -> RElem {
        RElem::zero()
    }
    fn is_zero(&self) -> bool {
        RElem::is_zero(self)
    }
    fn add(&self, other: &RElem) -> RElem {
        self.plus(other)
    }
    fn scale(&self, s: &Scalar) -> RElem {
        self.times(s)
    }
    fn translate(&self, k: u16) -> Option<RElem> {
        Some(self.t_divided(k))
    }
    fn flat_terms(&self) -> Vec<(Scalar, String)> {
        let mut out: Vec<(Scalar, String)> =
            self.gens.iter().map(|((g, k), s)| (s.clone(), gen_label(g, *k))).collect();
        out.extend(self.centrals.iter().map(|(c, s)| (s.clone(), c.to_string())));
        out
    }
}

impl fmt::Display for RElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&DPoly::constant(self.clone()), f)
    }
}

impl fmt::Debug for RElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RElem({self})")
    }
}

/// Element of `R[λ, μ, ...]` in the divided-power basis.
pub type LambdaPoly = DPoly<RElem>;

/// `Σ_t c_t λ^(t)` from its t-th products.
pub fn from_products(terms: impl IntoIterator<Item = (u16, RElem)>) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    for (t, c) in terms {
        out.add_term(Exps::single(Var::Lambda, t), c);
    }
    out
}

/// `s * x` for a rational `s`, convenience for builders.
pub fn q_times(q: Q, x: RElem) -> RElem {
    x.times(&Scalar::from_q(q))
}

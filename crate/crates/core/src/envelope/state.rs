use std::collections::BTreeMap;
use std::fmt;

use crate::symbolic::{render_linear, Scalar, Symbol};

/// A mode `g_(t)` of generator number `g` (generators are ordered by name).
/// The derived order is the PBW order: `t` ascending, ties by generator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub t: i32,
    pub g: u16,
}

/// A PBW word `m_1 m_2 ... m_r |0⟩` with `m_1 ≤ m_2 ≤ ...` and every `t ≤ -1`.
pub type Word = Vec<Mode>;

/// A finite linear combination of PBW words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnvElem {
    terms: BTreeMap<Word, Scalar>,
}

impl EnvElem {
    pub fn zero() -> EnvElem {
        EnvElem::default()
    }

    pub fn vacuum() -> EnvElem {
        EnvElem::word(Vec::new())
    }

    pub fn word(w: Word) -> EnvElem {
        let mut e = EnvElem::zero();
        e.terms.insert(w, Scalar::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[Mode]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn as_map(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn from_map(terms: BTreeMap<Word, Scalar>) -> EnvElem {
        EnvElem { terms: terms.into_iter().filter(|(_, s)| !s.is_zero()).collect() }
    }

    pub fn add_term(&mut self, w: Word, s: Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                *old += &s;
                if old.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, s);
            }
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &EnvElem, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        let one = s.is_one();
        for (w, c) in &other.terms {
            let c = if one { c.clone() } else { c * s };
            match self.terms.get_mut(w) {
                Some(old) => {
                    *old += &c;
                    if old.is_zero() {
                        self.terms.remove(w);
                    }
                }
                None => {
                    self.terms.insert(w.clone(), c);
                }
            }
        }
    }

    pub fn plus(&self, other: &EnvElem) -> EnvElem {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn minus(&self, other: &EnvElem) -> EnvElem {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::int(-1));
        out
    }

    pub fn times(&self, s: &Scalar) -> EnvElem {
        let mut out = EnvElem::zero();
        out.add_scaled(self, s);
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> EnvElem {
        EnvElem::from_map(self.terms.iter().map(|(w, s)| (w.clone(), f(s))).collect())
    }

    /// Renders with the given generator names, e.g. `L_(-2) L_(-1)|0> + 1/2*c*|0>`.
    pub fn render(&self, names: &[Symbol]) -> String {
        let terms: Vec<(Scalar, String)> = self.terms.iter().map(|(w, s)| (s.clone(), render_word(w, names))).collect();
        render_linear(&terms)
    }
}

pub fn render_word(w: &[Mode], names: &[Symbol]) -> String {
    let mut out: Vec<String> = w.iter().map(|m| format!("{}_({})", names[m.g as usize], m.t)).collect();
    match out.last_mut() {
        Some(last) => last.push_str("|0>"),
        None => out.push("|0>".to_string()),
    }
    out.join(" ")
}

impl fmt::Display for EnvElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<Symbol> = (0..=self.terms.keys().flatten().map(|m| m.g).max().unwrap_or(0))
            .map(|i| Symbol::new(&format!("g{i}")))
            .collect();
        f.write_str(&self.render(&names))
    }
}

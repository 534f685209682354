use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use rustc_hash::FxHashMap;

use crate::symbolic::rational::factorial;
use crate::symbolic::{binom, Q, Scalar, Symbol};
use crate::vlie::{tth_products, Parity, Presentation, RElem};

use super::state::{EnvElem, Mode, Word};
use super::EnvError;

/// `x_(i) y` for generators, specialized: mode terms `(g, k, s)` for
/// `s T^(k) g` and the scalar value of the central part.
#[derive(Clone, Debug, Default)]
struct Product {
    gens: Vec<(u16, u16, Scalar)>,
    central: Scalar,
}

type ModeKey = (Mode, Word);
type NthKey = (Word, i32, Word);

/// The enveloping vertex algebra `U(R)` with central elements specialized.
///
/// Immutable after construction apart from its memo tables, which are
/// shared behind locks and only ever grow.
pub struct EnvContext {
    pres: Presentation,
    spec: BTreeMap<Symbol, Scalar>,
    names: Vec<Symbol>,
    odd: Vec<bool>,
    /// Generator weights times `den`.
    wts: Vec<i64>,
    den: i64,
    /// `prods[a][b]` lists `(i, a_(i) b)` for the nonzero products.
    prods: Vec<Vec<Vec<(i32, Product)>>>,
    mode_cache: RwLock<FxHashMap<ModeKey, Arc<EnvElem>>>,
    nth_cache: RwLock<FxHashMap<NthKey, Arc<EnvElem>>>,
}

fn lcm(a: i64, b: i64) -> i64 {
    use num_integer::Integer;
    a.lcm(&b)
}

impl EnvContext {
    /// Builds the context; centrals missing from `spec` are specialized to
    /// the parameter of the same name.
    pub fn new(pres: &Presentation, spec: &BTreeMap<Symbol, Scalar>) -> Result<EnvContext, EnvError> {
        if !pres.is_graded() {
            return Err(EnvError::Ungraded);
        }
        for z in spec.keys() {
            if !pres.has_central(z) {
                return Err(EnvError::UnknownCentral(z.to_string()));
            }
        }
        let mut full = BTreeMap::new();
        for z in pres.centrals() {
            full.insert(z.clone(), spec.get(z).cloned().unwrap_or_else(|| Scalar::param(z)));
        }
        let gens = pres.generators();
        if gens.len() > u16::MAX as usize {
            return Err(EnvError::TooLarge);
        }
        let mut den = 1;
        for g in gens {
            if g.weight <= Q::zero() {
                return Err(EnvError::NonPositiveWeight(g.name.to_string()));
            }
            den = lcm(den, g.weight.denom_i64().ok_or(EnvError::TooLarge)?);
        }
        let wts = gens
            .iter()
            .map(|g| (&g.weight * &Q::int(den)).to_i64().ok_or(EnvError::TooLarge))
            .collect::<Result<Vec<_>, _>>()?;
        let names: Vec<Symbol> = gens.iter().map(|g| g.name.clone()).collect();
        let mut prods = Vec::with_capacity(gens.len());
        for a in gens {
            let mut row = Vec::with_capacity(gens.len());
            for b in gens {
                let list = tth_products(pres, &RElem::gen(&a.name), &RElem::gen(&b.name))?;
                let mut out = Vec::new();
                for (i, c) in list {
                    let mut p = Product::default();
                    for (g, k, s) in c.gen_terms() {
                        let gi = pres.generator_index(g).expect("known generator") as u16;
                        p.gens.push((gi, k, s.clone()));
                    }
                    for (z, s) in c.central_terms() {
                        p.central += &(s * &full[z]);
                    }
                    if !p.gens.is_empty() || !p.central.is_zero() {
                        out.push((i as i32, p));
                    }
                }
                row.push(out);
            }
            prods.push(row);
        }
        Ok(EnvContext {
            pres: pres.clone(),
            spec: full,
            names,
            odd: gens.iter().map(|g| g.parity.is_odd()).collect(),
            wts,
            den,
            prods,
            mode_cache: RwLock::new(FxHashMap::default()),
            nth_cache: RwLock::new(FxHashMap::default()),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn specialization(&self) -> &BTreeMap<Symbol, Scalar> {
        &self.spec
    }

    pub fn names(&self) -> &[Symbol] {
        &self.names
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<u16> {
        self.pres.generator_index(name).map(|i| i as u16)
    }

    pub fn is_odd(&self, g: u16) -> bool {
        self.odd[g as usize]
    }

    /// Common denominator of all weights.
    pub fn weight_denominator(&self) -> i64 {
        self.den
    }

    /// Weight of generator `g` times the weight denominator.
    pub fn scaled_generator_weight(&self, g: u16) -> i64 {
        self.wts[g as usize]
    }

    /// Weight of a word times the weight denominator.
    pub fn scaled_weight(&self, w: &[Mode]) -> i64 {
        w.iter().map(|m| self.mode_shift(*m)).sum()
    }

    /// Weight added by the mode `m`, times the denominator.
    fn mode_shift(&self, m: Mode) -> i64 {
        self.wts[m.g as usize] - (m.t as i64 + 1) * self.den
    }

    pub fn word_weight(&self, w: &[Mode]) -> Q {
        Q::new(self.scaled_weight(w), self.den)
    }

    pub fn word_parity(&self, w: &[Mode]) -> Parity {
        if w.iter().filter(|m| self.odd[m.g as usize]).count() % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// The weight if every word has the same weight.
    pub fn weight(&self, x: &EnvElem) -> Option<Q> {
        let mut ws = x.terms().map(|(w, _)| self.scaled_weight(w));
        let first = ws.next()?;
        ws.all(|w| w == first).then(|| Q::new(first, self.den))
    }

    pub fn parity(&self, x: &EnvElem) -> Option<Parity> {
        let mut ps = x.terms().map(|(w, _)| self.word_parity(w));
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }

    /// Largest word weight (scaled), `None` for zero.
    pub fn max_scaled_weight(&self, x: &EnvElem) -> Option<i64> {
        x.terms().map(|(w, _)| self.scaled_weight(w)).max()
    }

    /// The state `g = g_(-1)|0⟩`.
    pub fn generator_state(&self, name: &str) -> Option<EnvElem> {
        Some(EnvElem::word(vec![Mode { t: -1, g: self.generator_index(name)? }]))
    }

    /// Embeds `x ∈ R` as the state `x_(-1)|0⟩`: `T^(k) g ↦ g_(-1-k)|0⟩`,
    /// centrals become scalars times the vacuum.
    pub fn relem_state(&self, x: &RElem) -> EnvElem {
        let mut out = EnvElem::zero();
        for (g, k, s) in x.gen_terms() {
            let gi = self.generator_index(g).expect("known generator");
            out.add_term(vec![Mode { t: -1 - k as i32, g: gi }], s.clone());
        }
        for (z, s) in x.central_terms() {
            out.add_term(Vec::new(), s * &self.spec[z]);
        }
        out
    }

    // -----------------------------------------------------------------------
    // Mode action

    /// Adds `coeff * [x, y]` (a combination of modes and a scalar) applied
    /// to `w` into `out`.
    fn add_commutator_action(&self, x: Mode, y: Mode, w: &[Mode], coeff: &Scalar, out: &mut EnvElem) {
        let (t, s) = (x.t as i64, y.t as i64);
        for (i, prod) in &self.prods[x.g as usize][y.g as usize] {
            let i = *i as i64;
            let b = binom(t, i);
            if b.is_zero() {
                continue;
            }
            let u = t + s - i;
            let c = coeff.scale(&b);
            for (g, k, sc) in &prod.gens {
                let k = *k as i64;
                // (T^(k) g)_(u) = (-1)^k binom(u, k) g_(u-k)
                let mut f = binom(u, k);
                if k % 2 == 1 {
                    f = -&f;
                }
                if f.is_zero() {
                    continue;
                }
                let m = Mode { t: (u - k) as i32, g: *g };
                let r = self.apply_mode_word(m, w);
                out.add_scaled(&r, &(&c * sc).scale(&f));
            }
            if u == -1 && !prod.central.is_zero() {
                out.add_term(w.to_vec(), &c * &prod.central);
            }
        }
    }

    /// `m` applied to the PBW word `w`, in normal order.
    pub fn apply_mode_word(&self, m: Mode, w: &[Mode]) -> Arc<EnvElem> {
        if w.is_empty() {
            return Arc::new(if m.t >= 0 { EnvElem::zero() } else { EnvElem::word(vec![m]) });
        }
        if self.scaled_weight(w) + self.mode_shift(m) < 0 {
            return Arc::new(EnvElem::zero());
        }
        let first = w[0];
        if m < first || (m == first && !self.odd[m.g as usize]) {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(m);
            v.extend_from_slice(w);
            return Arc::new(EnvElem::word(v));
        }
        let key = (m, w.to_vec());
        if let Some(hit) = self.mode_cache.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let mut out = EnvElem::zero();
        let rest = &w[1..];
        if m == first {
            // odd square: m m = [m, m] / 2
            self.add_commutator_action(m, m, rest, &Scalar::rational(1, 2), &mut out);
        } else {
            // m first = ± first m + [m, first]
            let sign = if self.odd[m.g as usize] && self.odd[first.g as usize] { -1 } else { 1 };
            let inner = self.apply_mode_word(m, rest);
            for (v, c) in inner.terms() {
                let r = self.apply_mode_word(first, v);
                out.add_scaled(&r, &c.scale(&Q::int(sign)));
            }
            self.add_commutator_action(m, first, rest, &Scalar::one(), &mut out);
        }
        let out = Arc::new(out);
        self.mode_cache.write().expect("cache lock").insert(key, out.clone());
        out
    }

    /// `g_(t) v` for the generator named `g`.
    pub fn apply_mode(&self, g: u16, t: i32, v: &EnvElem) -> EnvElem {
        let mut out = EnvElem::zero();
        for (w, s) in v.terms() {
            out.add_scaled(&self.apply_mode_word(Mode { t, g }, w), s);
        }
        out
    }

    /// Applies the modes of `word` right to left to `v`.
    pub fn apply_word(&self, word: &[Mode], v: &EnvElem) -> EnvElem {
        let mut cur = v.clone();
        for m in word.iter().rev() {
            cur = self.apply_mode(m.g, m.t, &cur);
        }
        cur
    }

    /// `T v`, with `T` acting as the derivation `[T, g_(t)] = -t g_(t-1)`
    /// and `T|0⟩ = 0`.
    pub fn translate(&self, v: &EnvElem) -> EnvElem {
        let mut out = EnvElem::zero();
        for (w, s) in v.terms() {
            for j in 0..w.len() {
                let m = w[j];
                let f = Scalar::int(-(m.t as i64)).scale(&Q::one());
                let suffix = EnvElem::word(w[j + 1..].to_vec());
                let mut cur = self.apply_mode(m.g, m.t - 1, &suffix);
                cur = self.apply_word(&w[..j], &cur);
                out.add_scaled(&cur, &(s * &f));
            }
        }
        out
    }

    /// `T^(k) v = T^k v / k!`.
    pub fn translate_divided(&self, v: &EnvElem, k: u32) -> EnvElem {
        let mut cur = v.clone();
        for _ in 0..k {
            cur = self.translate(&cur);
        }
        cur.times(&Scalar::from_q(factorial(k).recip()))
    }

    // -----------------------------------------------------------------------
    // n-th products

    /// `u_(n) v`.
    pub fn nth_product(&self, u: &EnvElem, n: i32, v: &EnvElem) -> EnvElem {
        let mut out = EnvElem::zero();
        for (a, s) in u.terms() {
            for (c, r) in v.terms() {
                out.add_scaled(&self.nth_word(a, n, c), &(s * r));
            }
        }
        out
    }

    /// `a_(n) c` for PBW words, by the associativity formula applied to
    /// `a = g_(r) b` where `g_(r)` is the first mode of `a`:
    /// `(g_(r) b)_(n) c = Σ_i (-1)^i binom(r,i) (g_(r-i) b_(n+i) c - p (-1)^r b_(n+r-i) g_(i) c)`.
    pub fn nth_word(&self, a: &[Mode], n: i32, c: &[Mode]) -> Arc<EnvElem> {
        if a.is_empty() {
            return Arc::new(if n == -1 { EnvElem::word(c.to_vec()) } else { EnvElem::zero() });
        }
        let (wa, wc) = (self.scaled_weight(a), self.scaled_weight(c));
        if wa + wc - (n as i64 + 1) * self.den < 0 {
            return Arc::new(EnvElem::zero());
        }
        if a.len() == 1 {
            // a = T^(k) g with k = -t-1, and (T^(k) g)_(n) = (-1)^k binom(n,k) g_(n-k)
            let k = -(a[0].t as i64) - 1;
            let mut f = binom(n as i64, k);
            if k % 2 == 1 {
                f = -&f;
            }
            let m = Mode { t: (n as i64 - k) as i32, g: a[0].g };
            let r = self.apply_mode_word(m, c);
            return if f.is_one() { r } else { Arc::new(r.times(&Scalar::from_q(f))) };
        }
        let key = (a.to_vec(), n, c.to_vec());
        if let Some(hit) = self.nth_cache.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let g = a[0];
        let b = &a[1..];
        let r = g.t as i64;
        let wb = self.scaled_weight(b);
        let odd_g = self.odd[g.g as usize];
        let p = if odd_g && self.word_parity(b).is_odd() { -1 } else { 1 };
        let sign_r = if r % 2 == 0 { 1 } else { -1 };
        let n64 = n as i64;
        let mut out = EnvElem::zero();
        // term 1: b_(n+i) c vanishes once n + i + 1 > (wb + wc) / den
        let max1 = (wb + wc).div_euclid(self.den) - n64 - 1;
        for i in 0..=max1.max(-1) {
            let coef = binom(r, i);
            let coef = if i % 2 == 1 { -&coef } else { coef };
            let bc = self.nth_word(b, (n64 + i) as i32, c);
            if bc.is_zero() {
                continue;
            }
            let mut part = EnvElem::zero();
            for (w, s) in bc.terms() {
                part.add_scaled(&self.apply_mode_word(Mode { t: (r - i) as i32, g: g.g }, w), s);
            }
            out.add_scaled(&part, &Scalar::from_q(coef));
        }
        // term 2: g_(i) c vanishes once i + 1 > (h_g + wc) / den
        let max2 = (self.wts[g.g as usize] + wc).div_euclid(self.den) - 1;
        for i in 0..=max2.max(-1) {
            let coef = binom(r, i);
            let coef = if i % 2 == 1 { -&coef } else { coef };
            let gc = self.apply_mode_word(Mode { t: i as i32, g: g.g }, c);
            if gc.is_zero() {
                continue;
            }
            let mut part = EnvElem::zero();
            for (w, s) in gc.terms() {
                part.add_scaled(&self.nth_word(b, (n64 + r - i) as i32, w), s);
            }
            out.add_scaled(&part, &Scalar::from_q(&coef * &Q::int(-p * sign_r)));
        }
        let out = Arc::new(out);
        self.nth_cache.write().expect("cache lock").insert(key, out.clone());
        out
    }

    /// Number of memoized entries (mode action, n-th products).
    pub fn cache_sizes(&self) -> (usize, usize) {
        (self.mode_cache.read().expect("cache lock").len(), self.nth_cache.read().expect("cache lock").len())
    }
}

//! Polynomials in the formal even variables λ, μ, ν, κ (and the translation
//! operator T) stored in the divided-power basis `x^(n) = x^n / n!`.
//!
//! A `DPoly<Scalar>` may carry T as a fifth formal variable; such a value is
//! an "operator polynomial" whose T-part acts on coefficients from the left.
//! For coefficient types that know how to absorb T (see [`Coeff::translate`])
//! every T-exponent is pushed into the coefficients instead.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::binomial::binom;
use super::rational::{factorial, Q};
use super::scalar::Scalar;

/// Number of formal variables including T.
pub const NVARS: usize = 5;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Lambda = 0,
    Mu = 1,
    Nu = 2,
    Kappa = 3,
    T = 4,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Lambda, Var::Mu, Var::Nu, Var::Kappa, Var::T];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Canonical one-letter rendering name.
    pub fn name(self) -> &'static str {
        match self {
            Var::Lambda => "l",
            Var::Mu => "m",
            Var::Nu => "n",
            Var::Kappa => "k",
            Var::T => "T",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Exps(pub [u16; NVARS]);

impl Exps {
    pub fn zero() -> Exps {
        Exps([0; NVARS])
    }

    pub fn single(v: Var, n: u16) -> Exps {
        let mut e = [0; NVARS];
        e[v.index()] = n;
        Exps(e)
    }

    pub fn get(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    fn with(mut self, v: Var, n: u16) -> Exps {
        self.0[v.index()] = n;
        self
    }
}

impl Ord for Exps {
    fn cmp(&self, other: &Exps) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exps {
    fn partial_cmp(&self, other: &Exps) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficients of a [`DPoly`]: a module over [`Scalar`], optionally with a
/// left action of the divided powers of T.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;

    /// `T^(k)` applied to `self`, or `None` if this type keeps T formal.
    fn translate(&self, k: u16) -> Option<Self>;

    /// Flat rendering: scalar coefficient times basis label (`""` for 1).
    fn flat_terms(&self) -> Vec<(Scalar, String)>;

    fn neg(&self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Coeff for Scalar {
    fn zero() -> Scalar {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Scalar) -> Scalar {
        self + other
    }
    fn scale(&self, s: &Scalar) -> Scalar {
        self * s
    }
    fn translate(&self, k: u16) -> Option<Scalar> {
        if k == 0 {
            Some(self.clone())
        } else {
            None
        }
    }
    fn flat_terms(&self) -> Vec<(Scalar, String)> {
        vec![(self.clone(), String::new())]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DPolyError {
    #[error("unsupported integration bound `{0}`: bounds must be affine in the variables and T")]
    UnsupportedBound(String),
    #[error("integration bound `{bound}` contains the integration variable `{var}`")]
    BoundContainsVariable { bound: String, var: &'static str },
}

/// Polynomial with coefficients in `C` in the divided-power basis.
#[derive(Clone, PartialEq)]
pub struct DPoly<C: Coeff> {
    terms: BTreeMap<Exps, C>,
}

/// Operator polynomial: scalar coefficients, T allowed as a formal variable.
pub type OpPoly = DPoly<Scalar>;

impl<C: Coeff> Default for DPoly<C> {
    fn default() -> Self {
        DPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> DPoly<C> {
    pub fn zero() -> Self {
        DPoly::default()
    }

    /// `c * x^(e)` for the given exponents.
    pub fn monomial(e: Exps, c: C) -> Self {
        let mut p = DPoly::zero();
        p.add_term(e, c);
        p
    }

    pub fn constant(c: C) -> Self {
        DPoly::monomial(Exps::zero(), c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &C)> {
        self.terms.iter()
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

    pub fn coeff(&self, e: &Exps) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of `v^(n)` when `v` is the only variable occurring.
    pub fn coeff_of(&self, v: Var, n: u16) -> C {
        self.coeff(&Exps::single(v, n))
    }

    pub fn add_term(&mut self, e: Exps, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = DPoly::zero();
        if s.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.add_term(*e, c.scale(s));
        }
        out
    }

    /// Largest exponent of `v` occurring, `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u16> {
        self.terms.keys().map(|e| e.get(v)).max()
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> DPoly<D> {
        let mut out = DPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }

    /// Product with an operator polynomial; T-exponents of `op` are absorbed
    /// into the coefficients when `C` supports it.
    pub fn mul_op(&self, op: &OpPoly) -> Self {
        let mut out = DPoly::zero();
        for (eo, so) in &op.terms {
            for (e, c) in &self.terms {
                let (factor, exps) = divided_product(eo, e);
                let coeff = c.scale(&(so * &factor));
                out.push_absorbing(exps, coeff);
            }
        }
        out
    }

    /// Adds `c * x^(e)`, moving the T-exponent into the coefficient if possible.
    fn push_absorbing(&mut self, e: Exps, c: C) {
        let k = e.get(Var::T);
        if k > 0 {
            if let Some(tc) = c.translate(k) {
                self.add_term(e.with(Var::T, 0), tc);
                return;
            }
        }
        self.add_term(e, c);
    }

    /// Substitutes, for each assigned variable, an operator polynomial of
    /// degree at most one (an affine combination of variables and T).
    pub fn substitute(&self, assignment: &[(Var, OpPoly)]) -> Self {
        let mut out = DPoly::zero();
        for (e, c) in &self.terms {
            let mut rest = *e;
            let mut op = OpPoly::constant(Scalar::one());
            for (v, image) in assignment {
                let n = e.get(*v);
                rest = rest.with(*v, 0);
                if n > 0 {
                    op = op.mul(&image.divided_power(n as u32));
                }
            }
            op = op.mul(&OpPoly::monomial(rest, Scalar::one()));
            for (eo, so) in &op.terms {
                out.push_absorbing(*eo, c.scale(so));
            }
        }
        out
    }

    /// `∫_{lower}^{upper} dv p`, eliminating `v`.
    pub fn formal_integral(&self, v: Var, lower: &OpPoly, upper: &OpPoly) -> Result<Self, DPolyError> {
        for b in [lower, upper] {
            if b.terms.keys().any(|e| e.total() > 1) {
                return Err(DPolyError::UnsupportedBound(b.to_string()));
            }
            if b.terms.keys().any(|e| e.get(v) > 0) {
                return Err(DPolyError::BoundContainsVariable { bound: b.to_string(), var: v.name() });
            }
        }
        let mut anti = DPoly::zero();
        for (e, c) in &self.terms {
            anti.add_term(e.with(v, e.get(v) + 1), c.clone());
        }
        let up = anti.substitute(&[(v, upper.clone())]);
        let lo = anti.substitute(&[(v, lower.clone())]);
        Ok(up.sub(&lo))
    }
}

/// `x^(a) x^(b) = prod_v binom(a_v+b_v, a_v) x^(a+b)`.
fn divided_product(a: &Exps, b: &Exps) -> (Scalar, Exps) {
    let mut out = [0u16; NVARS];
    let mut factor = Q::one();
    for i in 0..NVARS {
        out[i] = a.0[i] + b.0[i];
        if a.0[i] > 0 && b.0[i] > 0 {
            factor = &factor * &binom(out[i] as i64, a.0[i] as i64);
        }
    }
    (Scalar::from_q(factor), Exps(out))
}

impl OpPoly {
    /// `x^(n)` for a single variable.
    pub fn var_power(v: Var, n: u16) -> OpPoly {
        OpPoly::monomial(Exps::single(v, n), Scalar::one())
    }

    pub fn var(v: Var) -> OpPoly {
        OpPoly::var_power(v, 1)
    }

    /// Affine combination `sum c_v v`.
    pub fn linear(parts: &[(Var, i64)]) -> OpPoly {
        let mut p = OpPoly::zero();
        for (v, c) in parts {
            p.add_term(Exps::single(*v, 1), Scalar::int(*c));
        }
        p
    }

    /// Product of operator polynomials (T treated as a formal variable).
    pub fn mul(&self, other: &OpPoly) -> OpPoly {
        let mut out = OpPoly::zero();
        for (ea, sa) in &self.terms {
            for (eb, sb) in &other.terms {
                let (factor, e) = divided_product(ea, eb);
                out.add_term(e, &(sa * sb) * &factor);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> OpPoly {
        let mut acc = OpPoly::constant(Scalar::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `p^n / n!`.
    pub fn divided_power(&self, n: u32) -> OpPoly {
        self.pow(n).scale(&Scalar::from_q(factorial(n).recip()))
    }

    /// Partial derivative; in the divided-power basis `d/dv v^(n) = v^(n-1)`.
    pub fn derivative(&self, v: Var) -> OpPoly {
        let mut out = OpPoly::zero();
        for (e, c) in &self.terms {
            let n = e.get(v);
            if n > 0 {
                out.add_term(e.with(v, n - 1), c.clone());
            }
        }
        out
    }

    /// Converts to the ordinary monomial basis: exponent vector ↦ coefficient
    /// of `prod x^e` (used for display and for the naive-representation check).
    pub fn to_monomial_basis(&self) -> BTreeMap<Exps, Scalar> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut d = Q::one();
            for &x in &e.0 {
                d = &d * &factorial(x as u32);
            }
            out.insert(*e, c.scale(&d.recip()));
        }
        out
    }
}

fn render_exps(e: &Exps) -> Vec<String> {
    let mut parts = Vec::new();
    // T is rendered first since it acts on the coefficient from the left.
    for v in [Var::T, Var::Lambda, Var::Mu, Var::Nu, Var::Kappa] {
        match e.get(v) {
            0 => {}
            1 => parts.push(v.name().to_string()),
            n => parts.push(format!("{}^({n})", v.name())),
        }
    }
    parts
}

fn render_term(f: &mut fmt::Formatter<'_>, first: bool, s: &Scalar, label: &str, e: &Exps) -> fmt::Result {
    let (neg, abs) = match s.as_constant() {
        Some(q) if q.is_negative() => (true, Scalar::from_q(-&q)),
        _ => (false, s.clone()),
    };
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    let mut factors: Vec<String> = Vec::new();
    let mut tparts = Vec::new();
    let mut lparts = Vec::new();
    for p in render_exps(e) {
        if p.starts_with('T') {
            tparts.push(p);
        } else {
            lparts.push(p);
        }
    }
    if !abs.is_one() {
        let text = abs.to_string();
        if abs.terms().len() > 1 {
            factors.push(format!("({text})"));
        } else {
            factors.push(text);
        }
    }
    factors.extend(tparts);
    if !label.is_empty() {
        factors.push(label.to_string());
    }
    factors.extend(lparts);
    if factors.is_empty() {
        factors.push("1".to_string());
    }
    f.write_str(&factors.join("*"))
}

/// Renders `Σ s_i * label_i` in the canonical style, `0` when empty.
pub fn render_linear(terms: &[(Scalar, String)]) -> String {
    struct Lin<'a>(&'a [(Scalar, String)]);
    impl fmt::Display for Lin<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let zero = Exps::zero();
            let mut first = true;
            for (s, label) in self.0.iter().filter(|(s, _)| !s.is_zero()) {
                render_term(f, first, s, label, &zero)?;
                first = false;
            }
            if first {
                f.write_str("0")?;
            }
            Ok(())
        }
    }
    Lin(terms).to_string()
}

impl<C: Coeff> fmt::Display for DPoly<C> {
    /// Canonical flat rendering such as `T*L + 2*L*l + 1/2*c*l^(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            for (s, label) in c.flat_terms() {
                render_term(f, first, &s, &label, e)?;
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for DPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DPoly({self})")
    }
}

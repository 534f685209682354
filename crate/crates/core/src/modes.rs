//! Mode commutators of the Borcherds Lie algebra `g(R)`.
//!
//! A mode `a_(t)` is indexed either by `t` (the t-convention) or by the
//! weight index `n = t - h_a + 1` (the weight convention, `a_n := a_(n+h_a-1)`).
//! Central elements `z` of `R` contribute `z_(t)`, which is nonzero only for
//! `t = -1`; such terms are stored as the central symbol itself.

use std::collections::BTreeMap;
use std::fmt;

use crate::lexer::{Cursor, SyntaxError, Tok};
use crate::report::{Check, Report};
use crate::symbolic::{binom, render_linear, Q, Scalar, Symbol};
use crate::vlie::{tth_products, Presentation, RElem, VlieError};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    T,
    Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModeError {
    #[error("index {index} is not valid for `{generator}` in the {convention:?} convention")]
    InvalidIndex { generator: String, index: Q, convention: Convention },
    #[error("the weight convention needs a graded presentation")]
    Ungraded,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("cannot evaluate mode table entry: {0}")]
    Eval(String),
    #[error(transparent)]
    Vlie(#[from] VlieError),
}

/// A finite combination of modes plus central terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeExpr {
    convention: Convention,
    modes: BTreeMap<(Symbol, Q), Scalar>,
    centrals: BTreeMap<Symbol, Scalar>,
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

impl ModeExpr {
    pub fn zero(convention: Convention) -> ModeExpr {
        ModeExpr { convention, modes: BTreeMap::new(), centrals: BTreeMap::new() }
    }

    pub fn mode(convention: Convention, g: &str, index: Q) -> ModeExpr {
        let mut e = ModeExpr::zero(convention);
        e.add_mode(Symbol::new(g), index, Scalar::one());
        e
    }

    pub fn central(convention: Convention, z: &str) -> ModeExpr {
        let mut e = ModeExpr::zero(convention);
        e.add_central(Symbol::new(z), Scalar::one());
        e
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty() && self.centrals.is_empty()
    }

    pub fn mode_terms(&self) -> impl Iterator<Item = (&Symbol, &Q, &Scalar)> {
        self.modes.iter().map(|((g, n), s)| (g, n, s))
    }

    pub fn central_terms(&self) -> impl Iterator<Item = (&Symbol, &Scalar)> {
        self.centrals.iter()
    }

    pub fn add_mode(&mut self, g: Symbol, index: Q, s: Scalar) {
        add_into(&mut self.modes, (g, index), s);
    }

    pub fn add_central(&mut self, z: Symbol, s: Scalar) {
        add_into(&mut self.centrals, z, s);
    }

    pub fn plus(&self, other: &ModeExpr) -> ModeExpr {
        let mut out = self.clone();
        for ((g, n), s) in &other.modes {
            out.add_mode(g.clone(), n.clone(), s.clone());
        }
        for (z, s) in &other.centrals {
            out.add_central(z.clone(), s.clone());
        }
        out
    }

    pub fn times(&self, s: &Scalar) -> ModeExpr {
        let mut out = ModeExpr::zero(self.convention);
        for ((g, n), c) in &self.modes {
            out.add_mode(g.clone(), n.clone(), c * s);
        }
        for (z, c) in &self.centrals {
            out.add_central(z.clone(), c * s);
        }
        out
    }

    pub fn minus(&self, other: &ModeExpr) -> ModeExpr {
        self.plus(&other.times(&Scalar::int(-1)))
    }

    /// Re-expresses the modes in the other convention.
    pub fn convert(&self, p: &Presentation, to: Convention) -> Result<ModeExpr, ModeError> {
        if to == self.convention {
            return Ok(self.clone());
        }
        let mut out = ModeExpr::zero(to);
        for ((g, n), s) in &self.modes {
            out.add_mode(g.clone(), convert_index(p, g, n, self.convention, to)?, s.clone());
        }
        out.centrals = self.centrals.clone();
        Ok(out)
    }
}

impl fmt::Display for ModeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Scalar, String)> = self
            .modes
            .iter()
            .map(|((g, n), s)| {
                let label = match self.convention {
                    Convention::T => format!("{g}_({n})"),
                    Convention::Weight => format!("{g}_{{{n}}}"),
                };
                (s.clone(), label)
            })
            .collect();
        terms.extend(self.centrals.iter().map(|(z, s)| (s.clone(), z.to_string())));
        f.write_str(&render_linear(&terms))
    }
}

fn weight_of(p: &Presentation, g: &str) -> Result<Q, ModeError> {
    if !p.is_graded() {
        return Err(ModeError::Ungraded);
    }
    p.generator(g).map(|d| d.weight.clone()).ok_or_else(|| ModeError::UnknownGenerator(g.to_string()))
}

fn convert_index(p: &Presentation, g: &str, n: &Q, from: Convention, to: Convention) -> Result<Q, ModeError> {
    let h = weight_of(p, g)?;
    let one = Q::one();
    Ok(match (from, to) {
        (Convention::Weight, Convention::T) => &(n + &h) - &one,
        (Convention::T, Convention::Weight) => &(n - &h) + &one,
        _ => n.clone(),
    })
}

/// The t-index of the mode `g` with index `n` in convention `conv`.
pub fn t_index(p: &Presentation, g: &str, n: &Q, conv: Convention) -> Result<i64, ModeError> {
    if !p.has_generator(g) {
        return Err(ModeError::UnknownGenerator(g.to_string()));
    }
    let t = convert_index(p, g, n, conv, Convention::T)?;
    t.to_i64().filter(|_| t.is_integer()).ok_or_else(|| ModeError::InvalidIndex {
        generator: g.to_string(),
        index: n.clone(),
        convention: conv,
    })
}

/// Adds `coeff * x_(u)` in the t-convention, using `(T^(k) g)_(u) = (-1)^k binom(u,k) g_(u-k)`.
fn add_relem_mode(out: &mut ModeExpr, x: &RElem, u: i64, coeff: &Scalar) {
    for (g, k, s) in x.gen_terms() {
        let k = k as i64;
        let mut c = binom(u, k);
        if k % 2 == 1 {
            c = -&c;
        }
        if !c.is_zero() {
            out.add_mode(g.clone(), Q::int(u - k), (s * coeff).scale(&c));
        }
    }
    if u == -1 {
        for (z, s) in x.central_terms() {
            out.add_central(z.clone(), s * coeff);
        }
    }
}

/// The mode `x_(u)` of an element of `R` in the t-convention.
pub fn relem_mode(x: &RElem, u: i64) -> ModeExpr {
    let mut out = ModeExpr::zero(Convention::T);
    add_relem_mode(&mut out, x, u, &Scalar::one());
    out
}

/// `[x_(t), y_(s)] = Σ_i binom(t,i) (x_(i) y)_(t+s-i)` for elements of `R`.
pub fn relem_bracket(p: &Presentation, x: &RElem, t: i64, y: &RElem, s: i64) -> Result<ModeExpr, ModeError> {
    let mut out = ModeExpr::zero(Convention::T);
    for (i, c) in tth_products(p, x, y)? {
        let i = i as i64;
        let b = binom(t, i);
        if !b.is_zero() {
            add_relem_mode(&mut out, &c, t + s - i, &Scalar::from_q(b));
        }
    }
    Ok(out)
}

/// `[a_n, b_m]` for generators `a, b` in the given convention.
pub fn mode_bracket(p: &Presentation, a: (&str, &Q), b: (&str, &Q), conv: Convention) -> Result<ModeExpr, ModeError> {
    let t = t_index(p, a.0, a.1, conv)?;
    let s = t_index(p, b.0, b.1, conv)?;
    relem_bracket(p, &RElem::gen(a.0), t, &RElem::gen(b.0), s)?.convert(p, conv)
}

/// Bilinear extension of [`mode_bracket`]; central terms bracket to zero.
pub fn bracket_exprs(p: &Presentation, x: &ModeExpr, y: &ModeExpr) -> Result<ModeExpr, ModeError> {
    let conv = x.convention;
    let mut out = ModeExpr::zero(conv);
    for (a, n, s) in x.mode_terms() {
        for (b, m, r) in y.mode_terms() {
            out = out.plus(&mode_bracket(p, (a, n), (b, m), conv)?.times(&(s * r)));
        }
    }
    Ok(out)
}

/// Valid indices of `g` within `[lo, hi]`: integers in the t-convention,
/// `ℤ - h_g` in the weight convention.
pub fn indices_in_window(p: &Presentation, g: &str, lo: i64, hi: i64, conv: Convention) -> Result<Vec<Q>, ModeError> {
    let offset = match conv {
        Convention::T => Q::zero(),
        Convention::Weight => {
            let h = weight_of(p, g)?;
            &h - &Q::int(h.floor())
        }
    };
    let mut out = Vec::new();
    for k in lo..=hi + 1 {
        let n = &Q::int(k) - &offset;
        if n >= Q::int(lo) && n <= Q::int(hi) {
            out.push(n);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Closed-form mode tables

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Num(u64),
    Ident(String),
    Mode(String, Box<Expr>),
    Delta(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// One closed form `[a_n, b_m] = rhs(n, m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedBracket {
    pub a: Symbol,
    pub b: Symbol,
    pub text: String,
    rhs: Expr,
}

/// A list of closed-form mode brackets, written as
/// `[L_n, L_m] = (n - m) L_{n+m} + (n^3 - n)/12 delta(n+m) c;`.
///
/// Inside the right-hand side `n` and `m` are the indices, `X_{e}` is a mode,
/// `delta(e)` is 1 when `e = 0` and 0 otherwise, central and parameter names
/// stand for themselves.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ModeTable {
    pub entries: Vec<ExpectedBracket>,
}

/// Value of a table expression: a scalar part plus a mode part.
#[derive(Clone)]
struct Val {
    scalar: Scalar,
    expr: ModeExpr,
}

impl Val {
    fn scalar(s: Scalar, conv: Convention) -> Val {
        Val { scalar: s, expr: ModeExpr::zero(conv) }
    }

    fn as_scalar(&self) -> Option<&Scalar> {
        self.expr.is_zero().then_some(&self.scalar)
    }
}

struct EvalEnv<'a> {
    p: &'a Presentation,
    n: &'a Q,
    m: &'a Q,
    conv: Convention,
}

impl Expr {
    fn eval(&self, env: &EvalEnv) -> Result<Val, ModeError> {
        let conv = env.conv;
        Ok(match self {
            Expr::Num(v) => Val::scalar(Scalar::int(*v as i64), conv),
            Expr::Ident(s) => match s.as_str() {
                "n" => Val::scalar(Scalar::from_q(env.n.clone()), conv),
                "m" => Val::scalar(Scalar::from_q(env.m.clone()), conv),
                z if env.p.has_central(z) => Val { scalar: Scalar::zero(), expr: ModeExpr::central(conv, z) },
                g if env.p.has_generator(g) => {
                    return Err(ModeError::Eval(format!("generator `{g}` needs a mode index")));
                }
                param => Val::scalar(Scalar::param(param), conv),
            },
            Expr::Mode(g, idx) => {
                if !env.p.has_generator(g) {
                    return Err(ModeError::UnknownGenerator(g.clone()));
                }
                let i = idx.eval(env)?;
                let q = i.as_scalar().and_then(|s| s.as_constant()).ok_or_else(|| {
                    ModeError::Eval(format!("mode index of `{g}` must evaluate to a rational"))
                })?;
                t_index(env.p, g, &q, conv)?;
                Val { scalar: Scalar::zero(), expr: ModeExpr::mode(conv, g, q) }
            }
            Expr::Delta(e) => {
                let v = e.eval(env)?;
                let s = v.as_scalar().ok_or_else(|| ModeError::Eval("delta of a mode".into()))?;
                let s = s.as_constant().ok_or_else(|| ModeError::Eval("delta of a non-constant".into()))?;
                Val::scalar(if s.is_zero() { Scalar::one() } else { Scalar::zero() }, conv)
            }
            Expr::Neg(e) => {
                let v = e.eval(env)?;
                Val { scalar: -&v.scalar, expr: v.expr.times(&Scalar::int(-1)) }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                if matches!(self, Expr::Add(..)) {
                    Val { scalar: &x.scalar + &y.scalar, expr: x.expr.plus(&y.expr) }
                } else {
                    Val { scalar: &x.scalar - &y.scalar, expr: x.expr.minus(&y.expr) }
                }
            }
            Expr::Mul(a, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                match (x.as_scalar(), y.as_scalar()) {
                    (Some(s), _) => Val { scalar: s * &y.scalar, expr: y.expr.times(s) },
                    (_, Some(s)) => Val { scalar: &x.scalar * s, expr: x.expr.times(s) },
                    _ => return Err(ModeError::Eval("product of two modes".into())),
                }
            }
            Expr::Div(a, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                let d = y
                    .as_scalar()
                    .and_then(|s| s.as_constant())
                    .filter(|q| !q.is_zero())
                    .ok_or_else(|| ModeError::Eval("division by a non-constant or zero".into()))?;
                let inv = Scalar::from_q(d.recip());
                Val { scalar: &x.scalar * &inv, expr: x.expr.times(&inv) }
            }
            Expr::Pow(e, k) => {
                let v = e.eval(env)?;
                let s = v.as_scalar().ok_or_else(|| ModeError::Eval("power of a mode".into()))?;
                Val::scalar(s.pow(*k), conv)
            }
        })
    }
}

fn parse_sum(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut lhs = parse_product(c)?;
    loop {
        if c.eat_sym('+') {
            lhs = Expr::Add(Box::new(lhs), Box::new(parse_product(c)?));
        } else if c.eat_sym('-') {
            lhs = Expr::Sub(Box::new(lhs), Box::new(parse_product(c)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn starts_factor(t: &Tok) -> bool {
    matches!(t, Tok::Ident(_) | Tok::Int(_) | Tok::Sym('('))
}

fn parse_product(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut lhs = parse_unary(c)?;
    loop {
        if c.eat_sym('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(parse_unary(c)?));
        } else if c.eat_sym('/') {
            lhs = Expr::Div(Box::new(lhs), Box::new(parse_unary(c)?));
        } else if starts_factor(c.peek()) {
            lhs = Expr::Mul(Box::new(lhs), Box::new(parse_power(c)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_unary(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    if c.eat_sym('-') {
        Ok(Expr::Neg(Box::new(parse_unary(c)?)))
    } else {
        parse_power(c)
    }
}

fn parse_power(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let base = parse_atom(c)?;
    if c.eat_sym('^') {
        let k = c.expect_int()?;
        let k = u32::try_from(k).map_err(|_| c.error("exponent too large"))?;
        return Ok(Expr::Pow(Box::new(base), k));
    }
    Ok(base)
}

fn parse_atom(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    match c.peek().clone() {
        Tok::Int(_) => Ok(Expr::Num(c.expect_int()?)),
        Tok::Sym('(') => {
            c.next();
            let e = parse_sum(c)?;
            c.expect_sym(')')?;
            Ok(e)
        }
        Tok::Ident(name) => {
            c.next();
            if name == "delta" {
                c.expect_sym('(')?;
                let e = parse_sum(c)?;
                c.expect_sym(')')?;
                return Ok(Expr::Delta(Box::new(e)));
            }
            if c.eat_sym('_') {
                let close = if c.eat_sym('{') {
                    '}'
                } else if c.eat_sym('(') {
                    ')'
                } else {
                    return Err(c.error("expected `{` or `(` after `_`"));
                };
                let e = parse_sum(c)?;
                c.expect_sym(close)?;
                return Ok(Expr::Mode(name, Box::new(e)));
            }
            Ok(Expr::Ident(name))
        }
        other => Err(c.error(format!("expected a number, name or `(`, found {other}"))),
    }
}

/// Splits `L_n` into `L` and checks the index letter.
fn split_lhs(c: &mut Cursor, letter: &str) -> Result<Symbol, SyntaxError> {
    let id = c.expect_ident()?;
    match id.rsplit_once('_') {
        Some((g, l)) if l == letter && !g.is_empty() => Ok(Symbol::new(g)),
        _ => Err(c.error(format!("expected `<generator>_{letter}`, found `{id}`"))),
    }
}

impl ModeTable {
    pub fn parse(text: &str) -> Result<ModeTable, SyntaxError> {
        let mut c = Cursor::new(text)?;
        let mut entries = Vec::new();
        while !c.at_eof() {
            if c.eat_sym(';') {
                continue;
            }
            let start = c.here().clone();
            c.expect_sym('[')?;
            let a = split_lhs(&mut c, "n")?;
            c.expect_sym(',')?;
            let b = split_lhs(&mut c, "m")?;
            c.expect_sym(']')?;
            c.expect_sym('=')?;
            let rhs = parse_sum(&mut c)?;
            if !(c.at_eof() || c.is_sym(';') || c.is_sym('[')) {
                return Err(c.error(format!("unexpected {}", c.peek())));
            }
            let text = entry_text(text, start.line, start.col, c.here());
            entries.push(ExpectedBracket { a, b, text, rhs });
        }
        Ok(ModeTable { entries })
    }

    /// Closed forms for the catalog algebras that have them.
    pub fn builtin(name: &str) -> Option<ModeTable> {
        let text = match name {
            "virasoro" => VIRASORO_TABLE,
            "neveu_schwarz" | "n1" => NS_TABLE,
            "topological" => TOPOLOGICAL_TABLE,
            _ => return None,
        };
        Some(ModeTable::parse(text).expect("builtin mode tables parse"))
    }
}

fn entry_text(text: &str, line: usize, col: usize, end: &crate::lexer::Token) -> String {
    let offset = |l: usize, c: usize| -> usize {
        let mut off = 0;
        for (i, row) in text.split_inclusive('\n').enumerate() {
            if i + 1 == l {
                return off + row.char_indices().nth(c - 1).map(|(b, _)| b).unwrap_or(row.len());
            }
            off += row.len();
        }
        text.len()
    };
    text[offset(line, col)..offset(end.line, end.col)].trim().trim_end_matches(';').trim().to_string()
}

pub const VIRASORO_TABLE: &str = "[L_n, L_m] = (n - m) L_{n+m} + (n^3 - n)/12 delta(n+m) c";
pub const NS_TABLE: &str = "[L_n, L_m] = (n - m) L_{n+m} + (n^3 - n)/12 delta(n+m) c;
[G_n, G_m] = 2 L_{n+m} + (4 n^2 - 1)/12 delta(n+m) c;
[L_n, G_m] = (n/2 - m) G_{n+m}";
pub const TOPOLOGICAL_TABLE: &str = "[L_n, L_m] = (n - m) L_{n+m};
[Q_n, G_m] = L_{n+m} + n J_{n+m} + (n^2 - n)/2 delta(n+m) d;
[L_n, J_m] = -m J_{n+m} - (n^2 + n)/2 delta(n+m) d";

impl ExpectedBracket {
    /// Evaluates the closed form at concrete indices.
    pub fn eval(&self, p: &Presentation, n: &Q, m: &Q, conv: Convention) -> Result<ModeExpr, ModeError> {
        let v = self.rhs.eval(&EvalEnv { p, n, m, conv })?;
        if !v.scalar.is_zero() {
            return Err(ModeError::Eval(format!("`{}` has a scalar term {}", self.text, v.scalar)));
        }
        Ok(v.expr)
    }
}

/// Compares every table entry with [`mode_bracket`] on all valid index pairs
/// in `[lo, hi]²`. One check per entry; mismatching pairs are listed in the
/// witness and in the `mismatches` value.
pub fn verify_weak_commutator(
    p: &Presentation,
    table: &ModeTable,
    window: (i64, i64),
    conv: Convention,
) -> Result<Report, ModeError> {
    let mut report = Report::new();
    for e in &table.entries {
        let ns = indices_in_window(p, &e.a, window.0, window.1, conv)?;
        let ms = indices_in_window(p, &e.b, window.0, window.1, conv)?;
        let mut mismatches = Vec::new();
        let mut cases = 0usize;
        for n in &ns {
            for m in &ms {
                cases += 1;
                let got = mode_bracket(p, (&e.a, n), (&e.b, m), conv)?;
                let want = e.eval(p, n, m, conv)?;
                if got != want {
                    mismatches.push((n.clone(), m.clone(), got, want));
                }
            }
        }
        let name = format!("[{}_n, {}_m]", e.a, e.b);
        let value = serde_json::json!({
            "expected": e.text,
            "cases": cases,
            "mismatches": mismatches.iter().map(|(n, m, _, _)| vec![n.to_string(), m.to_string()]).collect::<Vec<_>>(),
        });
        let check = if mismatches.is_empty() {
            Check::pass(name)
        } else {
            let shown: Vec<String> = mismatches
                .iter()
                .take(3)
                .map(|(n, m, g, w)| format!("(n, m) = ({n}, {m}): computed {g}, expected {w}"))
                .collect();
            Check::fail(name, format!("{} mismatching pairs; {}", mismatches.len(), shown.join("; ")))
        };
        report.push(check.with_value(value));
    }
    Ok(report)
}

/// Mode table of the pairs `(a, b)` over the window, for display.
pub fn mode_table(
    p: &Presentation,
    a: &str,
    b: &str,
    window: (i64, i64),
    conv: Convention,
) -> Result<Vec<(Q, Q, ModeExpr)>, ModeError> {
    let mut out = Vec::new();
    for n in indices_in_window(p, a, window.0, window.1, conv)? {
        for m in indices_in_window(p, b, window.0, window.1, conv)? {
            let v = mode_bracket(p, (a, &n), (b, &m), conv)?;
            out.push((n.clone(), m, v));
        }
    }
    Ok(out)
}

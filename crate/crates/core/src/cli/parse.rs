//! Algebra-definition files, λ-bracket and element expressions, and state
//! expressions.
//!
//! ```text
//! algebra virasoro {
//!   generator L : even, weight 2;
//!   central c;
//!   bracket L L = T L + 2 L l + 1/2 c l^(3);
//! }
//! ```
//!
//! Further statements: `param k;` declares a parameter of the ground ring,
//! `ungraded;` marks a presentation without a weight grading and
//! `set c = 1/2;` specializes a central element in the enveloping algebra.

use std::collections::BTreeMap;

use crate::envelope::{EnvContext, EnvElem, Mode};
use crate::lexer::{Cursor, SyntaxError, Tok};
use crate::symbolic::{binom, Exps, Q, Scalar, Symbol, Var};
use crate::vlie::{LambdaPoly, Parity, Presentation, PresentationBuilder, RElem, VlieError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("invalid algebra: {0}")]
    Invalid(#[from] VlieError),
}

/// A parsed algebra file.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraFile {
    pub presentation: Presentation,
    /// `set` statements: values of central elements for the envelope.
    pub settings: BTreeMap<Symbol, Scalar>,
    /// Opposite orientations synthesized by skew-symmetry.
    pub warnings: Vec<String>,
}

/// What a bare identifier denotes inside an expression.
#[derive(Clone, Debug)]
pub enum Name {
    Generator,
    Central,
    Scalar(Scalar),
}

struct Scope<'a> {
    lookup: &'a dyn Fn(&str) -> Option<Name>,
    allow_lambda: bool,
}

/// One product term: `coeff * T^(t) sym * l^(l)`.
struct Term {
    coeff: Scalar,
    t: u16,
    l: u16,
    sym: Option<(Symbol, bool)>,
}

fn divided_index(c: &mut Cursor, var: &str) -> Result<u16, SyntaxError> {
    if !c.eat_sym('^') {
        return Ok(1);
    }
    if !c.is_sym('(') {
        return Err(c.error(format!("plain powers of {var} are not allowed; write the divided power {var}^(n)")));
    }
    c.expect_sym('(')?;
    let n = c.expect_int()?;
    c.expect_sym(')')?;
    u16::try_from(n).map_err(|_| c.error("exponent too large"))
}

fn starts_factor(c: &Cursor) -> bool {
    matches!(c.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::Sym('('))
}

fn parse_term(c: &mut Cursor, scope: &Scope) -> Result<Term, SyntaxError> {
    let mut term = Term { coeff: Scalar::one(), t: 0, l: 0, sym: None };
    let mut first = true;
    loop {
        if !first {
            if c.eat_sym('*') {
            } else if c.is_sym('/') {
                c.next();
                let d = c.expect_int()?;
                if d == 0 {
                    return Err(c.error("zero denominator"));
                }
                term.coeff = term.coeff.scale(&Q::new(1, d as i64));
                continue;
            } else if !starts_factor(c) {
                break;
            }
        }
        first = false;
        parse_factor(c, scope, &mut term)?;
    }
    Ok(term)
}

fn parse_factor(c: &mut Cursor, scope: &Scope, term: &mut Term) -> Result<(), SyntaxError> {
    if c.eat_sym('-') {
        term.coeff = -&term.coeff;
        return parse_factor(c, scope, term);
    }
    let here = c.here().clone();
    match c.peek().clone() {
        Tok::Int(_) => {
            let n = c.expect_int()?;
            let n = i64::try_from(n).map_err(|_| c.error("integer too large"))?;
            term.coeff = term.coeff.scale(&Q::int(n));
        }
        Tok::Sym('(') => {
            c.next();
            let s = parse_scalar_sum(c, scope)?;
            c.expect_sym(')')?;
            term.coeff = &term.coeff * &s;
        }
        Tok::Ident(id) if id == "T" => {
            c.next();
            let k = divided_index(c, "T")?;
            term.coeff = term.coeff.scale(&binom((term.t + k) as i64, k as i64));
            term.t += k;
        }
        Tok::Ident(id) if id == "l" => {
            if !scope.allow_lambda {
                return Err(c.error("the variable l is not allowed here"));
            }
            c.next();
            let k = divided_index(c, "l")?;
            term.coeff = term.coeff.scale(&binom((term.l + k) as i64, k as i64));
            term.l += k;
        }
        Tok::Ident(id) => {
            c.next();
            match (scope.lookup)(&id) {
                Some(Name::Scalar(s)) => {
                    let e = if c.eat_sym('^') { c.expect_int()? } else { 1 };
                    let e = u32::try_from(e).map_err(|_| c.error("exponent too large"))?;
                    term.coeff = &term.coeff * &s.pow(e);
                }
                Some(kind @ (Name::Generator | Name::Central)) => {
                    if term.sym.is_some() {
                        return Err(SyntaxError {
                            line: here.line,
                            col: here.col,
                            message: format!("a term may contain only one generator or central element, found `{id}`"),
                        });
                    }
                    if c.is_sym('^') {
                        return Err(c.error(format!("`{id}` cannot be raised to a power")));
                    }
                    term.sym = Some((Symbol::new(&id), matches!(kind, Name::Central)));
                }
                None => {
                    return Err(SyntaxError { line: here.line, col: here.col, message: format!("unknown symbol `{id}`") })
                }
            }
        }
        other => return Err(c.error(format!("expected a term, found {other}"))),
    }
    Ok(())
}

/// A sum of terms that contain no generator, central element, `T` or `l`.
fn parse_scalar_sum(c: &mut Cursor, scope: &Scope) -> Result<Scalar, SyntaxError> {
    let inner = Scope { lookup: scope.lookup, allow_lambda: false };
    let mut out = Scalar::zero();
    let mut neg = c.eat_sym('-');
    loop {
        let here = c.here().clone();
        let t = parse_term(c, &inner)?;
        if t.sym.is_some() || t.t > 0 {
            return Err(SyntaxError {
                line: here.line,
                col: here.col,
                message: "parenthesized groups may only contain scalars".to_string(),
            });
        }
        out = if neg { &out - &t.coeff } else { &out + &t.coeff };
        if c.eat_sym('+') {
            neg = false;
        } else if c.eat_sym('-') {
            neg = true;
        } else {
            return Ok(out);
        }
    }
}

fn parse_lambda_sum(c: &mut Cursor, scope: &Scope) -> Result<LambdaPoly, SyntaxError> {
    let mut out = LambdaPoly::zero();
    let mut neg = c.eat_sym('-');
    if !neg {
        c.eat_sym('+');
    }
    loop {
        let here = c.here().clone();
        let t = parse_term(c, scope)?;
        let coeff = if neg { -&t.coeff } else { t.coeff };
        match t.sym {
            Some((g, false)) => {
                out.add_term(Exps::single(Var::Lambda, t.l), RElem::t_gen(g.as_str(), t.t).times(&coeff));
            }
            Some((z, true)) => {
                if t.t == 0 {
                    out.add_term(Exps::single(Var::Lambda, t.l), RElem::central(z.as_str()).times(&coeff));
                }
            }
            None if coeff.is_zero() => {}
            None => {
                return Err(SyntaxError {
                    line: here.line,
                    col: here.col,
                    message: "term has no generator or central element".to_string(),
                })
            }
        }
        if c.eat_sym('+') {
            neg = false;
        } else if c.eat_sym('-') {
            neg = true;
        } else {
            return Ok(out);
        }
    }
}

fn expect_end(c: &Cursor) -> Result<(), SyntaxError> {
    if c.at_eof() {
        Ok(())
    } else {
        Err(c.error(format!("unexpected {}", c.peek())))
    }
}

fn presentation_lookup(p: &Presentation) -> impl Fn(&str) -> Option<Name> + '_ {
    move |id: &str| {
        if p.has_generator(id) {
            Some(Name::Generator)
        } else if p.has_central(id) {
            Some(Name::Central)
        } else if p.params().iter().any(|s| s.as_str() == id) {
            Some(Name::Scalar(Scalar::param(id)))
        } else {
            None
        }
    }
}

/// Parses an element of `R`, e.g. `L1 + L2`, `1/2 J` or `T J - 3 d`.
pub fn parse_relem(p: &Presentation, text: &str) -> Result<RElem, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let lookup = presentation_lookup(p);
    let poly = parse_lambda_sum(&mut c, &Scope { lookup: &lookup, allow_lambda: false })?;
    expect_end(&c)?;
    Ok(poly.coeff_of(Var::Lambda, 0))
}

/// Parses a λ-bracket value over `p`, e.g. `T L + 2 L l + 1/2 c l^(3)`.
pub fn parse_lambda_poly(p: &Presentation, text: &str) -> Result<LambdaPoly, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let lookup = presentation_lookup(p);
    let poly = parse_lambda_sum(&mut c, &Scope { lookup: &lookup, allow_lambda: true })?;
    expect_end(&c)?;
    Ok(poly)
}

fn ident_list(c: &mut Cursor) -> Result<Vec<(String, usize, usize)>, SyntaxError> {
    let mut out = Vec::new();
    loop {
        let (line, col) = (c.here().line, c.here().col);
        out.push((c.expect_ident()?, line, col));
        if !c.eat_sym(',') {
            return Ok(out);
        }
    }
}

#[derive(Default)]
struct Names {
    generators: Vec<String>,
    centrals: Vec<String>,
    params: Vec<String>,
}

impl Names {
    fn lookup(&self, id: &str) -> Option<Name> {
        if self.generators.iter().any(|g| g == id) {
            Some(Name::Generator)
        } else if self.centrals.iter().any(|g| g == id) {
            Some(Name::Central)
        } else if self.params.iter().any(|g| g == id) {
            Some(Name::Scalar(Scalar::param(id)))
        } else {
            None
        }
    }

    fn declare(&mut self, kind: usize, name: String, line: usize, col: usize) -> Result<(), SyntaxError> {
        if matches!(name.as_str(), "T" | "l" | "algebra" | "generator" | "central" | "param" | "bracket" | "set") {
            return Err(SyntaxError { line, col, message: format!("`{name}` is a reserved name") });
        }
        if self.lookup(&name).is_some() {
            return Err(SyntaxError { line, col, message: format!("`{name}` is declared twice") });
        }
        [&mut self.generators, &mut self.centrals, &mut self.params][kind].push(name);
        Ok(())
    }
}

/// Parses an algebra file. Symbols must be declared before they are used.
pub fn parse_algebra(text: &str) -> Result<AlgebraFile, InputError> {
    let mut c = Cursor::new(text)?;
    c.expect_keyword("algebra")?;
    let name = c.expect_ident()?;
    c.expect_sym('{')?;
    let mut b = PresentationBuilder::new(&name).strict_params();
    let mut names = Names::default();
    let mut settings = BTreeMap::new();
    loop {
        if c.eat_sym('}') {
            break;
        }
        if c.eat_sym(';') {
            continue;
        }
        let kw = match c.peek().clone() {
            Tok::Ident(kw) => kw,
            other => return Err(c.error(format!("expected a statement or `}}`, found {other}")).into()),
        };
        match kw.as_str() {
            "generator" => {
                c.next();
                let ids = ident_list(&mut c)?;
                c.expect_sym(':')?;
                let parity = match c.expect_ident().as_deref() {
                    Ok("even") => Parity::Even,
                    Ok("odd") => Parity::Odd,
                    _ => return Err(c.error("expected `even` or `odd`").into()),
                };
                let weight = if c.eat_sym(',') {
                    c.expect_keyword("weight")?;
                    c.signed_rational()?
                } else {
                    Q::zero()
                };
                for (id, line, col) in ids {
                    b = b.generator(&id, parity, weight.clone());
                    names.declare(0, id, line, col)?;
                }
            }
            "central" | "param" => {
                c.next();
                for (id, line, col) in ident_list(&mut c)? {
                    if kw == "central" {
                        b = b.central(&id);
                        names.declare(1, id, line, col)?;
                    } else {
                        b = b.param(&id);
                        names.declare(2, id, line, col)?;
                    }
                }
            }
            "ungraded" => {
                c.next();
                b = b.ungraded();
            }
            "set" => {
                c.next();
                let (line, col) = (c.here().line, c.here().col);
                let id = c.expect_ident()?;
                if !matches!(names.lookup(&id), Some(Name::Central)) {
                    return Err(SyntaxError { line, col, message: format!("`{id}` is not a declared central element") }.into());
                }
                c.expect_sym('=')?;
                settings.insert(Symbol::new(&id), Scalar::from_q(c.signed_rational()?));
            }
            "bracket" => {
                c.next();
                let mut pair = Vec::new();
                for _ in 0..2 {
                    let (line, col) = (c.here().line, c.here().col);
                    let id = c.expect_ident()?;
                    if !matches!(names.lookup(&id), Some(Name::Generator)) {
                        return Err(SyntaxError { line, col, message: format!("`{id}` is not a declared generator") }.into());
                    }
                    pair.push(id);
                }
                c.expect_sym('=')?;
                let lookup = |id: &str| names.lookup(id);
                let value = parse_lambda_sum(&mut c, &Scope { lookup: &lookup, allow_lambda: true })?;
                b.add_bracket(&pair[0], &pair[1], value);
            }
            other => return Err(c.error(format!("unknown statement `{other}`")).into()),
        }
        if !c.is_sym('}') {
            c.expect_sym(';')?;
        }
    }
    expect_end(&c)?;
    let presentation = b.build()?;
    let warnings = presentation
        .synthesized_pairs()
        .iter()
        .map(|(x, y)| format!("bracket {x} {y} synthesized by skew-symmetry"))
        .collect();
    Ok(AlgebraFile { presentation, settings, warnings })
}

/// Renders a presentation in the file grammar; [`parse_algebra`] inverts it.
pub fn render_algebra(p: &Presentation) -> String {
    let mut out = format!("algebra {} {{\n", p.name());
    if !p.is_graded() {
        out.push_str("  ungraded;\n");
    }
    for g in p.generators() {
        out.push_str(&format!("  generator {} : {}, weight {};\n", g.name, g.parity, g.weight));
    }
    for z in p.centrals() {
        out.push_str(&format!("  central {z};\n"));
    }
    for s in p.params() {
        out.push_str(&format!("  param {s};\n"));
    }
    for (a, b) in p.declared_pairs() {
        out.push_str(&format!("  bracket {a} {b} = {};\n", p.entry(a, b)));
    }
    out.push_str("}\n");
    out
}

/// Parses a state of the enveloping algebra: a combination of mode words
/// applied to the vacuum, such as `L_{-2} L_{-2}|0> - 3/2 c L_(-3)|0>`.
/// `g_(t)` is a mode in the t-convention, `g_{n}` in the weight convention,
/// a bare generator `g` stands for the state `g_(-1)|0>` and `|0>` alone is
/// the vacuum. Central elements take their specialized values.
pub fn parse_state(ctx: &EnvContext, text: &str) -> Result<EnvElem, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let p = ctx.presentation();
    let lookup = |id: &str| -> Option<Name> {
        if p.has_central(id) {
            Some(Name::Scalar(ctx.specialization().get(id).cloned().unwrap_or_else(|| Scalar::param(id))))
        } else if p.params().iter().any(|s| s.as_str() == id) {
            Some(Name::Scalar(Scalar::param(id)))
        } else {
            None
        }
    };
    let scope = Scope { lookup: &lookup, allow_lambda: false };
    let mut out = EnvElem::zero();
    let mut neg = c.eat_sym('-');
    if !neg {
        c.eat_sym('+');
    }
    loop {
        let mut coeff = Scalar::one();
        let mut modes: Vec<Mode> = Vec::new();
        let mut bare = false;
        loop {
            if c.eat_sym('*') {
                continue;
            }
            if c.is_sym('|') {
                c.next();
                match c.next() {
                    Tok::Int(z) if z == "0" => {}
                    _ => return Err(c.error("expected `|0>`")),
                }
                c.expect_sym('>')?;
                break;
            }
            if let Tok::Ident(id) = c.peek().clone() {
                if let Some(g) = ctx.generator_index(&id) {
                    let here = c.here().clone();
                    c.next();
                    if !c.eat_sym('_') {
                        if bare {
                            return Err(SyntaxError { line: here.line, col: here.col, message: "use modes `g_(t)` for products of generators".into() });
                        }
                        modes.push(Mode { t: -1, g });
                        bare = true;
                        continue;
                    }
                    let t = if c.eat_sym('(') {
                        let neg = c.eat_sym('-');
                        let v = c.expect_int()? as i64;
                        c.expect_sym(')')?;
                        if neg {
                            -v
                        } else {
                            v
                        }
                    } else {
                        c.expect_sym('{')?;
                        let n = c.signed_rational()?;
                        c.expect_sym('}')?;
                        let t = &(&n + &p.weight(&id)) - &Q::one();
                        t.to_i64().ok_or_else(|| c.error(format!("index {n} is not valid for `{id}`")))?
                    };
                    let t = i32::try_from(t).map_err(|_| c.error("mode index too large"))?;
                    modes.push(Mode { t, g });
                    continue;
                }
            }
            if bare && (c.at_eof() || c.is_sym('+') || c.is_sym('-')) {
                break;
            }
            if !modes.is_empty() {
                return Err(c.error("expected a mode or `|0>`"));
            }
            let mut t = Term { coeff: Scalar::one(), t: 0, l: 0, sym: None };
            parse_factor(&mut c, &scope, &mut t)?;
            while c.is_sym('/') {
                c.next();
                let d = c.expect_int()?;
                if d == 0 {
                    return Err(c.error("zero denominator"));
                }
                t.coeff = t.coeff.scale(&Q::new(1, d as i64));
            }
            if t.t > 0 {
                return Err(c.error("use modes `g_(t)` instead of T in states"));
            }
            coeff = &coeff * &t.coeff;
        }
        if bare && modes.len() > 1 {
            return Err(c.error("a bare generator cannot follow modes"));
        }
        let v = ctx.apply_word(&modes, &EnvElem::vacuum()).times(&coeff);
        out = if neg { out.minus(&v) } else { out.plus(&v) };
        if c.eat_sym('+') {
            neg = false;
        } else if c.eat_sym('-') {
            neg = true;
        } else {
            expect_end(&c)?;
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests;

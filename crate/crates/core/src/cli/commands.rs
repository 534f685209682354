//! Subcommand definitions, dispatch and report rendering.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::catalog::{self, CatalogError};
use crate::envelope::{
    basis_by_weight, c2_quotient, graded_dimension, symmetric_algebra_dimension, verify_identities, EnvContext,
    EnvElem, IdentityWindows,
};
use crate::modes::{mode_table, verify_weak_commutator, Convention, ModeTable};
use crate::report::{Check, Report};
use crate::symbolic::{check_binomial_identities, Q, Scalar, Symbol};
use crate::vlie::{check_identities, check_morphism, CheckOptions, MorphismMap, Presentation, PresentationBuilder};
use crate::zhu::{affine_zhu_iso, check_zhu_relations, zhu_reduce, ZhuChecks};

use super::parse::{parse_algebra, parse_relem, parse_state};

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "vertexlie", version, about = "Exact computations with vertex Lie algebras and their envelopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Weight,
    T,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Algebra definition file.
    #[arg(long, conflicts_with = "builtin")]
    algebra: Option<PathBuf>,
    /// Catalog algebra; repeat to form a direct product (symbols get suffixes 1, 2, ...).
    #[arg(long)]
    builtin: Vec<String>,
    /// Catalog build parameter, e.g. `--param g=sl2`.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = key_value)]
    params: Vec<(String, String)>,
    /// Substitutes a parameter, or specializes a central element in the envelope.
    #[arg(long = "set", value_name = "NAME=VALUE", value_parser = key_value)]
    set: Vec<(String, String)>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conformal skew-symmetry and Jacobi identity on the generators.
    Check {
        #[command(flatten)]
        common: Common,
        /// Also analyse this element as a conformal vector.
        #[arg(long)]
        conformal: Option<String>,
        /// Add random T-decorated combinations.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// List every per-pair and per-triple check.
        #[arg(long)]
        detailed: bool,
    },
    /// Mode commutators, optionally compared with closed forms.
    Modes {
        #[command(flatten)]
        common: Common,
        /// Generator pair `A,B`; repeatable.
        #[arg(long = "pairs", value_name = "A,B")]
        pairs: Vec<String>,
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true, value_parser = window)]
        window: (i64, i64),
        #[arg(long, value_enum, default_value = "weight")]
        convention: ConventionArg,
        /// Compare with the Virasoro closed form.
        #[arg(long)]
        expect_virasoro: bool,
        /// Compare with the closed forms known for the builtin algebra.
        #[arg(long)]
        expect_builtin: bool,
        /// Compare with the closed forms in this file.
        #[arg(long)]
        expect_table: Option<PathBuf>,
    },
    /// Graded dimensions of the envelope against the PBW generating function.
    EnvelopeDims {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "6", value_parser = rational)]
        max_weight: Q,
        /// Expected dimensions, comma separated.
        #[arg(long, value_delimiter = ',')]
        expect: Vec<usize>,
    },
    /// The n-th product of two states.
    Nproduct {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        n: i32,
    },
    /// Vertex algebra identities on a pool of states.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Pool of all PBW states up to this weight (ignored with --state).
        #[arg(long, default_value = "3", value_parser = rational)]
        max_weight: Q,
        /// Explicit pool state; repeatable.
        #[arg(long = "state", allow_hyphen_values = true)]
        states: Vec<String>,
        /// Index window of the triple identities.
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true, value_parser = window)]
        window: (i64, i64),
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true, value_parser = window)]
        skew_window: (i64, i64),
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The quotient V/C2(V) and its Poisson structure.
    C2 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "6", value_parser = rational)]
        max_weight: Q,
        /// Expected quotient dimensions, comma separated.
        #[arg(long, value_delimiter = ',')]
        expect: Vec<usize>,
        /// Require the induced bracket to vanish.
        #[arg(long)]
        expect_commutative: bool,
    },
    /// Zhu algebra relations modulo the bounded O-span.
    Zhu {
        #[command(flatten)]
        common: Common,
        /// Pool of all PBW states up to this weight.
        #[arg(long, default_value_t = 3)]
        max_weight: i64,
        /// Weight bound of the O-span (default: twice the pool weight).
        #[arg(long)]
        o_bound: Option<i64>,
        /// Range of n for the shift relation.
        #[arg(long, default_value = "-3..0", allow_hyphen_values = true, value_parser = window)]
        window: (i64, i64),
        /// Range of r and s for the associativity formula.
        #[arg(long, default_value = "-2..-1", allow_hyphen_values = true, value_parser = window)]
        assoc_window: (i64, i64),
        /// Check that this state is central in the Zhu algebra.
        #[arg(long, allow_hyphen_values = true)]
        central: Option<String>,
        /// Reduce this state modulo the O-span.
        #[arg(long, allow_hyphen_values = true)]
        reduce: Option<String>,
        /// Check the affine isomorphism on U(g) PBW words up to this degree.
        #[arg(long)]
        affine_degree: Option<usize>,
    },
    /// Coset conformal vector L - L'.
    Coset {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "L", allow_hyphen_values = true)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        sub: String,
    },
    /// Shift L by T J and report the new central charge.
    ChodosThorn {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "L", allow_hyphen_values = true)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        /// Expected central charge of the shifted vector.
        #[arg(long, allow_hyphen_values = true)]
        expect_charge: Option<String>,
    },
    /// Griess algebra on the weight-2 subspace.
    Griess {
        #[command(flatten)]
        common: Common,
    },
    /// Checks that a map on generators defines a morphism.
    Morphism {
        #[command(flatten)]
        common: Common,
        /// Target catalog algebra (default: the source).
        #[arg(long, conflicts_with = "to_algebra")]
        to_builtin: Option<String>,
        #[arg(long = "to-param", value_name = "KEY=VALUE", value_parser = key_value)]
        to_params: Vec<(String, String)>,
        /// Target algebra file.
        #[arg(long)]
        to_algebra: Option<PathBuf>,
        /// Image of a generator or central element, `g=expr`; repeatable.
        #[arg(long = "map", value_name = "NAME=EXPR", value_parser = key_value, allow_hyphen_values = true)]
        map: Vec<(String, String)>,
    },
    /// The two binomial summation identities.
    BinomialSelftest {
        #[arg(long, default_value_t = 12)]
        max: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn key_value(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, found `{s}`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, found `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad window start `{a}`"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad window end `{b}`"))?;
    if a > b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok((a, b))
}

fn rational(s: &str) -> Result<Q, String> {
    s.trim().parse::<Q>().map_err(|e| e.to_string())
}

/// Why a command could not produce a report.
enum Failure {
    Usage(String),
    Parse(String),
}

impl From<std::fmt::Error> for Failure {
    fn from(e: std::fmt::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_err(what: &str, e: impl ToString) -> Failure {
    Failure::Parse(format!("{what}: {}", e.to_string()))
}

/// The algebra selected by the common flags.
struct Loaded {
    pres: Presentation,
    centrals: BTreeMap<Symbol, Scalar>,
    warnings: Vec<String>,
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn catalog_err(e: CatalogError) -> Failure {
    usage(e)
}

fn build_builtins(names: &[String], params: &[(String, String)]) -> Result<Presentation, Failure> {
    let params: BTreeMap<String, String> = params.iter().cloned().collect();
    let parts = names.iter().map(|n| catalog::build(n, &params)).collect::<Result<Vec<_>, _>>().map_err(catalog_err)?;
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().expect("one factor"));
    }
    let suffixes: Vec<String> = (1..=parts.len()).map(|i| i.to_string()).collect();
    let factors: Vec<(&Presentation, &str)> = parts.iter().zip(&suffixes).map(|(p, s)| (p, s.as_str())).collect();
    catalog::product(&factors).map_err(catalog_err)
}

fn substitute_params(p: &Presentation, values: &BTreeMap<Symbol, Scalar>) -> Result<Presentation, Failure> {
    let mut b = PresentationBuilder::new(p.name()).strict_params();
    if !p.is_graded() {
        b = b.ungraded();
    }
    for g in p.generators() {
        b = b.generator(&g.name, g.parity, g.weight.clone());
    }
    for z in p.centrals() {
        b = b.central(z);
    }
    for s in p.params().iter().filter(|s| !values.contains_key(*s)) {
        b = b.param(s);
    }
    for (x, y) in p.declared_pairs() {
        b.add_bracket(x, y, p.entry(x, y).map_coeffs(|c| c.substitute_params(values)));
    }
    b.build().map_err(usage)
}

fn load(common: &Common, envelope: bool) -> Result<Loaded, Failure> {
    let (pres, mut centrals, warnings) = match (&common.algebra, common.builtin.is_empty()) {
        (Some(path), true) => {
            if !common.params.is_empty() {
                return Err(usage("--param applies to --builtin algebras"));
            }
            let f = parse_algebra(&read_file(path)?).map_err(|e| match e {
                super::InputError::Syntax(s) => parse_err(&path.display().to_string(), s),
                other => usage(format!("{}: {other}", path.display())),
            })?;
            (f.presentation, f.settings, f.warnings)
        }
        (None, false) => (build_builtins(&common.builtin, &common.params)?, BTreeMap::new(), Vec::new()),
        _ => return Err(usage("one of --algebra or --builtin is required")),
    };
    let mut params = BTreeMap::new();
    for (k, v) in &common.set {
        let value = catalog::parse_scalar(v).map_err(|e| parse_err(&format!("--set {k}"), e))?;
        if pres.has_central(k) {
            if !envelope {
                return Err(usage(format!("--set {k}: central elements can only be specialized in envelope commands")));
            }
            centrals.insert(Symbol::new(k), value);
        } else if pres.params().iter().any(|s| s.as_str() == k) {
            params.insert(Symbol::new(k), value);
        } else {
            return Err(usage(format!("--set {k}: no parameter or central element of that name")));
        }
    }
    let pres = if params.is_empty() { pres } else { substitute_params(&pres, &params)? };
    Ok(Loaded { pres, centrals, warnings })
}

fn context(l: &Loaded) -> Result<EnvContext, Failure> {
    EnvContext::new(&l.pres, &l.centrals).map_err(usage)
}

fn state(ctx: &EnvContext, flag: &str, text: &str) -> Result<EnvElem, Failure> {
    parse_state(ctx, text).map_err(|e| parse_err(flag, e))
}

fn relem(p: &Presentation, flag: &str, text: &str) -> Result<crate::vlie::RElem, Failure> {
    parse_relem(p, text).map_err(|e| parse_err(flag, e))
}

fn pool(ctx: &EnvContext, max_weight: &Q) -> Vec<EnvElem> {
    basis_by_weight(ctx, max_weight).into_iter().flatten().map(EnvElem::word).collect()
}

/// What a command produced: checks plus human-readable lines for text mode.
struct Output {
    algebra: String,
    report: Report,
    lines: Vec<String>,
    warnings: Vec<String>,
}

impl Output {
    fn new(algebra: &str) -> Output {
        Output { algebra: algebra.to_string(), report: Report::new(), lines: Vec::new(), warnings: Vec::new() }
    }

    fn from_loaded(l: &Loaded) -> Output {
        let mut o = Output::new(l.pres.name());
        o.warnings = l.warnings.clone();
        o
    }
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn cmd_check(
    common: &Common,
    conformal: Option<&str>,
    samples: usize,
    seed: u64,
    detailed: bool,
) -> Result<Output, Failure> {
    let l = load(common, false)?;
    let mut out = Output::from_loaded(&l);
    let opts = CheckOptions { exhaustive: samples > 0, samples, seed };
    let ir = check_identities(&l.pres, &opts);
    let witness = |prefix: &str| {
        ir.report
            .failures()
            .find(|c| c.name.starts_with(prefix))
            .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
            .unwrap_or_default()
    };
    let r = &mut out.report;
    r.push(Check::from_bool("skew", ir.skew_ok, || witness("skew")));
    r.push(Check::from_bool("jacobi", ir.jacobi_ok, || witness("jacobi")));
    r.push(Check::from_bool("conventions", ir.conventions_agree, || witness("jacobi-conventions")));
    if let Some(s3) = ir.s3_consistent {
        r.push(Check::from_bool("s3-symmetry", s3, || witness("s3")));
    }
    if detailed {
        r.extend(ir.report.clone());
    }
    if let Some(text) = conformal {
        let x = relem(&l.pres, "--conformal", text)?;
        match catalog::conformal_analysis(&l.pres, &x) {
            Ok(cr) => {
                let value = json!({
                    "central_charge": cr.central_charge.as_ref().map(|c| c.to_string()),
                    "statuses": cr.statuses.iter().map(|(g, s)| (g.clone(), s.to_string())).collect::<BTreeMap<_, _>>(),
                });
                let ok = cr.is_conformal;
                out.report.extend(cr.report);
                out.report.push(Check::from_bool("conformal-analysis", ok, || format!("{text} is not a conformal vector")).with_value(value));
            }
            Err(e) => out.report.push(Check::fail("conformal", e.to_string())),
        }
    }
    Ok(out)
}

fn cmd_modes(
    common: &Common,
    pairs: &[String],
    win: (i64, i64),
    conv: Convention,
    expect_virasoro: bool,
    expect_builtin: bool,
    expect_table: Option<&PathBuf>,
) -> Result<Output, Failure> {
    let l = load(common, false)?;
    let p = &l.pres;
    let mut out = Output::from_loaded(&l);
    let mut wanted = Vec::new();
    for pair in pairs {
        let (a, b) = pair.split_once(',').ok_or_else(|| usage(format!("--pairs expects A,B, found `{pair}`")))?;
        let (a, b) = (a.trim().to_string(), b.trim().to_string());
        for g in [&a, &b] {
            if !p.has_generator(g) {
                return Err(usage(format!("--pairs: unknown generator `{g}`")));
            }
        }
        wanted.push((a, b));
    }
    let expected = match (expect_virasoro, expect_builtin, expect_table) {
        (false, false, None) => None,
        (true, false, None) => Some(ModeTable::builtin("virasoro").expect("builtin table")),
        (false, true, None) => Some(
            common
                .builtin
                .first()
                .and_then(|n| ModeTable::builtin(n))
                .ok_or_else(|| usage("--expect-builtin: no closed forms are known for this algebra"))?,
        ),
        (false, false, Some(path)) => {
            Some(ModeTable::parse(&read_file(path)?).map_err(|e| parse_err(&path.display().to_string(), e))?)
        }
        _ => return Err(usage("choose at most one of --expect-virasoro, --expect-builtin and --expect-table")),
    };
    match expected {
        Some(mut table) => {
            if !wanted.is_empty() {
                table.entries.retain(|e| wanted.iter().any(|(a, b)| e.a.as_str() == a && e.b.as_str() == b));
                if table.entries.is_empty() {
                    return Err(usage("no closed form matches the requested pairs"));
                }
            }
            out.report = verify_weak_commutator(p, &table, win, conv).map_err(usage)?;
        }
        None => {
            if wanted.is_empty() {
                return Err(usage("modes needs --pairs or an expectation"));
            }
            for (a, b) in &wanted {
                let rows = mode_table(p, a, b, win, conv).map_err(usage)?;
                let (open, close) = if conv == Convention::Weight { ("{", "}") } else { ("(", ")") };
                let mut entries = Vec::new();
                for (n, m, v) in &rows {
                    out.lines.push(format!("[{a}_{open}{n}{close}, {b}_{open}{m}{close}] = {v}"));
                    entries.push(json!([n.to_string(), m.to_string(), v.to_string()]));
                }
                out.report.push(Check::pass(format!("[{a}, {b}]")).with_value(json!({ "entries": entries })));
            }
        }
    }
    Ok(out)
}

fn cmd_envelope_dims(common: &Common, max_weight: &Q, expect: &[usize]) -> Result<Output, Failure> {
    let l = load(common, true)?;
    let ctx = context(&l)?;
    let mut out = Output::from_loaded(&l);
    let dims = graded_dimension(&ctx, max_weight);
    let sym = symmetric_algebra_dimension(&ctx, max_weight);
    for (w, d) in &dims.dims {
        out.lines.push(format!("dim V_{w} = {d}"));
    }
    let weights = strings(dims.dims.iter().map(|(w, _)| w));
    let mut dims_check = Check::pass("dims");
    if !expect.is_empty() && dims.values() != expect {
        dims_check = Check::fail("dims", format!("expected {expect:?}, found {:?}", dims.values()));
    }
    out.report.push(dims_check.with_value(json!({ "weights": weights, "dims": dims.values() })));
    out.report.push(
        Check::from_bool("pbw-generating-function", dims == sym, || {
            format!("envelope {:?}, generating function {:?}", dims.values(), sym.values())
        })
        .with_value(json!({ "dims": sym.values() })),
    );
    Ok(out)
}

fn cmd_nproduct(common: &Common, a: &str, b: &str, n: i32) -> Result<Output, Failure> {
    let l = load(common, true)?;
    let ctx = context(&l)?;
    let mut out = Output::from_loaded(&l);
    let (x, y) = (state(&ctx, "--a", a)?, state(&ctx, "--b", b)?);
    let r = ctx.nth_product(&x, n, &y);
    let rendered = r.render(ctx.names());
    out.lines.push(format!("a_({n}) b = {rendered}"));
    out.report.push(Check::pass("nproduct").with_value(json!({
        "a": x.render(ctx.names()),
        "b": y.render(ctx.names()),
        "n": n,
        "result": rendered,
    })));
    Ok(out)
}

fn small_window(w: (i64, i64)) -> Result<(i32, i32), Failure> {
    let f = |v: i64| i32::try_from(v).map_err(|_| usage("window out of range"));
    Ok((f(w.0)?, f(w.1)?))
}

fn cmd_verify(
    common: &Common,
    max_weight: &Q,
    states: &[String],
    win: (i64, i64),
    skew: (i64, i64),
    samples: usize,
    seed: u64,
) -> Result<Output, Failure> {
    let l = load(common, true)?;
    let ctx = context(&l)?;
    let mut out = Output::from_loaded(&l);
    let pool = if states.is_empty() {
        pool(&ctx, max_weight)
    } else {
        states.iter().map(|s| state(&ctx, "--state", s)).collect::<Result<Vec<_>, _>>()?
    };
    out.lines.push(format!("pool of {} states", pool.len()));
    let windows = IdentityWindows { skew: small_window(skew)?, triple: small_window(win)?, recursion_samples: samples, seed };
    out.report = verify_identities(&ctx, &pool, &windows).map_err(usage)?;
    Ok(out)
}

fn cmd_c2(common: &Common, max_weight: &Q, expect: &[usize], commutative: bool) -> Result<Output, Failure> {
    let l = load(common, true)?;
    let ctx = context(&l)?;
    let mut out = Output::from_loaded(&l);
    let r = c2_quotient(&ctx, max_weight);
    let dims: Vec<usize> = r.dims().iter().map(|(_, d)| *d).collect();
    for w in &r.weights {
        out.lines.push(format!(
            "weight {}: dim V = {}, dim C2 = {}, quotient {}",
            w.weight,
            w.dim,
            w.c2_rank,
            w.quotient_basis.len()
        ));
    }
    let names = ctx.names();
    let basis = strings(r.basis.iter().map(|w| EnvElem::word(w.clone()).render(names)));
    let table = |entries: &[(usize, usize, EnvElem)]| -> Vec<serde_json::Value> {
        entries.iter().map(|(i, j, v)| json!([i, j, v.render(names)])).collect()
    };
    let mut dims_check = Check::pass("c2-dims");
    if !expect.is_empty() && dims != expect {
        dims_check = Check::fail("c2-dims", format!("expected {expect:?}, found {dims:?}"));
    }
    out.report.push(dims_check.with_value(json!({
        "weights": strings(r.weights.iter().map(|w| &w.weight)),
        "dims": dims,
        "basis": basis,
        "generic": r.generic,
    })));
    out.report.push(Check::pass("c2-product").with_value(json!({ "entries": table(&r.product) })));
    let nonzero: Vec<_> = r.bracket.iter().filter(|(_, _, v)| !v.is_zero()).cloned().collect();
    let bracket = if commutative && !nonzero.is_empty() {
        let (i, j, v) = &nonzero[0];
        Check::fail("c2-bracket", format!("{{{}, {}}} = {}", basis[*i], basis[*j], v.render(names)))
    } else {
        Check::pass("c2-bracket")
    };
    out.report.push(bracket.with_value(json!({ "nonzero": table(&nonzero) })));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_zhu(
    common: &Common,
    max_weight: i64,
    o_bound: Option<i64>,
    win: (i64, i64),
    assoc: (i64, i64),
    central: Option<&str>,
    reduce: Option<&str>,
    affine_degree: Option<usize>,
) -> Result<Output, Failure> {
    let l = load(common, true)?;
    let ctx = context(&l)?;
    let mut out = Output::from_loaded(&l);
    let bound = o_bound.unwrap_or(2 * max_weight);
    let pool = pool(&ctx, &Q::int(max_weight));
    let central = central.map(|s| state(&ctx, "--central", s)).transpose()?;
    let checks = ZhuChecks { shift: win, assoc: Some(assoc), central };
    out.lines.push(format!("pool of {} states, O-span bound {bound}", pool.len()));
    out.report = check_zhu_relations(&ctx, &pool, bound, &checks).map_err(usage)?;
    if let Some(text) = reduce {
        let x = state(&ctx, "--reduce", text)?;
        let class = zhu_reduce(&ctx, &x, bound).map_err(usage)?;
        let rep = class.representative.render(ctx.names());
        out.lines.push(format!("[{}] = [{rep}]", x.render(ctx.names())));
        out.report.push(Check::pass("zhu-reduce").with_value(json!({
            "representative": rep,
            "status": class.status,
            "multiplier": class.multiplier.to_string(),
        })));
    }
    if let Some(d) = affine_degree {
        out.report.extend(affine_zhu_iso(&ctx, d).map_err(usage)?);
    }
    Ok(out)
}

fn cmd_coset(common: &Common, l_text: &str, sub: &str) -> Result<Output, Failure> {
    let l = load(common, false)?;
    let mut out = Output::from_loaded(&l);
    let (x, y) = (relem(&l.pres, "--l", l_text)?, relem(&l.pres, "--sub", sub)?);
    match catalog::coset_conformal(&l.pres, &x, &y) {
        Ok(r) => {
            out.lines.push(format!("L - L' = {}, central charge {}", r.coset_vector, r.central_charge));
            out.report = r.report;
            out.report.push(Check::pass("coset").with_value(json!({
                "coset_vector": r.coset_vector.to_string(),
                "central_charge": r.central_charge.to_string(),
            })));
        }
        Err(e) => out.report.push(Check::fail("coset", e.to_string())),
    }
    Ok(out)
}

fn cmd_chodos_thorn(common: &Common, l_text: &str, j: &str, expect: Option<&str>) -> Result<Output, Failure> {
    let l = load(common, false)?;
    let mut out = Output::from_loaded(&l);
    let (x, y) = (relem(&l.pres, "--l", l_text)?, relem(&l.pres, "--j", j)?);
    let want = expect.map(|e| relem(&l.pres, "--expect-charge", e)).transpose()?;
    match catalog::chodos_thorn(&l.pres, &x, &y) {
        Ok(r) => {
            out.lines.push(format!("L' = {}, central charge {}", r.shifted, r.central_charge));
            out.report = r.report;
            let value = json!({
                "shifted": r.shifted.to_string(),
                "k_j": r.k_j.to_string(),
                "central_charge": r.central_charge.to_string(),
            });
            let check = match want {
                Some(w) => Check::from_bool("central-charge", w == r.central_charge, || {
                    format!("central charge {}, expected {w}", r.central_charge)
                }),
                None => Check::pass("central-charge"),
            };
            out.report.push(check.with_value(value));
        }
        Err(e) => out.report.push(Check::fail("chodos-thorn", e.to_string())),
    }
    Ok(out)
}

fn cmd_griess(common: &Common) -> Result<Output, Failure> {
    let l = load(common, false)?;
    let mut out = Output::from_loaded(&l);
    match catalog::griess(&l.pres) {
        Ok(r) => {
            let basis = strings(&r.basis);
            let vectors: Vec<_> =
                r.virasoro_vectors.iter().map(|(v, c)| json!({ "vector": v.to_string(), "central_charge": c.to_string() })).collect();
            for (v, c) in &r.virasoro_vectors {
                out.lines.push(format!("Virasoro vector {v} with central charge {c}"));
            }
            out.report = r.report;
            out.report.push(Check::pass("griess").with_value(json!({
                "basis": basis,
                "idempotents": r.idempotents.iter().map(strings).collect::<Vec<_>>(),
                "virasoro_vectors": vectors,
            })));
        }
        Err(e) => out.report.push(Check::fail("griess", e.to_string())),
    }
    Ok(out)
}

fn cmd_morphism(
    common: &Common,
    to_builtin: Option<&str>,
    to_params: &[(String, String)],
    to_algebra: Option<&PathBuf>,
    map: &[(String, String)],
) -> Result<Output, Failure> {
    let l = load(common, false)?;
    let mut out = Output::from_loaded(&l);
    let target = match (to_builtin, to_algebra) {
        (Some(name), None) => build_builtins(&[name.to_string()], to_params)?,
        (None, Some(path)) => parse_algebra(&read_file(path)?)
            .map_err(|e| match e {
                super::InputError::Syntax(s) => parse_err(&path.display().to_string(), s),
                other => usage(other),
            })?
            .presentation,
        (None, None) => l.pres.clone(),
        _ => return Err(usage("choose one of --to-builtin and --to-algebra")),
    };
    let mut images = MorphismMap::new();
    for (k, v) in map {
        if !(l.pres.has_generator(k) || l.pres.has_central(k)) {
            return Err(usage(format!("--map {k}: not a generator or central element of {}", l.pres.name())));
        }
        images.insert(Symbol::new(k), relem(&target, &format!("--map {k}"), v)?);
    }
    out.algebra = format!("{} -> {}", l.pres.name(), target.name());
    out.report = check_morphism(&l.pres, &target, &images).map_err(usage)?;
    Ok(out)
}

fn cmd_binomial(max: u32) -> Output {
    let r = check_binomial_identities(max, max);
    let mut out = Output::new("-");
    let check = match r.failures.first() {
        None => Check::pass("binomial-identities"),
        Some(f) => Check::fail(
            "binomial-identities",
            format!("{} at n = {}, m = {}: {} != {}", f.identity, f.n, f.m, f.lhs, f.rhs),
        ),
    };
    out.report.push(check.with_value(json!({ "checked": r.checked, "failures": r.failures.len() })));
    out
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Modes { .. } => "modes",
        Command::EnvelopeDims { .. } => "envelope-dims",
        Command::Nproduct { .. } => "nproduct",
        Command::Verify { .. } => "verify",
        Command::C2 { .. } => "c2",
        Command::Zhu { .. } => "zhu",
        Command::Coset { .. } => "coset",
        Command::ChodosThorn { .. } => "chodos-thorn",
        Command::Griess { .. } => "griess",
        Command::Morphism { .. } => "morphism",
        Command::BinomialSelftest { .. } => "binomial-selftest",
    }
}

fn dispatch(c: &Command) -> Result<Output, Failure> {
    match c {
        Command::Check { common, conformal, samples, seed, detailed } => {
            cmd_check(common, conformal.as_deref(), *samples, *seed, *detailed)
        }
        Command::Modes { common, pairs, window, convention, expect_virasoro, expect_builtin, expect_table } => {
            let conv = match convention {
                ConventionArg::Weight => Convention::Weight,
                ConventionArg::T => Convention::T,
            };
            cmd_modes(common, pairs, *window, conv, *expect_virasoro, *expect_builtin, expect_table.as_ref())
        }
        Command::EnvelopeDims { common, max_weight, expect } => cmd_envelope_dims(common, max_weight, expect),
        Command::Nproduct { common, a, b, n } => cmd_nproduct(common, a, b, *n),
        Command::Verify { common, max_weight, states, window, skew_window, samples, seed } => {
            cmd_verify(common, max_weight, states, *window, *skew_window, *samples, *seed)
        }
        Command::C2 { common, max_weight, expect, expect_commutative } => {
            cmd_c2(common, max_weight, expect, *expect_commutative)
        }
        Command::Zhu { common, max_weight, o_bound, window, assoc_window, central, reduce, affine_degree } => cmd_zhu(
            common,
            *max_weight,
            *o_bound,
            *window,
            *assoc_window,
            central.as_deref(),
            reduce.as_deref(),
            *affine_degree,
        ),
        Command::Coset { common, l, sub } => cmd_coset(common, l, sub),
        Command::ChodosThorn { common, l, j, expect_charge } => cmd_chodos_thorn(common, l, j, expect_charge.as_deref()),
        Command::Griess { common } => cmd_griess(common),
        Command::Morphism { common, to_builtin, to_params, to_algebra, map } => {
            cmd_morphism(common, to_builtin.as_deref(), to_params, to_algebra.as_ref(), map)
        }
        Command::BinomialSelftest { max, .. } => Ok(cmd_binomial(*max)),
    }
}

fn format_of(c: &Command) -> Format {
    match c {
        Command::Check { common, .. }
        | Command::Modes { common, .. }
        | Command::EnvelopeDims { common, .. }
        | Command::Nproduct { common, .. }
        | Command::Verify { common, .. }
        | Command::C2 { common, .. }
        | Command::Zhu { common, .. }
        | Command::Coset { common, .. }
        | Command::ChodosThorn { common, .. }
        | Command::Griess { common }
        | Command::Morphism { common, .. } => common.format,
        Command::BinomialSelftest { format, .. } => *format,
    }
}

fn params_of(c: &Command) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let common = match c {
        Command::Check { common, .. }
        | Command::Modes { common, .. }
        | Command::EnvelopeDims { common, .. }
        | Command::Nproduct { common, .. }
        | Command::Verify { common, .. }
        | Command::C2 { common, .. }
        | Command::Zhu { common, .. }
        | Command::Coset { common, .. }
        | Command::ChodosThorn { common, .. }
        | Command::Griess { common }
        | Command::Morphism { common, .. } => common,
        Command::BinomialSelftest { .. } => return out,
    };
    for (k, v) in common.params.iter().chain(&common.set) {
        out.insert(k.clone(), v.clone());
    }
    out
}

fn render_text(command: &str, out: &Output, ms: u128) -> String {
    let mut s = format!("{command}: {}\n", out.algebra);
    for line in &out.lines {
        s.push_str(&format!("  {line}\n"));
    }
    for c in &out.report.checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        s.push_str(&format!("  {status}  {}", c.name));
        if let Some(w) = &c.witness {
            s.push_str(&format!(": {w}"));
        }
        s.push('\n');
        if out.lines.is_empty() {
            if let Some(v) = &c.value {
                s.push_str(&format!("        {v}\n"));
            }
        }
    }
    let failed = out.report.failures().count();
    s.push_str(&format!("{} checks, {failed} failed ({ms} ms)\n", out.report.checks.len()));
    s
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns its exit code and output: 0 if every check passes, 1 if one
/// fails, 2 on usage errors and 3 on parse errors.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_PASS, stdout: text, stderr: String::new() }
            };
        }
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    let out = match dispatch(&cli.command) {
        Ok(out) => out,
        Err(Failure::Usage(m)) => {
            return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") }
        }
        Err(Failure::Parse(m)) => {
            return Outcome { code: EXIT_PARSE, stdout: String::new(), stderr: format!("parse error: {m}\n") }
        }
    };
    let ms = start.elapsed().as_millis();
    let stderr: String = out.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    let stdout = match format_of(&cli.command) {
        Format::Text => render_text(name, &out, ms),
        Format::Json => {
            let doc = json!({
                "command": name,
                "algebra": out.algebra,
                "params": params_of(&cli.command),
                "results": out.report.checks,
                "timing_ms": ms as u64,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("reports serialize"))
        }
    };
    let code = if out.report.passed() { EXIT_PASS } else { EXIT_FAIL };
    Outcome { code, stdout, stderr }
}

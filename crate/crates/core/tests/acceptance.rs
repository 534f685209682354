//! Acceptance suite: one PASS/FAIL line per criterion, each with a time limit.
//! Expected values come from independent closed forms computed here.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use vertexlie::catalog;
use vertexlie::cli::render_algebra;
use vertexlie::envelope::{
    basis_by_weight, c2_quotient, graded_dimension, symmetric_algebra_dimension, verify_identities, EnvContext,
    EnvElem, IdentityWindows,
};
use vertexlie::modes::{mode_bracket, verify_weak_commutator, Convention, ModeExpr, ModeTable};
use vertexlie::symbolic::{check_binomial_identities, Q, Scalar, Symbol};
use vertexlie::vlie::{check_identities, check_morphism, from_products, CheckOptions, MorphismMap, RElem};
use vertexlie::zhu::{affine_zhu_iso, check_zhu_relations, ZhuChecks};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn vir_ctx() -> EnvContext {
    EnvContext::new(&catalog::virasoro(), &BTreeMap::new()).unwrap()
}

fn heis_ctx() -> EnvContext {
    let p = catalog::build("heisenberg", &BTreeMap::new()).unwrap();
    EnvContext::new(&p, &[(Symbol::new("k"), Scalar::int(1))].into()).unwrap()
}

fn pool(ctx: &EnvContext, h: i64) -> Vec<EnvElem> {
    basis_by_weight(ctx, &Q::int(h)).into_iter().flatten().map(EnvElem::word).collect()
}

fn gen(name: &str) -> RElem {
    RElem::gen(name)
}

/// Partitions of `n` into parts of size at least `min`.
fn partitions(n: usize, min: usize) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for part in min..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

fn criterion_1() -> Outcome {
    let all = catalog::all_default();
    ensure(all.len() == 10, || format!("{} catalog algebras", all.len()))?;
    for p in &all {
        let r = check_identities(p, &CheckOptions::default());
        ensure(r.skew_ok && r.jacobi_ok && r.passed(), || format!("{} fails", p.name()))?;
    }
    Ok(())
}

fn expr(terms: &[(&str, Q, Scalar)], centrals: &[(&str, Scalar)]) -> ModeExpr {
    let mut e = ModeExpr::zero(Convention::Weight);
    for (g, n, s) in terms {
        e.add_mode(Symbol::new(g), n.clone(), s.clone());
    }
    for (z, s) in centrals {
        e.add_central(Symbol::new(z), s.clone());
    }
    e
}

fn compare(p: &vertexlie::vlie::Presentation, a: &str, n: &Q, b: &str, m: &Q, want: ModeExpr) -> Outcome {
    let got = mode_bracket(p, (a, n), (b, m), Convention::Weight).map_err(|e| e.to_string())?;
    ensure(got == want, || format!("[{a}_{n}, {b}_{m}] = {got}, expected {want}"))
}

fn criterion_2() -> Outcome {
    let ints: Vec<Q> = (-4..=4).map(Q::int).collect();
    let halves: Vec<Q> = (-7..=7).step_by(2).map(|k| Q::new(k, 2)).collect();
    let qs = |q: &Q| Scalar::from_q(q.clone());
    let delta = |n: &Q, m: &Q| (n + m).is_zero();
    let vir = catalog::virasoro();
    let ns = catalog::neveu_schwarz();
    let top = catalog::topological();
    for n in &ints {
        for m in &ints {
            let c = (&(&n.pow(3) - n) / &Q::int(12)).clone();
            let cent = if delta(n, m) { vec![("c", qs(&c))] } else { vec![] };
            compare(&vir, "L", n, "L", m, expr(&[("L", n + m, qs(&(n - m)))], &cent))?;
            compare(&ns, "L", n, "L", m, expr(&[("L", n + m, qs(&(n - m)))], &cent))?;
            // [Q_n, G_m] = L_{n+m} + n J_{n+m} + (n^2 - n)/2 δ d
            let d = &(&n.pow(2) - n) / &Q::int(2);
            let cent = if delta(n, m) { vec![("d", qs(&d))] } else { vec![] };
            compare(&top, "Q", n, "G", m, expr(&[("L", n + m, Scalar::one()), ("J", n + m, qs(n))], &cent))?;
        }
        for m in &halves {
            // [L_n, G_m] = (n/2 - m) G_{n+m}
            let coeff = &(n / &Q::int(2)) - m;
            compare(&ns, "L", n, "G", m, expr(&[("G", n + m, qs(&coeff))], &[]))?;
        }
    }
    for n in &halves {
        for m in &halves {
            // [G_n, G_m] = 2 L_{n+m} + (4n^2 - 1)/12 δ c
            let c = &(&(&Q::int(4) * &n.pow(2)) - &Q::one()) / &Q::int(12);
            let cent = if delta(n, m) { vec![("c", qs(&c))] } else { vec![] };
            compare(&ns, "G", n, "G", m, expr(&[("L", n + m, Scalar::int(2))], &cent))?;
        }
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let known_vir = [1, 0, 1, 1, 2, 2, 4, 4, 7];
    let known_heis = [1, 1, 2, 3, 5, 7, 11];
    for (ctx, h_max, min_part, known) in
        [(vir_ctx(), 8, 2, &known_vir[..]), (heis_ctx(), 6, 1, &known_heis[..])]
    {
        let dims = graded_dimension(&ctx, &Q::int(h_max)).values();
        let sym = symmetric_algebra_dimension(&ctx, &Q::int(h_max)).values();
        let oracle: Vec<usize> = (0..=h_max as usize).map(|h| partitions(h, min_part)).collect();
        ensure(dims == known && sym == known && oracle == known, || {
            format!("dims {dims:?}, generating function {sym:?}, partitions {oracle:?}, expected {known:?}")
        })?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let names = [
        "skew-symmetry",
        "commutator",
        "associativity",
        "jacobi",
        "left-wick",
        "right-wick",
        "quasi-associativity",
        "pre-lie",
        "lie-bracket",
        "fundamental-recursion",
    ];
    for ctx in [vir_ctx(), heis_ctx()] {
        let states = pool(&ctx, 5);
        let windows = IdentityWindows { skew: (-3, 3), triple: (-2, 2), recursion_samples: 50, seed: 1 };
        let r = verify_identities(&ctx, &states, &windows).map_err(|e| e.to_string())?;
        let fail = r.failures().next().map(|c| format!("{}: {:?}", c.name, c.witness));
        ensure(r.passed(), || fail.unwrap_or_default())?;
        for n in names {
            ensure(r.get(n).is_some(), || format!("missing check {n}"))?;
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let ctx = heis_ctx();
    let j = ctx.generator_state("J").unwrap();
    let jj = ctx.nth_product(&j, -1, &j);
    let lhs = ctx.nth_product(&jj, -1, &j).minus(&ctx.nth_product(&j, -1, &jj));
    // T²(J_(-1)|0⟩) = 2 J_(-3)|0⟩
    let g = ctx.generator_index("J").unwrap();
    let want = ctx.apply_mode(g, -3, &EnvElem::vacuum()).times(&Scalar::int(2));
    ensure(lhs == want && want == ctx.translate(&ctx.translate(&j)), || {
        format!("(JJ)J - J(JJ) = {}", lhs.render(ctx.names()))
    })
}

fn criterion_6() -> Outcome {
    for p in [catalog::virasoro(), catalog::neveu_schwarz(), catalog::n2(), catalog::topological()] {
        let r = catalog::conformal_analysis(&p, &gen("L")).map_err(|e| e.to_string())?;
        ensure(r.is_conformal && r.report.passed(), || format!("L is not conformal in {}", p.name()))?;
    }
    let n2 = catalog::n2();
    let ct = catalog::chodos_thorn(&n2, &gen("L"), &gen("J").times(&Scalar::rational(1, 2))).map_err(|e| e.to_string())?;
    ensure(ct.central_charge.is_zero() && ct.report.passed(), || format!("c' = {}", ct.central_charge))?;
    let half = Scalar::rational(1, 2);
    let twist: MorphismMap = [
        (Symbol::new("L"), gen("L").minus(&RElem::t_gen("J", 1).times(&half))),
        (Symbol::new("Gp"), gen("Q").times(&Scalar::int(2))),
        (Symbol::new("Gm"), gen("G")),
        (Symbol::new("J"), gen("J")),
        (Symbol::new("c"), RElem::central("d").times(&Scalar::int(3))),
    ]
    .into();
    let r = check_morphism(&n2, &catalog::topological(), &twist).map_err(|e| e.to_string())?;
    ensure(r.passed(), || "twist is not a morphism".to_string())?;
    let mirror: MorphismMap = [
        (Symbol::new("L"), gen("L")),
        (Symbol::new("Gp"), gen("Gm")),
        (Symbol::new("Gm"), gen("Gp")),
        (Symbol::new("J"), gen("J").times(&Scalar::int(-1))),
        (Symbol::new("c"), RElem::central("c")),
    ]
    .into();
    let r = check_morphism(&n2, &n2, &mirror).map_err(|e| e.to_string())?;
    ensure(r.passed(), || "mirror is not a morphism".to_string())?;
    // the mirror is an involution
    let twice: Vec<RElem> = mirror.values().map(|x| vertexlie::vlie::apply_morphism(&mirror, x)).collect();
    let ids: Vec<RElem> = mirror.keys().map(|k| if k.as_str() == "c" { RElem::central("c") } else { gen(k.as_str()) }).collect();
    ensure(twice == ids, || "mirror squared is not the identity".to_string())
}

fn criterion_7() -> Outcome {
    let ctx = vir_ctx();
    let r = c2_quotient(&ctx, &Q::int(6));
    let dims: Vec<usize> = r.dims().iter().map(|(_, d)| *d).collect();
    // V/C2 is spanned by the powers of L_(-1)|0⟩, one in each even weight
    let oracle: Vec<usize> = (0..=6).map(|h| usize::from(h % 2 == 0)).collect();
    ensure(dims == oracle, || format!("dims {dims:?}, expected {oracle:?}"))?;
    ensure(r.bracket.iter().all(|(_, _, v)| v.is_zero()), || "nonzero bracket on V/C2".to_string())
}

fn criterion_8() -> Outcome {
    let vir = vir_ctx();
    let central = Some(vir.generator_state("L").unwrap());
    let opts = ZhuChecks { shift: (-3, 0), assoc: Some((-2, -1)), central };
    let r = check_zhu_relations(&vir, &pool(&vir, 4), 8, &opts).map_err(|e| e.to_string())?;
    for name in ["zhu-shift", "zhu-commutator", "zhu-central"] {
        ensure(r.get(name).is_some_and(|c| c.passed()), || format!("virasoro {name}: {:?}", r.get(name)))?;
    }
    let heis = heis_ctx();
    let opts = ZhuChecks { shift: (-3, 0), assoc: None, central: None };
    let r = check_zhu_relations(&heis, &pool(&heis, 4), 8, &opts).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("heisenberg: {:?}", r.failures().next()))?;
    let params: BTreeMap<String, String> = [("g".to_string(), "sl2".to_string())].into();
    let affine = catalog::build("affine", &params).unwrap();
    let ctx = EnvContext::new(&affine, &BTreeMap::new()).unwrap();
    ensure(ctx.specialization().is_empty() || !ctx.specialization().values().all(|s| s.is_constant()), || {
        "level is not symbolic".to_string()
    })?;
    let r = affine_zhu_iso(&ctx, 2).map_err(|e| e.to_string())?;
    let words = r.get("alpha-injective").and_then(|c| c.value.clone()).map(|v| v["words"].clone());
    // PBW words of degree ≤ 2 in three generators: 1 + 3 + 6
    ensure(r.passed() && words == Some(serde_json::json!(10)), || format!("affine: {:?}", r.failures().next()))
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn binom_i(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_9() -> Outcome {
    let r = check_binomial_identities(12, 12);
    ensure(r.passed() && r.checked > 0, || format!("{:?}", r.failures.first()))?;
    // independent integer-fraction evaluation of both identities
    for n in 0..=12i128 {
        for m in 1..=12i128 {
            let (mut num, mut den) = (0i128, 1i128);
            for i in 0..=n {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let (a, b) = (sign * binom_i(n, i), m + i);
                num = num * b + a * den;
                den *= b;
                let g = gcd(num, den);
                (num, den) = (num / g, den / g);
            }
            let fact: i128 = (1..=n).product();
            let prod: i128 = (0..=n).map(|i| m + i).product();
            ensure(num * prod == fact * den, || format!("first identity at n={n}, m={m}"))?;
        }
        for m in 0..=12i128 {
            let s: i128 = (0..=n)
                .map(|i| if i % 2 == 0 { 1 } else { -1 } * binom_i(m + i, i) * binom_i(m + n + 1, n - i))
                .sum();
            ensure(s == 1, || format!("second identity at n={n}, m={m}"))?;
        }
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_vertexlie")).args(args).output().expect("run binary").status.code().unwrap_or(-1)
}

fn criterion_10() -> Outcome {
    let vir = catalog::virasoro();
    let good = vir.entry("L", "L");
    let c = RElem::central("c").times(&Scalar::rational(1, 2));
    let bad_value = from_products([
        (0, RElem::t_gen("L", 1)),
        (1, gen("L").times(&Scalar::int(3))),
        (3, c),
    ]);
    ensure(bad_value != good, || "corruption had no effect".to_string())?;
    let bad = vir.with_entry_unchecked("L", "L", bad_value);
    let r = check_identities(&bad, &CheckOptions::default());
    ensure(!r.skew_ok, || "corrupted Virasoro passes skew-symmetry".to_string())?;
    let table = ModeTable::parse("[L_n, L_m] = (n - m + 1) L_{n+m} + (n^3 - n)/12 delta(n+m) c").unwrap();
    let report = verify_weak_commutator(&vir, &table, (-4, 4), Convention::Weight).map_err(|e| e.to_string())?;
    let mismatches = report.checks[0].value.as_ref().map(|v| v["mismatches"].as_array().map_or(0, Vec::len));
    ensure(!report.passed() && mismatches.unwrap_or(0) > 0, || "corrupted table has no mismatches".to_string())?;

    let dir = std::env::temp_dir().join(format!("vertexlie-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let alg = dir.join("bad.alg");
    let tbl = dir.join("bad.tbl");
    std::fs::write(&alg, render_algebra(&bad)).map_err(|e| e.to_string())?;
    std::fs::write(&tbl, "[L_n, L_m] = (n - m + 1) L_{n+m} + (n^3 - n)/12 delta(n+m) c").map_err(|e| e.to_string())?;
    let (alg_s, tbl_s) = (alg.to_string_lossy().to_string(), tbl.to_string_lossy().to_string());
    let codes = [
        run_cli(&["check", "--algebra", &alg_s]),
        run_cli(&["modes", "--builtin", "virasoro", "--expect-table", &tbl_s]),
        run_cli(&["check", "--builtin", "virasoro"]),
        run_cli(&["modes", "--builtin", "virasoro", "--pairs", "L,L", "--expect-virasoro"]),
    ];
    let _ = std::fs::remove_dir_all(&dir);
    ensure(codes == [1, 1, 0, 0], || format!("CLI exit codes {codes:?}, expected [1, 1, 0, 0]"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("catalog skew-symmetry and Jacobi", criterion_1, 5),
        ("mode tables", criterion_2, 2),
        ("PBW dimensions", criterion_3, 5),
        ("field identity suite", criterion_4, 60),
        ("quasi-associativity witness", criterion_5, 1),
        ("conformal structure", criterion_6, 2),
        ("C2 quotient", criterion_7, 10),
        ("Zhu suite", criterion_8, 30),
        ("binomial identities", criterion_9, 1),
        ("negative controls", criterion_10, 30),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let verdict = match (&result, elapsed <= Duration::from_secs(*limit)) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over the {limit} s limit)"),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {verdict} [{:.3} s]", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

use super::*;
use proptest::prelude::*;
use crate::catalog;
use crate::vlie::{check_identities, CheckOptions};

const VIRASORO: &str = "algebra virasoro {
  generator L : even, weight 2;
  central c;
  bracket L L = T L + 2 L l + 1/2 c l^(3);
}";

#[test]
fn virasoro_file_matches_the_catalog() {
    let f = parse_algebra(VIRASORO).unwrap();
    assert_eq!(f.presentation.entry("L", "L"), catalog::virasoro().entry("L", "L"));
    assert_eq!(f.presentation, catalog::virasoro());
    assert!(f.warnings.is_empty());
}

#[test]
fn empty_algebra_is_valid() {
    let f = parse_algebra("algebra empty { }").unwrap();
    assert!(f.presentation.generators().is_empty());
    assert!(check_identities(&f.presentation, &CheckOptions::default()).passed());
}

#[test]
fn malformed_bracket_points_at_the_equals_sign() {
    let text = "algebra v {\n  generator L : even, weight 2;\n  bracket L = T L;\n}";
    match parse_algebra(text) {
        Err(InputError::Syntax(e)) => assert_eq!((e.line, e.col), (3, 13)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn rejects_bad_files() {
    let cases = [
        ("algebra v { generator L : even, weight 2; bracket L L = T L + 2 L l^2; }", "plain powers"),
        ("algebra v { generator L : even, weight 2; bracket L L = T X; }", "unknown symbol `X`"),
        ("algebra v { generator L : even, weight 2; central c; bracket L L = c L l; }", "only one generator"),
        ("algebra v { generator L : even, weight 2; bracket L L = 3; }", "no generator"),
        ("algebra v { generator L : even, weight 2; bracket L M = 0; }", "`M` is not a declared generator"),
        ("algebra v { generator L : even, weight 2; generator L : odd, weight 1; }", "declared twice"),
        ("algebra v { generator T : even, weight 2; }", "reserved"),
        ("algebra v { generator L even, weight 2; }", "expected `:`"),
        ("algebra v { generator L : even, weight 2 central c; }", "expected `;`"),
    ];
    for (text, needle) in cases {
        let err = parse_algebra(text).unwrap_err().to_string();
        assert!(err.contains(needle), "{text}: {err}");
    }
    // inhomogeneous term: L l^(1) in [L_l L] has weight 2, T L l would have weight 3
    let err = parse_algebra("algebra v { generator L : even, weight 2; bracket L L = T L l; }").unwrap_err();
    assert!(matches!(err, InputError::Invalid(VlieError::Inhomogeneous { .. })), "{err}");
    let err = parse_algebra("algebra v { generator G : odd, weight 1; generator J : even, weight 1; bracket J J = G; }")
        .unwrap_err();
    assert!(matches!(err, InputError::Invalid(_)), "{err}");
}

#[test]
fn divided_powers_multiply_with_binomials() {
    let f = parse_algebra(VIRASORO).unwrap();
    let p = &f.presentation;
    // T T L = 2 T^(2) L, l l = 2 l^(2)
    assert_eq!(parse_relem(p, "T T L").unwrap(), RElem::t_gen("L", 2).times(&Scalar::int(2)));
    assert_eq!(parse_lambda_poly(p, "c l l").unwrap(), parse_lambda_poly(p, "2 c l^(2)").unwrap());
    // T kills central elements
    assert!(parse_relem(p, "T c").unwrap().is_zero());
    assert!(parse_relem(p, "L l").is_err());
}

#[test]
fn params_and_scalar_groups() {
    let text = "algebra h { generator J : even, weight 1; central k; param q;
        bracket J J = (q^2 - 1/3) k l - q/2 k l; }";
    let p = parse_algebra(text).unwrap().presentation;
    let q = Scalar::param("q");
    let want = &(&q.pow(2) - &Scalar::rational(1, 3)) - &q.scale(&Q::new(1, 2));
    assert_eq!(p.entry("J", "J").coeff_of(Var::Lambda, 1), RElem::central("k").times(&want));
    assert!(parse_algebra("algebra h { generator J : even, weight 1; bracket J J = (J) l; }").is_err());
}

#[test]
fn synthesized_orientations_warn() {
    let text = "algebra h { generator a, b : even, weight 1; central k; bracket a b = k l; }";
    let f = parse_algebra(text).unwrap();
    assert_eq!(f.warnings.len(), 1);
    assert_eq!(f.presentation.entry("b", "a"), f.presentation.entry("a", "b"));
}

#[test]
fn settings_are_recorded() {
    let f = parse_algebra("algebra v { generator L : even, weight 2; central c; set c = -1/2; }").unwrap();
    assert_eq!(f.settings[&Symbol::new("c")], Scalar::rational(-1, 2));
    assert!(parse_algebra("algebra v { central c; set d = 1; }").is_err());
}

#[test]
fn catalog_round_trips() {
    let mut all = catalog::all_default();
    let vir = catalog::virasoro();
    all.push(catalog::product(&[(&vir, "1"), (&vir, "2")]).unwrap());
    for p in all {
        let text = render_algebra(&p);
        let f = parse_algebra(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", p.name()));
        assert_eq!(f.presentation, p, "{text}");
        assert_eq!(render_algebra(&f.presentation), text);
    }
}

#[test]
fn states() {
    let p = catalog::virasoro();
    let ctx = EnvContext::new(&p, &[(Symbol::new("c"), Scalar::rational(1, 2))].into()).unwrap();
    let l = ctx.generator_state("L").unwrap();
    assert_eq!(parse_state(&ctx, "L").unwrap(), l);
    assert_eq!(parse_state(&ctx, "L_{-2}|0>").unwrap(), l);
    assert_eq!(parse_state(&ctx, "L_(-1) |0>").unwrap(), l);
    assert_eq!(parse_state(&ctx, "|0>").unwrap(), EnvElem::vacuum());
    let g = ctx.generator_index("L").unwrap();
    let ll = ctx.apply_mode(g, -1, &l);
    assert_eq!(parse_state(&ctx, "2 c L_{-2} L_{-2}|0> - L").unwrap(), ll.minus(&l));
    assert_eq!(parse_state(&ctx, "1/2 * L_(-1)*L_(-1)|0>").unwrap(), ll.times(&Scalar::rational(1, 2)));
    for bad in ["L L", "L_{-2}", "X_(1)|0>", "L_{1/2}|0>", "T L", "L_(-1)|0> +"] {
        assert!(parse_state(&ctx, bad).is_err(), "{bad}");
    }
}

fn arb_lambda_poly() -> impl Strategy<Value = LambdaPoly> {
    let gens = ["Gm", "Gp", "J", "L"];
    let term = (0usize..5, 0u16..3, 0u16..4, -6i64..7, 1i64..5, 0u32..3);
    proptest::collection::vec(term, 0..6).prop_map(move |terms| {
        let mut out = LambdaPoly::zero();
        for (g, t, l, num, den, cpow) in terms {
            let s = Scalar::rational(num, den);
            let x = if g == 4 {
                RElem::central("c").times(&s)
            } else {
                RElem::t_gen(gens[g], t).times(&(&s * &Scalar::param("q").pow(cpow)))
            };
            out.add_term(Exps::single(Var::Lambda, l), x);
        }
        out
    })
}

proptest! {
    #[test]
    fn rendered_brackets_parse_back(v in arb_lambda_poly()) {
        let text = v.to_string();
        let lookup = |id: &str| match id {
            "Gm" | "Gp" | "J" | "L" => Some(Name::Generator),
            "c" => Some(Name::Central),
            "q" => Some(Name::Scalar(Scalar::param("q"))),
            _ => None,
        };
        let mut cur = Cursor::new(&text).unwrap();
        let back = parse_lambda_sum(&mut cur, &Scope { lookup: &lookup, allow_lambda: true }).unwrap();
        prop_assert!(cur.at_eof());
        prop_assert_eq!(back, v);
    }
}

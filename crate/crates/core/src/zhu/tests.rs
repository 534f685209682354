use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::catalog;
use crate::symbolic::Symbol;

fn vir() -> EnvContext {
    EnvContext::new(&catalog::virasoro(), &BTreeMap::new()).unwrap()
}

fn heis() -> EnvContext {
    let p = catalog::build("heisenberg", &BTreeMap::new()).unwrap();
    EnvContext::new(&p, &[(Symbol::new("k"), Scalar::int(1))].into()).unwrap()
}

fn affine(g: &str) -> EnvContext {
    let params: BTreeMap<String, String> = [("g".to_string(), g.to_string())].into();
    EnvContext::new(&catalog::build("affine", &params).unwrap(), &BTreeMap::new()).unwrap()
}

fn states(ctx: &EnvContext, h: i64) -> Vec<EnvElem> {
    basis_by_weight(ctx, &Q::int(h)).into_iter().flatten().map(EnvElem::word).collect()
}

fn gen(ctx: &EnvContext, name: &str) -> EnvElem {
    ctx.generator_state(name).unwrap()
}

#[test]
fn vacuum_is_a_unit() {
    let ctx = vir();
    let one = EnvElem::vacuum();
    for a in states(&ctx, 5) {
        assert_eq!(zhu_product(&ctx, &one, &a).unwrap(), a);
        assert_eq!(zhu_product(&ctx, &a, &one).unwrap(), a);
    }
}

#[test]
fn abelian_current_product() {
    // J ∗ J = J_(-1) J + binom(1,1) J_(0) J, and J_(0) J = 0
    let ctx = heis();
    let j = gen(&ctx, "J");
    let want = ctx.nth_product(&j, -1, &j);
    assert_eq!(zhu_product(&ctx, &j, &j).unwrap(), want);
    assert!(ctx.nth_product(&j, 0, &j).is_zero());
}

#[test]
fn shift_relation_for_virasoro() {
    let ctx = vir();
    let l = gen(&ctx, "L");
    // (T + H)(L) ∗ L = L ∗_{-2} L
    let th = ctx.translate(&l).plus(&l.times(&Scalar::int(2)));
    assert_eq!(zhu_product(&ctx, &th, &l).unwrap(), zhu_product_n(&ctx, &l, -2, &l).unwrap());
}

#[test]
fn rejects_bad_input() {
    let ctx = vir();
    let mixed = gen(&ctx, "L").plus(&EnvElem::vacuum());
    assert!(matches!(zhu_product_n(&ctx, &mixed, -1, &mixed), Err(ZhuError::Inhomogeneous(_))));
    let ns = EnvContext::new(&catalog::neveu_schwarz(), &BTreeMap::new()).unwrap();
    assert_eq!(OSpan::new(&ns, 3).err(), Some(ZhuError::NonIntegralWeights));
    assert!(matches!(affine_zhu_iso(&ctx, 2), Err(ZhuError::NotAffine(_))));
}

#[test]
fn reduce_examples() {
    let ctx = vir();
    let l = gen(&ctx, "L");
    // (T + H) L = L ∗_{-2} 1 lies in O(V)
    let th = ctx.translate(&l).plus(&l.times(&Scalar::int(2)));
    let r = zhu_reduce(&ctx, &th, 3).unwrap();
    assert_eq!(r.status, ZhuStatus::Reduced);
    // the vacuum survives
    let r = zhu_reduce(&ctx, &EnvElem::vacuum(), 6).unwrap();
    assert_eq!(r.status, ZhuStatus::BoundLimited);
    assert_eq!(r.representative, EnvElem::vacuum());
    // with a bound too small to see L ∗_{-2} 1, nothing reduces
    assert_eq!(zhu_reduce(&ctx, &th, 2).unwrap().status, ZhuStatus::BoundLimited);
}

#[test]
fn o_span_contains_its_generators() {
    for ctx in [vir(), heis()] {
        let bound = 5;
        let span = OSpan::new(&ctx, bound).unwrap();
        let basis = states(&ctx, bound - 1);
        for a in &basis {
            for b in &basis {
                let (ha, hb) = (ctx.weight(a).unwrap().floor(), ctx.weight(b).unwrap().floor());
                if ha + hb + 1 > bound {
                    continue;
                }
                let x = zhu_product_n(&ctx, a, -2, b).unwrap();
                assert!(span.reduce(&x, &ctx).is_zero());
                // V ∗_{-3} V ⊆ V ∗_{-2} V
                if ha + hb + 2 <= bound {
                    let y = zhu_product_n(&ctx, a, -3, b).unwrap();
                    assert!(span.reduce(&y, &ctx).is_zero(), "{}", y.render(ctx.names()));
                }
            }
        }
    }
}

#[test]
fn relations_on_virasoro() {
    let ctx = vir();
    let pool = states(&ctx, 4);
    let opts = ZhuChecks { central: Some(gen(&ctx, "L")), ..ZhuChecks::default() };
    let r = check_zhu_relations(&ctx, &pool, 8, &opts).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert_eq!(r.checks.len(), 4);
}

#[test]
fn relations_on_heisenberg() {
    let ctx = heis();
    let pool = states(&ctx, 3);
    let opts = ZhuChecks { assoc: Some((-1, -1)), ..ZhuChecks::default() };
    let r = check_zhu_relations(&ctx, &pool, 6, &opts).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn relations_detect_a_wrong_bound() {
    // without O-span elements the commutator congruence cannot be certified
    let ctx = vir();
    let pool = vec![gen(&ctx, "L"), ctx.translate(&gen(&ctx, "L"))];
    let opts = ZhuChecks { assoc: None, ..ZhuChecks::default() };
    let r = check_zhu_relations(&ctx, &pool, 0, &opts).unwrap();
    assert!(r.get("zhu-shift").unwrap().passed());
    assert!(!r.get("zhu-commutator").unwrap().passed());
}

#[test]
fn affine_commutator_is_the_bracket() {
    // e ∗ h - h ∗ e ≡ e_(0) h = [e, h] = -2 e
    let ctx = affine("sl2");
    let (e, h) = (gen(&ctx, "e"), gen(&ctx, "h"));
    let x = zhu_product(&ctx, &e, &h).unwrap().minus(&zhu_product(&ctx, &h, &e).unwrap());
    let want = e.times(&Scalar::int(-2));
    assert_eq!(ctx.nth_product(&e, 0, &h), want);
    assert!(zhu_reduce(&ctx, &x.minus(&want), 3).unwrap().is_zero());
    // the opposite sign is not a congruence
    assert!(!zhu_reduce(&ctx, &x.plus(&want), 3).unwrap().is_zero());
    // nor is the commutator without its correction term
    assert!(!zhu_reduce(&ctx, &x, 3).unwrap().is_zero());
}

#[test]
fn affine_isomorphism() {
    let ctx = affine("sl2");
    let r = affine_zhu_iso(&ctx, 2).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert_eq!(r.get("alpha-injective").unwrap().value.as_ref().unwrap()["words"], 10);
    let lie = LieData::from_context(&ctx).unwrap();
    // [e, h] = -2 e with generators ordered e, f, h
    assert_eq!(lie.bracket[0][2], vec![(0, Scalar::int(-2))]);
    let abelian = affine("abelian");
    assert!(affine_zhu_iso(&abelian, 3).unwrap().passed());
}

#[test]
fn beta_examples() {
    let ctx = affine("abelian");
    let lie = LieData::from_context(&ctx).unwrap();
    let j = ctx.generator_index("J").unwrap();
    // β(J_(-1) J_(-1)|0⟩) = (-1)^{2-2} J·J
    let jj = ctx.apply_mode(j, -1, &gen(&ctx, "J"));
    assert_eq!(beta(&lie, &jj), [(vec![j, j], Scalar::one())].into());
    assert_eq!(beta(&lie, &EnvElem::vacuum()), [(vec![], Scalar::one())].into());
    // β(J_(-2)|0⟩) = -J
    let t = ctx.translate(&gen(&ctx, "J"));
    assert_eq!(beta(&lie, &t), [(vec![j], Scalar::int(-1))].into());
}

#[test]
fn pbw_words_of_ug() {
    assert_eq!(u_pbw_words(3, 2).len(), 10);
    assert_eq!(u_pbw_words(1, 3), vec![vec![], vec![0], vec![0, 0], vec![0, 0, 0]]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn shift_relation_on_random_pairs(i in 0usize..12, j in 0usize..12, n in -4i64..2) {
        let ctx = heis();
        let pool = states(&ctx, 4);
        let (a, b) = (&pool[i], &pool[j]);
        let ha = ctx.weight(a).unwrap().floor();
        let lhs = zhu_product_graded(&ctx, &ctx.translate(a).plus(&a.times(&Scalar::int(ha + n + 1))), n, b).unwrap();
        let rhs = zhu_product_n(&ctx, a, n - 1, b).unwrap().times(&Scalar::int(-n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn zhu_product_is_linear(i in 0usize..7, j in 0usize..7, k in 0usize..7, c in -3i64..4) {
        let ctx = vir();
        let pool = states(&ctx, 5);
        let (a, b, d) = (&pool[i], &pool[j], &pool[k]);
        let lhs = zhu_product(&ctx, a, &b.plus(&d.times(&Scalar::int(c)))).unwrap();
        let rhs = zhu_product(&ctx, a, b).unwrap().plus(&zhu_product(&ctx, a, d).unwrap().times(&Scalar::int(c)));
        prop_assert_eq!(lhs, rhs);
    }
}

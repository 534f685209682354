use std::collections::BTreeMap;

use super::*;
use crate::catalog;
use crate::symbolic::{Q, Scalar, Symbol};

fn heis(k: i64) -> EnvContext {
    let p = catalog::build("heisenberg", &BTreeMap::new()).unwrap();
    EnvContext::new(&p, &[(Symbol::new("k"), Scalar::int(k))].into()).unwrap()
}

fn vir() -> EnvContext {
    EnvContext::new(&catalog::virasoro(), &BTreeMap::new()).unwrap()
}

fn m(g: u16, t: i32) -> Mode {
    Mode { t, g }
}

fn all_states(ctx: &EnvContext, h: i64) -> Vec<EnvElem> {
    basis_by_weight(ctx, &Q::int(h)).into_iter().flatten().map(EnvElem::word).collect()
}

#[test]
fn vacuum_axioms() {
    let ctx = heis(1);
    let vac = EnvElem::vacuum();
    assert_eq!(ctx.apply_mode(0, -1, &vac), EnvElem::word(vec![m(0, -1)]));
    for t in 0..4 {
        assert!(ctx.apply_mode(0, t, &vac).is_zero());
    }
    assert!(ctx.translate(&vac).is_zero());
    // J_(1) J_(-1)|0> = k |0>
    let j = ctx.generator_state("J").unwrap();
    assert_eq!(ctx.apply_mode(0, 1, &j), vac);
    // |0>_(-1) v = v and v_(-1)|0> = v
    for v in all_states(&ctx, 4) {
        assert_eq!(ctx.nth_product(&vac, -1, &v), v);
        assert_eq!(ctx.nth_product(&v, -1, &vac), v);
        assert!(ctx.nth_product(&vac, 0, &v).is_zero());
    }
}

#[test]
fn translation_examples() {
    let ctx = vir();
    let l = ctx.generator_state("L").unwrap();
    assert_eq!(ctx.translate(&l), EnvElem::word(vec![m(0, -2)]));
    let ll = ctx.apply_mode(0, -1, &l);
    assert_eq!(ll, EnvElem::word(vec![m(0, -1), m(0, -1)]));
    // L_(-2)L_(-1) + L_(-1)L_(-2) = 2 L_(-2)L_(-1) + [L_(-1), L_(-2)], and [L_{-2}, L_{-3}] = L_{-5}
    let want = EnvElem::word(vec![m(0, -2), m(0, -1)]).times(&Scalar::int(2)).plus(&EnvElem::word(vec![m(0, -4)]));
    assert_eq!(ctx.translate(&ll), want);
    // T v = v_(-2)|0>
    for v in all_states(&ctx, 6) {
        assert_eq!(ctx.translate(&v), ctx.nth_product(&v, -2, &EnvElem::vacuum()));
    }
}

#[test]
fn hamiltonian_and_l_minus_one() {
    let ctx = vir();
    for v in all_states(&ctx, 7) {
        let h = ctx.weight(&v).unwrap();
        assert_eq!(ctx.apply_mode(0, 1, &v), v.times(&Scalar::from_q(h)));
        assert_eq!(ctx.apply_mode(0, 0, &v), ctx.translate(&v));
    }
    let l = ctx.generator_state("L").unwrap();
    let c = ctx.nth_product(&l, 3, &l);
    assert_eq!(c, EnvElem::vacuum().times(&Scalar::param("c").scale(&Q::new(1, 2))));
}

#[test]
fn weight_bookkeeping() {
    let p = catalog::neveu_schwarz();
    let ctx = EnvContext::new(&p, &BTreeMap::new()).unwrap();
    let states = all_states(&ctx, 4);
    for v in &states {
        let hv = ctx.weight(v).unwrap();
        for g in 0..2u16 {
            let hg = Q::new(ctx.scaled_generator_weight(g), ctx.weight_denominator());
            for t in -3..4 {
                let r = ctx.apply_mode(g, t, v);
                if let Some(h) = ctx.weight(&r) {
                    assert_eq!(h, &(&hv + &hg) - &Q::int(t as i64 + 1));
                } else {
                    assert!(r.is_zero());
                }
            }
        }
    }
}

#[test]
fn odd_squares_reduce() {
    let p = catalog::build("clifford", &BTreeMap::new()).unwrap();
    let ctx = EnvContext::new(&p, &[(Symbol::new("k"), Scalar::int(1))].into()).unwrap();
    let psi = ctx.generator_state("psi").unwrap();
    // psi_(-1) psi_(-1)|0> = [psi_(-1), psi_(-1)]/2 |0> = 0 since psi_(0) psi = k but t+s-0 = -2
    assert!(ctx.apply_mode(0, -1, &psi).is_zero());
    assert_eq!(ctx.apply_mode(0, 0, &psi), EnvElem::vacuum());
    let dims = graded_dimension(&ctx, &Q::int(4));
    assert_eq!(dims, symmetric_algebra_dimension(&ctx, &Q::int(4)));
    // fermion: Π (1 + q^{n+1/2})
    assert_eq!(dims.values(), vec![1, 1, 0, 1, 1, 1, 1, 1, 2]);
}

#[test]
fn quasi_associativity_witness() {
    let ctx = heis(1);
    let j = ctx.generator_state("J").unwrap();
    let jj = ctx.nth_product(&j, -1, &j);
    let lhs = ctx.nth_product(&jj, -1, &j).minus(&ctx.nth_product(&j, -1, &jj));
    // T^2 J = 2 T^(2) J = 2 J_(-3)|0>
    let t2j = ctx.translate(&ctx.translate(&j));
    assert_eq!(t2j, EnvElem::word(vec![m(0, -3)]).times(&Scalar::int(2)));
    assert_eq!(lhs, t2j);
}

#[test]
fn dimensions() {
    let v = graded_dimension(&vir(), &Q::int(8));
    assert_eq!(v.values(), vec![1, 0, 1, 1, 2, 2, 4, 4, 7]);
    assert_eq!(v, symmetric_algebra_dimension(&vir(), &Q::int(8)));
    let h = graded_dimension(&heis(1), &Q::int(6));
    assert_eq!(h.values(), vec![1, 1, 2, 3, 5, 7, 11]);
    let none = crate::vlie::PresentationBuilder::new("trivial").build().unwrap();
    let t = EnvContext::new(&none, &BTreeMap::new()).unwrap();
    assert_eq!(graded_dimension(&t, &Q::int(3)).values(), vec![1, 0, 0, 0]);
}

#[test]
fn rejects_bad_contexts() {
    let w = catalog::build("heisenberg", &BTreeMap::new()).unwrap();
    assert!(matches!(
        EnvContext::new(&w, &[(Symbol::new("zz"), Scalar::one())].into()),
        Err(EnvError::UnknownCentral(_))
    ));
    let zero = crate::vlie::PresentationBuilder::new("z")
        .generator("a", crate::vlie::Parity::Even, Q::zero())
        .build()
        .unwrap();
    assert!(matches!(EnvContext::new(&zero, &BTreeMap::new()), Err(EnvError::NonPositiveWeight(_))));
}

#[test]
fn identities_small_pools() {
    for (ctx, h) in [(vir(), 4), (heis(1), 3)] {
        let pool: Vec<EnvElem> = all_states(&ctx, h);
        let r = verify_identities(&ctx, &pool, &IdentityWindows::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn identities_on_superalgebra() {
    let ctx = EnvContext::new(&catalog::neveu_schwarz(), &BTreeMap::new()).unwrap();
    let pool = all_states(&ctx, 3);
    let w = IdentityWindows { skew: (-2, 2), triple: (-1, 1), recursion_samples: 10, seed: 3 };
    let r = verify_identities(&ctx, &pool, &w).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn c2_of_virasoro_and_heisenberg() {
    let ctx = vir();
    let r = c2_quotient(&ctx, &Q::int(6));
    let dims: Vec<usize> = r.dims().into_iter().map(|(_, d)| d).collect();
    assert_eq!(dims, vec![1, 0, 1, 0, 1, 0, 1]);
    assert!(r.bracket.iter().all(|(_, _, x)| x.is_zero()));
    let h = c2_quotient(&heis(1), &Q::int(3));
    let dims: Vec<usize> = h.dims().into_iter().map(|(_, d)| d).collect();
    assert_eq!(dims, vec![1, 1, 1, 1]);
}


//! The named vertex Lie algebras and conformal-structure analysis.

pub mod builders;
pub mod conformal;
pub mod lie;

use std::collections::BTreeMap;

use crate::symbolic::{Q, Scalar, Symbol};
use crate::vlie::{Presentation, PresentationBuilder, RElem, VlieError};

pub use builders::{
    affine, clifford, frobenius, heisenberg, n2, neveu_schwarz, topological, virasoro, witt, witt_loop_semidirect,
    SemidirectCentrals,
};
pub use conformal::{
    chodos_thorn, conformal_analysis, coset_conformal, griess, primary_status, virasoro_charge, ChodosThornReport,
    ConformalReport, CosetReport, GriessReport, PrimaryStatus,
};
pub use lie::{FrobeniusAlgebra, LieAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog algebra `{0}`")]
    UnknownName(String),
    #[error("invalid parameter: {0}")]
    BadParam(String),
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("not a Lie algebra: {0}")]
    NotLie(String),
    #[error("form is not symmetric: {0}")]
    NonSymmetricForm(String),
    #[error("form is not invariant: {0}")]
    NonInvariantForm(String),
    #[error("not a Frobenius algebra: {0}")]
    NotFrobenius(String),
    #[error("presentation is not graded")]
    Ungraded,
    #[error("not of CFT type: {0}")]
    NotCftType(String),
    #[error("`{0}` is not a conformal vector")]
    NotConformal(String),
    #[error("`{0}` is not a Virasoro vector")]
    NotVirasoro(String),
    #[error("`{0}` is not quasi-primary")]
    NotQuasiPrimary(String),
    #[error("commutation failure: {0}")]
    CommutationFailure(String),
    #[error("not a primary U(1)-vector: {0}")]
    NotU1(String),
    #[error(transparent)]
    Presentation(#[from] VlieError),
}

/// The ten catalog algebras.
pub const NAMES: [&str; 10] = [
    "witt",
    "virasoro",
    "heisenberg",
    "clifford",
    "affine",
    "neveu_schwarz",
    "n2",
    "topological",
    "witt_loop_semidirect",
    "frobenius",
];

/// Parses a builder parameter value: a rational literal or a parameter name.
pub fn parse_scalar(text: &str) -> Result<Scalar, CatalogError> {
    let t = text.trim();
    if let Ok(q) = t.parse::<Q>() {
        return Ok(Scalar::from_q(q));
    }
    let ident = t.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ident && t != "T" && t != "l" {
        Ok(Scalar::param(t))
    } else {
        Err(CatalogError::BadParam(format!("`{text}` is neither a rational nor a parameter name")))
    }
}

fn diag(n: usize, s: &Scalar) -> Vec<Vec<Scalar>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { s.clone() } else { Scalar::zero() }).collect()).collect()
}

fn names_for(prefix: &str, rank: usize) -> Vec<String> {
    if rank == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=rank).map(|i| format!("{prefix}{i}")).collect()
    }
}

fn lie_from_params(params: &BTreeMap<String, String>) -> Result<LieAlgebra, CatalogError> {
    let kind = params.get("g").map(String::as_str).unwrap_or("sl2");
    match kind {
        "sl2" => Ok(LieAlgebra::sl2()),
        "abelian" => {
            let rank = rank_param(params)?;
            let form = parse_scalar(params.get("form").map(String::as_str).unwrap_or("1"))?;
            let names = names_for("J", rank);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            Ok(LieAlgebra::abelian(&refs, diag(rank, &form)))
        }
        other => Err(CatalogError::BadParam(format!("unknown Lie algebra `{other}` (expected sl2 or abelian)"))),
    }
}

fn rank_param(params: &BTreeMap<String, String>) -> Result<usize, CatalogError> {
    let rank: usize = params
        .get("rank")
        .map(|r| r.parse().map_err(|_| CatalogError::BadParam(format!("rank `{r}`"))))
        .transpose()?
        .unwrap_or(1);
    if rank == 0 || rank > 8 {
        return Err(CatalogError::BadParam(format!("rank {rank} out of range 1..8")));
    }
    Ok(rank)
}

fn check_known(params: &BTreeMap<String, String>, allowed: &[&str]) -> Result<(), CatalogError> {
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(CatalogError::BadParam(format!("unknown parameter `{k}`")));
        }
    }
    Ok(())
}

/// Builds a catalog algebra by name from string parameters:
///
/// * `heisenberg`, `clifford`: `rank` (default 1), `form` (diagonal entry, default 1);
/// * `affine`: `g = sl2 | abelian`, with `rank`/`form` for abelian;
/// * `witt_loop_semidirect`: as `affine`, plus `central = none | vir | level | both`;
/// * `frobenius`: `algebra = q | q2` and `form` (diagonal entry, default 1/2).
pub fn build(name: &str, params: &BTreeMap<String, String>) -> Result<Presentation, CatalogError> {
    match name {
        "witt" | "virasoro" | "neveu_schwarz" | "n1" | "n2" | "topological" => {
            check_known(params, &[])?;
            Ok(match name {
                "witt" => witt(),
                "virasoro" => virasoro(),
                "neveu_schwarz" | "n1" => neveu_schwarz(),
                "n2" => n2(),
                _ => topological(),
            })
        }
        "heisenberg" | "clifford" => {
            check_known(params, &["rank", "form"])?;
            let rank = rank_param(params)?;
            let form = parse_scalar(params.get("form").map(String::as_str).unwrap_or("1"))?;
            let names = names_for(if name == "heisenberg" { "J" } else { "psi" }, rank);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            if name == "heisenberg" {
                heisenberg(&refs, &diag(rank, &form))
            } else {
                clifford(&refs, &diag(rank, &form))
            }
        }
        "affine" => {
            check_known(params, &["g", "rank", "form"])?;
            affine(&lie_from_params(params)?)
        }
        "witt_loop_semidirect" => {
            check_known(params, &["g", "rank", "form", "central"])?;
            let centrals = match params.get("central").map(String::as_str).unwrap_or("none") {
                "none" => SemidirectCentrals::default(),
                "vir" => SemidirectCentrals { virasoro: true, level: false },
                "level" => SemidirectCentrals { virasoro: false, level: true },
                "both" => SemidirectCentrals { virasoro: true, level: true },
                other => return Err(CatalogError::BadParam(format!("central `{other}`"))),
            };
            witt_loop_semidirect(&lie_from_params(params)?, centrals)
        }
        "frobenius" => {
            check_known(params, &["algebra", "form"])?;
            let form = parse_scalar(params.get("form").map(String::as_str).unwrap_or("1/2"))?;
            let alg = match params.get("algebra").map(String::as_str).unwrap_or("q") {
                "q" => FrobeniusAlgebra::split(&["L"], &[form]),
                "q2" => FrobeniusAlgebra::split(&["e1", "e2"], &[form.clone(), form]),
                other => return Err(CatalogError::BadParam(format!("algebra `{other}` (expected q or q2)"))),
            };
            frobenius(&alg)
        }
        other => Err(CatalogError::UnknownName(other.to_string())),
    }
}

/// Every catalog algebra with default parameters.
pub fn all_default() -> Vec<Presentation> {
    let none = BTreeMap::new();
    NAMES.iter().map(|n| build(n, &none).expect("default catalog build")).collect()
}

fn relabel_elem(x: &RElem, f: &impl Fn(&str) -> String) -> RElem {
    let mut out = RElem::zero();
    for (g, k, s) in x.gen_terms() {
        out.add_gen(Symbol::new(&f(g)), k, s.clone());
    }
    for (z, s) in x.central_terms() {
        out.add_central(Symbol::new(&f(z)), s.clone());
    }
    out
}

/// Renames every generator and central symbol through `f`.
pub fn relabel(p: &Presentation, name: &str, f: impl Fn(&str) -> String) -> Result<Presentation, CatalogError> {
    let mut b = PresentationBuilder::new(name);
    if !p.is_graded() {
        b = b.ungraded();
    }
    b = add_parts(b, p, &f);
    Ok(b.build()?)
}

fn add_parts(mut b: PresentationBuilder, p: &Presentation, f: &impl Fn(&str) -> String) -> PresentationBuilder {
    for g in p.generators() {
        b = b.generator(&f(&g.name), g.parity, g.weight.clone());
    }
    for z in p.centrals() {
        b = b.central(&f(z));
    }
    for s in p.params() {
        b = b.param(s);
    }
    for (x, y) in p.declared_pairs() {
        let v = p.entry(x, y).map_coeffs(|c| relabel_elem(c, f));
        b.add_bracket(&f(x), &f(y), v);
    }
    b
}

/// Direct product: disjoint union with zero cross brackets. Each factor's
/// symbols get the matching suffix appended.
pub fn product(factors: &[(&Presentation, &str)]) -> Result<Presentation, CatalogError> {
    let name = factors.iter().map(|(p, _)| p.name()).collect::<Vec<_>>().join("x");
    let mut b = PresentationBuilder::new(&name);
    for (p, suffix) in factors {
        let suffix = suffix.to_string();
        b = add_parts(b, p, &move |s: &str| format!("{s}{suffix}"));
    }
    Ok(b.build()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Var;
    use crate::vlie::{bracket, check_identities, lie_bracket, locality_order, opposite_bracket, tth_products, CheckOptions};

    fn gen(x: &str) -> RElem {
        RElem::gen(x)
    }

    #[test]
    fn all_catalog_algebras_pass_identities() {
        for p in all_default() {
            let r = check_identities(&p, &CheckOptions::default());
            assert!(r.passed(), "{}: {:?}", p.name(), r.report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn non_default_builds_pass_identities() {
        let cases: Vec<(&str, &[(&str, &str)])> = vec![
            ("heisenberg", &[("rank", "2"), ("form", "q")]),
            ("clifford", &[("rank", "3")]),
            ("affine", &[("g", "abelian"), ("rank", "2")]),
            ("witt_loop_semidirect", &[("central", "both")]),
            ("witt_loop_semidirect", &[("g", "abelian"), ("form", "q"), ("central", "both")]),
            ("frobenius", &[("algebra", "q2")]),
        ];
        for (name, ps) in cases {
            let params = ps.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
            let p = build(name, &params).unwrap();
            let r = check_identities(&p, &CheckOptions { exhaustive: true, samples: 6, seed: 7 });
            assert!(r.passed(), "{name} {ps:?}: {:?}", r.report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn double_opposite_is_identity() {
        for p in all_default() {
            for a in p.generators() {
                for b in p.generators() {
                    let (x, y) = (gen(&a.name), gen(&b.name));
                    let direct = bracket(&p, &x, &y).unwrap();
                    // opposite of the opposite: apply the skew map to [y_λ x] computed via opposite
                    let opp_yx = opposite_bracket(&p, &y, &x).unwrap();
                    let sign = a.parity.koszul(b.parity);
                    let back = crate::vlie::ops::opposite_from(&opp_yx, sign);
                    assert_eq!(back, direct, "{} {} {}", p.name(), a.name, b.name);
                }
            }
        }
    }

    #[test]
    fn lie_bracket_is_skew_modulo_translations() {
        for p in all_default() {
            for a in p.generators() {
                for b in p.generators() {
                    let (x, y) = (gen(&a.name), gen(&b.name));
                    let ab = lie_bracket(&p, &x, &y).unwrap().mod_translations();
                    let ba = lie_bracket(&p, &y, &x).unwrap().mod_translations();
                    let sign = Scalar::int(-a.parity.koszul(b.parity));
                    assert_eq!(ab, ba.times(&sign), "{} {} {}", p.name(), a.name, b.name);
                }
            }
        }
    }

    #[test]
    fn locality_order_is_symmetric() {
        for p in all_default() {
            for a in p.generators() {
                for b in p.generators() {
                    let (x, y) = (gen(&a.name), gen(&b.name));
                    assert_eq!(locality_order(&p, &x, &y).unwrap(), locality_order(&p, &y, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn homogeneity_of_all_tables() {
        for p in all_default() {
            for a in p.generators() {
                for b in p.generators() {
                    for (t, c) in tth_products(&p, &gen(&a.name), &gen(&b.name)).unwrap() {
                        let w = &(&a.weight + &b.weight) - &Q::int(t as i64 + 1);
                        assert_eq!(p.weight_of(&c), Some(w), "{} {} {} t={t}", p.name(), a.name, b.name);
                    }
                }
            }
        }
    }

    #[test]
    fn n2_bracket_matches_closed_form() {
        let p = n2();
        let v = bracket(&p, &gen("Gp"), &gen("Gm")).unwrap();
        assert_eq!(v.to_string(), "T*J + 2*L + 2*J*l + 2/3*c*l^(2)");
    }

    #[test]
    fn heisenberg_and_affine_values() {
        let p = build("heisenberg", &BTreeMap::new()).unwrap();
        assert_eq!(tth_products(&p, &gen("J"), &gen("J")).unwrap(), vec![(1, RElem::central("k"))]);
        assert_eq!(locality_order(&p, &gen("J"), &gen("J")).unwrap(), 2);
        let a = affine(&LieAlgebra::sl2()).unwrap();
        let v = bracket(&a, &gen("e"), &gen("f")).unwrap();
        assert_eq!(v.to_string(), "h + k*l");
        // [a,b]_lie = T[a,b] since T kills the level term.
        assert_eq!(lie_bracket(&a, &gen("e"), &gen("f")).unwrap(), RElem::t_gen("h", 1));
        let w = witt();
        assert_eq!(locality_order(&w, &gen("L"), &gen("L")).unwrap(), 2);
    }

    #[test]
    fn clifford_opposite_sign() {
        let p = build("clifford", &BTreeMap::new()).unwrap();
        let x = gen("psi");
        assert_eq!(opposite_bracket(&p, &x, &x).unwrap(), crate::vlie::from_products([(0, RElem::central("k"))]));
    }

    #[test]
    fn frobenius_rank_one_is_virasoro() {
        let f = build("frobenius", &BTreeMap::new()).unwrap();
        let v = virasoro();
        assert_eq!(f.entry("L", "L"), v.entry("L", "L"));
        assert_eq!(f.generators(), v.generators());
    }

    #[test]
    fn builders_reject_bad_input() {
        let mut g = LieAlgebra::sl2();
        g.form[0][2] = Scalar::int(3);
        g.form[2][0] = Scalar::int(3);
        assert!(matches!(affine(&g), Err(CatalogError::NonInvariantForm(_))));
        let form = vec![vec![Scalar::one(), Scalar::one()], vec![Scalar::zero(), Scalar::one()]];
        assert!(matches!(heisenberg(&["a", "b"], &form), Err(CatalogError::NonSymmetricForm(_))));
        let mut c = FrobeniusAlgebra::split(&["u"], &[Scalar::one()]);
        c.product[0][0][0] = Scalar::zero();
        c.verify().unwrap();
        assert!(build("nope", &BTreeMap::new()).is_err());
        let bad: BTreeMap<String, String> = [("rank".to_string(), "x".to_string())].into();
        assert!(build("heisenberg", &bad).is_err());
    }

    #[test]
    fn conformal_vectors_of_superconformal_algebras() {
        for p in [virasoro(), neveu_schwarz(), n2(), topological()] {
            let r = conformal_analysis(&p, &gen("L")).unwrap();
            assert!(r.is_conformal, "{}", p.name());
        }
        let v = conformal_analysis(&virasoro(), &gen("L")).unwrap();
        assert_eq!(v.central_charge, Some(RElem::central("c")));
        assert_eq!(v.statuses, vec![("L".to_string(), PrimaryStatus::QuasiPrimary)]);
        let w = conformal_analysis(&witt(), &gen("L")).unwrap();
        assert_eq!(w.statuses, vec![("L".to_string(), PrimaryStatus::Primary)]);
        let n = conformal_analysis(&n2(), &gen("L")).unwrap();
        assert!(n.statuses.contains(&("J".to_string(), PrimaryStatus::Primary)));
        let t = conformal_analysis(&topological(), &gen("L")).unwrap();
        assert!(t.statuses.contains(&("J".to_string(), PrimaryStatus::Neither)));
        assert_eq!(t.central_charge, Some(RElem::zero()));
    }

    #[test]
    fn morphisms_of_n2() {
        let src = n2();
        let tv = topological();
        let mut map: crate::vlie::MorphismMap = BTreeMap::new();
        map.insert(Symbol::new("L"), gen("L").minus(&RElem::t_gen("J", 1).times(&Scalar::rational(1, 2))));
        map.insert(Symbol::new("Gp"), gen("Q").times(&Scalar::int(2)));
        map.insert(Symbol::new("Gm"), gen("G"));
        map.insert(Symbol::new("J"), gen("J"));
        map.insert(Symbol::new("c"), RElem::central("d").times(&Scalar::int(3)));
        let r = crate::vlie::check_morphism(&src, &tv, &map).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());

        let mut mirror: crate::vlie::MorphismMap = BTreeMap::new();
        mirror.insert(Symbol::new("L"), gen("L"));
        mirror.insert(Symbol::new("Gp"), gen("Gm"));
        mirror.insert(Symbol::new("Gm"), gen("Gp"));
        mirror.insert(Symbol::new("J"), gen("J").times(&Scalar::int(-1)));
        mirror.insert(Symbol::new("c"), RElem::central("c"));
        assert!(crate::vlie::check_morphism(&src, &src, &mirror).unwrap().passed());

        // Dropping the TJ/2 correction breaks the morphism.
        map.insert(Symbol::new("L"), gen("L"));
        assert!(!crate::vlie::check_morphism(&src, &tv, &map).unwrap().passed());
    }

    #[test]
    fn chodos_thorn_on_n2() {
        let p = n2();
        let r = chodos_thorn(&p, &gen("L"), &gen("J").times(&Scalar::rational(1, 2))).unwrap();
        assert_eq!(r.central_charge, RElem::zero());
        assert!(r.report.passed());
        // Symbolic: Vir ⋉ Heisenberg with form q and level k.
        let params: BTreeMap<String, String> =
            [("g", "abelian"), ("form", "q"), ("central", "both")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let s = build("witt_loop_semidirect", &params).unwrap();
        let r = chodos_thorn(&s, &gen("L"), &gen("J")).unwrap();
        let want = RElem::central("c").minus(&RElem::central("k").times(&Scalar::param("q").scale(&Q::int(12))));
        assert_eq!(r.central_charge, want);
        assert!(r.report.passed());
        let params: BTreeMap<String, String> =
            [("g", "abelian"), ("central", "vir")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let s = build("witt_loop_semidirect", &params).unwrap();
        let r = chodos_thorn(&s, &gen("L"), &gen("J")).unwrap();
        assert_eq!(r.central_charge, RElem::central("c"));
        // Topological J is not primary.
        assert!(chodos_thorn(&topological(), &gen("L"), &gen("J")).is_err());
    }

    #[test]
    fn coset_on_virasoro_product() {
        let v = virasoro();
        let p = product(&[(&v, "1"), (&v, "2")]).unwrap();
        let l = gen("L1").plus(&gen("L2"));
        let r = coset_conformal(&p, &l, &gen("L1")).unwrap();
        assert_eq!(r.coset_vector, gen("L2"));
        assert_eq!(r.central_charge, RElem::central("c2"));
        assert!(r.report.passed());
        let r = coset_conformal(&p, &l, &l).unwrap();
        assert!(r.coset_vector.is_zero() && r.central_charge.is_zero());
        // L' = L + TJ/2 in N=2 is a Virasoro vector but not quasi-primary for L.
        let bad = gen("L").plus(&RElem::t_gen("J", 1).times(&Scalar::rational(1, 2)));
        assert!(matches!(coset_conformal(&n2(), &gen("L"), &bad), Err(CatalogError::NotQuasiPrimary(_))));
    }

    #[test]
    fn griess_algebras() {
        let g = griess(&virasoro()).unwrap();
        assert_eq!(g.idempotents, vec![vec![Scalar::rational(1, 2)]]);
        assert_eq!(g.virasoro_vectors, vec![(gen("L"), RElem::central("c"))]);
        let params: BTreeMap<String, String> = [("algebra".to_string(), "q2".to_string())].into();
        let f = build("frobenius", &params).unwrap();
        let g = griess(&f).unwrap();
        // Griess product is twice the product of C: e_i ∘ e_i = 2 e_i.
        assert_eq!(g.product[0][0], vec![Scalar::int(2), Scalar::zero()]);
        assert_eq!(g.product[0][1], vec![Scalar::zero(), Scalar::zero()]);
        assert_eq!(g.idempotents.len(), 3);
        assert!(g.report.passed());
        // Abelian weight-2 generator: no idempotents.
        let ab = PresentationBuilder::new("ab").generator("W", crate::vlie::Parity::Even, Q::int(2)).central("c").build().unwrap();
        assert!(griess(&ab).unwrap().idempotents.is_empty());
        let _ = Var::Lambda;
    }
}

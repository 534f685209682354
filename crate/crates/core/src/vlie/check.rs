//! Verification of the vertex Lie algebra axioms and of morphisms.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::report::{Check, Report};
use crate::symbolic::{OpPoly, Scalar, Symbol, Var};

use super::ops::{bracket, jacobi_residual, jacobi_residual_shifted, skew_residual};
use super::presentation::{Presentation, VlieError};
use super::relem::{LambdaPoly, Parity, RElem};

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Additionally sample T-decorated linear combinations.
    pub exhaustive: bool,
    pub samples: usize,
    pub seed: u64,
}

/// Outcome of [`check_identities`]: the per-case report plus summary flags.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub report: Report,
    pub skew_ok: bool,
    pub jacobi_ok: bool,
    pub conventions_agree: bool,
    /// `None` when skew-symmetry fails (the S₃ property is then not implied).
    pub s3_consistent: Option<bool>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.skew_ok && self.jacobi_ok && self.conventions_agree && self.s3_consistent.unwrap_or(true)
    }
}

fn gen_elems(p: &Presentation) -> Vec<(String, RElem)> {
    p.generators().iter().map(|g| (g.name.to_string(), RElem::gen(g.name.as_str()))).collect()
}

/// Verifies conformal skew-symmetry on all ordered generator pairs and the
/// conformal Jacobi identity on all ordered generator triples, in both index
/// conventions, plus permutation consistency of the Jacobi outcomes.
pub fn check_identities(p: &Presentation, opts: &CheckOptions) -> IdentityReport {
    let gens = gen_elems(p);
    let mut report = Report::new();
    let mut skew_ok = true;
    for (na, a) in &gens {
        for (nb, b) in &gens {
            let r = skew_residual(p, a, b);
            skew_ok &= r.is_zero();
            report.push(Check::from_bool(format!("skew {na} {nb}"), r.is_zero(), || format!("residual {r}")));
        }
    }
    let mut jacobi_ok = true;
    let mut conventions_agree = true;
    let mut status: BTreeMap<(usize, usize, usize), bool> = BTreeMap::new();
    let shift = [(Var::Mu, OpPoly::linear(&[(Var::Lambda, 1), (Var::Mu, 1)]))];
    for (i, (na, a)) in gens.iter().enumerate() {
        for (j, (nb, b)) in gens.iter().enumerate() {
            for (k, (nc, c)) in gens.iter().enumerate() {
                let r = jacobi_residual(p, a, b, c);
                let r2 = jacobi_residual_shifted(p, a, b, c);
                let agree = r.substitute(&shift) == r2;
                jacobi_ok &= r.is_zero();
                conventions_agree &= agree;
                status.insert((i, j, k), r.is_zero());
                report.push(Check::from_bool(format!("jacobi {na} {nb} {nc}"), r.is_zero(), || {
                    format!("residual {r}")
                }));
                if !agree {
                    report.push(Check::fail(
                        format!("jacobi-conventions {na} {nb} {nc}"),
                        format!("shifted residual {r2} differs from {}", r.substitute(&shift)),
                    ));
                }
            }
        }
    }
    report.push(Check::from_bool("jacobi-conventions", conventions_agree, || {
        "the two index conventions disagree".to_string()
    }));
    let s3_consistent = if skew_ok {
        let mut ok = true;
        let mut witness = String::new();
        for (&(i, j, k), &s) in &status {
            for perm in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                if status[&perm] != s && ok {
                    ok = false;
                    witness = format!(
                        "jacobi {} {} {} is {} but a permutation is not",
                        gens[i].0,
                        gens[j].0,
                        gens[k].0,
                        if s { "zero" } else { "nonzero" }
                    );
                }
            }
        }
        report.push(Check::from_bool("s3-symmetry", ok, || witness));
        Some(ok)
    } else {
        None
    };
    if opts.exhaustive {
        let samples = sampled_checks(p, opts);
        skew_ok &= samples.checks.iter().filter(|c| c.name.starts_with("sample-skew")).all(Check::passed);
        jacobi_ok &= samples.checks.iter().filter(|c| c.name.starts_with("sample-jacobi")).all(Check::passed);
        report.extend(samples);
    }
    IdentityReport { report, skew_ok, jacobi_ok, conventions_agree, s3_consistent }
}

/// Random T-decorated homogeneous-parity combinations of generators.
fn random_elem(p: &Presentation, rng: &mut StdRng) -> Option<RElem> {
    let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
    let pool: Vec<&Symbol> = p.generators().iter().filter(|g| g.parity == parity).map(|g| &g.name).collect();
    let pool = if pool.is_empty() {
        p.generators().iter().map(|g| &g.name).collect::<Vec<_>>()
    } else {
        pool
    };
    if pool.is_empty() {
        return None;
    }
    let target = p.parity(pool[0]);
    let mut x = RElem::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let g = pool[rng.gen_range(0..pool.len())];
        if p.parity(g) != target {
            continue;
        }
        let coef = Scalar::int(rng.gen_range(-3i64..=3));
        x.add_gen(g.clone(), rng.gen_range(0u16..=2), coef);
    }
    if x.is_zero() {
        x = RElem::t_gen(pool[0].as_str(), 1);
    }
    Some(x)
}

fn sampled_checks(p: &Presentation, opts: &CheckOptions) -> Report {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let mut report = Report::new();
    let n = if opts.samples == 0 { 12 } else { opts.samples };
    for s in 0..n {
        let (Some(a), Some(b), Some(c)) = (random_elem(p, &mut rng), random_elem(p, &mut rng), random_elem(p, &mut rng))
        else {
            break;
        };
        let r = skew_residual(p, &a, &b);
        report.push(Check::from_bool(format!("sample-skew {s}"), r.is_zero(), || {
            format!("a = {a}, b = {b}: residual {r}")
        }));
        let r = jacobi_residual(p, &a, &b, &c);
        report.push(Check::from_bool(format!("sample-jacobi {s}"), r.is_zero(), || {
            format!("a = {a}, b = {b}, c = {c}: residual {r}")
        }));
    }
    report
}

/// Images of generators and central symbols under a morphism.
pub type MorphismMap = BTreeMap<Symbol, RElem>;

/// Extends `map` T-equivariantly and linearly to `R`.
pub fn apply_morphism(map: &MorphismMap, x: &RElem) -> RElem {
    let mut out = RElem::zero();
    for (g, k, s) in x.gen_terms() {
        if let Some(img) = map.get(g) {
            out = out.plus(&img.t_divided(k).times(s));
        }
    }
    for (z, s) in x.central_terms() {
        if let Some(img) = map.get(z) {
            out = out.plus(&img.times(s));
        }
    }
    out
}

fn apply_poly(map: &MorphismMap, p: &LambdaPoly) -> LambdaPoly {
    p.map_coeffs(|c| apply_morphism(map, c))
}

/// Verifies `φ[a_λ b] = [φa_λ φb]` on all generator pairs.
pub fn check_morphism(src: &Presentation, dst: &Presentation, map: &MorphismMap) -> Result<Report, VlieError> {
    for g in src.generators() {
        if !map.contains_key(&g.name) {
            return Err(VlieError::Invalid(format!("morphism does not map generator `{}`", g.name)));
        }
    }
    for z in src.centrals() {
        if !map.contains_key(z) {
            return Err(VlieError::Invalid(format!("morphism does not map central element `{z}`")));
        }
    }
    for (k, img) in map {
        if !src.has_generator(k) && !src.has_central(k) {
            return Err(VlieError::Invalid(format!("`{k}` is not a symbol of the source algebra")));
        }
        dst.validate_elem(img)?;
    }
    let mut report = Report::new();
    for g in src.generators() {
        let img = &map[&g.name];
        let ok = img.is_zero() || dst.parity_of(img) == Some(g.parity);
        report.push(Check::from_bool(format!("parity {}", g.name), ok, || {
            format!("image {img} does not have parity {}", g.parity)
        }));
    }
    for z in src.centrals() {
        let img = &map[z];
        report.push(Check::from_bool(format!("central {z}"), img.is_central(), || {
            format!("image {img} of a central element is not central")
        }));
    }
    for ga in src.generators() {
        for gb in src.generators() {
            let a = RElem::gen(ga.name.as_str());
            let b = RElem::gen(gb.name.as_str());
            let lhs = apply_poly(map, &bracket(src, &a, &b)?);
            let rhs = bracket(dst, &apply_morphism(map, &a), &apply_morphism(map, &b))?;
            let diff = lhs.sub(&rhs);
            report.push(Check::from_bool(format!("morphism {} {}", ga.name, gb.name), diff.is_zero(), || {
                format!("φ[a_λ b] - [φa_λ φb] = {diff}")
            }));
        }
    }
    Ok(report)
}

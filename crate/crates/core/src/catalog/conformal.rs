//! Virasoro and conformal vectors, primary vectors, the Griess algebra, the
//! coset construction and the Chodos-Thorn shift.

use serde_json::json;

use crate::report::{Check, Report};
use crate::symbolic::{Q, Scalar, Var};
use crate::vlie::{bracket, Parity, Presentation, RElem};

use super::CatalogError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimaryStatus {
    Primary,
    QuasiPrimary,
    Neither,
}

impl std::fmt::Display for PrimaryStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PrimaryStatus::Primary => "primary",
            PrimaryStatus::QuasiPrimary => "quasi-primary",
            PrimaryStatus::Neither => "neither",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConformalReport {
    pub is_virasoro: bool,
    /// `c` with `L_λ L = (T+2λ)L + (c/2)λ^(3)`, a central element.
    pub central_charge: Option<RElem>,
    pub is_conformal: bool,
    pub statuses: Vec<(String, PrimaryStatus)>,
    pub report: Report,
}

fn products(p: &Presentation, a: &RElem, b: &RElem) -> Result<Vec<RElem>, CatalogError> {
    let br = bracket(p, a, b)?;
    let top = br.degree_in(Var::Lambda).unwrap_or(0) as usize;
    Ok((0..=top.max(3)).map(|t| br.coeff_of(Var::Lambda, t as u16)).collect())
}

/// Tests the Virasoro shape of `[L_λ L]`; returns the central charge.
pub fn virasoro_charge(p: &Presentation, l: &RElem) -> Result<Option<RElem>, CatalogError> {
    if l.is_zero() || p.parity_of(l) != Some(Parity::Even) {
        return Ok(None);
    }
    let prods = products(p, l, l)?;
    let shape = prods[0] == l.t_divided(1)
        && prods[1] == l.times(&Scalar::int(2))
        && prods[2].is_zero()
        && prods[3].is_central()
        && prods[4..].iter().all(RElem::is_zero);
    Ok(if shape { Some(prods[3].times(&Scalar::int(2))) } else { None })
}

/// Primary status of `a` with respect to `l`.
pub fn primary_status(p: &Presentation, l: &RElem, a: &RElem) -> Result<PrimaryStatus, CatalogError> {
    let prods = products(p, l, a)?;
    Ok(if prods[2..].iter().all(RElem::is_zero) {
        PrimaryStatus::Primary
    } else if prods[2].is_zero() {
        PrimaryStatus::QuasiPrimary
    } else {
        PrimaryStatus::Neither
    })
}

/// Classifies `l`: Virasoro vector, central charge, conformal vector
/// (`L_(0) = T` and `L_(1) = h` on every generator), and the primary status
/// of each generator.
pub fn conformal_analysis(p: &Presentation, l: &RElem) -> Result<ConformalReport, CatalogError> {
    if !p.is_graded() {
        return Err(CatalogError::Ungraded);
    }
    p.validate_elem(l)?;
    let mut report = Report::new();
    let charge = virasoro_charge(p, l)?;
    let is_virasoro = charge.is_some();
    report.push(
        Check::from_bool("virasoro", is_virasoro, || {
            format!("[L_l L] = {} does not have the Virasoro shape", bracket(p, l, l).unwrap())
        })
        .with_value(json!(charge.as_ref().map(|c| c.to_string()))),
    );
    let mut conformal = is_virasoro;
    let mut statuses = Vec::new();
    for gdecl in p.generators() {
        let a = RElem::gen(&gdecl.name);
        let prods = products(p, l, &a)?;
        let ok = prods[0] == a.t_divided(1) && prods[1] == a.times(&Scalar::from_q(gdecl.weight.clone()));
        if !ok {
            conformal = false;
            report.push(Check::fail(
                format!("conformal {}", gdecl.name),
                format!("L_(0) {0} = {1}, L_(1) {0} = {2}", gdecl.name, prods[0], prods[1]),
            ));
        }
        let status = primary_status(p, l, &a)?;
        statuses.push((gdecl.name.to_string(), status));
    }
    report.push(Check::from_bool("conformal", conformal, || "L_(0) != T or L_(1) != H on generators".into()));
    Ok(ConformalReport { is_virasoro, central_charge: charge, is_conformal: conformal, statuses, report })
}

/// Griess algebra data on the weight-2 subspace of a CFT-type algebra.
#[derive(Clone, Debug)]
pub struct GriessReport {
    pub basis: Vec<RElem>,
    /// `product[i][j]` = coordinates of `b_i ∘ b_j = (b_i)_(1) b_j`.
    pub product: Vec<Vec<Vec<Scalar>>>,
    /// `form[i][j] = (b_i)_(3) b_j`, a central element.
    pub form: Vec<Vec<RElem>>,
    /// Idempotents `e` (`e ∘ e = e`), as coordinate vectors.
    pub idempotents: Vec<Vec<Scalar>>,
    /// `2e` for each idempotent, with its central charge.
    pub virasoro_vectors: Vec<(RElem, RElem)>,
    pub report: Report,
}

fn weight2_basis(p: &Presentation) -> Vec<RElem> {
    let mut out = Vec::new();
    for g in p.generators() {
        let k = &Q::int(2) - &g.weight;
        if k.is_integer() && !k.is_negative() && g.parity == Parity::Even {
            out.push(RElem::t_gen(&g.name, k.to_i64().unwrap() as u16));
        }
    }
    out
}

fn coords(basis: &[RElem], x: &RElem) -> Option<Vec<Scalar>> {
    let mut out = vec![Scalar::zero(); basis.len()];
    let mut rest = x.clone();
    for (i, b) in basis.iter().enumerate() {
        let (g, k, _) = b.gen_terms().next().expect("basis element");
        out[i] = x.gen_coeff(g, k);
        rest = rest.minus(&b.times(&out[i]));
    }
    if rest.is_zero() {
        Some(out)
    } else {
        None
    }
}

fn combo(basis: &[RElem], v: &[Scalar]) -> RElem {
    let mut out = RElem::zero();
    for (b, s) in basis.iter().zip(v) {
        out = out.plus(&b.times(s));
    }
    out
}

/// Tests CFT type: graded with positive generator weights.
fn require_cft(p: &Presentation) -> Result<(), CatalogError> {
    if !p.is_graded() {
        return Err(CatalogError::NotCftType("presentation is not graded".into()));
    }
    if let Some(g) = p.generators().iter().find(|g| !(g.weight > Q::zero())) {
        return Err(CatalogError::NotCftType(format!("generator {} has weight {}", g.name, g.weight)));
    }
    if p.centrals().is_empty() {
        return Err(CatalogError::NotCftType("no central element to carry the form".into()));
    }
    Ok(())
}

/// Computes the Griess algebra `(R_2, a_(1) b, a_(3) b)` and its idempotents,
/// cross-checking that `2e` is a Virasoro vector for every idempotent `e`.
pub fn griess(p: &Presentation) -> Result<GriessReport, CatalogError> {
    require_cft(p)?;
    let basis = weight2_basis(p);
    let n = basis.len();
    let mut product = vec![vec![Vec::new(); n]; n];
    let mut form = vec![vec![RElem::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let prods = products(p, &basis[i], &basis[j])?;
            product[i][j] = coords(&basis, &prods[1]).ok_or_else(|| {
                CatalogError::NotCftType(format!("product {} lies outside the weight-2 span", prods[1]))
            })?;
            form[i][j] = prods[3].clone();
        }
    }
    let square = |v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            for j in 0..n {
                let s = &v[i] * &v[j];
                if s.is_zero() {
                    continue;
                }
                for k in 0..n {
                    out[k] += &(&s * &product[i][j][k]);
                }
            }
        }
        out
    };
    let mut idempotents = Vec::new();
    if n == 1 {
        // e = x b with x^2 α = x, i.e. x = 1/α when α is a nonzero rational.
        if let Some(alpha) = product[0][0][0].as_constant() {
            if !alpha.is_zero() {
                idempotents.push(vec![Scalar::from_q(alpha.recip())]);
            }
        }
    } else if n > 1 && n <= 4 {
        let grid: Vec<Scalar> = [0, 1, -1, 2, -2, 3, -3, 4, -4].iter().map(|&x| Scalar::rational(x, 2)).collect();
        let mut idx = vec![0usize; n];
        loop {
            let v: Vec<Scalar> = idx.iter().map(|&i| grid[i].clone()).collect();
            if v.iter().any(|x| !x.is_zero()) && square(&v) == v {
                idempotents.push(v);
            }
            let mut pos = 0;
            while pos < n {
                idx[pos] += 1;
                if idx[pos] < grid.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    let mut report = Report::new();
    let mut virasoro_vectors = Vec::new();
    for e in &idempotents {
        let l = combo(&basis, e).times(&Scalar::int(2));
        let charge = virasoro_charge(p, &l)?;
        report.push(Check::from_bool(format!("virasoro-vector {l}"), charge.is_some(), || {
            format!("2e = {l} is not a Virasoro vector")
        }));
        if let Some(c) = charge {
            virasoro_vectors.push((l, c));
        }
    }
    Ok(GriessReport { basis, product, form, idempotents, virasoro_vectors, report })
}

#[derive(Clone, Debug)]
pub struct CosetReport {
    pub coset_vector: RElem,
    pub central_charge: RElem,
    pub report: Report,
}

/// GKO coset: `L - L'` for a quasi-primary Virasoro vector `L'`, with
/// central charge `c_L - c_{L'}`.
pub fn coset_conformal(p: &Presentation, l: &RElem, l_sub: &RElem) -> Result<CosetReport, CatalogError> {
    let base = conformal_analysis(p, l)?;
    if !base.is_conformal {
        return Err(CatalogError::NotConformal(l.to_string()));
    }
    let c_l = base.central_charge.clone().expect("conformal implies Virasoro");
    p.validate_elem(l_sub)?;
    let c_sub = virasoro_charge(p, l_sub)?.ok_or_else(|| CatalogError::NotVirasoro(l_sub.to_string()))?;
    if primary_status(p, l, l_sub)? == PrimaryStatus::Neither {
        return Err(CatalogError::NotQuasiPrimary(l_sub.to_string()));
    }
    let lc = l.minus(l_sub);
    let comm = bracket(p, l_sub, &lc)?;
    if !comm.is_zero() {
        return Err(CatalogError::CommutationFailure(format!("[L'_l (L - L')] = {comm}")));
    }
    let cc = c_l.minus(&c_sub);
    let mut report = Report::new();
    report.push(Check::pass("commute"));
    // Re-enter the analysis: L - L' must be a Virasoro vector with charge c_L - c_L'.
    if lc.is_zero() {
        report.push(Check::from_bool("coset-charge", cc.is_zero(), || format!("c = {cc} for L - L' = 0")));
    } else {
        let got = virasoro_charge(p, &lc)?;
        report.push(Check::from_bool("coset-virasoro", got.as_ref() == Some(&cc), || {
            format!("L - L' = {lc} has charge {got:?}, expected {cc}")
        }));
    }
    Ok(CosetReport { coset_vector: lc, central_charge: cc, report })
}

#[derive(Clone, Debug)]
pub struct ChodosThornReport {
    pub shifted: RElem,
    pub k_j: RElem,
    pub central_charge: RElem,
    pub report: Report,
}

/// Chodos-Thorn: for a primary U(1)-vector `J`, `L' = L + TJ` is a Virasoro
/// vector with `c' = c_L - 12 k_J`.
pub fn chodos_thorn(p: &Presentation, l: &RElem, j: &RElem) -> Result<ChodosThornReport, CatalogError> {
    p.validate_elem(l)?;
    p.validate_elem(j)?;
    let c_l = virasoro_charge(p, l)?.ok_or_else(|| CatalogError::NotVirasoro(l.to_string()))?;
    if p.parity_of(j) != Some(Parity::Even) {
        return Err(CatalogError::NotU1(format!("{j} is not even")));
    }
    let jj = products(p, j, j)?;
    let k_j = jj[1].clone();
    if !(jj[0].is_zero() && k_j.is_central() && jj[2..].iter().all(RElem::is_zero)) {
        return Err(CatalogError::NotU1(format!("[J_l J] = {}", bracket(p, j, j)?)));
    }
    let lj = products(p, l, j)?;
    if !(lj[0] == j.t_divided(1) && lj[1] == *j && lj[2..].iter().all(RElem::is_zero)) {
        return Err(CatalogError::NotU1(format!("[L_l J] = {} is not (T+l)J", bracket(p, l, j)?)));
    }
    let shifted = l.plus(&j.t_divided(1));
    let expected = c_l.minus(&k_j.times(&Scalar::int(12)));
    let got = virasoro_charge(p, &shifted)?;
    let mut report = Report::new();
    report.push(
        Check::from_bool("chodos-thorn", got.as_ref() == Some(&expected), || {
            format!("L + TJ has charge {got:?}, expected {expected}")
        })
        .with_value(json!(expected.to_string())),
    );
    Ok(ChodosThornReport { shifted, k_j, central_charge: expected, report })
}

//! Builders for the named vertex Lie algebras.

use crate::symbolic::{Q, Scalar};
use crate::vlie::{from_products, LambdaPoly, Parity, Presentation, PresentationBuilder, RElem};

use super::lie::{FrobeniusAlgebra, LieAlgebra};
use super::CatalogError;

fn g(name: &str) -> RElem {
    RElem::gen(name)
}

fn tg(name: &str) -> RElem {
    RElem::t_gen(name, 1)
}

fn z(name: &str) -> RElem {
    RElem::central(name)
}

fn s(x: i64) -> Scalar {
    Scalar::int(x)
}

fn r(n: i64, d: i64) -> Scalar {
    Scalar::rational(n, d)
}

/// `(T + hλ) x` for a generator `x`.
fn primary(x: &str, h: Q) -> Vec<(u16, RElem)> {
    vec![(0, tg(x)), (1, g(x).times(&Scalar::from_q(h)))]
}

fn lp(terms: Vec<(u16, RElem)>) -> LambdaPoly {
    from_products(terms)
}

/// `L_λ L = (T + 2λ) L`.
pub fn witt() -> Presentation {
    PresentationBuilder::new("witt")
        .generator("L", Parity::Even, Q::int(2))
        .bracket("L", "L", lp(primary("L", Q::int(2))))
        .build()
        .expect("witt presentation is valid")
}

/// `L_λ L = (T + 2λ) L + (c/2) λ^(3)` with central element `c`.
pub fn virasoro() -> Presentation {
    let mut t = primary("L", Q::int(2));
    t.push((3, z("c").times(&r(1, 2))));
    PresentationBuilder::new("virasoro")
        .generator("L", Parity::Even, Q::int(2))
        .central("c")
        .bracket("L", "L", lp(t))
        .build()
        .expect("virasoro presentation is valid")
}

fn check_symmetric(names: &[&str], form: &[Vec<Scalar>]) -> Result<(), CatalogError> {
    let n = names.len();
    if form.len() != n || form.iter().any(|r| r.len() != n) {
        return Err(CatalogError::Shape("form must be an n x n matrix".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if form[i][j] != form[j][i] {
                return Err(CatalogError::NonSymmetricForm(format!("({}, {})", names[i], names[j])));
            }
        }
    }
    Ok(())
}

/// Rank-n Heisenberg: even weight-1 generators, `a_λ b = (a,b) k λ`.
pub fn heisenberg(names: &[&str], form: &[Vec<Scalar>]) -> Result<Presentation, CatalogError> {
    check_symmetric(names, form)?;
    let mut b = PresentationBuilder::new("heisenberg").central("k");
    for n in names {
        b = b.generator(n, Parity::Even, Q::int(1));
    }
    for i in 0..names.len() {
        for j in i..names.len() {
            if !form[i][j].is_zero() {
                b.add_bracket(names[i], names[j], lp(vec![(1, z("k").times(&form[i][j]))]));
            }
        }
    }
    Ok(b.build()?.rename("heisenberg"))
}

/// Clifford: odd weight-1/2 generators, `a_λ b = (a,b) k`.
pub fn clifford(names: &[&str], form: &[Vec<Scalar>]) -> Result<Presentation, CatalogError> {
    check_symmetric(names, form)?;
    let mut b = PresentationBuilder::new("clifford").central("k");
    for n in names {
        b = b.generator(n, Parity::Odd, Q::new(1, 2));
    }
    for i in 0..names.len() {
        for j in i..names.len() {
            if !form[i][j].is_zero() {
                b.add_bracket(names[i], names[j], lp(vec![(0, z("k").times(&form[i][j]))]));
            }
        }
    }
    Ok(b.build()?)
}

fn lie_element(gl: &LieAlgebra, v: &[Scalar]) -> RElem {
    let mut out = RElem::zero();
    for (name, c) in gl.basis.iter().zip(v) {
        out.add_gen(name.clone(), 0, c.clone());
    }
    out
}

fn add_affine_brackets(b: &mut PresentationBuilder, gl: &LieAlgebra, level: Option<&str>) {
    let n = gl.dim();
    for i in 0..n {
        for j in i..n {
            let mut terms = vec![(0, lie_element(gl, &gl.bracket[i][j]))];
            if let Some(k) = level {
                terms.push((1, z(k).times(&gl.form[i][j])));
            }
            let v = lp(terms);
            if !v.is_zero() {
                b.add_bracket(&gl.basis[i], &gl.basis[j], v);
            }
        }
    }
}

/// Affine vertex Lie algebra: `a_λ b = [a,b] + (a,b) k λ`, weight-1 even
/// generators, central `k`. Structure constants and form are verified.
pub fn affine(gl: &LieAlgebra) -> Result<Presentation, CatalogError> {
    gl.verify()?;
    let mut b = PresentationBuilder::new("affine").central("k");
    for n in &gl.basis {
        b = b.generator(n, Parity::Even, Q::int(1));
    }
    add_affine_brackets(&mut b, gl, Some("k"));
    Ok(b.build()?)
}

/// N=1 (Neveu-Schwarz): `L_λ G = (T + 3/2 λ) G`, `G_λ G = 2L + (2c/3) λ^(2)`.
pub fn neveu_schwarz() -> Presentation {
    let mut ll = primary("L", Q::int(2));
    ll.push((3, z("c").times(&r(1, 2))));
    PresentationBuilder::new("neveu_schwarz")
        .generator("L", Parity::Even, Q::int(2))
        .generator("G", Parity::Odd, Q::new(3, 2))
        .central("c")
        .bracket("L", "L", lp(ll))
        .bracket("L", "G", lp(primary("G", Q::new(3, 2))))
        .bracket("G", "G", lp(vec![(0, g("L").times(&s(2))), (2, z("c").times(&r(2, 3)))]))
        .build()
        .expect("N=1 presentation is valid")
}

/// N=2: generators `L, J, Gp, Gm` (G^±), central `c`.
pub fn n2() -> Presentation {
    let mut ll = primary("L", Q::int(2));
    ll.push((3, z("c").times(&r(1, 2))));
    PresentationBuilder::new("n2")
        .generator("L", Parity::Even, Q::int(2))
        .generator("J", Parity::Even, Q::int(1))
        .generator("Gp", Parity::Odd, Q::new(3, 2))
        .generator("Gm", Parity::Odd, Q::new(3, 2))
        .central("c")
        .bracket("L", "L", lp(ll))
        .bracket("L", "J", lp(primary("J", Q::int(1))))
        .bracket("L", "Gp", lp(primary("Gp", Q::new(3, 2))))
        .bracket("L", "Gm", lp(primary("Gm", Q::new(3, 2))))
        .bracket("J", "J", lp(vec![(1, z("c").times(&r(1, 3)))]))
        .bracket("J", "Gp", lp(vec![(0, g("Gp"))]))
        .bracket("J", "Gm", lp(vec![(0, g("Gm").times(&s(-1)))]))
        .bracket(
            "Gp",
            "Gm",
            lp(vec![
                (0, g("L").times(&s(2)).plus(&tg("J"))),
                (1, g("J").times(&s(2))),
                (2, z("c").times(&r(2, 3))),
            ]),
        )
        .build()
        .expect("N=2 presentation is valid")
}

/// Topological Virasoro: generators `L, J, Q` (odd, weight 1), `G` (odd,
/// weight 2), central `d`; `Q_λ G = L + Jλ + d λ^(2)`.
pub fn topological() -> Presentation {
    PresentationBuilder::new("topological")
        .generator("L", Parity::Even, Q::int(2))
        .generator("J", Parity::Even, Q::int(1))
        .generator("Q", Parity::Odd, Q::int(1))
        .generator("G", Parity::Odd, Q::int(2))
        .central("d")
        .bracket("L", "L", lp(primary("L", Q::int(2))))
        .bracket("L", "J", lp(vec![(0, tg("J")), (1, g("J")), (2, z("d").times(&s(-1)))]))
        .bracket("L", "Q", lp(primary("Q", Q::int(1))))
        .bracket("L", "G", lp(primary("G", Q::int(2))))
        .bracket("J", "J", lp(vec![(1, z("d"))]))
        .bracket("J", "Q", lp(vec![(0, g("Q"))]))
        .bracket("J", "G", lp(vec![(0, g("G").times(&s(-1)))]))
        .bracket("Q", "G", lp(vec![(0, g("L")), (1, g("J")), (2, z("d"))]))
        .build()
        .expect("topological presentation is valid")
}

/// Which central extensions to include in the Witt ⋉ loop(g) semidirect product.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct SemidirectCentrals {
    /// Virasoro central term `(c/2) λ^(3)`.
    pub virasoro: bool,
    /// Affine level term `(a,b) k λ`.
    pub level: bool,
}

/// `Witt ⋉ loop(g)`: `L_λ a = (T + λ) a`, `a_λ b = [a,b]`, optionally with
/// the Virasoro and level central extensions (giving `Vir ⋉ ĝ`).
pub fn witt_loop_semidirect(gl: &LieAlgebra, centrals: SemidirectCentrals) -> Result<Presentation, CatalogError> {
    gl.verify()?;
    if gl.basis.iter().any(|b| b.as_str() == "L") {
        return Err(CatalogError::Shape("the Lie algebra basis must not use the name `L`".into()));
    }
    let mut b = PresentationBuilder::new("witt_loop_semidirect").generator("L", Parity::Even, Q::int(2));
    let mut ll = primary("L", Q::int(2));
    if centrals.virasoro {
        b = b.central("c");
        ll.push((3, z("c").times(&r(1, 2))));
    }
    if centrals.level {
        b = b.central("k");
    }
    b.add_bracket("L", "L", lp(ll));
    for n in &gl.basis {
        b = b.generator(n, Parity::Even, Q::int(1));
        b.add_bracket("L", n, lp(primary(n, Q::int(1))));
    }
    add_affine_brackets(&mut b, gl, if centrals.level { Some("k") } else { None });
    Ok(b.build()?)
}

/// Frobenius construction: weight-2 generators for a basis of `C`,
/// `a_λ b = (T + 2λ)(ab) + (a,b) c λ^(3)`.
pub fn frobenius(alg: &FrobeniusAlgebra) -> Result<Presentation, CatalogError> {
    alg.verify()?;
    let mut b = PresentationBuilder::new("frobenius").central("c");
    for n in &alg.basis {
        b = b.generator(n, Parity::Even, Q::int(2));
    }
    let n = alg.dim();
    for i in 0..n {
        for j in i..n {
            let mut prod = RElem::zero();
            for (name, c) in alg.basis.iter().zip(&alg.product[i][j]) {
                prod.add_gen(name.clone(), 0, c.clone());
            }
            let v = lp(vec![
                (0, prod.t_divided(1)),
                (1, prod.times(&s(2))),
                (3, z("c").times(&alg.form[i][j])),
            ]);
            if !v.is_zero() {
                b.add_bracket(&alg.basis[i], &alg.basis[j], v);
            }
        }
    }
    Ok(b.build()?)
}

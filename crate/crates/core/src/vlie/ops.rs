//! The λ-bracket on the free K[T]-module over the generators and the
//! structures derived from it.

use crate::symbolic::{Exps, OpPoly, Scalar, Var};

use super::presentation::{Presentation, VlieError};
use super::relem::{LambdaPoly, RElem};

/// `(-λ)^(j) (T+λ)^(k)`: the operator moving `T^(j)` out of the left slot
/// and `T^(k)` out of the right slot of a bracket.
fn translation_op(j: u16, k: u16) -> OpPoly {
    let mut right = OpPoly::zero();
    for i in 0..=k {
        let mut e = Exps::zero();
        e.0[Var::T.index()] = i;
        e.0[Var::Lambda.index()] = k - i;
        right.add_term(e, Scalar::one());
    }
    let sign = if j.is_multiple_of(2) { 1 } else { -1 };
    OpPoly::var_power(Var::Lambda, j).scale(&Scalar::int(sign)).mul(&right)
}

/// `x^(e)` as an operator polynomial.
fn mono(e: &Exps) -> OpPoly {
    OpPoly::monomial(*e, Scalar::one())
}

/// Renames λ to `v`.
pub fn in_var(p: &LambdaPoly, v: Var) -> LambdaPoly {
    if v == Var::Lambda {
        return p.clone();
    }
    p.substitute(&[(Var::Lambda, OpPoly::var(v))])
}

fn bracket_unchecked(p: &Presentation, a: &RElem, b: &RElem) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    for (g, j, s) in a.gen_terms() {
        for (h, k, t) in b.gen_terms() {
            let Some(entry) = p.entry_ref(g, h) else { continue };
            if entry.is_zero() {
                continue;
            }
            let moved = if j == 0 && k == 0 { entry.clone() } else { entry.mul_op(&translation_op(j, k)) };
            out = out.add(&moved.scale(&(s * t)));
        }
    }
    out
}

/// `[a_λ b]`, extended from the table by sesquilinearity; central elements
/// bracket to zero.
pub fn bracket(p: &Presentation, a: &RElem, b: &RElem) -> Result<LambdaPoly, VlieError> {
    p.validate_elem(a)?;
    p.validate_elem(b)?;
    Ok(bracket_unchecked(p, a, b))
}

/// `[a_v b]` for a chosen formal variable `v`.
pub fn bracket_in(p: &Presentation, a: &RElem, b: &RElem, v: Var) -> LambdaPoly {
    in_var(&bracket_unchecked(p, a, b), v)
}

/// Given `[b_λ a]` and the Koszul sign of the pair, returns
/// `-(sign)[b_{-λ-T} a]`, T acting on coefficients from the left.
pub fn opposite_from(ba: &LambdaPoly, sign: i64) -> LambdaPoly {
    let image = OpPoly::linear(&[(Var::Lambda, -1), (Var::T, -1)]);
    ba.substitute(&[(Var::Lambda, image)]).scale(&Scalar::int(-sign))
}

fn single_terms(x: &RElem) -> Vec<RElem> {
    x.gen_terms()
        .map(|(g, k, s)| RElem::t_gen(g.as_str(), k).times(s))
        .collect()
}

/// The right-hand side of conformal skew-symmetry, `-(-1)^{|a||b|}[b_{-λ-T} a]`.
pub fn opposite_bracket(p: &Presentation, a: &RElem, b: &RElem) -> Result<LambdaPoly, VlieError> {
    p.validate_elem(a)?;
    p.validate_elem(b)?;
    let mut out = LambdaPoly::zero();
    for x in single_terms(a) {
        for y in single_terms(b) {
            let sign = p.parity_of(&x).unwrap().koszul(p.parity_of(&y).unwrap());
            out = out.add(&opposite_from(&bracket_unchecked(p, &y, &x), sign));
        }
    }
    Ok(out)
}

/// The nonzero `t`-th products `a_t b`, increasing in `t`.
pub fn tth_products(p: &Presentation, a: &RElem, b: &RElem) -> Result<Vec<(u16, RElem)>, VlieError> {
    let br = bracket(p, a, b)?;
    Ok(br.terms().map(|(e, c)| (e.get(Var::Lambda), c.clone())).collect())
}

/// `[a,b]_lie = ∫_{-T}^0 dλ [a_λ b] = Σ_i (-1)^i T^(i+1)(a_i b)`.
pub fn lie_bracket(p: &Presentation, a: &RElem, b: &RElem) -> Result<RElem, VlieError> {
    let br = bracket(p, a, b)?;
    let lower = OpPoly::linear(&[(Var::T, -1)]);
    let integral = br
        .formal_integral(Var::Lambda, &lower, &OpPoly::zero())
        .expect("affine bounds are supported");
    Ok(integral.coeff(&Exps::zero()))
}

/// Least `n` with `a_m b = 0` for all `m >= n`.
pub fn locality_order(p: &Presentation, a: &RElem, b: &RElem) -> Result<u16, VlieError> {
    Ok(bracket(p, a, b)?.degree_in(Var::Lambda).map_or(0, |d| d + 1))
}

/// `Σ_e [x_e _v c] λ^(e)` for `inner = Σ_e x_e λ^(e)` (bracket with an
/// element on the right, inner coefficients on the left).
fn nested_left(p: &Presentation, inner: &LambdaPoly, c: &RElem, v: Var) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    for (e, x) in inner.terms() {
        out = out.add(&bracket_in(p, x, c, v).mul_op(&mono(e)));
    }
    out
}

/// `Σ_e [a_v x_e] (vars)^(e)` for `inner = Σ_e x_e (vars)^(e)`.
fn nested_right(p: &Presentation, a: &RElem, inner: &LambdaPoly, v: Var) -> LambdaPoly {
    let mut out = LambdaPoly::zero();
    for (e, x) in inner.terms() {
        out = out.add(&bracket_in(p, a, x, v).mul_op(&mono(e)));
    }
    out
}

fn koszul(p: &Presentation, a: &RElem, b: &RElem) -> i64 {
    let pa = p.parity_of(a).expect("homogeneous parity");
    let pb = p.parity_of(b).expect("homogeneous parity");
    pa.koszul(pb)
}

/// Residual of `[[a_λ b]_μ c] = [a_λ [b_{μ-λ} c]] - p(a,b)[b_{μ-λ}[a_λ c]]`.
pub fn jacobi_residual(p: &Presentation, a: &RElem, b: &RElem, c: &RElem) -> LambdaPoly {
    let sign = koszul(p, a, b);
    let shift = [(Var::Nu, OpPoly::linear(&[(Var::Mu, 1), (Var::Lambda, -1)]))];
    let lhs = nested_left(p, &bracket_unchecked(p, a, b), c, Var::Mu);
    let r1 = nested_right(p, a, &bracket_in(p, b, c, Var::Nu), Var::Lambda).substitute(&shift);
    let r2 = nested_right(p, b, &bracket_unchecked(p, a, c), Var::Nu).substitute(&shift);
    lhs.sub(&r1).add(&r2.scale(&Scalar::int(sign)))
}

/// Residual of `[a_λ [b_μ c]] - p(a,b)[b_μ [a_λ c]] = [[a_λ b]_{λ+μ} c]`,
/// written as `lhs(λ+μ) - ...` so that it equals [`jacobi_residual`] after
/// `μ ↦ λ+μ`.
pub fn jacobi_residual_shifted(p: &Presentation, a: &RElem, b: &RElem, c: &RElem) -> LambdaPoly {
    let sign = koszul(p, a, b);
    let sum = [(Var::Nu, OpPoly::linear(&[(Var::Lambda, 1), (Var::Mu, 1)]))];
    let lhs = nested_left(p, &bracket_unchecked(p, a, b), c, Var::Nu).substitute(&sum);
    let r1 = nested_right(p, a, &bracket_in(p, b, c, Var::Mu), Var::Lambda);
    let r2 = nested_right(p, b, &bracket_unchecked(p, a, c), Var::Mu);
    lhs.sub(&r1).add(&r2.scale(&Scalar::int(sign)))
}

/// Residual of conformal skew-symmetry.
pub fn skew_residual(p: &Presentation, a: &RElem, b: &RElem) -> LambdaPoly {
    let br = bracket_unchecked(p, a, b);
    let opp = opposite_bracket(p, a, b).expect("validated");
    br.sub(&opp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Q;
    use crate::vlie::{Parity, PresentationBuilder};

    fn l(n: u16) -> OpPoly {
        OpPoly::var_power(Var::Lambda, n)
    }

    pub(crate) fn virasoro_with(two: i64) -> Presentation {
        let tl = LambdaPoly::constant(RElem::t_gen("L", 1));
        let v = tl
            .add(&LambdaPoly::constant(RElem::gen("L").times(&Scalar::int(two))).mul_op(&l(1)))
            .add(&LambdaPoly::constant(RElem::central("c").times(&Scalar::rational(1, 2))).mul_op(&l(3)));
        let b = PresentationBuilder::new("vir").generator("L", Parity::Even, Q::int(2)).central("c");
        let b = if two == 2 { b } else { b.ungraded() };
        b.bracket("L", "L", v).build().unwrap()
    }

    #[test]
    fn virasoro_bracket_and_products() {
        let p = virasoro_with(2);
        let br = bracket(&p, &RElem::gen("L"), &RElem::gen("L")).unwrap();
        assert_eq!(br.to_string(), "T*L + 2*L*l + 1/2*c*l^(3)");
        let tt = tth_products(&p, &RElem::gen("L"), &RElem::gen("L")).unwrap();
        assert_eq!(tt.len(), 3);
        assert_eq!(tt[0], (0, RElem::t_gen("L", 1)));
        assert_eq!(tt[2], (3, RElem::central("c").times(&Scalar::rational(1, 2))));
        assert_eq!(locality_order(&p, &RElem::gen("L"), &RElem::gen("L")).unwrap(), 4);
        // Left T-axiom: [TL_λ L] = -λ [L_λ L].
        let tbr = bracket(&p, &RElem::t_gen("L", 1), &RElem::gen("L")).unwrap();
        assert_eq!(tbr, br.mul_op(&l(1)).neg());
        // Right T-axiom: [L_λ TL] = (T+λ)[L_λ L].
        let brt = bracket(&p, &RElem::gen("L"), &RElem::t_gen("L", 1)).unwrap();
        let t_plus_l = OpPoly::linear(&[(Var::T, 1), (Var::Lambda, 1)]);
        assert_eq!(brt, br.mul_op(&t_plus_l));
    }

    #[test]
    fn virasoro_skew_and_jacobi_hold() {
        let p = virasoro_with(2);
        let x = RElem::gen("L");
        assert!(skew_residual(&p, &x, &x).is_zero());
        assert!(jacobi_residual(&p, &x, &x, &x).is_zero());
        assert!(jacobi_residual_shifted(&p, &x, &x, &x).is_zero());
        assert_eq!(lie_bracket(&p, &x, &x).unwrap(), RElem::zero());
    }

    #[test]
    fn corrupted_virasoro_fails_skew() {
        let p = virasoro_with(3);
        let x = RElem::gen("L");
        assert!(!skew_residual(&p, &x, &x).is_zero());
    }

    #[test]
    fn lie_bracket_matches_termwise_formula() {
        // Oracle: Σ (-1)^i T^(i+1)(a_i b) computed from the t-th products.
        let p = virasoro_with(2);
        let a = RElem::gen("L").plus(&RElem::t_gen("L", 1));
        let b = RElem::t_gen("L", 2);
        let mut want = RElem::zero();
        for (t, c) in tth_products(&p, &a, &b).unwrap() {
            let sign = if t % 2 == 0 { 1 } else { -1 };
            want = want.plus(&c.t_divided(t + 1).times(&Scalar::int(sign)));
        }
        assert_eq!(lie_bracket(&p, &a, &b).unwrap(), want);
    }
}

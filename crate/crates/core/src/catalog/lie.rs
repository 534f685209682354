//! Finite-dimensional input data for the affine, semidirect and Frobenius
//! builders, with the structural checks the builders rely on.

use crate::symbolic::{Scalar, Symbol};

use super::CatalogError;

/// Dense coordinate vector over a named basis.
pub type Vector = Vec<Scalar>;

/// A Lie algebra given by structure constants, with a bilinear form.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    pub basis: Vec<Symbol>,
    /// `bracket[i][j]` = coordinates of `[e_i, e_j]`.
    pub bracket: Vec<Vec<Vector>>,
    /// `form[i][j] = (e_i, e_j)`.
    pub form: Vec<Vec<Scalar>>,
}

fn zero_vec(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

fn add_scaled(acc: &mut Vector, v: &Vector, s: &Scalar) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += &(b * s);
    }
}

fn render_vec(basis: &[Symbol], v: &Vector) -> String {
    let parts: Vec<String> = basis
        .iter()
        .zip(v)
        .filter(|(_, s)| !s.is_zero())
        .map(|(b, s)| format!("({s})*{b}"))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl LieAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sl_2` with basis `e, h, f`, `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`
    /// and the trace form `(e,f) = 1`, `(h,h) = 2`.
    pub fn sl2() -> LieAlgebra {
        let basis: Vec<Symbol> = ["e", "h", "f"].iter().map(|s| Symbol::new(s)).collect();
        let (e, h, f) = (0, 1, 2);
        let mut bracket = vec![vec![zero_vec(3); 3]; 3];
        let mut set = |i: usize, j: usize, k: usize, c: i64| {
            bracket[i][j][k] = Scalar::int(c);
            bracket[j][i][k] = Scalar::int(-c);
        };
        set(e, f, h, 1);
        set(h, e, e, 2);
        set(h, f, f, -2);
        let mut form = vec![vec![Scalar::zero(); 3]; 3];
        form[e][f] = Scalar::one();
        form[f][e] = Scalar::one();
        form[h][h] = Scalar::int(2);
        LieAlgebra { basis, bracket, form }
    }

    /// Abelian Lie algebra with the given basis names and form.
    pub fn abelian(names: &[&str], form: Vec<Vec<Scalar>>) -> LieAlgebra {
        let n = names.len();
        LieAlgebra {
            basis: names.iter().map(|s| Symbol::new(s)).collect(),
            bracket: vec![vec![zero_vec(n); n]; n],
            form,
        }
    }

    pub fn bracket_vec(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let mut out = zero_vec(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                add_scaled(&mut out, &self.bracket[i][j], &(&x[i] * &y[j]));
            }
        }
        out
    }

    pub fn form_vec(&self, x: &Vector, y: &Vector) -> Scalar {
        let mut out = Scalar::zero();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out += &(&(&x[i] * &y[j]) * &self.form[i][j]);
            }
        }
        out
    }

    pub fn unit(&self, i: usize) -> Vector {
        let mut v = zero_vec(self.dim());
        v[i] = Scalar::one();
        v
    }

    /// Antisymmetry, Jacobi identity, symmetry and invariance of the form.
    pub fn verify(&self) -> Result<(), CatalogError> {
        let n = self.dim();
        if self.bracket.len() != n || self.bracket.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(CatalogError::Shape("structure constants must be an n x n x n tensor".into()));
        }
        if self.form.len() != n || self.form.iter().any(|r| r.len() != n) {
            return Err(CatalogError::Shape("form must be an n x n matrix".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let mut s = self.bracket[i][j].clone();
                add_scaled(&mut s, &self.bracket[j][i], &Scalar::one());
                if s.iter().any(|x| !x.is_zero()) {
                    return Err(CatalogError::NotLie(format!(
                        "[{}, {}] is not antisymmetric",
                        self.basis[i], self.basis[j]
                    )));
                }
                if self.form[i][j] != self.form[j][i] {
                    return Err(CatalogError::NonSymmetricForm(format!(
                        "({}, {}) != ({}, {})",
                        self.basis[i], self.basis[j], self.basis[j], self.basis[i]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                    // [a,[b,c]] - [[a,b],c] - [b,[a,c]] = 0
                    let mut r = self.bracket_vec(&a, &self.bracket_vec(&b, &c));
                    add_scaled(&mut r, &self.bracket_vec(&self.bracket_vec(&a, &b), &c), &Scalar::int(-1));
                    add_scaled(&mut r, &self.bracket_vec(&b, &self.bracket_vec(&a, &c)), &Scalar::int(-1));
                    if r.iter().any(|x| !x.is_zero()) {
                        return Err(CatalogError::NotLie(format!(
                            "Jacobi identity fails on ({}, {}, {}): {}",
                            self.basis[i],
                            self.basis[j],
                            self.basis[k],
                            render_vec(&self.basis, &r)
                        )));
                    }
                    // ([a,b],c) = (a,[b,c])
                    let lhs = self.form_vec(&self.bracket_vec(&a, &b), &c);
                    let rhs = self.form_vec(&a, &self.bracket_vec(&b, &c));
                    if lhs != rhs {
                        return Err(CatalogError::NonInvariantForm(format!(
                            "([{a}, {b}], {c}) = {lhs} but ({a}, [{b}, {c}]) = {rhs}",
                            a = self.basis[i],
                            b = self.basis[j],
                            c = self.basis[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A commutative algebra with a bilinear form, input to the Frobenius builder.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusAlgebra {
    pub basis: Vec<Symbol>,
    /// `product[i][j]` = coordinates of `e_i e_j`.
    pub product: Vec<Vec<Vector>>,
    pub form: Vec<Vec<Scalar>>,
}

impl FrobeniusAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Q^n` with orthogonal idempotents `e_i` and `(e_i, e_i) = form_diag[i]`.
    pub fn split(names: &[&str], form_diag: &[Scalar]) -> FrobeniusAlgebra {
        let n = names.len();
        let mut product = vec![vec![zero_vec(n); n]; n];
        let mut form = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            product[i][i][i] = Scalar::one();
            form[i][i] = form_diag[i].clone();
        }
        FrobeniusAlgebra { basis: names.iter().map(|s| Symbol::new(s)).collect(), product, form }
    }

    pub fn mul_vec(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let mut out = zero_vec(n);
        for i in 0..n {
            for j in 0..n {
                if x[i].is_zero() || y[j].is_zero() {
                    continue;
                }
                add_scaled(&mut out, &self.product[i][j], &(&x[i] * &y[j]));
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vector {
        let mut v = zero_vec(self.dim());
        v[i] = Scalar::one();
        v
    }

    fn form_vec(&self, x: &Vector, y: &Vector) -> Scalar {
        let mut out = Scalar::zero();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out += &(&(&x[i] * &y[j]) * &self.form[i][j]);
            }
        }
        out
    }

    /// Commutativity, associativity, symmetry and invariance of the form.
    pub fn verify(&self) -> Result<(), CatalogError> {
        let n = self.dim();
        if self.product.len() != n || self.product.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(CatalogError::Shape("product must be an n x n x n tensor".into()));
        }
        if self.form.len() != n || self.form.iter().any(|r| r.len() != n) {
            return Err(CatalogError::Shape("form must be an n x n matrix".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if self.product[i][j] != self.product[j][i] {
                    return Err(CatalogError::NotFrobenius(format!(
                        "product of {} and {} is not commutative",
                        self.basis[i], self.basis[j]
                    )));
                }
                if self.form[i][j] != self.form[j][i] {
                    return Err(CatalogError::NonSymmetricForm(format!("{} {}", self.basis[i], self.basis[j])));
                }
                for k in 0..n {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                    if self.mul_vec(&self.mul_vec(&a, &b), &c) != self.mul_vec(&a, &self.mul_vec(&b, &c)) {
                        return Err(CatalogError::NotFrobenius(format!(
                            "product is not associative on ({}, {}, {})",
                            self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                    if self.form_vec(&self.mul_vec(&a, &b), &c) != self.form_vec(&a, &self.mul_vec(&b, &c)) {
                        return Err(CatalogError::NonInvariantForm(format!(
                            "(ab, c) != (a, bc) for ({}, {}, {})",
                            self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_is_a_lie_algebra_with_invariant_form() {
        LieAlgebra::sl2().verify().unwrap();
    }

    #[test]
    fn broken_structure_constants_are_rejected() {
        let mut g = LieAlgebra::sl2();
        g.bracket[1][0][0] = Scalar::int(3);
        g.bracket[0][1][0] = Scalar::int(-3);
        // [h,e] = 3e breaks invariance of the trace form (and not Jacobi alone)
        assert!(g.verify().is_err());
        let mut g = LieAlgebra::sl2();
        g.form[1][1] = Scalar::int(5);
        assert!(matches!(g.verify(), Err(CatalogError::NonInvariantForm(_))));
        let mut g = LieAlgebra::sl2();
        g.bracket[0][2][1] = Scalar::int(2);
        assert!(matches!(g.verify(), Err(CatalogError::NotLie(_))));
    }

    #[test]
    fn frobenius_checks() {
        let c = FrobeniusAlgebra::split(&["u", "v"], &[Scalar::rational(1, 2), Scalar::int(3)]);
        c.verify().unwrap();
        let mut bad = c.clone();
        bad.product[0][1][0] = Scalar::one();
        assert!(bad.verify().is_err());
    }
}

use std::collections::BTreeMap;

use crate::symbolic::linalg::{RowSpace, SparseVec};
use crate::symbolic::{Q, Scalar};

use super::context::EnvContext;
use super::dims::basis_by_weight;
use super::state::{EnvElem, Word};

/// One graded piece of `V/C₂(V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct C2Weight {
    pub weight: Q,
    /// `dim V_h`.
    pub dim: usize,
    /// `dim C₂(V)_h`.
    pub c2_rank: usize,
    /// PBW words whose classes form a basis of the quotient at this weight.
    pub quotient_basis: Vec<Word>,
}

/// `V/C₂(V)` up to a weight bound, with the induced product `a_(-1)b` and
/// bracket `a_(0)b` on the quotient basis (entries whose weight exceeds the
/// bound are omitted).
#[derive(Clone, Debug)]
pub struct C2Report {
    pub weights: Vec<C2Weight>,
    /// Quotient basis, in the order used by `product` and `bracket`.
    pub basis: Vec<Word>,
    /// `(i, j, class of b_i (-1) b_j)` written in the quotient basis words.
    pub product: Vec<(usize, usize, EnvElem)>,
    /// `(i, j, class of b_i (0) b_j)`.
    pub bracket: Vec<(usize, usize, EnvElem)>,
    /// True if a parameter-dependent pivot was used (results hold for
    /// generic parameter values).
    pub generic: bool,
    spaces: Vec<RowSpace<Word>>,
    den: i64,
}

impl C2Report {
    pub fn dims(&self) -> Vec<(Q, usize)> {
        self.weights.iter().map(|w| (w.weight.clone(), w.quotient_basis.len())).collect()
    }

    /// The class of `x` modulo `C₂(V)`, reduced per weight; `None` if some
    /// component lies above the computed bound.
    pub fn reduce(&self, ctx: &EnvContext, x: &EnvElem) -> Option<EnvElem> {
        let mut parts: BTreeMap<i64, SparseVec<Word>> = BTreeMap::new();
        for (w, s) in x.terms() {
            parts.entry(ctx.scaled_weight(w)).or_default().insert(w.clone(), s.clone());
        }
        let mut out = EnvElem::zero();
        for (wt, v) in parts {
            let space = self.spaces.get(wt as usize)?;
            let red = space.reduce(&v);
            let inv = red.multiplier.as_constant().map(|q| Scalar::from_q(q.recip()));
            for (w, s) in red.residual {
                match &inv {
                    Some(f) => out.add_term(w, &s * f),
                    None => out.add_term(w, s),
                }
            }
        }
        debug_assert!(self.den > 0);
        Some(out)
    }
}

/// Computes `C₂(V)_h = span{(Tu)_(-1) v : h_u + 1 + h_v = h}` over basis
/// states `u, v` for every `h ≤ h_max` and the quotient structure.
pub fn c2_quotient(ctx: &EnvContext, h_max: &Q) -> C2Report {
    let den = ctx.weight_denominator();
    let basis = basis_by_weight(ctx, h_max);
    let mut spaces: Vec<RowSpace<Word>> = (0..basis.len()).map(|_| RowSpace::new()).collect();
    for (wu, us) in basis.iter().enumerate() {
        for u in us {
            let tu = ctx.translate(&EnvElem::word(u.clone()));
            if tu.is_zero() {
                continue;
            }
            for (wv, vs) in basis.iter().enumerate() {
                let target = wu + den as usize + wv;
                if target >= basis.len() {
                    break;
                }
                for v in vs {
                    let prod = ctx.nth_product(&tu, -1, &EnvElem::word(v.clone()));
                    spaces[target].insert(prod.as_map());
                }
            }
        }
    }
    let mut weights = Vec::new();
    let mut all = Vec::new();
    for (w, words) in basis.iter().enumerate() {
        let quotient: Vec<Word> = words.iter().filter(|x| !spaces[w].is_pivot(x)).cloned().collect();
        all.extend(quotient.iter().cloned());
        weights.push(C2Weight {
            weight: Q::new(w as i64, den),
            dim: words.len(),
            c2_rank: spaces[w].rank(),
            quotient_basis: quotient,
        });
    }
    let generic = spaces.iter().any(|s| s.is_generic());
    let mut report = C2Report { weights, basis: all, product: Vec::new(), bracket: Vec::new(), generic, spaces, den };
    let top = basis.len() as i64 - 1;
    for (i, a) in report.basis.iter().enumerate() {
        for (j, b) in report.basis.iter().enumerate() {
            let (wa, wb) = (ctx.scaled_weight(a), ctx.scaled_weight(b));
            let (ea, eb) = (EnvElem::word(a.clone()), EnvElem::word(b.clone()));
            if wa + wb <= top {
                let p = ctx.nth_product(&ea, -1, &eb);
                if let Some(r) = report.reduce(ctx, &p) {
                    report.product.push((i, j, r));
                }
            }
            if wa + wb - den <= top {
                let p = ctx.nth_product(&ea, 0, &eb);
                if let Some(r) = report.reduce(ctx, &p) {
                    report.bracket.push((i, j, r));
                }
            }
        }
    }
    report
}

//! Sparse row reduction over `Q[params]`.
//!
//! Rows are kept fully reduced: every stored row vanishes at the pivots of all
//! other rows. Pivots with a constant coefficient are preferred; when only
//! parameter-dependent coefficients are available the elimination is
//! fraction-free and the accumulated multiplier is reported, so results are
//! valid for generic parameter values (wherever the multiplier is nonzero).

use std::collections::BTreeMap;

use super::scalar::Scalar;

pub type SparseVec<K> = BTreeMap<K, Scalar>;

#[derive(Debug, Clone)]
struct Row<K> {
    entries: SparseVec<K>,
}

/// Result of reducing a vector against a [`RowSpace`]:
/// `multiplier * v ≡ residual` modulo the span.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduced<K> {
    pub residual: SparseVec<K>,
    pub multiplier: Scalar,
}

#[derive(Debug, Clone)]
pub struct RowSpace<K: Ord + Clone> {
    rows: Vec<Row<K>>,
    pivot_of: BTreeMap<K, usize>,
    generic: bool,
}

impl<K: Ord + Clone> Default for RowSpace<K> {
    fn default() -> Self {
        RowSpace { rows: Vec::new(), pivot_of: BTreeMap::new(), generic: false }
    }
}

fn axpy<K: Ord + Clone>(a: &Scalar, x: &SparseVec<K>, b: &Scalar, y: &SparseVec<K>) -> SparseVec<K> {
    // a*x + b*y
    let mut out = SparseVec::new();
    for (k, v) in x {
        let s = a * v;
        if !s.is_zero() {
            out.insert(k.clone(), s);
        }
    }
    for (k, v) in y {
        let s = b * v;
        if s.is_zero() {
            continue;
        }
        match out.get_mut(k) {
            Some(old) => {
                *old += &s;
                if old.is_zero() {
                    out.remove(k);
                }
            }
            None => {
                out.insert(k.clone(), s);
            }
        }
    }
    out
}

impl<K: Ord + Clone> RowSpace<K> {
    pub fn new() -> Self {
        RowSpace::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivot_of.contains_key(k)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.pivot_of.keys()
    }

    /// True once a parameter-dependent pivot has been used, i.e. results
    /// hold for generic parameter values.
    pub fn is_generic(&self) -> bool {
        self.generic
    }

    /// Eliminates every pivot coordinate from `v`.
    pub fn reduce(&self, v: &SparseVec<K>) -> Reduced<K> {
        let mut cur = v.clone();
        let mut multiplier = Scalar::one();
        let hits: Vec<K> = cur.keys().filter(|k| self.pivot_of.contains_key(*k)).cloned().collect();
        for k in hits {
            let Some(coef) = cur.get(&k).cloned() else { continue };
            let row = &self.rows[self.pivot_of[&k]];
            let piv = &row.entries[&k];
            if let Some(q) = piv.as_constant() {
                let f = coef.scale(&(-&q.recip()));
                cur = axpy(&Scalar::one(), &cur, &f, &row.entries);
            } else {
                cur = axpy(piv, &cur, &-&coef, &row.entries);
                multiplier = &multiplier * piv;
            }
            debug_assert!(!cur.contains_key(&k));
        }
        Reduced { residual: cur, multiplier }
    }

    /// Adds `v` to the span; returns `false` if it was already contained.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let red = self.reduce(v).residual;
        if red.is_empty() {
            return false;
        }
        // Prefer the largest coordinate with a constant coefficient.
        let pivot = red
            .iter()
            .rev()
            .find(|(_, c)| c.is_unit())
            .or_else(|| red.iter().next_back())
            .map(|(k, _)| k.clone())
            .expect("nonempty");
        let piv = red[&pivot].clone();
        let entries = if let Some(q) = piv.as_constant() {
            let inv = Scalar::from_q(q.recip());
            red.iter().map(|(k, c)| (k.clone(), c * &inv)).collect()
        } else {
            self.generic = true;
            red
        };
        let piv = entries[&pivot].clone();
        for row in &mut self.rows {
            if let Some(coef) = row.entries.get(&pivot).cloned() {
                row.entries = if piv.is_one() {
                    axpy(&Scalar::one(), &row.entries, &-&coef, &entries)
                } else {
                    axpy(&piv, &row.entries, &-&coef, &entries)
                };
            }
        }
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push(Row { entries });
        true
    }

    /// Whether `v` lies in the span (for generic parameters).
    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).residual.is_empty()
    }
}

use crate::symbolic::Q;

use super::context::EnvContext;
use super::state::{Mode, Word};

/// Dimensions of `V_h` for `h = 0, 1/D, 2/D, ..., h_max` (D the weight denominator).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDims {
    pub dims: Vec<(Q, usize)>,
}

impl GradedDims {
    /// Dimensions at the given weight, 0 if out of range.
    pub fn at(&self, h: &Q) -> usize {
        self.dims.iter().find(|(w, _)| w == h).map(|(_, d)| *d).unwrap_or(0)
    }

    pub fn values(&self) -> Vec<usize> {
        self.dims.iter().map(|(_, d)| *d).collect()
    }
}

/// Creation modes `g_(t)`, `t ≤ -1`, of weight at most `max` (scaled), in PBW order.
fn creation_modes(ctx: &EnvContext, max: i64) -> Vec<(Mode, i64)> {
    let den = ctx.weight_denominator();
    let mut out = Vec::new();
    for g in 0..ctx.num_generators() as u16 {
        let h = ctx.scaled_generator_weight(g);
        let mut k = 0i64;
        while h + k * den <= max {
            out.push((Mode { t: (-1 - k) as i32, g }, h + k * den));
            k += 1;
        }
    }
    out.sort();
    out
}

/// All PBW words of weight ≤ `h_max`, grouped by weight (index = scaled weight).
pub fn basis_by_weight(ctx: &EnvContext, h_max: &Q) -> Vec<Vec<Word>> {
    let den = ctx.weight_denominator();
    let max = (h_max * &Q::int(den)).floor();
    if max < 0 {
        return Vec::new();
    }
    let modes = creation_modes(ctx, max);
    let mut out = vec![Vec::new(); max as usize + 1];
    let mut word = Vec::new();
    enumerate(ctx, &modes, 0, 0, max, &mut word, &mut out);
    for ws in &mut out {
        ws.sort();
    }
    out
}

fn enumerate(
    ctx: &EnvContext,
    modes: &[(Mode, i64)],
    start: usize,
    weight: i64,
    max: i64,
    word: &mut Word,
    out: &mut Vec<Vec<Word>>,
) {
    out[weight as usize].push(word.clone());
    for (i, (m, w)) in modes.iter().enumerate().skip(start) {
        if weight + w > max {
            continue;
        }
        // even modes may repeat, odd modes may not
        let next = if ctx.is_odd(m.g) { i + 1 } else { i };
        word.push(*m);
        enumerate(ctx, modes, next, weight + w, max, word, out);
        word.pop();
    }
}

/// Graded dimensions by enumerating PBW words.
pub fn graded_dimension(ctx: &EnvContext, h_max: &Q) -> GradedDims {
    let den = ctx.weight_denominator();
    let basis = basis_by_weight(ctx, h_max);
    GradedDims { dims: basis.iter().enumerate().map(|(i, ws)| (Q::new(i as i64, den), ws.len())).collect() }
}

/// Graded dimensions of the symmetric algebra `S*R` of the free `K[T]`-module
/// on the generators, from its generating function
/// `Π_even 1/(1 - q^w) · Π_odd (1 + q^w)` over the basis `T^k g` of `R`.
pub fn symmetric_algebra_dimension(ctx: &EnvContext, h_max: &Q) -> GradedDims {
    let den = ctx.weight_denominator();
    let max = (h_max * &Q::int(den)).floor();
    if max < 0 {
        return GradedDims { dims: Vec::new() };
    }
    let n = max as usize + 1;
    let mut series = vec![0u128; n];
    series[0] = 1;
    for g in 0..ctx.num_generators() as u16 {
        let mut w = ctx.scaled_generator_weight(g) as usize;
        while w < n {
            if ctx.is_odd(g) {
                for i in (w..n).rev() {
                    series[i] += series[i - w];
                }
            } else {
                for i in w..n {
                    series[i] += series[i - w];
                }
            }
            w += den as usize;
        }
    }
    GradedDims { dims: series.iter().enumerate().map(|(i, d)| (Q::new(i as i64, den), *d as usize)).collect() }
}

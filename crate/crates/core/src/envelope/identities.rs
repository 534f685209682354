use std::cell::RefCell;
use std::rc::Rc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rustc_hash::FxHashMap;

use crate::report::{Check, Report};
use crate::symbolic::{binom, Q, Scalar};

use super::context::EnvContext;
use super::state::EnvElem;
use super::EnvError;

/// Index windows for [`verify_identities`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityWindows {
    /// Indices `r` for skew-symmetry.
    pub skew: (i32, i32),
    /// Indices for the commutator, associativity and Jacobi identities;
    /// the upper end also bounds `n` in the Wick formulas.
    pub triple: (i32, i32),
    /// Random triples for the fundamental recursion.
    pub recursion_samples: usize,
    pub seed: u64,
}

impl Default for IdentityWindows {
    fn default() -> Self {
        IdentityWindows { skew: (-3, 3), triple: (-2, 2), recursion_samples: 50, seed: 1 }
    }
}

/// Per-identity accumulator: number of cases and the first failure.
struct Tally {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally { name, cases: 0, failure: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    fn check(self) -> Check {
        let c = match self.failure {
            None => Check::pass(self.name),
            Some(w) => Check::fail(self.name, w),
        };
        c.with_value(serde_json::json!({ "cases": self.cases }))
    }
}

struct Engine<'a> {
    ctx: &'a EnvContext,
    den: i64,
    /// `a_(n) b` for pool items, keyed by item positions.
    pairs: RefCell<FxHashMap<(usize, i64, usize), Rc<EnvElem>>>,
}

/// Element of the pool with its cached weight bound and parity.
struct Item {
    id: usize,
    x: EnvElem,
    w: i64,
    odd: bool,
}

fn signed(q: Q, negate: bool) -> Scalar {
    Scalar::from_q(if negate { -&q } else { q })
}

impl Engine<'_> {
    fn p(&self, x: &EnvElem, n: i64, y: &EnvElem) -> EnvElem {
        self.ctx.nth_product(x, n as i32, y)
    }

    /// `a_(n) b` for pool items, memoized.
    fn pair(&self, a: &Item, n: i64, b: &Item) -> Rc<EnvElem> {
        if n > self.top(a.w, b.w) {
            return Rc::new(EnvElem::zero());
        }
        let key = (a.id, n, b.id);
        if let Some(hit) = self.pairs.borrow().get(&key) {
            return hit.clone();
        }
        let v = Rc::new(self.p(&a.x, n, &b.x));
        self.pairs.borrow_mut().insert(key, v.clone());
        v
    }

    /// Largest `m` with `x_(m) y` possibly nonzero.
    fn top(&self, wx: i64, wy: i64) -> i64 {
        (wx + wy).div_euclid(self.den) - 1
    }

    fn sign(a: &Item, b: &Item) -> Scalar {
        Scalar::int(if a.odd && b.odd { -1 } else { 1 })
    }

    /// Largest `n` with `x_(n) y ≠ 0` plus one; `None` when every product vanishes.
    fn locality(&self, a: &Item, b: &Item) -> Option<i64> {
        let mut m = self.top(a.w, b.w);
        let floor = m - 64;
        while m > floor {
            if !self.pair(a, m, b).is_zero() {
                return Some(m + 1);
            }
            m -= 1;
        }
        None
    }
}

/// Which iterated product of a triple `(a, b, c)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
enum Shape {
    /// `(a_(m) b)_(n) c`
    LeftAb,
    /// `(b_(m) a)_(n) c`
    LeftBa,
    /// `a_(m) b_(n) c`
    RightAb,
    /// `b_(m) a_(n) c`
    RightBa,
}

/// Iterated products of one triple, memoized for the lifetime of the triple.
struct Triple<'e, 'a> {
    e: &'e Engine<'a>,
    a: &'e Item,
    b: &'e Item,
    c: &'e Item,
    p: Scalar,
    memo: RefCell<FxHashMap<(Shape, i64, i64), Rc<EnvElem>>>,
}

impl<'e, 'a> Triple<'e, 'a> {
    fn new(e: &'e Engine<'a>, a: &'e Item, b: &'e Item, c: &'e Item) -> Self {
        Triple { e, a, b, c, p: Engine::sign(a, b), memo: RefCell::new(FxHashMap::default()) }
    }

    fn get(&self, shape: Shape, m: i64, n: i64) -> Rc<EnvElem> {
        let key = (shape, m, n);
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let (e, a, b, c) = (self.e, self.a, self.b, self.c);
        let v = match shape {
            Shape::LeftAb => e.p(&e.pair(a, m, b), n, &c.x),
            Shape::LeftBa => e.p(&e.pair(b, m, a), n, &c.x),
            Shape::RightAb => e.p(&a.x, m, &e.pair(b, n, c)),
            Shape::RightBa => e.p(&b.x, m, &e.pair(a, n, c)),
        };
        let v = Rc::new(v);
        self.memo.borrow_mut().insert(key, v.clone());
        v
    }

    /// `a_(t) b_(s) c - p b_(s) a_(t) c`.
    fn commutator(&self, t: i64, s: i64) -> EnvElem {
        self.get(Shape::RightAb, t, s).minus(&self.get(Shape::RightBa, s, t).times(&self.p))
    }

    /// `Σ_i binom(t,i) (a_(r+i) b)_(s+t-i) c`.
    fn jacobi_lhs(&self, r: i64, s: i64, t: i64) -> EnvElem {
        let mut out = EnvElem::zero();
        let mut last = self.e.top(self.a.w, self.b.w) - r;
        if t >= 0 {
            last = last.min(t);
        }
        for i in 0..=last.max(-1) {
            out.add_scaled(&self.get(Shape::LeftAb, r + i, s + t - i), &Scalar::from_q(binom(t, i)));
        }
        out
    }

    /// `Σ_i (-1)^i binom(r,i) (a_(r+t-i) b_(s+i) c - p (-1)^r b_(s+r-i) a_(t+i) c)`,
    /// optionally without the second term.
    fn jacobi_rhs(&self, r: i64, s: i64, t: i64, second: bool) -> EnvElem {
        let e = self.e;
        let mut out = EnvElem::zero();
        let cap = |last: i64| if r >= 0 { last.min(r) } else { last };
        for i in 0..=cap(e.top(self.b.w, self.c.w) - s).max(-1) {
            out.add_scaled(&self.get(Shape::RightAb, r + t - i, s + i), &signed(binom(r, i), i % 2 == 1));
        }
        if second {
            for i in 0..=cap(e.top(self.a.w, self.c.w) - t).max(-1) {
                let f = &signed(binom(r, i), (i + r) % 2 == 0) * &self.p;
                out.add_scaled(&self.get(Shape::RightBa, s + r - i, t + i), &f);
            }
        }
        out
    }

    /// `Σ_i binom(t,i) (a_(i) b)_(t+s-i) c`.
    fn commutator_rhs(&self, t: i64, s: i64) -> EnvElem {
        let mut out = EnvElem::zero();
        let mut last = self.e.top(self.a.w, self.b.w);
        if t >= 0 {
            last = last.min(t);
        }
        for i in 0..=last.max(-1) {
            out.add_scaled(&self.get(Shape::LeftAb, i, t + s - i), &Scalar::from_q(binom(t, i)));
        }
        out
    }

    /// Locality of `a_(r) b` with `c`.
    fn locality_left(&self, r: i64, wab: i64) -> Option<i64> {
        let mut m = self.e.top(wab, self.c.w);
        let floor = m - 64;
        while m > floor {
            if !self.get(Shape::LeftAb, r, m).is_zero() {
                return Some(m + 1);
            }
            m -= 1;
        }
        None
    }
}

/// Verifies the field identities of the vertex algebra on every tuple drawn
/// from `pool` and every index in `windows`, with exact equality.
///
/// Checks (one report entry each): skew-symmetry, the commutator formula, the
/// associativity formula, the Jacobi identity, agreement of Jacobi at
/// `r = 0` with the commutator formula, duality for `t ≥ o(a,c)`, the
/// locality-function inequality, left and right Wick formulas,
/// quasi-associativity, the pre-Lie identity of the `(-1)`-product, skew-symmetry
/// at index `-1` (`[a,b]_* = [a,b]_lie`), and the fundamental recursion on
/// random index triples.
pub fn verify_identities(ctx: &EnvContext, pool: &[EnvElem], windows: &IdentityWindows) -> Result<Report, EnvError> {
    let mut items = Vec::new();
    for (id, x) in pool.iter().enumerate() {
        let odd = ctx
            .parity(x)
            .ok_or_else(|| EnvError::Inhomogeneous(x.render(ctx.names())))?
            .is_odd();
        let w = ctx.max_scaled_weight(x).expect("nonzero");
        items.push(Item { id, x: x.clone(), w, odd });
    }
    let e = Engine { ctx, den: ctx.weight_denominator(), pairs: RefCell::new(FxHashMap::default()) };
    let names = ctx.names();
    let show = |x: &EnvElem| x.render(names);
    let (lo, hi) = (windows.triple.0 as i64, windows.triple.1 as i64);

    let mut skew = Tally::new("skew-symmetry");
    let mut lie = Tally::new("lie-bracket");
    for a in &items {
        for b in &items {
            let p = Engine::sign(a, b);
            for r in windows.skew.0 as i64..=windows.skew.1 as i64 {
                let lhs = e.pair(a, r, b);
                let mut rhs = EnvElem::zero();
                for i in 0..=(e.top(a.w, b.w) - r).max(-1) {
                    let ba = e.pair(b, r + i, a);
                    if ba.is_zero() {
                        continue;
                    }
                    let f = &signed(Q::one(), (r + 1 + i) % 2 != 0) * &p;
                    rhs.add_scaled(&ctx.translate_divided(&ba, i as u32), &f);
                }
                skew.record(*lhs == rhs, || format!("a = {}, b = {}, r = {r}", show(&a.x), show(&b.x)));
            }
            // a_(-1) b - p b_(-1) a = Σ_j (-1)^j T^(j+1) (a_(j) b)
            let lhs = e.pair(a, -1, b).minus(&e.pair(b, -1, a).times(&p));
            let mut rhs = EnvElem::zero();
            for j in 0..=e.top(a.w, b.w).max(-1) {
                let ab = e.pair(a, j, b);
                rhs.add_scaled(&ctx.translate_divided(&ab, j as u32 + 1), &signed(Q::one(), j % 2 == 1));
            }
            lie.record(lhs == rhs, || format!("a = {}, b = {}", show(&a.x), show(&b.x)));
        }
    }

    let mut comm = Tally::new("commutator");
    let mut assoc = Tally::new("associativity");
    let mut jac = Tally::new("jacobi");
    let mut agree = Tally::new("jacobi-commutator-agreement");
    let mut dual = Tally::new("duality");
    let mut loc = Tally::new("locality-inequality");
    let mut lwick = Tally::new("left-wick");
    let mut rwick = Tally::new("right-wick");
    let mut qassoc = Tally::new("quasi-associativity");
    let mut prelie = Tally::new("pre-lie");
    for a in &items {
        for b in &items {
            let o_ab = e.locality(a, b);
            for c in &items {
                let tr = Triple::new(&e, a, b, c);
                let p = &tr.p;
                let wit = |idx: String| format!("a = {}, b = {}, c = {}{idx}", show(&a.x), show(&b.x), show(&c.x));
                let o_ac = e.locality(a, c);
                let o_bc = e.locality(b, c);
                for t in lo..=hi {
                    for s in lo..=hi {
                        comm.record(tr.commutator(t, s) == tr.commutator_rhs(t, s), || {
                            wit(format!(", t = {t}, s = {s}"))
                        });
                        // associativity formula (r = t here, second index s)
                        let r = t;
                        let lhs = tr.get(Shape::LeftAb, r, s);
                        assoc.record(*lhs == tr.jacobi_rhs(r, s, 0, true), || wit(format!(", r = {r}, s = {s}")));
                        for t in lo..=hi {
                            let ok = tr.jacobi_lhs(r, s, t) == tr.jacobi_rhs(r, s, t, true);
                            jac.record(ok, || wit(format!(", r = {r}, s = {s}, t = {t}")));
                        }
                    }
                }
                // Jacobi at r = 0, t ≥ 0 versus the commutator formula.
                for t in 0..=hi {
                    for s in lo..=hi {
                        let res_j = tr.jacobi_lhs(0, s, t).minus(&tr.jacobi_rhs(0, s, t, true));
                        let res_c = tr.commutator_rhs(t, s).minus(&tr.commutator(t, s));
                        agree.record(res_j == res_c, || wit(format!(", s = {s}, t = {t}")));
                    }
                }
                // duality: for t ≥ o(a,c) the second Jacobi term vanishes
                if let Some(o) = o_ac {
                    for t in o..=o + 1 {
                        for r in lo..=hi {
                            for s in lo..=hi {
                                let ok = tr.jacobi_lhs(r, s, t) == tr.jacobi_rhs(r, s, t, false);
                                dual.record(ok, || wit(format!(", r = {r}, s = {s}, t = {t}")));
                            }
                        }
                    }
                }
                // o(a_(r) b, c) ≤ o(a,b) + o(a,c) + o(b,c) - r - 1
                for r in lo..=hi {
                    let ab = e.pair(a, r, b);
                    let Some(wab) = ctx.max_scaled_weight(&ab) else {
                        continue;
                    };
                    let lhs = tr.locality_left(r, wab);
                    let ok = match (o_ab, o_ac, o_bc) {
                        (Some(x), Some(y), Some(z)) => lhs.is_none_or(|l| l < x + y + z - r),
                        _ => lhs.is_none(),
                    };
                    loc.record(ok, || wit(format!(", r = {r}")));
                }
                // left Wick: a_(n)(b_(-1)c) = (a_(n)b)_(-1)c + p b_(-1)(a_(n)c) + Σ_j binom(n,j) (a_(j)b)_(n-1-j)c
                for n in 0..=hi {
                    let lhs = tr.get(Shape::RightAb, n, -1);
                    let mut rhs = (*tr.get(Shape::LeftAb, n, -1)).clone();
                    rhs.add_scaled(&tr.get(Shape::RightBa, -1, n), p);
                    for j in 0..n {
                        rhs.add_scaled(&tr.get(Shape::LeftAb, j, n - 1 - j), &Scalar::from_q(binom(n, j)));
                    }
                    lwick.record(*lhs == rhs, || wit(format!(", n = {n}")));
                }
                // right Wick: (a_(-1)b)_(n)c = Σ_k a_(-1-k) b_(n+k) c + p Σ_k b_(-1-k) a_(n+k) c
                //                              + p Σ_{j+k=n-1} b_(j) a_(k) c
                for n in 0..=hi {
                    let lhs = tr.get(Shape::LeftAb, -1, n);
                    let mut rhs = EnvElem::zero();
                    for k in 0..=(e.top(b.w, c.w) - n).max(-1) {
                        rhs.add_scaled(&tr.get(Shape::RightAb, -1 - k, n + k), &Scalar::one());
                    }
                    for k in 0..=(e.top(a.w, c.w) - n).max(-1) {
                        rhs.add_scaled(&tr.get(Shape::RightBa, -1 - k, n + k), p);
                    }
                    for j in 0..n {
                        rhs.add_scaled(&tr.get(Shape::RightBa, j, n - 1 - j), p);
                    }
                    rwick.record(*lhs == rhs, || wit(format!(", n = {n}")));
                }
                // quasi-associativity: (ab)c - a(bc) = Σ_j a_(-2-j) b_(j) c + p Σ_j b_(-2-j) a_(j) c
                let assoc_abc = tr.get(Shape::LeftAb, -1, -1).minus(&tr.get(Shape::RightAb, -1, -1));
                let mut rhs = EnvElem::zero();
                for j in 0..=e.top(b.w, c.w).max(-1) {
                    rhs.add_scaled(&tr.get(Shape::RightAb, -2 - j, j), &Scalar::one());
                }
                for j in 0..=e.top(a.w, c.w).max(-1) {
                    rhs.add_scaled(&tr.get(Shape::RightBa, -2 - j, j), p);
                }
                qassoc.record(assoc_abc == rhs, || wit(String::new()));
                // pre-Lie: the associator is (super)symmetric in its first two arguments
                let assoc_bac = tr.get(Shape::LeftBa, -1, -1).minus(&tr.get(Shape::RightBa, -1, -1));
                prelie.record(assoc_abc == assoc_bac.times(p), || wit(String::new()));
            }
        }
    }

    // fundamental recursion J(r,s,t+1) = J(r+1,s,t) + J(r,s+1,t), both sides
    let mut rec = Tally::new("fundamental-recursion");
    if !items.is_empty() {
        let mut rng = StdRng::seed_from_u64(windows.seed);
        for _ in 0..windows.recursion_samples {
            let a = &items[rng.gen_range(0..items.len())];
            let b = &items[rng.gen_range(0..items.len())];
            let c = &items[rng.gen_range(0..items.len())];
            let (r, s, t) = (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi), rng.gen_range(lo..=hi));
            let tr = Triple::new(&e, a, b, c);
            let l = tr.jacobi_lhs(r, s, t + 1);
            let l2 = tr.jacobi_lhs(r + 1, s, t).plus(&tr.jacobi_lhs(r, s + 1, t));
            let rr = tr.jacobi_rhs(r, s, t + 1, true);
            let rr2 = tr.jacobi_rhs(r + 1, s, t, true).plus(&tr.jacobi_rhs(r, s + 1, t, true));
            rec.record(l == l2 && rr == rr2, || {
                format!("a = {}, b = {}, c = {}, (r, s, t) = ({r}, {s}, {t})", show(&a.x), show(&b.x), show(&c.x))
            });
        }
    }

    let mut report = Report::new();
    for t in [skew, lie, comm, assoc, jac, agree, dual, loc, lwick, rwick, qassoc, prelie, rec] {
        report.push(t.check());
    }
    Ok(report)
}

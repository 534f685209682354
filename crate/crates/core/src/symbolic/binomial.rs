//! Generalized binomial coefficients and the two summation identities used
//! throughout the locality and duality arguments.

use super::rational::{factorial, Q};
use super::scalar::Scalar;

/// `binom(a, n) = a(a-1)...(a-n+1)/n!` for `n >= 0`, zero for `n < 0`.
pub fn binom(a: i64, n: i64) -> Q {
    if n < 0 {
        return Q::zero();
    }
    if a >= 0 && n > a {
        return Q::zero();
    }
    let mut acc: i128 = 1;
    let mut big: Option<Q> = None;
    for i in 0..n {
        let num = (a - i) as i128;
        let den = (i + 1) as i128;
        match big.as_mut() {
            None => match acc.checked_mul(num) {
                // The running product of i+1 consecutive integers divided by
                // (i+1)! is always an integer, so this division is exact.
                Some(p) => acc = p / den,
                None => {
                    let q = &(&acc_to_q(acc) * &Q::int(num as i64)) / &Q::int(den as i64);
                    big = Some(q);
                }
            },
            Some(q) => *q = &(&*q * &Q::int(num as i64)) / &Q::int(den as i64),
        }
    }
    big.unwrap_or_else(|| acc_to_q(acc))
}

fn acc_to_q(v: i128) -> Q {
    Q::from_i128(v, 1)
}

/// [`binom`] lifted to the ground ring.
pub fn binom_scalar(a: i64, n: i64) -> Scalar {
    Scalar::from_q(binom(a, n))
}

/// A failed instance of one of the two summation identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialFailure {
    pub identity: &'static str,
    pub n: u32,
    pub m: u32,
    pub lhs: Q,
    pub rhs: Q,
}

#[derive(Debug, Clone, Default)]
pub struct BinomialReport {
    pub checked: usize,
    pub failures: Vec<BinomialFailure>,
}

impl BinomialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies, exactly,
/// (i)  `sum_i (-1)^i binom(n,i)/(m+i) = n! / prod_{i=0}^{n} (m+i)` for `0 <= n <= n_max`, `1 <= m <= m_max`;
/// (ii) `sum_i (-1)^i binom(m+i,i) binom(m+n+1,n-i) = 1` for `0 <= n <= n_max`, `0 <= m <= m_max`.
pub fn check_binomial_identities(n_max: u32, m_max: u32) -> BinomialReport {
    let mut report = BinomialReport::default();
    for n in 0..=n_max {
        for m in 1..=m_max {
            let mut lhs = Q::zero();
            let mut prod = Q::one();
            for i in 0..=n as i64 {
                let term = &binom(n as i64, i) / &Q::int(m as i64 + i);
                lhs = if i % 2 == 0 { &lhs + &term } else { &lhs - &term };
                prod = &prod * &Q::int(m as i64 + i);
            }
            let rhs = &factorial(n) / &prod;
            report.checked += 1;
            if lhs != rhs {
                report.failures.push(BinomialFailure { identity: "alternating-reciprocal", n, m, lhs, rhs });
            }
        }
        for m in 0..=m_max {
            let (n_, m_) = (n as i64, m as i64);
            let mut lhs = Q::zero();
            for i in 0..=n_ {
                let term = &binom(m_ + i, i) * &binom(m_ + n_ + 1, n_ - i);
                lhs = if i % 2 == 0 { &lhs + &term } else { &lhs - &term };
            }
            report.checked += 1;
            if !lhs.is_one() {
                report.failures.push(BinomialFailure { identity: "alternating-product", n, m, lhs, rhs: Q::one() });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binom(3, 2), Q::int(3));
        assert_eq!(binom(-2, 3), Q::int(-4));
        assert_eq!(binom(5, 7), Q::zero());
        assert_eq!(binom(4, -1), Q::zero());
        for i in 0..=5 {
            assert_eq!(binom(-1, i), Q::int(if i % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn large_values_promote() {
        // binom(200, 100) needs more than 128 bits of intermediate product.
        let b = binom(200, 100);
        assert_eq!(b, &binom(199, 99) + &binom(199, 100));
    }

    #[test]
    fn identities_hold() {
        let r = check_binomial_identities(12, 12);
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.checked, 13 * 12 + 13 * 13);
    }

    fn naive_binom(a: i64, n: i64) -> Q {
        if n < 0 {
            return Q::zero();
        }
        let mut num = Q::one();
        for i in 0..n {
            num = &num * &Q::int(a - i);
        }
        &num / &factorial(n as u32)
    }

    proptest::proptest! {
        #[test]
        fn pascal_and_negation(a in -30i64..30, n in 0i64..12) {
            proptest::prop_assert_eq!(binom(a, n), naive_binom(a, n));
            proptest::prop_assert_eq!(binom(a + 1, n + 1), &binom(a, n) + &binom(a, n + 1));
            let sign = if n % 2 == 0 { Q::one() } else { Q::int(-1) };
            proptest::prop_assert_eq!(binom(-a - 1, n), &sign * &binom(a + n, n));
        }
    }
}

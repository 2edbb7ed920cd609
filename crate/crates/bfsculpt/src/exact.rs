//! Exact comparison of the scalar values that H-index computations produce.
//!
//! H-index candidates are either measure values (integers, rationals, or
//! square roots of integers for the sqrt-of-certificate variant) or
//! `log2(count)` terms. All comparisons between these forms are decided
//! exactly: rational-vs-rational and sqrt-vs-sqrt reduce to rational
//! arithmetic, rational-vs-log reduces to an integer power comparison, and
//! the sqrt-vs-log case (provably never an equality unless the log is an
//! integer) is decided by fixed-point evaluation with a guard band.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

pub type Rat = BigRational;

pub fn rat_u64(v: u64) -> Rat {
    Rat::from_integer(v.into())
}

pub fn rat_ratio(num: u64, den: u64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// An exactly comparable nonnegative scalar.
#[derive(Clone, Debug)]
pub enum ExactVal {
    /// A rational value.
    Rat(Rat),
    /// The square root of a nonnegative rational.
    SqrtRat(Rat),
    /// `log2(m)` for an integer `m >= 2` that is not a power of two
    /// (powers of two normalize to `Rat` on construction).
    Log2(u64),
}

impl ExactVal {
    pub fn integer(v: u64) -> Self {
        ExactVal::Rat(rat_u64(v))
    }

    pub fn rational(r: Rat) -> Self {
        ExactVal::Rat(r)
    }

    /// `sqrt(r)`; collapses to `Rat` when `r` is a perfect rational square.
    pub fn sqrt_of(r: Rat) -> Self {
        assert!(!r.is_negative(), "sqrt of negative value");
        let ns = r.numer().magnitude().sqrt();
        let ds = r.denom().magnitude().sqrt();
        if &ns * &ns == *r.numer().magnitude() && &ds * &ds == *r.denom().magnitude() {
            return ExactVal::Rat(Rat::new(ns.into(), ds.into()));
        }
        ExactVal::SqrtRat(r)
    }

    /// `log2(m)` for `m >= 1`; collapses to `Rat` when `m` is a power of two.
    pub fn log2_of(m: u64) -> Self {
        assert!(m >= 1, "log2 of zero");
        if m.is_power_of_two() {
            ExactVal::Rat(rat_u64(m.trailing_zeros() as u64))
        } else {
            ExactVal::Log2(m)
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactVal::Rat(r) => r.to_f64().unwrap_or(f64::NAN),
            ExactVal::SqrtRat(r) => r.to_f64().map(f64::sqrt).unwrap_or(f64::NAN),
            ExactVal::Log2(m) => (*m as f64).log2(),
        }
    }

    /// Largest integer `k` with `k*k <= self`.
    pub fn floor_sqrt(&self) -> u64 {
        let mut k = self.to_f64().max(0.0).sqrt().floor() as u64;
        // fix up float error with exact comparisons
        while ExactVal::integer((k + 1) * (k + 1)) <= *self {
            k += 1;
        }
        while k > 0 && ExactVal::integer(k * k) > *self {
            k -= 1;
        }
        k
    }

    /// Largest integer `s` with `s <= self^2`.
    pub fn floor_square(&self) -> u64 {
        let approx = self.to_f64().max(0.0);
        let mut s = (approx * approx).floor() as u64;
        while ExactVal::integer(s + 1).cmp_against_square(self) != Ordering::Greater {
            s += 1;
        }
        while s > 0 && ExactVal::integer(s).cmp_against_square(self) == Ordering::Greater {
            s -= 1;
        }
        s
    }

    /// Compares `self` against `other^2`.
    pub fn cmp_against_square(&self, other: &ExactVal) -> Ordering {
        match other {
            ExactVal::Rat(r) => self.partial_cmp_exact(&ExactVal::Rat(r * r)),
            ExactVal::SqrtRat(r) => self.partial_cmp_exact(&ExactVal::Rat(r.clone())),
            ExactVal::Log2(m) => match self {
                // a <= (log2 m)^2  <=>  sqrt(a) <= log2 m
                ExactVal::Rat(r) => {
                    if r.is_negative() {
                        Ordering::Less
                    } else {
                        ExactVal::SqrtRat(r.clone()).partial_cmp_exact(&ExactVal::Log2(*m))
                    }
                }
                ExactVal::SqrtRat(r) => cmp_sqrt_sqrt_vs_log2(r, *m),
                ExactVal::Log2(k) => cmp_log2_vs_log2_squared(*k, *m),
            },
        }
    }

    fn partial_cmp_exact(&self, other: &ExactVal) -> Ordering {
        use ExactVal::*;
        match (self, other) {
            (Rat(a), Rat(b)) => a.cmp(b),
            (SqrtRat(a), SqrtRat(b)) => a.cmp(b),
            (Rat(a), SqrtRat(b)) => {
                if a.is_negative() {
                    Ordering::Less
                } else {
                    (a * a).cmp(b)
                }
            }
            (SqrtRat(_), Rat(_)) => other.partial_cmp_exact(self).reverse(),
            (Rat(a), Log2(m)) => cmp_rat_vs_log2(a, *m),
            (Log2(_), Rat(_)) => other.partial_cmp_exact(self).reverse(),
            (SqrtRat(a), Log2(m)) => cmp_sqrt_vs_log2(a, *m),
            (Log2(_), SqrtRat(_)) => other.partial_cmp_exact(self).reverse(),
            (Log2(a), Log2(b)) => a.cmp(b),
        }
    }
}

impl PartialEq for ExactVal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for ExactVal {}

impl PartialOrd for ExactVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.partial_cmp_exact(other))
    }
}

impl Ord for ExactVal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp_exact(other)
    }
}

/// `p/q` versus `log2 m`, via `2^p` versus `m^q`.
fn cmp_rat_vs_log2(r: &Rat, m: u64) -> Ordering {
    debug_assert!(!m.is_power_of_two());
    if r.is_negative() {
        return Ordering::Less;
    }
    let p = r.numer().magnitude().to_u32().expect("exponent too large");
    let q = r.denom().magnitude().to_u32().expect("exponent too large");
    let lhs = BigUint::one() << (p as usize);
    let rhs = BigUint::from(m).pow(q);
    lhs.cmp(&rhs)
}

const FIXED_PREC: u32 = 160;
const GUARD_ULPS: u32 = 64;

/// Fixed-point `floor(2^prec * log2 m)` up to a few ulps, for `m >= 2`.
fn log2_fixed(m: u64, prec: u32) -> BigUint {
    debug_assert!(m >= 2);
    let t = 63 - m.leading_zeros();
    let mut acc = BigUint::from(t as u64) << prec;
    // y in [1, 2) with `prec` fractional bits
    let mut y = (BigUint::from(m) << prec) >> t;
    let two = BigUint::one() << (prec + 1);
    for i in (0..prec).rev() {
        y = (&y * &y) >> prec;
        if y >= two {
            y >>= 1;
            acc |= BigUint::one() << i;
        }
    }
    acc
}

/// Fixed-point `floor(2^prec * sqrt(a/b))` up to a few ulps.
fn sqrt_fixed(r: &Rat, prec: u32) -> BigUint {
    let a = r.numer().magnitude();
    let b = r.denom().magnitude();
    ((a << (2 * prec as usize)) / b).sqrt()
}

fn decide_with_guard(lhs: BigUint, rhs: BigUint, what: &str) -> Ordering {
    let diff = if lhs >= rhs {
        &lhs - &rhs
    } else {
        &rhs - &lhs
    };
    assert!(
        diff > BigUint::from(GUARD_ULPS),
        "fixed-point comparison too close to call ({what}); raise FIXED_PREC"
    );
    lhs.cmp(&rhs)
}

/// `sqrt(r)` versus `log2 m` where `m` is not a power of two. Equality is
/// impossible here (it would make `2^sqrt(r)` a non-power-of-two integer),
/// so a fixed-point comparison with a guard band decides the order.
fn cmp_sqrt_vs_log2(r: &Rat, m: u64) -> Ordering {
    debug_assert!(!m.is_power_of_two());
    if r.is_zero() {
        return Ordering::Less;
    }
    decide_with_guard(
        sqrt_fixed(r, FIXED_PREC),
        log2_fixed(m, FIXED_PREC),
        "sqrt vs log2",
    )
}

/// `r^(1/4)` versus `log2 m` (used for `sqrt(r) <= (log2 m)^2`).
fn cmp_sqrt_sqrt_vs_log2(r: &Rat, m: u64) -> Ordering {
    debug_assert!(!m.is_power_of_two());
    if r.is_zero() {
        return Ordering::Less;
    }
    let fourth = sqrt_fixed(r, 2 * FIXED_PREC).sqrt();
    decide_with_guard(fourth, log2_fixed(m, FIXED_PREC), "fourth-root vs log2")
}

/// `log2 k` versus `(log2 m)^2` where `m` is not a power of two.
fn cmp_log2_vs_log2_squared(k: u64, m: u64) -> Ordering {
    debug_assert!(!m.is_power_of_two());
    let lhs = log2_fixed(k, FIXED_PREC) << FIXED_PREC;
    let l = log2_fixed(m, FIXED_PREC);
    let rhs = &l * &l;
    decide_with_guard(lhs, rhs, "log2 vs squared log2")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_normalizes_powers_of_two() {
        assert_eq!(ExactVal::log2_of(8), ExactVal::integer(3));
        assert_eq!(ExactVal::log2_of(1), ExactVal::integer(0));
        assert!(matches!(ExactVal::log2_of(6), ExactVal::Log2(6)));
    }

    #[test]
    fn sqrt_normalizes_squares() {
        assert_eq!(ExactVal::sqrt_of(rat_u64(9)), ExactVal::integer(3));
        assert_eq!(
            ExactVal::sqrt_of(rat_ratio(9, 4)),
            ExactVal::rational(rat_ratio(3, 2))
        );
        assert!(matches!(
            ExactVal::sqrt_of(rat_u64(2)),
            ExactVal::SqrtRat(_)
        ));
    }

    #[test]
    fn rational_vs_log2() {
        // log2(3) = 1.58496...
        assert!(ExactVal::rational(rat_ratio(3, 2)) < ExactVal::log2_of(3));
        assert!(ExactVal::rational(rat_ratio(8, 5)) > ExactVal::log2_of(3));
        // log2(1000) just below 10 = log2(1024)
        assert!(ExactVal::log2_of(1000) < ExactVal::integer(10));
    }

    #[test]
    fn sqrt_vs_log2() {
        // sqrt(2) = 1.4142 < log2(3) = 1.58496 < sqrt(3) = 1.7320
        assert!(ExactVal::sqrt_of(rat_u64(2)) < ExactVal::log2_of(3));
        assert!(ExactVal::sqrt_of(rat_u64(3)) > ExactVal::log2_of(3));
        // a close one: log2(11) = 3.4594, sqrt(12) = 3.4641
        assert!(ExactVal::log2_of(11) < ExactVal::sqrt_of(rat_u64(12)));
        assert!(ExactVal::log2_of(12) > ExactVal::sqrt_of(rat_u64(12)));
    }

    #[test]
    fn floor_sqrt_examples() {
        assert_eq!(ExactVal::integer(16).floor_sqrt(), 4);
        assert_eq!(ExactVal::integer(17).floor_sqrt(), 4);
        assert_eq!(ExactVal::integer(0).floor_sqrt(), 0);
        assert_eq!(ExactVal::log2_of(6).floor_sqrt(), 1); // log2 6 = 2.58
        assert_eq!(ExactVal::log2_of(23).floor_sqrt(), 2); // log2 23 = 4.52
    }

    #[test]
    fn compare_against_square() {
        // 3 <= log2(3)^2 = 2.512? no
        assert_eq!(
            ExactVal::integer(3).cmp_against_square(&ExactVal::log2_of(3)),
            Ordering::Greater
        );
        // 2 <= log2(3)^2? yes
        assert_eq!(
            ExactVal::integer(2).cmp_against_square(&ExactVal::log2_of(3)),
            Ordering::Less
        );
        // log2(5) = 2.32 vs log2(3)^2 = 2.512
        assert_eq!(
            ExactVal::log2_of(5).cmp_against_square(&ExactVal::log2_of(3)),
            Ordering::Less
        );
        // log2(6) = 2.585 vs log2(3)^2 = 2.512
        assert_eq!(
            ExactVal::log2_of(6).cmp_against_square(&ExactVal::log2_of(3)),
            Ordering::Greater
        );
    }

    #[test]
    fn ordering_matches_f64_on_grid() {
        // cross-check the exact comparator against floats where floats are safe
        let mut vals = Vec::new();
        for v in 0..30u64 {
            vals.push(ExactVal::integer(v));
            vals.push(ExactVal::sqrt_of(rat_u64(v)));
            if v >= 1 {
                vals.push(ExactVal::log2_of(v));
            }
        }
        for a in &vals {
            for b in &vals {
                let exact = a.cmp(b);
                let fa = a.to_f64();
                let fb = b.to_f64();
                if (fa - fb).abs() > 1e-9 {
                    assert_eq!(exact, fa.partial_cmp(&fb).unwrap(), "{a:?} vs {b:?}");
                }
            }
        }
    }
}

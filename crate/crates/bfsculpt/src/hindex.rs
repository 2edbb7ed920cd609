//! The H-index functional: the minimum `h` such that at most `2^h` inputs
//! have `g(x) > h`.
//!
//! The count function `h -> |{x : g(x) > h}|` is a non-increasing,
//! right-continuous step function, so the feasible set is upward closed and
//! the minimum is attained. On each step interval with constant count `c`
//! the least feasible point is `max(interval start, log2 c)`, and the
//! H-index is the minimum of those candidates over the feasible intervals.
//! The result is a real number, not necessarily an integer.

use crate::error::{Error, Result};
use crate::exact::ExactVal;

/// Exact H-index of a nonnegative value map.
pub fn h_index_exact(values: &[ExactVal]) -> ExactVal {
    if values.is_empty() {
        return ExactVal::integer(0);
    }
    let mut sorted: Vec<&ExactVal> = values.iter().collect();
    sorted.sort();
    // distinct levels ascending with the count of values strictly above each
    let mut levels: Vec<(&ExactVal, usize)> = Vec::new();
    let total = sorted.len();
    let mut i = 0;
    while i < total {
        let mut j = i;
        while j < total && sorted[j] == sorted[i] {
            j += 1;
        }
        levels.push((sorted[i], total - j));
        i = j;
    }

    let zero = ExactVal::integer(0);
    let mut best: Option<ExactVal> = None;
    let mut consider = |cand: ExactVal, upper: Option<&ExactVal>| {
        if let Some(hi) = upper {
            if cand >= *hi {
                return;
            }
        }
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    };

    // interval [0, v_1) when the lowest level is positive; count there = total
    if *levels[0].0 > zero {
        let cand = ExactVal::log2_of(total as u64);
        consider(cand, Some(levels[0].0));
    }
    for (k, &(lo, count)) in levels.iter().enumerate() {
        let upper = levels.get(k + 1).map(|&(v, _)| v);
        let cand = if count == 0 {
            lo.clone()
        } else {
            let lg = ExactVal::log2_of(count as u64);
            if lg > *lo {
                lg
            } else {
                lo.clone()
            }
        };
        consider(cand, upper);
    }
    best.expect("last interval is always feasible")
}

/// Floating-point H-index for general nonnegative value maps.
pub fn h_index_f64(values: &[f64]) -> Result<f64> {
    if values.iter().any(|v| *v < 0.0 || v.is_nan()) {
        return Err(Error::Internal(
            "h_index requires nonnegative values".into(),
        ));
    }
    if values.is_empty() {
        return Ok(0.0);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let total = sorted.len();
    let mut levels: Vec<(f64, usize)> = Vec::new();
    let mut i = 0;
    while i < total {
        let mut j = i;
        while j < total && sorted[j] == sorted[i] {
            j += 1;
        }
        levels.push((sorted[i], total - j));
        i = j;
    }
    let mut best = f64::INFINITY;
    let mut consider = |cand: f64, upper: Option<f64>| {
        if let Some(hi) = upper {
            if cand >= hi {
                return;
            }
        }
        if cand < best {
            best = cand;
        }
    };
    if levels[0].0 > 0.0 {
        consider((total as f64).log2(), Some(levels[0].0));
    }
    for (k, &(lo, count)) in levels.iter().enumerate() {
        let upper = levels.get(k + 1).map(|&(v, _)| v);
        let cand = if count == 0 {
            lo
        } else {
            lo.max((count as f64).log2())
        };
        consider(cand, upper);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat_u64, ExactVal};

    fn ints(vs: &[u64]) -> Vec<ExactVal> {
        vs.iter().map(|&v| ExactVal::integer(v)).collect()
    }

    #[test]
    fn all_zeros_gives_zero() {
        assert_eq!(h_index_exact(&ints(&[0, 0, 0, 0])), ExactVal::integer(0));
        assert_eq!(h_index_f64(&[0.0; 16]).unwrap(), 0.0);
    }

    #[test]
    fn or_certificate_profile() {
        // one input with C=4, fifteen with C=1
        let mut vals = vec![4u64];
        vals.extend(std::iter::repeat(1).take(15));
        assert_eq!(h_index_exact(&ints(&vals)), ExactVal::integer(1));
    }

    #[test]
    fn parity_certificate_profile() {
        // all sixteen inputs have C=4 and 16 = 2^4
        assert_eq!(h_index_exact(&ints(&[4; 16])), ExactVal::integer(4));
    }

    #[test]
    fn sqrt_profile() {
        // all sixteen inputs have sqrt(C)=2: need 2^h inputs above h -> h=2
        let vals: Vec<ExactVal> = (0..16).map(|_| ExactVal::sqrt_of(rat_u64(4))).collect();
        assert_eq!(h_index_exact(&vals), ExactVal::integer(2));
    }

    #[test]
    fn non_integer_result() {
        // six inputs of value 5: |{g > h}| = 6 until h reaches 5;
        // log2(6) = 2.585 < 5 so Hi = log2 6
        let vals = ints(&[5, 5, 5, 5, 5, 5]);
        assert_eq!(h_index_exact(&vals), ExactVal::log2_of(6));
    }

    #[test]
    fn appendix_properties_on_floats() {
        // spot-checks of range, max bound and the counting property
        let g = [0.5, 3.0, 3.0, 1.0, 0.0, 2.0, 7.0, 7.0];
        let h = h_index_f64(&g).unwrap();
        assert!(h >= 0.0 && h <= 3.0);
        assert!(h <= 7.0);
        let above = g.iter().filter(|&&v| v > h).count() as f64;
        assert!(above <= 2f64.powf(h) + 1e-12);
        let at_least = g.iter().filter(|&&v| v >= h).count() as f64;
        assert!(at_least >= 2f64.powf(h) - 1e-12);
    }

    #[test]
    fn negative_values_rejected() {
        assert!(h_index_f64(&[1.0, -0.5]).is_err());
    }
}

//! Enumeration of small certificates consistent with revealed bits, used by
//! the certificate-probing and hybrid algorithms. Total functions only.

use crate::function::{BooleanFunction, PartialAssignment};

/// True iff every total input extending `p` has `f = value`.
pub(crate) fn forces_value(f: &BooleanFunction, p: &PartialAssignment, value: bool) -> bool {
    debug_assert!(f.is_total());
    let free = !p.mask() & ((1u32 << f.n()) - 1);
    let mut sub = 0u32;
    loop {
        if f.value_unchecked(p.bits() | sub) != value {
            return false;
        }
        if sub == free {
            return true;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
}

/// The value `f` is forced to on the inputs consistent with `revealed`,
/// if any.
pub(crate) fn forced_value(f: &BooleanFunction, revealed: &PartialAssignment) -> Option<bool> {
    let first = revealed.bits();
    let v = f.value_unchecked(first);
    if forces_value(f, revealed, v) {
        Some(v)
    } else {
        None
    }
}

/// Finds a certificate for `value` of size at most `max_size` that does not
/// conflict with `revealed`, searching minimum size first and, within a
/// size, supports in lexicographic index order with value patterns
/// ascending. Returns the first hit.
pub(crate) fn find_small_certificate(
    f: &BooleanFunction,
    value: bool,
    revealed: &PartialAssignment,
    max_size: usize,
) -> Option<PartialAssignment> {
    let n = f.n();
    for size in 0..=max_size.min(n) {
        let mut support = Vec::new();
        if let Some(found) = search_supports(f, value, revealed, size, 0, &mut support) {
            return Some(found);
        }
    }
    None
}

fn search_supports(
    f: &BooleanFunction,
    value: bool,
    revealed: &PartialAssignment,
    size: usize,
    start: usize,
    support: &mut Vec<usize>,
) -> Option<PartialAssignment> {
    if support.len() == size {
        return try_patterns(f, value, revealed, support);
    }
    let n = f.n();
    for i in start..n {
        if n - i < size - support.len() {
            break;
        }
        support.push(i);
        if let Some(found) = search_supports(f, value, revealed, size, i + 1, support) {
            return Some(found);
        }
        support.pop();
    }
    None
}

fn try_patterns(
    f: &BooleanFunction,
    value: bool,
    revealed: &PartialAssignment,
    support: &[usize],
) -> Option<PartialAssignment> {
    let size = support.len();
    'patterns: for pattern in 0..1u32 << size {
        let mut p = PartialAssignment::empty(f.n());
        for (j, &pos) in support.iter().enumerate() {
            let bit = pattern >> j & 1 == 1;
            if revealed.mask() >> pos & 1 == 1 && (revealed.bits() >> pos & 1 == 1) != bit {
                continue 'patterns;
            }
            p = p.with(pos, bit);
        }
        if forces_value(f, &p, value) {
            return Some(p);
        }
    }
    None
}

//! One-vs-set distinguishers: deciding whether the input equals an anchor
//! string or belongs to a value class, using the fractional hitting weights
//! of the anchor's disagreement patterns.

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::function::{BooleanFunction, PartialAssignment};
use crate::measures::{diff_masks, fractional_packing_lp, minimal_masks};
use num_traits::ToPrimitive;
use rand::Rng;

/// A randomized one-vs-set distinguisher for anchor `a` against
/// `f^{-1}(side)`. Sampling an index proportionally to `weights` hits a
/// disagreement of any class member with probability at least `1/cost` per
/// sample, because the weights fractionally hit every disagreement pattern.
#[derive(Debug, Clone)]
pub struct DistinguisherSpec {
    pub n: usize,
    pub anchor: u32,
    pub side: bool,
    /// Per-index fractional hitting weights from the RC dual.
    pub weights: Vec<Rat>,
    /// RC of the one-vs-set problem; equals the weight total.
    pub cost: Rat,
}

/// Outcome of one distinguisher call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No disagreement with the anchor was observed within the budget.
    IsAnchor,
    /// A position where the input differs from the anchor was found.
    /// This verdict is conclusive: the input cannot be the anchor.
    NotAnchor { position: usize, observed: bool },
}

/// Builds the distinguisher for `a` versus `f^{-1}(side)`.
///
/// The anchor need not lie in the domain of `f`, but the target class must
/// be nonempty and must not contain the anchor.
pub fn build_distinguisher(f: &BooleanFunction, a: u32, side: bool) -> Result<DistinguisherSpec> {
    build_distinguisher_against(f.n(), a, &f.class(side), side)
}

pub(crate) fn build_distinguisher_against(
    n: usize,
    a: u32,
    targets: &Bitmap,
    side: bool,
) -> Result<DistinguisherSpec> {
    if targets.is_empty() || targets.get(a as usize) {
        return Err(Error::DegenerateDistinguisher);
    }
    let masks = minimal_masks(diff_masks(a, targets));
    let (cost, _, weights) = fractional_packing_lp(&masks, n)?;
    Ok(DistinguisherSpec {
        n,
        anchor: a,
        side,
        weights,
        cost,
    })
}

/// The per-call sample budget `5 * ceil(cost)`, which drives the error of a
/// single call below 1/5 by the hitting-weight argument.
pub fn amplification_rounds(spec: &DistinguisherSpec) -> usize {
    5 * spec.cost.ceil().to_integer().to_usize().unwrap_or(1).max(1)
}

/// Runs the distinguisher for `rounds` samples. Queries go through `oracle`
/// and are appended to `queries`. "Not the anchor" is concluded only upon
/// an observed disagreement; the anchor verdict is the default after the
/// budget.
pub fn run_distinguisher(
    spec: &DistinguisherSpec,
    oracle: &mut dyn FnMut(usize) -> bool,
    rounds: usize,
    rng: &mut impl Rng,
    queries: &mut Vec<(usize, bool)>,
) -> Verdict {
    let total = spec.cost.to_f64().unwrap_or(0.0);
    if total <= 0.0 {
        return Verdict::IsAnchor;
    }
    let cumulative: Vec<f64> = spec
        .weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w.to_f64().unwrap_or(0.0);
            Some(*acc)
        })
        .collect();
    for _ in 0..rounds {
        let u = rng.gen::<f64>() * total;
        let position = cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(spec.n - 1);
        let observed = oracle(position);
        queries.push((position, observed));
        if observed != (spec.anchor >> position & 1 == 1) {
            return Verdict::NotAnchor { position, observed };
        }
    }
    Verdict::IsAnchor
}

/// The greedy certificate of Lemma-style one-vs-set certification: fix the
/// position of `x` contradicting the most remaining target inputs (ties to
/// the lowest index) until none remain.
pub fn greedy_certificate_against(n: usize, x: u32, targets: &Bitmap) -> PartialAssignment {
    let mut remaining: Vec<u32> = targets.iter_ones().map(|y| y as u32).collect();
    remaining.retain(|&y| y != x);
    let mut cert = PartialAssignment::empty(n);
    while !remaining.is_empty() {
        let mut best_pos = 0;
        let mut best_count = 0;
        for pos in 0..n {
            let bit = 1u32 << pos;
            let count = remaining.iter().filter(|&&y| (y ^ x) & bit != 0).count();
            if count > best_count {
                best_count = count;
                best_pos = pos;
            }
        }
        debug_assert!(best_count > 0, "remaining inputs must differ somewhere");
        let bit = 1u32 << best_pos;
        cert = cert.with(best_pos, x & bit != 0);
        remaining.retain(|&y| (y ^ x) & bit == 0);
    }
    cert
}

/// Greedy certificate of `x` with respect to `f` (against the opposite
/// value class). Always a valid certificate; its size obeys
/// `|cert| <= RC_f(x) * (1 + log2 |opposite class|)`.
pub fn greedy_certificate(f: &BooleanFunction, x: u32) -> Result<PartialAssignment> {
    let fx = f.value(x).ok_or(Error::NotInDomain(x))?;
    let opposite = f.class(!fx);
    if opposite.is_empty() {
        return Err(Error::ConstantFunction);
    }
    Ok(greedy_certificate_against(f.n(), x, &opposite))
}

/// Checks that a partial assignment certifies `x` for `f`: it fixes only
/// positions to `x`'s values and every domain input extending it shares
/// `f(x)`.
pub fn is_certificate(f: &BooleanFunction, x: u32, p: &PartialAssignment) -> bool {
    if !p.extends(x) {
        return false;
    }
    let fx = match f.value(x) {
        Some(v) => v,
        None => return false,
    };
    f.inputs()
        .filter(|&y| p.extends(y))
        .all(|y| f.value_unchecked(y) == fx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_u64;
    use crate::function::{named_function, NamedFunction};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn or4_distinguisher_has_uniform_unit_weights() {
        let f = named_function(NamedFunction::Or, 4).unwrap();
        let spec = build_distinguisher(&f, 0b0000, true).unwrap();
        assert_eq!(spec.cost, rat_u64(4));
        assert_eq!(spec.weights, vec![rat_u64(1); 4]);
        assert_eq!(amplification_rounds(&spec), 20);
    }

    #[test]
    fn anchor_inside_class_is_rejected() {
        let f = named_function(NamedFunction::Or, 4).unwrap();
        assert!(matches!(
            build_distinguisher(&f, 0b0000, false),
            Err(Error::DegenerateDistinguisher)
        ));
    }

    #[test]
    fn run_on_anchor_always_says_anchor() {
        let f = named_function(NamedFunction::Or, 4).unwrap();
        let spec = build_distinguisher(&f, 0b0000, true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mut queries = Vec::new();
            let v = run_distinguisher(&spec, &mut |_| false, 20, &mut rng, &mut queries);
            assert_eq!(v, Verdict::IsAnchor);
        }
    }

    #[test]
    fn class_members_are_detected_often() {
        let f = named_function(NamedFunction::Or, 4).unwrap();
        let spec = build_distinguisher(&f, 0b0000, true).unwrap();
        let rounds = amplification_rounds(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let y = 0b0100u32;
        let mut hits = 0;
        let trials = 500;
        for _ in 0..trials {
            let mut queries = Vec::new();
            let v = run_distinguisher(&spec, &mut |i| y >> i & 1 == 1, rounds, &mut rng, &mut queries);
            if matches!(v, Verdict::NotAnchor { .. }) {
                hits += 1;
            }
        }
        // single-call failure is (3/4)^20 < 0.4%; 2/3 has enormous slack
        assert!(hits as f64 >= trials as f64 * 2.0 / 3.0, "hits={hits}");
    }

    #[test]
    fn greedy_certificate_examples() {
        let f = named_function(NamedFunction::Or, 4).unwrap();
        let c = greedy_certificate(&f, 0b0100).unwrap();
        assert_eq!(c.mask(), 0b0100);
        assert!(is_certificate(&f, 0b0100, &c));
        let c0 = greedy_certificate(&f, 0b0000).unwrap();
        assert_eq!(c0.size(), 4);
        assert!(is_certificate(&f, 0b0000, &c0));
    }

    #[test]
    fn greedy_size_bound_on_random_functions() {
        use crate::measures::rc_at;
        for seed in 0..25 {
            let f = BooleanFunction::random(4, 0.9, seed).unwrap();
            for x in f.inputs() {
                let fx = f.value_unchecked(x);
                let opp = f.class_count(!fx);
                if opp == 0 {
                    continue;
                }
                let cert = greedy_certificate(&f, x).unwrap();
                assert!(is_certificate(&f, x, &cert));
                let rc = rc_at(&f, x).unwrap().to_f64().unwrap();
                let bound = rc * (1.0 + (opp as f64).log2());
                assert!(
                    cert.size() as f64 <= bound + 1e-9,
                    "greedy size {} above bound {bound} (seed {seed}, x {x})",
                    cert.size()
                );
            }
        }
    }
}

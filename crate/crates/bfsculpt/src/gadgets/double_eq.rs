//! The double-equality gadget: Alice holds two n-bit strings, Bob holds
//! the encodings of two n-bit strings under a distance-verified random
//! code of length 3n, with the promise that exactly one pair matches. A
//! zero-error sampler decides which by random probing, geometrically fast
//! because unequal codewords disagree on a constant fraction of positions.

use crate::error::{Error, Result};
use crate::sculpt::TwoPartyFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub const DOUBLE_EQ_MIN_N: usize = 2;
pub const DOUBLE_EQ_MAX_N: usize = 10;
pub const CODE_RESAMPLE_LIMIT: usize = 100;

/// A random code over `{0,1}^n -> {0,1}^{3n}` with exhaustively verified
/// minimum pairwise distance.
#[derive(Debug, Clone)]
pub struct DoubleEqualityInstance {
    pub n: usize,
    /// `code[b]` is the 3n-bit codeword of `b`.
    pub code: Vec<u64>,
    pub seed: u64,
    /// Exhaustively computed minimum pairwise Hamming distance; at least
    /// `ceil(0.1 * 3n)` by construction.
    pub min_distance: usize,
}

impl DoubleEqualityInstance {
    pub fn codeword_bits(&self) -> usize {
        3 * self.n
    }

    pub fn distance_target(n: usize) -> usize {
        (3 * n).div_ceil(10)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "seed": self.seed,
            "min_distance": self.min_distance,
            "code_hex": self.code.iter().map(|w| format!("{w:x}")).collect::<Vec<_>>(),
        })
    }
}

fn min_pairwise_distance(code: &[u64]) -> usize {
    let mut best = usize::MAX;
    for i in 0..code.len() {
        for j in i + 1..code.len() {
            best = best.min((code[i] ^ code[j]).count_ones() as usize);
        }
    }
    best
}

/// Builds the gadget: the code is resampled from the seed until the
/// distance target passes, and the two-party function checks the
/// exactly-one-equality promise via exact codeword decoding.
pub fn build_double_equality(
    n: usize,
    seed: u64,
) -> Result<(TwoPartyFunction, DoubleEqualityInstance)> {
    if !(DOUBLE_EQ_MIN_N..=DOUBLE_EQ_MAX_N).contains(&n) {
        return Err(Error::CapExceeded {
            what: "double-equality string length",
            cap: DOUBLE_EQ_MAX_N,
            requested: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = 1usize << n;
    let mask = (1u64 << (3 * n)) - 1;
    let target = DoubleEqualityInstance::distance_target(n);
    let mut instance = None;
    for _ in 0..CODE_RESAMPLE_LIMIT {
        let code: Vec<u64> = (0..words).map(|_| rng.gen::<u64>() & mask).collect();
        let min_distance = min_pairwise_distance(&code);
        if min_distance >= target {
            instance = Some(DoubleEqualityInstance {
                n,
                code,
                seed,
                min_distance,
            });
            break;
        }
    }
    let instance = instance.ok_or(Error::CodeDistance {
        attempts: CODE_RESAMPLE_LIMIT,
        seed,
    })?;

    let decode: HashMap<u64, u64> = instance
        .code
        .iter()
        .enumerate()
        .map(|(b, &w)| (w, b as u64))
        .collect();
    let l = 3 * n;
    let word_mask = mask;
    let n_mask = (1u64 << n) - 1;
    let f = TwoPartyFunction::new(
        2 * n,
        6 * n,
        move |a, c| {
            let (a1, a2) = (a & n_mask, a >> n & n_mask);
            let b1 = decode.get(&(c & word_mask))?;
            let b2 = decode.get(&(c >> l & word_mask))?;
            let first = a1 == *b1;
            let second = a2 == *b2;
            if first == second {
                return None; // promise: exactly one equality
            }
            Some(first)
        },
        |_| true,
    );
    Ok((f, instance))
}

#[derive(Debug, Clone)]
pub struct SamplerOutcome {
    /// True means "the first strings are equal".
    pub answer: bool,
    pub queries: usize,
    /// Positions sampled, as (word, offset, observed bit).
    pub samples: Vec<(usize, usize, bool)>,
}

/// Zero-error evaluation of the marginal at Alice's `(a1, a2)`: alternately
/// sample random positions of Bob's two codewords and compare against
/// `code(a1)`, `code(a2)`. A disagreement is conclusive under the promise;
/// a fully verified word is conclusive too. Seeing both words in full with
/// no disagreement (or disagreements in both) reports a promise violation
/// instead of answering.
pub fn marginal_r0_sampler(
    instance: &DoubleEqualityInstance,
    a1: u64,
    a2: u64,
    bob: &mut dyn FnMut(usize) -> bool,
    seed: u64,
) -> Result<SamplerOutcome> {
    let l = instance.codeword_bits();
    let expected = [instance.code[a1 as usize], instance.code[a2 as usize]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = [0u64, 0u64];
    let full = (1u64 << l) - 1;
    let mut samples = Vec::new();
    let mut disagreed = [false, false];
    let mut turn = 0usize;
    loop {
        if seen[0] == full && seen[1] == full {
            return Err(Error::PromiseViolation(
                "both words fully verified equal".into(),
            ));
        }
        let word = if seen[turn % 2] != full {
            turn % 2
        } else {
            (turn + 1) % 2
        };
        turn += 1;
        let offset = loop {
            let o = rng.gen_range(0..l);
            if seen[word] >> o & 1 == 0 {
                break o;
            }
        };
        let bit = bob(word * l + offset);
        samples.push((word, offset, bit));
        seen[word] |= 1 << offset;
        if bit != (expected[word] >> offset & 1 == 1) {
            disagreed[word] = true;
            if disagreed[0] && disagreed[1] {
                return Err(Error::PromiseViolation(
                    "disagreements observed in both words".into(),
                ));
            }
            // word `word` is unequal, so the promise makes the other equal
            return Ok(SamplerOutcome {
                answer: word == 1,
                queries: samples.len(),
                samples,
            });
        }
        // a fully seen word with no disagreement is verified equal; keep
        // sampling the other word so the both-equal promise violation is
        // detected by exhaustion rather than silently answered
    }
}

/// A Bob-side oracle reading the bits of a concatenated codeword pair.
pub fn bob_oracle(instance: &DoubleEqualityInstance, b1: u64, b2: u64) -> impl FnMut(usize) -> bool {
    let l = instance.codeword_bits();
    let words = [instance.code[b1 as usize], instance.code[b2 as usize]];
    move |pos| words[pos / l] >> (pos % l) & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_meets_distance_target_at_n8() {
        let (_, inst) = build_double_equality(8, 0).unwrap();
        assert!(inst.min_distance >= DoubleEqualityInstance::distance_target(8));
        assert_eq!(inst.code.len(), 256);
    }

    #[test]
    fn promise_definition() {
        let (f, inst) = build_double_equality(3, 1).unwrap();
        let c = |b1: u64, b2: u64| inst.code[b1 as usize] | inst.code[b2 as usize] << 9;
        // a1 = b1, a2 != b2: output "first"
        assert_eq!(f.eval(5 | 2 << 3, c(5, 7)), Some(true));
        // a1 != b1, a2 = b2: output "second"
        assert_eq!(f.eval(4 | 7 << 3, c(5, 7)), Some(false));
        // both equal or both unequal: outside the promise
        assert_eq!(f.eval(5 | 7 << 3, c(5, 7)), None);
        assert_eq!(f.eval(0, c(5, 7)), None);
        // non-codeword on Bob's side: outside the domain
        assert_eq!(f.eval(5 | 2 << 3, !0u64 >> 10), None);
    }

    #[test]
    fn sampler_zero_error_on_promise_inputs() {
        let (_, inst) = build_double_equality(5, 7).unwrap();
        for trial in 0..200u64 {
            let (a1, a2, b1, b2) = (3u64, 9, 3, 12); // first equal
            let mut bob = bob_oracle(&inst, b1, b2);
            let out = marginal_r0_sampler(&inst, a1, a2, &mut bob, trial).unwrap();
            assert!(out.answer, "trial {trial}");
            let (a1, a2, b1, b2) = (3u64, 9, 14, 9); // second equal
            let mut bob = bob_oracle(&inst, b1, b2);
            let out = marginal_r0_sampler(&inst, a1, a2, &mut bob, trial).unwrap();
            assert!(!out.answer, "trial {trial}");
        }
    }

    #[test]
    fn sampler_detects_double_equality_violation() {
        let (_, inst) = build_double_equality(3, 3).unwrap();
        let mut bob = bob_oracle(&inst, 2, 6);
        let res = marginal_r0_sampler(&inst, 2, 6, &mut bob, 5);
        assert!(matches!(res, Err(Error::PromiseViolation(_))));
    }

    #[test]
    fn mean_queries_small_at_n8() {
        let (_, inst) = build_double_equality(8, 0).unwrap();
        let mut total = 0usize;
        let trials = 500u64;
        for trial in 0..trials {
            let out = {
                let mut bob = bob_oracle(&inst, 17, 99);
                marginal_r0_sampler(&inst, 17, 42, &mut bob, trial).unwrap()
            };
            assert!(out.answer, "first words match, second differ");
            total += out.queries;
        }
        let mean = total as f64 / trials as f64;
        assert!(mean <= 40.0, "mean {mean}");
    }
}

//! Elimination-style evaluators: evaluating `f` by repeatedly distinguishing
//! the input from a majority anchor of the surviving smaller-class set.
//!
//! The randomized variant amplifies one-vs-set distinguishers with capped
//! counters; the deterministic variant replaces each distinguisher call by
//! probing the greedy certificate of the anchor against the target class,
//! which is conclusive, so it is always correct.

use crate::algorithms::distinguish::{
    amplification_rounds, build_distinguisher_against, greedy_certificate_against,
    run_distinguisher, DistinguisherSpec, Verdict,
};
use crate::algorithms::transcript::QueryTranscript;
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::measures::balance_ceil;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use std::collections::HashMap;

pub const DETERMINISTIC_ELIMINATE_CAP: usize = 16;

/// Outcome of an elimination run.
#[derive(Debug)]
pub struct EliminationRun {
    pub value: bool,
    pub transcript: QueryTranscript,
    /// Number of disagreement events (each shrinks the candidate set by at
    /// least half).
    pub iterations: usize,
    /// Set when the run ended by an amplification counter reaching its cap.
    pub capped_side: Option<bool>,
    /// Size of each surviving candidate set right after a shrink.
    pub shrink_sizes: Vec<usize>,
}

/// Shared per-function state for elimination runs: the smaller value class
/// and a cache of built distinguishers keyed by (anchor, side).
pub struct Eliminator<'f> {
    f: &'f BooleanFunction,
    small_value: bool,
    initial: Vec<u32>,
    cache: RefCell<HashMap<(u32, bool), DistinguisherSpec>>,
}

impl<'f> Eliminator<'f> {
    pub fn new(f: &'f BooleanFunction) -> Result<Self> {
        if f.constant_value().is_some() {
            return Err(Error::ConstantFunction);
        }
        // ties between equal class sizes go to the 0 class
        let small_value = f.class_count(false) > f.class_count(true);
        let initial: Vec<u32> = f.class(small_value).iter_ones().map(|x| x as u32).collect();
        Ok(Eliminator {
            f,
            small_value,
            initial,
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn smaller_class_value(&self) -> bool {
        self.small_value
    }

    fn majority_anchor(&self, z: &[u32]) -> u32 {
        let mut a = 0u32;
        for i in 0..self.f.n() {
            let ones = z.iter().filter(|&&v| v >> i & 1 == 1).count();
            // ties break to 0
            if 2 * ones > z.len() {
                a |= 1 << i;
            }
        }
        a
    }

    /// Sides `b` with `a` outside `f^{-1}(b)`, both classes being nonempty.
    fn valid_sides(&self, a: u32) -> Vec<bool> {
        [false, true]
            .into_iter()
            .filter(|&b| self.f.value(a) != Some(b))
            .collect()
    }

    fn distinguisher(&self, a: u32, side: bool) -> Result<DistinguisherSpec> {
        if let Some(spec) = self.cache.borrow().get(&(a, side)) {
            return Ok(spec.clone());
        }
        let spec = build_distinguisher_against(self.f.n(), a, &self.f.class(side), side)?;
        self.cache.borrow_mut().insert((a, side), spec.clone());
        Ok(spec)
    }

    /// Chooses the side with the smaller one-vs-set cost (ties to side 0).
    fn choose_side(&self, a: u32) -> Result<DistinguisherSpec> {
        let sides = self.valid_sides(a);
        let mut best: Option<DistinguisherSpec> = None;
        for b in sides {
            let spec = self.distinguisher(a, b)?;
            let better = match &best {
                None => true,
                Some(cur) => spec.cost < cur.cost,
            };
            if better {
                best = Some(spec);
            }
        }
        best.ok_or(Error::DegenerateDistinguisher)
    }

    /// The randomized elimination loop with capped amplification counters.
    pub fn run_randomized(
        &self,
        oracle: &mut dyn FnMut(usize) -> bool,
        seed: u64,
    ) -> Result<EliminationRun> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut transcript = QueryTranscript::new(Some(seed));
        let mut z = self.initial.clone();
        let cap = 2 * balance_ceil(self.f);
        let mut counters = [0usize, 0usize];
        let mut iterations = 0usize;
        let mut shrink_sizes = Vec::new();
        let mut consistency = ConsistencyFlag::new(self.f);
        for _pass in 0..100_000 {
            if z.is_empty() {
                transcript.verdict = Some(format!("value {}", !self.small_value as u8));
                return Ok(EliminationRun {
                    value: !self.small_value,
                    transcript,
                    iterations,
                    capped_side: None,
                    shrink_sizes,
                });
            }
            let a = self.majority_anchor(&z);
            let spec = self.choose_side(a)?;
            transcript.mark(format!("distinguish a={a} side={}", spec.side as u8));
            let rounds = amplification_rounds(&spec);
            let mut queries = Vec::new();
            let verdict = run_distinguisher(&spec, oracle, rounds, &mut rng, &mut queries);
            for (pos, bit) in queries {
                transcript.record(pos, bit);
                consistency.observe(&mut transcript, pos, bit);
            }
            match verdict {
                Verdict::NotAnchor { position, observed } => {
                    let before = z.len();
                    z.retain(|&v| (v >> position & 1 == 1) == observed);
                    debug_assert!(
                        z.len() * 2 <= before,
                        "majority anchor must halve on disagreement"
                    );
                    iterations += 1;
                    shrink_sizes.push(z.len());
                }
                Verdict::IsAnchor => {
                    let side = spec.side as usize;
                    counters[side] += 1;
                    if counters[side] >= cap {
                        transcript.verdict = Some(format!("value {}", !spec.side as u8));
                        return Ok(EliminationRun {
                            value: !spec.side,
                            transcript,
                            iterations,
                            capped_side: Some(spec.side),
                            shrink_sizes,
                        });
                    }
                }
            }
        }
        Err(Error::Internal("elimination failed to terminate".into()))
    }

    /// The deterministic elimination loop: certificate probes instead of
    /// randomized distinguishers. Always correct.
    pub fn run_deterministic(&self, oracle: &mut dyn FnMut(usize) -> bool) -> Result<EliminationRun> {
        if self.f.n() > DETERMINISTIC_ELIMINATE_CAP {
            return Err(Error::CapExceeded {
                what: "deterministic elimination",
                cap: DETERMINISTIC_ELIMINATE_CAP,
                requested: self.f.n(),
            });
        }
        let mut transcript = QueryTranscript::new(None);
        let mut z = self.initial.clone();
        let mut iterations = 0usize;
        let mut shrink_sizes = Vec::new();
        let mut consistency = ConsistencyFlag::new(self.f);
        loop {
            if z.is_empty() {
                transcript.verdict = Some(format!("value {}", !self.small_value as u8));
                return Ok(EliminationRun {
                    value: !self.small_value,
                    transcript,
                    iterations,
                    capped_side: None,
                    shrink_sizes,
                });
            }
            let a = self.majority_anchor(&z);
            // deterministic side choice: smaller greedy certificate, ties to 0
            let mut choice: Option<(bool, crate::function::PartialAssignment)> = None;
            for b in self.valid_sides(a) {
                let cert = greedy_certificate_against(self.f.n(), a, &self.f.class(b));
                let better = match &choice {
                    None => true,
                    Some((_, cur)) => cert.size() < cur.size(),
                };
                if better {
                    choice = Some((b, cert));
                }
            }
            let (side, cert) = choice.ok_or(Error::DegenerateDistinguisher)?;
            transcript.mark(format!("probe a={a} side={} size={}", side as u8, cert.size()));
            let mut disagreement = None;
            for pos in 0..self.f.n() {
                if cert.mask() >> pos & 1 == 0 {
                    continue;
                }
                let observed = oracle(pos);
                transcript.record(pos, observed);
                consistency.observe(&mut transcript, pos, observed);
                if observed != (a >> pos & 1 == 1) {
                    disagreement = Some((pos, observed));
                    break;
                }
            }
            match disagreement {
                Some((pos, observed)) => {
                    let before = z.len();
                    z.retain(|&v| (v >> pos & 1 == 1) == observed);
                    debug_assert!(z.len() * 2 <= before);
                    iterations += 1;
                    shrink_sizes.push(z.len());
                }
                None => {
                    // the input agrees with a certificate of `a` against
                    // f^{-1}(side), so it cannot lie in that class
                    transcript.verdict = Some(format!("value {}", !side as u8));
                    return Ok(EliminationRun {
                        value: !side,
                        transcript,
                        iterations,
                        capped_side: None,
                        shrink_sizes,
                    });
                }
            }
        }
    }
}

/// Tracks which domain inputs stay consistent with the observed bits and
/// flags the transcript once nothing does (the oracle input lies outside
/// the domain). Never an error: runs continue to completion.
struct ConsistencyFlag {
    consistent: crate::bitmap::Bitmap,
    flagged: bool,
}

impl ConsistencyFlag {
    fn new(f: &BooleanFunction) -> Self {
        ConsistencyFlag {
            consistent: f.domain().clone(),
            // a total function is consistent with any observation
            flagged: f.is_total(),
        }
    }

    fn observe(&mut self, transcript: &mut QueryTranscript, pos: usize, bit: bool) {
        if self.flagged {
            return;
        }
        let keep: Vec<usize> = self
            .consistent
            .iter_ones()
            .filter(|&x| (x >> pos & 1 == 1) == bit)
            .collect();
        self.consistent = crate::bitmap::Bitmap::from_indices(
            self.consistent.len(),
            keep.into_iter().map(|x| x as u32),
        );
        if self.consistent.is_empty() {
            transcript.flag("observed bits inconsistent with every domain input");
            self.flagged = true;
        }
    }
}

/// Convenience wrapper: one randomized elimination run.
pub fn majority_eliminate(
    f: &BooleanFunction,
    oracle: &mut dyn FnMut(usize) -> bool,
    seed: u64,
) -> Result<EliminationRun> {
    Eliminator::new(f)?.run_randomized(oracle, seed)
}

/// Convenience wrapper: one deterministic elimination run.
pub fn deterministic_eliminate(
    f: &BooleanFunction,
    oracle: &mut dyn FnMut(usize) -> bool,
) -> Result<EliminationRun> {
    Eliminator::new(f)?.run_deterministic(oracle)
}

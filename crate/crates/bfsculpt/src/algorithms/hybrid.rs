//! The hybrid evaluator for total functions: a size-capped certificate
//! probing phase followed, when still undecided, by deterministic
//! elimination on the small surviving domain.
//!
//! Phase 1 runs the classic pick-a-consistent-certificate loop, first with
//! 0-certificates then with 1-certificates, restricted to certificates of
//! size at most `Hi(sqrt(C_f))^2`. When both sub-phases exhaust, every
//! surviving input has certificate complexity above that cap, so at most
//! `2^Hi(sqrt(C_f))` inputs survive and deterministic elimination on the
//! restriction finishes exactly.

use crate::algorithms::certfind::{find_small_certificate, forced_value};
use crate::algorithms::eliminate::Eliminator;
use crate::algorithms::transcript::QueryTranscript;
use crate::error::{Error, Result};
use crate::exact::ExactVal;
use crate::function::{BooleanFunction, PartialAssignment};
use crate::measures::{h_index_of, MeasureSelector};
use crate::oracles::restrict_to_bitmap;

pub const HYBRID_CAP: usize = 14;

#[derive(Debug)]
pub struct HybridRun {
    pub value: bool,
    pub transcript: QueryTranscript,
    pub phase1_queries: usize,
    pub entered_phase2: bool,
    pub phase2_survivors: usize,
    /// `Hi(sqrt(C_f))`; phase-1 certificates have size at most its square.
    pub hi_sqrt_c: ExactVal,
}

pub fn hybrid_decision(
    f: &BooleanFunction,
    oracle: &mut dyn FnMut(usize) -> bool,
) -> Result<HybridRun> {
    let hi_sqrt_c = h_index_of(MeasureSelector::SqrtC, f)?;
    hybrid_decision_given(f, hi_sqrt_c, oracle)
}

/// The hybrid loop with `Hi(sqrt(C_f))` supplied by the caller, for sweeps
/// that amortize the H-index across inputs.
pub fn hybrid_decision_given(
    f: &BooleanFunction,
    hi_sqrt_c: ExactVal,
    oracle: &mut dyn FnMut(usize) -> bool,
) -> Result<HybridRun> {
    if !f.is_total() {
        return Err(Error::Internal(
            "hybrid decision is defined for total functions".into(),
        ));
    }
    if f.n() > HYBRID_CAP {
        return Err(Error::CapExceeded {
            what: "hybrid decision",
            cap: HYBRID_CAP,
            requested: f.n(),
        });
    }
    let max_size = hi_sqrt_c.floor_square() as usize;
    let mut transcript = QueryTranscript::new(None);
    let mut revealed = PartialAssignment::empty(f.n());

    for (phase, value) in [("phase1-0certs", false), ("phase1-1certs", true)] {
        transcript.mark(phase);
        loop {
            if let Some(v) = forced_value(f, &revealed) {
                let phase1_queries = transcript.total();
                transcript.verdict = Some(format!("value {} in {phase}", v as u8));
                return Ok(HybridRun {
                    value: v,
                    transcript,
                    phase1_queries,
                    entered_phase2: false,
                    phase2_survivors: 0,
                    hi_sqrt_c,
                });
            }
            let Some(cert) = find_small_certificate(f, value, &revealed, max_size) else {
                break;
            };
            for pos in 0..f.n() {
                if cert.mask() >> pos & 1 == 0 || revealed.mask() >> pos & 1 == 1 {
                    continue;
                }
                let bit = oracle(pos);
                transcript.record(pos, bit);
                revealed = revealed.with(pos, bit);
            }
        }
    }

    if let Some(v) = forced_value(f, &revealed) {
        let phase1_queries = transcript.total();
        transcript.verdict = Some(format!("value {} at phase-1 exit", v as u8));
        return Ok(HybridRun {
            value: v,
            transcript,
            phase1_queries,
            entered_phase2: false,
            phase2_survivors: 0,
            hi_sqrt_c,
        });
    }

    // phase 2: all survivors have certificates larger than the cap, so the
    // H-index bounds their count by 2^hi; asserted at runtime
    let phase1_queries = transcript.total();
    let survivors = revealed.extension_bitmap();
    let count = survivors.count_ones();
    if ExactVal::log2_of(count as u64) > hi_sqrt_c {
        return Err(Error::Internal(format!(
            "{count} phase-2 survivors exceed 2^Hi(sqrt C)"
        )));
    }
    transcript.mark("phase2-eliminate");
    let g = restrict_to_bitmap(f, &survivors)?;
    let run = Eliminator::new(&g)?.run_deterministic(oracle)?;
    for &(pos, bit) in &run.transcript.queries {
        transcript.record(pos, bit);
    }
    transcript.verdict = Some(format!("value {} in phase 2", run.value as u8));
    Ok(HybridRun {
        value: run.value,
        transcript,
        phase1_queries,
        entered_phase2: true,
        phase2_survivors: count,
        hi_sqrt_c,
    })
}

//! Certificate probing: reduce the possibilities for a total function's
//! input to an unbalanced residual set.
//!
//! With `K = Hi(C_f^2)` and `k = floor(sqrt(K))`, the algorithm repeatedly
//! picks a 0-certificate of size at most `k` consistent with the revealed
//! bits and queries its positions, at most `k` times. One-certificates
//! conflict with every 0-certificate, so each round contradicts or reveals
//! another entry of every small surviving 1-certificate. The residual set
//! of inputs consistent with the revealed bits then satisfies
//! `Bal(f|_S) <= K + 1`, using at most `K` queries.

use crate::algorithms::certfind::find_small_certificate;
use crate::algorithms::transcript::QueryTranscript;
use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::exact::ExactVal;
use crate::function::{BooleanFunction, PartialAssignment};
use crate::measures::{h_index_of, MeasureSelector};

pub const PROBE_CAP: usize = 16;

#[derive(Debug)]
pub struct ProbeReduction {
    /// Domain inputs consistent with the revealed bits.
    pub residual: Bitmap,
    pub transcript: QueryTranscript,
    pub revealed: PartialAssignment,
    /// `K = Hi(C_f^2)`.
    pub hi_c_squared: ExactVal,
    /// `k = floor(sqrt(K))`: the certificate size cap and round count.
    pub size_cap: u64,
}

pub fn certificate_probe_reduce(
    f: &BooleanFunction,
    oracle: &mut dyn FnMut(usize) -> bool,
) -> Result<ProbeReduction> {
    let hi_c_squared = h_index_of(MeasureSelector::CSquared, f)?;
    certificate_probe_reduce_given(f, hi_c_squared, oracle)
}

/// The probing loop with `Hi(C_f^2)` supplied by the caller, for sweeps
/// that amortize the H-index across inputs.
pub fn certificate_probe_reduce_given(
    f: &BooleanFunction,
    hi_c_squared: ExactVal,
    oracle: &mut dyn FnMut(usize) -> bool,
) -> Result<ProbeReduction> {
    if !f.is_total() {
        return Err(Error::Internal(
            "certificate probing is defined for total functions".into(),
        ));
    }
    if f.n() > PROBE_CAP {
        return Err(Error::CapExceeded {
            what: "certificate probing",
            cap: PROBE_CAP,
            requested: f.n(),
        });
    }
    let k = hi_c_squared.floor_sqrt();
    let mut transcript = QueryTranscript::new(None);
    let mut revealed = PartialAssignment::empty(f.n());
    for round in 0..k {
        let Some(cert) = find_small_certificate(f, false, &revealed, k as usize) else {
            break;
        };
        transcript.mark(format!("round {round} probe size {}", cert.size()));
        let mut progressed = false;
        for pos in 0..f.n() {
            if cert.mask() >> pos & 1 == 0 || revealed.mask() >> pos & 1 == 1 {
                continue;
            }
            let bit = oracle(pos);
            transcript.record(pos, bit);
            revealed = revealed.with(pos, bit);
            progressed = true;
        }
        if !progressed {
            // the certificate is fully revealed and confirmed: the residual
            // set is already constant
            break;
        }
    }
    let residual = Bitmap::from_indices(
        f.size(),
        f.inputs().filter(|&x| revealed.extends(x)),
    );
    transcript.verdict = Some(format!("residual size {}", residual.count_ones()));
    Ok(ProbeReduction {
        residual,
        transcript,
        revealed,
        hi_c_squared,
        size_cap: k,
    })
}

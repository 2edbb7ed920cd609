//! Exact query-complexity measures: deterministic depth, certificate
//! complexity, block sensitivity, fractional block sensitivity (by exact
//! linear programming), balance, and H-indices of per-input measures.

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::exact::{rat_u64, ExactVal, Rat};
use crate::function::{BooleanFunction, PartialAssignment};
use crate::hindex::h_index_exact;
use crate::lp::{Lp, Rel};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

pub const DETERMINISTIC_CAP: usize = 14;
pub const CERTIFICATE_CAP: usize = 20;
pub const BLOCK_SENSITIVITY_CAP: usize = 16;
pub const RC_OPPOSITE_CAP: usize = 1 << 14;

/// Disagreement masks between an anchor input and a set of inputs.
pub(crate) fn diff_masks(anchor: u32, targets: &Bitmap) -> Vec<u32> {
    targets.iter_ones().map(|y| anchor ^ y as u32).collect()
}

/// Inclusion-minimal masks of a family. The result is sorted by
/// (popcount, value), which downstream tie-breaking relies on.
pub(crate) fn minimal_masks(mut masks: Vec<u32>) -> Vec<u32> {
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    let mut minimal: Vec<u32> = Vec::new();
    'outer: for m in masks {
        for &km in &minimal {
            if km & m == km {
                continue 'outer;
            }
        }
        minimal.push(m);
    }
    minimal
}

/// Masks of the sensitive blocks of `x` realized by the opposite value
/// class, reduced to the inclusion-minimal ones.
pub(crate) fn minimal_sensitive_masks(f: &BooleanFunction, x: u32) -> Result<Vec<u32>> {
    let fx = f.value(x).ok_or(Error::NotInDomain(x))?;
    let opposite = f.class(!fx);
    Ok(minimal_masks(diff_masks(x, &opposite)))
}

// ---------------------------------------------------------------------------
// certificate complexity: minimum hitting set over disagreement masks
// ---------------------------------------------------------------------------

struct HittingSearch {
    masks: Vec<u32>,
    best: u32,
    best_size: usize,
}

impl HittingSearch {
    fn greedy(masks: &[u32], n: usize) -> u32 {
        let mut chosen = 0u32;
        let mut uncovered: Vec<u32> = masks.to_vec();
        while !uncovered.is_empty() {
            let mut best_pos = 0;
            let mut best_count = 0;
            for pos in 0..n {
                let bit = 1u32 << pos;
                let count = uncovered.iter().filter(|m| *m & bit != 0).count();
                if count > best_count {
                    best_count = count;
                    best_pos = pos;
                }
            }
            let bit = 1u32 << best_pos;
            chosen |= bit;
            uncovered.retain(|m| m & bit == 0);
        }
        chosen
    }

    /// Pairwise-disjoint uncovered masks each need their own bit.
    fn lower_bound(uncovered: &[u32]) -> usize {
        let mut used = 0u32;
        let mut count = 0;
        for &m in uncovered {
            if m & used == 0 {
                used |= m;
                count += 1;
            }
        }
        count
    }

    fn descend(&mut self, chosen: u32, uncovered: Vec<u32>) {
        let size = chosen.count_ones() as usize;
        if uncovered.is_empty() {
            if size < self.best_size {
                self.best_size = size;
                self.best = chosen;
            }
            return;
        }
        if size + Self::lower_bound(&uncovered) >= self.best_size {
            return;
        }
        // branch on the uncovered mask with the fewest bits (list is sorted)
        let target = uncovered[0];
        let mut bits = target;
        while bits != 0 {
            let bit = bits & bits.wrapping_neg();
            bits &= bits - 1;
            let rest: Vec<u32> = uncovered.iter().copied().filter(|m| m & bit == 0).collect();
            self.descend(chosen | bit, rest);
        }
    }
}

/// Minimum number of positions hitting every mask, with the lexicographically
/// determined optimal position set.
pub(crate) fn min_hitting_set(masks: &[u32], n: usize) -> (usize, u32) {
    if masks.is_empty() {
        return (0, 0);
    }
    debug_assert!(masks.iter().all(|&m| m != 0));
    let greedy = HittingSearch::greedy(masks, n);
    let mut search = HittingSearch {
        masks: masks.to_vec(),
        best: greedy,
        best_size: greedy.count_ones() as usize,
    };
    search.descend(0, search.masks.clone());
    (search.best_size, search.best)
}

/// Exact certificate complexity of `x`, with a witness assignment.
pub fn certificate_complexity_at(
    f: &BooleanFunction,
    x: u32,
) -> Result<(usize, PartialAssignment)> {
    if f.n() > CERTIFICATE_CAP {
        return Err(Error::CapExceeded {
            what: "certificate complexity",
            cap: CERTIFICATE_CAP,
            requested: f.n(),
        });
    }
    let masks = minimal_sensitive_masks(f, x)?;
    let (size, positions) = min_hitting_set(&masks, f.n());
    let witness = PartialAssignment::of_input(f.n(), x, positions);
    debug_assert_eq!(witness.size(), size);
    Ok((size, witness))
}

/// `C(f)`: maximum certificate complexity over the domain.
pub fn certificate_complexity(f: &BooleanFunction) -> Result<usize> {
    let mut c = 0;
    for x in f.inputs() {
        c = c.max(certificate_complexity_at(f, x)?.0);
    }
    Ok(c)
}

// ---------------------------------------------------------------------------
// block sensitivity: maximum disjoint packing of minimal sensitive blocks
// ---------------------------------------------------------------------------

fn max_disjoint_packing(masks: &[u32], chosen: &mut Vec<u32>, best: &mut Vec<u32>, used: u32) {
    if chosen.len() > best.len() {
        *best = chosen.clone();
    }
    for (k, &m) in masks.iter().enumerate() {
        if m & used != 0 {
            continue;
        }
        // optimistic bound: everything after k might fit
        if chosen.len() + (masks.len() - k) <= best.len() {
            break;
        }
        chosen.push(m);
        max_disjoint_packing(&masks[k + 1..], chosen, best, used | m);
        chosen.pop();
    }
}

/// Exact block sensitivity of `x`, with a maximum disjoint block family.
pub fn block_sensitivity_witness_at(f: &BooleanFunction, x: u32) -> Result<Vec<u32>> {
    if f.n() > BLOCK_SENSITIVITY_CAP {
        return Err(Error::CapExceeded {
            what: "block sensitivity",
            cap: BLOCK_SENSITIVITY_CAP,
            requested: f.n(),
        });
    }
    let masks = minimal_sensitive_masks(f, x)?;
    let mut best = Vec::new();
    let mut chosen = Vec::new();
    max_disjoint_packing(&masks, &mut chosen, &mut best, 0);
    Ok(best)
}

pub fn block_sensitivity_at(f: &BooleanFunction, x: u32) -> Result<usize> {
    Ok(block_sensitivity_witness_at(f, x)?.len())
}

/// `bs(f)`: maximum block sensitivity over the domain.
pub fn block_sensitivity(f: &BooleanFunction) -> Result<usize> {
    let mut bs = 0;
    for x in f.inputs() {
        bs = bs.max(block_sensitivity_at(f, x)?);
    }
    Ok(bs)
}

// ---------------------------------------------------------------------------
// fractional block sensitivity via exact LP
// ---------------------------------------------------------------------------

/// An optimal hard distribution: inputs of the opposite value class whose
/// mixture stays entry-wise within `max_disagreement` of the base input.
#[derive(Debug, Clone)]
pub struct HardDistribution {
    pub base: u32,
    pub support: Vec<(u32, Rat)>,
    /// `1 / RC_f(x)`: the per-index disagreement bound, attained at some index.
    pub max_disagreement: Rat,
}

/// The exact LP output for one fractional-block-sensitivity instance.
#[derive(Debug, Clone)]
pub struct RcAnalysis {
    pub rc: Rat,
    /// `None` when the opposite class is empty (constant side, RC = 0).
    pub distribution: Option<HardDistribution>,
    /// Primal packing certificate: weights on sensitive-block masks,
    /// per-index load at most 1, total weight exactly `rc`.
    pub packing: Vec<(u32, Rat)>,
    /// Dual hitting certificate: per-index weights, covering every mask
    /// with weight at least 1, summing exactly to `rc`.
    pub hitting: Vec<Rat>,
}

impl RcAnalysis {
    /// Re-checks feasibility, matching objectives and complementary
    /// slackness of the primal/dual pair in exact arithmetic.
    pub fn verify(&self, n: usize) -> Result<()> {
        let total: Rat = self.packing.iter().map(|(_, w)| w.clone()).sum();
        if total != self.rc {
            return Err(Error::Internal("packing weight total != rc".into()));
        }
        let hit_total: Rat = self.hitting.iter().cloned().sum();
        if hit_total != self.rc {
            return Err(Error::Internal("hitting weight total != rc".into()));
        }
        let mut loads = vec![Rat::zero(); n];
        for (mask, w) in &self.packing {
            if w.is_negative() {
                return Err(Error::Internal("negative packing weight".into()));
            }
            for (i, load) in loads.iter_mut().enumerate() {
                if mask >> i & 1 == 1 {
                    *load += w;
                }
            }
        }
        let one = Rat::one();
        for (i, load) in loads.iter().enumerate() {
            if *load > one {
                return Err(Error::Internal(format!("overloaded index {i}")));
            }
            // complementary slackness: positive hitting weight forces a tight load
            if self.hitting[i].is_positive() && *load != one {
                return Err(Error::Internal(format!(
                    "slack index {i} carries hitting weight"
                )));
            }
        }
        for (mask, w) in &self.packing {
            let cover: Rat = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.hitting[i].clone())
                .sum();
            if cover < one {
                return Err(Error::Internal("mask not fractionally hit".into()));
            }
            if w.is_positive() && cover != one {
                return Err(Error::Internal(
                    "support mask with slack cover violates complementary slackness".into(),
                ));
            }
        }
        if let Some(dist) = &self.distribution {
            let total: Rat = dist.support.iter().map(|(_, p)| p.clone()).sum();
            if total != Rat::one() {
                return Err(Error::Internal("distribution mass != 1".into()));
            }
            let mut attained = false;
            for i in 0..n {
                let dis: Rat = dist
                    .support
                    .iter()
                    .filter(|(y, _)| (y ^ dist.base) >> i & 1 == 1)
                    .map(|(_, p)| p.clone())
                    .sum();
                if dis > dist.max_disagreement {
                    return Err(Error::Internal(format!(
                        "index {i} disagreement above 1/rc"
                    )));
                }
                attained |= dis == dist.max_disagreement;
            }
            if !attained {
                return Err(Error::Internal("disagreement bound not attained".into()));
            }
        }
        Ok(())
    }
}

/// Solves the fractional packing LP over a family of nonempty masks and
/// returns (value, packing weights, per-index hitting weights).
pub(crate) fn fractional_packing_lp(
    masks: &[u32],
    n: usize,
) -> Result<(Rat, Vec<(u32, Rat)>, Vec<Rat>)> {
    if masks.iter().any(|&m| m == 0) {
        return Err(Error::DegenerateDistinguisher);
    }
    if masks.is_empty() {
        return Ok((Rat::zero(), Vec::new(), vec![Rat::zero(); n]));
    }
    let mut lp = Lp::new(true, vec![Rat::one(); masks.len()]);
    for i in 0..n {
        let row: Vec<Rat> = masks
            .iter()
            .map(|m| {
                if m >> i & 1 == 1 {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        lp.add_row(row, Rel::Le, Rat::one());
    }
    let sol = lp.solve()?;
    let packing: Vec<(u32, Rat)> = masks
        .iter()
        .zip(&sol.x)
        .map(|(&m, w)| (m, w.clone()))
        .collect();
    Ok((sol.objective, packing, sol.duals))
}

/// Exact fractional block sensitivity of `x` with primal and dual
/// certificates and the optimal hard distribution.
pub fn fractional_block_sensitivity_at(f: &BooleanFunction, x: u32) -> Result<RcAnalysis> {
    let fx = f.value(x).ok_or(Error::NotInDomain(x))?;
    let opposite = f.class(!fx);
    let count = opposite.count_ones();
    if count > RC_OPPOSITE_CAP {
        return Err(Error::CapExceeded {
            what: "fractional block sensitivity opposite-class size",
            cap: RC_OPPOSITE_CAP,
            requested: count,
        });
    }
    if count == 0 {
        return Ok(RcAnalysis {
            rc: Rat::zero(),
            distribution: None,
            packing: Vec::new(),
            hitting: vec![Rat::zero(); f.n()],
        });
    }
    let masks = minimal_masks(diff_masks(x, &opposite));
    let (rc, packing, hitting) = fractional_packing_lp(&masks, f.n())?;
    let support: Vec<(u32, Rat)> = packing
        .iter()
        .filter(|(_, w)| w.is_positive())
        .map(|(m, w)| (x ^ m, w / &rc))
        .collect();
    let analysis = RcAnalysis {
        distribution: Some(HardDistribution {
            base: x,
            support,
            max_disagreement: rc.recip(),
        }),
        packing: packing
            .into_iter()
            .filter(|(_, w)| w.is_positive())
            .collect(),
        hitting,
        rc,
    };
    debug_assert!(analysis.verify(f.n()).is_ok());
    Ok(analysis)
}

/// `RC_f(x)` alone.
pub fn rc_at(f: &BooleanFunction, x: u32) -> Result<Rat> {
    Ok(fractional_block_sensitivity_at(f, x)?.rc)
}

/// `RC(f)`: maximum over the domain.
pub fn fractional_block_sensitivity(f: &BooleanFunction) -> Result<Rat> {
    let mut rc = Rat::zero();
    for x in f.inputs() {
        let v = rc_at(f, x)?;
        if v > rc {
            rc = v;
        }
    }
    Ok(rc)
}

/// `sqrt(RC_f(x))`, a constant-factor proxy for the quantum certificate
/// complexity (not an exact quantum value).
pub fn qc_proxy_at(f: &BooleanFunction, x: u32) -> Result<f64> {
    Ok(rc_at(f, x)?.to_f64().sqrt())
}

// ---------------------------------------------------------------------------
// deterministic query complexity by memoized minimax
// ---------------------------------------------------------------------------

/// Exact deterministic query complexity: minimax query depth over the
/// domain, memoized on the surviving-domain bitmap.
pub fn deterministic_complexity(f: &BooleanFunction) -> Result<usize> {
    if f.n() > DETERMINISTIC_CAP {
        return Err(Error::CapExceeded {
            what: "deterministic complexity",
            cap: DETERMINISTIC_CAP,
            requested: f.n(),
        });
    }
    let n = f.n();
    let size = f.size();
    let ones_at: Vec<Bitmap> = (0..n)
        .map(|i| Bitmap::from_indices(size, (0..size as u32).filter(|x| x >> i & 1 == 1)))
        .collect();
    let value_class = f.class(true);
    let mut memo: HashMap<Bitmap, u8> = HashMap::new();

    fn depth(
        s: &Bitmap,
        value_class: &Bitmap,
        ones_at: &[Bitmap],
        memo: &mut HashMap<Bitmap, u8>,
    ) -> u8 {
        let live = s.count_ones();
        let live_ones = s.and(value_class).count_ones();
        if live_ones == 0 || live_ones == live {
            return 0;
        }
        if let Some(&d) = memo.get(s) {
            return d;
        }
        let mut best = u8::MAX;
        for one_mask in ones_at {
            let s1 = s.and(one_mask);
            let c1 = s1.count_ones();
            if c1 == 0 || c1 == live {
                continue;
            }
            let s0 = s.minus(one_mask);
            let d = 1 + depth(&s0, value_class, ones_at, memo)
                .max(depth(&s1, value_class, ones_at, memo));
            if d < best {
                best = d;
            }
        }
        memo.insert(s.clone(), best);
        best
    }

    Ok(depth(f.domain(), &value_class, &ones_at, &mut memo) as usize)
}

// ---------------------------------------------------------------------------
// balance
// ---------------------------------------------------------------------------

/// Size of the smaller value class, or `None` for constant functions.
pub fn balance_class(f: &BooleanFunction) -> Option<usize> {
    let zeros = f.class_count(false);
    let ones = f.class_count(true);
    if zeros == 0 || ones == 0 {
        None
    } else {
        Some(zeros.min(ones))
    }
}

/// `Bal(f) = 1 + log2(min class size)`, or 0 for constant functions.
pub fn balance(f: &BooleanFunction) -> f64 {
    match balance_class(f) {
        None => 0.0,
        Some(m) => 1.0 + (m as f64).log2(),
    }
}

/// `ceil(Bal(f))` as an integer, used for amplification caps.
pub fn balance_ceil(f: &BooleanFunction) -> usize {
    match balance_class(f) {
        None => 0,
        Some(1) => 1,
        Some(m) => 1 + (usize::BITS - (m - 1).leading_zeros()) as usize,
    }
}

// ---------------------------------------------------------------------------
// H-indices of per-input measures
// ---------------------------------------------------------------------------

/// Which per-input measure feeds the H-index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureSelector {
    C,
    Bs,
    Rc,
    SqrtC,
    CSquared,
}

/// Per-input measure values over the domain, in input order. For partial
/// functions the table (and the H-index count) ranges over the domain only.
pub fn per_input_exact(f: &BooleanFunction, sel: MeasureSelector) -> Result<Vec<ExactVal>> {
    let mut out = Vec::with_capacity(f.domain().count_ones());
    for x in f.inputs() {
        out.push(match sel {
            MeasureSelector::C => ExactVal::integer(certificate_complexity_at(f, x)?.0 as u64),
            MeasureSelector::Bs => ExactVal::integer(block_sensitivity_at(f, x)? as u64),
            MeasureSelector::Rc => ExactVal::rational(rc_at(f, x)?),
            MeasureSelector::SqrtC => {
                ExactVal::sqrt_of(rat_u64(certificate_complexity_at(f, x)?.0 as u64))
            }
            MeasureSelector::CSquared => {
                let c = certificate_complexity_at(f, x)?.0 as u64;
                ExactVal::integer(c * c)
            }
        });
    }
    Ok(out)
}

/// Exact H-index of the selected per-input measure.
pub fn h_index_of(sel: MeasureSelector, f: &BooleanFunction) -> Result<ExactVal> {
    Ok(h_index_exact(&per_input_exact(f, sel)?))
}

/// H-index of the pointwise-scaled fractional block sensitivity,
/// `Hi(RC_f * factor)`, evaluated in floating point.
pub fn h_index_scaled_rc(f: &BooleanFunction, factor: f64) -> Result<f64> {
    let vals: Vec<f64> = f
        .inputs()
        .map(|x| rc_at(f, x).map(|r| r.to_f64() * factor))
        .collect::<Result<_>>()?;
    crate::hindex::h_index_f64(&vals)
}

trait RatF64 {
    fn to_f64(&self) -> f64;
}

impl RatF64 for Rat {
    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

// ---------------------------------------------------------------------------
// MeasureReport
// ---------------------------------------------------------------------------

/// Exact per-input and aggregate measures for one function.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub n: usize,
    /// (input, C_f(x), bs_f(x), RC_f(x)) for each domain input in order.
    pub per_input: Vec<(u32, usize, usize, Rat)>,
    pub d: usize,
    pub c: usize,
    pub bs: usize,
    pub rc: Rat,
    pub bal: f64,
    pub hi_c: ExactVal,
    pub hi_bs: ExactVal,
    pub hi_rc: ExactVal,
    pub hi_sqrt_c: ExactVal,
}

pub fn rat_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl MeasureReport {
    pub fn compute(f: &BooleanFunction) -> Result<MeasureReport> {
        let mut per_input = Vec::new();
        let mut c_vals = Vec::new();
        let mut bs_vals = Vec::new();
        let mut rc_vals = Vec::new();
        for x in f.inputs() {
            let c = certificate_complexity_at(f, x)?.0;
            let bs = block_sensitivity_at(f, x)?;
            let rc = rc_at(f, x)?;
            c_vals.push(ExactVal::integer(c as u64));
            bs_vals.push(ExactVal::integer(bs as u64));
            rc_vals.push(ExactVal::rational(rc.clone()));
            per_input.push((x, c, bs, rc));
        }
        let sqrt_c_vals: Vec<ExactVal> = per_input
            .iter()
            .map(|(_, c, _, _)| ExactVal::sqrt_of(rat_u64(*c as u64)))
            .collect();
        Ok(MeasureReport {
            n: f.n(),
            d: deterministic_complexity(f)?,
            c: per_input.iter().map(|r| r.1).max().unwrap_or(0),
            bs: per_input.iter().map(|r| r.2).max().unwrap_or(0),
            rc: per_input
                .iter()
                .map(|r| r.3.clone())
                .max()
                .unwrap_or_else(Rat::zero),
            bal: balance(f),
            hi_c: h_index_exact(&c_vals),
            hi_bs: h_index_exact(&bs_vals),
            hi_rc: h_index_exact(&rc_vals),
            hi_sqrt_c: h_index_exact(&sqrt_c_vals),
            per_input,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "D": self.d,
            "C": self.c,
            "bs": self.bs,
            "RC": rat_string(&self.rc),
            "Bal": self.bal,
            "HiC": self.hi_c.to_f64(),
            "HiBs": self.hi_bs.to_f64(),
            "HiRC": self.hi_rc.to_f64(),
            "HiSqrtC": self.hi_sqrt_c.to_f64(),
            "per_input": self.per_input.iter().map(|(x, c, bs, rc)| {
                serde_json::json!({
                    "x": x, "C": c, "bs": bs, "RC": rat_string(rc),
                })
            }).collect::<Vec<_>>(),
        })
    }

    pub const CSV_HEADER: &'static str =
        "function_id,D,C,bs,RC_num,RC_den,Bal,HiC,HiBs,HiRC,HiSqrtC";

    pub fn to_csv_row(&self, function_id: &str) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            function_id,
            self.d,
            self.c,
            self.bs,
            self.rc.numer(),
            self.rc.denom(),
            self.bal,
            self.hi_c.to_f64(),
            self.hi_bs.to_f64(),
            self.hi_rc.to_f64(),
            self.hi_sqrt_c.to_f64(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_ratio;
    use crate::function::{named_function, NamedFunction, Promise};

    fn or4() -> BooleanFunction {
        named_function(NamedFunction::Or, 4).unwrap()
    }

    fn parity(n: usize) -> BooleanFunction {
        named_function(NamedFunction::Parity, n).unwrap()
    }

    #[test]
    fn certificate_or4() {
        assert_eq!(certificate_complexity_at(&or4(), 0b0000).unwrap().0, 4);
        let (size, witness) = certificate_complexity_at(&or4(), 0b0100).unwrap();
        assert_eq!(size, 1);
        assert_eq!(witness.mask(), 0b0100);
        assert_eq!(witness.bits(), 0b0100);
    }

    #[test]
    fn certificate_parity3_is_full() {
        let f = parity(3);
        for x in 0..8 {
            assert_eq!(certificate_complexity_at(&f, x).unwrap().0, 3);
        }
    }

    #[test]
    fn block_sensitivity_or4() {
        assert_eq!(block_sensitivity_at(&or4(), 0b0000).unwrap(), 4);
        assert_eq!(block_sensitivity_at(&or4(), 0b0100).unwrap(), 1);
    }

    #[test]
    fn block_sensitivity_parity_is_arity() {
        for n in [3, 4, 5] {
            let f = parity(n);
            for x in 0..(1u32 << n) {
                assert_eq!(block_sensitivity_at(&f, x).unwrap(), n);
            }
        }
    }

    #[test]
    fn rc_or4_at_zero_is_uniform() {
        let a = fractional_block_sensitivity_at(&or4(), 0).unwrap();
        assert_eq!(a.rc, rat_u64(4));
        let dist = a.distribution.unwrap();
        assert_eq!(dist.support.len(), 4);
        for (y, p) in &dist.support {
            assert_eq!(y.count_ones(), 1);
            assert_eq!(*p, rat_ratio(1, 4));
        }
        assert_eq!(dist.max_disagreement, rat_ratio(1, 4));
    }

    #[test]
    fn rc_or4_at_one_input_is_point_mass() {
        let a = fractional_block_sensitivity_at(&or4(), 0b0100).unwrap();
        assert_eq!(a.rc, rat_u64(1));
        let dist = a.distribution.unwrap();
        assert_eq!(dist.support, vec![(0, rat_u64(1))]);
    }

    #[test]
    fn rc_constant_is_zero() {
        let f = BooleanFunction::total_from_u64(3, 0).unwrap();
        let a = fractional_block_sensitivity_at(&f, 5).unwrap();
        assert_eq!(a.rc, Rat::zero());
        assert!(a.distribution.is_none());
    }

    #[test]
    fn rc_certificates_verify_on_random_functions() {
        for seed in 0..30 {
            let f = BooleanFunction::random(4, 0.8, seed).unwrap();
            for x in f.inputs() {
                let a = fractional_block_sensitivity_at(&f, x).unwrap();
                a.verify(4).unwrap();
            }
        }
    }

    #[test]
    fn deterministic_examples() {
        assert_eq!(deterministic_complexity(&parity(4)).unwrap(), 4);
        assert_eq!(deterministic_complexity(&or4()).unwrap(), 4);
        let constant = BooleanFunction::total_from_u64(3, 0xff).unwrap();
        assert_eq!(deterministic_complexity(&constant).unwrap(), 0);
        let maj3 = named_function(NamedFunction::Majority, 3).unwrap();
        assert_eq!(deterministic_complexity(&maj3).unwrap(), 3);
    }

    #[test]
    fn deterministic_on_restriction_shrinks() {
        let f = parity(3);
        let odd = Promise::from_indices(3, (0u32..8).filter(|i| i.count_ones() % 2 == 1)).unwrap();
        let g = f.restrict(&odd).unwrap();
        assert_eq!(deterministic_complexity(&g).unwrap(), 0);
    }

    #[test]
    fn balance_examples() {
        let constant = BooleanFunction::total_from_u64(4, 0).unwrap();
        assert_eq!(balance(&constant), 0.0);
        assert_eq!(balance(&or4()), 1.0);
        assert_eq!(balance(&parity(4)), 4.0);
        assert_eq!(balance_ceil(&or4()), 1);
        assert_eq!(balance_ceil(&parity(4)), 4);
        let maj5 = named_function(NamedFunction::Majority, 5).unwrap();
        assert_eq!(balance_ceil(&maj5), 5);
    }

    #[test]
    fn qc_proxy_examples() {
        assert_eq!(qc_proxy_at(&or4(), 0).unwrap(), 2.0);
        assert_eq!(qc_proxy_at(&or4(), 0b0100).unwrap(), 1.0);
    }

    #[test]
    fn h_index_of_examples() {
        assert_eq!(
            h_index_of(MeasureSelector::C, &or4()).unwrap(),
            ExactVal::integer(1)
        );
        assert_eq!(
            h_index_of(MeasureSelector::C, &parity(4)).unwrap(),
            ExactVal::integer(4)
        );
        assert_eq!(
            h_index_of(MeasureSelector::CSquared, &or4()).unwrap(),
            ExactVal::integer(1)
        );
        assert_eq!(
            h_index_of(MeasureSelector::SqrtC, &parity(4)).unwrap(),
            ExactVal::integer(2)
        );
    }

    #[test]
    fn pointwise_chain_on_random_functions() {
        for seed in 0..20 {
            let f = BooleanFunction::random(4, 0.7, 100 + seed).unwrap();
            for x in f.inputs() {
                let c = certificate_complexity_at(&f, x).unwrap().0;
                let bs = block_sensitivity_at(&f, x).unwrap();
                let rc = rc_at(&f, x).unwrap();
                assert!(rat_u64(bs as u64) <= rc, "bs <= RC at {x}");
                assert!(rc <= rat_u64(c as u64), "RC <= C at {x}");
            }
        }
    }

    #[test]
    fn report_for_or4() {
        let r = MeasureReport::compute(&or4()).unwrap();
        assert_eq!((r.d, r.c, r.bs), (4, 4, 4));
        assert_eq!(r.rc, rat_u64(4));
        assert_eq!(r.bal, 1.0);
        assert_eq!(r.hi_c, ExactVal::integer(1));
        let json = r.to_json();
        assert_eq!(json["D"], 4);
        assert_eq!(json["RC"], "4/1");
        let row = r.to_csv_row("or4");
        assert!(row.starts_with("or4,4,4,4,4,1,1,"));
    }

    #[test]
    fn restriction_monotonicity() {
        let f = named_function(NamedFunction::Majority, 3).unwrap();
        for seed in 0..10u64 {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let members: Vec<u32> = (0..8).filter(|_| rng.gen::<bool>()).collect();
            if members.is_empty() {
                continue;
            }
            let p = Promise::from_indices(3, members).unwrap();
            let g = f.restrict(&p).unwrap();
            assert!(balance(&g) <= balance(&f) + 1e-12);
            assert!(
                certificate_complexity(&g).unwrap() <= certificate_complexity(&f).unwrap()
            );
            assert!(
                deterministic_complexity(&g).unwrap() <= deterministic_complexity(&f).unwrap()
            );
        }
    }
}

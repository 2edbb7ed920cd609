//! Gadget-based sculpting: embed a small partial function `g` into a total
//! function `f` through a shattered index set of the high-RC input class,
//! so that any algorithm for `g` transfers to `f` on the promise.
//!
//! For each gadget input the promise carries either the chosen
//! representative itself (when `f` already agrees with the lifted gadget)
//! or the support of its hard distribution conditioned on agreeing with
//! the representative over the shattered set. Conditioning keeps at least
//! half the mass because the shattered set contributes at most `A` of the
//! representative's `RC >= 2A` disagreement budget.

use crate::error::{Error, Result};
use crate::exact::{rat_ratio, rat_u64, Rat};
use crate::function::{BooleanFunction, Promise};
use crate::measures::{fractional_block_sensitivity_at, h_index_scaled_rc, rc_at};
use crate::sculpt::extension::{build_extension_from_shattered, ExtensionFunction};
use crate::sculpt::r0r::{CaseTag, SculptResult, SculptWitness, VerifiedBound};
use crate::shattering::{find_shattered_set, project};
use num_traits::{One, Signed, Zero};

pub const SCULPT_GADGET_CAP: usize = 14;

/// The per-gadget-input record kept alongside the promise.
#[derive(Debug, Clone)]
pub struct GadgetBranch {
    pub pattern: u32,
    pub representative: u32,
    /// `None` when `f` agrees with the lifted gadget at the
    /// representative; otherwise the conditioned hard distribution.
    pub conditioned: Option<Vec<(u32, Rat)>>,
    /// Mass the conditioning retained, before renormalization.
    pub retained_mass: Rat,
}

#[derive(Debug)]
pub struct GadgetSculpt {
    pub result: SculptResult,
    pub extension: ExtensionFunction,
    pub branches: Vec<GadgetBranch>,
}

/// Sculpts `f` through the partial gadget `g`, using inputs whose
/// fractional block sensitivity reaches `rc_threshold`.
pub fn sculpt_via_gadget(
    f: &BooleanFunction,
    g: &BooleanFunction,
    rc_threshold: u64,
) -> Result<GadgetSculpt> {
    if !f.is_total() {
        return Err(Error::SculptRefused("function must be total".into()));
    }
    if f.n() > SCULPT_GADGET_CAP {
        return Err(Error::CapExceeded {
            what: "gadget sculptor",
            cap: SCULPT_GADGET_CAP,
            requested: f.n(),
        });
    }
    let a = g.n();
    if rc_threshold < 2 * a as u64 {
        return Err(Error::SculptRefused(format!(
            "threshold {rc_threshold} below 2A = {}",
            2 * a
        )));
    }
    let threshold = rat_u64(rc_threshold);
    let mut high_rc: Vec<u32> = Vec::new();
    for x in f.inputs() {
        if rc_at(f, x)? >= threshold {
            high_rc.push(x);
        }
    }
    if high_rc.is_empty() {
        return Err(Error::SculptRefused(
            "no input reaches the RC threshold".into(),
        ));
    }
    let witness = find_shattered_set(&high_rc, f.n(), Some(a)).map_err(|e| {
        Error::SculptRefused(format!(
            "threshold class has no shattered set of size {a}: {e}"
        ))
    })?;
    let b = witness.indices.clone();
    let phi = build_extension_from_shattered(&high_rc, &b, f.n())?;

    let mut bounds = Vec::new();
    let mut branches = Vec::new();
    let mut promise_members: Vec<u32> = Vec::new();
    let half = rat_ratio(1, 2);
    let disagreement_cap = rat_ratio(2, rc_threshold);
    let mut min_mass: Option<Rat> = None;
    let mut max_off_b: Rat = Rat::zero();
    for pattern in g.inputs() {
        let z = phi.apply(pattern);
        let gz = g.value_unchecked(pattern);
        if f.value_unchecked(z) == gz {
            promise_members.push(z);
            branches.push(GadgetBranch {
                pattern,
                representative: z,
                conditioned: None,
                retained_mass: Rat::one(),
            });
            continue;
        }
        // condition the hard distribution on agreement with z over B
        let analysis = fractional_block_sensitivity_at(f, z)?;
        let dist = analysis
            .distribution
            .ok_or_else(|| Error::Internal("high-RC input has a hard distribution".into()))?;
        let b_mask: u32 = b.iter().map(|&i| 1u32 << i).sum();
        let kept: Vec<(u32, Rat)> = dist
            .support
            .iter()
            .filter(|(y, _)| (y ^ z) & b_mask == 0)
            .map(|(y, p)| (*y, p.clone()))
            .collect();
        let mass: Rat = kept.iter().map(|(_, p)| p.clone()).sum();
        if mass.is_zero() {
            return Err(Error::Internal(
                "conditioning emptied a hard distribution despite the mass bound".into(),
            ));
        }
        let conditioned: Vec<(u32, Rat)> = kept
            .into_iter()
            .map(|(y, p)| (y, p / &mass))
            .collect();
        // per-index disagreement off B after conditioning
        for i in 0..f.n() {
            if b_mask >> i & 1 == 1 {
                continue;
            }
            let dis: Rat = conditioned
                .iter()
                .filter(|(y, _)| (y ^ z) >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .sum();
            if dis > max_off_b {
                max_off_b = dis;
            }
        }
        promise_members.extend(conditioned.iter().map(|(y, _)| *y));
        if min_mass.as_ref().map_or(true, |m| mass < *m) {
            min_mass = Some(mass.clone());
        }
        branches.push(GadgetBranch {
            pattern,
            representative: z,
            conditioned: Some(conditioned),
            retained_mass: mass,
        });
    }
    promise_members.sort_unstable();
    promise_members.dedup();
    let promise = Promise::from_indices(f.n(), promise_members.iter().copied())?;

    // the reduction identity: g(y|_B) = f(y) for every promise member
    let identity_holds = promise_members
        .iter()
        .all(|&y| g.value(project(y, &b)) == Some(f.value_unchecked(y)));
    bounds.push(VerifiedBound {
        name: "reduction identity g(y|B) = f(y) on all of P".into(),
        lhs: format!("{} members", promise_members.len()),
        rhs: "all agree".into(),
        holds: identity_holds,
    });
    if let Some(mass) = min_mass {
        bounds.push(VerifiedBound {
            name: "conditioning mass >= 1/2".into(),
            lhs: crate::measures::rat_string(&mass),
            rhs: "1/2".into(),
            holds: mass >= half,
        });
    }
    bounds.push(VerifiedBound {
        name: "off-B per-index disagreement <= 2/threshold".into(),
        lhs: crate::measures::rat_string(&max_off_b),
        rhs: crate::measures::rat_string(&disagreement_cap),
        holds: max_off_b <= disagreement_cap,
    });

    Ok(GadgetSculpt {
        result: SculptResult {
            promise,
            case_tag: CaseTag::Gadget,
            witness: SculptWitness {
                special_input: phi.apply(g.inputs().next().unwrap_or(0)),
                bs: 0,
                assignment: None,
                block_family: Vec::new(),
                shattered: b,
                gadget_id: Some(format!("g:{}", crate::format::table_string(g))),
            },
            verified_bounds: bounds,
            value_flipped: false,
        },
        extension: phi,
        branches,
    })
}

/// The quantitative parameterization of the sculpting construction for a
/// given function: the scaled H-index `Hi(RC * 2 log2 n)`, the induced RC
/// threshold, and the largest admissible gadget arity
/// `Hi(RC) / (4 log2 n)`.
#[derive(Debug, Clone, Copy)]
pub struct GadgetParameters {
    pub hi_rc_scaled: f64,
    pub rc_threshold: f64,
    pub a_max: f64,
}

pub fn gadget_parameters(f: &BooleanFunction) -> Result<GadgetParameters> {
    let log_n = (f.n() as f64).log2();
    let hi_rc_scaled = h_index_scaled_rc(f, 2.0 * log_n)?;
    let hi_rc = crate::measures::h_index_of(crate::measures::MeasureSelector::Rc, f)?.to_f64();
    Ok(GadgetParameters {
        hi_rc_scaled,
        rc_threshold: hi_rc_scaled / (2.0 * log_n),
        a_max: hi_rc / (4.0 * log_n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{named_function, NamedFunction};

    fn equality_gadget() -> BooleanFunction {
        // partial 2-bit gadget defined on {00, 11}
        crate::format::parse_bf("n=2\n0**1\n").unwrap()
    }

    #[test]
    fn parity6_with_two_bit_gadget() {
        let f = named_function(NamedFunction::Parity, 6).unwrap();
        let g = equality_gadget();
        let s = sculpt_via_gadget(&f, &g, 4).unwrap();
        assert!(s.result.all_bounds_hold(), "{:?}", s.result.verified_bounds);
        assert_eq!(s.result.witness.shattered, vec![0, 1]);
        // one agreement branch (00 -> 0, parity 0) and one conditioned
        // branch (11 -> representative 3 has parity 0 but g = 1)
        assert!(s.branches.iter().any(|b| b.conditioned.is_none()));
        assert!(s.branches.iter().any(|b| b.conditioned.is_some()));
    }

    #[test]
    fn or_function_is_refused() {
        let f = named_function(NamedFunction::Or, 6).unwrap();
        let g = equality_gadget();
        // only the all-zero input has RC above 1, so no shattered pair exists
        assert!(matches!(
            sculpt_via_gadget(&f, &g, 4),
            Err(Error::SculptRefused(_))
        ));
    }

    #[test]
    fn threshold_below_2a_is_refused() {
        let f = named_function(NamedFunction::Parity, 6).unwrap();
        let g = equality_gadget();
        assert!(matches!(
            sculpt_via_gadget(&f, &g, 3),
            Err(Error::SculptRefused(_))
        ));
    }

    #[test]
    fn total_gadget_with_agreement_needs_no_distributions() {
        // parity of the two shattered bits agrees with PARITY_4 on the
        // lowest representatives, so every branch is an agreement branch
        let f = named_function(NamedFunction::Parity, 4).unwrap();
        let g = named_function(NamedFunction::Parity, 2).unwrap();
        let s = sculpt_via_gadget(&f, &g, 4).unwrap();
        assert!(s.branches.iter().all(|b| b.conditioned.is_none()));
        assert_eq!(s.result.promise.card(), 4);
        assert!(s.result.all_bounds_hold());
    }

    #[test]
    fn parameter_helper_runs() {
        let f = named_function(NamedFunction::Parity, 8).unwrap();
        let p = gadget_parameters(&f).unwrap();
        assert!(p.hi_rc_scaled > 0.0);
        assert!(p.a_max > 0.0);
    }
}

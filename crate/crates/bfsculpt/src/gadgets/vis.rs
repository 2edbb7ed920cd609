//! The vector-in-subspace instance with partial-sum encoding and a state
//! construction simulator.
//!
//! Bob's vector is encoded as a conditional-probability tree: level `l`
//! stores, per l-bit prefix of the measured index, the probability that the
//! next index bit is 0, each value rounded to `b` bits; the leaves carry
//! the amplitude signs. Walking the tree level by level reconstructs the
//! state (amplitudes are signed square roots of conditional products), and
//! the verdict compares the squared projection onto the subspace against
//! 1/2. Query accounting counts one level-query per tree level and `b`
//! bits per level; a classical simulator cannot count superposed bit
//! queries, so this convention is reported explicitly and separately from
//! any classical read count.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VIS_MIN_DIM: usize = 4;
pub const VIS_MAX_DIM: usize = 64;
pub const VIS_MAX_BITS: u32 = 16;

/// The partial-sum encoding: `n - 1` conditional probabilities (level
/// order, node `(level l, prefix p)` at offset `2^l - 1 + p`) plus `n`
/// signs, each entry on `bits` bits.
#[derive(Debug, Clone)]
pub struct VisEncoding {
    pub bits: u32,
    /// `round(2^bits * P[next index bit = 0 | prefix])` per internal node.
    pub probabilities: Vec<u32>,
    /// 1 marks a negative amplitude.
    pub signs: Vec<u8>,
}

impl VisEncoding {
    pub fn entries(&self) -> usize {
        self.probabilities.len() + self.signs.len()
    }
}

#[derive(Debug, Clone)]
pub struct VisInstance {
    /// Dimension; a power of two.
    pub n: usize,
    pub precision_bits: u32,
    /// The promised side: `true` when `v` was drawn inside `H`.
    pub in_h: bool,
    pub seed: u64,
    /// Alice's subspace basis, discretized to multiples of `2^-b`
    /// (entries are `round(2^b * value)`).
    pub basis_h: Vec<Vec<i32>>,
    /// Bob's vector, discretized the same way.
    pub v_disc: Vec<i32>,
    pub encoding: VisEncoding,
    /// Pre-discretization data, kept for fidelity accounting.
    pub exact_h: Vec<Vec<f64>>,
    pub exact_h_perp: Vec<Vec<f64>>,
    pub exact_v: Vec<f64>,
}

/// Builds the conditional-probability tree of `v` at the given precision.
/// The first index bit is the most significant, so leaves appear in
/// natural index order. A zero-mass prefix stores probability 0.
pub fn vis_encode(v: &[f64], bits: u32) -> VisEncoding {
    let n = v.len();
    let levels = n.trailing_zeros() as usize;
    let scale = f64::from(1u32 << bits);
    let mut probabilities = Vec::with_capacity(n - 1);
    for level in 0..levels {
        let prefix_len = 1usize << level;
        let block = n / prefix_len;
        for prefix in 0..prefix_len {
            let start = prefix * block;
            let mass: f64 = v[start..start + block].iter().map(|a| a * a).sum();
            let mass0: f64 = v[start..start + block / 2].iter().map(|a| a * a).sum();
            let cond = if mass > 0.0 { mass0 / mass } else { 0.0 };
            probabilities.push((cond * scale).round() as u32);
        }
    }
    VisEncoding {
        bits,
        probabilities,
        signs: v.iter().map(|&a| u8::from(a < 0.0)).collect(),
    }
}

/// Reconstructs the amplitudes from the rounded tree: signed square roots
/// of the conditional products, level by level.
pub fn vis_reconstruct(encoding: &VisEncoding) -> Vec<f64> {
    let n = encoding.signs.len();
    let levels = n.trailing_zeros() as usize;
    let scale = f64::from(1u32 << encoding.bits);
    let mut mass = vec![1.0f64];
    for level in 0..levels {
        let base = (1usize << level) - 1;
        let mut next = Vec::with_capacity(mass.len() * 2);
        for (prefix, &m) in mass.iter().enumerate() {
            let cond = f64::from(encoding.probabilities[base + prefix]) / scale;
            next.push(m * cond);
            next.push(m * (1.0 - cond));
        }
        mass = next;
    }
    mass.iter()
        .zip(&encoding.signs)
        .map(|(&m, &s)| if s == 1 { -m.sqrt() } else { m.sqrt() })
        .collect()
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller on open-interval uniforms
    let u: f64 = 1.0 - rng.gen::<f64>();
    let t: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * t).cos()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn discretize(value: f64, bits: u32) -> i32 {
    (value * f64::from(1u32 << bits)).round() as i32
}

/// Builds a seeded instance: a random orthonormal frame splits into `H`
/// and its complement, `v` is a random unit combination of the promised
/// side, and the encoding is built from the pre-discretization `v` with a
/// single rounding.
pub fn vis_build_instance(n: usize, bits: u32, in_h: bool, seed: u64) -> Result<VisInstance> {
    if !(VIS_MIN_DIM..=VIS_MAX_DIM).contains(&n) || !n.is_power_of_two() {
        return Err(Error::CapExceeded {
            what: "vector-in-subspace dimension (power of two)",
            cap: VIS_MAX_DIM,
            requested: n,
        });
    }
    if bits == 0 || bits > VIS_MAX_BITS {
        return Err(Error::CapExceeded {
            what: "vector-in-subspace precision bits",
            cap: VIS_MAX_BITS as usize,
            requested: bits as usize,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // random orthonormal frame by Gram-Schmidt on Gaussian rows
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(n);
    while frame.len() < n {
        let mut row: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
        for prev in &frame {
            let proj = dot(&row, prev);
            for (r, p) in row.iter_mut().zip(prev) {
                *r -= proj * p;
            }
        }
        let norm = dot(&row, &row).sqrt();
        if norm < 1e-6 {
            continue;
        }
        for r in row.iter_mut() {
            *r /= norm;
        }
        frame.push(row);
    }
    let exact_h: Vec<Vec<f64>> = frame[..n / 2].to_vec();
    let exact_h_perp: Vec<Vec<f64>> = frame[n / 2..].to_vec();

    let side = if in_h { &exact_h } else { &exact_h_perp };
    let mut exact_v = vec![0.0; n];
    for _attempt in 0..20 {
        let coeffs: Vec<f64> = (0..n / 2).map(|_| gaussian(&mut rng)).collect();
        let mut v = vec![0.0; n];
        for (c, basis_row) in coeffs.iter().zip(side) {
            for (vi, bi) in v.iter_mut().zip(basis_row) {
                *vi += c * bi;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm < 1e-9 {
            continue;
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        if v.iter().all(|a| discretize(*a, bits) == 0) {
            continue; // degenerate after discretization; resample
        }
        exact_v = v;
        break;
    }
    if exact_v.iter().all(|&a| a == 0.0) {
        return Err(Error::Internal(
            "vector sampling degenerated repeatedly".into(),
        ));
    }

    let encoding = vis_encode(&exact_v, bits);
    Ok(VisInstance {
        n,
        precision_bits: bits,
        in_h,
        seed,
        basis_h: exact_h
            .iter()
            .map(|row| row.iter().map(|&x| discretize(x, bits)).collect())
            .collect(),
        v_disc: exact_v.iter().map(|&x| discretize(x, bits)).collect(),
        encoding,
        exact_h,
        exact_h_perp,
        exact_v,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct VisDecision {
    pub in_h: bool,
    /// Squared norm of the reconstructed state's projection onto `H`.
    pub proj_mass: f64,
    /// One superposed level-query per tree level: `log2 n`.
    pub probability_queries: usize,
    /// `probability_queries * b` bits.
    pub bit_queries: usize,
}

/// Alice's decision: reconstruct the state from Bob's encoding, project
/// onto her subspace, and answer by majority mass.
pub fn vis_alice_decide(instance: &VisInstance) -> VisDecision {
    let mut state = vis_reconstruct(&instance.encoding);
    let norm = dot(&state, &state).sqrt();
    if norm > 0.0 {
        for a in state.iter_mut() {
            *a /= norm;
        }
    }
    let proj_mass: f64 = instance
        .exact_h
        .iter()
        .map(|row| dot(row, &state).powi(2))
        .sum();
    let levels = instance.n.trailing_zeros() as usize;
    VisDecision {
        in_h: proj_mass >= 0.5,
        proj_mass,
        probability_queries: levels,
        bit_queries: levels * instance.precision_bits as usize,
    }
}

/// Squared inner product between the reconstructed (normalized) state and
/// the pre-discretization vector.
pub fn vis_fidelity(instance: &VisInstance) -> f64 {
    let mut state = vis_reconstruct(&instance.encoding);
    let norm = dot(&state, &state).sqrt();
    if norm > 0.0 {
        for a in state.iter_mut() {
            *a /= norm;
        }
    }
    dot(&state, &instance.exact_v).powi(2)
}

pub fn vis_to_json(instance: &VisInstance) -> serde_json::Value {
    serde_json::json!({
        "n": instance.n,
        "b": instance.precision_bits,
        "side": if instance.in_h { "in-H" } else { "in-H-perp" },
        "seed": instance.seed,
        "H": instance.basis_h,
        "v": instance.v_disc,
        "encoding": {
            "probabilities": instance.encoding.probabilities,
            "signs": instance.encoding.signs,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_vector_encodes_down_the_zero_path() {
        let mut v = vec![0.0; 4];
        v[0] = 1.0;
        let e = vis_encode(&v, 8);
        // root: first bit certainly 0; left child certain too
        assert_eq!(e.probabilities[0], 256);
        assert_eq!(e.probabilities[1], 256);
        assert_eq!(e.signs, vec![0, 0, 0, 0]);
        let r = vis_reconstruct(&e);
        assert!((r[0] - 1.0).abs() < 1e-12);
        assert!(r[1..].iter().all(|&a| a == 0.0));
    }

    #[test]
    fn encoding_size_matches_tree_count() {
        for n in [4usize, 8, 16] {
            let v: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).sqrt()).collect();
            let norm = dot(&v, &v).sqrt();
            let v: Vec<f64> = v.iter().map(|a| a / norm).collect();
            let e = vis_encode(&v, 8);
            assert_eq!(e.probabilities.len(), n - 1);
            assert_eq!(e.signs.len(), n);
        }
    }

    #[test]
    fn reconstruction_error_within_rounding_budget() {
        let inst = vis_build_instance(16, 8, true, 3).unwrap();
        let rec = vis_reconstruct(&inst.encoding);
        let tol = 2f64.powi(-(inst.precision_bits as i32) + 4); // 2^[-b + log2 n]
        for (r, v) in rec.iter().zip(&inst.exact_v) {
            assert!((r.abs() - v.abs()).abs() <= tol, "{r} vs {v}");
        }
    }

    #[test]
    fn exact_encoding_projects_exactly() {
        // with a wide mantissa the rounding is the identity at f64 scale
        let inst = vis_build_instance(8, 16, true, 11).unwrap();
        let mut exact = vis_encode(&inst.exact_v, 16);
        exact.bits = 16;
        let d = vis_alice_decide(&inst);
        assert!(d.in_h);
        assert!(d.proj_mass > 0.999, "mass {}", d.proj_mass);
        let perp = vis_build_instance(8, 16, false, 11).unwrap();
        let d = vis_alice_decide(&perp);
        assert!(!d.in_h);
        assert!(d.proj_mass < 0.001, "mass {}", d.proj_mass);
    }

    #[test]
    fn verdicts_and_fidelity_at_n16_b8() {
        let mut correct = 0;
        let total = 40;
        for seed in 0..total {
            for side in [true, false] {
                let inst = vis_build_instance(16, 8, side, seed).unwrap();
                let d = vis_alice_decide(&inst);
                if d.in_h == side {
                    correct += 1;
                }
                assert!(vis_fidelity(&inst) >= 0.99, "seed {seed} side {side}");
                assert_eq!(d.probability_queries, 4);
                assert_eq!(d.bit_queries, 32);
            }
        }
        assert!(correct * 100 >= total * 2 * 95, "correct {correct}");
    }
}

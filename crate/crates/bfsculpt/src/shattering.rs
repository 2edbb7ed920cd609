//! Shattered index sets: finding an index set on which a string collection
//! realizes every binary pattern, with the quantitative guarantee
//! `|A| >= log2|S| / log2(n+1)` that the Sauer-Shelah lemma provides.

use crate::error::{Error, Result};
use serde::Serialize;

pub const MAX_SHATTER_ARITY: usize = 16;
pub const MAX_SHATTER_SET: usize = 1 << 14;
pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

/// A verified shattering witness: the index set and, for every pattern over
/// those indices, a member of the string set realizing it.
#[derive(Debug, Clone, Serialize)]
pub struct ShatterWitness {
    /// Shattered positions, ascending.
    pub indices: Vec<usize>,
    /// `projection_table[p]` realizes pattern `p`, where bit `k` of `p` is
    /// the value at `indices[k]`.
    pub projection_table: Vec<u32>,
}

impl ShatterWitness {
    /// Re-checks the witness against the defining property.
    pub fn verify(&self, strings: &[u32]) -> Result<()> {
        let a = self.indices.len();
        if self.projection_table.len() != 1 << a {
            return Err(Error::Internal("projection table size mismatch".into()));
        }
        for (pattern, member) in self.projection_table.iter().enumerate() {
            if !strings.contains(member) {
                return Err(Error::Internal("witness member not in the set".into()));
            }
            if project(*member, &self.indices) != pattern as u32 {
                return Err(Error::Internal(format!(
                    "member {member} does not realize pattern {pattern}"
                )));
            }
        }
        Ok(())
    }
}

/// Restriction of `x` to `indices`: bit `k` of the result is bit
/// `indices[k]` of `x`.
#[inline]
pub fn project(x: u32, indices: &[usize]) -> u32 {
    indices
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &i)| acc | ((x >> i & 1) << k))
}

/// The size guarantee of the Sauer-Shelah corollary:
/// `ceil(log2|S| / log2(n+1))`, and at least 1 whenever `|S| >= 2`.
pub fn guaranteed_size(set_size: usize, n: usize) -> usize {
    if set_size <= 1 {
        return 0;
    }
    let bound = (set_size as f64).log2() / ((n + 1) as f64).log2();
    bound.ceil() as usize
}

fn is_shattered(strings: &[u32], indices: &[usize]) -> Option<Vec<u32>> {
    let a = indices.len();
    let patterns = 1usize << a;
    let mut table: Vec<Option<u32>> = vec![None; patterns];
    let mut seen = 0;
    for &s in strings {
        let p = project(s, indices) as usize;
        if table[p].is_none() {
            table[p] = Some(s);
            seen += 1;
            if seen == patterns {
                return Some(table.into_iter().map(Option::unwrap).collect());
            }
        }
    }
    None
}

struct Dfs<'a> {
    strings: &'a [u32],
    n: usize,
    target: usize,
    budget: usize,
    nodes: usize,
}

impl Dfs<'_> {
    /// Extends `prefix` (already shattered) with indices above `next`,
    /// in lexicographic order. Subsets of shattered sets are shattered,
    /// so non-shattered prefixes are never extended.
    fn search(&mut self, prefix: &mut Vec<usize>, next: usize) -> Result<Option<Vec<u32>>> {
        if prefix.len() == self.target {
            return Ok(is_shattered(self.strings, prefix));
        }
        for i in next..self.n {
            if self.n - i < self.target - prefix.len() {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::ShatterBudget {
                    target: self.target,
                    budget: self.budget,
                });
            }
            prefix.push(i);
            if is_shattered(self.strings, prefix).is_some() {
                if let Some(table) = self.search(prefix, i + 1)? {
                    return Ok(Some(table));
                }
            }
            prefix.pop();
        }
        Ok(None)
    }
}

/// Finds a shattered index set of size `target_size` (defaulting to the
/// Sauer-Shelah guarantee). The first witness in lexicographic index order
/// is returned.
///
/// Below the guarantee a witness always exists, so exhaustion there is an
/// internal error rather than a "no witness" answer; above the guarantee a
/// budget exhaustion is reported distinctly because nonexistence is never
/// concluded.
pub fn find_shattered_set(
    strings: &[u32],
    n: usize,
    target_size: Option<usize>,
) -> Result<ShatterWitness> {
    find_shattered_set_budgeted(strings, n, target_size, DEFAULT_NODE_BUDGET)
}

pub fn find_shattered_set_budgeted(
    strings: &[u32],
    n: usize,
    target_size: Option<usize>,
    budget: usize,
) -> Result<ShatterWitness> {
    if strings.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut distinct = strings.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let guarantee = guaranteed_size(distinct.len(), n);
    let target = target_size.unwrap_or(guarantee);
    if target == 0 {
        return Ok(ShatterWitness {
            indices: Vec::new(),
            projection_table: vec![distinct[0]],
        });
    }
    if target > n {
        return Err(Error::NoShatteredSet { size: target });
    }
    let mut dfs = Dfs {
        strings: &distinct,
        n,
        target,
        budget,
        nodes: 0,
    };
    let mut prefix = Vec::new();
    match dfs.search(&mut prefix, 0) {
        Ok(Some(table)) => {
            let witness = ShatterWitness {
                indices: prefix,
                projection_table: table,
            };
            debug_assert!(witness.verify(&distinct).is_ok());
            Ok(witness)
        }
        Ok(None) => {
            if target <= guarantee {
                Err(Error::Internal(format!(
                    "no shattered set of size {target} found below the guarantee {guarantee}"
                )))
            } else {
                Err(Error::NoShatteredSet { size: target })
            }
        }
        Err(e) => {
            if target <= guarantee {
                Err(Error::Internal(format!(
                    "node budget exhausted below the guarantee: {e}"
                )))
            } else {
                Err(e)
            }
        }
    }
}

/// Exact maximum shattered-set size by level-wise exhaustive search:
/// level `d+1` candidates extend shattered sets of level `d` (downward
/// closure makes this pruning sound).
pub fn max_shattered_size(strings: &[u32], n: usize) -> Result<usize> {
    if n > MAX_SHATTER_ARITY {
        return Err(Error::CapExceeded {
            what: "max shattered size arity",
            cap: MAX_SHATTER_ARITY,
            requested: n,
        });
    }
    let mut distinct = strings.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() > MAX_SHATTER_SET {
        return Err(Error::CapExceeded {
            what: "max shattered size set cardinality",
            cap: MAX_SHATTER_SET,
            requested: distinct.len(),
        });
    }
    if distinct.len() <= 1 {
        return Ok(0);
    }
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    let mut depth = 0;
    loop {
        let mut next_level: Vec<Vec<usize>> = Vec::new();
        for set in &level {
            let start = set.last().map_or(0, |&i| i + 1);
            for i in start..n {
                let mut cand = set.clone();
                cand.push(i);
                if is_shattered(&distinct, &cand).is_some() {
                    next_level.push(cand);
                }
            }
        }
        if next_level.is_empty() {
            return Ok(depth);
        }
        depth += 1;
        level = next_level;
    }
}

/// Sauer-Shelah counting bound: `|S| <= sum_{i<=d} binom(n, i)`.
pub fn sauer_shelah_bound(n: usize, d: usize) -> u128 {
    (0..=d).map(|i| num_integer::binomial(n as u128, i as u128)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_cube_shatters_everything() {
        let strings: Vec<u32> = (0..8).collect();
        let w = find_shattered_set(&strings, 3, Some(3)).unwrap();
        assert_eq!(w.indices, vec![0, 1, 2]);
        w.verify(&strings).unwrap();
        assert_eq!(max_shattered_size(&strings, 3).unwrap(), 3);
    }

    #[test]
    fn two_distinct_strings_shatter_one_index() {
        let strings = vec![0b0101, 0b0001];
        let w = find_shattered_set(&strings, 4, None).unwrap();
        assert_eq!(w.indices.len(), 1);
        assert_eq!(w.indices, vec![2]);
        w.verify(&strings).unwrap();
    }

    #[test]
    fn singleton_has_no_shattered_indices() {
        assert_eq!(max_shattered_size(&[0b101], 3).unwrap(), 0);
        let w = find_shattered_set(&[0b101], 3, None).unwrap();
        assert!(w.indices.is_empty());
    }

    #[test]
    fn guarantee_met_on_random_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let size = rng.gen_range(2..=64usize);
            let mut strings: Vec<u32> = Vec::new();
            while strings.len() < size {
                let s = rng.gen_range(0..256u32);
                if !strings.contains(&s) {
                    strings.push(s);
                }
            }
            let w = find_shattered_set(&strings, 8, None).unwrap();
            assert!(w.indices.len() >= guaranteed_size(strings.len(), 8));
            w.verify(&strings).unwrap();
        }
    }

    #[test]
    fn sixteen_strings_force_two_indices() {
        // log2(16)/log2(9) = 1.26 so the guarantee rounds up to 2
        assert_eq!(guaranteed_size(16, 8), 2);
    }

    #[test]
    fn downward_closure_spot_check() {
        let strings = vec![0b000, 0b011, 0b101, 0b110, 0b111];
        let w = find_shattered_set(&strings, 3, Some(2)).unwrap();
        for &i in &w.indices {
            assert!(is_shattered(&strings, &[i]).is_some());
        }
    }

    #[test]
    fn sauer_shelah_count_on_random_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let size = rng.gen_range(1..=100usize);
            let strings: Vec<u32> = (0..size).map(|_| rng.gen_range(0..256)).collect();
            let mut distinct = strings.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let d = max_shattered_size(&strings, 8).unwrap();
            assert!(distinct.len() as u128 <= sauer_shelah_bound(8, d));
        }
    }
}

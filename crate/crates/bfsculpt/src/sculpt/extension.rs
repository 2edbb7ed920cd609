//! Extension functions: injective maps from short strings to longer ones,
//! modeling enriched query access.

use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::shattering::project;
use serde::Serialize;

/// An injective total map from `{0,1}^source_arity` to
/// `{0,1}^target_arity`, stored as an explicit table.
#[derive(Debug, Clone, Serialize)]
pub struct ExtensionFunction {
    pub source_arity: usize,
    pub target_arity: usize,
    /// `table[pattern]` is the image of `pattern`.
    pub table: Vec<u32>,
}

impl ExtensionFunction {
    pub fn new(source_arity: usize, target_arity: usize, table: Vec<u32>) -> Result<Self> {
        if target_arity < source_arity {
            return Err(Error::Internal(
                "extension target must be at least the source arity".into(),
            ));
        }
        if table.len() != 1 << source_arity {
            return Err(Error::Internal("extension table size mismatch".into()));
        }
        let mut sorted = table.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != table.len() {
            return Err(Error::Internal("extension function must be injective".into()));
        }
        Ok(ExtensionFunction {
            source_arity,
            target_arity,
            table,
        })
    }

    pub fn apply(&self, pattern: u32) -> u32 {
        self.table[pattern as usize]
    }

    /// Lifts a partial function `g` on the source bits to `g^phi` on the
    /// target bits, defined on `phi(Dom(g))`.
    pub fn lift(&self, g: &BooleanFunction) -> Result<BooleanFunction> {
        if g.n() != self.source_arity {
            return Err(Error::ArityMismatch(g.n(), self.source_arity));
        }
        let size = 1usize << self.target_arity;
        let mut domain = crate::bitmap::Bitmap::zeros(size);
        let mut values = crate::bitmap::Bitmap::zeros(size);
        for pattern in g.inputs() {
            let z = self.apply(pattern) as usize;
            domain.set(z);
            if g.value_unchecked(pattern) {
                values.set(z);
            }
        }
        BooleanFunction::new(self.target_arity, domain, values)
    }
}

/// Builds the extension that sends each pattern over the shattered indices
/// `b` to the lowest-index member of `c_set` realizing it.
pub fn build_extension_from_shattered(c_set: &[u32], b: &[usize], target_arity: usize) -> Result<ExtensionFunction> {
    let a = b.len();
    let mut sorted = c_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut table = vec![u32::MAX; 1 << a];
    for &z in &sorted {
        let p = project(z, b) as usize;
        if table[p] == u32::MAX {
            table[p] = z;
        }
    }
    if table.iter().any(|&z| z == u32::MAX) {
        return Err(Error::NoShatteredSet { size: a });
    }
    ExtensionFunction::new(a, target_arity, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_extension_from_full_cube() {
        let c: Vec<u32> = (0..8).collect();
        let phi = build_extension_from_shattered(&c, &[0, 1, 2], 3).unwrap();
        for x in 0..8u32 {
            assert_eq!(phi.apply(x), x);
        }
    }

    #[test]
    fn single_index_extension() {
        let c = vec![0b10u32, 0b01];
        let phi = build_extension_from_shattered(&c, &[0], 2).unwrap();
        assert_eq!(phi.apply(0), 0b10);
        assert_eq!(phi.apply(1), 0b01);
    }

    #[test]
    fn defining_round_trip() {
        let c = vec![0b000u32, 0b011, 0b101, 0b110];
        let b = [0usize, 1];
        let phi = build_extension_from_shattered(&c, &b, 3).unwrap();
        for pattern in 0..4u32 {
            assert_eq!(project(phi.apply(pattern), &b), pattern);
        }
    }

    #[test]
    fn unshattered_set_is_rejected() {
        let c = vec![0b00u32, 0b11];
        assert!(build_extension_from_shattered(&c, &[0, 1], 2).is_err());
    }
}

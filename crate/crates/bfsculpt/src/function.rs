//! Truth-table representation of (possibly partial) Boolean functions,
//! partial assignments and promises.
//!
//! Input indexing convention, shared by every module: the input `x` with
//! integer index `i` satisfies `x_{j+1} = bit j of i` (least significant bit,
//! 0-based). Index sets over positions are `u32` masks under the same
//! convention, so flipping a block `B` of positions is `x ^ B`.

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest arity for which explicit truth tables are kept (a 2^24-bit bitmap).
pub const MAX_ARITY: usize = 24;

/// A possibly-partial Boolean function on `n`-bit strings, stored as
/// domain/value bitmaps over all `2^n` points.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BooleanFunction {
    n: usize,
    domain: Bitmap,
    values: Bitmap,
}

impl BooleanFunction {
    /// Builds a function from explicit domain and value bitmaps.
    ///
    /// `values` must be zero outside `domain`, and `domain` must be nonempty.
    pub fn new(n: usize, domain: Bitmap, values: Bitmap) -> Result<Self> {
        if n == 0 || n > MAX_ARITY {
            return Err(Error::ArityOutOfRange(n, MAX_ARITY));
        }
        let size = 1usize << n;
        if domain.len() != size || values.len() != size {
            return Err(Error::ArityMismatch(domain.len(), size));
        }
        if domain.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if !values.is_subset_of(&domain) {
            return Err(Error::ValuesOutsideDomain);
        }
        Ok(BooleanFunction { n, domain, values })
    }

    /// Builds a total function from its value bitmap.
    pub fn total(n: usize, values: Bitmap) -> Result<Self> {
        let size = 1usize << n;
        BooleanFunction::new(n, Bitmap::ones(size), values)
    }

    /// Builds a total function of arity `n <= 6` from its truth table packed
    /// into a `u64` (bit `i` is the value at input index `i`).
    pub fn total_from_u64(n: usize, table: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::ArityOutOfRange(n, 6));
        }
        let size = 1usize << n;
        let values = Bitmap::from_indices(size, (0..size as u32).filter(|&i| table >> i & 1 == 1));
        BooleanFunction::total(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points of the ambient cube, `2^n`.
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    pub fn domain(&self) -> &Bitmap {
        &self.domain
    }

    pub fn is_total(&self) -> bool {
        self.domain.count_ones() == self.size()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.domain.get(x as usize)
    }

    pub fn value(&self, x: u32) -> Option<bool> {
        if self.contains(x) {
            Some(self.values.get(x as usize))
        } else {
            None
        }
    }

    /// Value at a domain point; panics outside the domain.
    pub fn value_unchecked(&self, x: u32) -> bool {
        debug_assert!(self.contains(x));
        self.values.get(x as usize)
    }

    /// Iterates over the domain in increasing input-index order.
    pub fn inputs(&self) -> impl Iterator<Item = u32> + '_ {
        self.domain.iter_ones().map(|i| i as u32)
    }

    /// The value class `f^{-1}(v)` as a bitmap.
    pub fn class(&self, v: bool) -> Bitmap {
        if v {
            self.values.clone()
        } else {
            self.domain.minus(&self.values)
        }
    }

    pub fn class_count(&self, v: bool) -> usize {
        if v {
            self.values.count_ones()
        } else {
            self.domain.count_ones() - self.values.count_ones()
        }
    }

    /// `Some(v)` if the function is constant `v` on its domain.
    pub fn constant_value(&self) -> Option<bool> {
        if self.class_count(true) == 0 {
            Some(false)
        } else if self.class_count(false) == 0 {
            Some(true)
        } else {
            None
        }
    }

    /// Restricts the function to a promise set.
    pub fn restrict(&self, p: &Promise) -> Result<Self> {
        if p.n != self.n {
            return Err(Error::ArityMismatch(p.n, self.n));
        }
        if !p.members.is_subset_of(&self.domain) {
            return Err(Error::PromiseNotSubset);
        }
        if p.members.is_empty() {
            return Err(Error::EmptyDomain);
        }
        Ok(BooleanFunction {
            n: self.n,
            domain: p.members.clone(),
            values: self.values.and(&p.members),
        })
    }

    /// The function with every value complemented on the same domain.
    pub fn complemented(&self) -> Self {
        BooleanFunction {
            n: self.n,
            domain: self.domain.clone(),
            values: self.domain.minus(&self.values),
        }
    }

    /// All `2^(2^n)` total functions, in integer order of the value bitmap.
    pub fn all_total(n: usize) -> Result<impl Iterator<Item = BooleanFunction>> {
        if n > 4 {
            return Err(Error::CapExceeded {
                what: "all_total_functions enumerates 2^(2^n) tables",
                cap: 4,
                requested: n,
            });
        }
        let size = 1usize << n;
        Ok((0u64..1u64 << size).map(move |t| BooleanFunction::total_from_u64(n, t).unwrap()))
    }

    /// A seeded random function; each point joins the domain with probability
    /// `density` and gets a fair random value. A density of 1.0 yields a
    /// total function. The all-excluded corner case keeps index 0.
    pub fn random(n: usize, density: f64, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_ARITY {
            return Err(Error::ArityOutOfRange(n, MAX_ARITY));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = 1usize << n;
        let mut domain = Bitmap::zeros(size);
        let mut values = Bitmap::zeros(size);
        for i in 0..size {
            if rng.gen::<f64>() < density {
                domain.set(i);
                if rng.gen::<bool>() {
                    values.set(i);
                }
            }
        }
        if domain.is_empty() {
            domain.set(0);
        }
        BooleanFunction::new(n, domain, values)
    }

    /// A seeded random total function.
    pub fn random_total(n: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_ARITY {
            return Err(Error::ArityOutOfRange(n, MAX_ARITY));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = 1usize << n;
        let mut values = Bitmap::zeros(size);
        for i in 0..size {
            if rng.gen::<bool>() {
                values.set(i);
            }
        }
        BooleanFunction::total(n, values)
    }
}

impl std::fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BooleanFunction(n={}, ", self.n)?;
        if self.size() <= 64 {
            write!(f, "{})", crate::format::table_string(self))
        } else {
            write!(f, "|dom|={})", self.domain.count_ones())
        }
    }
}

/// Named function families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedFunction {
    Or,
    And,
    Parity,
    Majority,
}

impl NamedFunction {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "OR" => Some(NamedFunction::Or),
            "AND" => Some(NamedFunction::And),
            "PARITY" | "XOR" => Some(NamedFunction::Parity),
            "MAJORITY" | "MAJ" => Some(NamedFunction::Majority),
            _ => None,
        }
    }
}

/// Builds the exact truth table of a named function.
pub fn named_function(name: NamedFunction, n: usize) -> Result<BooleanFunction> {
    if n == 0 || n > MAX_ARITY {
        return Err(Error::ArityOutOfRange(n, MAX_ARITY));
    }
    if name == NamedFunction::Majority && n % 2 == 0 {
        return Err(Error::MajorityEvenArity(n));
    }
    let size = 1usize << n;
    let mut values = Bitmap::zeros(size);
    for i in 0..size {
        let w = (i as u32).count_ones() as usize;
        let v = match name {
            NamedFunction::Or => w > 0,
            NamedFunction::And => w == n,
            NamedFunction::Parity => w % 2 == 1,
            NamedFunction::Majority => 2 * w > n,
        };
        if v {
            values.set(i);
        }
    }
    BooleanFunction::total(n, values)
}

/// Flips the positions of `block` (a mask over bit positions) in input `x`.
#[inline]
pub fn flip_block(x: u32, block: u32) -> u32 {
    x ^ block
}

/// A `{0,1,*}` pattern over `n` positions: `mask` marks the fixed positions
/// and `bits` holds their values (zero outside `mask`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialAssignment {
    n: usize,
    mask: u32,
    bits: u32,
}

impl PartialAssignment {
    pub fn new(n: usize, mask: u32, bits: u32) -> Result<Self> {
        if n == 0 || n > MAX_ARITY {
            return Err(Error::ArityOutOfRange(n, MAX_ARITY));
        }
        if mask >> n != 0 || bits & !mask != 0 {
            return Err(Error::Internal(format!(
                "partial assignment bits outside mask or arity: mask={mask:b} bits={bits:b} n={n}"
            )));
        }
        Ok(PartialAssignment { n, mask, bits })
    }

    pub fn empty(n: usize) -> Self {
        PartialAssignment { n, mask: 0, bits: 0 }
    }

    /// The restriction of input `x` to the positions of `mask`.
    pub fn of_input(n: usize, x: u32, mask: u32) -> Self {
        PartialAssignment {
            n,
            mask,
            bits: x & mask,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Number of fixed positions.
    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// True iff `x` agrees with every fixed position.
    #[inline]
    pub fn extends(&self, x: u32) -> bool {
        x & self.mask == self.bits
    }

    /// Fixes one more position. Re-fixing a position overwrites its value.
    pub fn with(&self, pos: usize, v: bool) -> Self {
        debug_assert!(pos < self.n);
        let bit = 1u32 << pos;
        PartialAssignment {
            n: self.n,
            mask: self.mask | bit,
            bits: if v { self.bits | bit } else { self.bits & !bit },
        }
    }

    /// True iff the two assignments disagree on some commonly fixed position.
    pub fn conflicts(&self, other: &PartialAssignment) -> bool {
        let common = self.mask & other.mask;
        (self.bits ^ other.bits) & common != 0
    }

    /// The inputs of the cube extending this assignment, as a bitmap.
    pub fn extension_bitmap(&self) -> Bitmap {
        let size = 1usize << self.n;
        let mut b = Bitmap::zeros(size);
        let free = !self.mask & ((1u32 << self.n) - 1);
        // enumerate subsets of the free mask
        let mut sub = 0u32;
        loop {
            b.set((self.bits | sub) as usize);
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        b
    }
}

impl std::fmt::Debug for PartialAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = (0..self.n)
            .map(|j| {
                if self.mask >> j & 1 == 0 {
                    '*'
                } else if self.bits >> j & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        write!(f, "PartialAssignment({s})")
    }
}

/// A promise set `P` of inputs, used to restrict functions.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Promise {
    n: usize,
    members: Bitmap,
}

impl Promise {
    pub fn new(n: usize, members: Bitmap) -> Result<Self> {
        if n == 0 || n > MAX_ARITY {
            return Err(Error::ArityOutOfRange(n, MAX_ARITY));
        }
        if members.len() != 1usize << n {
            return Err(Error::ArityMismatch(members.len(), 1usize << n));
        }
        Ok(Promise { n, members })
    }

    pub fn full(n: usize) -> Self {
        Promise {
            n,
            members: Bitmap::ones(1usize << n),
        }
    }

    pub fn from_indices<I: IntoIterator<Item = u32>>(n: usize, indices: I) -> Result<Self> {
        Promise::new(n, Bitmap::from_indices(1usize << n, indices))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &Bitmap {
        &self.members
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.get(x as usize)
    }

    pub fn card(&self) -> usize {
        self.members.count_ones()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn or2_table() {
        let f = named_function(NamedFunction::Or, 2).unwrap();
        assert_eq!(f.value(0), Some(false));
        assert_eq!(f.value(1), Some(true));
        assert_eq!(f.value(2), Some(true));
        assert_eq!(f.value(3), Some(true));
    }

    #[test]
    fn majority_needs_odd_arity() {
        assert!(named_function(NamedFunction::Majority, 4).is_err());
        let f = named_function(NamedFunction::Majority, 3).unwrap();
        assert_eq!(f.value(0b011), Some(true));
        assert_eq!(f.value(0b001), Some(false));
    }

    #[test]
    fn all_total_counts() {
        assert_eq!(BooleanFunction::all_total(2).unwrap().count(), 16);
    }

    #[test]
    fn restrict_full_domain_is_identity() {
        let f = named_function(NamedFunction::Parity, 3).unwrap();
        let g = f.restrict(&Promise::full(3)).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn restrict_or4_two_points() {
        let f = named_function(NamedFunction::Or, 4).unwrap();
        let p = Promise::from_indices(4, [0b0000, 0b1111]).unwrap();
        let g = f.restrict(&p).unwrap();
        assert_eq!(g.domain().count_ones(), 2);
        assert_eq!(g.value(0b0000), Some(false));
        assert_eq!(g.value(0b1111), Some(true));
        assert_eq!(g.value(0b0001), None);
    }

    #[test]
    fn restrict_parity_to_odd_weight_is_constant() {
        let f = named_function(NamedFunction::Parity, 3).unwrap();
        let odd = (0u32..8).filter(|i| i.count_ones() % 2 == 1);
        let g = f.restrict(&Promise::from_indices(3, odd).unwrap()).unwrap();
        assert_eq!(g.domain().count_ones(), 4);
        assert_eq!(g.constant_value(), Some(true));
    }

    #[test]
    fn restrict_is_monotone() {
        let f = named_function(NamedFunction::Majority, 3).unwrap();
        let p = Promise::from_indices(3, [0, 1, 3, 7]).unwrap();
        let p2 = Promise::from_indices(3, [1, 7]).unwrap();
        let once = f.restrict(&p2).unwrap();
        let twice = f.restrict(&p).unwrap().restrict(&p2).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn restrict_rejects_non_subset() {
        let f = named_function(NamedFunction::Or, 2).unwrap();
        let g = f.restrict(&Promise::from_indices(2, [0, 3]).unwrap()).unwrap();
        assert!(g.restrict(&Promise::from_indices(2, [1]).unwrap()).is_err());
    }

    #[test]
    fn extends_matches_definition() {
        // x = 0101, pattern **01 fixing the two low positions to 1,0
        let p = PartialAssignment::new(4, 0b0011, 0b0001).unwrap();
        assert!(p.extends(0b0101));
        let q = PartialAssignment::new(4, 0b0011, 0b0011).unwrap();
        assert!(!q.extends(0b0101));
        assert!(PartialAssignment::empty(4).extends(0b0101));
    }

    #[test]
    fn flip_block_involution() {
        assert_eq!(flip_block(0b0000, 0b0011), 0b0011);
        assert_eq!(flip_block(0b1010, 0), 0b1010);
        for x in 0..16u32 {
            for b in 0..16u32 {
                assert_eq!(flip_block(flip_block(x, b), b), x);
            }
        }
    }

    #[test]
    fn extension_bitmap_counts() {
        let p = PartialAssignment::new(3, 0b101, 0b001).unwrap();
        let ext = p.extension_bitmap();
        assert_eq!(ext.count_ones(), 2);
        assert!(ext.get(0b001) && ext.get(0b011));
    }

    #[test]
    fn random_full_density_is_total() {
        let f = BooleanFunction::random(4, 1.0, 7).unwrap();
        assert!(f.is_total());
        let g = BooleanFunction::random(4, 1.0, 7).unwrap();
        assert_eq!(f, g);
    }
}

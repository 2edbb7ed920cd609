//! Two-party functions, marginal families, and the query-to-communication
//! protocol compiler.

use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::sculpt::extension::ExtensionFunction;

pub const MARGINAL_ALICE_CAP: usize = 20;

/// A two-party function with evaluator-backed domain membership; the parts
/// can exceed explicit-table sizes, so everything is closure-based.
pub struct TwoPartyFunction {
    pub alice_arity: usize,
    pub bob_arity: usize,
    eval: Box<dyn Fn(u64, u64) -> Option<bool> + Send + Sync>,
    alice_domain: Box<dyn Fn(u64) -> bool + Send + Sync>,
}

impl TwoPartyFunction {
    pub fn new(
        alice_arity: usize,
        bob_arity: usize,
        eval: impl Fn(u64, u64) -> Option<bool> + Send + Sync + 'static,
        alice_domain: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        TwoPartyFunction {
            alice_arity,
            bob_arity,
            eval: Box::new(eval),
            alice_domain: Box::new(alice_domain),
        }
    }

    /// `None` when `(a, b)` is outside the promise.
    pub fn eval(&self, a: u64, b: u64) -> Option<bool> {
        (self.eval)(a, b)
    }

    pub fn in_alice_domain(&self, a: u64) -> bool {
        (self.alice_domain)(a)
    }

    /// The marginal `f_a`: Bob's-side slice at Alice input `a`.
    pub fn marginal(&self, a: u64) -> impl Fn(u64) -> Option<bool> + '_ {
        move |b| self.eval(a, b)
    }

    /// Materializes a marginal as a truth table when Bob's side is small.
    pub fn marginal_table(&self, a: u64) -> Result<BooleanFunction> {
        if self.bob_arity > crate::function::MAX_ARITY {
            return Err(Error::CapExceeded {
                what: "marginal truth table",
                cap: crate::function::MAX_ARITY,
                requested: self.bob_arity,
            });
        }
        let size = 1usize << self.bob_arity;
        let mut domain = crate::bitmap::Bitmap::zeros(size);
        let mut values = crate::bitmap::Bitmap::zeros(size);
        for b in 0..size as u64 {
            if let Some(v) = self.eval(a, b) {
                domain.set(b as usize);
                if v {
                    values.set(b as usize);
                }
            }
        }
        BooleanFunction::new(self.bob_arity, domain, values)
    }
}

/// The indexed family of all marginal functions: the Alice inputs in
/// ascending order, each wrapped with its evaluator.
pub fn marginal_set(f: &TwoPartyFunction) -> Result<Vec<u64>> {
    if f.alice_arity > MARGINAL_ALICE_CAP {
        return Err(Error::CapExceeded {
            what: "marginal family enumeration",
            cap: MARGINAL_ALICE_CAP,
            requested: f.alice_arity,
        });
    }
    Ok((0..1u64 << f.alice_arity)
        .filter(|&a| f.in_alice_domain(a))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolOutcome {
    pub answer: bool,
    pub queries: usize,
    /// Exactly `(ceil(log2 G) + 1) * queries`.
    pub bits_exchanged: usize,
}

/// Simulates the two-party compilation of a query algorithm: Alice sends
/// each query index with `ceil(log2 G)` bits, Bob replies with one bit of
/// his `G`-bit string.
pub fn simulate_query_protocol(
    g_bits: usize,
    bob_string: impl Fn(usize) -> bool,
    alice: impl FnOnce(&mut dyn FnMut(usize) -> Result<bool>) -> Result<bool>,
) -> Result<ProtocolOutcome> {
    let index_bits = usize::BITS as usize - (g_bits - 1).leading_zeros() as usize;
    let mut queries = 0usize;
    let mut ask = |pos: usize| -> Result<bool> {
        if pos >= g_bits {
            return Err(Error::QueryOutOfRange {
                index: pos + 1,
                limit: g_bits,
            });
        }
        queries += 1;
        Ok(bob_string(pos))
    };
    let answer = alice(&mut ask)?;
    Ok(ProtocolOutcome {
        answer,
        queries,
        bits_exchanged: (index_bits + 1) * queries,
    })
}

/// The extension-function flavor: Bob holds a source pattern and answers
/// queries from its image under `phi`.
pub fn compile_protocol(
    phi: &ExtensionFunction,
    alice: impl FnOnce(&mut dyn FnMut(usize) -> Result<bool>) -> Result<bool>,
    bob_input: u32,
) -> Result<ProtocolOutcome> {
    let extended = phi.apply(bob_input);
    simulate_query_protocol(
        phi.target_arity,
        move |pos| extended >> pos & 1 == 1,
        alice,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sculpt::extension::build_extension_from_shattered;

    fn xor_two_party() -> TwoPartyFunction {
        TwoPartyFunction::new(
            1,
            1,
            |a, b| Some((a & 1) != (b & 1)),
            |_| true,
        )
    }

    #[test]
    fn xor_marginals() {
        let f = xor_two_party();
        let family = marginal_set(&f).unwrap();
        assert_eq!(family, vec![0, 1]);
        let m0 = f.marginal_table(0).unwrap();
        let m1 = f.marginal_table(1).unwrap();
        assert_eq!(m0.value(0), Some(false));
        assert_eq!(m0.value(1), Some(true));
        assert_eq!(m1.value(0), Some(true));
        assert_eq!(m1.value(1), Some(false));
    }

    #[test]
    fn constant_two_party_has_constant_marginals() {
        let f = TwoPartyFunction::new(2, 2, |_, _| Some(true), |_| true);
        for a in marginal_set(&f).unwrap() {
            assert_eq!(f.marginal_table(a).unwrap().constant_value(), Some(true));
        }
    }

    #[test]
    fn bit_accounting_is_exact() {
        // 3 queries against a 256-bit string cost (8+1)*3 = 27 bits
        let out = simulate_query_protocol(
            256,
            |pos| pos % 2 == 0,
            |ask| {
                let mut acc = false;
                for pos in [0, 17, 200] {
                    acc ^= ask(pos)?;
                }
                Ok(acc)
            },
        )
        .unwrap();
        assert_eq!(out.queries, 3);
        assert_eq!(out.bits_exchanged, 27);
    }

    #[test]
    fn zero_queries_zero_bits() {
        let out = simulate_query_protocol(16, |_| false, |_| Ok(true)).unwrap();
        assert_eq!(out.bits_exchanged, 0);
    }

    #[test]
    fn out_of_range_query_rejected() {
        let res = simulate_query_protocol(8, |_| false, |ask| ask(8));
        assert!(matches!(res, Err(Error::QueryOutOfRange { .. })));
    }

    #[test]
    fn compiled_answers_match_direct_evaluation() {
        use rand::{Rng, SeedableRng};
        // phi maps 2-bit patterns into a 6-bit space
        let c: Vec<u32> = vec![0b000000, 0b010101, 0b101010, 0b111011];
        let phi = build_extension_from_shattered(&c, &[0, 1], 6).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let pattern = rng.gen_range(0..4u32);
            // alice computes the parity of three fixed positions of phi(y)
            let out = compile_protocol(
                &phi,
                |ask| Ok(ask(0)? ^ ask(2)? ^ ask(4)?),
                pattern,
            )
            .unwrap();
            let z = phi.apply(pattern);
            let direct = (z & 1 != 0) ^ (z >> 2 & 1 != 0) ^ (z >> 4 & 1 != 0);
            assert_eq!(out.answer, direct);
            assert_eq!(out.bits_exchanged, (3 + 1) * 3);
        }
    }
}

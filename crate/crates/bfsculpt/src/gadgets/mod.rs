//! Concrete hard-gadget constructions: the double-equality random-code
//! function and the vector-in-subspace instance with partial-sum encoding.

pub mod double_eq;
pub mod vis;

pub use double_eq::{
    bob_oracle, build_double_equality, marginal_r0_sampler, DoubleEqualityInstance,
    SamplerOutcome,
};
pub use vis::{
    vis_alice_decide, vis_build_instance, vis_encode, vis_fidelity, vis_reconstruct, vis_to_json,
    VisDecision, VisEncoding, VisInstance,
};

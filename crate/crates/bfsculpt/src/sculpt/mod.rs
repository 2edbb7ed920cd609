//! Constructive promise builders with verified bounds, extension-function
//! machinery, marginal families, and the protocol compiler.

pub mod extension;
pub mod gadget;
pub mod r0r;
pub mod twoparty;

pub use extension::{build_extension_from_shattered, ExtensionFunction};
pub use gadget::{gadget_parameters, sculpt_via_gadget, GadgetParameters, GadgetSculpt};
pub use r0r::{sculpt_r0_vs_r, verify_sculpt_result, CaseTag, SculptResult, VerifiedBound};
pub use twoparty::{
    compile_protocol, marginal_set, simulate_query_protocol, ProtocolOutcome, TwoPartyFunction,
};

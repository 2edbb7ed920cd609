//! Executable versions of the query algorithms embedded in the measure
//! relationships, each emitting an auditable transcript.

mod certfind;
pub mod distinguish;
pub mod eliminate;
pub mod halftree;
pub mod hybrid;
pub mod probe;
pub mod transcript;

pub use distinguish::{
    amplification_rounds, build_distinguisher, greedy_certificate, is_certificate,
    run_distinguisher, DistinguisherSpec, Verdict,
};
pub use eliminate::{deterministic_eliminate, majority_eliminate, EliminationRun, Eliminator};
pub use halftree::{
    find_half_certifying_tree, tree_elimination_decide, HalfTree, HalfTreeMode, TreeElimination,
};
pub use hybrid::{hybrid_decision, hybrid_decision_given, HybridRun};
pub use probe::{certificate_probe_reduce, certificate_probe_reduce_given, ProbeReduction};
pub use transcript::QueryTranscript;

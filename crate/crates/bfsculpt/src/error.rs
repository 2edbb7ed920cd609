use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity {0} outside supported range 1..={1}")]
    ArityOutOfRange(usize, usize),

    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("domain bitmap has no set bit")]
    EmptyDomain,

    #[error("values bitmap not contained in domain bitmap")]
    ValuesOutsideDomain,

    #[error("promise is not a subset of the function domain")]
    PromiseNotSubset,

    #[error("input index {0} is outside the function domain")]
    NotInDomain(u32),

    #[error("{what}: cap is {cap}, requested {requested}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        requested: usize,
    },

    #[error("MAJORITY requires odd arity, got {0}")]
    MajorityEvenArity(usize),

    #[error("malformed input at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("json: {0}")]
    Json(String),

    #[error("function is constant; operation requires both values present")]
    ConstantFunction,

    #[error("distinguisher target class is empty or contains the anchor")]
    DegenerateDistinguisher,

    #[error("shattered set of size {target} not found within node budget {budget}")]
    ShatterBudget { target: usize, budget: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("linear program is {0}")]
    Lp(&'static str),

    #[error("no shattered index set of size {size} exists in the threshold class")]
    NoShatteredSet { size: usize },

    #[error("sculpting refused: {0}")]
    SculptRefused(String),

    #[error("random code failed the distance target after {attempts} resamples (seed {seed})")]
    CodeDistance { attempts: usize, seed: u64 },

    #[error("promise violation: {0}")]
    PromiseViolation(String),

    #[error("query index {index} out of range 1..={limit}")]
    QueryOutOfRange { index: usize, limit: usize },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

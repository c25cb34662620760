//! Error type shared by the whole laboratory.

/// Everything that can go wrong while building or analyzing a ring.
///
/// Validation failures carry the basis indices that witness them so a bad
/// structure-constant table can be repaired by hand. `CapExceeded` is a
/// first-class outcome, not a panic: enumerations on pathological inputs
/// stop at the configured cap and report it.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("associativity fails on basis triple ({i}, {j}, {l})")]
    Associativity { i: usize, j: usize, l: usize },

    #[error("unit law fails on basis element {i}")]
    Unit { i: usize },

    #[error("bilinear compatibility fails on basis pair ({i}, {j}): {detail}")]
    Compatibility { i: usize, j: usize, detail: String },

    #[error("bad definition: {0}")]
    BadDefinition(String),

    #[error("not a ring embedding: {0}")]
    BadEmbedding(String),

    #[error("bad module action: {0}")]
    BadModule(String),

    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),

    #[error("enumeration cap of {cap} exceeded while listing {what}")]
    CapExceeded { cap: usize, what: &'static str },

    #[error("quotient-ring realization self-check failed: {0}")]
    RealizationViolation(String),

    #[error("membership set is not a subring; witness product of elements {a} and {b} escapes")]
    NotASubring { a: u64, b: u64 },

    #[error("chain step {step} is not flat as a left module over the base")]
    FlatnessFailure { step: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("perfect intermediate subrings do not form a directed family: {0}")]
    Directedness(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

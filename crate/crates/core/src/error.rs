//! Error type shared by all modules.

use crate::subsetpoly::VarSet;

/// Errors reported by the library.
///
/// Input validation failures, infeasible targets, and precision problems are
/// kept as distinct variants so callers (CLI, C API) can map them to their own
/// error channels without string matching.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("at most {max} variables are supported, got v={v}")]
    TooManyVariables { v: usize, max: usize },

    #[error("variable index {index} is out of range for v={v}")]
    IndexOutOfRange { index: usize, v: usize },

    #[error("operands describe different variable counts ({left} vs {right})")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("table has {len} entries, expected 2^{v}")]
    BadTableLength { len: usize, v: usize },

    #[error("non-finite value in {what}")]
    NonFinite { what: String },

    #[error("layer index {j} is out of range for v={v}")]
    LayerOutOfRange { j: usize, v: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the target set may not be empty")]
    EmptyTargetSet,

    #[error("exp overflow while evaluating {what}")]
    ExpOverflow { what: String },

    #[error(
        "targets (J_B={j_b}, J_B'={j_bprime}) are infeasible for |B|={bsize}: {constraint}"
    )]
    InfeasibleRegion {
        bsize: usize,
        j_b: f64,
        j_bprime: f64,
        constraint: String,
    },

    #[error("omega={omega} is below the required floor {floor}")]
    OmegaBelowFloor { omega: f64, floor: f64 },

    #[error(
        "escalated omega {reached} (from base {base_omega}) is still below the required floor \
         {floor}; accumulated root residuals outpace the escalation schedule, so this plan \
         cannot be synthesized at this depth"
    )]
    EscalationExhausted {
        base_omega: f64,
        reached: f64,
        floor: f64,
    },

    #[error("failed to bracket the target coefficient at omega={omega}; increase omega")]
    BracketFailed { omega: f64 },

    #[error(
        "residual {residual_max:e} exceeds tolerance {tol:e}; retry with omega >= {suggested_omega}"
    )]
    ToleranceNotMet {
        residual_max: f64,
        tol: f64,
        suggested_omega: f64,
    },

    #[error("interaction set {set} carries nonzero weight but is not covered by the plan")]
    UncoveredInteraction { set: VarSet },

    #[error("support violation: q vanishes at state {state} where p is positive")]
    SupportViolation { state: u32 },

    #[error("v={v} is too large for exact enumeration (cap {max})")]
    TooLargeForExact { v: usize, max: usize },

    #[error("h={h} hidden units is too large for exact enumeration (cap {max})")]
    TooManyHidden { h: usize, max: usize },
}

use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("tolerance infeasible: {tol:e} needs {required} terms, cap is {cap}")]
    InfeasibleTolerance { tol: f64, required: f64, cap: u64 },

    #[error("resolution floor: |h| = {h:e} is below {floor:e}")]
    ResolutionFloor { h: f64, floor: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("insufficient precision: {requested} convergents requested, {available} certified")]
    InsufficientPrecision { requested: usize, available: usize },

    #[error("no admissible denominators (q mod 4 in {{0, 1, 3}}) in range")]
    NoAdmissibleDenominators,

    #[error("finite expansion: a rational input has no limsup exponent")]
    FiniteExpansion,

    #[error("inadmissible exponent {0}")]
    InadmissibleExponent(f64),

    #[error("unresolvable chord at h = {h:e}: |Δφ| = {magnitude:e}, error bound {bound:e}")]
    UnresolvableChord { h: f64, magnitude: f64, bound: f64 },

    #[error("wrong residue class q ≡ {mod4} (mod 4): use {use_instead}")]
    WrongResidueClass { mod4: u8, use_instead: &'static str },

    #[error("offset h = {h:e} exceeds 1/q² = {limit:e}")]
    OutsideLemmaRange { h: f64, limit: f64 },

    #[error("insufficient scale range: {usable} usable scales, need at least 3")]
    InsufficientScaleRange { usable: usize },

    #[error("not testable at this Q range: no convergent with {q0} <= q <= {qmax}")]
    NotTestable { q0: u64, qmax: u64 },

    #[error("refine trace: sample gap {gap:e} exceeds {limit:e} near the vertex")]
    RefineTrace { gap: f64, limit: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

use thiserror::Error;

use crate::spaces::MembershipReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix must be square with side >= 1, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("expected {expected} entries, got {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: expected side {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),

    #[error("matrix is not normal (residual {residual:.3e})")]
    NotNormal { residual: f64 },

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("matrix is not real symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("matrices do not commute (residual {residual:.3e})")]
    NotCommuting { residual: f64 },

    #[error("matrix is not skew-Hermitian (residual {residual:.3e})")]
    NotSkewHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("embedded matrix does not preserve J (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },

    #[error("matrix is not in the space: {report}")]
    NotInSpace { report: MembershipReport },

    #[error("product of squared roots {product} does not match det X = {det}")]
    RootProductFailure {
        product: num_complex::Complex64,
        det: num_complex::Complex64,
    },

    #[error("could not pair eigenvectors under conjugation: {0}")]
    OddPairingFailure(String),

    #[error(
        "no P in SU(2n) satisfies X = P J tP: Pf(X)/Pf(J) = {sign}, every such P has det {sign}"
    )]
    PfaffianObstruction { sign: i8 },

    #[error("reconstruction residual {residual:.3e} exceeds bound {bound:.3e}")]
    Reconstruction { residual: f64, bound: f64 },

    #[error(
        "eigenvalue at angle {angle:.6} lies within {margin:.3e} rad of the branch point {alpha:.6}"
    )]
    BranchViolation { alpha: f64, angle: f64, margin: f64 },

    #[error("membership drifted to {residual:.3e} at s = {s}")]
    MembershipDrift { s: f64, residual: f64 },

    #[error("eigenvalue cluster at angle {angle:.6} has odd multiplicity {multiplicity}")]
    OddMultiplicity { angle: f64, multiplicity: usize },

    #[error("eigenvalue cluster at angle {angle:.6} spreads over {spread:.3e} rad")]
    ClusterSpread { angle: f64, spread: f64 },

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("connectivity must be >= 1, got {0}")]
    InvalidConnectivity(i64),

    #[error("invalid parameters for {family}: {condition}")]
    InvalidParams {
        family: &'static str,
        condition: String,
    },
}

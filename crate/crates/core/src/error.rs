use thiserror::Error;

/// Errors raised by the kernels, the solver and the experiment runner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("{kernel}: matrix is near singular (rcond = {rcond:e}, floor = {floor:e})")]
    NearSingular {
        kernel: &'static str,
        rcond: f64,
        floor: f64,
    },

    #[error("schur: QR iteration did not converge after {iterations} iterations")]
    Convergence { iterations: usize },

    #[error("expm: 1-norm {norm:e} exceeds the overflow limit {limit:e}")]
    Overflow { norm: f64, limit: f64 },

    #[error("{kernel}: singular input, eigenvalue of modulus {modulus:e}")]
    SingularInput { kernel: &'static str, modulus: f64 },

    #[error("logm: ill-conditioned input: {0}")]
    IllConditioned(String),

    #[error("instance rejected: {name} has rcond {rcond:e} <= {threshold:e}")]
    InstanceRejected {
        name: &'static str,
        rcond: f64,
        threshold: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("activation input is complex: imaginary part {magnitude:e} exceeds 1e-12")]
    ComplexInput { magnitude: f64 },

    #[error("activation output sigma(W1 X2) is singular (rcond = {rcond:e})")]
    ActivationSingular { rcond: f64 },

    #[error("degenerate instance: identity baseline residual is zero")]
    DegenerateBaseline,

    #[error("gave up after {attempts} consecutive rejected samples")]
    MaxResample { attempts: usize },

    #[error("i/o: {0}")]
    Io(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

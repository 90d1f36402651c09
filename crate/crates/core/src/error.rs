//! Error taxonomy shared by every module.
//!
//! Variants map onto the CLI exit codes: invalid inputs and configuration
//! problems exit 1, numerical failures exit 2, verification failures exit 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad argument to a library call (nonpositive length, K = 0, coarse grid, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Configuration file problems: parse errors, schema violations, bad paths.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// The axial profile hits a resonance pole: cos(sqrt(lambda_t - sigma) t)
    /// vanishes, so the modal boundary-value problem has no solution.
    #[error("resonance pole for sigma={sigma} at t={t}: modal problem is singular")]
    ResonancePole { sigma: f64, t: f64 },

    /// Inverse iteration did not meet the eigenvalue-increment tolerance.
    #[error("eigensolver did not converge after {iters} iterations (last increment {last_increment:.3e})")]
    SolverDiverged { iters: usize, last_increment: f64 },

    /// The height function t + w dipped below the positivity guard.
    #[error("profile positivity lost: min v = {min_v:.3e}")]
    PositivityLost { min_v: f64 },

    /// Newton's method on the projected equations failed.
    #[error("newton did not converge after {iters} iterations (residual {residual:.3e})")]
    NewtonFailed { residual: f64, iters: usize },

    /// A verification run found a gap above tolerance.
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 config, 2 numerical, 3 verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Config(_) | Error::Io(_) => 1,
            Error::ResonancePole { .. }
            | Error::SolverDiverged { .. }
            | Error::PositivityLost { .. }
            | Error::NewtonFailed { .. } => 2,
            Error::VerificationFailed(_) => 3,
        }
    }
}

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation precondition was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A radius fell outside the domain of the annulus solution.
    #[error("radius {r} outside domain [{r_min}, {r_max}]")]
    OutOfDomain { r: f64, r_min: f64, r_max: f64 },

    /// Adaptive quadrature exhausted its evaluation budget.
    #[error(
        "quadrature did not reach the requested tolerance within {evaluations} evaluations \
         (best estimate {best:e}, achieved relative error {achieved_rel:e})"
    )]
    QuadratureBudget {
        best: f64,
        achieved_rel: f64,
        evaluations: usize,
    },

    /// Zero or denormal pivot during tridiagonal elimination.
    #[error("singular tridiagonal system: pivot {pivot:e} at row {row}")]
    SingularSystem { row: usize, pivot: f64 },

    /// A wavefunction was paired with the wrong grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Too few grid levels to estimate a convergence order.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Imaginary-time step size outside the stable range.
    #[error("unstable step size: {0}")]
    StepSize(String),

    /// Ground-state iteration hit the iteration cap before the tolerance.
    #[error(
        "ground-state solve did not converge: residual {final_residual:e} after {iterations} iterations"
    )]
    NotConverged {
        iterations: usize,
        final_residual: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

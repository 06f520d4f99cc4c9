//! Error type shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("profile does not decay at the grid edge: |u| = {edge:e} exceeds {threshold:e}")]
    NonDecayingProfile { edge: f64, threshold: f64 },
    #[error("ODE integrator failed to meet tolerance at x = {x} (k = {k})")]
    StepFailure { x: f64, k: Complex64 },
    #[error("winding number {winding} disagrees with {found} converged roots")]
    RootCountMismatch { winding: i64, found: usize },
    #[error("degenerate zero at k = {k}: |d det a/dk| = {derivative:e}")]
    DegenerateZero { k: Complex64, derivative: f64 },
    #[error("profile decay rate {rate:.4} too slow for continuation to Im k = {required:.4}")]
    ContinuationUnreliable { rate: f64, required: f64 },
    #[error("linear system singular: condition estimate {condition:e}")]
    SystemSingular { condition: f64 },
    #[error("exponent magnitude {exponent:e} exceeds the representable range")]
    ExponentOverflow { exponent: f64 },
    #[error("reconstruction symmetry broken: |q2 - conj(q1)| = {deviation:e}")]
    SymmetryBroken { deviation: f64 },
    #[error("evaluation point {k} lies on the cut [-k0, k0]")]
    OnCutEvaluation { k: Complex64 },
    #[error("adaptive quadrature did not converge (error estimate {estimate:e})")]
    QuadratureFailure { estimate: f64 },
    #[error("time must be positive, got {t}")]
    NonpositiveTime { t: f64 },
    #[error("Painleve solve blew up near y = {y}")]
    BlowUp { y: f64 },
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("kappa fit degenerate: relative residual {relative_residual:.3}")]
    FitDegenerate { relative_residual: f64 },
    #[error("integrator unstable at step {step}: sup norm grew by {growth:.2}x")]
    Instability { step: usize, growth: f64 },
    #[error("input not periodic-compatible: edge amplitude {edge:e}")]
    NonPeriodicInput { edge: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("matrix delta is approximate: commutator norm {commutator:e}")]
    ApproximateDelta { commutator: f64 },
    #[error("unknown {kind} strategy '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
    #[error("{failed} of {total} grid points failed; first: {first}")]
    PartialFailure {
        failed: usize,
        total: usize,
        first: String,
    },
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

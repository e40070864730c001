use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function vanishes on the integration path near x = {x}")]
    ZeroCrossing { x: f64 },

    #[error("lambda0 is not real: imaginary part {imag:e} exceeds tolerance")]
    NonRealLambda0 { imag: f64 },

    #[error("quadratic form a v² + b v z + c z² is not real at x = {x} (imaginary part {imag:e})")]
    NotRealQuadraticForm { x: f64, imag: f64 },

    #[error("quadratic form a v² + b v z + c z² is not strictly positive at x = {x}")]
    NotPositive { x: f64 },

    #[error("Wronskian deviates from w0 by {deviation:e} at x = {x}")]
    WronskianMismatch { x: f64, deviation: f64 },

    #[error("Schrödinger residual {residual:e} at x = {x} exceeds tolerance")]
    NotASolution { x: f64, residual: f64 },

    #[error("lambda = {lambda} does not square to lambda0 = {lambda0}")]
    LambdaMismatch { lambda: f64, lambda0: f64 },

    #[error("lambda = 0 belongs to the conventional real superpotential branch")]
    ZeroLambdaBranch,

    #[error("lambda0 = {lambda0} < 0 gives an imaginary lambda, which is excluded")]
    ExcludedBranch { lambda0: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {estimate:e})")]
    QuadratureFailure { estimate: f64, tolerance: f64 },

    #[error("energy {energy} must lie above the factorization energy {epsilon}")]
    EnergyBelowFactorization { energy: f64, epsilon: f64 },

    #[error("|lambda| = {lambda} exceeds kappa/2 = {}", kappa / 2.0)]
    LambdaOutOfRange { lambda: f64, kappa: f64 },

    #[error("1F1({a}, {c}; {zeta}) series did not converge")]
    SeriesNonConvergence { a: f64, c: f64, zeta: f64 },

    #[error("c = {c} <= b²/(4a) = {bound}: alpha may vanish")]
    ZeroCrossingRisk { c: f64, bound: f64 },

    #[error("oscillator order {n} exceeds the supported maximum {max}")]
    OrderTooLarge { n: usize, max: usize },

    #[error("domain [{x_min}, {x_max}] is not symmetric about the origin")]
    AsymmetricDomain { x_min: f64, x_max: f64 },

    #[error("potential is not finite at grid index {index} (x = {x})")]
    NonFinitePotential { index: usize, x: f64 },

    #[error("eigenvalue iteration stalled at index {index} after {iterations} sweeps (off-diagonal {off_diagonal:e})")]
    EigenNoConvergence {
        index: usize,
        iterations: usize,
        off_diagonal: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

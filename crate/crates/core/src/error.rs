use thiserror::Error;

/// Errors surfaced by the library; variant names follow the domain conditions
/// they signal.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The theta = 0 basis degenerates to the angle basis and has no Gaussian
    /// wave function; callers must use the dedicated theta-zero path.
    #[error("theta = 0 is degenerate here; use the theta-zero element instead")]
    DegenerateTheta,

    /// A wave function or change of variable was requested at the singular
    /// point phi = pi of the stereographic map.
    #[error("singular at phi = pi (stereographic pole)")]
    PoleAtPi,

    /// The resummed oscillator kernel needs |w| <= 1 and w != +-1.
    #[error("kernel requires |w| <= 1 and w != +1, -1")]
    MehlerDomain,

    /// Angular grid too small to resolve the requested angular-momentum range.
    #[error("grid of size {grid} cannot hold l_max = {l_max} (need >= 2*l_max+1)")]
    Aliasing { grid: usize, l_max: usize },

    /// Two states built on different truncations cannot be combined.
    #[error("truncation mismatch: l_max {0} vs {1}")]
    TruncationMismatch(usize, usize),

    /// Oscillatory quadrature failed to settle under the damping schedule.
    #[error("quadrature did not converge: {0}")]
    QuadratureNoConvergence(String),

    /// Radius extrapolation of a conditionally convergent series disagreed
    /// across the schedule.
    #[error("series extrapolation did not settle: {0}")]
    NoConvergence(String),

    /// Inversion touched modes too close to the phi = pi singularity.
    #[error("ill-conditioned near phi = pi: {0}")]
    IllConditioned(String),

    /// Input carries weight near the pole, where resampling loses accuracy.
    #[error("input has weight {0:.2e} near the pole at phi = pi")]
    InterpolationLoss(f64),

    /// Overlap of two continuous bases with sin(theta1 - theta2) = 0 is a
    /// delta distribution, not a number.
    #[error("degenerate basis pair: sin(theta1 - theta2) = 0")]
    DegenerateAngles,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular linear system: {0}")]
    Singular(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

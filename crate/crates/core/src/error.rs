//! Error type shared by all modules of the engine.

use thiserror::Error;

/// Everything that can go wrong while building or interrogating a filling.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point that must lie on the unit 3-sphere does not.
    #[error("point is off the unit sphere by {excess:e}")]
    OffSphere { excess: f64 },

    /// A vector that must be tangent to S³ at its base point is not.
    #[error("vector is not tangent to the sphere (radial pairing {pairing:e})")]
    NonTangent { pairing: f64 },

    /// The characteristic foliation is singular at the poles of a level sphere.
    #[error("characteristic foliation is singular here (pole distance {dist:e})")]
    SingularPoint { dist: f64 },

    /// Parameters left the domain of a chart or formula.
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// The point lies in the collar region around the unknot, outside the
    /// moduli chart.
    #[error("point lies in the collar region around K, outside the chart")]
    OutOfChart,

    /// The boundary ansatz left the leaf-space chart of the level sphere.
    #[error("boundary ansatz left the chart on the level sphere")]
    ChartExcursion,

    /// Gauss–Newton did not reach the residual tolerance.
    #[error("disc solve failed: residual {best_residual:e} after {iterations} iterations")]
    SolverFailure {
        best_residual: f64,
        iterations: usize,
    },

    /// Continuation stalled along a ray of the moduli grid.
    #[error("continuation stalled at ray {ray}, ring {ring} (residual {best_residual:e} after {halvings} halvings)")]
    ContinuationFailure {
        ray: usize,
        ring: usize,
        halvings: u32,
        best_residual: f64,
    },

    /// The pulled-back contact form failed to be a positive multiple of α.
    #[error("conformal factor is not positive ({value:e}); not a contactomorphism")]
    InvalidContactomorphism { value: f64 },

    /// Two discs share a non-isolated intersection locus.
    #[error("discs do not intersect nicely (non-isolated intersections)")]
    NotNicelyIntersecting,

    /// A frame that must be totally real has (numerically) complex-degenerate span.
    #[error("frame is not totally real (|det| = {det:e})")]
    TotallyRealViolation { det: f64 },

    /// No isolating sphere could be found around an intersection record.
    #[error("isolation radius shrank below {min:e} around an intersection record")]
    DegenerateRadius { min: f64 },

    /// A zero of a section is not isolated at the working resolution.
    #[error("zero of the section is not isolated")]
    NonIsolatedZero,

    /// A computation needs data that was not supplied (e.g. a partner disc).
    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),

    /// The boundary isotopy is undefined because χ¹ fails to be increasing.
    #[error("χ¹ is not strictly increasing; isotopy undefined")]
    IsotopyFailure,

    /// A precondition on the inputs was violated.
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

//! Scalar abstraction for the model's arithmetic.
//!
//! Everything downstream is closed-form probability algebra, so the whole
//! crate is generic over the floating-point type. `f64` is the default used
//! by the crate-root aliases and by the acceptance tolerances; `f32` works
//! for exploration at reduced precision.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable throughout the solver.
pub trait Real: Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync {
    /// The constant 2, needed by the `2 - c` factors.
    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Lossy conversion from `f64` for literals and tolerances.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }

    /// Comparison slack for belief thresholds.
    ///
    /// Accuracies produced by the closed forms round-trip through
    /// [`crate::model::posterior_good`] only up to a few ulps, so threshold
    /// comparisons leave sqrt(eps) of slack; indifference resolves toward
    /// the sender's preferred action.
    fn belief_tolerance() -> Self {
        Self::epsilon().sqrt()
    }
}

impl<T> Real for T where T: Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync {}

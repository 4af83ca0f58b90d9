//! Solver, verification oracle, and simulator for a two-stage persuasion
//! game between a policy maker and a private investor.
//!
//! A policy maker wants risky investment projects funded because they carry
//! spillover surplus the investor does not internalize. Before states are
//! realized the policy maker commits, project by project, to a binary signal
//! that is always right about good projects and reports bad ones with a
//! chosen accuracy. The investor updates beliefs, may buy perfect private
//! information at an effort cost, and funds at most one project.
//!
//! The crate computes the game three independent ways and cross-checks them:
//!
//! - [`solver`] — the closed forms: minimum-accuracy thresholds, marginal
//!   gains, prior cutoffs, and the optimal policy per regime.
//! - [`oracle`] — exact payoff enumeration over states and signals plus a
//!   grid argmax over policies, sharing nothing with the closed forms.
//! - [`sim`] — seeded, chunk-reproducible Monte Carlo of the stage game.
//!
//! [`statics`] sweeps thresholds across effort costs and spillovers and maps
//! regimes over the `(p, e)` plane; [`verify`] bundles the acceptance suite.
//!
//! Core math is generic over the scalar type via [`scalar::Real`]; the
//! aliases below fix `f64` for ordinary use.

pub mod error;
pub mod model;
pub mod numfmt;
pub mod oracle;
pub mod scalar;
pub mod sim;
pub mod solver;
pub mod statics;
pub mod verify;

pub use error::Error;
pub use scalar::Real;

/// Model primitives over `f64`.
pub type Params = model::ModelParams<f64>;
/// Signal policy over `f64`.
pub type Policy = model::SignalPolicy<f64>;
/// Investor behavior rule over `f64`.
pub type Rule = model::BehaviorRule<f64>;
/// Closed-form solution over `f64`.
pub type Solution = solver::EquilibriumSolution<f64>;
/// Accuracy thresholds over `f64`.
pub type Thresholds = solver::BenchmarkThresholds<f64>;
/// Marginal gains over `f64`.
pub type Gains = solver::MarginalGains<f64>;
/// Prior cutoffs over `f64`.
pub type Cutoffs = solver::TwoProjectCutoffs<f64>;
/// Simulation statistics over `f64`.
pub type Stats = sim::SimStats<f64>;

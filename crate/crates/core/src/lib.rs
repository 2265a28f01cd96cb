//! Survivability of dismounted combat teams.
//!
//! Six warfighting functions follow stochastic trajectories triggered by an
//! exponentially distributed engagement time. Their levels are combined by
//! simple additive weighting into a survivability score whose expectation
//! has a closed form; a seeded Monte Carlo engine checks every closed form.

pub mod error;
pub mod model;
pub mod montecarlo;
pub mod saw;
pub mod scenario;

pub use error::{Error, Result};
pub use model::{
    analytic_mean, eval_trajectory, validate_model, EventTime, Realization, WfFunctionId, WfModel,
};
pub use montecarlo::{
    mc_mean_trajectory, mc_survivability, sample_realization, McEstimate, RngSpec,
};
pub use saw::{
    compare_teams, expected_survivability, limit_curve, survivability_curve, survivability_sample,
    ComparisonReport, PairComparison, SurvivabilityCurve, TeamProfile, TimeGrid, Verdict,
    WeightVector,
};
pub use scenario::{builtin_presets, parse_scenario, serialize_scenario, Scenario};

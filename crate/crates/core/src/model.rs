//! Warfighting-function trajectory models.
//!
//! Each function starts at an initial level `alpha` and changes once the
//! first engagement occurs at the random time `tau`. Four shapes are
//! supported; their expectations over an exponentially distributed `tau`
//! (and a uniform drop fraction where relevant) have closed forms, which
//! [`analytic_mean`] evaluates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The six warfighting functions, in canonical `I, C, M, F, L, P` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WfFunctionId {
    Intelligence,
    Command,
    Manoeuvre,
    Fires,
    Logistics,
    Protection,
}

impl WfFunctionId {
    pub const ALL: [WfFunctionId; 6] = [
        WfFunctionId::Intelligence,
        WfFunctionId::Command,
        WfFunctionId::Manoeuvre,
        WfFunctionId::Fires,
        WfFunctionId::Logistics,
        WfFunctionId::Protection,
    ];

    /// Position in the canonical layout.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Single-letter key used in scenario documents and reports.
    pub fn code(self) -> &'static str {
        match self {
            WfFunctionId::Intelligence => "I",
            WfFunctionId::Command => "C",
            WfFunctionId::Manoeuvre => "M",
            WfFunctionId::Fires => "F",
            WfFunctionId::Logistics => "L",
            WfFunctionId::Protection => "P",
        }
    }
}

impl fmt::Display for WfFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for WfFunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WfFunctionId::ALL
            .into_iter()
            .find(|id| id.code() == s)
            .ok_or_else(|| Error::schema("", format!("unknown warfighting function `{s}`")))
    }
}

/// Trajectory shape of a single warfighting function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WfModel {
    /// Constant `alpha`, then `alpha * r` from the event onwards.
    StepDrop { alpha: f64 },
    /// Drops to `alpha * r` at the event, then decays at rate `mu`.
    DropDecay { alpha: f64, mu: f64 },
    /// Decays from `alpha` at rate `mu` once the event has occurred.
    GradualDecay { alpha: f64, mu: f64 },
    /// Rises from `alpha` towards `beta` at rate `mu` after the event.
    SaturatingGrowth { alpha: f64, mu: f64, beta: f64 },
}

impl WfModel {
    pub fn alpha(&self) -> f64 {
        match *self {
            WfModel::StepDrop { alpha }
            | WfModel::DropDecay { alpha, .. }
            | WfModel::GradualDecay { alpha, .. }
            | WfModel::SaturatingGrowth { alpha, .. } => alpha,
        }
    }

    pub fn mu(&self) -> Option<f64> {
        match *self {
            WfModel::StepDrop { .. } => None,
            WfModel::DropDecay { mu, .. }
            | WfModel::GradualDecay { mu, .. }
            | WfModel::SaturatingGrowth { mu, .. } => Some(mu),
        }
    }

    /// Tag used in scenario documents.
    pub fn type_tag(&self) -> &'static str {
        match self {
            WfModel::StepDrop { .. } => "step_drop",
            WfModel::DropDecay { .. } => "drop_decay",
            WfModel::GradualDecay { .. } => "gradual_decay",
            WfModel::SaturatingGrowth { .. } => "saturating_growth",
        }
    }

    /// Value approached by the mean trajectory as `t` grows without bound.
    pub fn asymptote(&self) -> f64 {
        match *self {
            WfModel::StepDrop { alpha } => 0.5 * alpha,
            WfModel::DropDecay { mu, alpha } | WfModel::GradualDecay { mu, alpha } => {
                // mu = 0 keeps whatever level was reached at the event.
                if mu == 0.0 {
                    if matches!(self, WfModel::DropDecay { .. }) {
                        0.5 * alpha
                    } else {
                        alpha
                    }
                } else {
                    0.0
                }
            }
            WfModel::SaturatingGrowth { beta, mu, alpha } => {
                if mu == 0.0 {
                    alpha
                } else {
                    beta
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_model(self)
    }
}

/// Checks `0 <= alpha <= 1`, `mu >= 0` and `alpha < beta <= 1`.
pub fn validate_model(model: &WfModel) -> Result<()> {
    let alpha = model.alpha();
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param("alpha", alpha, "must lie in [0, 1]"));
    }
    if let Some(mu) = model.mu() {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::param("mu", mu, "must be finite and non-negative"));
        }
    }
    if let WfModel::SaturatingGrowth { beta, .. } = *model {
        if !(beta > alpha && beta <= 1.0) {
            return Err(Error::param("beta", beta, "must satisfy alpha < beta <= 1"));
        }
    }
    Ok(())
}

/// Rate of the exponential law of the first engagement time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventTime {
    kappa: f64,
}

impl EventTime {
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa > 0.0 && kappa.is_finite() {
            Ok(EventTime { kappa })
        } else {
            Err(Error::param("kappa", kappa, "must be finite and positive"))
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mean_time(&self) -> f64 {
        1.0 / self.kappa
    }
}

/// One joint draw of the engagement time and the uniform drop fraction.
///
/// `r` is only read by [`WfModel::StepDrop`] and [`WfModel::DropDecay`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Realization {
    pub tau: f64,
    pub r: f64,
}

/// Level of `model` at time `t` given a realized event time and drop fraction.
///
/// The post-event branch is closed at `t == tau`.
pub fn eval_trajectory(model: &WfModel, real: Realization, t: f64) -> f64 {
    if t < real.tau {
        return model.alpha();
    }
    let elapsed = t - real.tau;
    match *model {
        WfModel::StepDrop { alpha } => alpha * real.r,
        WfModel::DropDecay { alpha, mu } => alpha * real.r * (-mu * elapsed).exp(),
        WfModel::GradualDecay { alpha, mu } => alpha * (-mu * elapsed).exp(),
        WfModel::SaturatingGrowth { alpha, mu, beta } => {
            beta - (beta - alpha) * (-mu * elapsed).exp()
        }
    }
}

/// Relative gap below which `kappa` and `mu` are treated as coincident.
pub const SINGULARITY_TOL: f64 = 1e-9;

/// `(exp(-mu t) - exp(-kappa t)) / (kappa - mu)`, evaluated without
/// cancellation near `kappa == mu`, where it tends to `t exp(-kappa t)`.
fn exp_difference_quotient(kappa: f64, mu: f64, t: f64) -> f64 {
    let gap = kappa - mu;
    if gap.abs() <= SINGULARITY_TOL * kappa.max(mu).max(1.0) {
        return t * (-kappa * t).exp();
    }
    let spread = gap * t;
    if spread.abs() < 1.0 {
        (-kappa * t).exp() * spread.exp_m1() / gap
    } else {
        ((-mu * t).exp() - (-kappa * t).exp()) / gap
    }
}

/// Expected level `E[x(t)]` when the engagement time is exponential with
/// rate `ev.kappa()` and the drop fraction is uniform on `[0, 1]`.
///
/// Per variant:
///
/// * step drop: `0.5 a (1 + e^{-kt})`
/// * drop-decay: `a e^{-kt} + 0.5 a k/(k-m) (e^{-mt} - e^{-kt})`
/// * gradual decay: `a e^{-kt} + a k/(k-m) (e^{-mt} - e^{-kt})`
/// * saturating growth: `b + (b-a)/(k-m) (m e^{-kt} - k e^{-mt})`
///
/// The `k == m` singularity is removable and is replaced by its limit.
pub fn analytic_mean(model: &WfModel, ev: EventTime, t: f64) -> f64 {
    let kappa = ev.kappa();
    let survive = (-kappa * t).exp();
    let value = match *model {
        WfModel::StepDrop { alpha } => 0.5 * alpha * (1.0 + survive),
        WfModel::DropDecay { alpha, mu } => {
            alpha * survive + 0.5 * alpha * kappa * exp_difference_quotient(kappa, mu, t)
        }
        WfModel::GradualDecay { alpha, mu } => {
            alpha * survive + alpha * kappa * exp_difference_quotient(kappa, mu, t)
        }
        WfModel::SaturatingGrowth { alpha, mu, beta } => {
            // (m e^{-kt} - k e^{-mt}) / (k - m) = -(e^{-mt} + m q), written
            // around alpha so that t = 0 returns alpha exactly
            let q = exp_difference_quotient(kappa, mu, t);
            alpha + (beta - alpha) * (-(-mu * t).exp_m1() - mu * q)
        }
    };
    value.clamp(0.0, 1.0)
}

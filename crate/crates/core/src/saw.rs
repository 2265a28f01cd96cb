//! Simple additive weighting of the six warfighting functions into a
//! survivability score, its expectation, the LIMIT bound and pairwise
//! team comparison.

use std::ops::Index;

use crate::error::{Error, Result};
use crate::model::{analytic_mean, eval_trajectory, EventTime, Realization, WfFunctionId, WfModel};

/// Non-negative importance weights, one per warfighting function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector([f64; 6]);

impl WeightVector {
    /// Weights in canonical `I, C, M, F, L, P` order.
    pub fn new(lambda: [f64; 6]) -> Result<Self> {
        for (id, &w) in WfFunctionId::ALL.iter().zip(&lambda) {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::param(
                    id.code(),
                    w,
                    "weight must be finite and non-negative",
                ));
            }
        }
        let total: f64 = lambda.iter().sum();
        if total <= 0.0 {
            return Err(Error::param("", total, "weights must not all be zero"));
        }
        Ok(WeightVector(lambda))
    }

    pub fn equal() -> Self {
        WeightVector([1.0; 6])
    }

    pub fn values(&self) -> &[f64; 6] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Same weights multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        WeightVector::new(self.0.map(|w| w * factor))
    }
}

impl Index<WfFunctionId> for WeightVector {
    type Output = f64;

    fn index(&self, id: WfFunctionId) -> &f64 {
        &self.0[id.index()]
    }
}

/// A labelled assignment of one trajectory model to every function.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamProfile {
    label: String,
    models: [WfModel; 6],
}

impl TeamProfile {
    /// Models in canonical `I, C, M, F, L, P` order.
    pub fn new(label: impl Into<String>, models: [WfModel; 6]) -> Result<Self> {
        for (id, model) in WfFunctionId::ALL.iter().zip(&models) {
            model.validate().map_err(|e| e.under(id.code()))?;
        }
        Ok(TeamProfile {
            label: label.into(),
            models,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn models(&self) -> &[WfModel; 6] {
        &self.models
    }

    pub fn model(&self, id: WfFunctionId) -> &WfModel {
        &self.models[id.index()]
    }
}

/// Validated list of evaluation times: non-empty, finite, non-negative and
/// strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid(Vec<f64>);

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let mut prev = f64::NEG_INFINITY;
        for (index, &value) in points.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0 && value > prev) {
                return Err(Error::NonMonotoneGrid { index, value });
            }
            prev = value;
        }
        Ok(TimeGrid(points))
    }

    /// Points `start, start + step, ...` up to and including `end` (within
    /// a relative slack of 1e-9 steps).
    pub fn uniform(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(start >= 0.0 && start.is_finite()) {
            return Err(Error::param(
                "start",
                start,
                "must be finite and non-negative",
            ));
        }
        if !(end > start && end.is_finite()) {
            return Err(Error::param("end", end, "must be finite and exceed start"));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::param("step", step, "must be finite and positive"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        TimeGrid::new((0..count).map(|i| start + i as f64 * step).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Expected survivability sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivabilityCurve {
    pub label: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

pub const LIMIT_LABEL: &str = "LIMIT";

fn weighted_average(weights: &WeightVector, levels: impl Iterator<Item = f64>) -> f64 {
    let num: f64 = weights
        .values()
        .iter()
        .zip(levels)
        .map(|(w, x)| w * x)
        .sum();
    (num / weights.total()).clamp(0.0, 1.0)
}

/// Realized survivability `sum(l_u x_u(t)) / sum(l_u)` for one joint draw.
pub fn survivability_sample(
    profile: &TeamProfile,
    weights: &WeightVector,
    reals: &[Realization; 6],
    t: f64,
) -> f64 {
    weighted_average(
        weights,
        profile
            .models
            .iter()
            .zip(reals)
            .map(|(m, &real)| eval_trajectory(m, real, t)),
    )
}

/// Expected survivability: the weighted average of the per-function means.
pub fn expected_survivability(
    profile: &TeamProfile,
    weights: &WeightVector,
    ev: EventTime,
    t: f64,
) -> f64 {
    weighted_average(
        weights,
        profile.models.iter().map(|m| analytic_mean(m, ev, t)),
    )
}

pub fn survivability_curve(
    profile: &TeamProfile,
    weights: &WeightVector,
    ev: EventTime,
    grid: &TimeGrid,
) -> SurvivabilityCurve {
    SurvivabilityCurve {
        label: profile.label.clone(),
        grid: grid.points().to_vec(),
        values: grid
            .points()
            .iter()
            .map(|&t| expected_survivability(profile, weights, ev, t))
            .collect(),
    }
}

/// Maximal profile sharing the template's variant layout: every initial
/// level and saturation ceiling is 1, growth rates are 1, decay rates are
/// kept from the template.
pub fn limit_profile(template: &TeamProfile) -> TeamProfile {
    let models = template.models.map(|m| match m {
        WfModel::StepDrop { .. } => WfModel::StepDrop { alpha: 1.0 },
        WfModel::DropDecay { mu, .. } => WfModel::DropDecay { alpha: 1.0, mu },
        WfModel::GradualDecay { mu, .. } => WfModel::GradualDecay { alpha: 1.0, mu },
        WfModel::SaturatingGrowth { .. } => WfModel::SaturatingGrowth {
            alpha: 1.0,
            mu: 1.0,
            beta: 1.0,
        },
    });
    TeamProfile {
        label: LIMIT_LABEL.to_string(),
        models,
    }
}

/// Upper-bound curve built from [`limit_profile`] of `template`.
pub fn limit_curve(
    weights: &WeightVector,
    ev: EventTime,
    template: &TeamProfile,
    grid: &TimeGrid,
) -> SurvivabilityCurve {
    survivability_curve(&limit_profile(template), weights, ev, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    FirstDominates,
    SecondDominates,
    Mixed,
    Tied,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::FirstDominates => "FIRST_DOMINATES",
            Verdict::SecondDominates => "SECOND_DOMINATES",
            Verdict::Mixed => "MIXED",
            Verdict::Tied => "TIED",
        }
    }
}

pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// Classifies `first - second` differences on a shared grid.
///
/// Differences within `tie_tol` of zero count as equal at that point; the
/// pair is tied when every point is equal in that sense.
pub fn dominance(diff: &[f64], tie_tol: f64) -> Verdict {
    let first_ge = diff.iter().all(|&d| d >= -tie_tol);
    let second_ge = diff.iter().all(|&d| d <= tie_tol);
    match (first_ge, second_ge) {
        (true, true) => Verdict::Tied,
        (true, false) => Verdict::FirstDominates,
        (false, true) => Verdict::SecondDominates,
        (false, false) => Verdict::Mixed,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairComparison {
    pub first: String,
    pub second: String,
    /// `first - second` at each grid point.
    pub diff: Vec<f64>,
    pub max_abs_gap: f64,
    pub verdict: Verdict,
}

impl PairComparison {
    pub fn between(a: &SurvivabilityCurve, b: &SurvivabilityCurve, tie_tol: f64) -> Self {
        let diff: Vec<f64> = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
        let max_abs_gap = diff.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        PairComparison {
            first: a.label.clone(),
            second: b.label.clone(),
            verdict: dominance(&diff, tie_tol),
            diff,
            max_abs_gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub curves: Vec<SurvivabilityCurve>,
    /// One entry per pair `(i, j)` with `i < j` in input order.
    pub pairs: Vec<PairComparison>,
    pub tie_tol: f64,
}

pub fn compare_teams(
    profiles: &[TeamProfile],
    weights: &WeightVector,
    ev: EventTime,
    grid: &TimeGrid,
    tie_tol: f64,
) -> Result<ComparisonReport> {
    if profiles.len() < 2 {
        return Err(Error::FewerThanTwoProfiles(profiles.len()));
    }
    let curves: Vec<_> = profiles
        .iter()
        .map(|p| survivability_curve(p, weights, ev, grid))
        .collect();
    let mut pairs = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            pairs.push(PairComparison::between(&curves[i], &curves[j], tie_tol));
        }
    }
    Ok(ComparisonReport {
        curves,
        pairs,
        tie_tol,
    })
}

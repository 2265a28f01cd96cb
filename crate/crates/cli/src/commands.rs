use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wfsaw_core::saw::{compare_teams, limit_curve, survivability_curve, Verdict};
use wfsaw_core::scenario::{parse_scenario, preset, Scenario};
use wfsaw_core::{
    analytic_mean, expected_survivability, mc_mean_trajectory, mc_survivability, RngSpec,
    TeamProfile, TimeGrid, WeightVector, WfFunctionId,
};

use crate::table::{format_value, CurveTable};
use crate::{svg, CliError, Command, ScenarioArgs, SweepMode};

type Result<T> = std::result::Result<T, CliError>;

pub const DEFAULT_MC_SAMPLES: u64 = 100_000;

/// Looks `reference` up as a built-in preset, then as a file path.
pub fn resolve_scenario(reference: &str) -> Result<Scenario> {
    if let Some(s) = preset(reference) {
        return Ok(s);
    }
    let path = Path::new(reference);
    if !path.is_file() {
        return Err(CliError::Usage(format!(
            "scenario `{reference}` is neither a built-in preset nor a readable file"
        )));
    }
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Parses `start:end:step`.
pub fn parse_grid(spec: &str) -> Result<TimeGrid> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("grid `{spec}` must be start:end:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    TimeGrid::uniform(nums[0], nums[1], nums[2]).map_err(|e| CliError::Usage(format!("grid: {e}")))
}

fn grid_for(scenario: &Scenario, override_spec: Option<&str>) -> Result<TimeGrid> {
    match override_spec {
        Some(spec) => parse_grid(spec),
        None => Ok(scenario.time_grid()),
    }
}

fn team<'a>(scenario: &'a Scenario, label: &str) -> Result<&'a TeamProfile> {
    scenario
        .team(label)
        .ok_or_else(|| CliError::Usage(format!("unknown team `{label}`")))
}

fn ranking<'a>(scenario: &'a Scenario, name: Option<&str>) -> Result<(&'a str, &'a WeightVector)> {
    match name {
        None => {
            let r = &scenario.rankings[0];
            Ok((&r.name, &r.weights))
        }
        Some(name) => scenario
            .rankings
            .iter()
            .find(|r| r.name == name)
            .map(|r| (r.name.as_str(), &r.weights))
            .ok_or_else(|| CliError::Usage(format!("unknown ranking `{name}`"))),
    }
}

fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Curves for the requested teams under one ranking, followed by `LIMIT`.
pub fn eval_table(
    scenario: &Scenario,
    ranking_name: Option<&str>,
    teams: Option<&str>,
    limit_template: Option<&str>,
    grid: &TimeGrid,
) -> Result<CurveTable> {
    let (_, weights) = ranking(scenario, ranking_name)?;
    let selected: Vec<&TeamProfile> = match teams {
        None => scenario.teams.iter().collect(),
        Some(list) => {
            let labels: Vec<&str> = list.split(',').map(str::trim).collect();
            if labels.iter().all(|l| l.is_empty()) {
                return Err(CliError::Usage("team list is empty".into()));
            }
            labels
                .into_iter()
                .map(|l| {
                    if l.is_empty() {
                        Err(CliError::Usage(format!(
                            "empty entry in team list `{list}`"
                        )))
                    } else {
                        team(scenario, l)
                    }
                })
                .collect::<Result<_>>()?
        }
    };
    let template = match limit_template {
        Some(label) => team(scenario, label)?,
        None => selected[0],
    };
    let mut curves: Vec<_> = selected
        .iter()
        .map(|p| survivability_curve(p, weights, scenario.kappa, grid))
        .collect();
    curves.push(limit_curve(weights, scenario.kappa, template, grid));
    Ok(CurveTable::from_curves(&curves))
}

pub struct CompareOutput {
    /// `ranking,first,second,verdict,max_abs_gap,min_diff,max_diff`
    pub summary: String,
    /// `ranking,t,<teams...>,LIMIT`
    pub curves: String,
    pub verdicts: Vec<(String, Verdict, f64)>,
}

pub fn compare_scenario(
    scenario: &Scenario,
    ranking_name: Option<&str>,
    limit_template: Option<&str>,
    grid: &TimeGrid,
    tie_tol: f64,
) -> Result<CompareOutput> {
    let names: Vec<&str> = match ranking_name {
        Some(n) => vec![ranking(scenario, Some(n))?.0],
        None => scenario.rankings.iter().map(|r| r.name.as_str()).collect(),
    };
    let template = match limit_template {
        Some(label) => team(scenario, label)?,
        None => &scenario.teams[0],
    };

    let mut summary = csv::Writer::from_writer(Vec::new());
    let mut curves = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["ranking".to_string(), "t".to_string()];
    header.extend(scenario.teams.iter().map(|t| t.label().to_string()));
    header.push(wfsaw_core::saw::LIMIT_LABEL.to_string());
    curves.write_record(&header).expect("in-memory write");
    summary
        .write_record([
            "ranking",
            "first",
            "second",
            "verdict",
            "max_abs_gap",
            "min_diff",
            "max_diff",
        ])
        .expect("in-memory write");

    let mut verdicts = Vec::new();
    for name in names {
        let (_, weights) = ranking(scenario, Some(name))?;
        let report = compare_teams(&scenario.teams, weights, scenario.kappa, grid, tie_tol)?;
        let limit = limit_curve(weights, scenario.kappa, template, grid);
        for (i, t) in grid.points().iter().enumerate() {
            let mut row = vec![name.to_string(), format_value(*t)];
            row.extend(report.curves.iter().map(|c| format_value(c.values[i])));
            row.push(format_value(limit.values[i]));
            curves.write_record(&row).expect("in-memory write");
        }
        for pair in &report.pairs {
            let min = pair.diff.iter().copied().fold(f64::INFINITY, f64::min);
            let max = pair.diff.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            summary
                .write_record([
                    name.to_string(),
                    pair.first.clone(),
                    pair.second.clone(),
                    pair.verdict.as_str().to_string(),
                    format_value(pair.max_abs_gap),
                    format_value(min),
                    format_value(max),
                ])
                .expect("in-memory write");
            verdicts.push((name.to_string(), pair.verdict, pair.max_abs_gap));
        }
    }
    let finish =
        |w: csv::Writer<Vec<u8>>| String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    Ok(CompareOutput {
        summary: finish(summary),
        curves: finish(curves),
        verdicts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McCheckSummary {
    pub points: usize,
    pub within_3se: usize,
    pub beyond_5se: usize,
}

impl McCheckSummary {
    pub fn fraction_within_3se(&self) -> f64 {
        self.within_3se as f64 / self.points as f64
    }

    /// At least 99% of points within 3 standard errors, none beyond 5.
    pub fn passes(&self) -> bool {
        self.fraction_within_3se() >= 0.99 && self.beyond_5se == 0
    }
}

/// Seed for the `job`-th estimate of an mc-check run.
fn job_seed(seed: u64, job: u64) -> u64 {
    seed.wrapping_add(job.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Report CSV `team,target,t,analytic,mc_mean,std_error,z` covering every
/// team under every ranking and every team's six functions.
pub fn mc_check_report(
    scenario: &Scenario,
    grid: &TimeGrid,
    n: u64,
    seed: u64,
) -> Result<(String, McCheckSummary)> {
    if n < 2 {
        return Err(wfsaw_core::Error::InsufficientSamples(n).into());
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "team",
        "target",
        "t",
        "analytic",
        "mc_mean",
        "std_error",
        "z",
    ])
    .expect("in-memory write");
    let mut summary = McCheckSummary {
        points: 0,
        within_3se: 0,
        beyond_5se: 0,
    };
    let mut job = 0u64;
    let mut record = |w: &mut csv::Writer<Vec<u8>>,
                      team: &str,
                      target: String,
                      t: f64,
                      analytic: f64,
                      est: &wfsaw_core::McEstimate| {
        let z = est.z_score(analytic);
        summary.points += 1;
        if z.abs() <= 3.0 {
            summary.within_3se += 1;
        }
        if z.abs() > 5.0 {
            summary.beyond_5se += 1;
        }
        w.write_record([
            team.to_string(),
            target,
            format_value(t),
            format_value(analytic),
            format_value(est.mean),
            format_value(est.std_error),
            format_value(z),
        ])
        .expect("in-memory write");
    };

    for profile in &scenario.teams {
        for r in &scenario.rankings {
            let est = mc_survivability(
                profile,
                &r.weights,
                scenario.kappa,
                grid,
                n,
                RngSpec::new(job_seed(seed, job)),
            )?;
            job += 1;
            for (e, &t) in est.iter().zip(grid.points()) {
                let exact = expected_survivability(profile, &r.weights, scenario.kappa, t);
                record(
                    &mut w,
                    profile.label(),
                    format!("ranking:{}", r.name),
                    t,
                    exact,
                    e,
                );
            }
        }
        for id in WfFunctionId::ALL {
            let model = profile.model(id);
            let est = mc_mean_trajectory(
                model,
                scenario.kappa,
                grid,
                n,
                RngSpec::new(job_seed(seed, job)),
            )?;
            job += 1;
            for (e, &t) in est.iter().zip(grid.points()) {
                record(
                    &mut w,
                    profile.label(),
                    format!("function:{id}"),
                    t,
                    analytic_mean(model, scenario.kappa, t),
                    e,
                );
            }
        }
    }
    let text = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    Ok((text, summary))
}

/// Weight vector drawn uniformly from the probability simplex.
pub fn random_simplex_weights(rng: &mut ChaCha8Rng) -> WeightVector {
    loop {
        // normalized unit exponentials are Dirichlet(1, ..., 1)
        let draws: [f64; 6] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
        let total: f64 = draws.iter().sum();
        if total > 0.0 {
            return WeightVector::new(draws.map(|d| d / total)).expect("positive simplex point");
        }
    }
}

pub struct SweepOutput {
    /// `label,I,C,M,F,L,P,verdict,max_abs_gap`
    pub table: String,
    pub verdicts: Vec<(String, Verdict, f64)>,
}

impl SweepOutput {
    pub fn fraction(&self, verdict: Verdict) -> f64 {
        let hits = self
            .verdicts
            .iter()
            .filter(|(_, v, _)| *v == verdict)
            .count();
        hits as f64 / self.verdicts.len().max(1) as f64
    }
}

pub fn sweep(
    scenario: &Scenario,
    mode: SweepMode,
    count: u64,
    seed: u64,
    grid: &TimeGrid,
    tie_tol: f64,
) -> Result<SweepOutput> {
    if scenario.teams.len() < 2 {
        return Err(wfsaw_core::Error::FewerThanTwoProfiles(scenario.teams.len()).into());
    }
    let vectors: Vec<(String, WeightVector)> = match mode {
        SweepMode::Rankings => scenario
            .rankings
            .iter()
            .map(|r| (r.name.clone(), r.weights))
            .collect(),
        SweepMode::RandomSimplex => {
            if count == 0 {
                return Err(CliError::Usage("--count must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|i| (format!("draw{i}"), random_simplex_weights(&mut rng)))
                .collect()
        }
    };
    let pair = &scenario.teams[..2];
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["label".to_string()];
    header.extend(WfFunctionId::ALL.iter().map(|id| id.code().to_string()));
    header.extend(["verdict".to_string(), "max_abs_gap".to_string()]);
    w.write_record(&header).expect("in-memory write");
    let mut verdicts = Vec::new();
    for (label, weights) in vectors {
        let report = compare_teams(pair, &weights, scenario.kappa, grid, tie_tol)?;
        let result = &report.pairs[0];
        let mut row = vec![label.clone()];
        row.extend(weights.values().iter().map(|v| format_value(*v)));
        row.push(result.verdict.as_str().to_string());
        row.push(format_value(result.max_abs_gap));
        w.write_record(&row).expect("in-memory write");
        verdicts.push((label, result.verdict, result.max_abs_gap));
    }
    Ok(SweepOutput {
        table: String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"),
        verdicts,
    })
}

pub fn plot(csv_path: &Path) -> Result<String> {
    let text = fs::read_to_string(csv_path)
        .map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;
    let table = CurveTable::parse(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", csv_path.display())))?;
    Ok(svg::render(&table))
}

fn load(common: &ScenarioArgs) -> Result<(Scenario, TimeGrid)> {
    let scenario = resolve_scenario(&common.scenario)?;
    let grid = grid_for(&scenario, common.grid.as_deref())?;
    Ok((scenario, grid))
}

fn check_tie_tol(tie_tol: f64) -> Result<()> {
    if tie_tol >= 0.0 && tie_tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--tie-tol must be finite and non-negative, got {tie_tol}"
        )))
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Eval {
            common,
            ranking,
            teams,
            limit_template,
        } => {
            let (scenario, grid) = load(&common)?;
            let table = eval_table(
                &scenario,
                ranking.as_deref(),
                teams.as_deref(),
                limit_template.as_deref(),
                &grid,
            )?;
            write_output(common.out.as_deref(), &table.to_csv())
        }
        Command::Compare {
            common,
            ranking,
            curves,
            limit_template,
            tie_tol,
        } => {
            check_tie_tol(tie_tol)?;
            let (scenario, grid) = load(&common)?;
            let output = compare_scenario(
                &scenario,
                ranking.as_deref(),
                limit_template.as_deref(),
                &grid,
                tie_tol,
            )?;
            if let Some(path) = curves {
                write_output(Some(&path), &output.curves)?;
            }
            write_output(common.out.as_deref(), &output.summary)
        }
        Command::McCheck { common, n, seed } => {
            let (scenario, grid) = load(&common)?;
            let n = n.or(scenario.mc.map(|m| m.n)).unwrap_or(DEFAULT_MC_SAMPLES);
            let seed = seed.or(scenario.mc.map(|m| m.seed)).unwrap_or(0);
            let (report, summary) = mc_check_report(&scenario, &grid, n, seed)?;
            write_output(common.out.as_deref(), &report)?;
            eprintln!(
                "points={} within_3se={} ({:.4}) beyond_5se={}",
                summary.points,
                summary.within_3se,
                summary.fraction_within_3se(),
                summary.beyond_5se
            );
            if summary.passes() {
                Ok(())
            } else {
                Err(CliError::ValidationFailed(
                    "Monte Carlo estimates disagree with closed forms".into(),
                ))
            }
        }
        Command::Sweep {
            common,
            mode,
            count,
            seed,
            tie_tol,
        } => {
            check_tie_tol(tie_tol)?;
            let (scenario, grid) = load(&common)?;
            let output = sweep(&scenario, mode, count, seed, &grid, tie_tol)?;
            write_output(common.out.as_deref(), &output.table)?;
            for v in [
                Verdict::FirstDominates,
                Verdict::SecondDominates,
                Verdict::Mixed,
                Verdict::Tied,
            ] {
                eprintln!("{}={:.4}", v.as_str(), output.fraction(v));
            }
            Ok(())
        }
        Command::Plot { csv, out } => {
            let svg = plot(&csv)?;
            write_output(out.as_deref(), &svg)
        }
    }
}

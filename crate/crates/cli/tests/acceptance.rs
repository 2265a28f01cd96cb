//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::fs;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;
use wfsaw_cli::commands::mc_check_report;
use wfsaw_cli::run;
use wfsaw_core::saw::{compare_teams, Verdict, DEFAULT_TIE_TOL};
use wfsaw_core::scenario::{
    paper_table1, parse_scenario, serialize_scenario, GridSpec, McSettings, Ranking, Scenario,
};
use wfsaw_core::{
    analytic_mean, expected_survivability, mc_mean_trajectory, EventTime, RngSpec, TeamProfile,
    TimeGrid, WeightVector, WfModel,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

// `alpha` in [0, 1), `beta` uniform in (alpha, 1].
fn random_model(variant: usize, rng: &mut ChaCha8Rng) -> WfModel {
    let alpha: f64 = rng.random();
    let mu = log_uniform(rng, 0.01, 10.0);
    match variant {
        0 => WfModel::StepDrop { alpha },
        1 => WfModel::DropDecay { alpha, mu },
        2 => WfModel::GradualDecay { alpha, mu },
        _ => WfModel::SaturatingGrowth {
            alpha,
            mu,
            beta: alpha + (1.0 - alpha) * (1.0 - rng.random::<f64>()),
        },
    }
}

const VARIANTS: [&str; 4] = [
    "step_drop",
    "drop_decay",
    "gradual_decay",
    "saturating_growth",
];

// 1. Randomized closed-form vs Monte Carlo sweep, per model variant.
fn closed_form_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut details = Vec::new();
    let mut pass = true;
    for (variant, name) in VARIANTS.iter().enumerate() {
        let (mut points, mut within3, mut beyond5) = (0usize, 0usize, 0usize);
        for set in 0..50u64 {
            let model = random_model(variant, &mut rng);
            let kappa = log_uniform(&mut rng, 0.01, 10.0);
            let ev = EventTime::new(kappa).unwrap();
            let horizon = 5.0 / kappa;
            let grid = TimeGrid::new((0..11).map(|i| horizon * i as f64 / 10.0).collect()).unwrap();
            let est = mc_mean_trajectory(
                &model,
                ev,
                &grid,
                100_000,
                RngSpec::new(variant as u64 * 1000 + set),
            )
            .unwrap();
            for (e, &t) in est.iter().zip(grid.points()) {
                let z = e.z_score(analytic_mean(&model, ev, t)).abs();
                points += 1;
                within3 += (z <= 3.0) as usize;
                beyond5 += (z > 5.0) as usize;
            }
        }
        let frac = within3 as f64 / points as f64;
        pass &= frac >= 0.99 && beyond5 == 0;
        details.push(format!(
            "{name}: {within3}/{points} within 3SE ({frac:.4}), {beyond5} beyond 5SE"
        ));
    }
    outcome(pass, details.join("; "))
}

// 2. mc_survivability vs expected_survivability on the preset. Every team,
// ranking and default-grid point must fall within 3 SE (n = 1e5, preset seed).
fn survivability_oracle() -> Outcome {
    let s = paper_table1();
    let mc = s.mc.expect("preset carries Monte Carlo settings");
    assert_eq!(mc.n, 100_000);
    let (report, _) = mc_check_report(&s, &s.time_grid(), mc.n, mc.seed).unwrap();
    let mut points = 0;
    let mut outside = Vec::new();
    let mut worst: f64 = 0.0;
    for line in report.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if !f[1].starts_with("ranking:") {
            continue;
        }
        let z: f64 = f[6].parse().unwrap();
        points += 1;
        worst = worst.max(z.abs());
        if z.abs() > 3.0 {
            outside.push(format!(
                "{} {} t={} z={:.3}",
                f[0],
                f[1],
                f[2].trim_end_matches('0'),
                z
            ));
        }
    }
    outcome(
        outside.is_empty(),
        format!(
            "{}/{points} points within 3SE (seed {}, worst |z| {worst:.3}){}",
            points - outside.len(),
            mc.seed,
            if outside.is_empty() {
                String::new()
            } else {
                format!("; outside: {}", outside.join(", "))
            }
        ),
    )
}

// 3. Qualitative verdicts for the four rankings on the default grid.
fn verdict_reproduction() -> Outcome {
    let s = paper_table1();
    let grid = s.time_grid();
    let report = |name: &str| {
        compare_teams(
            &s.teams,
            s.ranking(name).unwrap(),
            s.kappa,
            &grid,
            DEFAULT_TIE_TOL,
        )
        .unwrap()
        .pairs
        .remove(0)
    };
    let r1 = report("r1");
    let r1_ok = r1.diff[0] >= 0.0
        && r1.diff[1..].iter().all(|&d| d > 0.0)
        && r1.verdict == Verdict::FirstDominates;
    let r2 = report("r2");
    let r2_ok = r2.max_abs_gap < 0.01;
    let r3 = report("r3");
    let r3_ok = r3.verdict == Verdict::SecondDominates;
    let r4 = report("r4");
    let r4_ok = r4.verdict == Verdict::FirstDominates && r4.max_abs_gap > r1.max_abs_gap;
    outcome(
        r1_ok && r2_ok && r3_ok && r4_ok,
        format!(
            "r1 {} gap {:.6}; r2 {} gap {:.6}; r3 {} gap {:.6}; r4 {} gap {:.6}",
            r1.verdict.as_str(),
            r1.max_abs_gap,
            r2.verdict.as_str(),
            r2.max_abs_gap,
            r3.verdict.as_str(),
            r3.max_abs_gap,
            r4.verdict.as_str(),
            r4.max_abs_gap
        ),
    )
}

// 4. Hand-arithmetic anchors.
fn anchor_values() -> Outcome {
    let s = paper_table1();
    let r1 = s.ranking("r1").unwrap();
    // sum(l_u a_u) over the table rows, by hand:
    // Team1: 6(.9)+4(.9)+3(.5)+5(.9)+1(.5)+2(.5) = 16.5
    // Team2: 6(.5)+4(.7)+3(.7)+5(.5)+1(.7)+2(.5) = 12.1
    let team1 = expected_survivability(&s.teams[0], r1, s.kappa, 0.0);
    let team2 = expected_survivability(&s.teams[1], r1, s.kappa, 0.0);
    let step = analytic_mean(
        &WfModel::StepDrop { alpha: 0.9 },
        EventTime::new(0.1).unwrap(),
        10.0,
    );
    let step_exact = 0.45 * (1.0 + (-1.0f64).exp());
    let ok = (team1 - 16.5 / 21.0).abs() < 1e-6
        && (team2 - 12.1 / 21.0).abs() < 1e-6
        && (step - step_exact).abs() < 1e-6;
    outcome(
        ok,
        format!("Team1 E Z(0) = {team1:.9} (16.5/21); Team2 E Z(0) = {team2:.9} (12.1/21); step-drop mean = {step:.9} (0.45(1+e^-1) = {step_exact:.9})"),
    )
}

fn with_mu(model: WfModel, mu: f64) -> WfModel {
    match model {
        WfModel::DropDecay { alpha, .. } => WfModel::DropDecay { alpha, mu },
        WfModel::GradualDecay { alpha, .. } => WfModel::GradualDecay { alpha, mu },
        WfModel::SaturatingGrowth { alpha, beta, .. } => {
            WfModel::SaturatingGrowth { alpha, mu, beta }
        }
        other => other,
    }
}

// 5. Means at mu = kappa: continuity and Monte Carlo agreement.
fn singularity_handling() -> Outcome {
    let mut worst_jump: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    for (i, &kappa) in [0.1, 1.0, 4.0].iter().enumerate() {
        let ev = EventTime::new(kappa).unwrap();
        // Same horizon as criterion 1. Much past 5/kappa the deviation from the
        // asymptote comes from events too rare for n = 1e5 to sample, and the
        // sample SE collapses towards zero.
        let grid = TimeGrid::new((0..11).map(|i| 0.5 * i as f64 / kappa).collect()).unwrap();
        for (j, base) in [
            WfModel::DropDecay {
                alpha: 0.9,
                mu: 0.0,
            },
            WfModel::GradualDecay {
                alpha: 0.7,
                mu: 0.0,
            },
            WfModel::SaturatingGrowth {
                alpha: 0.5,
                mu: 0.0,
                beta: 0.8,
            },
        ]
        .into_iter()
        .enumerate()
        {
            let model = with_mu(base, kappa);
            for &t in grid.points() {
                let centre = analytic_mean(&model, ev, t);
                for eps in [1e-6, -1e-6] {
                    let near = analytic_mean(&with_mu(base, kappa * (1.0 + eps)), ev, t);
                    worst_jump = worst_jump.max((centre - near).abs());
                }
            }
            let est = mc_mean_trajectory(
                &model,
                ev,
                &grid,
                100_000,
                RngSpec::new(500 + (i * 3 + j) as u64),
            )
            .unwrap();
            for (e, &t) in est.iter().zip(grid.points()) {
                worst_z = worst_z.max(e.z_score(analytic_mean(&model, ev, t)).abs());
            }
        }
    }
    outcome(
        worst_jump < 1e-4 && worst_z <= 3.0,
        format!("max |mean(mu=k) - mean(mu=k(1±1e-6))| = {worst_jump:.3e}; max |z| vs Monte Carlo = {worst_z:.3}"),
    )
}

// 6. t = 0 returns alpha; large t returns the variant asymptote.
fn boundary_laws() -> Outcome {
    let s = paper_table1();
    let mut cases: Vec<(WfModel, f64)> = s
        .teams
        .iter()
        .flat_map(|t| t.models().iter().map(|m| (*m, s.kappa.kappa())))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for variant in 0..4 {
        for _ in 0..50 {
            let model = random_model(variant, &mut rng);
            cases.push((model, log_uniform(&mut rng, 0.01, 10.0)));
        }
    }
    let (mut start_err, mut end_err): (f64, f64) = (0.0, 0.0);
    for (model, kappa) in &cases {
        let ev = EventTime::new(*kappa).unwrap();
        start_err = start_err.max((analytic_mean(model, ev, 0.0) - model.alpha()).abs());
        let slowest = model.mu().map_or(*kappa, |mu| mu.min(*kappa));
        // e^{-21} < 1e-9
        let t = 21.0 / slowest;
        let asymptote = match *model {
            WfModel::StepDrop { alpha } => 0.5 * alpha,
            WfModel::DropDecay { .. } | WfModel::GradualDecay { .. } => 0.0,
            WfModel::SaturatingGrowth { beta, .. } => beta,
        };
        end_err = end_err.max((analytic_mean(model, ev, t) - asymptote).abs());
    }
    outcome(
        start_err <= 1e-12 && end_err <= 1e-6,
        format!("{} curves: max |mean(0) - alpha| = {start_err:.3e}; max |mean(t_end) - asymptote| = {end_err:.3e}", cases.len()),
    )
}

// 7. Byte-identical CLI outputs across repeated runs.
fn determinism() -> Outcome {
    let dir = TempDir::new().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let mut identical = true;
    let mut notes = Vec::new();
    for (cmd, extra) in [
        ("mc-check", vec!["--n", "100000", "--seed", "42"]),
        ("eval", vec!["--ranking", "r1", "--teams", "Team1,Team2"]),
        ("compare", vec![]),
    ] {
        let mut outputs = Vec::new();
        for run_id in 0..2 {
            let out = path(&format!("{cmd}-{run_id}.csv"));
            let mut args = vec!["wfsaw", cmd, "--scenario", "paper_table1", "--out", &out];
            args.extend(extra.iter().copied());
            let code = run(args);
            outputs.push(fs::read(&out).unwrap());
            notes.push(format!("{cmd} run {run_id} exit {code}"));
            if code != 0 {
                identical = false;
            }
        }
        identical &= outputs[0] == outputs[1];
    }
    outcome(identical, notes.join(", "))
}

fn random_scenario(rng: &mut ChaCha8Rng, index: usize) -> Scenario {
    let teams = (0..rng.random_range(1..4))
        .map(|t| {
            let models: [WfModel; 6] = std::array::from_fn(|_| {
                let v = rng.random_range(0..4);
                random_model(v, rng)
            });
            TeamProfile::new(format!("team-{index}-{t}"), models).unwrap()
        })
        .collect();
    let rankings = (0..rng.random_range(1..5))
        .map(|r| {
            let mut w: [f64; 6] = std::array::from_fn(|_| rng.random::<f64>() * 10.0);
            w[r % 6] += 0.5;
            Ranking {
                name: format!("rank {r}"),
                weights: WeightVector::new(w).unwrap(),
            }
        })
        .collect();
    let start = rng.random::<f64>() * 5.0;
    let span = 1.0 + rng.random::<f64>() * 99.0;
    Scenario {
        teams,
        kappa: EventTime::new(log_uniform(rng, 0.01, 10.0)).unwrap(),
        rankings,
        grid: GridSpec {
            start,
            end: start + span,
            step: span / rng.random_range(1..300) as f64,
        },
        mc: rng.random_bool(0.5).then(|| McSettings {
            n: rng.random_range(2..1_000_000),
            seed: rng.random(),
        }),
    }
}

// 8. parse(serialize(s)) == s for the preset and 100 random scenarios.
fn scenario_round_trip() -> Outcome {
    let preset = paper_table1();
    let mut ok = parse_scenario(&serialize_scenario(&preset)).as_ref() == Ok(&preset);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for i in 0..100 {
        let s = random_scenario(&mut rng, i);
        if parse_scenario(&serialize_scenario(&s)).as_ref() != Ok(&s) {
            failures += 1;
        }
    }
    ok &= failures == 0;
    outcome(
        ok,
        format!("preset + 100 random scenarios, {failures} mismatches"),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "closed-form means match Monte Carlo (4 variants x 50 sets, n=1e5)",
            closed_form_oracle,
        ),
        (
            "expected survivability matches Monte Carlo on preset (n=1e5)",
            survivability_oracle,
        ),
        ("ranking verdicts r1..r4 on preset", verdict_reproduction),
        ("anchor values within 1e-6", anchor_values),
        ("mu = kappa singularity handling", singularity_handling),
        ("boundary laws at t = 0 and t -> inf", boundary_laws),
        ("deterministic CLI outputs", determinism),
        ("scenario round-trip", scenario_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = check();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {}: {name} ({:.1}s) -- {}",
            i + 1,
            started.elapsed().as_secs_f64(),
            result.detail
        );
        failed += (!result.pass) as usize;
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

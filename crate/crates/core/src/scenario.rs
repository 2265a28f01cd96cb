//! Scenario documents (TOML) and built-in presets.
//!
//! ```toml
//! kappa = 0.1
//! grid = { start = 0.0, end = 50.0, step = 0.5 }   # optional
//! mc = { n = 100000, seed = 7 }                    # optional
//!
//! [[teams]]
//! label = "Team1"
//! [teams.models.I]
//! type = "saturating_growth"
//! alpha = 0.9
//! mu = 2.0
//! beta = 1.0
//! # ... one table per function I, C, M, F, L, P
//!
//! [[rankings]]
//! name = "r1"
//! I = 6
//! C = 4
//! M = 3
//! F = 5
//! L = 1
//! P = 2
//! ```
//!
//! Unknown keys and unknown model tags are rejected. Errors carry the
//! dotted path of the offending entry, e.g. `teams[0].models.C.alpha`.

use std::collections::HashSet;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::model::{validate_model, EventTime, WfFunctionId, WfModel};
use crate::saw::{TeamProfile, TimeGrid, WeightVector};

pub const PAPER_TABLE1: &str = "paper_table1";

const PAPER_TABLE1_DOC: &str = include_str!("../presets/paper_table1.toml");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn to_grid(&self) -> Result<TimeGrid> {
        TimeGrid::uniform(self.start, self.end, self.step)
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            start: 0.0,
            end: 50.0,
            step: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub n: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub name: String,
    pub weights: WeightVector,
}

pub type RankingSet = Vec<Ranking>;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub teams: Vec<TeamProfile>,
    pub kappa: EventTime,
    pub rankings: RankingSet,
    pub grid: GridSpec,
    pub mc: Option<McSettings>,
}

impl Scenario {
    pub fn ranking(&self, name: &str) -> Option<&WeightVector> {
        self.rankings
            .iter()
            .find(|r| r.name == name)
            .map(|r| &r.weights)
    }

    pub fn team(&self, label: &str) -> Option<&TeamProfile> {
        self.teams.iter().find(|t| t.label() == label)
    }

    pub fn time_grid(&self) -> TimeGrid {
        self.grid
            .to_grid()
            .expect("scenario grid validated on construction")
    }

    /// Checks cross-field invariants: non-empty lists, unique names, a
    /// usable grid and Monte Carlo settings.
    pub fn validate(&self) -> Result<()> {
        if self.teams.is_empty() {
            return Err(Error::schema("teams", "at least one team is required"));
        }
        if self.rankings.is_empty() {
            return Err(Error::schema(
                "rankings",
                "at least one ranking is required",
            ));
        }
        let mut labels = HashSet::new();
        for (i, team) in self.teams.iter().enumerate() {
            if !labels.insert(team.label()) {
                return Err(Error::schema(
                    format!("teams[{i}].label"),
                    format!("duplicate team label `{}`", team.label()),
                ));
            }
        }
        let mut names = HashSet::new();
        for (i, r) in self.rankings.iter().enumerate() {
            if !names.insert(r.name.as_str()) {
                return Err(Error::schema(
                    format!("rankings[{i}].name"),
                    format!("duplicate ranking name `{}`", r.name),
                ));
            }
        }
        self.grid.to_grid().map_err(|e| e.under("grid"))?;
        if let Some(mc) = self.mc {
            if mc.n < 2 {
                return Err(Error::param(
                    "mc.n",
                    mc.n as f64,
                    "at least two samples required",
                ));
            }
        }
        Ok(())
    }
}

fn syntax_error(text: &str, err: &toml::de::Error) -> Error {
    let offset = err.span().map(|s| s.start).unwrap_or(0).min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Error::Syntax {
        line,
        column,
        message: err.message().to_string(),
    }
}

fn check_keys(table: &Table, path: &str, allowed: &[&str]) -> Result<()> {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::schema(join(path, key), "unknown key"));
        }
    }
    Ok(())
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn required<'a>(table: &'a Table, path: &str, key: &str) -> Result<&'a Value> {
    table
        .get(key)
        .ok_or_else(|| Error::schema(join(path, key), "missing required key"))
}

fn as_number(value: &Value, path: &str) -> Result<f64> {
    match value {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(Error::schema(path, "expected a number")),
    }
}

fn number(table: &Table, path: &str, key: &str) -> Result<f64> {
    as_number(required(table, path, key)?, &join(path, key))
}

fn as_table<'a>(value: &'a Value, path: &str) -> Result<&'a Table> {
    value
        .as_table()
        .ok_or_else(|| Error::schema(path, "expected a table"))
}

fn as_array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    value
        .as_array()
        .ok_or_else(|| Error::schema(path, "expected an array of tables"))
}

fn string<'a>(table: &'a Table, path: &str, key: &str) -> Result<&'a str> {
    required(table, path, key)?
        .as_str()
        .ok_or_else(|| Error::schema(join(path, key), "expected a string"))
}

fn parse_model(table: &Table, path: &str) -> Result<WfModel> {
    let tag = string(table, path, "type")?;
    let model = match tag {
        "step_drop" => {
            check_keys(table, path, &["type", "alpha"])?;
            WfModel::StepDrop {
                alpha: number(table, path, "alpha")?,
            }
        }
        "drop_decay" => {
            check_keys(table, path, &["type", "alpha", "mu"])?;
            WfModel::DropDecay {
                alpha: number(table, path, "alpha")?,
                mu: number(table, path, "mu")?,
            }
        }
        "gradual_decay" => {
            check_keys(table, path, &["type", "alpha", "mu"])?;
            WfModel::GradualDecay {
                alpha: number(table, path, "alpha")?,
                mu: number(table, path, "mu")?,
            }
        }
        "saturating_growth" => {
            check_keys(table, path, &["type", "alpha", "mu", "beta"])?;
            WfModel::SaturatingGrowth {
                alpha: number(table, path, "alpha")?,
                mu: number(table, path, "mu")?,
                beta: number(table, path, "beta")?,
            }
        }
        other => {
            return Err(Error::schema(
                join(path, "type"),
                format!("unknown model type `{other}`"),
            ))
        }
    };
    validate_model(&model).map_err(|e| e.under(path))?;
    Ok(model)
}

fn parse_team(table: &Table, path: &str) -> Result<TeamProfile> {
    check_keys(table, path, &["label", "models"])?;
    let label = string(table, path, "label")?;
    let models_path = join(path, "models");
    let models = as_table(required(table, path, "models")?, &models_path)?;
    let codes: Vec<&str> = WfFunctionId::ALL.iter().map(|id| id.code()).collect();
    check_keys(models, &models_path, &codes)?;
    let mut parsed = [WfModel::StepDrop { alpha: 0.0 }; 6];
    for id in WfFunctionId::ALL {
        let fpath = join(&models_path, id.code());
        let entry = models.get(id.code()).ok_or_else(|| {
            Error::schema(
                &fpath,
                format!("missing warfighting function `{}`", id.code()),
            )
        })?;
        parsed[id.index()] = parse_model(as_table(entry, &fpath)?, &fpath)?;
    }
    TeamProfile::new(label, parsed).map_err(|e| e.under(&models_path))
}

fn parse_ranking(table: &Table, path: &str) -> Result<Ranking> {
    let mut allowed = vec!["name"];
    allowed.extend(WfFunctionId::ALL.iter().map(|id| id.code()));
    check_keys(table, path, &allowed)?;
    let name = string(table, path, "name")?.to_string();
    let mut lambda = [0.0; 6];
    for id in WfFunctionId::ALL {
        lambda[id.index()] = number(table, path, id.code())?;
    }
    let weights = WeightVector::new(lambda).map_err(|e| e.under(path))?;
    Ok(Ranking { name, weights })
}

fn parse_seed(value: &Value, path: &str) -> Result<u64> {
    match value {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::schema(path, "expected an unsigned 64-bit integer")),
        _ => Err(Error::schema(path, "expected an unsigned 64-bit integer")),
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let doc: Table = text.parse().map_err(|e| syntax_error(text, &e))?;
    check_keys(&doc, "", &["kappa", "grid", "mc", "teams", "rankings"])?;

    let kappa = EventTime::new(number(&doc, "", "kappa")?)?;

    let grid = match doc.get("grid") {
        None => GridSpec::default(),
        Some(v) => {
            let t = as_table(v, "grid")?;
            check_keys(t, "grid", &["start", "end", "step"])?;
            GridSpec {
                start: number(t, "grid", "start")?,
                end: number(t, "grid", "end")?,
                step: number(t, "grid", "step")?,
            }
        }
    };

    let mc = match doc.get("mc") {
        None => None,
        Some(v) => {
            let t = as_table(v, "mc")?;
            check_keys(t, "mc", &["n", "seed"])?;
            let n = match required(t, "mc", "n")? {
                Value::Integer(i) => *i,
                _ => return Err(Error::schema("mc.n", "expected an integer")),
            };
            if n < 2 {
                return Err(Error::param(
                    "mc.n",
                    n as f64,
                    "at least two samples required",
                ));
            }
            Some(McSettings {
                n: n as u64,
                seed: parse_seed(required(t, "mc", "seed")?, "mc.seed")?,
            })
        }
    };

    let mut teams = Vec::new();
    for (i, v) in as_array(required(&doc, "", "teams")?, "teams")?
        .iter()
        .enumerate()
    {
        let path = format!("teams[{i}]");
        teams.push(parse_team(as_table(v, &path)?, &path)?);
    }

    let mut rankings = Vec::new();
    for (i, v) in as_array(required(&doc, "", "rankings")?, "rankings")?
        .iter()
        .enumerate()
    {
        let path = format!("rankings[{i}]");
        rankings.push(parse_ranking(as_table(v, &path)?, &path)?);
    }

    let scenario = Scenario {
        teams,
        kappa,
        rankings,
        grid,
        mc,
    };
    scenario.validate()?;
    Ok(scenario)
}

fn model_table(model: &WfModel) -> Table {
    let mut t = Table::new();
    t.insert("type".into(), Value::String(model.type_tag().into()));
    t.insert("alpha".into(), Value::Float(model.alpha()));
    if let Some(mu) = model.mu() {
        t.insert("mu".into(), Value::Float(mu));
    }
    if let WfModel::SaturatingGrowth { beta, .. } = model {
        t.insert("beta".into(), Value::Float(*beta));
    }
    t
}

/// Writes `scenario` as a document that [`parse_scenario`] reads back to an
/// identical value.
pub fn serialize_scenario(scenario: &Scenario) -> String {
    let mut doc = Table::new();
    doc.insert("kappa".into(), Value::Float(scenario.kappa.kappa()));

    let mut grid = Table::new();
    grid.insert("start".into(), Value::Float(scenario.grid.start));
    grid.insert("end".into(), Value::Float(scenario.grid.end));
    grid.insert("step".into(), Value::Float(scenario.grid.step));
    doc.insert("grid".into(), Value::Table(grid));

    if let Some(mc) = scenario.mc {
        let mut t = Table::new();
        t.insert("n".into(), Value::Integer(mc.n.min(i64::MAX as u64) as i64));
        let seed = match i64::try_from(mc.seed) {
            Ok(s) => Value::Integer(s),
            Err(_) => Value::String(mc.seed.to_string()),
        };
        t.insert("seed".into(), seed);
        doc.insert("mc".into(), Value::Table(t));
    }

    let teams = scenario
        .teams
        .iter()
        .map(|team| {
            let mut models = Table::new();
            for id in WfFunctionId::ALL {
                models.insert(id.code().into(), Value::Table(model_table(team.model(id))));
            }
            let mut t = Table::new();
            t.insert("label".into(), Value::String(team.label().into()));
            t.insert("models".into(), Value::Table(models));
            Value::Table(t)
        })
        .collect();
    doc.insert("teams".into(), Value::Array(teams));

    let rankings = scenario
        .rankings
        .iter()
        .map(|r| {
            let mut t = Table::new();
            t.insert("name".into(), Value::String(r.name.clone()));
            for id in WfFunctionId::ALL {
                t.insert(id.code().into(), Value::Float(r.weights[id]));
            }
            Value::Table(t)
        })
        .collect();
    doc.insert("rankings".into(), Value::Array(rankings));

    toml::to_string(&doc).expect("scenario tables always serialize")
}

/// Built-in scenarios by name.
pub fn builtin_presets() -> Vec<(&'static str, Scenario)> {
    vec![(PAPER_TABLE1, paper_table1())]
}

pub fn preset(name: &str) -> Option<Scenario> {
    builtin_presets()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s)
}

/// Two-team study with four importance rankings at engagement rate 0.1.
pub fn paper_table1() -> Scenario {
    parse_scenario(PAPER_TABLE1_DOC).expect("embedded preset is valid")
}

/// Source document of a built-in preset.
pub fn preset_document(name: &str) -> Option<&'static str> {
    (name == PAPER_TABLE1).then_some(PAPER_TABLE1_DOC)
}

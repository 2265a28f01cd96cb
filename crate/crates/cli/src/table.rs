//! CSV curve tables: a `t` column followed by one column per curve.

use wfsaw_core::SurvivabilityCurve;

/// Formats `x` with at least 9 significant digits and at least 9 decimals,
/// so values written and read back differ by less than 1e-9.
pub fn format_value(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let magnitude = if x == 0.0 {
        0
    } else {
        x.abs().log10().floor() as i32
    };
    let decimals = (8 - magnitude).clamp(9, 17) as usize;
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub grid: Vec<f64>,
    pub labels: Vec<String>,
    /// `columns[j][i]` is curve `j` at `grid[i]`.
    pub columns: Vec<Vec<f64>>,
}

impl CurveTable {
    /// Curves must share one grid; the first curve's grid is used.
    pub fn from_curves(curves: &[SurvivabilityCurve]) -> Self {
        CurveTable {
            grid: curves.first().map(|c| c.grid.clone()).unwrap_or_default(),
            labels: curves.iter().map(|c| c.label.clone()).collect(),
            columns: curves.iter().map(|c| c.values.clone()).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["t".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (i, t) in self.grid.iter().enumerate() {
            let mut row = vec![format_value(*t)];
            row.extend(self.columns.iter().map(|c| format_value(c[i])));
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| format!("bad header: {e}"))?.clone();
        if header.len() < 2 {
            return Err("expected a `t` column and at least one curve column".into());
        }
        if &header[0] != "t" {
            return Err(format!("first column must be `t`, found `{}`", &header[0]));
        }
        let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut grid = Vec::new();
        let mut columns = vec![Vec::new(); labels.len()];
        for (line, record) in r.records().enumerate() {
            let record = record.map_err(|e| format!("row {}: {e}", line + 1))?;
            let mut values = record.iter().map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| format!("row {}: `{field}` is not a number", line + 1))
            });
            grid.push(
                values
                    .next()
                    .ok_or_else(|| format!("row {} is empty", line + 1))??,
            );
            for col in columns.iter_mut() {
                col.push(values.next().ok_or("short row")??);
            }
        }
        if grid.is_empty() {
            return Err("table has no rows".into());
        }
        Ok(CurveTable {
            grid,
            labels,
            columns,
        })
    }
}

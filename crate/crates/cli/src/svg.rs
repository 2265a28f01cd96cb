//! Static SVG line charts of curve tables.

use std::fmt::Write;

use crate::table::CurveTable;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders one polyline per curve (a marker per point for single-row
/// tables), a legend, and axes `t` by `E Z(t)` with the y-range fixed to
/// `[0, 1]`.
pub fn render(table: &CurveTable) -> String {
    let t_min = table.grid.iter().copied().fold(f64::INFINITY, f64::min);
    let t_max = table.grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (t_lo, t_hi) = if t_max > t_min {
        (t_min, t_max)
    } else {
        (t_min, t_min + 1.0)
    };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |t: f64| LEFT + (t - t_lo) / (t_hi - t_lo) * plot_w;
    let y = |v: f64| TOP + (1.0 - v.clamp(0.0, 1.0)) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // axes and ticks
    let _ = writeln!(
        out,
        r#"<g class="axes" stroke="black" fill="none"><line x1="{LEFT}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{y0:.2}"/></g>"#,
        y0 = y(0.0),
        x1 = LEFT + plot_w,
    );
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{yy:.2}" x2="{LEFT}" y2="{yy:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y(v) + 4.0,
            yy = y(v),
        );
        let t = t_lo + (t_hi - t_lo) * v;
        let _ = writeln!(
            out,
            r#"<line x1="{xx:.2}" y1="{:.2}" x2="{xx:.2}" y2="{:.2}" stroke="black"/><text x="{xx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y(0.0),
            y(0.0) + 5.0,
            y(0.0) + 18.0,
            trim_number(t),
            xx = x(t),
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">E Z(t)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (j, (label, column)) in table.labels.iter().zip(&table.columns).enumerate() {
        let colour = PALETTE[j % PALETTE.len()];
        if table.grid.len() == 1 {
            let _ = writeln!(
                out,
                r#"<circle class="curve" cx="{:.2}" cy="{:.2}" r="3" fill="{colour}"><title>{}</title></circle>"#,
                x(table.grid[0]),
                y(column[0]),
                escape(label)
            );
        } else {
            let points: Vec<String> = table
                .grid
                .iter()
                .zip(column)
                .map(|(&t, &v)| format!("{:.2},{:.2}", x(t), y(v)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline class="curve" fill="none" stroke="{colour}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
                points.join(" "),
                escape(label)
            );
        }
        let ly = TOP + 10.0 + 20.0 * j as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            out,
            r#"<g class="legend"><line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn trim_number(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

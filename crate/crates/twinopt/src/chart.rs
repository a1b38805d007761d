//! Self-contained SVG line charts for sweep tables: value queries, wall
//! time and utility against the sweep axis, one line per algorithm.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::report::CsvRow;

const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 240.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

type Series = BTreeMap<String, Vec<(f64, f64)>>;

/// Mean of `metric` per (algorithm, axis value).
fn series(rows: &[CsvRow], metric: impl Fn(&CsvRow) -> Option<f64>) -> Series {
    let mut acc: BTreeMap<(String, String), (f64, f64, usize)> = BTreeMap::new();
    for row in rows {
        let (Ok(x), Some(y)) = (row.axis.parse::<f64>(), metric(row)) else {
            continue;
        };
        let slot = acc
            .entry((row.algo.clone(), row.axis.clone()))
            .or_insert((x, 0.0, 0));
        slot.1 += y;
        slot.2 += 1;
    }
    let mut out: Series = BTreeMap::new();
    for ((algo, _), (x, sum, count)) in acc {
        out.entry(algo).or_default().push((x, sum / count as f64));
    }
    for points in out.values_mut() {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

fn bounds(s: &Series) -> Option<(f64, f64, f64, f64)> {
    let points: Vec<&(f64, f64)> = s.values().flatten().collect();
    if points.is_empty() {
        return None;
    }
    let fold = |f: fn(&(f64, f64)) -> f64, pick: fn(f64, f64) -> f64, init: f64| {
        points.iter().map(|p| f(p)).fold(init, pick)
    };
    let (x0, x1) = (
        fold(|p| p.0, f64::min, f64::INFINITY),
        fold(|p| p.0, f64::max, f64::NEG_INFINITY),
    );
    let (y0, y1) = (
        fold(|p| p.1, f64::min, f64::INFINITY),
        fold(|p| p.1, f64::max, f64::NEG_INFINITY),
    );
    let y0 = y0.min(0.0);
    let pad = |a: f64, b: f64| if b > a { (a, b) } else { (a - 0.5, a + 0.5) };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    Some((x0, x1, y0, y1))
}

fn panel(out: &mut String, index: usize, title: &str, axis: &str, s: &Series) {
    let ox = index as f64 * (PANEL_W + MARGIN) + MARGIN;
    let oy = MARGIN;
    let _ = writeln!(
        out,
        r##"<g><rect x="{ox}" y="{oy}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="#444"/>"##
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{title}</text>"#,
        ox + PANEL_W / 2.0,
        oy - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="11">{axis}</text>"#,
        ox + PANEL_W / 2.0,
        oy + PANEL_H + 32.0
    );
    let Some((x0, x1, y0, y1)) = bounds(s) else {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="11">no data</text></g>"#,
            ox + PANEL_W / 2.0,
            oy + PANEL_H / 2.0
        );
        return;
    };
    let px = |x: f64| ox + (x - x0) / (x1 - x0) * PANEL_W;
    let py = |y: f64| oy + PANEL_H - (y - y0) / (y1 - y0) * PANEL_H;
    for (label, v, anchor, x, y) in [
        ("x0", x0, "start", ox, oy + PANEL_H + 14.0),
        ("x1", x1, "end", ox + PANEL_W, oy + PANEL_H + 14.0),
        ("y0", y0, "end", ox - 4.0, oy + PANEL_H),
        ("y1", y1, "end", ox - 4.0, oy + 10.0),
    ] {
        let _ = writeln!(
            out,
            r#"<text class="{label}" x="{x}" y="{y}" text-anchor="{anchor}" font-size="10">{}</text>"#,
            tick(v)
        );
    }
    for (i, (algo, points)) in s.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"><title>{algo}</title></polyline>"#,
            path.join(" ")
        );
        for &(x, y) in points {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(x),
                py(y)
            );
        }
    }
    out.push_str("</g>\n");
}

fn tick(v: f64) -> String {
    if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Renders the three-panel chart for a sweep over `axis`.
pub fn sweep_svg(rows: &[CsvRow], axis: &str) -> String {
    let panels = [
        (
            "value queries",
            series(rows, |r| Some(r.value_queries as f64)),
        ),
        ("wall time (s)", series(rows, |r| r.wall_time_s)),
        ("utility", series(rows, |r| Some(r.utility))),
    ];
    let width = 3.0 * (PANEL_W + MARGIN) + MARGIN;
    let height = PANEL_H + 2.0 * MARGIN + 40.0;
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    out.push('\n');
    for (i, (title, s)) in panels.iter().enumerate() {
        panel(&mut out, i, title, axis, s);
    }
    let algos: Vec<&String> = panels[2].1.keys().collect();
    for (i, algo) in algos.iter().enumerate() {
        let x = MARGIN + i as f64 * 120.0;
        let y = height - 12.0;
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(
            out,
            r#"<rect x="{x}" y="{}" width="12" height="12" fill="{color}"/><text x="{}" y="{y}" font-size="12">{algo}</text>"#,
            y - 10.0,
            x + 16.0
        );
    }
    out.push_str("</svg>\n");
    out
}

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use super::grid::{GridResult, GridRow};
use crate::error::{Error, Result};
use crate::solvers::Algorithm;

pub const STROKE_WIDTH: f64 = 1.5;

const HEADER: [&str; 8] = [
    "z",
    "m",
    "algorithm",
    "epsilon",
    "alg_cost",
    "opt_cost",
    "ratio",
    "lower_bound",
];

fn sorted_rows(result: &GridResult) -> Vec<&GridRow> {
    let mut rows: Vec<&GridRow> = result.rows.iter().collect();
    rows.sort_by_key(|r| (r.z, r.algorithm, r.m));
    rows
}

pub fn write_csv<W: Write>(result: &GridResult, out: W) -> Result<()> {
    if result.is_empty() {
        return Err(Error::EmptyResult);
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in sorted_rows(result) {
        w.write_record([
            r.z.to_string(),
            r.m.to_string(),
            r.algorithm.to_string(),
            format!("{:.6}", r.epsilon),
            format!("{:.6}", r.alg_cost),
            format!("{:.6}", r.opt_cost),
            format!("{:.6}", r.ratio),
            format!("{:.6}", r.lower_bound),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Writes the grid as CSV to `path`, or to standard output when `path` is `-`.
pub fn emit_csv(result: &GridResult, path: &Path) -> Result<()> {
    if result.is_empty() {
        return Err(Error::EmptyResult);
    }
    if path == Path::new("-") {
        return write_csv(result, io::stdout().lock());
    }
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn emit_svg(result: &GridResult, path: &Path) -> Result<()> {
    let svg = render_svg(result)?;
    if path == Path::new("-") {
        return io::stdout()
            .lock()
            .write_all(svg.as_bytes())
            .map_err(|e| Error::io("<stdout>", e));
    }
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

const PANEL_W: f64 = 520.0;
const PANEL_H: f64 = 380.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 110.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Maps `(m, value)` data coordinates to pixel coordinates inside a panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelScale {
    pub m_min: f64,
    pub m_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl PanelScale {
    pub fn for_result(result: &GridResult) -> Self {
        let m_min = result.rows.iter().map(|r| r.m).min().unwrap_or(1) as f64;
        let mut m_max = result.rows.iter().map(|r| r.m).max().unwrap_or(1) as f64;
        if m_max <= m_min {
            m_max = m_min + 1.0;
        }
        let top = result
            .rows
            .iter()
            .map(|r| r.ratio.max(r.lower_bound))
            .filter(|v| v.is_finite())
            .fold(1.0, f64::max);
        PanelScale {
            m_min,
            m_max,
            y_min: 0.0,
            y_max: (top * 2.0).ceil() / 2.0 + 0.5,
        }
    }

    pub fn x(&self, m: f64) -> f64 {
        let width = PANEL_W - MARGIN_LEFT - MARGIN_RIGHT;
        MARGIN_LEFT + (m - self.m_min) / (self.m_max - self.m_min) * width
    }

    pub fn y(&self, value: f64) -> f64 {
        let height = PANEL_H - MARGIN_TOP - MARGIN_BOTTOM;
        PANEL_H - MARGIN_BOTTOM - (value - self.y_min) / (self.y_max - self.y_min) * height
    }
}

fn polyline(out: &mut String, points: &[(f64, f64)], color: &str, dashed: bool) {
    let pts: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    let dash = if dashed {
        r#" stroke-dasharray="6 4""#
    } else {
        ""
    };
    let _ = writeln!(
        out,
        r#"    <polyline fill="none" stroke="{color}" stroke-width="{STROKE_WIDTH}"{dash} points="{}"/>"#,
        pts.join(" ")
    );
}

fn panel(out: &mut String, result: &GridResult, algorithm: Algorithm, scale: &PanelScale) {
    let x0 = MARGIN_LEFT;
    let x1 = PANEL_W - MARGIN_RIGHT;
    let y0 = PANEL_H - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        out,
        r#"    <text x="{:.2}" y="24" text-anchor="middle" font-size="14">{algorithm}</text>"#,
        (x0 + x1) / 2.0
    );
    let _ = writeln!(
        out,
        r#"    <path d="M{x0:.2},{y1:.2} V{y0:.2} H{x1:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    );

    let span = scale.m_max - scale.m_min;
    let step = if span > 20.0 {
        5
    } else if span > 8.0 {
        2
    } else {
        1
    };
    let mut m = scale.m_min.ceil() as usize;
    while m as f64 <= scale.m_max {
        if m.is_multiple_of(step) || m as f64 == scale.m_min {
            let x = scale.x(m as f64);
            let _ = writeln!(
                out,
                r#"    <line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{m}</text>"#,
                y0 + 4.0,
                y0 + 18.0
            );
        }
        m += 1;
    }
    let mut v = scale.y_min;
    while v <= scale.y_max + 1e-9 {
        let y = scale.y(v);
        let _ = writeln!(
            out,
            r#"    <line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#,
            x0 - 4.0,
            x0 - 7.0,
            y + 4.0
        );
        v += 0.5;
    }
    let _ = writeln!(
        out,
        r#"    <text x="{:.2}" y="{:.2}" text-anchor="middle">m</text>"#,
        (x0 + x1) / 2.0,
        PANEL_H - 12.0
    );
    let _ = writeln!(
        out,
        r#"    <text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">competitive ratio</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    let zs: BTreeSet<u32> = result.rows.iter().map(|r| r.z).collect();
    for (i, &z) in zs.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let rows: Vec<&GridRow> = {
            let mut rows: Vec<&GridRow> = result.rows_for(z, algorithm).collect();
            rows.sort_by_key(|r| r.m);
            rows
        };
        if rows.is_empty() {
            continue;
        }
        let ratio: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (scale.x(r.m as f64), scale.y(r.ratio)))
            .collect();
        let bound: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (scale.x(r.m as f64), scale.y(r.lower_bound)))
            .collect();
        polyline(out, &ratio, color, false);
        polyline(out, &bound, color, true);
        let ly = MARGIN_TOP + 10.0 + 18.0 * i as f64;
        let lx = x1 + 12.0;
        let _ = writeln!(
            out,
            r#"    <line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="{STROKE_WIDTH}"/><text x="{:.2}" y="{:.2}">z = {z}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0
        );
    }
    let ly = MARGIN_TOP + 10.0 + 18.0 * zs.len() as f64 + 10.0;
    let lx = x1 + 12.0;
    let _ = writeln!(
        out,
        r#"    <line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="black" stroke-width="{STROKE_WIDTH}"/><text x="{:.2}" y="{:.2}">ratio</text>"#,
        lx + 24.0,
        lx + 30.0,
        ly + 4.0
    );
    let ly = ly + 18.0;
    let _ = writeln!(
        out,
        r#"    <line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="black" stroke-width="{STROKE_WIDTH}" stroke-dasharray="6 4"/><text x="{:.2}" y="{:.2}">bound</text>"#,
        lx + 24.0,
        lx + 30.0,
        ly + 4.0
    );
}

/// One panel per algorithm, side by side: the measured ratio as a solid line
/// and `H_{m - 2^z + 1}` as a dashed line, one color per `z`.
pub fn render_svg(result: &GridResult) -> Result<String> {
    if result.is_empty() {
        return Err(Error::EmptyResult);
    }
    let algorithms: BTreeSet<Algorithm> = result.rows.iter().map(|r| r.algorithm).collect();
    let scale = PanelScale::for_result(result);
    let width = PANEL_W * algorithms.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{PANEL_H:.0}" viewBox="0 0 {width:.0} {PANEL_H:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    for (i, &alg) in algorithms.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"  <g id="panel-{alg}" transform="translate({:.0},0)">"#,
            PANEL_W * i as f64
        );
        panel(&mut out, result, alg, &scale);
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

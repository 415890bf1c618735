//! Two-panel SVG figure of a sweep: (a) the maximized functional against the
//! state parameter with the classical bound as a dot-dashed line, (b) the
//! purity. Output bytes depend only on the input records.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use tomobell_core::bell::CLASSICAL_BOUND;

use crate::error::{CliError, Result};
use crate::records::{read_csv, SweepMeta, SweepRecord, HEADER};

pub const PANEL_WIDTH: f64 = 800.0;
pub const PANEL_HEIGHT: f64 = 600.0;
pub const MARGIN: f64 = 60.0;
const X_TICKS: usize = 5;

struct Panel {
    top: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Panel {
    fn x(&self, v: f64) -> f64 {
        let (lo, hi) = self.x_range;
        MARGIN + (v - lo) / (hi - lo) * (PANEL_WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.top + PANEL_HEIGHT - MARGIN - (v - lo) / (hi - lo) * (PANEL_HEIGHT - 2.0 * MARGIN)
    }

    fn frame(&self, out: &mut String, title: &str, x_label: &str, y_label: &str, y_step: f64) {
        let (left, right) = (MARGIN, PANEL_WIDTH - MARGIN);
        let (top, bottom) = (self.top + MARGIN, self.top + PANEL_HEIGHT - MARGIN);
        let _ = writeln!(
            out,
            r#"<rect x="{left:.3}" y="{top:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="black"/>"#,
            right - left,
            bottom - top
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-size="16" text-anchor="middle">{title}</text>"#,
            PANEL_WIDTH / 2.0,
            self.top + MARGIN / 2.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-size="14" text-anchor="middle">{x_label}</text>"#,
            PANEL_WIDTH / 2.0,
            bottom + 45.0
        );
        let _ = writeln!(
            out,
            r#"<text x="15.000" y="{:.3}" font-size="14" text-anchor="middle" transform="rotate(-90 15.000 {:.3})">{y_label}</text>"#,
            (top + bottom) / 2.0,
            (top + bottom) / 2.0
        );
        let (x_lo, x_hi) = self.x_range;
        for i in 0..X_TICKS {
            let v = x_lo + (x_hi - x_lo) * i as f64 / (X_TICKS - 1) as f64;
            let px = self.x(v);
            let _ = writeln!(
                out,
                r#"<line x1="{px:.3}" y1="{bottom:.3}" x2="{px:.3}" y2="{:.3}" stroke="black"/>"#,
                bottom + 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{px:.3}" y="{:.3}" font-size="12" text-anchor="middle">{v:.2}</text>"#,
                bottom + 20.0
            );
        }
        let (y_lo, y_hi) = self.y_range;
        let n = ((y_hi - y_lo) / y_step).round() as usize;
        for i in 0..=n {
            let v = y_lo + y_step * i as f64;
            let py = self.y(v);
            let _ = writeln!(
                out,
                r#"<line x1="{:.3}" y1="{py:.3}" x2="{left:.3}" y2="{py:.3}" stroke="black"/>"#,
                left - 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.3}" y="{:.3}" font-size="12" text-anchor="end">{v:.2}</text>"#,
                left - 8.0,
                py + 4.0
            );
        }
    }

    fn polyline(&self, out: &mut String, xs: &[f64], ys: &[f64], class: &str) {
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| format!("{:.3},{:.3}", self.x(x), self.y(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
            points.join(" ")
        );
    }
}

/// Renders the figure. The x-axis label is the family parameter symbol when
/// metadata is available and the CSV column name otherwise.
pub fn render_svg(meta: Option<&SweepMeta>, records: &[SweepRecord]) -> String {
    let xs: Vec<f64> = records.iter().map(|r| r.param).collect();
    let bell: Vec<f64> = records.iter().map(|r| r.bell_max).collect();
    let purity: Vec<f64> = records.iter().map(|r| r.purity).collect();

    let mut x_range = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !x_range.0.is_finite() {
        x_range = (0.0, 1.0);
    }
    if x_range.0 == x_range.1 {
        x_range = (x_range.0 - 0.5, x_range.1 + 0.5);
    }
    let bell_top = bell.iter().cloned().fold(CLASSICAL_BOUND, f64::max);
    let y_max = (bell_top * 1.1 * 2.0).ceil() / 2.0;

    let x_label = meta.map_or(HEADER[0], |m| m.family.parameter_symbol());
    let functional = meta.map_or("Bell functional", |m| m.functional.name());

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
        w = PANEL_WIDTH,
        h = 2.0 * PANEL_HEIGHT
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{:.0}" height="{:.0}" fill="white"/>"#,
        PANEL_WIDTH,
        2.0 * PANEL_HEIGHT
    );

    let a = Panel {
        top: 0.0,
        x_range,
        y_range: (0.0, y_max),
    };
    a.frame(
        &mut out,
        &format!("(a) maximum of {functional}"),
        x_label,
        HEADER[1],
        0.5,
    );
    let bound_y = a.y(CLASSICAL_BOUND);
    let _ = writeln!(
        out,
        r#"<line class="classical-bound" x1="{:.3}" y1="{bound_y:.3}" x2="{:.3}" y2="{bound_y:.3}" stroke="black" stroke-dasharray="8,4,2,4"/>"#,
        a.x(x_range.0),
        a.x(x_range.1)
    );
    a.polyline(&mut out, &xs, &bell, "bell-max");

    let b = Panel {
        top: PANEL_HEIGHT,
        x_range,
        y_range: (0.0, 1.0),
    };
    b.frame(&mut out, "(b) purity", x_label, HEADER[3], 0.2);
    b.polyline(&mut out, &xs, &purity, "purity");

    out.push_str("</svg>\n");
    out
}

pub fn write_svg(path: &Path, meta: Option<&SweepMeta>, records: &[SweepRecord]) -> Result<()> {
    fs::write(path, render_svg(meta, records)).map_err(|e| CliError::io(path, e))
}

/// Reads a sweep CSV and writes its figure.
pub fn emit_plot(csv_path: &Path, plot_path: &Path) -> Result<()> {
    let (meta, records) = read_csv(csv_path)?;
    write_svg(plot_path, meta.as_ref(), &records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(param: f64, bell_max: f64) -> SweepRecord {
        SweepRecord {
            param,
            bell_max,
            classical_bound: 2.0,
            purity: 0.5,
            angles: [0.0; 8],
            partition1: String::new(),
            partition2: String::new(),
            separable: false,
        }
    }

    fn polyline_points<'a>(svg: &'a str, class: &str) -> Vec<&'a str> {
        let tag = format!(r#"<polyline class="{class}" points=""#);
        let start = svg.find(&tag).unwrap() + tag.len();
        let end = start + svg[start..].find('"').unwrap();
        svg[start..end].split(' ').collect()
    }

    #[test]
    fn one_point_per_record() {
        let svg = render_svg(None, &[record(0.0, 1.0), record(1.0, 2.5)]);
        assert_eq!(polyline_points(&svg, "bell-max").len(), 2);
        assert_eq!(polyline_points(&svg, "purity").len(), 2);
    }

    #[test]
    fn constant_bound_coincides_with_dashed_line() {
        let svg = render_svg(None, &[record(0.0, 2.0), record(0.5, 2.0), record(1.0, 2.0)]);
        let tag = r#"class="classical-bound" x1="60.000" y1=""#;
        let start = svg.find(tag).unwrap() + tag.len();
        let bound_y = &svg[start..start + svg[start..].find('"').unwrap()];
        for p in polyline_points(&svg, "bell-max") {
            assert_eq!(p.split(',').nth(1).unwrap(), bound_y);
        }
    }

    #[test]
    fn deterministic_output() {
        let recs = [record(0.0, 1.0), record(1.0, 2.9)];
        assert_eq!(render_svg(None, &recs), render_svg(None, &recs));
        assert!(render_svg(None, &recs).contains(r#"stroke-dasharray="8,4,2,4""#));
    }
}

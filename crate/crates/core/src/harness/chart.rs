//! Self-contained SVG line charts of sweep results, one polyline per scheme.

use std::fmt::Write as _;
use std::path::Path;

use crate::rsma::Scheme;

use super::csv::format_sig;
use super::sweep::SweepResult;
use super::HarnessError;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const Y_LABEL: &str = "Sum rate (bits/s/Hz)";

/// Data ranges padded by 5% of the span on each side. A zero span is
/// padded by 5% of the value, or by 1 when the value is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRanges {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let pad = if span > 0.0 {
        0.05 * span
    } else if lo != 0.0 {
        0.05 * lo.abs()
    } else {
        1.0
    };
    (lo - pad, hi + pad)
}

pub fn axis_ranges(result: &SweepResult) -> Option<AxisRanges> {
    if result.rows.is_empty() {
        return None;
    }
    let fold = |f: fn(&super::SweepRow) -> f64| {
        result
            .rows
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    };
    let (xl, xh) = fold(|r| r.value);
    let (yl, yh) = fold(|r| r.mean);
    let (x_min, x_max) = padded(xl, xh);
    let (y_min, y_max) = padded(yl, yh);
    Some(AxisRanges {
        x_min,
        x_max,
        y_min,
        y_max,
    })
}

fn color(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::OptRs => "#1f77b4",
        Scheme::ConvRs => "#ff7f0e",
        Scheme::Oma => "#2ca02c",
    }
}

pub fn render_svg(result: &SweepResult) -> Result<String, HarnessError> {
    let ranges = axis_ranges(result).ok_or(HarnessError::EmptyChart)?;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - ranges.x_min) / (ranges.x_max - ranges.x_min) * plot_w;
    let sy = |y: f64| TOP + (ranges.y_max - y) / (ranges.y_max - ranges.y_min) * plot_h;

    let mut svg = String::new();
    // Writing into a String cannot fail.
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
    );

    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = ranges.x_min + t * (ranges.x_max - ranges.x_min);
        let yv = ranges.y_min + t * (ranges.y_max - ranges.y_min);
        let (x, y) = (sx(xv), sy(yv));
        let bottom = TOP + plot_h;
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            bottom + 5.0,
            bottom + 20.0,
            format_sig(xv, 4)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            format_sig(yv, 4)
        );
    }

    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        result.kind.axis_label()
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{Y_LABEL}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let mut schemes: Vec<Scheme> = Vec::new();
    for row in &result.rows {
        if !schemes.contains(&row.scheme) {
            schemes.push(row.scheme);
        }
    }
    for (i, &scheme) in schemes.iter().enumerate() {
        let mut series = result.series(scheme);
        series.sort_by(|a, b| a.value.total_cmp(&b.value));
        let points: Vec<String> = series
            .iter()
            .map(|r| format!("{:.2},{:.2}", sx(r.value), sy(r.mean)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            color(scheme),
            points.join(" ")
        );
        let ly = TOP + 20.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 25.0,
            color(scheme),
            lx + 32.0,
            ly + 4.0,
            scheme.name()
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_chart(result: &SweepResult, path: &Path) -> Result<(), HarnessError> {
    let svg = render_svg(result)?;
    std::fs::write(path, svg).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::SweepKind;
    use crate::harness::sweep::{Provenance, SweepRow};

    fn result(rows: &[(Scheme, f64, f64)]) -> SweepResult {
        SweepResult {
            kind: SweepKind::Snr,
            rows: rows
                .iter()
                .map(|&(scheme, value, mean)| SweepRow {
                    scheme,
                    value,
                    mean,
                    stderr: 0.0,
                    drops: 1,
                })
                .collect(),
            provenance: Provenance {
                config_hash: "0".into(),
                seed: 0,
                version: "0".into(),
            },
        }
    }

    #[test]
    fn one_scheme_two_points() {
        let svg = render_svg(&result(&[
            (Scheme::Oma, 5.0, 1.0),
            (Scheme::Oma, 10.0, 2.0),
        ]))
        .unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        let points = svg
            .split("points=\"")
            .nth(1)
            .unwrap()
            .split('"')
            .next()
            .unwrap();
        assert_eq!(points.split(' ').count(), 2);
        assert!(svg.contains("Sum rate (bits/s/Hz)"));
        assert!(svg.contains("SNR (dB)"));
        assert!(svg.contains(">oma</text>"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let r = result(&[
            (Scheme::OptRs, 5.0, 1.5),
            (Scheme::ConvRs, 5.0, 1.2),
            (Scheme::OptRs, 10.0, 3.0),
        ]);
        assert_eq!(render_svg(&r).unwrap(), render_svg(&r).unwrap());
    }

    #[test]
    fn ranges_pad_five_percent() {
        let r = result(&[(Scheme::Oma, 5.0, 2.0), (Scheme::Oma, 25.0, 4.0)]);
        let a = axis_ranges(&r).unwrap();
        assert!((a.x_min - 4.0).abs() < 1e-12 && (a.x_max - 26.0).abs() < 1e-12);
        assert!((a.y_min - 1.9).abs() < 1e-12 && (a.y_max - 4.1).abs() < 1e-12);
        let flat = axis_ranges(&result(&[(Scheme::Oma, 5.0, 0.0)])).unwrap();
        assert_eq!(
            (flat.x_min, flat.x_max, flat.y_min, flat.y_max),
            (4.75, 5.25, -1.0, 1.0)
        );
    }

    #[test]
    fn empty_result_is_an_error() {
        assert!(matches!(
            render_svg(&result(&[])),
            Err(HarnessError::EmptyChart)
        ));
    }
}

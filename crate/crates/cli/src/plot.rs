//! Static SVG line plots.

use std::fmt::Write;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("a plot needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {0} is not finite")]
    NonFinite(usize),
}

#[derive(Debug, Clone)]
pub struct PlotLabels {
    pub title: String,
    pub x: String,
    pub y: String,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One polyline through `series`, with labelled axes and an optional
/// highlighted point. Output depends only on the inputs.
pub fn render_svg(series: &[(f64, f64)], labels: &PlotLabels, highlight: Option<usize>) -> Result<String, PlotError> {
    if series.len() < 2 {
        return Err(PlotError::TooFewPoints(series.len()));
    }
    if let Some(i) = series.iter().position(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(PlotError::NonFinite(i));
    }
    let span = |vals: Vec<f64>| {
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = span(series.iter().map(|p| p.0).collect());
    let (y0, y1) = span(series.iter().map(|p| p.1).collect());
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#, WIDTH / 2.0, escape(&labels.title));
    let (left, right, bottom, top) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>"#);
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{}</text>"#, sx(v), bottom + 16.0, trim(v));
    }
    for v in [y0, y1] {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#, left - 6.0, sy(v) + 4.0, trim(v));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#, WIDTH / 2.0, HEIGHT - 16.0, escape(&labels.x));
    let _ = writeln!(s, r#"<text x="18" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {})">{}</text>"#, HEIGHT / 2.0, HEIGHT / 2.0, escape(&labels.y));
    let points: Vec<String> = series.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let _ = writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, points.join(" "));
    for (i, &(x, y)) in series.iter().enumerate() {
        let (r, fill) = if Some(i) == highlight { (5.0, "crimson") } else { (3.0, "steelblue") };
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}"/>"#, sx(x), sy(y));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn trim(v: f64) -> String {
    let t = format!("{v:.4}");
    let t = t.trim_end_matches('0').trim_end_matches('.');
    if t.is_empty() || t == "-0" {
        "0".into()
    } else {
        t.into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> PlotLabels {
        PlotLabels { title: "t".into(), x: "q".into(), y: "b".into() }
    }

    #[test]
    fn two_points_one_polyline() {
        let svg = render_svg(&[(0.0, 1.0), (1.0, 0.5)], &labels(), None).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg, render_svg(&[(0.0, 1.0), (1.0, 0.5)], &labels(), None).unwrap());
    }

    #[test]
    fn rejects_short_series() {
        assert_eq!(render_svg(&[], &labels(), None), Err(PlotError::TooFewPoints(0)));
        assert_eq!(render_svg(&[(1.0, 1.0)], &labels(), None), Err(PlotError::TooFewPoints(1)));
        assert_eq!(render_svg(&[(1.0, 1.0), (2.0, f64::NAN)], &labels(), None), Err(PlotError::NonFinite(1)));
    }

    #[test]
    fn flat_series_renders() {
        let svg = render_svg(&[(1.0, 2.0), (2.0, 2.0), (3.0, 2.0)], &labels(), Some(1)).unwrap();
        assert!(svg.contains("crimson"));
    }
}

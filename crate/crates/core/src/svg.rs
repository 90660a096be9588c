//! Static SVG renderings of the CSV data: region polygons, map rasters and
//! line plots. Purely presentational.

use std::fmt::Write;

use crate::gap::GapConditionMap;
use crate::model::RatePair;
use crate::regime::{RegimeLabel, RegimeMap};
use crate::region::RateRegion;

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 56.0;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Axis-aligned data window mapped onto the plot area.
#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        let span = |it: &mut dyn Iterator<Item = f64>| {
            it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
        };
        let (mut x0, mut x1) = span(&mut xs.clone());
        let (mut y0, mut y1) = span(&mut ys.clone());
        if !(x0.is_finite() && x1.is_finite()) {
            (x0, x1) = (0.0, 1.0);
        }
        if !(y0.is_finite() && y1.is_finite()) {
            (y0, y1) = (0.0, 1.0);
        }
        if x1 - x0 < 1e-12 {
            x1 = x0 + 1.0;
        }
        if y1 - y0 < 1e-12 {
            y1 = y0 + 1.0;
        }
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * MARGIN)
    }
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (l, r, t, b) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    let _ = writeln!(out, r#"<path d="M{l},{t} L{l},{b} L{r},{b}" fill="none" stroke="black"/>"#);
    let _ = writeln!(out, r#"<text x="{l}" y="{}" text-anchor="start">{:.3}</text>"#, b + 16.0, f.x0);
    let _ = writeln!(out, r#"<text x="{r}" y="{}" text-anchor="end">{:.3}</text>"#, b + 16.0, f.x1);
    let _ = writeln!(out, r#"<text x="{}" y="{b}" text-anchor="end">{:.3}</text>"#, l - 4.0, f.y0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, l - 4.0, t + 4.0, f.y1);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(xlabel));
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    );
}

fn legend(out: &mut String, entries: &[(&str, &str)]) {
    for (i, (label, color)) in entries.iter().enumerate() {
        let y = MARGIN + 16.0 * i as f64;
        let x = W - MARGIN - 150.0;
        let _ = writeln!(out, r#"<rect x="{x}" y="{}" width="10" height="10" fill="{color}"/>"#, y - 9.0);
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 14.0, escape(label));
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Region outlines in the `(R1, R2)` plane, plus labelled marker points.
pub fn regions(title: &str, layers: &[(&str, &RateRegion)], markers: &[(&str, RatePair)]) -> String {
    let all = || {
        layers
            .iter()
            .flat_map(|(_, r)| r.vertices().iter().copied())
            .chain(markers.iter().map(|(_, p)| *p))
            .chain(std::iter::once(RatePair::ORIGIN))
    };
    let pts: Vec<RatePair> = all().collect();
    let f = Frame::fit(pts.iter().map(|p| p.r1()), pts.iter().map(|p| p.r2()));
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, &f, "R1 [bits]", "R2 [bits]");
    let mut keys = Vec::new();
    for (i, (label, region)) in layers.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> =
            region.vertices().iter().map(|v| format!("{:.2},{:.2}", f.px(v.r1()), f.py(v.r2()))).collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.12" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        keys.push((*label, color));
    }
    for (label, p) in markers {
        let (x, y) = (f.px(p.r1()), f.py(p.r2()));
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 5.0, y - 5.0, escape(label));
    }
    legend(&mut out, &keys);
    out.push_str("</svg>\n");
    out
}

/// Named series of `(x, y)` points drawn as polylines.
pub fn lines(title: &str, xlabel: &str, ylabel: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let f = Frame::fit(
        series.iter().flat_map(|(_, s)| s.iter().map(|p| p.0)),
        series.iter().flat_map(|(_, s)| s.iter().map(|p| p.1)),
    );
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, &f, xlabel, ylabel);
    let mut keys = Vec::new();
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y))).collect();
        let _ =
            writeln!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "));
        keys.push((*label, color));
    }
    legend(&mut out, &keys);
    out.push_str("</svg>\n");
    out
}

fn raster<T: Copy>(
    title: &str,
    a_values: &[f64],
    b_values: &[f64],
    cells: &[T],
    color: impl Fn(T) -> &'static str,
    keys: &[(&str, &str)],
) -> String {
    let f = Frame::fit(a_values.iter().copied(), b_values.iter().copied());
    let (na, nb) = (a_values.len(), b_values.len());
    let cw = (W - 2.0 * MARGIN) / na as f64;
    let ch = (H - 2.0 * MARGIN) / nb as f64;
    let mut out = String::new();
    open(&mut out, title);
    for (k, &cell) in cells.iter().enumerate() {
        let (i, j) = (k / na, k % na);
        let x = MARGIN + j as f64 * cw;
        let y = H - MARGIN - (i + 1) as f64 * ch;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            cw + 0.05,
            ch + 0.05,
            color(cell)
        );
    }
    axes(&mut out, &f, "a", "|b|");
    legend(&mut out, keys);
    out.push_str("</svg>\n");
    out
}

/// Regime map with one color per cell, by precedence: degraded, very
/// strong, primary-decodes-cognitive, weak, none.
pub fn regime_map(title: &str, map: &RegimeMap) -> String {
    fn color(l: RegimeLabel) -> &'static str {
        if l.degraded {
            "#000000"
        } else if l.very_strong {
            "#ff7f0e"
        } else if l.primary_decodes_cognitive {
            "#1f3a93"
        } else if l.weak {
            "#a6d8f0"
        } else {
            "#f2f2f2"
        }
    }
    raster(
        title,
        &map.a_values,
        &map.b_values,
        &map.cells,
        color,
        &[
            ("weak", "#a6d8f0"),
            ("very strong", "#ff7f0e"),
            ("primary decodes cognitive", "#1f3a93"),
            ("degraded", "#000000"),
        ],
    )
}

pub fn gap_map(title: &str, map: &GapConditionMap) -> String {
    raster(
        title,
        &map.a_values,
        &map.b_values,
        &map.cells,
        |c| if c { "#2ca02c" } else { "#f2f2f2" },
        &[("condition holds", "#2ca02c")],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Interval;
    use crate::model::RateConstraintSet;
    use crate::region::pentagon_to_polygon;

    #[test]
    fn region_plot_is_well_formed() {
        let r = pentagon_to_polygon(&RateConstraintSet::new(1.0, 2.0, 2.5).unwrap());
        let s = regions("a <b>", &[("outer", &r)], &[("C", RatePair::new(1.0, 1.5).unwrap())]);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert_eq!(s.matches("<polygon").count(), 1);
        assert!(s.contains("a &lt;b&gt;"));
    }

    #[test]
    fn raster_has_one_rect_per_cell() {
        let m = crate::regime::regime_map(
            10.0,
            10.0,
            Interval::new(-5.0, 5.0).unwrap(),
            Interval::new(0.0, 5.0).unwrap(),
            3,
        )
        .unwrap();
        let s = regime_map("map", &m);
        // 9 cells, the background and 4 legend swatches.
        assert_eq!(s.matches("<rect").count(), 9 + 1 + 4);
    }

    #[test]
    fn degenerate_series_do_not_produce_nan() {
        let s = lines("flat", "x", "y", &[("s", vec![(1.0, 1.0), (1.0, 1.0)])]);
        assert!(!s.contains("NaN"));
        let s = lines("empty", "x", "y", &[]);
        assert!(!s.contains("NaN"));
    }
}

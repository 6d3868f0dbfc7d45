//! Text and SVG drawings of a Newton polygon.
//!
//! Coordinates are drawn in floating point; every label is the exact value.
//! Polygons over `Z^r` with `r > 1` are plotted by their first component.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::polygon::NewtonPolygon;
use crate::valuation::Value;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RenderMode {
    Ascii,
    Svg,
}

pub fn render_polygon(poly: &NewtonPolygon, mode: RenderMode) -> String {
    match mode {
        RenderMode::Ascii => render_ascii(poly),
        RenderMode::Svg => render_svg(poly),
    }
}

const MAX_ROWS: i64 = 24;
const COL: usize = 4;

fn height(v: &Value) -> f64 {
    v.components()[0].to_f64().unwrap_or(0.0)
}

fn finite_points(poly: &NewtonPolygon) -> Vec<(usize, f64)> {
    poly.points
        .iter()
        .filter_map(|p| p.val.finite().map(|v| (p.abscissa, height(v))))
        .collect()
}

fn infinite_abscissas(poly: &NewtonPolygon) -> Vec<usize> {
    poly.points
        .iter()
        .filter(|p| p.val.is_infinite())
        .map(|p| p.abscissa)
        .collect()
}

fn is_vertex(poly: &NewtonPolygon, i: usize) -> bool {
    poly.vertices.iter().any(|v| v.abscissa == i)
}

/// Height of the lower boundary at abscissa `x`, if `x` lies under the polygon.
fn boundary_at(poly: &NewtonPolygon, x: f64) -> Option<f64> {
    let vert = |i: usize| {
        poly.vertices
            .iter()
            .find(|v| v.abscissa == i)
            .and_then(|v| v.val.finite())
            .map(height)
    };
    poly.edges.iter().find_map(|e| {
        let (a, b) = (e.from as f64, e.to as f64);
        (a <= x && x <= b).then(|| {
            let (ya, yb) = (vert(e.from).unwrap(), vert(e.to).unwrap());
            ya + (yb - ya) * (x - a) / (b - a)
        })
    })
}

fn legend(poly: &NewtonPolygon, out: &mut String) {
    if poly.edges.is_empty() {
        out.push_str("no edges\n");
    } else {
        out.push_str("edges:\n");
        for e in &poly.edges {
            let _ = writeln!(out, "  P{} -> P{}  slope {}", e.from, e.to, e.slope);
        }
    }
    let inf = infinite_abscissas(poly);
    if !inf.is_empty() {
        let list: Vec<String> = inf.iter().map(|i| format!("P{i}")).collect();
        let _ = writeln!(out, "off-chart (infinite valuation): {}", list.join(", "));
    }
}

fn render_ascii(poly: &NewtonPolygon) -> String {
    let pts = finite_points(poly);
    let lo = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).floor() as i64;
    let hi = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).ceil() as i64;
    let step = ((hi - lo) as f64 / MAX_ROWS as f64).ceil().max(1.0) as i64;
    let rows = ((hi - lo) / step + 1) as usize;
    let row_of = |y: f64| (((y - lo as f64) / step as f64).round().max(0.0) as usize).min(rows - 1);
    let cols = COL * poly.n + 1;

    let mut grid = vec![vec![' '; cols]; rows];
    let trace: Vec<(usize, usize)> = (0..cols)
        .filter_map(|c| boundary_at(poly, c as f64 / COL as f64).map(|y| (row_of(y), c)))
        .collect();
    for (r, c) in trace {
        grid[r][c] = '.';
    }
    for &(i, y) in &pts {
        grid[row_of(y)][COL * i] = if is_vertex(poly, i) { 'o' } else { '*' };
    }

    let label_w = lo
        .to_string()
        .len()
        .max((lo + step * (rows as i64 - 1)).to_string().len());
    let mut out = String::new();
    let _ = writeln!(out, "Newton polygon (n = {})", poly.n);
    for r in (0..rows).rev() {
        let line: String = grid[r].iter().collect();
        let _ = writeln!(out, "{:>w$} |{}", lo + step * r as i64, line.trim_end(), w = label_w);
    }
    let axis: String = (0..cols)
        .map(|c| if c > 0 && c % COL == 0 { '+' } else { '-' })
        .collect();
    let _ = writeln!(out, "{:>w$} +{}", "", axis, w = label_w);
    let mut ticks = String::new();
    for i in 0..=poly.n {
        let _ = write!(ticks, "{:<w$}", i, w = COL);
    }
    let _ = writeln!(out, "{:>w$}  {}", "", ticks.trim_end(), w = label_w);
    legend(poly, &mut out);
    out
}

fn render_svg(poly: &NewtonPolygon) -> String {
    const MARGIN: f64 = 60.0;
    const UNIT_X: f64 = 60.0;
    const PLOT_H: f64 = 320.0;
    let pts = finite_points(poly);
    let lo = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).min(0.0);
    let hi = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).max(lo + 1.0);
    let width = 2.0 * MARGIN + UNIT_X * poly.n as f64;
    let canvas_h = 2.0 * MARGIN + PLOT_H;
    let sx = |x: f64| MARGIN + UNIT_X * x;
    let sy = |y: f64| MARGIN + PLOT_H * (hi - y) / (hi - lo);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{canvas_h:.0}" viewBox="0 0 {width:.0} {canvas_h:.0}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(out, r#"<title>Newton polygon, n = {}</title>"#, poly.n);
    let (x0, y0) = (sx(0.0), sy(lo));
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{:.1}" y2="{y0:.1}" stroke="gray"/>"#,
        sx(poly.n as f64)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x0:.1}" y2="{:.1}" stroke="gray"/>"#,
        sy(hi)
    );
    for i in 0..=poly.n {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{i}</text>"#,
            sx(i as f64),
            y0 + 18.0
        );
    }

    let coords: Vec<String> = poly
        .vertices
        .iter()
        .filter_map(|v| {
            v.val
                .finite()
                .map(|y| format!("{:.1},{:.1}", sx(v.abscissa as f64), sy(height(y))))
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        coords.join(" ")
    );
    for e in &poly.edges {
        let mx = (e.from + e.to) as f64 / 2.0;
        let my = boundary_at(poly, mx).unwrap_or(lo);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="blue">{}</text>"#,
            sx(mx),
            sy(my) - 8.0,
            e.slope
        );
    }
    for p in &poly.points {
        match p.val.finite() {
            Some(v) => {
                let fill = if is_vertex(poly, p.abscissa) { "black" } else { "white" };
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="{fill}" stroke="black"><title>P{} = ({}, {})</title></circle>"#,
                    sx(p.abscissa as f64),
                    sy(height(v)),
                    p.abscissa,
                    p.abscissa,
                    v
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="gray">inf</text>"#,
                    sx(p.abscissa as f64),
                    MARGIN / 2.0
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

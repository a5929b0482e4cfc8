//! Static SVG plot of a scenario and planned trajectories.
//!
//! All coordinates are printed with fixed precision and elements are emitted
//! in a fixed order, so identical input gives byte-identical output.

use std::fmt::Write as _;

use crate::geometry::Point;
use crate::plan::{Method, PlanResult};
use crate::scenario::Scenario;

const WIDTH_PX: f64 = 800.0;
const PAD_PX: f64 = 40.0;

fn color(method: Method) -> &'static str {
    match method {
        Method::Proposed => "#d62728",
        Method::Optimal => "#2ca02c",
        Method::Straight => "#7f7f7f",
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    min: Point,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(s: &Scenario, results: &[PlanResult], d_bar: f64) -> Self {
        let r = if d_bar.is_finite() && d_bar > 0.0 { d_bar } else { 0.0 };
        let mut lo = Point::new(s.u0.x.min(s.uf.x), s.u0.y.min(s.uf.y));
        let mut hi = Point::new(s.u0.x.max(s.uf.x), s.u0.y.max(s.uf.y));
        let mut grow = |p: Point, margin: f64| {
            lo = Point::new(lo.x.min(p.x - margin), lo.y.min(p.y - margin));
            hi = Point::new(hi.x.max(p.x + margin), hi.y.max(p.y + margin));
        };
        for &g in &s.gbs_positions {
            grow(g, r);
        }
        for res in results {
            for &p in &res.trajectory.waypoints {
                grow(p, 0.0);
            }
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1.0);
        let scale = (WIDTH_PX - 2.0 * PAD_PX) / span;
        let height = (hi.y - lo.y) * scale + 2.0 * PAD_PX;
        Frame { min: Point::new(lo.x, hi.y), scale, height }
    }

    /// Screen position; y grows downward.
    fn map(&self, p: Point) -> (f64, f64) {
        (PAD_PX + (p.x - self.min.x) * self.scale, PAD_PX + (self.min.y - p.y) * self.scale)
    }
}

/// GBS markers with labels, coverage disks of radius `d_bar`, start and end
/// markers, one polyline per feasible result coloured by method, and its
/// handover points. Infeasible results are listed in the legend only.
pub fn render_svg(s: &Scenario, results: &[PlanResult], d_bar: f64) -> String {
    let f = Frame::new(s, results, d_bar);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
        w = WIDTH_PX,
        h = f.height.ceil()
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let _ = writeln!(out, r##"<g id="coverage" fill="#1f77b4" fill-opacity="0.08" stroke="#1f77b4" stroke-opacity="0.35">"##);
    if d_bar.is_finite() && d_bar > 0.0 {
        for &g in &s.gbs_positions {
            let (x, y) = f.map(g);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}"/>"#, d_bar * f.scale);
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="gbs" font-family="sans-serif" font-size="11">"#);
    for (i, &g) in s.gbs_positions.iter().enumerate() {
        let (x, y) = f.map(g);
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="#1f77b4"/><text x="{:.2}" y="{:.2}">G{}</text>"##,
            x - 4.0,
            y - 4.0,
            x + 6.0,
            y - 6.0,
            i + 1
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="trajectories" fill="none" stroke-width="2">"#);
    for res in results.iter().filter(|r| r.is_feasible()) {
        let pts: Vec<String> = res
            .trajectory
            .waypoints
            .iter()
            .map(|&p| {
                let (x, y) = f.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="{m}" stroke="{c}" points="{p}"/>"#,
            m = res.method,
            c = color(res.method),
            p = pts.join(" ")
        );
        let n = res.trajectory.waypoints.len();
        if n > 2 {
            for &h in &res.trajectory.waypoints[1..n - 1] {
                let (x, y) = f.map(h);
                let _ = writeln!(
                    out,
                    r#"<circle class="handover {m}" cx="{x:.2}" cy="{y:.2}" r="3" fill="{c}"/>"#,
                    m = res.method,
                    c = color(res.method)
                );
            }
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="endpoints" font-family="sans-serif" font-size="12">"#);
    for (label, p) in [("U0", s.u0), ("UF", s.uf)] {
        let (x, y) = f.map(p);
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="black"/><text x="{:.2}" y="{:.2}">{label}</text>"#,
            x + 7.0,
            y + 4.0
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="legend" font-family="sans-serif" font-size="12">"#);
    for (k, res) in results.iter().enumerate() {
        let y = 18.0 + 16.0 * k as f64;
        let text = if res.is_feasible() {
            format!("{}: T = {:.2} s", res.method, res.total_time)
        } else {
            format!("{}: infeasible", res.method)
        };
        let _ = writeln!(
            out,
            r#"<line x1="10" y1="{:.0}" x2="30" y2="{:.0}" stroke="{c}" stroke-width="2"/><text x="36" y="{:.0}">{}</text>"#,
            y - 4.0,
            y - 4.0,
            y,
            escape(&text),
            c = color(res.method)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

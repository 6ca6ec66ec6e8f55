//! Deterministic SVG phase portraits for two-dimensional problems: an
//! arrow field sampled on a grid from the tangent vector field, plus level
//! sets of each computed first integral traced by marching squares. No
//! timestamps, fixed float formatting, elements emitted in a fixed order.

use foliation_core::diffmod::VectorField;
use foliation_core::poly::Poly;
use foliation_core::quotient::small_rationals;
use std::fmt::Write as _;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

struct Mapper {
    w: Window,
}

impl Mapper {
    fn sx(&self, x: f64) -> f64 {
        MARGIN + (x - self.w.x0) / (self.w.x1 - self.w.x0) * (SIZE - 2.0 * MARGIN)
    }

    fn sy(&self, y: f64) -> f64 {
        // SVG y grows downward
        SIZE - MARGIN - (y - self.w.y0) / (self.w.y1 - self.w.y0) * (SIZE - 2.0 * MARGIN)
    }
}

fn f(v: f64) -> String {
    format!("{v:.4}")
}

/// Marching-squares segments of the zero set of `p` on the window grid.
fn level_segments(
    p: &Poly,
    window: &Window,
    density: usize,
) -> Vec<((f64, f64), (f64, f64))> {
    let n = density.max(2);
    let dx = (window.x1 - window.x0) / n as f64;
    let dy = (window.y1 - window.y0) / n as f64;
    let value = |i: usize, j: usize| -> f64 {
        let x = window.x0 + i as f64 * dx;
        let y = window.y0 + j as f64 * dy;
        p.eval_f64(&[x, y]).unwrap_or(f64::NAN)
    };
    let mut segments = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let corners = [
                (i, j),
                (i + 1, j),
                (i + 1, j + 1),
                (i, j + 1),
            ];
            let vals: Vec<f64> = corners.iter().map(|&(a, b)| value(a, b)).collect();
            if vals.iter().any(|v| v.is_nan()) {
                continue;
            }
            // interpolated zero crossings on the cell edges
            let mut pts: Vec<(f64, f64)> = Vec::new();
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                let (va, vb) = (vals[a], vals[b]);
                if (va > 0.0 && vb > 0.0) || (va < 0.0 && vb < 0.0) || va == vb {
                    continue;
                }
                let t = va / (va - vb);
                if !(0.0..=1.0).contains(&t) {
                    continue;
                }
                let (xa, ya) = (
                    window.x0 + corners[a].0 as f64 * dx,
                    window.y0 + corners[a].1 as f64 * dy,
                );
                let (xb, yb) = (
                    window.x0 + corners[b].0 as f64 * dx,
                    window.y0 + corners[b].1 as f64 * dy,
                );
                pts.push((xa + t * (xb - xa), ya + t * (yb - ya)));
            }
            if pts.len() >= 2 {
                segments.push((pts[0], pts[1]));
            }
        }
    }
    segments
}

/// Renders the portrait. `field` may be `None` for an arrowless grid.
pub fn render(
    field: Option<&VectorField>,
    integrals: &[Poly],
    window: Window,
    density: usize,
) -> String {
    let m = Mapper { w: window };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        SIZE as u32
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{0}" height="{0}" fill="white"/>"#,
        SIZE as u32
    );
    // axes, when the window contains them
    if m.w.x0 < 0.0 && m.w.x1 > 0.0 {
        let x = f(m.sx(0.0));
        let _ = writeln!(
            svg,
            r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#888" stroke-width="1"/>"##,
            f(MARGIN),
            f(SIZE - MARGIN)
        );
    }
    if m.w.y0 < 0.0 && m.w.y1 > 0.0 {
        let y = f(m.sy(0.0));
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#888" stroke-width="1"/>"##,
            f(MARGIN),
            f(SIZE - MARGIN)
        );
    }
    // level sets of each first integral at the sampled rational values
    let mut levels = small_rationals(6);
    levels.push(foliation_core::poly::coef_int(0));
    for (gi, g) in integrals.iter().enumerate() {
        for (li, level) in levels.iter().enumerate() {
            let shifted = g - &Poly::constant(g.ring(), level.clone());
            let segments = level_segments(&shifted, &m.w, density * 4);
            for ((xa, ya), (xb, yb)) in segments {
                let _ = writeln!(
                    svg,
                    r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#5a8f3c" stroke-width="1" class="level g{gi} l{li}"/>"##,
                    f(m.sx(xa)),
                    f(m.sy(ya)),
                    f(m.sx(xb)),
                    f(m.sy(yb))
                );
            }
        }
    }
    // arrow field
    if let Some(v) = field {
        let n = density.max(2);
        let dx = (m.w.x1 - m.w.x0) / n as f64;
        let dy = (m.w.y1 - m.w.y0) / n as f64;
        let scale = 0.35 * dx.min(dy);
        for i in 0..=n {
            for j in 0..=n {
                let x = m.w.x0 + i as f64 * dx;
                let y = m.w.y0 + j as f64 * dy;
                let (Some(vx), Some(vy)) = (
                    v.coeff(0).eval_f64(&[x, y]),
                    v.coeff(1).eval_f64(&[x, y]),
                ) else {
                    continue;
                };
                let norm = (vx * vx + vy * vy).sqrt();
                if norm < 1e-12 {
                    continue;
                }
                let (ux, uy) = (vx / norm * scale, vy / norm * scale);
                let (x2, y2) = (x + ux, y + uy);
                // arrow head
                let (hx, hy) = (x2 - 0.35 * ux, y2 - 0.35 * uy);
                let (px, py) = (-uy * 0.18, ux * 0.18);
                let _ = writeln!(
                    svg,
                    r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#334" stroke-width="1"/>"##,
                    f(m.sx(x)),
                    f(m.sy(y)),
                    f(m.sx(x2)),
                    f(m.sy(y2))
                );
                let _ = writeln!(
                    svg,
                    r##"<polygon points="{},{} {},{} {},{}" fill="#334"/>"##,
                    f(m.sx(x2)),
                    f(m.sy(y2)),
                    f(m.sx(hx + px)),
                    f(m.sy(hy + py)),
                    f(m.sx(hx - px)),
                    f(m.sy(hy - py))
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

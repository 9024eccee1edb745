//! Static SVG rendering of a path collection.

use std::fmt::Write as _;

use sixv_core::signature::grid_from_rows;
use sixv_core::{extract_holes, Hole, PathCollection};

use crate::Result;

const UNIT: i64 = 16;
const MARGIN: i64 = 16;

/// Lattice polylines of the paths, one per path, in the order they enter
/// from the left boundary. At a vertex with two incoming paths the one from
/// the left continues up and the one from below continues right, so paths
/// touch but never cross.
pub fn trace_paths(w: &PathCollection) -> Vec<Vec<(i64, i64)>> {
    let g = grid_from_rows(w);
    let n = w.n() as i64;
    let mut paths = Vec::with_capacity(w.n());
    for start in 1..=n {
        let mut pts = vec![(-1, start), (0, start)];
        let (mut x, mut y, mut from_left) = (0i64, start, true);
        loop {
            let c = g.at(x as usize, y as usize);
            let up = if from_left { c.i2 == 1 } else { c.j2 == 0 };
            if up {
                if y == n {
                    pts.push((x, y + 1));
                    break;
                }
                y += 1;
                from_left = false;
            } else {
                x += 1;
                from_left = true;
            }
            pts.push((x, y));
        }
        paths.push(simplify(pts));
    }
    paths
}

fn simplify(pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.len() >= 2 {
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            if (b.0 - a.0) * (p.1 - b.1) == (b.1 - a.1) * (p.0 - b.0) {
                out.pop();
            }
        }
        out.push(p);
    }
    out
}

/// SVG of `w`; when `holes_k` is set, circles mark the holes `Y^j_i`, `j ≤ k`.
pub fn render_svg(w: &PathCollection, holes_k: Option<usize>) -> Result<String> {
    let n = w.n() as i64;
    let width_cols = w.width() + 2;
    let px = |x: i64| MARGIN + (x + 1) * UNIT;
    let py = |y: i64| MARGIN + (n + 1 - y) * UNIT;
    let (wpx, hpx) = (2 * MARGIN + (width_cols + 1) * UNIT, 2 * MARGIN + (n + 1) * UNIT);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{wpx}" height="{hpx}" viewBox="0 0 {wpx} {hpx}">"#).expect("string write");
    writeln!(s, r#"<rect width="{wpx}" height="{hpx}" fill="white"/>"#).expect("string write");
    s.push_str(r##"<g stroke="#dddddd" stroke-width="1">"##);
    s.push('\n');
    for y in 1..=n {
        writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, px(0), py(y), px(width_cols - 1), py(y)).expect("string write");
    }
    for x in 0..width_cols {
        writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, px(x), py(1), px(x), py(n)).expect("string write");
    }
    s.push_str("</g>\n");
    s.push_str(r##"<g fill="none" stroke="#1f4e9c" stroke-width="2" stroke-linejoin="round">"##);
    s.push('\n');
    for path in trace_paths(w) {
        let pts: Vec<String> = path.iter().map(|&(x, y)| format!("{},{}", px(x), py(y))).collect();
        writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" ")).expect("string write");
    }
    s.push_str("</g>\n");
    if let Some(k) = holes_k {
        let h = extract_holes(w, k.min(w.n()))?;
        s.push_str(r##"<g fill="white" stroke="#c0392b" stroke-width="2">"##);
        s.push('\n');
        for j in 1..=h.k() {
            for i in 1..=j {
                if let Hole::At(y) = h.get(j, i) {
                    writeln!(s, r#"<circle cx="{}" cy="{}" r="4"/>"#, px(j as i64) + UNIT / 2, py(y as i64)).expect("string write");
                }
            }
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

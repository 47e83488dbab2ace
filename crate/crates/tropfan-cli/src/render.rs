//! SVG pictures of rank-2 fans and colorings.
//!
//! Floating point is used only for drawing coordinates; which lattice points
//! appear, and in which color, is decided exactly.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_traits::ToPrimitive;
use tropfan::{Cone, StackyCone, Sublattice};

use crate::oracle::box_points;

const SIZE: f64 = 480.0;
const LEGEND_LINE: f64 = 20.0;

/// Colors for lattices other than the full one, chosen by a hash of the
/// canonical basis so a lattice keeps its color across pictures.
const PALETTE: [&str; 6] = ["#d9480f", "#2b8a3e", "#7048e8", "#c2255c", "#e67700", "#0b7285"];
const FULL: &str = "#1f4e9c";

pub fn color_of(l: &Sublattice) -> &'static str {
    if l.is_full() {
        return FULL;
    }
    // FNV-1a
    let mut h: u64 = 0xcbf29ce484222325;
    for b in l.to_string().bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    PALETTE[(h % PALETTE.len() as u64) as usize]
}

/// Regions to draw. Full-dimensional `cells` are shaded in their lattice's
/// color; a lattice point of `[-radius, radius]^2` is drawn in the color of
/// the first full-dimensional cell containing it in its lattice, or in black
/// if only a lower-dimensional cell does.
pub struct Picture<'a> {
    pub cells: &'a [StackyCone],
    pub rays: Vec<Cone>,
    pub radius: i64,
}

fn f(x: &num_bigint::BigInt) -> f64 {
    x.to_f64().expect("coordinates fit in f64")
}

/// Clip the square `[-w, w]^2` to the half-planes `h·x >= 0`.
fn clip(w: f64, facets: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut poly = vec![[-w, -w], [w, -w], [w, w], [-w, w]];
    for h in facets {
        let val = |p: &[f64; 2]| h[0] * p[0] + h[1] * p[1];
        let mut out = Vec::new();
        for i in 0..poly.len() {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            let (va, vb) = (val(&a), val(&b));
            if va >= 0.0 {
                out.push(a);
            }
            if (va >= 0.0) != (vb >= 0.0) {
                let t = va / (va - vb);
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        poly = out;
    }
    poly
}

pub fn render(p: &Picture<'_>) -> String {
    let r = p.radius;
    let w = r as f64 + 0.5;
    let scale = SIZE / (2.0 * w);
    let px = |x: f64| (x + w) * scale;
    let py = |y: f64| (w - y) * scale;

    let mut lattices: BTreeMap<&Sublattice, &str> = BTreeMap::new();
    for c in p.cells.iter().filter(|c| c.cone.is_full_dimensional()) {
        lattices.insert(&c.lattice, color_of(&c.lattice));
    }
    let height = SIZE + LEGEND_LINE * (lattices.len() as f64 + 0.5);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{height:.0}" viewBox="0 0 {SIZE:.0} {height:.0}">"#
    );
    s.push_str(concat!(
        r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto">"#,
        r##"<path d="M0,0 L10,5 L0,10 z" fill="#222"/></marker></defs>"##,
        "\n"
    ));
    let _ = writeln!(s, r#"<rect width="{SIZE:.0}" height="{height:.0}" fill="white"/>"#);

    for c in p.cells.iter().filter(|c| c.cone.is_full_dimensional()) {
        let facets: Vec<[f64; 2]> = c.cone.facets().iter().map(|h| [f(&h[0]), f(&h[1])]).collect();
        let poly = clip(w, &facets);
        let pts: Vec<String> = poly.iter().map(|q| format!("{:.2},{:.2}", px(q[0]), py(q[1]))).collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.15" stroke="none"/>"#,
            pts.join(" "),
            color_of(&c.lattice)
        );
    }

    for ray in &p.rays {
        let v = &ray.rays()[0];
        let (x, y) = (f(&v[0]), f(&v[1]));
        let t = (w - 0.25) / x.abs().max(y.abs());
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#222" stroke-width="1.5" marker-end="url(#arrow)"/>"##,
            px(0.0),
            py(0.0),
            px(x * t),
            py(y * t)
        );
    }

    for q in box_points(2, r) {
        let holders: Vec<&StackyCone> =
            p.cells.iter().filter(|c| c.cone.contains(&q) && c.lattice.member(&q).unwrap_or(false)).collect();
        let color = match holders.iter().find(|c| c.cone.is_full_dimensional()) {
            Some(c) => color_of(&c.lattice),
            None if !holders.is_empty() => "#000000",
            None => continue,
        };
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(f(&q[0])), py(f(&q[1])));
    }

    for (i, (l, color)) in lattices.iter().enumerate() {
        let y = SIZE + LEGEND_LINE * (i as f64 + 1.0);
        let _ = writeln!(s, r#"<rect x="10" y="{:.0}" width="12" height="12" fill="{color}"/>"#, y - 11.0);
        let label = l.to_string().replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(s, r#"<text x="30" y="{y:.0}" font-family="monospace" font-size="13">{label}</text>"#);
    }
    s.push_str("</svg>\n");
    s
}

use std::collections::HashMap;
use std::fmt::Write as _;

use potts_core::bifurcation::SurfacePatch;
use potts_core::{PotentialGrid, StationaryKind};

/// OBJ-style text: one object per sheet, vertices `p q β`, faces from the
/// barycentric lattice. Triangles with a vertex above `beta_max` are dropped.
pub fn surface_obj(patches: &[&SurfacePatch], beta_max: f64) -> String {
    let mut out = String::from("# potts-landscape v1 surface mesh: vertices are (p, q, beta)\n");
    let mut base = 0usize;
    for patch in patches {
        let _ = writeln!(out, "o F{}", patch.sign.as_str());
        let mut index = HashMap::new();
        for s in patch.samples.iter().filter(|s| s.beta <= beta_max) {
            let pq = s.alpha.to_pq();
            index.insert(s.lattice, base + index.len() + 1);
            let _ = writeln!(out, "v {:?} {:?} {:?}", pq.p, pq.q, s.beta);
        }
        let mut keys: Vec<_> = index.keys().copied().collect();
        keys.sort_unstable();
        for (i, j) in keys {
            let tris = [
                [(i, j), (i + 1, j), (i, j + 1)],
                [(i + 1, j), (i + 1, j + 1), (i, j + 1)],
            ];
            for tri in tris {
                if let (Some(a), Some(b), Some(c)) = (index.get(&tri[0]), index.get(&tri[1]), index.get(&tri[2])) {
                    let _ = writeln!(out, "f {a} {b} {c}");
                }
            }
        }
        base += index.len();
    }
    out
}

fn shade(t: f64) -> String {
    // Dark blue at the lowest value to pale yellow at the highest.
    let lo = [8.0, 48.0, 107.0];
    let hi = [255.0, 255.0, 217.0];
    let t = t.clamp(0.0, 1.0);
    let c: Vec<u8> = (0..3).map(|k| (lo[k] + t * (hi[k] - lo[k])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Filled triangles over the spin triangle in `(x, y)` coordinates, shaded
/// by free energy, with the stationary points marked.
pub fn potential_svg(grid: &PotentialGrid) -> String {
    let (w, h) = (640.0, 640.0 * 1.6 / 1.8);
    let map = |x: f64, y: f64| ((x + 0.9) / 1.8 * w, (1.05 - y) / 1.6 * h);
    let values: HashMap<(usize, usize), (f64, (f64, f64))> = grid
        .samples
        .iter()
        .map(|s| {
            let xy = s.nu.to_xy();
            (s.lattice, (s.value, map(xy.x, xy.y)))
        })
        .collect();
    let lo = grid.samples.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
    let hi = grid.samples.iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="#ffffff"/>"##);
    let _ = writeln!(out, r#"<g stroke="none">"#);
    let mut keys: Vec<_> = values.keys().copied().collect();
    keys.sort_unstable();
    for (i, j) in keys {
        for tri in [[(i, j), (i + 1, j), (i, j + 1)], [(i + 1, j), (i + 1, j + 1), (i, j + 1)]] {
            let pts: Option<Vec<_>> = tri.iter().map(|k| values.get(k)).collect();
            let Some(pts) = pts else { continue };
            let mean = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
            let _ = writeln!(
                out,
                r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{}"/>"#,
                pts[0].1 .0,
                pts[0].1 .1,
                pts[1].1 .0,
                pts[1].1 .1,
                pts[2].1 .0,
                pts[2].1 .1,
                shade((mean - lo) / span)
            );
        }
    }
    let _ = writeln!(out, "</g>");
    let (ax, ay) = map(0.0, 1.0);
    let (bx, by) = map(-0.866_025_403_784_438_6, -0.5);
    let (cx, cy) = map(0.866_025_403_784_438_6, -0.5);
    let _ = writeln!(
        out,
        r##"<polygon points="{ax:.2},{ay:.2} {bx:.2},{by:.2} {cx:.2},{cy:.2}" fill="none" stroke="#333333" stroke-width="1"/>"##
    );
    for p in &grid.census.points {
        let xy = p.nu.to_xy();
        let (x, y) = map(xy.x, xy.y);
        let color = match p.kind {
            StationaryKind::Minimum => "#d7301f",
            StationaryKind::Saddle => "#ffffff",
            StationaryKind::Maximum => "#000000",
            StationaryKind::Degenerate => "#7a0177",
        };
        let _ = writeln!(
            out,
            r##"<circle class="{}" cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}" stroke="#000000" stroke-width="0.7"/>"##,
            p.kind.as_str()
        );
    }
    let a = grid.params.alpha.components();
    let _ = writeln!(
        out,
        r##"<text x="8" y="18" font-family="sans-serif" font-size="14" fill="#000000">free energy, beta = {}, alpha = ({:.6}, {:.6}, {:.6})</text>"##,
        grid.params.beta, a[0], a[1], a[2]
    );
    out.push_str("</svg>\n");
    out
}

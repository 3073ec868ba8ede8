//! Self-contained SVG rendering and labelling of the cells cut out by a
//! family of planar curves.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AprioriMeasure, CoordPQ, CoordUV, CoordXY, ModelParams, ToleranceConfig};
use crate::stationary::census_with;

/// Raster resolution used for cell detection.
pub const CELL_RASTER: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordSystem {
    Pq,
    Uv,
    Xy,
}

impl CoordSystem {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoordSystem::Pq => "pq",
            CoordSystem::Uv => "uv",
            CoordSystem::Xy => "xy",
        }
    }

    pub fn project(&self, alpha: &AprioriMeasure) -> (f64, f64) {
        match self {
            CoordSystem::Pq => {
                let c = alpha.to_pq();
                (c.p, c.q)
            }
            CoordSystem::Uv => {
                let c = alpha.to_uv();
                (c.u, c.v)
            }
            CoordSystem::Xy => {
                let c = alpha.to_xy();
                (c.x, c.y)
            }
        }
    }

    pub fn unproject(&self, a: f64, b: f64) -> Result<AprioriMeasure> {
        match self {
            CoordSystem::Pq => AprioriMeasure::from_pq(CoordPQ { p: a, q: b }),
            CoordSystem::Uv => AprioriMeasure::from_uv(CoordUV { u: a, v: b }),
            CoordSystem::Xy => AprioriMeasure::from_xy(CoordXY { x: a, y: b }),
        }
    }

    /// Default window; for `(p, q)` and `(u, v)` a square around the origin,
    /// for `(x, y)` the field triangle.
    pub fn default_extent(&self) -> Extent {
        match self {
            CoordSystem::Pq => Extent::new(-3.5, 3.5, -3.5, 3.5),
            CoordSystem::Uv => Extent::new(-3.0, 3.0, -3.0, 3.0),
            CoordSystem::Xy => Extent::new(-0.9, 0.9, -0.55, 1.05),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Extent {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        Extent { xmin, xmax, ymin, ymax }
    }

    pub fn is_valid(&self) -> bool {
        [self.xmin, self.xmax, self.ymin, self.ymax].iter().all(|v| v.is_finite())
            && self.xmin < self.xmax
            && self.ymin < self.ymax
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        p.0 >= self.xmin && p.0 <= self.xmax && p.1 >= self.ymin && p.1 <= self.ymax
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveStyle {
    Bifurcation,
    Maxwell,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stroke {
    pub color: String,
    pub width: f64,
    /// SVG dash pattern; `None` draws a solid line.
    pub dash: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub at: (f64, f64),
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub coords: CoordSystem,
    pub extent: Extent,
    pub bifurcation: Stroke,
    pub maxwell: Stroke,
    pub labels: Vec<RegionLabel>,
    pub title: Option<String>,
    /// Output width in pixels; the height follows the extent's aspect.
    pub width_px: f64,
}

impl PlotSpec {
    pub fn new(coords: CoordSystem) -> Self {
        PlotSpec {
            coords,
            extent: coords.default_extent(),
            bifurcation: Stroke { color: "#1f3a93".into(), width: 1.2, dash: None },
            maxwell: Stroke { color: "#c0392b".into(), width: 1.2, dash: Some("6 4".into()) },
            labels: Vec::new(),
            title: None,
            width_px: 640.0,
        }
    }

    /// Bifurcation curves must be solid and Maxwell curves dashed.
    pub fn validate(&self) -> Result<()> {
        if !self.extent.is_valid() {
            return Err(Error::domain(format!("invalid plot extent {:?}", self.extent)));
        }
        if self.bifurcation.dash.is_some() {
            return Err(Error::domain("bifurcation curves are drawn solid"));
        }
        if self.maxwell.dash.as_deref().is_none_or(str::is_empty) {
            return Err(Error::domain("Maxwell curves are drawn dashed"));
        }
        Ok(())
    }

    fn stroke(&self, style: CurveStyle) -> &Stroke {
        match style {
            CurveStyle::Bifurcation => &self.bifurcation,
            CurveStyle::Maxwell => &self.maxwell,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub style: CurveStyle,
    pub points: Vec<(f64, f64)>,
}

struct Frame {
    extent: Extent,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(spec: &PlotSpec) -> Self {
        let width = spec.width_px;
        let height = width * spec.extent.height() / spec.extent.width();
        Frame { extent: spec.extent, width, height }
    }

    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        let e = &self.extent;
        ((p.0 - e.xmin) / e.width() * self.width, (e.ymax - p.1) / e.height() * self.height)
    }
}

/// Breaks a polyline wherever a point is non-finite or a piece lies wholly
/// far outside the extent, so that huge coordinates never reach the file.
fn visible_runs(points: &[(f64, f64)], extent: &Extent) -> Vec<Vec<(f64, f64)>> {
    let pad_x = extent.width();
    let pad_y = extent.height();
    let wide = Extent::new(extent.xmin - pad_x, extent.xmax + pad_x, extent.ymin - pad_y, extent.ymax + pad_y);
    let mut runs = Vec::new();
    let mut cur: Vec<(f64, f64)> = Vec::new();
    for &p in points {
        if p.0.is_finite() && p.1.is_finite() && wide.contains(p) {
            cur.push(p);
        } else if !cur.is_empty() {
            runs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    runs.retain(|r| r.len() >= 2);
    runs
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders curves and labels into a standalone SVG document.
pub fn render_svg(spec: &PlotSpec, lines: &[Polyline]) -> Result<String> {
    spec.validate()?;
    let frame = Frame::new(spec);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = frame.width,
        h = frame.height
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{:.3}" height="{:.3}" fill="#ffffff"/>"##, frame.width, frame.height);
    let _ = writeln!(out, r#"<defs><clipPath id="frame"><rect x="0" y="0" width="{:.3}" height="{:.3}"/></clipPath></defs>"#, frame.width, frame.height);
    // Axes through the origin when it is in view.
    let (ox, oy) = frame.map((0.0, 0.0));
    let _ = writeln!(out, r##"<g stroke="#bbbbbb" stroke-width="0.5">"##);
    if (0.0..=frame.width).contains(&ox) {
        let _ = writeln!(out, r#"<line x1="{ox:.3}" y1="0" x2="{ox:.3}" y2="{:.3}"/>"#, frame.height);
    }
    if (0.0..=frame.height).contains(&oy) {
        let _ = writeln!(out, r#"<line x1="0" y1="{oy:.3}" x2="{:.3}" y2="{oy:.3}"/>"#, frame.width);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g clip-path="url(#frame)" fill="none" stroke-linejoin="round">"#);
    for line in lines {
        let stroke = spec.stroke(line.style);
        let dash = stroke.dash.as_ref().map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        let class = match line.style {
            CurveStyle::Bifurcation => "bifurcation",
            CurveStyle::Maxwell => "maxwell",
        };
        for run in visible_runs(&line.points, &spec.extent) {
            let mut d = String::new();
            for (k, p) in run.iter().enumerate() {
                let (x, y) = frame.map(*p);
                let _ = write!(d, "{}{x:.3},{y:.3}", if k == 0 { "M" } else { " L" });
            }
            let _ = writeln!(
                out,
                r#"<path class="{class}" d="{d}" stroke="{}" stroke-width="{}"{dash}/>"#,
                stroke.color, stroke.width
            );
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g font-family="sans-serif" font-size="13" fill="#222222" text-anchor="middle">"##);
    for label in &spec.labels {
        if !spec.extent.contains(label.at) {
            continue;
        }
        let (x, y) = frame.map(label.at);
        let _ = writeln!(out, r#"<text x="{x:.3}" y="{:.3}">{}</text>"#, y + 4.5, escape(&label.text));
    }
    let _ = writeln!(out, "</g>");
    if let Some(title) = &spec.title {
        let _ = writeln!(out, r##"<text x="8" y="18" font-family="sans-serif" font-size="14" fill="#000000">{}</text>"##, escape(title));
    }
    let _ = writeln!(
        out,
        r##"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11" fill="#666666" text-anchor="end">{} [{}, {}] x [{}, {}]</text>"##,
        frame.width - 6.0,
        frame.height - 6.0,
        spec.coords.as_str(),
        spec.extent.xmin,
        spec.extent.xmax,
        spec.extent.ymin,
        spec.extent.ymax
    );
    out.push_str("</svg>\n");
    Ok(out)
}

/// A square raster of the extent with the pixels crossed by curves blocked.
#[derive(Debug, Clone)]
pub struct Raster {
    pub size: usize,
    pub extent: Extent,
    pub blocked: Vec<bool>,
}

impl Raster {
    pub fn new(size: usize, extent: Extent) -> Self {
        Raster { size, extent, blocked: vec![false; size * size] }
    }

    /// Pixel containing `p`, if inside the extent.
    pub fn pixel_of(&self, p: (f64, f64)) -> Option<usize> {
        if !self.extent.contains(p) {
            return None;
        }
        let n = self.size as f64;
        let col = (((p.0 - self.extent.xmin) / self.extent.width()) * n).floor().min(n - 1.0) as usize;
        let row = (((self.extent.ymax - p.1) / self.extent.height()) * n).floor().min(n - 1.0) as usize;
        Some(row * self.size + col)
    }

    /// Centre of a pixel in plot coordinates.
    pub fn centre(&self, pixel: usize) -> (f64, f64) {
        let (row, col) = (pixel / self.size, pixel % self.size);
        let n = self.size as f64;
        (
            self.extent.xmin + (col as f64 + 0.5) / n * self.extent.width(),
            self.extent.ymax - (row as f64 + 0.5) / n * self.extent.height(),
        )
    }

    /// Marks every pixel touched by the segment, stepping a quarter pixel at
    /// a time after clipping to the extent.
    pub fn draw_segment(&mut self, a: (f64, f64), b: (f64, f64)) {
        let Some((a, b)) = clip_segment(a, b, &self.extent) else { return };
        let px = self.extent.width() / self.size as f64;
        let py = self.extent.height() / self.size as f64;
        let steps = (((b.0 - a.0) / px).abs().max(((b.1 - a.1) / py).abs()) * 4.0).ceil() as usize + 1;
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            if let Some(i) = self.pixel_of((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))) {
                self.blocked[i] = true;
            }
        }
    }

    pub fn draw_polyline(&mut self, points: &[(f64, f64)]) {
        for w in points.windows(2) {
            if [w[0].0, w[0].1, w[1].0, w[1].1].iter().all(|v| v.is_finite()) {
                self.draw_segment(w[0], w[1]);
            }
        }
    }

    /// Connected components of unblocked pixels under 4-adjacency. Curves
    /// are drawn 8-connected, so no component leaks across them.
    pub fn components(&self) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
        let n = self.size;
        let mut owner: Vec<Option<usize>> = vec![None; n * n];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n * n {
            if self.blocked[start] || owner[start].is_some() {
                continue;
            }
            let id = comps.len();
            let mut pixels = Vec::new();
            owner[start] = Some(id);
            stack.push(start);
            while let Some(p) = stack.pop() {
                pixels.push(p);
                let (r, c) = (p / n, p % n);
                let mut visit = |q: usize| {
                    if !self.blocked[q] && owner[q].is_none() {
                        owner[q] = Some(id);
                        stack.push(q);
                    }
                };
                if r > 0 {
                    visit(p - n);
                }
                if r + 1 < n {
                    visit(p + n);
                }
                if c > 0 {
                    visit(p - 1);
                }
                if c + 1 < n {
                    visit(p + 1);
                }
            }
            comps.push(pixels);
        }
        (comps, owner)
    }
}

/// Liang–Barsky clipping of a segment to a rectangle.
fn clip_segment(a: (f64, f64), b: (f64, f64), e: &Extent) -> Option<((f64, f64), (f64, f64))> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    for (p, q) in [(-dx, a.0 - e.xmin), (dx, e.xmax - a.0), (-dy, a.1 - e.ymin), (dy, e.ymax - a.1)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then_some(((a.0 + t0 * dx, a.1 + t0 * dy), (a.0 + t1 * dx, a.1 + t1 * dy)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellLabel {
    /// Number of local minima found at the probe point.
    Minima(usize),
    /// The cell is too thin at this resolution to place a probe.
    Unresolved,
}

impl std::fmt::Display for CellLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CellLabel::Minima(n) => write!(f, "{n}"),
            CellLabel::Unresolved => f.write_str("unresolved"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub id: usize,
    pub pixels: usize,
    pub centroid: (f64, f64),
    /// Interior pixel nearest the centroid, in plot coordinates.
    pub probe: Option<(f64, f64)>,
    pub label: CellLabel,
}

/// Cells of the raster with their probe points, before any census.
pub fn cell_probes(raster: &Raster) -> (Vec<Cell>, Vec<Option<usize>>) {
    let (comps, owner) = raster.components();
    let n = raster.size;
    let cells = comps
        .iter()
        .enumerate()
        .map(|(id, pixels)| {
            let inv = 1.0 / pixels.len() as f64;
            let (sx, sy) = pixels.iter().fold((0.0, 0.0), |acc, &p| {
                let c = raster.centre(p);
                (acc.0 + c.0, acc.1 + c.1)
            });
            let centroid = (sx * inv, sy * inv);
            // One erosion step: keep pixels whose 4-neighbours all belong to
            // the cell (the raster border counts as inside).
            let same = |q: usize| owner[q] == Some(id);
            let interior = pixels.iter().copied().filter(|&p| {
                let (r, c) = (p / n, p % n);
                (r == 0 || same(p - n)) && (r + 1 == n || same(p + n)) && (c == 0 || same(p - 1)) && (c + 1 == n || same(p + 1))
            });
            let probe = interior
                .map(|p| {
                    let c = raster.centre(p);
                    ((c.0 - centroid.0).powi(2) + (c.1 - centroid.1).powi(2), c)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(_, c)| c);
            Cell {
                id,
                pixels: pixels.len(),
                centroid,
                probe,
                label: CellLabel::Unresolved,
            }
        })
        .collect();
    (cells, owner)
}

/// Rasterizes `curves` over `extent`, finds the complement's components and
/// labels each by the number of local minima at its probe point.
pub fn label_cells(
    beta: f64,
    coords: CoordSystem,
    extent: Extent,
    curves: &[Vec<(f64, f64)>],
    seed_density: usize,
    tol: &ToleranceConfig,
) -> Result<(Vec<Cell>, Raster, Vec<Option<usize>>)> {
    if !extent.is_valid() {
        return Err(Error::domain(format!("invalid extent {extent:?}")));
    }
    let mut raster = Raster::new(CELL_RASTER, extent);
    for c in curves {
        raster.draw_polyline(c);
    }
    let (mut cells, owner) = cell_probes(&raster);
    let labels: Vec<Result<CellLabel>> = cells
        .par_iter()
        .map(|cell| {
            let Some(p) = cell.probe else { return Ok(CellLabel::Unresolved) };
            let Ok(alpha) = coords.unproject(p.0, p.1) else { return Ok(CellLabel::Unresolved) };
            let census = census_with(&ModelParams::new(beta, alpha)?, seed_density, tol)?;
            Ok(CellLabel::Minima(census.n_local_minima))
        })
        .collect();
    for (cell, label) in cells.iter_mut().zip(labels) {
        cell.label = label?;
    }
    Ok((cells, raster, owner))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping() {
        let e = Extent::new(0.0, 1.0, 0.0, 1.0);
        let (a, b) = clip_segment((-1.0, 0.5), (2.0, 0.5), &e).unwrap();
        assert_eq!((a, b), ((0.0, 0.5), (1.0, 0.5)));
        assert!(clip_segment((2.0, 2.0), (3.0, 3.0), &e).is_none());
    }

    #[test]
    fn diagonal_line_splits_square() {
        let mut r = Raster::new(64, Extent::new(0.0, 1.0, 0.0, 1.0));
        r.draw_polyline(&[(0.0, 0.0), (1.0, 1.0)]);
        let (cells, _) = cell_probes(&r);
        assert_eq!(cells.len(), 2);
        assert!(cells.iter().all(|c| c.probe.is_some()));
    }

    #[test]
    fn thin_strip_is_unresolved() {
        let mut r = Raster::new(64, Extent::new(0.0, 64.0, 0.0, 64.0));
        r.draw_polyline(&[(0.0, 10.5), (64.0, 10.5)]);
        r.draw_polyline(&[(0.0, 12.5), (64.0, 12.5)]);
        let (cells, _) = cell_probes(&r);
        assert_eq!(cells.len(), 3);
        assert_eq!(cells.iter().filter(|c| c.probe.is_none()).count(), 1);
    }

    #[test]
    fn style_rules() {
        let mut spec = PlotSpec::new(CoordSystem::Pq);
        assert!(spec.validate().is_ok());
        spec.maxwell.dash = None;
        assert!(spec.validate().is_err());
        let mut spec = PlotSpec::new(CoordSystem::Pq);
        spec.bifurcation.dash = Some("2 2".into());
        assert!(spec.validate().is_err());
    }

    #[test]
    fn svg_is_standalone() {
        let spec = PlotSpec::new(CoordSystem::Pq);
        let svg = render_svg(
            &spec,
            &[
                Polyline { style: CurveStyle::Bifurcation, points: vec![(0.0, 0.0), (1.0, 1.0)] },
                Polyline { style: CurveStyle::Maxwell, points: vec![(0.0, 0.0), (f64::NAN, 1.0), (1e9, 1.0)] },
            ],
        )
        .unwrap();
        assert!(svg.starts_with("<svg"));
        // The Maxwell line has no two consecutive drawable points.
        assert_eq!(svg.matches("class=\"maxwell\"").count(), 0);
        assert_eq!(svg.matches("class=\"bifurcation\"").count(), 1);
        assert!(!svg.contains("href"));
    }
}

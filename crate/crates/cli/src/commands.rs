use potts_core::bifurcation::{slice, surface_patches, DEFAULT_SLICE_SAMPLES};
use potts_core::critical::{all_critical_temps, beta_ellis_wang, BETA_BUTTERFLY};
use potts_core::export::{self, ExportRecord, RecordKind};
use potts_core::maxwell::{coexistence_curve, symmetric_segment, triple_point, AxisSegment};
use potts_core::model::{AprioriMeasure, CoordPQ, CoordUV, ModelParams, Permutation, ToleranceConfig};
use potts_core::plot::{label_cells, CellLabel, CoordSystem, CurveStyle, Extent, Polyline, RegionLabel};
use potts_core::stationary::census_with;
use potts_core::{potential_grid, Error, PlotSpec, Result};

use crate::render;
use crate::{Cli, Command, Common, Coords, FieldArgs, Format};

pub struct Output {
    pub body: Vec<u8>,
    /// Lines for stderr.
    pub messages: Vec<String>,
    /// Set when output was produced but a computation ended abnormally.
    pub failure: Option<String>,
}

impl Output {
    fn new(body: Vec<u8>) -> Self {
        Output { body, messages: Vec::new(), failure: None }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let c = &cli.common;
    if !(c.tol.is_finite() && c.tol >= 0.0) {
        return Err(Error::Domain(format!("--tol must be a non-negative number, got {}", c.tol)));
    }
    match &cli.command {
        Command::Slice { beta, samples, label_cells, coords, extent } => {
            let coords = coord_system(*coords);
            let extent = window(extent.as_deref(), coords)?;
            cmd_slice(c, *beta, *samples, *label_cells, coords, extent)
        }
        Command::Surface { beta_max, grid } => cmd_surface(c, *beta_max, *grid),
        Command::Census { beta, field } => cmd_census(c, *beta, field),
        Command::Critical => cmd_critical(c),
        Command::Maxwell { beta, step, extent } => {
            cmd_maxwell(c, *beta, *step, window(extent.as_deref(), CoordSystem::Pq)?)
        }
        Command::Potential { beta, field, grid } => cmd_potential(c, *beta, field, *grid),
    }
}

fn tolerances(c: &Common) -> ToleranceConfig {
    ToleranceConfig { depth: c.tol, ..ToleranceConfig::default() }
}

fn coord_system(c: Coords) -> CoordSystem {
    match c {
        Coords::Pq => CoordSystem::Pq,
        Coords::Uv => CoordSystem::Uv,
        Coords::Xy => CoordSystem::Xy,
    }
}

fn window(values: Option<&[f64]>, coords: CoordSystem) -> Result<Extent> {
    let Some(v) = values else { return Ok(coords.default_extent()) };
    arity(v, 4, "extent")?;
    let e = Extent::new(v[0], v[1], v[2], v[3]);
    if !e.is_valid() {
        return Err(Error::Domain(format!("--extent needs xmin < xmax and ymin < ymax, got {v:?}")));
    }
    Ok(e)
}

fn arity(values: &[f64], n: usize, flag: &str) -> Result<()> {
    if values.len() == n {
        Ok(())
    } else {
        Err(Error::Domain(format!("--{flag} takes {n} comma-separated numbers, got {}", values.len())))
    }
}

fn field(args: &FieldArgs) -> Result<AprioriMeasure> {
    if let Some(a) = &args.alpha {
        arity(a, 3, "alpha")?;
        return AprioriMeasure::from_array([a[0], a[1], a[2]]);
    }
    if let Some(uv) = &args.uv {
        arity(uv, 2, "uv")?;
        return AprioriMeasure::from_uv(CoordUV { u: uv[0], v: uv[1] });
    }
    if let Some(pq) = &args.pq {
        arity(pq, 2, "pq")?;
        return AprioriMeasure::from_pq(CoordPQ { p: pq[0], q: pq[1] });
    }
    Ok(AprioriMeasure::uniform())
}

fn unsupported(format: Format, what: &str) -> Error {
    Error::Domain(format!("{what} cannot be written as {format:?}"))
}

fn tabular(c: &Common, kind: RecordKind, records: &[ExportRecord], notes: &[String], what: &str) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match c.format {
        Format::Csv => export::write_csv(&mut buf, kind, records, notes)?,
        Format::Json => export::write_json(&mut buf, records)?,
        f => return Err(unsupported(f, what)),
    }
    Ok(buf)
}

fn slice_polylines(beta: f64, samples: usize, coords: CoordSystem) -> Result<Vec<Vec<(f64, f64)>>> {
    Ok(slice(beta, samples)?
        .iter()
        .flat_map(|curve| {
            curve
                .segments()
                .into_iter()
                .map(|seg| seg.iter().map(|s| coords.project(&s.alpha)).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        })
        .collect())
}

fn cmd_slice(
    c: &Common,
    beta: f64,
    samples: usize,
    want_labels: bool,
    coords: CoordSystem,
    extent: Extent,
) -> Result<Output> {
    let curves = slice(beta, samples)?;
    let records = export::slice_records(&curves)?;
    let notes = if curves.is_empty() {
        vec![format!("no bifurcation curves for beta = {beta} <= 2; the field plane is a single cell")]
    } else {
        Vec::new()
    };
    let lines = slice_polylines(beta, samples, coords)?;
    let mut messages = Vec::new();
    let mut labels = Vec::new();
    if want_labels || c.format == Format::Svg {
        let (cells, _, _) = label_cells(beta, coords, extent, &lines, c.seed_grid, &tolerances(c))?;
        let unresolved = cells.iter().filter(|cell| cell.label == CellLabel::Unresolved).count();
        for cell in &cells {
            if want_labels {
                let probe = cell.probe.map_or("none".to_string(), |p| format!("{},{}", p.0, p.1));
                messages.push(format!("cell {} pixels {} probe {} minima {}", cell.id, cell.pixels, probe, cell.label));
            }
            if let (Some(at), CellLabel::Minima(n)) = (cell.probe, cell.label) {
                labels.push(RegionLabel { at, text: n.to_string() });
            }
        }
        if unresolved > 0 {
            messages.push(format!("{unresolved} cells too thin to label at this resolution"));
        }
    }
    let body = if c.format == Format::Svg {
        let mut spec = PlotSpec::new(coords);
        spec.extent = extent;
        spec.labels = labels;
        spec.title = Some(format!("bifurcation set, beta = {beta}"));
        let polylines: Vec<Polyline> =
            lines.into_iter().map(|points| Polyline { style: CurveStyle::Bifurcation, points }).collect();
        potts_core::plot::render_svg(&spec, &polylines)?.into_bytes()
    } else {
        tabular(c, RecordKind::SlicePoint, &records, &notes, "a slice")?
    };
    let mut out = Output::new(body);
    out.messages = messages;
    Ok(out)
}

fn cmd_surface(c: &Common, beta_max: f64, grid: usize) -> Result<Output> {
    if !(beta_max.is_finite() && beta_max > 0.0) {
        return Err(Error::Domain(format!("--beta-max must be positive, got {beta_max}")));
    }
    let (plus, minus) = surface_patches(grid)?;
    let body = match c.format {
        Format::Obj => render::surface_obj(&[&plus, &minus], beta_max).into_bytes(),
        _ => {
            let records = export::surface_records(&[&plus, &minus], beta_max)?;
            tabular(c, RecordKind::SurfacePoint, &records, &[], "the surface")?
        }
    };
    let mut out = Output::new(body);
    if plus.skipped + minus.skipped > 0 {
        out.messages.push(format!(
            "{} lattice points skipped: field outside the representable simplex",
            plus.skipped + minus.skipped
        ));
    }
    Ok(out)
}

fn cmd_census(c: &Common, beta: f64, args: &FieldArgs) -> Result<Output> {
    let params = ModelParams::new(beta, field(args)?)?;
    let census = census_with(&params, c.seed_grid, &tolerances(c))?;
    let records = export::census_records(&census)?;
    let notes = vec![
        format!("local_minima {}", census.n_local_minima),
        format!("global_minimizers {}", census.global_minimizers.len()),
        format!("morse_index_sum {}", census.morse_index_sum()),
        format!("degenerate_warning {}", census.degenerate_warning),
    ];
    let mut out = Output::new(tabular(c, RecordKind::Census, &records, &notes, "a census")?);
    out.messages.push(format!(
        "{} stationary points, {} local minima, {} global minimizers",
        census.points.len(),
        census.n_local_minima,
        census.global_minimizers.len()
    ));
    if census.degenerate_warning {
        out.messages.push("warning: degenerate stationary point; counts hold only at this exact parameter".into());
    }
    Ok(out)
}

fn cmd_critical(c: &Common) -> Result<Output> {
    let temps = all_critical_temps()?;
    let records = export::critical_records(&temps)?;
    Ok(Output::new(tabular(c, RecordKind::CriticalTemps, &records, &[], "critical temperatures")?))
}

/// Three rotations of the axis; these index the distinct segment copies.
const ROTATIONS: [usize; 3] = [0, 4, 5];

fn segment_points(seg: &AxisSegment, coords: CoordSystem) -> Vec<(f64, f64)> {
    (1..=400)
        .filter_map(|k| {
            let xy = seg.point_at(k as f64 / 400.0);
            AprioriMeasure::from_xy(xy).ok().map(|a| coords.project(&a))
        })
        .collect()
}

fn cmd_maxwell(c: &Common, beta: f64, step: f64, extent: Extent) -> Result<Output> {
    let mut records = Vec::new();
    let mut dashed: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut notes = Vec::new();
    let mut failure = None;
    let coords = CoordSystem::Pq;
    if let Some(seg) = symmetric_segment(beta)? {
        for (k, image) in seg.images().iter().enumerate() {
            let sigma = Permutation::ALL[ROTATIONS[k]];
            records.extend(export::segment_records(beta, "segment", sigma, image)?);
            dashed.push(segment_points(image, coords));
        }
    } else {
        notes.push(format!("no coexistence set for beta = {beta} <= 2"));
    }
    if beta > BETA_BUTTERFLY && beta < beta_ellis_wang() {
        let triple = triple_point(beta)?;
        for sigma in Permutation::ALL {
            records.push(export::coexistence_record("triple", sigma, 0, &triple.permuted(sigma))?);
        }
        let curve = coexistence_curve(beta, step)?;
        notes.push(format!("curve_status {}", curve.status.as_str()));
        for sigma in Permutation::ALL {
            let image = curve.permuted(sigma);
            let mut line = vec![coords.project(&image.origin.alpha)];
            for (k, p) in image.points.iter().enumerate() {
                records.push(export::coexistence_record("curve", sigma, k + 1, p)?);
                line.push(coords.project(&p.alpha));
            }
            dashed.push(line);
        }
        if !curve.status.is_normal() {
            failure = Some(format!("coexistence curve ended early with status {}", curve.status.as_str()));
        }
    }
    if (beta - beta_ellis_wang()).abs() <= 1e-12 {
        let tol = ToleranceConfig { depth: c.tol.max(1e-8), ..ToleranceConfig::default() };
        let census = census_with(&ModelParams::zero_field(beta)?, c.seed_grid, &tol)?;
        let minimizers: Vec<_> = census.global_minimizers.iter().map(|p| p.nu).collect();
        let uniform = AprioriMeasure::uniform();
        records.push(export::maxwell_record(
            beta,
            "ellis_wang",
            Permutation::IDENTITY,
            0,
            uniform.to_xy(),
            uniform.components(),
            &minimizers[..minimizers.len().min(export::MAXWELL_SLOTS)],
            census.global_value().unwrap_or(f64::NAN),
        )?);
    }
    let body = if c.format == Format::Svg {
        let mut lines: Vec<Polyline> = slice_polylines(beta, DEFAULT_SLICE_SAMPLES, coords)?
            .into_iter()
            .map(|points| Polyline { style: CurveStyle::Bifurcation, points })
            .collect();
        lines.extend(dashed.into_iter().map(|points| Polyline { style: CurveStyle::Maxwell, points }));
        let mut spec = PlotSpec::new(coords);
        spec.extent = extent;
        spec.title = Some(format!("bifurcation set (solid) and Maxwell set (dashed), beta = {beta}"));
        potts_core::plot::render_svg(&spec, &lines)?.into_bytes()
    } else {
        tabular(c, RecordKind::MaxwellPoint, &records, &notes, "a Maxwell set")?
    };
    let mut out = Output::new(body);
    out.failure = failure;
    Ok(out)
}

fn cmd_potential(c: &Common, beta: f64, args: &FieldArgs, grid: usize) -> Result<Output> {
    let params = ModelParams::new(beta, field(args)?)?;
    let g = potential_grid(&params, grid, c.seed_grid, &tolerances(c))?;
    let basins = g.basins_by_depth();
    let mut notes = Vec::new();
    for b in &basins {
        let count = g.samples.iter().filter(|s| s.basin == Some(*b)).count();
        notes.push(format!("basin {b} value {:?} samples {count}", g.census.points[*b].value));
    }
    let body = if c.format == Format::Svg {
        render::potential_svg(&g).into_bytes()
    } else {
        let records = export::potential_records(&g)?;
        tabular(c, RecordKind::PotentialGrid, &records, &notes, "a potential grid")?
    };
    let mut out = Output::new(body);
    out.messages = notes;
    Ok(out)
}

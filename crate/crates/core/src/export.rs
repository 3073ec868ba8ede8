//! Flat export records and their CSV/JSON encodings.
//!
//! Every kind has a fixed, ordered column set. A CSV file holds records of a
//! single kind and starts with the line `# potts-landscape v1 <kind>`,
//! followed by the column names. Reals are written in the shortest decimal
//! form that parses back to the same bits.

use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::bifurcation::{SliceCurve, SurfacePatch};
use crate::critical::CriticalTemps;
use crate::error::{Error, Result};
use crate::landscape::PotentialGrid;
use crate::maxwell::{AxisSegment, CoexistencePoint};
use crate::model::{AprioriMeasure, CoordXY, Permutation, SpinDistribution};
use crate::stationary::MinimaCensus;

pub const SCHEMA_VERSION: u32 = 1;
const MAGIC: &str = "potts-landscape";
/// Minimizer slots in a Maxwell record.
pub const MAXWELL_SLOTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    SlicePoint,
    SurfacePoint,
    CriticalTemps,
    Census,
    MaxwellPoint,
    PotentialGrid,
}

impl RecordKind {
    pub const ALL: [RecordKind; 6] = [
        RecordKind::SlicePoint,
        RecordKind::SurfacePoint,
        RecordKind::CriticalTemps,
        RecordKind::Census,
        RecordKind::MaxwellPoint,
        RecordKind::PotentialGrid,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RecordKind::SlicePoint => "slice_point",
            RecordKind::SurfacePoint => "surface_point",
            RecordKind::CriticalTemps => "critical_temps",
            RecordKind::Census => "census",
            RecordKind::MaxwellPoint => "maxwell_point",
            RecordKind::PotentialGrid => "potential_grid",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Format(format!("unknown record kind {s:?}")))
    }

    /// Column names and types, in file order.
    pub fn columns(&self) -> Vec<(String, FieldType)> {
        use FieldType::{Int, Real, Text};
        let fixed = |cols: &[(&str, FieldType)]| cols.iter().map(|(n, t)| (n.to_string(), *t)).collect::<Vec<_>>();
        match self {
            RecordKind::SlicePoint => fixed(&[
                ("beta", Real),
                ("branch", Text),
                ("segment", Int),
                ("interval", Int),
                ("x_param", Real),
                ("nu1", Real),
                ("nu2", Real),
                ("nu3", Real),
                ("alpha1", Real),
                ("alpha2", Real),
                ("alpha3", Real),
                ("p", Real),
                ("q", Real),
            ]),
            RecordKind::SurfacePoint => fixed(&[
                ("sign", Text),
                ("i", Int),
                ("j", Int),
                ("nu1", Real),
                ("nu2", Real),
                ("nu3", Real),
                ("beta", Real),
                ("alpha1", Real),
                ("alpha2", Real),
                ("alpha3", Real),
                ("p", Real),
                ("q", Real),
            ]),
            RecordKind::CriticalTemps => fixed(&[("name", Text), ("value", Real)]),
            RecordKind::Census => fixed(&[
                ("beta", Real),
                ("alpha1", Real),
                ("alpha2", Real),
                ("alpha3", Real),
                ("index", Int),
                ("kind", Text),
                ("nu1", Real),
                ("nu2", Real),
                ("nu3", Real),
                ("eig_lo", Real),
                ("eig_hi", Real),
                ("value", Real),
                ("global", Int),
            ]),
            RecordKind::MaxwellPoint => {
                let mut cols = fixed(&[
                    ("beta", Real),
                    ("element", Text),
                    ("copy", Text),
                    ("index", Int),
                    ("alpha1", Real),
                    ("alpha2", Real),
                    ("alpha3", Real),
                    ("x", Real),
                    ("y", Real),
                    ("p", Real),
                    ("q", Real),
                    ("depth", Real),
                    ("n_minimizers", Int),
                ]);
                for slot in 0..MAXWELL_SLOTS {
                    for c in 1..=3 {
                        cols.push((format!("m{}_nu{c}", slot + 1), Real));
                    }
                }
                cols
            }
            RecordKind::PotentialGrid => fixed(&[
                ("beta", Real),
                ("i", Int),
                ("j", Int),
                ("x", Real),
                ("y", Real),
                ("nu1", Real),
                ("nu2", Real),
                ("nu3", Real),
                ("f", Real),
                ("basin", Int),
                ("basin_value", Real),
            ]),
        }
    }
}

impl std::fmt::Display for RecordKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldType {
    Real,
    Int,
    Text,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldValue {
    Int(i64),
    Real(f64),
    Text(String),
}

impl PartialEq for FieldValue {
    /// Reals compare by bits, so NaN placeholders round-trip as equal.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldValue::Real(a), FieldValue::Real(b)) => a.to_bits() == b.to_bits(),
            (FieldValue::Int(a), FieldValue::Int(b)) => a == b,
            (FieldValue::Text(a), FieldValue::Text(b)) => a == b,
            _ => false,
        }
    }
}

impl FieldValue {
    fn field_type(&self) -> FieldType {
        match self {
            FieldValue::Real(_) => FieldType::Real,
            FieldValue::Int(_) => FieldType::Int,
            FieldValue::Text(_) => FieldType::Text,
        }
    }

    fn to_csv(&self) -> String {
        match self {
            // Debug formatting is the shortest round-trip representation.
            FieldValue::Real(x) => format!("{x:?}"),
            FieldValue::Int(i) => i.to_string(),
            FieldValue::Text(s) => s.clone(),
        }
    }

    fn parse(s: &str, ty: FieldType) -> Result<Self> {
        let bad = || Error::Format(format!("cannot parse {s:?} as {ty:?}"));
        Ok(match ty {
            FieldType::Real => FieldValue::Real(s.parse().map_err(|_| bad())?),
            FieldType::Int => FieldValue::Int(s.parse().map_err(|_| bad())?),
            FieldType::Text => FieldValue::Text(s.to_string()),
        })
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            FieldValue::Real(x) => serde_json::Number::from_f64(*x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            FieldValue::Int(i) => serde_json::Value::from(*i),
            FieldValue::Text(s) => serde_json::Value::from(s.clone()),
        }
    }

    fn from_json(v: &serde_json::Value, ty: FieldType) -> Result<Self> {
        let bad = || Error::Format(format!("JSON value {v} is not a {ty:?}"));
        Ok(match ty {
            // Non-finite reals are written as null.
            FieldType::Real => FieldValue::Real(if v.is_null() { f64::NAN } else { v.as_f64().ok_or_else(bad)? }),
            FieldType::Int => FieldValue::Int(v.as_i64().ok_or_else(bad)?),
            FieldType::Text => FieldValue::Text(v.as_str().ok_or_else(bad)?.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportRecord {
    pub kind: RecordKind,
    pub schema_version: u32,
    /// Values in column order.
    pub payload: Vec<(String, FieldValue)>,
}

impl ExportRecord {
    /// Pairs `values` with the kind's columns, checking count and types.
    pub fn new(kind: RecordKind, values: Vec<FieldValue>) -> Result<Self> {
        let cols = kind.columns();
        if cols.len() != values.len() {
            return Err(Error::Format(format!(
                "{kind} expects {} fields, got {}",
                cols.len(),
                values.len()
            )));
        }
        let payload = cols
            .into_iter()
            .zip(values)
            .map(|((name, ty), v)| {
                if v.field_type() == ty {
                    Ok((name, v))
                } else {
                    Err(Error::Format(format!("{kind} field {name} must be {ty:?}, got {v:?}")))
                }
            })
            .collect::<Result<_>>()?;
        Ok(ExportRecord { kind, schema_version: SCHEMA_VERSION, payload })
    }

    pub fn get(&self, name: &str) -> Option<&FieldValue> {
        self.payload.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn real(&self, name: &str) -> Option<f64> {
        match self.get(name)? {
            FieldValue::Real(x) => Some(*x),
            _ => None,
        }
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        match self.get(name)? {
            FieldValue::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        match self.get(name)? {
            FieldValue::Text(s) => Some(s),
            _ => None,
        }
    }
}

fn real(x: f64) -> FieldValue {
    FieldValue::Real(x)
}

fn int(i: usize) -> FieldValue {
    FieldValue::Int(i as i64)
}

fn text(s: impl Into<String>) -> FieldValue {
    FieldValue::Text(s.into())
}

fn push3(values: &mut Vec<FieldValue>, c: [f64; 3]) {
    values.extend(c.map(real));
}

/// Writes records of one kind as CSV. `notes` become extra comment lines
/// after the header.
pub fn write_csv<W: Write>(mut w: W, kind: RecordKind, records: &[ExportRecord], notes: &[String]) -> Result<()> {
    writeln!(w, "# {MAGIC} v{SCHEMA_VERSION} {kind}")?;
    for n in notes {
        writeln!(w, "# {n}")?;
    }
    let mut cw = csv::Writer::from_writer(w);
    cw.write_record(kind.columns().iter().map(|(n, _)| n.as_str()))?;
    for r in records {
        if r.kind != kind {
            return Err(Error::Format(format!("record of kind {} in a {kind} file", r.kind)));
        }
        cw.write_record(r.payload.iter().map(|(_, v)| v.to_csv()))?;
    }
    cw.flush()?;
    Ok(())
}

/// Reads a CSV file written by [`write_csv`].
pub fn read_csv<R: Read>(r: R) -> Result<(RecordKind, Vec<ExportRecord>)> {
    let mut reader = std::io::BufReader::new(r);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let mut parts = first.split_whitespace();
    let (hash, magic, version, kind) = (parts.next(), parts.next(), parts.next(), parts.next());
    if hash != Some("#") || magic != Some(MAGIC) {
        return Err(Error::Format(format!("missing {MAGIC} header line, got {first:?}")));
    }
    if version != Some(&format!("v{SCHEMA_VERSION}")) {
        return Err(Error::Format(format!("unsupported schema version {version:?}")));
    }
    let kind = RecordKind::parse(kind.unwrap_or(""))?;
    let cols = kind.columns();
    let mut cr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let header = cr.headers()?.clone();
    if header.len() != cols.len() || header.iter().zip(&cols).any(|(h, (c, _))| h != c) {
        return Err(Error::Format(format!("column mismatch for {kind}: {header:?}")));
    }
    let mut out = Vec::new();
    for row in cr.records() {
        let row = row?;
        let values = row
            .iter()
            .zip(&cols)
            .map(|(s, (_, ty))| FieldValue::parse(s, *ty))
            .collect::<Result<Vec<_>>>()?;
        out.push(ExportRecord::new(kind, values)?);
    }
    Ok((kind, out))
}

/// Writes records as a JSON array of flat objects carrying `kind` and
/// `schema_version` next to the columns.
pub fn write_json<W: Write>(w: W, records: &[ExportRecord]) -> Result<()> {
    let array: Vec<serde_json::Value> = records
        .iter()
        .map(|r| {
            let mut obj = serde_json::Map::new();
            obj.insert("kind".into(), r.kind.as_str().into());
            obj.insert("schema_version".into(), r.schema_version.into());
            for (n, v) in &r.payload {
                obj.insert(n.clone(), v.to_json());
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::to_writer_pretty(w, &array)?;
    Ok(())
}

pub fn read_json<R: Read>(r: R) -> Result<Vec<ExportRecord>> {
    let array: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_reader(r)?;
    array
        .iter()
        .map(|obj| {
            let kind = RecordKind::parse(obj.get("kind").and_then(|v| v.as_str()).unwrap_or(""))?;
            let version = obj.get("schema_version").and_then(|v| v.as_u64());
            if version != Some(SCHEMA_VERSION as u64) {
                return Err(Error::Format(format!("unsupported schema version {version:?}")));
            }
            let values = kind
                .columns()
                .iter()
                .map(|(name, ty)| {
                    let v = obj.get(name).ok_or_else(|| Error::Format(format!("{kind} record lacks {name}")))?;
                    FieldValue::from_json(v, *ty)
                })
                .collect::<Result<Vec<_>>>()?;
            ExportRecord::new(kind, values)
        })
        .collect()
}

pub fn slice_records(curves: &[SliceCurve]) -> Result<Vec<ExportRecord>> {
    let mut out = Vec::new();
    for curve in curves {
        for (segment, samples) in curve.segments().into_iter().enumerate() {
            for s in samples {
                let pq = s.alpha.to_pq();
                let mut v = vec![real(curve.beta), text(curve.branch.label()), int(segment), int(s.interval), real(s.x_param)];
                push3(&mut v, s.nu.components());
                push3(&mut v, s.alpha.components());
                v.extend([real(pq.p), real(pq.q)]);
                out.push(ExportRecord::new(RecordKind::SlicePoint, v)?);
            }
        }
    }
    Ok(out)
}

pub fn surface_records(patches: &[&SurfacePatch], beta_max: f64) -> Result<Vec<ExportRecord>> {
    let mut out = Vec::new();
    for patch in patches {
        for s in patch.samples.iter().filter(|s| s.beta <= beta_max) {
            let pq = s.alpha.to_pq();
            let mut v = vec![text(patch.sign.as_str()), int(s.lattice.0), int(s.lattice.1)];
            push3(&mut v, s.nu.components());
            v.push(real(s.beta));
            push3(&mut v, s.alpha.components());
            v.extend([real(pq.p), real(pq.q)]);
            out.push(ExportRecord::new(RecordKind::SurfacePoint, v)?);
        }
    }
    Ok(out)
}

pub fn critical_records(temps: &CriticalTemps) -> Result<Vec<ExportRecord>> {
    temps
        .named()
        .iter()
        .map(|(n, x)| ExportRecord::new(RecordKind::CriticalTemps, vec![text(*n), real(*x)]))
        .collect()
}

pub fn census_records(census: &MinimaCensus) -> Result<Vec<ExportRecord>> {
    let alpha = census.params.alpha.components();
    census
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let global = census.global_minimizers.iter().any(|g| g.nu == p.nu);
            let mut v = vec![real(census.params.beta)];
            push3(&mut v, alpha);
            v.extend([int(k), text(p.kind.as_str())]);
            push3(&mut v, p.nu.components());
            v.extend([real(p.hess_eigenvalues.0), real(p.hess_eigenvalues.1), real(p.value), int(global as usize)]);
            ExportRecord::new(RecordKind::Census, v)
        })
        .collect()
}

/// One Maxwell record. `alpha` may be on the boundary of the simplex for
/// segment endpoints, so it is passed as components.
#[allow(clippy::too_many_arguments)]
pub fn maxwell_record(
    beta: f64,
    element: &str,
    copy: Permutation,
    index: usize,
    xy: CoordXY,
    alpha: [f64; 3],
    minimizers: &[SpinDistribution],
    depth: f64,
) -> Result<ExportRecord> {
    if minimizers.len() > MAXWELL_SLOTS {
        return Err(Error::Format(format!("at most {MAXWELL_SLOTS} minimizers per record")));
    }
    let pq = AprioriMeasure::from_array(alpha).map(|a| a.to_pq()).ok();
    let mut v = vec![real(beta), text(element), text(copy.label()), int(index)];
    push3(&mut v, alpha);
    v.extend([
        real(xy.x),
        real(xy.y),
        real(pq.map_or(f64::NAN, |c| c.p)),
        real(pq.map_or(f64::NAN, |c| c.q)),
        real(depth),
        int(minimizers.len()),
    ]);
    for slot in 0..MAXWELL_SLOTS {
        push3(&mut v, minimizers.get(slot).map_or([f64::NAN; 3], |m| m.components()));
    }
    ExportRecord::new(RecordKind::MaxwellPoint, v)
}

pub fn coexistence_record(element: &str, copy: Permutation, index: usize, point: &CoexistencePoint) -> Result<ExportRecord> {
    maxwell_record(
        point.beta,
        element,
        copy,
        index,
        point.alpha.to_xy(),
        point.alpha.components(),
        &point.minimizers,
        point.depth,
    )
}

/// The two endpoints of a segment as records with index 0 and 1.
pub fn segment_records(beta: f64, element: &str, copy: Permutation, segment: &AxisSegment) -> Result<Vec<ExportRecord>> {
    [segment.start, segment.end]
        .iter()
        .enumerate()
        .map(|(k, xy)| maxwell_record(beta, element, copy, k, *xy, crate::model::components_of_xy(*xy), &[], f64::NAN))
        .collect()
}

/// Grid samples; `basin` is the census index of the minimum reached by
/// descent, or −1 with a NaN basin value when descent failed.
pub fn potential_records(grid: &PotentialGrid) -> Result<Vec<ExportRecord>> {
    grid.samples
        .iter()
        .map(|s| {
            let xy = s.nu.to_xy();
            let mut v = vec![real(grid.params.beta), int(s.lattice.0), int(s.lattice.1), real(xy.x), real(xy.y)];
            push3(&mut v, s.nu.components());
            v.extend([
                real(s.value),
                FieldValue::Int(s.basin.map_or(-1, |b| b as i64)),
                real(grid.basin_value(s).unwrap_or(f64::NAN)),
            ]);
            ExportRecord::new(RecordKind::PotentialGrid, v)
        })
        .collect()
}

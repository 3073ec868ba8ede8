use potts_core::bifurcation::{slice, surface_patches};
use potts_core::export::*;
use potts_core::*;

fn csv_round_trip(kind: RecordKind, records: &[ExportRecord]) {
    let mut buf = Vec::new();
    write_csv(&mut buf, kind, records, &["a note".to_string()]).unwrap();
    let (read_kind, back) = read_csv(buf.as_slice()).unwrap();
    assert_eq!(read_kind, kind);
    assert_eq!(back.len(), records.len());
    for (a, b) in records.iter().zip(&back) {
        // Bitwise equality of every real, NaN placeholders included.
        assert_eq!(a, b);
    }
    // Writing again gives identical bytes.
    let mut again = Vec::new();
    write_csv(&mut again, kind, &back, &["a note".to_string()]).unwrap();
    assert_eq!(buf, again);
}

fn json_round_trip(records: &[ExportRecord]) {
    let mut buf = Vec::new();
    write_json(&mut buf, records).unwrap();
    let back = read_json(buf.as_slice()).unwrap();
    assert_eq!(back.as_slice(), records);
}

#[test]
fn slice_records_round_trip_bit_for_bit() {
    let records = slice_records(&slice(2.75, 60).unwrap()).unwrap();
    assert!(!records.is_empty());
    csv_round_trip(RecordKind::SlicePoint, &records);
    json_round_trip(&records);
}

#[test]
fn maxwell_records_round_trip_bit_for_bit() {
    let curve = coexistence_curve(2.6, 2e-2).unwrap();
    let mut records = Vec::new();
    let seg = symmetric_segment(2.6).unwrap().unwrap();
    records.extend(segment_records(2.6, "segment", Permutation::IDENTITY, &seg).unwrap());
    records.push(coexistence_record("triple", Permutation::IDENTITY, 0, &curve.origin).unwrap());
    for (k, p) in curve.points.iter().enumerate() {
        records.push(coexistence_record("curve", Permutation::ALL[4], k + 1, p).unwrap());
    }
    csv_round_trip(RecordKind::MaxwellPoint, &records);
    json_round_trip(&records);
    // Unused minimizer slots are NaN.
    let seg_record = &records[0];
    assert!(seg_record.real("m1_nu1").unwrap().is_nan());
    assert_eq!(records[2].int("n_minimizers"), Some(3));
}

#[test]
fn other_kinds_round_trip() {
    let (plus, minus) = surface_patches(16).unwrap();
    let surface = surface_records(&[&plus, &minus], 3.5).unwrap();
    csv_round_trip(RecordKind::SurfacePoint, &surface);
    let critical = critical_records(&all_critical_temps().unwrap()).unwrap();
    csv_round_trip(RecordKind::CriticalTemps, &critical);
    json_round_trip(&critical);
    let c = census(&ModelParams::zero_field(2.75).unwrap()).unwrap();
    let census_rec = census_records(&c).unwrap();
    csv_round_trip(RecordKind::Census, &census_rec);
    let grid = potential_grid(&ModelParams::zero_field(2.0).unwrap(), 10, 16, &ToleranceConfig::default()).unwrap();
    csv_round_trip(RecordKind::PotentialGrid, &potential_records(&grid).unwrap());
}

#[test]
fn records_are_validated() {
    assert!(ExportRecord::new(RecordKind::CriticalTemps, vec![FieldValue::Real(1.0)]).is_err());
    assert!(ExportRecord::new(
        RecordKind::CriticalTemps,
        vec![FieldValue::Real(1.0), FieldValue::Real(2.0)]
    )
    .is_err());
    let ok = ExportRecord::new(
        RecordKind::CriticalTemps,
        vec![FieldValue::Text("cross".into()), FieldValue::Real(2.7)],
    )
    .unwrap();
    assert_eq!(ok.schema_version, SCHEMA_VERSION);
}

#[test]
fn malformed_files_are_rejected() {
    assert!(read_csv("beta,x\n1,2\n".as_bytes()).is_err());
    assert!(read_csv("# potts-landscape v9 slice_point\n".as_bytes()).is_err());
    assert!(read_csv("# potts-landscape v1 nonsense\n".as_bytes()).is_err());
    let mut buf = Vec::new();
    let critical = critical_records(&all_critical_temps().unwrap()).unwrap();
    write_csv(&mut buf, RecordKind::CriticalTemps, &critical, &[]).unwrap();
    let text = String::from_utf8(buf).unwrap().replace("2.745", "x2.745");
    assert!(read_csv(text.as_bytes()).is_err());
    let mut wrong = Vec::new();
    assert!(write_csv(&mut wrong, RecordKind::Census, &critical, &[]).is_err());
}

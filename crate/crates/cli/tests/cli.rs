use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potts-landscape")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Data rows of a CSV body: lines after the comment block and the header.
fn rows(body: &str) -> Vec<Vec<String>> {
    body.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn critical_reports_five_temperatures() {
    let out = run(&["critical"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert!(body.starts_with("# potts-landscape v1 critical_temps\n"));
    let rows = rows(&body);
    let names: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(names, ["butterfly", "cross", "ellis_wang", "touch", "umbilic"]);
    let value = |k: usize| rows[k][1].parse::<f64>().unwrap();
    assert_eq!(value(0), 18.0 / 7.0);
    assert!((value(1) - 2.74564).abs() < 1e-4);
    assert!((value(3) - 2.8024).abs() < 1e-3);
    assert_eq!(value(4), 3.0);

    let json = run(&["critical", "--format", "json"]);
    assert!(json.status.success());
    assert!(stdout(&json).contains("\"ellis_wang\""));
}

#[test]
fn census_counts_and_notes() {
    let out = run(&["census", "--beta", "2.75"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert!(body.contains("# local_minima 4\n"));
    assert!(body.contains("# morse_index_sum 1\n"));
    assert_eq!(rows(&body).len(), 7);

    let out = run(&["census", "--beta", "3.0"]);
    assert!(stdout(&out).contains("# degenerate_warning true"));
    assert!(stderr(&out).contains("degenerate"));
}

#[test]
fn census_at_ellis_wang_needs_a_looser_depth_window() {
    // 2.7726 is four decimals off 4 log 2, so the depths differ by ~1e-6.
    let strict = stdout(&run(&["census", "--beta", "2.7726", "--uv", "0,0"]));
    assert!(strict.contains("# local_minima 4\n"));
    assert!(!strict.contains("# global_minimizers 4\n"));
    let loose = stdout(&run(&["census", "--beta", "2.7726", "--uv", "0,0", "--tol", "1e-5"]));
    assert!(loose.contains("# global_minimizers 4\n"));
}

#[test]
fn field_arguments_agree() {
    let a = stdout(&run(&["census", "--beta", "2.5", "--alpha", "0.5,0.25,0.25"]));
    let uv = format!("{},{}", 2f64.ln(), 0.0);
    let b = stdout(&run(&["census", "--beta", "2.5", "--uv", &uv]));
    let pq = format!("{},{}", 3f64.sqrt() * 2f64.ln(), 2f64.ln());
    let c = stdout(&run(&["census", "--beta", "2.5", "--pq", &pq]));
    let count = |s: &str| s.lines().find(|l| l.starts_with("# local_minima")).unwrap().to_string();
    assert_eq!(count(&a), count(&b));
    assert_eq!(count(&a), count(&c));
    let neg = run(&["census", "--beta", "2.5", "--uv", "-1,0.5"]);
    assert!(neg.status.success(), "{}", stderr(&neg));
}

#[test]
fn domain_errors_exit_with_two() {
    for args in [
        &["census", "--beta", "-1"][..],
        &["census", "--beta", "2", "--alpha", "0.5,0.5"][..],
        &["census", "--beta", "2", "--alpha", "0.5,0.6,0.1"][..],
        &["critical", "--format", "svg"][..],
        &["maxwell", "--beta", "2.6", "--step", "0.5"][..],
        &["slice", "--beta", "2.5", "--extent", "1,0,0,1"][..],
        &["surface", "--grid", "4"][..],
        &["census"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn slice_csv_and_note_below_two() {
    let out = run(&["slice", "--beta", "2.3", "--samples", "50"]);
    assert!(out.status.success());
    let rows = rows(&stdout(&out));
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.len() == 13 && r[0] == "2.3"));

    let out = run(&["slice", "--beta", "1.5"]);
    assert!(out.status.success());
    let body = stdout(&out);
    assert!(body.contains("# no bifurcation curves"));
    assert!(self::rows(&body).is_empty());
}

#[test]
fn slice_svg_labels_cells() {
    let out = run(&["slice", "--beta", "2.75", "--format", "svg", "--extent=-0.03,0.03,-0.03,0.03", "--label-cells"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let svg = stdout(&out);
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("class=\"bifurcation\""));
    assert!(!svg.contains("stroke-dasharray"), "bifurcation curves are solid");
    assert!(svg.contains(">4</text>"));
    assert!(stderr(&out).lines().any(|l| l.starts_with("cell ") && l.ends_with("minima 4")));

    let out = run(&["slice", "--beta", "1.5", "--format", "svg"]);
    assert!(stdout(&out).contains(">1</text>"));
}

#[test]
fn maxwell_outputs() {
    let out = run(&["maxwell", "--beta", "2.6"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let body = stdout(&out);
    assert!(body.contains("# curve_status reached_merge"));
    let rows = rows(&body);
    let triple: Vec<_> = rows.iter().filter(|r| r[1] == "triple").collect();
    assert_eq!(triple.len(), 6);
    let depth: f64 = triple[0][11].parse().unwrap();
    assert!(triple.iter().all(|r| r[12] == "3" && (r[11].parse::<f64>().unwrap() - depth).abs() < 1e-12));
    assert!(rows.iter().filter(|r| r[1] == "curve").count() >= 30);
    assert_eq!(rows.iter().filter(|r| r[1] == "segment").count(), 6);

    let out = run(&["maxwell", "--beta", "2.4"]);
    let rows = self::rows(&stdout(&out));
    assert!(rows.iter().all(|r| r[1] == "segment"));

    let svg = stdout(&run(&["maxwell", "--beta", "2.6", "--format", "svg"]));
    assert!(svg.contains("class=\"maxwell\"") && svg.contains("stroke-dasharray"));

    let out = run(&["maxwell", "--beta", "1.5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("# no coexistence set"));
}

#[test]
fn ellis_wang_record_at_the_exact_temperature() {
    let beta = format!("{:?}", 4.0 * std::f64::consts::LN_2);
    let out = run(&["maxwell", "--beta", &beta]);
    assert!(out.status.success());
    let rows = rows(&stdout(&out));
    let ew: Vec<_> = rows.iter().filter(|r| r[1] == "ellis_wang").collect();
    assert_eq!(ew.len(), 1);
    assert_eq!(ew[0][12], "4");
}

#[test]
fn potential_at_triple_point_has_three_equal_basins() {
    let out = run(&["maxwell", "--beta", "2.6"]);
    let rows = rows(&stdout(&out));
    let t = rows.iter().find(|r| r[1] == "triple" && r[2] == "123").unwrap();
    let alpha = format!("{},{},{}", t[4], t[5], t[6]);
    let out = run(&["potential", "--beta", "2.6", "--alpha", &alpha, "--grid", "40"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let body = stdout(&out);
    let values: Vec<f64> = body
        .lines()
        .filter(|l| l.starts_with("# basin "))
        .map(|l| l.split_whitespace().nth(4).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    assert!(values.iter().all(|v| (v - values[0]).abs() < 1e-8));
    let grid_rows = self::rows(&body);
    assert_eq!(grid_rows.len(), 39 * 38 / 2);

    let svg = stdout(&run(&["potential", "--beta", "2.6", "--alpha", &alpha, "--grid", "20", "--format", "svg"]));
    assert!(svg.starts_with("<svg") && svg.contains("class=\"minimum\""));
}

#[test]
fn surface_formats_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.obj");
    let out = run(&["surface", "--grid", "16", "--format", "obj", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let obj = std::fs::read_to_string(&path).unwrap();
    assert!(obj.lines().any(|l| l.starts_with("v ")));
    assert!(obj.lines().any(|l| l.starts_with("f ")));

    let csv = stdout(&run(&["surface", "--grid", "16", "--beta-max", "3.2"]));
    let rows = rows(&csv);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[6].parse::<f64>().unwrap() <= 3.2));
}

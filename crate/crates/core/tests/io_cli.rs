use scherk::domain::{check, fixtures, VerdictKind};
use scherk::error::Error;
use scherk::io::{parse_domain, DomainFile};
use std::path::{Path, PathBuf};
use std::process::Command;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn scherk(out: &Path, args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_scherk")).arg("--out").arg(out).args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn report(out: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let t = tempfile::tempdir().unwrap();
    for (file, code) in [("triangle.json", 0), ("quadrilateral.json", 2), ("pentagon.json", 2), ("ideal_square.json", 0)] {
        let out = t.path().join(file);
        let (c, _) = scherk(&out, &["check", "--input", data(file).to_str().unwrap()]);
        assert_eq!(c, code, "{file}");
        assert_eq!(report(&out)["exit_status"], code);
    }
}

#[test]
fn usage_errors_exit_one_without_a_report() {
    let t = tempfile::tempdir().unwrap();
    let out = t.path().join("u");
    assert_eq!(scherk(&out, &["frobnicate"]).0, 1);
    assert_eq!(scherk(&out, &["check"]).0, 1);
    assert!(!out.exists());
}

#[test]
fn missing_input_is_a_usage_error_with_a_report() {
    let t = tempfile::tempdir().unwrap();
    let out = t.path().join("m");
    let (c, _) = scherk(&out, &["check", "--input", t.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(report(&out)["errors"].as_array().unwrap().len(), 1);
}

#[test]
fn iteration_cap_exits_three() {
    let t = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("triangle.json")).unwrap();
    let text = text.replace("\"h\": 0.03125,", "\"h\": 0.0625, \"max_iterations\": 1, \"tolerance\": 1e-14,");
    let input = write(t.path(), "capped.json", &text);
    let out = t.path().join("o");
    let (c, _) = scherk(&out, &["solve", "--input", input.to_str().unwrap()]);
    assert_eq!(c, 3);
    assert_eq!(report(&out)["exit_status"], 3);
}

#[test]
fn reports_are_byte_identical_across_runs_and_threads() {
    let t = tempfile::tempdir().unwrap();
    let input = data("triangle.json");
    let mut reports = Vec::new();
    for (i, threads) in ["1", "4", "1"].iter().enumerate() {
        let out = t.path().join(format!("r{i}"));
        let (c, _) = scherk(
            &out,
            &["--threads", threads, "flux", "--input", input.to_str().unwrap(), "--h", "0.0625", "--loops", "3"],
        );
        assert_eq!(c, 0);
        reports.push(std::fs::read(out.join("report.json")).unwrap());
        assert!(out.join("timings.json").exists() && out.join("flux.csv").exists());
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
}

#[test]
fn report_records_the_input_hash_and_seed() {
    let t = tempfile::tempdir().unwrap();
    let out = t.path().join("v");
    let input = data("triangle.json");
    let (c, stdout) = scherk(&out, &["--seed", "7", "validate", "--input", input.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert!(stdout.contains("valid"));
    let r = report(&out);
    assert_eq!(r["command"], "validate");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["input_sha256"], scherk::io::sha256_hex(&std::fs::read(&input).unwrap()));
    assert_eq!(r["payload"]["vertices"], 3);
}

#[test]
fn cmc_profile_header_names_the_case() {
    let t = tempfile::tempdir().unwrap();
    let out = t.path().join("c");
    let (c, stdout) = scherk(&out, &["cmc-profile", "--H", "0", "--param", "2", "--samples", "11"]);
    assert_eq!(c, 0);
    assert_eq!(stdout.trim(), "# case=H0-A>1, theta1=0.5235987756");
    let csv = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    assert!(csv.starts_with("# case=H0-A>1, theta1=0.5235987756\n"));
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "component,theta,f,fprime");
    assert_eq!(rows.len(), 12);
    assert_eq!(scherk(&t.path().join("n"), &["cmc-profile", "--H", "-1", "--param", "1"]).0, 1);
}

#[test]
fn schema_errors_carry_positions() {
    let text = "{\n  \"schema\": 1,\n  \"model\": \"half-plane\",\n  \"vertices\": [],\n  \"edges\": [],\n  \"bogus\": 3\n}\n";
    match parse_domain(text) {
        Err(Error::Schema(issues)) => {
            assert_eq!(issues.len(), 1);
            assert_eq!(issues[0].line, 6);
            assert!(issues[0].message.contains("bogus"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn semantic_errors_name_the_field() {
    let text = r#"{"schema": 1, "model": "half-plane",
 "vertices": [{"name": "a", "point": [0, -1]}, {"name": "b", "point": [0, 2]}, {"name": "c", "point": [1, 2]}],
 "edges": [{"kind": "A", "from": "a", "to": "b"}, {"kind": "B", "from": "b", "to": "zz"}, {"kind": "C", "from": "c", "to": "a", "data": 0}]}"#;
    let Err(Error::Schema(issues)) = parse_domain(text) else { panic!() };
    let all = issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
    assert!(all.contains("vertices[0]"), "{all}");
    assert!(all.contains("zz"), "{all}");
    assert!(issues.iter().all(|i| i.line >= 1));
}

#[test]
fn domain_files_round_trip() {
    for d in [fixtures::triangle(), fixtures::quadrilateral(), fixtures::pentagon(), fixtures::ideal_square(1.0)] {
        let d = d.unwrap();
        let text = DomainFile::from_domain(&d).to_json();
        let back = parse_domain(&text).unwrap().domain;
        assert_eq!(back.vertex_count(), d.vertex_count());
        assert_eq!(check(&back).unwrap().kind, check(&d).unwrap().kind);
        assert_eq!(DomainFile::from_domain(&back).to_json(), text);
    }
}

#[test]
fn bundled_files_parse_and_agree_with_the_fixtures() {
    let expect = [
        ("triangle.json", VerdictKind::Satisfied),
        ("quadrilateral.json", VerdictKind::Violated),
        ("pentagon.json", VerdictKind::Violated),
        // Two A sides of a triangle always outweigh the third side.
        ("convex_corner.json", VerdictKind::Violated),
        ("annulus.json", VerdictKind::Satisfied),
    ];
    for (file, kind) in expect {
        let p = scherk::io::read_domain_file(&data(file)).unwrap();
        assert_eq!(check(&p.domain).unwrap().kind, kind, "{file}");
    }
}

#[test]
fn disk_files_describe_the_same_domain() {
    let t = tempfile::tempdir().unwrap();
    let half = std::fs::read_to_string(data("triangle.json")).unwrap();
    let h = parse_domain(&half).unwrap().domain;
    let disk: Vec<String> = h
        .vertices
        .iter()
        .map(|v| match v {
            scherk::hyperbolic::Endpoint::Interior(p) => {
                let (a, b) = scherk::hyperbolic::disk::from_halfplane(*p);
                format!("[{a:.17}, {b:.17}]")
            }
            _ => unreachable!(),
        })
        .collect();
    let text = format!(
        r#"{{"schema": 1, "model": "disk",
 "vertices": [{{"name": "v1", "point": {}}}, {{"name": "v2", "point": {}}}, {{"name": "v3", "point": {}}}],
 "edges": [{{"kind": "A", "from": "v1", "to": "v2"}}, {{"kind": "C", "from": "v2", "to": "v3", "data": 0}}, {{"kind": "C", "from": "v3", "to": "v1", "data": 0}}]}}"#,
        disk[0], disk[1], disk[2]
    );
    let d = scherk::io::read_domain_file(&write(t.path(), "disk.json", &text)).unwrap().domain;
    let (a, b) = (check(&h).unwrap(), check(&d).unwrap());
    assert_eq!(a.kind, b.kind);
    assert!((a.checks[0].gamma - b.checks[0].gamma).abs() < 1e-9);
    assert!((a.checks[0].alpha - b.checks[0].alpha).abs() < 1e-9);
}

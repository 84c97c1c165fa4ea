use dpp_palm_cli::csv::Report;
use dpp_palm_cli::run;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn report(&self) -> Report {
        Report::parse(&self.stdout)
    }
}

fn dpp(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("dpp-palm").chain(args.iter().copied()), &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn spec(dir: &TempDir, name: &str, body: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const DIAG: &str = r#"{"family":"finite","matrix":[[[0.3,0],[0,0]],[[0,0],[0.7,0]]]}"#;

fn rank_two() -> String {
    let (a, b, t) = (5.0 / 6.0, -1.0 / 6.0, 1.0 / 3.0);
    format!(r#"{{"family":"finite","matrix":[[[{a},0],[{b},0],[{t},0]],[[{b},0],[{a},0],[{t},0]],[[{t},0],[{t},0],[{t},0]]]}}"#)
}

fn diagonal(values: &[f64]) -> String {
    let n = values.len();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cells: Vec<String> = (0..n)
                .map(|j| format!("[{},0]", if i == j { values[i] } else { 0.0 }))
                .collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!(r#"{{"family":"finite","matrix":[{}]}}"#, rows.join(","))
}

#[test]
fn validate_accepts_and_names_violations() {
    let dir = TempDir::new().unwrap();
    let ok = dpp(&["validate", &spec(&dir, "d.json", DIAG)]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);

    let cases = [
        (r#"{"family":"ginibre","params":{"alpha":1,"beta":1.5}}"#, "param-bound", "alpha*beta exceeds 1"),
        (
            r#"{"family":"sphere-multiquadric","params":{"delta":0.5,"rho":1}}"#,
            "existence-bound",
            "existence bound",
        ),
        (
            r#"{"family":"finite","matrix":[[[0.5,0],[0.1,0]],[[0.3,0],[0.5,0]]]}"#,
            "non-Hermitian",
            "not Hermitian",
        ),
        (
            r#"{"family":"finite","matrix":[[[1.5,0],[0,0]],[[0,0],[0.5,0]]]}"#,
            "spectrum",
            "eigenvalue",
        ),
    ];
    let mut tokens = Vec::new();
    for (i, (body, token, phrase)) in cases.iter().enumerate() {
        let r = dpp(&["validate", &spec(&dir, &format!("c{i}.json"), body)]);
        assert_eq!(r.code, 2, "{body}");
        assert!(r.stderr.contains(&format!("error[{token}]")), "{}", r.stderr);
        assert!(r.stderr.contains(phrase), "{}", r.stderr);
        tokens.push(*token);
    }
    tokens.dedup();
    assert_eq!(tokens.len(), 4);
}

#[test]
fn parse_failures_exit_three_with_location() {
    let dir = TempDir::new().unwrap();
    let r = dpp(&["validate", &spec(&dir, "a.json", "{\"family\":\"ginibre\",\n\"params\":{\"alpha\":1,\"beta\":1},\n\"colour\":1}")]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("colour") && r.stderr.contains("line 3"), "{}", r.stderr);

    let r = dpp(&["validate", &spec(&dir, "b.json", r#"{"family":"ginibre","params":{"alpha":1,"beta":1,"x":2}}"#)]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("params.x"), "{}", r.stderr);

    let r = dpp(&["validate", &spec(&dir, "c.json", r#"{"family":"finite","matrix":[[[1,0],[0,0]]]}"#)]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("not square"), "{}", r.stderr);

    assert_eq!(dpp(&["validate", "/nonexistent/spec.json"]).code, 3);
    assert_eq!(dpp(&["frobnicate"]).code, 3);
    assert_eq!(dpp(&["repulsiveness", &spec(&dir, "d.json", DIAG), "--anchor", "one"]).code, 3);
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bin = env!("CARGO_BIN_EXE_dpp-palm");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["validate", &spec(&dir, "d.json", DIAG)]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("family,"));
    let bad = status(&["validate", &spec(&dir, "g.json", r#"{"family":"ginibre","params":{"alpha":1,"beta":1.5}}"#)]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(status(&["validate"]).status.code(), Some(3));
    let big = spec(&dir, "big.json", &diagonal(&[0.5; 13]));
    assert_eq!(status(&["couple", &big]).status.code(), Some(4));
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}

#[test]
fn repulsiveness_reports() {
    let dir = TempDir::new().unwrap();
    let g = dpp(&["repulsiveness", &spec(&dir, "g.json", r#"{"family":"ginibre","params":{"alpha":0.5,"beta":1.5}}"#)]);
    assert_eq!(g.code, 0, "{}", g.stderr);
    let rep = g.report();
    assert!((rep.blocks[0].value(0, "p_u").unwrap() - 0.75).abs() < 1e-6);
    assert_eq!(rep.blocks[1].header, vec!["r", "f_u"]);

    // bit-for-bit the library values
    use dpp_palm::kernel::repulsiveness_p;
    use dpp_palm::models::{ginibre_kernel, GinibreParams};
    let k = ginibre_kernel(GinibreParams::new(0.5, 1.5).unwrap()).unwrap();
    let lib = repulsiveness_p(&k, &dpp_palm::Point::Euclidean(vec![0.0, 0.0]), &Default::default()).unwrap();
    assert_eq!(rep.blocks[0].rows[0][0], dpp_palm_cli::csv::number(lib.p_u));
    assert_eq!(rep.blocks[0].rows[0][1], dpp_palm_cli::csv::number(lib.norm_sq));

    let j = dpp(&["repulsiveness", &spec(&dir, "j.json", r#"{"family":"jinc","params":{"d":2}}"#)]);
    assert!((j.report().blocks[0].value(0, "p_u").unwrap() - 1.0).abs() < 1e-6);

    let rho = 1.0 / (2.0 * PI);
    let mq = dpp(&[
        "repulsiveness",
        &spec(&dir, "m.json", &format!(r#"{{"family":"sphere-multiquadric","params":{{"delta":0.5,"rho":{rho}}}}}"#)),
    ]);
    assert_eq!(mq.code, 0, "{}", mq.stderr);
    let rep = mq.report();
    let b = rep.block_with("p_without_multiplicity").unwrap();
    assert!((b.value(0, "p_series").unwrap() - 0.549306144334).abs() < 1e-9);
    assert!((b.value(0, "p_without_multiplicity").unwrap() - 2.0 / 3.0).abs() < 1e-9);
    assert_eq!(b.rows[0][b.column("discrepancy").unwrap()], "true");
    assert!((rep.blocks[0].value(0, "p_u").unwrap() - 0.549306144334).abs() < 1e-8);
    assert!(mq.stderr.contains("warning"));

    let zero = dpp(&["repulsiveness", &spec(&dir, "z.json", &diagonal(&[0.5, 0.0])), "--anchor", "2"]);
    assert_eq!(zero.code, 2);
    assert!(zero.stderr.contains("zero-intensity"));
}

#[test]
fn couple_reports() {
    let dir = TempDir::new().unwrap();
    let r = dpp(&["couple", &spec(&dir, "r.json", &rank_two()), "--anchor", "1", "--samples", "20000", "--seed", "5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = r.report();
    let head = &rep.blocks[0];
    assert!((head.value(0, "max_flow").unwrap() - 1.0).abs() < 1e-8);
    assert!((head.value(0, "p_u").unwrap() - 1.0).abs() < 1e-9);
    let f = rep.blocks[1].values("f_u").unwrap();
    for (got, want) in f.iter().zip([5.0 / 6.0, 1.0 / 30.0, 2.0 / 15.0]) {
        assert!((got - want).abs() < 1e-9);
    }

    let d = dpp(&["couple", &spec(&dir, "d.json", DIAG), "--anchor", "2"]);
    let head = &d.report().blocks[0];
    assert!((head.value(0, "p_u").unwrap() - 0.7).abs() < 1e-9);
    assert!((head.value(0, "max_flow").unwrap() - 1.0).abs() < 1e-8);

    let grid = dpp(&[
        "couple",
        &spec(&dir, "g.json", r#"{"family":"ginibre","params":{"alpha":1,"beta":1}}"#),
        "--window=-1.5,1.5,-1.5,1.5",
        "--resolution",
        "3",
        "--samples",
        "5000",
    ]);
    assert_eq!(grid.code, 0, "{}", grid.stderr);
    assert_eq!(grid.report().blocks[0].rows[0][0], "5");
    let missing = dpp(&["couple", &spec(&dir, "g2.json", r#"{"family":"ginibre","params":{"alpha":1,"beta":1}}"#)]);
    assert_eq!(missing.code, 2);
}

#[test]
fn profile_reports() {
    let r = dpp(&["profile", "--beta", "1", "--radii", "0:6:0.001"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = r.report();
    let b = &rep.blocks[0];
    assert_eq!(b.header, vec!["r", "density_ginibre", "density_jinc"]);
    let i1 = b.values("r").unwrap().iter().position(|&x| (x - 1.0).abs() < 1e-12).unwrap();
    assert!((b.value(i1, "density_ginibre").unwrap() - 2.0 * (-1.0f64).exp()).abs() < 1e-11);
    // small r: J1(2r) ~ r, so 2 J1(2r)^2 / r ~ 2r
    let small = b.value(1, "density_jinc").unwrap();
    assert!((small / (2.0 * 0.001) - 1.0).abs() < 1e-5);
    for total in rep.blocks[1].values("grid_integral").unwrap() {
        assert!(total <= 1.0 + 1e-3);
    }
    assert_eq!(dpp(&["profile", "--beta", "1.5"]).code, 2);
    assert_eq!(dpp(&["profile", "--radii", "0:1"]).code, 3);
    let thin = dpp(&["profile", "--beta", "0.5", "--models", "jinc"]);
    assert_eq!(thin.report().blocks[0].header, vec!["r", "density_jinc"]);
}

#[test]
fn moments_reports() {
    let r = dpp(&["moments", "--model", "jinc", "--k", "0,1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let b = &r.report().blocks[0];
    assert!((b.value(0, "closed_form").unwrap() - 1.0).abs() < 1e-12);
    assert!((b.value(0, "quadrature").unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(b.value(1, "closed_form"), Some(f64::INFINITY));
    assert_eq!(b.rows[1][b.column("divergent").unwrap()], "true");

    let g = dpp(&["moments", "--model", "ginibre", "--rho", &(1.0 / PI).to_string(), "--k", "2"]);
    let b = &g.report().blocks[0];
    assert!((b.value(0, "closed_form").unwrap() - 1.0).abs() < 1e-12);
    assert!((b.value(0, "quadrature").unwrap() - 1.0).abs() < 1e-8);

    let neg = dpp(&["moments", "--model", "jinc", "--k", "-1.5,-1"]);
    assert_eq!(neg.code, 0, "{}", neg.stderr);
    let bad = dpp(&["moments", "--model", "jinc", "--k", "-2"]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("param-bound"));
}

#[test]
fn sample_reports() {
    let dir = TempDir::new().unwrap();
    let id = dpp(&["sample", &spec(&dir, "i.json", &diagonal(&[1.0, 1.0, 1.0])), "--samples", "50", "--points"]);
    assert_eq!(id.code, 0, "{}", id.stderr);
    let rep = id.report();
    assert!(rep.blocks[1].values("count").unwrap().iter().all(|&c| c == 3.0));
    assert_eq!(rep.blocks[2].rows.len(), 150);

    let d = spec(&dir, "d.json", DIAG);
    let a = dpp(&["sample", &d, "--samples", "100000", "--seed", "9"]);
    let b = dpp(&["sample", &d, "--samples", "100000", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, dpp(&["sample", &d, "--samples", "100000", "--seed", "10"]).stdout);

    let g = dpp(&[
        "sample",
        &spec(&dir, "g.json", r#"{"family":"ginibre","params":{"alpha":1,"beta":1}}"#),
        "--window=-3,3,-3,3",
        "--resolution",
        "24",
        "--samples",
        "2000",
        "--seed",
        "1",
    ]);
    assert_eq!(g.code, 0, "{}", g.stderr);
    let head = &g.report().blocks[0];
    assert!((head.value(0, "expected_count").unwrap() - 36.0 / PI).abs() < 1e-9);
    // the count variance is at most the mean
    let sd = (36.0 / PI / 2000.0).sqrt();
    assert!((head.value(0, "mean_count").unwrap() - 36.0 / PI).abs() < 4.0 * sd);
}

#[test]
fn reports_round_trip_and_repeat() {
    let dir = TempDir::new().unwrap();
    let r = spec(&dir, "r.json", &rank_two());
    for args in [
        vec!["couple", r.as_str(), "--seed", "3", "--samples", "1000"],
        vec!["repulsiveness", r.as_str(), "--anchor", "2"],
        vec!["profile", "--radii", "0:3:0.1"],
        vec!["moments", "--model", "jinc", "--k", "-1,0.5,1"],
    ] {
        let a = dpp(&args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a.report().render(), a.stdout);
        assert!(!a.stdout.contains('\r'));
        assert_eq!(dpp(&args).stdout, a.stdout);
    }
}

//! End-to-end tests that exercise the compiled `schmidtlab` binary: output
//! formats, exit codes, config handling, and run-to-run determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schmidtlab"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .output()
        .expect("failed to spawn schmidtlab")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout was not UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr was not UTF-8")
}

fn scratch_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("schmidtlab-test-{}-{name}", std::process::id()));
    p
}

/// Split a CSV body into rows of parsed f64 columns, skipping the header.
fn parse_csv(body: &str, expected_header: &str) -> Vec<Vec<f64>> {
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some(expected_header), "unexpected CSV header");
    lines
        .map(|line| {
            line.split(',')
                .map(|field| match field {
                    "true" => 1.0,
                    "false" => 0.0,
                    other => other.parse::<f64>().unwrap_or_else(|_| {
                        panic!("unparseable CSV field `{other}` in line `{line}`")
                    }),
                })
                .collect()
        })
        .collect()
}

#[test]
fn table_analytic_two_rows_exact_bytes() {
    let out = run(&["table", "--eta-min", "1", "--eta-max", "10", "--steps", "2"]);
    assert!(out.status.success());
    let expected = "eta,k_exact,k_asymptotic,k_fit\n\
                    1.00000000000000e0,1.10454020149860e0,9.18714564141460e-1,1.00000000000000e0\n\
                    1.00000000000000e1,3.48687250226293e0,3.45756769010636e0,3.52000000000000e0\n";
    assert_eq!(stdout_str(&out), expected);
}

#[test]
fn table_log_scale_hits_endpoints_exactly() {
    let out = run(&[
        "table",
        "--eta-min",
        "1",
        "--eta-max",
        "4",
        "--steps",
        "3",
        "--scale",
        "log",
    ]);
    assert!(out.status.success());
    let rows = parse_csv(&stdout_str(&out), "eta,k_exact,k_asymptotic,k_fit");
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], 1.0);
    assert!((rows[1][0] - 2.0).abs() <= 1e-15);
    assert_eq!(rows[2][0], 4.0);
}

#[test]
fn table_numerical_rows_satisfy_purity_identity() {
    let out = run(&[
        "table",
        "--eta-min",
        "0.5",
        "--eta-max",
        "2",
        "--steps",
        "3",
        "--numerical",
        "--grid-n",
        "256",
    ]);
    assert!(out.status.success());
    let header = "eta,k_exact,k_asymptotic,k_fit,k_numerical,purity_numerical,converged";
    let rows = parse_csv(&stdout_str(&out), header);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let (k_exact, k_num, purity) = (row[1], row[4], row[5]);
        assert!(
            (k_num * purity - 1.0).abs() <= 1e-3,
            "numerical K and purity are not reciprocal at eta = {}",
            row[0]
        );
        assert!(
            ((k_num - k_exact) / k_exact).abs() <= 1e-3,
            "numerical K strayed from the closed form at eta = {}",
            row[0]
        );
    }
}

#[test]
fn table_warns_when_refinement_moves_the_answer() {
    // n = 32 is far too coarse, so the half-grid check must flag every row.
    let out = run(&[
        "table",
        "--eta-min",
        "1",
        "--eta-max",
        "2",
        "--steps",
        "2",
        "--numerical",
        "--grid-n",
        "32",
    ]);
    assert!(out.status.success());
    let err = stderr_str(&out);
    assert!(
        err.contains("warning:") && err.contains("--grid-n"),
        "expected a refinement warning on stderr, got: {err}"
    );
    let header = "eta,k_exact,k_asymptotic,k_fit,k_numerical,purity_numerical,converged";
    for row in parse_csv(&stdout_str(&out), header) {
        assert_eq!(row[6], 0.0, "row should be marked unconverged");
    }
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let args = ["table", "--eta-min", "1", "--eta-max", "3", "--steps", "5"];
    let to_stdout = run(&args);
    assert!(to_stdout.status.success());

    let path = scratch_path("table.csv");
    let mut file_args: Vec<&str> = args.to_vec();
    let path_str = path.to_str().unwrap();
    file_args.extend_from_slice(&["--out", path_str]);
    let to_file = run(&file_args);
    assert!(to_file.status.success());
    assert!(
        to_file.stdout.is_empty(),
        "file mode should leave stdout empty"
    );

    let written = std::fs::read_to_string(&path).expect("output file missing");
    assert_eq!(written, stdout_str(&to_stdout));
    std::fs::remove_file(&path).ok();
}

#[test]
fn decompose_json_document_shape() {
    let out = run(&["decompose", "--eta", "2", "--grid-n", "128", "--modes", "2"]);
    assert!(out.status.success());
    let body = stdout_str(&out);
    let doc: serde_json::Value = serde_json::from_str(&body).expect("invalid JSON");

    for key in [
        "eta",
        "grid_n",
        "k_extent",
        "q_extent",
        "raw_trace",
        "schmidt_number",
        "n_significant",
        "eigenvalues",
        "entropies",
        "modes",
        "convergence",
    ] {
        assert!(doc.get(key).is_some(), "missing top-level key `{key}`");
    }
    // Field order is part of the contract; check it on the raw text since the
    // JSON parser normalizes maps.
    let positions: Vec<usize> = [
        "\"eta\"",
        "\"grid_n\"",
        "\"raw_trace\"",
        "\"schmidt_number\"",
        "\"eigenvalues\"",
        "\"entropies\"",
        "\"modes\"",
        "\"convergence\"",
    ]
    .iter()
    .map(|k| {
        body.find(k)
            .unwrap_or_else(|| panic!("`{k}` not in output"))
    })
    .collect();
    assert!(
        positions.windows(2).all(|w| w[0] < w[1]),
        "top-level keys out of order"
    );

    assert_eq!(doc["eta"].as_f64(), Some(2.0));
    assert_eq!(doc["grid_n"].as_u64(), Some(128));

    let eigs: Vec<f64> = doc["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!(eigs.windows(2).all(|w| w[0] >= w[1]), "spectrum not sorted");
    let total: f64 = eigs.iter().sum();
    assert!(
        (total - 1.0).abs() <= 1e-12,
        "normalized spectrum must sum to 1"
    );
    let k_from_eigs = 1.0 / eigs.iter().map(|l| l * l).sum::<f64>();
    let k_reported = doc["schmidt_number"].as_f64().unwrap();
    assert!(((k_from_eigs - k_reported) / k_reported).abs() <= 1e-12);

    let modes = &doc["modes"];
    assert_eq!(modes["count"].as_u64(), Some(2));
    assert_eq!(modes["k_nodes"].as_array().unwrap().len(), 128);
    assert_eq!(modes["field_modes"].as_array().unwrap().len(), 2);
    let first_entry = &modes["field_modes"][0][0];
    assert_eq!(
        first_entry.as_array().unwrap().len(),
        2,
        "mode entries are [re, im] pairs"
    );

    let conv = &doc["convergence"];
    assert_eq!(conv["coarse_grid_n"].as_u64(), Some(64));
    assert!(conv["relative_delta"].as_f64().unwrap() >= 0.0);
}

#[test]
fn decompose_omits_modes_unless_requested() {
    let out = run(&["decompose", "--eta", "2", "--grid-n", "64"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(
        doc.get("modes").is_none(),
        "modes block should be absent when --modes 0"
    );
}

#[test]
fn decompose_csv_spectrum_with_summary_on_stderr() {
    let out = run(&[
        "decompose",
        "--eta",
        "2",
        "--grid-n",
        "64",
        "--output",
        "csv",
    ]);
    assert!(out.status.success());
    let body = stdout_str(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue"));
    let mut previous = f64::INFINITY;
    for (i, line) in lines.enumerate() {
        let (idx, val) = line.split_once(',').expect("malformed spectrum row");
        assert_eq!(idx.parse::<usize>().unwrap(), i);
        let val: f64 = val.parse().unwrap();
        assert!(val <= previous, "spectrum rows must be descending");
        previous = val;
    }
    let err = stderr_str(&out);
    assert!(
        err.contains("eta = 2") && err.contains("K = "),
        "missing summary: {err}"
    );
}

#[test]
fn decompose_orders_flag_controls_entropy_orders() {
    let out = run(&[
        "decompose",
        "--eta",
        "1",
        "--grid-n",
        "64",
        "--orders",
        "2,4",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let orders: Vec<f64> = doc["entropies"]["orders"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(orders, vec![2.0, 4.0]);
    // The order-2 Tsallis entropy and the linear entropy are the same quantity.
    let tsallis2 = doc["entropies"]["tsallis"][0].as_f64().unwrap();
    let linear = doc["entropies"]["linear"].as_f64().unwrap();
    assert_eq!(tsallis2, linear);
}

#[test]
fn verify_passes_at_default_tolerance() {
    let out = run(&["verify", "--eta", "1,5,10"]);
    assert!(out.status.success());
    let body = stdout_str(&out);
    assert!(
        body.contains("verify: PASS - 9/9 checks within tol"),
        "got: {body}"
    );
    assert_eq!(body.matches(" ok\n").count(), 9);
    assert_eq!(body.matches("FAIL").count(), 0);
}

#[test]
fn verify_fails_at_unreachable_tolerance() {
    let out = run(&["verify", "--eta", "1", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    let body = stdout_str(&out);
    assert!(body.contains("verify: FAIL"), "got: {body}");
}

#[test]
fn verify_json_document_shape() {
    let out = run(&["verify", "--eta", "5", "--output", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["pass"].as_bool(), Some(true));
    assert_eq!(doc["grid_n"].as_u64(), Some(512));
    let row = &doc["results"][0];
    for key in [
        "eta",
        "k_exact",
        "k_spectrum",
        "spectrum_residual",
        "k_purity",
        "purity_residual",
        "k_field",
        "k_atom",
        "field_atom_residual",
        "pass",
    ] {
        assert!(row.get(key).is_some(), "missing result key `{key}`");
    }
    assert!(row["spectrum_residual"].as_f64().unwrap() < 1e-3);
    assert!(row["purity_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn verify_rejects_csv_output() {
    let out = run(&["verify", "--eta", "1", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["decompose", "--eta", "3", "--grid-n", "128", "--modes", "1"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "decompose output must be deterministic"
    );

    let sweep = [
        "table",
        "--eta-min",
        "0.5",
        "--eta-max",
        "9",
        "--steps",
        "20",
    ];
    let first = run(&sweep);
    let second = run(&sweep);
    assert_eq!(
        first.stdout, second.stdout,
        "table output must be deterministic"
    );
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let path = scratch_path("settings.conf");
    std::fs::write(
        &path,
        "# shared settings\neta = 5\ngrid-n = 256\ntol = 1e-2\n",
    )
    .unwrap();
    let path_str = path.to_str().unwrap();

    // Config alone supplies the eta list.
    let out = run(&["verify", "--config", path_str]);
    assert!(out.status.success());
    assert!(stdout_str(&out).contains("eta = 5"));

    // An explicit flag beats the config value.
    let out = run(&["verify", "--config", path_str, "--eta", "1"]);
    assert!(out.status.success());
    let body = stdout_str(&out);
    assert!(body.contains("eta = 1") && !body.contains("eta = 5"));

    std::fs::remove_file(&path).ok();
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let path = scratch_path("bad.conf");
    std::fs::write(&path, "bogus-key = 3\n").unwrap();
    let out = run(&["table", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("bogus-key"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["table", "--bogus-flag"]).status.code(), Some(2));
    assert_eq!(run(&["decompose"]).status.code(), Some(2));
    assert!(stderr_str(&run(&["decompose"])).contains("decompose requires --eta"));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(
        run(&["decompose", "--eta", "1", "--grid-n", "8"])
            .status
            .code(),
        Some(2)
    );
    let csv_modes = run(&["decompose", "--eta", "1", "--modes", "2", "--output", "csv"]);
    assert_eq!(csv_modes.status.code(), Some(2));
    assert!(stderr_str(&csv_modes).contains("--output json"));
}

#[test]
fn help_and_version_exit_cleanly() {
    let help = run(&["--help"]);
    assert!(help.status.success());
    let text = stdout_str(&help);
    assert!(text.contains("table") && text.contains("decompose") && text.contains("verify"));
    assert!(run(&["--version"]).status.success());
}

#[test]
fn thread_env_var_is_validated() {
    let ok = bin()
        .args(["table", "--eta-min", "1", "--eta-max", "2", "--steps", "2"])
        .env("SCHMIDTLAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(ok.status.success());

    let auto = bin()
        .args(["table", "--eta-min", "1", "--eta-max", "2", "--steps", "2"])
        .env("SCHMIDTLAB_THREADS", "0")
        .output()
        .unwrap();
    assert!(auto.status.success());

    let bad = bin()
        .args(["table", "--eta-min", "1", "--eta-max", "2", "--steps", "2"])
        .env("SCHMIDTLAB_THREADS", "abc")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr_str(&bad).contains("SCHMIDTLAB_THREADS"));
}

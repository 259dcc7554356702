use std::process::{Command, Output};

fn xfermi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xfermi"))
        .args(args)
        .env_remove("XFERMI_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(xfermi(&["--help"]).status.code(), Some(0));
    assert_eq!(xfermi(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(xfermi(&["fermi", "--density", "-1"]).status.code(), Some(1));
    assert_eq!(xfermi(&["eos", "--sweep", "t:0:1:3"]).status.code(), Some(1));
    let starved = xfermi(&["eos", "--eta", "30", "--max-subdivisions", "1", "--rel-tol", "1e-15"]);
    assert_eq!(starved.status.code(), Some(2), "{}", String::from_utf8_lossy(&starved.stderr));
}

#[test]
fn csv_and_json_carry_the_same_rows() {
    let csv = stdout(&xfermi(&["eos", "--sweep", "eta:-2:4:4", "--format", "csv"]));
    let json: serde_json::Value = serde_json::from_str(&stdout(&xfermi(&["eos", "--sweep", "eta:-2:4:4", "--format", "json"]))).unwrap();
    let rows = json["rows"].as_array().unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), rows.len());
    for (line, row) in body.iter().zip(rows) {
        for (key, cell) in header.iter().zip(line.split(',')) {
            match &row[*key] {
                serde_json::Value::Number(n) => assert_eq!(cell.parse::<f64>().unwrap(), n.as_f64().unwrap()),
                serde_json::Value::String(s) => assert_eq!(cell, s),
                other => panic!("unexpected cell {other}"),
            }
        }
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("xfermi-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    std::fs::write(&path, "# defaults\nstatistics = fd\nformat = csv\nn_lambda3 = 0.1\n").unwrap();
    let path = path.to_str().unwrap();

    let from_file = stdout(&xfermi(&["--config", path, "virial"]));
    assert!(from_file.starts_with("n_lambda3,"), "{from_file}");
    let direct = stdout(&xfermi(&["virial", "--statistics", "fd", "--format", "csv", "--n-lambda3", "0.1"]));
    assert_eq!(from_file, direct);

    let overridden = stdout(&xfermi(&["--config", path, "virial", "--format", "json", "--n-lambda3", "0.2"]));
    let json: serde_json::Value = serde_json::from_str(&overridden).unwrap();
    assert_eq!(json["meta"]["statistics"], "fd");
    assert_eq!(json["rows"][0]["n_lambda3"], 0.2);

    // n_lambda3 belongs to other subcommands and is skipped for fermi
    assert!(xfermi(&["--config", path, "fermi"]).status.success());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["oracle", "--samples", "5000", "--format", "csv"];
    let flag = stdout(&xfermi(&[&args[..], &["--seed", "9"]].concat()));
    let env = Command::new(env!("CARGO_BIN_EXE_xfermi")).args(args).env("XFERMI_SEED", "9").output().unwrap();
    assert_eq!(flag, String::from_utf8(env.stdout).unwrap());
    assert_ne!(flag, stdout(&xfermi(&args)));
}

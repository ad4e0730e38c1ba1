use std::path::PathBuf;
use std::process::{Command, Output};

fn cattaneo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cattaneo")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn classify_plate() {
    let o = cattaneo(&["classify", "--alpha", "0", "--beta", "1", "--gamma", "0.5", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "T3 Polynomial k = 1/6\n");
}

#[test]
fn classify_json_is_structured() {
    let o = cattaneo(&["classify", "--point", "1/2,0", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["region"], "L124s");
    assert_eq!(v["result"]["order"], "1/2");
    assert_eq!(v["config"]["point"]["alpha"], "1/2");
}

#[test]
fn usage_errors_exit_2_and_name_the_key() {
    let o = cattaneo(&["classify", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--alpha"), "{}", stderr(&o));

    let o = cattaneo(&["classify", "--alpha", "x", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--alpha"));

    let o = cattaneo(&["spectrum", "--preset", "example1", "--mu-range", "1e2:1e8:cubic:13"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--mu-range"));

    let o = cattaneo(&["preset", "show", "example9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analysis_failure_exits_1() {
    // beta < 2 alpha - 1: the generator is not invertible
    let o = cattaneo(&["semigroup", "--point", "1,0", "--modes", "n4:5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let path = scratch("point.conf");
    std::fs::write(&path, "# plate\ncommand = classify\nalpha = 0\nbeta = 1\ngamma = 1/2\n").unwrap();
    let p = path.to_str().unwrap();
    let o = cattaneo(&["--config", p]);
    assert_eq!(stdout(&o), "T3 Polynomial k = 1/6\n");
    let o = cattaneo(&["classify", "--config", p, "--alpha", "1/2", "--beta", "0"]);
    assert_eq!(stdout(&o), "L124 Polynomial k = 1/2\n");

    std::fs::write(&path, "alpha = 0\nwobble = 3\n").unwrap();
    let o = cattaneo(&["classify", "--config", p, "--beta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("wobble"));

    std::fs::write(&path, "alpha 0\n").unwrap();
    let o = cattaneo(&["classify", "--config", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"));
}

#[test]
fn spectrum_csv() {
    let path = scratch("spectrum.csv");
    let o = cattaneo(&[
        "spectrum",
        "--preset",
        "example2",
        "--mu-range",
        "1e2:1e8:log:13",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "mu,root_index,re,im,branch,pred_re,pred_im,err_re,err_im");
    assert_eq!(lines.len(), 1 + 13 * 4);
    assert!(lines[1].starts_with("1.0000000000000000e2,0,"));
    assert!(lines[52].starts_with("1.0000000000000000e8,3,"));
    // 17 significant digits and a prediction on every row
    assert!(lines[1..].iter().all(|l| l.split(',').all(|f| !f.is_empty())));
    let re = lines[1].split(',').nth(2).unwrap();
    assert_eq!(re.split('e').next().unwrap().trim_start_matches('-').len(), 18);
}

#[test]
fn spectrum_without_table_leaves_predictions_blank() {
    let o = cattaneo(&["spectrum", "--point", "0,1,1/2", "--sigma", "3", "--mu-range", "1e2:1e3:log:2", "--csv", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.ends_with(",,,,,"), "{row}");
}

#[test]
fn verify_tables_rerun_is_byte_identical() {
    let (a, b) = (scratch("t1a.json"), scratch("t1b.json"));
    let (ca, cb) = (scratch("t1a.csv"), scratch("t1b.csv"));
    for (j, c) in [(&a, &ca), (&b, &cb)] {
        let o = cattaneo(&["verify-tables", "--m", "1", "--out", j.to_str().unwrap(), "--csv", c.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(&ca).unwrap(), std::fs::read(&cb).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 14);
}

#[test]
fn verify_tables_exit_code_follows_the_report() {
    let o = cattaneo(&["verify-tables", "--m", "0", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let all = v["passed_rows"] == v["total_rows"];
    assert_eq!(o.status.code(), Some(if all { 0 } else { 1 }));
    assert_eq!(v["total_rows"], 9);
}

#[test]
fn acceptance_subset_json() {
    let o = cattaneo(&["acceptance", "--only", "1,4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    assert_eq!(v["criteria"][1]["id"], 4);
}

#[test]
fn presets() {
    let o = cattaneo(&["preset", "list"]);
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = cattaneo(&["preset", "show", "example3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["expected_verdict"]["order"], "3/2");
    assert!(v["sequence"]["kind"].is_string());
}

#[test]
fn atlas_grid_header_and_size() {
    let o = cattaneo(&["atlas-grid", "--resolution", "5", "--gamma", "1/2"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "alpha,beta,gamma,label,kind,order_num,order_den");
    assert_eq!(lines.len(), 26);
    assert!(lines.contains(&"5.0000000000000000e-1,2.5000000000000000e-1,5.0000000000000000e-1,F12,Polynomial,1,1"), "{out}");
}

#[test]
fn semigroup_outputs() {
    let o = cattaneo(&["semigroup", "--preset", "example2", "--trace", "energy", "--modes", "n4:30", "--t-range", "0:20:lin:21", "--csv", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,energy,q_norm"));
    let energies: Vec<f64> = lines.take(21).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(energies.windows(2).all(|w| w[1] <= w[0]));

    let o = cattaneo(&["semigroup", "--preset", "example2", "--t-range", "1:1e2:log:5", "--modes", "n4:50", "--csv", "-"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("t,norm,argmax_mode"));
}

#[test]
fn resolvent_csv_and_thread_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_cattaneo"))
        .args(["resolvent", "--preset", "example2", "--lambda-range", "1e1:1e2:log:6", "--csv", "-"])
        .env("CATTANEO_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("lambda,norm,argmax_mu"));
    assert_eq!(out.lines().count(), 7);

    let o = Command::new(env!("CARGO_BIN_EXE_cattaneo")).args(["preset", "list"]).env("CATTANEO_THREADS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

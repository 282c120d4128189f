use std::fs;
use std::process::{Command, Output};

fn repstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repstab"))
        .args(args)
        .env_remove("REPSTAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn warm_cache_reproduces_reports_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["compute", "--family", "mbar,arnold", "--degree", "1:2", "--n", "4:6", "--emit", "all", "--cache-dir", cache];
    let cold = repstab(&args);
    assert!(cold.status.success());
    assert!(fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = repstab(&args);
    assert_eq!(cold.stdout, warm.stdout);
    let uncached = repstab(&args[..args.len() - 2]);
    assert_eq!(cold.stdout, uncached.stdout);
}

#[test]
fn corrupt_cache_entries_are_rederived() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["compute", "--family", "mbar", "--n", "5", "--emit", "all", "--cache-dir", cache];
    let first = repstab(&args);
    for entry in fs::read_dir(dir.path()).unwrap() {
        fs::write(entry.unwrap().path(), b"garbage").unwrap();
    }
    let second = repstab(&args);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    for entry in fs::read_dir(dir.path()).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        assert!(text.contains("engine_version"));
    }
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_repstab"))
        .args(["compute", "--family", "pvb", "--n", "4"])
        .env("REPSTAB_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("pvb-n4-d1-basis.json").exists());
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let base = ["compute", "--family", "all", "--degree", "0:2", "--n", "2:5", "--emit", "all"];
    let one = repstab(&[&base[..], &["--jobs", "1"]].concat());
    let four = repstab(&[&base[..], &["--jobs", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn compute_examples() {
    let o = repstab(&["compute", "--family", "mbar", "--degree", "1", "--n", "3:8", "--emit", "all"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let dims: Vec<u64> = v["results"].as_array().unwrap().iter().map(|r| r["dimension"].as_u64().unwrap()).collect();
    assert_eq!(dims, [0, 1, 4, 10, 20, 35]);
    assert_eq!(v["results"][3]["multiplicities"], serde_json::json!({"[1,1,1]": 1}));
    assert_eq!(v["results"][1]["character"]["[4]"], "-1/1");
    assert_eq!(v["results"][3]["conditions"]["character_at_identity_equals_dimension"], true);

    let o = repstab(&["compute", "--family", "pvb", "--degree", "1", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["dimension"], 12);

    let o = repstab(&["compute", "--family", "mbar", "--degree", "2", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["dimension"], 0);
}

#[test]
fn csv_flattens_characters() {
    let o = repstab(&["compute", "--family", "arnold", "--n", "3", "--emit", "character", "--format", "csv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,degree,n,kind,key,value");
    assert_eq!(lines[1], "arnold,1,3,dimension,,3");
    assert!(lines.contains(&"arnold,1,3,character,\"[2,1]\",1/1"));
    assert_eq!(lines.len(), 5);
}

#[test]
fn stability_and_coinvariants() {
    let o = repstab(&["stability", "--family", "mbar", "--degree", "1", "--n", "3:4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["entries"][0]["conditions"]["orbit_spanning"], false);
    assert_eq!(v["observed_onset"], 4);
    assert_eq!(v["guaranteed_onset"], 6);

    let o = repstab(&["coinvariants", "--family", "mbar", "--degree", "1", "--a", "3", "--n", "0:4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let dims: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["dimension"].as_u64().unwrap()).collect();
    assert_eq!(dims, [0, 1, 1, 1, 1]);
    assert_eq!(v["t_iso_from"], 1);
    assert_eq!(v["frozen_labels"], serde_json::json!([-1, -2, -3]));
}

#[test]
fn fits_and_generation() {
    let o = repstab(&["fit-betti", "--family", "mbar", "--degree", "1", "--fit", "3:7", "--check", "8:10", "--max-deg", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["-1/1", "11/6", "-1/1", "1/6"]));

    let o = repstab(&["fit-charpoly", "--family", "pvb", "--degree", "1", "--fit", "2:5", "--check", "6", "--max-deg", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!({"X1": "-1/1", "X1^2": "1/1"}));

    let o = repstab(&["gen-degree", "--family", "mbar", "--degree", "1", "--gen-m", "4", "--n", "5:7", "--format", "text"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("true").count(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(repstab(&["compute", "--family", "mbar", "--degree", "2", "--n", "11"]).status.code(), Some(3));
    assert_eq!(repstab(&["compute", "--family", "cactus", "--n", "4"]).status.code(), Some(2));
    assert_eq!(repstab(&["compute", "--family", "mbar", "--n", "5:3"]).status.code(), Some(2));
    assert_eq!(repstab(&["stability", "--family", "all", "--n", "3:4"]).status.code(), Some(2));
    assert_eq!(repstab(&["gen-degree", "--family", "mbar", "--gen-m", "3", "--n", "5"]).status.code(), Some(1));
    assert_eq!(repstab(&["selftest", "--only", "c99"]).status.code(), Some(2));
    let guard = repstab(&["compute", "--family", "mbar", "--degree", "2", "--n", "11"]);
    assert!(String::from_utf8_lossy(&guard.stderr).contains("ambient dimension 7140"));
}

#[test]
fn selftest_subset() {
    let o = repstab(&["selftest", "--only", "c1", "--only", "c10", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("check,passed,detail\nc1,true,"));
    assert!(text.contains("c10,true,"));
}

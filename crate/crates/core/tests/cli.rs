use std::path::Path;
use std::process::{Command, Output};

fn mahler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(args)
        .env_remove("MAHLER_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn enumerate_lists_and_counts() {
    let out = mahler(&["enumerate", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with('(')).count(), 3);
    assert!(text.contains("simple=3 weighted=5/3"));

    let out = mahler(&["enumerate", "--n", "4", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let items = json.as_array().unwrap();
    assert_eq!(items.len(), 14);
    assert!(items.iter().any(|m| m["k"] == serde_json::json!([3, 3, 6, 6])));
    assert_eq!(items[0]["lcm"], 42);

    assert_eq!(code(&mahler(&["enumerate", "--n", "1"])), 2);
}

#[test]
fn series_output() {
    let out = mahler(&["series", "--model", "2,2", "--order", "4", "--which", "Q"]);
    assert_eq!(stdout(&out).lines().collect::<Vec<_>>(), ["0", "1", "2", "5", "14"]);

    let out = mahler(&["series", "--model", "2,3,6", "--order", "3", "--which", "g0", "--format", "json"]);
    let coeffs: Vec<String> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(coeffs[..2], ["1", "60"]);

    let by_weights = mahler(&["series", "--weights", "6:3,2,1", "--order", "3", "--which", "g0", "--format", "json"]);
    assert_eq!(by_weights.stdout, out.stdout);

    let out = mahler(&["series", "--model", "2,2", "--order", "5", "--which", "zQ"]);
    assert_eq!(stdout(&out).lines().collect::<Vec<_>>(), ["0", "1", "-2", "3", "-4", "5"]);

    assert_eq!(code(&mahler(&["series", "--model", "2,5", "--order", "3"])), 2);
    assert_eq!(code(&mahler(&["series", "--weights", "6:3,2,2", "--order", "3"])), 2);
    assert_eq!(code(&mahler(&["series", "--model", "2,2", "--order", "0"])), 2);
    assert_eq!(code(&mahler(&["series", "--order", "3"])), 2);
}

#[test]
fn pf_output() {
    let text = stdout(&mahler(&["pf", "--model", "3,3,3"]));
    assert!(text.contains("C=27"));
    assert!(text.contains("reduced: a=[1/3,2/3], b=[0,0]"));
    assert!(text.contains("pf2=true"));

    let text = stdout(&mahler(&["pf", "--model", "2,3,6"]));
    assert!(text.contains("C=432") && text.contains("a=[1/6,5/6], b=[0,0]"));

    let out = mahler(&["pf", "--model", "2,5,10,10,10", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["reduced"]["a"], serde_json::json!(["1/10", "3/10", "7/10", "9/10"]));
    assert_eq!(json["pf2"], true);
}

#[test]
fn verify_formats() {
    let out = mahler(&["verify", "--model", "3,3,3", "--order", "10", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,b,bhat,c,chat,b_over_m,chat_over_m,flags"));
    assert!(lines.next().unwrap().starts_with("1,9,-9,-9,9,9,9"));
    assert!(text.contains("2,-9,-9/2,-63/2,-36,-9/2,-18"));

    let out = mahler(&["verify", "--model", "3,3,3", "--order", "10"]);
    assert!(stdout(&out).contains("erratum chat_8: printed -5347840, computed -53475840"));

    let out = mahler(&["verify", "--model", "5,5,5,5,5", "--order", "8", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["rows"][4]["b"], "25050301099750");
    assert_eq!(json["rows"][4]["divisible_by_n"], true);

    let out = mahler(&["verify", "--model", "2,2", "--order", "12", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for row in json["rows"].as_array().unwrap() {
        for key in ["b", "bhat", "c", "chat"] {
            assert_eq!(row[key], "0");
        }
    }
}

#[test]
fn verify_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = mahler(&[
        "verify", "--model", "2,4,4", "--order", "6", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
}

fn cache_listing(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn batch_caches_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let cache = cache.to_str().unwrap();
    let first = mahler(&["batch", "--n", "3", "--order", "10", "--cache", cache]);
    assert_eq!(code(&first), 0);
    assert!(stdout(&first).contains("0 cached, 3 computed"));
    let again = mahler(&["batch", "--n", "3", "--order", "10", "--cache", cache]);
    assert!(stdout(&again).contains("3 cached, 0 computed"));

    // cached report bytes equal a fresh verify of the same model and order
    let fresh = mahler(&["verify", "--model", "3,3,3", "--order", "10", "--format", "json"]);
    let cached = std::fs::read(Path::new(cache).join("k3-3-3-N10-v0.1.0.json")).unwrap();
    assert_eq!(fresh.stdout.strip_suffix(b"\n").unwrap(), &cached[..]);

    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    mahler(&["batch", "--n", "4", "--order", "6", "--jobs", "1", "--cache", serial.to_str().unwrap()]);
    let out = Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(["batch", "--n", "4", "--order", "6", "--jobs", "4"])
        .env("MAHLER_CACHE", &parallel)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(cache_listing(&serial), cache_listing(&parallel));
    assert_eq!(cache_listing(&serial).len(), 14);
}

#[test]
fn batch_rejects_unusable_cache() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    std::fs::write(&file, "x").unwrap();
    let out = mahler(&["batch", "--n", "2", "--order", "3", "--cache", file.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn measure_values_and_guard() {
    let out = mahler(&["measure", "--model", "2,2", "--psi", "2", "--order", "64", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let m = json["log_measure"].as_f64().unwrap();
    assert!((m - ((2.0 + 3f64.sqrt()) / 2.0).ln()).abs() < 1e-12);

    let out = mahler(&["measure", "--model", "2,2", "--psi", "1000", "--order", "16", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((json["log_measure"].as_f64().unwrap() - 1000f64.ln()).abs() < 1e-5);

    let out = mahler(&["measure", "--model", "3,3,3", "--psi", "0.1"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside disk of convergence"));
    assert_eq!(code(&mahler(&["measure", "--model", "2,2", "--psi", "-1"])), 2);
}

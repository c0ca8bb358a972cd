use std::process::Command;

const GOLDEN: &str = "y^2 = 8*x^6 + x^3 + 2";

fn deltav() -> Command {
    Command::new(env!("CARGO_BIN_EXE_deltav"))
}

#[test]
fn analyze_golden_json() {
    let dir = std::env::temp_dir().join("deltav-cli-test-analyze");
    std::fs::create_dir_all(&dir).unwrap();
    let json_path = dir.join("report.json");
    let out = deltav()
        .args([
            "analyze",
            "--prime",
            "2",
            "--poly",
            GOLDEN,
            "--json",
            json_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("genus: 2"));
    assert!(stdout.contains("jumps: [1/6, 1/2]"));
    assert!(stdout.contains("stabilisation index: 6"));
    assert!(stdout.contains("regularity: pass"));

    let js: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(js["genus"], 2);
    assert_eq!(js["jumps"][0][0], "1/6");
    assert_eq!(js["jumps"][0][1], 1);
    assert_eq!(js["jumps"][1][0], "1/2");
    assert_eq!(js["stabilisation_index"], 6);
    assert_eq!(js["regular"], "pass");
    assert_eq!(js["conditional"], false);
    assert_eq!(js["faces"][0]["delta"], 6);
    assert_eq!(js["faces"][1]["delta"], 2);
    assert_eq!(js["interior_points"][0]["vcan"], "-1/6");
    assert_eq!(js["interior_points"][1]["vcan"], "-1/2");
}

#[test]
fn analyze_elliptic_and_genus_zero() {
    let out = deltav()
        .args(["analyze", "--prime", "5", "--poly", "y^2 = x^3 + 5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("jumps: [1/6]"));

    let out = deltav()
        .args(["analyze", "--prime", "2", "--poly", "x + y + 1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("genus: 0"));
    assert!(stdout.contains("jumps: []"));
    assert!(stdout.contains("genus 0"));
}

#[test]
fn analyze_exit_codes() {
    // parse error -> exit 1 with a byte offset diagnostic
    let out = deltav()
        .args(["analyze", "--prime", "2", "--poly", "y^2 = 8*x^6 + + 2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("byte"), "stderr: {}", stderr);

    // regularity failure -> exit 2, report still emitted
    let out = deltav()
        .args([
            "analyze",
            "--prime",
            "7",
            "--poly",
            "y^2 - 2*x*y - x^2 + x^3 + x",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("regularity: fail"));
    assert!(stdout.contains("conditional"));
}

#[test]
fn vcan_examples() {
    for (form, expect) in [
        ("2*w(1,1) + w(2,1)", "-1/2"),
        ("0", "infinity"),
        ("4*w(1,1)", "11/6"),
    ] {
        let out = deltav()
            .args(["vcan", "--prime", "2", "--poly", GOLDEN, "--form", form])
            .output()
            .unwrap();
        assert!(out.status.success());
        assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), expect);
    }

    let out = deltav()
        .args(["vcan", "--prime", "2", "--poly", GOLDEN, "--form", "w(9,9)"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn basechange_examples() {
    let out = deltav()
        .args(["basechange", "--prime", "2", "--poly", GOLDEN, "--degree", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("relative jumps: [0, 2/5]"));
    assert!(stdout.contains("lattice exponents: [0, 2]"));
    assert!(stdout.contains("v'(1,1) = 5/6"));
    assert!(stdout.contains("v'(2,1) = 5/2"));

    let out = deltav()
        .args(["basechange", "--prime", "2", "--poly", GOLDEN, "--degree", "7"])
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("relative jumps: [1/7, 3/7]"));

    let out = deltav()
        .args(["basechange", "--prime", "2", "--poly", GOLDEN, "--degree", "1"])
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("relative jumps: [0, 0]"));
}

#[test]
fn svg_deterministic() {
    let run = || {
        let out = deltav()
            .args(["svg", "--prime", "2", "--poly", GOLDEN])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let a = run();
    let b = run();
    assert_eq!(a, b);
    let svg = String::from_utf8(a).unwrap();
    assert!(svg.contains(">1/6<"));
    assert!(svg.contains(">3/2<"));
}

#[test]
fn input_file_flag() {
    let dir = std::env::temp_dir().join("deltav-cli-test-input");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.txt");
    std::fs::write(&path, format!("{}\n", GOLDEN)).unwrap();
    let out = deltav()
        .args(["analyze", "--prime", "2", "--input", path.to_str().unwrap(), "--quiet"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

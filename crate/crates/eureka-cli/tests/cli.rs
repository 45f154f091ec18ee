//! End-to-end tests of the `eureka` binary with the mock judge.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_eureka");

struct Workspace {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Workspace {
    /// A three-feature dataset where `light` predicts the label perfectly,
    /// `humidity` predicts it weakly, and `noise` is uninformative, plus a
    /// dominance mock judge that prefers humidity > noise > light.
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();

        let mut csv = String::from("humidity,light,noise,occupied\n");
        let mut state = 7u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as f64 / (1u64 << 31) as f64
        };
        for i in 0..400 {
            let label = i % 2;
            let light = if label == 1 {
                400.0 + next() * 50.0
            } else {
                next() * 5.0
            };
            // Humidity shifts with the label but overlaps.
            let humidity = 30.0 + 10.0 * label as f64 + next() * 14.0;
            let noise = next() * 100.0;
            csv.push_str(&format!("{humidity:.3},{light:.3},{noise:.3},{label}\n"));
        }
        std::fs::write(root.join("data.csv"), csv).unwrap();

        let config = r#"
seed = 7
task_description = "Predict whether the room is occupied"

[dataset]
path = "DATA"
test_fraction = 0.2

[judge]
mode = "mock"
dominance = ["humidity", "noise", "light"]
direct_swap_probability = 0.0

[ranking]
method = "pairwise"
n_comparisons = 256

[sweep]
alpha = 0.05

[rankbench]
ns = [8, 16, 32]
truth = "analytic"
repeats = 3

[stability]
runs = 20
n_comparisons = 64

[output]
dir = "OUT"
"#
        .replace("DATA", &root.join("data.csv").display().to_string())
        .replace("OUT", &root.join("runs").display().to_string());
        std::fs::write(root.join("config.toml"), config).unwrap();
        Self { _dir: dir, root }
    }

    fn config(&self) -> PathBuf {
        self.root.join("config.toml")
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(BIN).args(args).output().expect("binary runs")
    }
}

/// Extracts the run directory from a command's stdout.
fn run_dir(output: &Output) -> PathBuf {
    let stdout = String::from_utf8_lossy(&output.stdout);
    let line = stdout
        .lines()
        .find(|l| l.starts_with("run directory: "))
        .unwrap_or_else(|| panic!("no run directory line in {stdout}"));
    PathBuf::from(line.trim_start_matches("run directory: "))
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn rank_with_dominance_mock_reproduces_the_order() {
    let ws = Workspace::new();
    let out = ws.run(&["rank", "--config", ws.config().to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = run_dir(&out);

    let ranking = read_json(&dir.join("ranking.json"));
    let order: Vec<&str> = ranking["order"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(order, vec!["humidity", "noise", "light"]);

    let borda = read_json(&dir.join("borda.json"));
    assert_eq!(borda["comparisons_used"], 256);
    assert!(dir.join("transcript.csv").exists());
    assert!(dir.join("config.json").exists());
}

#[test]
fn rank_direct_method_flag() {
    let ws = Workspace::new();
    let out = ws.run(&[
        "rank",
        "--config",
        ws.config().to_str().unwrap(),
        "--method",
        "direct",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = run_dir(&out);
    let ranking = read_json(&dir.join("ranking.json"));
    // Zero swap probability: the direct mock returns the dominance order.
    let order: Vec<&str> = ranking["order"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(order, vec!["humidity", "noise", "light"]);
    assert!(
        !dir.join("borda.json").exists(),
        "direct mode has no estimate"
    );
}

#[test]
fn sweep_reports_k_prime_and_reruns_byte_identically() {
    let ws = Workspace::new();
    let rank_out = ws.run(&["rank", "--config", ws.config().to_str().unwrap()]);
    assert!(rank_out.status.success());
    let ranking_file = run_dir(&rank_out).join("ranking.json");

    let sweep = |_: u32| {
        let out = ws.run(&[
            "sweep",
            "--config",
            ws.config().to_str().unwrap(),
            "--ranking",
            ranking_file.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        run_dir(&out)
    };
    let dir1 = sweep(1);
    let dir2 = sweep(2);

    let report = read_json(&dir1.join("sweep.json"));
    // humidity alone beats chance and is significant on this data.
    assert_eq!(report["k_prime"], 1, "report: {report}");
    assert_eq!(report["records"].as_array().unwrap().len(), 3);
    assert!(dir1.join("rules.txt").exists());

    for name in ["sweep.json", "sweep.csv", "rules.txt", "config.json"] {
        let a = std::fs::read(dir1.join(name)).unwrap();
        let b = std::fs::read(dir2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs across reruns");
    }
}

#[test]
fn sweep_with_k_max_too_large_is_a_config_error() {
    let ws = Workspace::new();
    let rank_out = ws.run(&["rank", "--config", ws.config().to_str().unwrap()]);
    let ranking_file = run_dir(&rank_out).join("ranking.json");

    let config = std::fs::read_to_string(ws.config()).unwrap();
    let config = config.replace("[sweep]\nalpha = 0.05", "[sweep]\nalpha = 0.05\nk_max = 9");
    std::fs::write(ws.root.join("bad.toml"), config).unwrap();

    let out = ws.run(&[
        "sweep",
        "--config",
        ws.root.join("bad.toml").to_str().unwrap(),
        "--ranking",
        ranking_file.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn live_mode_without_credential_is_a_config_error() {
    let ws = Workspace::new();
    let config = r#"
seed = 1
task_description = "t"

[dataset]
path = "DATA"

[judge]
mode = "live"
endpoint = "http://127.0.0.1:1/v1/chat/completions"
credential_env = "EUREKA_TEST_MISSING_KEY"

[output]
dir = "OUT"
"#
    .replace("DATA", &ws.root.join("data.csv").display().to_string())
    .replace("OUT", &ws.root.join("runs").display().to_string());
    std::fs::write(ws.root.join("live.toml"), config).unwrap();

    let out = Command::new(BIN)
        .args([
            "rank",
            "--config",
            ws.root.join("live.toml").to_str().unwrap(),
        ])
        .env_remove("EUREKA_TEST_MISSING_KEY")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("EUREKA_TEST_MISSING_KEY"));
}

#[test]
fn baselines_without_ranking_file_warns_and_writes_table() {
    let ws = Workspace::new();
    let out = ws.run(&["baselines", "--config", ws.config().to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let dir = run_dir(&out);
    let csv = std::fs::read_to_string(dir.join("top_features.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "group_lasso,logistic_regression,validation_selection,eureka"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    // All three baselines chase accuracy, so they pick the separator.
    assert_eq!(row[..3], ["light", "light", "light"]);
    assert_eq!(row[3], "", "eureka column empty without a ranking file");

    let report = read_json(&dir.join("baselines.json"));
    assert!(report["eureka"].is_null());
}

#[test]
fn baselines_with_ranking_file_fills_the_fourth_column() {
    let ws = Workspace::new();
    let rank_out = ws.run(&["rank", "--config", ws.config().to_str().unwrap()]);
    let ranking_file = run_dir(&rank_out).join("ranking.json");
    let out = ws.run(&[
        "baselines",
        "--config",
        ws.config().to_str().unwrap(),
        "--ranking",
        ranking_file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let dir = run_dir(&out);
    let csv = std::fs::read_to_string(dir.join("top_features.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().ends_with(",humidity"));
}

#[test]
fn rankbench_writes_curves_for_both_methods() {
    let ws = Workspace::new();
    let out = ws.run(&["rankbench", "--config", ws.config().to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = run_dir(&out);
    let csv = std::fs::read_to_string(dir.join("rankbench.csv")).unwrap();
    let mean_rows: Vec<&str> = csv.lines().filter(|l| l.contains("mae_mean")).collect();
    // 2 methods x 3 budgets.
    assert_eq!(mean_rows.len(), 6, "{csv}");
    let report = read_json(&dir.join("rankbench.json"));
    assert_eq!(report["repeats"], 3);
}

#[test]
fn stability_with_deterministic_oracle_has_zero_spread() {
    let ws = Workspace::new();
    let out = ws.run(&["stability", "--config", ws.config().to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = run_dir(&out);
    let report = read_json(&dir.join("stability.json"));
    // 20 runs -> 190 run pairs per method.
    assert_eq!(report["pairwise"]["pairs"].as_array().unwrap().len(), 190);
    assert_eq!(report["pairwise"]["kendall"]["mean"], 1.0);
    assert_eq!(report["pairwise"]["kendall"]["std"], 0.0);
    assert_eq!(report["direct"]["kendall"]["mean"], 1.0);
    let csv = std::fs::read_to_string(dir.join("stability.csv")).unwrap();
    assert_eq!(
        csv.lines().filter(|l| l.starts_with("pairwise")).count(),
        190 * 2 + 4
    );
}

#[test]
fn missing_config_flag_is_a_config_error() {
    let out = Command::new(BIN).arg("rank").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_override_changes_sampling_but_stays_deterministic() {
    let ws = Workspace::new();
    let base = ws.run(&["rank", "--config", ws.config().to_str().unwrap()]);
    let with_seed = ws.run(&[
        "rank",
        "--config",
        ws.config().to_str().unwrap(),
        "--seed",
        "123",
    ]);
    let again = ws.run(&[
        "rank",
        "--config",
        ws.config().to_str().unwrap(),
        "--seed",
        "123",
    ]);
    let votes = |o: &Output| read_json(&run_dir(o).join("borda.json"))["votes"].clone();
    assert_eq!(votes(&with_seed), votes(&again));
    // A dominance oracle gives the same winners, but sampling differs.
    let appearances = |o: &Output| read_json(&run_dir(o).join("borda.json"))["appearances"].clone();
    assert_ne!(appearances(&base), appearances(&with_seed));
}

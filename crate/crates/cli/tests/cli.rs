use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data_file() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/heart.csv")
}

fn lupus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lupus"))
        .args(args)
        .env_remove("LUPUS_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = lupus(args);
    assert!(o.status.success(), "lupus {args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const FAST_TRAIN: [&str; 6] = ["--agents", "10", "--iters", "20", "--bp-epochs", "10"];

#[test]
fn bench_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "bench", "--functions", "f1", "--dims", "30", "--algs", "gwo,acgwo", "--runs", "2", "--iters", "20", "--seed",
        "42", "--out", p(dir.path()),
    ]);
    let table = std::fs::read_to_string(dir.path().join("table.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "algorithm,function,dim,mean,std,n_runs");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("gwo,f1,30,"));
    assert!(lines[2].starts_with("acgwo,f1,30,"));
    assert_eq!(std::fs::read_dir(dir.path().join("convergence")).unwrap().count(), 4);
    let meta = read_json(&dir.path().join("table.meta.json"));
    assert_eq!(meta["plan"]["base_seed"], 42);
}

#[test]
fn bench_rejects_unknown_function_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let o = lupus(&["bench", "--functions", "f1,f42", "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("f42"));
    assert!(!dir.path().join("table.csv").exists());
}

#[test]
fn curves_defaults() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["curves", "--out", p(dir.path())]);
    let text = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 1001);
    assert!((rows[0][2] - 2.336_620).abs() < 1e-6);
    assert_eq!(rows[1000][1], 0.0);
    assert!(rows.windows(2).all(|w| w[1][2] < w[0][2]));
    assert_eq!(rows[0][3], 1.0);
}

#[test]
fn curves_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lupus(&["curves", "--iters", "0", "--out", p(dir.path())]).status.code(), Some(1));
    assert_eq!(lupus(&["curves", "--inertia", "0,0,2,1.7", "--out", p(dir.path())]).status.code(), Some(1));
    assert_eq!(lupus(&["curves", "--inertia", "1,2,3"]).status.code(), Some(1));
}

#[test]
fn eda_matrix_shape() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["eda", "--data", p(&data_file()), "--out", p(dir.path())]);
    let text = std::fs::read_to_string(dir.path().join("corr.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 15);
    assert!(lines[0].ends_with(",target"));
    let m: Vec<Vec<f64>> = lines[1..]
        .iter()
        .map(|l| l.split(',').skip(1).map(|v| v.parse().unwrap()).collect())
        .collect();
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row.len(), 14);
        assert_eq!(row[i], 1.0);
        for (j, v) in row.iter().enumerate() {
            assert_eq!(*v, m[j][i]);
        }
    }
    let clean = std::fs::read_to_string(dir.path().join("clean.csv")).unwrap();
    assert_eq!(clean.lines().count(), 298);
}

#[test]
fn eda_names_constant_column() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("flat.csv");
    let mut text = String::from("age,sex,cp,trestbps,chol,fbs,restecg,thalach,exang,oldpeak,slope,ca,thal,target\n");
    for i in 0..6 {
        text.push_str(&format!("{},{},1,120,200,0,0,150,{},1.0,1,0,3,{}\n", 40 + i, i % 2, (i + 1) % 2, i % 3 % 2));
    }
    std::fs::write(&data, text).unwrap();
    let o = lupus(&["eda", "--data", p(&data), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("'cp'"), "{}", stderr(&o));
    assert!(!dir.path().join("corr.csv").exists());
}

#[test]
fn train_then_eval_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&[&["train", "--data", p(&data_file()), "--seed", "5", "--out", p(dir.path())][..], &FAST_TRAIN].concat());
    let test_line = out.lines().find(|l| l.starts_with("test")).unwrap().to_owned();
    let model = dir.path().join("model.json");
    let eval_out = ok(&["eval", "--model", p(&model), "--data", p(&data_file()), "--out", p(dir.path())]);
    assert!(eval_out.lines().any(|l| l == test_line), "{eval_out}\nvs\n{test_line}");
    let report = read_json(&dir.path().join("train_report.json"));
    let eval = read_json(&dir.path().join("eval.json"));
    assert_eq!(report["test"], eval);
    let csv = std::fs::read_to_string(dir.path().join("eval.csv")).unwrap();
    assert!(csv.starts_with("ACC,AUC,PRE,Recall,F1\n"));
    assert_eq!(report["swarm_iterations"], 20);
    assert_eq!(report["loss_history"].as_array().unwrap().len(), 30);
}

#[test]
fn every_train_mode_writes_a_model() {
    for mode in ["bp", "acgwo", "acgwo-bp"] {
        let dir = tempfile::tempdir().unwrap();
        ok(&[&["train", "--data", p(&data_file()), "--mode", mode, "--out", p(dir.path())][..], &FAST_TRAIN].concat());
        let model = read_json(&dir.path().join("model.json"));
        assert_eq!(model["layer_sizes"], serde_json::json!([13, 8, 1]));
        assert_eq!(model["mode"], mode);
    }
}

#[test]
fn train_reports_missing_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = lupus(&["train", "--data", p(&dir.path().join("absent.csv")), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("model.json").exists());
}

#[test]
fn separable_data_reaches_perfect_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("toy.csv");
    let mut text = String::from("age,sex,cp,trestbps,chol,fbs,restecg,thalach,exang,oldpeak,slope,ca,thal,target\n");
    for i in 0..120 {
        let age = 30 + (i * 7) % 40;
        let target = u8::from(age >= 50);
        text.push_str(&format!(
            "{age},{},{},{},{},{},{},{},{},{}.5,{},{},{},{target}\n",
            i % 2,
            1 + i % 4,
            110 + (i * 3) % 50,
            180 + (i * 11) % 120,
            (i / 3) % 2,
            i % 3,
            120 + (i * 13) % 70,
            (i / 5) % 2,
            i % 4,
            1 + i % 3,
            i % 4,
            [3, 6, 7][i % 3],
        ));
    }
    std::fs::write(&data, text).unwrap();
    ok(&[
        "train", "--data", p(&data), "--mode", "bp", "--bp-epochs", "4000", "--lr", "1.0", "--out", p(dir.path()),
    ]);
    let report = read_json(&dir.path().join("train_report.json"));
    assert_eq!(report["test"]["accuracy"], 1.0);
}

#[test]
fn eval_rejects_corrupt_model_and_mismatched_data() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    std::fs::write(&model, "{ \"layer_sizes\": [13, 8, 1], \"params\": [").unwrap();
    let o = lupus(&["eval", "--model", p(&model), "--data", p(&data_file()), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid model"));

    ok(&[
        &["train", "--data", p(&data_file()), "--one-hot", "--out", p(dir.path())][..],
        &FAST_TRAIN,
    ]
    .concat());
    let mut m = read_json(&model);
    m["one_hot"] = Value::Bool(false);
    std::fs::write(&model, m.to_string()).unwrap();
    let o = lupus(&["eval", "--model", p(&model), "--data", p(&data_file()), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("eval.json").exists());
}

#[test]
fn flags_override_config_which_overrides_env_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{ "seed": 11, "iters": 7, "agents": 10, "hidden": [3], "bp_epochs": 2 }"#).unwrap();
    let run = |extra: &[&str], env: Option<&str>| {
        let out = dir.path().join("o");
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_lupus"));
        cmd.args(["train", "--data", p(&data_file()), "--out", p(&out)]).args(extra);
        cmd.env_remove("LUPUS_SEED");
        if let Some(v) = env {
            cmd.env("LUPUS_SEED", v);
        }
        assert!(cmd.output().unwrap().status.success());
        read_json(&out.join("train_report.json"))
    };
    let r = run(&["--config", p(&cfg)], Some("99"));
    assert_eq!(r["seed"], 11);
    assert_eq!(r["swarm_iterations"], 7);
    assert_eq!(r["layer_sizes"], serde_json::json!([13, 3, 1]));
    let r = run(&["--config", p(&cfg), "--seed", "12", "--iters", "5"], None);
    assert_eq!(r["seed"], 12);
    assert_eq!(r["swarm_iterations"], 5);
    let r = run(&["--iters", "4", "--agents", "10", "--bp-epochs", "1"], Some("99"));
    assert_eq!(r["seed"], 99);
    let r = run(&["--iters", "4", "--agents", "10", "--bp-epochs", "1"], None);
    assert_eq!(r["seed"], 42);
}

#[test]
fn config_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{ "sead": 1 }"#).unwrap();
    let o = lupus(&["curves", "--config", p(&cfg), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("sead"));
    assert_eq!(lupus(&["curves", "--config", p(&dir.path().join("none.json"))]).status.code(), Some(1));
    assert_eq!(lupus(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lupus(&["train", "--mode", "sgd"]).status.code(), Some(1));
}

#[test]
fn help_lists_defaults() {
    let help = ok(&["train", "--help"]);
    for needle in [
        "[default: 100]",
        "[default: 1000]",
        "[default: 1,0,2,1.7]",
        "[default: 1,0,2,2.1]",
        "[default: 0.7]",
        "[default: acgwo-bp]",
        "LUPUS_SEED",
    ] {
        assert!(help.contains(needle), "missing {needle}");
    }
    for sub in ["bench", "curves", "eda", "train", "eval"] {
        let help = ok(&[sub, "--help"]);
        let mut blocks: Vec<String> = Vec::new();
        for line in help.lines().skip_while(|l| !l.starts_with("Options:")).skip(1) {
            if line.trim_start().starts_with('-') {
                blocks.push(String::new());
            }
            if let Some(b) = blocks.last_mut() {
                b.push_str(line);
                b.push(' ');
            }
        }
        assert!(blocks.len() > 3, "{sub}: {help}");
        for block in blocks {
            let flag = block.split_whitespace().next().unwrap();
            let exempt = ["--config", "--model", "-h,", "-V,"].contains(&flag);
            assert!(
                exempt || block.contains("[default") || block.contains("off by default"),
                "{sub} {flag} shows no default: {block}"
            );
        }
    }
    assert!(lupus(&["--help"]).status.success());
}

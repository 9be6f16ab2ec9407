//! Trains the heart-disease classifier over a range of seeds and prints the
//! test metrics for each.
//!
//! `cargo run --release -p lupus-core --example heart -- <data.csv> <first_seed> <n_seeds> [epochs] [lr] [hidden] [agents] [iters]`

use std::path::PathBuf;

use lupus_core::dataprep::{clean, load_table, prepare_split, MissingPolicy};
use lupus_core::metrics::EvalReport;
use lupus_core::mlp::{predict_proba, train, MlpArchitecture, TrainMode, TrainSettings};
use lupus_core::optimizer::GwoConfig;
use lupus_core::seed::derive;

fn main() -> lupus_core::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, d: &str| args.get(i).cloned().unwrap_or_else(|| d.to_owned());
    let path = PathBuf::from(arg(0, "data/heart.csv"));
    let first: u64 = arg(1, "0").parse().unwrap();
    let n: u64 = arg(2, "10").parse().unwrap();
    let epochs: usize = arg(3, "2000").parse().unwrap();
    let lr: f64 = arg(4, "0.1").parse().unwrap();
    let hidden: usize = arg(5, "16").parse().unwrap();
    let agents: usize = arg(6, "100").parse().unwrap();
    let iters: usize = arg(7, "1000").parse().unwrap();

    let ds = clean(&load_table(&path)?, MissingPolicy::DropRows)?;
    let mut accs = Vec::new();
    for seed in first..first + n {
        let split = prepare_split(&ds, 0.7, derive(seed, "split"))?;
        let arch = MlpArchitecture::with_hidden(split.train.n_features(), &[hidden])?;
        let gwo = GwoConfig {
            n_agents: agents,
            max_iter: iters,
            seed: derive(seed, "acgwo"),
            parallel: true,
            ..GwoConfig::default()
        };
        let settings = TrainSettings {
            mode: TrainMode::Hybrid,
            gwo,
            bounds: (-5.0, 5.0),
            bp_epochs: epochs,
            learning_rate: lr,
            init_seed: derive(seed, "bp-init"),
        };
        let t = std::time::Instant::now();
        let report = train(&arch, &split.train.x, &split.train.y, &settings)?;
        let swarm_loss = report.loss_history[report.swarm_iterations - 1];
        let final_loss = *report.loss_history.last().unwrap();
        let p_train = predict_proba(&arch, &report.final_params, &split.train.x)?;
        let p_test = predict_proba(&arch, &report.final_params, &split.test.x)?;
        let tr = EvalReport::compute(&split.train.y, &p_train, 0.5)?;
        let te = EvalReport::compute(&split.test.y, &p_test, 0.5)?;
        println!(
            "seed {seed:3} swarm_loss {swarm_loss:.4} final_loss {final_loss:.4} train_acc {:.4} test {} ({:.1}s)",
            tr.accuracy,
            te.csv_row(),
            t.elapsed().as_secs_f64()
        );
        accs.push(te.accuracy);
    }
    let mean = accs.iter().sum::<f64>() / accs.len() as f64;
    println!("mean test accuracy {mean:.4}");
    Ok(())
}

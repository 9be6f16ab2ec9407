//! Prints mean and standard deviation of the final best score per cell.
//!
//! `cargo run --release -p lupus-core --example sweep -- f1,f6 30 10 42`

use lupus_core::harness::{format_sci, run_plan, ExperimentPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let functions = args.first().map_or("f1,f2,f3,f4,f5,f6", String::as_str);
    let dim: usize = args.get(1).map_or(Ok(30), |s| s.parse())?;
    let n_runs: usize = args.get(2).map_or(Ok(10), |s| s.parse())?;
    let base_seed: u64 = args.get(3).map_or(Ok(42), |s| s.parse())?;
    let plan = ExperimentPlan {
        functions: functions.split(',').map(str::to_owned).collect(),
        dims: vec![dim],
        n_runs,
        base_seed,
        ..ExperimentPlan::default()
    };
    let start = std::time::Instant::now();
    let out = run_plan(&plan)?;
    for r in &out.rows {
        println!("{:>4} {:>6} {:>4}  {:>10}  {:>10}", r.function, r.algorithm, r.dim, format_sci(r.mean), format_sci(r.std));
    }
    eprintln!("elapsed {:.1?}", start.elapsed());
    Ok(())
}

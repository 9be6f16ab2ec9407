//! Batch benchmark sweeps over (algorithm × function × dimension × run).
//!
//! Every run's seed is derived from the plan's base seed and the cell
//! coordinates only, so cells are independent of one another and of
//! scheduling order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::benchfns::{BenchmarkFn, BenchmarkId};
use crate::error::{Error, Result};
use crate::io::{write_atomic, write_json_atomic};
use crate::optimizer::{pso_run, run, Algorithm, GwoConfig, PsoConfig, RunResult, SearchSpace};
use crate::seed::SeedHasher;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentPlan {
    pub algorithms: Vec<Algorithm>,
    /// Benchmark ids such as `"f1"`; resolved before any run starts.
    pub functions: Vec<String>,
    pub dims: Vec<usize>,
    pub n_runs: usize,
    pub base_seed: u64,
    pub n_agents: usize,
    pub max_iter: usize,
    /// Template for the grey wolf variants; variant, swarm size, iterations and
    /// seed are overwritten per run.
    pub gwo: GwoConfig<f64>,
    /// Template for PSO; particles, iterations and seed are overwritten per run.
    pub pso: PsoConfig<f64>,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            algorithms: Algorithm::ALL.to_vec(),
            functions: BenchmarkId::TABLE.iter().map(|f| f.to_string()).collect(),
            dims: vec![30],
            n_runs: 10,
            base_seed: 42,
            n_agents: 40,
            max_iter: 500,
            gwo: GwoConfig::default(),
            pso: PsoConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub algorithm: Algorithm,
    pub function: BenchmarkId,
    pub dim: usize,
}

/// Aggregate of one cell: mean and population standard deviation of the final
/// best scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatRow {
    pub algorithm: Algorithm,
    pub function: BenchmarkId,
    pub dim: usize,
    pub mean: f64,
    pub std: f64,
    pub n_runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub cell: Cell,
    pub run: usize,
    pub seed: u64,
    pub result: RunResult<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanOutcome {
    pub rows: Vec<StatRow>,
    pub runs: Vec<RunRecord>,
}

pub fn cell_seed(base_seed: u64, cell: &Cell, run: usize) -> u64 {
    SeedHasher::new(base_seed)
        .str(cell.algorithm.as_str())
        .str(cell.function.as_str())
        .u64(cell.dim as u64)
        .u64(run as u64)
        .finish()
}

impl ExperimentPlan {
    /// Resolves ids and checks every setting; returns the cells in plan order.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        if self.algorithms.is_empty() || self.functions.is_empty() || self.dims.is_empty() {
            return Err(Error::config("plan needs at least one algorithm, function and dim"));
        }
        if self.n_runs == 0 {
            return Err(Error::config("n_runs must be >= 1"));
        }
        let functions = self
            .functions
            .iter()
            .map(|s| s.parse::<BenchmarkId>())
            .collect::<Result<Vec<_>>>()?;
        for f in &functions {
            for &dim in &self.dims {
                f.info().check_dim(dim)?;
            }
        }
        GwoConfig {
            n_agents: self.n_agents,
            max_iter: self.max_iter,
            ..self.gwo.clone()
        }
        .validate()?;
        PsoConfig {
            n_particles: self.n_agents,
            max_iter: self.max_iter,
            ..self.pso.clone()
        }
        .validate()?;

        let mut cells = Vec::new();
        for &algorithm in &self.algorithms {
            for &function in &functions {
                for &dim in &self.dims {
                    cells.push(Cell {
                        algorithm,
                        function,
                        dim,
                    });
                }
            }
        }
        Ok(cells)
    }

    fn run_one(&self, cell: &Cell, run_idx: usize) -> Result<RunRecord> {
        let info: BenchmarkFn = cell.function.info();
        let space = SearchSpace::uniform(cell.dim, info.lower, info.upper)?;
        let seed = cell_seed(self.base_seed, cell, run_idx);
        let result = match cell.algorithm.variant() {
            Some(variant) => {
                let cfg = GwoConfig {
                    variant,
                    n_agents: self.n_agents,
                    max_iter: self.max_iter,
                    seed,
                    parallel: false,
                    ..self.gwo.clone()
                };
                run(&info, &space, &cfg)?
            }
            None => {
                let cfg = PsoConfig {
                    n_particles: self.n_agents,
                    max_iter: self.max_iter,
                    seed,
                    parallel: false,
                    ..self.pso.clone()
                };
                pso_run(&info, &space, &cfg)?
            }
        };
        Ok(RunRecord {
            cell: *cell,
            run: run_idx,
            seed,
            result,
        })
    }
}

/// Population mean and standard deviation (divisor n).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn run_plan(plan: &ExperimentPlan) -> Result<PlanOutcome> {
    let cells = plan.cells()?;
    let jobs: Vec<(Cell, usize)> = cells
        .iter()
        .flat_map(|c| (0..plan.n_runs).map(move |r| (*c, r)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|(cell, r)| plan.run_one(cell, *r))
        .collect::<Result<Vec<_>>>()?;

    let rows = runs
        .chunks(plan.n_runs)
        .map(|chunk| {
            let cell = chunk[0].cell;
            let finals: Vec<f64> = chunk.iter().map(|r| r.result.best_score).collect();
            let (mean, std) = mean_std(&finals);
            StatRow {
                algorithm: cell.algorithm,
                function: cell.function,
                dim: cell.dim,
                mean,
                std,
                n_runs: plan.n_runs,
            }
        })
        .collect();
    Ok(PlanOutcome { rows, runs })
}

/// Scientific notation with a two-digit mantissa fraction and a signed,
/// at-least-two-digit exponent: `749.3 → "7.49E+02"`, `0 → "0.00E+00"`.
pub fn format_sci(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "Inf".into()
        } else {
            "-Inf".into()
        };
    }
    let s = format!("{v:.2e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent formatting always has 'e'");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

pub fn render_table(rows: &[StatRow]) -> String {
    let mut out = String::from("algorithm,function,dim,mean,std,n_runs\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.algorithm,
            r.function,
            r.dim,
            format_sci(r.mean),
            format_sci(r.std),
            r.n_runs
        );
    }
    out
}

pub fn export_table(rows: &[StatRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::config("refusing to export an empty result table"));
    }
    write_atomic(path, render_table(rows).as_bytes())
}

#[derive(Serialize)]
struct TableMeta<'a> {
    std_divisor: &'static str,
    mean_over: &'static str,
    plan: &'a ExperimentPlan,
}

/// Side-car JSON describing how the table was produced.
pub fn export_metadata(plan: &ExperimentPlan, path: &Path) -> Result<()> {
    write_json_atomic(
        path,
        &TableMeta {
            std_divisor: "n_runs (population standard deviation)",
            mean_over: "final best score of each run",
            plan,
        },
    )
}

pub fn convergence_file_name(rec: &RunRecord) -> String {
    format!(
        "{}_{}_{}_{}.csv",
        rec.cell.algorithm, rec.cell.function, rec.cell.dim, rec.run
    )
}

pub fn render_series(history: &[f64]) -> String {
    let mut out = String::from("iter,alpha_score\n");
    for (i, v) in history.iter().enumerate() {
        let _ = writeln!(out, "{i},{v:e}");
    }
    out
}

/// One `iter,alpha_score` file per run; returns the written paths.
pub fn export_convergence(runs: &[RunRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    if runs.is_empty() {
        return Err(Error::config("no convergence histories to export"));
    }
    runs.iter()
        .map(|rec| {
            let path = dir.join(convergence_file_name(rec));
            write_atomic(&path, render_series(&rec.result.history).as_bytes())?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_plan() -> ExperimentPlan {
        ExperimentPlan {
            algorithms: vec![Algorithm::Gwo, Algorithm::Acgwo, Algorithm::Pso],
            functions: vec!["f1".into(), "f5".into()],
            dims: vec![3],
            n_runs: 2,
            base_seed: 9,
            n_agents: 8,
            max_iter: 20,
            ..ExperimentPlan::default()
        }
    }

    #[test]
    fn sci_formatting() {
        assert_eq!(format_sci(0.0), "0.00E+00");
        assert_eq!(format_sci(749.3), "7.49E+02");
        assert_eq!(format_sci(0.0351), "3.51E-02");
        assert_eq!(format_sci(1.0e-300), "1.00E-300");
        assert_eq!(format_sci(-2.5), "-2.50E+00");
        assert_eq!(format_sci(f64::INFINITY), "Inf");
    }

    #[test]
    fn population_std() {
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - (2.0_f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn plan_rows_and_reproducibility() {
        let plan = small_plan();
        let out = run_plan(&plan).unwrap();
        assert_eq!(out.rows.len(), 6);
        assert_eq!(out.runs.len(), 12);
        for (row, chunk) in out.rows.iter().zip(out.runs.chunks(2)) {
            let finals: Vec<f64> = chunk.iter().map(|r| r.result.best_score).collect();
            assert_eq!(mean_std(&finals), (row.mean, row.std));
        }
        assert_eq!(out, run_plan(&plan).unwrap());
    }

    #[test]
    fn single_run_has_zero_std() {
        let plan = ExperimentPlan {
            n_runs: 1,
            ..small_plan()
        };
        assert!(run_plan(&plan).unwrap().rows.iter().all(|r| r.std == 0.0));
    }

    #[test]
    fn unknown_function_fails_before_running() {
        let plan = ExperimentPlan {
            functions: vec!["f1".into(), "f42".into()],
            ..small_plan()
        };
        let err = run_plan(&plan).unwrap_err();
        assert!(matches!(err, Error::Config(ref m) if m.contains("f42")));
    }

    #[test]
    fn cells_are_independent() {
        let full = run_plan(&small_plan()).unwrap();
        let reduced = run_plan(&ExperimentPlan {
            algorithms: vec![Algorithm::Acgwo],
            functions: vec!["f5".into()],
            ..small_plan()
        })
        .unwrap();
        let same: Vec<_> = full
            .runs
            .iter()
            .filter(|r| r.cell.algorithm == Algorithm::Acgwo && r.cell.function == BenchmarkId::F5)
            .cloned()
            .collect();
        assert_eq!(same, reduced.runs);
    }

    #[test]
    fn export_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_plan(&small_plan()).unwrap();
        let table = dir.path().join("table.csv");
        export_table(&out.rows, &table).unwrap();
        let text = std::fs::read_to_string(&table).unwrap();
        assert!(text.starts_with("algorithm,function,dim,mean,std,n_runs\n"));
        assert_eq!(text.lines().count(), 7);

        let files = export_convergence(&out.runs, &dir.path().join("conv")).unwrap();
        assert_eq!(files.len(), 12);
        let series = std::fs::read_to_string(&files[0]).unwrap();
        assert_eq!(series.lines().count(), 21);
        let vals: Vec<f64> = series
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn empty_table_is_rejected_without_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        assert!(export_table(&[], &p).is_err());
        assert!(!p.exists());
    }
}

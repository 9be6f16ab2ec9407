use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::ArgMatches;
use lupus_core::curves::{cauchy_inertia, leader_weight_from_ratio, CurveParams, InertiaScaling};
use lupus_core::dataprep::{
    clean, load_table, one_hot, pearson_corr_matrix, prepare_split, stratified_split, write_corr_csv, write_dataset_csv,
    Dataset,
};
use lupus_core::harness::{export_convergence, export_metadata, export_table, render_table, run_plan, ExperimentPlan};
use lupus_core::io::{write_atomic, write_json_atomic};
use lupus_core::metrics::EvalReport;
use lupus_core::mlp::{predict_proba, train, MlpArchitecture, ModelArtifact, TrainMode, TrainSettings};
use lupus_core::optimizer::{control_wa, Algorithm, GwoConfig, Variant};
use lupus_core::seed::derive;
use serde::Serialize;

use crate::config::{missing_policy, FileConfig, Resolver};
use crate::{BenchArgs, CliError, Command, CurveArgs, CurvesArgs, EdaArgs, EvalArgs, TrainArgs};

pub const DEFAULT_BP_EPOCHS: usize = 100;
pub const DEFAULT_LR: f64 = 0.1;

pub fn dispatch(command: Command, matches: &ArgMatches) -> Result<(), CliError> {
    match command {
        Command::Bench(a) => bench(a, matches),
        Command::Curves(a) => curves(a, matches),
        Command::Eda(a) => eda(a, matches),
        Command::Train(a) => train_cmd(a, matches),
        Command::Eval(a) => eval(a, matches),
    }
}

struct Curves {
    inertia: CurveParams<f64>,
    leader: CurveParams<f64>,
    scaling: InertiaScaling,
}

fn resolve_curves(a: &CurveArgs, file: &FileConfig, r: &Resolver) -> Result<Curves, CliError> {
    let c = Curves {
        inertia: r.pick("inertia", a.inertia, file.inertia),
        leader: r.pick("leader", a.leader, file.leader),
        scaling: r.pick("inertia_scaling", a.inertia_scaling.into(), file.inertia_scaling),
    };
    c.inertia.validate()?;
    c.leader.validate()?;
    Ok(c)
}

fn bench(a: BenchArgs, matches: &ArgMatches) -> Result<(), CliError> {
    let file = FileConfig::load(a.common.config.as_deref())?;
    let r = Resolver::new(matches);
    let curves = resolve_curves(&a.curves, &file, &r)?;
    let out = r.pick("out", a.common.out, file.out);
    let algorithms = r
        .pick("algs", a.algs, file.algs)
        .iter()
        .map(|s| s.parse::<Algorithm>())
        .collect::<Result<Vec<_>, _>>()?;

    let mut plan = ExperimentPlan {
        algorithms,
        functions: r.pick("functions", a.functions, file.functions),
        dims: r.pick("dims", a.dims, file.dims),
        n_runs: r.pick("runs", a.runs, file.runs),
        base_seed: r.pick("seed", a.common.seed, file.seed),
        n_agents: r.pick("agents", a.agents, file.agents),
        max_iter: r.pick("iters", a.iters, file.iters),
        ..ExperimentPlan::default()
    };
    plan.gwo.inertia = curves.inertia;
    plan.gwo.leader = curves.leader;
    plan.gwo.inertia_scaling = curves.scaling;

    let outcome = run_plan(&plan)?;
    export_convergence(&outcome.runs, &out.join("convergence"))?;
    export_metadata(&plan, &out.join("table.meta.json"))?;
    export_table(&outcome.rows, &out.join("table.csv"))?;
    print!("{}", render_table(&outcome.rows));
    Ok(())
}

fn curves(a: CurvesArgs, matches: &ArgMatches) -> Result<(), CliError> {
    let file = FileConfig::load(a.common.config.as_deref())?;
    let r = Resolver::new(matches);
    let c = resolve_curves(&a.curves, &file, &r)?;
    let out = r.pick("out", a.common.out, file.out);
    let max_iter = r.pick("iters", a.iters, file.iters);
    if max_iter == 0 {
        return Err(CliError::usage("--iters must be positive"));
    }
    let fi = leader_weight_from_ratio(1.0, &c.leader);
    let mut text = String::from("iter,wa,ww,ww_effective,fi_unit_ratio\n");
    for iter in 0..=max_iter {
        let wa: f64 = control_wa(iter, max_iter);
        let ww = cauchy_inertia(iter, max_iter, &c.inertia)?;
        let eff = c.scaling.apply(ww, &c.inertia);
        let _ = writeln!(text, "{iter},{wa},{ww},{eff},{fi}");
    }
    let path = out.join("curves.csv");
    write_atomic(&path, text.as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn load_dataset(path: &Path, impute: bool, encode: bool) -> Result<Dataset, CliError> {
    let ds = clean(&load_table(path)?, missing_policy(impute))?;
    Ok(if encode { one_hot(&ds) } else { ds })
}

fn eda(a: EdaArgs, matches: &ArgMatches) -> Result<(), CliError> {
    let file = FileConfig::load(a.common.config.as_deref())?;
    let r = Resolver::new(matches);
    let out = r.pick("out", a.common.out, file.out);
    let data = r.pick("data", a.data, file.data);
    let ds = load_dataset(&data, r.switch(a.impute, file.impute), false)?;
    let corr = pearson_corr_matrix(&ds, true)?;
    write_dataset_csv(&ds, &out.join("clean.csv"))?;
    write_corr_csv(&corr, &out.join("corr.csv"))?;
    let [neg, pos] = ds.class_counts();
    println!("{} rows ({neg} without disease, {pos} with disease)", ds.len());
    println!("wrote {} and {}", out.join("clean.csv").display(), out.join("corr.csv").display());
    Ok(())
}

#[derive(Serialize)]
struct TrainReportFile<'a> {
    mode: TrainMode,
    seed: u64,
    layer_sizes: &'a [usize],
    settings: &'a TrainSettings<f64>,
    threshold: f64,
    train_rows: usize,
    test_rows: usize,
    swarm_iterations: usize,
    loss_history: &'a [f64],
    train: &'a EvalReport,
    test: &'a EvalReport,
}

fn print_metrics(label: &str, r: &EvalReport) {
    println!("{label:<5} {}", r.csv_row());
}

fn train_cmd(a: TrainArgs, matches: &ArgMatches) -> Result<(), CliError> {
    let file = FileConfig::load(a.common.config.as_deref())?;
    let r = Resolver::new(matches);
    let curves = resolve_curves(&a.curves, &file, &r)?;
    let seed = r.pick("seed", a.common.seed, file.seed);
    let out = r.pick("out", a.common.out, file.out);
    let mode: TrainMode = r.pick("mode", a.mode, file.mode).parse()?;
    let variant: Variant = r.pick("variant", a.variant, file.variant).parse()?;
    let hidden = r.pick("hidden", a.hidden, file.hidden);
    let bounds = (r.pick("lower", a.lower, file.lower), r.pick("upper", a.upper, file.upper));
    let threshold = r.pick("threshold", a.threshold, file.threshold);
    let train_fraction = r.pick("train_fraction", a.train_fraction, file.train_fraction);
    let impute = r.switch(a.data.impute, file.impute);
    let encode = r.switch(a.data.one_hot, file.one_hot);
    let data = r.pick("data", a.data.data, file.data);
    let model_path = a.model.or(file.model).unwrap_or_else(|| out.join("model.json"));
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(CliError::usage(format!("--threshold must be in (0, 1), got {threshold}")));
    }

    let gwo = GwoConfig {
        variant,
        n_agents: r.pick("agents", a.agents, file.agents),
        max_iter: r.pick("iters", a.iters, file.iters),
        inertia: curves.inertia,
        leader: curves.leader,
        inertia_scaling: curves.scaling,
        seed: derive(seed, "acgwo"),
        parallel: true,
        ..GwoConfig::default()
    };
    gwo.validate()?;
    let settings = TrainSettings {
        mode,
        gwo,
        bounds,
        bp_epochs: r.pick("bp_epochs", a.bp_epochs, file.bp_epochs),
        learning_rate: r.pick("lr", a.lr, file.lr),
        init_seed: derive(seed, "bp-init"),
    };

    let ds = load_dataset(&data, impute, encode)?;
    let split = prepare_split(&ds, train_fraction, derive(seed, "split"))?;
    let arch = MlpArchitecture::with_hidden(split.train.n_features(), &hidden)?;
    let report = train(&arch, &split.train.x, &split.train.y, &settings)?;

    let p_train = predict_proba(&arch, &report.final_params, &split.train.x)?;
    let p_test = predict_proba(&arch, &report.final_params, &split.test.x)?;
    let train_eval = EvalReport::compute(&split.train.y, &p_train, threshold)?;
    let test_eval = EvalReport::compute(&split.test.y, &p_test, threshold)?;

    let model = ModelArtifact {
        layer_sizes: arch.layer_sizes().to_vec(),
        params: report.final_params.as_slice().to_vec(),
        standardization: split.stats.clone(),
        threshold,
        feature_names: ds.feature_names.clone(),
        mode,
        seed,
        train_fraction,
        impute,
        one_hot: encode,
    };
    write_json_atomic(&model_path, &model)?;
    let report_path = out.join("train_report.json");
    write_json_atomic(
        &report_path,
        &TrainReportFile {
            mode,
            seed,
            layer_sizes: arch.layer_sizes(),
            settings: &settings,
            threshold,
            train_rows: split.train.len(),
            test_rows: split.test.len(),
            swarm_iterations: report.swarm_iterations,
            loss_history: &report.loss_history,
            train: &train_eval,
            test: &test_eval,
        },
    )?;
    println!("      {}", lupus_core::metrics::CSV_HEADER);
    print_metrics("train", &train_eval);
    print_metrics("test", &test_eval);
    println!("wrote {} and {}", model_path.display(), report_path.display());
    Ok(())
}

fn eval(a: EvalArgs, matches: &ArgMatches) -> Result<(), CliError> {
    let file = FileConfig::load(a.config.as_deref())?;
    let r = Resolver::new(matches);
    let out: PathBuf = r.pick("out", a.out, file.out);
    let data = r.pick("data", a.data, file.data);
    let model_path = r.pick("model", a.model, file.model);
    let text = std::fs::read_to_string(&model_path)
        .map_err(|e| CliError::data(format!("cannot read model {}: {e}", model_path.display())))?;
    let model = ModelArtifact::from_json(&text)
        .map_err(|e| CliError::data(format!("invalid model {}: {e}", model_path.display())))?;
    let arch = model.architecture()?;
    let params = model.param_vector()?;

    let ds = load_dataset(&data, model.impute, model.one_hot)?;
    if ds.feature_names != model.feature_names {
        return Err(CliError::data(format!(
            "data has {} features {:?}, model expects {} {:?}",
            ds.n_features(),
            ds.feature_names,
            model.feature_names.len(),
            model.feature_names
        )));
    }
    let (_, test) = stratified_split(&ds, model.train_fraction, derive(model.seed, "split"))?;
    let x_test = model.standardization.apply(&test.x)?;
    let proba = predict_proba(&arch, &params, &x_test)?;
    let report = EvalReport::compute(&test.y, &proba, model.threshold)?;
    write_json_atomic(&out.join("eval.json"), &report)?;
    write_atomic(&out.join("eval.csv"), report.to_csv().as_bytes())?;
    println!("      {}", lupus_core::metrics::CSV_HEADER);
    print_metrics("test", &report);
    Ok(())
}

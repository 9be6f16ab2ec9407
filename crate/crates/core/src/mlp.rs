//! Feed-forward sigmoid network for binary classification, trainable by the
//! grey wolf swarm over its flattened parameters, by full-batch gradient
//! descent, or by the swarm followed by gradient descent.
//!
//! Parameter layout, layer by layer: the `fan_out × fan_in` weight matrix in
//! row-major order (one row per output unit), then the `fan_out` biases.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curves::sigmoid;
use crate::dataprep::StandardizationStats;
use crate::error::{Error, Result};
use crate::optimizer::{run, GwoConfig, Objective, SearchSpace};
use crate::scalar::Scalar;
use crate::seed::{rng_from_seed, SwarmRng};

/// Probabilities are clipped to `[P_EPS, 1 − P_EPS]` inside the loss.
pub const P_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpArchitecture {
    layer_sizes: Vec<usize>,
}

impl MlpArchitecture {
    /// `layer_sizes` = input, hidden..., output; the output must be a single unit.
    pub fn new(layer_sizes: Vec<usize>) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::config("architecture needs at least input and output layers"));
        }
        if layer_sizes.contains(&0) {
            return Err(Error::config("layer sizes must be positive"));
        }
        if *layer_sizes.last().unwrap() != 1 {
            return Err(Error::config("output layer must have exactly one unit"));
        }
        Ok(MlpArchitecture { layer_sizes })
    }

    /// `[n_inputs, hidden, 1]`.
    pub fn with_hidden(n_inputs: usize, hidden: &[usize]) -> Result<Self> {
        let mut sizes = vec![n_inputs];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        Self::new(sizes)
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn input_size(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn n_params(&self) -> usize {
        self.layer_sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }

    fn widest(&self) -> usize {
        *self.layer_sizes.iter().max().unwrap()
    }
}

/// Flattened weights and biases: one search point for the swarm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector<F>(Vec<F>);

impl<F: Scalar> ParamVector<F> {
    pub fn new(arch: &MlpArchitecture, values: Vec<F>) -> Result<Self> {
        if values.len() != arch.n_params() {
            return Err(Error::domain(format!(
                "parameter vector has {} values, architecture {:?} needs {}",
                values.len(),
                arch.layer_sizes(),
                arch.n_params()
            )));
        }
        Ok(ParamVector(values))
    }

    pub fn zeros(arch: &MlpArchitecture) -> Self {
        ParamVector(vec![F::zero(); arch.n_params()])
    }

    /// Uniform in `±1/√fan_in` per layer.
    pub fn random(arch: &MlpArchitecture, rng: &mut SwarmRng) -> Self {
        let mut values = Vec::with_capacity(arch.n_params());
        for w in arch.layer_sizes().windows(2) {
            let limit = 1.0 / (w[0] as f64).sqrt();
            for _ in 0..(w[0] * w[1] + w[1]) {
                values.push(F::lit(rng.gen_range(-limit..limit)));
            }
        }
        ParamVector(values)
    }

    pub fn as_slice(&self) -> &[F] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<F> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One layer's weights (`fan_out` rows of `fan_in`) and biases.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams<F> {
    pub weights: Vec<Vec<F>>,
    pub biases: Vec<F>,
}

pub fn unflatten<F: Scalar>(arch: &MlpArchitecture, params: &ParamVector<F>) -> Result<Vec<LayerParams<F>>> {
    check_params(arch, params.as_slice())?;
    let mut rest = params.as_slice();
    let mut layers = Vec::with_capacity(arch.layer_sizes().len() - 1);
    for w in arch.layer_sizes().windows(2) {
        let (fan_in, fan_out) = (w[0], w[1]);
        let (wts, tail) = rest.split_at(fan_in * fan_out);
        let (biases, tail) = tail.split_at(fan_out);
        layers.push(LayerParams {
            weights: wts.chunks(fan_in).map(<[F]>::to_vec).collect(),
            biases: biases.to_vec(),
        });
        rest = tail;
    }
    Ok(layers)
}

pub fn flatten<F: Scalar>(arch: &MlpArchitecture, layers: &[LayerParams<F>]) -> Result<ParamVector<F>> {
    let mut values = Vec::with_capacity(arch.n_params());
    for l in layers {
        for row in &l.weights {
            values.extend_from_slice(row);
        }
        values.extend_from_slice(&l.biases);
    }
    ParamVector::new(arch, values)
}

fn check_params<F>(arch: &MlpArchitecture, params: &[F]) -> Result<()> {
    if params.len() != arch.n_params() {
        return Err(Error::domain(format!(
            "expected {} parameters, got {}",
            arch.n_params(),
            params.len()
        )));
    }
    Ok(())
}

fn check_data<F>(arch: &MlpArchitecture, x: &[Vec<F>], y: &[u8]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::domain("empty dataset"));
    }
    if x.len() != y.len() {
        return Err(Error::domain(format!("{} feature rows but {} labels", x.len(), y.len())));
    }
    if let Some(row) = x.iter().find(|r| r.len() != arch.input_size()) {
        return Err(Error::domain(format!(
            "feature row has {} values, network expects {}",
            row.len(),
            arch.input_size()
        )));
    }
    if let Some(&bad) = y.iter().find(|&&v| v > 1) {
        return Err(Error::domain(format!("label {bad} is not binary")));
    }
    Ok(())
}

/// Forward pass writing every layer's activations into `acts` (one buffer per
/// layer, input first). Returns the output probability.
fn forward_into<F: Scalar>(arch: &MlpArchitecture, params: &[F], x: &[F], acts: &mut [Vec<F>]) -> F {
    acts[0].clear();
    acts[0].extend_from_slice(x);
    let mut offset = 0;
    for (l, w) in arch.layer_sizes().windows(2).enumerate() {
        let (fan_in, fan_out) = (w[0], w[1]);
        let weights = &params[offset..offset + fan_in * fan_out];
        let biases = &params[offset + fan_in * fan_out..offset + fan_in * fan_out + fan_out];
        offset += fan_in * fan_out + fan_out;
        let (prev, next) = acts.split_at_mut(l + 1);
        let input = &prev[l];
        let out = &mut next[0];
        out.clear();
        for (row, &b) in weights.chunks_exact(fan_in).zip(biases) {
            let z = row.iter().zip(input).fold(b, |s, (&wi, &xi)| s + wi * xi);
            out.push(sigmoid(z));
        }
    }
    acts[acts.len() - 1][0]
}

fn activation_buffers<F: Scalar>(arch: &MlpArchitecture) -> Vec<Vec<F>> {
    arch.layer_sizes().iter().map(|&n| Vec::with_capacity(n)).collect()
}

/// Output probability for one feature vector.
pub fn forward<F: Scalar>(arch: &MlpArchitecture, params: &ParamVector<F>, x: &[F]) -> Result<F> {
    check_params(arch, params.as_slice())?;
    if x.len() != arch.input_size() {
        return Err(Error::domain(format!(
            "input has {} values, network expects {}",
            x.len(),
            arch.input_size()
        )));
    }
    let mut acts = activation_buffers(arch);
    Ok(forward_into(arch, params.as_slice(), x, &mut acts))
}

pub fn predict_proba<F: Scalar>(arch: &MlpArchitecture, params: &ParamVector<F>, x: &[Vec<F>]) -> Result<Vec<F>> {
    x.iter().map(|row| forward(arch, params, row)).collect()
}

/// Label 1 iff the output probability is `>= threshold`.
pub fn predict<F: Scalar>(
    arch: &MlpArchitecture,
    params: &ParamVector<F>,
    x: &[Vec<F>],
    threshold: F,
) -> Result<Vec<u8>> {
    Ok(predict_proba(arch, params, x)?
        .into_iter()
        .map(|p| u8::from(p >= threshold))
        .collect())
}

fn clip_prob<F: Scalar>(p: F) -> F {
    let eps = F::lit(P_EPS);
    p.max(eps).min(F::one() - eps)
}

fn sample_loss<F: Scalar>(p: F, y: u8) -> F {
    let p = clip_prob(p);
    if y == 1 {
        -p.ln()
    } else {
        -(F::one() - p).ln()
    }
}

fn loss_unchecked<F: Scalar>(arch: &MlpArchitecture, params: &[F], x: &[Vec<F>], y: &[u8]) -> F {
    let mut acts = activation_buffers(arch);
    let total: F = x
        .iter()
        .zip(y)
        .map(|(row, &label)| sample_loss(forward_into(arch, params, row, &mut acts), label))
        .sum();
    total / F::from_usize_lossy(x.len())
}

/// Mean binary cross-entropy.
pub fn bce_loss<F: Scalar>(arch: &MlpArchitecture, params: &ParamVector<F>, x: &[Vec<F>], y: &[u8]) -> Result<F> {
    check_params(arch, params.as_slice())?;
    check_data(arch, x, y)?;
    Ok(loss_unchecked(arch, params.as_slice(), x, y))
}

/// Gradient of [`bce_loss`] by reverse-mode differentiation.
///
/// Where the output probability sits inside the clip region the loss is flat
/// in the parameters and the sample contributes nothing.
pub fn backward<F: Scalar>(arch: &MlpArchitecture, params: &ParamVector<F>, x: &[Vec<F>], y: &[u8]) -> Result<Vec<F>> {
    check_params(arch, params.as_slice())?;
    check_data(arch, x, y)?;
    let params = params.as_slice();
    let sizes = arch.layer_sizes();
    let n_layers = sizes.len() - 1;
    let offsets: Vec<usize> = sizes
        .windows(2)
        .scan(0, |off, w| {
            let o = *off;
            *off += w[0] * w[1] + w[1];
            Some(o)
        })
        .collect();

    let mut grad = vec![F::zero(); params.len()];
    let mut acts = activation_buffers(arch);
    let mut delta: Vec<F> = Vec::with_capacity(arch.widest());
    let mut prev_delta: Vec<F> = Vec::with_capacity(arch.widest());
    let eps = F::lit(P_EPS);

    for (row, &label) in x.iter().zip(y) {
        let p = forward_into(arch, params, row, &mut acts);
        delta.clear();
        // d(BCE)/dz at a sigmoid output collapses to p − y
        if p < eps || p > F::one() - eps {
            delta.push(F::zero());
        } else {
            delta.push(p - F::lit(f64::from(label)));
        }

        for l in (0..n_layers).rev() {
            let (fan_in, fan_out) = (sizes[l], sizes[l + 1]);
            let off = offsets[l];
            let input = &acts[l];
            for (o, &d) in delta.iter().enumerate() {
                let g_row = &mut grad[off + o * fan_in..off + (o + 1) * fan_in];
                for (g, &a) in g_row.iter_mut().zip(input) {
                    *g = *g + d * a;
                }
                let gb = &mut grad[off + fan_in * fan_out + o];
                *gb = *gb + d;
            }
            if l > 0 {
                prev_delta.clear();
                let weights = &params[off..off + fan_in * fan_out];
                for i in 0..fan_in {
                    let back: F = delta
                        .iter()
                        .enumerate()
                        .map(|(o, &d)| weights[o * fan_in + i] * d)
                        .sum();
                    let a = input[i];
                    prev_delta.push(back * a * (F::one() - a));
                }
                std::mem::swap(&mut delta, &mut prev_delta);
            }
        }
    }

    let n = F::from_usize_lossy(x.len());
    for g in &mut grad {
        *g = *g / n;
    }
    Ok(grad)
}

/// Training loss as a swarm objective over flattened parameters.
pub struct LossObjective<'a, F> {
    arch: &'a MlpArchitecture,
    x: &'a [Vec<F>],
    y: &'a [u8],
}

impl<'a, F: Scalar> LossObjective<'a, F> {
    pub fn new(arch: &'a MlpArchitecture, x: &'a [Vec<F>], y: &'a [u8]) -> Result<Self> {
        check_data(arch, x, y)?;
        Ok(LossObjective { arch, x, y })
    }
}

impl<F: Scalar> Objective<F> for LossObjective<'_, F> {
    fn evaluate(&self, params: &[F], _rng: &mut SwarmRng) -> F {
        loss_unchecked(self.arch, params, self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrainMode {
    #[serde(rename = "acgwo")]
    Acgwo,
    #[serde(rename = "bp")]
    Bp,
    /// Swarm search followed by gradient descent from the alpha solution.
    #[serde(rename = "acgwo-bp")]
    Hybrid,
}

impl TrainMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TrainMode::Acgwo => "acgwo",
            TrainMode::Bp => "bp",
            TrainMode::Hybrid => "acgwo-bp",
        }
    }
}

impl std::str::FromStr for TrainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "acgwo" => Ok(TrainMode::Acgwo),
            "bp" => Ok(TrainMode::Bp),
            "acgwo-bp" | "hybrid" => Ok(TrainMode::Hybrid),
            _ => Err(Error::config(format!("unknown training mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainReport<F> {
    pub final_params: ParamVector<F>,
    /// Swarm alpha history, then the loss after every gradient step.
    pub loss_history: Vec<F>,
    /// Number of leading `loss_history` entries produced by the swarm.
    pub swarm_iterations: usize,
    pub mode: TrainMode,
}

/// Swarm search over `[lo, hi]^P` with the training loss as objective.
pub fn train_acgwo<F: Scalar>(
    arch: &MlpArchitecture,
    x: &[Vec<F>],
    y: &[u8],
    cfg: &GwoConfig<F>,
    bounds: (F, F),
) -> Result<TrainReport<F>> {
    let objective = LossObjective::new(arch, x, y)?;
    let space = SearchSpace::uniform(arch.n_params(), bounds.0, bounds.1)?;
    let result = run(&objective, &space, cfg)?;
    Ok(TrainReport {
        final_params: ParamVector::new(arch, result.best_position)?,
        swarm_iterations: result.history.len(),
        loss_history: result.history,
        mode: TrainMode::Acgwo,
    })
}

/// Full-batch gradient descent from `init`; records the loss after each step.
pub fn train_bp<F: Scalar>(
    arch: &MlpArchitecture,
    x: &[Vec<F>],
    y: &[u8],
    init: ParamVector<F>,
    epochs: usize,
    learning_rate: F,
) -> Result<TrainReport<F>> {
    check_params(arch, init.as_slice())?;
    check_data(arch, x, y)?;
    let mut params = init;
    let mut history = Vec::with_capacity(epochs);
    for _ in 0..epochs {
        let grad = backward(arch, &params, x, y)?;
        for (p, g) in params.0.iter_mut().zip(grad) {
            *p = *p - learning_rate * g;
        }
        history.push(loss_unchecked(arch, params.as_slice(), x, y));
    }
    Ok(TrainReport {
        final_params: params,
        loss_history: history,
        swarm_iterations: 0,
        mode: TrainMode::Bp,
    })
}

/// Swarm search, then `bp_epochs` gradient steps from the alpha solution.
pub fn train_hybrid<F: Scalar>(
    arch: &MlpArchitecture,
    x: &[Vec<F>],
    y: &[u8],
    cfg: &GwoConfig<F>,
    bounds: (F, F),
    bp_epochs: usize,
    learning_rate: F,
) -> Result<TrainReport<F>> {
    let swarm = train_acgwo(arch, x, y, cfg, bounds)?;
    if bp_epochs == 0 {
        return Ok(swarm);
    }
    let bp = train_bp(arch, x, y, swarm.final_params, bp_epochs, learning_rate)?;
    let mut loss_history = swarm.loss_history;
    loss_history.extend(bp.loss_history);
    Ok(TrainReport {
        final_params: bp.final_params,
        loss_history,
        swarm_iterations: swarm.swarm_iterations,
        mode: TrainMode::Hybrid,
    })
}

/// Settings shared by every training mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct TrainSettings<F> {
    pub mode: TrainMode,
    pub gwo: GwoConfig<F>,
    pub bounds: (F, F),
    pub bp_epochs: usize,
    pub learning_rate: F,
    /// Seed for the random initialization of pure gradient-descent training.
    pub init_seed: u64,
}

pub fn train<F: Scalar>(
    arch: &MlpArchitecture,
    x: &[Vec<F>],
    y: &[u8],
    settings: &TrainSettings<F>,
) -> Result<TrainReport<F>> {
    match settings.mode {
        TrainMode::Acgwo => train_acgwo(arch, x, y, &settings.gwo, settings.bounds),
        TrainMode::Hybrid => train_hybrid(
            arch,
            x,
            y,
            &settings.gwo,
            settings.bounds,
            settings.bp_epochs,
            settings.learning_rate,
        ),
        TrainMode::Bp => {
            let mut rng = rng_from_seed(settings.init_seed);
            let init = ParamVector::random(arch, &mut rng);
            train_bp(arch, x, y, init, settings.bp_epochs, settings.learning_rate)
        }
    }
}

/// Everything needed to reproduce predictions and the evaluation split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub layer_sizes: Vec<usize>,
    pub params: Vec<f64>,
    pub standardization: StandardizationStats,
    pub threshold: f64,
    pub feature_names: Vec<String>,
    pub mode: TrainMode,
    pub seed: u64,
    pub train_fraction: f64,
    pub impute: bool,
    pub one_hot: bool,
}

impl ModelArtifact {
    pub fn architecture(&self) -> Result<MlpArchitecture> {
        MlpArchitecture::new(self.layer_sizes.clone())
    }

    pub fn param_vector(&self) -> Result<ParamVector<f64>> {
        ParamVector::new(&self.architecture()?, self.params.clone())
    }

    /// Parses and cross-checks the artifact's internal consistency.
    pub fn from_json(text: &str) -> Result<Self> {
        let model: ModelArtifact = serde_json::from_str(text)?;
        let arch = model.architecture()?;
        model.param_vector()?;
        let width = arch.input_size();
        if model.standardization.mean.len() != width || model.standardization.std.len() != width {
            return Err(Error::Data(format!(
                "standardization has {} columns but the network expects {width}",
                model.standardization.mean.len()
            )));
        }
        if !(model.threshold > 0.0 && model.threshold < 1.0) {
            return Err(Error::Data(format!("threshold {} outside (0, 1)", model.threshold)));
        }
        Ok(model)
    }
}

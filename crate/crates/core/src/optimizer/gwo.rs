use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{evaluate_all, Objective, RunResult, SearchSpace};
use crate::curves::{cauchy_inertia, leader_weight, CurveParams, InertiaScaling};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::{rng_from_seed, SwarmRng};

/// GWO and its three extensions.
///
/// The "C" switches on the Cauchy-curve inertia `ww` on leader positions, the
/// "A" switches on adaptive fitness-based leader weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Gwo,
    Cgwo,
    Agwo,
    Acgwo,
}

impl Variant {
    pub fn uses_curve(self) -> bool {
        matches!(self, Variant::Cgwo | Variant::Acgwo)
    }

    pub fn uses_adaptive_weights(self) -> bool {
        matches!(self, Variant::Agwo | Variant::Acgwo)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Gwo => "gwo",
            Variant::Cgwo => "cgwo",
            Variant::Agwo => "agwo",
            Variant::Acgwo => "acgwo",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gwo" => Ok(Variant::Gwo),
            "cgwo" => Ok(Variant::Cgwo),
            "agwo" => Ok(Variant::Agwo),
            "acgwo" => Ok(Variant::Acgwo),
            _ => Err(Error::config(format!("unknown GWO variant '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct GwoConfig<F> {
    pub variant: Variant,
    pub n_agents: usize,
    pub max_iter: usize,
    /// Cauchy-curve inertia parameters (`ww`).
    pub inertia: CurveParams<F>,
    /// Adaptive leader-weight parameters (`fi`).
    pub leader: CurveParams<F>,
    pub seed: u64,
    /// Use `|C·leader − wolf|` as the displacement (canonical GWO). When false
    /// the signed difference is used.
    pub abs_displacement: bool,
    pub inertia_scaling: InertiaScaling,
    /// Evaluate deterministic objectives on the rayon pool.
    pub parallel: bool,
}

impl<F: Scalar> Default for GwoConfig<F> {
    /// ACGWO with swarm 100 and 1000 iterations.
    fn default() -> Self {
        GwoConfig {
            variant: Variant::Acgwo,
            n_agents: 100,
            max_iter: 1000,
            inertia: CurveParams::s_shape(),
            leader: CurveParams::cauchy(),
            seed: 0,
            abs_displacement: true,
            inertia_scaling: InertiaScaling::default(),
            parallel: true,
        }
    }
}

impl<F: Scalar> GwoConfig<F> {
    /// Benchmark-sweep defaults: 40 agents, 500 iterations.
    pub fn benchmark(variant: Variant, seed: u64) -> Self {
        GwoConfig {
            variant,
            n_agents: 40,
            max_iter: 500,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 3 {
            return Err(Error::config(format!(
                "n_agents must be >= 3 (three leaders), got {}",
                self.n_agents
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter must be positive"));
        }
        self.inertia.validate()?;
        self.leader.validate()?;
        if self.variant.uses_curve()
            && self.inertia_scaling == InertiaScaling::PeakNormalized
            && !(self.inertia.peak() > F::zero())
        {
            return Err(Error::config("inertia curve peak must be positive for peak normalization"));
        }
        Ok(())
    }
}

/// Best three positions seen so far, ordered `scores[0] <= scores[1] <= scores[2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaders<F> {
    pub positions: [Vec<F>; 3],
    pub scores: [F; 3],
}

impl<F: Scalar> Leaders<F> {
    /// Three empty slots with score +∞.
    pub fn new(dim: usize) -> Self {
        Leaders {
            positions: [vec![F::zero(); dim], vec![F::zero(); dim], vec![F::zero(); dim]],
            scores: [F::infinity(); 3],
        }
    }

    pub fn alpha_score(&self) -> F {
        self.scores[0]
    }

    /// Offers one evaluated agent to the leader set.
    pub fn offer(&mut self, x: &[F], score: F) {
        let [a, b, d] = self.scores;
        if score < a {
            self.scores = [score, a, b];
            self.positions.rotate_right(1);
            self.positions[0].copy_from_slice(x);
        } else if score < b {
            self.scores = [a, score, b];
            self.positions.swap(1, 2);
            self.positions[1].copy_from_slice(x);
        } else if score < d {
            self.scores[2] = score;
            self.positions[2].copy_from_slice(x);
        }
    }
}

/// Positions, fitness and leaders of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState<F> {
    pub positions: Vec<Vec<F>>,
    pub fitness: Vec<F>,
    pub leaders: Leaders<F>,
    pub iter: usize,
}

/// Uniform random positions inside `space`; leader scores start at +∞.
pub fn initialize<F: Scalar>(space: &SearchSpace<F>, cfg: &GwoConfig<F>) -> Result<SwarmState<F>> {
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    Ok(initialize_with(space, cfg.n_agents, &mut rng))
}

fn initialize_with<F: Scalar>(space: &SearchSpace<F>, n_agents: usize, rng: &mut SwarmRng) -> SwarmState<F> {
    let positions = (0..n_agents).map(|_| space.sample(rng)).collect();
    SwarmState {
        positions,
        fitness: vec![F::infinity(); n_agents],
        leaders: Leaders::new(space.dim()),
        iter: 0,
    }
}

/// Control scalar decaying linearly from 2 to 0.
pub fn control_wa<F: Scalar>(iter: usize, max_iter: usize) -> F {
    let two = F::lit(2.0);
    two - F::from_usize_lossy(iter) * (two / F::from_usize_lossy(max_iter.max(1)))
}

/// Draws `A = 2·wa·r1 − wa` and `C = 2·r2` per coordinate, `r1` before `r2`.
pub fn step_coefficients<F: Scalar>(wa: F, dim: usize, rng: &mut SwarmRng) -> (Vec<F>, Vec<F>) {
    let mut a = Vec::with_capacity(dim);
    let mut c = Vec::with_capacity(dim);
    let two = F::lit(2.0);
    for _ in 0..dim {
        let r1 = F::lit(rng.gen::<f64>());
        let r2 = F::lit(rng.gen::<f64>());
        a.push(two * wa * r1 - wa);
        c.push(two * r2);
    }
    (a, c)
}

/// `A` and `C` from explicit uniform draws.
pub fn coefficients_from_draws<F: Scalar>(wa: F, r1: &[F], r2: &[F]) -> (Vec<F>, Vec<F>) {
    let two = F::lit(2.0);
    (
        r1.iter().map(|&r| two * wa * r - wa).collect(),
        r2.iter().map(|&r| two * r).collect(),
    )
}

/// Candidate position pulled toward one leader:
/// `D = |C·leader − wolf|`, `candidate = ww·leader − A·D`.
pub fn candidate_from_leader<F: Scalar>(
    wolf: &[F],
    leader: &[F],
    a: &[F],
    c: &[F],
    ww: F,
    abs_displacement: bool,
) -> Vec<F> {
    wolf.iter()
        .zip(leader)
        .zip(a.iter().zip(c))
        .map(|((&w, &l), (&aj, &cj))| {
            let mut d = cj * l - w;
            if abs_displacement {
                d = d.abs();
            }
            ww * l - aj * d
        })
        .collect()
}

/// Mean of the three leader candidates, weighted when `weights` is given.
pub fn combine_candidates<F: Scalar>(candidates: [&[F]; 3], weights: Option<[F; 3]>) -> Result<Vec<F>> {
    let dim = candidates[0].len();
    if candidates.iter().any(|c| c.len() != dim) {
        return Err(Error::Internal("candidate length mismatch".into()));
    }
    match weights {
        None => {
            let third = F::one() / F::lit(3.0);
            Ok((0..dim)
                .map(|j| (candidates[0][j] + candidates[1][j] + candidates[2][j]) * third)
                .collect())
        }
        Some(w) => {
            let total = w[0] + w[1] + w[2];
            if !(total > F::zero() && total.is_finite()) {
                return Err(Error::Internal(format!(
                    "leader weight sum must be positive, got {total}"
                )));
            }
            Ok((0..dim)
                .map(|j| {
                    (w[0] * candidates[0][j] + w[1] * candidates[1][j] + w[2] * candidates[2][j]) / total
                })
                .collect())
        }
    }
}

/// Coordinate-wise projection onto the box.
pub fn clamp<F: Scalar>(pos: &[F], space: &SearchSpace<F>) -> Vec<F> {
    pos.iter()
        .zip(space.lower().iter().zip(space.upper()))
        .map(|(&v, (&lo, &hi))| v.max(lo).min(hi))
        .collect()
}

/// A run that can be advanced one iteration at a time.
///
/// Each [`step`](GwoRun::step) evaluates the swarm, updates the leaders,
/// records the alpha score and moves every wolf.
pub struct GwoRun<'a, F, O: ?Sized> {
    objective: &'a O,
    space: &'a SearchSpace<F>,
    cfg: &'a GwoConfig<F>,
    rng: SwarmRng,
    state: SwarmState<F>,
    history: Vec<F>,
}

impl<'a, F, O> GwoRun<'a, F, O>
where
    F: Scalar,
    O: Objective<F> + ?Sized,
{
    pub fn new(objective: &'a O, space: &'a SearchSpace<F>, cfg: &'a GwoConfig<F>) -> Result<Self> {
        cfg.validate()?;
        let mut rng = rng_from_seed(cfg.seed);
        let state = initialize_with(space, cfg.n_agents, &mut rng);
        Ok(GwoRun {
            objective,
            space,
            cfg,
            rng,
            state,
            history: Vec::with_capacity(cfg.max_iter),
        })
    }

    pub fn state(&self) -> &SwarmState<F> {
        &self.state
    }

    pub fn history(&self) -> &[F] {
        &self.history
    }

    pub fn is_done(&self) -> bool {
        self.history.len() >= self.cfg.max_iter
    }

    pub fn step(&mut self) -> Result<()> {
        if self.is_done() {
            return Err(Error::Internal("run already finished".into()));
        }
        let cfg = self.cfg;
        let iter = self.history.len();
        let dim = self.space.dim();
        let state = &mut self.state;
        state.iter = iter;
        state.fitness = evaluate_all(self.objective, &state.positions, &mut self.rng, cfg.parallel);
        for (x, &f) in state.positions.iter().zip(&state.fitness) {
            state.leaders.offer(x, f);
        }
        self.history.push(state.leaders.alpha_score());

        let f_avg = state.fitness.iter().copied().sum::<F>() / F::from_usize_lossy(cfg.n_agents);
        let wa = control_wa::<F>(iter, cfg.max_iter);
        let ww = if cfg.variant.uses_curve() {
            let raw = cauchy_inertia(iter, cfg.max_iter, &cfg.inertia)?;
            cfg.inertia_scaling.apply(raw, &cfg.inertia)
        } else {
            F::one()
        };
        let weights = cfg.variant.uses_adaptive_weights().then(|| {
            let s = state.leaders.scores;
            [
                leader_weight(s[0], f_avg, &cfg.leader),
                leader_weight(s[1], f_avg, &cfg.leader),
                leader_weight(s[2], f_avg, &cfg.leader),
            ]
        });

        for wolf in state.positions.iter_mut() {
            let cands: Vec<Vec<F>> = state
                .leaders
                .positions
                .iter()
                .map(|leader| {
                    let (a, c) = step_coefficients(wa, dim, &mut self.rng);
                    candidate_from_leader(wolf, leader, &a, &c, ww, cfg.abs_displacement)
                })
                .collect();
            let combined = combine_candidates([&cands[0], &cands[1], &cands[2]], weights)?;
            *wolf = clamp(&combined, self.space);
        }
        Ok(())
    }

    pub fn finish(self) -> RunResult<F> {
        RunResult {
            best_position: self.state.leaders.positions[0].clone(),
            best_score: self.state.leaders.alpha_score(),
            evaluations: self.cfg.n_agents * self.history.len(),
            history: self.history,
        }
    }
}

/// Runs the configured variant to completion.
pub fn run<F, O>(objective: &O, space: &SearchSpace<F>, cfg: &GwoConfig<F>) -> Result<RunResult<F>>
where
    F: Scalar,
    O: Objective<F> + ?Sized,
{
    let mut r = GwoRun::new(objective, space, cfg)?;
    while !r.is_done() {
        r.step()?;
    }
    Ok(r.finish())
}

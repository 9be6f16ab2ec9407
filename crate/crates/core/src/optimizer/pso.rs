use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{evaluate_all, Objective, RunResult, SearchSpace};
use crate::curves::{inverse_sigmoid_weight, SigmoidScheduleParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::rng_from_seed;

/// Inertia schedule for the PSO baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", bound = "F: Scalar + Serialize + serde::de::DeserializeOwned")]
pub enum PsoInertia<F> {
    /// `w_max → w_min` linearly over the run.
    Linear,
    /// Inverse-sigmoid decay between `w_max` and `w_min` with steepness `a`, `b`.
    InverseSigmoid { a: F, b: F },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct PsoConfig<F> {
    pub n_particles: usize,
    pub max_iter: usize,
    /// Cognitive learning factor.
    pub c1: F,
    /// Social learning factor.
    pub c2: F,
    pub w_max: F,
    pub w_min: F,
    pub inertia: PsoInertia<F>,
    /// Velocity limit as a fraction of each coordinate's range.
    pub velocity_clamp: F,
    pub seed: u64,
    pub parallel: bool,
}

impl<F: Scalar> Default for PsoConfig<F> {
    fn default() -> Self {
        PsoConfig {
            n_particles: 40,
            max_iter: 500,
            c1: F::lit(2.0),
            c2: F::lit(2.0),
            w_max: F::lit(0.9),
            w_min: F::lit(0.4),
            inertia: PsoInertia::Linear,
            velocity_clamp: F::lit(0.2),
            seed: 0,
            parallel: true,
        }
    }
}

impl<F: Scalar> PsoConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if self.n_particles == 0 {
            return Err(Error::config("PSO needs at least one particle"));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter must be positive"));
        }
        if self.w_max < self.w_min {
            return Err(Error::config("w_max must be >= w_min"));
        }
        if !(self.velocity_clamp > F::zero()) {
            return Err(Error::config("velocity_clamp must be positive"));
        }
        Ok(())
    }

    /// Inertia weight at `iter`; the linear schedule reaches `w_min` on the
    /// last iteration.
    pub fn weight(&self, iter: usize) -> F {
        match self.inertia {
            PsoInertia::Linear => {
                let span = F::from_usize_lossy(self.max_iter.saturating_sub(1).max(1));
                let t = F::from_usize_lossy(iter) / span;
                self.w_max - (self.w_max - self.w_min) * t
            }
            PsoInertia::InverseSigmoid { a, b } => {
                let p = SigmoidScheduleParams {
                    w_start: self.w_max,
                    w_end: self.w_min,
                    a,
                    b,
                };
                inverse_sigmoid_weight(F::from_usize_lossy(iter), &p)
            }
        }
    }
}

/// Global-best PSO with `v ← w·v + c1·r1·(pbest − x) + c2·r2·(gbest − x)`.
///
/// Velocities start at zero. Per iteration: evaluate, update personal and
/// global bests, record the global best, then move every particle drawing
/// `r1`, `r2` per coordinate.
pub fn pso_run<F, O>(objective: &O, space: &SearchSpace<F>, cfg: &PsoConfig<F>) -> Result<RunResult<F>>
where
    F: Scalar,
    O: Objective<F> + ?Sized,
{
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    let dim = space.dim();
    let vmax: Vec<F> = space
        .lower()
        .iter()
        .zip(space.upper())
        .map(|(&lo, &hi)| (hi - lo) * cfg.velocity_clamp)
        .collect();

    let mut positions: Vec<Vec<F>> = (0..cfg.n_particles).map(|_| space.sample(&mut rng)).collect();
    let mut velocities = vec![vec![F::zero(); dim]; cfg.n_particles];
    let mut pbest = positions.clone();
    let mut pbest_score = vec![F::infinity(); cfg.n_particles];
    let mut gbest = positions[0].clone();
    let mut gbest_score = F::infinity();
    let mut history = Vec::with_capacity(cfg.max_iter);

    for iter in 0..cfg.max_iter {
        let fitness = evaluate_all(objective, &positions, &mut rng, cfg.parallel);
        for (i, &f) in fitness.iter().enumerate() {
            if f < pbest_score[i] {
                pbest_score[i] = f;
                pbest[i].copy_from_slice(&positions[i]);
            }
            if f < gbest_score {
                gbest_score = f;
                gbest.copy_from_slice(&positions[i]);
            }
        }
        history.push(gbest_score);

        let w = cfg.weight(iter);
        for ((x, v), pb) in positions.iter_mut().zip(velocities.iter_mut()).zip(&pbest) {
            for j in 0..dim {
                let r1 = F::lit(rng.gen::<f64>());
                let r2 = F::lit(rng.gen::<f64>());
                let vel = w * v[j] + cfg.c1 * r1 * (pb[j] - x[j]) + cfg.c2 * r2 * (gbest[j] - x[j]);
                v[j] = vel.max(-vmax[j]).min(vmax[j]);
                x[j] = (x[j] + v[j]).max(space.lower()[j]).min(space.upper()[j]);
            }
        }
    }

    Ok(RunResult {
        best_position: gbest,
        best_score: gbest_score,
        history,
        evaluations: cfg.n_particles * cfg.max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchfns::sphere;

    #[test]
    fn improves_on_sphere() {
        let space = SearchSpace::uniform(2, -100.0, 100.0).unwrap();
        let cfg = PsoConfig {
            max_iter: 200,
            seed: 4,
            ..PsoConfig::<f64>::default()
        };
        let r = pso_run(&|x: &[f64]| sphere(x), &space, &cfg).unwrap();
        assert!(r.best_score < r.history[0]);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(r, pso_run(&|x: &[f64]| sphere(x), &space, &cfg).unwrap());
        assert!(space.contains(&r.best_position));
    }

    #[test]
    fn linear_weight_endpoints() {
        let cfg = PsoConfig::<f64> {
            max_iter: 11,
            ..PsoConfig::default()
        };
        assert_eq!(cfg.weight(0), 0.9);
        assert!((cfg.weight(10) - 0.4).abs() < 1e-15);
        assert!((cfg.weight(5) - 0.65).abs() < 1e-15);
    }

    #[test]
    fn inverse_sigmoid_weight_schedule() {
        let cfg = PsoConfig::<f64> {
            max_iter: 100,
            inertia: PsoInertia::InverseSigmoid { a: 10.0, b: 0.2 },
            ..PsoConfig::default()
        };
        assert!((cfg.weight(50) - 0.65).abs() < 1e-15);
        assert!(cfg.weight(0) > 0.8999);
        assert!(cfg.weight(99) < 0.4001);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = PsoConfig::<f64> {
            w_max: 0.1,
            ..PsoConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}

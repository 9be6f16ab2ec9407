//! Box-bounded continuous minimization: the grey wolf family and a PSO baseline.
//!
//! One iteration of [`run`] consumes the RNG stream in a fixed order:
//! objective noise draws in agent-index order, then for every agent, for each
//! leader (alpha, beta, delta), for every coordinate, `r1` followed by `r2`.

mod gwo;
mod pso;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::{rng_from_seed, SwarmRng};

pub use gwo::{
    candidate_from_leader, clamp, coefficients_from_draws, combine_candidates, control_wa,
    initialize, run, step_coefficients, GwoConfig, GwoRun, Leaders, SwarmState, Variant,
};
pub use pso::{pso_run, PsoConfig, PsoInertia};

/// A fitness function to minimize.
///
/// Stochastic objectives must draw only from the stream they are handed; they
/// are then always evaluated sequentially in agent-index order.
pub trait Objective<F: Scalar>: Sync {
    fn evaluate(&self, x: &[F], rng: &mut SwarmRng) -> F;

    fn is_stochastic(&self) -> bool {
        false
    }
}

impl<F, G> Objective<F> for G
where
    F: Scalar,
    G: Fn(&[F]) -> F + Sync,
{
    fn evaluate(&self, x: &[F], _rng: &mut SwarmRng) -> F {
        self(x)
    }
}

/// Per-coordinate box `[lower[j], upper[j]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace<F> {
    lower: Vec<F>,
    upper: Vec<F>,
}

impl<F: Scalar> SearchSpace<F> {
    pub fn new(lower: Vec<F>, upper: Vec<F>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::config("search space needs dim >= 1"));
        }
        if lower.len() != upper.len() {
            return Err(Error::config(format!(
                "bound length mismatch: {} lower vs {} upper",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!(
                    "coordinate {j}: lower ({lo}) must be finite and strictly below upper ({hi})"
                )));
            }
        }
        Ok(SearchSpace { lower, upper })
    }

    /// The same range on every coordinate.
    pub fn uniform(dim: usize, lower: F, upper: F) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[F] {
        &self.lower
    }

    pub fn upper(&self) -> &[F] {
        &self.upper
    }

    pub fn contains(&self, x: &[F]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    pub(crate) fn sample(&self, rng: &mut SwarmRng) -> Vec<F> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| lo + (hi - lo) * F::lit(rng.gen::<f64>()))
            .collect()
    }
}

/// Outcome of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult<F> {
    pub best_position: Vec<F>,
    pub best_score: F,
    /// Best-so-far score after each iteration's leader update.
    pub history: Vec<F>,
    pub evaluations: usize,
}

/// Which optimizer a harness cell or CLI invocation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Gwo,
    Cgwo,
    Agwo,
    Acgwo,
    Pso,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Pso,
        Algorithm::Gwo,
        Algorithm::Cgwo,
        Algorithm::Agwo,
        Algorithm::Acgwo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Gwo => "gwo",
            Algorithm::Cgwo => "cgwo",
            Algorithm::Agwo => "agwo",
            Algorithm::Acgwo => "acgwo",
            Algorithm::Pso => "pso",
        }
    }

    /// Grey wolf variant, or `None` for PSO.
    pub fn variant(self) -> Option<Variant> {
        match self {
            Algorithm::Gwo => Some(Variant::Gwo),
            Algorithm::Cgwo => Some(Variant::Cgwo),
            Algorithm::Agwo => Some(Variant::Agwo),
            Algorithm::Acgwo => Some(Variant::Acgwo),
            Algorithm::Pso => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gwo" => Ok(Algorithm::Gwo),
            "cgwo" => Ok(Algorithm::Cgwo),
            "agwo" => Ok(Algorithm::Agwo),
            "acgwo" => Ok(Algorithm::Acgwo),
            "pso" => Ok(Algorithm::Pso),
            _ => Err(Error::config(format!("unknown algorithm '{s}'"))),
        }
    }
}

/// NaN fitness ranks as +∞ so a misbehaving objective never becomes a leader.
fn sanitize<F: Scalar>(v: F) -> F {
    if v.is_nan() {
        F::infinity()
    } else {
        v
    }
}

/// Evaluates every row of `positions`.
///
/// Deterministic objectives may be dispatched across threads; the result is
/// identical either way because each evaluation is independent.
fn evaluate_all<F, O>(objective: &O, positions: &[Vec<F>], rng: &mut SwarmRng, parallel: bool) -> Vec<F>
where
    F: Scalar,
    O: Objective<F> + ?Sized,
{
    if parallel && !objective.is_stochastic() {
        positions
            .par_iter()
            .map_init(
                || rng_from_seed(0),
                |scratch, x| sanitize(objective.evaluate(x, scratch)),
            )
            .collect()
    } else {
        positions
            .iter()
            .map(|x| sanitize(objective.evaluate(x, rng)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_space_validation() {
        assert!(SearchSpace::uniform(2, -1.0, 1.0).is_ok());
        assert!(SearchSpace::uniform(0, -1.0, 1.0).is_err());
        assert!(SearchSpace::uniform(2, 1.0, 1.0).is_err());
        assert!(SearchSpace::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(SearchSpace::new(vec![0.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("sca".parse::<Algorithm>().is_err());
    }

    #[test]
    fn nan_is_ranked_last() {
        assert_eq!(sanitize(f64::NAN), f64::INFINITY);
        assert_eq!(sanitize(1.5_f64), 1.5);
    }
}

//! The six benchmark objectives (plus Rastrigin for side experiments), their
//! search ranges and known optima.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::Objective;
use crate::scalar::Scalar;
use crate::seed::SwarmRng;

/// Σ x².
pub fn sphere<F: Scalar>(x: &[F]) -> F {
    x.iter().map(|&v| v * v).sum()
}

/// max |x|.
pub fn schwefel_p221<F: Scalar>(x: &[F]) -> Result<F> {
    if x.is_empty() {
        return Err(Error::domain("schwefel P2.21 needs a non-empty vector"));
    }
    Ok(x.iter().fold(F::zero(), |m, &v| m.max(v.abs())))
}

/// Σ|x| + Π|x|.
pub fn schwefel_p222<F: Scalar>(x: &[F]) -> F {
    let sum: F = x.iter().map(|v| v.abs()).sum();
    let prod = x.iter().fold(F::one(), |p, &v| p * v.abs());
    sum + prod
}

pub fn rosenbrock<F: Scalar>(x: &[F]) -> Result<F> {
    if x.len() < 2 {
        return Err(Error::domain(format!(
            "rosenbrock needs dim >= 2, got {}",
            x.len()
        )));
    }
    let hundred = F::lit(100.0);
    Ok(x
        .windows(2)
        .map(|w| {
            let a = w[1] - w[0] * w[0];
            let b = w[0] - F::one();
            hundred * a * a + b * b
        })
        .sum())
}

/// Deterministic part of the quartic-with-noise function: Σ (j+1)·x_j⁴.
pub fn quartic<F: Scalar>(x: &[F]) -> F {
    x.iter()
        .enumerate()
        .map(|(j, &v)| {
            let v2 = v * v;
            F::from_usize_lossy(j + 1) * v2 * v2
        })
        .sum()
}

/// Quartic plus one uniform `[0, 1)` draw from `rng` per evaluation.
pub fn quadric_noise<F: Scalar>(x: &[F], rng: &mut SwarmRng) -> F {
    let u: f64 = rng.gen();
    quartic(x) + F::lit(u)
}

/// Generalized Schaffer F6 over the squared norm s = Σx²:
/// `0.5 + (sin²√s − 0.5) / (1 + 0.001·s)²`.
pub fn schaffer<F: Scalar>(x: &[F]) -> Result<F> {
    if x.is_empty() {
        return Err(Error::domain("schaffer needs a non-empty vector"));
    }
    let s = sphere(x);
    let half = F::lit(0.5);
    let sin = s.sqrt().sin();
    let den = F::one() + F::lit(0.001) * s;
    Ok(half + (sin * sin - half) / (den * den))
}

pub fn rastrigin<F: Scalar>(x: &[F]) -> F {
    let ten = F::lit(10.0);
    let two_pi = F::lit(2.0) * F::PI();
    ten * F::from_usize_lossy(x.len())
        + x.iter()
            .map(|&v| v * v - ten * (two_pi * v).cos())
            .sum::<F>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BenchmarkId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    /// Rastrigin; not part of the six-function table.
    F5r,
}

impl BenchmarkId {
    pub const TABLE: [BenchmarkId; 6] = [
        BenchmarkId::F1,
        BenchmarkId::F2,
        BenchmarkId::F3,
        BenchmarkId::F4,
        BenchmarkId::F5,
        BenchmarkId::F6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkId::F1 => "f1",
            BenchmarkId::F2 => "f2",
            BenchmarkId::F3 => "f3",
            BenchmarkId::F4 => "f4",
            BenchmarkId::F5 => "f5",
            BenchmarkId::F6 => "f6",
            BenchmarkId::F5r => "f5r",
        }
    }

    pub fn info(self) -> BenchmarkFn {
        let (name, lower, upper) = match self {
            BenchmarkId::F1 => ("Sphere", -100.0, 100.0),
            BenchmarkId::F2 => ("Schwefel P2.21", -100.0, 100.0),
            BenchmarkId::F3 => ("Schwefel P2.22", -10.0, 10.0),
            BenchmarkId::F4 => ("Rosenbrock", -10.0, 10.0),
            BenchmarkId::F5 => ("Quadric Noise", -1.28, 1.28),
            BenchmarkId::F6 => ("Schaffer", -100.0, 100.0),
            BenchmarkId::F5r => ("Rastrigin", -5.12, 5.12),
        };
        BenchmarkFn {
            id: self,
            name,
            lower,
            upper,
            optimum_value: 0.0,
            stochastic: self == BenchmarkId::F5,
        }
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f1" => Ok(BenchmarkId::F1),
            "f2" => Ok(BenchmarkId::F2),
            "f3" => Ok(BenchmarkId::F3),
            "f4" => Ok(BenchmarkId::F4),
            "f5" => Ok(BenchmarkId::F5),
            "f6" => Ok(BenchmarkId::F6),
            "f5r" => Ok(BenchmarkId::F5r),
            _ => Err(Error::config(format!("unknown benchmark function id '{s}'"))),
        }
    }
}

/// Registry entry: a named objective with its per-coordinate range and optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkFn {
    pub id: BenchmarkId,
    pub name: &'static str,
    pub lower: f64,
    pub upper: f64,
    pub optimum_value: f64,
    pub stochastic: bool,
}

impl BenchmarkFn {
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        let min = if self.id == BenchmarkId::F4 { 2 } else { 1 };
        if dim < min {
            return Err(Error::config(format!(
                "{} ({}) needs dim >= {min}, got {dim}",
                self.id, self.name
            )));
        }
        Ok(())
    }

    /// Point at which the optimum value is attained.
    pub fn optimum_point<F: Scalar>(&self, dim: usize) -> Vec<F> {
        let v = if self.id == BenchmarkId::F4 { F::one() } else { F::zero() };
        vec![v; dim]
    }
}

impl<F: Scalar> Objective<F> for BenchmarkFn {
    fn evaluate(&self, x: &[F], rng: &mut SwarmRng) -> F {
        // dims are validated up front by `check_dim`, so the fallible forms
        // cannot fail here
        match self.id {
            BenchmarkId::F1 => sphere(x),
            BenchmarkId::F2 => schwefel_p221(x).unwrap_or(F::nan()),
            BenchmarkId::F3 => schwefel_p222(x),
            BenchmarkId::F4 => rosenbrock(x).unwrap_or(F::nan()),
            BenchmarkId::F5 => quadric_noise(x, rng),
            BenchmarkId::F6 => schaffer(x).unwrap_or(F::nan()),
            BenchmarkId::F5r => rastrigin(x),
        }
    }

    fn is_stochastic(&self) -> bool {
        self.stochastic
    }
}

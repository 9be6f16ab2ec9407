//! Scalar schedule and weighting curves.
//!
//! * [`cauchy_pdf`]: the Cauchy–Lorentz density.
//! * [`sigmoid`] and [`inverse_sigmoid_weight`]: logistic curve and the
//!   inverse-S inertia schedule (used by the PSO baseline).
//! * [`cauchy_inertia`]: the Cauchy-bump inertia weight `ww` applied to
//!   leader positions in CGWO/ACGWO.
//! * [`leader_weight`]: the adaptive per-leader weight used by AGWO/ACGWO.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Below this magnitude the population-average fitness is treated as zero and
/// the leader score ratio is pinned to 1.
pub const DEGENERATE_AVG_EPS: f64 = 1e-12;

/// Four-parameter Cauchy-bump family `(a/π)·c/(a² + (r − b)²) + d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct CurveParams<F> {
    pub a: F,
    pub b: F,
    pub c: F,
    pub d: F,
}

impl<F: Scalar> CurveParams<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Result<Self> {
        let p = CurveParams { a, b, c, d };
        p.validate()?;
        Ok(p)
    }

    /// Inertia-curve defaults: a=1.0, b=0.0, c=2.0, d=1.7.
    pub fn s_shape() -> Self {
        CurveParams {
            a: F::one(),
            b: F::zero(),
            c: F::lit(2.0),
            d: F::lit(1.7),
        }
    }

    /// Leader-weight defaults: a=1.0, b=0.0, c=2.0, d=2.1.
    pub fn cauchy() -> Self {
        CurveParams {
            a: F::one(),
            b: F::zero(),
            c: F::lit(2.0),
            d: F::lit(2.1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.b, self.c, self.d].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::config("curve parameters must be finite"));
        }
        if self.a <= F::zero() {
            return Err(Error::config(format!(
                "curve parameter a must be > 0, got {}",
                self.a
            )));
        }
        Ok(())
    }

    /// `(a/π) / (a² + (r − b)²)`, the shared Cauchy-bump kernel.
    fn bump(&self, r: F) -> F {
        let shift = r - self.b;
        (self.a / F::PI()) / (self.a * self.a + shift * shift)
    }

    /// Value of the (positive) curve at its mode `r = b`: `c/(π·a) + d`.
    pub fn peak(&self) -> F {
        self.c / (F::PI() * self.a) + self.d
    }
}

/// Parameters of the inverse-sigmoid inertia schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct SigmoidScheduleParams<F> {
    pub w_start: F,
    pub w_end: F,
    pub a: F,
    pub b: F,
}

impl<F: Scalar> SigmoidScheduleParams<F> {
    pub fn new(w_start: F, w_end: F, a: F, b: F) -> Result<Self> {
        if w_start < w_end {
            return Err(Error::config(format!(
                "w_start ({w_start}) must be >= w_end ({w_end})"
            )));
        }
        Ok(SigmoidScheduleParams { w_start, w_end, a, b })
    }

    /// w 0.9 → 0.4 with a = 10 and b = 20/max_iter, so the midpoint falls at
    /// half the run.
    pub fn for_horizon(max_iter: usize) -> Self {
        SigmoidScheduleParams {
            w_start: F::lit(0.9),
            w_end: F::lit(0.4),
            a: F::lit(10.0),
            b: F::lit(20.0) / F::from_usize_lossy(max_iter.max(1)),
        }
    }
}

/// How the raw Cauchy-curve inertia value enters the position update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InertiaScaling {
    /// `ww` exactly as the curve yields it (≈2.34 → 2.02 with the defaults).
    Raw,
    /// `ww / peak`, so the multiplier starts at 1 and decays with the curve.
    #[default]
    PeakNormalized,
}

impl InertiaScaling {
    pub fn apply<F: Scalar>(self, ww: F, p: &CurveParams<F>) -> F {
        match self {
            InertiaScaling::Raw => ww,
            InertiaScaling::PeakNormalized => ww / p.peak(),
        }
    }
}

pub fn cauchy_pdf<F: Scalar>(x: F, x0: F, gamma: F) -> Result<F> {
    if !(gamma > F::zero()) {
        return Err(Error::domain(format!("cauchy gamma must be > 0, got {gamma}")));
    }
    let dx = x - x0;
    let g2 = gamma * gamma;
    Ok(g2 / (F::PI() * gamma * (g2 + dx * dx)))
}

pub fn sigmoid<F: Scalar>(x: F) -> F {
    // split on sign so exp never overflows
    if x >= F::zero() {
        F::one() / (F::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (F::one() + e)
    }
}

/// `w_start − (w_start − w_end) / (1 + e^(a − b·t))`.
pub fn inverse_sigmoid_weight<F: Scalar>(t: F, p: &SigmoidScheduleParams<F>) -> F {
    // 1/(1 + e^(a − b t)) == sigmoid(b t − a)
    p.w_start - (p.w_start - p.w_end) * sigmoid(p.b * t - p.a)
}

/// Cauchy-curve inertia weight `ww` at `iter` of `max_iter`.
pub fn cauchy_inertia<F: Scalar>(iter: usize, max_iter: usize, p: &CurveParams<F>) -> Result<F> {
    if max_iter == 0 {
        return Err(Error::domain("max_iter must be positive"));
    }
    let ratio = F::from_usize_lossy(iter) / F::from_usize_lossy(max_iter);
    Ok(p.bump(ratio) * p.c + p.d)
}

/// Adaptive leader weight from a leader score and the population average.
///
/// The ratio `score / f_avg` is pinned to 1 when the average is (near) zero or
/// the ratio is not finite.
pub fn leader_weight<F: Scalar>(score: F, f_avg: F, p: &CurveParams<F>) -> F {
    leader_weight_from_ratio(score_ratio(score, f_avg), p)
}

pub fn leader_weight_from_ratio<F: Scalar>(ratio: F, p: &CurveParams<F>) -> F {
    p.d - p.bump(ratio) * p.c
}

fn score_ratio<F: Scalar>(score: F, f_avg: F) -> F {
    if !(f_avg.abs() >= F::lit(DEGENERATE_AVG_EPS)) {
        return F::one();
    }
    let r = score / f_avg;
    if r.is_finite() {
        r
    } else {
        F::one()
    }
}

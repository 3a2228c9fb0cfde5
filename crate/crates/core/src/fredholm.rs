//! `F(2n+1; s) = det(1 - A_{2n+1})` on `L²(s, ∞)`, discretized by
//! Gauss–Legendre on `(s, s + T)` with symmetric weighting
//! `δ_ij - √w_i A(x_i, x_j) √w_j`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::airy::AiryEvaluator;
use crate::error::{Error, Result};
use crate::linalg::lu_determinant;
use crate::quadrature::QuadratureRule;

pub const DEFAULT_NODES: usize = 80;
/// Kernel diagonal below which the interval is cut.
pub const DIAGONAL_CUTOFF: f64 = 1e-13;
/// Allowed change between `(m, T)` and `(2m, 2T)`.
pub const SELF_CONVERGENCE_TOL: f64 = 1e-8;
/// Supported range of `s`.
pub const S_RANGE: (f64, f64) = (-10.0, 10.0);

/// Quadrature discretization of `(s, s + T)`.
#[derive(Debug, Clone)]
pub struct FredholmScheme {
    pub s: f64,
    pub length: f64,
    pub m: usize,
    pub rule: QuadratureRule,
}

impl FredholmScheme {
    pub fn new(s: f64, length: f64, m: usize) -> Self {
        FredholmScheme {
            s,
            length,
            m,
            rule: QuadratureRule::gauss_legendre(s, s + length, m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FredholmValue {
    pub s: f64,
    pub value: f64,
    pub m: usize,
    pub length: f64,
    /// `|F_{m,T} - F_{2m,2T}|`.
    pub self_convergence: f64,
}

/// Evaluates `F(order; s)` for one order, reusing the Airy evaluator.
#[derive(Debug, Clone)]
pub struct TracyWidom {
    airy: AiryEvaluator,
    m: usize,
}

impl TracyWidom {
    pub fn new(order: usize) -> Result<Self> {
        Self::with_nodes(order, DEFAULT_NODES)
    }

    pub fn with_nodes(order: usize, m: usize) -> Result<Self> {
        if m < 4 {
            return Err(Error::invalid("at least 4 nodes are required"));
        }
        Ok(TracyWidom {
            airy: AiryEvaluator::with_range(order, S_RANGE.0 - 1.0)?,
            m,
        })
    }

    pub fn order(&self) -> usize {
        self.airy.order()
    }

    pub fn evaluator(&self) -> &AiryEvaluator {
        &self.airy
    }

    /// Smallest `T` (in steps of 1/2) with `A(s+T, s+T) < DIAGONAL_CUTOFF`
    /// and `s + T >= 1`.
    pub fn truncation_length(&self, s: f64) -> Result<f64> {
        let mut t: f64 = (1.0 - s).max(2.0);
        loop {
            let x = s + t;
            let d = self.airy.kernel_data(x)?;
            if self.airy.kernel_from_data(x, &d, x, &d).abs() < DIAGONAL_CUTOFF {
                return Ok(t);
            }
            t += 0.5;
            if t > 200.0 {
                return Err(Error::no_convergence("Airy kernel diagonal decay", t));
            }
        }
    }

    /// The discretized determinant for a fixed scheme.
    pub fn determinant(&self, scheme: &FredholmScheme) -> Result<f64> {
        let rule = &scheme.rule;
        let data: Vec<Vec<f64>> = rule
            .nodes
            .par_iter()
            .map(|&x| self.airy.kernel_data(x))
            .collect::<Result<_>>()?;
        let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
        let m = rule.len();
        let mut a = DMatrix::<f64>::identity(m, m);
        for i in 0..m {
            for j in 0..=i {
                let k = self.airy.kernel_from_data(rule.nodes[i], &data[i], rule.nodes[j], &data[j]);
                let v = sw[i] * k * sw[j];
                a[(i, j)] -= v;
                if i != j {
                    a[(j, i)] -= v;
                }
            }
        }
        Ok(lu_determinant(a))
    }

    /// `F(order; s)` with the self-convergence check.
    pub fn cdf(&self, s: f64) -> Result<FredholmValue> {
        if !(S_RANGE.0..=S_RANGE.1).contains(&s) {
            return Err(Error::invalid(format!(
                "s = {s} outside the supported range [{}, {}]",
                S_RANGE.0, S_RANGE.1
            )));
        }
        let t = self.truncation_length(s)?;
        let coarse = self.determinant(&FredholmScheme::new(s, t, self.m))?;
        let fine = self.determinant(&FredholmScheme::new(s, 2.0 * t, 2 * self.m))?;
        let diff = (coarse - fine).abs();
        if !(diff < SELF_CONVERGENCE_TOL) {
            return Err(Error::no_convergence(format!("F({}; {s})", self.order()), diff));
        }
        Ok(FredholmValue {
            s,
            value: fine.clamp(0.0, 1.0),
            m: 2 * self.m,
            length: 2.0 * t,
            self_convergence: diff,
        })
    }

    /// `F` on `s_from, s_from + step, ..., <= s_to`.
    pub fn table(&self, s_from: f64, s_to: f64, step: f64) -> Result<Vec<FredholmValue>> {
        if !(step > 0.0) || s_to < s_from {
            return Err(Error::invalid("need step > 0 and s_to >= s_from"));
        }
        let count = ((s_to - s_from) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .into_par_iter()
            .map(|i| self.cdf(s_from + i as f64 * step))
            .collect()
    }
}

/// `F(order; s)`.
pub fn tracy_widom(order: usize, s: f64) -> Result<f64> {
    Ok(TracyWidom::new(order)?.cdf(s)?.value)
}

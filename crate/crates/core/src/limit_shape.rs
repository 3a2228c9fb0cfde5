//! Limiting densities `ρ(u)` of `S(λ)/θ` and the limit profiles `Ω`.
//!
//! The odd density solves `∫_0^χ (2 sin φ)^{2n-1} dφ = binom(2n-1, n) (b - u)`,
//! `ρ = χ/π`, normalized so that `ρ(b) = 0` and `ρ(-b) = 1`.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::KappaTable;
use crate::multicritical::{MeasureKind, MulticriticalParams};
use crate::quadrature::adaptive_simpson;

fn binomial(n: u64, k: u64) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
}

/// `∫_0^χ sin^k φ dφ` by the reduction formula.
pub fn sin_power_integral(k: usize, chi: f64) -> f64 {
    let (s, c) = chi.sin_cos();
    let mut acc = if k % 2 == 0 { chi } else { 1.0 - c };
    let start = if k % 2 == 0 { 2 } else { 3 };
    let mut j = start;
    while j <= k {
        acc = -s.powi(j as i32 - 1) * c / j as f64 + (j - 1) as f64 / j as f64 * acc;
        j += 2;
    }
    acc
}

/// `∫_0^π (2 sin φ)^{2n-1} dφ` by adaptive Simpson, independent of the
/// reduction formula.
pub fn sin_power_mass_quadrature(n: usize) -> f64 {
    let k = 2 * n as i32 - 1;
    adaptive_simpson(|phi| (2.0 * phi.sin()).powi(k), 0.0, PI, 1e-13)
}

/// Support `[left, right]` of a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density {
    kind: MeasureKind,
    n: usize,
    left: f64,
    right: f64,
}

impl Density {
    pub fn new(kind: MeasureKind, n: usize) -> Result<Self> {
        let p = MulticriticalParams::new(kind, n, 1.0)?;
        Ok(Density {
            kind,
            n,
            left: -p.b_tilde().to_f64().unwrap(),
            right: p.b().to_f64().unwrap(),
        })
    }

    pub fn left_edge(&self) -> f64 {
        self.left
    }

    pub fn right_edge(&self) -> f64 {
        self.right
    }

    pub fn rho(&self, u: f64) -> Result<f64> {
        if u >= self.right {
            return Ok(0.0);
        }
        if u <= self.left {
            return Ok(1.0);
        }
        let n = self.n;
        match self.kind {
            MeasureKind::OddEven => {
                let c = binomial(2 * n as u64, n as u64 - 1);
                let arg = 1.0 - 0.5 * (c * (self.right - u)).powf(1.0 / n as f64);
                if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&arg) {
                    return Err(Error::invalid(format!(
                        "arccos argument {arg} outside [-1, 1] at u = {u}"
                    )));
                }
                Ok(arg.clamp(-1.0, 1.0).acos() / PI)
            }
            MeasureKind::Odd => {
                let k = 2 * n - 1;
                let target = binomial(k as u64, n as u64) * (self.right - u) / 2f64.powi(k as i32);
                let (mut lo, mut hi) = (0.0, PI);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if sin_power_integral(k, mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-13 {
                        return Ok(0.5 * (lo + hi) / PI);
                    }
                }
                Err(Error::no_convergence("odd density root", hi - lo))
            }
        }
    }

    /// `Ω(u) = |left| + ∫_{left}^u (1 - 2ρ)`; `|u|` outside the support.
    ///
    /// The density has algebraic singularities at both edges, so the
    /// integral is taken in `t` with `u = left + (right - left) g(t)`,
    /// `g(t) = t^p / (t^p + (1-t)^p)`, which flattens them.
    pub fn omega(&self, u: f64) -> Result<f64> {
        if u <= self.left || u >= self.right {
            return Ok(u.abs());
        }
        self.rho(u)?;
        let p = 4.0 * self.n as f64;
        let width = self.right - self.left;
        let g = |t: f64| {
            let a = t.powf(p);
            a / (a + (1.0 - t).powf(p))
        };
        let dg = |t: f64| {
            let (a, b) = (t.powf(p), (1.0 - t).powf(p));
            p * t.powf(p - 1.0) * (1.0 - t).powf(p - 1.0) / ((a + b) * (a + b))
        };
        let s = (u - self.left) / width;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t_u = 0.5 * (lo + hi);
        let integrand = |t: f64| {
            let v = self.left + width * g(t);
            (1.0 - 2.0 * self.rho(v).unwrap_or(0.5)) * width * dg(t)
        };
        Ok(-self.left + adaptive_simpson(integrand, 0.0, t_u, 1e-13))
    }
}

/// `ρ^oe(u) = arccos(1 - binom(2n, n-1)^{1/n} (b - u)^{1/n} / 2) / π`.
pub fn rho_oe(n: usize, u: f64) -> Result<f64> {
    Density::new(MeasureKind::OddEven, n)?.rho(u)
}

/// `ρ^o(u) = χ/π` by bisection on the monotone map `χ ↦ ∫_0^χ (2 sin φ)^{2n-1}`.
pub fn rho_o(n: usize, u: f64) -> Result<f64> {
    Density::new(MeasureKind::Odd, n)?.rho(u)
}

pub fn rho(kind: MeasureKind, n: usize, u: f64) -> Result<f64> {
    Density::new(kind, n)?.rho(u)
}

pub fn omega(kind: MeasureKind, n: usize, u: f64) -> Result<f64> {
    Density::new(kind, n)?.omega(u)
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityProfile {
    pub kind: MeasureKind,
    pub n: usize,
    pub left_edge: f64,
    pub right_edge: f64,
    /// `(u, ρ(u), Ω(u))`.
    pub points: Vec<(f64, f64, f64)>,
}

impl DensityProfile {
    /// Grid from `left - 0.5` to `right + 0.5` with spacing `step`.
    pub fn new(kind: MeasureKind, n: usize, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::invalid("grid step must be positive"));
        }
        let e = Density::new(kind, n)?;
        let start = e.left - 0.5;
        let count = ((e.right + 0.5 - start) / step).floor() as usize + 1;
        let points = (0..count)
            .into_par_iter()
            .map(|i| {
                let u = start + i as f64 * step;
                Ok((u, e.rho(u)?, e.omega(u)?))
            })
            .collect::<Result<_>>()?;
        Ok(DensityProfile {
            kind,
            n,
            left_edge: e.left,
            right_edge: e.right,
            points,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityComparison {
    pub u: f64,
    /// Site `m = ⌊θ u⌋`, i.e. the half-integer `m + 1/2`.
    pub site: i64,
    pub kernel_diagonal: f64,
    pub rho: f64,
    pub difference: f64,
}

/// `K(m, m)` at `m = ⌊θ u⌋` against `ρ(u)`.
pub fn compare_density(params: &MulticriticalParams, theta: f64, grid: &[f64]) -> Result<Vec<DensityComparison>> {
    let p = params.with_theta(theta)?;
    let table = KappaTable::new(p.spec())?;
    let density = Density::new(p.kind(), p.n())?;
    grid.iter()
        .map(|&u| {
            let site = (theta * u).floor() as i64;
            let k = table.density(site);
            let r = density.rho(u)?;
            Ok(DensityComparison {
                u,
                site,
                kernel_diagonal: k,
                rho: r,
                difference: (k - r).abs(),
            })
        })
        .collect()
}

/// Interior grid of the support with spacing `step`, keeping `margin` from
/// both edges.
pub fn interior_grid(kind: MeasureKind, n: usize, step: f64, margin: f64) -> Result<Vec<f64>> {
    let e = Density::new(kind, n)?;
    let mut u = e.left + margin;
    let mut out = Vec::new();
    while u <= e.right - margin + 1e-12 {
        out.push(u);
        u += step;
    }
    Ok(out)
}

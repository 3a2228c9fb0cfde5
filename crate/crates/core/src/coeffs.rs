//! Laurent coefficients of the symbols attached to a specialization.
//!
//! | family  | symbol on `|z| = 1`         |
//! |---------|-----------------------------|
//! | `f`     | `exp(V(z) + V(1/z))`        |
//! | `g`     | `exp(-V(-z) - V(-1/z))`     |
//! | `kappa` | `exp(V(z) - V(1/z))`        |
//!
//! All three are entire in `z` and `1/z`, so the coefficients are extracted
//! by sampling on the unit circle and a discrete Fourier inversion. The
//! sample count is doubled until the retained coefficients stop moving.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialization::Specialization;

/// Stabilization threshold for the resolution doubling loop, relative to
/// `max(1, max |c_m|)`.
pub const COEFF_TOLERANCE: f64 = 1e-13;
/// Hard cap on the number of samples on the unit circle.
pub const MAX_SAMPLES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    H,
    F,
    G,
    Kappa,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::H => "h",
            Family::F => "f",
            Family::G => "g",
            Family::Kappa => "kappa",
        })
    }
}

/// Coefficients `c_m` for `m` in `[lo, lo + values.len())`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentCoefficients {
    family: Family,
    lo: i64,
    values: Vec<f64>,
    /// Number of unit-circle samples used (0 for exact recurrences).
    resolution: usize,
    /// Largest `|c_m|` over the outer 10% of the window on each side.
    decay_report: f64,
}

impl LaurentCoefficients {
    pub(crate) fn new(family: Family, lo: i64, values: Vec<f64>, resolution: usize) -> Self {
        let decay_report = outer_decay(&values);
        LaurentCoefficients {
            family,
            lo,
            values,
            resolution,
            decay_report,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn decay_report(&self) -> f64 {
        self.decay_report
    }

    /// `c_m`, or `None` outside the stored window. The `h` family is zero
    /// at negative indices.
    pub fn get(&self, m: i64) -> Option<f64> {
        if self.family == Family::H && m < 0 {
            return Some(0.0);
        }
        if m < self.lo {
            return None;
        }
        self.values.get((m - self.lo) as usize).copied()
    }

    /// `(m, c_m)` pairs in increasing `m`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }

    /// CSV dump with columns `m,c_m`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,c_m\n");
        for (m, c) in self.iter() {
            out.push_str(&format!("{m},{c:e}\n"));
        }
        out
    }
}

fn outer_decay(values: &[f64]) -> f64 {
    let n = values.len();
    let band = (n / 10).max(1).min(n);
    values[..band]
        .iter()
        .chain(&values[n - band..])
        .fold(0.0f64, |a, c| a.max(c.abs()))
}

/// Log of the symbol `log S(e^{iφ})` for the given family.
fn log_symbol(spec: &Specialization, family: Family, phi: f64) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (i, &t) in spec.theta().iter().enumerate() {
        let k = (i + 1) as f64;
        let a = k * phi;
        match family {
            Family::F => re += 2.0 * t * a.cos() / k,
            Family::G => {
                let sign = if (i + 1) % 2 == 0 { -1.0 } else { 1.0 };
                re += sign * 2.0 * t * a.cos() / k;
            }
            Family::Kappa => im += 2.0 * t * a.sin() / k,
            Family::H => unreachable!("h has no symbol on the circle"),
        }
    }
    Complex64::new(re, im)
}

fn sample_and_invert(
    spec: &Specialization,
    family: Family,
    n: usize,
    fft: &Arc<dyn rustfft::Fft<f64>>,
) -> Vec<Complex64> {
    let step = std::f64::consts::TAU / n as f64;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| log_symbol(spec, family, j as f64 * step).exp())
        .collect();
    fft.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn extract(buf: &[Complex64], max_index: usize) -> Vec<f64> {
    let n = buf.len() as i64;
    (-(max_index as i64)..=max_index as i64)
        .map(|m| buf[m.rem_euclid(n) as usize].re)
        .collect()
}

/// Initial sample count: `8 (M + ⌈6 p Σ|θ_i|⌉)` rounded up to a power of two.
fn initial_samples(spec: &Specialization, max_index: usize) -> usize {
    let mass: f64 = spec.theta().iter().map(|t| t.abs()).sum();
    let spread = (6.0 * mass * spec.degree().max(1) as f64).ceil() as usize;
    (8 * (max_index + spread).max(1)).next_power_of_two()
}

/// Coefficients `c_m`, `|m| <= max_index`, of the `f`, `g` or `kappa` symbol.
pub fn symbol_coeffs(
    spec: &Specialization,
    family: Family,
    max_index: usize,
) -> Result<LaurentCoefficients> {
    if family == Family::H {
        return Ok(spec.h_coeffs(max_index));
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut n = initial_samples(spec, max_index);
    if n > MAX_SAMPLES {
        return Err(Error::no_convergence(
            format!("{family} coefficients need more than {MAX_SAMPLES} samples"),
            f64::INFINITY,
        ));
    }
    let fft = planner.plan_fft_forward(n);
    let mut current = extract(&sample_and_invert(spec, family, n, &fft), max_index);
    loop {
        if current.iter().any(|c| !c.is_finite()) {
            return Err(Error::no_convergence(
                format!("{family} symbol overflows for this specialization"),
                f64::INFINITY,
            ));
        }
        let next_n = 2 * n;
        if next_n > MAX_SAMPLES {
            let decay = outer_decay(&current);
            return Err(Error::no_convergence(
                format!("{family} coefficients did not stabilize (outer decay {decay:.3e})"),
                decay,
            ));
        }
        let fft = planner.plan_fft_forward(next_n);
        let next = extract(&sample_and_invert(spec, family, next_n, &fft), max_index);
        let scale = next.iter().fold(1.0f64, |a, c| a.max(c.abs()));
        let change = current
            .iter()
            .zip(&next)
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
        n = next_n;
        current = next;
        if change <= COEFF_TOLERANCE * scale {
            break;
        }
    }
    Ok(LaurentCoefficients::new(
        family,
        -(max_index as i64),
        current,
        n,
    ))
}

/// Upper bound on `log |c_j|` valid for all three symbol families:
/// `min_{r >= 1} [ -|j| log r + Σ |θ_i| (r^i + r^{-i}) / i ]` (Cauchy
/// estimate on the circle of radius `r` or `1/r`).
pub fn log_coefficient_bound(spec: &Specialization, j: i64) -> f64 {
    let j = j.unsigned_abs() as f64;
    let theta: Vec<f64> = spec.theta().iter().map(|t| t.abs()).collect();
    let g = |t: f64| -> f64 {
        -j * t
            + theta
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let k = (i + 1) as f64;
                    2.0 * a * (k * t).cosh() / k
                })
                .sum::<f64>()
    };
    let dg = |t: f64| -> f64 {
        -j + theta
            .iter()
            .enumerate()
            .map(|(i, a)| 2.0 * a * ((i + 1) as f64 * t).sinh())
            .sum::<f64>()
    };
    if dg(0.0) >= 0.0 {
        return g(0.0);
    }
    let mut hi = 1.0;
    while dg(hi) < 0.0 && hi < 700.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if dg(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    g(0.5 * (lo + hi))
}

/// Smallest `M >= 0` with `|c_j| <= e^{log_eps}` guaranteed for all `|j| >= M`.
pub fn decay_index(spec: &Specialization, log_eps: f64) -> usize {
    let mut m = 0i64;
    while log_coefficient_bound(spec, m) > log_eps {
        m += 1 + m / 16;
    }
    m as usize
}

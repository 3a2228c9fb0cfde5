//! Generalized Airy functions `Ai_{2n+1}` and the higher-order Airy kernel.
//!
//! `Ai_{2n+1}(x) = ∫ exp(a ζ^{2n+1}/(2n+1) - x ζ) dζ/(2πi)` with
//! `a = (-1)^{n-1}` over an up-oriented vertical line. The line is deformed
//! to the rays `ζ = r e^{±iφ}`, `φ = nπ/(2n+1)`, on which
//! `a ζ^{2n+1} = -r^{2n+1}`, so the integrand decays superexponentially and
//! `Ai^{(j)}(x) = Im[e^{iφ} ∫_0^∞ (-ζ)^j exp(-r^{2n+1}/(2n+1) - x ζ) dr] / π`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;

/// Smallest argument the default evaluator is built for.
pub const DEFAULT_X_MIN: f64 = -12.0;

/// Derivatives needed by the kernel: orders `0..2n+4`.
const EXTRA_DERIVATIVES: usize = 4;

/// Below this `|x - y|` the derivative-sum kernel switches to its Taylor
/// expansion around the diagonal.
pub const DIAGONAL_SWITCH: f64 = 1e-3;

fn check_order(order: usize) -> Result<usize> {
    if order < 3 || order % 2 == 0 {
        return Err(Error::invalid(format!("order must be odd and at least 3, got {order}")));
    }
    Ok((order - 1) / 2)
}

#[derive(Debug, Clone)]
pub struct AiryEvaluator {
    n: usize,
    phi: f64,
    x_min: f64,
    rule: QuadratureRule,
    /// `e^{iφ} r` at each node.
    zeta: Vec<Complex64>,
    /// `w exp(-r^{2n+1}/(2n+1))` at each node.
    damp: Vec<f64>,
}

/// Radius beyond which `r^j exp(|x_min| r - r^p / p)` is below `e^{-50}`.
fn ray_length(p: f64, x_min: f64, jmax: usize, vertex: f64) -> f64 {
    let grow = x_min.abs() + vertex * p;
    let mut r: f64 = 1.0;
    while r.powf(p) / p - grow * r - jmax as f64 * r.ln().max(0.0) < 50.0 {
        r += 0.25;
    }
    r
}

impl AiryEvaluator {
    pub fn new(order: usize) -> Result<Self> {
        Self::with_range(order, DEFAULT_X_MIN)
    }

    /// Evaluator accurate for `x >= x_min`.
    pub fn with_range(order: usize, x_min: f64) -> Result<Self> {
        let n = check_order(order)?;
        if !(x_min <= 0.0 && x_min.is_finite()) {
            return Err(Error::invalid("x_min must be finite and nonpositive"));
        }
        let p = order as f64;
        let phi = n as f64 * PI / p;
        let rmax = ray_length(p, x_min, 2 * n + EXTRA_DERIVATIVES, 0.0);
        let panels = (rmax / 0.25).ceil() as usize;
        let rule = QuadratureRule::composite_gauss_legendre(0.0, rmax, panels, 16);
        let dir = Complex64::from_polar(1.0, phi);
        let zeta = rule.nodes.iter().map(|&r| dir * r).collect();
        let damp = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&r, &w)| w * (-r.powf(p) / p).exp())
            .collect();
        Ok(AiryEvaluator {
            n,
            phi,
            x_min,
            rule,
            zeta,
            damp,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        2 * self.n + 1
    }

    /// The ray angle `φ`.
    pub fn ray_angle(&self) -> f64 {
        self.phi
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// `a = (-1)^{n-1}` in `y^{(2n)} = a x y`.
    pub fn ode_sign(&self) -> f64 {
        if self.n % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !x.is_finite() || x < self.x_min {
            return Err(Error::invalid(format!(
                "x = {x} is outside the evaluator range [{}, ∞)",
                self.x_min
            )));
        }
        Ok(())
    }

    /// Ray integrals `∫_0^∞ (-ζ)^j exp(...) dr` on the upper ray, `j < count`.
    fn ray_integrals(&self, x: f64, count: usize) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); count];
        for (z, d) in self.zeta.iter().zip(&self.damp) {
            let base = (-x * z).exp() * d;
            let mut t = base;
            for a in acc.iter_mut() {
                *a += t;
                t *= -z;
            }
        }
        let dir = Complex64::from_polar(1.0, self.phi);
        acc.iter().map(|a| a * dir).collect()
    }

    /// `Ai^{(j)}(x)` for `j = 0..count`.
    pub fn derivatives(&self, x: f64, count: usize) -> Result<Vec<f64>> {
        self.check_x(x)?;
        Ok(self.ray_integrals(x, count).iter().map(|u| u.im / PI).collect())
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.derivatives(x, 1)?[0])
    }

    /// `Ai^{(j)}(x)`, `0 <= j <= 2n`.
    pub fn ai(&self, x: f64, deriv: usize) -> Result<f64> {
        if deriv > 2 * self.n {
            return Err(Error::invalid(format!("derivative order {deriv} exceeds 2n = {}", 2 * self.n)));
        }
        Ok(self.derivatives(x, deriv + 1)?[deriv])
    }

    /// Imaginary part of the full two-ray integral, evaluated with the lower
    /// ray computed on its own nodes rather than by conjugation.
    pub fn imaginary_residual(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let up = self.ray_integrals(x, 1)[0];
        let dir = Complex64::from_polar(1.0, -self.phi);
        let mut low = Complex64::new(0.0, 0.0);
        for (r, d) in self.rule.nodes.iter().zip(&self.damp) {
            low += (-x * dir * r).exp() * d;
        }
        let low = low * dir;
        let total = (up - low) / Complex64::new(0.0, 2.0 * PI);
        Ok(total.im.abs())
    }

    /// `|Ai^{(2n)}(x) - a x Ai(x)|`.
    pub fn ode_residual(&self, x: f64) -> Result<f64> {
        let d = self.derivatives(x, 2 * self.n + 1)?;
        Ok((d[2 * self.n] - self.ode_sign() * x * d[0]).abs())
    }

    /// Derivatives `0..2n+4` used by the derivative-sum kernel.
    pub fn kernel_data(&self, x: f64) -> Result<Vec<f64>> {
        self.derivatives(x, 2 * self.n + EXTRA_DERIVATIVES)
    }

    /// Derivative-sum kernel from precomputed [`kernel_data`](Self::kernel_data).
    pub fn kernel_from_data(&self, x: f64, dx: &[f64], y: f64, dy: &[f64]) -> f64 {
        let q = 2 * self.n;
        let a = self.ode_sign();
        let h = x - y;
        if h.abs() < DIAGONAL_SWITCH {
            // K = Σ_{k>=1} h^{k-1}/k! ∂_x^k N(y, y)
            let mut acc = 0.0;
            let mut coef = 1.0;
            for k in 1..=EXTRA_DERIVATIVES {
                coef /= k as f64;
                let dk: f64 = (0..q)
                    .map(|i| {
                        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                        s * dy[i + k] * dy[q - 1 - i]
                    })
                    .sum();
                acc += coef * h.powi(k as i32 - 1) * dk;
            }
            return a * acc;
        }
        let num: f64 = (0..q)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * dx[i] * dy[q - 1 - i]
            })
            .sum();
        a * num / h
    }

    /// Higher-order Airy kernel in the requested representation.
    pub fn kernel(&self, x: f64, y: f64, rep: KernelRepresentation) -> Result<f64> {
        match rep {
            KernelRepresentation::DerivativeSum => {
                let dx = self.kernel_data(x)?;
                let dy = self.kernel_data(y)?;
                Ok(self.kernel_from_data(x, &dx, y, &dy))
            }
            KernelRepresentation::ProductIntegral => self.kernel_product_integral(x, y),
            KernelRepresentation::Contour => self.kernel_contour(x, y),
        }
    }

    /// `∫_0^∞ Ai(x+t) Ai(y+t) dt` on panels of width 1/2 until the
    /// contributions vanish.
    fn kernel_product_integral(&self, x: f64, y: f64) -> Result<f64> {
        self.check_x(x)?;
        self.check_x(y)?;
        let panel = QuadratureRule::gauss_legendre(0.0, 0.5, 20);
        let mut total = 0.0;
        let mut quiet = 0;
        let mut t0 = 0.0;
        while quiet < 3 {
            if t0 > 400.0 {
                return Err(Error::no_convergence("product-integral kernel", total));
            }
            let mut part = 0.0;
            for (&u, &w) in panel.nodes.iter().zip(&panel.weights) {
                let t = t0 + u;
                part += w * self.value(x + t)? * self.value(y + t)?;
            }
            total += part;
            t0 += 0.5;
            let past_turning = x + t0 > 1.0 && y + t0 > 1.0;
            quiet = if past_turning && part.abs() < 1e-17 { quiet + 1 } else { 0 };
        }
        Ok(total)
    }

    /// Double contour integral with `ζ` on rays from `δ` and `ω` on rays from
    /// `-δ`, so that `Re(ζ - ω) >= 2δ` throughout.
    fn kernel_contour(&self, x: f64, y: f64) -> Result<f64> {
        self.check_x(x)?;
        self.check_x(y)?;
        let delta = 0.5;
        let p = self.order() as f64;
        let a = self.ode_sign();
        let rmax = ray_length(p, self.x_min, 2, delta) + 1.0;
        let rule = QuadratureRule::composite_gauss_legendre(0.0, rmax, (rmax / 0.2).ceil() as usize, 16);
        let e = Complex64::from_polar(1.0, self.phi);
        let ec = e.conj();
        // (point, weight) with the orientation folded into the weight
        let mut zs = Vec::with_capacity(2 * rule.len());
        let mut ws = Vec::with_capacity(2 * rule.len());
        for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
            zs.push((delta + e * r, e * w));
            zs.push((delta + ec * r, -ec * w));
            ws.push((-delta - ec * r, -ec * w));
            ws.push((-delta - e * r, e * w));
        }
        let g = |z: Complex64, v: f64| (a * z.powf(p) / p - v * z).exp();
        let zv: Vec<(Complex64, Complex64)> = zs.iter().map(|&(z, w)| (z, g(z, x) * w)).collect();
        let wv: Vec<(Complex64, Complex64)> = ws.iter().map(|&(o, w)| (o, w / g(o, y))).collect();
        let mut total = Complex64::new(0.0, 0.0);
        for &(z, fz) in &zv {
            for &(o, fo) in &wv {
                total += fz * fo / (z - o);
            }
        }
        let total = total / (Complex64::new(0.0, 2.0 * PI) * Complex64::new(0.0, 2.0 * PI));
        Ok(total.re)
    }
}

/// The three equivalent forms of the higher-order Airy kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelRepresentation {
    Contour,
    ProductIntegral,
    DerivativeSum,
}

impl fmt::Display for KernelRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelRepresentation::Contour => "contour",
            KernelRepresentation::ProductIntegral => "product-integral",
            KernelRepresentation::DerivativeSum => "derivative-sum",
        })
    }
}

impl FromStr for KernelRepresentation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contour" => Ok(KernelRepresentation::Contour),
            "product-integral" | "product" => Ok(KernelRepresentation::ProductIntegral),
            "derivative-sum" | "sum" => Ok(KernelRepresentation::DerivativeSum),
            other => Err(Error::invalid(format!("unknown kernel representation {other:?}"))),
        }
    }
}

/// `Ai_{order}^{(deriv)}(x)` with a fresh evaluator.
pub fn ai(order: usize, x: f64, deriv: usize) -> Result<f64> {
    AiryEvaluator::with_range(order, x.min(0.0).min(DEFAULT_X_MIN))?.ai(x, deriv)
}

pub fn airy_kernel(order: usize, x: f64, y: f64, rep: KernelRepresentation) -> Result<f64> {
    AiryEvaluator::with_range(order, x.min(y).min(DEFAULT_X_MIN))?.kernel(x, y, rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::airy_series;

    #[test]
    fn classical_values() {
        let e = AiryEvaluator::new(3).unwrap();
        assert!((e.value(0.0).unwrap() - 0.3550280539).abs() < 1e-10);
        assert!((e.value(1.0).unwrap() - 0.1352924163).abs() < 1e-10);
        assert!((e.ai(0.0, 1).unwrap() + 0.2588194037928068).abs() < 1e-13);
    }

    #[test]
    fn matches_series_oracle() {
        for order in [3, 5, 7] {
            let e = AiryEvaluator::new(order).unwrap();
            let n = (order - 1) / 2;
            for i in 0..=16 {
                let x = -4.0 + 0.5 * i as f64;
                for j in 0..=2 * n {
                    let v = e.ai(x, j).unwrap();
                    let o = airy_series(n, x, j);
                    assert!((v - o).abs() < 1e-10, "order {order} x {x} j {j}: {v} vs {o}");
                }
            }
        }
    }

    #[test]
    fn ode_and_reality() {
        for order in [3, 5, 7] {
            let e = AiryEvaluator::new(order).unwrap();
            for i in 0..=16 {
                let x = -4.0 + 0.5 * i as f64;
                let v = e.value(x).unwrap();
                assert!(e.ode_residual(x).unwrap() <= 1e-8 * (1.0 + v.abs()));
                assert!(e.imaginary_residual(x).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_bad_orders_and_ranges() {
        assert!(AiryEvaluator::new(4).is_err());
        assert!(AiryEvaluator::new(1).is_err());
        let e = AiryEvaluator::new(3).unwrap();
        assert!(e.value(-20.0).is_err());
        assert!(e.ai(0.0, 3).is_err());
    }

    #[test]
    fn kernel_representations_agree() {
        for order in [3, 5] {
            let e = AiryEvaluator::new(order).unwrap();
            for (x, y) in [(0.0, 1.0), (-2.0, 0.5), (1.5, 1.5), (-1.0, -1.0005)] {
                let s = e.kernel(x, y, KernelRepresentation::DerivativeSum).unwrap();
                let p = e.kernel(x, y, KernelRepresentation::ProductIntegral).unwrap();
                let c = e.kernel(x, y, KernelRepresentation::Contour).unwrap();
                assert!((s - p).abs() < 1e-8, "order {order} ({x},{y}): {s} vs {p}");
                assert!((s - c).abs() < 1e-8, "order {order} ({x},{y}): {s} vs {c}");
            }
        }
    }

    #[test]
    fn classical_kernel_on_diagonal() {
        let e = AiryEvaluator::new(3).unwrap();
        let k = e.kernel(0.0, 0.0, KernelRepresentation::DerivativeSum).unwrap();
        let d = airy_series(1, 0.0, 1);
        assert!((k - d * d).abs() < 1e-12);
    }
}

//! Specializations `θ = (θ_1, θ_2, ...)` of the ring of symmetric functions,
//! the complete homogeneous series `h_k`, Schur values via Jacobi–Trudi and
//! the potentials `V`, `Ṽ`.

use std::ops::{Add, Div, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coeffs::{Family, LaurentCoefficients};
use crate::error::{Error, Result};
use crate::linalg::{bareiss_determinant, lu_determinant};
use crate::partition::Partition;

/// A finitely supported specialization with `θ_i = θ'_i`.
///
/// `theta()[i - 1]` holds `θ_i`. When the values are known as exact
/// rationals they are kept alongside the floats and drive the exact paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct Specialization {
    theta: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    theta: Vec<f64>,
}

impl TryFrom<SpecJson> for Specialization {
    type Error = Error;
    fn try_from(j: SpecJson) -> Result<Self> {
        Specialization::new(j.theta)
    }
}

impl From<Specialization> for SpecJson {
    fn from(s: Specialization) -> Self {
        SpecJson { theta: s.theta }
    }
}

impl Specialization {
    pub fn new(mut theta: Vec<f64>) -> Result<Self> {
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("specialization values must be finite"));
        }
        while theta.last() == Some(&0.0) {
            theta.pop();
        }
        Ok(Specialization { theta, exact: None })
    }

    /// Exact specialization; the float values are the rounded rationals.
    pub fn from_rationals(mut exact: Vec<BigRational>) -> Self {
        while exact.last().is_some_and(Zero::is_zero) {
            exact.pop();
        }
        let theta = exact.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
        Specialization {
            theta,
            exact: Some(exact),
        }
    }

    /// Poissonized Plancherel: only `θ_1 = θ`.
    pub fn plancherel(theta: f64) -> Self {
        Specialization::new(vec![theta]).expect("finite theta")
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    /// Largest index with `θ_i != 0`.
    pub fn degree(&self) -> usize {
        self.theta.len()
    }

    pub fn is_zero(&self) -> bool {
        self.theta.is_empty()
    }

    /// `log Z = Σ θ_i² / i`.
    pub fn log_normalizer(&self) -> f64 {
        self.theta
            .iter()
            .enumerate()
            .map(|(i, t)| t * t / (i + 1) as f64)
            .sum()
    }

    pub fn log_normalizer_exact(&self) -> Option<BigRational> {
        let exact = self.exact.as_ref()?;
        Some(
            exact
                .iter()
                .enumerate()
                .map(|(i, t)| t * t / BigRational::from_usize(i + 1).unwrap())
                .fold(BigRational::zero(), |a, b| a + b),
        )
    }

    /// The involution `θ_i ↦ (-1)^{i-1} θ_i`, which maps the law of `λ` to
    /// the law of its conjugate.
    pub fn omega(&self) -> Specialization {
        let flip = |i: usize| i % 2 == 1;
        Specialization {
            theta: self
                .theta
                .iter()
                .enumerate()
                .map(|(i, &t)| if flip(i) { -t } else { t })
                .collect(),
            exact: self.exact.as_ref().map(|e| {
                e.iter()
                    .enumerate()
                    .map(|(i, t)| if flip(i) { -t.clone() } else { t.clone() })
                    .collect()
            }),
        }
    }

    /// `h_0, ..., h_{max_k}` in floating point.
    pub fn h_values(&self, max_k: usize) -> Vec<f64> {
        h_recurrence(&self.theta, max_k)
    }

    /// `h_0, ..., h_{max_k}` as exact rationals, when available.
    pub fn h_values_exact(&self, max_k: usize) -> Option<Vec<BigRational>> {
        self.exact.as_ref().map(|e| h_recurrence(e, max_k))
    }

    /// The `h` family packaged as Laurent coefficients on `[0, max_k]`.
    pub fn h_coeffs(&self, max_k: usize) -> LaurentCoefficients {
        LaurentCoefficients::new(Family::H, 0, self.h_values(max_k), 0)
    }

    /// `V(z) = Σ θ_i z^i / i`.
    pub fn potential(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::zero();
        let mut zi = Complex64::new(1.0, 0.0);
        for (i, &t) in self.theta.iter().enumerate() {
            zi *= z;
            acc += zi * (t / (i + 1) as f64);
        }
        acc
    }

    /// Coefficients (ascending powers of `x`) of the polynomial `Ṽ` with
    /// `Ṽ(z + 1/z) = V(z) + V(1/z)`.
    pub fn tilde_potential(&self) -> Vec<f64> {
        let p = self.degree();
        let mut out = vec![0.0; p + 1];
        // z^i + z^-i = P_i(x): P_0 = 2, P_1 = x, P_{i+1} = x P_i - P_{i-1}
        let mut prev = vec![2.0];
        let mut cur = vec![0.0, 1.0];
        for i in 1..=p {
            let w = self.theta[i - 1] / i as f64;
            for (k, c) in cur.iter().enumerate() {
                out[k] += w * c;
            }
            let mut next = vec![0.0; cur.len() + 1];
            for (k, c) in cur.iter().enumerate() {
                next[k + 1] += c;
            }
            for (k, c) in prev.iter().enumerate() {
                next[k] -= c;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        out
    }
}

/// Evaluates a polynomial given by ascending coefficients.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `k h_k = Σ_{i=1}^{min(k,p)} θ_i h_{k-i}`, from differentiating
/// `Σ h_k z^k = exp V(z)`.
fn h_recurrence<T>(theta: &[T], max_k: usize) -> Vec<T>
where
    T: Clone + Zero + FromPrimitive,
    for<'a> &'a T: Mul<&'a T, Output = T> + Add<&'a T, Output = T> + Div<&'a T, Output = T>,
{
    let mut h = Vec::with_capacity(max_k + 1);
    h.push(T::from_u8(1).unwrap());
    for k in 1..=max_k {
        let mut acc = T::zero();
        for (i, t) in theta.iter().enumerate().take(k) {
            acc = &acc + &(t * &h[k - i - 1]);
        }
        h.push(&acc / &T::from_usize(k).unwrap());
    }
    h
}

fn jacobi_trudi_entries<T: Clone + Zero>(lambda: &Partition, h: &[T]) -> Vec<Vec<T>> {
    let l = lambda.length();
    let parts = lambda.parts();
    (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let idx = parts[i] as i64 - i as i64 + j as i64;
                    if idx < 0 {
                        T::zero()
                    } else {
                        h[idx as usize].clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// `s_λ[θ] = det[h_{λ_i - i + j}]` in floating point (LU).
pub fn schur_value(lambda: &Partition, spec: &Specialization) -> f64 {
    let h = spec.h_values(lambda.first_part() + lambda.length());
    schur_value_with(lambda, &h)
}

/// As [`schur_value`] but reusing a precomputed `h` table.
pub fn schur_value_with(lambda: &Partition, h: &[f64]) -> f64 {
    let l = lambda.length();
    let entries = jacobi_trudi_entries(lambda, h);
    let m = DMatrix::from_fn(l, l, |i, j| entries[i][j]);
    lu_determinant(m)
}

/// Exact Schur value (Bareiss elimination), available for rational specs.
pub fn schur_value_exact(lambda: &Partition, spec: &Specialization) -> Option<BigRational> {
    let h = spec.h_values_exact(lambda.first_part() + lambda.length())?;
    Some(bareiss_determinant(jacobi_trudi_entries(lambda, &h)))
}

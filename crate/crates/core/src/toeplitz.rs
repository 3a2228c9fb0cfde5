//! Toeplitz determinants of the symbols `exp Ṽ(z + 1/z)` and
//! `exp(-Ṽ(-z - 1/z))`, their link to the measure through Gessel's
//! identity, and a Monte Carlo evaluation of the same quantity as an
//! expectation over Haar-distributed unitary matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::{symbol_coeffs, Family, LaurentCoefficients};
use crate::error::{Error, Result};
use crate::linalg::lu_determinant;
use crate::measure::MeasureTable;
use crate::specialization::Specialization;

/// An `ℓ x ℓ` Toeplitz matrix `[c_{j-i}]` with its normalizer.
#[derive(Debug, Clone)]
pub struct ToeplitzSpec {
    coeffs: LaurentCoefficients,
    dim: usize,
    log_normalizer: f64,
}

impl ToeplitzSpec {
    /// Symbol coefficients of `family` (`F` or `G`) for `spec`.
    pub fn new(spec: &Specialization, family: Family, dim: usize) -> Result<Self> {
        if !matches!(family, Family::F | Family::G) {
            return Err(Error::invalid(format!("Toeplitz symbol must be f or g, got {family}")));
        }
        let coeffs = symbol_coeffs(spec, family, dim.saturating_sub(1))?;
        Ok(ToeplitzSpec {
            coeffs,
            dim,
            log_normalizer: spec.log_normalizer(),
        })
    }

    pub fn from_coefficients(coeffs: LaurentCoefficients, dim: usize, log_normalizer: f64) -> Self {
        ToeplitzSpec {
            coeffs,
            dim,
            log_normalizer,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> &LaurentCoefficients {
        &self.coeffs
    }

    /// `log e^{Σ θ_i² / i}`.
    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }
}

/// `det [c_{j-i}]_{1 <= i, j <= ℓ}`.
pub fn toeplitz_det(ts: &ToeplitzSpec) -> Result<f64> {
    let l = ts.dim as i64;
    if l == 0 {
        return Ok(1.0);
    }
    let c = &ts.coeffs;
    if c.lo() > -(l - 1) || c.hi() < l - 1 {
        return Err(Error::CoefficientWindow {
            have_lo: c.lo(),
            have_hi: c.hi(),
            need_lo: -(l - 1),
            need_hi: l - 1,
        });
    }
    let m = DMatrix::from_fn(ts.dim, ts.dim, |i, j| c.get(j as i64 - i as i64).unwrap());
    Ok(lu_determinant(m))
}

/// `det / e^{Σ θ_i²/i}`: `P(ℓ(λ) <= ℓ)` for `f`, `P(λ_1 <= ℓ)` for `g`.
pub fn normalized_toeplitz_det(ts: &ToeplitzSpec) -> Result<f64> {
    Ok(toeplitz_det(ts)? * (-ts.log_normalizer).exp())
}

#[derive(Debug, Clone, Serialize)]
pub struct GesselReport {
    pub l: i64,
    pub enum_cap: usize,
    /// `Σ_{ℓ(λ) <= l, |λ| <= cap} s_λ²`.
    pub enumeration: f64,
    /// `det [f_{j-i}]_{l x l}`.
    pub toeplitz: f64,
    pub difference: f64,
    /// `e^{Σθ²/i} (1 - Σ_{|λ| <= cap} P(λ))`, an upper bound on what the
    /// truncated enumeration misses.
    pub tail_estimate: f64,
}

/// Compares both sides of Gessel's identity.
pub fn verify_gessel(spec: &Specialization, l: i64, enum_cap: usize) -> Result<GesselReport> {
    if l < 0 {
        return Err(Error::invalid("l must be nonnegative"));
    }
    let table = MeasureTable::new(spec, enum_cap)?;
    let enumeration = table.gessel_sum(spec, l);
    let toeplitz = toeplitz_det(&ToeplitzSpec::new(spec, Family::F, l as usize)?)?;
    let z = spec.log_normalizer().exp();
    Ok(GesselReport {
        l,
        enum_cap,
        enumeration,
        toeplitz,
        difference: (enumeration - toeplitz).abs(),
        tail_estimate: (z * (1.0 - table.total_mass())).max(0.0),
    })
}

/// A Haar-distributed element of `U(ℓ)`: QR of a complex Ginibre matrix
/// with the phases of `diag R` moved into `Q`.
pub fn haar_unitary<R: rand::Rng + ?Sized>(l: usize, rng: &mut R) -> DMatrix<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(l, l, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..l {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..l {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `tr Ṽ(U + U*) = Σ_i 2 θ_i Re tr(U^i) / i`.
fn trace_potential(u: &DMatrix<Complex64>, theta: &[f64]) -> f64 {
    let mut power = u.clone();
    let mut acc = 0.0;
    for (i, t) in theta.iter().enumerate() {
        if i > 0 {
            power = &power * u;
        }
        acc += 2.0 * t * power.trace().re / (i + 1) as f64;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `E_{U ∈ U(ℓ)} exp tr Ṽ(U + U*)`, which by Heine's identity equals
/// `det [f_{j-i}]`. Sample `i` draws from ChaCha stream `i` of `seed`, so
/// the result does not depend on the number of threads.
pub fn haar_expectation_mc(
    spec: &Specialization,
    l: usize,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if l < 1 {
        return Err(Error::invalid("l must be at least 1"));
    }
    if samples < 100 {
        return Err(Error::invalid("at least 100 samples are required"));
    }
    let theta = spec.theta();
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let u = haar_unitary(l, &mut rng);
            trace_potential(&u, theta).exp()
        })
        .collect();
    let n = samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(MonteCarloEstimate {
        estimate: mean,
        std_error: (var / n).sqrt(),
        samples,
        seed,
    })
}

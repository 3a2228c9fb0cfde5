//! Exact sampling of `S(λ)` restricted to a finite window.
//!
//! The windowed kernel is diagonalized once. Each sample keeps eigenvector
//! `v_c` with probability `μ_c`, then draws the points of the resulting
//! projection process one at a time: a site is chosen with probability
//! proportional to its remaining squared row norm, and the chosen row
//! direction is projected out of the others. Sites below the window are
//! taken as occupied; a configuration whose particle count in the window
//! differs from `-m_lo` is not the image of a partition and is rejected.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{EdgeScaling, KappaTable, ScalingConvention, Statistic};
use crate::multicritical::MulticriticalParams;
use crate::partition::{FermionicSet, Partition};
use crate::specialization::Specialization;

/// Eigenvalues may exceed `[0, 1]` by this much before sampling fails.
pub const EIGENVALUE_SLACK: f64 = 1e-8;
/// Largest accepted fraction of window-leaked samples.
pub const MAX_LEAK_RATE: f64 = 1e-3;

/// Spectral data of a windowed kernel, shared by all samples of a batch.
#[derive(Debug, Clone)]
pub struct SpectralSampler {
    lo: i64,
    hi: i64,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    clamped: usize,
}

impl SpectralSampler {
    pub fn new(spec: &Specialization, lo: i64, hi: i64) -> Result<Self> {
        if lo > 0 || hi < lo {
            return Err(Error::invalid(format!("window [{lo}, {hi}] must satisfy lo <= 0 <= hi")));
        }
        let table = KappaTable::new(spec)?;
        let window = table.window(lo, hi)?;
        let eig = SymmetricEigen::new(window.matrix);
        let mut clamped = 0;
        let mut eigenvalues = Vec::with_capacity(eig.eigenvalues.len());
        for &mu in eig.eigenvalues.iter() {
            if !(-EIGENVALUE_SLACK..=1.0 + EIGENVALUE_SLACK).contains(&mu) {
                return Err(Error::KernelInvariant(format!(
                    "windowed kernel eigenvalue {mu} outside [0, 1]"
                )));
            }
            if !(0.0..=1.0).contains(&mu) {
                clamped += 1;
            }
            eigenvalues.push(mu.clamp(0.0, 1.0));
        }
        Ok(SpectralSampler {
            lo,
            hi,
            eigenvalues,
            eigenvectors: eig.eigenvectors,
            clamped,
        })
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// Eigenvalues pushed back into `[0, 1]`.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    /// Occupied sites, in decreasing order.
    pub fn sample_sites<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<i64> {
        let w = self.eigenvalues.len();
        let chosen: Vec<usize> = (0..w)
            .filter(|&c| rng.random::<f64>() < self.eigenvalues[c])
            .collect();
        let k = chosen.len();
        if k == 0 {
            return Vec::new();
        }
        let q = DMatrix::from_fn(w, k, |i, j| self.eigenvectors[(i, chosen[j])]);
        let mut residual: Vec<f64> = (0..w).map(|i| q.row(i).norm_squared()).collect();
        let mut basis: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(k);
        let mut sites = Vec::with_capacity(k);
        for _ in 0..k {
            let total: f64 = residual.iter().sum();
            let mut u = rng.random::<f64>() * total;
            let mut pick = w - 1;
            for (i, &r) in residual.iter().enumerate() {
                if u < r {
                    pick = i;
                    break;
                }
                u -= r;
            }
            let mut dir = q.row(pick).transpose();
            for b in &basis {
                let c = b.dot(&dir);
                dir.axpy(-c, b, 1.0);
            }
            let norm = dir.norm();
            if norm == 0.0 {
                break;
            }
            dir /= norm;
            let proj = &q * &dir;
            for (r, p) in residual.iter_mut().zip(proj.iter()) {
                *r = (*r - p * p).max(0.0);
            }
            residual[pick] = 0.0;
            basis.push(dir);
            sites.push(self.lo + pick as i64);
        }
        sites.sort_unstable_by(|a, b| b.cmp(a));
        sites
    }

    /// A partition, or `None` if the configuration leaked out of the window.
    pub fn sample_partition<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Partition> {
        let sites = self.sample_sites(rng);
        FermionicSet::from_elements(self.lo, sites)
            .and_then(|s| s.to_partition())
            .ok()
    }
}

/// Diagnostics of a batch.
#[derive(Debug, Clone, Serialize)]
pub struct SampleDiagnostics {
    pub drawn: usize,
    pub leaked: usize,
    pub leak_rate: f64,
    pub clamped_eigenvalues: usize,
    /// Mean number of eigenvectors kept per draw.
    pub mean_selected: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleBatch {
    pub theta: f64,
    pub window: (i64, i64),
    pub seed: u64,
    pub samples: Vec<Partition>,
    pub diagnostics: SampleDiagnostics,
}

/// Window `[-(b̃θ + margin), bθ + margin]` with a margin of four fluctuation
/// scales plus six sites.
pub fn default_window(params: &MulticriticalParams) -> Result<(i64, i64)> {
    let right = EdgeScaling::new(params, Statistic::Lambda1, ScalingConvention::Derived)?;
    let left = EdgeScaling::new(params, Statistic::Length, ScalingConvention::Derived)?;
    let margin = 4.0 * right.scale.max(left.scale) + 6.0;
    Ok((
        -(left.center + margin).ceil() as i64,
        (right.center + margin).ceil() as i64,
    ))
}

/// `count` accepted samples. Draw `i` uses ChaCha stream `i` of `seed`;
/// leaked draws are replaced by further indices, so the batch does not
/// depend on the thread count.
pub fn sample(params: &MulticriticalParams, count: usize, seed: u64) -> Result<SampleBatch> {
    let (lo, hi) = default_window(params)?;
    sample_in_window(params.spec(), params.theta(), lo, hi, count, seed)
}

pub fn sample_in_window(
    spec: &Specialization,
    theta: f64,
    lo: i64,
    hi: i64,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    let sampler = SpectralSampler::new(spec, lo, hi)?;
    let mean_selected = sampler.eigenvalues.iter().sum();
    let mut samples = Vec::with_capacity(count);
    let mut next = 0usize;
    let mut leaked = 0usize;
    while samples.len() < count {
        let need = count - samples.len();
        let draws: Vec<Option<Partition>> = (next..next + need)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                sampler.sample_partition(&mut rng)
            })
            .collect();
        next += need;
        for d in draws {
            match d {
                Some(p) => samples.push(p),
                None => leaked += 1,
            }
        }
        if leaked as f64 > MAX_LEAK_RATE * next as f64 && leaked > 3 {
            return Err(Error::KernelInvariant(format!(
                "{leaked} of {next} samples leaked out of window [{lo}, {hi}]"
            )));
        }
    }
    Ok(SampleBatch {
        theta,
        window: (lo, hi),
        seed,
        samples,
        diagnostics: SampleDiagnostics {
            drawn: next,
            leaked,
            leak_rate: leaked as f64 / next as f64,
            clamped_eigenvalues: sampler.clamped,
            mean_selected,
        },
    })
}

fn statistic(p: &Partition, stat: Statistic) -> usize {
    match stat {
        Statistic::Lambda1 => p.first_part(),
        Statistic::Length => p.length(),
    }
}

/// Fraction of samples with `stat <= l`.
pub fn empirical_cdf_at(batch: &SampleBatch, stat: Statistic, l: i64) -> f64 {
    let hits = batch
        .samples
        .iter()
        .filter(|p| statistic(p, stat) as i64 <= l)
        .count();
    hits as f64 / batch.samples.len() as f64
}

/// Sorted rescaled values `(x - center)/scale` with their empirical CDF.
pub fn empirical_edge_cdf(
    batch: &SampleBatch,
    params: &MulticriticalParams,
    stat: Statistic,
    conv: ScalingConvention,
) -> Result<Vec<(f64, f64)>> {
    if batch.samples.is_empty() {
        return Err(Error::invalid("empty batch"));
    }
    let sc = EdgeScaling::new(params, stat, conv)?;
    let mut xs: Vec<f64> = batch
        .samples
        .iter()
        .map(|p| (statistic(p, stat) as f64 - sc.center) / sc.scale)
        .collect();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let f = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == *x => last.1 = f,
            _ => out.push((*x, f)),
        }
    }
    Ok(out)
}

/// `sup_s |F_emp(s) - F(s)|` over the jump points of the empirical CDF.
pub fn kolmogorov_distance(ecdf: &[(f64, f64)], f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut prev = 0.0;
    let mut worst: f64 = 0.0;
    for &(x, v) in ecdf {
        let fx = f(x)?;
        worst = worst.max((fx - prev).abs()).max((fx - v).abs());
        prev = v;
    }
    Ok(worst)
}

/// `max_i |F_emp(x_i) - F(x_i)|` at the jump points only. For a lattice
/// statistic the full supremum also contains the rise of `F` across one
/// lattice spacing, which does not vanish with the sample size.
pub fn jump_point_distance(ecdf: &[(f64, f64)], f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(x, v) in ecdf {
        worst = worst.max((f(x)? - v).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::cdf_range;
    use crate::measure::probability;

    #[test]
    fn tiny_theta_gives_empty_partitions() {
        let p = MulticriticalParams::odd(1, 1e-6).unwrap();
        let batch = sample(&p, 200, 1).unwrap();
        assert!(batch.samples.iter().all(|l| l.is_empty()));
    }

    #[test]
    fn deterministic() {
        let p = MulticriticalParams::odd_even(2, 2.0).unwrap();
        let a = sample(&p, 300, 5).unwrap();
        let b = sample(&p, 300, 5).unwrap();
        assert_eq!(a.samples, b.samples);
        let c = sample(&p, 300, 6).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn small_partition_frequencies() {
        let spec = Specialization::plancherel(1.0);
        let batch = sample_in_window(&spec, 1.0, -8, 8, 20_000, 3).unwrap();
        for lam in crate::partition::enumerate_partitions(3).unwrap() {
            let p = probability(&lam, &spec);
            let f = batch.samples.iter().filter(|s| **s == lam).count() as f64 / 20_000.0;
            let sigma = (p * (1.0 - p) / 20_000.0).sqrt();
            assert!((f - p).abs() < 4.0 * sigma, "{lam}: {f} vs {p}");
        }
    }

    #[test]
    fn edge_cdf_consistent_with_kernel() {
        let p = MulticriticalParams::odd(1, 3.0).unwrap();
        let batch = sample(&p, 4000, 8).unwrap();
        let exact = cdf_range(p.spec(), Statistic::Lambda1, 3, 9).unwrap();
        for g in exact {
            let e = empirical_cdf_at(&batch, Statistic::Lambda1, g.l);
            let sigma = (g.value * (1.0 - g.value) / 4000.0).sqrt().max(1e-4);
            assert!((e - g.value).abs() < 4.0 * sigma, "l = {}: {e} vs {}", g.l, g.value);
        }
        let ecdf = empirical_edge_cdf(&batch, &p, Statistic::Lambda1, ScalingConvention::Derived).unwrap();
        assert!((ecdf.last().unwrap().1 - 1.0).abs() < 1e-15);
    }
}

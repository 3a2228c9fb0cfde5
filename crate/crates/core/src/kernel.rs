//! The discrete correlation kernel of a Schur measure and the gap
//! probabilities it produces.
//!
//! With `κ(z) = exp(V(z) - V(1/z)) = Σ κ_m z^m`, expanding `1/(z - w)` as
//! `Σ_{i>=0} w^i / z^{i+1}` in the double contour integral and using
//! `1/κ(w) = κ(1/w)` turns each integral into a coefficient extraction:
//!
//! ```text
//! K(a, b) = Σ_{i>=0} κ_{a+1+i} κ_{b+1+i}        (sites a = k - 1/2, b = l - 1/2)
//! ```
//!
//! so that `K(a, b) = κ_{a+1} κ_{b+1} + K(a+1, b+1)`. Because `κ` is
//! unimodular on the circle, `Σ_j κ_j κ_{j+s} = δ_{s,0}`, which gives the
//! complementary form `K(m, m) = 1 - Σ_{j<=m} κ_j²` used for `m < 0`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::coeffs::{symbol_coeffs, Family, LaurentCoefficients};
use crate::error::{Error, Result};
use crate::linalg::{cholesky_leading_minors, lu_determinant};
use crate::multicritical::{verify_criticality, MeasureKind, MulticriticalParams};
use crate::specialization::Specialization;

/// Neglected trace `Σ_{m >= R} K(m, m)` allowed by the truncation radius.
pub const TRACE_TAIL: f64 = 1e-14;

/// `log |κ_j|` below which coefficients are dropped from the table.
const KAPPA_LOG_EPS: f64 = -46.0;

/// Cauchy bound for `κ`: on `|z| = e^t`, `|κ(z)| <= exp Σ 2|θ_i| sinh(i t) / i`.
fn log_kappa_bound(spec: &Specialization, j: usize) -> f64 {
    let j = j as f64;
    let theta: Vec<f64> = spec.theta().iter().map(|t| t.abs()).collect();
    let g = |t: f64| {
        -j * t
            + theta
                .iter()
                .enumerate()
                .map(|(i, a)| 2.0 * a * (((i + 1) as f64) * t).sinh() / (i + 1) as f64)
                .sum::<f64>()
    };
    let dg = |t: f64| {
        -j + theta
            .iter()
            .enumerate()
            .map(|(i, a)| 2.0 * a * (((i + 1) as f64) * t).cosh())
            .sum::<f64>()
    };
    if dg(0.0) >= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while dg(hi) < 0.0 && hi < 700.0 {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if dg(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    g(0.5 * (lo + hi)).min(0.0)
}

fn kappa_range(spec: &Specialization) -> usize {
    let mut m = 1usize;
    while log_kappa_bound(spec, m) > KAPPA_LOG_EPS {
        m += 1 + m / 16;
    }
    m + 4
}

/// Which extreme of the partition a CDF refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Lambda1,
    Length,
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::Lambda1 => "lambda1",
            Statistic::Length => "length",
        })
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda1" | "first" => Ok(Statistic::Lambda1),
            "length" | "ell" => Ok(Statistic::Length),
            other => Err(Error::invalid(format!("unknown statistic {other:?}"))),
        }
    }
}

/// The `κ` coefficients of a specialization together with the truncation
/// radius `R` beyond which the kernel diagonal is negligible.
#[derive(Debug, Clone)]
pub struct KappaTable {
    kappa: LaurentCoefficients,
    /// `tail[j - lo] = Σ_{i >= j} κ_i²`.
    tail: Vec<f64>,
    /// `head[j - lo] = Σ_{i <= j} κ_i²`.
    head: Vec<f64>,
    radius: i64,
}

impl KappaTable {
    pub fn new(spec: &Specialization) -> Result<Self> {
        let m = kappa_range(spec);
        let kappa = symbol_coeffs(spec, Family::Kappa, m)?;
        let vals = kappa.values();
        let mut tail = vec![0.0; vals.len() + 1];
        for i in (0..vals.len()).rev() {
            tail[i] = tail[i + 1] + vals[i] * vals[i];
        }
        tail.pop();
        let mut head = Vec::with_capacity(vals.len());
        let mut acc = 0.0;
        for v in vals {
            acc += v * v;
            head.push(acc);
        }
        let mut table = KappaTable {
            kappa,
            tail,
            head,
            radius: 0,
        };
        table.radius = table.find_radius()?;
        Ok(table)
    }

    /// Smallest `R >= 0` with `Σ_{m >= R} K(m, m) = Σ_{j > R} (j - R) κ_j² < TRACE_TAIL`.
    fn find_radius(&self) -> Result<i64> {
        let hi = self.kappa.hi();
        let mut r = 0i64;
        loop {
            let trace: f64 = (r + 1..=hi).map(|j| self.tail_sq(j)).sum();
            if trace < TRACE_TAIL {
                return Ok(r);
            }
            r += 1;
            if r >= hi {
                return Err(Error::no_convergence("kernel truncation radius", trace));
            }
        }
    }

    fn tail_sq(&self, j: i64) -> f64 {
        if j > self.kappa.hi() {
            0.0
        } else if j < self.kappa.lo() {
            self.tail[0]
        } else {
            self.tail[(j - self.kappa.lo()) as usize]
        }
    }

    fn head_sq(&self, j: i64) -> f64 {
        if j < self.kappa.lo() {
            0.0
        } else if j > self.kappa.hi() {
            *self.head.last().unwrap()
        } else {
            self.head[(j - self.kappa.lo()) as usize]
        }
    }

    pub fn coefficients(&self) -> &LaurentCoefficients {
        &self.kappa
    }

    pub fn kappa(&self, j: i64) -> f64 {
        self.kappa.get(j).unwrap_or(0.0)
    }

    /// `R`: sites `m >= R` carry total density below [`TRACE_TAIL`].
    pub fn truncation_radius(&self) -> i64 {
        self.radius
    }

    /// `K(a, b)` in the integer encoding.
    pub fn entry(&self, a: i64, b: i64) -> f64 {
        if a == b {
            return self.density(a);
        }
        // Σ_{j > a} κ_j κ_{j+s}
        let s = b - a;
        let (lo, hi) = (self.kappa.lo(), self.kappa.hi());
        let start = (a + 1).max(lo).max(lo - s);
        let end = hi.min(hi - s);
        (start..=end).map(|j| self.kappa(j) * self.kappa(j + s)).sum()
    }

    /// `K(m, m)`, the probability that `m` belongs to `S(λ)`.
    pub fn density(&self, m: i64) -> f64 {
        if m >= 0 {
            self.tail_sq(m + 1)
        } else {
            1.0 - self.head_sq(m)
        }
    }

    /// `det[K(m_i, m_j)]`, the probability that all sites are occupied.
    pub fn correlation(&self, sites: &[i64]) -> f64 {
        let k = sites.len();
        let m = DMatrix::from_fn(k, k, |i, j| self.entry(sites[i], sites[j]));
        lu_determinant(m)
    }

    /// Kernel restricted to `[lo, hi]`, filled by the shift recurrence.
    pub fn window(&self, lo: i64, hi: i64) -> Result<DiscreteKernelMatrix> {
        if hi < lo {
            return Err(Error::invalid(format!("empty window [{lo}, {hi}]")));
        }
        let w = (hi - lo + 1) as usize;
        let mut k = DMatrix::<f64>::zeros(w, w);
        for i in 0..w {
            let a = lo + i as i64;
            k[(w - 1, i)] = self.entry(hi, a);
            k[(i, w - 1)] = k[(w - 1, i)];
        }
        for i in (0..w - 1).rev() {
            let a = lo + i as i64;
            k[(i, i)] = self.density(a);
            for j in (0..i).rev() {
                let b = lo + j as i64;
                let v = self.kappa(a + 1) * self.kappa(b + 1) + k[(i + 1, j + 1)];
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        let truncation_tail: f64 = (hi + 1..self.kappa.hi().max(hi + 1))
            .map(|m| self.density(m))
            .sum();
        Ok(DiscreteKernelMatrix {
            lo,
            hi,
            matrix: k,
            truncation_tail,
        })
    }

    /// `P(λ_1 <= l)` for every `l` in `[from, to]` from a single Cholesky
    /// sweep of `I - K` on `[min(from, R), R - 1]` taken in reverse order:
    /// the leading minor of size `R - l` is `det(I - K)` on `[l, R - 1]`.
    pub fn gap_range(&self, from: i64, to: i64) -> Vec<GapValue> {
        let r = self.radius;
        let lo = from.max(0).min(r);
        let mut out = Vec::new();
        let mut minors: Vec<f64> = vec![1.0];
        let mut psd_violation = false;
        if lo < r {
            let w = (r - lo) as usize;
            let window = self.window(lo, r - 1).expect("nonempty window");
            let rev = DMatrix::from_fn(w, w, |i, j| {
                let v = -window.matrix[(w - 1 - i, w - 1 - j)];
                if i == j {
                    1.0 + v
                } else {
                    v
                }
            });
            let lm = cholesky_leading_minors(&rev);
            minors.extend(lm.minors.iter().copied());
            if let Some(k) = lm.indefinite_at {
                psd_violation = true;
                for size in k + 1..=w {
                    let sub = rev.view((0, 0), (size, size)).into_owned();
                    minors.push(lu_determinant(sub));
                }
            }
        }
        for l in from..=to {
            if l < 0 {
                out.push(GapValue {
                    l,
                    value: 0.0,
                    impossible: true,
                    psd_violation: false,
                });
                continue;
            }
            let size = (r - l).max(0) as usize;
            out.push(GapValue {
                l,
                value: minors[size].clamp(0.0, 1.0),
                impossible: false,
                psd_violation,
            });
        }
        out
    }

    pub fn gap_probability(&self, l: i64) -> GapValue {
        self.gap_range(l, l).pop().unwrap()
    }
}

/// `K` on a window of consecutive sites.
#[derive(Debug, Clone)]
pub struct DiscreteKernelMatrix {
    pub lo: i64,
    pub hi: i64,
    pub matrix: DMatrix<f64>,
    /// `Σ_{m > hi} K(m, m)`.
    pub truncation_tail: f64,
}

impl DiscreteKernelMatrix {
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn max_asymmetry(&self) -> f64 {
        let m = &self.matrix;
        (m - m.transpose()).amax()
    }
}

/// A CDF value with the flags raised while computing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapValue {
    pub l: i64,
    pub value: f64,
    /// `l < 0`: the event is empty and `value` is 0.
    pub impossible: bool,
    /// A Cholesky pivot fell below `-1e-10` and LU was used instead.
    pub psd_violation: bool,
}

pub fn kernel_entry(spec: &Specialization, a: i64, b: i64) -> Result<f64> {
    Ok(KappaTable::new(spec)?.entry(a, b))
}

pub fn density(spec: &Specialization, m: i64) -> Result<f64> {
    Ok(KappaTable::new(spec)?.density(m))
}

/// `P(λ_1 <= l)`.
pub fn gap_probability(spec: &Specialization, l: i64) -> Result<GapValue> {
    Ok(KappaTable::new(spec)?.gap_probability(l))
}

/// `P(ℓ(λ) <= l)`, the gap probability of the conjugate measure.
pub fn length_cdf(spec: &Specialization, l: i64) -> Result<GapValue> {
    gap_probability(&spec.omega(), l)
}

/// CDF of `λ_1` or `ℓ(λ)` on `[from, to]`.
pub fn cdf_range(spec: &Specialization, stat: Statistic, from: i64, to: i64) -> Result<Vec<GapValue>> {
    if to < from {
        return Err(Error::invalid(format!("empty range [{from}, {to}]")));
    }
    let table = match stat {
        Statistic::Lambda1 => KappaTable::new(spec)?,
        Statistic::Length => KappaTable::new(&spec.omega())?,
    };
    Ok(table.gap_range(from, to))
}

/// Fluctuation scale used to place the lattice point `l = ⌊center + s c⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingConvention {
    /// `c = (θ |D| / (2n)!)^{1/(2n+1)}` from the exact derivative `D` of
    /// order `2n + 1` of the action at the critical point. This gives
    /// `(θ/d)^{1/(2n+1)}` for `λ_1` and `(θ d̃)^{1/3}` for `ℓ(λ)` in the
    /// odd-even case.
    #[default]
    Derived,
    /// `(θ d)^{1/(2n+1)}` (and `(θ d̃)^{1/3}`).
    ThetaTimesD,
    /// `(θ / d)^{1/(2n+1)}` (and `(θ / d̃)^{1/3}`).
    ThetaOverD,
}

impl fmt::Display for ScalingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalingConvention::Derived => "derived",
            ScalingConvention::ThetaTimesD => "theta-times-d",
            ScalingConvention::ThetaOverD => "theta-over-d",
        })
    }
}

impl FromStr for ScalingConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derived" => Ok(ScalingConvention::Derived),
            "theta-times-d" | "theta*d" => Ok(ScalingConvention::ThetaTimesD),
            "theta-over-d" | "theta/d" => Ok(ScalingConvention::ThetaOverD),
            other => Err(Error::invalid(format!("unknown scaling convention {other:?}"))),
        }
    }
}

/// Center, scale and limiting order of an edge statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeScaling {
    pub center: f64,
    pub scale: f64,
    /// The limit law is `F(order; s)`.
    pub order: usize,
}

impl EdgeScaling {
    pub fn new(params: &MulticriticalParams, stat: Statistic, conv: ScalingConvention) -> Result<Self> {
        use num_traits::{Signed, ToPrimitive};
        let theta = params.theta();
        let n = params.n();
        let oe_length = stat == Statistic::Length && params.kind() == MeasureKind::OddEven;
        let (b, d) = if stat == Statistic::Length {
            (params.b_tilde(), params.d_tilde())
        } else {
            (params.b(), params.d())
        };
        let order = if oe_length { 3 } else { 2 * n + 1 };
        let d = d.to_f64().unwrap();
        let base = match conv {
            ScalingConvention::ThetaTimesD => theta * d,
            ScalingConvention::ThetaOverD => theta / d,
            ScalingConvention::Derived => {
                let report = verify_criticality(params)?;
                let deriv = if oe_length {
                    report.exact_left_third.expect("odd-even report has left edge")
                } else {
                    report.exact_edge_derivative
                };
                let fact: f64 = (1..order).map(|k| k as f64).product();
                theta * deriv.abs().to_f64().unwrap() / fact
            }
        };
        Ok(EdgeScaling {
            center: b.to_f64().unwrap() * theta,
            scale: base.powf(1.0 / order as f64),
            order,
        })
    }

    pub fn lattice_point(&self, s: f64) -> i64 {
        (self.center + s * self.scale).floor() as i64
    }
}

/// `P(stat <= ⌊center + s c⌋)` at the parameters' `θ`.
pub fn edge_scaled_cdf(
    params: &MulticriticalParams,
    stat: Statistic,
    s: f64,
    conv: ScalingConvention,
) -> Result<GapValue> {
    let scaling = EdgeScaling::new(params, stat, conv)?;
    let l = scaling.lattice_point(s);
    match stat {
        Statistic::Lambda1 => gap_probability(params.spec(), l),
        Statistic::Length => length_cdf(params.spec(), l),
    }
}

/// Edge CDF on a grid of `s` values, sharing one kernel table.
pub fn edge_scaled_cdf_grid(
    params: &MulticriticalParams,
    stat: Statistic,
    s: &[f64],
    conv: ScalingConvention,
) -> Result<Vec<(f64, GapValue)>> {
    let scaling = EdgeScaling::new(params, stat, conv)?;
    let ls: Vec<i64> = s.iter().map(|&x| scaling.lattice_point(x)).collect();
    let (Some(&lo), Some(&hi)) = (ls.iter().min(), ls.iter().max()) else {
        return Ok(Vec::new());
    };
    let vals = cdf_range(params.spec(), stat, lo, hi)?;
    Ok(s.iter()
        .zip(&ls)
        .map(|(&x, &l)| (x, vals[(l - lo) as usize]))
        .collect())
}

/// Evaluates several specializations in parallel.
pub fn gap_batch(specs: &[Specialization], l: i64) -> Result<Vec<GapValue>> {
    specs.par_iter().map(|s| gap_probability(s, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureTable;

    fn bessel_j(m: i64, x: f64) -> f64 {
        let sign = if m < 0 && m % 2 != 0 { -1.0 } else { 1.0 };
        let m = m.unsigned_abs() as i32;
        let half = x / 2.0;
        let mut term = half.powi(m) / (1..=m).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..80 {
            term *= -half * half / (k as f64 * (k as f64 + m as f64));
            sum += term;
        }
        sign * sum
    }

    #[test]
    fn plancherel_kernel_is_bessel_series() {
        let t = KappaTable::new(&Specialization::plancherel(1.0)).unwrap();
        let j0 = bessel_j(0, 2.0);
        assert!((t.density(0) - (1.0 - j0 * j0) / 2.0).abs() < 1e-13);
        for (a, b) in [(0, 1), (2, -1), (-3, 4), (5, 5)] {
            let direct: f64 = (0..60).map(|i| bessel_j(a + 1 + i, 2.0) * bessel_j(b + 1 + i, 2.0)).sum();
            assert!((t.entry(a, b) - direct).abs() < 1e-13, "{a} {b}");
        }
        assert!(1.0 - t.density(-30) < 1e-15);
    }

    #[test]
    fn window_matches_entries() {
        let p = MulticriticalParams::odd_even(2, 3.0).unwrap();
        let t = KappaTable::new(p.spec()).unwrap();
        let w = t.window(-8, 9).unwrap();
        for i in 0..18 {
            for j in 0..18 {
                let (a, b) = (-8 + i as i64, -8 + j as i64);
                assert!((w.matrix[(i, j)] - t.entry(a, b)).abs() < 1e-13);
            }
        }
        assert!(w.max_asymmetry() < 1e-12);
        let ev = w.eigenvalues();
        assert!(ev[0] > -1e-10 && *ev.last().unwrap() < 1.0 + 1e-10);
    }

    #[test]
    fn small_theta_kernel_vanishes() {
        let t = KappaTable::new(&Specialization::plancherel(1e-9)).unwrap();
        assert!(t.entry(0, 0) < 1e-15 && t.entry(1, 3).abs() < 1e-15);
        assert_eq!(t.gap_probability(0).value, (-1e-18f64).exp());
    }

    #[test]
    fn gap_at_zero_is_empty_partition() {
        for theta in [0.3, 1.0, 2.5] {
            let g = gap_probability(&Specialization::plancherel(theta), 0).unwrap();
            assert!((g.value - (-theta * theta).exp()).abs() < 1e-12);
        }
        let spec = Specialization::new(vec![]).unwrap();
        assert_eq!(gap_probability(&spec, 0).unwrap().value, 1.0);
        let neg = gap_probability(&spec, -1).unwrap();
        assert!(neg.impossible && neg.value == 0.0);
    }

    #[test]
    fn gap_matches_enumeration() {
        let p = MulticriticalParams::odd_even(2, 0.6).unwrap();
        let table = MeasureTable::new(p.spec(), 30).unwrap();
        let gaps = cdf_range(p.spec(), Statistic::Lambda1, 0, 6).unwrap();
        let lens = cdf_range(p.spec(), Statistic::Length, 0, 6).unwrap();
        for l in 0..=6 {
            assert!((gaps[l as usize].value - table.first_part_cdf(l)).abs() < 1e-9);
            assert!((lens[l as usize].value - table.length_cdf(l)).abs() < 1e-9);
        }
    }

    #[test]
    fn correlations_match_enumeration() {
        let p = MulticriticalParams::odd(2, 0.6).unwrap();
        let table = MeasureTable::new(p.spec(), 30).unwrap();
        let t = KappaTable::new(p.spec()).unwrap();
        for a in -4..=3 {
            assert!((t.density(a) - table.correlation(&[a])).abs() < 1e-8);
            for b in a + 1..=3 {
                assert!((t.correlation(&[a, b]) - table.correlation(&[a, b])).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn particle_hole_balance() {
        let p = MulticriticalParams::odd_even(2, 3.0).unwrap();
        let t = KappaTable::new(p.spec()).unwrap();
        let r = t.truncation_radius();
        let s: f64 = (-r - 40..=r)
            .map(|m| if m < 0 { 1.0 } else { 0.0 } - t.density(m))
            .sum();
        assert!(s.abs() < 1e-10, "{s}");
    }

    #[test]
    fn edge_scaling_plancherel() {
        let p = MulticriticalParams::odd(1, 100.0).unwrap();
        for conv in [ScalingConvention::Derived, ScalingConvention::ThetaTimesD, ScalingConvention::ThetaOverD] {
            let e = EdgeScaling::new(&p, Statistic::Lambda1, conv).unwrap();
            assert_eq!(e.lattice_point(0.0), 200);
            assert!((e.scale - 100f64.cbrt()).abs() < 1e-12);
        }
        let v = edge_scaled_cdf(&p, Statistic::Lambda1, 20.0, ScalingConvention::Derived).unwrap();
        assert!(v.value > 1.0 - 1e-6);
    }

    #[test]
    fn derived_scaling_constants() {
        let p = MulticriticalParams::odd(2, 7.0).unwrap();
        let e = EdgeScaling::new(&p, Statistic::Lambda1, ScalingConvention::Derived).unwrap();
        assert!((e.scale - (7.0f64 / 1.5).powf(0.2)).abs() < 1e-12);
        let p = MulticriticalParams::odd_even(3, 7.0).unwrap();
        let e = EdgeScaling::new(&p, Statistic::Length, ScalingConvention::Derived).unwrap();
        assert!((e.scale - (7.0f64 * 3.2).cbrt()).abs() < 1e-12);
        assert_eq!(e.order, 3);
    }
}

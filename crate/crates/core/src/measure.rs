//! The Schur measure `P(λ) = Z^{-1} s_λ[θ]²` evaluated partition by
//! partition. Summing over a bounded enumeration gives the brute-force
//! reference values every other route is checked against.

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::Result;
use crate::partition::{enumerate_partitions, Partition};
use crate::specialization::{schur_value_exact, schur_value_with, Specialization};

/// `P(λ)` in floating point.
pub fn probability(lambda: &Partition, spec: &Specialization) -> f64 {
    let max_k = lambda.first_part() + lambda.length();
    let h = spec.h_values(max_k);
    let hd = spec.omega().h_values(max_k);
    let s = compact_schur(lambda, &h, &hd);
    s * s * (-spec.log_normalizer()).exp()
}

/// Unnormalized weight `s_λ[θ]²` as an exact rational.
pub fn weight_exact(lambda: &Partition, spec: &Specialization) -> Option<BigRational> {
    let s = schur_value_exact(lambda, spec)?;
    Some(&s * &s)
}

/// Evaluates the Jacobi–Trudi determinant in the smaller of the two
/// dimensions `ℓ(λ)`, `λ_1`, using `s_λ[θ] = s_{λ'}[ωθ]`.
fn compact_schur(lambda: &Partition, h: &[f64], h_dual: &[f64]) -> f64 {
    if lambda.length() > lambda.first_part() {
        schur_value_with(&lambda.conjugate(), h_dual)
    } else {
        schur_value_with(lambda, h)
    }
}

/// `P(λ)` for every `|λ| <= max_size`.
#[derive(Debug, Clone)]
pub struct MeasureTable {
    max_size: usize,
    entries: Vec<(Partition, f64)>,
}

impl MeasureTable {
    pub fn new(spec: &Specialization, max_size: usize) -> Result<Self> {
        let partitions: Vec<Partition> = enumerate_partitions(max_size)?.collect();
        let h = spec.h_values(2 * max_size + 1);
        let hd = spec.omega().h_values(2 * max_size + 1);
        let norm = (-spec.log_normalizer()).exp();
        let entries = partitions
            .into_par_iter()
            .map(|lam| {
                let s = compact_schur(&lam, &h, &hd);
                let p = s * s * norm;
                (lam, p)
            })
            .collect();
        Ok(MeasureTable { max_size, entries })
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn entries(&self) -> &[(Partition, f64)] {
        &self.entries
    }

    fn sum_where(&self, pred: impl Fn(&Partition) -> bool) -> f64 {
        self.entries
            .iter()
            .filter(|(l, _)| pred(l))
            .map(|(_, p)| p)
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.sum_where(|_| true)
    }

    /// `Σ_{λ_1 <= l} P(λ)` over the table.
    pub fn first_part_cdf(&self, l: i64) -> f64 {
        self.sum_where(|lam| (lam.first_part() as i64) <= l)
    }

    /// `Σ_{ℓ(λ) <= l} P(λ)` over the table.
    pub fn length_cdf(&self, l: i64) -> f64 {
        self.sum_where(|lam| (lam.length() as i64) <= l)
    }

    /// `Σ_{ℓ(λ) <= l} s_λ²`, the left side of Gessel's identity.
    pub fn gessel_sum(&self, spec: &Specialization, l: i64) -> f64 {
        self.length_cdf(l) * spec.log_normalizer().exp()
    }

    /// `P({m_1, ..., m_r} ⊂ S(λ))` over the table.
    pub fn correlation(&self, sites: &[i64]) -> f64 {
        self.sum_where(|lam| sites.iter().all(|&m| occupied(lam, m)))
    }

    pub fn mean_size(&self) -> f64 {
        self.entries
            .iter()
            .map(|(l, p)| l.size() as f64 * p)
            .sum()
    }
}

/// Whether `m` (encoding `m + 1/2`) belongs to `S(λ)`.
pub fn occupied(lambda: &Partition, m: i64) -> bool {
    let len = lambda.length() as i64;
    if m < -len {
        return true;
    }
    lambda
        .parts()
        .iter()
        .enumerate()
        .any(|(i, &p)| p as i64 - (i as i64 + 1) == m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn plancherel_example() {
        // P(λ) = e^{-θ²} (θ^{|λ|} f_λ / |λ|!)²
        let theta: f64 = 0.8;
        let spec = Specialization::plancherel(theta);
        let lam = p(&[3, 1]);
        let f = 3.0;
        let expected = (-theta * theta).exp() * (theta.powi(4) * f / 24.0).powi(2);
        assert!((probability(&lam, &spec) - expected).abs() < 1e-15);
        assert!((probability(&Partition::empty(), &spec) - (-theta * theta).exp()).abs() < 1e-15);
    }

    #[test]
    fn mass_is_one() {
        let spec = Specialization::new(vec![0.6, -0.15]).unwrap();
        let table = MeasureTable::new(&spec, 24).unwrap();
        assert!((table.total_mass() - 1.0).abs() < 1e-12);
        let s1: f64 = table.entries().iter().map(|(l, _)| probability(l, &spec)).sum();
        assert!((s1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn occupation_matches_fermionic_set() {
        for lam in crate::partition::enumerate_partitions(8).unwrap() {
            let set = lam.fermionic_set(-12).unwrap();
            for m in -12..10 {
                assert_eq!(occupied(&lam, m), set.elements().contains(&m), "{lam} {m}");
            }
        }
    }
}

//! Parameter families of the odd-even and odd multicritical measures and an
//! exact check of the criticality conditions of their action.
//!
//! Both families are built from rational coefficients `c_i = θ_i / θ`, so
//! every identity below is verified in exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialization::Specialization;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    /// `θ_1, ..., θ_n` nonzero.
    #[serde(rename = "oe")]
    OddEven,
    /// `θ_1, θ_3, ..., θ_{2n-1}` nonzero; conjugation invariant.
    #[serde(rename = "odd")]
    Odd,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::OddEven => "oe",
            MeasureKind::Odd => "odd",
        })
    }
}

impl FromStr for MeasureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oe" | "odd-even" | "odd_even" => Ok(MeasureKind::OddEven),
            "odd" | "o" => Ok(MeasureKind::Odd),
            other => Err(Error::invalid(format!("unknown measure kind {other:?}"))),
        }
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn double_factorial(n: u64) -> BigInt {
    (1..=n).rev().step_by(2).map(BigInt::from).product()
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Exact rational from the shortest decimal representation of `x`
/// (so `0.6` becomes `3/5`, not the nearest dyadic fraction).
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::invalid("non-finite value"));
    }
    parse_decimal(&format!("{x}"))
}

/// Parses `"-12.375"`, `"3/5"` or `"1e-3"` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("cannot parse {s:?} as a rational"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let all: String = format!("{whole}{frac}");
    let value: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(value);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -q } else { q })
}

/// The measures of the odd-even and odd multicritical families.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticriticalParams {
    kind: MeasureKind,
    n: usize,
    theta: BigRational,
    /// `θ_i / θ` for `i = 1..=p`.
    coeffs: Vec<BigRational>,
    b: BigRational,
    d: BigRational,
    b_tilde: BigRational,
    d_tilde: BigRational,
    spec: Specialization,
}

impl MulticriticalParams {
    pub fn new(kind: MeasureKind, n: usize, theta: f64) -> Result<Self> {
        if !(theta >= 0.0) {
            return Err(Error::invalid(format!("theta must be nonnegative, got {theta}")));
        }
        Self::with_exact_theta(kind, n, rational_from_f64(theta)?)
    }

    pub fn odd_even(n: usize, theta: f64) -> Result<Self> {
        Self::new(MeasureKind::OddEven, n, theta)
    }

    pub fn odd(n: usize, theta: f64) -> Result<Self> {
        Self::new(MeasureKind::Odd, n, theta)
    }

    pub fn with_exact_theta(kind: MeasureKind, n: usize, theta: BigRational) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if theta.is_negative() {
            return Err(Error::invalid("theta must be nonnegative"));
        }
        let nn = n as u64;
        let (coeffs, b, d, b_tilde, d_tilde) = match kind {
            MeasureKind::OddEven => {
                let coeffs = (1..=nn)
                    .map(|i| {
                        let sign = if i % 2 == 1 { 1 } else { -1 };
                        ratio(
                            sign * factorial(nn - 1) * factorial(nn + 1),
                            factorial(nn - i) * factorial(nn + i),
                        )
                    })
                    .collect::<Vec<_>>();
                let b = ratio(BigInt::from(nn + 1), BigInt::from(nn));
                let binom = binomial(2 * nn, nn - 1);
                let d = BigRational::from_integer(binom.clone());
                let b_tilde = &b
                    * (ratio(double_factorial(2 * nn), double_factorial(2 * nn - 1)) - int(1));
                let d_tilde = ratio(BigInt::from(1u64 << (2 * nn - 2)) * BigInt::from(nn), binom);
                (coeffs, b, d, b_tilde, d_tilde)
            }
            MeasureKind::Odd => {
                let mut coeffs = vec![BigRational::zero(); 2 * n - 1];
                for i in 1..=nn {
                    let sign = if i % 2 == 1 { 1 } else { -1 };
                    coeffs[2 * i as usize - 2] = ratio(
                        sign * factorial(nn - 1) * factorial(nn),
                        BigInt::from(2 * i - 1) * factorial(nn - i) * factorial(nn + i - 1),
                    );
                }
                let c = binomial(2 * nn, nn);
                let b = ratio(BigInt::from(1u64) << (4 * nn - 1), BigInt::from(nn) * &c * &c);
                let d = ratio(double_factorial(2 * nn - 1), double_factorial(2 * nn - 2));
                (coeffs, b.clone(), d.clone(), b, d)
            }
        };
        let spec = Specialization::from_rationals(coeffs.iter().map(|c| c * &theta).collect());
        Ok(MulticriticalParams {
            kind,
            n,
            theta,
            coeffs,
            b,
            d,
            b_tilde,
            d_tilde,
            spec,
        })
    }

    /// Same family at a different overall scale.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.kind, self.n, theta)
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta.to_f64().unwrap()
    }

    pub fn theta_exact(&self) -> &BigRational {
        &self.theta
    }

    /// `θ_i / θ`, index `i - 1`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn spec(&self) -> &Specialization {
        &self.spec
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn d(&self) -> &BigRational {
        &self.d
    }

    pub fn b_tilde(&self) -> &BigRational {
        &self.b_tilde
    }

    pub fn d_tilde(&self) -> &BigRational {
        &self.d_tilde
    }

    /// `β = b θ`.
    pub fn beta(&self) -> BigRational {
        &self.b * &self.theta
    }

    /// `S_0(z) - b log z` as an exact Laurent polynomial with a log term,
    /// where `S_0(z) = (V(z) - V(1/z)) / θ`.
    pub fn right_edge_action(&self) -> LogLaurent {
        self.action_with_log(-self.b.clone())
    }

    /// `S_0(z) + b̃ log z`, whose critical point at `z = -1` governs `ℓ(λ)`.
    pub fn left_edge_action(&self) -> LogLaurent {
        self.action_with_log(self.b_tilde.clone())
    }

    fn action_with_log(&self, log_coeff: BigRational) -> LogLaurent {
        let mut terms = BTreeMap::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (i + 1) as i64;
            let w = c / int(k);
            terms.insert(k, w.clone());
            terms.insert(-k, -w);
        }
        LogLaurent { terms, log_coeff }
    }

    /// `S_0(z) = (V(z) - V(1/z)) / θ`.
    pub fn action_s0(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::zero() {
            return Err(Error::invalid("S0 is singular at z = 0"));
        }
        Ok(self.action_with_log(BigRational::zero()).eval_polynomial(z))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fmt = |q: &BigRational| q.to_string();
        serde_json::json!({
            "kind": self.kind,
            "n": self.n,
            "theta": fmt(&self.theta),
            "thetas": self.spec.exact().unwrap().iter().map(fmt).collect::<Vec<_>>(),
            "b": fmt(&self.b),
            "d": fmt(&self.d),
            "b_tilde": fmt(&self.b_tilde),
            "d_tilde": fmt(&self.d_tilde),
        })
    }
}

/// `Σ_k c_k z^k + a log z` with rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLaurent {
    pub terms: BTreeMap<i64, BigRational>,
    pub log_coeff: BigRational,
}

fn falling(k: i64, j: usize) -> BigRational {
    int((0..j as i64).map(|r| k - r).product())
}

fn sign_pow(z0: i64, e: i64) -> BigRational {
    // z0 is ±1
    if z0 == -1 && e.rem_euclid(2) == 1 {
        int(-1)
    } else {
        int(1)
    }
}

impl LogLaurent {
    /// `(d/dz)^j` evaluated at `z0 ∈ {1, -1}`.
    pub fn derivative_at(&self, j: usize, z0: i64) -> BigRational {
        assert!(z0 == 1 || z0 == -1);
        let mut acc = BigRational::zero();
        for (&k, c) in &self.terms {
            acc += c * falling(k, j) * sign_pow(z0, k - j as i64);
        }
        if j >= 1 {
            // (d/dz)^j log z = (-1)^{j-1} (j-1)! z^{-j}
            let sign = if j % 2 == 1 { int(1) } else { int(-1) };
            let fact = BigRational::from_integer(factorial(j as u64 - 1));
            acc += &self.log_coeff * sign * fact * sign_pow(z0, -(j as i64));
        } else {
            assert!(z0 == 1, "log term has no canonical value at -1");
        }
        acc
    }

    /// `(z d/dz)^i` evaluated at `z0 ∈ {1, -1}`, `i >= 1`.
    pub fn euler_derivative_at(&self, i: usize, z0: i64) -> BigRational {
        assert!(i >= 1);
        let mut acc = BigRational::zero();
        for (&k, c) in &self.terms {
            acc += c * num_traits::pow(int(k), i) * sign_pow(z0, k);
        }
        if i == 1 {
            acc += &self.log_coeff;
        }
        acc
    }

    fn eval_polynomial(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&k, c)| z.powi(k as i32) * c.to_f64().unwrap())
            .sum()
    }
}

/// Stirling numbers of the second kind `S(i, j)`, `0 <= j <= i <= max`.
pub fn stirling2(max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); max + 1]; max + 1];
    s[0][0] = BigInt::one();
    for i in 1..=max {
        for j in 1..=i {
            s[i][j] = BigInt::from(j) * &s[i - 1][j] + &s[i - 1][j - 1];
        }
    }
    s
}

/// Exact data of the critical points of the action.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalityReport {
    pub kind: MeasureKind,
    pub n: usize,
    /// `(z d/dz)^i [S_0 - b log z]` at `z = 1`, `i = 1..=2n`.
    pub euler_derivatives: Vec<String>,
    /// `(d/dz)^{2n+1} [S_0 - b log z]` at `z = 1`.
    pub edge_derivative: String,
    /// `(-1)^{n+1} (2n)! d`.
    pub edge_expected_times_d: String,
    /// `(-1)^{n+1} (2n)! / d`.
    pub edge_expected_over_d: String,
    pub edge_matches_times_d: bool,
    pub edge_matches_over_d: bool,
    /// `Σ θ_i / θ` against `+b/2` and against the `-β/(2θ)` sign variant.
    pub sum_theta: String,
    pub half_b: String,
    pub sum_rule_positive_sign: bool,
    pub sum_rule_negative_sign: bool,
    /// `Σ i^{2j} θ_i / θ` for `j = 1..n-1` (all zero).
    pub even_moments: Vec<String>,
    /// `Σ i^{2n} θ_i / θ` against `(2n)! d`; informational, not asserted.
    pub top_moment: String,
    pub top_moment_claimed: String,
    pub top_moment_matches: bool,
    /// For the odd-even family: derivatives `1..=3` of `S_0 + b̃ log z` at
    /// `z = -1`, the order of that critical point and whether the third
    /// derivative equals `2 d̃`.
    pub left_edge_derivatives: Option<Vec<String>>,
    pub left_edge_order: Option<usize>,
    pub left_edge_third_is_two_d_tilde: Option<bool>,
    /// Exact values behind the string fields.
    #[serde(skip)]
    pub exact_edge_derivative: BigRational,
    #[serde(skip)]
    pub exact_left_third: Option<BigRational>,
}

/// Checks the criticality conditions exactly. Fails, naming the index, if a
/// low-order derivative does not vanish, a sum rule fails, the edge
/// derivative does not equal `(-1)^{n+1} (2n)!/d`, or (odd-even) the left
/// critical point is not exactly double.
pub fn verify_criticality(params: &MulticriticalParams) -> Result<CriticalityReport> {
    let n = params.n;
    let action = params.right_edge_action();
    let euler: Vec<BigRational> = (1..=2 * n).map(|i| action.euler_derivative_at(i, 1)).collect();
    if let Some((i, v)) = euler.iter().enumerate().find(|(_, v)| !v.is_zero()) {
        return Err(Error::Criticality(format!(
            "(z d/dz)^{} [S0 - b log z](1) = {v}, expected 0",
            i + 1
        )));
    }
    let edge = action.derivative_at(2 * n + 1, 1);
    let sign = if n % 2 == 1 { int(1) } else { int(-1) };
    let fact = BigRational::from_integer(factorial(2 * n as u64));
    let times_d = &sign * &fact * &params.d;
    let over_d = &sign * &fact / &params.d;
    if edge != over_d {
        return Err(Error::Criticality(format!(
            "(d/dz)^{} [S0 - b log z](1) = {edge}, expected {over_d}",
            2 * n + 1
        )));
    }

    let sum_theta: BigRational = params.coeffs.iter().cloned().sum();
    let half_b = &params.b / int(2);
    if sum_theta != half_b {
        return Err(Error::Criticality(format!("Σ θ_i/θ = {sum_theta}, expected b/2 = {half_b}")));
    }
    let moment = |e: usize| -> BigRational {
        params
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * num_traits::pow(int(i as i64 + 1), e))
            .sum()
    };
    let even_moments: Vec<BigRational> = (1..n).map(|j| moment(2 * j)).collect();
    if let Some((j, v)) = even_moments.iter().enumerate().find(|(_, v)| !v.is_zero()) {
        return Err(Error::Criticality(format!(
            "Σ i^{} θ_i/θ = {v}, expected 0",
            2 * (j + 1)
        )));
    }
    let top = moment(2 * n);
    let top_claimed = &fact * &params.d;

    let (left_derivs, left_order, left_third_ok, exact_left_third) = match params.kind {
        MeasureKind::Odd => (None, None, None, None),
        MeasureKind::OddEven => {
            let left = params.left_edge_action();
            let d: Vec<BigRational> = (1..=3).map(|j| left.derivative_at(j, -1)).collect();
            let order = d.iter().take_while(|v| v.is_zero()).count();
            if order != 2 {
                return Err(Error::Criticality(format!(
                    "S0 + b̃ log z has a critical point of order {order} at z = -1, expected 2"
                )));
            }
            let ok = d[2] == &params.d_tilde * int(2);
            (
                Some(d.iter().map(|v| v.to_string()).collect()),
                Some(order),
                Some(ok),
                Some(d[2].clone()),
            )
        }
    };

    Ok(CriticalityReport {
        kind: params.kind,
        n,
        euler_derivatives: euler.iter().map(|v| v.to_string()).collect(),
        edge_derivative: edge.to_string(),
        edge_expected_times_d: times_d.to_string(),
        edge_expected_over_d: over_d.to_string(),
        edge_matches_times_d: edge == times_d,
        edge_matches_over_d: edge == over_d,
        sum_theta: sum_theta.to_string(),
        half_b: half_b.to_string(),
        sum_rule_positive_sign: sum_theta == half_b,
        sum_rule_negative_sign: sum_theta == -half_b.clone(),
        even_moments: even_moments.iter().map(|v| v.to_string()).collect(),
        top_moment: top.to_string(),
        top_moment_claimed: top_claimed.to_string(),
        top_moment_matches: top == top_claimed,
        left_edge_derivatives: left_derivs,
        left_edge_order: left_order,
        left_edge_third_is_two_d_tilde: left_third_ok,
        exact_edge_derivative: edge,
        exact_left_third,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn oe_examples() {
        let p = MulticriticalParams::odd_even(1, 1.0).unwrap();
        assert_eq!(p.coefficients(), &[q(1, 1)]);
        assert_eq!((p.b(), p.d(), p.b_tilde(), p.d_tilde()), (&q(2, 1), &q(1, 1), &q(2, 1), &q(1, 1)));

        let p = MulticriticalParams::odd_even(2, 1.0).unwrap();
        assert_eq!(p.coefficients(), &[q(1, 1), q(-1, 4)]);
        assert_eq!((p.b(), p.d(), p.b_tilde(), p.d_tilde()), (&q(3, 2), &q(4, 1), &q(5, 2), &q(2, 1)));

        let p = MulticriticalParams::odd_even(3, 1.0).unwrap();
        assert_eq!(p.coefficients(), &[q(1, 1), q(-2, 5), q(1, 15)]);
        assert_eq!(
            (p.b(), p.d(), p.b_tilde(), p.d_tilde()),
            (&q(4, 3), &q(15, 1), &q(44, 15), &q(16, 5))
        );
    }

    #[test]
    fn odd_examples() {
        let p = MulticriticalParams::odd(1, 1.0).unwrap();
        assert_eq!(p.coefficients(), &[q(1, 1)]);
        assert_eq!((p.b(), p.d()), (&q(2, 1), &q(1, 1)));

        let p = MulticriticalParams::odd(2, 1.0).unwrap();
        assert_eq!(p.coefficients(), &[q(1, 1), q(0, 1), q(-1, 9)]);
        assert_eq!((p.b(), p.d()), (&q(16, 9), &q(3, 2)));

        let p = MulticriticalParams::odd(3, 1.0).unwrap();
        assert_eq!(p.coefficients(), &[q(1, 1), q(0, 1), q(-1, 6), q(0, 1), q(1, 50)]);
        assert_eq!((p.b(), p.d()), (&q(128, 75), &q(15, 8)));
        assert_eq!(p.b_tilde(), p.b());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(MulticriticalParams::odd(0, 1.0).is_err());
        assert!(MulticriticalParams::odd_even(2, -1.0).is_err());
        assert!(MulticriticalParams::odd_even(2, f64::NAN).is_err());
        // θ = 0 is the trivial measure on the empty partition
        assert!(MulticriticalParams::odd_even(2, 0.0).unwrap().spec().is_zero());
    }

    #[test]
    fn decimal_theta_is_exact() {
        let p = MulticriticalParams::odd(2, 0.6).unwrap();
        assert_eq!(p.theta_exact(), &q(3, 5));
        assert_eq!(p.spec().exact().unwrap()[2], q(-1, 15));
        assert_eq!(parse_decimal("-1.25e1").unwrap(), q(-25, 2));
        assert_eq!(parse_decimal("3/5").unwrap(), q(3, 5));
        assert!(parse_decimal("abc").is_err());
    }

    #[test]
    fn s0_examples() {
        let p = MulticriticalParams::odd(1, 1.0).unwrap();
        let v = p.action_s0(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - 1.5).abs() < 1e-15);
        let p = MulticriticalParams::odd(2, 1.0).unwrap();
        let v = p.action_s0(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - 29.0 / 24.0).abs() < 1e-15);
        for kind in [MeasureKind::Odd, MeasureKind::OddEven] {
            let p = MulticriticalParams::new(kind, 3, 2.0).unwrap();
            assert!(p.action_s0(Complex64::new(1.0, 0.0)).unwrap().norm() < 1e-15);
            assert!(p.action_s0(Complex64::zero()).is_err());
        }
    }

    #[test]
    fn odd_action_is_antisymmetric() {
        // S0(z) + S0(1/z) = 0 as a Laurent polynomial identity
        for n in 1..=5 {
            let p = MulticriticalParams::odd(n, 1.0).unwrap();
            let a = p.right_edge_action();
            for (&k, c) in &a.terms {
                assert_eq!(a.terms.get(&-k), Some(&-c.clone()));
            }
        }
    }

    #[test]
    fn euler_and_ordinary_derivatives_agree_via_stirling() {
        let s = stirling2(8);
        assert_eq!(s[4][2], BigInt::from(7));
        let p = MulticriticalParams::odd_even(3, 1.0).unwrap();
        let a = p.right_edge_action();
        for z0 in [1i64, -1] {
            let a = if z0 == 1 { a.clone() } else { p.left_edge_action() };
            for i in 1..=7usize {
                let mut via = BigRational::zero();
                for j in 1..=i {
                    let zj = if z0 == -1 && j % 2 == 1 { int(-1) } else { int(1) };
                    via += BigRational::from_integer(s[i][j].clone()) * zj * a.derivative_at(j, z0);
                }
                assert_eq!(via, a.euler_derivative_at(i, z0), "i = {i}, z0 = {z0}");
            }
        }
    }

    #[test]
    fn plancherel_criticality_by_hand() {
        let p = MulticriticalParams::odd(1, 1.0).unwrap();
        let r = verify_criticality(&p).unwrap();
        assert_eq!(r.euler_derivatives, vec!["0", "0"]);
        // (d/dz)^3 [z - 1/z - 2 log z] at 1 = 6 - 4
        assert_eq!(r.edge_derivative, "2");
        assert!(r.edge_matches_times_d && r.edge_matches_over_d);
    }

    #[test]
    fn criticality_holds_for_small_n() {
        for n in 1..=6 {
            for kind in [MeasureKind::Odd, MeasureKind::OddEven] {
                let p = MulticriticalParams::new(kind, n, 1.0).unwrap();
                let r = verify_criticality(&p).unwrap();
                assert!(r.euler_derivatives.iter().all(|v| v == "0"));
                assert!(r.sum_rule_positive_sign && !r.sum_rule_negative_sign);
                assert!(r.edge_matches_over_d);
                if kind == MeasureKind::OddEven {
                    assert_eq!(r.left_edge_order, Some(2));
                    assert_eq!(r.left_edge_third_is_two_d_tilde, Some(true), "n = {n}");
                    // (b + b̃) binom(2n, n-1) = 4^n
                    let lhs = (p.b() + p.b_tilde()) * BigRational::from_integer(binomial(2 * n as u64, n as u64 - 1));
                    assert_eq!(lhs, int(4i64.pow(n as u32)));
                }
            }
        }
    }

    #[test]
    fn edge_derivative_examples() {
        // odd n=2: 120 - 2520/27 - (16/9) 24 = -16; oe n=2: 120 - 90 - 36 = -6
        let r = verify_criticality(&MulticriticalParams::odd(2, 1.0).unwrap()).unwrap();
        assert_eq!(r.edge_derivative, "-16");
        assert!(!r.edge_matches_times_d);
        let r = verify_criticality(&MulticriticalParams::odd_even(2, 1.0).unwrap()).unwrap();
        assert_eq!(r.edge_derivative, "-6");
        assert_eq!(r.left_edge_derivatives.unwrap(), vec!["0", "0", "4"]);
    }

    #[test]
    fn report_independent_of_theta() {
        for kind in [MeasureKind::Odd, MeasureKind::OddEven] {
            let a = verify_criticality(&MulticriticalParams::new(kind, 2, 1.0).unwrap()).unwrap();
            let b = verify_criticality(&MulticriticalParams::new(kind, 2, 5.0).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn params_json() {
        let p = MulticriticalParams::odd(2, 1.0).unwrap();
        let j = p.to_json();
        assert_eq!(j["thetas"][2], "-1/9");
        assert_eq!(j["kind"], "odd");
        assert_eq!(j["b"], "16/9");
    }
}

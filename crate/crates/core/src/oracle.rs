//! Reference values computed by routes that share no code with the main
//! algorithms: power series for Bessel functions and for the generalized
//! Airy functions (Maclaurin expansion of the defining ODE, seeded with
//! closed-form values at the origin).

use std::f64::consts::PI;

/// `J_m(x)` by its power series. Accurate for moderate `|x|`.
pub fn bessel_j(m: i64, x: f64) -> f64 {
    let sign = if m < 0 && m % 2 != 0 { -1.0 } else { 1.0 };
    let m = m.unsigned_abs();
    let half = x / 2.0;
    let mut term = (1..=m).fold(1.0, |t, k| t * half / k as f64);
    let mut sum = term;
    for k in 1..200u64 {
        term *= -half * half / (k as f64 * (k + m) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sign * sum
}

/// `I_m(x)` by its power series.
pub fn bessel_i(m: u64, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = (1..=m).fold(1.0, |t, k| t * half / k as f64);
    let mut sum = term;
    for k in 1..400u64 {
        term *= half * half / (k as f64 * (k + m) as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// `Ai_{2n+1}^{(j)}(0) = (-1)^j sin((j+1)φ) (2n+1)^{(j+1)/(2n+1) - 1} Γ((j+1)/(2n+1)) / π`
/// with `φ = nπ/(2n+1)`.
pub fn airy_derivative_at_zero(n: usize, j: usize) -> f64 {
    let p = (2 * n + 1) as f64;
    let phi = n as f64 * PI / p;
    let s = (j as f64 + 1.0) / p;
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    sign * ((j as f64 + 1.0) * phi).sin() * p.powf(s - 1.0) * libm::tgamma(s) / PI
}

/// `Ai_{2n+1}^{(deriv)}(x)` from the Maclaurin series of
/// `y^{(2n)} = (-1)^{n-1} x y`. Loses accuracy for large `|x|`.
pub fn airy_series(n: usize, x: f64, deriv: usize) -> f64 {
    let q = 2 * n;
    let a = if n % 2 == 1 { 1.0 } else { -1.0 };
    let terms = 400;
    // c[k] = y^{(k)}(0) / k!
    let mut c = vec![0.0f64; terms + deriv + 1];
    let mut fact = 1.0;
    for j in 0..q {
        if j > 0 {
            fact *= j as f64;
        }
        c[j] = airy_derivative_at_zero(n, j) / fact;
    }
    // (k+1)...(k+2n) c[k+2n] = a c[k-1]
    for k in 1..c.len() {
        if k + q >= c.len() {
            break;
        }
        let prod: f64 = (k + 1..=k + q).map(|v| v as f64).product();
        c[k + q] = a * c[k - 1] / prod;
    }
    // derivative of order `deriv` of Σ c_k x^k
    let mut sum = 0.0;
    let mut xp = 1.0;
    for k in deriv..c.len() {
        let ff: f64 = (k - deriv + 1..=k).map(|v| v as f64).product();
        sum += c[k] * ff * xp;
        xp *= x;
    }
    sum
}

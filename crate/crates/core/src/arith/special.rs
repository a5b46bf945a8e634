//! Real special functions by Euler–Maclaurin summation with certified
//! remainders: Hurwitz zeta, its `s`-derivative, and digamma.

use crate::error::{Error, Result};

/// Finest tolerance [`constants`] will certify in double precision.
pub const MIN_TOLERANCE: f64 = 1e-15;

/// Bernoulli numbers `B_2, B_4, …, B_24`.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const EM_HEAD: usize = 30;
const EM_TERMS: usize = 10;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// A value together with an upper bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certified {
    pub value: f64,
    pub bound: f64,
}

/// `ζ(s, a) = Σ_{n≥0} (n + a)^{-s}` for real `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<Certified> {
    if !(s > 1.0) || !(a > 0.0) {
        return Err(Error::Domain(format!("hurwitz zeta needs s > 1 and a > 0, got s={s}, a={a}")));
    }
    let n = EM_HEAD as f64;
    let head: f64 = (0..EM_HEAD).map(|i| (i as f64 + a).powf(-s)).sum();
    let x = n + a;
    let mut total = head + x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising = s (s+1) … (s+2j-2)
    let mut rising = s;
    let mut last = 0.0;
    for j in 1..=EM_TERMS + 1 {
        let term = BERNOULLI_EVEN[j - 1] / factorial(2 * j) * rising * x.powf(-s - 2.0 * j as f64 + 1.0);
        if j == EM_TERMS + 1 {
            last = term.abs();
        } else {
            total += term;
        }
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
    }
    // The integrand is completely monotone, so the remainder is bounded by
    // the first omitted correction; add rounding slack on the head sum.
    Ok(Certified { value: total, bound: last + 4.0 * f64::EPSILON * total.abs() })
}

pub fn zeta(s: f64) -> Result<Certified> {
    hurwitz_zeta(s, 1.0)
}

/// `ζ'(s)` for real `s > 1`, from the term-wise derivative of the same expansion.
pub fn zeta_derivative(s: f64) -> Result<Certified> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("zeta derivative needs s > 1, got {s}")));
    }
    let head: f64 = (1..=EM_HEAD).map(|i| -(i as f64).ln() * (i as f64).powf(-s)).sum();
    let x = EM_HEAD as f64 + 1.0;
    let lx = x.ln();
    let mut total = head - lx * x.powf(1.0 - s) / (s - 1.0) - x.powf(1.0 - s) / ((s - 1.0) * (s - 1.0))
        - 0.5 * lx * x.powf(-s);
    let mut rising = s;
    let mut log_deriv = 1.0 / s;
    let mut last = 0.0;
    for j in 1..=EM_TERMS + 1 {
        let c = BERNOULLI_EVEN[j - 1] / factorial(2 * j);
        let pw = x.powf(-s - 2.0 * j as f64 + 1.0);
        let term = c * rising * (log_deriv - lx) * pw;
        if j == EM_TERMS + 1 {
            last = term.abs();
        } else {
            total += term;
        }
        let a = s + 2.0 * j as f64 - 1.0;
        let b = s + 2.0 * j as f64;
        rising *= a * b;
        log_deriv += 1.0 / a + 1.0 / b;
    }
    Ok(Certified { value: total, bound: 2.0 * last + 8.0 * f64::EPSILON * total.abs() })
}

/// Digamma `ψ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<Certified> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("digamma needs x > 0, got {x}")));
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 20.0 {
        shift += 1.0 / y;
        y += 1.0;
    }
    let mut total = y.ln() - 0.5 / y;
    let mut last = 0.0;
    for j in 1..=EM_TERMS + 1 {
        let term = BERNOULLI_EVEN[j - 1] / (2.0 * j as f64 * y.powi(2 * j as i32));
        if j == EM_TERMS + 1 {
            last = term.abs();
        } else {
            total -= term;
        }
    }
    let value = total - shift;
    Ok(Certified { value, bound: last + 8.0 * f64::EPSILON * (total.abs() + shift) })
}

/// The constants entering the second-moment main term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub zeta2: f64,
    pub zeta2_prime: f64,
    pub euler_gamma: f64,
    /// Largest certified absolute error among the three values.
    pub error_bound: f64,
}

pub fn constants(tolerance: f64) -> Result<Constants> {
    if !(tolerance >= MIN_TOLERANCE) {
        return Err(Error::Precision { target: tolerance, achieved: MIN_TOLERANCE });
    }
    let z = zeta(2.0)?;
    let zp = zeta_derivative(2.0)?;
    let g = digamma(1.0)?;
    let bound = z.bound.max(zp.bound).max(g.bound);
    if bound > tolerance {
        return Err(Error::Precision { target: tolerance, achieved: bound });
    }
    Ok(Constants { zeta2: z.value, zeta2_prime: zp.value, euler_gamma: -g.value, error_bound: bound })
}

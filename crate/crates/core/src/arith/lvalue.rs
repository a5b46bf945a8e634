use crate::arith::characters::DirichletCharacter;
use crate::arith::prime_divisors;
use crate::arith::special::{digamma, hurwitz_zeta, zeta};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `L(s, χ)` for real `s ≥ 1`, certified to absolute tolerance `tol`.
///
/// Non-principal characters use `L(s,χ) = k^{-s} Σ_a χ(a) ζ(s, a/k)` for
/// `s > 1` and `L(1,χ) = -(1/k) Σ_a χ(a) ψ(a/k)` at `s = 1`.
pub fn l_value(s: f64, chi: &DirichletCharacter, tol: f64) -> Result<Complex64> {
    let (v, bound) = l_value_certified(s, chi)?;
    if bound > tol {
        return Err(Error::Precision { target: tol, achieved: bound });
    }
    Ok(v)
}

/// The value and its certified absolute error bound.
pub fn l_value_certified(s: f64, chi: &DirichletCharacter) -> Result<(Complex64, f64)> {
    if !(s >= 1.0) {
        return Err(Error::Domain(format!("L-values are only provided for s >= 1, got {s}")));
    }
    let k = chi.modulus();
    if chi.is_principal() {
        if s == 1.0 {
            return Err(Error::Domain("L(s, chi0) has a pole at s = 1".into()));
        }
        let z = zeta(s)?;
        let euler: f64 = prime_divisors(k).iter().map(|&p| 1.0 - (p as f64).powf(-s)).product();
        return Ok((Complex64::new(z.value * euler, 0.0), z.bound * euler + 4.0 * f64::EPSILON * z.value));
    }
    let kf = k as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut magnitude = 0.0;
    for a in 1..k {
        let c = chi.value(a);
        if c.norm() == 0.0 {
            continue;
        }
        let term = if s == 1.0 { digamma(a as f64 / kf)? } else { hurwitz_zeta(s, a as f64 / kf)? };
        total += c * term.value;
        bound += term.bound;
        magnitude += term.value.abs();
    }
    let scale = if s == 1.0 { -1.0 / kf } else { kf.powf(-s) };
    // Cancellation between the per-residue terms costs relative accuracy
    // proportional to their total magnitude.
    let rounding = 8.0 * f64::EPSILON * magnitude * scale.abs() * (k as f64).sqrt();
    Ok((total * scale, bound * scale.abs() + rounding))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::characters::character_group;
    use crate::arith::special::constants;
    use std::f64::consts::PI;

    #[test]
    fn leibniz_series_oracle() {
        // Average of consecutive partial sums of 1 - 1/3 + 1/5 - … converges fast.
        let n = 2_000_000u64;
        let mut partial = 0.0;
        let mut prev = 0.0;
        for j in 0..n {
            prev = partial;
            let t = 1.0 / (2 * j + 1) as f64;
            partial += if j % 2 == 0 { t } else { -t };
        }
        let oracle = 0.5 * (partial + prev);
        let chi = &character_group(4).unwrap()[1];
        let v = l_value(1.0, chi, 1e-10).unwrap();
        assert!((v.re - oracle).abs() < 1e-12 && v.im.abs() < 1e-15);
        assert!((v.re - PI / 4.0).abs() < 1e-13);
    }

    #[test]
    fn principal_values() {
        let chi1 = &character_group(1).unwrap()[0];
        let z2 = l_value(2.0, chi1, 1e-12).unwrap().re;
        assert!(((z2 - constants(1e-13).unwrap().zeta2) / z2).abs() < 1e-12);
        let chi2 = &character_group(2).unwrap()[0];
        let v = l_value(3.0, chi2, 1e-12).unwrap().re;
        let z3 = zeta(3.0).unwrap().value;
        assert!((v - z3 * (1.0 - 0.125)).abs() < 1e-14);
        assert!(matches!(l_value(1.0, chi1, 1e-10), Err(Error::Domain(_))));
        assert!(matches!(l_value(0.5, chi1, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn direct_series_oracle_for_complex_characters() {
        // Truncated Dirichlet series at s = 2 plus a crude tail bound of 1/M.
        for k in [5u64, 7, 12, 13] {
            for chi in character_group(k).unwrap().iter().filter(|c| !c.is_principal()) {
                let m = 200_000u64;
                let direct: Complex64 = (1..=m).map(|n| chi.value(n) / (n as f64 * n as f64)).sum();
                let v = l_value(2.0, chi, 1e-12).unwrap();
                assert!((v - direct).norm() < 1.0 / m as f64, "k={k}");
            }
        }
    }

    #[test]
    fn l_one_agrees_with_period_grouped_sums() {
        // Σ_{n ≤ Mk} χ(n)/n, grouped in full periods, with the Abel-summation
        // tail bound k/(Mk).
        for k in [3u64, 5, 8, 11] {
            for chi in character_group(k).unwrap().iter().filter(|c| !c.is_principal()) {
                let periods = 100_000u64;
                let direct: Complex64 = (1..=periods * k).map(|n| chi.value(n) / n as f64).sum();
                let v = l_value(1.0, chi, 1e-10).unwrap();
                assert!((v - direct).norm() < 1.0 / periods as f64, "k={k}");
            }
        }
    }
}

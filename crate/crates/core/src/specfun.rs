//! Real-order special functions underpinning the kernel quadrature: the gamma
//! function, Bessel functions of the first kind of real order `ν > −1`, and
//! the radial multiplier `m_ν(s) = 2^ν Γ(ν+1) J_ν(s) / s^ν`.
//!
//! `J_ν` switches between the ascending power series and a Hankel-type
//! amplitude/phase asymptotic expansion at a per-order crossover
//! `max(series_crossover, 2|ν|)`; the two branches are checked against each
//! other at the splice in the test suite.

use crate::error::{Error, Result};

/// Accuracy policy for the special-function evaluators.
#[derive(Debug, Clone, Copy)]
pub struct SpecFunAccuracy {
    /// Target relative tolerance. Must lie in (0, 1e-8].
    pub rel_tol: f64,
    /// Argument threshold between power-series and asymptotic regimes.
    pub series_crossover: f64,
}

impl SpecFunAccuracy {
    pub fn new(rel_tol: f64, series_crossover: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-8) {
            return Err(Error::domain("rel_tol must lie in (0, 1e-8]"));
        }
        if !(series_crossover > 0.0) {
            return Err(Error::domain("series_crossover must be positive"));
        }
        Ok(SpecFunAccuracy {
            rel_tol,
            series_crossover,
        })
    }
}

impl Default for SpecFunAccuracy {
    fn default() -> Self {
        SpecFunAccuracy {
            rel_tol: 1e-12,
            series_crossover: 12.0,
        }
    }
}

const DEFAULT_ACC: SpecFunAccuracy = SpecFunAccuracy {
    rel_tol: 1e-12,
    series_crossover: 12.0,
};

// Lanczos coefficients for g = 7, n = 9 (GSL / Godfrey values).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// sin(πx) with exact-integer zeros, accurate for large |x|.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let k = x.round();
    let r = x - k;
    let s = (std::f64::consts::PI * r).sin();
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.5 && (x - x.round()).abs() < 1e-12 && x.round() <= 0.0
}

/// Gamma function for real non-pole arguments.
///
/// Lanczos rational approximation on (0.5, ∞), reflection formula below.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("gamma: non-finite argument"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::domain(format!("gamma: pole at x = {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) Γ(1-x) = π / sin(πx)
        std::f64::consts::PI / (sin_pi(x) * gamma_unchecked(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let w = z + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * w.powf(z + 0.5) * (-w).exp() * acc
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("ln_gamma requires x > 0"));
    }
    if x < 0.5 {
        // ln Γ(x) = ln π − ln sin(πx) − ln Γ(1−x); x ∈ (0, 0.5) keeps sin positive.
        return Ok(std::f64::consts::PI.ln()
            - (sin_pi(x)).ln()
            - ln_gamma_core(1.0 - x));
    }
    Ok(ln_gamma_core(x))
}

fn ln_gamma_core(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let w = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * w.ln() - w + acc.ln()
}

/// Per-order crossover between the series and asymptotic branches of `J_ν`.
pub fn bessel_crossover(acc: &SpecFunAccuracy, nu: f64) -> f64 {
    acc.series_crossover.max(2.0 * nu.abs())
}

/// Bessel function of the first kind, real order `ν > −1`, argument `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    bessel_j_with(&DEFAULT_ACC, nu, x)
}

pub fn bessel_j_with(acc: &SpecFunAccuracy, nu: f64, x: f64) -> Result<f64> {
    if !(nu > -1.0) {
        return Err(Error::domain("bessel_j requires order > -1"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("bessel_j requires x >= 0"));
    }
    if x == 0.0 {
        if nu == 0.0 {
            return Ok(1.0);
        }
        if nu > 0.0 {
            return Ok(0.0);
        }
        return Err(Error::domain("bessel_j diverges at x = 0 for order < 0"));
    }
    if x <= bessel_crossover(acc, nu) {
        Ok(bessel_j_series(nu, x))
    } else {
        Ok(bessel_j_asymptotic(nu, x))
    }
}

/// Ascending series with Neumaier-compensated summation.
pub(crate) fn bessel_j_series(nu: f64, x: f64) -> f64 {
    let h = 0.5 * x;
    let q = h * h;
    // first term (x/2)^ν / Γ(ν+1)
    let mut term = h.powf(nu) / gamma_unchecked(nu + 1.0);
    let mut sum = term;
    let mut comp = 0.0_f64;
    let mut max_abs = term.abs();
    let mut k = 0usize;
    loop {
        k += 1;
        term *= -q / (k as f64 * (nu + k as f64));
        let t = term;
        let s = sum + t;
        // Neumaier correction
        comp += if sum.abs() >= t.abs() {
            (sum - s) + t
        } else {
            (t - s) + sum
        };
        sum = s;
        max_abs = max_abs.max(t.abs());
        if (t.abs() <= 1e-18 * max_abs && k as f64 > 0.5 * x + 8.0) || k > 500 {
            break;
        }
    }
    sum + comp
}

/// Hankel asymptotic amplitude coefficients `a_k(ν)`,
/// `a_k = Π_{m=1..k} (4ν² − (2m−1)²) / (8^k k!)`.
pub(crate) fn hankel_coeffs(nu: f64, n: usize) -> Vec<f64> {
    let mu = 4.0 * nu * nu;
    let mut a = Vec::with_capacity(n + 1);
    a.push(1.0);
    for k in 1..=n {
        let m = (2 * k - 1) as f64;
        let prev = a[k - 1];
        a.push(prev * (mu - m * m) / (8.0 * k as f64));
    }
    a
}

fn bessel_j_asymptotic(nu: f64, x: f64) -> f64 {
    // Terms a_k/x^k of the Hankel expansion can grow before the asymptotic
    // decay sets in (large ν at moderate x); truncate at the global minimum.
    let a = hankel_coeffs(nu, 30);
    let mut terms = Vec::with_capacity(a.len());
    let mut pw = 1.0; // x^{-k}
    for ak in &a {
        terms.push(ak * pw);
        pw /= x;
    }
    let mut cutoff = terms.len();
    let mut min_abs = f64::INFINITY;
    for (k, t) in terms.iter().enumerate() {
        if t.abs() < min_abs {
            min_abs = t.abs();
            cutoff = k;
        }
        if t.abs() < 1e-19 {
            break;
        }
    }
    let mut p = 0.0;
    let mut q = 0.0;
    for (k, term) in terms.iter().enumerate().take(cutoff.max(1)) {
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
    }
    let chi = x - (0.5 * nu + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Radial Fourier multiplier `m_ν(s) = 2^ν Γ(ν+1) J_ν(s)/s^ν`, continuous at
/// `s = 0` with value 1. Requires `ν > −1/2`.
pub fn multiplier_m(nu: f64, s: f64) -> Result<f64> {
    multiplier_m_with(&DEFAULT_ACC, nu, s)
}

pub fn multiplier_m_with(acc: &SpecFunAccuracy, nu: f64, s: f64) -> Result<f64> {
    if !(nu > -0.5) {
        return Err(Error::domain("multiplier_m requires order > -1/2"));
    }
    if !(s >= 0.0) {
        return Err(Error::domain("multiplier_m requires s >= 0"));
    }
    if s <= bessel_crossover(acc, nu) {
        // m(s) = Σ_k (−1)^k (s²/4)^k / (k! (ν+1)_k)
        let q = 0.25 * s * s;
        let mut term = 1.0_f64;
        let mut sum = 1.0_f64;
        let mut k = 0usize;
        loop {
            k += 1;
            term *= -q / (k as f64 * (nu + k as f64));
            sum += term;
            if term.abs() <= 1e-17 * (1.0 + sum.abs()) && k as f64 > 0.5 * s + 8.0 {
                break;
            }
            if k > 600 {
                break;
            }
        }
        Ok(sum)
    } else {
        // log-space normalization keeps (s/2)^{-ν} Γ(ν+1) overflow-safe
        let factor = (nu * (2.0f64.ln() - s.ln()) + ln_gamma(nu + 1.0)?).exp();
        Ok(factor * bessel_j_with(acc, nu, s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.7724538509055160273;

    #[test]
    fn gamma_known_values() {
        assert!((gamma(0.5).unwrap() - SQRT_PI).abs() < 1e-14);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma(-0.5).unwrap() + 2.0 * SQRT_PI).abs() < 1e-13);
    }

    #[test]
    fn gamma_rejects_poles() {
        for x in [0.0, -1.0, -2.0, -7.0] {
            assert!(gamma(x).is_err(), "expected pole at {x}");
        }
    }

    #[test]
    fn gamma_recurrence_residual() {
        // Γ(x+1) = x Γ(x) on a deterministic scan of (−5, 20) avoiding poles.
        let mut worst = 0.0_f64;
        let mut v = -4.987_f64;
        while v < 20.0 {
            if (v - v.round()).abs() > 1e-3 && (v + 1.0 - (v + 1.0).round()).abs() > 1e-3 {
                let lhs = gamma(v + 1.0).unwrap();
                let rhs = v * gamma(v).unwrap();
                worst = worst.max(((lhs - rhs) / lhs).abs());
            }
            v += 0.0173;
        }
        assert!(worst < 1e-12, "recurrence residual {worst:e}");
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for x in [0.2, 0.7, 1.0, 2.5, 10.0, 35.5] {
            let a = ln_gamma(x).unwrap();
            let b = gamma(x).unwrap().ln();
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "x={x}");
        }
    }

    #[test]
    fn bessel_trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(2.0, 0.0).unwrap(), 0.0);
        // J_{1/2}(π) = sqrt(2/(π·π)) sin(π) = 0
        assert!(bessel_j(0.5, std::f64::consts::PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn bessel_domain_errors() {
        assert!(bessel_j(-1.0, 1.0).is_err());
        assert!(bessel_j(0.5, -1.0).is_err());
        assert!(bessel_j(-0.5, 0.0).is_err());
    }

    #[test]
    fn bessel_j1_at_1_vs_series_oracle() {
        // Frozen from the 60-term extended-precision ascending series oracle
        // in the integration test suite.
        let oracle = 0.44005058574493351;
        assert!((bessel_j(1.0, 1.0).unwrap() - oracle).abs() < 1e-13);
    }

    fn closed_half_integer(nu: f64, x: f64) -> f64 {
        let c = (2.0 / (std::f64::consts::PI * x)).sqrt();
        if nu == -0.5 {
            c * x.cos()
        } else if nu == 0.5 {
            c * x.sin()
        } else {
            // ν = 3/2
            c * (x.sin() / x - x.cos())
        }
    }

    #[test]
    fn bessel_half_integer_closed_forms() {
        for &nu in &[-0.5, 0.5, 1.5] {
            let mut x = 0.1_f64;
            while x <= 100.0 {
                let v = bessel_j(nu, x).unwrap();
                let c = closed_half_integer(nu, x);
                let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
                if c.abs() > 1e-3 * amp {
                    assert!(
                        ((v - c) / c).abs() < 1e-10,
                        "nu={nu} x={x} v={v} c={c}"
                    );
                } else {
                    assert!((v - c).abs() < 1e-12, "near-zero nu={nu} x={x}");
                }
                x *= 1.0837;
            }
        }
    }

    #[test]
    fn bessel_branch_splice() {
        let acc = SpecFunAccuracy::default();
        for &nu in &[-0.9, -0.5, 0.0, 0.5, 1.0, 2.7, 10.0] {
            let xc = bessel_crossover(&acc, nu);
            let s = bessel_j_series(nu, xc);
            let a = bessel_j_asymptotic(nu, xc);
            let amp = (2.0 / (std::f64::consts::PI * xc)).sqrt();
            assert!(
                (s - a).abs() < 1e-9 * amp.max(s.abs()),
                "splice nu={nu}: series {s} vs asymptotic {a}"
            );
        }
    }

    #[test]
    fn multiplier_limits_and_zero() {
        assert!((multiplier_m(0.5, 1e-8).unwrap() - 1.0).abs() < 1e-9);
        assert!(multiplier_m(0.5, std::f64::consts::PI).unwrap().abs() < 1e-14);
        assert_eq!(multiplier_m(1.3, 0.0).unwrap(), 1.0);
        assert!(multiplier_m(-0.5, 1.0).is_err());
    }

    #[test]
    fn multiplier_composes_gamma_and_bessel() {
        // Independent route: direct 2^ν Γ(ν+1) J_ν(s)/s^ν composition.
        let (nu, s) = (1.3, 7.2);
        let direct =
            2f64.powf(nu) * gamma(nu + 1.0).unwrap() * bessel_j(nu, s).unwrap() / s.powf(nu);
        let m = multiplier_m(nu, s).unwrap();
        assert!((m - direct).abs() < 1e-12 * (1.0 + direct.abs()));
    }

    #[test]
    fn multiplier_bounded_by_one() {
        for &nu in &[0.0, 0.5, 1.3, 3.0] {
            let mut s = 0.0_f64;
            while s <= 200.0 {
                let m = multiplier_m(nu, s).unwrap();
                assert!(m.abs() <= 1.0 + 1e-10, "nu={nu} s={s} m={m}");
                s += 0.1;
            }
        }
    }

    #[test]
    fn accuracy_invariants_enforced() {
        assert!(SpecFunAccuracy::new(1e-7, 10.0).is_err());
        assert!(SpecFunAccuracy::new(0.0, 10.0).is_err());
        assert!(SpecFunAccuracy::new(1e-10, 0.0).is_err());
        assert!(SpecFunAccuracy::new(1e-10, 14.0).is_ok());
    }
}

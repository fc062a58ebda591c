//! Numerical evaluation of the transform kernel
//!
//! `K_t(x,z) = 2^{α+β} Γ(α+β+1) / (t^{α+β} (xz)^α) ·
//!             ∫_0^∞ J_{α+β}(ty) J_α(xy) J_α(zy) y^{1−α−β} dy`.
//!
//! The integral converges absolutely only for `α+β > 1/2`; otherwise the tail
//! converges conditionally through oscillation cancellation. The head
//! `[0, Y]` is integrated adaptively; the tail is summed either by
//! semi-analytic frequency-component resolution or by period averaging of
//! partial integrals (see [`crate::osc`]).

use crate::error::{Error, Result};
use crate::osc::{self, BesselFactor};
use crate::quad;
use crate::specfun;

use super::{Params, QuadSpec, TailStrategy};

/// The normalized kernel value `K_t(x, z)`.
///
/// Points inside the singular band around `t = |x−z|` or `t = x+z` are
/// refused; the envelopes carry the analysis there.
pub fn kernel_quadrature(p: &Params, t: f64, x: f64, z: f64, q: &QuadSpec) -> Result<f64> {
    if !(t > 0.0 && x > 0.0 && z > 0.0) {
        return Err(Error::domain("kernel_quadrature requires t, x, z > 0"));
    }
    q.validate()?;
    if q.in_singular_band(t, x, z) {
        return Err(Error::domain(format!(
            "({t}, {x}, {z}) lies in the singular band; use the envelopes"
        )));
    }
    let nu = p.nu();
    let prefactor = (nu * 2.0_f64.ln() + specfun::ln_gamma(nu + 1.0)?).exp()
        / (t.powf(nu) * (x * z).powf(p.alpha));
    let integral = triple_bessel_integral(p, t, x, z, q)?;
    Ok(prefactor * integral)
}

/// `∫_0^∞ J_{α+β}(ty) J_α(xy) J_α(zy) y^{1−α−β} dy`.
pub fn triple_bessel_integral(p: &Params, t: f64, x: f64, z: f64, q: &QuadSpec) -> Result<f64> {
    let nu = p.nu();
    let alpha = p.alpha;
    let g = move |y: f64| -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let jt = specfun::bessel_j(nu, t * y).unwrap_or(0.0);
        let jx = specfun::bessel_j(alpha, x * y).unwrap_or(0.0);
        let jz = specfun::bessel_j(alpha, z * y).unwrap_or(0.0);
        y.powf(1.0 - nu) * jt * jx * jz
    };

    match q.tail {
        TailStrategy::SemiAnalytic => semianalytic(p, t, x, z, q, &g),
        TailStrategy::PeriodAveraging => averaging(p, t, x, z, q, &g),
        TailStrategy::Auto => match semianalytic(p, t, x, z, q, &g) {
            Ok(v) => Ok(v),
            Err(first) => averaging(p, t, x, z, q, &g).map_err(|_| first),
        },
    }
}

fn sorted_factors(p: &Params, t: f64, x: f64, z: f64) -> [BesselFactor; 3] {
    let mut f = [
        BesselFactor {
            nu: p.nu(),
            scale: t,
        },
        BesselFactor {
            nu: p.alpha,
            scale: x,
        },
        BesselFactor {
            nu: p.alpha,
            scale: z,
        },
    ];
    f.sort_by(|a, b| b.scale.partial_cmp(&a.scale).unwrap());
    f
}

fn head<F: Fn(f64) -> f64>(p: &Params, g: &F, y_tail: f64, omega: f64, tol: f64) -> Result<(f64, f64)> {
    // the integrand behaves like y^{1+2α} at the origin
    let gamma0 = 1.0 + 2.0 * p.alpha;
    let y_break = (0.5 * std::f64::consts::PI / omega).min(0.5 * y_tail);
    let (h0, e0) = quad::algebraic(g, 0.0, y_break, gamma0, 0.0, &[], 0.2 * tol, 1e-12)?;
    let (h1, e1) = quad::oscillatory(g, y_break, y_tail, omega, 0.5 * tol, 1e-12)?;
    Ok((h0 + h1, e0 + e1))
}

fn semianalytic<F: Fn(f64) -> f64>(
    p: &Params,
    t: f64,
    x: f64,
    z: f64,
    q: &QuadSpec,
    g: &F,
) -> Result<f64> {
    let f = sorted_factors(p, t, x, z);
    let y_tail = q
        .head_cutoff
        .max(osc::asymptotic_threshold(f[0].nu) / f[0].scale)
        .max(osc::asymptotic_threshold(f[1].nu) / f[1].scale);
    let omega_sum = t + x + z;
    let (head_v, head_e) = head(p, g, y_tail, omega_sum, q.abs_tol)?;
    let (tail_v, tail_e) = osc::triple_bessel_tail(&f, 1.0 - p.nu(), y_tail, q.abs_tol)?;
    let value = head_v + tail_v;
    let err = head_e + tail_e;
    if err.is_finite() && err <= 20.0 * q.abs_tol.max(1e-13 * value.abs()) {
        Ok(value)
    } else {
        Err(Error::accuracy(
            "kernel tail error estimate above tolerance",
            value,
            err,
        ))
    }
}

fn averaging<F: Fn(f64) -> f64>(
    p: &Params,
    t: f64,
    x: f64,
    z: f64,
    q: &QuadSpec,
    g: &F,
) -> Result<f64> {
    let f = sorted_factors(p, t, x, z);
    let omega_sum = t + x + z;
    // all three factors must genuinely oscillate before partial integrals
    // between zeros of the dominant oscillation can be averaged
    let y0 = q.head_cutoff.max(12.0 / f[2].scale);
    let (head_v, head_e) = head(p, g, y0, omega_sum, q.abs_tol)?;
    let mut freqs: Vec<f64> = [
        t + x + z,
        (t + x - z).abs(),
        (t - x + z).abs(),
        (t - x - z).abs(),
    ]
    .into_iter()
    .filter(|w| *w > 1e-12 * omega_sum)
    .collect();
    freqs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    freqs.dedup();
    let (tail_v, tail_e) =
        osc::tail_by_averaging(g, y0, &freqs, q.n_periods, q.abs_tol, 1 << 15)?;
    let value = head_v + tail_v;
    let err = head_e + tail_e;
    if err.is_finite() && err <= 50.0 * q.abs_tol {
        Ok(value)
    } else {
        Err(Error::accuracy(
            "period-averaged kernel tail above tolerance",
            value,
            err,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::envelope_psi;

    fn spec() -> QuadSpec {
        QuadSpec::default()
    }

    /// Closed form of the classical-means kernel (β = 0):
    /// `c_α (xz)^{−2α} t^{−2α} ([t²−(x−z)²][(x+z)²−t²])^{α−1/2}` on E, zero
    /// outside, with `c_α = 2^{1−2α} Γ(α+1)/(√π Γ(α+1/2))`.
    fn classical_kernel(alpha: f64, t: f64, x: f64, z: f64) -> f64 {
        if t <= (x - z).abs() || t >= x + z {
            return 0.0;
        }
        let c = 2f64.powf(1.0 - 2.0 * alpha) * specfun::gamma(alpha + 1.0).unwrap()
            / (std::f64::consts::PI.sqrt() * specfun::gamma(alpha + 0.5).unwrap());
        let br = (t * t - (x - z) * (x - z)) * ((x + z) * (x + z) - t * t);
        c * (x * z).powf(-2.0 * alpha) * t.powf(-2.0 * alpha) * br.powf(alpha - 0.5)
    }

    #[test]
    fn classical_point_value() {
        let p = Params::new(0.5, 0.0).unwrap();
        let k = kernel_quadrature(&p, 1.0, 1.0, 1.0, &spec()).unwrap();
        assert!((k - 0.5).abs() < 1e-8, "got {k}");
    }

    #[test]
    fn classical_closed_form_across_regimes() {
        for &alpha in &[0.0, 0.5, 1.5] {
            let p = Params::new(alpha, 0.0).unwrap();
            for &(t, x, z) in &[
                (1.0, 1.0, 0.7),
                (0.4, 1.0, 1.2),
                (2.3, 1.7, 0.9),
                (1.1, 0.6, 1.5),
            ] {
                let k = kernel_quadrature(&p, t, x, z, &spec()).unwrap();
                let c = classical_kernel(alpha, t, x, z);
                assert!(
                    (k - c).abs() < 2e-7 * (1.0 + c.abs()),
                    "alpha={alpha} t={t} x={x} z={z}: {k} vs {c}"
                );
            }
        }
    }

    #[test]
    fn vanishes_outside_support() {
        let p = Params::new(0.7, 0.4).unwrap();
        let k = kernel_quadrature(&p, 0.5, 2.0, 1.0, &spec()).unwrap();
        assert!(k.abs() < 1e-8, "Null-region kernel {k}");
        let p2 = Params::new(1.0, -1.0).unwrap();
        let k2 = kernel_quadrature(&p2, 10.0, 1.0, 2.0, &spec()).unwrap();
        assert!(k2.abs() < 1e-8, "vanishing F-branch kernel {k2}");
    }

    #[test]
    fn symmetric_in_x_z() {
        let p = Params::new(0.3, 0.2).unwrap();
        let a = kernel_quadrature(&p, 1.3, 0.8, 1.6, &spec()).unwrap();
        let b = kernel_quadrature(&p, 1.3, 1.6, 0.8, &spec()).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn band_refusal() {
        let p = Params::new(0.5, 0.0).unwrap();
        let mut q = spec();
        q.singular_band = 1e-3;
        assert!(kernel_quadrature(&p, 2.0 + 1e-5, 1.0, 1.0, &q).is_err());
    }

    #[test]
    fn tail_strategies_agree() {
        for (a, b) in [(0.5, 0.0), (0.3, 0.2), (1.0, -0.4), (-0.3, 0.5)] {
            let p = Params::new(a, b).unwrap();
            let qs = spec().with_tail(TailStrategy::SemiAnalytic);
            let qa = spec().with_tail(TailStrategy::PeriodAveraging);
            for &(t, x, z) in &[(1.0, 0.9, 0.5), (3.1, 1.0, 1.4), (6.0, 1.0, 2.0)] {
                let vs = kernel_quadrature(&p, t, x, z, &qs).unwrap();
                let va = kernel_quadrature(&p, t, x, z, &qa).unwrap();
                assert!(
                    (vs - va).abs() < 5e-8 * (1.0 + vs.abs()),
                    "(α={a},β={b}) at ({t},{x},{z}): semi {vs} vs avg {va}"
                );
            }
        }
    }

    #[test]
    fn near_boundary_envelope_scale() {
        // close to the upper E edge the kernel follows the Ψ envelope scale
        let p = Params::new(0.0, 0.0).unwrap();
        let (t, x, z) = (1.995, 1.0, 1.0);
        let k = kernel_quadrature(&p, t, x, z, &spec()).unwrap();
        let psi = envelope_psi(&p, t, x, z);
        assert!(k.abs() <= 3.0 * psi, "k={k} psi={psi}");
        assert!(k.abs() >= 0.05 * psi, "k={k} psi={psi}");
    }

    #[test]
    fn small_t_matches_classical() {
        // small radii (deep E1) keep the multiplier factor pre-asymptotic
        let p = Params::new(0.5, 0.0).unwrap();
        let (t, x) = (1e-3, 1.0);
        for &z in &[1.0 - 5e-4, 1.0, 1.0 + 5e-4] {
            let k = kernel_quadrature(&p, t, x, z, &spec()).unwrap();
            let c = classical_kernel(0.5, t, x, z);
            assert!(
                (k - c).abs() < 1e-6 * c.abs(),
                "z={z}: {k} vs {c}"
            );
        }
    }
}

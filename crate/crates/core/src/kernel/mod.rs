//! Kernel of the generalized spherical-mean transform: region geometry of the
//! `(t, x, z)` space, numerical kernel evaluation, explicit envelopes and the
//! per-case upper bounds.

mod quadrature;

pub use quadrature::{kernel_quadrature, triple_bessel_integral};

use crate::error::{Error, Result};

/// Tolerance for detecting the measure-zero parameter lines of the case
/// taxonomy (`−β ∈ ℕ`, `α + 1/2 ∈ ℕ`, `α+β = 1/2`, ...).
pub const PARAM_LINE_TOL: f64 = 1e-12;

/// The transform parameters `(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
}

impl Params {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::domain("Params requires alpha > -1"));
        }
        if !(alpha + beta > -0.5) {
            return Err(Error::domain("Params requires alpha + beta > -1/2"));
        }
        Ok(Params { alpha, beta })
    }

    /// Bessel order of the multiplier, `ν = α + β`.
    pub fn nu(&self) -> f64 {
        self.alpha + self.beta
    }

    /// `−β ∈ ℕ = {0, 1, 2, ...}` up to the parameter-line tolerance.
    pub fn minus_beta_is_natural(&self) -> bool {
        let v = -self.beta;
        v > -PARAM_LINE_TOL && (v - v.round()).abs() < PARAM_LINE_TOL
    }

    /// `α + 1/2 ∈ ℕ` up to the parameter-line tolerance.
    pub fn alpha_plus_half_is_natural(&self) -> bool {
        let v = self.alpha + 0.5;
        v > -PARAM_LINE_TOL && (v - v.round()).abs() < PARAM_LINE_TOL
    }

    fn beta_is_one(&self) -> bool {
        (self.beta - 1.0).abs() < PARAM_LINE_TOL
    }

    fn two_alpha_plus_beta_is_zero(&self) -> bool {
        (2.0 * self.alpha + self.beta).abs() < PARAM_LINE_TOL
    }
}

/// Classification of a triple `(t, x, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Null,
    E1,
    E2,
    E3,
    F1,
    F2prime,
    F2doubleprime,
    Boundary,
}

impl Region {
    pub fn is_e(&self) -> bool {
        matches!(self, Region::E1 | Region::E2 | Region::E3)
    }

    pub fn is_f(&self) -> bool {
        matches!(self, Region::F1 | Region::F2prime | Region::F2doubleprime)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Null => "Null",
            Region::E1 => "E1",
            Region::E2 => "E2",
            Region::E3 => "E3",
            Region::F1 => "F1",
            Region::F2prime => "F2'",
            Region::F2doubleprime => "F2''",
            Region::Boundary => "Boundary",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classify `(t, x, z)` with a declared relative tolerance band around the
/// two singular surfaces `t = |x−z|` and `t = x+z`.
pub fn classify_region(t: f64, x: f64, z: f64, band: f64) -> Result<Region> {
    if !(t > 0.0 && x > 0.0 && z > 0.0) {
        return Err(Error::domain("classify_region requires t, x, z > 0"));
    }
    let scale = t + x + z;
    if (t - (x - z).abs()).abs() < band * scale || (t - (x + z)).abs() < band * scale {
        return Ok(Region::Boundary);
    }
    if t < (x - z).abs() {
        return Ok(Region::Null);
    }
    if t < x + z {
        if t < 0.5 * x {
            Ok(Region::E1)
        } else if t < 3.0 * x {
            Ok(Region::E2)
        } else {
            Ok(Region::E3)
        }
    } else if t < 3.0 * x {
        Ok(Region::F1)
    } else if z < 0.5 * (t - x) {
        Ok(Region::F2prime)
    } else {
        Ok(Region::F2doubleprime)
    }
}

/// Quadrature policy for kernel and transform evaluations.
#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Minimum extent of the adaptively integrated head in `y`.
    pub head_cutoff: f64,
    /// Oscillation periods averaged when reading off a conditional tail.
    pub n_periods: usize,
    /// Relative exclusion width around `t = |x−z|` and `t = x+z`.
    pub singular_band: f64,
    /// Tail summation strategy.
    pub tail: TailStrategy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailStrategy {
    /// Semi-analytic component integration, falling back to period averaging.
    Auto,
    SemiAnalytic,
    PeriodAveraging,
}

impl QuadSpec {
    pub fn new(abs_tol: f64, head_cutoff: f64, n_periods: usize, singular_band: f64) -> Result<Self> {
        let q = QuadSpec {
            abs_tol,
            head_cutoff,
            n_periods,
            singular_band,
            tail: TailStrategy::Auto,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::domain("QuadSpec.abs_tol must be positive"));
        }
        if !(self.head_cutoff > 0.0) {
            return Err(Error::domain("QuadSpec.head_cutoff must be positive"));
        }
        if self.n_periods < 4 {
            return Err(Error::domain("QuadSpec.n_periods must be at least 4"));
        }
        if !(self.singular_band > 0.0 && self.singular_band < 0.1) {
            return Err(Error::domain("QuadSpec.singular_band must lie in (0, 0.1)"));
        }
        Ok(())
    }

    pub fn with_tail(mut self, tail: TailStrategy) -> Self {
        self.tail = tail;
        self
    }

    /// Whether `(t,x,z)` falls inside the refused singular band.
    pub fn in_singular_band(&self, t: f64, x: f64, z: f64) -> bool {
        let scale = t + x + z;
        (t - (x - z).abs()).abs() < self.singular_band * scale
            || (t - (x + z)).abs() < self.singular_band * scale
    }
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            abs_tol: 1e-9,
            head_cutoff: 1.0,
            n_periods: 8,
            singular_band: 1e-7,
            tail: TailStrategy::Auto,
        }
    }
}

/// Strict-inequality region test used by the closed-form envelopes: exact
/// boundary points and the complement of `E ∪ F` both give zero.
fn strict_region(t: f64, x: f64, z: f64) -> Option<bool> {
    let d = (x - z).abs();
    if t > d && t < x + z {
        Some(true) // E
    } else if t > x + z {
        Some(false) // F
    } else {
        None
    }
}

/// Envelope `Φ`: `(xz)^{−α−1/2} t^{−2α−2β} [t²−(x−z)²]^{α+β−1/2}` on E,
/// `t^{−2α−2β} [t²−(x−z)²]^{β−1}` on F, zero elsewhere.
pub fn envelope_phi(p: &Params, t: f64, x: f64, z: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    match strict_region(t, x, z) {
        Some(true) => {
            (x * z).powf(-a - 0.5)
                * t.powf(-2.0 * a - 2.0 * b)
                * (t * t - (x - z) * (x - z)).powf(a + b - 0.5)
        }
        Some(false) => {
            t.powf(-2.0 * a - 2.0 * b) * (t * t - (x - z) * (x - z)).powf(b - 1.0)
        }
        None => 0.0,
    }
}

/// Envelope `Ψ`: on E the symmetric two-bracket form with exponent
/// `α+β−1/2`; on F `t^{−2α−2β} [t²−(x−z)²]^{−α−1/2} [t²−(x+z)²]^{α+β−1/2}`.
pub fn envelope_psi(p: &Params, t: f64, x: f64, z: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    match strict_region(t, x, z) {
        Some(true) => {
            let br = (t * t - (x - z) * (x - z)) * ((x + z) * (x + z) - t * t);
            (x * z).powf(-2.0 * a - b) * t.powf(-2.0 * a - 2.0 * b) * br.powf(a + b - 0.5)
        }
        Some(false) => {
            t.powf(-2.0 * a - 2.0 * b)
                * (t * t - (x - z) * (x - z)).powf(-a - 0.5)
                * (t * t - (x + z) * (x + z)).powf(a + b - 0.5)
        }
        None => 0.0,
    }
}

/// Case id of the kernel-estimate taxonomy for the given parameters.
pub fn case_id(p: &Params) -> u8 {
    let s = p.nu();
    if p.minus_beta_is_natural() {
        1
    } else if s > 0.5 + PARAM_LINE_TOL {
        if p.two_alpha_plus_beta_is_zero() {
            3
        } else {
            2
        }
    } else if (s - 0.5).abs() <= PARAM_LINE_TOL {
        if p.beta_is_one() {
            5
        } else {
            4
        }
    } else if p.beta_is_one() {
        7
    } else if p.alpha_plus_half_is_natural() {
        8
    } else {
        6
    }
}

/// Evaluate the case-specific kernel upper bound at `(t,x,z) ∈ E ∪ F`.
///
/// Returns the case id together with the right-hand-side value; for the
/// vanishing F-branch of case 1 the bound is exactly zero.
pub fn kernel_case_bound(p: &Params, t: f64, x: f64, z: f64) -> Result<(u8, f64)> {
    let in_e = match strict_region(t, x, z) {
        Some(v) => v,
        None => {
            return Err(Error::domain(
                "kernel_case_bound requires an interior point of E or F",
            ))
        }
    };
    let (a, b) = (p.alpha, p.beta);
    let s = a + b;
    let dm = t * t - (x - z) * (x - z); // > 0 on E ∪ F
    let dp = (x + z) * (x + z) - t * t; // > 0 on E, < 0 on F
    let id = case_id(p);
    let bound = match id {
        1 => {
            if in_e {
                (x * z).powf(-2.0 * a - b) * t.powf(-2.0 * s) * (dm * dp).powf(s - 0.5)
            } else {
                0.0
            }
        }
        2 => {
            if in_e {
                (x * z).powf(-a - 0.5) * t.powf(-2.0 * s) * dm.powf(s - 0.5)
            } else {
                t.powf(-2.0 * s) * dm.powf(b - 1.0)
            }
        }
        3 => t.powf(2.0 * a) * (dm * dp.abs()).powf(-a - 0.5),
        4 => {
            if in_e {
                (x * z).powf(-a - 0.5) / t * (8.0 * x * z / dp).ln()
            } else {
                dm.powf(-a - 0.5) / t * (2.0 * dm / (-dp)).ln()
            }
        }
        5 => 1.0 / t,
        6 => {
            if in_e {
                (x * z).powf(-2.0 * a - b) * t.powf(-2.0 * s) * (dm * dp).powf(s - 0.5)
            } else {
                t.powf(-2.0 * s) * dm.powf(-a - 0.5) * (-dp).powf(s - 0.5)
            }
        }
        7 => {
            if in_e {
                (x * z).powf(-2.0 * a - 1.0)
                    * t.powf(-2.0 * a - 2.0)
                    * (dm * dp).powf(a + 0.5)
            } else {
                t.powf(-2.0 * a - 2.0)
            }
        }
        8 => {
            if in_e {
                (x * z).powf(-a - 0.5) * t.powf(-2.0 * s) * dm.powf(s - 0.5)
            } else {
                t.powf(-2.0 * s) * dm.powf(-a - 0.5) * (-dp).powf(s - 0.5)
            }
        }
        _ => unreachable!(),
    };
    Ok((id, bound))
}

/// One comparability relation `lhs ≃ rhs` (or `lhs ≲ rhs`) valid in a region.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub id: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub two_sided: bool,
}

fn rel(id: &'static str, lhs: f64, rhs: f64, two_sided: bool) -> RelationCheck {
    RelationCheck {
        id,
        lhs,
        rhs,
        ratio: lhs / rhs,
        two_sided,
    }
}

/// Evaluate both sides of every comparability relation applicable at
/// `(t,x,z)`; points outside `E ∪ F` (or in the exact-boundary set) give an
/// empty report.
pub fn region_relations_report(t: f64, x: f64, z: f64) -> Vec<RelationCheck> {
    let region = match classify_region(t, x, z, 1e-12) {
        Ok(r) => r,
        Err(_) => return Vec::new(),
    };
    let dm = t * t - (x - z) * (x - z);
    let dpn = (x + z) * (x + z) - t * t; // positive on E
    let mut out = Vec::new();
    match region {
        Region::E1 => {
            out.push(rel("e1_x_vs_z", x, z, true));
        }
        Region::E2 => {
            out.push(rel("e2_bracket_vs_tz", dm, t * z, false));
        }
        Region::E3 => {
            out.push(rel("e3_bracket_vs_tx", dm, t * x, false));
            out.push(rel("e3_z_vs_t", z, t, true));
        }
        Region::F1 => {
            out.push(rel("f1_bracket_vs_x_tmx", dm, x * (t - x), true));
            out.push(rel("f1_bracket_vs_x_tmxpz", dm, x * (t - x + z), true));
            out.push(rel("f1_cobracket_vs_x_tmxmz", -dpn, x * (t - x - z), true));
        }
        Region::F2prime | Region::F2doubleprime => {
            out.push(rel("f2_bracket_vs_t_tpxmz", dm, t * (t + x - z), true));
            out.push(rel("f2_cobracket_vs_t_tmxmz", -dpn, t * (t - x - z), true));
            if region == Region::F2prime {
                out.push(rel("f2p_bracket_vs_t2", dm, t * t, true));
                out.push(rel("f2p_cobracket_vs_t2", -dpn, t * t, true));
            } else {
                out.push(rel("f2pp_z_vs_t", z, t, true));
                out.push(rel("f2pp_tmx_vs_t", t - x, t, true));
                out.push(rel("f2pp_tmxpz_vs_t", t - x + z, t, true));
                out.push(rel("f2pp_tpxmz_vs_tmz", t + x - z, t - z, true));
            }
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_gates() {
        assert!(Params::new(-1.0, 2.0).is_err());
        assert!(Params::new(0.0, -0.5).is_err());
        assert!(Params::new(-0.9, 0.5).is_ok());
        let p = Params::new(1.0, -1.0).unwrap();
        assert!(p.minus_beta_is_natural());
        assert!(!p.alpha_plus_half_is_natural());
        let q = Params::new(0.5, 0.3).unwrap();
        assert!(!q.minus_beta_is_natural());
        assert!(q.alpha_plus_half_is_natural());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_region(0.3, 1.0, 1.0, 1e-9).unwrap(), Region::E1);
        assert_eq!(
            classify_region(10.0, 1.0, 2.0, 1e-9).unwrap(),
            Region::F2prime
        );
        assert_eq!(classify_region(0.5, 2.0, 1.0, 1e-9).unwrap(), Region::Null);
        assert_eq!(classify_region(1.5, 1.0, 1.0, 1e-9).unwrap(), Region::E2);
        assert_eq!(classify_region(3.5, 1.0, 1.0, 1e-9).unwrap(), Region::F1);
        assert_eq!(
            classify_region(10.0, 1.0, 5.0, 1e-9).unwrap(),
            Region::F2doubleprime
        );
        assert_eq!(classify_region(4.0, 1.0, 9.0, 1e-9).unwrap(), Region::E3);
        // boundary band
        assert_eq!(
            classify_region(2.0, 1.0, 1.0 + 1e-12, 1e-9).unwrap(),
            Region::Boundary
        );
        assert!(classify_region(0.0, 1.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn envelope_examples() {
        let p01 = Params::new(0.0, 1.0).unwrap();
        assert!((envelope_phi(&p01, 1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
        let ph = Params::new(0.5, 0.0).unwrap();
        assert!((envelope_phi(&ph, 1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((envelope_psi(&ph, 1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
        let p00 = Params::new(0.0, 0.0).unwrap();
        assert!((envelope_psi(&p00, 1.0, 1.0, 1.0) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        // Null triples give zero
        assert_eq!(envelope_phi(&p00, 0.5, 2.0, 1.0), 0.0);
        assert_eq!(envelope_psi(&p00, 0.5, 2.0, 1.0), 0.0);
    }

    #[test]
    fn case_dispatch() {
        let c = |a, b| case_id(&Params::new(a, b).unwrap());
        assert_eq!(c(0.5, 0.0), 1);
        assert_eq!(c(1.0, -1.0), 1);
        assert_eq!(c(0.5, 0.3), 2);
        assert_eq!(c(-0.7, 1.4), 3);
        assert_eq!(c(0.2, 0.3), 4);
        assert_eq!(c(-0.5, 1.0), 5);
        assert_eq!(c(0.3, -0.1), 6);
        assert_eq!(c(-0.8, 1.0), 7);
        assert_eq!(c(0.5, -0.2), 8);
    }

    #[test]
    fn case_bound_examples() {
        // (α=1/2, β=0) is a vanishing-β case: E-branch two-bracket form with
        // exponent zero collapses to (xz)^{-1} t^{-1}
        let p = Params::new(0.5, 0.0).unwrap();
        let (id, bound) = kernel_case_bound(&p, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(id, 1);
        assert!((bound - 1.0).abs() < 1e-14);
        // constant-comparable case: 1/t everywhere in E ∪ F
        let p5 = Params::new(-0.5, 1.0).unwrap();
        let (id5, b5) = kernel_case_bound(&p5, 4.0, 1.0, 1.0).unwrap();
        assert_eq!(id5, 5);
        assert!((b5 - 0.25).abs() < 1e-15);
        let (id2, b2) = kernel_case_bound(&Params::new(1.0, -0.5).unwrap(), 1.0, 1.0, 1.0)
            .unwrap();
        assert_eq!(id2, 2);
        let expect = 1f64.powf(-1.5) * 1f64.powf(-1.0) * 1f64.powf(0.0);
        assert!((b2 - expect).abs() < 1e-14);
        // Null point rejected
        assert!(kernel_case_bound(&p, 0.5, 2.0, 1.0).is_err());
    }

    #[test]
    fn relations_sample_points() {
        let r = region_relations_report(0.3, 1.0, 1.1);
        assert!(r.iter().any(|c| c.id == "e1_x_vs_z"));
        let c = &r[0];
        assert!(c.ratio > 1.0 / 3.0 && c.ratio < 3.0);

        let r = region_relations_report(10.0, 1.0, 2.0);
        let c = r.iter().find(|c| c.id == "f2p_bracket_vs_t2").unwrap();
        assert!(c.ratio > 1.0 / 9.0 && c.ratio <= 1.0);
        let c = r.iter().find(|c| c.id == "f2p_cobracket_vs_t2").unwrap();
        assert!(c.ratio > 1.0 / 9.0 && c.ratio <= 1.0);

        let r = region_relations_report(2.5, 1.0, 1.0);
        let c = r.iter().find(|c| c.id == "f1_bracket_vs_x_tmx").unwrap();
        assert!(c.ratio.is_finite() && c.ratio > 0.0);
    }
}

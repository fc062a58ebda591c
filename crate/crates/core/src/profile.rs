//! Piecewise-analytic radial profiles on `(0, ∞)`.
//!
//! A profile is a list of non-overlapping pieces, each an interval with a
//! formula tag. The JSON schema accepted by the CLI is
//!
//! ```json
//! {"pieces": [{"interval": [a, b], "kind": "const|power|powerlog|gaussian|indicator",
//!              "params": {...}}]}
//! ```
//!
//! with `b = null` allowed for a Gaussian piece extending to infinity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum PieceKind {
    Const {
        value: f64,
    },
    /// `coef · (z − center)^exponent`
    Power {
        coef: f64,
        center: f64,
        exponent: f64,
    },
    /// `coef · (z − center)^exponent / ln(log_scale / (z − center))`
    PowerLog {
        coef: f64,
        center: f64,
        exponent: f64,
        log_scale: f64,
    },
    /// `coef · exp(−((z − mu)/sigma)² / 2)`
    Gaussian {
        coef: f64,
        mu: f64,
        sigma: f64,
    },
    Indicator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub kind: PieceKind,
}

impl Piece {
    fn eval(&self, z: f64) -> f64 {
        match &self.kind {
            PieceKind::Const { value } => *value,
            PieceKind::Power {
                coef,
                center,
                exponent,
            } => {
                let d = z - center;
                if (exponent - exponent.round()).abs() < 1e-12 {
                    coef * d.powi(exponent.round() as i32)
                } else {
                    coef * d.powf(*exponent)
                }
            }
            PieceKind::PowerLog {
                coef,
                center,
                exponent,
                log_scale,
            } => {
                let d = z - center;
                coef * d.powf(*exponent) / (log_scale / d).ln()
            }
            PieceKind::Gaussian { coef, mu, sigma } => {
                let u = (z - mu) / sigma;
                coef * (-0.5 * u * u).exp()
            }
            PieceKind::Indicator => 1.0,
        }
    }

    fn validate(&self, idx: usize) -> Result<()> {
        let name = format!("piece {idx}");
        if !(self.lo >= 0.0) || !(self.hi > self.lo) {
            return Err(Error::domain(format!(
                "{name}: interval must satisfy 0 <= lo < hi"
            )));
        }
        match &self.kind {
            PieceKind::Power { center, exponent, .. } => {
                let frac = (exponent - exponent.round()).abs() >= 1e-12;
                if frac && *center > self.lo {
                    return Err(Error::domain(format!(
                        "{name}: fractional exponent requires center <= interval start"
                    )));
                }
                if self.hi.is_infinite() {
                    return Err(Error::domain(format!(
                        "{name}: power piece must have a finite interval"
                    )));
                }
            }
            PieceKind::PowerLog {
                center, log_scale, ..
            } => {
                if *center > self.lo {
                    return Err(Error::domain(format!(
                        "{name}: powerlog requires center <= interval start"
                    )));
                }
                if self.hi.is_infinite() || *log_scale <= self.hi - center {
                    return Err(Error::domain(format!(
                        "{name}: powerlog requires finite interval with log_scale > hi - center"
                    )));
                }
            }
            PieceKind::Gaussian { sigma, .. } => {
                if !(*sigma > 0.0) {
                    return Err(Error::domain(format!("{name}: sigma must be positive")));
                }
            }
            _ => {
                if self.hi.is_infinite() {
                    return Err(Error::domain(format!(
                        "{name}: only gaussian pieces may extend to infinity"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Local algebraic exponent contributed by the formula at one of its own
    /// interval edges (used to pick quadrature substitutions).
    fn edge_exponent(&self, at: f64) -> f64 {
        match &self.kind {
            PieceKind::Power {
                center, exponent, ..
            }
            | PieceKind::PowerLog {
                center, exponent, ..
            } => {
                if (at - center).abs() < 1e-300 || (at - center).abs() < 1e-12 * at.max(1.0) {
                    *exponent
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    }
}

/// A radial profile function, evaluable pointwise, zero off its pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pieces: Vec<Piece>,
    /// Declared local-L^p class of the profile, if any.
    pub integrability_class: Option<f64>,
}

impl Profile {
    pub fn new(mut pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::domain("profile needs at least one piece"));
        }
        for (i, p) in pieces.iter().enumerate() {
            p.validate(i)?;
        }
        pieces.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        for w in pieces.windows(2) {
            if w[1].lo < w[0].hi - 1e-15 * w[0].hi.max(1.0) {
                return Err(Error::domain(format!(
                    "pieces overlap near z = {}",
                    w[1].lo
                )));
            }
        }
        Ok(Profile {
            pieces,
            integrability_class: None,
        })
    }

    pub fn constant(value: f64, lo: f64, hi: f64) -> Self {
        Profile::new(vec![Piece {
            lo,
            hi,
            kind: PieceKind::Const { value },
        }])
        .expect("valid constant piece")
    }

    pub fn indicator(lo: f64, hi: f64) -> Self {
        Profile::new(vec![Piece {
            lo,
            hi,
            kind: PieceKind::Indicator,
        }])
        .expect("valid indicator piece")
    }

    /// Standard Gaussian profile `exp(−z²/2)` on `(0, ∞)`.
    pub fn gaussian_std() -> Self {
        Profile::new(vec![Piece {
            lo: 0.0,
            hi: f64::INFINITY,
            kind: PieceKind::Gaussian {
                coef: 1.0,
                mu: 0.0,
                sigma: 1.0,
            },
        }])
        .expect("valid gaussian piece")
    }

    pub fn power(coef: f64, center: f64, exponent: f64, lo: f64, hi: f64) -> Result<Self> {
        Profile::new(vec![Piece {
            lo,
            hi,
            kind: PieceKind::Power {
                coef,
                center,
                exponent,
            },
        }])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn eval(&self, z: f64) -> f64 {
        if !(z > 0.0) {
            return 0.0;
        }
        for p in &self.pieces {
            if z >= p.lo && z < p.hi {
                return p.eval(z);
            }
        }
        0.0
    }

    /// Finite piece edges, ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = Vec::new();
        for p in &self.pieces {
            b.push(p.lo);
            if p.hi.is_finite() {
                b.push(p.hi);
            }
        }
        b.sort_by(|a, c| a.partial_cmp(c).unwrap());
        b.dedup();
        b
    }

    pub fn support_lower(&self) -> f64 {
        self.pieces.first().map(|p| p.lo).unwrap_or(0.0)
    }

    /// Upper support edge; for a Gaussian piece, the radius beyond which the
    /// piece stays below `tol`.
    pub fn support_upper(&self, tol: f64) -> f64 {
        let mut hi = 0.0_f64;
        for p in &self.pieces {
            let edge = if p.hi.is_finite() {
                p.hi
            } else if let PieceKind::Gaussian { coef, mu, sigma } = &p.kind {
                let ratio = (coef.abs() / tol.max(1e-300)).max(1.0);
                mu + sigma * (2.0 * ratio.ln()).max(1.0).sqrt()
            } else {
                p.hi
            };
            hi = hi.max(edge);
        }
        hi
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.pieces.iter().all(|p| p.hi.is_finite())
    }

    /// Whether the profile decays fast enough for Hankel-transform routes:
    /// compact support or Gaussian-type tails.
    pub fn decays_rapidly(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.hi.is_finite() || matches!(p.kind, PieceKind::Gaussian { .. }))
    }

    /// Algebraic exponent of the profile at a given point (non-zero only at a
    /// piece edge that is the center of a power-type formula).
    pub fn edge_exponent(&self, at: f64) -> f64 {
        for p in &self.pieces {
            if (at - p.lo).abs() <= 1e-12 * at.max(1.0) || (at - p.hi).abs() <= 1e-12 * at.max(1.0)
            {
                let e = p.edge_exponent(at);
                if e != 0.0 {
                    return e;
                }
            }
        }
        0.0
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProfileDoc = serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("malformed profile JSON: {e}")))?;
        let mut pieces = Vec::with_capacity(doc.pieces.len());
        for (i, rp) in doc.pieces.into_iter().enumerate() {
            let lo = rp.interval.0;
            let hi = rp.interval.1.unwrap_or(f64::INFINITY);
            let piece = Piece {
                lo,
                hi,
                kind: rp.kind,
            };
            piece
                .validate(i)
                .map_err(|e| Error::domain(format!("profile piece {i}: {e}")))?;
            pieces.push(piece);
        }
        let mut prof = Profile::new(pieces)?;
        prof.integrability_class = doc.integrability_class;
        Ok(prof)
    }

    pub fn to_json(&self) -> String {
        let doc = ProfileDoc {
            pieces: self
                .pieces
                .iter()
                .map(|p| RawPiece {
                    interval: (
                        p.lo,
                        if p.hi.is_finite() { Some(p.hi) } else { None },
                    ),
                    kind: p.kind.clone(),
                })
                .collect(),
            integrability_class: self.integrability_class,
        };
        serde_json::to_string(&doc).expect("profile serialization")
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    pieces: Vec<RawPiece>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    integrability_class: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawPiece {
    interval: (f64, Option<f64>),
    #[serde(flatten)]
    kind: PieceKind,
}

/// A pointwise view `z ↦ |z^{zpow} · f(z)|^{power}` used by the control
/// inequalities (weight twists and Hölder powers never leave this family).
#[derive(Debug, Clone, Copy)]
pub struct PowerWeighted<'a> {
    pub base: &'a Profile,
    pub zpow: f64,
    pub power: f64,
}

impl<'a> PowerWeighted<'a> {
    pub fn new(base: &'a Profile, zpow: f64, power: f64) -> Self {
        PowerWeighted { base, zpow, power }
    }

    pub fn eval(&self, z: f64) -> f64 {
        if !(z > 0.0) {
            return 0.0;
        }
        (z.powf(self.zpow) * self.base.eval(z)).abs().powf(self.power)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.base.breakpoints()
    }

    pub fn support_upper(&self, tol: f64) -> f64 {
        self.base.support_upper(tol)
    }

    pub fn support_lower(&self) -> f64 {
        self.base.support_lower()
    }
}

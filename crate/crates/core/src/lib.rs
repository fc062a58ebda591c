//! Numerical machinery for generalized spherical-mean transforms acting on
//! radial profiles.
//!
//! The crate evaluates the integral kernel of the transform family
//! `M_t f(x) = ∫ K_t(x,z) f(z) dμ(z)` (with `dμ(z) = z^{2α+1} dz`) by direct
//! oscillatory quadrature of a triple-Bessel integral, provides three
//! independent evaluation routes for the means themselves, implements the
//! auxiliary one-dimensional operators that control the associated maximal
//! function, and carries out the exact interval arithmetic for power-weighted
//! `L^p` boundedness regions together with empirical counterexample sweeps.
//!
//! Modules map onto the main subsystems:
//!
//! * [`specfun`] — real-order gamma and Bessel-J plus the radial multiplier.
//! * [`quad`] — adaptive Gauss–Kronrod quadrature with endpoint-singularity
//!   substitutions.
//! * [`osc`] — machinery for conditionally convergent oscillatory tails
//!   (period averaging and semi-analytic component integration).
//! * [`profile`] — piecewise-analytic radial profiles with a JSON schema.
//! * [`kernel`] — kernel evaluation, region classification, envelopes and
//!   per-case bounds.
//! * [`transform`] — the mean operators, maximal and truncated-maximal
//!   operators.
//! * [`special_ops`] — Hardy-type and maximal auxiliary operators with their
//!   weighted-`L^p` classification.
//! * [`bounds`] — boundedness verdicts, admissible weight intervals and the
//!   classical boundary curves.
//! * [`probe`] — extremal families and empirical unboundedness sweeps.
//! * [`pde`] — evolution semantics and convergence-to-initial-data reports.

pub mod bounds;
pub mod error;
pub mod kernel;
pub mod osc;
pub mod pde;
pub mod probe;
pub mod profile;
pub mod quad;
pub mod special_ops;
pub mod specfun;
pub mod transform;

pub use error::{Error, Result};
pub use kernel::{Params, QuadSpec, Region};
pub use profile::Profile;

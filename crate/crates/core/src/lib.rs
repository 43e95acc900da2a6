//! Spectral analysis of principal integer-shift systems `{φ(·+k)}` in `L²(ℝ)`.
//!
//! Given a compactly supported generator `φ` (a piecewise polynomial), the
//! periodized spectral weight `Φ_φ(t) = Σ_k |φ̂(t+k)|²` is a trigonometric
//! polynomial whose Fourier coefficients are the shift autocorrelations of
//! `φ`. Everything else follows from `Φ_φ`:
//!
//! * [`bracket`] computes `Φ_φ` exactly (autocorrelation route) and
//!   numerically (truncated frequency sums with certified tails), and checks
//!   the two lattice-sum identities the box/hat generators produce.
//! * [`analysis`] locates the zeros of `Φ_φ` with their orders, factors
//!   `Φ_φ = |ω|² P` with `P > 0`, and classifies the basis properties of the
//!   shift system (Riesz / Schauder / M-basis, Cesàro threshold).
//! * [`dual`] builds the biorthogonal dual system: the regular dual
//!   `ĝ = Φ⁻¹ φ̂` when `Φ > 0`, and frequency-domain duals `η_n` built from
//!   Hermite trigonometric interpolants when `Φ` has zeros.
//! * [`summation`] forms partial sums, `(C,α)` Cesàro means and Abel–Poisson
//!   means of the resulting generalized Fourier series and measures exact
//!   `L²(ℝ)` reconstruction errors through the weighted-norm isometry.
//! * [`orthonorm`] handles the orthonormalized generator `φ̂₀ = φ̂/√Φ` and
//!   the construction of generators with a prescribed spectral weight.
//!
//! [`piecewise`] and [`trigpoly`] supply the two exact calculi (compactly
//! supported piecewise polynomials on ℝ, Laurent trigonometric polynomials
//! on the torus) that the rest of the crate is written against.

pub mod analysis;
pub mod bracket;
pub mod dual;
pub mod error;
pub mod orthonorm;
pub mod piecewise;
pub mod summation;
pub mod trigpoly;

pub use analysis::{BasisReport, OmegaBlock, SingularityProfile};
pub use bracket::{BracketResult, Decay};
pub use dual::{DualSystem, GfCoefficients};
pub use error::Error;
pub use orthonorm::OrthoGenerator;
pub use piecewise::{FourierValue, PiecewiseFn};
pub use summation::{CesaroWeights, ReconstructionReport};
pub use trigpoly::{RootOnTorus, TrigPoly};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

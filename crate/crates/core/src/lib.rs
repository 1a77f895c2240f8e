//! Positive symmetric projective tensor norms over ordered sequence spaces.
//!
//! The crate computes certified brackets for the projective norms
//! `‖·‖_π`, `‖·‖_{π,s}`, `‖·‖_{π,+}` and `‖·‖_{π,s,+}` of symmetric tensors
//! over `ℓ₁^m` and over the Euclidean plane, estimates the associated
//! positive polarization constants, and uses them to represent finitely
//! exchangeable distributions as signed mixtures of i.i.d. laws with
//! minimal total variation.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`tensor`] | symmetric tensors, wedges, powers, polarization and Vandermonde decompositions |
//! | [`lp`] | dense revised simplex for `min Σ|aₖ|` subject to `Σ aₖ vₖ = t` |
//! | [`norms`] | column generation for the four norms, `κ(n)` and `c_{s,s}^+` |
//! | [`chebyshev`] | closed forms for the two-dimensional `ℓ₁` case |
//! | [`exchangeable`] | signed de Finetti representations and extendibility bounds |
//! | [`euclid2`] | the `ℓ₂²` gallery |
//! | [`format`] | deterministic JSON rendering |

pub mod chebyshev;
pub mod error;
pub mod euclid2;
pub mod exchangeable;
pub mod format;
pub mod lp;
pub mod norms;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tensor::{PosNegSplit, PowerTerm, SignedPowerCombination, SymmetricTensor};

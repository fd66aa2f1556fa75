//! Ratios of geometric quantities over finite-dimensional self-dual cones.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact_rational`]: reduced big-integer fractions and Stern–Brocot
//!   bracketing of Eudoxus cuts.
//! * [`cone`]: inner-product spaces carrying a closed pointed cone (orthant,
//!   Lorentz, real/complex positive semidefinite, polyhedral), with order,
//!   self-duality, Jordan (Moreau) decomposition and the order-unit norm.
//! * [`face`]: faces as span projectors, orthogonal faces, facial
//!   derivatives, minimal decompositions, facial homogeneity and Riesz tests.
//! * [`derivation`]: the Lie algebra of cone derivations, its center,
//!   orientability, spectral faces and reconstruction from faces.
//! * [`ratio`]: classical and generalized ratios, and their correspondence
//!   with self-adjoint derivations.
//! * [`conjunct`]: dimension words and conjunct (tensor) products of
//!   quantities.
//! * [`krein`]: lattice-ordered spaces with an order unit, their product,
//!   pure states and the Gelfand map.

pub mod cone;
pub mod conjunct;
pub mod derivation;
pub mod error;
pub mod exact_rational;
pub mod face;
pub mod krein;
pub mod linalg;
pub mod ratio;
pub mod sampling;
pub mod tol;

pub use cone::{ConeKind, ConeSpace, ConeSpec, Membership};
pub use derivation::{Derivation, DerivationVerdict, Orientability, SpectralFaceFamily};
pub use error::{Error, Result};
pub use exact_rational::{CutOracle, Fraction, FractionClass};
pub use face::Face;
pub use ratio::Ratio;

/// Dense real vector in the orthonormal coordinates of the host space.
pub type Vector = nalgebra::DVector<f64>;
/// Dense real matrix acting on [`Vector`] coordinates.
pub type Matrix = nalgebra::DMatrix<f64>;

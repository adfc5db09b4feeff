//! Exact and numerical toolkit for resistive-Hamiltonian descriptions of
//! three-dimensional polynomial flows.
//!
//! * [`polyfield`]: exact polynomials over x, y, z with symbolic parameters,
//!   plus grad/curl/div and the Poisson-vector identification.
//! * [`systems`]: the built-in registry of (𝒥, ℛ, H) decompositions and their
//!   verification.
//! * [`bihamiltonian`]: Jordan-product Poisson matrices 𝒩 = 𝒥ℛ + ℛ𝒥 and the
//!   bi-Hamiltonian flows they generate.
//! * [`conformal`]: conformal Hamiltonian decompositions X_H + aΓ.
//! * [`simulate`]: RK4 / Dormand-Prince integration with invariant monitors.
//! * [`checks`]: the check catalogue behind the `verify` and `report` commands.

pub mod bihamiltonian;
pub mod checks;
pub mod conformal;
mod error;
pub mod polyfield;
pub mod simulate;
pub mod systems;

pub use error::{Error, Result};

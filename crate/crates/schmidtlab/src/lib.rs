//! Schmidt analysis of pure continuous-variable bipartite states.
//!
//! A pure two-particle state with amplitude `C(k, q)` admits a Schmidt
//! decomposition `C(k, q) = Σᵢ √λᵢ · uᵢ(k) · vᵢ(q)` into paired orthonormal
//! modes. The effective number of participating pairs,
//!
//! ```text
//! K = 1 / Σᵢ λᵢ²  =  1 / Tr ρ²        (ρ = either marginal density matrix)
//! ```
//!
//! is the Schmidt number: `K = 1` for product states, larger for entangled
//! ones. This crate computes `K`, the Schmidt spectrum `{λᵢ}`, the mode
//! functions, and the Tsallis/Rényi entropy family along two independent
//! routes that cross-check each other:
//!
//! * **analytic** — a one-parameter atom-photon scattering model
//!   ([`model::ScatteringModel`]) whose marginal density and Schmidt number
//!   have closed forms; the exact `K(η)` is evaluated through the scaled
//!   complementary error function ([`specfun::erfcx`]) so it stays finite
//!   over the whole parameter range;
//! * **numerical** — Nyström discretization of an arbitrary amplitude on
//!   quadrature grids ([`quadrature`]) followed by an SVD of the
//!   weight-symmetrized kernel matrix ([`schmidt`]).
//!
//! The [`schmidt`] engine is model-agnostic: any `Fn(f64, f64) -> Complex64`
//! amplitude can be decomposed.

pub mod error;
pub mod model;
pub mod quadrature;
pub mod schmidt;
pub mod specfun;

pub use error::{Result, SchmidtError};

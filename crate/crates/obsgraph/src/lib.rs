//! Observability of the free Schrödinger flow `∂_t u = iΔu` on finite
//! combinatorial graphs, periodic subsets of ℤ, and discrete tori.
//!
//! A vertex set `E` is observable at horizon `T` when the time-integrated
//! observed energy controls the initial mass:
//! `‖u₀‖² ≤ C_obs ∫_0^T ‖u(t)‖²_{l²(E)} dt`. On a finite graph this is a
//! purely spectral question, and the crate computes it three independent
//! ways — the smallest eigenvalue of an observability Gramian, an
//! eigenvector restriction test, and a resolvent-style grid sweep — which
//! must always agree.
//!
//! Module map:
//! - [`graph`]: graph builders, Laplacians, observation-set parsing;
//! - [`spectral`]: Hermitian eigendecomposition, eigenspace grouping, the
//!   propagator `e^{itΔ}`;
//! - [`obs`]: Gramian constants, restriction test, exterior averages,
//!   resolvent sweeps;
//! - [`bohr`]: periodic integer sets via the fiber reduction — the exact
//!   gcd criterion, fiber Gramians, the quantitative counterexample bound,
//!   and observable sets of any density;
//! - [`density`]: thickness and window-density profiles of integer sets;
//! - [`torus`]: character spectra, zero counting, and high-density
//!   unobservable sets on discrete tori;
//! - [`agreement`]: randomized and exhaustive cross-method batteries;
//! - [`cli`] / [`report`]: the batch front end and its JSON schemas.
//!
//! Runnable walkthroughs for each capability live under `examples/`.

pub mod agreement;
pub mod bohr;
pub mod cli;
pub mod density;
pub mod error;
pub mod graph;
pub mod numeric;
pub mod obs;
pub mod quad;
pub mod report;
pub mod spectral;
pub mod torus;

pub use error::{Error, Result};
pub use spectral::C64;

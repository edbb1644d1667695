//! Steady-state photon statistics of a driven-dissipative photonic molecule.
//!
//! The system is a pair of tunnel-coupled optical cavities (modes `a` and
//! `b`), with cavity `b` additionally coupled to a two-level quantum dot.
//! Cavity `a` is driven coherently; optionally both cavities are driven. In
//! the frame rotating at the drive frequency the Hamiltonian is
//!
//! ```text
//! H = Δ_a a†a + Δ_b b†b + Δ_b σ†σ
//!   + g (σ† b + b† σ) + J (a† b + b† a)
//!   + E_a (a† e^{-iθ} + a e^{iθ}) + E_b (b† + b)
//! ```
//!
//! with photon loss at rates κ_a, κ_b and dot relaxation at rate γ. All
//! quantities are expressed in units of κ ≡ κ_a.
//!
//! The crate computes the steady state of the Lindblad master equation and
//! the derived observables — intracavity photon numbers and the equal-time
//! second-order correlation g²(0) of mode `a` — whose sub-Poissonian dips
//! reveal unconventional photon blockade driven by quantum interference
//! rather than by a strong single-photon nonlinearity.
//!
//! # Layout
//!
//! - [`hilbert`]: truncated Fock⊗Fock⊗qubit space and operator algebra.
//! - [`model`]: system parameters, Hamiltonian, dissipators, Liouvillian.
//! - [`solver`]: steady-state solvers, time evolution, observables,
//!   cutoff-convergence ladder.
//! - [`weakdrive`]: independent few-excitation amplitude equations valid for
//!   weak driving, used to cross-check the master-equation solvers and to
//!   split the two-photon amplitude into interfering excitation paths.
//! - [`sweep`]: parameter sweeps, figure presets, scalar minimization and
//!   dip finding.
//! - [`validate`]: self-check suites (structural invariants and a set of
//!   physics benchmarks with frozen tolerances).

// Guards are written `!(v >= 0.0)` on purpose: unlike `v < 0.0`, the negated
// form also rejects NaN, which must never pass a validation boundary.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hilbert;
pub(crate) mod linalg;
pub mod model;
pub mod solver;
pub mod sweep;
pub mod validate;
pub mod weakdrive;

pub use error::Error;

/// Convenient alias used throughout the crate.
pub type Complex = num_complex::Complex64;

//! Ergodic theory on desk-scale models of sigma-finite measure spaces.
//!
//! Everything here lives on a [`measure::TailedMeasureSpace`]: finitely many
//! weighted atoms, optionally extended by an infinite-measure tail on which
//! functions are constant. That is enough structure to realize, and check
//! numerically, the objects of operator ergodic theory:
//!
//! * Dunford-Schwartz operators (simultaneous L1 and L-infinity contractions),
//!   their moduli and adjoints ([`operator`]);
//! * non-increasing rearrangements, Hardy-Littlewood submajorization, and the
//!   topology of convergence in measure ([`rearrangement`]);
//! * fully symmetric function-space norms: L1, L-infinity, their sum and
//!   intersection, Orlicz, Lorentz, and Marcinkiewicz norms ([`norms`]);
//! * Cesaro and Besicovitch-weighted ergodic averages, weak (1,1) maximal
//!   inequalities, and finite-horizon Egorov certificates of almost uniform
//!   convergence ([`averaging`]);
//! * orbit experiments on exact measure-preserving systems: Wiener-Wintner
//!   sweeps and return-times averages ([`orbit`]).
//!
//! The crate is `no_std`-compatible (`default-features = false`); it needs
//! only `alloc` plus the `libm`-backed float routines of `num-traits`.
//! [`sampling`] provides the seeded random instances used by the test suites
//! and the companion CLI.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod averaging;
pub mod measure;
pub mod norms;
pub mod operator;
pub mod orbit;
pub mod rearrangement;
pub mod sampling;

pub use num_complex::Complex64;

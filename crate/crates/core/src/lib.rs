//! Periodic orbits of linear and invariant flows on Lie groups.
//!
//! Flows are decided from the spectrum of a derivation `D` of the Lie algebra: the linear flow
//! `e^{tD}` is periodic exactly when `D` is semisimple with purely imaginary eigenvalues whose
//! nonzero frequencies are pairwise commensurable.

pub mod rational;
pub mod poly;
pub mod matrix;
pub mod expr;
pub mod config;
pub mod liealg;
pub mod dersolve;
pub mod spectral;
pub mod periodicity;
pub mod flowsim;
pub mod catalog;

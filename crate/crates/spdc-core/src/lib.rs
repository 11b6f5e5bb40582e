//! Two-photon joint-amplitude simulator for spontaneous parametric
//! down-conversion from linearly chirped quasi-phase-matched crystals.
//!
//! The crate evaluates the closed-form joint amplitude of a degenerate
//! type-0 process in poled LiNbO3 pumped near 800 nm, together with the
//! observables built on it: phase-matching maps, joint frequency-momentum
//! spectra, single-photon marginals, and space-time localization maps.

pub mod biphoton;
pub mod config;
pub mod crystal;
pub mod dispersion;
pub mod mathkit;
pub mod observables;
pub mod output;
pub mod pump;
pub mod runner;
pub mod units;

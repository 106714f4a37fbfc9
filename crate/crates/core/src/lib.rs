//! Truncated-gradient variation integrals of smooth functions and the
//! machinery that certifies their bounds with explicit constants.
//!
//! * [`domain`]: cubes, fields, profiles, weights, windows and the built-in corpus
//! * [`truncate`]: the band-truncated gradient and windowed derivatives
//! * [`quad`]: midpoint quadrature with grid doubling and exact 1-D variation
//! * [`fit`]: least-squares power-law fits
//! * [`gamma`]: the integrals `Gamma1(a)`, `Gamma2(a)` and the axis-sum bound
//! * [`onedim`]: grid decomposition and the one-dimensional bound chains
//! * [`nestedlp`]: the nested-prefix linear program and its partition limit
//! * [`study`]: constant ledgers, threshold sweeps and CSV reports
//! * [`cli`]: the `varbound` command-line front end

pub mod cli;
pub mod domain;
pub mod error;
pub mod fit;
pub mod gamma;
pub mod nestedlp;
pub mod onedim;
pub mod quad;
pub mod study;
pub mod truncate;

pub use error::{Error, Result};

//! Point counts, Lefschetz traces and modularity checks for the twisted self
//! fibre products of the elliptic modular surface of level 6.
//!
//! - [`ffarith`]: prime fields, Legendre symbols, cubic irreducibility
//! - [`surface`]: fibres of the surface and their point counts
//! - [`threefold`]: twists, node census, `#Ŵ(F_p)` and traces
//! - [`qseries`]: q-series, the level-6 eta product, newform fixtures
//! - [`livne`]: sign vectors, covering sets, parity certificates, reports
//! - [`cli`]: the command-line front end and its output documents

pub mod cli;
pub mod error;
pub mod ffarith;
pub mod livne;
pub mod qseries;
pub mod surface;
pub mod threefold;

pub use error::{Error, Result};

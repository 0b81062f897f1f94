//! Ihara zeta function of the square grid ℤ×ℤ.
//!
//! `Z(u)` is evaluated through elliptic modulus and theta-function
//! parameters, continued to the Riemann surface of pairs `(u, t)`, expanded
//! as an exact power series, and checked against torus quadrature and
//! finite grid and torus graphs.

pub mod error;
pub mod exact_series;
pub mod finite_graphs;
pub mod oracles;
pub mod special_functions;
pub mod surface;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use exact_series::ExactSeries;
pub use finite_graphs::{ConvergenceRow, Family, FiniteGraph, GraphKind, ZetaEvaluation};
pub use oracles::quadrature::QuadratureSpec;
pub use special_functions::TruncationPolicy;
pub use surface::{DeckWord, Generator, Mobius, RegionTag, SheetReport, SheetValue, SurfacePoint};

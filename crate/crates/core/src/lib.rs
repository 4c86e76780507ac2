//! Numerical inverse-scattering toolkit for the reduced Maxwell-Bloch
//! equations in the sharp-line limit,
//!
//!   E_t = -s,   s_x = E u + mu r,   u_x = -E s,   r_x = -mu s,
//!
//! with Bloch constraint r^2 + s^2 + u^2 = 1 and ground state
//! (r, s, u) -> (0, 0, -1), E -> 0 at |x| -> inf.
//!
//! The crate covers the full pipeline: direct Zakharov-Shabat scattering
//! of an initial field E0 ([`scattering`]), reflectionless residue
//! solves and closed soliton forms ([`soliton`]), stationary-phase
//! machinery and cone-restricted long-time predictions ([`asymptotics`]),
//! and a method-of-lines reference evolution ([`evolve`]). File formats
//! and the `rmb` command-line driver live in [`io`] and `src/bin/rmb.rs`.

pub mod asymptotics;
pub mod config;
pub mod error;
pub mod evolve;
pub mod field;
pub mod gamma;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod norms;
pub mod scattering;
pub mod soliton;

pub use asymptotics::ConeSpec;
pub use config::Config;
pub use error::{Error, Result};
pub use field::SpatialField;
pub use grid::Grid;
pub use scattering::{ScatteringData, SpectralPair};

/// Complex double, the scalar type of every spectral quantity here.
pub type Cx = num_complex::Complex<f64>;

/// i as a [`Cx`] constant.
pub const I: Cx = Cx::new(0.0, 1.0);

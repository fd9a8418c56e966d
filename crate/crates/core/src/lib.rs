//! Explicit upper bounds for the least primitive root `g(p)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`ntcore`] exact integer number theory and the brute-force `g(p)` oracle,
//! * [`characters`] Dirichlet characters mod `p`, exact moment sums and their
//!   Weil-type upper bounds,
//! * [`intervals`] the Burgess interval family and its point-count envelopes,
//! * [`sieve`] the `e`-free sieve and its character identities,
//! * [`enclosure`] outward-rounded real enclosures,
//! * [`certify`] certified evaluation of the main criterion, the derived
//!   bounds, the corollary case analysis and the parameter search,
//! * [`cli`] the `primroot` command-line front end.

pub mod certify;
pub mod characters;
pub mod cli;
pub mod enclosure;
pub mod error;
pub mod intervals;
pub mod ntcore;
pub mod sieve;

pub use enclosure::{CertifiedReal, Tri};
pub use error::{Error, Result};
pub use ntcore::{Factorization, PrimeContext};

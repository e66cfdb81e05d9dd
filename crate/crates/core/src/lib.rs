//! Exact toolkit for restricted pointed-partition posets and the complexes of
//! ordered set partitions that model their order complexes.
//!
//! The crate is organised bottom-up:
//!
//! * [`combinatorics`]: permutations, pointed compositions, descent statistics
//!   and the knapsack machinery (`κ`, `V`, `ε`, `W`).
//! * [`poset`]: finite posets, the pointed partition lattice and its two
//!   restricted subposets, Möbius functions and order complexes.
//! * [`complex`]: ordered-set-partition complexes, chains, boundary maps,
//!   reduced integer homology via Smith normal form, shelling and cones.
//! * [`morse`]: the discrete Morse matching on the knapsack complex.
//! * [`representation`]: border strips, tableaux, polytabloids and the
//!   explicit top-homology cycles.
//! * [`verify`]: claim-by-claim verification suites and their reports.

pub mod caps;
pub mod combinatorics;
pub mod complex;
pub mod error;
pub mod morse;
pub mod poset;
pub mod representation;
pub mod verify;

pub use caps::Caps;
pub use error::{Error, Result};

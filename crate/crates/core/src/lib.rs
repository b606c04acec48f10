//! Online matroid embeddings and the tooling around them.
//!
//! The crate is `no_std` (it needs `alloc`). It provides
//!
//! * [`matroid`]: a rank-oracle interface, the standard matroid families and
//!   exhaustive verification oracles (axioms, morphisms, circuits, spans);
//! * [`gf2`] and [`gfp`]: exact linear algebra over GF(2) (bit packed) and
//!   prime fields;
//! * [`ome`]: online matroid morphisms/embeddings (binary, laminar, bounded
//!   rank), the copy lift, alignment and order-independent randomization;
//! * [`msp`]: the matroid secretary reduction from an online-revealed matroid
//!   to a known host matroid, with flag accounting;
//! * [`approx`]: distortion-bounded embeddings into the free matroid;
//! * [`impossibility`]: finite searches that witness the non-existence
//!   results on small hosts.
//!
//! IO, file formats and the command line live in the `ome-cli` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod approx;
pub mod error;
pub mod gate;
pub mod gf2;
pub mod gfp;
pub mod impossibility;
pub mod matroid;
pub mod msp;
pub mod ome;
pub mod rng;
pub mod subset;

pub use error::{Error, Result};
pub use gate::PrefixGatedOracle;
pub use matroid::RankOracle;
pub use subset::SubsetMask;

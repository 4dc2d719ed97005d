//! Finite commutative Krasner (m,n)-hyperrings, their hyperideals, and
//! absorbing semiprimary conditions relative to hyperideal expansions.

pub mod axioms;
pub mod classify;
pub mod construct;
pub mod error;
pub mod expansion;
pub mod fixtures;
pub mod harness;
pub mod ideal;
pub mod instance;
pub mod ring;
pub mod subset;

/// Index of an element in a carrier.
pub type Elem = usize;

pub use error::{Error, Result};
pub use expansion::Expansion;
pub use ring::{Hyperring, HyperringTable};
pub use subset::Subset;

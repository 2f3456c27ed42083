//! Extraction of large chains of sets and totally incomparable families
//! from partial orders.

mod bitset;
pub mod chain_lemma;
pub mod cli;
pub mod decomposition;
pub mod driver;
pub mod error;
pub mod fair_division;
pub mod format;
pub mod genlab;
pub mod incomparable;
pub mod multiorder;
pub mod poset;
pub mod real;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use poset::{Claim, ElementId, IdMap, Neighborhood, Poset, SubsetFamily, Verification};
pub use real::Real;

//! Permutation groups of small degree and their n-orbit matrices.
//!
//! The guide in `book/` walks through the modules; its code blocks run as
//! doc-tests of this crate.

pub mod catalog;
pub mod claims;
pub mod error;
pub mod group;
pub mod norbit;
pub mod perm;

pub use error::{Error, Result};
pub use group::{BlockSystem, Caps, PermutationGroup, Subgroup};
pub use perm::{CycleType, Permutation};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/blocks.md")]
    mod blocks {}
    #[doc = include_str!("../../../book/src/cosets.md")]
    mod cosets {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/norbits.md")]
    mod norbits {}
    #[doc = include_str!("../../../book/src/claims.md")]
    mod claims {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

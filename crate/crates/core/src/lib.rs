//! Exact free-group algebra and the forking-independence oracles built on it.
//!
//! The crate is layered bottom-up:
//!
//! * [`freewords`]: reduced words in a free group of fixed rank.
//! * [`stallings`]: folded core graphs (membership, rank, intersection, witnesses).
//! * [`whitehead`]: Whitehead automorphisms, peak reduction, free-factor tests and
//!   the bounded split search for independence over a free factor.
//! * [`graphofgroups`]: marked cyclic graph-of-groups decompositions of `F_n`.
//! * [`elementary`]: Dehn twists, vertex automorphisms and their normal form.
//! * [`forking`]: the two independence oracles.
//! * [`farey`]: the Farey graph as the curve complex of the punctured torus.
//! * [`io`]: JSON wire formats.

pub mod elementary;
pub mod farey;
pub mod forking;
pub mod freewords;
pub mod graphofgroups;
pub mod io;
pub mod stallings;
pub mod whitehead;

pub use freewords::{Alphabet, Word, WordError, WordTuple};

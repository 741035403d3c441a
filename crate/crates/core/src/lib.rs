//! Exact counting of splitting subspaces and invariant-subspace flags of
//! linear operators over finite fields.
//!
//! Every count is available in two forms: as an integer for a concrete
//! operator over a concrete field `F_q`, and as a polynomial in `q` for a
//! similarity class type. Brute-force enumerators are provided next to each
//! formula so the two routes can be checked against each other.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod classtype;
mod error;
pub mod flagrec;
pub mod gf;
pub mod lattice;
pub mod qpoly;
pub mod splitting;
pub mod verify;

pub use classtype::{ClassType, Partition};
pub use error::{Error, Result};
pub use flagrec::{CountBackend, FlagCounter, FlagTuple};
pub use gf::{Field, Matrix, Subspace};
pub use lattice::ScaleLimit;
pub use qpoly::QPoly;
pub use splitting::{Ratio, SigmaQuery};

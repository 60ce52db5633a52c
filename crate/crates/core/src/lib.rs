//! Exact character-ring computations for compact Lie groups: root data, Weyl groups,
//! divided-difference operators, Hecke-algebra invariants, the Steinberg basis and
//! finite coverings of tori.

pub mod charring;
pub mod covers;
pub mod demazure;
pub mod error;
pub mod expr;
pub mod hecke;
pub mod linalg;
pub mod repring;
pub mod rootdata;
pub mod sample;
pub mod selftest;
pub mod weyl;

pub use charring::CharElt;
pub use error::{Error, Result};
pub use rootdata::{Root, RootDatum, Weight};
pub use weyl::{WeylElt, WeylGroup};

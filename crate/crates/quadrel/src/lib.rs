//! Cryptanalysis toolkit for binary Goppa codes of degree 2.
//!
//! The library builds the skew-symmetric matrix code of quadratic
//! relationships attached to the dual of an alternant or Goppa code, finds
//! rank-2 members by solving the associated Pfaffian system, and turns them
//! into a full key recovery: a valid support/multiplier pair together with a
//! degree-2 Goppa polynomial regenerating the public code.

pub mod attack;
pub mod codes;
pub mod gf2m;
pub mod goppa_repr;
pub mod linalg;
pub mod matcode;
pub mod pfaffian;

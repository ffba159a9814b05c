//! Computing integral points of the thrice-punctured line over open
//! subschemes of Spec Z through polylogarithmic Chabauty-Kim loci.
//!
//! The pipeline, bottom to top:
//!
//! - [`words`], [`shuffle`]: word combinatorics and the shuffle Hopf algebra
//!   modelling the coordinate ring of the unipotent Tannakian Galois group;
//! - [`linalg`]: exact rational linear algebra with the epsilon-linear
//!   independence certificate;
//! - [`points`]: bounded-height enumeration of S-unit points;
//! - [`padic`]: finite-precision p-adic arithmetic, p-adic polylogarithms
//!   and zeta values, disk expansions, Newton-polygon root counts;
//! - [`geom`]: the cocycle-evaluation map in coordinates, the Goncharov
//!   subalgebra, and the elimination-theoretic image ideal;
//! - [`basis`]: polylogarithmic bases of the Goncharov quotient with p-adic
//!   certificates, change of basis, and descent to arbitrary Z;
//! - [`loci`]: assembly, symmetrisation and residue-disk certification of
//!   the Chabauty-Kim locus;
//! - [`counter`]: the point-counting driver.

pub mod basis;
pub mod counter;
pub mod error;
pub mod geom;
pub mod linalg;
pub mod loci;
pub mod padic;
pub mod points;
pub mod selftest;
pub mod shuffle;
pub mod words;

pub use error::CkError;

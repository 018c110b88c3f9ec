//! Numerical engine for filling the 4-ball with holomorphic discs adapted to a
//! contactomorphism of the 3-sphere.
//!
//! The pipeline, bottom to top:
//!
//! * [`geometry`] — the contact geometry of S³ ⊂ ℂ²: contact form, Reeb field,
//!   level spheres and their characteristic foliations.
//! * [`standard`] — the explicit round-disc filling of D⁴ ∖ K (twist function,
//!   disc family, its inverse chart, energies).
//! * [`contact`] — contactomorphisms generated as time-1 flows of contact
//!   Hamiltonians supported away from the unknot K.
//! * [`solver`] — the Bishop-disc boundary value problem, discretised by
//!   Fourier collocation on the boundary chart and solved by damped
//!   Gauss–Newton.
//! * [`moduli`] — continuation of the disc family over the parameter disc and
//!   the glued filling map.
//! * [`intersection`] — topological intersection theory of discs: intersection
//!   records, multiplicities by topological degree, Maslov indices, adjunction.
//! * [`verify`] — invariant suites over solved discs and grids.
//! * [`extension`] — the boundary isotopy and the extension of the
//!   contactomorphism to a diffeomorphism of D⁴.
//!
//! The crate is `no_std`-compatible (with `alloc`); all file formats, CLI and
//! parallel drivers live in the companion `discfill-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod contact;
pub mod error;
pub mod extension;
pub mod geometry;
pub mod intersection;
pub mod moduli;
pub mod solver;
pub mod standard;
pub mod verify;

pub use error::{Error, Result};

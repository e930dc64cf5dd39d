//! Abnormal extremals of left-invariant sub-Finsler quasimetrics on
//! four-dimensional real Lie groups.
//!
//! The algebra is given by structure constants ([`lie::StructureConstants`]),
//! the control region by a three-dimensional bracket-generating subspace
//! `q` and a convex unit body ([`gauge::GaugeBody`]). The abnormal
//! extremals are the one-parameter subgroups along the distinguished line
//! `q ∩ 𝔑(q)`; [`abnormality::classify_abnormal`] decides whether they are
//! strongly or nonstrongly abnormal.
//!
//! This crate is `no_std` (it needs `alloc`); file formats and the
//! command-line tool live in the `subfinsler` crate.
#![no_std]

extern crate alloc;

pub mod abnormality;
pub mod adapted;
pub mod catalog;
pub mod equivalence;
mod error;
pub mod extremal;
pub mod gauge;
pub mod lie;
pub mod linalg;

pub use error::{Error, Result};
pub use lie::{StructureConstants, Subspace, Vector4};

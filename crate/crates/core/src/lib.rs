//! Finite-field arithmetic, linear secret sharing and high-rate homomorphic
//! secret sharing schemes, with exhaustive checkers for their correctness
//! and privacy on small parameters.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod audit;
pub mod blackbox;
pub mod combi;
pub mod convert;
pub mod enumerate;
pub mod error;
pub mod galois;
pub mod hss_poly;
pub mod linalg;
pub mod lmsss;
pub mod nonlinear;
pub mod pir;

pub use error::{Error, Result};
pub use galois::{Extension, Fe, Field, FieldCtx, FieldElem, FieldError, FieldId};
pub use linalg::Mat;

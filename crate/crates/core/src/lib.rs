//! Elementary abelian p-subgroups of the finite groups PGL_n(q) and PGU_n(q).
//!
//! The crate has three layers:
//!
//! * exact arithmetic: [`gfq`] (finite fields), [`projmat`] (matrices and
//!   projective classes), [`fp`] (small linear algebra over a prime field);
//! * the classifier: [`gamma`] (explicit extraspecial-type generators),
//!   [`toral`] (weight multisets), [`compgrp`] (component-group actions),
//!   [`classify`] (the decision table with predicted local structure),
//!   [`localstruct`] (centralizers and normalizers by linear algebra);
//! * ground truth: [`oracle`] (brute-force enumeration of small groups).
//!
//! Data-parallel loops go through [`par`], which falls back to sequential
//! iteration when the `parallel` feature is disabled.

pub mod classify;
pub mod compgrp;
pub mod error;
pub mod fp;
pub mod gamma;
pub mod gfq;
pub mod localstruct;
pub mod oracle;
pub mod order;
pub mod par;
pub mod projmat;
pub mod toral;

pub use error::{Error, Result};

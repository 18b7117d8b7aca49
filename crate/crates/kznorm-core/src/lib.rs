//! Numerical toolkit for the modular tensor data of level-K affine `sl_n`
//! and for conformal-block norms of `sl2` chiral vertex operators.
//!
//! The crate has two halves that meet in a single cross-check:
//!
//! * **Algebraic data** — root/weight arithmetic ([`rootdata`]), modular
//!   S/T matrices, quantum dimensions and Verlinde fusion ([`modular`]),
//!   and closed-form Γ-product norms with their integer-level zero/pole
//!   window ([`norms`]).
//! * **Analytic data** — the four-point Knizhnik–Zamolodchikov system on
//!   an invariant subspace, reduced to a Fuchsian ODE on `(0,1)`, solved
//!   by Frobenius series at the endpoints and adaptive Runge–Kutta
//!   transport in between ([`kzflow`]). The connection coefficient of the
//!   singlet channel recovers the same norm, up to a `j`-independent
//!   constant, as the closed-form product — that constancy is the
//!   headline numerical verification this crate exists to perform.
//!
//! All computations are deterministic; no randomness, no global state.
//! The crate is `no_std` (with `alloc`) so the algebraic core can be
//! embedded anywhere; the companion CLI crate carries IO and file
//! formats.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod gammaf;
pub mod halfint;
pub mod kzflow;
pub mod linalg;
pub mod modular;
pub mod norms;
pub mod rootdata;
pub mod sl2rep;

pub use error::CoreError;
pub use halfint::HalfInt;
pub use rootdata::{LevelContext, Weight};

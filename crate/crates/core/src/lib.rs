//! Rank-metric public-key encryption from enhanced Gabidulin matrix codes.
//!
//! Gabidulin codes over F_{q^m} are expanded into matrix codes over F_q and
//! hidden by the random-rows-and-columns masking. The crate provides the
//! McEliece and Niederreiter variants, structural distinguishers on matrix
//! codes, and closed-form attack-cost estimators for the named parameter sets.

pub mod codec;
pub mod egmc;
pub mod error;
pub mod gabidulin;
pub mod gf;
pub mod linalg;
pub mod matrixcode;
pub mod pke;
mod poly;
pub mod qpoly;
pub mod security;

pub use egmc::{EgmcParams, EgmcPublicCode, EgmcSecretKey};
pub use error::{Error, Result};
pub use gabidulin::{wrank, GabidulinCode};
pub use gf::{BaseField, Basis, ExtElem, ExtField, Field};
pub use linalg::{MatExt, MatFq, RowSpace, Solution};
pub use matrixcode::MatrixCodeBasis;
pub use pke::{Ciphertext, KeyPair, McEliecePublicKey, NiederreiterPublicKey};
pub use qpoly::QPoly;
pub use security::{AttackCostReport, ParameterSet};

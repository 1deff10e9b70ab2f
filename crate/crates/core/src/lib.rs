//! Exact decision procedures for Hadamard majorization and Hadamard
//! circulant majorization of square matrices, linear preservers of the
//! circulant order, and generalized inverses of operators on matrix space.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere in the crate.

pub mod campaign;
pub mod circulant;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod format;
pub mod geninv;
pub mod majorization;
pub mod operator;
pub mod preserver;
pub mod random;

pub use circulant::{circulant_perm, diag_index, is_doubly_stochastic, CirculantCombination};
pub use error::{Error, Result};
pub use exact::{Mat, Rational};
pub use majorization::{decide_h, decide_hc, HWitness, HcWitness};
pub use operator::{OperatorRep, Subspace, SubspaceBasis};
pub use preserver::{decide_hc_preserver, PreserverCertificate, PreserverDecision, Refutation};

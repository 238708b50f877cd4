//! Power sums `S_n(m) = 1^n + 2^n + ... + m^n` modulo `k` for unbounded `n`
//! and `m`, together with a harness that certifies the underlying
//! congruence and periodicity results against brute force.

pub mod arith;
pub mod error;
pub mod powersum;
pub mod verify;

pub use arith::{Factorization, Modulus, Natural, PrimePower, Residue};
pub use error::{Error, Result};

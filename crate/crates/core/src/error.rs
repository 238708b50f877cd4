use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,

    #[error("modulus {0} does not fit in 64 bits")]
    ModulusOverflow(String),

    #[error("exponent n must be at least 1")]
    ZeroExponent,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} must be an odd prime")]
    NotOddPrime(u64),

    #[error("prime power {q}^{a} is out of range")]
    PrimePowerOverflow { q: u64, a: u32 },

    #[error("valuation of 0 is undefined")]
    ZeroValuation,

    #[error("parameter {0} must be at least 1")]
    ZeroParameter(&'static str),

    #[error("duplicate prime {0} in CRT decomposition")]
    DuplicatePrime(u64),

    #[error("residue {value} is not canonical modulo {modulus}")]
    NonCanonicalResidue { value: u64, modulus: u64 },

    #[error("m = {m} exceeds the oracle limit {limit}; use eval for large m")]
    OracleLimit { m: String, limit: u64 },

    #[error("brute-force size {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unknown report format {0:?} (expected json, csv or text)")]
    UnknownFormat(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("invalid decimal natural {0:?}")]
    ParseNatural(String),

    #[error("report serialization failed: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;

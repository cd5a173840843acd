use thiserror::Error;

use crate::gottesman::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration cap exceeded for {what}: {required} required, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: String,
        cap: u64,
    },

    #[error("invalid Gottesman subgroup: {}", format_violations(.0))]
    InvalidSpec(Vec<Violation>),

    #[error("subgroup is not {d}-pure: centralizer element of weight {weight}")]
    NotPure { d: usize, weight: usize },

    #[error("spec is not in sum-zero encodable form: {0}")]
    NotEncodable(String),

    #[error("two members collapse to the same set after puncturing: {0:?}")]
    Collapse(Vec<usize>),

    #[error("symmetric difference {size} between members {first} and {second} lies in the forbidden weight set")]
    ForbiddenWeight {
        first: usize,
        second: usize,
        size: usize,
    },

    #[error("state is not a common eigenvector of generator {generator}")]
    NotEigenvector { generator: usize },

    #[error("no (error, codeword) pair of weight at most {t} explains the syndrome")]
    NoSolution { t: usize },

    #[error("projection vanishes on every basis word for member {0:?}")]
    ZeroProjection(Vec<u32>),

    #[error("register {register} out of range ({registers} registers)")]
    RegisterOutOfRange { register: usize, registers: usize },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

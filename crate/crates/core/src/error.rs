use thiserror::Error;

use crate::arith::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus must be at least {min}, got {modulus}")]
    InvalidModulus { modulus: u64, min: u64 },
    #[error("{value} is not prime")]
    NotPrime { value: u64 },
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: i64, modulus: u64 },
    #[error("denominator of {value} is divisible by {modulus}")]
    DenominatorDivisible { value: Rational, modulus: u64 },
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("operands live modulo {0} and {1}")]
    ModulusMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{}", zero_rotation(*value, *p))]
    ZeroRotation { value: i64, p: u64 },
    #[error("Galois sum is not rational")]
    NotRational,
    #[error("series with zero constant term is not a unit")]
    NotAUnit,
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("fixed points are not orientation-reversing matched: {0}")]
    IncompatiblePoints(String),
    #[error("fixed spheres cannot be glued: {0}")]
    IncompatibleSpheres(String),
    #[error("index {index} out of range ({len} entries)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("isotropy data does not match the action: {0}")]
    LengthMismatch(String),
    #[error("relation (ii) needs c1(L)^2[X]")]
    MissingChernSquare,
    #[error("no value of the free unknown satisfies the congruence")]
    NotSolvable,
    #[error("no free unknown given")]
    Overdetermined,
    #[error("{0} free unknowns, expected exactly one")]
    Underdetermined(usize),
    #[error("fixed sphere has self-intersection zero")]
    ZeroSelfIntersection,
    #[error("inconsistent counts: {0}")]
    InconsistentCounts(String),
    #[error("dimension {0} is not an integer")]
    NonIntegerDimension(Rational),
    #[error("chi + Sign = {0} is odd")]
    ParityError(i64),
    #[error("action has fixed spheres")]
    HasSpheres,
    #[error("not an involution with odd weights: {0}")]
    NotInvolution(String),
    #[error("action fails validation: {0}")]
    InvalidAction(String),
    #[error("only defined for odd primes, got p = {0}")]
    EvenPrime(u64),
    #[error("exact value {exact} disagrees with float check {float}")]
    CrossCheck { exact: Rational, float: f64 },
}

fn zero_rotation(value: i64, p: u64) -> String {
    if p == 0 {
        "rotation numbers must be nonzero".into()
    } else {
        format!("rotation number {value} vanishes modulo {p}")
    }
}

use thiserror::Error;

/// Errors raised by the partition, successor-map and staircase primitives.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parts are not weakly decreasing: {0:?}")]
    NotDecreasing(Vec<usize>),
    #[error("cannot parse partition from {0:?}")]
    BadPartition(String),
    #[error("invalid Dyck vector {0:?}")]
    BadDyckVector(Vec<usize>),
    #[error("partition does not fit in the {n}-triangle (mind = {mind})")]
    NotContained { n: usize, mind: usize },
    #[error("the empty partition has no first-return point")]
    EmptyPartition,
    #[error("nu is undefined on the final partition {0}")]
    Final(String),
    #[error("nu inverse is undefined on the initial partition {0}")]
    Initial(String),
    #[error("{0} is outside the staircase domain")]
    OutOfDomain(i64),
    #[error("invalid staircase parameters: {0}")]
    BadStaircase(String),
    #[error("mismatched parameter list lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("window does not certify every i with F(i) <= {0}")]
    InsufficientWindow(i64),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Exact binomial coefficient `C(n, 2)`.
pub fn choose2(n: usize) -> usize {
    n.checked_mul(n.saturating_sub(1))
        .map(|x| x / 2)
        .expect("overflow in C(n,2)")
}

/// `C(n, 2)` over signed integers, zero for `n < 2`.
pub fn choose2_i(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n.checked_mul(n - 1).expect("overflow in C(n,2)") / 2
    }
}

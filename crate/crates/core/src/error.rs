use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("bound {0} is below 2")]
    BoundTooSmall(u64),
    #[error("prime {prime} exceeds the graph bound {bound}")]
    OutOfBound { prime: u64, bound: u64 },
    #[error("{p} does not divide {q} - 1 (or p = q)")]
    NotSloping { p: u64, q: u64 },
    #[error("modulus {0} exceeds the brute-force limit")]
    ModulusTooLarge(u64),
    #[error("invalid descriptor: {0}")]
    Descriptor(String),
    #[error("not inductively monothetic: component at p = {0} is a general abelian group")]
    NotInductivelyMonothetic(u64),
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("group order {order} exceeds the cap {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("invalid Cayley table: {0}")]
    BadTable(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not a {0}-group")]
    NotPGroup(u64),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

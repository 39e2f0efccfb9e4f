use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),

    #[error("ring has {size} elements, more than the configured maximum of {max}")]
    RingTooLarge { size: u128, max: usize },

    #[error("element literal `{0}` is not an element of the ring")]
    ElementNotInRing(String),

    #[error("element `{0}` is not a member of the subset")]
    NotInSubset(String),

    #[error("subset is not closed under addition: {a} + {b} = {sum} is not a member")]
    ClosureViolation { a: String, b: String, sum: String },

    #[error("subset must be nonempty")]
    EmptySubset,

    #[error("tuple must be nonempty")]
    EmptyTuple,

    #[error("operands live in different rings ({0} vs {1})")]
    RingMismatch(String, String),

    #[error("{op} needs length at least {min}, got {got}")]
    TooShort { op: &'static str, min: usize, got: usize },

    #[error("tuple {0} is not a lambda-quiddity")]
    NotQuiddity(String),

    #[error("closed formula not applicable: {0}")]
    FormulaNotApplicable(String),

    #[error("{what}: ring size {size} exceeds the guard of {max}")]
    ScaleGuard { what: &'static str, size: usize, max: usize },

    #[error("{0}")]
    Unsupported(String),

    #[error("no coset collision found for a tuple of length {len} (guarantee starts at {threshold})")]
    NoGuarantee { len: usize, threshold: usize },

    #[error("node budget of {budget} exhausted at size {n}")]
    BudgetExceeded { n: usize, budget: u64 },

    #[error("irreducible lambda-quiddity of size {n} found above the proven bound {bound}")]
    BoundViolation { n: usize, bound: usize },

    #[error("count overflow while counting tuples of size {0}")]
    CountOverflow(usize),
}

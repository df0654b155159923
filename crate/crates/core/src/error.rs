use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("bit string value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: u32 },

    #[error("bit width {0} is not supported (maximum {max})", max = crate::bitmath::MAX_WIDTH)]
    WidthTooLarge(u32),

    #[error("bit width mismatch: {left} vs {right}")]
    WidthMismatch { left: u32, right: u32 },

    #[error("cannot drop {k} bits from a {width}-bit string")]
    TruncationOutOfRange { k: u32, width: u32 },

    #[error("qubit count {n} outside the supported range {min}..={max}")]
    QubitCountOutOfRange { n: u32, min: u32, max: u32 },

    #[error("weight {weight} outside 0..={n}")]
    WeightOutOfRange { weight: u32, n: u32 },

    #[error("qubit count {0} is not odd")]
    NotOdd(u32),

    #[error("qubit {qubit} is not in a {qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, qubits: u32 },

    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("control qubit {0} is also a target")]
    ControlIsTarget(usize),

    #[error("amplitude count {len} is not 2^{qubits}")]
    LengthMismatch { len: usize, qubits: u32 },

    #[error("basis map is not a bijection: index {0} is hit twice")]
    NotBijective(usize),

    #[error("instance has no elements")]
    EmptyInstance,

    #[error("element {index} has weight 0; weights must be positive")]
    NonPositiveWeight { index: usize },

    #[error("instance rejected: half-sum not integer (total weight {total} is odd)")]
    OddTotal { total: u64 },

    #[error("total weight overflows the 62-bit accumulator range")]
    WeightOverflow,

    #[error("element index {index} out of range for {n} elements")]
    ElementOutOfRange { index: usize, n: usize },

    #[error("register of {qubits} qubits exceeds the limit of {max}")]
    RegisterTooLarge { qubits: u32, max: u32 },

    #[error("invalid instance file: {0}")]
    InvalidInstance(String),
}

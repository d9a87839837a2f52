use thiserror::Error;

/// Errors produced by matrix and field operations.
#[derive(Debug, Error)]
pub enum FflaError {
    /// The requested field order is not 2^k with 1 <= k <= 8.
    #[error("unsupported field order {0}: must be 2^k with 1 <= k <= 8")]
    BadFieldOrder(u64),

    /// Two operands live over different fields.
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u16, u16),

    /// Operand shapes are incompatible with the operation.
    #[error("dimension mismatch: {op} needs {need}, got {got}")]
    DimensionMismatch {
        op: &'static str,
        need: String,
        got: String,
    },

    /// The result (or an operand) would exceed the configured entry cap.
    #[error("matrix too large: {rows} x {cols} exceeds the cap of {cap} entries")]
    TooLarge { rows: usize, cols: usize, cap: u64 },

    /// An entry value is outside the field.
    #[error("entry value {0} out of range for GF({1})")]
    EntryOutOfRange(u16, u16),

    /// A square matrix expected to be invertible is singular.
    #[error("matrix is singular")]
    Singular,
}

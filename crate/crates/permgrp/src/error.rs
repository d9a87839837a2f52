use thiserror::Error;

/// Errors from permutation-group computations.
#[derive(Debug, Error)]
pub enum PermError {
    /// An image array is not a bijection on its index range.
    #[error("image array is not a bijection")]
    NotBijective,

    /// Two objects live on different point sets.
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    /// An element is not a member of the group in question.
    #[error("permutation is not a member of the group")]
    NotMember,

    /// A factored word exceeded the configured length bound.
    #[error("factored word exceeds the length bound of {0} tokens")]
    WordTooLong(usize),

    /// The group is too large for an exhaustive operation.
    #[error("group order {order} exceeds the enumeration cap of {cap}")]
    TooLarge { order: u64, cap: u64 },

    /// A subgroup generator failed parent membership.
    #[error("subgroup generator {index} is not in the parent group")]
    BadSubgroupGenerator { index: usize },

    /// A generator word does not evaluate to the claimed generator.
    #[error("word for subgroup generator {index} does not evaluate to it")]
    BadGeneratorWord { index: usize },
}

use serde::{Deserialize, Serialize};

/// Resource limits shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest finite group order accepted anywhere.
    pub max_group_order: usize,
    /// Largest number of subgroups enumerated for a single group.
    pub max_subgroups: usize,
    /// Maximum number of edge letters in words enumerated by searches.
    pub max_word_length: usize,
    /// Number of iterations recorded in a growth certificate.
    pub certificate_steps: usize,
    /// Maximum number of candidate words inspected by a single search.
    pub max_search: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: 5040,
            max_subgroups: 1024,
            max_word_length: 4,
            certificate_steps: 10,
            max_search: 20_000,
        }
    }
}

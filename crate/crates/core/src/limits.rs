/// Environment variable that overrides [`Limits::max_subsets`].
pub const MAX_SUBSETS_ENV: &str = "OLPA_MAX_SUBSETS";

/// Size guards applied by constructions that can blow up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of subset states a determinization may create.
    pub max_subsets: usize,
    /// Maximum size of an enumerated transformation (tuple) alphabet.
    pub max_letters: usize,
}

impl Limits {
    pub const DEFAULT_MAX_SUBSETS: usize = 1 << 20;
    pub const DEFAULT_MAX_LETTERS: usize = 1 << 24;

    /// Default limits, with `OLPA_MAX_SUBSETS` honoured when it parses.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(v) = std::env::var(MAX_SUBSETS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.max_subsets = v.max(1);
        }
        limits
    }

    pub fn with_max_subsets(mut self, max_subsets: usize) -> Self {
        self.max_subsets = max_subsets;
        self
    }

    pub fn with_max_letters(mut self, max_letters: usize) -> Self {
        self.max_letters = max_letters;
        self
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_subsets: Self::DEFAULT_MAX_SUBSETS,
            max_letters: Self::DEFAULT_MAX_LETTERS,
        }
    }
}

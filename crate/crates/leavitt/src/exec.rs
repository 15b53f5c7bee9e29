/// Execution strategy for the data-parallel sweeps (pair checks, witness
/// verification, brute-force branching). `Parallel` uses rayon when the
/// `parallel` feature is enabled and silently falls back to sequential
/// otherwise, so callers can pass it unconditionally. Results are identical
/// under both strategies: parallel searches use first-in-order semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Exec {
    pub(crate) fn effective(self) -> Exec {
        if cfg!(feature = "parallel") {
            self
        } else {
            Exec::Sequential
        }
    }
}

impl Default for Exec {
    fn default() -> Self {
        Exec::Parallel
    }
}

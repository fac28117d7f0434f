//! Contract between single-state wavefunctions and the determinant ensemble.
//!
//! The ensemble only ever needs log-amplitudes, flip ratios, incremental
//! cache updates, and log-derivatives. A table-backed exact wavefunction
//! (see [`crate::ed::table`]) implements the same contract, which is what
//! makes the diagonal-local-energy oracle tests possible.

use crate::scalar::{Scalar, C};
use crate::spin::SpinConfig;

pub trait Wavefunction<T: Scalar>: Send + Sync {
    /// Per-configuration state owned by a single Markov chain.
    type Cache: Clone + Send;

    fn n(&self) -> usize;

    /// Number of variational parameters (zero for frozen table states).
    fn param_len(&self) -> usize;

    fn make_cache(&self, config: &SpinConfig) -> Self::Cache;

    /// Log-amplitude `log psi(S)` for the configuration the cache tracks.
    fn log_psi(&self, cache: &Self::Cache) -> C<T>;

    /// Amplitude ratio `psi(S with sites flipped) / psi(S)`; `sites` holds
    /// one or two distinct positions.
    fn ratio(&self, cache: &Self::Cache, config: &SpinConfig, sites: &[usize]) -> C<T>;

    /// Advance the cache across a single accepted flip. `config` is the
    /// configuration *before* the flip.
    fn update_flip(&self, cache: &mut Self::Cache, config: &SpinConfig, site: usize);

    /// Recompute the cache from scratch for `config`.
    fn refresh(&self, cache: &mut Self::Cache, config: &SpinConfig);

    /// Write the log-derivatives `D_l = d log psi / d W_l` into `out`
    /// (length `param_len`).
    fn derivatives_into(&self, cache: &Self::Cache, config: &SpinConfig, out: &mut [C<T>]);
}

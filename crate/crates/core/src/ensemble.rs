//! K-state determinant ansatz.
//!
//! For a collective configuration `(S^1..S^K)` the grand amplitude is
//! `det Psi` with `Psi[r][c] = psi_c(S^r)` (rows = configurations,
//! columns = states). The matrix is stored row-scaled: row `r` keeps
//! `exp(log psi_c(S^r) - offset_r)` plus the real offset, because amplitudes
//! across replicas differ by hundreds of orders of magnitude at large n.
//! Offsets cancel in every quantity the sampler needs (determinant ratios,
//! local-energy matrices, ensemble derivatives), so only `log_det` ever sees
//! them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::linalg::{lu_decompose, matmul_small};
use crate::scalar::{Scalar, C};
use crate::spin::SpinConfig;
use crate::wavefunction::Wavefunction;

/// Rank-1 updates keep the inverse fresh for this many accepted moves
/// before a full refactorization.
pub const DEFAULT_REFACTOR_INTERVAL: u32 = 100;
/// Determinant ratios below this magnitude force a full rebuild instead of
/// a Sherman-Morrison update.
const MIN_RATIO_FOR_RANK1: f64 = 1e-12;
/// Pivot threshold that flags a degenerate Slater matrix.
const SINGULAR_PIVOT: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct CollectiveConfig {
    pub replicas: Vec<SpinConfig>,
}

impl CollectiveConfig {
    pub fn new(replicas: Vec<SpinConfig>) -> Result<Self> {
        if replicas.is_empty() {
            return Err(Error::constraint("need at least one replica"));
        }
        let n = replicas[0].n();
        if !replicas.iter().all(|r| r.n() == n) {
            return Err(Error::constraint("replicas must share the spin count"));
        }
        Ok(CollectiveConfig { replicas })
    }
}

pub struct SlaterState<T: Scalar, W: Wavefunction<T>> {
    k: usize,
    configs: Vec<SpinConfig>,
    /// cache[r * k + c]: state c evaluated on replica r
    caches: Vec<W::Cache>,
    /// row-scaled amplitude matrix, row-major k x k
    mant: Vec<C<T>>,
    inv: Vec<C<T>>,
    row_offset: Vec<T>,
    log_det_mant: C<T>,
    accepted_since_refactor: u32,
    pub refactor_interval: u32,
    /// max |mant * inv - I| entry observed at the last refactorization
    pub last_refactor_residual: T,
    scratch: Vec<C<T>>,
}

impl<T: Scalar, W: Wavefunction<T>> SlaterState<T, W> {
    /// Assemble the Slater matrix, its inverse and log-determinant.
    /// A (numerically) singular matrix — e.g. two identical networks — is
    /// reported as an error; the caller re-randomizes.
    pub fn build(nets: &[W], collective: CollectiveConfig) -> Result<Self> {
        let k = nets.len();
        if k == 0 || collective.replicas.len() != k {
            return Err(Error::dim(
                collective.replicas.len(),
                k,
                "replicas vs networks",
            ));
        }
        let n = collective.replicas[0].n();
        if !nets.iter().all(|w| w.n() == n) {
            return Err(Error::constraint("network size mismatch"));
        }
        let configs = collective.replicas;
        let mut caches = Vec::with_capacity(k * k);
        for r in 0..k {
            for net in nets {
                caches.push(net.make_cache(&configs[r]));
            }
        }
        let mut state = SlaterState {
            k,
            configs,
            caches,
            mant: vec![Complex::new(T::zero(), T::zero()); k * k],
            inv: vec![Complex::new(T::zero(), T::zero()); k * k],
            row_offset: vec![T::zero(); k],
            log_det_mant: Complex::new(T::zero(), T::zero()),
            accepted_since_refactor: 0,
            refactor_interval: DEFAULT_REFACTOR_INTERVAL,
            last_refactor_residual: T::zero(),
            scratch: vec![Complex::new(T::zero(), T::zero()); 2 * k],
        };
        state.refactor(nets)?;
        Ok(state)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn configs(&self) -> &[SpinConfig] {
        &self.configs
    }

    pub fn log_det(&self) -> C<T> {
        let off: T = self.row_offset.iter().copied().sum();
        self.log_det_mant + Complex::new(off, T::zero())
    }

    /// Rebuild mantissas, inverse and log-determinant from the caches.
    pub fn refactor(&mut self, nets: &[W]) -> Result<()> {
        let k = self.k;
        for r in 0..k {
            let mut max_re = T::neg_infinity();
            for c in 0..k {
                let lp = nets[c].log_psi(&self.caches[r * k + c]);
                if lp.re.is_nan() || lp.re == T::infinity() || !lp.im.is_finite() {
                    return Err(Error::Singular("non-finite amplitude".into()));
                }
                if lp.re > max_re {
                    max_re = lp.re;
                }
            }
            if !max_re.is_finite() {
                return Err(Error::Singular(
                    "replica has zero amplitude under every state".into(),
                ));
            }
            self.row_offset[r] = max_re;
            for c in 0..k {
                let lp = nets[c].log_psi(&self.caches[r * k + c]);
                self.mant[r * k + c] = (lp - Complex::new(max_re, T::zero())).exp();
            }
        }
        let lu = lu_decompose(&self.mant, k);
        if lu.min_pivot() < T::lit(SINGULAR_PIVOT) {
            return Err(Error::Singular(format!(
                "degenerate Slater matrix (pivot {:.3e})",
                lu.min_pivot().to_f64_lossy()
            )));
        }
        self.inv = lu.inverse();
        self.log_det_mant = lu.log_det();
        self.accepted_since_refactor = 0;

        let prod = matmul_small(&self.mant, &self.inv, k);
        let mut resid = T::zero();
        for i in 0..k {
            for j in 0..k {
                let expect = if i == j { T::one() } else { T::zero() };
                let d = (prod[i * k + j] - Complex::new(expect, T::zero())).norm();
                resid = resid.max(d);
            }
        }
        self.last_refactor_residual = resid;
        Ok(())
    }

    /// Per-state amplitude ratios for flipping `site` of replica `rep`.
    fn row_ratios(&mut self, nets: &[W], rep: usize, site: usize) -> &[C<T>] {
        let k = self.k;
        for c in 0..k {
            self.scratch[c] = nets[c].ratio(&self.caches[rep * k + c], &self.configs[rep], &[site]);
        }
        &self.scratch[..k]
    }

    /// `det(Psi') / det(Psi)` for the single-flip row replacement, computed
    /// as `sum_c ratio_c mant[rep,c] inv[c,rep]` (row offsets cancel).
    pub fn det_ratio_replica_flip(&mut self, nets: &[W], rep: usize, site: usize) -> C<T> {
        let k = self.k;
        self.row_ratios(nets, rep, site);
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in 0..k {
            acc = acc + self.scratch[c] * self.mant[rep * k + c] * self.inv[c * k + rep];
        }
        acc
    }

    /// Accept the flip of `site` in replica `rep`: Sherman-Morrison row
    /// update of the inverse, amplitude caches advanced, determinant ratio
    /// folded into `log_det`. Ratios below 1e-12 in magnitude trigger a full
    /// refactorization instead of the rank-1 update.
    pub fn accept_flip(&mut self, nets: &[W], rep: usize, site: usize) -> Result<()> {
        let k = self.k;
        self.row_ratios(nets, rep, site);
        let mut det_ratio = Complex::new(T::zero(), T::zero());
        for c in 0..k {
            det_ratio = det_ratio + self.scratch[c] * self.mant[rep * k + c] * self.inv[c * k + rep];
        }

        let rank1_ok = det_ratio.norm() >= T::lit(MIN_RATIO_FOR_RANK1);
        if rank1_ok {
            // new row v_c = ratio_c * mant[rep,c]
            for c in 0..k {
                self.scratch[c] = self.scratch[c] * self.mant[rep * k + c];
            }
            // r_j = v . inv[:,j]  (row vector v^T inv), beta = r_rep = det_ratio
            let (v, r_row) = self.scratch.split_at_mut(k);
            for j in 0..k {
                let mut acc = Complex::new(T::zero(), T::zero());
                for c in 0..k {
                    acc = acc + v[c] * self.inv[c * k + j];
                }
                r_row[j] = acc;
            }
            let beta = r_row[rep];
            // inv <- inv - u (r - e_rep)^T / beta, u = inv[:,rep]
            r_row[rep] = r_row[rep] - Complex::new(T::one(), T::zero());
            let inv_beta = Complex::new(T::one(), T::zero()) / beta;
            for c1 in 0..k {
                let u = self.inv[c1 * k + rep] * inv_beta;
                for j in 0..k {
                    let sub = u * r_row[j];
                    self.inv[c1 * k + j] = self.inv[c1 * k + j] - sub;
                }
            }
            for c in 0..k {
                self.mant[rep * k + c] = v[c];
            }
            self.log_det_mant = self.log_det_mant + beta.ln();

            // re-center the row scale when it drifts a factor e away from 1
            let row_max = (0..k)
                .map(|c| self.mant[rep * k + c].norm())
                .fold(T::zero(), |a, b| a.max(b));
            if row_max > T::zero() {
                let delta = row_max.ln();
                if delta.abs() > T::one() {
                    let down = (-delta).exp();
                    let up = delta.exp();
                    for c in 0..k {
                        self.mant[rep * k + c] = self.mant[rep * k + c].scale(down);
                        self.inv[c * k + rep] = self.inv[c * k + rep].scale(up);
                    }
                    self.row_offset[rep] = self.row_offset[rep] + delta;
                    self.log_det_mant = self.log_det_mant - Complex::new(delta, T::zero());
                }
            }
        }

        for c in 0..k {
            nets[c].update_flip(&mut self.caches[rep * k + c], &self.configs[rep], site);
        }
        self.configs[rep].flip(site);

        self.accepted_since_refactor += 1;
        if !rank1_ok || self.accepted_since_refactor >= self.refactor_interval {
            self.refactor(nets)?;
        }
        Ok(())
    }

    /// Single-sample local operator matrix `Psi^{-1} (O Psi)` with
    /// `(O Psi)[r][c] = <S^r|O|psi_c>`. Each replica's connection stream is
    /// enumerated once and shared across all K columns.
    pub fn local_operator_matrix(&self, nets: &[W], op: &Hamiltonian<T>) -> Result<Vec<C<T>>> {
        let k = self.k;
        if op.n() != self.configs[0].n() {
            return Err(Error::dim(op.n(), self.configs[0].n(), "operator size"));
        }
        let mut g = vec![Complex::new(T::zero(), T::zero()); k * k];
        for r in 0..k {
            let diag = op.diag_energy_unchecked(&self.configs[r]);
            for c in 0..k {
                g[r * k + c] = Complex::new(diag, T::zero());
            }
            for conn in op.connections_unchecked(&self.configs[r]) {
                let sites = conn.flip_sites(&self.configs[r]);
                for c in 0..k {
                    let ratio = nets[c].ratio(&self.caches[r * k + c], &self.configs[r], &sites);
                    g[r * k + c] = g[r * k + c] + conn.amplitude * ratio;
                }
            }
        }
        for r in 0..k {
            for c in 0..k {
                g[r * k + c] = g[r * k + c] * self.mant[r * k + c];
            }
        }
        Ok(matmul_small(&self.inv, &g, k))
    }

    /// Alias with the cost-function name: `Psi^{-1} (H Psi)` for the model
    /// Hamiltonian; its sample average's trace is the optimization target.
    pub fn local_energy_matrix(&self, nets: &[W], h: &Hamiltonian<T>) -> Result<Vec<C<T>>> {
        self.local_operator_matrix(nets, h)
    }

    /// Concatenated log-derivative of `det Psi` with respect to every
    /// network's parameters (network-major): block k holds
    /// `sum_r inv[k,r] mant[r,k] D^{(k)}(S^r)`.
    pub fn derivatives_into(&self, nets: &[W], out: &mut [C<T>]) {
        let k = self.k;
        let total: usize = nets.iter().map(|w| w.param_len()).sum();
        debug_assert_eq!(out.len(), total);
        let mut offset = 0;
        let mut scratch: Vec<C<T>> = Vec::new();
        for (knet, net) in nets.iter().enumerate() {
            let len = net.param_len();
            let block = &mut out[offset..offset + len];
            block.fill(Complex::new(T::zero(), T::zero()));
            scratch.resize(len, Complex::new(T::zero(), T::zero()));
            for r in 0..k {
                let weight = self.inv[knet * k + r] * self.mant[r * k + knet];
                if weight.norm_sqr() == T::zero() {
                    continue;
                }
                net.derivatives_into(&self.caches[r * k + knet], &self.configs[r], &mut scratch);
                for (o, s) in block.iter_mut().zip(&scratch) {
                    *o = *o + weight * *s;
                }
            }
            offset += len;
        }
    }

    pub fn total_param_len(nets: &[W]) -> usize {
        nets.iter().map(|w| w.param_len()).sum()
    }
}

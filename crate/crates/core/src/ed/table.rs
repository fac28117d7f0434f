//! Dense-vector-backed exact wavefunction.
//!
//! Implements the same contract as the RBM, with amplitudes looked up from a
//! `2^n` table. Feeding exact eigenvectors into the ensemble turns the local
//! energy matrix into `diag(E_0..E_{K-1})` exactly, which is the sharpest
//! oracle available for the determinant machinery.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};
use crate::spin::SpinConfig;
use crate::wavefunction::Wavefunction;

#[derive(Clone, Debug)]
pub struct TableWavefunction<T: Scalar> {
    n: usize,
    amps: Vec<C<T>>,
    logs: Vec<C<T>>,
}

#[derive(Clone, Debug)]
pub struct TableCache {
    index: usize,
}

impl<T: Scalar> TableWavefunction<T> {
    /// `amps` has length `2^n` and must not be identically zero. Zero
    /// amplitudes are stored as `log = -inf`; ratios out of a zero-amplitude
    /// configuration are undefined (sampling never dwells there since
    /// `|Psi|^2 = 0`), while ratios *into* one are exactly zero.
    pub fn new(n: usize, amps: Vec<C<T>>) -> Result<Self> {
        if n > 30 {
            return Err(Error::Capacity("table wavefunction supports n <= 30".into()));
        }
        if amps.len() != (1usize << n) {
            return Err(Error::dim(amps.len(), 1 << n, "table length"));
        }
        if amps.iter().all(|a| a.norm_sqr() == T::zero()) {
            return Err(Error::constraint("table wavefunction is identically zero"));
        }
        let logs = amps
            .iter()
            .map(|a| {
                if a.norm_sqr() == T::zero() {
                    Complex::new(T::neg_infinity(), T::zero())
                } else {
                    a.ln()
                }
            })
            .collect();
        Ok(TableWavefunction { n, amps, logs })
    }

    pub fn from_real(n: usize, v: &[T]) -> Result<Self> {
        Self::new(n, v.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    /// Mix `k` table states by an invertible `k x k` matrix `a` (row-major):
    /// output state `c` has amplitudes `sum_l states[l] * a[l*k + c]`.
    pub fn mixed(states: &[TableWavefunction<T>], a: &[C<T>]) -> Result<Vec<TableWavefunction<T>>> {
        let k = states.len();
        if a.len() != k * k {
            return Err(Error::dim(a.len(), k * k, "mixing matrix"));
        }
        let n = states[0].n;
        let dim = 1usize << n;
        let mut out = Vec::with_capacity(k);
        for c in 0..k {
            let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
            for (l, st) in states.iter().enumerate() {
                let coef = a[l * k + c];
                for (dst, src) in amps.iter_mut().zip(&st.amps) {
                    *dst = *dst + coef * *src;
                }
            }
            out.push(TableWavefunction::new(n, amps)?);
        }
        Ok(out)
    }

    pub fn amplitude(&self, config: &SpinConfig) -> C<T> {
        self.amps[config.index()]
    }
}

impl<T: Scalar> Wavefunction<T> for TableWavefunction<T> {
    type Cache = TableCache;

    fn n(&self) -> usize {
        self.n
    }

    fn param_len(&self) -> usize {
        0
    }

    fn make_cache(&self, config: &SpinConfig) -> TableCache {
        TableCache {
            index: config.index(),
        }
    }

    fn log_psi(&self, cache: &TableCache) -> C<T> {
        self.logs[cache.index]
    }

    fn ratio(&self, cache: &TableCache, _config: &SpinConfig, sites: &[usize]) -> C<T> {
        let mut target = cache.index;
        for &s in sites {
            target ^= 1usize << s;
        }
        self.amps[target] / self.amps[cache.index]
    }

    fn update_flip(&self, cache: &mut TableCache, _config: &SpinConfig, site: usize) {
        cache.index ^= 1usize << site;
    }

    fn refresh(&self, cache: &mut TableCache, config: &SpinConfig) {
        cache.index = config.index();
    }

    fn derivatives_into(&self, _cache: &TableCache, _config: &SpinConfig, out: &mut [C<T>]) {
        debug_assert!(out.is_empty());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ratio_is_exact_amplitude_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 3;
        let amps: Vec<C<f64>> = (0..8)
            .map(|_| Complex::new(f64::standard_normal(&mut rng), f64::standard_normal(&mut rng)))
            .collect();
        let wf = TableWavefunction::new(n, amps.clone()).unwrap();
        for idx in 0..8usize {
            let config = SpinConfig::from_index(n, idx as u64).unwrap();
            let cache = wf.make_cache(&config);
            for site in 0..n {
                let expect = amps[idx ^ (1 << site)] / amps[idx];
                assert_eq!(wf.ratio(&cache, &config, &[site]), expect);
            }
        }
    }

    #[test]
    fn uniform_vector_has_constant_log_psi() {
        let wf = TableWavefunction::from_real(3, &[1.0; 8]).unwrap();
        for idx in 0..8 {
            let c = SpinConfig::from_index(3, idx).unwrap();
            let cache = wf.make_cache(&c);
            assert_eq!(wf.log_psi(&cache), Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn zero_amplitude_is_log_minus_infinity() {
        let mut amps = vec![Complex::new(1.0, 0.0); 4];
        amps[2] = Complex::new(0.0, 0.0);
        let wf = TableWavefunction::new(2, amps).unwrap();
        let c = SpinConfig::from_index(2, 2).unwrap();
        let cache = wf.make_cache(&c);
        assert_eq!(wf.log_psi(&cache).re, f64::NEG_INFINITY);
        // ratio *into* the zero state is exactly zero
        let c0 = SpinConfig::from_index(2, 0).unwrap();
        let cache0 = wf.make_cache(&c0);
        assert_eq!(
            wf.ratio(&cache0, &c0, &[1]),
            Complex::new(0.0, 0.0)
        );
    }
}

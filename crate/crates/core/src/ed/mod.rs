//! Exact diagonalization oracles.
//!
//! Dense path to n <= 14 (full `2^n` real symmetric matrix), streaming
//! Lanczos with bitwise matrix-vector products to n <= 20. Both assemble
//! matrix elements from `diag_energy` + `connections`, so every model
//! constructor is covered by the same code path the sampler uses.

pub mod lanczos;
pub mod table;

pub use lanczos::{lanczos_spectrum, lanczos_spectrum_seeded};
pub use table::TableWavefunction;

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::scalar::{Scalar, C};
use crate::spin::SpinConfig;

pub const DENSE_MAX_SPINS: usize = 14;
pub const LANCZOS_MAX_SPINS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// k lowest eigenpairs; energies ascending, vectors normalized, residuals
/// `||H v - E v||` recorded per pair.
#[derive(Clone, Debug)]
pub struct SpectrumResult<T: Scalar> {
    pub n: usize,
    pub k: usize,
    pub energies: Vec<T>,
    pub vectors: Option<Vec<Vec<C<T>>>>,
    pub residuals: Vec<T>,
}

/// Streaming `y = H x` over the full basis, never materializing the matrix.
/// Each output element pulls from its own connection list (the operator is
/// symmetric with real amplitudes), so the loop parallelizes deterministically.
pub fn apply_dense_vector<T: Scalar>(h: &Hamiltonian<T>, x: &[T], y: &mut [T]) {
    use rayon::prelude::*;
    let n = h.n();
    let dim = 1usize << n;
    debug_assert_eq!(x.len(), dim);
    debug_assert_eq!(y.len(), dim);
    y.par_iter_mut().enumerate().for_each(|(s, out)| {
        let config = SpinConfig::from_index(n, s as u64).expect("basis index");
        let mut acc = h.diag_energy_unchecked(&config) * x[s];
        for conn in h.connections_unchecked(&config) {
            acc = acc + conn.amplitude.re * x[conn.target.index()];
        }
        *out = acc;
    });
}

/// Assemble the dense symmetric matrix (column by column from connections).
pub fn assemble_dense<T: Scalar + RealField>(h: &Hamiltonian<T>) -> Result<DMatrix<T>> {
    let n = h.n();
    if n > DENSE_MAX_SPINS {
        return Err(Error::Capacity(format!(
            "dense path supports n <= {DENSE_MAX_SPINS}, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut mat = DMatrix::<T>::zeros(dim, dim);
    for s in 0..dim {
        let config = SpinConfig::from_index(n, s as u64)?;
        mat[(s, s)] = h.diag_energy_unchecked(&config);
        for conn in h.connections_unchecked(&config) {
            let t = conn.target.index();
            mat[(t, s)] = mat[(t, s)] + conn.amplitude.re;
        }
    }
    Ok(mat)
}

/// k lowest eigenpairs of the dense matrix.
pub fn dense_spectrum<T: Scalar + RealField>(
    h: &Hamiltonian<T>,
    k: usize,
) -> Result<SpectrumResult<T>> {
    let n = h.n();
    let dim = 1usize << n.min(DENSE_MAX_SPINS);
    if k == 0 || k > dim {
        return Err(Error::constraint(format!("k = {k} outside 1..={dim}")));
    }
    let mat = assemble_dense(h)?;
    let eig = mat.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut energies = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut hv = vec![T::zero(); dim];
    for &idx in order.iter().take(k) {
        let ev = eig.eigenvalues[idx];
        let col = eig.eigenvectors.column(idx);
        let v: Vec<T> = col.iter().copied().collect();
        apply_dense_vector(h, &v, &mut hv);
        let mut res = T::zero();
        for s in 0..dim {
            let d = hv[s] - ev * v[s];
            res = res + d * d;
        }
        energies.push(ev);
        residuals.push(Float::sqrt(res));
        vectors.push(v.iter().map(|&x| Complex::new(x, T::zero())).collect());
    }
    Ok(SpectrumResult {
        n,
        k,
        energies,
        vectors: Some(vectors),
        residuals,
    })
}

/// `<v| sigma_axis^i sigma_axis^j |v>` for a normalized dense state vector.
pub fn exact_correlation<T: Scalar>(vector: &[C<T>], n: usize, i: usize, j: usize, axis: Axis) -> T {
    let dim = 1usize << n;
    debug_assert_eq!(vector.len(), dim);
    if i == j {
        return T::one(); // sigma^2 = I
    }
    let mask = (1usize << i) | (1usize << j);
    match axis {
        Axis::Z => {
            let mut acc = T::zero();
            for (s, v) in vector.iter().enumerate() {
                let aligned = ((s >> i) & 1) == ((s >> j) & 1);
                let w = v.norm_sqr();
                acc = if aligned { acc + w } else { acc - w };
            }
            acc
        }
        Axis::X => {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (s, v) in vector.iter().enumerate() {
                acc = acc + vector[s ^ mask].conj() * *v;
            }
            acc.re
        }
        Axis::Y => {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (s, v) in vector.iter().enumerate() {
                let si = T::one() - T::lit(2.0) * T::lit(((s >> i) & 1) as f64);
                let sj = T::one() - T::lit(2.0) * T::lit(((s >> j) & 1) as f64);
                acc = acc + vector[s ^ mask].conj().scale(-(si * sj)) * *v;
            }
            acc.re
        }
    }
}

/// Single-site expectation `<v| sigma_axis^i |v>`.
pub fn exact_site_expectation<T: Scalar>(vector: &[C<T>], n: usize, i: usize, axis: Axis) -> T {
    let dim = 1usize << n;
    debug_assert_eq!(vector.len(), dim);
    match axis {
        Axis::Z => {
            let mut acc = T::zero();
            for (s, v) in vector.iter().enumerate() {
                let w = v.norm_sqr();
                acc = if (s >> i) & 1 == 0 { acc + w } else { acc - w };
            }
            acc
        }
        Axis::X => {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (s, v) in vector.iter().enumerate() {
                acc = acc + vector[s ^ (1 << i)].conj() * *v;
            }
            acc.re
        }
        Axis::Y => {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (s, v) in vector.iter().enumerate() {
                let si = T::one() - T::lit(2.0) * T::lit(((s >> i) & 1) as f64);
                // <s'|sigma_y|s> = i s
                acc = acc + vector[s ^ (1 << i)].conj() * Complex::new(T::zero(), si) * *v;
            }
            acc.re
        }
    }
}

//! Dense complex linear algebra for small (K x K) matrices: pivoted LU and a
//! Schur-based general eigensolver. K is the number of targeted eigenstates,
//! typically 1..8, so everything here is written for clarity over blocking.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

/// LU factorization with partial pivoting of a row-major `k x k` matrix.
pub struct Lu<T: Scalar> {
    k: usize,
    lu: Vec<C<T>>,
    perm: Vec<usize>,
    odd_swaps: bool,
    min_pivot: T,
}

pub fn lu_decompose<T: Scalar>(a: &[C<T>], k: usize) -> Lu<T> {
    debug_assert_eq!(a.len(), k * k);
    let mut lu = a.to_vec();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut odd = false;
    let mut min_pivot = T::infinity();
    for col in 0..k {
        let mut best = col;
        let mut best_mag = lu[col * k + col].norm_sqr();
        for row in (col + 1)..k {
            let mag = lu[row * k + col].norm_sqr();
            if mag > best_mag {
                best_mag = mag;
                best = row;
            }
        }
        if best != col {
            for j in 0..k {
                lu.swap(col * k + j, best * k + j);
            }
            perm.swap(col, best);
            odd = !odd;
        }
        let pivot = lu[col * k + col];
        let pivot_mag = pivot.norm();
        if pivot_mag < min_pivot {
            min_pivot = pivot_mag;
        }
        if pivot_mag == T::zero() {
            continue; // singular; min_pivot records it
        }
        for row in (col + 1)..k {
            let factor = lu[row * k + col] / pivot;
            lu[row * k + col] = factor;
            for j in (col + 1)..k {
                let sub = factor * lu[col * k + j];
                lu[row * k + j] = lu[row * k + j] - sub;
            }
        }
    }
    Lu {
        k,
        lu,
        perm,
        odd_swaps: odd,
        min_pivot,
    }
}

impl<T: Scalar> Lu<T> {
    /// Smallest pivot magnitude; zero (or tiny) signals singularity.
    pub fn min_pivot(&self) -> T {
        self.min_pivot
    }

    /// `log det` accumulated factor-by-factor (principal branch per factor),
    /// finite only for nonsingular input.
    pub fn log_det(&self) -> C<T> {
        let mut acc = C::new(T::zero(), T::zero());
        for i in 0..self.k {
            acc = acc + self.lu[i * self.k + i].ln();
        }
        if self.odd_swaps {
            acc = acc + C::new(T::zero(), T::PI());
        }
        acc
    }

    pub fn det(&self) -> C<T> {
        let mut acc = C::new(T::one(), T::zero());
        for i in 0..self.k {
            acc = acc * self.lu[i * self.k + i];
        }
        if self.odd_swaps {
            -acc
        } else {
            acc
        }
    }

    /// Solve `A x = b` in place.
    pub fn solve_into(&self, b: &mut [C<T>]) {
        let k = self.k;
        debug_assert_eq!(b.len(), k);
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..k {
            for j in 0..i {
                let sub = self.lu[i * k + j] * x[j];
                x[i] = x[i] - sub;
            }
        }
        for i in (0..k).rev() {
            for j in (i + 1)..k {
                let sub = self.lu[i * k + j] * x[j];
                x[i] = x[i] - sub;
            }
            x[i] = x[i] / self.lu[i * k + i];
        }
        b.copy_from_slice(&x);
    }

    /// Row-major inverse.
    pub fn inverse(&self) -> Vec<C<T>> {
        let k = self.k;
        let mut inv = vec![C::new(T::zero(), T::zero()); k * k];
        let mut col = vec![C::new(T::zero(), T::zero()); k];
        for c in 0..k {
            col.iter_mut().for_each(|v| *v = C::new(T::zero(), T::zero()));
            col[c] = C::new(T::one(), T::zero());
            self.solve_into(&mut col);
            for r in 0..k {
                inv[r * k + c] = col[r];
            }
        }
        inv
    }
}

/// Row-major matrix product `out = a * b`, all `k x k`.
pub fn matmul_small<T: Scalar>(a: &[C<T>], b: &[C<T>], k: usize) -> Vec<C<T>> {
    let zero = C::new(T::zero(), T::zero());
    let mut out = vec![zero; k * k];
    for i in 0..k {
        for l in 0..k {
            let ail = a[i * k + l];
            if ail == zero {
                continue;
            }
            for j in 0..k {
                let add = ail * b[l * k + j];
                out[i * k + j] = out[i * k + j] + add;
            }
        }
    }
    out
}

/// Result of the small dense eigensolve.
pub struct SmallEigen<T: Scalar> {
    /// Eigenvalues sorted ascending by real part (imaginary tie-break).
    pub values: Vec<C<T>>,
    /// Right eigenvectors, column `p` matches `values[p]`; row-major `k x k`.
    pub vectors: Vec<C<T>>,
    /// Set when a nearly defective triangular factor forced perturbed
    /// back-substitution (eigenvectors then come from the Schur form).
    pub schur_fallback: bool,
    /// Set when the QR iteration hit its sweep budget before full deflation.
    pub not_converged: bool,
}

/// Eigen-decomposition of a general complex `k x k` matrix via Hessenberg
/// reduction and shifted QR to Schur form, then back-substitution for the
/// eigenvectors.
pub fn eigen_small<T: Scalar>(a: &[C<T>], k: usize) -> Result<SmallEigen<T>> {
    if a.len() != k * k {
        return Err(Error::dim(a.len(), k * k, "eigen_small input"));
    }
    if !a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Constraint("eigen_small: non-finite input".into()));
    }
    let zero = C::new(T::zero(), T::zero());
    let one = C::new(T::one(), T::zero());

    if k == 1 {
        return Ok(SmallEigen {
            values: vec![a[0]],
            vectors: vec![one],
            schur_fallback: false,
            not_converged: false,
        });
    }

    // Hessenberg reduction by Householder reflections, accumulating Q.
    let mut h = a.to_vec();
    let mut q = identity::<T>(k);
    for col in 0..k.saturating_sub(2) {
        let mut norm2 = T::zero();
        for row in (col + 1)..k {
            norm2 = norm2 + h[row * k + col].norm_sqr();
        }
        let alpha = h[(col + 1) * k + col];
        let norm = norm2.sqrt();
        if norm <= T::epsilon() {
            continue;
        }
        // v = x + sign(alpha) |x| e1, reflector P = I - 2 v v^H / |v|^2
        let phase = if alpha.norm() > T::zero() {
            alpha / C::new(alpha.norm(), T::zero())
        } else {
            one
        };
        let mut v = vec![zero; k];
        for row in (col + 1)..k {
            v[row] = h[row * k + col];
        }
        v[col + 1] = v[col + 1] + phase * C::new(norm, T::zero());
        let vnorm2: T = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 <= T::zero() {
            continue;
        }
        let scale = T::lit(2.0) / vnorm2;
        // H <- P H P, Q <- Q P
        apply_householder_left(&mut h, k, &v, scale);
        apply_householder_right(&mut h, k, &v, scale);
        apply_householder_right(&mut q, k, &v, scale);
    }

    // Shifted QR with deflation; h stays upper Hessenberg throughout.
    let mut not_converged = false;
    let mut m = k; // active block is 0..m
    let mut sweeps = 0usize;
    let max_sweeps = 40 * k * k + 100;
    while m > 1 {
        sweeps += 1;
        if sweeps > max_sweeps {
            not_converged = true;
            break;
        }
        // deflate tiny subdiagonals anywhere in the active block
        let mut deflated = false;
        for i in (1..m).rev() {
            let sub = h[i * k + i - 1].norm();
            let local = h[(i - 1) * k + i - 1].norm() + h[i * k + i].norm();
            if sub <= T::epsilon() * (local + T::epsilon()) {
                h[i * k + i - 1] = zero;
                if i == m - 1 {
                    m -= 1;
                    deflated = true;
                }
                break;
            }
        }
        if deflated || m <= 1 {
            continue;
        }
        // Wilkinson shift from the trailing 2x2 of the active block
        let a11 = h[(m - 2) * k + m - 2];
        let a12 = h[(m - 2) * k + m - 1];
        let a21 = h[(m - 1) * k + m - 2];
        let a22 = h[(m - 1) * k + m - 1];
        let tr = a11 + a22;
        let det = a11 * a22 - a12 * a21;
        let disc = (tr * tr - C::new(T::lit(4.0), T::zero()) * det).sqrt();
        let half = C::new(T::lit(0.5), T::zero());
        let l1 = (tr + disc) * half;
        let l2 = (tr - disc) * half;
        let shift = if (l1 - a22).norm() < (l2 - a22).norm() {
            l1
        } else {
            l2
        };

        // explicit QR step on (H - shift I) restricted to the active block
        for i in 0..m {
            h[i * k + i] = h[i * k + i] - shift;
        }
        let mut rots: Vec<(T, C<T>)> = Vec::with_capacity(m - 1);
        for i in 0..(m - 1) {
            let (c, s) = givens(h[i * k + i], h[(i + 1) * k + i]);
            rots.push((c, s));
            rot_rows(&mut h, k, i, i + 1, c, s, i, k);
        }
        for (i, &(c, s)) in rots.iter().enumerate() {
            rot_cols(&mut h, k, i, i + 1, c, s, 0, (i + 2).min(m));
            rot_cols(&mut q, k, i, i + 1, c, s, 0, k);
        }
        for i in 0..m {
            h[i * k + i] = h[i * k + i] + shift;
        }
    }

    // h is now (numerically) upper triangular: the Schur factor.
    let tnorm: T = h.iter().map(|z| z.norm()).fold(T::zero(), |a, b| a.max(b));
    let safe = T::epsilon() * (tnorm + T::one());
    let mut schur_fallback = false;

    // Right eigenvectors of the triangular factor by back-substitution.
    let mut vectors = vec![zero; k * k];
    for p in 0..k {
        let lambda = h[p * k + p];
        let mut y = vec![zero; k];
        y[p] = one;
        for i in (0..p).rev() {
            let mut acc = zero;
            for j in (i + 1)..=p {
                acc = acc + h[i * k + j] * y[j];
            }
            let mut denom = h[i * k + i] - lambda;
            if denom.norm() < safe {
                denom = C::new(safe, T::zero());
                schur_fallback = true;
            }
            y[i] = -acc / denom;
        }
        // eigvec = Q y, normalized
        let mut norm2 = T::zero();
        for r in 0..k {
            let mut acc = zero;
            for j in 0..=p {
                acc = acc + q[r * k + j] * y[j];
            }
            vectors[r * k + p] = acc;
            norm2 = norm2 + acc.norm_sqr();
        }
        let inv = norm2.sqrt().recip();
        for r in 0..k {
            vectors[r * k + p] = vectors[r * k + p].scale(inv);
        }
    }

    let mut values: Vec<C<T>> = (0..k).map(|i| h[i * k + i]).collect();

    // sort ascending by real part, stably carrying the vectors along
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| {
        values[x]
            .re
            .partial_cmp(&values[y].re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                values[x]
                    .im
                    .partial_cmp(&values[y].im)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    let sorted_values: Vec<C<T>> = order.iter().map(|&i| values[i]).collect();
    let mut sorted_vectors = vec![zero; k * k];
    for (newcol, &oldcol) in order.iter().enumerate() {
        for r in 0..k {
            sorted_vectors[r * k + newcol] = vectors[r * k + oldcol];
        }
    }
    values = sorted_values;

    Ok(SmallEigen {
        values,
        vectors: sorted_vectors,
        schur_fallback,
        not_converged,
    })
}

fn identity<T: Scalar>(k: usize) -> Vec<C<T>> {
    let zero = C::new(T::zero(), T::zero());
    let mut m = vec![zero; k * k];
    for i in 0..k {
        m[i * k + i] = C::new(T::one(), T::zero());
    }
    m
}

/// `M <- (I - scale v v^H) M`
fn apply_householder_left<T: Scalar>(m: &mut [C<T>], k: usize, v: &[C<T>], scale: T) {
    for col in 0..k {
        let mut dot = C::new(T::zero(), T::zero());
        for row in 0..k {
            dot = dot + v[row].conj() * m[row * k + col];
        }
        let dot = dot.scale(scale);
        for row in 0..k {
            let sub = v[row] * dot;
            m[row * k + col] = m[row * k + col] - sub;
        }
    }
}

/// `M <- M (I - scale v v^H)`
fn apply_householder_right<T: Scalar>(m: &mut [C<T>], k: usize, v: &[C<T>], scale: T) {
    for row in 0..k {
        let mut dot = C::new(T::zero(), T::zero());
        for col in 0..k {
            dot = dot + m[row * k + col] * v[col];
        }
        let dot = dot.scale(scale);
        for col in 0..k {
            let sub = dot * v[col].conj();
            m[row * k + col] = m[row * k + col] - sub;
        }
    }
}

/// Complex Givens rotation: returns `(c, s)` with `c` real such that
/// `[c, s; -conj(s), c] [a; b] = [r; 0]`.
fn givens<T: Scalar>(a: C<T>, b: C<T>) -> (T, C<T>) {
    let an = a.norm();
    let bn = b.norm();
    if bn == T::zero() {
        return (T::one(), C::new(T::zero(), T::zero()));
    }
    if an == T::zero() {
        return (T::zero(), b.conj() / C::new(bn, T::zero()));
    }
    let t = (an * an + bn * bn).sqrt();
    let c = an / t;
    let s = (a / C::new(an, T::zero())) * b.conj() / C::new(t, T::zero());
    (c, s)
}

/// Rows `r1, r2 <- G [r1; r2]` over columns `lo..hi`.
fn rot_rows<T: Scalar>(
    m: &mut [C<T>],
    k: usize,
    r1: usize,
    r2: usize,
    c: T,
    s: C<T>,
    lo: usize,
    hi: usize,
) {
    for j in lo..hi {
        let x = m[r1 * k + j];
        let y = m[r2 * k + j];
        m[r1 * k + j] = x.scale(c) + s * y;
        m[r2 * k + j] = y.scale(c) - s.conj() * x;
    }
}

/// Columns `c1, c2 <- [c1, c2] G^H` over rows `lo..hi`.
fn rot_cols<T: Scalar>(
    m: &mut [C<T>],
    k: usize,
    c1: usize,
    c2: usize,
    c: T,
    s: C<T>,
    lo: usize,
    hi: usize,
) {
    for i in lo..hi {
        let x = m[i * k + c1];
        let y = m[i * k + c2];
        m[i * k + c1] = x.scale(c) + y * s.conj();
        m[i * k + c2] = y.scale(c) - x * s;
    }
}

/// Frobenius-ish condition estimate from 1-norms of `A` and `A^{-1}`.
pub fn condition_estimate<T: Scalar>(a: &[C<T>], inv: &[C<T>], k: usize) -> T {
    let one_norm = |m: &[C<T>]| -> T {
        (0..k)
            .map(|j| (0..k).map(|i| m[i * k + j].norm()).sum::<T>())
            .fold(T::zero(), |acc, v| acc.max(v))
    };
    one_norm(a) * one_norm(inv)
}

pub type Complex64 = Complex<f64>;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn randc(rng: &mut ChaCha8Rng) -> C<f64> {
        C::new(f64::standard_normal(rng), f64::standard_normal(rng))
    }

    #[test]
    fn lu_solves_and_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=6 {
            let a: Vec<C<f64>> = (0..k * k).map(|_| randc(&mut rng)).collect();
            let lu = lu_decompose(&a, k);
            let inv = lu.inverse();
            let prod = matmul_small(&a, &inv, k);
            for i in 0..k {
                for j in 0..k {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((prod[i * k + j] - C::new(expect, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn lu_log_det_matches_direct_2x2() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a: Vec<C<f64>> = (0..4).map(|_| randc(&mut rng)).collect();
            let direct = a[0] * a[3] - a[1] * a[2];
            let lu = lu_decompose(&a, 2);
            let d = lu.det();
            assert!((d - direct).norm() < 1e-12 * direct.norm().max(1.0));
            let ld = lu.log_det();
            assert!((ld.re - direct.norm().ln()).abs() < 1e-10);
            let dphase = crate::scalar::wrap_angle(ld.im - direct.arg());
            assert!(dphase.abs() < 1e-10);
        }
    }

    #[test]
    fn lu_detects_singular() {
        let a = vec![
            C::new(1.0, 0.0),
            C::new(2.0, 0.0),
            C::new(2.0, 0.0),
            C::new(4.0, 0.0),
        ];
        let lu = lu_decompose(&a, 2);
        assert!(lu.min_pivot() < 1e-12);
    }

    #[test]
    fn eigen_recovers_constructed_similarity() {
        // A^{-1} Lambda A with Lambda = diag(1, 2, 4)
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let k = 3;
            let a: Vec<C<f64>> = (0..k * k).map(|_| randc(&mut rng)).collect();
            let lu = lu_decompose(&a, k);
            if lu.min_pivot() < 1e-3 {
                continue;
            }
            let ainv = lu.inverse();
            let mut lam = vec![C::new(0.0, 0.0); k * k];
            lam[0] = C::new(1.0, 0.0);
            lam[k + 1] = C::new(2.0, 0.0);
            lam[2 * k + 2] = C::new(4.0, 0.0);
            let m = matmul_small(&ainv, &matmul_small(&lam, &a, k), k);
            let eig = eigen_small(&m, k).unwrap();
            assert!(!eig.not_converged);
            for (got, want) in eig.values.iter().zip([1.0, 2.0, 4.0]) {
                assert!(
                    (got - C::new(want, 0.0)).norm() < 1e-10,
                    "got {got}, want {want}"
                );
            }
            // residual check: M v = lambda v
            for p in 0..k {
                for i in 0..k {
                    let mut mv = C::new(0.0, 0.0);
                    for j in 0..k {
                        mv += m[i * k + j] * eig.vectors[j * k + p];
                    }
                    let rv = eig.values[p] * eig.vectors[i * k + p];
                    assert!((mv - rv).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn eigen_diagonal_input_is_identity_transform() {
        let k = 3;
        let mut m = vec![C::new(0.0, 0.0); k * k];
        m[0] = C::new(-5.0, 0.0);
        m[k + 1] = C::new(-3.0, 0.0);
        m[2 * k + 2] = C::new(-1.0, 0.0);
        let eig = eigen_small(&m, k).unwrap();
        assert_eq!(eig.values[0], C::new(-5.0, 0.0));
        assert_eq!(eig.values[1], C::new(-3.0, 0.0));
        assert_eq!(eig.values[2], C::new(-1.0, 0.0));
        for i in 0..k {
            for j in 0..k {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((eig.vectors[i * k + j] - C::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_handles_larger_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for k in 2..=8 {
            let m: Vec<C<f64>> = (0..k * k).map(|_| randc(&mut rng)).collect();
            let eig = eigen_small(&m, k).unwrap();
            assert!(!eig.not_converged);
            // trace and eigenvalue-sum agree
            let tr: C<f64> = (0..k).map(|i| m[i * k + i]).fold(C::new(0.0, 0.0), |a, b| a + b);
            let sum: C<f64> = eig.values.iter().fold(C::new(0.0, 0.0), |a, &b| a + b);
            assert!((tr - sum).norm() < 1e-9 * (1.0 + tr.norm()));
            for p in 0..k {
                let mut res = 0.0f64;
                for i in 0..k {
                    let mut mv = C::new(0.0, 0.0);
                    for j in 0..k {
                        mv += m[i * k + j] * eig.vectors[j * k + p];
                    }
                    res += (mv - eig.values[p] * eig.vectors[i * k + p]).norm_sqr();
                }
                assert!(res.sqrt() < 1e-8, "k={k} p={p} residual {}", res.sqrt());
            }
        }
    }
}

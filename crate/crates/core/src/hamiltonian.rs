//! Generic two-body spin Hamiltonians and the model constructors.
//!
//! `H = sum_{i<j} (cx_ij XX + cy_ij YY + cz_ij ZZ) + sum_i (hx_i X_i + hz_i Z_i)`
//! with symmetric, zero-diagonal coefficient matrices. Matrix elements are
//! evaluated bitwise on [`SpinConfig`]s: the diagonal from popcounts, the
//! off-diagonal as a lazy stream of single-flip (X field) and double-flip
//! (XX/YY) connections.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};
use crate::spin::SpinConfig;

/// One off-diagonal matrix element `<S'|H|S>`; `amplitude` is never zero.
#[derive(Clone, Debug)]
pub struct Connection<T: Scalar> {
    pub target: SpinConfig,
    pub amplitude: C<T>,
}

impl<T: Scalar> Connection<T> {
    /// Sites flipped between `origin` and `target` (one or two).
    pub fn flip_sites(&self, origin: &SpinConfig) -> Vec<usize> {
        origin.diff_sites(&self.target)
    }
}

#[derive(Clone, Debug)]
struct FlipPair<T> {
    i: u32,
    j: u32,
    /// amplitude when s_i != s_j: cx + cy
    anti: T,
    /// amplitude when s_i == s_j: cx - cy
    aligned: T,
}

#[derive(Clone, Debug)]
pub struct Hamiltonian<T: Scalar = f64> {
    n: usize,
    cx: Vec<T>,
    cy: Vec<T>,
    cz: Vec<T>,
    hx: Vec<T>,
    hz: Vec<T>,
    /// Uniform nearest-neighbor periodic ZZ coupling, when the cz matrix has
    /// exactly that shape (n >= 3): enables the rotate/xor/popcount path.
    zz_uniform_nn: Option<T>,
    zz_pairs: Vec<(u32, u32, T)>,
    hz_sites: Vec<(u32, T)>,
    hx_sites: Vec<(u32, T)>,
    flip_pairs: Vec<FlipPair<T>>,
}

impl<T: Scalar> Hamiltonian<T> {
    /// Build from dense coefficient matrices (row-major `n*n`) and fields.
    pub fn new(
        n: usize,
        cx: Vec<T>,
        cy: Vec<T>,
        cz: Vec<T>,
        hx: Vec<T>,
        hz: Vec<T>,
    ) -> Result<Self> {
        if n == 0 || n > crate::spin::MAX_SPINS {
            return Err(Error::constraint(format!("spin count {n} out of range")));
        }
        for (name, m) in [("cx", &cx), ("cy", &cy), ("cz", &cz)] {
            if m.len() != n * n {
                return Err(Error::dim(m.len(), n * n, "coupling matrix size"));
            }
            for i in 0..n {
                if m[i * n + i] != T::zero() {
                    return Err(Error::constraint(format!("{name} has nonzero diagonal")));
                }
                for j in 0..i {
                    if m[i * n + j] != m[j * n + i] {
                        return Err(Error::constraint(format!("{name} not symmetric")));
                    }
                }
            }
        }
        if hx.len() != n || hz.len() != n {
            return Err(Error::dim(hx.len().max(hz.len()), n, "field vector size"));
        }

        let mut zz_pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if cz[i * n + j] != T::zero() {
                    zz_pairs.push((i as u32, j as u32, cz[i * n + j]));
                }
            }
        }
        let zz_uniform_nn = Self::detect_uniform_nn(n, &zz_pairs);

        let hz_sites = hz
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != T::zero())
            .map(|(i, v)| (i as u32, *v))
            .collect();
        let hx_sites = hx
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != T::zero())
            .map(|(i, v)| (i as u32, *v))
            .collect();

        let mut flip_pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let x = cx[i * n + j];
                let y = cy[i * n + j];
                if x != T::zero() || y != T::zero() {
                    flip_pairs.push(FlipPair {
                        i: i as u32,
                        j: j as u32,
                        anti: x + y,
                        aligned: x - y,
                    });
                }
            }
        }

        Ok(Hamiltonian {
            n,
            cx,
            cy,
            cz,
            hx,
            hz,
            zz_uniform_nn,
            zz_pairs,
            hz_sites,
            hx_sites,
            flip_pairs,
        })
    }

    /// Recognize `cz` = constant coupling on all n periodic NN bonds, nothing else.
    fn detect_uniform_nn(n: usize, pairs: &[(u32, u32, T)]) -> Option<T> {
        if n < 3 || pairs.len() != n {
            return None;
        }
        let c = pairs[0].2;
        let nn = |i: u32, j: u32| {
            let d = (j - i) as usize; // i < j always
            d == 1 || d == n - 1
        };
        pairs.iter().all(|&(i, j, v)| v == c && nn(i, j)).then_some(c)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cx(&self, i: usize, j: usize) -> T {
        self.cx[i * self.n + j]
    }
    pub fn cy(&self, i: usize, j: usize) -> T {
        self.cy[i * self.n + j]
    }
    pub fn cz(&self, i: usize, j: usize) -> T {
        self.cz[i * self.n + j]
    }
    pub fn hx(&self, i: usize) -> T {
        self.hx[i]
    }
    pub fn hz(&self, i: usize) -> T {
        self.hz[i]
    }

    /// True when the operator has off-diagonal matrix elements.
    pub fn has_offdiagonal(&self) -> bool {
        !self.hx_sites.is_empty() || !self.flip_pairs.is_empty()
    }

    fn check_dim(&self, config: &SpinConfig) -> Result<()> {
        if config.n() != self.n {
            return Err(Error::dim(config.n(), self.n, "config vs operator"));
        }
        Ok(())
    }

    /// Diagonal matrix element `<S|H|S> = sum_{i<j} cz_ij s_i s_j + sum_i hz_i s_i`.
    pub fn diag_energy(&self, config: &SpinConfig) -> Result<T> {
        self.check_dim(config)?;
        Ok(self.diag_energy_unchecked(config))
    }

    #[inline]
    pub(crate) fn diag_energy_unchecked(&self, config: &SpinConfig) -> T {
        let mut e = T::zero();
        if let Some(c) = self.zz_uniform_nn {
            let anti = config.antiparallel_nn_periodic() as i32;
            e = e + c * T::lit((self.n as i32 - 2 * anti) as f64);
        } else {
            for &(i, j, c) in &self.zz_pairs {
                let sign = config.bit(i as usize) ^ config.bit(j as usize);
                let term = if sign { -c } else { c };
                e = e + term;
            }
        }
        for &(i, h) in &self.hz_sites {
            e = e + if config.bit(i as usize) { -h } else { h };
        }
        e
    }

    /// Lazy stream of off-diagonal connections from `config`: single flips
    /// with amplitude `hx_i`, then double flips with amplitude `cx+cy`
    /// (antiparallel pair) or `cx-cy` (aligned pair). Zero amplitudes are
    /// never emitted.
    pub fn connections<'a>(
        &'a self,
        config: &'a SpinConfig,
    ) -> Result<impl Iterator<Item = Connection<T>> + 'a> {
        self.check_dim(config)?;
        Ok(self.connections_unchecked(config))
    }

    pub(crate) fn connections_unchecked<'a>(
        &'a self,
        config: &'a SpinConfig,
    ) -> impl Iterator<Item = Connection<T>> + 'a {
        let singles = self.hx_sites.iter().map(move |&(i, h)| Connection {
            target: config.flipped(i as usize),
            amplitude: Complex::new(h, T::zero()),
        });
        let doubles = self.flip_pairs.iter().filter_map(move |p| {
            let anti = config.bit(p.i as usize) != config.bit(p.j as usize);
            let amp = if anti { p.anti } else { p.aligned };
            (amp != T::zero()).then(|| Connection {
                target: config.flipped(p.i as usize).flipped(p.j as usize),
                amplitude: Complex::new(amp, T::zero()),
            })
        });
        singles.chain(doubles)
    }
}

/// Transverse-field Ising chain `-sum_i Z_i Z_{i+1} + h sum_i X_i`.
pub fn build_tfim<T: Scalar>(n: usize, h: T, periodic: bool) -> Result<Hamiltonian<T>> {
    if n < 2 {
        return Err(Error::constraint("tfim requires n >= 2"));
    }
    let mut cz = vec![T::zero(); n * n];
    for i in 0..(n - 1) {
        cz[i * n + i + 1] = -T::one();
        cz[(i + 1) * n + i] = -T::one();
    }
    if periodic {
        // n = 2: the wrap bond coincides with the direct bond (single entry)
        cz[n - 1] = -T::one();
        cz[(n - 1) * n] = -T::one();
    }
    Hamiltonian::new(
        n,
        vec![T::zero(); n * n],
        vec![T::zero(); n * n],
        cz,
        vec![h; n],
        vec![T::zero(); n],
    )
}

fn build_nn_xyz<T: Scalar>(n: usize, x: T, y: T, z: T) -> Result<Hamiltonian<T>> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::constraint(
            "nearest-neighbor Heisenberg-type chains require even n >= 4",
        ));
    }
    let mut cx = vec![T::zero(); n * n];
    let mut cy = vec![T::zero(); n * n];
    let mut cz = vec![T::zero(); n * n];
    for i in 0..n {
        let j = (i + 1) % n;
        cx[i * n + j] = x;
        cx[j * n + i] = x;
        cy[i * n + j] = y;
        cy[j * n + i] = y;
        cz[i * n + j] = z;
        cz[j * n + i] = z;
    }
    Hamiltonian::new(n, cx, cy, cz, vec![T::zero(); n], vec![T::zero(); n])
}

/// XXZ chain `sum_i (-XX - YY + ZZ)`, periodic; stoquastic in the z basis.
pub fn build_xxz<T: Scalar>(n: usize) -> Result<Hamiltonian<T>> {
    build_nn_xyz(n, -T::one(), -T::one(), T::one())
}

/// Antiferromagnetic Heisenberg chain `sum_i (XX + YY + ZZ)`, periodic.
pub fn build_afh<T: Scalar>(n: usize) -> Result<Hamiltonian<T>> {
    build_nn_xyz(n, T::one(), T::one(), T::one())
}

/// Haldane-Shastry chain: `sum_{i<j} (XX + YY + ZZ) / d_ij^2` with the chord
/// distance `d_ij = (n/pi) |sin(pi (i-j)/n)|`.
pub fn build_haldane_shastry<T: Scalar>(n: usize) -> Result<Hamiltonian<T>> {
    if n < 4 {
        return Err(Error::constraint("haldane_shastry requires n >= 4"));
    }
    let mut cx = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = chord_distance::<T>(n, i, j);
                cx[i * n + j] = (d * d).recip();
            }
        }
    }
    let cy = cx.clone();
    let cz = cx.clone();
    Hamiltonian::new(n, cx, cy, cz, vec![T::zero(); n], vec![T::zero(); n])
}

/// Chord length between sites `i` and `j` on a ring of `n` sites.
pub fn chord_distance<T: Scalar>(n: usize, i: usize, j: usize) -> T {
    let nn = T::lit(n as f64);
    let arg = T::PI() * T::lit(i as f64 - j as f64) / nn;
    (nn / T::PI()) * arg.sin().abs()
}

/// Closed-form Haldane-Shastry eigenenergies,
/// `n (1/6 - mu/2 + mu^3/6 - (1+4mu)/(6 n^2)) pi^2` with `mu = 2m/n`.
/// Ground state at `m = n/2`, first excited at `m = n/2 - 1`.
pub fn hs_exact_energy<T: Scalar>(n: usize, m: usize) -> Result<T> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::constraint("hs_exact_energy requires even n"));
    }
    if m > n / 2 {
        return Err(Error::constraint(format!(
            "hs_exact_energy: m = {m} outside 0..={}",
            n / 2
        )));
    }
    let nf = T::lit(n as f64);
    let mu = T::lit(2.0 * m as f64) / nf;
    let sixth = T::lit(1.0 / 6.0);
    let val = sixth - mu / T::lit(2.0) + mu * mu * mu * sixth
        - (T::one() + T::lit(4.0) * mu) / (T::lit(6.0) * nf * nf);
    Ok(nf * val * T::PI() * T::PI())
}

/// Long-range Ising model `sum_{i != j} J_ij Z_i Z_j - h sum_i X_i`
/// (the ordered double sum counts every pair twice, so `cz = 2 J`).
/// The longitudinal field `h_i = 2 sum_j J_ij` is dropped by default; see
/// [`build_longrange_ising_with_field`] to re-enable it.
pub fn build_longrange_ising<T: Scalar>(j: &[T], n: usize, h: T) -> Result<Hamiltonian<T>> {
    build_longrange_ising_with_field(j, n, h, false)
}

pub fn build_longrange_ising_with_field<T: Scalar>(
    j: &[T],
    n: usize,
    h: T,
    include_longitudinal: bool,
) -> Result<Hamiltonian<T>> {
    if j.len() != n * n {
        return Err(Error::dim(j.len(), n * n, "J matrix size"));
    }
    for i in 0..n {
        if j[i * n + i] != T::zero() {
            return Err(Error::constraint("J has nonzero diagonal"));
        }
        for jj in 0..i {
            if j[i * n + jj] != j[jj * n + i] {
                return Err(Error::constraint("J not symmetric"));
            }
        }
    }
    let two = T::lit(2.0);
    let cz: Vec<T> = j.iter().map(|&v| two * v).collect();
    let hz = if include_longitudinal {
        (0..n)
            .map(|i| two * (0..n).map(|k| j[i * n + k]).sum::<T>())
            .collect()
    } else {
        vec![T::zero(); n]
    };
    Hamiltonian::new(
        n,
        vec![T::zero(); n * n],
        vec![T::zero(); n * n],
        cz,
        vec![-h; n],
        hz,
    )
}

/// Single-site or two-site diagonal observable `Z_i` / `Z_i Z_j` and friends,
/// expressed in the same operator type so the sampling path is uniform.
pub fn observable_zz<T: Scalar>(n: usize, i: usize, j: usize) -> Result<Hamiltonian<T>> {
    if i == j || i >= n || j >= n {
        return Err(Error::constraint("observable_zz needs distinct sites"));
    }
    let mut cz = vec![T::zero(); n * n];
    cz[i * n + j] = T::one();
    cz[j * n + i] = T::one();
    Hamiltonian::new(
        n,
        vec![T::zero(); n * n],
        vec![T::zero(); n * n],
        cz,
        vec![T::zero(); n],
        vec![T::zero(); n],
    )
}

pub fn observable_xx<T: Scalar>(n: usize, i: usize, j: usize) -> Result<Hamiltonian<T>> {
    if i == j || i >= n || j >= n {
        return Err(Error::constraint("observable_xx needs distinct sites"));
    }
    let mut cx = vec![T::zero(); n * n];
    cx[i * n + j] = T::one();
    cx[j * n + i] = T::one();
    Hamiltonian::new(
        n,
        cx,
        vec![T::zero(); n * n],
        vec![T::zero(); n * n],
        vec![T::zero(); n],
        vec![T::zero(); n],
    )
}

pub fn observable_z<T: Scalar>(n: usize, i: usize) -> Result<Hamiltonian<T>> {
    let mut hz = vec![T::zero(); n];
    hz[i] = T::one();
    Hamiltonian::new(
        n,
        vec![T::zero(); n * n],
        vec![T::zero(); n * n],
        vec![T::zero(); n * n],
        vec![T::zero(); n],
        hz,
    )
}

pub fn observable_x<T: Scalar>(n: usize, i: usize) -> Result<Hamiltonian<T>> {
    let mut hx = vec![T::zero(); n];
    hx[i] = T::one();
    Hamiltonian::new(
        n,
        vec![T::zero(); n * n],
        vec![T::zero(); n * n],
        vec![T::zero(); n * n],
        hx,
        vec![T::zero(); n],
    )
}

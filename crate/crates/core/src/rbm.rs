//! Complex restricted Boltzmann machine wavefunction.
//!
//! `psi(S) = exp(sum_i a_i s_i) * prod_j 2 cosh(theta_j)` with
//! `theta_j = b_j + sum_i w_ij s_i`. All arithmetic stays in the log domain;
//! a 512-spin amplitude overflows any fixed-width float, so amplitudes are
//! only ever exponentiated inside the (row-scaled) determinant assembly.
//!
//! [`RbmParams`] are the raw variational parameters; [`RbmNet`] is the
//! compiled form used during sampling, with `cosh(2 w_ij)`/`sinh(2 w_ij)`
//! tables so a flip ratio costs one multiply-add per hidden unit instead of
//! a complex `exp`.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{log_two_cosh, tanh_stable, Scalar, C};
use crate::spin::SpinConfig;
use crate::wavefunction::Wavefunction;

pub const DEFAULT_CACHE_REFRESH: u32 = 1000;

/// Raw variational parameters `{a, b, w}`; `w` is row-major `n x m`.
/// The flattened order is `(a, b, w)`, total length `n + m + n*m`.
#[derive(Clone, Debug, PartialEq)]
pub struct RbmParams<T: Scalar = f64> {
    pub n: usize,
    pub m: usize,
    pub a: Vec<C<T>>,
    pub b: Vec<C<T>>,
    pub w: Vec<C<T>>,
}

impl<T: Scalar> RbmParams<T> {
    pub fn zeros(n: usize, m: usize) -> Self {
        let zero = C::new(T::zero(), T::zero());
        RbmParams {
            n,
            m,
            a: vec![zero; n],
            b: vec![zero; m],
            w: vec![zero; n * m],
        }
    }

    /// Gaussian initialization with total complex variances
    /// `1/n` for `a`, `1/m` for `b`, `1/(n m)` for `w`; the variance is
    /// split evenly between real and imaginary parts.
    pub fn init<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::constraint("rbm init requires n, m >= 1"));
        }
        let half = T::lit(0.5);
        let sd_a = (half / T::lit(n as f64)).sqrt();
        let sd_b = (half / T::lit(m as f64)).sqrt();
        let sd_w = (half / T::lit((n * m) as f64)).sqrt();
        let mut draw = |sd: T| {
            C::new(
                T::standard_normal(rng) * sd,
                T::standard_normal(rng) * sd,
            )
        };
        let a = (0..n).map(|_| draw(sd_a)).collect();
        let b = (0..m).map(|_| draw(sd_b)).collect();
        let w = (0..n * m).map(|_| draw(sd_w)).collect();
        Ok(RbmParams { n, m, a, b, w })
    }

    pub fn param_len(&self) -> usize {
        self.n + self.m + self.n * self.m
    }

    pub fn flatten_into(&self, out: &mut [C<T>]) {
        debug_assert_eq!(out.len(), self.param_len());
        out[..self.n].copy_from_slice(&self.a);
        out[self.n..self.n + self.m].copy_from_slice(&self.b);
        out[self.n + self.m..].copy_from_slice(&self.w);
    }

    /// `W <- W + coeff * delta` over the flattened order.
    pub fn axpy(&mut self, coeff: T, delta: &[C<T>]) {
        debug_assert_eq!(delta.len(), self.param_len());
        let c = C::new(coeff, T::zero());
        for (i, v) in self.a.iter_mut().enumerate() {
            *v = *v + c * delta[i];
        }
        for (j, v) in self.b.iter_mut().enumerate() {
            *v = *v + c * delta[self.n + j];
        }
        for (l, v) in self.w.iter_mut().enumerate() {
            *v = *v + c * delta[self.n + self.m + l];
        }
    }

    pub fn all_finite(&self) -> bool {
        self.a
            .iter()
            .chain(&self.b)
            .chain(&self.w)
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// The even-site Z transformation: shifts `a` on 1-based even sites by
    /// `-i pi/2`, mapping an XXZ eigenstate to the corresponding
    /// antiferromagnetic-Heisenberg eigenstate. Pure phase:
    /// `psi'(S)/psi(S) = prod_{even i} (-i s_i)`.
    pub fn apply_even_site_z(&self) -> Result<Self> {
        if self.n % 2 != 0 {
            return Err(Error::constraint("even-site Z transform requires even n"));
        }
        let mut out = self.clone();
        let shift = C::new(T::zero(), T::FRAC_PI_2());
        for i in (1..self.n).step_by(2) {
            out.a[i] = out.a[i] - shift;
        }
        Ok(out)
    }
}

/// Per-configuration lookup table: `theta`, `tanh theta`, and the running
/// log-amplitude with its phase tracked continuously through flip updates.
#[derive(Clone, Debug)]
pub struct RbmCache<T: Scalar> {
    pub theta: Vec<C<T>>,
    pub tanh_theta: Vec<C<T>>,
    pub log_psi: C<T>,
    flips_since_refresh: u32,
}

/// Compiled network: parameters plus flip tables.
#[derive(Clone, Debug)]
pub struct RbmNet<T: Scalar = f64> {
    params: RbmParams<T>,
    exp_p2a: Vec<C<T>>,
    exp_m2a: Vec<C<T>>,
    cosh2w: Vec<C<T>>,
    sinh2w: Vec<C<T>>,
    pub cache_refresh: u32,
}

impl<T: Scalar> RbmNet<T> {
    pub fn compile(params: RbmParams<T>) -> Self {
        let two = C::new(T::lit(2.0), T::zero());
        let exp_p2a = params.a.iter().map(|&a| (two * a).exp()).collect();
        let exp_m2a = params.a.iter().map(|&a| (-two * a).exp()).collect();
        let mut cosh2w = Vec::with_capacity(params.w.len());
        let mut sinh2w = Vec::with_capacity(params.w.len());
        for &w in &params.w {
            let e = (two * w).exp();
            let einv = (-two * w).exp();
            let half = T::lit(0.5);
            cosh2w.push((e + einv).scale(half));
            sinh2w.push((e - einv).scale(half));
        }
        RbmNet {
            params,
            exp_p2a,
            exp_m2a,
            cosh2w,
            sinh2w,
            cache_refresh: DEFAULT_CACHE_REFRESH,
        }
    }

    pub fn params(&self) -> &RbmParams<T> {
        &self.params
    }

    pub fn into_params(self) -> RbmParams<T> {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    fn theta(&self, config: &SpinConfig) -> Vec<C<T>> {
        let (n, m) = (self.params.n, self.params.m);
        let mut theta = self.params.b.clone();
        for i in 0..n {
            let s = config.spin::<T>(i);
            let row = &self.params.w[i * m..(i + 1) * m];
            for (t, &w) in theta.iter_mut().zip(row) {
                *t = *t + w.scale(s);
            }
        }
        theta
    }

    /// Log-amplitude from scratch.
    pub fn log_psi_config(&self, config: &SpinConfig) -> C<T> {
        self.log_psi(&self.make_cache(config))
    }

    /// Flip-ratio factor for hidden unit j and a flip of `site` with current
    /// spin `s`: `cosh(2 w s) - tanh(theta) sinh(2 w s)`.
    #[inline]
    fn site_factor(&self, site: usize, j: usize, s: T, tanh_theta: C<T>) -> C<T> {
        let idx = site * self.params.m + j;
        self.cosh2w[idx] - tanh_theta * self.sinh2w[idx].scale(s)
    }

    #[inline]
    fn a_factor(&self, site: usize, s: T) -> C<T> {
        // e^{-2 a_i s_i}
        if s > T::zero() {
            self.exp_m2a[site]
        } else {
            self.exp_p2a[site]
        }
    }
}

impl<T: Scalar> Wavefunction<T> for RbmNet<T> {
    type Cache = RbmCache<T>;

    fn n(&self) -> usize {
        self.params.n
    }

    fn param_len(&self) -> usize {
        self.params.param_len()
    }

    fn make_cache(&self, config: &SpinConfig) -> RbmCache<T> {
        let theta = self.theta(config);
        let tanh_theta = theta.iter().map(|&t| tanh_stable(t)).collect();
        let mut log_psi = C::new(T::zero(), T::zero());
        for i in 0..self.params.n {
            log_psi = log_psi + self.params.a[i].scale(config.spin::<T>(i));
        }
        for &t in &theta {
            log_psi = log_psi + log_two_cosh(t);
        }
        RbmCache {
            theta,
            tanh_theta,
            log_psi,
            flips_since_refresh: 0,
        }
    }

    fn log_psi(&self, cache: &RbmCache<T>) -> C<T> {
        cache.log_psi
    }

    fn ratio(&self, cache: &RbmCache<T>, config: &SpinConfig, sites: &[usize]) -> C<T> {
        let m = self.params.m;
        match *sites {
            [i] => {
                let s = config.spin::<T>(i);
                let mut r = self.a_factor(i, s);
                for j in 0..m {
                    r = r * self.site_factor(i, j, s, cache.tanh_theta[j]);
                }
                r
            }
            [i1, i2] => {
                let s1 = config.spin::<T>(i1);
                let s2 = config.spin::<T>(i2);
                let mut r = self.a_factor(i1, s1) * self.a_factor(i2, s2);
                for j in 0..m {
                    let cu = self.cosh2w[i1 * m + j];
                    let su = self.sinh2w[i1 * m + j].scale(s1);
                    let cv = self.cosh2w[i2 * m + j];
                    let sv = self.sinh2w[i2 * m + j].scale(s2);
                    let cosh_uv = cu * cv + su * sv;
                    let sinh_uv = su * cv + cu * sv;
                    r = r * (cosh_uv - cache.tanh_theta[j] * sinh_uv);
                }
                r
            }
            _ => {
                // general fallback via log-domain difference
                let two = T::lit(2.0);
                let mut delta_a = C::new(T::zero(), T::zero());
                let mut log_ratio = C::new(T::zero(), T::zero());
                let mut theta_new = cache.theta.clone();
                for &i in sites {
                    let s = config.spin::<T>(i);
                    delta_a = delta_a - self.params.a[i].scale(two * s);
                    for (j, t) in theta_new.iter_mut().enumerate() {
                        *t = *t - self.params.w[i * m + j].scale(two * s);
                    }
                }
                for j in 0..m {
                    log_ratio =
                        log_ratio + log_two_cosh(theta_new[j]) - log_two_cosh(cache.theta[j]);
                }
                (delta_a + log_ratio).exp()
            }
        }
    }

    fn update_flip(&self, cache: &mut RbmCache<T>, config: &SpinConfig, site: usize) {
        let m = self.params.m;
        let s = config.spin::<T>(site);
        let two = T::lit(2.0);
        let mut ratio = self.a_factor(site, s);
        for j in 0..m {
            let c2w = self.cosh2w[site * m + j];
            let s2w = self.sinh2w[site * m + j].scale(s);
            let t = cache.tanh_theta[j];
            let den = c2w - t * s2w;
            // tanh(theta - 2ws) = (tanh cosh(2ws) - sinh(2ws)) / (cosh(2ws) - tanh sinh(2ws))
            let num = t * c2w - s2w;
            let new_t = num / den;
            cache.theta[j] = cache.theta[j] - self.params.w[site * m + j].scale(two * s);
            cache.tanh_theta[j] = if new_t.re.is_finite() && new_t.im.is_finite() {
                new_t
            } else {
                tanh_stable(cache.theta[j])
            };
            ratio = ratio * den;
        }
        cache.log_psi = cache.log_psi + ratio.ln();
        cache.flips_since_refresh += 1;
        if cache.flips_since_refresh >= self.cache_refresh {
            let after = config.flipped(site);
            self.refresh(cache, &after);
        }
    }

    fn refresh(&self, cache: &mut RbmCache<T>, config: &SpinConfig) {
        *cache = self.make_cache(config);
    }

    fn derivatives_into(&self, cache: &RbmCache<T>, config: &SpinConfig, out: &mut [C<T>]) {
        let (n, m) = (self.params.n, self.params.m);
        debug_assert_eq!(out.len(), n + m + n * m);
        for i in 0..n {
            out[i] = C::new(config.spin::<T>(i), T::zero());
        }
        out[n..n + m].copy_from_slice(&cache.tanh_theta);
        for i in 0..n {
            let s = config.spin::<T>(i);
            let base = n + m + i * m;
            for j in 0..m {
                out[base + j] = cache.tanh_theta[j].scale(s);
            }
        }
    }
}

/// Brute-force log-amplitude by explicit summation over all `2^m` hidden
/// assignments of the defining energy function. Exponential in `m`;
/// this is the oracle the closed form is tested against.
pub fn log_psi_exhaustive<T: Scalar>(params: &RbmParams<T>, config: &SpinConfig) -> C<T> {
    let (n, m) = (params.n, params.m);
    assert!(m <= 20, "exhaustive hidden sum is exponential in m");
    let mut total = Complex::new(T::zero(), T::zero());
    for h_bits in 0..(1u64 << m) {
        let mut expo = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            expo = expo + params.a[i].scale(config.spin::<T>(i));
        }
        for j in 0..m {
            let h = if (h_bits >> j) & 1 == 1 {
                -T::one()
            } else {
                T::one()
            };
            expo = expo + params.b[j].scale(h);
            for i in 0..n {
                expo = expo + params.w[i * m + j].scale(config.spin::<T>(i) * h);
            }
        }
        total = total + expo.exp();
    }
    total.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::wrap_angle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_params(n: usize, m: usize, seed: u64) -> RbmParams<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RbmParams::init(n, m, &mut rng).unwrap()
    }

    fn log_close(a: C<f64>, b: C<f64>, tol: f64) -> bool {
        (a.re - b.re).abs() < tol && wrap_angle(a.im - b.im).abs() < tol
    }

    #[test]
    fn zero_params_give_m_log2() {
        let net = RbmNet::compile(RbmParams::<f64>::zeros(5, 8));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10 {
            let c = SpinConfig::random(5, &mut rng).unwrap();
            let lp = net.log_psi_config(&c);
            assert!((lp.re - 8.0 * std::f64::consts::LN_2).abs() < 1e-12);
            assert!(lp.im.abs() < 1e-12);
        }
    }

    #[test]
    fn log_psi_matches_exhaustive_hidden_sum() {
        let params = random_params(4, 3, 9);
        let net = RbmNet::compile(params.clone());
        for idx in 0..16u64 {
            let c = SpinConfig::from_index(4, idx).unwrap();
            let closed = net.log_psi_config(&c);
            let brute = log_psi_exhaustive(&params, &c);
            assert!(
                log_close(closed, brute, 1e-12),
                "config {idx}: {closed} vs {brute}"
            );
        }
    }

    #[test]
    fn pure_phase_parameter_flips_sign() {
        // a_1 = i pi/2, no hidden units: psi(s=+1)/psi(s=-1) = e^{i pi} = -1
        let mut params = RbmParams::<f64>::zeros(1, 1);
        params.m = 0;
        params.b.clear();
        params.w.clear();
        params.a[0] = C::new(0.0, std::f64::consts::FRAC_PI_2);
        let net = RbmNet::compile(params);
        let up = SpinConfig::all_up(1).unwrap();
        let down = up.flipped(0);
        let ratio = (net.log_psi_config(&up) - net.log_psi_config(&down)).exp();
        assert!((ratio - C::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn init_distribution_matches_stated_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut values = Vec::new();
        for _ in 0..10 {
            let p = RbmParams::<f64>::init(100, 300, &mut rng).unwrap();
            values.extend(p.a.iter().copied());
        }
        let var: f64 = values.iter().map(|z| z.norm_sqr()).sum::<f64>() / values.len() as f64;
        assert!((0.007..0.013).contains(&var), "var = {var}");
    }

    #[test]
    fn init_shape_and_determinism() {
        let p = random_params(1, 1, 1);
        assert_eq!(p.param_len(), 3);
        let p2 = random_params(1, 1, 1);
        assert_eq!(p, p2);
    }

    #[test]
    fn ratio_all_zero_params_is_one() {
        let net = RbmNet::compile(RbmParams::<f64>::zeros(6, 4));
        let c = SpinConfig::all_up(6).unwrap();
        let cache = net.make_cache(&c);
        for i in 0..6 {
            assert!((net.ratio(&cache, &c, &[i]) - C::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn ratio_matches_direct_recomputation() {
        let net = RbmNet::compile(random_params(6, 4, 77));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let c = SpinConfig::random(6, &mut rng).unwrap();
            let cache = net.make_cache(&c);
            let i = rng.random_range(0..6);
            let r = net.ratio(&cache, &c, &[i]);
            let direct = (net.log_psi_config(&c.flipped(i)) - net.log_psi_config(&c)).exp();
            assert!((r - direct).norm() / direct.norm() < 1e-10);
            // two-site ratio
            let j = (i + 1 + rng.random_range(0..5)) % 6;
            if j != i {
                let r2 = net.ratio(&cache, &c, &[i, j]);
                let direct2 =
                    (net.log_psi_config(&c.flipped(i).flipped(j)) - net.log_psi_config(&c)).exp();
                assert!((r2 - direct2).norm() / direct2.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn double_flip_ratio_is_involution() {
        let net = RbmNet::compile(random_params(5, 3, 13));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let c = SpinConfig::random(5, &mut rng).unwrap();
        let cache = net.make_cache(&c);
        for i in 0..5 {
            let r1 = net.ratio(&cache, &c, &[i]);
            let flipped = c.flipped(i);
            let cache2 = net.make_cache(&flipped);
            let r2 = net.ratio(&cache2, &flipped, &[i]);
            assert!((r1 * r2 - C::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn update_flip_tanh_matches_recomputed_theta() {
        let net = RbmNet::compile(random_params(6, 5, 21));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut c = SpinConfig::random(6, &mut rng).unwrap();
        let mut cache = net.make_cache(&c);
        for _ in 0..100 {
            let i = rng.random_range(0..6);
            net.update_flip(&mut cache, &c, i);
            c.flip(i);
            let fresh = net.make_cache(&c);
            for j in 0..5 {
                assert!((cache.tanh_theta[j] - fresh.tanh_theta[j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn flip_then_unflip_restores_cache() {
        let net = RbmNet::compile(random_params(4, 3, 31));
        let c = SpinConfig::all_up(4).unwrap();
        let original = net.make_cache(&c);
        let mut cache = original.clone();
        net.update_flip(&mut cache, &c, 2);
        let flipped = c.flipped(2);
        net.update_flip(&mut cache, &flipped, 2);
        for j in 0..3 {
            assert!((cache.theta[j] - original.theta[j]).norm() < 1e-12);
            assert!((cache.tanh_theta[j] - original.tanh_theta[j]).norm() < 1e-12);
        }
        assert!(log_close(cache.log_psi, original.log_psi, 1e-12));
    }

    #[test]
    fn long_flip_sequence_drift_below_1e9() {
        let net = RbmNet::compile(random_params(8, 6, 41));
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut c = SpinConfig::random(8, &mut rng).unwrap();
        let mut cache = net.make_cache(&c);
        for _ in 0..10_000 {
            let i = rng.random_range(0..8);
            net.update_flip(&mut cache, &c, i);
            c.flip(i);
        }
        let fresh = net.make_cache(&c);
        assert!(
            log_close(cache.log_psi, fresh.log_psi, 1e-9),
            "drift {} / {}",
            (cache.log_psi.re - fresh.log_psi.re).abs(),
            wrap_angle(cache.log_psi.im - fresh.log_psi.im).abs()
        );
    }

    #[test]
    fn derivatives_zero_params() {
        let net = RbmNet::compile(RbmParams::<f64>::zeros(4, 3));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = SpinConfig::random(4, &mut rng).unwrap();
        let cache = net.make_cache(&c);
        let mut d = vec![C::new(0.0, 0.0); net.param_len()];
        net.derivatives_into(&cache, &c, &mut d);
        for i in 0..4 {
            assert_eq!(d[i], C::new(c.spin::<f64>(i), 0.0));
        }
        for v in &d[4..] {
            assert_eq!(*v, C::new(0.0, 0.0));
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let params = random_params(4, 3, 55);
        let net = RbmNet::compile(params.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = SpinConfig::random(4, &mut rng).unwrap();
        let cache = net.make_cache(&c);
        let len = params.param_len();
        let mut d = vec![C::new(0.0, 0.0); len];
        net.derivatives_into(&cache, &c, &mut d);

        let eps = 1e-5;
        let mut flat = vec![C::new(0.0, 0.0); len];
        params.flatten_into(&mut flat);
        for l in 0..len {
            for (delta, expected_factor) in [
                (C::new(eps, 0.0), C::new(1.0, 0.0)),
                (C::new(0.0, eps), C::new(0.0, 1.0)),
            ] {
                let mut plus = params.clone();
                let mut minus = params.clone();
                let mut dv = vec![C::new(0.0, 0.0); len];
                dv[l] = delta;
                plus.axpy(1.0, &dv);
                minus.axpy(-1.0, &dv);
                let lp = RbmNet::compile(plus).log_psi_config(&c);
                let lm = RbmNet::compile(minus).log_psi_config(&c);
                let fd = (lp - lm) / C::new(2.0 * eps, 0.0);
                let expect = d[l] * expected_factor;
                assert!(
                    (fd - expect).norm() < 1e-6,
                    "param {l}: fd {fd} vs analytic {expect}"
                );
            }
        }
    }

    #[test]
    fn weight_derivative_identity() {
        let net = RbmNet::compile(random_params(5, 4, 91));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let c = SpinConfig::random(5, &mut rng).unwrap();
        let cache = net.make_cache(&c);
        let mut d = vec![C::new(0.0, 0.0); net.param_len()];
        net.derivatives_into(&cache, &c, &mut d);
        for i in 0..5 {
            for j in 0..4 {
                let dw = d[5 + 4 + i * 4 + j];
                let db = d[5 + j];
                assert!((dw - db.scale(c.spin::<f64>(i))).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn even_site_z_is_pure_phase() {
        let params = random_params(4, 2, 101);
        let transformed = params.apply_even_site_z().unwrap();
        let net = RbmNet::compile(params);
        let net_t = RbmNet::compile(transformed);
        for idx in 0..16u64 {
            let c = SpinConfig::from_index(4, idx).unwrap();
            let lp = net.log_psi_config(&c);
            let lt = net_t.log_psi_config(&c);
            assert!((lp.re - lt.re).abs() < 1e-12, "|psi| changed");
            // ratio = prod over even 1-based sites (0-based odd) of (-i s_i)
            let mut expect = C::new(1.0, 0.0);
            for i in (1..4).step_by(2) {
                expect *= C::new(0.0, -c.spin::<f64>(i));
            }
            let ratio = (lt - lp).exp();
            assert!((ratio - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn even_site_z_twice_shifts_by_i_pi() {
        let params = random_params(6, 2, 111);
        let twice = params
            .apply_even_site_z()
            .unwrap()
            .apply_even_site_z()
            .unwrap();
        for i in (1..6).step_by(2) {
            let d = twice.a[i] - params.a[i];
            assert!((d - C::new(0.0, -std::f64::consts::PI)).norm() < 1e-14);
        }
        let net = RbmNet::compile(params.clone());
        let net2 = RbmNet::compile(twice);
        let c = SpinConfig::from_index(6, 0b10110).unwrap();
        assert!(
            (net.log_psi_config(&c).re - net2.log_psi_config(&c).re).abs() < 1e-12,
            "modulus must be preserved"
        );
        assert!(params.apply_even_site_z().is_ok());
        assert!(random_params(5, 2, 1).apply_even_site_z().is_err());
    }
}

//! Complex Riemann zeta by Euler-Maclaurin summation, prime sieving, partial
//! Euler products, and a computed table of low nontrivial zeros.

use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::roots::newton;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,
    #[error("zero search failed at index {0}")]
    ConvergenceFailure(usize),
    #[error("only the first 50 nontrivial zeros are supported")]
    TooManyZeros,
    #[error("zero cache unusable: {0}")]
    Cache(String),
}

/// Euler-Maclaurin parameters. Defaults give 1e-12 relative accuracy over
/// `Re(s) >= -2`, `|Im(s)| <= 200`, `|s - 1| >= 1e-3`, except near the
/// corner `Re(s) = -2` with `|Im(s)|` in the hundreds, where f64
/// cancellation in the main sum floors the error around 1e-10.
#[derive(Clone, Debug)]
pub struct ZetaConfig {
    /// Base number of directly summed terms (grows with `|Im(s)|`).
    pub base_terms: usize,
    /// Number of Bernoulli correction terms.
    pub bernoulli_terms: usize,
    pub target_rel_err: f64,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        ZetaConfig {
            base_terms: 50,
            bernoulli_terms: 20,
            target_rel_err: 1e-13,
        }
    }
}

/// `B_{2k}` for `k = 1..=count`, computed exactly and rounded once.
fn bernoulli_even(count: usize) -> &'static [f64] {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    let v = CACHE.get_or_init(|| {
        let m = 2 * 40;
        let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
        for n in 0..=m {
            // B_n = -1/(n+1) * sum_{j<n} C(n+1, j) B_j
            if n == 0 {
                b.push(BigRational::one());
                continue;
            }
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one(); // C(n+1, 0)
            for (j, bj) in b.iter().enumerate().take(n) {
                acc += BigRational::from(binom.clone()) * bj;
                binom = &binom * BigInt::from(n as u64 + 1 - j as u64) / BigInt::from(j as u64 + 1);
            }
            b.push(-acc / BigRational::from(BigInt::from(n as u64 + 1)));
        }
        (1..=40).map(|k| b[2 * k].to_f64().unwrap()).collect()
    });
    &v[..count.min(v.len())]
}

/// Riemann zeta by Euler-Maclaurin with compensated summation. Rejects
/// points within `1e-9` of the pole. Relative accuracy is 1e-12 or better
/// away from the lower-left corner of the validated box; at `Re(s) = -2`
/// with `|Im(s)|` in the hundreds the alternating main sum cancels several
/// orders of magnitude and the f64 floor is nearer 1e-10.
pub fn riemann_zeta(s: Complex64, cfg: &ZetaConfig) -> Result<Complex64, ZetaError> {
    if (s - Complex64::new(1.0, 0.0)).norm() < 1e-9 {
        return Err(ZetaError::PoleAtOne);
    }
    let n = cfg.base_terms.max((1.4 * s.im.abs() + 30.0) as usize).min(5000);
    let nf = n as f64;
    // Kahan-compensated accumulation: the terms can dwarf the result when
    // Re(s) < 0
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let add = |sum: &mut Complex64, comp: &mut Complex64, x: Complex64| {
        let y = x - *comp;
        let t = *sum + y;
        *comp = (t - *sum) - y;
        *sum = t;
    };
    for k in 1..n {
        add(&mut sum, &mut comp, (-s * (k as f64).ln()).exp());
    }
    let npow = (-s * nf.ln()).exp(); // N^{-s}
    add(&mut sum, &mut comp, npow * nf / (s - Complex64::new(1.0, 0.0))); // N^{1-s}/(s-1)
    add(&mut sum, &mut comp, npow * 0.5);

    let b2k = bernoulli_even(cfg.bernoulli_terms.max(1));
    // term_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut poch = s; // s ... (s + 2k - 2), built incrementally
    let mut factorial = 2.0f64; // (2k)! for k = 1
    let mut npow_shift = npow * nf; // N^{-s+1}
    for (k, &b) in b2k.iter().enumerate().take(cfg.bernoulli_terms) {
        let kk = k + 1;
        npow_shift /= nf * nf; // N^{-s-2k+1}
        let term = poch * (b / factorial) * npow_shift;
        add(&mut sum, &mut comp, term);
        if term.norm() < cfg.target_rel_err * sum.norm() * 1e-2 {
            break;
        }
        // extend Pochhammer and factorial for the next k
        poch *= (s + Complex64::new((2 * kk - 1) as f64, 0.0))
            * (s + Complex64::new((2 * kk) as f64, 0.0));
        factorial *= ((2 * kk + 1) * (2 * kk + 2)) as f64;
    }
    Ok(sum)
}

/// All primes `<= m`, ascending (sieve of Eratosthenes).
pub fn primes_up_to(m: u64) -> Vec<u64> {
    if m < 2 {
        return Vec::new();
    }
    let m = m as usize;
    let mut composite = vec![false; m + 1];
    let mut out = Vec::new();
    for p in 2..=m {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut q = p * p;
        while q <= m {
            composite[q] = true;
            q += p;
        }
    }
    out
}

/// `prod_{p <= m} (1 - p^{-s})`.
pub fn partial_euler(s: Complex64, m: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for p in primes_up_to(m) {
        acc *= Complex64::new(1.0, 0.0) - (-s * (p as f64).ln()).exp();
    }
    acc
}

/// `zeta_M(s) = zeta(s) * prod_{p <= m} (1 - p^{-s})`: the zeta function with
/// the primes up to `m` removed; same zeros as `zeta` for `Re(s) > 0`.
pub fn zeta_m(s: Complex64, m: u64, cfg: &ZetaConfig) -> Result<Complex64, ZetaError> {
    Ok(riemann_zeta(s, cfg)? * partial_euler(s, m))
}

/// Ordinates `t_k` of the first `K` nontrivial zeros `1/2 + i t_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
}

impl ZeroTable {
    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// `rho` values for pole-candidate scans: the pole 1 plus both signs of
    /// each tabulated ordinate.
    pub fn rho_values(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(1.0, 0.0)];
        for &t in &self.ordinates {
            v.push(Complex64::new(0.5, t));
            v.push(Complex64::new(0.5, -t));
        }
        v
    }

    pub fn save_json(&self, path: &Path) -> Result<(), ZetaError> {
        let v = serde_json::json!({
            "k": self.ordinates.len(),
            "tolerance": 1e-10,
            "ordinates": self.ordinates,
        });
        std::fs::write(path, serde_json::to_string_pretty(&v).unwrap())
            .map_err(|e| ZetaError::Cache(e.to_string()))
    }

    pub fn load_json(path: &Path, k: usize) -> Option<ZeroTable> {
        let text = std::fs::read_to_string(path).ok()?;
        let v: serde_json::Value = serde_json::from_str(&text).ok()?;
        let ords = v.get("ordinates")?.as_array()?;
        if ords.len() < k {
            return None;
        }
        let ordinates: Option<Vec<f64>> = ords.iter().take(k).map(|x| x.as_f64()).collect();
        Some(ZeroTable { ordinates: ordinates? })
    }

    /// Loads a cached table when it covers `k`, otherwise computes and caches.
    pub fn load_or_compute(path: Option<&Path>, k: usize) -> Result<ZeroTable, ZetaError> {
        if let Some(p) = path {
            if let Some(t) = Self::load_json(p, k) {
                return Ok(t);
            }
        }
        let t = nontrivial_zeros(k)?;
        if let Some(p) = path {
            t.save_json(p)?;
        }
        Ok(t)
    }
}

/// Finds the first `k` zero ordinates by scanning `|zeta(1/2 + it)|` for dips
/// and polishing each with a complex Newton iteration. Each result satisfies
/// `|zeta(1/2 + i t)| < 1e-10`; ordinates are strictly increasing.
pub fn nontrivial_zeros(k: usize) -> Result<ZeroTable, ZetaError> {
    if k == 0 {
        return Ok(ZeroTable { ordinates: Vec::new() });
    }
    if k > 50 {
        return Err(ZetaError::TooManyZeros);
    }
    let cfg = ZetaConfig::default();
    let zeta = |s: Complex64| riemann_zeta(s, &cfg).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let f = |s: Complex64| {
        let h = 1e-6;
        let v = zeta(s);
        let dv = (zeta(s + Complex64::new(h, 0.0)) - zeta(s - Complex64::new(h, 0.0)))
            / Complex64::new(2.0 * h, 0.0);
        (v, dv)
    };

    let step = 0.05;
    let mut ordinates: Vec<f64> = Vec::new();
    let mut t = 2.0f64;
    let mut prev2 = zeta(Complex64::new(0.5, t - step)).norm();
    let mut prev1 = zeta(Complex64::new(0.5, t)).norm();
    while ordinates.len() < k && t < 150.0 {
        t += step;
        let cur = zeta(Complex64::new(0.5, t)).norm();
        if prev1 < prev2 && prev1 <= cur && prev1 < 1.0 {
            // local dip at t - step
            let seed = Complex64::new(0.5, t - step);
            if let Some(z) = newton(seed, f, 1e-11, 60) {
                if (z.re - 0.5).abs() < 1e-6 && z.im > 0.0 {
                    let ord = z.im;
                    let fresh = ordinates.iter().all(|&o| (o - ord).abs() > 1e-6);
                    if fresh {
                        ordinates.push(ord);
                    }
                }
            }
        }
        prev2 = prev1;
        prev1 = cur;
    }
    if ordinates.len() < k {
        return Err(ZetaError::ConvergenceFailure(ordinates.len()));
    }
    ordinates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ordinates.truncate(k);
    // residual validation
    for (i, &o) in ordinates.iter().enumerate() {
        let r = zeta(Complex64::new(0.5, o)).norm();
        if r >= 1e-10 {
            return Err(ZetaError::ConvergenceFailure(i));
        }
    }
    Ok(ZeroTable { ordinates })
}

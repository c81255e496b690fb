//! Cyclotomy machinery: cyclotomic polynomials, the one-variable classifier
//! (all roots on the unit circle, or an off-circle witness), the multivariate
//! semi-decision probe, and the binomial-type factor scan.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gamma::{gamma_table, mobius};
use crate::geometry::{primitive_vector, GeometryError};
use crate::poly::{GradedIndex, IntPoly, OneVarPoly};
use crate::roots::all_roots;

/// Euler's totient by trial division.
fn totient(d: u64) -> u64 {
    let mut d = d;
    let mut phi = d;
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            phi -= phi / p;
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        phi -= phi / d;
    }
    phi
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Exact division of integer polynomials; `None` unless the remainder is 0.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut r: Vec<BigInt> = num.to_vec();
    while r.last().map(|c| c.is_zero()).unwrap_or(false) {
        r.pop();
    }
    let mut d: Vec<BigInt> = den.to_vec();
    while d.last().map(|c| c.is_zero()).unwrap_or(false) {
        d.pop();
    }
    if d.is_empty() {
        return None;
    }
    if r.is_empty() {
        return Some(vec![BigInt::zero()]);
    }
    if r.len() < d.len() {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - d.len() + 1];
    let lead = d.last().unwrap().clone();
    for k in (0..q.len()).rev() {
        let idx = k + d.len() - 1;
        let (quot, rem) = num_integer::Integer::div_rem(&r[idx], &lead);
        if !rem.is_zero() {
            return None;
        }
        q[k] = quot;
        for (i, di) in d.iter().enumerate() {
            let v = &q[k] * di;
            r[k + i] -= v;
        }
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(q)
}

/// The `d`-th cyclotomic polynomial normalized to constant term 1
/// (so `Phi_1` becomes `1 - T`), via the Moebius product over divisors.
pub(crate) fn cyclotomic_poly_normalized(d: u64) -> Vec<BigInt> {
    assert!(d >= 1);
    let mut num: Vec<BigInt> = vec![BigInt::one()];
    let mut den: Vec<BigInt> = vec![BigInt::one()];
    let mut m = 1;
    while m * m <= d {
        if d % m == 0 {
            for div in [m, d / m] {
                if m * m == d && div != m {
                    continue;
                }
                let e = d / div;
                // factor (T^e - 1)^{mu(div)}
                let mut f = vec![BigInt::zero(); e as usize + 1];
                f[0] = -BigInt::one();
                f[e as usize] = BigInt::one();
                match mobius(div) {
                    1 => num = poly_mul(&num, &f),
                    -1 => den = poly_mul(&den, &f),
                    _ => {}
                }
                if m * m == d {
                    break;
                }
            }
        }
        m += 1;
    }
    let mut phi = poly_div_exact(&num, &den).expect("cyclotomic product divides exactly");
    // normalize constant term to +1
    if phi[0].is_negative() {
        for c in phi.iter_mut() {
            *c = -c.clone();
        }
    }
    debug_assert!(phi[0].is_one());
    phi
}

#[derive(Clone, Debug, PartialEq)]
pub enum EstermannResult {
    /// Multiset of `(d, multiplicity)`: the product of normalized `Phi_d`
    /// factors reproduces the input exactly.
    Cyclotomic(Vec<(u64, u32)>),
    /// A root off the unit circle, polished to residual below `1e-12`,
    /// with `||root| - 1| > 1e-6`.
    NotCyclotomic { witness: Complex64 },
}

/// Peels cyclotomic factors by exact trial division; classifies the rest by
/// locating an off-circle root of the residual polynomial.
pub fn estermann_classify(f: &OneVarPoly) -> Result<EstermannResult, GeometryError> {
    let mut cur: Vec<BigInt> = f.coeffs().to_vec();
    let orig_deg = cur.len() - 1;
    let mut found: Vec<(u64, u32)> = Vec::new();
    let d_cap = 2 * (orig_deg as u64) * (orig_deg as u64) + 6;
    for d in 1..=d_cap {
        if cur.len() == 1 {
            break;
        }
        if totient(d) > (cur.len() - 1) as u64 {
            continue;
        }
        let phi = cyclotomic_poly_normalized(d);
        let mut mult = 0u32;
        while let Some(q) = poly_div_exact(&cur, &phi) {
            cur = q;
            mult += 1;
            if cur.len() == 1 {
                break;
            }
        }
        if mult > 0 {
            found.push((d, mult));
        }
    }
    if cur.len() == 1 {
        debug_assert!(cur[0].is_one());
        return Ok(EstermannResult::Cyclotomic(found));
    }
    // residual has no cyclotomic factor; find an off-circle root
    let coeffs: Vec<f64> = cur.iter().map(|c| c.to_f64().unwrap()).collect();
    let roots = all_roots(&coeffs);
    for z in roots {
        if (z.norm() - 1.0).abs() > 1e-6 {
            return Ok(EstermannResult::NotCyclotomic { witness: z });
        }
    }
    Err(GeometryError::AmbiguousRoot)
}

/// A detected binomial-type divisor `Phi_d(X^lambda)` of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloFactor {
    pub d: u64,
    pub lambda: Vec<u32>,
}

type Sparse = BTreeMap<GradedIndex, BigInt>;

fn sparse_of(h: &IntPoly) -> Sparse {
    let mut m = Sparse::new();
    m.insert(GradedIndex(vec![0; h.var_count()]), BigInt::one());
    for t in h.terms() {
        m.insert(GradedIndex(t.exponents.clone()), t.coeff.clone());
    }
    m
}

fn sparse_mul(a: &Sparse, b: &Sparse, cap: Option<u64>) -> Sparse {
    let mut out = Sparse::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let exps: Vec<u32> = ka.0.iter().zip(&kb.0).map(|(&x, &y)| x + y).collect();
            if let Some(c) = cap {
                if exps.iter().map(|&e| e as u64).sum::<u64>() > c {
                    continue;
                }
            }
            let e = out.entry(GradedIndex(exps)).or_insert_with(BigInt::zero);
            *e += va * vb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `Phi_d(X^lambda)` as a sparse polynomial in `n` variables.
fn phi_in_direction(d: u64, lambda: &[u32], n: usize) -> Sparse {
    let phi = cyclotomic_poly_normalized(d);
    let mut out = Sparse::new();
    for (k, c) in phi.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let exps: Vec<u32> = (0..n).map(|i| lambda[i] * k as u32).collect();
        out.insert(GradedIndex(exps), c.clone());
    }
    out
}

/// Exact multivariate division test: does `g` divide `h`?
fn divides(h: &Sparse, g: &Sparse, n: usize, h_degree: u64) -> bool {
    // candidate quotient = h * g^{-1} truncated; verify by multiplying back
    let inv = series_inverse_signed(g, n, h_degree);
    let q: Sparse = sparse_mul(h, &inv, Some(h_degree));
    let back = sparse_mul(&q, g, None);
    back == *h
}

/// `g^{-1}` as a series (correct signs) to total degree `cap`; `g(0) = 1`.
fn series_inverse_signed(g: &Sparse, n: usize, cap: u64) -> Sparse {
    // 1/(1 + delta) = sum (-delta)^k
    let mut one = Sparse::new();
    one.insert(GradedIndex(vec![0; n]), BigInt::one());
    let mut delta = g.clone();
    delta.remove(&GradedIndex(vec![0; n]));
    let mut neg_delta = Sparse::new();
    for (k, v) in delta {
        neg_delta.insert(k, -v);
    }
    let mut inv = one.clone();
    let mut power = one;
    loop {
        power = sparse_mul(&power, &neg_delta, Some(cap));
        if power.is_empty() {
            break;
        }
        for (k, v) in &power {
            let e = inv.entry(k.clone()).or_insert_with(BigInt::zero);
            *e += v;
        }
    }
    inv.retain(|_, v| !v.is_zero());
    inv
}

/// Scans for divisors `Phi_d(X^lambda)` of `h`, with `lambda` running over the
/// primitive vectors of the exponent columns and `d <= d_bound`.
pub fn cyclotomic_factor_scan(h: &IntPoly, d_bound: u64) -> Vec<CycloFactor> {
    assert!(d_bound >= 1);
    let n = h.var_count();
    let hs = sparse_of(h);
    let hdeg = h.total_degree();
    let mut lambdas: Vec<Vec<u32>> = Vec::new();
    for t in h.terms() {
        let p = primitive_vector(&t.exponents);
        if !lambdas.contains(&p) {
            lambdas.push(p);
        }
    }
    let mut out = Vec::new();
    for lambda in &lambdas {
        let ldeg: u64 = lambda.iter().map(|&x| x as u64).sum();
        for d in 1..=d_bound {
            if totient(d) * ldeg > hdeg {
                continue;
            }
            let g = phi_in_direction(d, lambda, n);
            if divides(&hs, &g, n, hdeg) {
                out.push(CycloFactor { d, lambda: lambda.clone() });
            }
        }
    }
    out
}

/// Verdict of the multivariate cyclotomy probe.
#[derive(Clone, Debug, PartialEq)]
pub enum CyclotomyVerdict {
    /// `h` equals the finite product `prod (1 - X^lambda)^{gamma}` exactly
    /// (negative exponents verified as a cross-multiplied identity).
    Certificate(Vec<(Vec<u64>, BigInt)>),
    /// A direction along which the specialized polynomial has a root off the
    /// unit circle, so `h` cannot be cyclotomic.
    Witness {
        theta: Vec<u32>,
        root: Complex64,
        modulus: f64,
    },
    /// Neither route decided within the configured bounds.
    Inconclusive { exponent_bound: u64 },
}

#[derive(Clone, Debug)]
pub struct ProbeConfig {
    /// Bound on the total degree of candidate factor exponents `lambda`;
    /// 0 picks the default `4 * max column sum`.
    pub exponent_bound: u64,
    pub directions: u32,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { exponent_bound: 0, directions: 8, seed: 0 }
    }
}

/// Semi-decision of multivariate cyclotomy: exact reconstruction from the
/// aggregated expansion coefficients, then sampled-direction disproofs, else
/// inconclusive. A `Certificate` is a proof; a `Witness` is a disproof;
/// `Inconclusive` asserts nothing.
pub fn cyclotomy_probe(h: &IntPoly, cfg: &ProbeConfig) -> CyclotomyVerdict {
    let alpha = h.exponent_matrix();
    let max_col_sum: u64 = (0..alpha.col_count())
        .map(|j| alpha.col(j).iter().map(|&e| e as u64).sum())
        .max()
        .unwrap();
    let bound = if cfg.exponent_bound == 0 { 4 * max_col_sum } else { cfg.exponent_bound };
    let table_bound = u32::try_from(bound.min(24)).unwrap().max(1);

    if let Ok(table) = gamma_table(h, table_bound) {
        // aggregate Gamma(lambda) = sum_{alpha . beta^t = lambda} gamma(beta);
        // since ||lambda(beta)|| >= ||beta||, the sum is complete only for
        // ||lambda|| <= table bound, so larger lambda are discarded rather
        // than trusted (the exact product check below is the real gate)
        let mut agg: BTreeMap<Vec<u64>, BigInt> = BTreeMap::new();
        for (beta, g) in table.nonzero_entries() {
            let lambda = alpha.times_multiindex(beta);
            if lambda.iter().sum::<u64>() > table_bound as u64 {
                continue;
            }
            let e = agg.entry(lambda).or_insert_with(BigInt::zero);
            *e += g;
        }
        agg.retain(|_, v| !v.is_zero());
        // a plausible certificate is small; anything heavy goes straight to
        // the direction probe instead of an expensive doomed expansion
        let weight: u64 = agg
            .values()
            .map(|g| g.abs().to_u64().unwrap_or(u64::MAX))
            .sum();
        if agg.len() <= 32 && weight <= 64 {
            // candidate finite product; verify exactly:
            // h * prod_{gamma<0} (1-X^l)^{-gamma} == prod_{gamma>0} (1-X^l)^{gamma}
            let n = h.var_count();
            let mut lhs = sparse_of(h);
            let mut rhs = Sparse::new();
            rhs.insert(GradedIndex(vec![0; n]), BigInt::one());
            let mut ok = true;
            for (lambda, g) in &agg {
                let lam32: Vec<u32> = lambda
                    .iter()
                    .map(|&x| u32::try_from(x).unwrap_or(u32::MAX))
                    .collect();
                if lam32.iter().any(|&x| x == u32::MAX) {
                    ok = false;
                    break;
                }
                let mut factor = Sparse::new();
                factor.insert(GradedIndex(vec![0; n]), BigInt::one());
                factor.insert(GradedIndex(lam32), -BigInt::one());
                let e = g.abs().to_u64().unwrap_or(0).min(64);
                for _ in 0..e {
                    if g.is_positive() {
                        rhs = sparse_mul(&rhs, &factor, None);
                    } else {
                        lhs = sparse_mul(&lhs, &factor, None);
                    }
                }
            }
            if ok && lhs == rhs {
                let cert = agg.into_iter().collect();
                return CyclotomyVerdict::Certificate(cert);
            }
        }
    }

    // sampled directions with pairwise-distinct positive weights
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = h.var_count();
    for _ in 0..cfg.directions {
        let mut theta: Vec<u32> = Vec::with_capacity(n);
        let mut used = Vec::new();
        for _ in 0..n {
            loop {
                let w = rng.gen_range(1..=(3 * n as u32 + 5));
                if !used.contains(&w) {
                    used.push(w);
                    theta.push(w);
                    break;
                }
            }
        }
        let f = h.substitute_power(&theta);
        if let Ok(EstermannResult::NotCyclotomic { witness }) = estermann_classify(&f) {
            return CyclotomyVerdict::Witness {
                theta,
                root: witness,
                modulus: witness.norm(),
            };
        }
    }
    CyclotomyVerdict::Inconclusive { exponent_bound: bound }
}

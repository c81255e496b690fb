//! Numeric evaluation of `Z(s)` inside `W(delta)` through the factorization
//! `Z(s) = prod_{p <= M_delta} h(p^{-s}) * prod_beta zeta_M(s.alpha.beta^t)^{-gamma(beta)}`,
//! with truncation accounting, plus the direct Euler product as a cross-check
//! in the absolute-convergence region.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::gamma::{divisor_count, GammaTable};
use crate::poly::{ExponentMatrix, IntPoly};
use crate::zeta::{primes_up_to, riemann_zeta, ZeroTable, ZetaConfig, ZetaError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContinuationError {
    #[error("point lies outside W(0): min_j Re(s).alpha_j = {0}")]
    NotInDomain(f64),
    #[error("direct product needs Re(s).alpha_j > 1 for all j (min = {0})")]
    NotAbsolutelyConvergent(f64),
    #[error("factor for beta = {0:?} is within 1e-9 of a zeta pole or zero")]
    PoleHit(Vec<u32>),
    #[error("truncation tail uncontrolled: bound * delta <= 1; increase the beta bound")]
    TailNotControlled,
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularKind {
    Pole,
    ZetaZero,
}

/// A factor whose argument `s . alpha . beta^t` lies near a zeta pole or zero.
#[derive(Clone, Debug)]
pub struct SingularHit {
    pub beta: Vec<u32>,
    pub s_dot: Complex64,
    pub kind: SingularKind,
}

/// Result of a continued evaluation with its truncation metadata.
#[derive(Clone, Debug)]
pub struct EvalReport {
    pub value: Complex64,
    pub delta: f64,
    pub m_delta: u64,
    pub beta_bound: u32,
    /// Upper bound on the error from truncating the zeta-factor product,
    /// on the scale of `value`.
    pub tail_bound: f64,
    pub factors_near_singularity: Vec<SingularHit>,
}

impl EvalReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let hits: Vec<serde_json::Value> = self
            .factors_near_singularity
            .iter()
            .map(|h| {
                serde_json::json!({
                    "beta": h.beta,
                    "s_dot": {"re": h.s_dot.re, "im": h.s_dot.im},
                    "kind": match h.kind { SingularKind::Pole => "pole", SingularKind::ZetaZero => "zeta-zero" },
                })
            })
            .collect();
        serde_json::json!({
            "value": {"re": self.value.re, "im": self.value.im},
            "delta": self.delta,
            "m_delta": self.m_delta,
            "beta_bound": self.beta_bound,
            "tail_bound": self.tail_bound,
            "factors_near_singularity": hits,
        })
    }
}

/// `delta(s) = min_j Re(s) . alpha_{.j}`; the point must lie in `W(0)`.
pub fn delta_of(s: &[Complex64], alpha: &ExponentMatrix) -> Result<f64, ContinuationError> {
    let mut min = f64::INFINITY;
    for j in 0..alpha.col_count() {
        let d: f64 = s
            .iter()
            .zip(alpha.col(j))
            .map(|(si, &a)| si.re * a as f64)
            .sum();
        min = min.min(d);
    }
    if min <= 0.0 {
        return Err(ContinuationError::NotInDomain(min));
    }
    Ok(min)
}

/// Prime cutoff `M_delta = floor(C^{-1/delta}) + 1`.
pub fn m_delta(c: &BigRational, delta: f64) -> u64 {
    assert!(delta > 0.0, "m_delta needs delta > 0");
    let c = c.to_f64().expect("C(h) fits in f64");
    let v = (-c.ln() / delta).exp();
    v.floor() as u64 + 1
}

fn s_dot_col(s: &[Complex64], col: &[u32]) -> Complex64 {
    s.iter()
        .zip(col)
        .map(|(si, &a)| si * a as f64)
        .sum()
}

fn p_pow(p: u64, z: Complex64) -> Complex64 {
    // p^{-z} with the real logarithm of p
    (-z * (p as f64).ln()).exp()
}

fn h_at_prime(h: &IntPoly, s: &[Complex64], p: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for t in h.terms() {
        let z = s_dot_col(s, &t.exponents);
        acc += Complex64::new(t.coeff.to_f64().unwrap(), 0.0) * p_pow(p, z);
    }
    acc
}

/// `prod_{p <= p_cut} h(p^{-s_1},...,p^{-s_n})` with an integral-comparison
/// tail estimate. Requires absolute convergence: `Re(s).alpha_j > 1` for all `j`.
pub fn eval_z_direct(
    h: &IntPoly,
    s: &[Complex64],
    p_cut: u64,
) -> Result<(Complex64, f64), ContinuationError> {
    let alpha = h.exponent_matrix();
    let mut min = f64::INFINITY;
    for j in 0..alpha.col_count() {
        min = min.min(s_dot_col(s, alpha.col(j)).re);
    }
    if min <= 1.0 {
        return Err(ContinuationError::NotAbsolutelyConvergent(min));
    }
    let mut value = Complex64::new(1.0, 0.0);
    for p in primes_up_to(p_cut) {
        value *= h_at_prime(h, s, p);
    }
    // tail of the log: sum_{p > P} |log h| <= 2 sum_j |a_j| P^{1-c_j}/(c_j - 1)
    // (the factor 2 covers |log(1+w)| <= 2|w| for |w| <= 1/2)
    let pf = p_cut as f64;
    let mut log_tail = 0.0f64;
    let mut w_head = 0.0f64;
    for (j, a) in h.coeffs().enumerate() {
        let c = s_dot_col(s, alpha.col(j)).re;
        let aj = a.abs().to_f64().unwrap();
        log_tail += aj * pf.powf(1.0 - c) / (c - 1.0);
        w_head += aj * pf.powf(-c);
    }
    let tail = if w_head <= 0.5 {
        value.norm() * (2.0 * log_tail).exp_m1()
    } else {
        f64::INFINITY
    };
    Ok((value, tail))
}

/// Bound on the truncated log-tail
/// `sum_{||beta|| > B} |gamma(beta)| |log zeta_M| <=
///  sum_{k > B} 2 (tau(k)/k) C^{-k} M^{1-k delta} / (k delta - 1)`.
fn zeta_tail_log_bound(c: f64, m: u64, delta: f64, b: u32) -> f64 {
    let mf = m as f64;
    let ratio = mf.powf(-delta) / c;
    debug_assert!(ratio < 1.0, "M_delta guarantees a contracting tail");
    // terms computed in log space: k can reach hundreds and C^{-k} overflows
    let ln_term = |k: u64, tau_over_k: f64| -> f64 {
        let kf = k as f64;
        (2.0 * tau_over_k).ln() - kf * c.ln() + (1.0 - kf * delta) * mf.ln()
            - (kf * delta - 1.0).ln()
    };
    let mut total = 0.0;
    let mut k = b as u64 + 1;
    loop {
        let t = ln_term(k, divisor_count(k) as f64 / k as f64).exp();
        total += t;
        k += 1;
        if t < 1e-18 * total.max(1e-300) || k > b as u64 + 600 {
            break;
        }
    }
    // close the remainder geometrically with tau(k)/k <= 1
    let first = ln_term(k, 1.0).exp();
    total + first / (1.0 - ratio)
}

fn complex_pow_i64(z: Complex64, k: i64) -> Complex64 {
    // principal branch; deterministic
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    (z.ln() * k as f64).exp()
}

/// Meromorphic-continuation evaluation of `Z` at `s` in `W(0)` through the
/// finite `h`-product and the zeta-factor product over the table's `beta`.
pub fn eval_z_continued(
    h: &IntPoly,
    s: &[Complex64],
    table: &GammaTable,
    zeros: &ZeroTable,
    cfg: &ZetaConfig,
) -> Result<EvalReport, ContinuationError> {
    eval_z_continued_at_delta(h, s, table, zeros, cfg, None)
}

/// Like [`eval_z_continued`], with an optional downward override of `delta`
/// (a smaller `delta` means a larger prime cutoff and a faster-converging
/// zeta-factor product). The override must stay in `(0, delta(s)]`.
pub fn eval_z_continued_at_delta(
    h: &IntPoly,
    s: &[Complex64],
    table: &GammaTable,
    zeros: &ZeroTable,
    cfg: &ZetaConfig,
    delta_override: Option<f64>,
) -> Result<EvalReport, ContinuationError> {
    let alpha = h.exponent_matrix();
    let delta_s = delta_of(s, &alpha)?;
    let delta = match delta_override {
        Some(d) if d > 0.0 && d <= delta_s => d,
        Some(d) => return Err(ContinuationError::NotInDomain(d)),
        None => delta_s,
    };
    let b = table.bound();
    if b as f64 * delta <= 1.0 {
        return Err(ContinuationError::TailNotControlled);
    }
    let m = m_delta(table.c(), delta);

    let mut value = Complex64::new(1.0, 0.0);
    for p in primes_up_to(m) {
        value *= h_at_prime(h, s, p);
    }

    let mut hits = Vec::new();
    for (beta, gamma) in table.nonzero_entries() {
        let lam = alpha.times_multiindex(beta);
        let z: Complex64 = s
            .iter()
            .zip(&lam)
            .map(|(si, &l)| si * l as f64)
            .sum();
        // refuse to evaluate essentially on a flagged singularity
        let near_pole = (z - Complex64::new(1.0, 0.0)).norm();
        let mut near_zero = f64::INFINITY;
        for &t in zeros.ordinates() {
            near_zero = near_zero
                .min((z - Complex64::new(0.5, t)).norm())
                .min((z - Complex64::new(0.5, -t)).norm());
        }
        if near_pole < 1e-9 || near_zero < 1e-9 {
            return Err(ContinuationError::PoleHit(beta.to_vec()));
        }
        if near_pole < 1e-3 {
            hits.push(SingularHit { beta: beta.to_vec(), s_dot: z, kind: SingularKind::Pole });
        } else if near_zero < 1e-3 {
            hits.push(SingularHit { beta: beta.to_vec(), s_dot: z, kind: SingularKind::ZetaZero });
        }
        let zm = riemann_zeta(z, cfg).map_err(|_| ContinuationError::PoleHit(beta.to_vec()))?
            * crate::zeta::partial_euler(z, m);
        let g = gamma.to_i64().expect("gamma fits i64 at desk scale");
        value *= complex_pow_i64(zm, -g);
    }

    let c = table.c().to_f64().unwrap();
    let log_tail = zeta_tail_log_bound(c, m, delta, b);
    let tail_bound = value.norm() * log_tail.exp_m1();

    Ok(EvalReport {
        value,
        delta,
        m_delta: m,
        beta_bound: b,
        tail_bound,
        factors_near_singularity: hits,
    })
}

/// All table entries whose `s . alpha . beta^t` lies within `1e-3` of the
/// zeta pole or of a tabulated nontrivial zero.
pub fn singular_set_hits(
    s: &[Complex64],
    alpha: &ExponentMatrix,
    table: &GammaTable,
    zeros: &ZeroTable,
) -> Vec<SingularHit> {
    let mut hits = Vec::new();
    for (beta, _gamma) in table.nonzero_entries() {
        let lam = alpha.times_multiindex(beta);
        let z: Complex64 = s
            .iter()
            .zip(&lam)
            .map(|(si, &l)| si * l as f64)
            .sum();
        if (z - Complex64::new(1.0, 0.0)).norm() < 1e-3 {
            hits.push(SingularHit { beta: beta.to_vec(), s_dot: z, kind: SingularKind::Pole });
            continue;
        }
        for &t in zeros.ordinates() {
            if (z - Complex64::new(0.5, t)).norm() < 1e-3
                || (z - Complex64::new(0.5, -t)).norm() < 1e-3
            {
                hits.push(SingularHit {
                    beta: beta.to_vec(),
                    s_dot: z,
                    kind: SingularKind::ZetaZero,
                });
                break;
            }
        }
    }
    hits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma_table;
    use crate::poly::parse_poly;
    use crate::zeta::nontrivial_zeros;
    use num_bigint::BigInt;
    use std::f64::consts::PI;

    fn cpx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_values() {
        let h = parse_poly("1 - X1*X2 - X2*X3 - X3*X1 + 2*X1*X2*X3").unwrap();
        let a = h.exponent_matrix();
        let d = delta_of(&[cpx(2.0, 0.0), cpx(2.0, 0.0), cpx(0.0, 0.0)], &a).unwrap();
        assert_eq!(d, 2.0);

        let h1 = parse_poly("1 - X1").unwrap();
        let d = delta_of(&[cpx(3.0, 0.0)], &h1.exponent_matrix()).unwrap();
        assert_eq!(d, 3.0);

        // on a face: delta = 0 is not in the domain
        let r = delta_of(&[cpx(1.0, 0.0), cpx(-1.0, 0.0), cpx(0.0, 0.0)], &a);
        assert!(matches!(r, Err(ContinuationError::NotInDomain(_))));
    }

    #[test]
    fn m_delta_examples() {
        let c15 = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert_eq!(m_delta(&c15, 2.0), 3);
        let c12 = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(m_delta(&c12, 1.0), 3);
        let c1 = BigRational::from(BigInt::from(1));
        assert_eq!(m_delta(&c1, 0.7), 2);
        assert_eq!(m_delta(&c1, 3.0), 2);
        // non-increasing in delta
        for k in 1..20 {
            let d1 = 0.3 * k as f64;
            let d2 = d1 + 0.3;
            assert!(m_delta(&c15, d1) >= m_delta(&c15, d2));
        }
    }

    #[test]
    fn direct_product_reciprocal_zeta() {
        let h = parse_poly("1 - X1").unwrap();
        let (v, tail) = eval_z_direct(&h, &[cpx(3.0, 0.0)], 100_000).unwrap();
        assert!((v.re - 1.0 / 1.2020569031595942).abs() < 1e-8);
        assert!(tail < 1e-7 && tail > 0.0);

        let (v, _) = eval_z_direct(&h, &[cpx(2.0, 0.0)], 100_000).unwrap();
        assert!((v.re - 6.0 / (PI * PI)).abs() < 1e-5);

        let r = eval_z_direct(&h, &[cpx(0.9, 0.0)], 100);
        assert!(matches!(r, Err(ContinuationError::NotAbsolutelyConvergent(_))));
    }

    #[test]
    fn continued_collapses_to_reciprocal_zeta() {
        let h = parse_poly("1 - X1").unwrap();
        let table = gamma_table(&h, 8).unwrap();
        let zeros = nontrivial_zeros(0).unwrap();
        let cfg = ZetaConfig::default();
        let rep = eval_z_continued(&h, &[cpx(2.0, 0.0)], &table, &zeros, &cfg).unwrap();
        assert!((rep.value.re - 6.0 / (PI * PI)).abs() < 1e-12);
        assert_eq!(rep.m_delta, 2);

        // s = 0.6: inside W(0), outside absolute convergence
        let rep = eval_z_continued(&h, &[cpx(0.6, 0.0)], &table, &zeros, &cfg).unwrap();
        let want = 1.0 / riemann_zeta(cpx(0.6, 0.0), &cfg).unwrap().re;
        assert!((rep.value.re - want).abs() < 1e-9);
    }

    #[test]
    fn factored_slice_identity() {
        let h = parse_poly("1 - X1*X2 - X2*X3 - X3*X1 + 2*X1*X2*X3").unwrap();
        let table = gamma_table(&h, 12).unwrap();
        let zeros = nontrivial_zeros(0).unwrap();
        let cfg = ZetaConfig::default();
        let s = [cpx(2.0, 0.0), cpx(2.0, 0.0), cpx(0.0, 0.0)];
        let rep = eval_z_continued(&h, &s, &table, &zeros, &cfg).unwrap();
        let z2 = PI * PI / 6.0;
        let want = 1.0 / (z2 * z2);
        assert!(
            ((rep.value.re - want) / want).abs() < 1e-6,
            "got {}, want {want}",
            rep.value.re
        );
        assert!(rep.value.im.abs() < 1e-9);
    }

    #[test]
    fn dual_path_deep_point() {
        let h = parse_poly("1 - X1*X2 - X2*X3 - X3*X1 + 2*X1*X2*X3").unwrap();
        let s = [cpx(3.0, 0.0), cpx(3.0, 0.0), cpx(3.0, 0.0)];
        let (direct, tail_d) = eval_z_direct(&h, &s, 10_000).unwrap();
        let table = gamma_table(&h, 12).unwrap();
        let zeros = nontrivial_zeros(0).unwrap();
        let rep = eval_z_continued(&h, &s, &table, &zeros, &ZetaConfig::default()).unwrap();
        let diff = (direct - rep.value).norm();
        // tails bound truncation; the 1e-12 covers f64 roundoff across the
        // thousands of direct-product factors
        assert!(diff <= tail_d + rep.tail_bound + 1e-12);
        assert!(diff < 1e-7);
    }

    #[test]
    fn pole_hit_detected() {
        let h = parse_poly("1 - X1").unwrap();
        let table = gamma_table(&h, 8).unwrap();
        let zeros = nontrivial_zeros(0).unwrap();
        let cfg = ZetaConfig::default();
        let r = eval_z_continued(&h, &[cpx(1.0, 0.0)], &table, &zeros, &cfg);
        assert!(matches!(r, Err(ContinuationError::PoleHit(_))));
    }

    #[test]
    fn uncontrolled_tail_is_rejected() {
        // bound * delta <= 1: the truncation tail cannot be bounded
        let h = parse_poly("1 - X1").unwrap();
        let table = gamma_table(&h, 8).unwrap();
        let zeros = nontrivial_zeros(0).unwrap();
        let r = eval_z_continued(&h, &[cpx(0.1, 0.0)], &table, &zeros, &ZetaConfig::default());
        assert!(matches!(r, Err(ContinuationError::TailNotControlled)));
    }

    #[test]
    fn delta_override_changes_cutoff() {
        let h = parse_poly("1 - X1 - X1^2").unwrap();
        let table = gamma_table(&h, 12).unwrap();
        let zeros = nontrivial_zeros(0).unwrap();
        let cfg = ZetaConfig::default();
        let s = [cpx(2.0, 0.0)];
        let a = eval_z_continued(&h, &s, &table, &zeros, &cfg).unwrap();
        let b = eval_z_continued_at_delta(&h, &s, &table, &zeros, &cfg, Some(0.5)).unwrap();
        assert!(b.m_delta > a.m_delta);
        assert!((a.value - b.value).norm() < a.tail_bound + b.tail_bound + 1e-12);
        // overriding upward is rejected
        let r = eval_z_continued_at_delta(&h, &s, &table, &zeros, &cfg, Some(9.0));
        assert!(matches!(r, Err(ContinuationError::NotInDomain(_))));
    }

    #[test]
    fn singular_hits_scan() {
        let h = parse_poly("1 - X1").unwrap();
        let table = gamma_table(&h, 4).unwrap();
        let zeros = nontrivial_zeros(1).unwrap();
        let a = h.exponent_matrix();
        // s .alpha. beta = 1 for beta = (1)
        let hits = singular_set_hits(&[cpx(1.0, 0.0)], &a, &table, &zeros);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].kind, SingularKind::Pole);
        // near the first zero
        let t1 = zeros.ordinates()[0];
        let hits = singular_set_hits(&[cpx(0.5, t1)], &a, &table, &zeros);
        assert!(hits.iter().any(|h| h.kind == SingularKind::ZetaZero));
        // generic point
        let hits = singular_set_hits(&[cpx(1.37, 0.41)], &a, &table, &zeros);
        assert!(hits.is_empty());
    }
}

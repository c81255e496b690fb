//! Arithmetic-function machinery and the exact integer coefficients
//! `gamma(beta)` of the cyclotomic expansion
//! `1 + sum_j a_j Y_j = prod_beta (1 - Y^beta)^{gamma(beta)}`,
//! together with the truncated-product verification oracle.

use std::collections::BTreeMap;
use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{GradedIndex, IntPoly};
use crate::util::{bigint_string, rational_string};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GammaError {
    #[error("gamma({0:?}) is not an integer (implementation bug)")]
    NonIntegerResult(Vec<u32>),
    #[error("gamma({0:?}) violates the divisor bound (implementation bug)")]
    BoundViolation(Vec<u32>),
}

/// Moebius function by trial division.
pub fn mobius(m: u64) -> i32 {
    assert!(m >= 1, "mobius needs m >= 1");
    let mut m = m;
    let mut k = 0u32;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number-of-divisors function.
pub fn divisor_count(k: u64) -> u64 {
    assert!(k >= 1);
    let mut count = 0;
    let mut d = 1;
    while d * d <= k {
        if k % d == 0 {
            count += if d * d == k { 1 } else { 2 };
        }
        d += 1;
    }
    count
}

fn divisors(k: u64) -> Vec<u64> {
    let mut v = Vec::new();
    let mut d = 1;
    while d * d <= k {
        if k % d == 0 {
            v.push(d);
            if d * d != k {
                v.push(k / d);
            }
        }
        d += 1;
    }
    v.sort_unstable();
    v
}

/// Multi-index `beta` with the 1-norm used throughout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn norm(&self) -> u64 {
        self.0.iter().map(|&b| b as u64).sum()
    }
}

/// The twisted convolution `(f ~* g)(beta) = sum_{m b = beta} f(m) g(b)`,
/// where `m` runs over positive integers dividing every component of `beta`.
pub fn tilde_convolve<T, F, G>(f: F, g: G, beta: &[u32]) -> T
where
    T: Zero + AddAssign,
    T: Mul<Output = T>,
    F: Fn(u64) -> T,
    G: Fn(&[u32]) -> T,
{
    let norm: u64 = beta.iter().map(|&b| b as u64).sum();
    assert!(norm >= 1, "tilde_convolve needs a nonzero multi-index");
    let g0 = beta
        .iter()
        .filter(|&&b| b != 0)
        .fold(0u64, |acc, &b| acc.gcd(&(b as u64)));
    let mut acc = T::zero();
    for m in divisors(g0) {
        let b: Vec<u32> = beta.iter().map(|&x| x / m as u32).collect();
        acc += f(m) * g(&b);
    }
    acc
}

fn factorials(up_to: u64) -> Vec<BigInt> {
    let mut v = Vec::with_capacity(up_to as usize + 1);
    v.push(BigInt::one());
    for k in 1..=up_to {
        let prev = v.last().unwrap().clone();
        v.push(prev * BigInt::from(k));
    }
    v
}

fn gamma_coeff_with(h: &IntPoly, beta: &[u32], fact: &[BigInt]) -> Result<BigInt, GammaError> {
    assert_eq!(beta.len(), h.term_count(), "beta arity must match term count");
    let norm: u64 = beta.iter().map(|&b| b as u64).sum();
    assert!(norm >= 1, "gamma needs ||beta|| >= 1");
    let coeffs: Vec<&BigInt> = h.coeffs().collect();
    let acc = tilde_convolve(
        |m| BigRational::new(BigInt::from(mobius(m)), BigInt::from(m)),
        |b: &[u32]| {
            let bnorm: u64 = b.iter().map(|&x| x as u64).sum();
            let mut num = fact[(bnorm - 1) as usize].clone();
            if bnorm % 2 == 1 {
                num = -num;
            }
            let mut den = BigInt::one();
            for (&bj, aj) in b.iter().zip(&coeffs) {
                if bj > 0 {
                    den *= &fact[bj as usize];
                    num *= aj.pow(bj);
                }
            }
            BigRational::new(num, den)
        },
        beta,
    );
    if !acc.denom().is_one() {
        return Err(GammaError::NonIntegerResult(beta.to_vec()));
    }
    Ok(acc.numer().clone())
}

/// Exact cyclotomic-expansion coefficient
/// `gamma(beta) = sum_{m b = beta} (-1)^{||b||} (mu(m)/m) ((||b||-1)!/(b_1!...b_r!)) a^b`.
pub fn gamma_coeff(h: &IntPoly, beta: &[u32]) -> Result<BigInt, GammaError> {
    let norm: u64 = beta.iter().map(|&b| b as u64).sum();
    let fact = factorials(norm);
    gamma_coeff_with(h, beta, &fact)
}

/// Table of all `gamma(beta)` for `1 <= ||beta|| <= bound`, with the structural
/// constant `C(h)` and the divisor-bound metadata.
#[derive(Clone, Debug)]
pub struct GammaTable {
    bound: u32,
    c: BigRational,
    abs_coeff_sum: BigInt,
    entries: BTreeMap<GradedIndex, BigInt>,
}

impl GammaTable {
    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    /// Entries in graded-lexicographic order of `beta` (zeros included).
    pub fn entries(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.entries.iter().map(|(k, v)| (k.0.as_slice(), v))
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.entries().filter(|(_, g)| !g.is_zero())
    }

    pub fn get(&self, beta: &[u32]) -> Option<&BigInt> {
        self.entries.get(&GradedIndex(beta.to_vec()))
    }

    pub fn max_nonzero_norm(&self) -> u64 {
        self.nonzero_entries()
            .map(|(b, _)| b.iter().map(|&x| x as u64).sum())
            .max()
            .unwrap_or(0)
    }

    /// Checks `|gamma(beta)| <= tau(||beta||)/||beta|| * C^{-||beta||}` exactly.
    pub fn bound_holds(&self, beta: &[u32], gamma: &BigInt) -> bool {
        let k: u64 = beta.iter().map(|&b| b as u64).sum();
        // |gamma| * k <= tau(k) * (sum |a_j|)^k
        let lhs = gamma.abs() * BigInt::from(k);
        let rhs = BigInt::from(divisor_count(k)) * self.abs_coeff_sum.pow(u32::try_from(k).unwrap());
        lhs <= rhs
    }

    /// Smallest slack `tau(k)/k * C^{-k} - |gamma|` over nonzero entries.
    pub fn bound_margin(&self) -> Option<BigRational> {
        self.nonzero_entries()
            .map(|(b, g)| {
                let k: u64 = b.iter().map(|&x| x as u64).sum();
                let cap = BigRational::new(
                    BigInt::from(divisor_count(k))
                        * self.abs_coeff_sum.pow(u32::try_from(k).unwrap()),
                    BigInt::from(k),
                );
                cap - BigRational::from(g.abs())
            })
            .min()
    }

    /// JSON form: `{"bound":B,"C":"p/q","entries":[{"beta":[..],"gamma":"d"}]}`
    /// with integers as decimal strings and entries in graded-lex order.
    pub fn to_json_value(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries()
            .map(|(beta, gamma)| {
                serde_json::json!({
                    "beta": beta,
                    "gamma": bigint_string(gamma),
                })
            })
            .collect();
        serde_json::json!({
            "bound": self.bound,
            "C": rational_string(&self.c),
            "entries": entries,
        })
    }
}

/// Enumerates every multi-index of length `r` with `1 <= ||beta|| <= bound`.
pub fn for_each_multiindex<F: FnMut(&[u32])>(r: usize, bound: u32, mut f: F) {
    let mut cur = vec![0u32; r];
    fn rec<F: FnMut(&[u32])>(cur: &mut Vec<u32>, pos: usize, left: u32, f: &mut F) {
        if pos == cur.len() {
            if cur.iter().any(|&b| b != 0) {
                f(cur);
            }
            return;
        }
        for b in 0..=left {
            cur[pos] = b;
            rec(cur, pos + 1, left - b, f);
        }
        cur[pos] = 0;
    }
    rec(&mut cur, 0, bound, &mut f);
}

/// Builds the full table for `1 <= ||beta|| <= bound`, checking the divisor
/// bound on every entry.
pub fn gamma_table(h: &IntPoly, bound: u32) -> Result<GammaTable, GammaError> {
    assert!(bound >= 1);
    let fact = factorials(bound as u64);
    let abs_coeff_sum: BigInt = h.coeffs().map(|c| c.abs()).sum();
    let mut entries = BTreeMap::new();
    let mut err = None;
    for_each_multiindex(h.term_count(), bound, |beta| {
        if err.is_some() {
            return;
        }
        match gamma_coeff_with(h, beta, &fact) {
            Ok(g) => {
                entries.insert(GradedIndex(beta.to_vec()), g);
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let table = GammaTable {
        bound,
        c: h.c_of_h(),
        abs_coeff_sum,
        entries,
    };
    for (beta, gamma) in table.entries() {
        if !table.bound_holds(beta, gamma) {
            return Err(GammaError::BoundViolation(beta.to_vec()));
        }
    }
    Ok(table)
}

/// Sparse polynomial in the `r` formal variables `Y_1..Y_r`, used for the
/// truncated expansion check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YPoly {
    terms: BTreeMap<GradedIndex, BigInt>,
}

impl YPoly {
    pub fn one(r: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(GradedIndex(vec![0; r]), BigInt::one());
        YPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero_up_to(&self, degree: u64) -> bool {
        self.terms
            .keys()
            .all(|k| k.0.iter().map(|&e| e as u64).sum::<u64>() > degree)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(k, v)| (k.0.as_slice(), v))
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let k = GradedIndex(exps);
        let e = self.terms.entry(k.clone()).or_insert_with(BigInt::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn mul_truncated(&self, other: &YPoly, max_degree: u64) -> YPoly {
        let mut out: BTreeMap<GradedIndex, BigInt> = BTreeMap::new();
        for (ka, va) in &self.terms {
            let da: u64 = ka.0.iter().map(|&e| e as u64).sum();
            for (kb, vb) in &other.terms {
                let db: u64 = kb.0.iter().map(|&e| e as u64).sum();
                if da + db > max_degree {
                    continue;
                }
                let exps: Vec<u32> = ka.0.iter().zip(&kb.0).map(|(&x, &y)| x + y).collect();
                let entry = out.entry(GradedIndex(exps)).or_insert_with(BigInt::zero);
                *entry += va * vb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        YPoly { terms: out }
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Expands `(1 - Y^beta)^gamma` as a truncated series in total degree
/// `<= max_degree`; negative `gamma` uses the binomial series of
/// `(1 - x)^{-m} = sum C(k+m-1, k) x^k`.
fn factor_series(r: usize, beta: &[u32], gamma: &BigInt, max_degree: u64) -> YPoly {
    let bnorm: u64 = beta.iter().map(|&b| b as u64).sum();
    let kmax = max_degree / bnorm;
    let mut out = YPoly::one(r);
    out.terms.clear();
    if gamma.is_positive() || gamma.is_zero() {
        let g = gamma.to_u64().expect("gamma exponent fits u64 at desk scale");
        for k in 0..=kmax.min(g) {
            let mut c = binomial(g, k);
            if k % 2 == 1 {
                c = -c;
            }
            let exps: Vec<u32> = beta.iter().map(|&b| b * u32::try_from(k).unwrap()).collect();
            out.add_term(exps, c);
        }
    } else {
        let m = (-gamma).to_u64().expect("gamma exponent fits u64 at desk scale");
        for k in 0..=kmax {
            let c = binomial(k + m - 1, k);
            let exps: Vec<u32> = beta.iter().map(|&b| b * u32::try_from(k).unwrap()).collect();
            out.add_term(exps, c);
        }
    }
    out
}

/// Expands `prod_{||beta|| <= B} (1 - Y^beta)^{gamma(beta)}` to total degree
/// `degree` and subtracts `1 + sum_j a_j Y_j`. The residual must vanish
/// through total degree `min(degree, B)`; anything nonzero there signals a
/// wrong table.
pub fn verify_expansion(h: &IntPoly, table: &GammaTable, degree: u32) -> YPoly {
    let r = h.term_count();
    let d = degree as u64;
    let mut acc = YPoly::one(r);
    for (beta, gamma) in table.nonzero_entries() {
        let f = factor_series(r, beta, gamma, d);
        acc = acc.mul_truncated(&f, d);
    }
    // subtract 1 + sum a_j Y_j
    acc.add_term(vec![0; r], -BigInt::one());
    for (j, a) in h.coeffs().enumerate() {
        let mut e = vec![0u32; r];
        e[j] = 1;
        acc.add_term(e, -a.clone());
    }
    acc
}

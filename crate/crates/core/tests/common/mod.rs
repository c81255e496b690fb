//! Test-side oracles, implemented independently of the library code paths
//! they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use eulerprod::poly::{IntPoly, OneVarPoly};

pub type Series = BTreeMap<Vec<u32>, BigInt>;

pub fn series_one(r: usize) -> Series {
    let mut m = Series::new();
    m.insert(vec![0; r], BigInt::one());
    m
}

pub fn series_mul(a: &Series, b: &Series, cap: u64) -> Series {
    let mut out = Series::new();
    for (ka, va) in a {
        let da: u64 = ka.iter().map(|&e| e as u64).sum();
        for (kb, vb) in b {
            let db: u64 = kb.iter().map(|&e| e as u64).sum();
            if da + db > cap {
                continue;
            }
            let k: Vec<u32> = ka.iter().zip(kb).map(|(&x, &y)| x + y).collect();
            *out.entry(k).or_insert_with(BigInt::zero) += va * vb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `(1 - Y^beta)^g` truncated (any integer `g`).
pub fn series_factor(_r: usize, beta: &[u32], g: i64, cap: u64) -> Series {
    let bnorm: u64 = beta.iter().map(|&e| e as u64).sum();
    let kmax = cap / bnorm;
    let mut out = Series::new();
    let choose = |n: i64, k: u64| -> BigInt {
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i as i64) / BigInt::from(i as i64 + 1);
        }
        acc
    };
    if g >= 0 {
        for k in 0..=kmax.min(g as u64) {
            let mut c = choose(g, k);
            if k % 2 == 1 {
                c = -c;
            }
            out.insert(beta.iter().map(|&b| b * k as u32).collect(), c);
        }
    } else {
        for k in 0..=kmax {
            // C(k + |g| - 1, k)
            let c = choose(k as i64 - g - 1, k);
            out.insert(beta.iter().map(|&b| b * k as u32).collect(), c);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Truncated series inverse of `q` with `q(0) = 1`.
pub fn series_inverse(q: &Series, r: usize, cap: u64) -> Series {
    let mut delta = q.clone();
    delta.remove(&vec![0; r]);
    for v in delta.values_mut() {
        *v = -v.clone();
    }
    let mut inv = series_one(r);
    let mut power = series_one(r);
    loop {
        power = series_mul(&power, &delta, cap);
        if power.is_empty() {
            break;
        }
        for (k, v) in &power {
            *inv.entry(k.clone()).or_insert_with(BigInt::zero) += v;
        }
    }
    inv.retain(|_, v| !v.is_zero());
    inv
}

/// Independent reconstruction of the expansion coefficients: determines
/// `g(beta)` degree by degree from
/// `(1 + sum a_j Y_j) * (product so far)^{-1} = 1 - sum_{||beta||=k} g(beta) Y^beta + O(deg > k)`.
pub fn gamma_by_reconstruction(h: &IntPoly, bound: u32) -> BTreeMap<Vec<u32>, BigInt> {
    let r = h.term_count();
    let cap = bound as u64;
    let mut target = series_one(r);
    for (j, a) in h.coeffs().enumerate() {
        let mut e = vec![0u32; r];
        e[j] = 1;
        target.insert(e, a.clone());
    }
    let mut determined: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    let mut product = series_one(r);
    for k in 1..=bound {
        let inv = series_inverse(&product, r, cap);
        let quot = series_mul(&target, &inv, cap);
        // collect coefficients at norm k
        let mut layer: Vec<(Vec<u32>, BigInt)> = quot
            .iter()
            .filter(|(key, _)| key.iter().map(|&e| e as u64).sum::<u64>() == k as u64)
            .map(|(key, v)| (key.clone(), -v.clone()))
            .collect();
        layer.sort();
        for (beta, g) in layer {
            if g.is_zero() {
                continue;
            }
            let gi = i64::try_from(&g).expect("oracle coefficient fits i64");
            let f = series_factor(r, &beta, gi, cap);
            product = series_mul(&product, &f, cap);
            determined.insert(beta, g);
        }
    }
    determined
}

/// Sylvester-resultant oracle: `res(f, f') != 0` iff `f` squarefree.
pub fn resultant_with_derivative_nonzero(f: &OneVarPoly) -> bool {
    if f.degree() == 0 {
        return true; // constants have no roots at all
    }
    let fc: Vec<BigRational> = f.coeffs().iter().map(|c| BigRational::from(c.clone())).collect();
    let dc: Vec<BigRational> = f
        .derivative_coeffs()
        .into_iter()
        .map(BigRational::from)
        .collect();
    let m = fc.len() - 1;
    let k = dc.len() - 1;
    let size = m + k;
    let mut mat = vec![vec![BigRational::zero(); size]; size];
    // k rows of f, m rows of f'
    for row in 0..k {
        for (i, c) in fc.iter().enumerate() {
            mat[row][row + (m - i)] = c.clone();
        }
    }
    for row in 0..m {
        for (i, c) in dc.iter().enumerate() {
            mat[k + row][row + (k - i)] = c.clone();
        }
    }
    // Gaussian elimination determinant (exact)
    let mut det = BigRational::one();
    for col in 0..size {
        let piv = (col..size).find(|&row| !mat[row][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => return false, // singular -> resultant 0
        };
        if piv != col {
            mat.swap(piv, col);
            det = -det;
        }
        det *= mat[col][col].clone();
        let inv = mat[col][col].clone();
        for row in (col + 1)..size {
            if mat[row][col].is_zero() {
                continue;
            }
            let factor = mat[row][col].clone() / inv.clone();
            for c in col..size {
                let sub = factor.clone() * mat[col][c].clone();
                mat[row][c] -= sub;
            }
        }
    }
    !det.is_zero()
}

fn reduce_constraints(cols: &[Vec<u32>], lambda: &[usize], e: usize) -> Option<Vec<Vec<i64>>> {
    let n = cols[e].len();
    let alpha_e = &cols[e];
    let others: Vec<usize> = (0..cols.len()).filter(|j| !lambda.contains(j)).collect();
    if others.is_empty() {
        return None; // unconstrained
    }
    let l = (0..n).find(|&i| alpha_e[i] != 0).unwrap();
    let free: Vec<usize> = (0..n).filter(|&i| i != l).collect();
    Some(
        others
            .iter()
            .map(|&j| {
                free.iter()
                    .map(|&i| {
                        alpha_e[l] as i64 * cols[j][i] as i64
                            - alpha_e[i] as i64 * cols[j][l] as i64
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Exact feasibility oracle for reduced dimension <= 2 via the planar
/// positive-span criterion: the strict cone `{z : z . b_j > 0}` is empty iff
/// two constraint vectors are opposite rays or three of them positively span
/// the plane (Caratheodory in the plane).
pub fn cone_feasible_oracle(cols: &[Vec<u32>], lambda: &[usize], e: usize) -> bool {
    let b = match reduce_constraints(cols, lambda, e) {
        None => return true,
        Some(b) => b,
    };
    let d = b[0].len();
    assert!(d <= 2, "oracle supports n <= 3");
    if d == 0 {
        // constraints exist but no free coordinates
        return false;
    }
    if d == 1 {
        let pos = b.iter().all(|v| v[0] > 0);
        let neg = b.iter().all(|v| v[0] < 0);
        return pos || neg;
    }
    let cross = |u: &[i64], v: &[i64]| u[0] * v[1] - u[1] * v[0];
    let dot = |u: &[i64], v: &[i64]| u[0] * v[0] + u[1] * v[1];
    let m = b.len();
    for i in 0..m {
        for j in (i + 1)..m {
            if cross(&b[i], &b[j]) == 0 && dot(&b[i], &b[j]) < 0 {
                return false; // opposite rays
            }
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let c1 = cross(&b[i], &b[j]);
                let c2 = cross(&b[j], &b[k]);
                let c3 = cross(&b[k], &b[i]);
                if (c1 > 0 && c2 > 0 && c3 > 0) || (c1 < 0 && c2 < 0 && c3 < 0) {
                    return false; // 0 strictly inside the triangle of rays
                }
            }
        }
    }
    true
}

/// Rational-grid witness search in the face hyperplane (finds a point with
/// all other pairings strictly positive when the grid is fine enough). A hit
/// certifies feasibility; a miss certifies nothing.
pub fn grid_witness_found(cols: &[Vec<u32>], lambda: &[usize], e: usize) -> bool {
    let b = match reduce_constraints(cols, lambda, e) {
        None => return true,
        Some(b) => b,
    };
    let d = b[0].len();
    if d == 0 {
        return false;
    }
    let steps: Vec<i64> = (-24..=24).collect();
    let mut idx = vec![0usize; d];
    loop {
        let z: Vec<i64> = idx.iter().map(|&i| steps[i]).collect();
        if z.iter().any(|&v| v != 0) && b.iter().all(|row| {
            row.iter().zip(&z).map(|(&bi, &zi)| bi * zi).sum::<i64>() > 0
        }) {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == d {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < steps.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Random sparse polynomial: `n <= 3` variables, `r <= 4` terms, entries
/// `<= 3`, coefficients in `[-3, 3] \ {0}`.
pub fn random_poly(rng: &mut ChaCha8Rng) -> IntPoly {
    loop {
        let n = rng.gen_range(1..=3usize);
        let r = rng.gen_range(1..=4usize);
        let mut terms: Vec<(BigInt, Vec<u32>)> = Vec::new();
        for _ in 0..r {
            let coeff = loop {
                let c: i64 = rng.gen_range(-3..=3);
                if c != 0 {
                    break BigInt::from(c);
                }
            };
            let exps: Vec<u32> = loop {
                let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3u32)).collect();
                if e.iter().any(|&x| x != 0) {
                    break e;
                }
            };
            terms.push((coeff, exps));
        }
        // distinct exponent vectors so the term count is exactly r
        let mut seen: Vec<&Vec<u32>> = Vec::new();
        let mut distinct = true;
        for (_, e) in &terms {
            if seen.contains(&e) {
                distinct = false;
                break;
            }
            seen.push(e);
        }
        if !distinct {
            continue;
        }
        // trim unused trailing variables so the text form round-trips
        let used = terms
            .iter()
            .map(|(_, e)| e.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1))
            .max()
            .unwrap_or(0);
        let terms: Vec<(BigInt, Vec<u32>)> = terms
            .into_iter()
            .map(|(c, mut e)| {
                e.truncate(used);
                (c, e)
            })
            .collect();
        if let Ok(h) = IntPoly::from_terms(used, terms) {
            return h;
        }
    }
}

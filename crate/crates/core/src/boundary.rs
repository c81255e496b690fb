//! The boundary-zero experiment: restrict `Z` to a line `s^0 + t theta`
//! through a boundary face, follow a root branch `Omega(X)` of the restricted
//! polynomial `W(X, Y)` with `|Omega| < 1`, enumerate the induced zeros
//! `t_{m,p}` in rectangles of the `t`-plane, compare their count against the
//! prime-counting asymptotic, and audit them against the candidate
//! singularities of the zeta-factor product.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gamma::GammaTable;
use crate::geometry::{choose_direction, Face, GeometryError};
use crate::poly::{IntPoly, OneVarPoly};
use crate::roots::{all_roots, newton};
use crate::zeta::{primes_up_to, ZeroTable};

const TAU: f64 = 2.0 * std::f64::consts::PI;
const ARG_TOLERANCE: f64 = 0.05;
const RESEED_BUDGET: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundaryError {
    #[error("face {0} is infeasible or degenerate; no probe can be built")]
    UnusableFace(usize),
    #[error("could not find a generic perturbation within the seed budget")]
    GenericityExhausted,
    #[error("arg(c1/c0) too close to a right angle for p = {0}; branch skipped")]
    ArgDegenerate(u64),
    #[error("no branch stays inside the unit disk (cyclotomic-face case without a usable correction index)")]
    NoBranchInsideDisk,
    #[error("Newton iteration diverged at X = {0}")]
    NewtonDiverged(f64),
    #[error("face polynomial has a multiple root")]
    MultipleRootDetected,
    #[error(transparent)]
    Direction(#[from] GeometryError),
}

/// A generic line through a face of the boundary: base point
/// `s^0 = sigma^0 + i tau^0` with exact rational real part on the face
/// hyperplane, rational-lattice direction `theta`, and the correction index
/// `e'` when the face polynomial is cyclotomic.
#[derive(Clone, Debug)]
pub struct LineProbe {
    h: IntPoly,
    pub face: Face,
    pub sigma0: Vec<BigRational>,
    pub tau0: Vec<f64>,
    pub theta: Vec<u32>,
    pub e_prime: Option<usize>,
    /// Members of the `e'` equivalence class (columns with
    /// `alpha_j - alpha_{e'}` collinear to the polar vector).
    e_prime_class: Vec<usize>,
    /// Smallest positive integer making `q * theta . alpha_j` integral; with
    /// an integer direction this is always 1.
    pub q: u32,
    /// The chosen root `c` of the face polynomial.
    pub face_root: Complex64,
    /// True when all face-polynomial roots lie on the unit circle.
    pub cyclotomic_face: bool,
}

impl LineProbe {
    pub fn h(&self) -> &IntPoly {
        &self.h
    }

    pub fn sigma0_f64(&self) -> Vec<f64> {
        self.sigma0.iter().map(|x| x.to_f64().unwrap()).collect()
    }

    pub fn s0(&self) -> Vec<Complex64> {
        self.sigma0
            .iter()
            .zip(&self.tau0)
            .map(|(s, &t)| Complex64::new(s.to_f64().unwrap(), t))
            .collect()
    }

    fn theta_alpha(&self, j: usize) -> u64 {
        self.theta
            .iter()
            .zip(&self.h.terms()[j].exponents)
            .map(|(&t, &a)| t as u64 * a as u64)
            .sum()
    }

    fn theta_primitive(&self) -> u64 {
        self.theta
            .iter()
            .zip(&self.face.primitive)
            .map(|(&t, &a)| t as u64 * a as u64)
            .sum()
    }

    fn tau_alpha(&self, j: usize) -> f64 {
        self.tau0
            .iter()
            .zip(&self.h.terms()[j].exponents)
            .map(|(&t, &a)| t * a as f64)
            .sum()
    }

    fn sigma_alpha_f64(&self, j: usize) -> f64 {
        self.sigma0
            .iter()
            .zip(&self.h.terms()[j].exponents)
            .map(|(s, &a)| s.to_f64().unwrap() * a as f64)
            .sum()
    }
}

/// Leading data of the Puiseux branch for one prime: the constant `c_0`,
/// the first correction `c_1 X^{theta_1}` when the face polynomial is
/// cyclotomic, and whether the branch enters the unit disk.
#[derive(Clone, Debug)]
pub struct PuiseuxBranch {
    pub p: u64,
    pub c0: Complex64,
    pub theta1: Option<f64>,
    pub c1: Option<Complex64>,
    pub inside_disk: bool,
}

/// Rectangle `Xi` in the `t`-plane: `eps < Re t < re_max`,
/// `u < Im t < u + eta`.
#[derive(Clone, Copy, Debug)]
pub struct ZeroBox {
    pub u: f64,
    pub eta: f64,
    pub eps: f64,
    pub re_max: f64,
}

impl ZeroBox {
    pub fn new(u: f64, eta: f64, eps: f64) -> Self {
        assert!(u > 0.0 && eta > 0.0 && eps >= 0.0 && eps < 1.0);
        ZeroBox { u, eta, eps, re_max: 1.0 }
    }
}

/// A verified zero of `t -> h(p^{-s^0 - t theta})`.
#[derive(Clone, Debug)]
pub struct ZeroRecord {
    pub p: u64,
    pub m: i64,
    pub t: Complex64,
    pub residual: f64,
    pub polished: bool,
}

/// Candidate singularity of the zeta-factor product along the line.
#[derive(Clone, Debug)]
pub struct PoleCandidate {
    pub beta: Vec<u32>,
    pub rho: Complex64,
    pub t: Complex64,
    /// Whether `beta` is supported on the face class `Lambda_e`.
    pub in_b_e: bool,
}

/// `w = c * v` for some rational `c` (all 2x2 minors vanish)?
fn collinear_signed(w: &[i64], v: &[u32]) -> bool {
    let n = w.len();
    for i in 0..n {
        for k in (i + 1)..n {
            if w[i] * v[k] as i64 != w[k] * v[i] as i64 {
                return false;
            }
        }
    }
    true
}

/// All roots of the face polynomial, polished, sorted by `(modulus, re, im)`.
/// Requires a squarefree polynomial; near-coincident roots are rejected.
pub fn face_roots(f: &OneVarPoly) -> Result<Vec<Complex64>, BoundaryError> {
    let coeffs: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap()).collect();
    let roots = all_roots(&coeffs);
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            if (roots[i] - roots[j]).norm() <= 1e-8 {
                return Err(BoundaryError::MultipleRootDetected);
            }
        }
    }
    Ok(roots)
}

fn rational_dot(sigma: &[BigRational], col: &[u32]) -> BigRational {
    sigma
        .iter()
        .zip(col)
        .map(|(s, &a)| s * BigRational::from(BigInt::from(a)))
        .sum()
}

fn rational_dot_i64(sigma: &[BigRational], w: &[i64]) -> BigRational {
    sigma
        .iter()
        .zip(w)
        .map(|(s, &a)| s * BigRational::from(BigInt::from(a)))
        .sum()
}

/// Builds a generic probe for a feasible non-degenerate face: perturbs the
/// witness inside the face hyperplane until column differences separate,
/// fixes the face root, the correction index `e'`, the direction `theta`,
/// and draws `tau^0` so the branch-selection arg test passes for the small
/// validation primes.
pub fn build_probe(h: &IntPoly, face: &Face, seed: u64) -> Result<LineProbe, BoundaryError> {
    let witness = face
        .witness
        .as_ref()
        .ok_or(BoundaryError::UnusableFace(face.e))?;
    if !face.nondegenerate {
        return Err(BoundaryError::UnusableFace(face.e));
    }
    let alpha = h.exponent_matrix();
    let n = h.var_count();
    let r = h.term_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // hyperplane basis v_i = e_i - (polar_i / polar_l) e_l
    let l = face.polar.iter().position(|&x| x != 0).unwrap();
    let basis: Vec<Vec<BigRational>> = (0..n)
        .filter(|&i| i != l)
        .map(|i| {
            let mut v = vec![BigRational::zero(); n];
            v[i] = BigRational::from(BigInt::from(1));
            v[l] = -BigRational::new(BigInt::from(face.polar[i]), BigInt::from(face.polar[l]));
            v
        })
        .collect();
    // exact magnitude cap keeping all strict inequalities intact
    let mut bmax = BigRational::from(BigInt::from(1));
    for v in &basis {
        for j in 0..r {
            let dot: BigRational = v
                .iter()
                .zip(alpha.col(j))
                .map(|(x, &a)| x * BigRational::from(BigInt::from(a)))
                .sum();
            let a = dot.abs();
            if a > bmax {
                bmax = a;
            }
        }
    }
    let scale = BigRational::from(BigInt::from(4 * n as i64 + 4)) * &bmax;

    let sigma0 = 'outer: {
        for _ in 0..RESEED_BUDGET {
            let mut cand = witness.clone();
            for v in &basis {
                let num = loop {
                    let k: i64 = rng.gen_range(-999..=999);
                    if k != 0 {
                        break k;
                    }
                };
                let delta =
                    BigRational::new(BigInt::from(num), BigInt::from(999)) / &scale;
                for (c, vi) in cand.iter_mut().zip(v) {
                    *c += &delta * vi;
                }
            }
            // exact checks: face orthogonality, strict positivity, separation
            if !rational_dot(&cand, &face.polar).is_zero() {
                continue;
            }
            let mut ok = true;
            for j in 0..r {
                if face.lambda.contains(&j) {
                    continue;
                }
                if !rational_dot(&cand, alpha.col(j)).is_positive() {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for j in 0..r {
                for k in (j + 1)..r {
                    let w: Vec<i64> = alpha
                        .col(j)
                        .iter()
                        .zip(alpha.col(k))
                        .map(|(&a, &b)| a as i64 - b as i64)
                        .collect();
                    let in_ray = collinear_signed(&w, &face.polar);
                    let dot = rational_dot_i64(&cand, &w);
                    if in_ray != dot.is_zero() {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                break 'outer cand;
            }
        }
        return Err(BoundaryError::GenericityExhausted);
    };

    // face root: off-circle root if one exists, else minimal-argument root
    let roots = face_roots(&face.face_poly)?;
    let off_circle = roots.iter().copied().find(|z| z.norm() < 1.0 - 1e-9);
    let (face_root, cyclotomic_face) = match off_circle {
        Some(z) => (z, false),
        None => {
            let mut best = roots[0];
            for z in &roots[1..] {
                let key = (z.arg().abs(), -z.re, z.im.abs());
                let cur = (best.arg().abs(), -best.re, best.im.abs());
                if key < cur {
                    best = *z;
                }
            }
            (best, true)
        }
    };

    // correction index e' (cyclotomic case): representative of the class not
    // equivalent to e that minimizes sigma0 . alpha_{j0} among classes whose
    // Laurent sum S(c) = sum a_j c^{k_j} does not vanish
    let mut e_prime = None;
    let mut e_prime_class = Vec::new();
    if cyclotomic_face {
        let ref_idx = face.primitive.iter().position(|&x| x != 0).unwrap();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for j in 0..r {
            if face.lambda.contains(&j) {
                continue;
            }
            let mut placed = false;
            for class in classes.iter_mut() {
                let j0 = class[0];
                let w: Vec<i64> = alpha
                    .col(j)
                    .iter()
                    .zip(alpha.col(j0))
                    .map(|(&a, &b)| a as i64 - b as i64)
                    .collect();
                if collinear_signed(&w, &face.polar) {
                    class.push(j);
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push(vec![j]);
            }
        }
        let mut best: Option<(BigRational, usize, Vec<usize>)> = None;
        for class in &classes {
            let j0 = class[0];
            let mut s = Complex64::new(0.0, 0.0);
            for &j in class {
                let k_num =
                    alpha.col(j)[ref_idx] as i64 - alpha.col(j0)[ref_idx] as i64;
                let k_den = face.primitive[ref_idx] as i64;
                debug_assert_eq!(k_num % k_den, 0);
                let k = (k_num / k_den) as i32;
                let a = h.terms()[j].coeff.to_f64().unwrap();
                s += Complex64::new(a, 0.0) * face_root.powi(k);
            }
            if s.norm() <= 1e-10 {
                continue;
            }
            let key = rational_dot(&sigma0, alpha.col(j0));
            match &best {
                None => best = Some((key, j0, class.clone())),
                Some((cur, _, _)) if key < *cur => best = Some((key, j0, class.clone())),
                _ => {}
            }
        }
        if let Some((_, j0, class)) = best {
            e_prime = Some(j0);
            e_prime_class = class;
        }
    }

    let theta = choose_direction(&alpha, face, e_prime)?;

    let mut probe = LineProbe {
        h: h.clone(),
        face: face.clone(),
        sigma0,
        tau0: vec![0.0; n],
        theta,
        e_prime,
        e_prime_class,
        q: 1,
        face_root,
        cyclotomic_face,
    };

    // draw tau0; in the cyclotomic case require the arg test to pass for all
    // validation primes (the per-prime test also reruns inside select_branch)
    let validation: Vec<u64> = primes_up_to(100);
    for _ in 0..RESEED_BUDGET {
        probe.tau0 = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if !(probe.cyclotomic_face && probe.e_prime.is_some()) {
            return Ok(probe);
        }
        let ok = validation
            .iter()
            .all(|&p| select_branch(&probe, p).is_ok());
        if ok {
            return Ok(probe);
        }
    }
    Err(BoundaryError::GenericityExhausted)
}

fn w_face_eval(probe: &LineProbe, p: u64, y: Complex64) -> Complex64 {
    // [W]_e(y) = 1 + sum_{j in lambda} a_j p^{-i tau.alpha_j} y^{theta.alpha_j}
    let lnp = (p as f64).ln();
    let mut acc = Complex64::new(1.0, 0.0);
    for &j in &probe.face.lambda {
        let a = probe.h.terms()[j].coeff.to_f64().unwrap();
        let phase = Complex64::new(0.0, -probe.tau_alpha(j) * lnp).exp();
        acc += Complex64::new(a, 0.0) * phase * y.powu(probe.theta_alpha(j) as u32);
    }
    acc
}

/// Lifts the probe's face root to the branch constant for the prime `p` and,
/// in the cyclotomic-face case, computes the first Puiseux correction and the
/// sign choice that sends the branch inside the unit disk.
pub fn select_branch(probe: &LineProbe, p: u64) -> Result<PuiseuxBranch, BoundaryError> {
    let lnp = (p as f64).ln();
    let k_e = probe.theta_primitive();
    debug_assert!(k_e >= 1);
    let tau_prim: f64 = probe
        .tau0
        .iter()
        .zip(&probe.face.primitive)
        .map(|(&t, &a)| t * a as f64)
        .sum();
    let base = Complex64::new(0.0, tau_prim * lnp).exp() * probe.face_root;
    let c0 = Complex64::new(base.norm().ln() / k_e as f64, base.arg() / k_e as f64).exp();

    let residual = w_face_eval(probe, p, c0).norm();
    assert!(
        residual < 1e-10,
        "branch constant fails the face equation (residual {residual})"
    );

    if !probe.cyclotomic_face {
        return Ok(PuiseuxBranch {
            p,
            c0,
            theta1: None,
            c1: None,
            inside_disk: c0.norm() < 1.0,
        });
    }

    if probe.e_prime.is_none() {
        return Err(BoundaryError::NoBranchInsideDisk);
    }

    // [W]'_e(c0)
    let mut dw = Complex64::new(0.0, 0.0);
    for &j in &probe.face.lambda {
        let a = probe.h.terms()[j].coeff.to_f64().unwrap();
        let w = probe.theta_alpha(j);
        let phase = Complex64::new(0.0, -probe.tau_alpha(j) * lnp).exp();
        dw += Complex64::new(a * w as f64, 0.0) * phase * c0.powu(w as u32 - 1);
    }
    // R_{e'}(c0)
    let mut rv = Complex64::new(0.0, 0.0);
    for &j in &probe.e_prime_class {
        let a = probe.h.terms()[j].coeff.to_f64().unwrap();
        let phase = Complex64::new(0.0, -probe.tau_alpha(j) * lnp).exp();
        rv += Complex64::new(a, 0.0) * phase * c0.powu(probe.theta_alpha(j) as u32);
    }
    let c1 = -rv / dw;
    let ratio = c1 / c0;
    if ratio.norm() <= 1e-12 {
        return Err(BoundaryError::ArgDegenerate(p));
    }
    let arg = ratio.arg();
    let dist = (arg - std::f64::consts::FRAC_PI_2)
        .abs()
        .min((arg + std::f64::consts::FRAC_PI_2).abs());
    if dist < ARG_TOLERANCE {
        return Err(BoundaryError::ArgDegenerate(p));
    }

    // parity conditions make -c0 a branch constant with the same c1; pick the
    // sign whose first-order term points into the disk
    let (c0, c1) = if ratio.re < 0.0 { (c0, c1) } else { (-c0, c1) };
    debug_assert!(w_face_eval(probe, p, c0).norm() < 1e-9);

    let theta1 = rational_dot(&probe.sigma0, probe.h.exponent_matrix().col(probe.e_prime.unwrap()))
        .to_f64()
        .unwrap();
    Ok(PuiseuxBranch {
        p,
        c0,
        theta1: Some(theta1),
        c1: Some(c1),
        inside_disk: true,
    })
}

fn w_full_eval(probe: &LineProbe, p: u64, x: f64, y: Complex64) -> (Complex64, Complex64) {
    // W(X, Y) = 1 + sum_j a_j p^{-i tau.alpha_j} X^{sigma.alpha_j} Y^{theta.alpha_j}
    let lnp = (p as f64).ln();
    let mut v = Complex64::new(1.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for j in 0..probe.h.term_count() {
        let a = probe.h.terms()[j].coeff.to_f64().unwrap();
        let phase = Complex64::new(0.0, -probe.tau_alpha(j) * lnp).exp();
        let xs = x.powf(probe.sigma_alpha_f64(j));
        let w = probe.theta_alpha(j);
        let coef = Complex64::new(a * xs, 0.0) * phase;
        v += coef * y.powu(w as u32);
        dv += coef * Complex64::new(w as f64, 0.0) * y.powu(w as u32 - 1);
    }
    (v, dv)
}

/// Newton evaluation of the branch at one `X > 0`, seeded from the leading
/// Puiseux data.
pub fn branch_value(
    probe: &LineProbe,
    branch: &PuiseuxBranch,
    x: f64,
) -> Result<Complex64, BoundaryError> {
    assert!(x > 0.0);
    let seed = match (branch.c1, branch.theta1) {
        (Some(c1), Some(t1)) => branch.c0 + c1 * x.powf(t1),
        _ => branch.c0,
    };
    let f = |y: Complex64| w_full_eval(probe, branch.p, x, y);
    match newton(seed, f, 1e-12, 80) {
        Some(y) if y.is_finite() => Ok(y),
        _ => Err(BoundaryError::NewtonDiverged(x)),
    }
}

/// Branch value with geometric path-following from small `X` when the direct
/// Newton solve fails.
pub fn omega_at(
    probe: &LineProbe,
    branch: &PuiseuxBranch,
    x: f64,
) -> Result<Complex64, BoundaryError> {
    if let Ok(v) = branch_value(probe, branch, x) {
        return Ok(v);
    }
    let mut cur_x = (x / 64.0).min(1e-3);
    let mut y = branch_value(probe, branch, cur_x)?;
    let f = |xv: f64, seed: Complex64| newton(seed, |yy| w_full_eval(probe, branch.p, xv, yy), 1e-12, 80);
    while cur_x < x {
        cur_x = (cur_x * 1.35).min(x);
        y = f(cur_x, y).ok_or(BoundaryError::NewtonDiverged(cur_x))?;
    }
    Ok(y)
}

/// Zeros of `t -> h(p^{-s^0 - t theta})` inside the box, for all primes up to
/// `p_max`, each Newton-polished. Primes whose branch is marginal (arg test)
/// or leaves the unit disk contribute nothing.
pub fn zeros_on_line(probe: &LineProbe, zbox: &ZeroBox, p_max: u64) -> Vec<ZeroRecord> {
    let mut records = Vec::new();
    let s0 = probe.s0();
    let alpha = probe.h.exponent_matrix();
    for p in primes_up_to(p_max) {
        let branch = match select_branch(probe, p) {
            Ok(b) => b,
            Err(_) => continue,
        };
        if !branch.inside_disk {
            continue;
        }
        let omega = match omega_at(probe, &branch, 1.0 / p as f64) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if omega.norm() >= 1.0 - 1e-12 {
            continue;
        }
        let lnp = (p as f64).ln();
        let log_omega = Complex64::new(omega.norm().ln(), omega.arg());
        let shift = omega.arg() / TAU;
        let lo = zbox.u * lnp / TAU + shift;
        let hi = (zbox.u + zbox.eta) * lnp / TAU + shift;
        let m_start = lo.floor() as i64 + 1;
        let m_end = hi.ceil() as i64 - 1;
        // per-prime coefficients of g(t) = 1 + sum d_j exp(-t w_j ln p)
        let coefs: Vec<(Complex64, f64)> = (0..probe.h.term_count())
            .map(|j| {
                let z: Complex64 = s0
                    .iter()
                    .zip(alpha.col(j))
                    .map(|(si, &a)| si * a as f64)
                    .sum();
                let a = probe.h.terms()[j].coeff.to_f64().unwrap();
                let d = Complex64::new(a, 0.0) * (-z * lnp).exp();
                (d, probe.theta_alpha(j) as f64)
            })
            .collect();
        let g = |t: Complex64| {
            let mut v = Complex64::new(1.0, 0.0);
            let mut dv = Complex64::new(0.0, 0.0);
            for (d, w) in &coefs {
                let e = (-t * *w * lnp).exp();
                v += d * e;
                dv += d * e * Complex64::new(-w * lnp, 0.0);
            }
            (v, dv)
        };
        for m in m_start..=m_end {
            let t0 = -log_omega / lnp + Complex64::new(0.0, TAU * m as f64 / lnp);
            let t = match newton(t0, g, 1e-10, 40) {
                Some(t) => t,
                None => continue,
            };
            let (res, _) = g(t);
            if t.re > zbox.eps && t.re < zbox.re_max && res.norm() < 1e-8 {
                records.push(ZeroRecord {
                    p,
                    m,
                    t,
                    residual: res.norm(),
                    polished: true,
                });
            }
        }
    }
    records.sort_by_key(|r| (r.p, r.m));
    records
}

/// One rung of the counting ladder.
#[derive(Clone, Copy, Debug)]
pub struct CountPoint {
    pub eps: f64,
    pub measured: u64,
    pub predicted: f64,
}

/// Window count of integers `m` with `t_m` inside `Xi^eps` for one prime.
fn window_count(c0: Complex64, u: f64, eta: f64, p: u64) -> u64 {
    let lnp = (p as f64).ln();
    let shift = c0.arg() / TAU;
    let lo = u * lnp / TAU + shift;
    let hi = (u + eta) * lnp / TAU + shift;
    let m_start = lo.floor() as i64 + 1;
    let m_end = hi.ceil() as i64 - 1;
    (m_end - m_start + 1).max(0) as u64
}

/// Measured and predicted zero counts for a constant branch of modulus
/// `|c0| < 1` with per-prime argument given by `omega_of`.
pub fn count_windows<F: Fn(u64) -> Complex64>(
    c0_modulus: f64,
    omega_of: F,
    u: f64,
    eta: f64,
    eps: f64,
) -> (u64, f64) {
    assert!(c0_modulus > 0.0 && c0_modulus < 1.0);
    let cutoff = (-c0_modulus.ln() / eps).exp();
    let predicted = eta / TAU * cutoff;
    let cutoff = cutoff.min(5.0e6);
    let mut measured = 0u64;
    for p in primes_up_to(cutoff.ceil() as u64) {
        if (p as f64) >= cutoff {
            continue;
        }
        measured += window_count(omega_of(p), u, eta, p);
    }
    (measured, predicted)
}

/// Counting asymptotic `N(eps) ~ (eta / 2 pi) exp(-log|c0| / eps)` on a
/// constant-branch probe (all exponent columns collinear with the face).
pub fn count_zeros_asymptotic(
    probe: &LineProbe,
    u: f64,
    eta: f64,
    eps_list: &[f64],
) -> Result<Vec<CountPoint>, BoundaryError> {
    if probe.face.lambda.len() != probe.h.term_count() {
        return Err(BoundaryError::UnusableFace(probe.face.e));
    }
    let k_e = probe.theta_primitive() as f64;
    let c0_modulus = probe.face_root.norm().powf(1.0 / k_e);
    if c0_modulus >= 1.0 {
        return Err(BoundaryError::NoBranchInsideDisk);
    }
    let mut out = Vec::new();
    for &eps in eps_list {
        assert!(eps > 0.0);
        let (measured, predicted) = count_windows(
            c0_modulus,
            |p| match select_branch(probe, p) {
                Ok(b) => b.c0,
                Err(_) => Complex64::new(c0_modulus, 0.0),
            },
            u,
            eta,
            eps,
        );
        out.push(CountPoint { eps, measured, predicted });
    }
    Ok(out)
}

/// Candidate singularities `t(beta, rho) = (rho - s^0.alpha.beta^t) / (theta.alpha.beta^t)`
/// of the zeta factors along the line, for every table entry with a nonzero
/// coefficient and `rho` the pole 1 or a tabulated nontrivial zero (both
/// signs), filtered to `Re t > 0`.
pub fn pole_candidates(
    probe: &LineProbe,
    table: &GammaTable,
    zeros: &ZeroTable,
) -> Vec<PoleCandidate> {
    let alpha = probe.h.exponent_matrix();
    let s0 = probe.s0();
    let rhos = zeros.rho_values();
    let mut out = Vec::new();
    for (beta, _gamma) in table.nonzero_entries() {
        let lam = alpha.times_multiindex(beta);
        let s_dot: Complex64 = s0
            .iter()
            .zip(&lam)
            .map(|(si, &l)| si * l as f64)
            .sum();
        let th_dot: f64 = probe
            .theta
            .iter()
            .zip(&lam)
            .map(|(&t, &l)| t as f64 * l as f64)
            .sum();
        let in_b_e = beta
            .iter()
            .enumerate()
            .all(|(j, &b)| b == 0 || probe.face.lambda.contains(&j));
        for &rho in &rhos {
            let t = (rho - s_dot) / th_dot;
            if t.re > 0.0 {
                out.push(PoleCandidate {
                    beta: beta.to_vec(),
                    rho,
                    t,
                    in_b_e,
                });
            }
        }
    }
    out
}

/// Near-collision between a zero record and a pole candidate.
#[derive(Clone, Debug)]
pub struct NearCollision {
    pub record_index: usize,
    pub candidate_index: usize,
    pub distance: f64,
}

#[derive(Clone, Debug)]
pub struct CollisionReport {
    pub total: usize,
    pub survivors: usize,
    pub near_collisions: Vec<NearCollision>,
}

/// For each zero record, the distance to the nearest candidate singularity;
/// records farther than `tol` from every candidate survive.
pub fn collision_audit(
    records: &[ZeroRecord],
    candidates: &[PoleCandidate],
    tol: f64,
) -> CollisionReport {
    let mut survivors = 0usize;
    let mut near = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let mut min_d = f64::INFINITY;
        let mut min_j = usize::MAX;
        for (j, c) in candidates.iter().enumerate() {
            let d = (rec.t - c.t).norm();
            if d < min_d {
                min_d = d;
                min_j = j;
            }
        }
        if min_d > tol {
            survivors += 1;
        } else {
            near.push(NearCollision {
                record_index: i,
                candidate_index: min_j,
                distance: min_d,
            });
        }
    }
    CollisionReport {
        total: records.len(),
        survivors,
        near_collisions: near,
    }
}

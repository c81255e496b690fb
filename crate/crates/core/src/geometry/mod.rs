//! The polyhedral domain `W(delta)`, boundary-face enumeration with exact
//! rational witnesses, face polynomials and their non-degeneracy, and the
//! cyclotomy classifiers.

mod cyclo;
mod witness;

pub use cyclo::{
    cyclotomic_factor_scan, cyclotomy_probe, estermann_classify, CycloFactor, CyclotomyVerdict,
    EstermannResult, ProbeConfig,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{ExponentMatrix, IntPoly, OneVarPoly};
use crate::util::rational_string;
use witness::Feasibility;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("no admissible direction within search radius {0}")]
    SearchExhausted(u32),
    #[error("all residual roots are numerically on the unit circle (peeling bug?)")]
    AmbiguousRoot,
    #[error("face {0} is degenerate or infeasible")]
    FaceNotUsable(usize),
}

/// Componentwise division by the gcd of the nonzero entries.
pub fn primitive_vector(v: &[u32]) -> Vec<u32> {
    let g = v.iter().filter(|&&x| x != 0).fold(0u32, |a, &b| a.gcd(&b));
    assert!(g != 0, "primitive_vector needs a nonzero vector");
    v.iter().map(|&x| x / g).collect()
}

/// `Lambda_e = { j : alpha_{.j} in Q alpha_{.e} }`.
pub fn lambda_class(alpha: &ExponentMatrix, e: usize) -> Vec<usize> {
    let pe = primitive_vector(alpha.col(e));
    (0..alpha.col_count())
        .filter(|&j| primitive_vector(alpha.col(j)) == pe)
        .collect()
}

/// Reduced face polynomial `1 + sum_{j in Lambda_e} a_j T^{q_j}` where
/// `alpha_{.j} = q_j * primitive(alpha_{.e})`.
pub fn face_poly(h: &IntPoly, e: usize) -> OneVarPoly {
    let alpha = h.exponent_matrix();
    let prim = primitive_vector(alpha.col(e));
    let ref_idx = prim.iter().position(|&x| x != 0).unwrap();
    let lambda = lambda_class(&alpha, e);
    let mut coeffs: BTreeMap<usize, BigInt> = BTreeMap::new();
    for &j in &lambda {
        let qj = alpha.col(j)[ref_idx] / prim[ref_idx];
        let c = coeffs.entry(qj as usize).or_insert_with(BigInt::zero);
        *c += &h.terms()[j].coeff;
    }
    let deg = *coeffs.keys().next_back().unwrap();
    let mut v = vec![BigInt::zero(); deg + 1];
    v[0] = BigInt::one();
    for (q, c) in coeffs {
        v[q] += c;
    }
    OneVarPoly::from_coeffs(v).expect("face polynomial keeps constant term 1")
}

fn rational_poly_gcd_degree(f: &[BigRational], g: &[BigRational]) -> usize {
    // monic Euclid; returns deg gcd
    fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    }
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // a mod b
        let db = b.len() - 1;
        let lead = b[db].clone();
        let mut r = a.clone();
        while r.len() >= b.len() && !r.is_empty() {
            let dr = r.len() - 1;
            let q = r[dr].clone() / lead.clone();
            let shift = dr - db;
            for i in 0..=db {
                let v = q.clone() * b[i].clone();
                r[i + shift] -= v;
            }
            r = trim(r);
            if r.len() <= shift {
                break;
            }
        }
        a = b;
        b = trim(r);
    }
    a.len().saturating_sub(1)
}

/// A face is non-degenerate when its reduced polynomial is squarefree:
/// `gcd(f, f')` constant, computed exactly over the rationals.
pub fn is_nondegenerate(f: &OneVarPoly) -> bool {
    let fr: Vec<BigRational> = f.coeffs().iter().map(|c| BigRational::from(c.clone())).collect();
    let dr: Vec<BigRational> = f
        .derivative_coeffs()
        .into_iter()
        .map(BigRational::from)
        .collect();
    rational_poly_gcd_degree(&fr, &dr) == 0
}

/// One boundary ray of `W(0)` with its reduced polynomial and exact witness.
#[derive(Clone, Debug)]
pub struct Face {
    /// Representative column index (smallest in the collinear class).
    pub e: usize,
    pub polar: Vec<u32>,
    pub primitive: Vec<u32>,
    /// Collinear class, ascending.
    pub lambda: Vec<usize>,
    /// `q_j` per member of `lambda` (same order).
    pub q: Vec<u32>,
    pub face_poly: OneVarPoly,
    pub nondegenerate: bool,
    /// `None` marks an infeasible ray: no boundary point has all other
    /// column products strictly positive.
    pub witness: Option<Vec<BigRational>>,
}

impl Face {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "e": self.e,
            "polar": self.polar,
            "primitive": self.primitive,
            "lambda": self.lambda,
            "face_poly": self.face_poly.render(),
            "nondegenerate": self.nondegenerate,
            "witness": self.witness.as_ref().map(|w| {
                w.iter().map(rational_string).collect::<Vec<_>>()
            }),
        })
    }
}

/// One `Face` per distinct column ray, ordered by representative index.
pub fn enumerate_faces(h: &IntPoly) -> Vec<Face> {
    let alpha = h.exponent_matrix();
    let mut seen: Vec<Vec<u32>> = Vec::new();
    let mut faces = Vec::new();
    for e in 0..alpha.col_count() {
        let prim = primitive_vector(alpha.col(e));
        if seen.contains(&prim) {
            continue;
        }
        seen.push(prim.clone());
        let lambda = lambda_class(&alpha, e);
        let ref_idx = prim.iter().position(|&x| x != 0).unwrap();
        let q: Vec<u32> = lambda
            .iter()
            .map(|&j| alpha.col(j)[ref_idx] / prim[ref_idx])
            .collect();
        let fp = face_poly(h, e);
        let nondeg = is_nondegenerate(&fp);
        let witness = match witness::face_witness(alpha.cols(), &lambda, e) {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        };
        faces.push(Face {
            e,
            polar: alpha.col(e).to_vec(),
            primitive: prim,
            lambda,
            q,
            face_poly: fp,
            nondegenerate: nondeg,
            witness,
        });
    }
    faces
}

/// The inequality family of the tube domain `W(delta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainSpec {
    pub delta: BigRational,
    /// Column vectors `alpha_{.j}`; each stands for `sigma . alpha_{.j} > delta`.
    pub inequalities: Vec<Vec<u32>>,
}

impl DomainSpec {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "delta": rational_string(&self.delta),
            "inequalities": self.inequalities,
        })
    }
}

/// Deduplicated description of `W(delta)`: one inequality per distinct column
/// ray, keeping the binding member (smallest multiple of the primitive vector).
pub fn meromorphy_domain(h: &IntPoly, delta: BigRational) -> DomainSpec {
    assert!(!delta.is_negative(), "W(delta) needs delta >= 0");
    let alpha = h.exponent_matrix();
    let mut per_ray: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
    for j in 0..alpha.col_count() {
        let prim = primitive_vector(alpha.col(j));
        let cur = per_ray.entry(prim).or_insert_with(|| alpha.col(j).to_vec());
        // smaller multiple binds for delta > 0
        if alpha.col(j).iter().sum::<u32>() < cur.iter().sum::<u32>() {
            *cur = alpha.col(j).to_vec();
        }
    }
    // keep canonical column order of first appearance
    let mut inequalities = Vec::new();
    let mut seen: Vec<Vec<u32>> = Vec::new();
    for j in 0..alpha.col_count() {
        let prim = primitive_vector(alpha.col(j));
        if seen.contains(&prim) {
            continue;
        }
        seen.push(prim.clone());
        inequalities.push(per_ray[&prim].clone());
    }
    DomainSpec { delta, inequalities }
}

/// Smallest-by-sum positive lattice direction with `theta . alpha_{.j} >= 1`
/// for every column, `theta . primitive(alpha_{.e})` even, and (when `e'` is
/// given) `theta . alpha_{.e'}` odd. The search widens its radius up to a
/// fixed cap before reporting exhaustion.
pub fn choose_direction(
    alpha: &ExponentMatrix,
    face: &Face,
    e_prime: Option<usize>,
) -> Result<Vec<u32>, GeometryError> {
    let n = alpha.var_count();
    let dot = |theta: &[u32], v: &[u32]| -> u64 {
        theta.iter().zip(v).map(|(&t, &a)| t as u64 * a as u64).sum()
    };
    let ok = |theta: &[u32]| -> bool {
        for j in 0..alpha.col_count() {
            if dot(theta, alpha.col(j)) < 1 {
                return false;
            }
        }
        if dot(theta, &face.primitive) % 2 != 0 {
            return false;
        }
        if let Some(ep) = e_prime {
            if dot(theta, alpha.col(ep)) % 2 != 1 {
                return false;
            }
        }
        true
    };
    let ok_no_parity = |theta: &[u32]| -> bool {
        (0..alpha.col_count()).all(|j| dot(theta, alpha.col(j)) >= 1)
    };
    let need_parity = e_prime.is_some();

    const MAX_SUM: u64 = 72;
    let mut cur = vec![1u32; n];
    for total in n as u64..=MAX_SUM {
        // enumerate compositions of `total` into n parts >= 1, lexicographically
        fn rec(
            cur: &mut Vec<u32>,
            pos: usize,
            left: u64,
            check: &dyn Fn(&[u32]) -> bool,
        ) -> Option<Vec<u32>> {
            let n = cur.len();
            if pos == n - 1 {
                cur[pos] = u32::try_from(left).ok()?;
                if check(cur) {
                    return Some(cur.clone());
                }
                return None;
            }
            let remaining_min = (n - pos - 1) as u64;
            for v in 1..=left.saturating_sub(remaining_min) {
                cur[pos] = u32::try_from(v).ok()?;
                if let Some(hit) = rec(cur, pos + 1, left - v, check) {
                    return Some(hit);
                }
            }
            None
        }
        let check: &dyn Fn(&[u32]) -> bool = if need_parity { &ok } else { &ok_no_parity };
        if let Some(theta) = rec(&mut cur, 0, total, check) {
            return Ok(theta);
        }
    }
    Err(GeometryError::SearchExhausted(MAX_SUM as u32))
}

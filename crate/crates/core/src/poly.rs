//! Exact sparse multivariate polynomials over the integers with constant term 1,
//! their parser, and the structural constants derived from them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("constant term must be 1")]
    ConstantTermNotOne,
    #[error("no nonconstant terms")]
    ZeroPolynomial,
    #[error("constant term of a one-variable polynomial must be 1")]
    BadOneVarConstant,
    #[error("one-variable polynomial must have degree >= 1")]
    ZeroDegree,
}

/// Graded-lexicographic comparison of exponent vectors: total degree first,
/// then componentwise lexicographic.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Exponent vector wrapper ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedIndex(pub Vec<u32>);

impl Ord for GradedIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&self.0, &other.0)
    }
}

impl PartialOrd for GradedIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One nonconstant term `a_j * X^{alpha_{.j}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigInt,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }
}

/// Sparse polynomial `h(X_1,...,X_n) = 1 + sum_j a_j X^{alpha_{.j}}` with
/// integer coefficients. The constant term 1 is implicit; terms are merged
/// and stored in graded-lexicographic order, so equal polynomials compare
/// equal structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    n: usize,
    terms: Vec<Monomial>,
}

impl IntPoly {
    /// Builds a canonical polynomial from raw `(coeff, exponents)` pairs.
    /// Terms with all-zero exponents are rejected (the constant is fixed at 1).
    pub fn from_terms<I>(n: usize, raw: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (BigInt, Vec<u32>)>,
    {
        let mut merged: BTreeMap<GradedIndex, BigInt> = BTreeMap::new();
        for (coeff, exponents) in raw {
            if exponents.len() != n {
                return Err(PolyError::Syntax {
                    position: 0,
                    expected: format!("exponent vector of length {n}"),
                });
            }
            if exponents.iter().all(|&e| e == 0) {
                if !coeff.is_zero() {
                    return Err(PolyError::ConstantTermNotOne);
                }
                continue;
            }
            let entry = merged.entry(GradedIndex(exponents)).or_insert_with(BigInt::zero);
            *entry += coeff;
        }
        merged.retain(|_, c| !c.is_zero());
        if merged.is_empty() {
            return Err(PolyError::ZeroPolynomial);
        }
        let terms = merged
            .into_iter()
            .map(|(GradedIndex(exponents), coeff)| Monomial { coeff, exponents })
            .collect();
        Ok(IntPoly { n, terms })
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    /// Number of nonconstant terms (`r` in the formulas).
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn coeffs(&self) -> impl Iterator<Item = &BigInt> {
        self.terms.iter().map(|t| &t.coeff)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|t| t.degree()).max().unwrap_or(0)
    }

    /// `h(z_1,...,z_n)` in complex double precision.
    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n, "evaluation point has wrong arity");
        let mut acc = Complex64::new(1.0, 0.0);
        for t in &self.terms {
            let mut m = Complex64::new(t.coeff.to_f64().unwrap_or(f64::NAN), 0.0);
            for (zl, &e) in z.iter().zip(&t.exponents) {
                if e > 0 {
                    m *= zl.powu(e);
                }
            }
            acc += m;
        }
        acc
    }

    /// `C(h) = 1 / (|a_1| + ... + |a_r|)`, exact.
    pub fn c_of_h(&self) -> BigRational {
        let sum: BigInt = self.terms.iter().map(|t| t.coeff.abs()).sum();
        BigRational::new(BigInt::one(), sum)
    }

    /// Specialization `h(T^{theta_1},...,T^{theta_n})` with like powers merged.
    /// Requires `theta . alpha_{.j} >= 1` for every column. Terms landing on
    /// the same power may cancel; a full collapse leaves the constant 1
    /// (degree 0).
    pub fn substitute_power(&self, theta: &[u32]) -> OneVarPoly {
        assert_eq!(theta.len(), self.n, "direction has wrong arity");
        let mut coeffs: BTreeMap<u64, BigInt> = BTreeMap::new();
        for t in &self.terms {
            let w: u64 = t
                .exponents
                .iter()
                .zip(theta)
                .map(|(&e, &th)| e as u64 * th as u64)
                .sum();
            assert!(w >= 1, "direction gives a constant specialization");
            *coeffs.entry(w).or_insert_with(BigInt::zero) += &t.coeff;
        }
        let deg = *coeffs.keys().next_back().unwrap() as usize;
        let mut v = vec![BigInt::zero(); deg + 1];
        v[0] = BigInt::one();
        for (w, c) in coeffs {
            v[w as usize] += c;
        }
        // Cancellation can empty the top; re-trim but keep the constant.
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
        OneVarPoly { coeffs: v }
    }

    pub fn exponent_matrix(&self) -> ExponentMatrix {
        ExponentMatrix {
            n: self.n,
            cols: self.terms.iter().map(|t| t.exponents.clone()).collect(),
        }
    }

    /// Canonical text form accepted back by [`parse_poly`].
    pub fn render(&self) -> String {
        let mut out = String::from("1");
        for t in &self.terms {
            let neg = t.coeff.is_negative();
            out.push_str(if neg { " - " } else { " + " });
            let a = t.coeff.abs();
            let mut factors = Vec::new();
            for (i, &e) in t.exponents.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("X{}", i + 1));
                } else if e > 1 {
                    factors.push(format!("X{}^{}", i + 1, e));
                }
            }
            if !a.is_one() {
                out.push_str(&format!("{a}*"));
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The exponent matrix `alpha` of `h`: columns are term exponent vectors in
/// canonical term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMatrix {
    n: usize,
    cols: Vec<Vec<u32>>,
}

impl ExponentMatrix {
    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &[u32] {
        &self.cols[j]
    }

    pub fn cols(&self) -> &[Vec<u32>] {
        &self.cols
    }

    /// `alpha . beta^t`: the exponent vector of `X^{alpha . beta^t}`.
    pub fn times_multiindex(&self, beta: &[u32]) -> Vec<u64> {
        assert_eq!(beta.len(), self.cols.len());
        let mut out = vec![0u64; self.n];
        for (col, &b) in self.cols.iter().zip(beta) {
            if b == 0 {
                continue;
            }
            for (o, &e) in out.iter_mut().zip(col) {
                *o += e as u64 * b as u64;
            }
        }
        out
    }
}

/// One-variable integer polynomial with constant term exactly 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneVarPoly {
    coeffs: Vec<BigInt>,
}

impl OneVarPoly {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self, PolyError> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() || !coeffs[0].is_one() {
            return Err(PolyError::BadOneVarConstant);
        }
        if coeffs.len() < 2 {
            return Err(PolyError::ZeroDegree);
        }
        Ok(OneVarPoly { coeffs })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Formal derivative (loses the constant-term-1 invariant; returned raw).
    pub fn derivative_coeffs(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::from("1");
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            out.push_str(if neg { " - " } else { " + " });
            let a = c.abs();
            if !a.is_one() {
                out.push_str(&format!("{a}*"));
            }
            if k == 1 {
                out.push('T');
            } else {
                out.push_str(&format!("T^{k}"));
            }
        }
        out
    }
}

impl fmt::Display for OneVarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

const MAX_VAR_INDEX: usize = 32;
const MAX_EXPONENT: u64 = 9999;

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Var(usize),
    End,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<(usize, Tok), PolyError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.bytes.len() {
            return Ok((start, Tok::End));
        }
        let b = self.bytes[self.pos];
        match b {
            b'+' => {
                self.pos += 1;
                Ok((start, Tok::Plus))
            }
            b'-' => {
                self.pos += 1;
                Ok((start, Tok::Minus))
            }
            b'*' => {
                self.pos += 1;
                Ok((start, Tok::Star))
            }
            b'^' => {
                self.pos += 1;
                Ok((start, Tok::Caret))
            }
            b'X' | b'x' => {
                self.pos += 1;
                let d0 = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if d0 == self.pos {
                    return Err(PolyError::Syntax {
                        position: self.pos,
                        expected: "variable index after 'X'".into(),
                    });
                }
                let idx: usize = std::str::from_utf8(&self.bytes[d0..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| PolyError::Syntax {
                        position: d0,
                        expected: "variable index".into(),
                    })?;
                if idx == 0 || idx > MAX_VAR_INDEX {
                    return Err(PolyError::Syntax {
                        position: d0,
                        expected: format!("variable index in 1..={MAX_VAR_INDEX}"),
                    });
                }
                Ok((start, Tok::Var(idx)))
            }
            b'0'..=b'9' => {
                let d0 = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.bytes[d0..self.pos]).unwrap();
                Ok((start, Tok::Int(s.parse().unwrap())))
            }
            _ => Err(PolyError::Syntax {
                position: start,
                expected: "'+', '-', integer or 'X'".into(),
            }),
        }
    }
}

/// Parses the grammar
/// `expr := term (('+'|'-') term)*` where
/// `term := integer ['*' factor ('*' factor)*] | factor ('*' factor)*` and
/// `factor := 'X' index ['^' integer]` (whitespace-insensitive).
///
/// Constant terms are folded together and must total exactly 1; at least one
/// nonconstant term must remain.
pub fn parse_poly(text: &str) -> Result<IntPoly, PolyError> {
    let mut lx = Lexer::new(text);
    let mut constant = BigInt::zero();
    let mut raw: Vec<(BigInt, Vec<u32>)> = Vec::new();
    let mut max_index = 0usize;

    let mut pending_sign: Option<BigInt> = Some(BigInt::one());
    // Allow a leading sign.
    let save = lx.pos;
    match lx.next()? {
        (_, Tok::Minus) => pending_sign = Some(-BigInt::one()),
        (_, Tok::Plus) => {}
        _ => lx.pos = save,
    }

    loop {
        let sign = match pending_sign.take() {
            Some(s) => s,
            None => {
                let (pos, tok) = lx.next()?;
                match tok {
                    Tok::Plus => BigInt::one(),
                    Tok::Minus => -BigInt::one(),
                    Tok::End => break,
                    _ => {
                        return Err(PolyError::Syntax {
                            position: pos,
                            expected: "'+', '-' or end of input".into(),
                        })
                    }
                }
            }
        };

        // term := [integer] factors | integer
        let mut coeff = sign;
        let mut exps: BTreeMap<usize, u64> = BTreeMap::new();
        let mut saw_factor = false;
        let mut saw_int = false;

        let save = lx.pos;
        if let (_, Tok::Int(v)) = lx.next()? {
            coeff *= v;
            saw_int = true;
            // optional '*': if absent, the term is a pure constant
            let save2 = lx.pos;
            match lx.next()? {
                (_, Tok::Star) => {}
                _ => {
                    lx.pos = save2;
                    constant += coeff;
                    continue;
                }
            }
        } else {
            lx.pos = save;
        }

        loop {
            let (pos, tok) = lx.next()?;
            let idx = match tok {
                Tok::Var(i) => i,
                _ => {
                    return Err(PolyError::Syntax {
                        position: pos,
                        expected: if saw_int || saw_factor {
                            "'X' factor".into()
                        } else {
                            "integer or 'X' factor".into()
                        },
                    })
                }
            };
            saw_factor = true;
            max_index = max_index.max(idx);
            let save3 = lx.pos;
            let e: u64 = match lx.next()? {
                (_, Tok::Caret) => {
                    let (pos2, t2) = lx.next()?;
                    match t2 {
                        Tok::Int(v) => {
                            let e = v.to_u64().filter(|&e| (1..=MAX_EXPONENT).contains(&e));
                            e.ok_or(PolyError::Syntax {
                                position: pos2,
                                expected: format!("exponent in 1..={MAX_EXPONENT}"),
                            })?
                        }
                        _ => {
                            return Err(PolyError::Syntax {
                                position: pos2,
                                expected: "integer exponent".into(),
                            })
                        }
                    }
                }
                _ => {
                    lx.pos = save3;
                    1
                }
            };
            *exps.entry(idx).or_insert(0) += e;

            let save4 = lx.pos;
            match lx.next()? {
                (_, Tok::Star) => continue,
                _ => {
                    lx.pos = save4;
                    break;
                }
            }
        }
        debug_assert!(saw_factor);
        let width = *exps.keys().next_back().unwrap();
        let mut evec = vec![0u32; width];
        for (i, e) in exps {
            evec[i - 1] = u32::try_from(e.min(MAX_EXPONENT)).unwrap();
        }
        raw.push((coeff, evec));
    }

    if !constant.is_one() {
        return Err(PolyError::ConstantTermNotOne);
    }
    if raw.is_empty() {
        return Err(PolyError::ZeroPolynomial);
    }
    let n = max_index;
    let raw: Vec<_> = raw
        .into_iter()
        .map(|(c, mut e)| {
            e.resize(n, 0);
            (c, e)
        })
        .collect();
    IntPoly::from_terms(n, raw)
}

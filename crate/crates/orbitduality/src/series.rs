//! Exact arithmetic over the truncated power-series ring F_p[t]/(t^N):
//! scalars, matrices with division-free characteristic data, and monic
//! polynomials in an outer variable with series coefficients.

use crate::error::{Error, Result};
use crate::field::{Field, Fp};
use serde::{Deserialize, Serialize};
use std::fmt;

/// An element of F_p[t]/(t^N); `coeffs[k]` is the coefficient of t^k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeriesScalar {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl SeriesScalar {
    pub fn zero(p: u64, precision: usize) -> Self {
        assert!(precision >= 1);
        SeriesScalar {
            p,
            coeffs: vec![0; precision],
        }
    }

    pub fn constant(p: u64, c: u64, precision: usize) -> Self {
        let mut s = SeriesScalar::zero(p, precision);
        s.coeffs[0] = c % p;
        s
    }

    pub fn one(p: u64, precision: usize) -> Self {
        SeriesScalar::constant(p, 1, precision)
    }

    pub fn from_coeffs(p: u64, coeffs: Vec<u64>) -> Self {
        assert!(!coeffs.is_empty());
        SeriesScalar {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the first nonzero coefficient; the truncation order when the
    /// element is zero to working precision.
    pub fn t_order(&self) -> usize {
        self.coeffs
            .iter()
            .position(|&c| c != 0)
            .unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0] != 0
    }

    /// Value at t = 0.
    pub fn eval0(&self) -> u64 {
        self.coeffs[0]
    }

    fn check_compat(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed characteristics");
        assert_eq!(self.precision(), other.precision(), "mixed precisions");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other);
        let f = Fp::new(self.p);
        SeriesScalar {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compat(other);
        let f = Fp::new(self.p);
        SeriesScalar {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        let f = Fp::new(self.p);
        SeriesScalar {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compat(other);
        let p = self.p;
        let n = self.precision();
        let mut acc = vec![0u128; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n - i).enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p as u128;
            }
        }
        SeriesScalar {
            p,
            coeffs: acc.into_iter().map(|c| c as u64).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = Fp::new(self.p);
        SeriesScalar {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c % self.p)).collect(),
        }
    }

    /// Multiplication by t^k (drops the top k coefficients).
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.precision();
        let mut coeffs = vec![0u64; n];
        let keep = n.saturating_sub(k);
        if keep > 0 {
            coeffs[k..k + keep].copy_from_slice(&self.coeffs[..keep]);
        }
        SeriesScalar { p: self.p, coeffs }
    }

    /// Multiplicative inverse; defined exactly for units.
    pub fn invert(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let f = Fp::new(self.p);
        let n = self.precision();
        let c0_inv = f.inv(self.coeffs[0]).expect("unit");
        let mut inv = vec![0u64; n];
        inv[0] = c0_inv;
        for k in 1..n {
            // coefficient k of self * inv must vanish
            let mut s = 0u64;
            for (j, &ij) in inv.iter().enumerate().take(k) {
                s = f.add(s, f.mul(self.coeffs[k - j], ij));
            }
            inv[k] = f.neg(f.mul(s, c0_inv));
        }
        Some(SeriesScalar {
            p: self.p,
            coeffs: inv,
        })
    }

    /// Division by a small integer (requires it to be a unit mod p).
    fn div_by_int(&self, k: u64) -> Self {
        let f = Fp::new(self.p);
        let inv = f.inv(k % self.p).expect("divisor must be a unit mod p");
        self.scale(inv)
    }
}

impl fmt::Display for SeriesScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " (mod t^{})", self.precision())
    }
}

/// A rectangular matrix over F_p[t]/(t^N).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesMatrix {
    pub p: u64,
    pub precision: usize,
    pub rows: usize,
    pub cols: usize,
    data: Vec<SeriesScalar>,
}

impl SeriesMatrix {
    pub fn zero(p: u64, precision: usize, rows: usize, cols: usize) -> Self {
        SeriesMatrix {
            p,
            precision,
            rows,
            cols,
            data: vec![SeriesScalar::zero(p, precision); rows * cols],
        }
    }

    pub fn identity(p: u64, precision: usize, n: usize) -> Self {
        let mut m = SeriesMatrix::zero(p, precision, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = SeriesScalar::one(p, precision);
        }
        m
    }

    pub fn from_fn(
        p: u64,
        precision: usize,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> SeriesScalar,
    ) -> Self {
        let mut m = SeriesMatrix::zero(p, precision, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                assert_eq!(v.p, p);
                assert_eq!(v.precision(), precision);
                *m.at_mut(i, j) = v;
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &SeriesScalar {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut SeriesScalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SeriesMatrix {
            p: self.p,
            precision: self.precision,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SeriesMatrix {
            p: self.p,
            precision: self.precision,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = SeriesMatrix::zero(self.p, self.precision, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.mul(other.at(k, j));
                    *out.at_mut(i, j) = out.at(i, j).add(&prod);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &SeriesScalar) -> Self {
        SeriesMatrix {
            p: self.p,
            precision: self.precision,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(s)).collect(),
        }
    }

    pub fn trace(&self) -> SeriesScalar {
        assert_eq!(self.rows, self.cols);
        let mut t = SeriesScalar::zero(self.p, self.precision);
        for i in 0..self.rows {
            t = t.add(self.at(i, i));
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Submatrix with the given row and column ranges.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.p, self.precision, r1 - r0, c1 - c0, |i, j| {
            self.at(r0 + i, c0 + j).clone()
        })
    }

    /// Characteristic data computed division-free except for divisions by
    /// 1..=n, hence the requirement p > n.
    pub fn char_data(&self) -> CharData {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        assert!(
            (self.p as usize) > n,
            "characteristic data needs p > matrix dimension"
        );
        let one = SeriesScalar::one(self.p, self.precision);
        if n == 0 {
            return CharData {
                coeffs: vec![one.clone()],
                adjugate: SeriesMatrix::zero(self.p, self.precision, 0, 0),
                det: one,
            };
        }
        // c[n] = 1, c[n-k] produced at step k.
        let mut coeffs = vec![SeriesScalar::zero(self.p, self.precision); n + 1];
        coeffs[n] = one.clone();
        let mut b = SeriesMatrix::identity(self.p, self.precision, n);
        for k in 1..=n {
            let m = self.mul(&b);
            let c = m.trace().neg().div_by_int(k as u64);
            coeffs[n - k] = c.clone();
            let mut next = m;
            for i in 0..n {
                *next.at_mut(i, i) = next.at(i, i).add(&c);
            }
            b = next;
        }
        assert!(
            b.is_zero(),
            "characteristic recursion must terminate at zero"
        );
        let det = if n.is_multiple_of(2) {
            coeffs[0].clone()
        } else {
            coeffs[0].neg()
        };
        // adjugate = (-1)^{n-1} (charpoly minus constant term, divided by the
        // variable) evaluated back at the matrix.
        let quotient_poly = SeriesPoly::new(coeffs[1..].to_vec());
        let mut adjugate = quotient_poly.eval_matrix(self);
        if n.is_multiple_of(2) {
            adjugate = adjugate.scale(&one.neg());
        }
        debug_assert!({
            let prod = self.mul(&adjugate);
            let mut expected = SeriesMatrix::zero(self.p, self.precision, n, n);
            for i in 0..n {
                *expected.at_mut(i, i) = det.clone();
            }
            prod == expected
        });
        CharData {
            coeffs,
            adjugate,
            det,
        }
    }

    pub fn det(&self) -> SeriesScalar {
        self.char_data().det
    }
}

/// Characteristic polynomial coefficients (index = power of the variable),
/// adjugate, and determinant of a square series matrix.
#[derive(Debug, Clone)]
pub struct CharData {
    pub coeffs: Vec<SeriesScalar>,
    pub adjugate: SeriesMatrix,
    pub det: SeriesScalar,
}

/// A monic polynomial in an outer variable with series coefficients;
/// `coeffs[i]` multiplies the i-th power, and the leading coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesPoly {
    pub coeffs: Vec<SeriesScalar>,
}

impl SeriesPoly {
    pub fn new(coeffs: Vec<SeriesScalar>) -> Self {
        assert!(!coeffs.is_empty());
        let lead = coeffs.last().unwrap();
        assert!(
            lead.eval0() == 1 && lead.t_order() == 0 && lead.coeffs.iter().skip(1).all(|&c| c == 0),
            "polynomial must be monic"
        );
        SeriesPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn p(&self) -> u64 {
        self.coeffs[0].p
    }

    pub fn precision(&self) -> usize {
        self.coeffs[0].precision()
    }

    /// The monomial `variable^1`.
    pub fn variable(p: u64, precision: usize) -> Self {
        SeriesPoly::new(vec![
            SeriesScalar::zero(p, precision),
            SeriesScalar::one(p, precision),
        ])
    }

    /// Product of two monic polynomials.
    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p();
        let precision = self.precision();
        let d = self.degree() + other.degree();
        let mut coeffs = vec![SeriesScalar::zero(p, precision); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        SeriesPoly::new(coeffs)
    }

    /// Substitutes the negated variable: coefficient i picks up (-1)^i.
    pub fn negate_variable(&self) -> Vec<SeriesScalar> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { c.neg() } else { c.clone() })
            .collect()
    }

    /// Companion matrix of the polynomial (multiplication by the variable on
    /// the quotient algebra in the power basis).
    pub fn companion(&self) -> SeriesMatrix {
        let d = self.degree();
        assert!(d >= 1);
        let p = self.p();
        let precision = self.precision();
        let mut m = SeriesMatrix::zero(p, precision, d, d);
        for i in 0..d - 1 {
            *m.at_mut(i + 1, i) = SeriesScalar::one(p, precision);
        }
        for i in 0..d {
            *m.at_mut(i, d - 1) = self.coeffs[i].neg();
        }
        m
    }

    /// Evaluates the polynomial at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(m.rows, m.cols);
        let n = m.rows;
        let p = m.p;
        let precision = m.precision;
        let mut acc = SeriesMatrix::zero(p, precision, n, n);
        for i in 0..n {
            *acc.at_mut(i, i) = self.coeffs[self.degree()].clone();
        }
        for k in (0..self.degree()).rev() {
            acc = acc.mul(m);
            for i in 0..n {
                *acc.at_mut(i, i) = acc.at(i, i).add(&self.coeffs[k]);
            }
        }
        acc
    }
}

/// Error helper: interprets a full-precision zero as undecidable.
pub fn order_or_precision_loss(s: &SeriesScalar, what: &str) -> Result<usize> {
    let ord = s.t_order();
    if ord >= s.precision() {
        Err(Error::PrecisionLoss(what.to_string()))
    } else {
        Ok(ord)
    }
}

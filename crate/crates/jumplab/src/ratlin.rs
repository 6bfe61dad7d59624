//! Exact rational scalars, dense matrices and linear solving.
//!
//! Everything here works over arbitrary-precision rationals; results are
//! exact identities, never approximations. The Laplacian pseudoinverse is
//! obtained from the rank-one correction `(L + J/n)^-1 - J/n`, which equals
//! the Moore-Penrose pseudoinverse whenever `ker L` is spanned by the
//! constant vector, i.e. on connected networks.

use std::collections::BTreeMap;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::graph::{EdgeId, MultiGraph};
use crate::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` as a rational; panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Dense matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row);
        }
        RatMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// All entries set to the same value.
    pub fn filled(rows: usize, cols: usize, value: Rational) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = &*e * s;
        }
        out
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^T * self * y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.rows, "dimension mismatch");
        let ay = self.apply(y);
        x.iter().zip(&ay).map(|(a, b)| a * b).sum()
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &prod;
                }
            }
        }
        out
    }
}

// Bit size of an entry, used to pick pivots that keep intermediate
// numerators small during exact elimination.
fn bit_size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Gauss-Jordan with full pivoting on the left block: reduces `[a | rhs]`
/// and returns `X` with `a * X = rhs` exactly.
fn gauss_jordan(a: &RatMatrix, rhs: &RatMatrix) -> Result<RatMatrix> {
    assert!(a.is_square(), "left block must be square");
    assert_eq!(a.rows(), rhs.rows(), "dimension mismatch");
    let n = a.rows();
    let extra = rhs.cols();
    let mut m = RatMatrix::zeros(n, n + extra);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)].clone();
        }
        for j in 0..extra {
            m[(i, n + j)] = rhs[(i, j)].clone();
        }
    }
    // col_of[k] = original variable index sitting in column k
    let mut col_of: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if !m[(i, j)].is_zero()
                    && pivot
                        .map(|p| bit_size(&m[(i, j)]) < bit_size(&m[p]))
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let (pi, pj) = pivot.ok_or(Error::SingularMatrix)?;
        if pi != k {
            for j in 0..n + extra {
                m.entries.swap(pi * (n + extra) + j, k * (n + extra) + j);
            }
        }
        if pj != k {
            for i in 0..n {
                m.entries.swap(i * (n + extra) + pj, i * (n + extra) + k);
            }
            col_of.swap(pj, k);
        }
        let inv = m[(k, k)].recip();
        for j in 0..n + extra {
            m[(k, j)] = &m[(k, j)] * &inv;
        }
        for i in 0..n {
            if i == k || m[(i, k)].is_zero() {
                continue;
            }
            let f = m[(i, k)].clone();
            for j in 0..n + extra {
                let delta = &f * &m[(k, j)];
                m[(i, j)] = &m[(i, j)] - &delta;
            }
        }
    }
    let mut x = RatMatrix::zeros(n, extra);
    for k in 0..n {
        for j in 0..extra {
            x[(col_of[k], j)] = m[(k, n + j)].clone();
        }
    }
    Ok(x)
}

/// Solves `a * x = b` exactly for a nonsingular square `a`.
pub fn solve_linear(a: &RatMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let rhs = RatMatrix {
        rows: b.len(),
        cols: 1,
        entries: b.to_vec(),
    };
    let x = gauss_jordan(a, &rhs)?;
    Ok(x.entries)
}

pub(crate) fn invert(a: &RatMatrix) -> Result<RatMatrix> {
    gauss_jordan(a, &RatMatrix::identity(a.rows()))
}

/// Laplacian of a proper resistive network: off-diagonal `(u, v)` holds
/// minus the sum of conductances `1/mu(e)` over edges between `u` and `v`;
/// loops are ignored. Every edge must carry strictly positive resistance.
pub fn laplacian(g: &MultiGraph, mu: &BTreeMap<EdgeId, Rational>) -> Result<RatMatrix> {
    let n = g.vertex_count();
    let mut l = RatMatrix::zeros(n, n);
    for (e, u, v) in g.edges() {
        let r = mu.get(&e).ok_or(Error::UnknownEdge(e))?;
        if !r.is_positive() {
            return Err(Error::NonPositiveResistance(e));
        }
        if u == v {
            continue;
        }
        let c = r.recip();
        let (i, j) = (u.0, v.0);
        l[(i, i)] = &l[(i, i)] + &c;
        l[(j, j)] = &l[(j, j)] + &c;
        l[(i, j)] = &l[(i, j)] - &c;
        l[(j, i)] = &l[(j, i)] - &c;
    }
    Ok(l)
}

/// Moore-Penrose pseudoinverse of a connected network Laplacian, computed
/// exactly as `(L + J/n)^-1 - J/n`. Fails with `DisconnectedNetwork` when
/// the kernel is larger than the constants.
pub fn laplacian_pseudoinverse(l: &RatMatrix) -> Result<RatMatrix> {
    assert!(l.is_square(), "Laplacian must be square");
    let n = l.rows();
    if n == 0 {
        return Ok(RatMatrix::zeros(0, 0));
    }
    debug_assert!(l.is_symmetric(), "Laplacian must be symmetric");
    debug_assert!(
        l.row_sums().iter().all(Rational::is_zero),
        "Laplacian rows must sum to zero"
    );
    let jn = RatMatrix::filled(n, n, frac(1, n as i64));
    let shifted = l + &jn;
    // (L + J/n) is singular exactly when the network is disconnected.
    let inv = invert(&shifted).map_err(|_| Error::DisconnectedNetwork)?;
    let pinv = &inv - &jn;
    debug_assert!(penrose_identities_hold(l, &pinv));
    Ok(pinv)
}

/// Checks all four Penrose identities exactly:
/// `L P L = L`, `P L P = P`, `(L P)^T = L P`, `(P L)^T = P L`.
pub fn penrose_identities_hold(l: &RatMatrix, p: &RatMatrix) -> bool {
    let lp = l * p;
    let pl = p * l;
    &lp * l == *l && &pl * p == *p && lp.transpose() == lp && pl.transpose() == pl
}

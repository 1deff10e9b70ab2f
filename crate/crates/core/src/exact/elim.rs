//! Gauss-Jordan elimination and what is built on it: rank, reduced row
//! echelon form, linear solving, null spaces, inverses and the full-rank
//! factorization.
//!
//! Elimination runs fraction-free. Each row is first cleared of denominators,
//! then every elimination step is a cross-multiplication
//! `row_i <- p * row_i - a_ic * row_r` followed by division of the row by its
//! content (gcd of entries). Entries stay integral, growth is bounded by the
//! content reduction, and the reduced echelon form is recovered by one
//! rational division per pivot row at the end. Pivots are chosen
//! deterministically: scan columns left to right and take the first row at or
//! below the current pivot row whose entry is nonzero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mat::Mat;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rref: Mat,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn integer_rows(a: &Mat) -> Vec<Vec<BigInt>> {
    (0..a.rows())
        .map(|i| {
            let row = a.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let mut out: Vec<BigInt> = row.iter().map(|v| v.numer() * (&l / v.denom())).collect();
            reduce_content(&mut out);
            out
        })
        .collect()
}

fn reduce_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Fraction-free Gauss-Jordan; pivots are only searched among the first
/// `pivot_limit` columns (the remaining columns ride along, as for an
/// augmented system).
fn echelon_limited(a: &Mat, pivot_limit: usize) -> Echelon {
    let (rows, cols) = a.shape();
    let mut m = integer_rows(a);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_limit.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        if m[r][c].is_negative() {
            for v in m[r].iter_mut() {
                *v = -&*v;
            }
        }
        let (head, tail) = m.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().expect("pivot row exists");
        for row in head.iter_mut().chain(below.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            let p = &pivot_row[c];
            for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                *v = &*v * p - &factor * pv;
            }
            reduce_content(row);
        }
        pivots.push(c);
        r += 1;
    }
    let mut rref = Mat::zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        let lead = pivots.get(i).map(|&c| row[c].clone());
        for (j, v) in row.iter().enumerate() {
            rref[(i, j)] = match &lead {
                Some(p) => Rational::new(v.clone(), p.clone()),
                None => Rational::from_integer(v.clone()),
            };
        }
    }
    Echelon { rref, pivots }
}

/// Reduced row echelon form of `a`.
pub fn echelon(a: &Mat) -> Echelon {
    echelon_limited(a, a.cols())
}

pub fn rank(a: &Mat) -> usize {
    echelon(a).rank()
}

/// Some exact solution `x` of `a x = b` (free variables set to zero), or
/// `None` when the system is inconsistent. `b` may have several columns.
pub fn solve(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    if a.rows() != b.rows() {
        return Err(Error::ShapeMismatch {
            op: "solve",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let n = a.cols();
    let aug = Mat::hstack(&[a, b])?;
    let ech = echelon_limited(&aug, n);
    let r = ech.rank();
    for i in r..a.rows() {
        if (n..aug.cols()).any(|j| !ech.rref[(i, j)].is_zero()) {
            return Ok(None);
        }
    }
    let mut x = Mat::zeros(n, b.cols());
    for (i, &p) in ech.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(p, j)] = ech.rref[(i, n + j)].clone();
        }
    }
    Ok(Some(x))
}

/// Basis of the right null space `{x : a x = 0}`, one vector per free column.
pub fn null_space(a: &Mat) -> Vec<Vec<Rational>> {
    let ech = echelon(a);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (i, &p) in ech.pivots.iter().enumerate() {
                v[p] = -ech.rref[(i, f)].clone();
            }
            v
        })
        .collect()
}

/// Exact inverse of a square matrix.
pub fn inverse(a: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    let aug = Mat::hstack(&[a, &Mat::identity(n)])?;
    let ech = echelon_limited(&aug, n);
    if ech.rank() < n {
        return Err(Error::NotInvertible);
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    Ok(ech.rref.select_cols(&cols))
}

/// `a = f * g` with `f` of full column rank and `g` of full row rank.
///
/// `g` is the nonzero part of the reduced row echelon form of `a` and `f`
/// collects the columns of `a` at the pivot positions. For `a = 0` both
/// factors are empty (`rows x 0` and `0 x cols`).
pub fn full_rank_factorization(a: &Mat) -> (Mat, Mat) {
    let ech = echelon(a);
    let g = ech.rref.top_rows(ech.rank());
    let f = a.select_cols(&ech.pivots);
    (f, g)
}

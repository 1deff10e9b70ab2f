//! Circulant permutation matrices and circulant diagonals.
//!
//! `C_j = C^j` where `C` is the basic cyclic shift, so `C_j` has a one at
//! `(h, σ_j(h))` with `σ_j(h) = h + j (mod n)`. The `n^2` positions of an
//! `n x n` matrix split into `n` circulant diagonals, one per `C_j`.
//! Diagonals are labeled `1..=n`; the main diagonal carries label `n`
//! because `C_n = I`. Matrix positions are 0-based.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{in_unit_interval, is_nonnegative, Mat, Rational};

fn check_label(n: usize, j: usize) -> Result<()> {
    if n == 0 || j == 0 || j > n {
        return Err(Error::IndexOutOfRange {
            what: "diagonal",
            index: j,
            max: n,
        });
    }
    Ok(())
}

/// Column hit by row `h` on diagonal `j`: `σ_j(h)`.
pub fn sigma(n: usize, j: usize, h: usize) -> usize {
    (h + j) % n
}

/// Circulant permutation matrix `C_j`, `1 <= j <= n`.
pub fn circulant_perm(n: usize, j: usize) -> Result<Mat> {
    check_label(n, j)?;
    Ok(Mat::from_fn(n, n, |h, k| {
        if k == sigma(n, j, h) {
            Rational::one()
        } else {
            Rational::zero()
        }
    }))
}

/// Label in `1..=n` of the circulant diagonal through position `(h, k)`.
pub fn diag_index(n: usize, h: usize, k: usize) -> Result<usize> {
    for (what, idx) in [("row", h), ("column", k)] {
        if idx >= n {
            return Err(Error::IndexOutOfRange {
                what,
                index: idx + 1,
                max: n,
            });
        }
    }
    Ok(label(n, h, k))
}

pub(crate) fn label(n: usize, h: usize, k: usize) -> usize {
    match (k + n - h) % n {
        0 => n,
        j => j,
    }
}

/// Positions `(h, σ_j(h))` of diagonal `j`, ordered by row.
pub fn diagonal_positions(n: usize, j: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).map(move |h| (h, sigma(n, j, h)))
}

/// Nonnegative entries with every row and column summing to exactly one.
pub fn is_doubly_stochastic(m: &Mat) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m.rows();
    if !m.data().iter().all(is_nonnegative) {
        return false;
    }
    let one = Rational::one();
    let rows_ok = (0..n).all(|i| m.row(i).iter().sum::<Rational>() == one);
    let cols_ok = (0..n).all(|j| (0..n).map(|i| &m[(i, j)]).sum::<Rational>() == one);
    rows_ok && cols_ok
}

/// Convex combination `Σ r_j C_j`, held by its coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CirculantCombination {
    n: usize,
    #[serde(serialize_with = "ser_rationals")]
    coeffs: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::exact::format_rational))
}

impl CirculantCombination {
    /// `coeffs[j - 1]` is the weight on `C_j`; weights must be nonnegative and
    /// sum to one.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidCombination("empty coefficient vector".into()));
        }
        if let Some(bad) = coeffs.iter().find(|r| !is_nonnegative(r)) {
            return Err(Error::InvalidCombination(format!("negative weight {bad}")));
        }
        let total: Rational = coeffs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidCombination(format!("weights sum to {total}")));
        }
        Ok(Self { n: coeffs.len(), coeffs })
    }

    /// The single permutation `C_k`.
    pub fn unit(n: usize, k: usize) -> Result<Self> {
        check_label(n, k)?;
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[k - 1] = Rational::one();
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Weight on `C_j` (1-based).
    pub fn weight(&self, j: usize) -> &Rational {
        &self.coeffs[j - 1]
    }

    pub fn to_matrix(&self) -> Mat {
        let n = self.n;
        Mat::from_fn(n, n, |h, k| self.coeffs[label(n, h, k) - 1].clone())
    }

    /// Recovers the weights of a circulant doubly stochastic matrix, or `None`
    /// if `m` is not constant along each circulant diagonal or the constants
    /// are not a probability vector.
    pub fn from_matrix(m: &Mat) -> Option<Self> {
        if !m.is_square() || m.rows() == 0 {
            return None;
        }
        let n = m.rows();
        let mut coeffs = Vec::with_capacity(n);
        for j in 1..=n {
            let mut pos = diagonal_positions(n, j);
            let (h0, k0) = pos.next()?;
            let v = &m[(h0, k0)];
            if pos.any(|(h, k)| &m[(h, k)] != v) || !in_unit_interval(v) {
                return None;
            }
            coeffs.push(v.clone());
        }
        Self::new(coeffs).ok()
    }
}

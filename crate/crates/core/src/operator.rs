//! Linear operators on `M_n` as exact `n^2 x n^2` matrices.
//!
//! Vectorization is row-major throughout: component `h * n + k` of `vec(X)`
//! is `x_{hk}` (0-based). Column `h * n + k` of the representation is
//! `vec(T(E_{hk}))`. Since the matrix units are orthonormal for the trace
//! inner product, inner products of matrices are dot products of their
//! vectorizations and the adjoint is the transposed representation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, echelon, null_space, Mat, Rational};

pub fn vec_of(x: &Mat) -> Vec<Rational> {
    x.data().to_vec()
}

pub fn unvec(n: usize, v: Vec<Rational>) -> Mat {
    Mat::new(n, n, v).expect("vector of length n^2")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorRep {
    n: usize,
    rep: Mat,
}

impl OperatorRep {
    pub fn new(n: usize, rep: Mat) -> Result<Self> {
        let d = n * n;
        if rep.shape() != (d, d) {
            return Err(Error::ShapeMismatch {
                op: "operator representation",
                left: (d, d),
                right: rep.shape(),
            });
        }
        Ok(Self { n, rep })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rep: Mat::identity(n * n),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            rep: Mat::zeros(n * n, n * n),
        }
    }

    /// Operator determined by the images of the matrix units; positions not
    /// listed map to zero. Positions are 0-based.
    pub fn from_basis_images(n: usize, images: impl IntoIterator<Item = ((usize, usize), Mat)>) -> Result<Self> {
        let d = n * n;
        let mut rep = Mat::zeros(d, d);
        for ((h, k), img) in images {
            if h >= n || k >= n {
                return Err(Error::IndexOutOfRange {
                    what: "basis position",
                    index: h.max(k) + 1,
                    max: n,
                });
            }
            if img.shape() != (n, n) {
                return Err(Error::ShapeMismatch {
                    op: "basis image",
                    left: (n, n),
                    right: img.shape(),
                });
            }
            let col = h * n + k;
            for (row, v) in img.into_data().into_iter().enumerate() {
                rep[(row, col)] = v;
            }
        }
        Ok(Self { n, rep })
    }

    /// Tabulates a linear map given as a closure on matrices.
    pub fn from_fn(n: usize, f: impl Fn(&Mat) -> Mat) -> Self {
        let images = (0..n).flat_map(|h| (0..n).map(move |k| (h, k)));
        let images: Vec<_> = images.map(|(h, k)| ((h, k), f(&Mat::unit(n, h, k)))).collect();
        Self::from_basis_images(n, images).expect("closure returns n x n matrices")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rep(&self) -> &Mat {
        &self.rep
    }

    pub fn apply(&self, x: &Mat) -> Result<Mat> {
        if x.shape() != (self.n, self.n) {
            return Err(Error::ShapeMismatch {
                op: "apply",
                left: (self.n, self.n),
                right: x.shape(),
            });
        }
        let v = self.rep.mul(&Mat::column(vec_of(x)))?;
        Ok(unvec(self.n, v.into_data()))
    }

    /// `T(E_{hk})`, 0-based position.
    pub fn basis_image(&self, h: usize, k: usize) -> Mat {
        unvec(self.n, self.rep.col(h * self.n + k))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch {
                op: "compose",
                left: self.rep.shape(),
                right: other.rep.shape(),
            });
        }
        Ok(Self {
            n: self.n,
            rep: self.rep.mul(&other.rep)?,
        })
    }

    pub fn pow(&self, m: usize) -> Self {
        let mut out = Self::identity(self.n);
        for _ in 0..m {
            out = out.compose(self).expect("same dimension");
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            rep: self.rep.transpose(),
        }
    }

    pub fn rank(&self) -> usize {
        exact::rank(&self.rep)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            n: self.n,
            rep: self.rep.add(&other.rep)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            n: self.n,
            rep: self.rep.sub(&other.rep)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn kernel_basis(&self) -> SubspaceBasis {
        SubspaceBasis::from_vectors(self.n, Subspace::Kernel, null_space(&self.rep))
    }

    pub fn range_basis(&self) -> SubspaceBasis {
        let t = self.rep.transpose();
        let ech = echelon(&t);
        let vectors = (0..ech.rank()).map(|i| ech.rref.row(i).to_vec()).collect();
        SubspaceBasis::from_vectors(self.n, Subspace::Range, vectors)
    }

    /// Basis of one of the four fundamental subspaces.
    pub fn subspace(&self, which: Subspace) -> SubspaceBasis {
        match which {
            Subspace::Kernel => self.kernel_basis(),
            Subspace::Range => self.range_basis(),
            Subspace::KernelPerp => self.kernel_basis().perp(),
            Subspace::RangePerp => self.range_basis().perp(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subspace {
    Kernel,
    Range,
    KernelPerp,
    RangePerp,
}

impl Subspace {
    pub const ALL: [Subspace; 4] = [Self::Kernel, Self::Range, Self::KernelPerp, Self::RangePerp];

    fn complement(self) -> Self {
        match self {
            Self::Kernel => Self::KernelPerp,
            Self::KernelPerp => Self::Kernel,
            Self::Range => Self::RangePerp,
            Self::RangePerp => Self::Range,
        }
    }
}

/// Linearly independent spanning set of a subspace of `M_n`, stored in
/// reduced row echelon form (rows are vectorized basis matrices), so two
/// bases of the same subspace compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    n: usize,
    which: Subspace,
    rows: Mat,
}

impl SubspaceBasis {
    fn from_vectors(n: usize, which: Subspace, vectors: Vec<Vec<Rational>>) -> Self {
        let d = n * n;
        let stacked = Mat::new(vectors.len(), d, vectors.into_iter().flatten().collect())
            .expect("vectors of length n^2");
        let ech = echelon(&stacked);
        Self {
            n,
            which,
            rows: ech.rref.top_rows(ech.rank()),
        }
    }

    pub fn which(&self) -> Subspace {
        self.which
    }

    pub fn dim(&self) -> usize {
        self.rows.rows()
    }

    pub fn vectors(&self) -> Vec<Mat> {
        (0..self.dim()).map(|i| unvec(self.n, self.rows.row(i).to_vec())).collect()
    }

    /// Orthogonal complement under the trace inner product.
    pub fn perp(&self) -> Self {
        let vectors = null_space(&self.rows);
        Self::from_vectors(self.n, self.which.complement(), vectors)
    }

    /// Exact membership of `x` in the span.
    pub fn contains(&self, x: &Mat) -> bool {
        if x.shape() != (self.n, self.n) {
            return false;
        }
        if self.dim() == 0 {
            return x.is_zero();
        }
        exact::solve(&self.rows.transpose(), &Mat::column(vec_of(x)))
            .expect("matching dimensions")
            .is_some()
    }

    /// Same subspace regardless of label.
    pub fn same_span(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}

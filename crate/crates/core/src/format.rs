//! JSON file formats for matrices and operators.
//!
//! Rationals are written as canonical strings (`"3"`, `"-1/2"`); on input a
//! plain JSON integer is accepted as well. Matrix entries are an array of
//! rows.
//!
//! An operator file carries exactly one of two representations:
//!
//! * `rep`: the `n^2 x n^2` matrix whose column `(h-1)*n + k` (1-based `h`,
//!   `k`; equivalently 0-based `h*n + k`) holds `vec(T(E_hk))`, where
//!   `vec` lists the entries of a matrix row by row;
//! * `basis_images`: a list of `{ "h", "k", "image" }` with 1-based `h`,
//!   `k`; units that are not listed map to zero.
//!
//! ```json
//! { "n": 2, "vectorization": "row-major",
//!   "basis_images": [ { "h": 1, "k": 2, "image": [["0", "0"], ["1", "0"]] } ] }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Mat, Rational};
use crate::operator::OperatorRep;

pub const VECTORIZATION: &str = "row-major";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            Scalar::Int(v) => Ok(crate::exact::int(*v)),
            Scalar::Text(s) => parse_rational(s),
        }
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::Text(format_rational(r))
    }
}

pub type Rows = Vec<Vec<Scalar>>;

fn rows_to_mat(rows: &Rows, expect: (usize, usize), what: &str) -> Result<Mat> {
    if rows.len() != expect.0 || rows.iter().any(|r| r.len() != expect.1) {
        return Err(Error::Parse(format!(
            "{what}: expected a {}x{} array",
            expect.0, expect.1
        )));
    }
    let data = rows
        .iter()
        .flatten()
        .map(Scalar::to_rational)
        .collect::<Result<Vec<_>>>()?;
    Mat::new(expect.0, expect.1, data)
}

fn mat_to_rows(m: &Mat) -> Rows {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(Scalar::from_rational).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Rows,
}

impl MatrixFile {
    pub fn from_mat(m: &Mat) -> Self {
        Self {
            n: m.rows(),
            entries: mat_to_rows(m),
        }
    }

    pub fn to_mat(&self) -> Result<Mat> {
        rows_to_mat(&self.entries, (self.n, self.n), "entries")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisImage {
    pub h: usize,
    pub k: usize,
    pub image: Rows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectorization: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_images: Option<Vec<BasisImage>>,
}

impl OperatorFile {
    pub fn from_operator(t: &OperatorRep) -> Self {
        Self {
            n: t.n(),
            vectorization: Some(VECTORIZATION.to_string()),
            rep: Some(mat_to_rows(t.rep())),
            basis_images: None,
        }
    }

    pub fn to_operator(&self) -> Result<OperatorRep> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Parse("operator dimension must be positive".into()));
        }
        if let Some(v) = &self.vectorization {
            if v != VECTORIZATION {
                return Err(Error::Parse(format!("unsupported vectorization {v:?}")));
            }
        }
        match (&self.rep, &self.basis_images) {
            (Some(rep), None) => OperatorRep::new(n, rows_to_mat(rep, (n * n, n * n), "rep")?),
            (None, Some(images)) => {
                let mut seen = vec![false; n * n];
                let mut parsed = Vec::with_capacity(images.len());
                for img in images {
                    if img.h == 0 || img.k == 0 || img.h > n || img.k > n {
                        return Err(Error::Parse(format!(
                            "basis image position ({}, {}) outside 1..={n}",
                            img.h, img.k
                        )));
                    }
                    let slot = (img.h - 1) * n + img.k - 1;
                    if std::mem::replace(&mut seen[slot], true) {
                        return Err(Error::Parse(format!("duplicate basis image ({}, {})", img.h, img.k)));
                    }
                    parsed.push(((img.h - 1, img.k - 1), rows_to_mat(&img.image, (n, n), "image")?));
                }
                OperatorRep::from_basis_images(n, parsed)
            }
            _ => Err(Error::Parse(
                "operator file needs exactly one of `rep` or `basis_images`".into(),
            )),
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_matrix(text: &str) -> Result<Mat> {
    serde_json::from_str::<MatrixFile>(text).map_err(json_error)?.to_mat()
}

pub fn parse_operator(text: &str) -> Result<OperatorRep> {
    serde_json::from_str::<OperatorFile>(text)
        .map_err(json_error)?
        .to_operator()
}

pub fn matrix_to_json(m: &Mat) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_mat(m)).expect("serializable")
}

pub fn operator_to_json(t: &OperatorRep) -> String {
    serde_json::to_string_pretty(&OperatorFile::from_operator(t)).expect("serializable")
}

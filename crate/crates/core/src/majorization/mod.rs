//! Decision procedures, with witnesses, for Hadamard majorization
//! (`X = D ⊙ Y`, `D` doubly stochastic) and Hadamard circulant majorization
//! (`X = C ⊙ Y`, `C` a convex combination of circulant permutations).

mod flow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::circulant::{diagonal_positions, is_doubly_stochastic, CirculantCombination};
use crate::error::{Error, Result};
use crate::exact::{in_unit_interval, Mat, Rational};
use flow::MaxFlow;

/// Certificate for `X ≺_HC Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HcWitness {
    pub combo: CirculantCombination,
}

/// Certificate for `X ≺_H Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HWitness {
    pub d: Mat,
}

fn check_pair(x: &Mat, y: &Mat) -> Result<usize> {
    if !x.is_square() {
        return Err(Error::NotSquare(x.rows(), x.cols()));
    }
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            op: "majorization",
            left: x.shape(),
            right: y.shape(),
        });
    }
    Ok(x.rows())
}

/// Weight forced on a single cell by `x = d * y`: `Some(Some(x/y))` when
/// `y != 0`, `Some(None)` when the cell is unconstrained (`x = y = 0`) and
/// `None` when it is contradictory (`y = 0 != x`).
fn forced_ratio(x: &Rational, y: &Rational) -> Option<Option<Rational>> {
    if y.is_zero() {
        x.is_zero().then_some(None)
    } else {
        Some(Some(x / y))
    }
}

/// Decides `X ≺_HC Y`.
///
/// Every position on circulant diagonal `j` with `y != 0` pins `r_j` to
/// `x / y`; a zero `y` demands a zero `x`. Diagonals with no pinned value are
/// free in `[0, 1]`. The pinned values must agree per diagonal, lie in
/// `[0, 1]` and leave a deficit the free diagonals can cover; the witness
/// spreads that deficit greedily over free diagonals in increasing label
/// order.
pub fn decide_hc(x: &Mat, y: &Mat) -> Result<Option<HcWitness>> {
    let n = check_pair(x, y)?;
    if n == 0 {
        return Ok(None);
    }
    let mut weights: Vec<Option<Rational>> = Vec::with_capacity(n);
    for j in 1..=n {
        let mut pinned: Option<Rational> = None;
        for (h, k) in diagonal_positions(n, j) {
            match forced_ratio(&x[(h, k)], &y[(h, k)]) {
                None => return Ok(None),
                Some(None) => {}
                Some(Some(r)) => match &pinned {
                    Some(p) if *p != r => return Ok(None),
                    Some(_) => {}
                    None => pinned = Some(r),
                },
            }
        }
        if let Some(r) = &pinned {
            if !in_unit_interval(r) {
                return Ok(None);
            }
        }
        weights.push(pinned);
    }

    let pinned_sum: Rational = weights.iter().flatten().sum();
    let free = weights.iter().filter(|w| w.is_none()).count();
    let mut deficit = Rational::one() - pinned_sum;
    if deficit < Rational::zero() || deficit > Rational::from_integer(BigInt::from(free)) {
        return Ok(None);
    }
    let coeffs = weights
        .into_iter()
        .map(|w| {
            w.unwrap_or_else(|| {
                let take = deficit.clone().min(Rational::one());
                deficit -= &take;
                take
            })
        })
        .collect();
    let combo = CirculantCombination::new(coeffs).expect("weights form a probability vector");
    Ok(Some(HcWitness { combo }))
}

/// Decides `X ≺_H Y`.
///
/// Cells with `y != 0` pin `d = x / y`; the remaining cells must be filled
/// with values in `[0, 1]` so that rows and columns reach one. That completion
/// is a bipartite transportation problem (row residuals to column residuals
/// over the free cells, unit cell capacity), decided by exact max flow after
/// scaling all capacities by a common denominator.
pub fn decide_h(x: &Mat, y: &Mat) -> Result<Option<HWitness>> {
    let n = check_pair(x, y)?;
    if n == 0 {
        return Ok(None);
    }
    let mut d = Mat::zeros(n, n);
    let mut free = Vec::new();
    for h in 0..n {
        for k in 0..n {
            match forced_ratio(&x[(h, k)], &y[(h, k)]) {
                None => return Ok(None),
                Some(None) => free.push((h, k)),
                Some(Some(r)) => {
                    if !in_unit_interval(&r) {
                        return Ok(None);
                    }
                    d[(h, k)] = r;
                }
            }
        }
    }

    let one = Rational::one();
    let row_need: Vec<Rational> = (0..n).map(|h| &one - d.row(h).iter().sum::<Rational>()).collect();
    let col_need: Vec<Rational> = (0..n)
        .map(|k| &one - (0..n).map(|h| &d[(h, k)]).sum::<Rational>())
        .collect();
    if row_need.iter().chain(&col_need).any(|r| *r < Rational::zero()) {
        return Ok(None);
    }

    let scale = row_need
        .iter()
        .chain(&col_need)
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scaled = |r: &Rational| r.numer() * (&scale / r.denom());

    // Nodes: source, n rows, n columns, sink.
    let (source, sink) = (0, 2 * n + 1);
    let mut net = MaxFlow::new(2 * n + 2);
    for (h, r) in row_need.iter().enumerate() {
        net.add_edge(source, 1 + h, scaled(r));
    }
    for (k, c) in col_need.iter().enumerate() {
        net.add_edge(1 + n + k, sink, scaled(c));
    }
    let cells: Vec<_> = free
        .iter()
        .map(|&(h, k)| ((h, k), net.add_edge(1 + h, 1 + n + k, scale.clone())))
        .collect();

    let demand: BigInt = row_need.iter().map(scaled).sum();
    if net.run(source, sink) != demand {
        return Ok(None);
    }
    for ((h, k), edge) in cells {
        d[(h, k)] = Rational::new(net.flow_on(edge), scale.clone());
    }
    debug_assert!(is_doubly_stochastic(&d));
    Ok(Some(HWitness { d }))
}

/// Exact check that `w` proves `X ≺_HC Y`.
pub fn verify_hc_witness(x: &Mat, y: &Mat, w: &HcWitness) -> bool {
    if check_pair(x, y).is_err() || w.combo.n() != x.rows() {
        return false;
    }
    let c = w.combo.to_matrix();
    is_doubly_stochastic(&c) && c.hadamard(y).is_ok_and(|p| &p == x)
}

/// Exact check that `w` proves `X ≺_H Y`.
pub fn verify_h_witness(x: &Mat, y: &Mat, w: &HWitness) -> bool {
    if check_pair(x, y).is_err() || w.d.shape() != x.shape() {
        return false;
    }
    is_doubly_stochastic(&w.d) && w.d.hadamard(y).is_ok_and(|p| &p == x)
}

//! Test-side oracles written without reference to the library algorithms.
#![allow(dead_code)]

use circmaj_core::{Mat, Rational};
use num_traits::{One, Signed, Zero};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Diagonal label of a 0-based position: the `j` in `1..=n` with
/// `k = (h + j) mod n`.
pub fn label(n: usize, h: usize, k: usize) -> usize {
    match (k + n - h) % n {
        0 => n,
        j => j,
    }
}

/// Linear system `A z = b`, `z >= 0` in dense form.
#[derive(Clone, Debug)]
pub struct System {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
}

impl System {
    fn vars(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }
}

/// `x = (Σ r_j C_j) ⊙ y`, `Σ r_j = 1` over unknowns `r_1..r_n`.
pub fn hc_system(x: &Mat, y: &Mat) -> System {
    let n = x.rows();
    let mut sys = System { a: Vec::new(), b: Vec::new() };
    for h in 0..n {
        for k in 0..n {
            let mut row = vec![q(0); n];
            row[label(n, h, k) - 1] = y[(h, k)].clone();
            sys.a.push(row);
            sys.b.push(x[(h, k)].clone());
        }
    }
    sys.a.push(vec![q(1); n]);
    sys.b.push(q(1));
    sys
}

/// `x = d ⊙ y` with `d` doubly stochastic, over unknowns `d_hk` (row-major).
pub fn h_system(x: &Mat, y: &Mat) -> System {
    let n = x.rows();
    let v = n * n;
    let mut sys = System { a: Vec::new(), b: Vec::new() };
    for h in 0..n {
        for k in 0..n {
            let mut row = vec![q(0); v];
            row[h * n + k] = y[(h, k)].clone();
            sys.a.push(row);
            sys.b.push(x[(h, k)].clone());
        }
    }
    for i in 0..n {
        let mut row_sum = vec![q(0); v];
        let mut col_sum = vec![q(0); v];
        for j in 0..n {
            row_sum[i * n + j] = q(1);
            col_sum[j * n + i] = q(1);
        }
        sys.a.push(row_sum);
        sys.b.push(q(1));
        sys.a.push(col_sum);
        sys.b.push(q(1));
    }
    sys
}

/// Solves `A z = b` by Gauss-Jordan elimination when the columns of `A` are
/// independent and the system is consistent.
fn unique_solution(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let p = (r..m.len()).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, p);
        let piv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v /= piv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| m[c][cols].clone()).collect())
}

/// Feasibility by enumerating column subsets: a feasible system has a basic
/// feasible solution supported on independent columns.
pub fn brute_force_feasible(sys: &System) -> bool {
    let v = sys.vars();
    assert!(v <= 16, "too many unknowns to enumerate");
    (0u32..1 << v).any(|mask| {
        let cols: Vec<usize> = (0..v).filter(|c| mask >> c & 1 == 1).collect();
        let sub: Vec<Vec<Rational>> = sys
            .a
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        if cols.is_empty() {
            return sys.b.iter().all(Zero::is_zero);
        }
        unique_solution(&sub, &sys.b).is_some_and(|z| z.iter().all(|t| !t.is_negative()))
    })
}

/// Phase-one simplex with Bland's rule over exact rationals.
pub fn simplex_feasible(sys: &System) -> bool {
    let m = sys.a.len();
    let v = sys.vars();
    let width = v + m + 1;
    // Tableau rows: original columns, one artificial per row, right-hand side.
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let sign = if sys.b[i].is_negative() { q(-1) } else { q(1) };
            let mut row = vec![q(0); width];
            for (x, a) in row.iter_mut().zip(&sys.a[i]) {
                *x = a * &sign;
            }
            row[v + i] = q(1);
            row[width - 1] = &sys.b[i] * &sign;
            row
        })
        .collect();
    let mut basis: Vec<usize> = (v..v + m).collect();
    // Reduced costs of minimizing the sum of artificials.
    let mut cost = vec![q(0); width];
    for row in &t {
        for j in 0..width {
            if j < v || j == width - 1 {
                cost[j] -= &row[j];
            }
        }
    }
    while let Some(enter) = (0..width - 1).find(|&j| cost[j].is_negative()) {
        let leave = (0..m)
            .filter(|&i| t[i][enter].is_positive())
            .min_by(|&a, &b| {
                let ra = &t[a][width - 1] / &t[a][enter];
                let rb = &t[b][width - 1] / &t[b][enter];
                ra.cmp(&rb).then(basis[a].cmp(&basis[b]))
            })
            .expect("phase one is bounded below by zero");
        let piv = t[leave][enter].clone();
        for x in t[leave].iter_mut() {
            *x /= piv.clone();
        }
        let pivot_row = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != leave && !row[enter].is_zero() {
                let f = row[enter].clone();
                for j in 0..width {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
        let f = cost[enter].clone();
        for j in 0..width {
            cost[j] -= &f * &pivot_row[j];
        }
        basis[leave] = enter;
    }
    cost[width - 1].is_zero()
}

pub fn is_doubly_stochastic(d: &Mat) -> bool {
    let n = d.rows();
    let one = q(1);
    d.data().iter().all(|x| !x.is_negative())
        && (0..n).all(|i| (0..n).map(|j| d[(i, j)].clone()).sum::<Rational>() == one)
        && (0..n).all(|j| (0..n).map(|i| d[(i, j)].clone()).sum::<Rational>() == one)
}

/// Matrix unit as a plain 0/1 pattern.
pub fn unit(n: usize, h: usize, k: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| if (i, j) == (h, k) { q(1) } else { q(0) })
}

/// Ones exactly on the positions with the given label.
pub fn diagonal_pattern(n: usize, j: usize) -> Mat {
    Mat::from_fn(n, n, |h, k| if label(n, h, k) == j { Rational::one() } else { q(0) })
}

/// `(p ∘ q)(j) = p(q(j))` for 1-based label maps.
pub fn compose_maps(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&j| p[j - 1]).collect()
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&l| l >= 1 && l <= p.len() && !std::mem::replace(&mut seen[l - 1], true))
}

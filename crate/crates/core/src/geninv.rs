//! Index, Moore-Penrose, Drazin, group and ordinary inverses of operators on
//! `M_n`, computed exactly and checked against their defining identities
//! before they are returned.

use crate::error::{Error, Result};
use crate::exact::{full_rank_factorization, inverse as mat_inverse, Mat};
use crate::operator::{OperatorRep, Subspace, SubspaceBasis};

/// An operator together with its index: the least `m` with
/// `rank T^m = rank T^{m+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedOperator {
    pub op: OperatorRep,
    pub index: usize,
}

pub fn index_of(t: &OperatorRep) -> IndexedOperator {
    let mut power = OperatorRep::identity(t.n());
    let mut rank = power.rank();
    let mut m = 0;
    loop {
        let next = power.compose(t).expect("same dimension");
        let next_rank = next.rank();
        if next_rank == rank {
            return IndexedOperator { op: t.clone(), index: m };
        }
        power = next;
        rank = next_rank;
        m += 1;
    }
}

fn mat_moore_penrose(a: &Mat) -> Mat {
    let (f, g) = full_rank_factorization(a);
    if f.cols() == 0 {
        return Mat::zeros(a.cols(), a.rows());
    }
    let ft = f.transpose();
    let gt = g.transpose();
    let ggt_inv = mat_inverse(&g.mul(&gt).expect("conformable")).expect("G has full row rank");
    let ftf_inv = mat_inverse(&ft.mul(&f).expect("conformable")).expect("F has full column rank");
    gt.mul(&ggt_inv)
        .and_then(|m| m.mul(&ftf_inv))
        .and_then(|m| m.mul(&ft))
        .expect("conformable")
}

fn same(a: &OperatorRep, b: &OperatorRep) -> bool {
    a == b
}

fn compose(a: &OperatorRep, b: &OperatorRep) -> OperatorRep {
    a.compose(b).expect("same dimension")
}

/// The four Penrose equations `TXT = T`, `XTX = X`, `(TX)* = TX`,
/// `(XT)* = XT`, each checked exactly.
pub fn penrose_equations(t: &OperatorRep, x: &OperatorRep) -> [bool; 4] {
    let tx = compose(t, x);
    let xt = compose(x, t);
    [
        same(&compose(&tx, t), t),
        same(&compose(&xt, x), x),
        same(&tx.adjoint(), &tx),
        same(&xt.adjoint(), &xt),
    ]
}

/// `X T (v) = v` on `N(T)^⊥` and `X (w) = 0` on `R(T)^⊥`, checked on basis
/// vectors.
pub fn moore_penrose_contract(t: &OperatorRep, x: &OperatorRep) -> bool {
    let xt = compose(x, t);
    let fixes = t
        .subspace(Subspace::KernelPerp)
        .vectors()
        .iter()
        .all(|v| xt.apply(v).ok().as_ref() == Some(v));
    let kills = t
        .subspace(Subspace::RangePerp)
        .vectors()
        .iter()
        .all(|w| x.apply(w).is_ok_and(|y| y.is_zero()));
    fixes && kills
}

/// Moore-Penrose inverse via the full-rank factorization `T = F G`:
/// `T† = Gᵀ (G Gᵀ)⁻¹ (Fᵀ F)⁻¹ Fᵀ`.
pub fn moore_penrose(t: &OperatorRep) -> OperatorRep {
    let x = OperatorRep::new(t.n(), mat_moore_penrose(t.rep())).expect("square representation");
    assert!(
        penrose_equations(t, &x).iter().all(|&ok| ok),
        "Moore-Penrose output fails the Penrose equations"
    );
    x
}

/// The three Drazin identities at index `m`: `T^m U T = T^m`, `U T U = U`,
/// `U T = T U`.
pub fn drazin_axioms(t: &OperatorRep, u: &OperatorRep, m: usize) -> [bool; 3] {
    let tm = t.pow(m);
    let ut = compose(u, t);
    [
        same(&compose(&compose(&tm, u), t), &tm),
        same(&compose(&ut, u), u),
        same(&ut, &compose(t, u)),
    ]
}

/// `U = 0` on `N(T^m)` and `U T = T U = id` on `R(T^m)`, on basis vectors.
pub fn drazin_contract(t: &OperatorRep, u: &OperatorRep, m: usize) -> bool {
    let tm = t.pow(m);
    let ut = compose(u, t);
    let tu = compose(t, u);
    let kills = tm
        .kernel_basis()
        .vectors()
        .iter()
        .all(|x| u.apply(x).is_ok_and(|y| y.is_zero()));
    let inverts = tm.range_basis().vectors().iter().all(|y| {
        ut.apply(y).ok().as_ref() == Some(y) && tu.apply(y).ok().as_ref() == Some(y)
    });
    kills && inverts
}

/// Drazin inverse `T^D = T^m (T^{2m+1})† T^m` with `m = Ind T`.
pub fn drazin(t: &OperatorRep) -> OperatorRep {
    let m = index_of(t).index;
    let tm = t.pow(m);
    let core = moore_penrose(&t.pow(2 * m + 1));
    let u = compose(&compose(&tm, &core), &tm);
    assert!(
        drazin_axioms(t, &u, m).iter().all(|&ok| ok),
        "Drazin output fails the Drazin identities at index {m}"
    );
    assert!(drazin_contract(t, &u, m), "Drazin output fails the kernel/range contract");
    u
}

/// Group inverse: the Drazin inverse when `Ind T <= 1`.
pub fn group_inverse(t: &OperatorRep) -> Result<OperatorRep> {
    let m = index_of(t).index;
    if m > 1 {
        return Err(Error::IndexTooLarge(m));
    }
    Ok(drazin(t))
}

/// Ordinary inverse of a bijective operator.
pub fn inverse(t: &OperatorRep) -> Result<OperatorRep> {
    let inv = mat_inverse(t.rep())?;
    let inv = OperatorRep::new(t.n(), inv)?;
    debug_assert!(compose(t, &inv) == OperatorRep::identity(t.n()));
    Ok(inv)
}

/// `N(T^m)` and `R(T^m)` intersect trivially and together span `M_n`.
pub fn core_nilpotent_split(t: &OperatorRep, m: usize) -> (SubspaceBasis, SubspaceBasis) {
    let tm = t.pow(m);
    (tm.kernel_basis(), tm.range_basis())
}

//! Deciding whether a linear operator preserves Hadamard circulant
//! majorization.
//!
//! For a source diagonal `j`, collect the circulant diagonals touched by the
//! images `T(E_{h,σ_j(h)})`. The operator is a preserver exactly when every
//! source diagonal lands inside a single target diagonal and distinct source
//! diagonals never share a target. In that case, with `P(j)` the target of
//! `j`, `T(C_j ⊙ B) = C_{P(j)} ⊙ T(B)` holds for every `B`, which is the
//! basis-level form of the preservation criterion. A violation comes with
//! the offending basis positions and, whenever one can be confirmed, a
//! concrete pair `(k, B)` for which `T(C_k ⊙ B) ≺_HC T(B)` fails.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::Rng;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::circulant::{circulant_perm, diagonal_positions, label};
use crate::error::{Error, Result};
use crate::exact::{int, Mat, Rational};
use crate::majorization::decide_hc;
use crate::operator::{OperatorRep, Subspace};
use crate::random::{self, trial_rng};

/// Matrix position, 0-based in memory and 1-based in every printed or
/// serialized form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row + 1, self.col + 1)
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Position", 2)?;
        st.serialize_field("row", &(self.row + 1))?;
        st.serialize_field("col", &(self.col + 1))?;
        st.end()
    }
}

/// For each source diagonal `j`, the target diagonals touched by the images
/// of the matrix units on `j`, each with the first source position (in row
/// order) whose image touches it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalProfile {
    n: usize,
    touched: Vec<BTreeMap<usize, Position>>,
}

impl DiagonalProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Labels touched from source diagonal `j` (1-based), ascending.
    pub fn touched(&self, j: usize) -> Vec<usize> {
        self.touched[j - 1].keys().copied().collect()
    }

    /// First source position on `j` whose image touches `target`.
    pub fn evidence(&self, j: usize, target: usize) -> Option<Position> {
        self.touched[j - 1].get(&target).copied()
    }
}

impl Serialize for DiagonalProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let touched: Vec<Vec<usize>> = (1..=self.n).map(|j| self.touched(j)).collect();
        let mut st = s.serialize_struct("DiagonalProfile", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("touched", &touched)?;
        st.end()
    }
}

pub fn diagonal_profile(t: &OperatorRep) -> DiagonalProfile {
    let n = t.n();
    let touched = (1..=n)
        .map(|j| {
            let mut map = BTreeMap::new();
            for (h, k) in diagonal_positions(n, j) {
                for (r, c) in t.basis_image(h, k).support() {
                    map.entry(label(n, r, c)).or_insert(Position::new(h, k));
                }
            }
            map
        })
        .collect();
    DiagonalProfile { n, touched }
}

/// Accepting certificate: the diagonal map `P` and the profile behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreserverCertificate {
    /// `p[j - 1] = P(j)`.
    pub p: Vec<usize>,
    /// `forced[j - 1]` is true when `P(j)` is read off a nonzero image
    /// rather than chosen for an all-zero source diagonal.
    pub forced: Vec<bool>,
    pub profile: DiagonalProfile,
}

impl PreserverCertificate {
    pub fn p(&self, j: usize) -> usize {
        self.p[j - 1]
    }

    pub fn is_forced(&self, j: usize) -> bool {
        self.forced[j - 1]
    }

    /// A permutation agreeing with `P` on forced diagonals; unforced
    /// diagonals take the unused labels in increasing order.
    pub fn permutation_completion(&self) -> Vec<usize> {
        let n = self.p.len();
        let used: Vec<usize> = (0..n).filter(|&i| self.forced[i]).map(|i| self.p[i]).collect();
        let mut spare = (1..=n).filter(|l| !used.contains(l));
        (0..n)
            .map(|i| {
                if self.forced[i] {
                    self.p[i]
                } else {
                    spare.next().expect("forced targets are distinct")
                }
            })
            .collect()
    }
}

/// One source position touching one target diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Touch {
    pub source_diagonal: usize,
    pub position: Position,
    pub target_diagonal: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Source diagonal `source` reaches two target diagonals.
    DiagonalSplit { source: usize, first: Touch, second: Touch },
    /// Two source diagonals reach the same target diagonal.
    DiagonalCollision { target: usize, first: Touch, second: Touch },
}

/// A pair with `T(C_k ⊙ B) ⊀_HC T(B)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub k: usize,
    pub b: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub violation: Violation,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", rename_all = "kebab-case")]
pub enum PreserverDecision {
    Preserver(PreserverCertificate),
    NotPreserver(Refutation),
}

impl PreserverDecision {
    pub fn is_preserver(&self) -> bool {
        matches!(self, Self::Preserver(_))
    }

    pub fn certificate(&self) -> Option<&PreserverCertificate> {
        match self {
            Self::Preserver(c) => Some(c),
            Self::NotPreserver(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Self::Preserver(_) => None,
            Self::NotPreserver(r) => Some(r),
        }
    }
}

/// Random draws tried after the structural candidates when confirming a
/// violation.
pub const CONFIRMATION_BUDGET: usize = 64;

/// True when `T(C_k ⊙ B) ≺_HC T(B)` fails.
pub fn fails_at(t: &OperatorRep, k: usize, b: &Mat) -> Result<bool> {
    let ck = circulant_perm(t.n(), k)?;
    let x = t.apply(&ck.hadamard(b)?)?;
    let y = t.apply(b)?;
    Ok(decide_hc(&x, &y)?.is_none())
}

fn find_violation(profile: &DiagonalProfile) -> Option<Violation> {
    let n = profile.n;
    let touch = |j: usize, target: usize| Touch {
        source_diagonal: j,
        position: profile.evidence(j, target).expect("touched"),
        target_diagonal: target,
    };
    for j in 1..=n {
        if let [a, b, ..] = profile.touched(j)[..] {
            return Some(Violation::DiagonalSplit {
                source: j,
                first: touch(j, a),
                second: touch(j, b),
            });
        }
    }
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for j in 1..=n {
        for q in profile.touched(j) {
            if let Some(&r) = owner.get(&q) {
                return Some(Violation::DiagonalCollision {
                    target: q,
                    first: touch(r, q),
                    second: touch(j, q),
                });
            }
            owner.insert(q, j);
        }
    }
    None
}

fn touches_several(t: &OperatorRep, p: Position) -> bool {
    let n = t.n();
    let img = t.basis_image(p.row, p.col);
    let mut labels = img.support().map(|(r, c)| label(n, r, c));
    let first = labels.next();
    labels.any(|l| Some(l) != first)
}

/// Candidate inputs read off the violation; each is checked exactly before
/// it is reported.
fn structural_candidates(t: &OperatorRep, v: &Violation) -> Vec<Counterexample> {
    let n = t.n();
    let unit = |p: Position| Mat::unit(n, p.row, p.col);
    match v {
        Violation::DiagonalSplit { source, first, second } => {
            // With B on a single source diagonal, T(C_j ⊙ B) = T(B) and the
            // two touched diagonals are both pinned to weight one.
            let mut out = Vec::new();
            for p in [first.position, second.position] {
                if touches_several(t, p) {
                    out.push(Counterexample { k: *source, b: unit(p) });
                }
            }
            if first.position != second.position {
                let b = unit(first.position).add(&unit(second.position)).expect("same shape");
                out.push(Counterexample { k: *source, b });
            }
            out
        }
        Violation::DiagonalCollision { first, second, .. } => {
            // B = E_s + t E_r: T(C_j ⊙ B) = T(E_s) against T(E_s) + t T(E_r).
            // Non-proportional images fail for any t != 0; proportional ones
            // (T(E_r) = c T(E_s)) fail at t = -1/c where T(B) vanishes.
            let u = t.basis_image(first.position.row, first.position.col);
            let w = t.basis_image(second.position.row, second.position.col);
            let mut scales = vec![int(1)];
            if let Some((r, c)) = u.support().next() {
                let ratio: Rational = &w[(r, c)] / &u[(r, c)];
                if !ratio.is_zero() {
                    scales.push(-ratio.recip());
                }
            }
            scales
                .into_iter()
                .map(|s| Counterexample {
                    k: first.source_diagonal,
                    b: unit(first.position)
                        .add(&unit(second.position).scale(&s))
                        .expect("same shape"),
                })
                .collect()
        }
    }
}

fn confirm(t: &OperatorRep, v: &Violation) -> Option<Counterexample> {
    structural_candidates(t, v)
        .into_iter()
        .find(|c| fails_at(t, c.k, &c.b).unwrap_or(false))
        .or_else(|| search_counterexample(t, CONFIRMATION_BUDGET, 0))
}

/// Decides whether `T` preserves Hadamard circulant majorization.
pub fn decide_hc_preserver(t: &OperatorRep) -> PreserverDecision {
    let profile = diagonal_profile(t);
    if let Some(violation) = find_violation(&profile) {
        let counterexample = confirm(t, &violation);
        return PreserverDecision::NotPreserver(Refutation {
            violation,
            counterexample,
        });
    }
    let n = profile.n;
    let targets: Vec<Option<usize>> = (1..=n).map(|j| profile.touched(j).first().copied()).collect();
    // Nonempty target sets are disjoint singletons, so when some source is
    // all-zero fewer than n labels are taken and a spare one exists.
    let spare = (1..=n).find(|l| !targets.contains(&Some(*l)));
    let p = targets
        .iter()
        .map(|t| t.or(spare).expect("spare label exists when a source diagonal is empty"))
        .collect();
    let forced = targets.iter().map(Option::is_some).collect();
    PreserverDecision::Preserver(PreserverCertificate { p, forced, profile })
}

/// Samples `trials` matrices `B` with integer entries in `-3..=3` (trial `i`
/// uses stream `i` of `seed`) and returns the first `(k, B)` for which
/// `T(C_k ⊙ B) ≺_HC T(B)` fails. `None` means no failure was sampled; it is
/// evidence of preservation, not proof.
pub fn search_counterexample(t: &OperatorRep, trials: usize, seed: u64) -> Option<Counterexample> {
    let n = t.n();
    (0..trials as u64).find_map(|i| {
        let b = random::int_matrix(&mut trial_rng(seed, i), n, -3, 3);
        (1..=n)
            .find(|&k| fails_at(t, k, &b).unwrap_or(false))
            .map(|k| Counterexample { k, b })
    })
}

/// Basis images whose Hadamard product is nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapWitness {
    pub first: Position,
    pub second: Position,
    pub at: Position,
}

/// Outcome of the disjoint-support test on basis images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HmNecessaryCheck {
    /// The test is only a known necessary condition for preserving Hadamard
    /// majorization when `n >= 3`.
    pub applies: bool,
    pub violation: Option<OverlapWitness>,
}

impl HmNecessaryCheck {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `T(E_ij) ⊙ T(E_kl) = 0` for all distinct basis pairs, scanning
/// pairs in row-major order with the first unit before the second. A pass
/// does not mean `T` preserves Hadamard majorization.
pub fn hm_necessary_check(t: &OperatorRep) -> HmNecessaryCheck {
    let n = t.n();
    let d = n * n;
    let images: Vec<Mat> = (0..d).map(|a| t.basis_image(a / n, a % n)).collect();
    let violation = (0..d).find_map(|a| {
        (a + 1..d).find_map(|b| {
            let prod = images[a].hadamard(&images[b]).expect("same shape");
            let at = prod.support().next();
            at.map(|(r, c)| OverlapWitness {
                first: Position::new(a / n, a % n),
                second: Position::new(b / n, b % n),
                at: Position::new(r, c),
            })
        })
    });
    HmNecessaryCheck {
        applies: n >= 3,
        violation,
    }
}

/// Random operator mapping each source diagonal `j` into target diagonal
/// `p(j)` through an arbitrary integer coefficient block. Uses `p` when
/// given (labels `1..=n`), otherwise a random permutation.
pub fn random_preserver(rng: &mut impl Rng, n: usize, p: Option<&[usize]>) -> Result<OperatorRep> {
    let p = match p {
        Some(p) => {
            check_permutation(n, p)?;
            p.to_vec()
        }
        None => random::permutation(rng, n),
    };
    let d = n * n;
    let mut rep = Mat::zeros(d, d);
    for j in 1..=n {
        let block = random::coefficient_block(rng, n, n);
        let sources: Vec<_> = diagonal_positions(n, j).collect();
        let targets: Vec<_> = diagonal_positions(n, p[j - 1]).collect();
        for (a, &(th, tk)) in targets.iter().enumerate() {
            for (b, &(sh, sk)) in sources.iter().enumerate() {
                rep[(th * n + tk, sh * n + sk)] = block[(a, b)].clone();
            }
        }
    }
    OperatorRep::new(n, rep)
}

fn check_permutation(n: usize, p: &[usize]) -> Result<()> {
    if p.len() != n {
        return Err(Error::InvalidPermutation(format!("expected {n} labels, got {}", p.len())));
    }
    let mut seen = vec![false; n];
    for &l in p {
        if l == 0 || l > n || std::mem::replace(&mut seen[l - 1], true) {
            return Err(Error::InvalidPermutation(format!("{p:?} is not a permutation of 1..={n}")));
        }
    }
    Ok(())
}

/// A sampled member of a subspace whose circulant Hadamard product left it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceFailure {
    pub subspace: Subspace,
    pub x: Mat,
    pub combination: crate::circulant::CirculantCombination,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceOutcome {
    pub checks: usize,
    pub failures: Vec<InvarianceFailure>,
}

/// Samples members `X` of `N(T)`, `R(T)`, `N(T)^⊥`, `R(T)^⊥` (integer
/// combinations of the exact bases) and random circulant doubly stochastic
/// `C`, and checks that `C ⊙ X` stays in the subspace. `T` must be a
/// preserver.
pub fn verify_invariance_lemma(t: &OperatorRep, trials: usize, seed: u64) -> Result<InvarianceOutcome> {
    if !decide_hc_preserver(t).is_preserver() {
        return Err(Error::NotAPreserver);
    }
    let n = t.n();
    let mut checks = 0;
    let mut failures = Vec::new();
    for (s, which) in Subspace::ALL.into_iter().enumerate() {
        let basis = t.subspace(which);
        let vectors = basis.vectors();
        for i in 0..trials {
            let mut rng = trial_rng(seed, (s * trials + i) as u64);
            let mut x = Mat::zeros(n, n);
            for v in &vectors {
                x = x.add(&v.scale(&int(rng.random_range(-3..=3)))).expect("same shape");
            }
            let combination = random::combination(&mut rng, n);
            let image = combination.to_matrix().hadamard(&x).expect("same shape");
            checks += 1;
            if !basis.contains(&image) {
                failures.push(InvarianceFailure {
                    subspace: which,
                    x,
                    combination,
                });
            }
        }
    }
    Ok(InvarianceOutcome { checks, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize, j: usize) -> Mat {
        circulant_perm(n, j).unwrap()
    }

    #[test]
    fn identity_profile_and_certificate() {
        let t = OperatorRep::identity(3);
        let prof = diagonal_profile(&t);
        for j in 1..=3 {
            assert_eq!(prof.touched(j), vec![j]);
        }
        let cert = decide_hc_preserver(&t).certificate().cloned().unwrap();
        assert_eq!(cert.p, vec![1, 2, 3]);
        assert!(cert.forced.iter().all(|&f| f));
    }

    #[test]
    fn zero_operator_is_a_preserver_with_free_map() {
        let cert = decide_hc_preserver(&OperatorRep::zero(3)).certificate().cloned().unwrap();
        assert_eq!(cert.p, vec![1, 1, 1]);
        assert_eq!(cert.permutation_completion(), vec![1, 2, 3]);
        assert!(hm_necessary_check(&OperatorRep::zero(3)).passed());
    }

    #[test]
    fn transpose_is_a_preserver() {
        // X -> X^T maps diagonal j onto diagonal n - j, main diagonal fixed.
        let t = OperatorRep::from_fn(3, |x| x.transpose());
        let decision = decide_hc_preserver(&t);
        assert!(decision.is_preserver());
        assert_eq!(decision.certificate().unwrap().p, vec![2, 1, 3]);
    }

    #[test]
    fn split_is_confirmed() {
        // E_11 -> E_11 + E_12 touches diagonals 3 and 1.
        let t = OperatorRep::from_fn(3, |x| {
            let v = &x[(0, 0)];
            Mat::unit(3, 0, 0).add(&Mat::unit(3, 0, 1)).unwrap().scale(v)
        });
        let r = decide_hc_preserver(&t).refutation().cloned().unwrap();
        assert!(matches!(r.violation, Violation::DiagonalSplit { source: 3, .. }));
        let ce = r.counterexample.unwrap();
        assert!(fails_at(&t, ce.k, &ce.b).unwrap());
    }

    #[test]
    fn proportional_collision_is_confirmed() {
        // E_11 and E_12 both map to E_11: sources 3 and 1 collide on 3.
        let t = OperatorRep::from_fn(3, |x| Mat::unit(3, 0, 0).scale(&(&x[(0, 0)] + &x[(0, 1)])));
        let r = decide_hc_preserver(&t).refutation().cloned().unwrap();
        assert!(matches!(r.violation, Violation::DiagonalCollision { target: 3, .. }));
        let ce = r.counterexample.unwrap();
        assert!(fails_at(&t, ce.k, &ce.b).unwrap());
    }

    #[test]
    fn circulant_multiplier_is_a_preserver() {
        // X -> C_1 ⊙ X keeps diagonal 1 and kills the rest.
        let t = OperatorRep::from_fn(4, |x| c(4, 1).hadamard(x).unwrap());
        let cert = decide_hc_preserver(&t).certificate().cloned().unwrap();
        assert_eq!(cert.p[0], 1);
        assert!(cert.forced[0] && !cert.forced[1]);
    }

    #[test]
    fn random_preservers_are_accepted() {
        for i in 0..20 {
            let mut rng = trial_rng(11, i);
            let t = random_preserver(&mut rng, 3, None).unwrap();
            assert!(decide_hc_preserver(&t).is_preserver());
            assert!(search_counterexample(&t, 5, i).is_none());
        }
    }

    #[test]
    fn random_preserver_rejects_bad_permutations() {
        let mut rng = trial_rng(0, 0);
        assert!(random_preserver(&mut rng, 3, Some(&[1, 1, 2])).is_err());
        assert!(random_preserver(&mut rng, 3, Some(&[1, 2])).is_err());
        assert!(random_preserver(&mut rng, 3, Some(&[0, 1, 2])).is_err());
        let t = random_preserver(&mut rng, 3, Some(&[2, 3, 1])).unwrap();
        let cert = decide_hc_preserver(&t).certificate().cloned().unwrap();
        for j in 1..=3 {
            if cert.is_forced(j) {
                assert_eq!(cert.p(j), [2, 3, 1][j - 1]);
            }
        }
    }

    #[test]
    fn hm_check_flags_overlap() {
        let t = OperatorRep::from_fn(3, |x| Mat::unit(3, 1, 1).scale(&(&x[(0, 0)] + &x[(2, 2)])));
        let w = hm_necessary_check(&t).violation.unwrap();
        assert_eq!(w.first, Position::new(0, 0));
        assert_eq!(w.second, Position::new(2, 2));
        assert_eq!(w.at, Position::new(1, 1));
        assert!(!hm_necessary_check(&OperatorRep::identity(2)).applies);
    }

    #[test]
    fn position_prints_one_based() {
        let p = Position::new(0, 2);
        assert_eq!(p.to_string(), "(1,3)");
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"row":1,"col":3}"#);
    }

    #[test]
    fn invariance_requires_preserver() {
        let t = OperatorRep::from_fn(2, |x| Mat::unit(2, 0, 0).scale(&(&x[(0, 0)] + &x[(0, 1)])));
        assert_eq!(verify_invariance_lemma(&t, 2, 0), Err(Error::NotAPreserver));
        let out = verify_invariance_lemma(&OperatorRep::identity(2), 3, 0).unwrap();
        assert_eq!(out.checks, 12);
        assert!(out.failures.is_empty());
    }
}

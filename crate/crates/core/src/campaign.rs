//! Seeded randomized campaigns checking that preservers of Hadamard
//! circulant majorization pass the property on to derived operators.
//!
//! Trial `i` of a campaign draws everything from `trial_rng(seed, i)`, so a
//! report depends only on `(theorem, n, trials, seed)`. Trials run in
//! parallel and are collected in trial order.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, Mat};
use crate::geninv::{drazin, group_inverse, index_of, inverse, moore_penrose};
use crate::majorization::{decide_h, decide_hc, verify_h_witness, verify_hc_witness};
use crate::operator::OperatorRep;
use crate::preserver::{
    decide_hc_preserver, random_preserver, search_counterexample, verify_invariance_lemma,
    PreserverCertificate, PreserverDecision,
};
use crate::random::{self, trial_rng, TrialRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// `T*` preserves whenever `T` does.
    Adjoint,
    /// `T†` preserves whenever `T` does.
    Mp,
    /// `T^D` preserves whenever `T` does.
    Drazin,
    /// `T#` preserves whenever `T` does and has index at most one.
    Group,
    /// `T^{-1}` preserves whenever `T` is a bijective preserver.
    Inverse,
    /// The four fundamental subspaces of a preserver are closed under
    /// circulant Hadamard multipliers.
    Invariance,
    /// Composites of preservers are preservers.
    Compose,
    /// `X ≺_HC Y` implies `X ≺_H Y`.
    Implication,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::Adjoint,
        Theorem::Mp,
        Theorem::Drazin,
        Theorem::Group,
        Theorem::Inverse,
        Theorem::Invariance,
        Theorem::Compose,
        Theorem::Implication,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Adjoint => "adjoint",
            Theorem::Mp => "mp",
            Theorem::Drazin => "drazin",
            Theorem::Group => "group",
            Theorem::Inverse => "inverse",
            Theorem::Invariance => "invariance",
            Theorem::Compose => "compose",
            Theorem::Implication => "implication",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown theorem {s:?}")))
    }
}

/// One failed trial, with the inputs needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignFailure {
    pub trial: usize,
    pub reason: String,
    pub input: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub theorem: Theorem,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Trials whose hypotheses held (for instance index at most one for the
    /// group inverse).
    pub applicable: usize,
    pub failures: Vec<CampaignFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

enum Outcome {
    Skipped,
    Held,
    Failed(String, serde_json::Value),
}

fn operator_json(t: &OperatorRep) -> serde_json::Value {
    serde_json::to_value(crate::format::OperatorFile::from_operator(t)).expect("serializable")
}

/// Checks that `S` (derived from the preserver `T` with certificate `cert`)
/// is accepted and, where `S` is forced on diagonal `j`, maps it to a
/// diagonal `i` on which `T` is forced with `P_T(i) = j`.
fn check_reversed(t: &OperatorRep, cert: &PreserverCertificate, s: &OperatorRep, what: &str) -> Outcome {
    match decide_hc_preserver(s) {
        PreserverDecision::NotPreserver(r) => Outcome::Failed(
            format!("{what} rejected: {}", serde_json::to_string(&r.violation).expect("serializable")),
            serde_json::json!({ "t": operator_json(t), "derived": operator_json(s) }),
        ),
        PreserverDecision::Preserver(sc) => {
            let n = t.n();
            let bad = (1..=n).find(|&j| {
                sc.is_forced(j) && {
                    let i = sc.p(j);
                    !(cert.is_forced(i) && cert.p(i) == j)
                }
            });
            match bad {
                None => Outcome::Held,
                Some(j) => Outcome::Failed(
                    format!("{what} maps diagonal {j} to {} but P_T = {:?}", sc.p(j), cert.p),
                    serde_json::json!({ "t": operator_json(t), "derived": operator_json(s) }),
                ),
            }
        }
    }
}

fn preserver_trial(rng: &mut TrialRng, n: usize) -> (OperatorRep, PreserverCertificate) {
    let t = random_preserver(rng, n, None).expect("random permutation is valid");
    let cert = decide_hc_preserver(&t)
        .certificate()
        .cloned()
        .expect("random preservers are accepted by construction");
    (t, cert)
}

fn run_trial(theorem: Theorem, n: usize, seed: u64, i: usize) -> Outcome {
    let mut rng = trial_rng(seed, i as u64);
    match theorem {
        Theorem::Adjoint => {
            let (t, cert) = preserver_trial(&mut rng, n);
            check_reversed(&t, &cert, &t.adjoint(), "adjoint")
        }
        Theorem::Mp => {
            let (t, cert) = preserver_trial(&mut rng, n);
            check_reversed(&t, &cert, &moore_penrose(&t), "Moore-Penrose inverse")
        }
        Theorem::Drazin => {
            let (t, cert) = preserver_trial(&mut rng, n);
            check_reversed(&t, &cert, &drazin(&t), "Drazin inverse")
        }
        Theorem::Group => {
            let (t, cert) = preserver_trial(&mut rng, n);
            if index_of(&t).index > 1 {
                return Outcome::Skipped;
            }
            match group_inverse(&t) {
                Ok(g) => check_reversed(&t, &cert, &g, "group inverse"),
                Err(e) => Outcome::Failed(e.to_string(), operator_json(&t)),
            }
        }
        Theorem::Inverse => {
            let (t, cert) = preserver_trial(&mut rng, n);
            match inverse(&t) {
                Ok(inv) => check_reversed(&t, &cert, &inv, "inverse"),
                Err(_) => Outcome::Skipped,
            }
        }
        Theorem::Invariance => {
            let (t, _) = preserver_trial(&mut rng, n);
            match verify_invariance_lemma(&t, 10, rng.random()) {
                Ok(out) if out.failures.is_empty() => Outcome::Held,
                Ok(out) => Outcome::Failed(
                    format!("{} of {} memberships failed", out.failures.len(), out.checks),
                    serde_json::json!({
                        "t": operator_json(&t),
                        "first": serde_json::to_value(&out.failures[0]).expect("serializable"),
                    }),
                ),
                Err(e) => Outcome::Failed(e.to_string(), operator_json(&t)),
            }
        }
        Theorem::Compose => {
            let (s, sc) = preserver_trial(&mut rng, n);
            let (t, tc) = preserver_trial(&mut rng, n);
            let st = s.compose(&t).expect("same dimension");
            let input = || serde_json::json!({ "s": operator_json(&s), "t": operator_json(&t) });
            match decide_hc_preserver(&st) {
                PreserverDecision::NotPreserver(_) => Outcome::Failed("S∘T rejected".into(), input()),
                PreserverDecision::Preserver(c) => {
                    let bad = (1..=n).find(|&j| c.is_forced(j) && c.p(j) != sc.p(tc.p(j)));
                    match bad {
                        None => Outcome::Held,
                        Some(j) => Outcome::Failed(
                            format!("S∘T maps diagonal {j} to {}, expected {}", c.p(j), sc.p(tc.p(j))),
                            input(),
                        ),
                    }
                }
            }
        }
        Theorem::Implication => {
            let y = random::int_matrix(&mut rng, n, -3, 3);
            let x = if rng.random_bool(0.5) {
                random::combination(&mut rng, n).to_matrix().hadamard(&y).expect("same shape")
            } else {
                random::int_matrix(&mut rng, n, -3, 3)
            };
            let input = || serde_json::json!({ "x": x, "y": y });
            match decide_hc(&x, &y).expect("square pair") {
                None => Outcome::Skipped,
                Some(w) if !verify_hc_witness(&x, &y, &w) => {
                    Outcome::Failed("circulant witness does not verify".into(), input())
                }
                Some(_) => match decide_h(&x, &y).expect("square pair") {
                    Some(d) if verify_h_witness(&x, &y, &d) => Outcome::Held,
                    Some(_) => Outcome::Failed("doubly stochastic witness does not verify".into(), input()),
                    None => Outcome::Failed("≺_HC holds but ≺_H was refuted".into(), input()),
                },
            }
        }
    }
}

/// Runs `trials` seeded trials of `theorem` at dimension `n`. `elapsed_ms`
/// is left empty; callers that want timing fill it in.
pub fn run_campaign(theorem: Theorem, n: usize, trials: usize, seed: u64) -> CampaignReport {
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(theorem, n, seed, i))
        .collect();
    let mut applicable = 0;
    let mut failures = Vec::new();
    for (trial, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Skipped => {}
            Outcome::Held => applicable += 1,
            Outcome::Failed(reason, input) => {
                applicable += 1;
                failures.push(CampaignFailure { trial, reason, input });
            }
        }
    }
    CampaignReport {
        theorem,
        n,
        trials,
        seed,
        applicable,
        failures,
        elapsed_ms: None,
    }
}

/// Like [`run_campaign`], recording wall-clock time.
pub fn run_campaign_timed(theorem: Theorem, n: usize, trials: usize, seed: u64) -> CampaignReport {
    let start = Instant::now();
    let mut report = run_campaign(theorem, n, trials, seed);
    report.elapsed_ms = Some(start.elapsed().as_millis());
    report
}

/// How an operator in the cross-validation corpus was generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Dense,
    Sparse,
    Preserver,
    Corrupted,
}

/// Operator `i` of the mixed corpus: kinds cycle dense, sparse, preserver,
/// corrupted preserver (one representation entry overwritten).
pub fn mixed_operator(n: usize, seed: u64, i: usize) -> (Provenance, OperatorRep) {
    let mut rng = trial_rng(seed, i as u64);
    let d = n * n;
    match i % 4 {
        0 => (Provenance::Dense, random::dense_operator(&mut rng, n, -3, 3)),
        1 => {
            let rep = Mat::from_fn(d, d, |_, _| {
                if rng.random_range(0..2 * d) == 0 {
                    int(rng.random_range(-3..=3))
                } else {
                    int(0)
                }
            });
            (Provenance::Sparse, OperatorRep::new(n, rep).expect("n^2 x n^2"))
        }
        2 => (Provenance::Preserver, random_preserver(&mut rng, n, None).expect("valid")),
        _ => {
            let t = random_preserver(&mut rng, n, None).expect("valid");
            let mut rep = t.rep().clone();
            let (r, c) = (rng.random_range(0..d), rng.random_range(0..d));
            let mut v = int(rng.random_range(-3..=3));
            if v == rep[(r, c)] {
                v += int(1);
            }
            rep[(r, c)] = v;
            (Provenance::Corrupted, OperatorRep::new(n, rep).expect("n^2 x n^2"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub index: usize,
    pub provenance: Provenance,
    pub reason: String,
    pub operator: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub accepted: usize,
    pub rejected: usize,
    /// Accepted operators for which sampling found a counterexample.
    pub refuted_acceptances: Vec<Disagreement>,
    /// Rejected operators without a confirmed `(k, B)`.
    pub unconfirmed_rejections: Vec<Disagreement>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.refuted_acceptances.is_empty() && self.unconfirmed_rejections.is_empty()
    }
}

/// Compares [`decide_hc_preserver`] with sampling ([`search_counterexample`]
/// with `oracle_trials` draws) on `count` operators of the mixed corpus.
/// Every rejection must carry a counterexample that the sampling oracle's
/// check confirms.
pub fn cross_validate(n: usize, count: usize, seed: u64, oracle_trials: usize) -> CrossValidation {
    enum Verdict {
        Accepted(Option<String>),
        Rejected(Option<String>),
    }
    let verdicts: Vec<(Provenance, OperatorRep, Verdict)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let (prov, t) = mixed_operator(n, seed, i);
            let verdict = match decide_hc_preserver(&t) {
                PreserverDecision::Preserver(_) => Verdict::Accepted(
                    search_counterexample(&t, oracle_trials, seed ^ i as u64)
                        .map(|c| format!("sampling refutes it at k = {}, B = {}", c.k, c.b)),
                ),
                PreserverDecision::NotPreserver(r) => Verdict::Rejected(match r.counterexample {
                    None => Some("no counterexample found".into()),
                    Some(c) => match crate::preserver::fails_at(&t, c.k, &c.b) {
                        Ok(true) => None,
                        _ => Some(format!("reported counterexample k = {}, B = {} does not fail", c.k, c.b)),
                    },
                }),
            };
            (prov, t, verdict)
        })
        .collect();
    let mut report = CrossValidation {
        n,
        count,
        seed,
        accepted: 0,
        rejected: 0,
        refuted_acceptances: Vec::new(),
        unconfirmed_rejections: Vec::new(),
    };
    for (index, (provenance, t, verdict)) in verdicts.into_iter().enumerate() {
        let disagreement = |reason| Disagreement {
            index,
            provenance,
            reason,
            operator: operator_json(&t),
        };
        match verdict {
            Verdict::Accepted(bad) => {
                report.accepted += 1;
                report.refuted_acceptances.extend(bad.map(disagreement));
            }
            Verdict::Rejected(bad) => {
                report.rejected += 1;
                report.unconfirmed_rejections.extend(bad.map(disagreement));
            }
        }
    }
    report
}

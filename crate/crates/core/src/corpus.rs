//! Golden corpus of hand-transcribed worked examples.
//!
//! Each fixture under `fixtures/` carries an operator (and, where relevant,
//! a closed-form inverse, probe matrices and expected diagonal maps) typed in
//! from its displayed formula. Running the corpus recomputes everything and
//! compares exactly.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::circulant::{circulant_perm, is_doubly_stochastic, CirculantCombination};
use crate::error::{Error, Result};
use crate::exact::Mat;
use crate::format::{MatrixFile, OperatorFile, Rows};
use crate::geninv::{group_inverse, index_of, moore_penrose};
use crate::majorization::decide_hc;
use crate::operator::OperatorRep;
use crate::preserver::{decide_hc_preserver, hm_necessary_check, OverlapWitness, Position, Violation};

const FILES: [&str; 5] = [
    "example1.json",
    "example2.json",
    "example3.json",
    "example4.json",
    "example5.json",
];

const EMBEDDED: [&str; 5] = [
    include_str!("../fixtures/example1.json"),
    include_str!("../fixtures/example2.json"),
    include_str!("../fixtures/example3.json"),
    include_str!("../fixtures/example4.json"),
    include_str!("../fixtures/example5.json"),
];

#[derive(Debug, Clone, Deserialize)]
struct Slice {
    k: usize,
    entries: Rows,
}

#[derive(Debug, Clone, Deserialize)]
struct OneBased {
    row: usize,
    col: usize,
}

impl OneBased {
    fn position(&self) -> Position {
        Position::new(self.row.wrapping_sub(1), self.col.wrapping_sub(1))
    }
}

#[derive(Debug, Clone, Deserialize)]
struct HmWitnessFixture {
    first: OneBased,
    second: OneBased,
    at: OneBased,
}

#[derive(Debug, Clone, Deserialize)]
struct NotCirculantPreserver {
    name: String,
    operator: OperatorFile,
    probe_k: usize,
    probe_b: MatrixFile,
    probe_image: MatrixFile,
    t_of_b: MatrixFile,
    diagonal_slices: Vec<Slice>,
    split_source: usize,
}

#[derive(Debug, Clone, Deserialize)]
struct NotHadamardPreserver {
    name: String,
    operator: OperatorFile,
    p: Vec<usize>,
    hm_witness: HmWitnessFixture,
}

#[derive(Debug, Clone, Deserialize)]
struct RangeNonInvariance {
    name: String,
    operator: OperatorFile,
    p: Vec<usize>,
    x: MatrixFile,
    multiplier: MatrixFile,
    product: MatrixFile,
}

#[derive(Debug, Clone, Deserialize)]
struct GroupInverseExample {
    name: String,
    operator: OperatorFile,
    index: usize,
    group_inverse: OperatorFile,
    p: Vec<usize>,
    inverse_p: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
struct MoorePenroseExample {
    name: String,
    operator: OperatorFile,
    moore_penrose: OperatorFile,
    p: Vec<usize>,
    inverse_p: Vec<usize>,
}

/// The five parsed fixtures.
#[derive(Debug, Clone)]
pub struct Corpus {
    not_circulant: NotCirculantPreserver,
    not_hadamard: NotHadamardPreserver,
    range: RangeNonInvariance,
    group: GroupInverseExample,
    moore_penrose: MoorePenroseExample,
}

fn parse<T: DeserializeOwned>(file: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{file}: {e}")))
}

impl Corpus {
    /// Fixtures compiled into the library.
    pub fn embedded() -> Result<Self> {
        Self::from_texts(EMBEDDED.map(str::to_string))
    }

    /// Loads `example1.json` .. `example5.json` from a directory.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut texts: [String; 5] = Default::default();
        for (slot, file) in texts.iter_mut().zip(FILES) {
            let path = dir.join(file);
            *slot = std::fs::read_to_string(&path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        }
        Self::from_texts(texts)
    }

    fn from_texts(t: [String; 5]) -> Result<Self> {
        Ok(Self {
            not_circulant: parse(FILES[0], &t[0])?,
            not_hadamard: parse(FILES[1], &t[1])?,
            range: parse(FILES[2], &t[2])?,
            group: parse(FILES[3], &t[3])?,
            moore_penrose: parse(FILES[4], &t[4])?,
        })
    }

    pub fn file_names() -> [&'static str; 5] {
        FILES
    }

    pub fn embedded_text(file: &str) -> Option<&'static str> {
        FILES.iter().position(|f| *f == file).map(|i| EMBEDDED[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Diagonal map reported for one operator of an example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportedMap {
    pub operator: String,
    pub p: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub certificates: Vec<ReportedMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub passed: bool,
    pub examples: Vec<ExampleReport>,
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ex in &self.examples {
            writeln!(f, "{} {}", if ex.passed { "PASS" } else { "FAIL" }, ex.name)?;
            for c in ex.checks.iter().filter(|c| !c.passed) {
                write!(f, "  mismatch: {}", c.name)?;
                if let Some(d) = &c.detail {
                    write!(f, " ({d})")?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

struct Recorder {
    name: String,
    checks: Vec<Check>,
    certificates: Vec<ReportedMap>,
}

impl Recorder {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checks: Vec::new(),
            certificates: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl FnOnce() -> String) {
        let detail = (!passed).then(detail);
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    /// Records a step that could not run because its input failed to load.
    fn broken(&mut self, name: &str, err: &Error) {
        self.check(name, false, || err.to_string());
    }

    fn finish(self) -> ExampleReport {
        ExampleReport {
            passed: self.checks.iter().all(|c| c.passed),
            name: self.name,
            checks: self.checks,
            certificates: self.certificates,
        }
    }
}

/// `T(C_j ⊙ E) = C_{p(j)} ⊙ T(E)` for every matrix unit `E` and every `j`,
/// which by linearity is the identity for all inputs.
fn intertwines(t: &OperatorRep, p: &[usize]) -> std::result::Result<(), String> {
    let n = t.n();
    if p.len() != n {
        return Err(format!("map {p:?} has wrong length"));
    }
    for (j, &pj) in (1..=n).zip(p) {
        let cj = circulant_perm(n, j).map_err(|e| e.to_string())?;
        let cp = circulant_perm(n, pj).map_err(|e| e.to_string())?;
        for h in 0..n {
            for k in 0..n {
                let e = Mat::unit(n, h, k);
                let lhs = t.apply(&cj.hadamard(&e).unwrap()).unwrap();
                let rhs = cp.hadamard(&t.apply(&e).unwrap()).unwrap();
                if lhs != rhs {
                    return Err(format!("fails for C_{j} on E_{}{}", h + 1, k + 1));
                }
            }
        }
    }
    Ok(())
}

fn certify(rec: &mut Recorder, label: &str, t: &OperatorRep, expected: &[usize]) {
    match decide_hc_preserver(t).certificate() {
        Some(cert) => {
            rec.check(&format!("{label} certified with P = {expected:?}"), cert.p == expected, || {
                format!("computed P = {:?}", cert.p)
            });
            rec.certificates.push(ReportedMap {
                operator: label.to_string(),
                p: cert.p.clone(),
            });
        }
        None => rec.check(&format!("{label} certified"), false, || "refuted".into()),
    }
    let verdict = intertwines(t, expected);
    rec.check(&format!("{label} intertwines C_j with C_P(j)"), verdict.is_ok(), || {
        verdict.unwrap_err()
    });
}

fn compare_operators(rec: &mut Recorder, name: &str, computed: &OperatorRep, expected: &OperatorRep) {
    let n = computed.n();
    let mut bad = Vec::new();
    for h in 0..n {
        for k in 0..n {
            if computed.basis_image(h, k) != expected.basis_image(h, k) {
                bad.push(format!("E_{}{}: got {}", h + 1, k + 1, computed.basis_image(h, k)));
            }
        }
    }
    rec.check(name, bad.is_empty(), || bad.join("; "));
}

fn run_not_circulant(fx: &NotCirculantPreserver) -> ExampleReport {
    let mut rec = Recorder::new(&fx.name);
    let loaded = (|| {
        Ok::<_, Error>((
            fx.operator.to_operator()?,
            fx.probe_b.to_mat()?,
            fx.probe_image.to_mat()?,
            fx.t_of_b.to_mat()?,
        ))
    })();
    let (t, b, probe_image, t_of_b) = match loaded {
        Ok(v) => v,
        Err(e) => {
            rec.broken("load fixture", &e);
            return rec.finish();
        }
    };

    let hm = hm_necessary_check(&t);
    rec.check("disjoint basis supports (necessary for Hadamard preservers)", hm.passed(), || {
        format!("{:?}", hm.violation)
    });

    let decision = decide_hc_preserver(&t);
    match decision.refutation() {
        Some(r) => {
            let split = matches!(r.violation, Violation::DiagonalSplit { source, .. } if source == fx.split_source);
            rec.check(
                &format!("refuted by a split of diagonal {}", fx.split_source),
                split,
                || format!("{:?}", r.violation),
            );
            rec.check("refutation carries a confirmed counterexample", r.counterexample.is_some(), || {
                "no (k, B) found".into()
            });
        }
        None => rec.check("refuted as a circulant preserver", false, || "certified".into()),
    }

    let n = t.n();
    let probe = circulant_perm(n, fx.probe_k).and_then(|c| c.hadamard(&b)).and_then(|x| t.apply(&x));
    match (probe, t.apply(&b)) {
        (Ok(x), Ok(y)) => {
            rec.check("T(C_k ⊙ B) matches", x == probe_image, || x.to_string());
            rec.check("T(B) matches", y == t_of_b, || y.to_string());
            let hc = decide_hc(&x, &y);
            rec.check("T(C_k ⊙ B) is not circulant-majorized by T(B)", matches!(hc, Ok(None)), || {
                format!("{hc:?}")
            });
            for slice in &fx.diagonal_slices {
                let expected = MatrixFile {
                    n,
                    entries: slice.entries.clone(),
                }
                .to_mat();
                let got = circulant_perm(n, slice.k).and_then(|c| c.hadamard(&y));
                rec.check(
                    &format!("C_{} ⊙ T(B) matches", slice.k),
                    matches!((&got, &expected), (Ok(g), Ok(e)) if g == e),
                    || format!("{got:?}"),
                );
            }
        }
        (x, y) => rec.check("apply probes", false, || format!("{x:?} / {y:?}")),
    }
    rec.finish()
}

fn run_not_hadamard(fx: &NotHadamardPreserver) -> ExampleReport {
    let mut rec = Recorder::new(&fx.name);
    let t = match fx.operator.to_operator() {
        Ok(t) => t,
        Err(e) => {
            rec.broken("load fixture", &e);
            return rec.finish();
        }
    };
    certify(&mut rec, "T", &t, &fx.p);
    let expected = OverlapWitness {
        first: fx.hm_witness.first.position(),
        second: fx.hm_witness.second.position(),
        at: fx.hm_witness.at.position(),
    };
    let hm = hm_necessary_check(&t);
    rec.check(
        "first overlapping basis pair and position",
        hm.violation == Some(expected),
        || format!("{:?}", hm.violation),
    );
    rec.finish()
}

fn run_range(fx: &RangeNonInvariance) -> ExampleReport {
    let mut rec = Recorder::new(&fx.name);
    let loaded = (|| {
        Ok::<_, Error>((
            fx.operator.to_operator()?,
            fx.x.to_mat()?,
            fx.multiplier.to_mat()?,
            fx.product.to_mat()?,
        ))
    })();
    let (t, x, mult, product) = match loaded {
        Ok(v) => v,
        Err(e) => {
            rec.broken("load fixture", &e);
            return rec.finish();
        }
    };
    certify(&mut rec, "T", &t, &fx.p);
    let range = t.range_basis();
    rec.check("X lies in R(T)", range.contains(&x), String::new);
    rec.check("multiplier is doubly stochastic", is_doubly_stochastic(&mult), String::new);
    rec.check(
        "multiplier is not circulant",
        CirculantCombination::from_matrix(&mult).is_none(),
        String::new,
    );
    match mult.hadamard(&x) {
        Ok(px) => {
            rec.check("multiplier ⊙ X matches", px == product, || px.to_string());
            rec.check("multiplier ⊙ X leaves R(T)", !range.contains(&px), String::new);
        }
        Err(e) => rec.broken("multiplier ⊙ X", &e),
    }
    rec.finish()
}

fn run_group(fx: &GroupInverseExample) -> ExampleReport {
    let mut rec = Recorder::new(&fx.name);
    let (t, expected) = match fx.operator.to_operator().and_then(|t| Ok((t, fx.group_inverse.to_operator()?))) {
        Ok(v) => v,
        Err(e) => {
            rec.broken("load fixture", &e);
            return rec.finish();
        }
    };
    let index = index_of(&t).index;
    rec.check(&format!("index is {}", fx.index), index == fx.index, || index.to_string());
    match group_inverse(&t) {
        Ok(g) => {
            compare_operators(&mut rec, "group inverse matches the closed form", &g, &expected);
            certify(&mut rec, "T", &t, &fx.p);
            certify(&mut rec, "T#", &g, &fx.inverse_p);
        }
        Err(e) => rec.broken("group inverse exists", &e),
    }
    rec.finish()
}

fn run_moore_penrose(fx: &MoorePenroseExample) -> ExampleReport {
    let mut rec = Recorder::new(&fx.name);
    let (t, expected) = match fx.operator.to_operator().and_then(|t| Ok((t, fx.moore_penrose.to_operator()?))) {
        Ok(v) => v,
        Err(e) => {
            rec.broken("load fixture", &e);
            return rec.finish();
        }
    };
    let mp = moore_penrose(&t);
    compare_operators(&mut rec, "Moore-Penrose inverse matches the closed form", &mp, &expected);
    certify(&mut rec, "T", &t, &fx.p);
    certify(&mut rec, "T+", &mp, &fx.inverse_p);
    rec.finish()
}

pub fn run(corpus: &Corpus) -> CorpusReport {
    let examples = vec![
        run_not_circulant(&corpus.not_circulant),
        run_not_hadamard(&corpus.not_hadamard),
        run_range(&corpus.range),
        run_group(&corpus.group),
        run_moore_penrose(&corpus.moore_penrose),
    ];
    CorpusReport {
        passed: examples.iter().all(|e| e.passed),
        examples,
    }
}

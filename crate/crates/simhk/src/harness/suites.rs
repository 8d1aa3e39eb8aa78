//! Randomized consequence suites for the model-structure lemmas, the
//! factorization round trips, and descent.
//!
//! Each trial draws a seeded instance, checks the suite's hypotheses by
//! the module decision procedures at the bound, and, when they hold,
//! runs the conclusion's decision procedure. A trial where a hypothesis
//! fails is skipped (not a failure); a trial where a procedure reports
//! its bound exhausted is counted separately; only a decided conclusion
//! that contradicts the lemma is a failure. Every failure carries the
//! serialized instance and replays to the identical verdict.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::constructions::{coproduct, product};
use crate::error::{Error, Result};
use crate::factorization::{factor_acof_fib, factor_cof_contractible_at, weq_decide};
use crate::harness::format::{parse_morphism_body, serialize_morphism, serialize_sset, Cursor};
use crate::harness::random::{random_composable_pair_with, random_morphism_with, Profile};
use crate::lifting::{contractible_certificate, kan_certificate, FillerCertificate};
use crate::sset::{
    compose_morphisms, discrete, find_isomorphism, horn, identity_morphism, is_cofibration,
    simplex, to_point, FiniteSSet, SMorphism,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    TwoOutOfThree,
    WeqComposition,
    LeftCancel,
    RightCancel,
    SharedRetract,
    FactorRoundtrip,
    Descent,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::TwoOutOfThree,
        SuiteName::WeqComposition,
        SuiteName::LeftCancel,
        SuiteName::RightCancel,
        SuiteName::SharedRetract,
        SuiteName::FactorRoundtrip,
        SuiteName::Descent,
    ];

    fn as_str(self) -> &'static str {
        match self {
            SuiteName::TwoOutOfThree => "two-out-of-three",
            SuiteName::WeqComposition => "weq-composition",
            SuiteName::LeftCancel => "left-cancel",
            SuiteName::RightCancel => "right-cancel",
            SuiteName::SharedRetract => "shared-retract",
            SuiteName::FactorRoundtrip => "factor-roundtrip",
            SuiteName::Descent => "descent",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("unknown suite `{s}`"),
            })
    }
}

/// One refuted trial: the instance (one or two morphisms) and what the
/// decision procedures concluded.
#[derive(Clone, Debug)]
pub struct SuiteFailure {
    pub index: u64,
    pub detail: String,
    pub f: SMorphism,
    pub g: Option<SMorphism>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub seed: u64,
    pub trials: u64,
    pub bound: u8,
    /// Trials whose hypotheses held and whose conclusion was decided.
    pub checked: u64,
    /// Trials abandoned because a procedure reported its bound exhausted.
    pub exhausted: u64,
    pub failures: Vec<SuiteFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::from("begin report\n");
        let _ = writeln!(s, "suite {}", self.suite);
        let _ = writeln!(s, "seed {}", self.seed);
        let _ = writeln!(s, "trials {}", self.trials);
        let _ = writeln!(s, "bound {}", self.bound);
        let _ = writeln!(s, "checked {}", self.checked);
        let _ = writeln!(s, "exhausted {}", self.exhausted);
        for fail in &self.failures {
            s.push_str("begin failure\n");
            let _ = writeln!(s, "index {}", fail.index);
            let _ = writeln!(s, "detail {}", fail.detail);
            s.push_str(&serialize_morphism(&fail.f));
            if let Some(g) = &fail.g {
                s.push_str(&serialize_morphism(g));
            }
            s.push_str("end failure\n");
        }
        s.push_str("end report\n");
        s
    }

    pub fn parse(text: &str) -> Result<SuiteReport> {
        fn field(cur: &mut Cursor, key: &str) -> Result<(usize, String)> {
            match cur.next_line() {
                Some((n, l)) => match l.split_once(' ') {
                    Some((k, rest)) if k == key => Ok((n, rest.to_string())),
                    _ => Err(Error::Parse {
                        line: n,
                        msg: format!("expected `{key} ...`, found `{l}`"),
                    }),
                },
                None => Err(Error::Parse {
                    line: 0,
                    msg: format!("expected `{key} ...`, found end of input"),
                }),
            }
        }
        fn num<T: FromStr>(pair: (usize, String), what: &str) -> Result<T> {
            pair.1.parse().map_err(|_| Error::Parse {
                line: pair.0,
                msg: format!("malformed {what} `{}`", pair.1),
            })
        }
        let mut cur = Cursor::new(text);
        cur.expect("begin report")?;
        let suite = SuiteName::from_str(&field(&mut cur, "suite")?.1)?;
        let seed = num(field(&mut cur, "seed")?, "seed")?;
        let trials = num(field(&mut cur, "trials")?, "trial count")?;
        let bound = num(field(&mut cur, "bound")?, "bound")?;
        let checked = num(field(&mut cur, "checked")?, "checked count")?;
        let exhausted = num(field(&mut cur, "exhausted")?, "exhausted count")?;
        let mut failures = Vec::new();
        loop {
            match cur.next_line() {
                Some((_, "end report")) => break,
                Some((_, "begin failure")) => {
                    let index = num(field(&mut cur, "index")?, "index")?;
                    let detail = field(&mut cur, "detail")?.1;
                    cur.expect("begin morphism")?;
                    let f = parse_morphism_body(&mut cur)?;
                    let g = match cur.peek() {
                        Some((_, "begin morphism")) => {
                            cur.next_line();
                            Some(parse_morphism_body(&mut cur)?)
                        }
                        _ => None,
                    };
                    cur.expect("end failure")?;
                    failures.push(SuiteFailure {
                        index,
                        detail,
                        f,
                        g,
                    });
                }
                Some((n, l)) => {
                    return Err(Error::Parse {
                        line: n,
                        msg: format!("unexpected line `{l}` in report"),
                    })
                }
                None => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: "missing `end report`".into(),
                    })
                }
            }
        }
        if let Some((n, l)) = cur.peek() {
            return Err(Error::Parse {
                line: n,
                msg: format!("trailing content `{l}`"),
            });
        }
        Ok(SuiteReport {
            suite,
            seed,
            trials,
            bound,
            checked,
            exhausted,
            failures,
        })
    }
}

/// What a decision procedure said about one property of one morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Verdict {
    Yes,
    No,
    /// The property's procedure needs certified endpoints that this
    /// instance lacks, so the question is outside its domain.
    Undefined,
    /// The procedure gave up at the bound.
    Exhausted,
    /// The procedure errored on valid input: a defect, reported as such.
    Broken(String),
}

impl Verdict {
    fn word(&self) -> &str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Undefined => "undefined",
            Verdict::Exhausted => "exhausted",
            Verdict::Broken(_) => "broken",
        }
    }
}

/// Outcome of one whole trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Holds,
    NotApplicable,
    Exhausted,
    Failed(String),
}

/// Memoized decision procedures at a fixed bound. Objects repeat
/// heavily across trials, so certificates are cached by serialized form.
pub(crate) struct Evaluator {
    pub(crate) bound: u8,
    kan: HashMap<String, Option<FillerCertificate>>,
    weq: HashMap<String, Verdict>,
    acfib: HashMap<String, Verdict>,
}

impl Evaluator {
    pub(crate) fn new(bound: u8) -> Self {
        Evaluator {
            bound,
            kan: HashMap::new(),
            weq: HashMap::new(),
            acfib: HashMap::new(),
        }
    }

    /// Horn-filling certificate for the map to the point, or None when
    /// some horn in x has no filler at the bound.
    pub(crate) fn kan_cert(&mut self, x: &Arc<FiniteSSet>) -> Option<FillerCertificate> {
        let key = serialize_sset(x);
        if let Some(v) = self.kan.get(&key) {
            return v.clone();
        }
        let v = match kan_certificate(&to_point(x), self.bound) {
            crate::lifting::CertificateResult::Certified(c) => Some(c),
            crate::lifting::CertificateResult::Failed(_) => None,
        };
        self.kan.insert(key, v.clone());
        v
    }

    pub(crate) fn weq(&mut self, f: &SMorphism) -> Verdict {
        let key = serialize_morphism(f);
        if let Some(v) = self.weq.get(&key) {
            return v.clone();
        }
        let v = match (self.kan_cert(&f.source), self.kan_cert(&f.target)) {
            (Some(cx), Some(cy)) => match weq_decide(f, &cx, &cy, self.bound) {
                Ok(d) if d.is_yes() => Verdict::Yes,
                Ok(_) => Verdict::No,
                Err(Error::BoundTooSmall { .. }) => Verdict::Exhausted,
                Err(e) => Verdict::Broken(e.to_string()),
            },
            _ => Verdict::Undefined,
        };
        self.weq.insert(key, v.clone());
        v
    }

    /// Acyclic fibration: right lifting against every cycle inclusion
    /// up to the bound. Total on all morphisms.
    pub(crate) fn acfib(&mut self, f: &SMorphism) -> Verdict {
        let key = serialize_morphism(f);
        if let Some(v) = self.acfib.get(&key) {
            return v.clone();
        }
        let v = if contractible_certificate(f, self.bound).is_certified() {
            Verdict::Yes
        } else {
            Verdict::No
        };
        self.acfib.insert(key, v.clone());
        v
    }

    /// Acyclic cofibration: levelwise decidable injectivity plus the
    /// equivalence decision.
    pub(crate) fn acof(&mut self, f: &SMorphism) -> Verdict {
        if !is_cofibration(f).is_yes() {
            return Verdict::No;
        }
        self.weq(f)
    }
}

fn broken(vs: &[(&str, &Verdict)]) -> Option<String> {
    vs.iter().find_map(|(name, v)| match v {
        Verdict::Broken(e) => Some(format!("{name}: procedure errored: {e}")),
        _ => None,
    })
}

fn any(vs: &[(&str, &Verdict)], want: &Verdict) -> bool {
    vs.iter().any(|(_, v)| *v == want)
}

fn eval_two_out_of_three(ev: &mut Evaluator, f: &SMorphism, g: &SMorphism) -> Outcome {
    let gf = compose_morphisms(g, f).expect("pair is composable");
    let wf = ev.weq(f);
    let wg = ev.weq(g);
    let wgf = ev.weq(&gf);
    let vs = [("f", &wf), ("g", &wg), ("gf", &wgf)];
    if let Some(d) = broken(&vs) {
        return Outcome::Failed(d);
    }
    if any(&vs, &Verdict::Exhausted) {
        return Outcome::Exhausted;
    }
    if any(&vs, &Verdict::Undefined) {
        return Outcome::NotApplicable;
    }
    let yes = vs.iter().filter(|(_, v)| **v == Verdict::Yes).count();
    if yes == 2 {
        Outcome::Failed(format!(
            "exactly two equivalences among f, g, gf: f={} g={} gf={}",
            wf.word(),
            wg.word(),
            wgf.word()
        ))
    } else {
        Outcome::Holds
    }
}

fn eval_weq_composition(ev: &mut Evaluator, f: &SMorphism, g: &SMorphism) -> Outcome {
    let wf = ev.weq(f);
    let wg = ev.weq(g);
    let vs = [("f", &wf), ("g", &wg)];
    if let Some(d) = broken(&vs) {
        return Outcome::Failed(d);
    }
    if any(&vs, &Verdict::Exhausted) {
        return Outcome::Exhausted;
    }
    if wf != Verdict::Yes || wg != Verdict::Yes {
        return Outcome::NotApplicable;
    }
    let gf = compose_morphisms(g, f).expect("pair is composable");
    match ev.weq(&gf) {
        Verdict::Yes => Outcome::Holds,
        Verdict::No => Outcome::Failed("composite of equivalences is not one".into()),
        Verdict::Exhausted => Outcome::Exhausted,
        Verdict::Undefined => Outcome::NotApplicable,
        Verdict::Broken(e) => Outcome::Failed(format!("gf: procedure errored: {e}")),
    }
}

fn eval_left_cancel(ev: &mut Evaluator, f: &SMorphism, g: &SMorphism) -> Outcome {
    let gf = compose_morphisms(g, f).expect("pair is composable");
    let hg = ev.acof(g);
    let hgf = ev.acof(&gf);
    let vs = [("g", &hg), ("gf", &hgf)];
    if let Some(d) = broken(&vs) {
        return Outcome::Failed(d);
    }
    if any(&vs, &Verdict::Exhausted) {
        return Outcome::Exhausted;
    }
    if hg != Verdict::Yes || hgf != Verdict::Yes {
        return Outcome::NotApplicable;
    }
    match ev.acof(f) {
        Verdict::Yes => Outcome::Holds,
        Verdict::No => {
            Outcome::Failed("f not an acyclic cofibration though g and gf are".into())
        }
        Verdict::Exhausted => Outcome::Exhausted,
        Verdict::Undefined => Outcome::NotApplicable,
        Verdict::Broken(e) => Outcome::Failed(format!("f: procedure errored: {e}")),
    }
}

fn eval_right_cancel(ev: &mut Evaluator, f: &SMorphism, g: &SMorphism) -> Outcome {
    let gf = compose_morphisms(g, f).expect("pair is composable");
    if ev.acfib(f) != Verdict::Yes || ev.acfib(&gf) != Verdict::Yes {
        return Outcome::NotApplicable;
    }
    match ev.acfib(g) {
        Verdict::Yes => Outcome::Holds,
        _ => Outcome::Failed("g not an acyclic fibration though f and gf are".into()),
    }
}

fn eval_shared_retract(ev: &mut Evaluator, f: &SMorphism, g: &SMorphism) -> Outcome {
    let gf = compose_morphisms(g, f).expect("pair is composable");
    // Right-hand form: g and gf acyclic fibrations force f to be an
    // equivalence.
    let a = if ev.acfib(g) == Verdict::Yes && ev.acfib(&gf) == Verdict::Yes {
        match ev.weq(f) {
            Verdict::Yes => Outcome::Holds,
            Verdict::No => {
                Outcome::Failed("f not an equivalence though g and gf are acyclic fibrations".into())
            }
            Verdict::Exhausted => Outcome::Exhausted,
            Verdict::Undefined => Outcome::NotApplicable,
            Verdict::Broken(e) => Outcome::Failed(format!("f: procedure errored: {e}")),
        }
    } else {
        Outcome::NotApplicable
    };
    // Left-hand form: f and gf acyclic cofibrations force g to be an
    // equivalence.
    let hf = ev.acof(f);
    let hgf = ev.acof(&gf);
    let vs = [("f", &hf), ("gf", &hgf)];
    let b = if let Some(d) = broken(&vs) {
        Outcome::Failed(d)
    } else if any(&vs, &Verdict::Exhausted) {
        Outcome::Exhausted
    } else if hf == Verdict::Yes && hgf == Verdict::Yes {
        match ev.weq(g) {
            Verdict::Yes => Outcome::Holds,
            Verdict::No => {
                Outcome::Failed("g not an equivalence though f and gf are acyclic cofibrations".into())
            }
            Verdict::Exhausted => Outcome::Exhausted,
            Verdict::Undefined => Outcome::NotApplicable,
            Verdict::Broken(e) => Outcome::Failed(format!("g: procedure errored: {e}")),
        }
    } else {
        Outcome::NotApplicable
    };
    match (a, b) {
        (Outcome::Failed(d), _) | (_, Outcome::Failed(d)) => Outcome::Failed(d),
        (Outcome::Exhausted, _) | (_, Outcome::Exhausted) => Outcome::Exhausted,
        (Outcome::Holds, _) | (_, Outcome::Holds) => Outcome::Holds,
        _ => Outcome::NotApplicable,
    }
}

fn eval_factor_roundtrip(ev: &mut Evaluator, f: &SMorphism) -> Outcome {
    match factor_cof_contractible_at(f, ev.bound) {
        Err(Error::BoundTooSmall { .. }) => return Outcome::Exhausted,
        Err(e) => return Outcome::Failed(format!("first factorization errored: {e}")),
        Ok(r) => {
            let back = compose_morphisms(&r.h, &r.g).expect("factor legs compose");
            if back != *f {
                return Outcome::Failed("first factorization does not recompose to f".into());
            }
            if !is_cofibration(&r.g).is_yes() {
                return Outcome::Failed("left factor of first factorization not a cofibration".into());
            }
        }
    }
    let (Some(cx), Some(cy)) = (ev.kan_cert(&f.source), ev.kan_cert(&f.target)) else {
        // The second factorization's procedure needs certified
        // endpoints; the first already round-tripped.
        return Outcome::Holds;
    };
    match factor_acof_fib(f, &cx, &cy, ev.bound) {
        Err(Error::BoundTooSmall { .. }) => Outcome::Exhausted,
        Err(e) => Outcome::Failed(format!("second factorization errored: {e}")),
        Ok(r) => {
            let back = compose_morphisms(&r.q, &r.k).expect("factor legs compose");
            if back != *f {
                return Outcome::Failed("second factorization does not recompose to f".into());
            }
            if let Err(e) = r.inverse.validate() {
                return Outcome::Failed(format!("weak inverse data invalid: {e}"));
            }
            if !kan_certificate(&r.q, ev.bound).is_certified() {
                return Outcome::Failed("right factor of second factorization not certified".into());
            }
            Outcome::Holds
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum DescStyle {
    Id,
    Proj,
    Codiag,
}

impl DescStyle {
    fn word(self) -> &'static str {
        match self {
            DescStyle::Id => "id",
            DescStyle::Proj => "proj",
            DescStyle::Codiag => "codiag",
        }
    }

    fn from_word(w: &str) -> Option<Self> {
        match w {
            "id" => Some(DescStyle::Id),
            "proj" => Some(DescStyle::Proj),
            "codiag" => Some(DescStyle::Codiag),
            _ => None,
        }
    }
}

/// Runs the descent checks for a certified map over the horn (n, k):
/// the restriction along the horn inclusion must reproduce the input up
/// to isomorphism, the descended map must itself be certified, and a
/// codiagonal must descend to two disjoint simplices.
fn eval_descent_checks(bound: u8, f: &SMorphism, n: u8, k: u8, style: DescStyle) -> Outcome {
    use crate::descent::{descent_d, descent_pullback_check, PullbackCheck};
    let prefix = format!("n={n} k={k} style={}", style.word());
    let cert = match kan_certificate(f, 1) {
        crate::lifting::CertificateResult::Certified(c) => c,
        crate::lifting::CertificateResult::Failed(w) => {
            return Outcome::Failed(format!("{prefix}; input map not certified: {w:?}"))
        }
    };
    let bd = bound.min(n + 1);
    let dr = match descent_d(f, &cert, n, k, bd) {
        Ok(dr) => dr,
        Err(Error::BoundTooSmall { .. }) => return Outcome::Exhausted,
        Err(e) => return Outcome::Failed(format!("{prefix}; descent errored: {e}")),
    };
    match descent_pullback_check(&dr) {
        Ok(pc) if pc.is_iso() => {}
        Ok(PullbackCheck::Mismatch { dim, detail }) => {
            return Outcome::Failed(format!(
                "{prefix}; restriction mismatch at dimension {dim}: {detail}"
            ))
        }
        Ok(_) => unreachable!("is_iso covers the Iso arm"),
        Err(e) => return Outcome::Failed(format!("{prefix}; restriction check errored: {e}")),
    }
    if !kan_certificate(&dr.df, bd).is_certified() {
        return Outcome::Failed(format!("{prefix}; descended map not certified"));
    }
    if style == DescStyle::Codiag {
        let two = coproduct(&simplex(n), &simplex(n)).object;
        if find_isomorphism(&dr.total, &two).is_none() {
            return Outcome::Failed(format!(
                "{prefix}; descended codiagonal total is not two disjoint simplices"
            ));
        }
    }
    Outcome::Holds
}

/// Builds the descent instance for one trial seed and runs the checks.
fn run_descent_trial(sub_seed: u64, bound: u8) -> (SMorphism, Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    let n: u8 = rng.gen_range(1..=3);
    let k: u8 = rng.gen_range(0..=n);
    let style = match rng.gen_range(0..3u8) {
        0 => DescStyle::Id,
        1 => DescStyle::Proj,
        _ if n >= 2 => DescStyle::Codiag,
        _ => DescStyle::Proj,
    };
    let (hobj, _) = horn(n, k).expect("k is a valid horn index");
    let f = match style {
        DescStyle::Id => identity_morphism(&hobj),
        DescStyle::Proj => {
            let fiber = discrete(rng.gen_range(1..=3));
            product(&hobj, &fiber).proj_x
        }
        DescStyle::Codiag => {
            let c = coproduct(&hobj, &hobj);
            c.copair(&identity_morphism(&hobj), &identity_morphism(&hobj))
                .expect("legs share a target")
        }
    };
    let outcome = eval_descent_checks(bound, &f, n, k, style);
    (f, outcome)
}

/// Re-parses the (n, k, style) prefix this module wrote into a descent
/// failure detail.
fn parse_descent_detail(detail: &str) -> Result<(u8, u8, DescStyle)> {
    let bad = || Error::Parse {
        line: 0,
        msg: format!("unreadable descent detail `{detail}`"),
    };
    let head = detail.split(';').next().ok_or_else(bad)?;
    let mut n = None;
    let mut k = None;
    let mut style = None;
    for tok in head.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("k=") {
            k = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("style=") {
            style = DescStyle::from_word(v);
        }
    }
    match (n, k, style) {
        (Some(n), Some(k), Some(style)) => Ok((n, k, style)),
        _ => Err(bad()),
    }
}

fn eval_pair_suite(
    name: SuiteName,
    ev: &mut Evaluator,
    f: &SMorphism,
    g: &SMorphism,
) -> Outcome {
    match name {
        SuiteName::TwoOutOfThree => eval_two_out_of_three(ev, f, g),
        SuiteName::WeqComposition => eval_weq_composition(ev, f, g),
        SuiteName::LeftCancel => eval_left_cancel(ev, f, g),
        SuiteName::RightCancel => eval_right_cancel(ev, f, g),
        SuiteName::SharedRetract => eval_shared_retract(ev, f, g),
        _ => unreachable!("not a pair suite"),
    }
}

/// Runs `trials` seeded trials of the named suite at the bound. Trial
/// sub-seeds are drawn from a master stream in index order, so trial i
/// of a given seed is the same instance on every run.
pub fn run_suite(name: SuiteName, seed: u64, trials: u64, bound: u8) -> SuiteReport {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut ev = Evaluator::new(bound);
    let profile = Profile::default();
    let mut report = SuiteReport {
        suite: name,
        seed,
        trials,
        bound,
        checked: 0,
        exhausted: 0,
        failures: Vec::new(),
    };
    for index in 0..trials {
        let sub_seed = master.gen::<u64>();
        let (f, g, outcome) = match name {
            SuiteName::FactorRoundtrip => {
                let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
                let f = random_morphism_with(&mut rng, profile);
                let o = eval_factor_roundtrip(&mut ev, &f);
                (f, None, o)
            }
            SuiteName::Descent => {
                let (f, o) = run_descent_trial(sub_seed, bound);
                (f, None, o)
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
                let (f, g) = random_composable_pair_with(&mut rng, profile);
                let o = eval_pair_suite(name, &mut ev, &f, &g);
                (f, Some(g), o)
            }
        };
        match outcome {
            Outcome::Holds => report.checked += 1,
            Outcome::NotApplicable => {}
            Outcome::Exhausted => report.exhausted += 1,
            Outcome::Failed(detail) => report.failures.push(SuiteFailure {
                index,
                detail,
                f,
                g,
            }),
        }
    }
    report
}

/// Re-runs the decision procedures on a reported failure. A faithful
/// report replays to `Failed` with the same detail.
pub fn replay_failure(name: SuiteName, failure: &SuiteFailure, bound: u8) -> Result<bool> {
    let mut ev = Evaluator::new(bound);
    let outcome = match name {
        SuiteName::FactorRoundtrip => eval_factor_roundtrip(&mut ev, &failure.f),
        SuiteName::Descent => {
            let (n, k, style) = parse_descent_detail(&failure.detail)?;
            eval_descent_checks(bound, &failure.f, n, k, style)
        }
        _ => {
            let g = failure.g.as_ref().ok_or_else(|| Error::Parse {
                line: 0,
                msg: "pair suite failure lacks its second morphism".into(),
            })?;
            eval_pair_suite(name, &mut ev, &failure.f, g)
        }
    };
    Ok(matches!(outcome, Outcome::Failed(d) if d == failure.detail))
}

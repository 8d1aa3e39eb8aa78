//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a decision procedure refutes the
//! query (the witness is printed), 2 on usage or syntax errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use crate::constructions::{coproduct, product, pushout, pushout_product};
use crate::error::Error;
use crate::factorization::{factor_acof_fib, factor_cof_contractible_at, weq_decide, WeqVerdict};
use crate::harness::format::{
    element_text, parse_input, serialize_morphism, serialize_sset, Input,
};
use crate::harness::suites::{run_suite, SuiteName, SuiteReport};
use crate::lifting::{
    contractible_certificate, kan_certificate, CertificateResult, FillFamily, FillerCertificate,
    LiftEvidence, LiftSquare, SquareKey, TripleEvidence,
};
use crate::sset::{
    cycle, discrete, horn, is_cofibration, simplex, to_point, CofibrationCheck, SMorphism,
};

#[derive(Parser)]
#[command(
    name = "simhk",
    about = "Decision procedures for finite simplicial complexes",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a file and run the structural checks.
    Validate { file: PathBuf },
    /// Cell counts by dimension.
    Info { file: PathBuf },
    /// Construct a named object or morphism and print it.
    Build {
        /// Write the result here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(subcommand)]
        what: BuildCmd,
    },
    /// Decide a property of a morphism, or of an object through its
    /// map to the point.
    Check {
        /// Horn filling up to the bound.
        #[arg(long)]
        kan: bool,
        /// Levelwise decidable injectivity.
        #[arg(long)]
        cofibration: bool,
        /// Cycle filling up to the bound.
        #[arg(long)]
        contractible: bool,
        /// Weak equivalence at the bound (endpoints must check --kan).
        #[arg(long)]
        weq: bool,
        #[arg(long, default_value_t = 3)]
        bound: u8,
        file: PathBuf,
    },
    /// Find a diagonal for the square bottom∘i = p∘top.
    Lift {
        i: PathBuf,
        p: PathBuf,
        top: PathBuf,
        bottom: PathBuf,
        #[arg(long, default_value_t = 3)]
        bound: u8,
    },
    /// Solve the two-variable lifting problem for cofibrations f, g
    /// against h, with corner data a, b and target map c.
    TripleLift {
        f: PathBuf,
        g: PathBuf,
        h: PathBuf,
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        #[arg(long, default_value_t = 3)]
        bound: u8,
    },
    /// Factor a morphism through one of the two constructions.
    Factor {
        #[arg(long, value_enum)]
        mode: FactorMode,
        #[arg(long, default_value_t = 3)]
        bound: u8,
        file: PathBuf,
    },
    /// Descend a certified map over the given horn and verify that
    /// restricting the result reproduces the input.
    Descend {
        /// Horn parameters as `n,k`.
        #[arg(long)]
        horn: String,
        /// Truncation bound (default: min(3, n+1)).
        #[arg(long)]
        bound: Option<u8>,
        file: PathBuf,
    },
    /// Run a randomized consequence suite and print its report.
    Suite {
        #[arg(long)]
        name: String,
        /// Master seed (default: SIMHK_SEED, else 0).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 3)]
        bound: u8,
        /// Directory for replayable per-failure report files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// The standard simplex of the given dimension.
    Simplex { n: u8 },
    /// The horn inclusion (a morphism).
    Horn { n: u8, k: u8 },
    /// The cycle inclusion of the simplex (a morphism).
    Cycle { n: u8 },
    /// Finitely many points.
    Discrete { size: usize },
    /// Product of two objects.
    Product { a: PathBuf, b: PathBuf },
    /// Coproduct of two objects.
    Coproduct { a: PathBuf, b: PathBuf },
    /// Pushout object of a span of morphisms with equal sources.
    Pushout { f: PathBuf, g: PathBuf },
    /// Corner map of two cofibrations (a morphism).
    PushoutProduct { f: PathBuf, g: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorMode {
    /// Cofibration followed by a contractible morphism.
    CofAfib,
    /// Acyclic cofibration followed by a certified fibration.
    AcofFib,
}

enum CliFail {
    Usage(String),
    Math(String),
}

impl From<Error> for CliFail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => CliFail::Usage(e.to_string()),
            _ => CliFail::Math(e.to_string()),
        }
    }
}

type CliResult = std::result::Result<i32, CliFail>;

pub fn cli_main() -> i32 {
    let mut out = std::io::stdout().lock();
    cli_run(std::env::args_os(), &mut out)
}

/// Parses and runs one invocation, writing everything to `out`.
pub fn cli_run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match run_cmd(cli.cmd, out) {
        Ok(code) => code,
        Err(CliFail::Usage(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            2
        }
        Err(CliFail::Math(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            1
        }
    }
}

fn read_file(path: &Path) -> std::result::Result<String, CliFail> {
    std::fs::read_to_string(path)
        .map_err(|e| CliFail::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_input(path: &Path) -> std::result::Result<Input, CliFail> {
    Ok(parse_input(&read_file(path)?)?)
}

fn read_object(path: &Path) -> std::result::Result<std::sync::Arc<crate::sset::FiniteSSet>, CliFail> {
    match read_input(path)? {
        Input::Object(x) => Ok(x),
        Input::Morphism(_) => Err(CliFail::Usage(format!(
            "{} holds a morphism where an object is needed",
            path.display()
        ))),
    }
}

fn read_morphism(path: &Path) -> std::result::Result<SMorphism, CliFail> {
    match read_input(path)? {
        Input::Object(_) => Err(CliFail::Usage(format!(
            "{} holds an object where a morphism is needed",
            path.display()
        ))),
        Input::Morphism(f) => Ok(f),
    }
}

fn describe_key(key: &SquareKey) -> String {
    let fam = match key.family {
        FillFamily::Horn => "horn",
        FillFamily::Cycle => "cycle",
    };
    let tops: Vec<String> = key.top.iter().map(element_text).collect();
    format!(
        "{fam} dim {} index {}, top [{}], bottom {}",
        key.dim,
        key.k,
        tops.join("; "),
        element_text(&key.bottom)
    )
}

fn emit(out: &mut dyn Write, dest: &Option<PathBuf>, text: &str) -> CliResult {
    match dest {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliFail::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(0)
}

/// Kan certificate of the map to the point, or the failing square as a
/// mathematical error.
fn endpoint_certificate(
    x: &std::sync::Arc<crate::sset::FiniteSSet>,
    role: &str,
    bound: u8,
) -> std::result::Result<FillerCertificate, CliFail> {
    match kan_certificate(&to_point(x), bound) {
        CertificateResult::Certified(c) => Ok(c),
        CertificateResult::Failed(w) => Err(CliFail::Math(format!(
            "{role} is not certified: unfilled {}",
            describe_key(&w.key)
        ))),
    }
}

fn run_cmd(cmd: Cmd, out: &mut dyn Write) -> CliResult {
    match cmd {
        Cmd::Validate { file } => match read_input(&file)? {
            Input::Object(x) => {
                let _ = writeln!(out, "ok: object with {} cells", x.n_cells());
                Ok(0)
            }
            Input::Morphism(f) => {
                let _ = writeln!(
                    out,
                    "ok: morphism with {} source cells, {} target cells",
                    f.source.n_cells(),
                    f.target.n_cells()
                );
                Ok(0)
            }
        },
        Cmd::Info { file } => {
            fn counts(out: &mut dyn Write, x: &crate::sset::FiniteSSet) {
                let _ = writeln!(out, "cells {}", x.n_cells());
                let top = x.max_dim().unwrap_or(0);
                for d in 0..=top {
                    let n = (0..x.n_cells()).filter(|&c| x.dim_of(c) == d).count();
                    if n > 0 {
                        let _ = writeln!(out, "dim {d}: {n}");
                    }
                }
            }
            match read_input(&file)? {
                Input::Object(x) => counts(out, &x),
                Input::Morphism(f) => {
                    let _ = writeln!(out, "morphism");
                    let _ = writeln!(out, "source:");
                    counts(out, &f.source);
                    let _ = writeln!(out, "target:");
                    counts(out, &f.target);
                }
            }
            Ok(0)
        }
        Cmd::Build { out: dest, what } => {
            let text = match what {
                BuildCmd::Simplex { n } => serialize_sset(&simplex(n)),
                BuildCmd::Horn { n, k } => serialize_morphism(&horn(n, k)?.1),
                BuildCmd::Cycle { n } => serialize_morphism(&cycle(n).1),
                BuildCmd::Discrete { size } => serialize_sset(&discrete(size)),
                BuildCmd::Product { a, b } => {
                    serialize_sset(&product(&read_object(&a)?, &read_object(&b)?).object)
                }
                BuildCmd::Coproduct { a, b } => {
                    serialize_sset(&coproduct(&read_object(&a)?, &read_object(&b)?).object)
                }
                BuildCmd::Pushout { f, g } => {
                    serialize_sset(&pushout(&read_morphism(&f)?, &read_morphism(&g)?)?.object)
                }
                BuildCmd::PushoutProduct { f, g } => serialize_morphism(&pushout_product(
                    &read_morphism(&f)?,
                    &read_morphism(&g)?,
                )?),
            };
            emit(out, &dest, &text)
        }
        Cmd::Check {
            kan,
            cofibration,
            contractible,
            weq,
            bound,
            file,
        } => {
            let picked = [kan, cofibration, contractible, weq]
                .iter()
                .filter(|&&b| b)
                .count();
            if picked != 1 {
                return Err(CliFail::Usage(
                    "choose exactly one of --kan, --cofibration, --contractible, --weq".into(),
                ));
            }
            let input = read_input(&file)?;
            if cofibration {
                let Input::Morphism(f) = input else {
                    return Err(CliFail::Usage(
                        "--cofibration needs a morphism input".into(),
                    ));
                };
                return match is_cofibration(&f) {
                    CofibrationCheck::Yes { complement } => {
                        let _ = writeln!(
                            out,
                            "cofibration: yes ({} cells outside the image)",
                            complement.len()
                        );
                        Ok(0)
                    }
                    CofibrationCheck::No { first, second } => {
                        let _ = writeln!(
                            out,
                            "cofibration: no (cells {} and {} collide)",
                            element_text(&first),
                            element_text(&second)
                        );
                        Ok(1)
                    }
                };
            }
            let f = match input {
                Input::Morphism(f) => f,
                Input::Object(x) => to_point(&x),
            };
            if weq {
                let cx = endpoint_certificate(&f.source, "source", bound)?;
                let cy = endpoint_certificate(&f.target, "target", bound)?;
                return match weq_decide(&f, &cx, &cy, bound)?.verdict {
                    WeqVerdict::Yes { .. } => {
                        let _ = writeln!(out, "weak equivalence: yes (bound {bound})");
                        Ok(0)
                    }
                    WeqVerdict::No { witness } => {
                        let _ = writeln!(
                            out,
                            "weak equivalence: no, unfilled {}",
                            describe_key(&witness.key)
                        );
                        Ok(1)
                    }
                };
            }
            let (word, result) = if kan {
                ("kan", kan_certificate(&f, bound))
            } else {
                ("contractible", contractible_certificate(&f, bound))
            };
            match result {
                CertificateResult::Certified(c) => {
                    let _ = writeln!(
                        out,
                        "{word}: certified up to bound {bound} ({} squares)",
                        c.table.len()
                    );
                    Ok(0)
                }
                CertificateResult::Failed(w) => {
                    let _ = writeln!(out, "{word}: no, unfilled {}", describe_key(&w.key));
                    Ok(1)
                }
            }
        }
        Cmd::Lift {
            i,
            p,
            top,
            bottom,
            bound,
        } => {
            let i = read_morphism(&i)?;
            let p = read_morphism(&p)?;
            let top = read_morphism(&top)?;
            let bottom = read_morphism(&bottom)?;
            let square = LiftSquare {
                i: &i,
                p: &p,
                top: &top,
                bottom: &bottom,
            };
            if !square.commutes() {
                return Err(CliFail::Math("square does not commute".into()));
            }
            let diagonal = match contractible_certificate(&p, bound) {
                CertificateResult::Certified(cert) => {
                    crate::lifting::solve_rlp(&square, &LiftEvidence::CycleCertificate(&cert))
                        .ok()
                        .or_else(|| crate::lifting::search_lift(&square))
                }
                CertificateResult::Failed(_) => crate::lifting::search_lift(&square),
            };
            match diagonal {
                Some(d) => {
                    let _ = out.write_all(serialize_morphism(&d).as_bytes());
                    Ok(0)
                }
                None => Err(CliFail::Math("no diagonal exists".into())),
            }
        }
        Cmd::TripleLift {
            f,
            g,
            h,
            a,
            b,
            c,
            bound,
        } => {
            let f = read_morphism(&f)?;
            let g = read_morphism(&g)?;
            let h = read_morphism(&h)?;
            let a = read_morphism(&a)?;
            let b = read_morphism(&b)?;
            let c = read_morphism(&c)?;
            let cycle_cert = match contractible_certificate(&h, bound) {
                CertificateResult::Certified(cert) => Some(cert),
                CertificateResult::Failed(_) => None,
            };
            let horn_cert = match cycle_cert {
                Some(_) => None,
                None => match kan_certificate(&h, bound) {
                    CertificateResult::Certified(cert) => Some(cert),
                    CertificateResult::Failed(w) => {
                        return Err(CliFail::Math(format!(
                            "middle morphism is not certified: unfilled {}",
                            describe_key(&w.key)
                        )))
                    }
                },
            };
            let evidence = match (&cycle_cert, &horn_cert) {
                (Some(cert), _) => TripleEvidence::AcyclicMiddle(cert),
                (None, Some(cert)) => TripleEvidence::HornFill(cert),
                (None, None) => unreachable!("one certificate is always present"),
            };
            let d = crate::lifting::triple_lift(&f, &g, &h, &a, &b, &c, &evidence)?;
            let _ = out.write_all(serialize_morphism(&d).as_bytes());
            Ok(0)
        }
        Cmd::Factor { mode, bound, file } => {
            let f = read_morphism(&file)?;
            match mode {
                FactorMode::CofAfib => {
                    let r = factor_cof_contractible_at(&f, bound)?;
                    let _ = writeln!(out, "left factor:");
                    let _ = out.write_all(serialize_morphism(&r.g).as_bytes());
                    let _ = writeln!(out, "right factor:");
                    let _ = out.write_all(serialize_morphism(&r.h).as_bytes());
                    let _ = out.write_all(r.audit().as_bytes());
                    Ok(0)
                }
                FactorMode::AcofFib => {
                    let cx = endpoint_certificate(&f.source, "source", bound)?;
                    let cy = endpoint_certificate(&f.target, "target", bound)?;
                    let r = factor_acof_fib(&f, &cx, &cy, bound)?;
                    let _ = writeln!(out, "left factor:");
                    let _ = out.write_all(serialize_morphism(&r.k).as_bytes());
                    let _ = writeln!(out, "right factor:");
                    let _ = out.write_all(serialize_morphism(&r.q).as_bytes());
                    let _ = out.write_all(r.audit().as_bytes());
                    Ok(0)
                }
            }
        }
        Cmd::Descend { horn, bound, file } => {
            let (n, k) = horn
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| CliFail::Usage(format!("--horn wants `n,k`, got `{horn}`")))?;
            let f = read_morphism(&file)?;
            let cert = match kan_certificate(&f, 1) {
                CertificateResult::Certified(c) => c,
                CertificateResult::Failed(w) => {
                    return Err(CliFail::Math(format!(
                        "input is not certified: unfilled {}",
                        describe_key(&w.key)
                    )))
                }
            };
            let bd = bound.unwrap_or(3.min(n + 1));
            let dr = crate::descent::descent_d(&f, &cert, n, k, bd)?;
            let _ = out.write_all(serialize_morphism(&dr.df).as_bytes());
            match crate::descent::descent_pullback_check(&dr)? {
                crate::descent::PullbackCheck::Iso { .. } => {
                    let _ = writeln!(out, "pullback-check OK");
                    Ok(0)
                }
                crate::descent::PullbackCheck::Mismatch { dim, detail } => {
                    let _ = writeln!(out, "pullback-check FAILED at dimension {dim}: {detail}");
                    Ok(1)
                }
            }
        }
        Cmd::Suite {
            name,
            seed,
            trials,
            bound,
            out: dir,
        } => {
            let name = SuiteName::from_str(&name)
                .map_err(|_| CliFail::Usage(format!("unknown suite `{name}`")))?;
            let seed = seed
                .or_else(|| std::env::var("SIMHK_SEED").ok().and_then(|s| s.parse().ok()))
                .unwrap_or(0);
            let report = run_suite(name, seed, trials, bound);
            let _ = out.write_all(report.to_text().as_bytes());
            if let Some(dir) = &dir {
                std::fs::create_dir_all(dir).map_err(|e| {
                    CliFail::Usage(format!("cannot create {}: {e}", dir.display()))
                })?;
                for failure in &report.failures {
                    let single = SuiteReport {
                        failures: vec![failure.clone()],
                        ..report.clone()
                    };
                    let path = dir.join(format!("{name}-failure-{}.txt", failure.index));
                    std::fs::write(&path, single.to_text()).map_err(|e| {
                        CliFail::Usage(format!("cannot write {}: {e}", path.display()))
                    })?;
                }
            }
            if report.passed() {
                let _ = writeln!(out, "result: pass");
                Ok(0)
            } else {
                let _ = writeln!(out, "result: FAIL ({} failures)", report.failures.len());
                Ok(1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::identity_morphism;
    use std::io::Write as _;

    fn run(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = cli_run(args.iter().map(|s| s.to_string()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let path = dir.path().join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(text.as_bytes()).unwrap();
        path.to_string_lossy().into_owned()
    }

    #[test]
    fn build_simplex_matches_serialization() {
        let (code, text) = run(&["simhk", "build", "simplex", "2"]);
        assert_eq!(code, 0);
        assert_eq!(text, serialize_sset(&simplex(2)));
    }

    #[test]
    fn validate_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let good = write_temp(&dir, "good.sset", &serialize_sset(&simplex(2)));
        assert_eq!(run(&["simhk", "validate", &good]).0, 0);

        // Syntactically broken: a face line with garbage.
        let bad_syntax = write_temp(&dir, "bad1.sset", "cell 0 dim 0\nface nope\n");
        let (code, text) = run(&["simhk", "validate", &bad_syntax]);
        assert_eq!(code, 2, "{text}");

        // Parses but violates the face table: a vertex face of the
        // wrong dimension.
        let mut corrupt = serialize_sset(&simplex(2));
        corrupt = corrupt.replace("face 3 0 -> 1 [0]", "face 3 0 -> 6 [0,1,2]");
        let bad_semantics = write_temp(&dir, "bad2.sset", &corrupt);
        let (code, text) = run(&["simhk", "validate", &bad_semantics]);
        assert_eq!(code, 1, "{text}");

        let missing = dir.path().join("absent.sset");
        assert_eq!(
            run(&["simhk", "validate", missing.to_str().unwrap()]).0,
            2
        );
    }

    #[test]
    fn check_kan_on_interval_names_the_outer_horn() {
        let dir = tempfile::tempdir().unwrap();
        let interval = write_temp(&dir, "delta1.sset", &serialize_sset(&simplex(1)));
        let (code, text) = run(&["simhk", "check", "--kan", "--bound", "2", &interval]);
        assert_eq!(code, 1, "{text}");
        assert!(text.contains("horn dim 2"), "{text}");

        let points = write_temp(&dir, "points.sset", &serialize_sset(&discrete(2)));
        let (code, text) = run(&["simhk", "check", "--kan", "--bound", "2", &points]);
        assert_eq!(code, 0, "{text}");
    }

    #[test]
    fn check_flag_discipline() {
        let dir = tempfile::tempdir().unwrap();
        let obj = write_temp(&dir, "x.sset", &serialize_sset(&discrete(1)));
        assert_eq!(run(&["simhk", "check", &obj]).0, 2);
        assert_eq!(run(&["simhk", "check", "--kan", "--weq", &obj]).0, 2);
        assert_eq!(run(&["simhk", "check", "--cofibration", &obj]).0, 2);
    }

    #[test]
    fn check_cofibration_both_ways() {
        let dir = tempfile::tempdir().unwrap();
        let incl = write_temp(&dir, "incl.smor", &serialize_morphism(&cycle(2).1));
        assert_eq!(run(&["simhk", "check", "--cofibration", &incl]).0, 0);

        let fold = coproduct(&discrete(1), &discrete(1))
            .copair(
                &identity_morphism(&discrete(1)),
                &identity_morphism(&discrete(1)),
            )
            .unwrap();
        let fold_file = write_temp(&dir, "fold.smor", &serialize_morphism(&fold));
        let (code, text) = run(&["simhk", "check", "--cofibration", &fold_file]);
        assert_eq!(code, 1, "{text}");
        assert!(text.contains("collide"), "{text}");
    }

    #[test]
    fn check_weq_on_identity() {
        let dir = tempfile::tempdir().unwrap();
        let id = write_temp(
            &dir,
            "id.smor",
            &serialize_morphism(&identity_morphism(&discrete(2))),
        );
        let (code, text) = run(&["simhk", "check", "--weq", &id]);
        assert_eq!(code, 0, "{text}");
    }

    #[test]
    fn lift_finds_a_diagonal() {
        // Λ_1[2] ⊂ Δ[2] against the point projection of a discrete pair:
        // any vertex assignment lifts.
        let dir = tempfile::tempdir().unwrap();
        let (hobj, hincl) = horn(2, 1).unwrap();
        let p = to_point(&discrete(2));
        let top = {
            // Constant map to the first point.
            let tgt = discrete(2);
            let map = (0..hobj.n_cells())
                .map(|c| crate::sset::Element {
                    cell: 0,
                    epi: crate::simplex::SimplexMap::total_epi(hobj.dim_of(c)),
                })
                .collect();
            crate::sset::make_morphism(&hobj, &tgt, map).unwrap()
        };
        let bottom = to_point(&simplex(2));
        let files = [
            write_temp(&dir, "i.smor", &serialize_morphism(&hincl)),
            write_temp(&dir, "p.smor", &serialize_morphism(&p)),
            write_temp(&dir, "top.smor", &serialize_morphism(&top)),
            write_temp(&dir, "bottom.smor", &serialize_morphism(&bottom)),
        ];
        let (code, text) = run(&[
            "simhk", "lift", &files[0], &files[1], &files[2], &files[3],
        ]);
        assert_eq!(code, 0, "{text}");
        let d = crate::harness::format::parse_morphism(&text).unwrap();
        assert_eq!(*d.source, *simplex(2));
    }

    #[test]
    fn factor_acof_fib_on_identity() {
        let dir = tempfile::tempdir().unwrap();
        let id = write_temp(
            &dir,
            "id.smor",
            &serialize_morphism(&identity_morphism(&discrete(1))),
        );
        let (code, text) = run(&["simhk", "factor", "--mode", "acof-fib", &id]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("left factor:"), "{text}");
        assert!(text.contains("right factor:"), "{text}");
    }

    #[test]
    fn descend_projection_reports_ok() {
        let dir = tempfile::tempdir().unwrap();
        let (hobj, _) = horn(2, 1).unwrap();
        let f = product(&hobj, &discrete(2)).proj_x;
        let file = write_temp(&dir, "proj.smor", &serialize_morphism(&f));
        let (code, text) = run(&["simhk", "descend", "--horn", "2,1", &file]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("pullback-check OK"), "{text}");
        assert!(text.contains("begin morphism"), "{text}");
    }

    #[test]
    fn suite_command_runs_and_writes_reports() {
        let dir = tempfile::tempdir().unwrap();
        let out_dir = dir.path().join("reports");
        let (code, text) = run(&[
            "simhk",
            "suite",
            "--name",
            "right-cancel",
            "--seed",
            "3",
            "--trials",
            "6",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("suite right-cancel"), "{text}");
        assert!(text.contains("result: pass"), "{text}");
        let report = SuiteReport::parse(
            text.split("result:").next().unwrap(),
        )
        .unwrap();
        assert_eq!(report.trials, 6);
        assert!(run(&["simhk", "suite", "--name", "bogus"]).0 == 2);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(&["simhk", "no-such-command"]).0, 2);
        assert_eq!(run(&["simhk"]).0, 2);
        assert_eq!(run(&["simhk", "--help"]).0, 0);
    }
}

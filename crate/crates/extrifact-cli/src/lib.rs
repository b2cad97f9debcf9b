//! Command-line front end: build and load instance documents, run every
//! verification, and emit deterministic reports. Artifact-producing
//! commands print the artifact itself when no output path is given, so
//! commands compose through pipes; with `-o` the artifact goes to the file
//! and the report to stdout.

pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use extrifact_core::acceptance;
use extrifact_core::exactlin::Field;
use extrifact_core::excat::io::{load_presentation, serialize_presentation};
use extrifact_core::excat::{
    build_extended_category, build_module_category, shifted_label, Presentation,
};
use extrifact_core::factsys::{
    default_sample, factorize_deflation, factorize_inflation, orthogonal_side, torsion_to_fs,
    verify_fs, FactSystem, Side,
};
use extrifact_core::par::with_jobs;
use extrifact_core::recoll::{
    build_product_recollement, build_triangular_fixture, check_exactness_hypotheses,
    check_neg_ext_adjoint_iso, check_recollement, glue_fs, glue_torsion, load_recollement,
    recollement_to_json, AxiomStatus, RecollementData,
};
use extrifact_core::silting::{
    is_presilting, is_silting, presilting_violation, silted_pair, SiltingCandidate,
};
use extrifact_core::torsion::{
    enumerate_s_torsion, torsion_triangle, verify_s_torsion, CondStatus, SubcatPair,
};
use extrifact_core::{Error, Result};

use report::{Outcome, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Inflation,
    Deflation,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Inflation => Side::Inflation,
            SideArg::Deflation => Side::Deflation,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "extrifact",
    version,
    about = "Verification engine for torsion pairs and factorization systems on finite type-A categories"
)]
struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for enumeration and sampling (0 = library default)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Attach wall-clock timing to the report
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build a category presentation document
    Build(BuildArgs),
    /// Dualize a presentation document
    Dualize {
        cat: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// s-torsion pairs: verify, enumerate, canonical triangles
    #[command(subcommand)]
    Torsion(TorsionCmd),
    /// Factorization systems
    #[command(subcommand)]
    Fs(FsCmd),
    /// Factor a map through the torsion triangle of its cone
    Factorize {
        cat: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Coefficient matrix literal, or "auto" for canonical entries
        #[arg(long, default_value = "auto")]
        map: String,
        #[arg(long, value_enum, default_value_t = SideArg::Inflation)]
        side: SideArg,
    },
    /// Silting complexes and the pairs they cut out
    #[command(subcommand)]
    Silting(SiltingCmd),
    /// Recollements: axioms, hypotheses, gluing
    #[command(subcommand)]
    Recollement(RecollCmd),
    /// Run the full acceptance battery
    Selfcheck,
}

#[derive(Debug, Args)]
struct BuildArgs {
    /// Quiver type; only linearly oriented type A ("a_n") is available
    #[arg(long = "type")]
    kind: String,
    /// Number of vertices
    #[arg(long)]
    n: usize,
    /// Shift-window width; omit for the plain module category
    #[arg(long)]
    m: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum TorsionCmd {
    /// Check the three defining conditions of an s-torsion pair
    Verify {
        cat: PathBuf,
        #[arg(long)]
        pair: PathBuf,
    },
    /// List every s-torsion pair of the category
    Enumerate { cat: PathBuf },
    /// Canonical conflation of a torsion object
    Triangle {
        cat: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        object: String,
    },
}

#[derive(Debug, Subcommand)]
enum FsCmd {
    /// Factorization system induced by an s-torsion pair
    FromTorsion {
        cat: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify the factorization axioms over the exhaustive sample
    Verify {
        cat: PathBuf,
        #[arg(long)]
        system: PathBuf,
    },
    /// Factor a map through a stored system
    Factorize {
        cat: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value = "auto")]
        map: String,
    },
    /// Left-orthogonality of two maps, via their cone classes
    Orthogonal {
        cat: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, value_enum, default_value_t = SideArg::Inflation)]
        side: SideArg,
    },
}

#[derive(Debug, Subcommand)]
enum SiltingCmd {
    /// Presilting and silting tests for a complex literal
    Check { cat: PathBuf, complex: String },
    /// The s-torsion pair cut out by a silting complex
    Pair {
        cat: PathBuf,
        complex: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum RecollCmd {
    /// Check the recollement axioms
    Check { rec: PathBuf },
    /// Check the gluing hypotheses (exactness, projectives)
    Hypotheses { rec: PathBuf },
    /// Glue two component s-torsion pairs (or systems, with --side)
    Glue {
        rec: PathBuf,
        #[arg(long)]
        pair1: PathBuf,
        #[arg(long)]
        pair2: PathBuf,
        /// Glue induced factorization systems of this side instead
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Adjoint isomorphism of negative first extensions, both adjoint pairs
    LemmaIso { rec: PathBuf },
    /// Product recollement of two category documents
    Product {
        a: PathBuf,
        c: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The triangular-matrix fixture (axioms hold, i^! is not exact)
    Triangular {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Parses argv, dispatches and prints; the return value is the process
/// exit code: 0 pass, 1 failed check or internal problem, 2 input error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let started = Instant::now();
    let outcome = with_jobs(cli.jobs.unwrap_or(0), || dispatch(&cli.command));
    match outcome {
        Ok(None) => 0,
        Ok(Some(mut report)) => {
            if cli.timing {
                report.timing_ms = Some(started.elapsed().as_millis() as u64);
            }
            print_out(&render(&report, cli.format));
            if report.status() == "pass" {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let mut report = Report::new(echo(&cli.command));
            report.error = Some(e.to_string());
            if cli.timing {
                report.timing_ms = Some(started.elapsed().as_millis() as u64);
            }
            print_out(&render(&report, cli.format));
            match e {
                Error::Input(_) => 2,
                _ => 1,
            }
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            serde_json::to_string_pretty(&report.to_json()).expect("report is valid JSON")
        }
        Format::Markdown => report.to_markdown(),
    }
}

fn echo(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Build(_) => "build",
        Cmd::Dualize { .. } => "dualize",
        Cmd::Torsion(TorsionCmd::Verify { .. }) => "torsion verify",
        Cmd::Torsion(TorsionCmd::Enumerate { .. }) => "torsion enumerate",
        Cmd::Torsion(TorsionCmd::Triangle { .. }) => "torsion triangle",
        Cmd::Fs(FsCmd::FromTorsion { .. }) => "fs from-torsion",
        Cmd::Fs(FsCmd::Verify { .. }) => "fs verify",
        Cmd::Fs(FsCmd::Factorize { .. }) => "fs factorize",
        Cmd::Fs(FsCmd::Orthogonal { .. }) => "fs orthogonal",
        Cmd::Factorize { .. } => "factorize",
        Cmd::Silting(SiltingCmd::Check { .. }) => "silting check",
        Cmd::Silting(SiltingCmd::Pair { .. }) => "silting pair",
        Cmd::Recollement(RecollCmd::Check { .. }) => "recollement check",
        Cmd::Recollement(RecollCmd::Hypotheses { .. }) => "recollement hypotheses",
        Cmd::Recollement(RecollCmd::Glue { .. }) => "recollement glue",
        Cmd::Recollement(RecollCmd::LemmaIso { .. }) => "recollement lemma-iso",
        Cmd::Recollement(RecollCmd::Product { .. }) => "recollement product",
        Cmd::Recollement(RecollCmd::Triangular { .. }) => "recollement triangular",
        Cmd::Selfcheck => "selfcheck",
    }
}

fn dispatch(cmd: &Cmd) -> Result<Option<Report>> {
    match cmd {
        Cmd::Build(args) => cmd_build(args),
        Cmd::Dualize { cat, output } => {
            let p = load_cat(cat)?;
            let d = p.dualize()?;
            let mut report = Report::new("dualize");
            report.info("dualize", format!("{} objects", d.num_objects()));
            emit(serialize_presentation(&d), output.as_deref(), report)
        }
        Cmd::Torsion(sub) => cmd_torsion(sub).map(Some),
        Cmd::Fs(sub) => cmd_fs(sub),
        Cmd::Factorize {
            cat,
            pair,
            from,
            to,
            map,
            side,
        } => {
            let p = load_cat(cat)?;
            let pr = load_pair(&p, pair)?;
            cmd_factorize(&p, &pr, (*side).into(), from, to, map, "factorize").map(Some)
        }
        Cmd::Silting(sub) => cmd_silting(sub),
        Cmd::Recollement(sub) => cmd_recollement(sub),
        Cmd::Selfcheck => cmd_selfcheck().map(Some),
    }
}

fn field_from_env() -> Result<Field> {
    match std::env::var("EXTRIFACT_FIELD_CHAR") {
        Ok(s) => {
            let ch: u64 = s
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("EXTRIFACT_FIELD_CHAR {s:?} is not a number")))?;
            Field::new(ch)
        }
        Err(_) => Field::new(2),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{} is not JSON: {e}", path.display())))
}

fn load_cat(path: &Path) -> Result<Presentation> {
    load_presentation(&read_json(path)?)
}

fn load_pair(p: &Presentation, path: &Path) -> Result<SubcatPair> {
    SubcatPair::from_json(p, &read_json(path)?)
}

/// Artifact plumbing: with an output path the artifact is written there
/// and the report returned; without one the artifact itself is printed.
fn emit(doc: Value, output: Option<&Path>, mut report: Report) -> Result<Option<Report>> {
    let text = serde_json::to_string_pretty(&doc).expect("artifact is valid JSON");
    match output {
        Some(path) => {
            fs::write(path, text + "\n")
                .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
            report.info("write", path.display().to_string());
            Ok(Some(report))
        }
        None => {
            print_out(&text);
            Ok(None)
        }
    }
}

/// Downstream consumers may close the pipe early; that is not our error.
fn print_out(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn set(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(", "))
}

fn cond_finding(report: &mut Report, name: &str, st: CondStatus, fail_witness: String) {
    match st {
        CondStatus::Pass => report.push(name, Outcome::Pass, None),
        CondStatus::Fail => report.push(name, Outcome::Fail, Some(fail_witness)),
        CondStatus::Unchecked => report.push(
            name,
            Outcome::Info,
            Some("unchecked: needs a full-model presentation".into()),
        ),
    }
}

fn axiom_finding(report: &mut Report, name: &str, st: &AxiomStatus) {
    cond_finding(report, name, st.status, st.failures.join("; "));
}

fn cmd_build(args: &BuildArgs) -> Result<Option<Report>> {
    if args.kind != "a_n" {
        return Err(Error::input(format!(
            "unsupported --type {:?}; expected a_n",
            args.kind
        )));
    }
    if args.n == 0 {
        return Err(Error::input("--n must be at least 1"));
    }
    let field = field_from_env()?;
    let p = match args.m {
        None => build_module_category(field, args.n),
        Some(0) => return Err(Error::input("--m must be at least 1")),
        Some(m) => build_extended_category(field, args.n, m),
    };
    let mut report = Report::new("build");
    report.info(
        "build",
        format!(
            "{} objects over the {}-element field",
            p.num_objects(),
            field.characteristic()
        ),
    );
    emit(serialize_presentation(&p), args.output.as_deref(), report)
}

fn cmd_torsion(sub: &TorsionCmd) -> Result<Report> {
    match sub {
        TorsionCmd::Verify { cat, pair } => {
            let p = load_cat(cat)?;
            let pr = load_pair(&p, pair)?;
            let rep = verify_s_torsion(&p, &pr)?;
            let mut report = Report::new("torsion verify");
            report.info(
                "pair",
                format!(
                    "T = {}; F = {}",
                    set(&pr.t_labels(&p)),
                    set(&pr.f_labels(&p))
                ),
            );
            cond_finding(
                &mut report,
                "condition 1 (conflations)",
                rep.cond1,
                rep.cond1_failures
                    .iter()
                    .map(|&(x, cap)| format!("no conflation for {} within cap {cap}", p.label(x)))
                    .collect::<Vec<_>>()
                    .join("; "),
            );
            cond_finding(
                &mut report,
                "condition 2 (hom vanishing)",
                rep.cond2,
                rep.cond2_failures
                    .iter()
                    .map(|&(t, f)| format!("C({}, {}) != 0", p.label(t), p.label(f)))
                    .collect::<Vec<_>>()
                    .join("; "),
            );
            cond_finding(
                &mut report,
                "condition 3 (negative vanishing)",
                rep.cond3,
                rep.cond3_failures
                    .iter()
                    .map(|&(t, f)| format!("E^-1({}, {}) != 0", p.label(f), p.label(t)))
                    .collect::<Vec<_>>()
                    .join("; "),
            );
            if !rep.triangles.is_empty() {
                report.info("witness triangles", format!("{}", rep.triangles.len()));
            }
            Ok(report)
        }
        TorsionCmd::Enumerate { cat } => {
            let p = load_cat(cat)?;
            let pairs = enumerate_s_torsion(&p)?;
            let mut report = Report::new("torsion enumerate");
            report.info("enumeration", format!("{} pairs", pairs.len()));
            for (i, pr) in pairs.iter().enumerate() {
                report.info(
                    format!("pair {}", i + 1),
                    format!(
                        "T = {}; F = {}",
                        set(&pr.t_labels(&p)),
                        set(&pr.f_labels(&p))
                    ),
                );
            }
            Ok(report)
        }
        TorsionCmd::Triangle { cat, pair, object } => {
            let p = load_cat(cat)?;
            let pr = load_pair(&p, pair)?;
            let x = p.index_of(object)?;
            let tri = torsion_triangle(&p, x, &pr)?;
            let mut report = Report::new("torsion triangle");
            report.info(
                "triangle",
                format!(
                    "{} -> {} -> {}",
                    p.expr_label(&tri.a),
                    p.expr_label(&tri.b),
                    p.expr_label(&tri.c)
                ),
            );
            Ok(report)
        }
    }
}

fn cmd_fs(sub: &FsCmd) -> Result<Option<Report>> {
    match sub {
        FsCmd::FromTorsion {
            cat,
            pair,
            side,
            output,
        } => {
            let p = load_cat(cat)?;
            let pr = load_pair(&p, pair)?;
            let fs = torsion_to_fs(&p, &pr, (*side).into())?;
            let mut report = Report::new("fs from-torsion");
            report.info(
                "system",
                format!(
                    "{} side; T = {}; F = {}",
                    fs.side.as_str(),
                    set(&fs.pair.t_labels(&p)),
                    set(&fs.pair.f_labels(&p))
                ),
            );
            emit(fs.to_json(&p), output.as_deref(), report)
        }
        FsCmd::Verify { cat, system } => {
            let p = load_cat(cat)?;
            let fs = FactSystem::from_json(&p, &read_json(system)?)?;
            let rep = verify_fs(&p, &fs, &default_sample(&p))?;
            let mut report = Report::new("fs verify");
            report.info(
                "sample",
                format!(
                    "{} maps, {} in the ambient class",
                    rep.sample_size, rep.checked_maps
                ),
            );
            report.check(
                "defining pair",
                rep.pair_failures.is_empty(),
                none_if_empty(rep.pair_failures.join("; ")),
            );
            report.check(
                "axiom 1 (factorizations)",
                rep.axiom1_failures.is_empty(),
                none_if_empty(rep.axiom1_failures.join("; ")),
            );
            report.check(
                "axioms 2 and 3 (orthogonality)",
                rep.axiom23_failures.is_empty(),
                none_if_empty(rep.axiom23_failures.join("; ")),
            );
            Ok(Some(report))
        }
        FsCmd::Factorize {
            cat,
            system,
            from,
            to,
            map,
        } => {
            let p = load_cat(cat)?;
            let fs = FactSystem::from_json(&p, &read_json(system)?)?;
            cmd_factorize(&p, &fs.pair, fs.side, from, to, map, "fs factorize").map(Some)
        }
        FsCmd::Orthogonal {
            cat,
            left,
            right,
            side,
        } => {
            let p = load_cat(cat)?;
            let f = p.parse_morphism(left, "auto")?;
            let g = p.parse_morphism(right, "auto")?;
            let ok = orthogonal_side(&p, (*side).into(), &f, &g)?;
            let mut report = Report::new("fs orthogonal");
            report.check("orthogonal", ok, Some(format!("{left} against {right}")));
            Ok(Some(report))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_factorize(
    p: &Presentation,
    pair: &SubcatPair,
    side: Side,
    from: &str,
    to: &str,
    map: &str,
    command: &str,
) -> Result<Report> {
    let f = p.parse_morphism(&format!("{from} -> {to}"), map)?;
    let fact = match side {
        Side::Inflation => factorize_inflation(p, &f, pair)?,
        Side::Deflation => factorize_deflation(p, &f, pair)?,
    };
    let mut report = Report::new(command);
    let witness_word = match side {
        Side::Inflation => "cone",
        Side::Deflation => "cocone",
    };
    report.info(
        "left part",
        format!(
            "l: {} -> {} ({} {})",
            p.expr_label(&f.source),
            p.expr_label(&fact.k),
            witness_word,
            p.expr_label(&fact.cone_l)
        ),
    );
    report.info(
        "right part",
        format!(
            "r: {} -> {} ({} {})",
            p.expr_label(&fact.k),
            p.expr_label(&f.target),
            witness_word,
            p.expr_label(&fact.cone_r)
        ),
    );
    report.check(
        "composition",
        p.compose(&fact.l, &fact.r)? == f,
        Some("r after l returns the input".into()),
    );
    Ok(report)
}

fn cmd_silting(sub: &SiltingCmd) -> Result<Option<Report>> {
    match sub {
        SiltingCmd::Check { cat, complex } => {
            let p = load_cat(cat)?;
            let cand = SiltingCandidate::parse(&p, complex)?;
            let mut report = Report::new("silting check");
            report.info("candidate", cand.display());
            let violation = presilting_violation(&cand, cand.m() as i32 + 1);
            report.check(
                "presilting",
                is_presilting(&cand),
                violation.map(|(x, y, i)| {
                    format!(
                        "E^{i}({}, {}) != 0",
                        shifted_label(x.iv, x.shift, cand.n()),
                        shifted_label(y.iv, y.shift, cand.n())
                    )
                }),
            );
            report.check(
                "silting",
                is_silting(&cand),
                Some(format!("{} distinct indecomposable summands", {
                    let mut parts = cand.parts().to_vec();
                    parts.dedup();
                    parts.len()
                })),
            );
            Ok(Some(report))
        }
        SiltingCmd::Pair {
            cat,
            complex,
            output,
        } => {
            let p = load_cat(cat)?;
            let cand = SiltingCandidate::parse(&p, complex)?;
            let pair = silted_pair(&cand, &p)?;
            let mut report = Report::new("silting pair");
            report.info(
                "pair",
                format!(
                    "T = {}; F = {}",
                    set(&pair.t_labels(&p)),
                    set(&pair.f_labels(&p))
                ),
            );
            emit(pair.to_json(&p), output.as_deref(), report)
        }
    }
}

fn load_rec(path: &Path) -> Result<RecollementData> {
    load_recollement(&read_json(path)?)
}

fn cmd_recollement(sub: &RecollCmd) -> Result<Option<Report>> {
    match sub {
        RecollCmd::Check { rec } => {
            let r = load_rec(rec)?;
            let rep = check_recollement(&r)?;
            let mut report = Report::new("recollement check");
            axiom_finding(&mut report, "functor laws", &rep.functor_laws);
            axiom_finding(&mut report, "(R1) adjoint triples", &rep.r1);
            axiom_finding(&mut report, "(R2) image equals kernel", &rep.r2);
            axiom_finding(&mut report, "(R3) fully faithful", &rep.r3);
            axiom_finding(&mut report, "(R4) left exact sequence", &rep.r4);
            axiom_finding(&mut report, "(R5) right exact sequence", &rep.r5);
            Ok(Some(report))
        }
        RecollCmd::Hypotheses { rec } => {
            let r = load_rec(rec)?;
            let rep = check_exactness_hypotheses(&r)?;
            let mut report = Report::new("recollement hypotheses");
            axiom_finding(&mut report, "i^* exact", &rep.i_upper_exact);
            axiom_finding(&mut report, "i^! exact", &rep.i_shriek_exact);
            axiom_finding(
                &mut report,
                "i^! preserves projectives",
                &rep.i_shriek_preserves_projectives,
            );
            Ok(Some(report))
        }
        RecollCmd::Glue {
            rec,
            pair1,
            pair2,
            side,
            output,
        } => {
            let r = load_rec(rec)?;
            let p1 = SubcatPair::from_json(&r.a, &read_json(pair1)?)?;
            let p2 = SubcatPair::from_json(&r.c, &read_json(pair2)?)?;
            let mut report = Report::new("recollement glue");
            match side {
                None => {
                    let (glued, vrep) = glue_torsion(&r, &p1, &p2)?;
                    report.info(
                        "glued pair",
                        format!(
                            "T = {}; F = {}",
                            set(&glued.t_labels(&r.b)),
                            set(&glued.f_labels(&r.b))
                        ),
                    );
                    report.check("verification", vrep.ok(), None);
                    emit(glued.to_json(&r.b), output.as_deref(), report)
                }
                Some(side) => {
                    let side: Side = (*side).into();
                    let fs1 = torsion_to_fs(&r.a, &p1, side)?;
                    let fs2 = torsion_to_fs(&r.c, &p2, side)?;
                    let glued = glue_fs(&r, &fs1, &fs2, side)?;
                    report.info(
                        "glued system",
                        format!(
                            "{} side; T = {}; F = {}",
                            glued.side.as_str(),
                            set(&glued.pair.t_labels(&r.b)),
                            set(&glued.pair.f_labels(&r.b))
                        ),
                    );
                    emit(glued.to_json(&r.b), output.as_deref(), report)
                }
            }
        }
        RecollCmd::LemmaIso { rec } => {
            let r = load_rec(rec)?;
            let rep = check_neg_ext_adjoint_iso(&r)?;
            let mut report = Report::new("recollement lemma-iso");
            for side in [&rep.i_side, &rep.j_side] {
                match side.status {
                    CondStatus::Pass => report.push(
                        side.name,
                        Outcome::Pass,
                        Some(format!("{} object pairs compared", side.checked)),
                    ),
                    CondStatus::Fail => {
                        report.push(side.name, Outcome::Fail, Some(side.mismatches.join("; ")))
                    }
                    CondStatus::Unchecked => report.push(
                        side.name,
                        Outcome::Info,
                        Some(format!(
                            "hypotheses unmet: {}",
                            side.hypothesis_failures.join("; ")
                        )),
                    ),
                }
            }
            Ok(Some(report))
        }
        RecollCmd::Product { a, c, output } => {
            let pa = load_cat(a)?;
            let pc = load_cat(c)?;
            let r = build_product_recollement(&pa, &pc)?;
            let mut report = Report::new("recollement product");
            report.info(
                "product",
                format!("{} objects in the middle", r.b.num_objects()),
            );
            emit(recollement_to_json(&r), output.as_deref(), report)
        }
        RecollCmd::Triangular { output } => {
            let r = build_triangular_fixture(field_from_env()?);
            let mut report = Report::new("recollement triangular");
            report.info("fixture", "one-arrow triangular algebra".to_string());
            emit(recollement_to_json(&r), output.as_deref(), report)
        }
    }
}

fn cmd_selfcheck() -> Result<Report> {
    let mut report = Report::new("selfcheck");
    for res in acceptance::run_all() {
        let witness = if res.passed {
            Some(res.name.to_string())
        } else {
            Some(format!("{}: {}", res.name, res.failures.join("; ")))
        };
        report.check(format!("criterion {}", res.number), res.passed, witness);
    }
    Ok(report)
}

fn none_if_empty(s: String) -> Option<String> {
    if s.is_empty() {
        None
    } else {
        Some(s)
    }
}

//! Command-line front end: parse, evaluate, compile, decide, synthesize,
//! plot, and run the built-in corpus.
//!
//! Exit codes: 0 affirmative verdict, 1 negative verdict, 2 usage or parse
//! error, 3 internal invariant violation.

pub mod corpus;
pub mod svg;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use polyhoop_core::arith::{fmt_rat, parse_rat};
use polyhoop_core::decide::{
    admissible, entails, is_exact_presentation_poly, max_coexact_unifier,
    projectivity_report_poly, valid_identity, validity_counterexample, DecideError,
};
use polyhoop_core::geom::Polyhedron;
use polyhoop_core::io::{plfunction_to_json, polyhedron_from_json, polyhedron_to_json};
use polyhoop_core::oracle::Caps;
use polyhoop_core::pl::{compile, one_set, PlError};
use polyhoop_core::polygeo::covers_witness;
use polyhoop_core::synth1d::{synthesize_1d, SynthError};
use polyhoop_core::terms::{parse, Mode, Term, TermError};
use polyhoop_core::{Projectivity, Rule};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Wh,
    Mv,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Wh => Mode::Wh,
            ModeArg::Mv => Mode::Mv,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "polyhoop",
    about = "Exact polyhedral decision procedures for positive Lukasiewicz logic",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a term and print its canonical rendering
    Parse {
        term: String,
        #[arg(long, value_enum, default_value = "wh")]
        mode: ModeArg,
    },
    /// Evaluate a term at a rational point (comma-separated coordinates)
    Eval {
        term: String,
        #[arg(long)]
        at: String,
        #[arg(long, value_enum, default_value = "wh")]
        mode: ModeArg,
    },
    /// Compile a term to its piecewise-linear function (JSON)
    Compile {
        term: String,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "wh")]
        mode: ModeArg,
    },
    /// Compute the one-set of a term as a polyhedron (JSON)
    Oneset {
        term: String,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "wh")]
        mode: ModeArg,
    },
    /// Decide validity of `t = 1` (one term) or `t = u` (two terms)
    Valid {
        term: String,
        other: Option<String>,
        #[arg(long, value_enum, default_value = "wh")]
        mode: ModeArg,
    },
    /// Decide deducibility: premises (;-separated) entail the conclusion
    Entails {
        premises: String,
        conclusion: String,
        #[arg(long, value_enum, default_value = "wh")]
        mode: ModeArg,
    },
    /// Decide admissibility of premises (;-separated) => conclusions (;-separated)
    Admissible {
        premises: String,
        conclusions: String,
        #[arg(long, value_enum, default_value = "wh")]
        mode: ModeArg,
    },
    /// Compute the maximal coexact unifier of the premises (wh mode)
    Unifier {
        premises: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Is the presented hoop exact? Input: a wh term or --poly FILE
    Exact {
        term: Option<String>,
        #[arg(long)]
        poly: Option<PathBuf>,
    },
    /// Projectivity report. Input: a wh term or --poly FILE
    Projective {
        term: Option<String>,
        #[arg(long)]
        poly: Option<PathBuf>,
    },
    /// Synthesize a 1-variable term with the given one-set (--poly FILE)
    Synth1d {
        #[arg(long)]
        poly: PathBuf,
    },
    /// Render terms (1 variable) or --poly FILE (dimension <= 2) as SVG
    Plot {
        terms: Vec<String>,
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "wh")]
        mode: ModeArg,
    },
    /// Run the built-in corpus of worked examples
    Corpus,
}

/// Reads caps overrides from POLYHOOP_CAPS, e.g. `grid=500000,subst=20000`.
pub fn caps_from_env() -> Caps {
    let mut caps = Caps::default();
    if let Ok(spec) = std::env::var("POLYHOOP_CAPS") {
        for part in spec.split(',') {
            if let Some((k, v)) = part.split_once('=') {
                if let Ok(n) = v.trim().parse::<u128>() {
                    match k.trim() {
                        "grid" => caps.grid_points = n,
                        "subst" => caps.subst_terms = n,
                        _ => {}
                    }
                }
            }
        }
    }
    caps
}

enum CmdError {
    Usage(String),
    Internal(String),
}

impl From<TermError> for CmdError {
    fn from(e: TermError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

impl From<PlError> for CmdError {
    fn from(e: PlError) -> Self {
        match e {
            PlError::Internal(_) => CmdError::Internal(e.to_string()),
            _ => CmdError::Usage(e.to_string()),
        }
    }
}

impl From<DecideError> for CmdError {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::Pl(PlError::Internal(_)) => CmdError::Internal(e.to_string()),
            _ => CmdError::Usage(e.to_string()),
        }
    }
}

impl From<SynthError> for CmdError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Internal(_) | SynthError::Pl(PlError::Internal(_)) => {
                CmdError::Internal(e.to_string())
            }
            _ => CmdError::Usage(e.to_string()),
        }
    }
}

/// Terms are accepted inline or from a file via `@path`.
fn read_term_text(input: &str) -> Result<String, CmdError> {
    if let Some(path) = input.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| CmdError::Usage(format!("cannot read {path}: {e}")))
    } else {
        Ok(input.to_string())
    }
}

fn parse_term(input: &str, mode: Mode) -> Result<Term, CmdError> {
    let text = read_term_text(input)?;
    Ok(parse(&text, mode)?)
}

fn parse_terms(input: &str, mode: Mode) -> Result<Vec<Term>, CmdError> {
    let text = read_term_text(input)?;
    text.split(';').map(|s| parse(s, mode).map_err(CmdError::from)).collect()
}

fn load_polyhedron(path: &PathBuf) -> Result<Polyhedron, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CmdError::Usage(format!("bad JSON: {e}")))?;
    polyhedron_from_json(&value).map_err(|e| CmdError::Usage(e.to_string()))
}

fn write_or_print(output: &Option<PathBuf>, content: &str) -> Result<bool, CmdError> {
    match output {
        Some(path) => {
            fs::write(path, content)
                .map_err(|e| CmdError::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(true)
        }
        None => {
            println!("{content}");
            Ok(false)
        }
    }
}

fn verdict(word: &str, witness: Option<serde_json::Value>) -> String {
    match witness {
        Some(w) => format!("verdict={word} witness={w}"),
        None => format!("verdict={word} witness=-"),
    }
}

fn point_json(p: &[polyhoop_core::Rat]) -> serde_json::Value {
    json!(p.iter().map(fmt_rat).collect::<Vec<_>>())
}

fn input_polyhedron(term: Option<String>, poly: Option<PathBuf>) -> Result<Polyhedron, CmdError> {
    match (term, poly) {
        (Some(s), None) => {
            let t = parse_term(&s, Mode::Wh)?;
            let f = compile(&t, t.arity())?;
            Ok(one_set(&f))
        }
        (None, Some(path)) => load_polyhedron(&path),
        _ => Err(CmdError::Usage("give exactly one of TERM or --poly FILE".into())),
    }
}

fn run_cmd(cli: Cli) -> Result<i32, CmdError> {
    match cli.cmd {
        Cmd::Parse { term, mode } => {
            let t = parse_term(&term, mode.into())?;
            println!(
                "{}",
                verdict("parsed", Some(json!({"term": t.to_string(), "arity": t.arity()})))
            );
            Ok(EXIT_YES)
        }
        Cmd::Eval { term, at, mode } => {
            let t = parse_term(&term, mode.into())?;
            let point: Vec<polyhoop_core::Rat> = at
                .split(',')
                .map(|s| parse_rat(s.trim()).map_err(|e| CmdError::Usage(e.to_string())))
                .collect::<Result<_, _>>()?;
            let v = polyhoop_core::terms::eval_term(&t, &point)?;
            println!("{}", verdict("value", Some(json!({ "value": fmt_rat(&v) }))));
            Ok(EXIT_YES)
        }
        Cmd::Compile { term, arity, output, mode } => {
            let t = parse_term(&term, mode.into())?;
            let n = arity.unwrap_or_else(|| t.arity());
            let f = compile(&t, n)?;
            let doc = plfunction_to_json(&f).map_err(|e| CmdError::Internal(e.to_string()))?;
            let wrote = write_or_print(&output, &serde_json::to_string(&doc).unwrap())?;
            if wrote {
                println!("{}", verdict("compiled", Some(json!({"cells": f.cells().len()}))));
            }
            Ok(EXIT_YES)
        }
        Cmd::Oneset { term, arity, output, mode } => {
            let t = parse_term(&term, mode.into())?;
            let n = arity.unwrap_or_else(|| t.arity());
            let f = compile(&t, n)?;
            let os = one_set(&f);
            let doc = polyhedron_to_json(&os);
            let wrote = write_or_print(&output, &serde_json::to_string(&doc).unwrap())?;
            if wrote {
                println!(
                    "{}",
                    verdict("one-set", Some(json!({"polytopes": os.polytopes().len()})))
                );
            }
            Ok(EXIT_YES)
        }
        Cmd::Valid { term, other, mode } => {
            let mode: Mode = mode.into();
            let t = parse_term(&term, mode)?;
            let u = match other {
                Some(s) => parse_term(&s, mode)?,
                None => Term::One,
            };
            if valid_identity(&t, &u, mode)? {
                println!("{}", verdict("valid", None));
                Ok(EXIT_YES)
            } else {
                let cx = validity_counterexample(&t, &u)?;
                let w = cx.map(|p| json!({ "point": point_json(&p) }));
                println!("{}", verdict("invalid", w));
                Ok(EXIT_NO)
            }
        }
        Cmd::Entails { premises, conclusion, mode } => {
            let mode: Mode = mode.into();
            let prems = parse_terms(&premises, mode)?;
            let concl = parse_term(&conclusion, mode)?;
            if entails(&prems, &concl, mode)? {
                println!("{}", verdict("entailed", None));
                Ok(EXIT_YES)
            } else {
                // witness: a point of the premise one-set where the conclusion dips
                let folded = prems
                    .iter()
                    .cloned()
                    .reduce(polyhoop_core::terms::meet)
                    .expect("nonempty premises");
                let n = folded.max_var().max(concl.max_var()).max(1);
                let fp = compile(&folded, n)?;
                let fu = compile(&concl, n)?;
                let w = covers_witness(&fu, &one_set(&fp))
                    .map_err(DecideError::from)?
                    .map(|p| json!({ "point": point_json(&p) }));
                println!("{}", verdict("not_entailed", w));
                Ok(EXIT_NO)
            }
        }
        Cmd::Admissible { premises, conclusions, mode } => {
            let mode: Mode = mode.into();
            let prems = parse_terms(&premises, mode)?;
            let concls = parse_terms(&conclusions, mode)?;
            let rule = Rule::new(prems, concls, mode)?;
            let v = admissible(&rule)?;
            let unifier = polyhedron_to_json(&v.max_unifier);
            if v.admissible {
                println!(
                    "{}",
                    verdict(
                        "admissible",
                        Some(json!({
                            "conclusion": v.witness_conclusion,
                            "max_unifier": unifier,
                        }))
                    )
                );
                Ok(EXIT_YES)
            } else {
                println!("{}", verdict("not_admissible", Some(json!({ "max_unifier": unifier }))));
                Ok(EXIT_NO)
            }
        }
        Cmd::Unifier { premises, output } => {
            let prems = parse_terms(&premises, Mode::Wh)?;
            let u = max_coexact_unifier(&prems)?;
            let doc = polyhedron_to_json(&u);
            let wrote = write_or_print(&output, &serde_json::to_string(&doc).unwrap())?;
            if wrote {
                println!(
                    "{}",
                    verdict("unifier", Some(json!({"polytopes": u.polytopes().len()})))
                );
            }
            Ok(EXIT_YES)
        }
        Cmd::Exact { term, poly } => {
            let p = input_polyhedron(term, poly)?;
            if is_exact_presentation_poly(&p)? {
                println!("{}", verdict("exact", None));
                Ok(EXIT_YES)
            } else {
                let r = polyhoop_core::polygeo::shape_report(&p);
                println!(
                    "{}",
                    verdict(
                        "not_exact",
                        Some(json!({
                            "connected": r.connected,
                            "strongly_regular": r.strongly_regular,
                        }))
                    )
                );
                Ok(EXIT_NO)
            }
        }
        Cmd::Projective { term, poly } => {
            let p = input_polyhedron(term, poly)?;
            let (v, r) = projectivity_report_poly(&p)?;
            let w = json!({
                "connected": r.connected,
                "dimension": r.dimension,
                "tree1d": r.tree1d,
                "strongly_regular": r.strongly_regular,
            });
            println!("{}", verdict(&v.to_string(), Some(w)));
            Ok(if v == Projectivity::Projective { EXIT_YES } else { EXIT_NO })
        }
        Cmd::Synth1d { poly } => {
            let p = load_polyhedron(&poly)?;
            let t = synthesize_1d(&p)?;
            println!("{}", verdict("synthesized", Some(json!({ "term": t.to_string() }))));
            Ok(EXIT_YES)
        }
        Cmd::Plot { terms, poly, output, mode } => {
            let content = match (&poly, terms.is_empty()) {
                (Some(path), _) => {
                    let p = load_polyhedron(path)?;
                    if p.dim() > 2 {
                        return Err(CmdError::Usage("not plottable: dimension > 2".into()));
                    }
                    svg::emit_polyhedron_svg(&p)
                }
                (None, false) => {
                    let mut fns = Vec::new();
                    for s in &terms {
                        let t = parse_term(s, mode.into())?;
                        if t.max_var() > 1 {
                            return Err(CmdError::Usage(
                                "not plottable: function plots need 1 variable".into(),
                            ));
                        }
                        fns.push((t.to_string(), compile(&t, 1)?));
                    }
                    let refs: Vec<(String, &polyhoop_core::PLFunction)> =
                        fns.iter().map(|(s, f)| (s.clone(), f)).collect();
                    svg::emit_function_svg(&refs)
                }
                (None, true) => {
                    return Err(CmdError::Usage("plot needs terms or --poly".into()));
                }
            };
            fs::write(&output, &content)
                .map_err(|e| CmdError::Usage(format!("cannot write {}: {e}", output.display())))?;
            println!(
                "{}",
                verdict("plotted", Some(json!({"path": output.display().to_string()})))
            );
            Ok(EXIT_YES)
        }
        Cmd::Corpus => {
            let caps = caps_from_env();
            let outcomes = corpus::run_corpus(&caps);
            let mut ok = true;
            for o in &outcomes {
                if o.pass {
                    println!("corpus {}: PASS", o.name);
                } else {
                    ok = false;
                    println!("corpus {}: FAIL ({})", o.name, o.detail);
                }
            }
            println!(
                "{}",
                verdict(
                    if ok { "corpus-pass" } else { "corpus-fail" },
                    Some(json!({"entries": outcomes.len()}))
                )
            );
            Ok(if ok { EXIT_YES } else { EXIT_NO })
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version exit 0; real usage errors exit 2
            let code = if e.exit_code() == 0 { EXIT_YES } else { EXIT_USAGE };
            let _ = e.print();
            return code;
        }
    };
    match run_cmd(cli) {
        Ok(code) => code,
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CmdError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

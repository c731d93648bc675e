//! `germlab`: classify map-germs, enumerate Morin points of unfoldings and
//! regenerate the class tables.
//!
//! Exit codes: 0 success, 1 verify mismatch, 2 parse or input error,
//! 3 unrecognized germ.

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use germlab::label::LabelClaim;
use germlab::perturb::{
    locus_discrepancies, morin_points_with, sweep, Discrepancy, ParamGrid, PerturbationReport, SweepReport,
    UnfoldingFamily, UnfoldingSpec,
};
use germlab::tables::{all_tables, Tables};
use germlab::label::LabelReport;
use germlab::{classify, parse_germ, render, Classification, ClassLabel, ParseError, SignSlot};
use serde::Serialize;

/// Appends a line to the output buffer.
macro_rules! out {
    ($o:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        writeln!($o, $($arg)*).expect("writing to a String");
    }};
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNRECOGNIZED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "germlab", version, about = "Exact A-isotopy classification of polynomial map-germs")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Isolation precision: coordinates are refined to width below 2^-bits.
    #[arg(
        long,
        global = true,
        env = "GERMLAB_PRECISION",
        default_value_t = germlab::perturb::DEFAULT_BITS,
        value_parser = clap::value_parser!(u32).range(20..=120)
    )]
    precision: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a germ and print its label with every evaluated criterion.
    Classify(GermInput),
    /// Classify a germ and compare against a claimed class.
    Verify {
        #[command(flatten)]
        input: GermInput,
        /// Claimed class, e.g. "butterfly e1=-1 e2=-1".
        #[arg(long = "class", short = 'c')]
        claim: String,
    },
    /// Locate the n-Morin points of a versal unfolding.
    Perturb(PerturbArgs),
    /// Regenerate the class-count and perturbation tables.
    Tables,
}

#[derive(Args, Debug)]
struct GermInput {
    /// Germ text, e.g. "x1^3 + x1*x2 ; x2".
    #[arg(allow_hyphen_values = true)]
    germ: Option<String>,
    /// Read the germ from a file, or "-" for stdin.
    #[arg(long, short = 'i', conflicts_with = "germ")]
    input: Option<String>,
}

#[derive(Args, Debug)]
struct PerturbArgs {
    #[arg(long)]
    family: UnfoldingFamily,
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
    n: u8,
    /// Degree of q̄ (family A only).
    #[arg(long)]
    l: Option<usize>,
    /// Parameter values "u0,u1,…"; defaults to zeros.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// Sweep a grid "lo:hi:step,…" over the parameters instead.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
}

/// Failure that ends the run with a given exit code.
struct Exit {
    code: u8,
    message: String,
}

impl Exit {
    fn input(message: impl Into<String>) -> Self {
        Exit {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<germlab::Error> for Exit {
    fn from(e: germlab::Error) -> Self {
        Exit::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut o = String::new();
    let code = match run(&cli, &mut o) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    // A closed pipe (`germlab ... | head`) is not an error.
    let _ = std::io::stdout().lock().write_all(o.as_bytes());
    ExitCode::from(code)
}

fn run(cli: &Cli, o: &mut String) -> Result<u8, Exit> {
    match &cli.command {
        Command::Classify(input) => cmd_classify(cli, input, o),
        Command::Verify { input, claim } => cmd_verify(cli, input, claim, o),
        Command::Perturb(args) => cmd_perturb(cli, args, o),
        Command::Tables => cmd_tables(cli, o),
    }
}

fn read_input(input: &GermInput) -> Result<String, Exit> {
    match (&input.germ, input.input.as_deref()) {
        (Some(text), _) => Ok(text.clone()),
        (None, Some("-")) => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Exit::input(format!("reading stdin: {e}")))?;
            Ok(s)
        }
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| Exit::input(format!("{path}: {e}"))),
        (None, None) => Err(Exit::input("no germ given (pass it inline or with --input)")),
    }
}

/// Error message with the offending line and a caret under the span.
fn describe_parse_error(text: &str, e: &ParseError) -> String {
    let line = text.lines().nth(e.line - 1).unwrap_or("");
    let width = text[e.span.0.min(text.len())..e.span.1.min(text.len())]
        .chars()
        .take_while(|&c| c != '\n')
        .count()
        .max(1);
    format!(
        "parse error at {e}\n  {line}\n  {}{}",
        " ".repeat(e.col - 1),
        "^".repeat(width)
    )
}

struct Loaded {
    germ: germlab::MapGerm,
    rendered: String,
}

fn load(input: &GermInput) -> Result<Loaded, Exit> {
    let text = read_input(input)?;
    let parsed = parse_germ(&text).map_err(|e| Exit::input(describe_parse_error(&text, &e)))?;
    Ok(Loaded {
        rendered: render(&parsed.germ, &parsed.vars),
        germ: parsed.germ,
    })
}

#[derive(Serialize)]
struct CriterionOut {
    name: String,
    value: String,
}

#[derive(Serialize)]
struct ClassifyOut {
    germ: String,
    dims: (usize, usize),
    #[serde(flatten)]
    label: LabelReport,
    classifier: &'static str,
    criteria: Vec<CriterionOut>,
    notes: Vec<String>,
}

impl ClassifyOut {
    fn new(loaded: &Loaded, c: &Classification) -> Self {
        ClassifyOut {
            germ: loaded.rendered.clone(),
            dims: c.label.dims,
            label: c.label.report(),
            classifier: c.classifier,
            criteria: c
                .criteria
                .iter()
                .map(|k| CriterionOut {
                    name: k.name.clone(),
                    value: k.value.to_string(),
                })
                .collect(),
            notes: c.notes.clone(),
        }
    }

    fn print_human(&self, o: &mut String) {
        out!(o, "germ         {}", self.germ);
        out!(o, "dimensions   R^{} -> R^{}", self.dims.0, self.dims.1);
        out!(o, "class        {}", self.label.label);
        if let Some(nf) = &self.label.normal_form {
            out!(o, "normal form  {nf}");
        }
        out!(o, "classifier   {}", self.classifier);
        out!(o, "criteria");
        for c in &self.criteria {
            out!(o, "  {} = {}", c.name, c.value);
        }
        for n in &self.notes {
            out!(o, "note: {n}");
        }
    }
}

fn emit<T: Serialize>(value: &T, o: &mut String) {
    out!(o, "{}", serde_json::to_string_pretty(value).expect("serializable report"));
}

fn cmd_classify(cli: &Cli, input: &GermInput, o: &mut String) -> Result<u8, Exit> {
    let loaded = load(input)?;
    let c = classify(&loaded.germ)?;
    let out = ClassifyOut::new(&loaded, &c);
    if cli.json {
        emit(&out, o);
    } else {
        out.print_human(o);
    }
    Ok(if c.is_recognized() { 0 } else { EXIT_UNRECOGNIZED })
}

#[derive(Serialize)]
struct DiffRow {
    name: String,
    observed: Option<String>,
    expected: Option<String>,
}

#[derive(Serialize)]
struct VerifyOut {
    pass: bool,
    claim: String,
    classified: ClassifyOut,
    /// Normal form of the claimed class, when one exists in these dimensions.
    reference: Option<String>,
    diff: Vec<DiffRow>,
}

fn slot(e: Option<i8>) -> SignSlot {
    e.map_or(SignSlot::Irrelevant, SignSlot::of)
}

/// Criteria of the germ against those of the claimed class's normal form.
fn criteria_diff(c: &Classification, reference: &Classification) -> Vec<DiffRow> {
    let value = |cl: &Classification, name: &str| {
        cl.criteria.iter().find(|k| k.name == name).map(|k| k.value.to_string())
    };
    let mut names: Vec<&str> = c.criteria.iter().map(|k| k.name.as_str()).collect();
    for k in &reference.criteria {
        if !names.contains(&k.name.as_str()) {
            names.push(&k.name);
        }
    }
    names
        .into_iter()
        .filter_map(|name| {
            let (observed, expected) = (value(c, name), value(reference, name));
            (observed != expected).then(|| DiffRow {
                name: name.to_string(),
                observed,
                expected,
            })
        })
        .collect()
}

fn cmd_verify(cli: &Cli, input: &GermInput, claim_text: &str, o: &mut String) -> Result<u8, Exit> {
    let claim: LabelClaim = claim_text
        .parse()
        .map_err(|e| Exit::input(format!("invalid class: {e}")))?;
    let loaded = load(input)?;
    let c = classify(&loaded.germ)?;
    let pass = c.label.matches(&claim);
    let claimed = ClassLabel::new(claim.family, (slot(claim.e1), slot(claim.e2)), c.label.dims);
    let (reference, diff) = match (&claimed.normal_form, pass) {
        (Some(nf), false) => (Some(nf.to_string()), criteria_diff(&c, &classify(nf)?)),
        (nf, _) => (nf.as_ref().map(|g| g.to_string()), Vec::new()),
    };
    let out = VerifyOut {
        pass,
        claim: claim_text.to_string(),
        classified: ClassifyOut::new(&loaded, &c),
        reference,
        diff,
    };
    if cli.json {
        emit(&out, o);
    } else {
        out!(o, "{}  claimed {}, classified {}", if pass { "PASS" } else { "FAIL" }, out.claim, c.label);
        if !pass {
            if let Some(r) = &out.reference {
                out!(o, "reference    {r}");
            }
            out!(o, "{:<40} {:>14} {:>14}", "criterion", "observed", "expected");
            for d in &out.diff {
                let show = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
                out!(o, "{:<40} {:>14} {:>14}", d.name, show(&d.observed), show(&d.expected));
            }
        }
    }
    Ok(if pass { 0 } else { EXIT_MISMATCH })
}

fn parse_params(text: &str) -> Result<Vec<germlab::Rat>, Exit> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Exit::input(format!("invalid parameter `{}`", s.trim()))))
        .collect()
}

#[derive(Serialize)]
struct PerturbOut<'a> {
    #[serde(flatten)]
    report: &'a PerturbationReport,
    discrepancies: &'a [Discrepancy],
}

#[derive(Serialize)]
struct SweepOut<'a> {
    #[serde(flatten)]
    sweep: &'a SweepReport,
    discrepancies: &'a [Discrepancy],
}

fn print_report(r: &PerturbationReport, o: &mut String) {
    out!(o, "unfolding    family {} n={} params {}", r.spec.family, r.spec.n, join(&r.spec.params));
    out!(o, "genotype     {}", r.genotype);
    out!(o, "equation     {}", r.equation);
    out!(o, "points       {} (bound {}){}", r.count, r.c_f_bound, if r.stable { "" } else { ", not stable" });
    for (i, p) in r.points.iter().enumerate() {
        let at: Vec<String> = p
            .location
            .iter()
            .map(|c| match &c.exact {
                Some(v) => format!("{}={v}", c.name),
                None if c.lo_decimal == c.hi_decimal => format!("{}≈{}", c.name, c.lo_decimal),
                None => format!("{}∈[{}, {}]", c.name, c.lo_decimal, c.hi_decimal),
            })
            .collect();
        out!(o, 
            "  #{}  {}  {}  inv table {:?} classifier {:?}  {}",
            i + 1,
            at.join(" "),
            p.label,
            p.table_invariant,
            p.classifier_invariant,
            if p.verified { "verified" } else { "MISMATCH" }
        );
    }
    for n in &r.notes {
        out!(o, "note: {n}");
    }
}

fn join(v: &[germlab::Rat]) -> String {
    v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
}

fn print_discrepancies(d: &[Discrepancy], o: &mut String) {
    for d in d {
        out!(o, 
            "printed formula differs (family {} n={} {}): printed {}, derived {}",
            d.family, d.n, d.item, d.printed, d.derived
        );
    }
}

fn cmd_perturb(cli: &Cli, args: &PerturbArgs, o: &mut String) -> Result<u8, Exit> {
    let n = args.n as usize;
    let count = UnfoldingSpec::param_count(args.family, args.l);
    let params = match &args.params {
        Some(p) => parse_params(p)?,
        None => vec![germlab::Rat::zero(); count],
    };
    let spec = UnfoldingSpec::new(args.family, n, args.l, params)?;
    let discrepancies = match args.family {
        UnfoldingFamily::A => Vec::new(),
        f => locus_discrepancies(f, n)?,
    };
    if let Some(grid) = &args.grid {
        let grid: ParamGrid = grid.parse()?;
        let s = sweep(&spec, &grid, cli.precision)?;
        if cli.json {
            emit(&SweepOut {
                sweep: &s,
                discrepancies: &discrepancies,
            }, o);
        } else {
            out!(o, 
                "sweep        family {} n={} over {} grid points",
                s.family,
                s.n,
                s.reports.len()
            );
            out!(o, "max points   {} (bound {}, {})", s.max_count, s.c_f, if s.attained { "attained" } else { "not attained" });
            if let Some(a) = &s.argmax {
                out!(o, "first argmax {}", join(a));
            }
            out!(o, "unstable     {}", s.unstable_points);
            out!(o, "unverified   {}", s.unverified_points);
            print_discrepancies(&discrepancies, o);
        }
        return Ok(0);
    }
    let r = morin_points_with(&spec, cli.precision)?;
    if cli.json {
        emit(&PerturbOut {
            report: &r,
            discrepancies: &discrepancies,
        }, o);
    } else {
        print_report(&r, o);
        print_discrepancies(&discrepancies, o);
    }
    Ok(0)
}

fn print_tables(t: &Tables, o: &mut String) {
    out!(o, "A-isotopy classes of k-Morin singularities in C^inf(n,n)");
    out!(o, "{:>3} {:>3}  {:<12} {:>2}", "n", "k", "name", "#");
    for r in &t.class_counts {
        out!(o, "{:>3} {:>3}  {:<12} {:>2}", r.n, r.k, r.name, r.count);
    }
    for (name, cols) in [("A", &t.family_a), ("B", &t.family_b), ("C", &t.family_c)] {
        out!(o, "");
        out!(o, "family {name}");
        for c in cols {
            let l = c.l.map(|l| format!(" l={l}")).unwrap_or_default();
            out!(o, 
                "  n={}{l}  params {}  points {}/{}  inv {}  signs {:?}  {}",
                c.n,
                join(&c.params),
                c.count,
                c.c_f,
                c.inv,
                c.classifier_signs,
                if c.all_verified { "agrees" } else { "differs from table" }
            );
        }
    }
    out!(o, "");
    for i in &t.family_b_identities {
        out!(o, 
            "family B n={} printed parametrization: identities {}",
            i.n,
            if i.holds { "hold".to_string() } else { format!("fail ({})", i.residuals.join("; ")) }
        );
    }
    print_discrepancies(&t.discrepancies, o);
}

fn cmd_tables(cli: &Cli, o: &mut String) -> Result<u8, Exit> {
    let t = all_tables(cli.precision)?;
    if cli.json {
        emit(&t, o);
    } else {
        print_tables(&t, o);
    }
    Ok(0)
}

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tomo_core::bounds::{Applicability, BoundEntry, Direction};
use tomo_core::certificate::{check_certificate, parse_certificate, render_certificate};
use tomo_core::oracle::{verify_all, BoxDims, EnumSpec, Fault, Mode, VerifyOptions};
use tomo_core::pairfile::{parse_pair, render_pair_with_comments};
use tomo_core::render::{render_ascii, render_pbm};
use tomo_core::{
    canonicalize, decompose, equalize, report, Canonical, Error, FamilySpec, InstancePair,
};

/// Exit codes. Anything not listed is an I/O failure (1).
mod code {
    pub const IO: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const VIOLATED: u8 = 3;
    pub const NOT_UNIQUE: u8 = 4;
    pub const SIZE: u8 = 5;
    pub const GUARD: u8 = 6;
}

#[derive(Parser)]
#[command(
    name = "tomo",
    version,
    about = "Staircases and stability bounds for uniquely determined binary images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance of one of the extremal families.
    Gen {
        #[command(subcommand)]
        family: Family,
        /// Write to this file instead of stdout.
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Print metrics and the bound table for a pair (in canonical order).
    Analyze { path: PathBuf },
    /// Decompose F1 △ F2 into staircases and write a certificate.
    Decompose {
        path: PathBuf,
        /// Certificate output file; stdout if omitted.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Equalize |F2| to |F1| before decomposing.
        #[arg(long)]
        equalize: bool,
    },
    /// Exhaustively check every theorem on small instances.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_cells: usize,
        /// Box for F2, as ROWSxCOLS.
        #[arg(long = "box", default_value = "6x6", value_parser = parse_box)]
        dims: BoxDims,
        #[arg(long, default_value = "general", value_parser = parse_mode)]
        mode: Mode,
        /// Run past the enumeration guard.
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        serial: bool,
        /// Write the first counterexample here as a pair file.
        #[arg(long)]
        counterexample_out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Draw a pair as an ASCII grid or two PBM bitmaps.
    Render {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Validate a certificate against a pair file.
    CheckCert {
        pair: PathBuf,
        cert: PathBuf,
        /// The certificate was made with `decompose --equalize`.
        #[arg(long)]
        equalize: bool,
    },
}

#[derive(Subcommand, Clone, Copy)]
enum Family {
    Example1 {
        #[arg(long)]
        m: u32,
    },
    Example2 {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
    },
    Example3 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: usize,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Ascii,
    Pbm,
}

fn parse_box(s: &str) -> Result<BoxDims, String> {
    let (r, c) = s.split_once('x').ok_or("expected ROWSxCOLS, e.g. 5x5")?;
    let num = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| format!("bad dimension {t:?}"))
    };
    Ok(BoxDims {
        rows: num(r)?,
        cols: num(c)?,
    })
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotUnique | Error::NotCanonical => code::NOT_UNIQUE,
            Error::SizeMismatch { .. } => code::SIZE,
            Error::GuardExceeded { .. } => code::GUARD,
            _ => code::PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type Outcome = Result<(String, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(code::IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(code::IO, format!("{}: {e}", path.display())))
}

fn read_pair(path: &Path) -> Result<InstancePair, Failure> {
    parse_pair(&read(path)?).map_err(|e| fail(code::PARSE, format!("{}: {e}", path.display())))
}

/// Canonical order with a non-empty F1.
fn load_canonical(path: &Path) -> Result<Canonical, Failure> {
    let pair = read_pair(path)?;
    Ok(canonicalize(pair.f1(), pair.f2())?)
}

fn order_line(c: &Canonical) -> &'static str {
    if c.row_perm.is_identity() && c.col_perm.is_identity() {
        "order: as given"
    } else {
        "order: relabeled to canonical (line sums of F1 descending)"
    }
}

fn prepare(c: Canonical, equalize_first: bool) -> Result<InstancePair, Failure> {
    c.pair.check_canonical_unique()?;
    let m = c.pair.metrics();
    if m.f1_size == m.f2_size {
        return Ok(c.pair);
    }
    if !equalize_first {
        return Err(fail(
            code::SIZE,
            format!(
                "|F1| = {} and |F2| = {} differ; rerun with --equalize",
                m.f1_size, m.f2_size
            ),
        ));
    }
    Ok(equalize(&c.pair)?)
}

fn gen(family: Family, out: Option<&Path>) -> Outcome {
    let spec = match family {
        Family::Example1 { m } => FamilySpec::Example1 { m },
        Family::Example2 { k, m } => FamilySpec::Example2 { k, m },
        Family::Example3 { n, alpha } => FamilySpec::Example3 { n, alpha },
    };
    let pair = spec.generate()?;
    let m = pair.metrics();
    let comments = [
        spec.to_string(),
        format!("alpha {} p {} |F1| {}", m.alpha, m.p, m.f1_size),
    ];
    let text = render_pair_with_comments(&pair, &comments);
    match out {
        Some(path) => {
            write(path, &text)?;
            Ok((String::new(), 0))
        }
        None => Ok((text, 0)),
    }
}

fn entry_line(e: &BoundEntry) -> String {
    let rel = match e.direction {
        Direction::Upper => '≤',
        Direction::Lower => '≥',
    };
    let status = match (e.applicability, e.holds) {
        (Applicability::Asserted, true) => "OK",
        (Applicability::Asserted, false) => "VIOLATED",
        (Applicability::Conditional, true) => "OK (cond)",
        (Applicability::Conditional, false) => "fails (cond)",
        (Applicability::Informational, true) => "holds (info)",
        (Applicability::Informational, false) => "fails (info)",
    };
    format!(
        "{:<18}{:<10}{} {rel} {} {status}",
        e.name, e.quantity, e.measured, e.value
    )
}

fn analyze(path: &Path) -> Outcome {
    let c = load_canonical(path)?;
    let m = *c.pair.metrics();
    let mut out = String::new();
    let u = m.u().map_or_else(|| "-".to_string(), |u| u.to_string());
    writeln!(out, "alpha {} p {} u {}", m.alpha, m.p, u).unwrap();
    writeln!(out, "a {} b {}", m.a, m.b).unwrap();
    writeln!(out, "|F1| {} |F2| {}", m.f1_size, m.f2_size).unwrap();
    writeln!(out, "|F1△F2| {}", m.sym_diff).unwrap();
    writeln!(out, "{}", order_line(&c)).unwrap();
    if c.pair.check_canonical_unique().is_err() {
        out.push_str("unique: no\nbounds skipped\n");
        return Ok((out, code::NOT_UNIQUE));
    }
    out.push_str("unique: yes\n");
    let r = report(&c.pair)?;
    if r.entries.is_empty() {
        out.push_str("alpha = 0: F1 = F2, no bounds to check\n");
        return Ok((out, 0));
    }
    writeln!(out, "{:<18}{:<10}check", "bound", "quantity").unwrap();
    for e in &r.entries {
        writeln!(out, "{}", entry_line(e)).unwrap();
    }
    let violated = r.violations().count();
    writeln!(out, "{violated} violated").unwrap();
    Ok((out, if violated == 0 { 0 } else { code::VIOLATED }))
}

fn decompose_cmd(path: &Path, cert: Option<&Path>, equalize_first: bool) -> Outcome {
    let c = load_canonical(path)?;
    let order = order_line(&c);
    let pair = prepare(c, equalize_first)?;
    let d = decompose(&pair)?;
    let text = render_certificate(&d);
    let mut out = format!("staircases {}\n{order}\n", d.len());
    match cert {
        Some(p) => write(p, &text)?,
        None => out.push_str(&text),
    }
    Ok((out, 0))
}

fn check_cert(pair_path: &Path, cert_path: &Path, equalize_first: bool) -> Outcome {
    let pair = prepare(load_canonical(pair_path)?, equalize_first)?;
    let cert = parse_certificate(&read(cert_path)?)
        .map_err(|e| fail(code::PARSE, format!("{}: {e}", cert_path.display())))?;
    match check_certificate(pair.f1(), pair.f2(), &cert) {
        Ok(n) => Ok((format!("certificate ok: {n} staircases\n"), 0)),
        Err(e) => Ok((format!("certificate rejected: {e}\n"), code::VIOLATED)),
    }
}

fn verify(spec: EnumSpec, opts: VerifyOptions, cex_out: Option<&Path>) -> Outcome {
    let summary = verify_all(&spec, &opts)?;
    let mut out = summary.to_string();
    if let Some(c) = &summary.first_counterexample {
        let comments = [format!(
            "counterexample: {} at f1 #{} f2 #{}",
            c.check, c.rank.0, c.rank.1
        )];
        let text = render_pair_with_comments(&c.pair, &comments);
        match cex_out {
            Some(p) => {
                write(p, &text)?;
                writeln!(out, "counterexample written to {}", p.display()).unwrap();
            }
            None => out.push_str(&text),
        }
    }
    Ok((
        out,
        if summary.is_clean() {
            0
        } else {
            code::VIOLATED
        },
    ))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen { family, out } => gen(family, out.as_deref()),
        Command::Analyze { path } => analyze(&path),
        Command::Decompose {
            path,
            cert,
            equalize,
        } => decompose_cmd(&path, cert.as_deref(), equalize),
        Command::Verify {
            max_cells,
            dims,
            mode,
            allow_large,
            serial,
            counterexample_out,
            inject_fault,
        } => verify(
            EnumSpec {
                max_cells,
                dims,
                mode,
            },
            VerifyOptions {
                parallel: !serial,
                allow_large,
                fault: inject_fault.then_some(Fault::DropStaircasePoint),
            },
            counterexample_out.as_deref(),
        ),
        Command::Render { path, format } => {
            let pair = read_pair(&path)?;
            let text = match format {
                Format::Ascii => render_ascii(&pair),
                Format::Pbm => render_pbm(&pair),
            };
            Ok((text, 0))
        }
        Command::CheckCert {
            pair,
            cert,
            equalize,
        } => check_cert(&pair, &cert, equalize),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, status)) => {
            print!("{text}");
            ExitCode::from(status)
        }
        Err(f) => {
            eprintln!("tomo: {}", f.message);
            if f.code == code::GUARD {
                eprintln!("tomo: pass --allow-large to run anyway");
            }
            ExitCode::from(f.code)
        }
    }
}

//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a requested computation has no answer
//! (no witness, cap reached, undecided classification, failed catalog
//! check), 2 on bad input.

mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

pub use format::{parse_manifold, parse_ring, serialize_manifold, serialize_ring, FormatError};

use crate::bounds::{cuplength_nilpotency, tc_lower_bound_with, zero_divisor_nilpotency, BoundsError, Witness, DEFAULT_MAX_K};
use crate::catalog::{catalog_check, catalog_entries, find_entry, CatalogEntry};
use crate::classify::{check_poincare_duality, classify_theorem2, ClassifyError};
use crate::graded::{base_change, GradedRing};
use crate::kunneth::SquareRing;
use crate::scalars::CoefficientRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "smalltc", version, about = "Zero-divisor cup-length bounds for topological complexity")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a ring file.
    Validate { file: PathBuf },
    /// Basis, Betti numbers and duality check of a ring file.
    Info { file: PathBuf },
    /// Nilpotency of the zero-divisor ideal.
    Zcl {
        file: PathBuf,
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_K)]
        max_k: usize,
    },
    /// Nilpotency of the positive-degree ideal.
    Cuplength { file: PathBuf },
    /// TC and cat lower bounds, optionally after base change from Z.
    TcBound {
        file: PathBuf,
        #[arg(long, value_parser = CoefficientRing::parse)]
        coeff: Option<CoefficientRing>,
    },
    /// Run the classifier on a manifold file.
    Classify { file: PathBuf },
    /// Built-in manifolds.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
    Check,
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::KCapExceeded { .. } => Failure::Compute(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Undecided(_) | ClassifyError::Bounds(BoundsError::KCapExceeded { .. }) => {
                Failure::Compute(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Key/value report printed as `key value` (text) or `key<TAB>value` (tsv).
struct Report<'a> {
    format: OutputFormat,
    out: &'a mut dyn Write,
}

impl Report<'_> {
    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = match self.format {
            OutputFormat::Text => writeln!(self.out, "{key} {value}"),
            OutputFormat::Tsv => writeln!(self.out, "{key}\t{value}"),
        };
    }

    fn text(&mut self, line: impl std::fmt::Display) {
        if self.format == OutputFormat::Text {
            let _ = writeln!(self.out, "{line}");
        }
    }

    fn witness(&mut self, w: &Witness) {
        self.kv("witness_factors", w.describe_factors());
        self.kv("witness_product", &w.product);
    }
}

/// Runs the tool with `args` (including the program name) against the
/// process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with(args, &mut out, &mut err)
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let mut report = Report { format: cli.format, out };
    let result = match cli.command {
        Command::Validate { file } => validate(&file, &mut report),
        Command::Info { file } => info(&file, &mut report),
        Command::Zcl { file, witness, max_k } => zcl(&file, witness, max_k, &mut report),
        Command::Cuplength { file } => cuplength(&file, &mut report),
        Command::TcBound { file, coeff } => tc_bound(&file, coeff, &mut report),
        Command::Classify { file } => classify(&file, &mut report),
        Command::Catalog { action } => catalog(action, &mut report, err),
    };
    let _ = report.out.flush();
    match result {
        Ok(()) => 0,
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_ring(path: &Path) -> Result<Arc<GradedRing>, Failure> {
    parse_ring(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn validate(file: &Path, r: &mut Report) -> Outcome {
    let ring = load_ring(file)?;
    r.kv("ring", ring.name());
    r.kv("valid", "yes");
    Ok(())
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn info(file: &Path, r: &mut Report) -> Outcome {
    let ring = load_ring(file)?;
    r.kv("ring", ring.name());
    r.kv("coeff", ring.coeff());
    r.kv("formal_dim", ring.formal_dim().map_or("-".to_string(), |m| m.to_string()));
    r.kv("basis_size", ring.dim());
    r.kv("basis", ring.basis().iter().map(|b| format!("{}:{}", b.label, b.degree)).collect::<Vec<_>>().join(" "));
    r.kv("betti", join(ring.betti_numbers()));
    r.kv("nonzero_products", ring.nonzero_products().count());
    let field = if ring.coeff().is_field() {
        Some(Arc::clone(&ring))
    } else {
        base_change(&ring, CoefficientRing::Rationals).ok()
    };
    let pd = match field.as_deref().filter(|_| ring.formal_dim().is_some()) {
        Some(f) => match check_poincare_duality(f) {
            Ok(rep) if rep.holds => "holds".to_string(),
            Ok(rep) => match rep.first_failure() {
                Some(k) => format!("fails in degree {k}"),
                None => format!("fails: top degree has dimension {}", rep.top_dim),
            },
            Err(e) => format!("not checked: {e}"),
        },
        None => "not checked".to_string(),
    };
    r.kv("poincare_duality", pd);
    Ok(())
}

fn zcl(file: &Path, want_witness: bool, max_k: usize, r: &mut Report) -> Outcome {
    let ring = load_ring(file)?;
    let sq = SquareRing::new(&ring).map_err(|e| Failure::Input(e.to_string()))?;
    let (zcl, witness) = zero_divisor_nilpotency(&sq, max_k)?;
    r.kv("ring", ring.name());
    r.kv("coeff", ring.coeff());
    r.kv("zcl", zcl);
    if want_witness {
        match &witness {
            Some(w) => {
                r.text(format!("witness {w}"));
                r.witness(w);
            }
            None => return Err(Failure::Compute("no nonzero product of zero divisors exists".into())),
        }
    }
    Ok(())
}

fn cuplength(file: &Path, r: &mut Report) -> Outcome {
    let ring = load_ring(file)?;
    let (nil, w) = cuplength_nilpotency(&ring);
    r.kv("ring", ring.name());
    r.kv("coeff", ring.coeff());
    r.kv("cuplength", nil);
    r.kv("cat_lower_bound", nil);
    if let Some(w) = w {
        r.kv("cup_witness_factors", w.labels.join(","));
        r.kv("cup_witness_product", &w.product);
    }
    Ok(())
}

fn tc_bound(file: &Path, coeff: Option<CoefficientRing>, r: &mut Report) -> Outcome {
    let mut ring = load_ring(file)?;
    if let Some(c) = coeff.filter(|&c| c != ring.coeff()) {
        ring = base_change(&ring, c).map_err(|e| Failure::Input(e.to_string()))?;
    }
    let b = tc_lower_bound_with(&ring, DEFAULT_MAX_K)?;
    r.kv("ring", &b.ring_name);
    r.kv("coeff", b.coeff);
    r.kv("zcl", b.zcl);
    r.kv("tc_lower_bound", b.tc_lower_bound);
    r.kv("cuplength", b.cuplength_nil);
    r.kv("cat_lower_bound", b.cat_lower_bound);
    if let Some(w) = &b.witness {
        r.witness(w);
    }
    Ok(())
}

fn classify(file: &Path, r: &mut Report) -> Outcome {
    let text = read(file)?;
    let data = parse_manifold(&text, file.parent()).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let v = classify_theorem2(&data)?;
    r.kv("manifold", &data.name);
    r.kv("verdict", v.outcome);
    r.kv("tc_floor", v.tc_floor);
    if let Some(w) = &v.witness {
        r.kv("witness_coeff", v.witness_coeff.expect("witness comes with its ring"));
        r.witness(w);
    }
    r.kv("reason", &v.reason);
    Ok(())
}

fn catalog(action: CatalogAction, r: &mut Report, err: &mut dyn Write) -> Outcome {
    match action {
        CatalogAction::List => {
            for e in catalog_entries() {
                match r.format {
                    OutputFormat::Tsv => r.kv(e.name(), e.data.dimension()),
                    OutputFormat::Text => r.text(format!("{:<10} dim {:>2}  {}", e.name(), e.data.dimension(), e.source_note)),
                }
            }
            Ok(())
        }
        CatalogAction::Show { name } => {
            let e = find_entry(&name).ok_or_else(|| Failure::Input(format!("no catalog entry named `{name}`")))?;
            show(&e, r)
        }
        CatalogAction::Check => {
            let report = catalog_check();
            for e in &report.entries {
                r.kv(&e.name, if e.passed() { "PASS" } else { "FAIL" });
                for f in &e.failures {
                    let _ = writeln!(err, "{}: {f}", e.name);
                }
            }
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Compute(format!("{} catalog entries failed", report.failed().count())))
            }
        }
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or("-".to_string(), |x| x.to_string())
}

fn show(e: &CatalogEntry, r: &mut Report) -> Outcome {
    let verdict = e.expected_verdict.map_or("-".to_string(), |v| v.to_string());
    let zcl = e.expected_zcl.iter().map(|(c, z)| format!("{c}={z}")).collect::<Vec<_>>().join(",");
    match r.format {
        OutputFormat::Tsv => {
            r.kv("name", e.name());
            r.kv("dimension", e.data.dimension());
            r.kv("known_tc", opt(e.known_tc));
            r.kv("known_cat", opt(e.known_cat));
            r.kv("expected_zcl", zcl);
            r.kv("expected_verdict", verdict);
            r.kv("note", &e.source_note);
        }
        OutputFormat::Text => {
            let body = serialize_manifold(&e.data)?;
            r.text(format!("# known_tc {}", opt(e.known_tc)));
            r.text(format!("# known_cat {}", opt(e.known_cat)));
            r.text(format!("# expected_zcl {zcl}"));
            r.text(format!("# expected_verdict {verdict}"));
            r.text(format!("# {}", e.source_note));
            r.text(body.trim_end());
        }
    }
    Ok(())
}

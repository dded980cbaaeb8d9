//! Command dispatch for the `qkflat` binary, kept in a library so tests can
//! drive it without spawning processes.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qkflat_core::analysis::Analysis;
use qkflat_core::document::{self, StructureDocument};
use qkflat_core::fixtures::EXAMPLE_NAMES;
use qkflat_core::report::{render_text, report_json, report_value};
use qkflat_core::sampler::{random_structure_search, SearchConfig, SearchSummary};
use qkflat_core::theorems::all_verdicts;
use qkflat_core::{Classification, Error, HermitianTriple};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

const SYNOPSIS: &str = "\
usage: qkflat validate <file>
       qkflat classify <file>
       qkflat report <file> [--format text|json]
       qkflat theorems <file> [--witness-dir DIR]
       qkflat example <name> [--emit]
       qkflat search --dim D --samples N --seed S [--workers W] [--format text|json] [--witness-dir DIR]";

#[derive(Parser, Debug)]
#[command(name = "qkflat", version, about = "Exact checks for left-invariant almost Hermitian structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a structure document.
    Validate { file: PathBuf },
    /// Print the integrable / Kähler / almost-Kähler / quasi-Kähler flags.
    Classify { file: PathBuf },
    /// Full curvature and connection report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate every theorem check; exit 3 on a counterexample.
    Theorems {
        file: PathBuf,
        #[arg(long, default_value = ".")]
        witness_dir: PathBuf,
    },
    /// Describe a built-in structure, or print its document with --emit.
    Example {
        name: String,
        #[arg(long)]
        emit: bool,
    },
    /// Seeded random search for counterexamples.
    Search {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Worker threads; 0 uses every available core.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value = ".")]
        witness_dir: PathBuf,
        /// Skip the structural identity checks on each sample.
        #[arg(long)]
        no_structural: bool,
    },
}

/// Exit code plus what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn invalid(e: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(e.to_string()),
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("{e}\n{SYNOPSIS}\n") },
            }
        }
    };
    match cli.command {
        Command::Validate { file } => with_document(&file, |doc, triple| {
            Outcome::ok(format!("ok: {} (dim {}, {} nonzero brackets)\n", doc.name, triple.dim(), doc.brackets.len()))
        }),
        Command::Classify { file } => with_document(&file, |_, triple| {
            Outcome::ok(classification_text(Analysis::new(triple.clone()).classification()))
        }),
        Command::Report { file, format } => with_document(&file, |doc, triple| match format {
            Format::Json => Outcome::ok(report_json(doc, triple)),
            Format::Text => Outcome::ok(render_text(&report_value(doc, triple))),
        }),
        Command::Theorems { file, witness_dir } => with_document(&file, |doc, triple| theorems(doc, triple, &witness_dir)),
        Command::Example { name, emit } => example(&name, emit),
        Command::Search { dim, samples, seed, workers, format, witness_dir, no_structural } => {
            let config = SearchConfig { dim, samples, seed, workers, structural: !no_structural };
            search(&config, format, &witness_dir)
        }
    }
}

fn with_document(path: &Path, f: impl FnOnce(&StructureDocument, &HermitianTriple) -> Outcome) -> Outcome {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::invalid(format!("cannot read {}: {e}", path.display())),
    };
    match document::load(&text) {
        Ok((doc, triple)) => f(&doc, &triple),
        Err(e) => Outcome::invalid(e),
    }
}

fn class_name(c: Classification) -> &'static str {
    if c.kahler {
        "kahler"
    } else if c.almost_kahler {
        "almost_kahler"
    } else if c.quasi_kahler {
        "quasi_kahler"
    } else if c.integrable {
        "integrable"
    } else {
        "general"
    }
}

fn classification_text(c: Classification) -> String {
    format!(
        "class: {}\nintegrable: {}\nkahler: {}\nalmost_kahler: {}\nquasi_kahler: {}\n",
        class_name(c),
        c.integrable,
        c.kahler,
        c.almost_kahler,
        c.quasi_kahler
    )
}

fn write_witness(dir: &Path, doc: &StructureDocument) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.counterexample.json", doc.name));
    fs::write(&path, doc.emit())?;
    Ok(path)
}

fn theorems(doc: &StructureDocument, triple: &HermitianTriple, witness_dir: &Path) -> Outcome {
    let a = Analysis::new(triple.clone());
    let verdicts = all_verdicts(&a);
    let mut out = String::new();
    for v in &verdicts {
        let status = match (v.hypotheses_met, v.conclusion_holds) {
            (false, _) => "vacuous",
            (true, true) => "holds",
            (true, false) => "COUNTEREXAMPLE",
        };
        out.push_str(&format!("{}: {status}\n", v.statement));
    }
    if !verdicts.iter().any(|v| v.is_counterexample()) {
        return Outcome::ok(out);
    }
    match write_witness(witness_dir, doc) {
        Ok(path) => {
            out.push_str(&format!("witness: {}\n", path.display()));
            Outcome { code: EXIT_COUNTEREXAMPLE, stdout: out, stderr: String::new() }
        }
        Err(e) => Outcome {
            code: EXIT_COUNTEREXAMPLE,
            stdout: out,
            stderr: format!("error: cannot write witness: {e}\n"),
        },
    }
}

fn example(name: &str, emit: bool) -> Outcome {
    let doc = match document::builtin_example(name) {
        Ok(d) => d,
        Err(e @ Error::UnknownExample(_)) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {e}\navailable: {}\n", EXAMPLE_NAMES.join(", ")),
            }
        }
        Err(e) => return Outcome::invalid(e),
    };
    if emit {
        return Outcome::ok(doc.emit());
    }
    let triple = doc.to_triple().expect("built-in examples are valid");
    let c = Analysis::new(triple.clone()).classification();
    Outcome::ok(format!(
        "name: {}\ndim: {}\nnonzero brackets: {}\n{}",
        doc.name,
        triple.dim(),
        doc.brackets.len(),
        classification_text(c)
    ))
}

fn summary_text(s: &SearchSummary) -> String {
    let mut out = format!(
        "dim: {}\nsamples: {}\nseed: {}\nquasi_kahler: {}\nalmost_kahler: {}\nintegrable: {}\nhermitian_flat: {}\n\
         almost_kahler_flat_pattern: {}\nheisenberg_rediscovered: {}\nstructural_cases: {}\nstructural_failures: {}\n",
        s.dim,
        s.samples,
        s.seed,
        s.quasi_kahler,
        s.almost_kahler,
        s.integrable,
        s.hermitian_flat,
        s.almost_kahler_flat_pattern,
        s.heisenberg.rediscovered,
        s.structural_cases,
        s.structural_failures,
    );
    for (id, t) in &s.statements {
        out.push_str(&format!("{id}: {}/{} hold\n", t.conclusion_holds, t.hypotheses_met));
    }
    out.push_str(&format!("counterexamples: {}\n", s.counterexamples.len()));
    out
}

fn search(config: &SearchConfig, format: Format, witness_dir: &Path) -> Outcome {
    let summary = match random_structure_search(config) {
        Ok(s) => s,
        Err(e @ Error::NotApplicable(_)) => {
            return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n{SYNOPSIS}\n") }
        }
        Err(e) => return Outcome::invalid(e),
    };
    let mut stdout = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!(summary)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => summary_text(&summary),
    };
    if summary.counterexamples.is_empty() {
        return Outcome::ok(stdout);
    }
    let mut stderr = String::new();
    for c in &summary.counterexamples {
        let written = document::parse_value(&c.document).map_err(|e| e.to_string()).and_then(|doc| {
            write_witness(witness_dir, &doc).map_err(|e| e.to_string())
        });
        match written {
            Ok(path) => stdout.push_str(&format!("witness: {} ({})\n", path.display(), c.failures.join(", "))),
            Err(e) => stderr.push_str(&format!("error: cannot write witness for sample {}: {e}\n", c.index)),
        }
    }
    Outcome { code: EXIT_COUNTEREXAMPLE, stdout, stderr }
}

//! The `dgdeform` command line. Exit codes: 0 success, 1 a mathematical
//! finding (verification failed, obstructed, not trivializable), 2 bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cochain::{CochainComplex, SolveOutcome};
use crate::deform::{
    deform_to_order, obstruction, trivialize, DeformError, LiftStrategy, MapSeries,
};
use crate::dsl::{self, ErrorKind, LoadedComplex};
use crate::family::{
    minimal_truncation, verify_infinite, verify_linear, verify_theorem3, verify_theorem4, Family,
    FamilySpec, Variant,
};
use crate::field::FieldSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dgdeform",
    version,
    about = "Deformations of differential graded modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LiftsArg {
    /// Use the lifts listed in the file, solving for orders it does not list.
    File,
    /// Solve every lift with free variables set to zero.
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    All,
    Polynomial,
    Obstructed,
    Linear,
    Infinite,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a file and check that `d` squares to zero.
    Check { file: PathBuf },
    /// Cohomology of the endomorphism cochain complex in the given degrees.
    Cohomology {
        file: PathBuf,
        #[arg(long = "p", required = true, allow_negative_numbers = true)]
        p: Vec<i64>,
    },
    /// Obstruction O_k of the file's deformation block.
    Obstruction {
        file: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Extend the file's infinitesimal order by order.
    Deform {
        file: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "file")]
        lifts: LiftsArg,
    },
    /// Gauge the file's deformation away order by order.
    Trivialize {
        file: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Write a member of the example family as a `.dgm` file.
    PaperFamily {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        #[arg(long)]
        truncate: Option<i64>,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the example family clause by clause.
    VerifyPaper {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        variant: VariantArg,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long)]
        truncate: Option<i64>,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
        .map_err(|e: crate::family::FamilyError| e.to_string())
}

/// Result of one invocation before it is written out.
struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(msg: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Runs one invocation, writing the report and diagnostics to the given sinks.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli.command),
        Err(e) if e.use_stderr() => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: e.render().to_string(),
        },
        Err(e) => Outcome::ok(e.render().to_string()),
    };
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stderr.write_all(outcome.stderr.as_bytes());
    outcome.code
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Check { file } => check(&file),
        Command::Cohomology { file, p } => with_complex(&file, |c| cohomology(c, &p)),
        Command::Obstruction { file, order } => with_complex(&file, |c| obstruction_cmd(c, order)),
        Command::Deform { file, order, lifts } => with_complex(&file, |c| deform(c, order, lifts)),
        Command::Trivialize { file, order } => with_complex(&file, |c| trivialize_cmd(c, order)),
        Command::PaperFamily {
            n,
            variant,
            truncate,
            field,
            out,
        } => paper_family(n, variant, truncate, field, out),
        Command::VerifyPaper {
            n,
            variant,
            field,
            truncate,
        } => verify_paper(n, variant, field, truncate),
    }
}

fn read_doc(file: &PathBuf) -> Result<dsl::Document, Outcome> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Outcome::input_error(format!("{}: {e}", file.display())))?;
    dsl::parse(&text).map_err(|e| Outcome::input_error(format!("{}: {e}", file.display())))
}

fn with_complex(file: &PathBuf, f: impl FnOnce(&LoadedComplex) -> Outcome) -> Outcome {
    let doc = match read_doc(file) {
        Ok(d) => d,
        Err(o) => return o,
    };
    match dsl::load_complex(&doc) {
        Ok(c) => f(&c),
        Err(e) => Outcome::input_error(format!("{}: {e}", file.display())),
    }
}

fn check(file: &PathBuf) -> Outcome {
    let doc = match read_doc(file) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let module = doc.module();
    let mut out = String::new();
    let degrees = module.degrees();
    let _ = writeln!(
        out,
        "module {}: dimension {}, field {}, degrees {}",
        module.name(),
        module.dim(),
        doc.field(),
        match (degrees.first(), degrees.last()) {
            (Some(lo), Some(hi)) => format!("{lo}..{hi}"),
            _ => "none".into(),
        }
    );
    let names: Vec<&str> = doc.maps().iter().map(|(n, _)| n.as_str()).collect();
    let _ = writeln!(out, "maps: {}", names.join(", "));
    if let Some(entries) = doc.deformation() {
        let orders: Vec<String> = entries.iter().map(|(k, n)| format!("{k}:{n}")).collect();
        let _ = writeln!(out, "deformation: {}", orders.join(", "));
    }
    match dsl::load_complex(&doc) {
        Ok(_) => {
            out.push_str("d^2 = 0\n");
            Outcome::ok(out)
        }
        Err(e) if matches!(e.kind, ErrorKind::NotADifferential(_)) => {
            let _ = writeln!(out, "{e}");
            Outcome {
                code: EXIT_FINDING,
                stdout: out,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome::input_error(format!("{}: {e}", file.display())),
    }
}

fn cohomology(c: &LoadedComplex, ps: &[i64]) -> Outcome {
    let cx = CochainComplex::endomorphisms(c.dg.clone());
    let mut out = String::new();
    for &p in ps {
        let h = cx.cohomology(p);
        let _ = writeln!(
            out,
            "H^{p} dim={} (cocycles {}, coboundaries {})",
            h.dim_h, h.dim_cocycles, h.dim_coboundaries
        );
        for r in &h.representatives {
            let _ = writeln!(out, "  {r}");
        }
    }
    Outcome::ok(out)
}

fn lifts_through(c: &LoadedComplex, order: usize) -> Vec<crate::gmap::GradedMap> {
    let module = c.dg.module();
    let mut lifts = c.lifts.clone();
    lifts.resize(
        order.max(lifts.len()),
        crate::gmap::GradedMap::zero(module, module, -1),
    );
    lifts.truncate(order);
    lifts
}

/// Failures of the file's own data are findings; anything else is bad input.
fn deform_failure(e: DeformError) -> Outcome {
    match e {
        DeformError::RelationsViolated { .. } | DeformError::InfinitesimalNotCocycle(_) => {
            Outcome {
                code: EXIT_FINDING,
                stdout: format!("{e}\n"),
                stderr: String::new(),
            }
        }
        other => Outcome::input_error(other),
    }
}

fn obstruction_cmd(c: &LoadedComplex, order: usize) -> Outcome {
    let lifts = lifts_through(c, order);
    let o = match obstruction(&c.dg, &lifts) {
        Ok(o) => o,
        Err(e) => return deform_failure(e),
    };
    let cx = CochainComplex::endomorphisms(c.dg.clone());
    let mut out = format!("O_{order} = {o}\n");
    let code = match cx.solve_coboundary(&o) {
        Ok(SolveOutcome::Solved(f)) => {
            let _ = writeln!(out, "cobounds: δ({f}) = O_{order}");
            EXIT_OK
        }
        Ok(SolveOutcome::Infeasible(w)) => {
            let _ = writeln!(out, "does not cobound");
            let _ = writeln!(out, "witness: {w}");
            if let Some(p) = cx.noncobounding_certificate(&o) {
                let _ = writeln!(out, "degree certificate: source degree {p}");
            }
            EXIT_FINDING
        }
        Err(e) => {
            let _ = writeln!(out, "not a cocycle: {e}");
            EXIT_FINDING
        }
    };
    Outcome {
        code,
        stdout: out,
        stderr: String::new(),
    }
}

fn deform(c: &LoadedComplex, order: usize, lifts: LiftsArg) -> Outcome {
    let Some(d1) = c.lifts.first() else {
        return Outcome::input_error("the file has no deformation block with order 1");
    };
    let strategy = match lifts {
        LiftsArg::File => LiftStrategy::Supplied(c.lifts[1..].to_vec()),
        LiftsArg::Canonical => LiftStrategy::Canonical,
    };
    match deform_to_order(&c.dg, d1, order, &strategy) {
        Ok(report) => Outcome {
            code: if report.is_extended() {
                EXIT_OK
            } else {
                EXIT_FINDING
            },
            stdout: report.to_string(),
            stderr: String::new(),
        },
        Err(e) => deform_failure(e),
    }
}

fn trivialize_cmd(c: &LoadedComplex, order: usize) -> Outcome {
    let d_t = match MapSeries::deformation(c.dg.differential(), &c.lifts, order) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(e),
    };
    match trivialize(&d_t, order) {
        Ok(report) => Outcome {
            code: if report.is_trivialized() {
                EXIT_OK
            } else {
                EXIT_FINDING
            },
            stdout: report.to_string(),
            stderr: String::new(),
        },
        Err(e) => Outcome::input_error(e),
    }
}

fn paper_family(
    n: usize,
    variant: Variant,
    truncate: Option<i64>,
    field: FieldSpec,
    out: Option<PathBuf>,
) -> Outcome {
    let fam = match FamilySpec::new(n, variant, truncate, field).and_then(Family::generate) {
        Ok(f) => f,
        Err(e) => return Outcome::input_error(e),
    };
    let header = format!(
        "# {variant} family, n = {n}, truncated at degree {}\n",
        fam.spec.trunc_degree
    );
    let text = header + &dsl::print(&fam.to_document());
    match out {
        None => Outcome::ok(text),
        Some(path) => match std::fs::write(&path, text) {
            Ok(()) => Outcome::ok(format!("wrote {}\n", path.display())),
            Err(e) => Outcome::input_error(format!("{}: {e}", path.display())),
        },
    }
}

fn verify_paper(n: usize, variant: VariantArg, field: FieldSpec, truncate: Option<i64>) -> Outcome {
    let variants: Vec<Variant> = match variant {
        VariantArg::All => {
            let mut v = Vec::new();
            if n >= 2 {
                v.push(Variant::Polynomial);
            }
            v.push(Variant::Obstructed);
            if n == 1 {
                v.push(Variant::Linear);
            }
            v.push(Variant::Infinite);
            v
        }
        VariantArg::Polynomial => vec![Variant::Polynomial],
        VariantArg::Obstructed => vec![Variant::Obstructed],
        VariantArg::Linear => vec![Variant::Linear],
        VariantArg::Infinite => vec![Variant::Infinite],
    };
    let mut out = String::new();
    let mut all_passed = true;
    for (k, v) in variants.into_iter().enumerate() {
        let p = truncate.unwrap_or_else(|| minimal_truncation(n, v));
        let report = match v {
            Variant::Polynomial => verify_theorem3(n, p, field),
            Variant::Obstructed => verify_theorem4(n, p, field),
            Variant::Linear => {
                FamilySpec::new(n, v, Some(p), field).and_then(|_| verify_linear(p, field))
            }
            Variant::Infinite => verify_infinite(p, n, field),
        };
        match report {
            Ok(r) => {
                if k > 0 {
                    out.push('\n');
                }
                all_passed &= r.passed();
                out.push_str(&r.to_string());
            }
            Err(e) => return Outcome::input_error(format!("{v}: {e}")),
        }
    }
    Outcome {
        code: if all_passed { EXIT_OK } else { EXIT_FINDING },
        stdout: out,
        stderr: String::new(),
    }
}

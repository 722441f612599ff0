//! The `higgs` command line: `decompose`, `check`, `hitchin`, `fixture`.
//!
//! Exit status is 0 whenever a report was produced, negative verdicts
//! included, and 2 on any operational error; the error report names the
//! failure.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::checker::{self, CheckerConfig};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::ramification::decompose;
use crate::serial::{self, ProblemSpec};
use crate::spectral::matrix_char_coefficients;

#[derive(Parser, Debug)]
#[command(name = "higgs", version, about = "Spectral data and Higgs-field checks on windowed Grassmannian points")]
pub struct Cli {
    /// Pretty-print JSON with this many spaces.
    #[arg(long, global = true, value_name = "N")]
    json_indent: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split the spectral polynomial into totally ramified components.
    Decompose {
        input: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Run both Higgs-field checks on W, Ω and Ω⁻¹.
    Check {
        input: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Characteristic coefficients of a matrix.
    Hitchin {
        input: PathBuf,
        /// Also return the change of basis to companion form.
        #[arg(long)]
        trivialize: bool,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Write a catalogued problem file.
    Fixture {
        name: String,
        /// Output file; standard output when absent.
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// Exponent window as LO:HI.
    #[arg(long, value_name = "LO:HI", value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    #[arg(long, value_name = "N")]
    precision: Option<i64>,
    #[arg(long, value_name = "G")]
    gamma: Option<i64>,
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    if !(lo < 0 && 0 < hi) {
        return Err(format!("window {lo}:{hi} must straddle 0"));
    }
    Ok((lo, hi))
}

impl Overrides {
    fn apply(&self, cfg: &mut CheckerConfig) {
        if let Some(w) = self.window {
            cfg.window = w;
        }
        if let Some(p) = self.precision {
            cfg.precision = p;
        }
        if let Some(g) = self.gamma {
            cfg.gamma = g;
        }
    }
}

fn read_spec(path: &PathBuf, stdin: &mut dyn Read) -> Result<ProblemSpec> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    ProblemSpec::from_json(&value)
}

fn missing(what: &str) -> Error {
    Error::Parse(format!("problem file has no {what}"))
}

fn cmd_decompose(spec: &ProblemSpec) -> Result<Value> {
    let p = spec.polynomial().ok_or_else(|| missing("spectral polynomial"))?;
    let p = p.clone().with_working_precision(spec.config.precision);
    Ok(serial::decomposition_to_json(&decompose(&p)?))
}

fn cmd_check(spec: &ProblemSpec) -> Result<Value> {
    let w = spec.w.as_ref().ok_or_else(|| missing("W"))?;
    let omega = spec.omega.as_ref().ok_or_else(|| missing("omega"))?;
    let omega_inv = spec.omega_inv.as_ref().ok_or_else(|| missing("omega_inv"))?;
    let cfg = &spec.config;
    let membership = checker::check_containment(w, omega, cfg)?;
    let residual = checker::residual_matrix(w, omega_inv, cfg)?;
    let p = w.ambient().spectral().ok_or_else(|| missing("spectral ambient for W"))?;
    let partition = decompose(&p.clone().with_working_precision(cfg.precision))
        .map(|d| d.partition())
        .ok();
    let expansion = match &partition {
        Some(part) if part.len() == 1 => Some(checker::totally_ramified_residuals(w, omega_inv, cfg)?),
        _ => None,
    };
    let mut consistent = membership.contained == residual.contained;
    if let Some(tr) = &expansion {
        consistent &= tr.consistent && tr.contained == residual.contained;
    }
    let mut out = serial::check_report_to_json(&residual);
    out["contained"] = json!(membership.contained);
    out["consistent"] = json!(consistent);
    out["residual_verdict"] = json!(residual.contained);
    // the general equations exclude index m = (r − n)/2; flag it, nothing more
    let index = w.index().index;
    let excluded = partition.as_ref().is_some_and(|part| 2 * index == part.len() as i64 - p.n() as i64);
    out["index"] = json!(index);
    out["index_excluded"] = json!(excluded);
    out["partition"] = json!(partition);
    out["totally_ramified"] = match expansion {
        Some(tr) => json!({
            "contained": tr.contained,
            "matches_residuals": tr.consistent,
            "nonzero": tr.nonzero_residuals(),
        }),
        None => Value::Null,
    };
    Ok(out)
}

fn cmd_hitchin(spec: &ProblemSpec, trivialize: bool) -> Result<Value> {
    let a = spec.matrix.as_ref().ok_or_else(|| missing("matrix"))?;
    let mut out = json!({"p": serial::polynomial_to_json(&matrix_char_coefficients(a)?)});
    if trivialize {
        let (change, _) = checker::cyclic_trivialization(a, spec.config.precision)?;
        out["trivialization"] = serial::matrix_to_json(&change);
    }
    Ok(out)
}

fn cmd_fixture(name: &str) -> Result<Value> {
    let f = fixtures::projective_line_fixture(name)?;
    let spec = ProblemSpec {
        p: Some(f.p.clone()),
        matrix: Some(f.p.companion_matrix()),
        w: Some(f.w),
        omega: Some(f.omega),
        omega_inv: Some(f.omega_inv),
        config: CheckerConfig::default(),
    };
    let mut out = spec.to_json();
    out["name"] = json!(f.name);
    out["expected"] = json!(f.expected);
    Ok(out)
}

fn render(value: &Value, indent: Option<usize>) -> String {
    match indent {
        None => value.to_string(),
        Some(n) => {
            let pad = " ".repeat(n);
            let mut buf = Vec::new();
            let fmt = serde_json::ser::PrettyFormatter::with_indent(pad.as_bytes());
            let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
            serde::Serialize::serialize(value, &mut ser).expect("in-memory JSON");
            String::from_utf8(buf).expect("JSON is UTF-8")
        }
    }
}

/// Runs one command and returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    let indent = cli.json_indent;
    let mut output_path = None;
    let result = match &cli.command {
        Command::Decompose { input, opts } | Command::Check { input, opts } | Command::Hitchin { input, opts, .. } => {
            read_spec(input, stdin).and_then(|mut spec| {
                opts.apply(&mut spec.config);
                match &cli.command {
                    Command::Decompose { .. } => cmd_decompose(&spec),
                    Command::Check { .. } => cmd_check(&spec),
                    Command::Hitchin { trivialize, .. } => cmd_hitchin(&spec, *trivialize),
                    Command::Fixture { .. } => unreachable!(),
                }
            })
        }
        Command::Fixture { name, output } => {
            output_path = output.clone();
            cmd_fixture(name)
        }
    };
    match result {
        Ok(value) => {
            let text = render(&value, indent);
            if let Some(path) = output_path {
                if let Err(e) = fs::write(&path, text + "\n") {
                    let _ = writeln!(stderr, "cannot write {}: {e}", path.display());
                    return 2;
                }
            } else {
                let _ = writeln!(stdout, "{text}");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stdout, "{}", render(&serial::error_to_json(&e), indent));
            let _ = writeln!(stderr, "higgs: {e}");
            2
        }
    }
}

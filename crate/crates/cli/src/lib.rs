//! `blowup` command line. [`run`] parses argv, dispatches one verb and returns
//! the exit code: 0 on success or a true verdict, 1 on a false verdict or a
//! table mismatch, 2 on usage and input errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use blowup_core::cone::{self, hilbert_basis, parse_cone_json, parse_cone_text, ConeFile, RationalCone};
use blowup_core::decomp::table_decompose;
use blowup_core::ineq::Sense;
use blowup_core::lattice::{BlowupSpace, DivisorClass};
use blowup_core::logfano::{n_plus_2_report, x235_certificate};
use blowup_core::pipeline::{bundle_for, effective_cone, movable_cone, verify_table, TABLE_IDS};
use blowup_core::secant::secant_report;
use blowup_core::{BigInt, BigRational, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Largest `n` for the `n+2` movable cone without `--allow-large`.
pub const MOV_N_LIMIT: usize = 5;

#[derive(Debug, Parser)]
#[command(name = "blowup", version, about = "Exact cone computations on blow-ups of P^n x P^m")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// `NxM`, e.g. `2x3`
    #[arg(long, value_parser = parse_space_dims)]
    pub space: (usize, usize),
    /// Number of blown-up points.
    #[arg(long)]
    pub points: usize,
}

impl SpaceArgs {
    fn space(&self) -> BlowupSpace {
        BlowupSpace::new(self.space.0, self.space.1, self.points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "n+2")]
    NPlus2,
    X235,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read a cone file and print both descriptions.
    Cone {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Hilbert basis of the cone in a file.
    Hilbert {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Effective cone generators, one row per orbit.
    Eff {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Movable cone generators, one row per orbit.
    Mov {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Lift the cap on n for the n+2 family.
        #[arg(long)]
        allow_large: bool,
    },
    /// Table decomposition of an effective class on X^{n,n+1}_s, s <= n+2.
    Decompose {
        #[command(flatten)]
        space: SpaceArgs,
        /// `d1 d2 m1 .. ms`
        #[arg(long)]
        class: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Base locus multiplicities of a class under the space's inequality bundle.
    Kappa {
        #[command(flatten)]
        space: SpaceArgs,
        /// `d1 d2 m1 .. ms`
        #[arg(long)]
        class: String,
        /// Also list the formulas that vanish.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Catalecticant checks for the degree (n, n+1) curve.
    Secant {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Log Fano certificate with its discrepancy ledger.
    Logfano {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        /// Three rationals for the x235 family, e.g. `1/2,10/11,1/10`.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compare a computed cone with its stored reference.
    Verify {
        /// One of x235-eff, x235-mov, x346-eff, eff-n+2[:N], mov-n+2[:N].
        id: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn parse_space_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got '{s}'"))?;
    let p = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("expected NxM, got '{s}'"));
    Ok((p(a)?, p(b)?))
}

/// Parses `d1 d2 m1 .. ms` for `space`.
pub fn parse_class(text: &str, space: &BlowupSpace) -> Result<DivisorClass, String> {
    let row: Vec<BigInt> = text
        .split_whitespace()
        .map(|w| w.parse::<BigInt>().map_err(|_| format!("not an integer: '{w}'")))
        .collect::<Result<_, _>>()?;
    if row.len() != space.rank() {
        return Err(format!("class has {} entries, expected {} for {space}", row.len(), space.rank()));
    }
    DivisorClass::from_row(&row).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("not a rational: '{s}'");
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.parse::<BigInt>().map_err(|_| bad())?, b.parse::<BigInt>().map_err(|_| bad())?);
            if b == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Reads a cone file, JSON when the first non-blank character is `{`.
fn read_cone(path: &Path) -> Result<ConeFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let parsed = if text.trim_start().starts_with('{') { parse_cone_json(&text) } else { parse_cone_text(&text) };
    parsed.map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn cone_of(file: &ConeFile) -> Result<RationalCone, Failure> {
    let c = match (&file.generators, &file.inequalities) {
        (Some(g), _) => RationalCone::from_generators(g, file.dim),
        (None, Some(a)) => RationalCone::from_inequalities(a, file.dim),
        (None, None) => return Err(Failure::usage("cone file has neither generators nor inequalities")),
    };
    Ok(c.and_then(|c| c.synchronized())?)
}

/// An error and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: 2, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::UnsupportedSpace(_)
            | Error::InvalidParameter(_)
            | Error::UnknownTable(_)
            | Error::DimensionMismatch { .. }
            | Error::DimensionGuard { .. }
            | Error::Hypothesis(_) => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

fn emit(out: &mut dyn Write, format: Format, table: impl FnOnce() -> String, value: impl FnOnce() -> serde_json::Value) {
    let text = match format {
        Format::Table => table(),
        Format::Json => serde_json::to_string_pretty(&value()).expect("json"),
    };
    let _ = writeln!(out, "{text}");
}

fn rows_text(rows: &[Vec<BigInt>]) -> String {
    rows.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("\n")
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Cone { file, format } => {
            let c = cone_of(&read_cone(&file)?)?;
            let f = ConeFile::from_cone(&c);
            emit(out, format, || f.to_text().trim_end().to_string(), || f.to_json());
            Ok(0)
        }
        Command::Hilbert { file, format } => {
            let c = cone_of(&read_cone(&file)?)?;
            let hb = hilbert_basis(&c)?;
            let text = || format!("hilbert {}\n{}", hb.elements.len(), rows_text(&hb.elements));
            let value = || json!({ "dim": c.ambient_dim, "hilbert_basis": hb.elements.iter().map(|r| cone::row_json(r)).collect::<Vec<_>>() });
            emit(out, format, text, value);
            Ok(0)
        }
        Command::Eff { space, format } => {
            let t = effective_cone(&space.space())?;
            emit(out, format, || t.to_string(), || t.to_json());
            Ok(0)
        }
        Command::Mov { space, format, allow_large } => {
            let sp = space.space();
            if sp.m == sp.n + 1 && sp.s == sp.n + 2 && sp.n > MOV_N_LIMIT && !allow_large {
                return Err(Failure::usage(format!("n = {} exceeds {MOV_N_LIMIT}; pass --allow-large", sp.n)));
            }
            let t = movable_cone(&sp)?;
            emit(out, format, || t.to_string(), || t.to_json());
            Ok(0)
        }
        Command::Decompose { space, class, format } => {
            let sp = space.space();
            let d = parse_class(&class, &sp).map_err(Failure::usage)?;
            let t = table_decompose(&sp, &d)?;
            let text = || {
                let mut s = format!("{d}\n");
                for p in &t.decomposition.parts {
                    s.push_str(&format!("  {} x ({})\n", p.multiplicity, p.class));
                }
                s.push_str(&t.table.to_string());
                s.trim_end().to_string()
            };
            emit(out, format, text, || t.to_json());
            Ok(0)
        }
        Command::Kappa { space, class, all, format } => {
            let sp = space.space();
            let d = parse_class(&class, &sp).map_err(Failure::usage)?;
            let config = bundle_for(&sp)?;
            let mut rows = Vec::new();
            for q in config.inequalities.iter().filter(|q| q.sense == Sense::Kappa) {
                let v: BigInt = q.coeffs.iter().zip(d.to_row()).map(|(a, b)| a * b).sum();
                let k = v.max(BigInt::from(0));
                if all || k > BigInt::from(0) {
                    rows.push((q.label.clone(), k));
                }
            }
            let text = || {
                let mut s = format!("{d}\n");
                if rows.is_empty() {
                    s.push_str("  no forced base locus");
                }
                let w = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
                s.push_str(&rows.iter().map(|(l, k)| format!("  {l:<w$}  {k}")).collect::<Vec<_>>().join("\n"));
                s
            };
            let value = || {
                json!({
                    "class": d.to_row().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "kappa": rows.iter().map(|(l, k)| json!({ "label": l, "value": k.to_string() })).collect::<Vec<_>>(),
                })
            };
            emit(out, format, text, value);
            Ok(0)
        }
        Command::Secant { n, k, format } => {
            let r = secant_report(n, k)?;
            let text = || {
                let order = r.vanishing_order.map_or("n/a (not square)".to_string(), |o| o.to_string());
                format!("n = {n}, k = {k}\n  square: {}\n  telescoping: {}\n  vanishing order along C: {order}", r.square, r.telescoping_ok)
            };
            emit(out, format, text, || serde_json::to_value(&r).expect("json"));
            Ok(if r.telescoping_ok { 0 } else { 1 })
        }
        Command::Logfano { family, n, eps, format } => {
            let rep = match family {
                Family::NPlus2 => {
                    let n = n.ok_or_else(|| Failure::usage("--n is required for the n+2 family"))?;
                    n_plus_2_report(n)?
                }
                Family::X235 => {
                    if eps.len() != 3 {
                        return Err(Failure::usage("--eps takes three rationals, e.g. 1/2,10/11,1/10"));
                    }
                    let e: Vec<BigRational> = eps.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>().map_err(Failure::usage)?;
                    x235_certificate(&e[0], &e[1], &e[2])?
                }
            };
            emit(out, format, || rep.to_string(), || rep.to_json());
            Ok(if rep.verdict() { 0 } else { 1 })
        }
        Command::Verify { id, list, allow_large, format } => {
            if list {
                let _ = writeln!(out, "{}", TABLE_IDS.join("\n"));
                return Ok(0);
            }
            let id = id.ok_or_else(|| Failure::usage("missing table id (see --list)"))?;
            if let Some(rest) = id.strip_prefix("mov-n+2:") {
                if rest.parse::<usize>().is_ok_and(|n| n > MOV_N_LIMIT) && !allow_large {
                    return Err(Failure::usage(format!("n = {rest} exceeds {MOV_N_LIMIT}; pass --allow-large")));
                }
            }
            let rep = verify_table(&id)?;
            emit(out, format, || rep.to_string(), || rep.to_json());
            Ok(if rep.matched { 0 } else { 1 })
        }
    }
}

/// Runs one command; diagnostics go to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

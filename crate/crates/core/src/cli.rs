//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{default_catalog, find_entry, load_catalog, serialize_catalog, SweepConfig, TheoremEntry};
use crate::error::{Error, Result};
use crate::expr::expand;
use crate::identities::{self, compress, cube_check, entry30_check, Entry30};
use crate::series::{QSeries, Sign};
use crate::theta::{jtpi_check, Monomial, ThetaSpec};
use crate::verify::{run_suite, to_records, to_table, ExecMode, SuiteOutcome};

pub const EXIT_OK: u8 = 0;
pub const EXIT_OTHER: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_FAILURE: u8 = 3;
pub const EXIT_DEGENERATE_ONLY: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "qvanish",
    version,
    about = "Exact q-series expansion and vanishing-coefficient verification"
)]
pub struct Cli {
    /// Truncation order N
    #[arg(long, global = true, env = "QVANISH_ORDER", default_value_t = 500)]
    pub order: i64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Catalog file (JSON lines) replacing the built-in one
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Records,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand a product expression, e.g. "(q,q^4;q^5)^2*(q^2,q^13;q^15)"
    Expand { expr: String },
    /// Keep the exponents congruent to RESIDUE mod MODULUS
    Extract {
        expr: String,
        #[arg(long)]
        modulus: i64,
        #[arg(long)]
        residue: i64,
        /// Map q^{kn+l} to q^n
        #[arg(long)]
        compress: bool,
    },
    /// Check one theta identity to the truncation order
    Identity {
        #[command(subcommand)]
        which: IdentityCmd,
    },
    /// Verify one catalog entry
    Verify(SweepArgs),
    /// Verify the whole catalog or a selection of it
    Suite(SweepArgs),
    /// List or export the catalog
    Catalog,
}

#[derive(Subcommand, Debug)]
pub enum IdentityCmd {
    /// f(a,b) = (-a,-b,ab;ab)
    Jtpi {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// The cube decomposition of f(±q^k, ±q^{mu-k})^3
    Cube {
        k: i64,
        mu: i64,
        #[arg(long)]
        minus: bool,
    },
    /// Entry 30 product formulas with monomial arguments
    Entry30 {
        #[arg(value_enum)]
        which: Entry30Arg,
        #[arg(allow_hyphen_values = true, num_args = 2..=4)]
        args: Vec<String>,
    },
    /// Reconstruct f(a,b)^n from its n-dissection
    Dissection {
        n: u32,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Entry30Arg {
    R1,
    R2,
    R3,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Entry id; repeatable. `verify` requires exactly one.
    #[arg(long)]
    pub entry: Vec<String>,
    /// Values of ell (comma separated)
    #[arg(long, value_delimiter = ',', default_values_t = vec![1i64, 2])]
    pub ell: Vec<i64>,
    /// Explicit values of t (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<u32>,
    /// Sweep t over 1..=T_MAX (default 2p)
    #[arg(long)]
    pub t_max: Option<u32>,
    /// Include t whose exponents reach or exceed the block modulus
    #[arg(long)]
    pub allow_degenerate_t: bool,
    /// Disable the data-parallel sweep
    #[arg(long)]
    pub serial: bool,
}

struct Output {
    text: String,
    code: u8,
}

/// Runs the parsed command; returns the exit code.
pub fn run(cli: Cli) -> ExitCode {
    let result = dispatch(&cli).and_then(|out| {
        match &cli.out {
            Some(path) => std::fs::write(path, &out.text)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(out.text.as_bytes())?;
            }
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::UnknownEntry(_) | Error::UnknownSeries(_) | Error::SideCondition { .. } => {
            EXIT_USAGE
        }
        _ => EXIT_OTHER,
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    if cli.order < 1 {
        return Err(Error::InvalidParameters(format!(
            "order {} must be at least 1",
            cli.order
        )));
    }
    match &cli.command {
        Command::Expand { expr } => {
            let s = expand(expr, cli.order)?;
            Ok(ok(series_output(&s, cli.format)?))
        }
        Command::Extract {
            expr,
            modulus,
            residue,
            compress: squash,
        } => {
            if *modulus < 1 {
                return Err(Error::InvalidParameters("modulus must be positive".into()));
            }
            let s = expand(expr, cli.order)?;
            let s = if *squash {
                compress(&s, *modulus, *residue)
            } else {
                identities::extract(&s, *modulus, *residue)
            };
            Ok(ok(series_output(&s, cli.format)?))
        }
        Command::Identity { which } => identity(which, cli.order, cli.format),
        Command::Verify(args) => {
            if args.entry.len() != 1 {
                return Err(Error::InvalidParameters("verify takes exactly one --entry".into()));
            }
            sweep(cli, args)
        }
        Command::Suite(args) => sweep(cli, args),
        Command::Catalog => {
            let cat = catalog(cli)?;
            let text = match cli.format {
                Format::Records => serialize_catalog(&cat)?,
                Format::Table => cat.iter().map(|e| format!("{e}\n")).collect(),
            };
            Ok(ok(text))
        }
    }
}

fn ok(text: String) -> Output {
    Output { text, code: EXIT_OK }
}

fn catalog(cli: &Cli) -> Result<Vec<TheoremEntry>> {
    match &cli.catalog {
        Some(path) => load_catalog(&std::fs::read_to_string(path)?),
        None => Ok(default_catalog()),
    }
}

#[derive(Serialize)]
struct Term {
    exponent: i64,
    coefficient: String,
}

fn series_output(s: &QSeries, format: Format) -> Result<String> {
    let lo = s.min_exp().min(0);
    let mut out = String::new();
    for e in lo..=s.order() {
        let c = s.coeff(e)?;
        match format {
            Format::Table => out.push_str(&format!("{e}\t{c}\n")),
            Format::Records => {
                out.push_str(&serde_json::to_string(&Term {
                    exponent: e,
                    coefficient: c.to_string(),
                })?);
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn mono(src: &str) -> Result<Monomial> {
    let e = crate::expr::parse_expr(src)?;
    match e.factors.as_slice() {
        [(crate::expr::Atom::Mono(m), 1)] => Ok(*m),
        [(crate::expr::Atom::Int(c), 1)] if *c == 1.into() => Ok(Monomial::ONE),
        [(crate::expr::Atom::Int(c), 1)] if *c == (-1).into() => Ok(Monomial::ONE.negate()),
        _ => Err(Error::Parse {
            pos: 0,
            msg: format!("`{src}` is not a signed power of q"),
        }),
    }
}

fn identity(which: &IdentityCmd, order: i64, format: Format) -> Result<Output> {
    let (label, holds) = match which {
        IdentityCmd::Jtpi { a, b } => {
            let spec = ThetaSpec::new(mono(a)?, mono(b)?);
            (format!("jtpi {spec}"), jtpi_check(&spec, order)?)
        }
        IdentityCmd::Cube { k, mu, minus } => {
            let sign = if *minus { Sign::Minus } else { Sign::Plus };
            (
                format!("cube k={k} mu={mu} sign={}", sign.value()),
                cube_check(*k, *mu, sign, order)?,
            )
        }
        IdentityCmd::Entry30 { which, args } => {
            let w = match which {
                Entry30Arg::R1 => Entry30::R1,
                Entry30Arg::R2 => Entry30::R2,
                Entry30Arg::R3 => Entry30::R3,
            };
            let ms = args.iter().map(|s| mono(s)).collect::<Result<Vec<_>>>()?;
            (
                format!("entry30 {w:?} {}", args.join(" ")),
                entry30_check(w, &ms, order)?,
            )
        }
        IdentityCmd::Dissection { n, a, b } => {
            let spec = ThetaSpec::new(mono(a)?, mono(b)?);
            let d = identities::dissection_coeffs(*n, spec, order)?;
            let direct = crate::theta::theta_series(&spec, order)?.pow(*n);
            (
                format!("dissection n={n} {spec}"),
                d.reconstruct(order)?.agrees_with(&direct),
            )
        }
    };
    let text = match format {
        Format::Table => format!("{label}: {} to order {order}\n", if holds { "holds" } else { "FAILS" }),
        Format::Records => format!(
            "{}\n",
            serde_json::json!({ "identity": label, "order": order, "holds": holds })
        ),
    };
    Ok(Output {
        text,
        code: if holds { EXIT_OK } else { EXIT_FAILURE },
    })
}

fn sweep(cli: &Cli, args: &SweepArgs) -> Result<Output> {
    let cat = catalog(cli)?;
    for id in &args.entry {
        find_entry(&cat, id)?;
    }
    let config = SweepConfig {
        ell_values: args.ell.clone(),
        t_values: (!args.t.is_empty()).then(|| args.t.clone()),
        t_max: args.t_max,
        order: cli.order,
        allow_degenerate_t: args.allow_degenerate_t,
    };
    if let (Some(ts), [id]) = (&config.t_values, args.entry.as_slice()) {
        let p = find_entry(&cat, id)?.modulus();
        if let Some(&t) = ts.iter().find(|&&t| num_integer::gcd(p, t) != 1) {
            return Err(Error::SideCondition { p, t });
        }
    }
    let mode = if args.serial {
        ExecMode::Serial
    } else {
        ExecMode::Parallel
    };
    let outcome = run_suite(&cat, &config, &args.entry, mode)?;
    let text = match cli.format {
        Format::Table => to_table(&outcome),
        Format::Records => to_records(&outcome)?,
    };
    Ok(Output {
        text,
        code: suite_code(&outcome),
    })
}

fn suite_code(outcome: &SuiteOutcome) -> u8 {
    if outcome.summary.fail > 0 {
        EXIT_FAILURE
    } else if outcome.summary.degenerate_only() {
        EXIT_DEGENERATE_ONLY
    } else {
        EXIT_OK
    }
}

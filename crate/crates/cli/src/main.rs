use clap::{Parser, Subcommand, ValueEnum};
use semimeander::Regime;
use semimeander_cli::cache::Cache;
use semimeander_cli::commands::{self, Format, SatakeInput, TateRequest};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Ascii,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Ascii => Format::Ascii,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Inert,
    Split,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::Inert => Regime::Inert,
            RegimeArg::Split => Regime::Split,
        }
    }
}

/// Periodic semi-meanders on a cylinder: enumeration, Gram determinant
/// verification, and Frobenius eigenvalue reports.
#[derive(Parser)]
#[command(name = "semimeander", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every diagram with r arcs on the given band
    Enumerate {
        /// Band circumference
        #[arg(long)]
        g: usize,
        /// Comma-separated plus positions, e.g. --plus 1,4
        #[arg(long, value_delimiter = ',')]
        plus: Vec<usize>,
        /// Number of arcs
        #[arg(long)]
        r: usize,
        /// Output format
        #[arg(long, value_enum, default_value_t = FormatArg::Ascii)]
        format: FormatArg,
        /// Directory for cached results
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Check every Gram determinant against its closed form across a sweep of bands
    Verify {
        /// Largest circumference to sweep; every plus-set up to this g is visited
        #[arg(long, default_value_t = 6)]
        max_g: usize,
        /// Output format
        #[arg(long, value_enum, default_value_t = FormatArg::Ascii)]
        format: FormatArg,
        /// Directory for cached results
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Report which Frobenius eigenvalue the cycle classes target and whether they span its eigenspace
    Tate {
        /// Band circumference
        #[arg(long)]
        g: usize,
        /// Comma-separated plus positions, e.g. --plus 1,4
        #[arg(long, value_delimiter = ',')]
        plus: Vec<usize>,
        /// Number of arcs
        #[arg(long)]
        r: usize,
        /// Extra puncture pairs carried by the gluing
        #[arg(long, default_value_t = 0)]
        tcount: usize,
        /// First Satake parameter (rational, e.g. 3 or -5/2); pair with --beta
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Second Satake parameter (rational); pair with --alpha
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Hecke eigenvalue of the degree-p operator (rational); pair with --sp
        #[arg(long, allow_hyphen_values = true)]
        tp: Option<String>,
        /// Hecke eigenvalue of the central operator (rational); pair with --tp
        #[arg(long, allow_hyphen_values = true)]
        sp: Option<String>,
        /// The residue prime
        #[arg(long)]
        p: u64,
        /// Indentation convention for entry ledgers
        #[arg(long, value_enum, default_value_t = RegimeArg::Split)]
        regime: RegimeArg,
        /// Output format (csv prints the full spectrum table)
        #[arg(long, value_enum, default_value_t = FormatArg::Ascii)]
        format: FormatArg,
        /// Directory for cached results
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Enumerate {
            g,
            plus,
            r,
            format,
            cache_dir,
        } => {
            let out = commands::run_enumerate(g, &plus, r, format.into(), &Cache::new(cache_dir))?;
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            max_g,
            format,
            cache_dir,
        } => {
            let (out, all_pass) =
                commands::run_verify(max_g, format.into(), &Cache::new(cache_dir))?;
            print!("{out}");
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Tate {
            g,
            plus,
            r,
            tcount,
            alpha,
            beta,
            tp,
            sp,
            p,
            regime,
            format,
            cache_dir,
        } => {
            let satake = match (alpha, beta, tp, sp) {
                (Some(alpha), Some(beta), None, None) => SatakeInput::Direct { alpha, beta },
                (None, None, Some(tp), Some(sp)) => SatakeInput::Hecke { tp, sp },
                (None, None, None, None) => {
                    return Err("no Satake inputs: pass --alpha/--beta or --tp/--sp".into())
                }
                _ => {
                    return Err(
                        "inconsistent Satake inputs: pass exactly one complete pair, \
                                either --alpha with --beta or --tp with --sp"
                            .into(),
                    )
                }
            };
            let req = TateRequest {
                g,
                plus,
                r,
                tcount,
                p,
                satake,
                regime: regime.into(),
            };
            let out = commands::run_tate(&req, format.into(), &Cache::new(cache_dir))?;
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

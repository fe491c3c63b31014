//! `wsub`: exact checks for free-field realisations of the subregular W-algebra of sl(n+1).
//!
//! Exit status: 0 pass, 1 a check failed, 2 usage error, 3 malformed rational,
//! 4 rank out of range, 5 configuration error, 6 internal error.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{check_rank, parse_rat, CliError, Output};
use config::Config;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "wsub", version, about = "Exact OPE calculus for the subregular W-algebra of sl(n+1)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Configuration file; defaults to $WSUB_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Report wall-clock times.
    #[arg(long, global = true)]
    timing: bool,
    /// Worker threads (overrides the configuration file).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args)]
struct Rank {
    /// Rank n of sl_{n+1}.
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct Level {
    /// Level k as a rational such as -3/2; symbolic when omitted.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Strong generators L, J, G+, G-, U_i with weights and J-charges
    /// (subregular algebra inside the regular W-algebra tensor the half-lattice).
    Generators {
        #[command(flatten)]
        rank: Rank,
        #[command(flatten)]
        level: Level,
        /// Weights and charges only.
        #[arg(long)]
        brief: bool,
    },
    /// Miura fields W_s = -E_s(...)1 of the regular W-algebra.
    Miura {
        #[command(flatten)]
        rank: Rank,
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Character of the half-lattice module generated by e^{rb+lambda c}
    /// (sector r from the r = -1 character by spectral flow).
    Char {
        #[command(flatten)]
        rank: Rank,
        #[command(flatten)]
        level: Level,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        /// Rational lambda; symbolic when omitted.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        qmax: Option<i64>,
        #[arg(long)]
        zmax: Option<i64>,
        /// Multiply out the comb factor inside the window.
        #[arg(long)]
        expand: bool,
    },
    /// Whether (G+_{-1})^m 1 is singular at level k (iff i(k+n) = m for some 1 <= i <= n).
    Singular {
        #[command(flatten)]
        rank: Rank,
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// Zero mode of G- on relaxed top spaces: the polynomial p(gamma, x).
    Zeromode {
        #[command(flatten)]
        rank: Rank,
        #[command(flatten)]
        level: Level,
    },
    /// Spectral flow sigma^l on generator modes and on weights (j, Delta).
    Sflow {
        #[command(flatten)]
        rank: Rank,
        #[command(flatten)]
        level: Level,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        /// Mode index of the displayed images.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        m: i64,
        #[arg(long, allow_hyphen_values = true, requires = "delta")]
        j: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "j")]
        delta: Option<String>,
    },
    /// Central charges of the subregular, regular and half-lattice algebras and their additivity.
    CentralCharges {
        #[command(flatten)]
        rank: Rank,
        #[command(flatten)]
        level: Level,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Full OPE tables of ranks 1, 2, 3 (affine sl2, Bershadsky-Polyakov, Feigin-Semikhatov W_4^(2)).
    Appendix {
        #[command(flatten)]
        rank: Rank,
    },
    /// Inverse-reduction screening kills every strong generator; FMS bosonisation relations.
    Screening {
        #[command(flatten)]
        rank: Rank,
    },
    /// The regular screenings kill every Miura field.
    RegularScreening {
        #[command(flatten)]
        rank: Rank,
    },
}

fn level(l: &Level) -> Result<Option<wsub_core::Rat>, CliError> {
    l.k.as_deref().map(parse_rat).transpose()
}

fn run(cmd: &Cmd, cfg: &Config, timing: bool) -> Result<Output, CliError> {
    let ope_cap = cfg.max_n_ope;
    match cmd {
        Cmd::Generators { rank, level: l, brief } => {
            check_rank(rank.n, ope_cap)?;
            commands::generators(rank.n, level(l)?.as_ref(), *brief)
        }
        Cmd::Miura { rank, level: l, s } => {
            check_rank(rank.n, ope_cap)?;
            commands::miura(rank.n, level(l)?.as_ref(), *s)
        }
        Cmd::Char { rank, level: l, r, lambda, qmax, zmax, expand } => {
            check_rank(rank.n, cfg.max_n_cc)?;
            let lam = lambda.as_deref().map(parse_rat).transpose()?;
            let (q, z) = (qmax.unwrap_or(cfg.qmax), zmax.unwrap_or(cfg.zmax));
            if q < 0 || z < 0 {
                return Err(CliError::Range("truncation orders must be nonnegative".into()));
            }
            commands::character(rank.n, level(l)?.as_ref(), r, lam.as_ref(), q, z, *expand)
        }
        Cmd::Singular { rank, m, k } => {
            check_rank(rank.n, ope_cap)?;
            commands::singular(rank.n, &parse_rat(k)?, *m, timing)
        }
        Cmd::Zeromode { rank, level: l } => {
            check_rank(rank.n, ope_cap)?;
            commands::zeromode(rank.n, level(l)?.as_ref())
        }
        Cmd::Sflow { rank, level: l, l: flow, m, j, delta } => {
            check_rank(rank.n, cfg.max_n_cc)?;
            let weight = match (j, delta) {
                (Some(j), Some(d)) => Some((parse_rat(j)?, parse_rat(d)?)),
                _ => None,
            };
            commands::sflow(rank.n, level(l)?.as_ref(), *flow, *m, weight)
        }
        Cmd::CentralCharges { rank, level: l } => {
            check_rank(rank.n, cfg.max_n_cc)?;
            commands::central_charges(rank.n, level(l)?.as_ref())
        }
        Cmd::Verify { suite } => match suite {
            Suite::Appendix { rank } => {
                check_rank(rank.n, ope_cap)?;
                commands::verify_appendix(rank.n, timing)
            }
            Suite::Screening { rank } => {
                check_rank(rank.n, ope_cap)?;
                commands::verify_screening(rank.n, timing)
            }
            Suite::RegularScreening { rank } => {
                check_rank(rank.n, ope_cap)?;
                commands::verify_regular_screening(rank.n, timing)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = Config::resolve(g.config.as_deref()).map_err(CliError::from).and_then(|cfg| {
        if let Some(t) = g.threads.or((cfg.threads > 0).then_some(cfg.threads)) {
            wsub_core::par::set_threads(t);
        }
        let start = Instant::now();
        run(&cli.cmd, &cfg, g.timing).map(|out| (out, start.elapsed()))
    });
    let (out, elapsed) = match result {
        Ok(x) => x,
        Err(e) => {
            eprintln!("wsub: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut body = match g.format {
        Format::Text => out.text.clone(),
        Format::Json => {
            let mut v = out.json.clone();
            v["status"] = (if out.passed() { "pass" } else { "fail" }).into();
            if g.timing {
                v["seconds"] = elapsed.as_secs_f64().into();
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("serialisable"))
        }
        Format::Latex => out.latex.clone(),
    };
    if g.timing && !matches!(g.format, Format::Json) {
        body.push_str(&format!("total {:.3}s\n", elapsed.as_secs_f64()));
    }
    match &g.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("wsub: cannot write {}: {e}", path.display());
                return ExitCode::from(6);
            }
        }
        None => print!("{body}"),
    }
    if out.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

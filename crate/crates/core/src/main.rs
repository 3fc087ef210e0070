use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bdiv::commands;
use bdiv::h0::Budget;
use bdiv::rat::parse_rat;
use bdiv::report::{Format, Report};
use bdiv::scenario::Scenario;
use bdiv::toric::{MonomialIdeal2D, PLMetricData};
use bdiv::{Error, Result};

#[derive(Parser)]
#[command(name = "bdiv", version, about = "Exact b-divisor and toric multiplier-ideal computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Number of levels (appendix, b-divisors) or largest k (toric counts).
    #[arg(long, global = true)]
    kmax: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Operation budget for the expensive counts.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ToricArgs {
    /// Line bundle degree, overriding the scenario.
    #[arg(long)]
    d: Option<u64>,
    /// Weight c as "num/den".
    #[arg(long)]
    c: Option<String>,
    /// Ideal generators as "a,b;a,b;...", e.g. "1,0;0,1" for (x, y).
    #[arg(long)]
    ideal: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the Step-2 tower: degrees, nef status, volume bounds and the discontinuity ratio.
    ReproAppendix,
    /// List the models, curves and divisors of a scenario.
    Tower,
    /// Intersection number of two divisors or curves.
    Intersect {
        a: String,
        b: String,
        /// Model on which curve names are taken as strict transforms (default: latest).
        #[arg(long)]
        model: Option<usize>,
    },
    /// Nef certificate against the catalogue, optionally with the line rule.
    Nef {
        #[arg(long)]
        divisor: Option<String>,
        #[arg(long)]
        line: Option<String>,
    },
    /// Zariski decomposition relative to the catalogue.
    Zariski {
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Volume in both normalizations.
    Volume {
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Degree sequence and limit of a tower b-divisor.
    Bdeg {
        #[arg(long)]
        bdiv: Option<String>,
        /// Also compute the volume by reduction to this base line.
        #[arg(long)]
        line: Option<String>,
    },
    /// Lattice-count Hilbert-Samuel check for a toric weight.
    ToricHs(ToricArgs),
    /// Chern-Weil degree chain for a toric weight.
    ToricCw(ToricArgs),
}

fn scenario(c: &Common) -> Result<Scenario> {
    match &c.scenario {
        Some(p) => Scenario::from_path(p),
        None => Err(Error::Validation("--scenario is required for this command".into())),
    }
}

fn parse_ideal(s: &str) -> Result<MonomialIdeal2D> {
    let bad = || Error::Validation(format!("--ideal: cannot parse '{s}'"));
    let gens = s
        .split(';')
        .map(|g| {
            let v: Vec<u64> = g.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
            match v.as_slice() {
                [a, b] => Ok([*a, *b]),
                _ => Err(bad()),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    MonomialIdeal2D::new(&gens)
}

fn metric(c: &Common, t: &ToricArgs) -> Result<(PLMetricData, u64)> {
    let from_file = match &c.scenario {
        Some(p) => Scenario::from_path(p)?.toric,
        None => None,
    };
    let (d, cw, ideal, k) = match from_file {
        Some((m, k)) => (m.d, m.c, m.ideal, k),
        None => {
            if t.d.is_none() || t.c.is_none() || t.ideal.is_none() {
                return Err(Error::Validation("give a scenario with a toric section or all of --d, --c, --ideal".into()));
            }
            (0, bdiv::rat::int(0), MonomialIdeal2D::unit(), 40)
        }
    };
    let d = t.d.unwrap_or(d);
    let cw = match &t.c {
        Some(s) => parse_rat(s).map_err(|e| Error::Validation(format!("--c: {e}")))?,
        None => cw,
    };
    let ideal = match &t.ideal {
        Some(s) => parse_ideal(s)?,
        None => ideal,
    };
    Ok((PLMetricData::new(d, ideal, cw)?, c.kmax.unwrap_or(k)))
}

fn run(cli: &Cli) -> Result<Report> {
    let c = &cli.common;
    let budget = c.budget.map(Budget::new).unwrap_or_default();
    let kmax = c.kmax.map(|k| k as usize);
    match &cli.command {
        Command::ReproAppendix => commands::repro_appendix(kmax.unwrap_or(8), &budget),
        Command::Tower => commands::tower(&scenario(c)?),
        Command::Intersect { a, b, model } => commands::intersect(&scenario(c)?, a, b, *model),
        Command::Nef { divisor, line } => commands::nef(&scenario(c)?, divisor.as_deref(), line.as_deref()),
        Command::Zariski { divisor } => commands::zariski(&scenario(c)?, divisor.as_deref()),
        Command::Volume { divisor } => commands::volume(&scenario(c)?, divisor.as_deref()),
        Command::Bdeg { bdiv, line } => commands::bdeg(&scenario(c)?, bdiv.as_deref(), kmax, line.as_deref()),
        Command::ToricHs(t) => {
            let (m, k) = metric(c, t)?;
            commands::toric_hs(&m, k, &budget)
        }
        Command::ToricCw(t) => {
            let (m, k) = metric(c, t)?;
            commands::toric_cw(&m, k, &budget)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = report.render(cli.common.format);
            match &cli.common.output {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}

//! Command-line interface: analyze a data file, or draw seeded samples
//! from one of the tail laws.
//!
//! Exit codes: 0 on full success, 2 when the report carries per-cell
//! failures (partial results were still printed), 1 on any fatal error
//! including bad usage.

use clap::{Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use tailineq::dist::{GpdParams, ParetoParams, PpdParams, TailModel};
use tailineq::measures::Measure;
use tailineq::pipeline::{run_pipeline, RunConfig};
use tailineq::simulate;
use tailineq::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tailineq",
    version,
    about = "Inequality measures for heavy-tailed data: empirical body, parametric tail",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Input file: newline-delimited decimals, or CSV with a header row.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// CSV column to read, by header name or 0-based index.
    #[arg(long, value_name = "NAME|IDX", default_value = "0")]
    column: String,

    /// Tail fraction in (0, 0.5); the top floor(alpha*n) points form the tail.
    #[arg(long, value_name = "F", default_value_t = 0.1)]
    alpha: f64,

    /// Tail family: gpd, pa, ppd, all, or auto (representativeness pick).
    #[arg(long, value_name = "FAMILY", default_value = "auto")]
    tail: String,

    /// Comma-separated subset of gini,ge0,a1,qsr.
    #[arg(long, value_name = "LIST", default_value = "gini,ge0,a1,qsr")]
    measures: String,

    /// Output format: table or json.
    #[arg(long, value_name = "FORMAT", default_value = "table")]
    output: String,

    /// Accepted for interface symmetry; analysis is deterministic and
    /// ignores it. Only the simulate subcommand consumes a seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Scale the reported MAD by 1.4826 (consistent for a normal sigma).
    #[arg(long)]
    scaled_mad: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded inverse-transform draws from one tail family,
    /// one value per line. Identical inputs give identical bytes.
    Simulate {
        /// Family: gpd, pa, or ppd.
        #[arg(long, value_name = "FAMILY")]
        family: String,

        /// Comma-separated key=value parameters: "sigma=1,gamma=0.5" (gpd),
        /// "gamma=0.5" (pa), "gamma=0.5,c=0.3,tau=1" (ppd).
        #[arg(long, value_name = "K=V,...")]
        params: String,

        /// Number of draws.
        #[arg(long, value_name = "N")]
        n: usize,

        /// 64-bit PRNG seed (ChaCha12).
        #[arg(long, value_name = "S")]
        seed: u64,

        /// Output path; "-" writes to stdout.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

enum OutputFormat {
    Table,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" => Ok(OutputFormat::Table),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown output format '{other}' (expected table or json)"
            ))),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(Command::Simulate {
        family,
        params,
        n,
        seed,
        out,
    }) = cli.command
    {
        run_simulate(&family, &params, n, seed, &out)?;
        return Ok(ExitCode::SUCCESS);
    }

    let input = cli.input.ok_or_else(|| {
        Error::Config("--input is required (or use the simulate subcommand)".into())
    })?;
    let format: OutputFormat = cli.output.parse()?;
    let config = RunConfig {
        input,
        column: cli.column.parse()?,
        alpha: cli.alpha,
        tail: cli.tail.parse()?,
        measures: parse_measures(&cli.measures)?,
        scaled_mad: cli.scaled_mad,
    };

    let report = run_pipeline(&config)?;
    match format {
        OutputFormat::Table => print!("{}", report.to_table()),
        OutputFormat::Json => print!("{}", report.to_json()?),
    }
    Ok(if report.has_failures() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn parse_measures(list: &str) -> Result<Vec<Measure>> {
    let mut measures = Vec::new();
    for part in list.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let measure: Measure = part.parse()?;
        if !measures.contains(&measure) {
            measures.push(measure);
        }
    }
    if measures.is_empty() {
        return Err(Error::Config("no measures requested".into()));
    }
    Ok(measures)
}

fn run_simulate(family: &str, params: &str, n: usize, seed: u64, out: &Path) -> Result<()> {
    if n == 0 {
        return Err(Error::Config("--n must be at least 1".into()));
    }
    let model = build_model(family, params)?;
    let text = simulate::render_lines(&simulate::simulate(&model, n, seed));
    if out == Path::new("-") {
        print!("{text}");
    } else {
        std::fs::write(out, text)
            .map_err(|e| Error::Ingest(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(())
}

fn build_model(family: &str, params: &str) -> Result<TailModel> {
    let mut map: BTreeMap<String, f64> = BTreeMap::new();
    for part in params.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("parameter '{part}' is not key=value")))?;
        let parsed: f64 = value.trim().parse().map_err(|_| {
            Error::Config(format!(
                "parameter '{}' has non-numeric value '{}'",
                key.trim(),
                value.trim()
            ))
        })?;
        map.insert(key.trim().to_ascii_lowercase(), parsed);
    }

    let family_key = family.trim().to_ascii_lowercase();
    let mut take = |key: &str| {
        map.remove(key).ok_or_else(|| {
            Error::Config(format!("missing parameter '{key}' for family '{family_key}'"))
        })
    };
    let model = match family.trim().to_ascii_lowercase().as_str() {
        "gpd" => TailModel::Gpd(GpdParams::new(take("sigma")?, take("gamma")?)?),
        "pa" => TailModel::Pareto(ParetoParams::new(take("gamma")?)?),
        "ppd" => TailModel::Ppd(PpdParams::new(take("gamma")?, take("c")?, take("tau")?)?),
        other => {
            return Err(Error::Config(format!(
                "unknown family '{other}' (expected gpd, pa, or ppd)"
            )))
        }
    };
    if !map.is_empty() {
        let extra = map.keys().cloned().collect::<Vec<_>>().join(", ");
        return Err(Error::Config(format!(
            "unknown parameters for '{family}': {extra}"
        )));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tailineq::dist::TailFamily;

    #[test]
    fn measure_list_parsing() {
        let all = parse_measures("gini,ge0,a1,qsr").unwrap();
        assert_eq!(all, Measure::ALL.to_vec());

        let subset = parse_measures(" gini , qsr ").unwrap();
        assert_eq!(subset, vec![Measure::Gini, Measure::Qsr]);

        let deduped = parse_measures("gini,gini").unwrap();
        assert_eq!(deduped, vec![Measure::Gini]);

        assert!(parse_measures("gini,variance").is_err());
        assert!(parse_measures(" , ").is_err());
    }

    #[test]
    fn model_building_from_kv_params() {
        let gpd = build_model("gpd", "sigma=2,gamma=0.5").unwrap();
        assert_eq!(gpd.family(), TailFamily::Gpd);

        let pa = build_model("PA", " gamma = 0.5 ").unwrap();
        assert_eq!(pa.family(), TailFamily::Pareto);

        let ppd = build_model("ppd", "gamma=0.5,c=0.3,tau=1").unwrap();
        assert_eq!(ppd.family(), TailFamily::Ppd);

        assert!(build_model("pa", "gamma").is_err(), "not key=value");
        assert!(build_model("pa", "gamma=abc").is_err(), "non-numeric");
        assert!(build_model("pa", "").is_err(), "missing gamma");
        assert!(build_model("pa", "gamma=0.5,rho=1").is_err(), "extra key");
        assert!(build_model("weibull", "k=1").is_err(), "unknown family");
        assert!(build_model("gpd", "sigma=-1,gamma=0.5").is_err());
    }

    #[test]
    fn cli_parses_analyze_and_simulate_forms() {
        let cli = Cli::try_parse_from([
            "tailineq", "--input", "x.csv", "--alpha", "0.2", "--tail", "all",
        ])
        .unwrap();
        assert!(cli.command.is_none());
        assert_eq!(cli.alpha, 0.2);
        assert_eq!(cli.tail, "all");
        assert_eq!(cli.output, "table");

        let cli = Cli::try_parse_from([
            "tailineq", "simulate", "--family", "pa", "--params", "gamma=0.5", "--n", "100",
            "--seed", "7", "--out", "-",
        ])
        .unwrap();
        assert!(matches!(cli.command, Some(Command::Simulate { n: 100, .. })));

        // Analyze flags conflict with the subcommand.
        assert!(Cli::try_parse_from([
            "tailineq", "simulate", "--family", "pa", "--params", "gamma=0.5", "--n", "5",
            "--seed", "1", "--out", "-", "--input", "x.csv",
        ])
        .is_err());
    }
}

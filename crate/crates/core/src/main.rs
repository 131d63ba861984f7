//! `eurlab` command line: check, scan, bound, minimize, verify-csv.
//!
//! Every subcommand also accepts `--config FILE` with flat `key=value` lines
//! mirroring the long flag names; explicit flags override file values.
//! Exit codes: 0 ok, 1 usage/config error, 2 detection under
//! `--fail-on-detect`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use eurlab::cli::{
    self, BoundQuery, CheckConfig, GridAxis, MinimizeConfig, ScanConfig, ScanFamily, ScanId,
};
use eurlab::criteria::{CriterionReport, Verdict};
use eurlab::states::StateFamilySpec;

#[derive(Parser)]
#[command(
    name = "eurlab",
    version,
    about = "Entropic uncertainty relation bounds and entanglement criteria"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate entanglement/steering criteria on one state
    Check(CheckArgs),
    /// Sweep a state family over a parameter grid and write a CSV file
    Scan(ScanArgs),
    /// Print the EUR lower bound for a measurement set
    Bound(BoundArgs),
    /// Minimize the entropy sum over pure states (tightness certification)
    Minimize(MinimizeArgs),
    /// Recompute the verdicts inside a scan CSV and fail on any mismatch
    VerifyCsv(VerifyCsvArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Flat key=value config file; flags override file entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// State family: bell, eps, qudit, ghz, w, three_qubit
    #[arg(long)]
    family: Option<String>,
    /// Epsilon for the eps family
    #[arg(long)]
    eps: Option<f64>,
    /// lambda0 (ghz, w, three_qubit)
    #[arg(long)]
    l0: Option<f64>,
    /// lambda1 (three_qubit)
    #[arg(long)]
    l1: Option<f64>,
    /// lambda2 (w, three_qubit)
    #[arg(long)]
    l2: Option<f64>,
    /// lambda3 (three_qubit)
    #[arg(long)]
    l3: Option<f64>,
    /// lambda4 (three_qubit)
    #[arg(long)]
    l4: Option<f64>,
    /// Relative phase phi (three_qubit)
    #[arg(long)]
    phi: Option<f64>,
    /// Comma-separated Schmidt coefficients (qudit family)
    #[arg(long)]
    lambdas: Option<String>,
    /// Comma-separated basis tokens applied on every site
    #[arg(long)]
    bases: Option<String>,
    /// Comma-separated criterion tokens
    #[arg(long)]
    criteria: Option<String>,
    /// Emit the reports as JSON instead of text lines
    #[arg(long)]
    json: bool,
    /// Exit with status 2 when any criterion is violated
    #[arg(long)]
    fail_on_detect: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scan id: eps_family, ghz, w_plane, custom
    #[arg(long)]
    scan_id: Option<String>,
    /// Interior grid points per default axis
    #[arg(long)]
    steps: Option<usize>,
    /// Family for custom scans: eps, ghz, w
    #[arg(long)]
    family: Option<String>,
    /// Explicit axis as param=min:max:steps (repeatable)
    #[arg(long = "grid")]
    grid: Vec<String>,
    #[arg(long)]
    bases: Option<String>,
    #[arg(long)]
    criteria: Option<String>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Site dimension
    #[arg(long)]
    d: Option<usize>,
    /// Use the first COUNT mutually unbiased bases
    #[arg(long)]
    mubs: Option<usize>,
    /// Comma-separated basis tokens (alternative to --mubs)
    #[arg(long)]
    bases: Option<String>,
}

#[derive(Args)]
struct MinimizeArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    mubs: Option<usize>,
    #[arg(long)]
    bases: Option<String>,
    /// Number of subsystems measured jointly (1 = single-system EUR)
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyCsvArgs {
    path: PathBuf,
}

type ConfigMap = BTreeMap<String, String>;

fn load_config(path: &Option<PathBuf>) -> Result<ConfigMap, eurlab::Error> {
    match path {
        Some(p) => cli::load_config_file(p),
        None => Ok(ConfigMap::new()),
    }
}

/// Flag value if present, else the parsed config-file entry.
fn merged<T: FromStr>(
    flag: Option<T>,
    map: &ConfigMap,
    key: &str,
) -> Result<Option<T>, eurlab::Error> {
    if flag.is_some() {
        return Ok(flag);
    }
    map.get(key)
        .map(|raw| {
            raw.parse::<T>()
                .map_err(|_| eurlab::Error::Config(format!("bad value `{raw}` for `{key}`")))
        })
        .transpose()
}

fn required<T>(value: Option<T>, key: &str) -> Result<T, eurlab::Error> {
    value.ok_or_else(|| eurlab::Error::Config(format!("missing required parameter `{key}`")))
}

fn parse_family(
    name: &str,
    get: impl Fn(&str) -> Result<Option<f64>, eurlab::Error>,
    lambdas: Option<String>,
) -> Result<StateFamilySpec, eurlab::Error> {
    let need = |key: &str| -> Result<f64, eurlab::Error> {
        get(key)?.ok_or_else(|| {
            eurlab::Error::Config(format!(
                "missing required parameter `{key}` for family `{name}`"
            ))
        })
    };
    Ok(match name {
        "bell" => StateFamilySpec::BellPhiPlus,
        "eps" => StateFamilySpec::EpsFamily { eps: need("eps")? },
        "ghz" => StateFamilySpec::Ghz {
            lambda0: need("l0")?,
        },
        "w" => StateFamilySpec::W {
            lambda0: need("l0")?,
            lambda2: need("l2")?,
        },
        "three_qubit" => StateFamilySpec::ThreeQubitGeneral {
            lambdas: [
                need("l0")?,
                need("l1")?,
                need("l2")?,
                need("l3")?,
                need("l4")?,
            ],
            phi: need("phi")?,
        },
        "qudit" => {
            let raw = lambdas.ok_or_else(|| {
                eurlab::Error::Config(
                    "missing required parameter `lambdas` for family `qudit`".into(),
                )
            })?;
            let values = raw
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| eurlab::Error::Config(format!("bad value `{t}` in `lambdas`")))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            StateFamilySpec::QuditSchmidt { lambdas: values }
        }
        _ => {
            return Err(eurlab::Error::Config(format!(
                "unknown family `{name}` (expected bell, eps, qudit, ghz, w, three_qubit)"
            )))
        }
    })
}

#[derive(Serialize)]
struct JsonEntry<'a> {
    criterion: &'a str,
    #[serde(flatten)]
    report: &'a CriterionReport,
}

fn run_check(args: CheckArgs) -> Result<u8, eurlab::Error> {
    let map = load_config(&args.config)?;
    let family_name: String = required(merged(args.family, &map, "family")?, "family")?;
    let getter = |key: &str| match key {
        "eps" => merged(args.eps, &map, "eps"),
        "l0" => merged(args.l0, &map, "l0"),
        "l1" => merged(args.l1, &map, "l1"),
        "l2" => merged(args.l2, &map, "l2"),
        "l3" => merged(args.l3, &map, "l3"),
        "l4" => merged(args.l4, &map, "l4"),
        "phi" => merged(args.phi, &map, "phi"),
        _ => Ok(None),
    };
    let lambdas = merged(args.lambdas, &map, "lambdas")?;
    let family = parse_family(&family_name, getter, lambdas)?;
    let bases = merged(args.bases, &map, "bases")?.unwrap_or_else(|| "Z,X,Y".into());
    let criteria: String = required(merged(args.criteria, &map, "criteria")?, "criteria")?;

    let reports = cli::run_check(&CheckConfig {
        family,
        bases,
        criteria,
    })?;

    if args.json {
        let entries: Vec<JsonEntry> = reports
            .iter()
            .map(|(token, report)| JsonEntry {
                criterion: token,
                report,
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&entries)
                .map_err(|e| eurlab::Error::Config(e.to_string()))?
        );
    } else {
        for (token, report) in &reports {
            println!("{}", cli::format_report_line(token, report));
        }
    }

    let detected = reports.iter().any(|(_, r)| r.verdict == Verdict::Violated);
    Ok(if args.fail_on_detect && detected { 2 } else { 0 })
}

fn parse_grid_axis(raw: &str) -> Result<GridAxis, eurlab::Error> {
    let bad = || eurlab::Error::Config(format!("bad grid axis `{raw}` (want param=min:max:steps)"));
    let (param, rest) = raw.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(GridAxis {
        param: param.trim().to_string(),
        min: parts[0].trim().parse().map_err(|_| bad())?,
        max: parts[1].trim().parse().map_err(|_| bad())?,
        steps: parts[2].trim().parse().map_err(|_| bad())?,
    })
}

fn run_scan(args: ScanArgs) -> Result<u8, eurlab::Error> {
    let map = load_config(&args.config)?;
    let scan_id = ScanId::parse(&required::<String>(
        merged(args.scan_id, &map, "scan_id")?,
        "scan_id",
    )?)?;
    let steps = merged(args.steps, &map, "steps")?.unwrap_or(99);
    let family = merged(args.family, &map, "family")?
        .map(|name: String| ScanFamily::parse(&name))
        .transpose()?;
    let mut grid_tokens: Vec<String> = args.grid;
    if grid_tokens.is_empty() {
        if let Some(raw) = map.get("grid") {
            grid_tokens = raw.split(';').map(str::to_string).collect();
        }
    }
    let grid = grid_tokens
        .iter()
        .map(|raw| parse_grid_axis(raw))
        .collect::<Result<Vec<_>, _>>()?;
    let bases = merged(args.bases, &map, "bases")?.unwrap_or_else(|| "Z,X,Y".into());
    let criteria = merged(args.criteria, &map, "criteria")?
        .unwrap_or_else(|| scan_id.default_criteria().into());
    let output_path: PathBuf = required(merged(args.out, &map, "out")?, "out")?;
    let seed = merged(args.seed, &map, "seed")?.unwrap_or(0);

    let config = ScanConfig {
        scan_id,
        family,
        grid,
        steps,
        bases,
        criteria,
        output_path: output_path.clone(),
        seed,
    };
    let summary = cli::run_scan(&config)?;
    println!(
        "wrote {} rows ({} feasible, {} infeasible) to {}",
        summary.rows,
        summary.feasible,
        summary.infeasible,
        output_path.display()
    );
    for (token, count) in &summary.violated_counts {
        println!("{token}: {count}/{} violated", summary.feasible);
    }
    Ok(0)
}

fn bound_query(
    map: &ConfigMap,
    d: Option<usize>,
    mubs: Option<usize>,
    bases: Option<String>,
) -> Result<BoundQuery, eurlab::Error> {
    let dim = required(merged(d, map, "d")?, "d")?;
    let mubs = merged(mubs, map, "mubs")?;
    let bases = merged(bases, map, "bases")?;
    match (mubs, bases) {
        (Some(count), None) => Ok(BoundQuery::Mubs { dim, count }),
        (None, Some(tokens)) => Ok(BoundQuery::Bases { dim, tokens }),
        (None, None) => Err(eurlab::Error::Config(
            "provide either `mubs` or `bases`".into(),
        )),
        (Some(_), Some(_)) => Err(eurlab::Error::Config(
            "`mubs` and `bases` are mutually exclusive".into(),
        )),
    }
}

fn run_bound(args: BoundArgs) -> Result<u8, eurlab::Error> {
    let map = load_config(&args.config)?;
    let query = bound_query(&map, args.d, args.mubs, args.bases)?;
    let bound = cli::run_bound(&query)?;
    println!("{}", cli::format_bound(&bound));
    Ok(0)
}

fn run_minimize(args: MinimizeArgs) -> Result<u8, eurlab::Error> {
    let map = load_config(&args.config)?;
    let query = bound_query(&map, args.d, args.mubs, args.bases)?;
    let config = MinimizeConfig {
        query,
        sites: merged(args.sites, &map, "sites")?.unwrap_or(1),
        restarts: merged(args.restarts, &map, "restarts")?.unwrap_or(64),
        seed: merged(args.seed, &map, "seed")?.unwrap_or(0),
    };
    let outcome = cli::run_minimize(&config)?;
    println!("{}", cli::format_minimize(&outcome));
    Ok(0)
}

fn run_verify_csv(args: VerifyCsvArgs) -> Result<u8, eurlab::Error> {
    let (rows, groups) = cli::verify_csv(&args.path)?;
    println!(
        "{}: {rows} rows, {groups} criterion column groups consistent",
        args.path.display()
    );
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Check(args) => run_check(args),
        Command::Scan(args) => run_scan(args),
        Command::Bound(args) => run_bound(args),
        Command::Minimize(args) => run_minimize(args),
        Command::VerifyCsv(args) => run_verify_csv(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

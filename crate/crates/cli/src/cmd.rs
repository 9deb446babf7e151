//! The four subcommands: generate, fit, eval, benchmark.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use histlda::bench::{self, Method, SyntheticSpec};
use histlda::{fit, FitConfig, Range, Rng};

use crate::data::{build_collection, read_data_csv, write_data_csv, write_weights_json, WeightsFile};
use crate::error::{CliError, CliResult};
use crate::model_file::ModelFile;

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `t0,t1`, got `{s}`"));
    }
    let t0: f64 = parts[0].trim().parse().map_err(|_| format!("bad lower bound `{}`", parts[0]))?;
    let t1: f64 = parts[1].trim().parse().map_err(|_| format!("bad upper bound `{}`", parts[1]))?;
    Range::new(t0, t1).map_err(|e| e.to_string())
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Number of units in the collection
    #[arg(long)]
    units: usize,
    /// Observations per unit
    #[arg(long = "per-unit")]
    per_unit: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (a `.weights.json` sidecar lands next to it)
    #[arg(long)]
    out: PathBuf,
    /// Half-open observation range `t0,t1`
    #[arg(long, value_parser = parse_range, default_value = "0,2")]
    range: Range,
    /// Sidecar path override for the true component weights
    #[arg(long = "weights-out")]
    weights_out: Option<PathBuf>,
    /// Dirichlet concentration of the per-unit component weights
    #[arg(long, default_value_t = 1.0)]
    concentration: f64,
}

pub fn run_generate(args: GenerateArgs) -> CliResult<()> {
    if args.units == 0 || args.per_unit == 0 {
        return Err(CliError::usage(
            "--units and --per-unit must both be at least 1",
        ));
    }
    let spec = SyntheticSpec {
        range: args.range,
        units: args.units,
        per_unit: args.per_unit,
        dirichlet_concentration: args.concentration,
        seed: args.seed,
    };
    let mut rng = Rng::from_seed(spec.seed);
    let (collection, weights) =
        bench::generate_collection(&spec, &mut rng).map_err(|e| CliError::usage(e.to_string()))?;

    let unit_ids: Vec<String> = (1..=args.units).map(|u| format!("u{u}")).collect();
    let rows: Vec<(String, f64)> = collection
        .units()
        .iter()
        .zip(collection.values())
        .map(|(&u, &t)| (unit_ids[u].clone(), t))
        .collect();
    write_data_csv(&args.out, &rows)?;

    let weights_path = args
        .weights_out
        .unwrap_or_else(|| args.out.with_extension("weights.json"));
    write_weights_json(
        &weights_path,
        &WeightsFile {
            schema: 1,
            range: [args.range.lower(), args.range.upper()],
            seed: args.seed,
            unit_ids,
            weights,
        },
    )?;
    println!(
        "wrote {} observations for {} units to {}",
        collection.len(),
        args.units,
        args.out.display()
    );
    Ok(())
}

#[derive(Args)]
pub struct FitArgs {
    /// Input CSV with header `unit_id,t`
    #[arg(long)]
    data: PathBuf,
    /// Number of basis histograms
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Largest bin count considered per basis
    #[arg(long = "w-max", default_value_t = 200)]
    w_max: usize,
    /// Burn-in sweeps before the estimation phase
    #[arg(long, default_value_t = 500)]
    sweeps: usize,
    /// Assignment sweeps averaged into the estimates
    #[arg(long, default_value_t = 100)]
    np: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output model path (JSON)
    #[arg(long)]
    out: PathBuf,
    /// Keep the Dirichlet concentrations at their initial values
    #[arg(long = "fix-hypers")]
    fix_hypers: bool,
    /// Half-open observation range `t0,t1` (never inferred from data)
    #[arg(long, value_parser = parse_range, default_value = "0,2")]
    range: Range,
    #[arg(long, default_value_t = 0.5)]
    alpha0: f64,
    #[arg(long, default_value_t = 0.5)]
    beta0: f64,
}

fn fit_config(args: &FitArgs) -> FitConfig {
    FitConfig {
        k_bases: args.k,
        w_max: args.w_max,
        burn_in_sweeps: args.sweeps,
        posterior_samples: args.np,
        alpha0: args.alpha0,
        beta0: args.beta0,
        hyper_update: !args.fix_hypers,
        seed: args.seed,
        ..FitConfig::default()
    }
}

pub fn run_fit(args: FitArgs) -> CliResult<()> {
    let rows = read_data_csv(&args.data)?;
    let (collection, unit_ids) = build_collection(&rows, args.range)?;
    let cfg = fit_config(&args);
    let result = fit(&collection, &cfg)?;

    let model = ModelFile::from_fit(&result, args.range, unit_ids, &cfg);
    model.save(&args.out)?;

    let final_log_joint = result.log_joint_trace.last().copied().unwrap_or(f64::NAN);
    println!("log_joint {final_log_joint}");
    println!("alpha {}", result.alpha);
    println!("beta {}", result.beta);
    println!(
        "bin_counts {}",
        model
            .bin_counts
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    println!("model {}", args.out.display());
    Ok(())
}

#[derive(Args)]
pub struct EvalArgs {
    /// Fitted model (JSON)
    #[arg(long)]
    model: PathBuf,
    /// Unit identifier as it appears in the data file
    #[arg(long)]
    unit: String,
    #[arg(long = "grid-points", default_value_t = 2001)]
    grid_points: usize,
    /// Output CSV path of `t,density` pairs
    #[arg(long)]
    out: PathBuf,
}

pub fn run_eval(args: EvalArgs) -> CliResult<()> {
    if args.grid_points < 2 {
        return Err(CliError::usage("--grid-points must be at least 2"));
    }
    let model = ModelFile::load(&args.model)?;
    let index = model
        .unit_ids
        .iter()
        .position(|u| *u == args.unit)
        .ok_or_else(|| {
            CliError::usage(format!(
                "unknown unit id `{}` ({} units in model)",
                args.unit,
                model.unit_ids.len()
            ))
        })?;
    let density = model.unit_density(index)?;
    let range = model.range()?;

    let mut out = String::from("t,density\n");
    let step = range.width() / (args.grid_points - 1) as f64;
    let top = range.upper().next_down();
    for i in 0..args.grid_points {
        let t = range.lower() + step * i as f64;
        let value = density
            .density(t.min(top))
            .map_err(|e| CliError::data(e.to_string()))?;
        out.push_str(&format!("{t},{value}\n"));
    }
    fs::write(&args.out, out)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", args.out.display())))?;
    println!("wrote {} grid points to {}", args.grid_points, args.out.display());
    Ok(())
}

#[derive(Args)]
pub struct BenchmarkArgs {
    /// Comma-separated per-unit data sizes, e.g. `50,100,300`
    #[arg(long = "m-list", value_delimiter = ',', required = true)]
    m_list: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    units: usize,
    #[arg(long, default_value_t = bench::DEFAULT_REPLICATES)]
    replicates: usize,
    /// Comma-separated subset of: histlda, knuth, br
    #[arg(long, value_delimiter = ',', default_value = "histlda,knuth,br")]
    methods: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reports land at `<prefix>.json` and `<prefix>.csv`
    #[arg(long = "out-prefix")]
    out_prefix: PathBuf,
    #[arg(long, value_parser = parse_range, default_value = "0,2")]
    range: Range,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long = "w-max", default_value_t = 200)]
    w_max: usize,
    #[arg(long, default_value_t = 500)]
    sweeps: usize,
    #[arg(long, default_value_t = 100)]
    np: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha0: f64,
    #[arg(long, default_value_t = 0.5)]
    beta0: f64,
    /// Record wall-clock timings in the report files (makes them
    /// run-dependent)
    #[arg(long)]
    timings: bool,
}

pub fn run_benchmark(args: BenchmarkArgs) -> CliResult<()> {
    let methods: Vec<Method> = args
        .methods
        .iter()
        .map(|name| {
            Method::parse(name).ok_or_else(|| {
                CliError::usage(format!(
                    "unknown method `{name}`; valid methods: histlda, knuth, br"
                ))
            })
        })
        .collect::<CliResult<_>>()?;
    if args.m_list.contains(&0) || args.units == 0 || args.replicates == 0 {
        return Err(CliError::usage(
            "--m-list entries, --units, and --replicates must all be at least 1",
        ));
    }
    let spec = SyntheticSpec {
        range: args.range,
        units: args.units,
        per_unit: args.m_list[0],
        dirichlet_concentration: 1.0,
        seed: args.seed,
    };
    let cfg = FitConfig {
        k_bases: args.k,
        w_max: args.w_max,
        burn_in_sweeps: args.sweeps,
        posterior_samples: args.np,
        alpha0: args.alpha0,
        beta0: args.beta0,
        seed: args.seed,
        ..FitConfig::default()
    };
    let report = bench::run_benchmark(&spec, &methods, &args.m_list, args.replicates, &cfg)?;
    let report = if args.timings {
        report
    } else {
        report.without_timings()
    };

    let json_path = args.out_prefix.with_extension("json");
    let csv_path = args.out_prefix.with_extension("csv");
    fs::write(&json_path, report.to_json_string())
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", json_path.display())))?;
    fs::write(&csv_path, report.to_csv_string())
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", csv_path.display())))?;

    for cell in &report.cells {
        match (cell.mean_ise, cell.std_ise) {
            (Some(mean), Some(std)) => {
                println!("{} m={} ise {mean:.6} +/- {std:.6}", cell.method.name(), cell.m)
            }
            _ => println!("{} m={} failed on every replicate", cell.method.name(), cell.m),
        }
    }
    println!("report {} {}", json_path.display(), csv_path.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parser_accepts_and_rejects() {
        let r = parse_range("0,2").unwrap();
        assert_eq!((r.lower(), r.upper()), (0.0, 2.0));
        let r = parse_range(" -1.5 , 3 ").unwrap();
        assert_eq!((r.lower(), r.upper()), (-1.5, 3.0));
        assert!(parse_range("2,0").is_err());
        assert!(parse_range("1").is_err());
        assert!(parse_range("a,b").is_err());
    }
}

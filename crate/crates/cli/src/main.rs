use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use addhaz::data::{BetaPrior, SurvivalDataset, ValidationOptions};
use addhaz::fit::{fit, fit_baseline, AlphaSpec, BaselineSpec, FitOptions, DEFAULT_OMEGA};
use addhaz::hybrid::{beta_mode, hpd_truncated_normal, pseudo_posterior, sigma_hat, ModeRule};
use addhaz::io::{read_dataset_file, read_nickel_csv};
use addhaz::lin_ying::ly_estimate;
use addhaz::numeric::format_sig;
use addhaz::simulate::{
    reference_baseline_design, run_baseline_experiment, run_beta_experiment, GridSpec, SimConfig, REFERENCE_MU_GRID,
    REFERENCE_OMEGA_GRID,
};
use addhaz::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

const SEED_ENV: &str = "ADDHAZ_SEED";
const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "addhaz", version, about = "Hybrid Bayesian estimation for the additive hazards model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit β (and optionally the baseline) to a CSV dataset.
    Fit(RunArgs),
    /// Baseline increment posteriors for a given or estimated β.
    Baseline(RunArgs),
    /// Replicated simulation study.
    Simulate(RunArgs),
    /// HPD interval of a normal truncated to [0, ∞).
    Hpd(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Table1,
    Table2,
    Table3,
    Table4,
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Preset as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Default)]
struct RunArgs {
    /// Flat `key = value` file; keys are the long flag names.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV with header time,event,<covariates>.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Treat the input as time,event,AFE,YFE,EXP and apply the nickel transforms.
    #[arg(long)]
    nickel: bool,
    #[arg(long)]
    allow_signed_covariates: bool,
    /// Comma-separated quantile probabilities of the event times.
    #[arg(long)]
    grid_quantiles: Option<String>,
    /// Comma-separated interior cut points.
    #[arg(long)]
    grid_cuts: Option<String>,
    #[arg(long)]
    t_final: Option<f64>,
    /// Prior mean of β, a scalar (broadcast) or one value per covariate.
    #[arg(long, allow_hyphen_values = true)]
    prior_mu: Option<String>,
    /// Prior variance ω in C_β = ω·I.
    #[arg(long)]
    prior_omega: Option<f64>,
    /// Full prior covariance, rows separated by ';'.
    #[arg(long)]
    prior_cov: Option<String>,
    /// α(t) at the grid boundaries s_1..s_m.
    #[arg(long)]
    alpha_at_cuts: Option<String>,
    #[arg(long)]
    gamma_c: Option<f64>,
    /// Fixed β for `baseline`; estimated from the data when absent.
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    coverage: Option<f64>,
    #[arg(long)]
    mode_rule: Option<String>,
    /// Falls back to ADDHAZ_SEED.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    preset: Option<Preset>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Output directory; reports go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    mean: Option<f64>,
    #[arg(long)]
    sd: Option<f64>,
}

const CONFIG_KEYS: &[&str] = &[
    "input",
    "nickel",
    "allow-signed-covariates",
    "grid-quantiles",
    "grid-cuts",
    "t-final",
    "prior-mu",
    "prior-omega",
    "prior-cov",
    "alpha-at-cuts",
    "gamma-c",
    "beta",
    "coverage",
    "mode-rule",
    "seed",
    "preset",
    "n",
    "replicates",
    "out",
    "mean",
    "sd",
];

struct ConfigFile(HashMap<String, String>);

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<Self> {
        let mut map = HashMap::new();
        let Some(path) = path else {
            return Ok(Self(map));
        };
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key = value", lineno + 1)))?;
            let key = k.trim().replace('_', "-");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::InvalidConfig(format!("line {}: unknown key {key:?}", lineno + 1)));
            }
            map.insert(key, v.trim().to_string());
        }
        Ok(Self(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidConfig(format!("config value {key} = {v:?} is invalid"))),
        }
    }

    fn flag(&self, key: &str) -> Result<bool> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }
}

/// Command-line values merged over the config file.
struct Settings {
    args: RunArgs,
}

impl Settings {
    fn resolve(mut args: RunArgs) -> Result<Self> {
        let cfg = ConfigFile::load(args.config.as_deref())?;
        macro_rules! merge {
            ($field:ident, $key:literal) => {
                if args.$field.is_none() {
                    args.$field = cfg.get($key)?;
                }
            };
        }
        merge!(input, "input");
        merge!(grid_quantiles, "grid-quantiles");
        merge!(grid_cuts, "grid-cuts");
        merge!(t_final, "t-final");
        merge!(prior_mu, "prior-mu");
        merge!(prior_omega, "prior-omega");
        merge!(prior_cov, "prior-cov");
        merge!(alpha_at_cuts, "alpha-at-cuts");
        merge!(gamma_c, "gamma-c");
        merge!(beta, "beta");
        merge!(coverage, "coverage");
        merge!(mode_rule, "mode-rule");
        merge!(seed, "seed");
        merge!(preset, "preset");
        merge!(n, "n");
        merge!(replicates, "replicates");
        merge!(out, "out");
        merge!(mean, "mean");
        merge!(sd, "sd");
        args.nickel |= cfg.flag("nickel")?;
        args.allow_signed_covariates |= cfg.flag("allow-signed-covariates")?;
        if args.seed.is_none() {
            if let Ok(v) = std::env::var(SEED_ENV) {
                args.seed = Some(
                    v.trim()
                        .parse()
                        .map_err(|_| Error::InvalidConfig(format!("{SEED_ENV} = {v:?} is not a u64")))?,
                );
            }
        }
        Ok(Self { args })
    }

    fn coverage(&self) -> f64 {
        self.args.coverage.unwrap_or(0.95)
    }

    fn seed(&self) -> u64 {
        self.args.seed.unwrap_or(DEFAULT_SEED)
    }

    fn mode_rule(&self) -> Result<ModeRule> {
        match self.args.mode_rule.as_deref() {
            None | Some("clamp") => Ok(ModeRule::Clamp),
            Some("qp") => Ok(ModeRule::Qp),
            Some(other) => Err(Error::InvalidConfig(format!("mode-rule must be clamp or qp, got {other:?}"))),
        }
    }

    fn dataset(&self) -> Result<SurvivalDataset> {
        let path = self
            .args
            .input
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("--input is required".into()))?;
        if self.args.nickel {
            let f = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            return read_nickel_csv(std::io::BufReader::new(f));
        }
        read_dataset_file(
            path,
            ValidationOptions {
                allow_signed_covariates: self.args.allow_signed_covariates,
            },
        )
    }

    fn prior(&self, k: usize) -> Result<Option<BetaPrior>> {
        let a = &self.args;
        if a.prior_mu.is_none() && a.prior_omega.is_none() && a.prior_cov.is_none() {
            return Ok(None);
        }
        let mu = match &a.prior_mu {
            None => vec![1.0; k],
            Some(s) => {
                let v = parse_list(s, "prior-mu")?;
                if v.len() == 1 {
                    vec![v[0]; k]
                } else {
                    v
                }
            }
        };
        let prior = match &a.prior_cov {
            Some(s) => BetaPrior::new(mu, parse_matrix(s)?)?,
            None => BetaPrior::isotropic(mu, a.prior_omega.unwrap_or(DEFAULT_OMEGA))?,
        };
        Ok(Some(prior))
    }

    fn baseline_spec(&self) -> Result<Option<BaselineSpec>> {
        let a = &self.args;
        let grid = match (&a.grid_cuts, &a.grid_quantiles) {
            (None, None) => return Ok(None),
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig(
                    "give either --grid-cuts or --grid-quantiles, not both".into(),
                ))
            }
            (Some(c), None) => GridSpec::Cuts(parse_list(c, "grid-cuts")?),
            (None, Some(q)) => GridSpec::Quantiles(parse_list(q, "grid-quantiles")?),
        };
        let alpha = a
            .alpha_at_cuts
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("baseline estimation needs --alpha-at-cuts".into()))?;
        let c = a
            .gamma_c
            .ok_or_else(|| Error::InvalidConfig("baseline estimation needs --gamma-c".into()))?;
        Ok(Some(BaselineSpec {
            grid,
            t_final: a.t_final,
            alpha: AlphaSpec::AtCuts(parse_list(alpha, "alpha-at-cuts")?),
            c,
        }))
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("{what}: {p:?} is not a number")))
        })
        .collect()
}

fn parse_matrix(s: &str) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = s
        .split(';')
        .map(|r| parse_list(r, "prior-cov"))
        .collect::<Result<_>>()?;
    let k = rows.len();
    if rows.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidPrior("prior-cov must be square".into()));
    }
    Ok(DMatrix::from_fn(k, k, |i, j| rows[i][j]))
}

fn write_file(dir: &Path, name: &str, f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut buf = Vec::new();
    f(&mut buf)?;
    let path = dir.join(name);
    fs::write(&path, buf).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    write_file(dir, name, |b| {
        b.extend_from_slice(text.as_bytes());
        Ok(())
    })
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))
}

fn cmd_fit(s: &Settings) -> Result<()> {
    let ds = s.dataset()?;
    let opts = FitOptions {
        prior: s.prior(ds.k())?,
        coverage: s.coverage(),
        mode_rule: s.mode_rule()?,
        baseline: s.baseline_spec()?,
    };
    let result = fit(&ds, &opts)?;
    match &s.args.out {
        Some(dir) => {
            write_text(dir, "fit.json", &to_json(&result)?)?;
            write_file(dir, "coefficients.csv", |b| result.write_coefficients_csv(b))?;
            if result.grid.is_some() {
                write_file(dir, "baseline.csv", |b| result.write_baseline_csv(b))?;
            }
            write_text(dir, "report.txt", &result.to_text())?;
        }
        None => print!("{}", result.to_text()),
    }
    Ok(())
}

fn cmd_baseline(s: &Settings) -> Result<()> {
    let ds = s.dataset()?;
    let spec = s
        .baseline_spec()?
        .ok_or_else(|| Error::InvalidConfig("baseline needs --grid-cuts or --grid-quantiles".into()))?;
    let beta = match &s.args.beta {
        Some(b) => DVector::from_vec(parse_list(b, "beta")?),
        None => {
            let prior = match s.prior(ds.k())? {
                Some(p) => p,
                None => BetaPrior::default_for(ds.k(), DEFAULT_OMEGA)?,
            };
            beta_mode(&pseudo_posterior(&ly_estimate(&ds)?, &prior)?)
        }
    };
    if beta.len() != ds.k() {
        return Err(Error::DimensionMismatch {
            row: 0,
            expected: ds.k(),
            found: beta.len(),
        });
    }
    let (grid, posts) = fit_baseline(&ds, &beta, &spec)?;
    let result = addhaz::fit::FitResult {
        covariate_names: ds.covariate_names().to_vec(),
        beta_hat: beta.as_slice().to_vec(),
        hpd: Vec::new(),
        sigma_hat: Vec::new(),
        significant: Vec::new(),
        ly_beta: Vec::new(),
        ly_se: Vec::new(),
        coverage: s.coverage(),
        grid: Some(grid),
        baseline: posts,
    };
    match &s.args.out {
        Some(dir) => {
            write_file(dir, "baseline.csv", |b| result.write_baseline_csv(b))?;
            write_text(dir, "baseline.json", &to_json(&result.baseline)?)?;
        }
        None => {
            let mut buf = Vec::new();
            result.write_baseline_csv(&mut buf)?;
            print!("{}", String::from_utf8_lossy(&buf));
        }
    }
    Ok(())
}

fn cmd_simulate(s: &Settings) -> Result<()> {
    let preset = s.args.preset.unwrap_or(Preset::Table1);
    let (name, default_n, beta_table) = match preset {
        Preset::Table1 => ("table1", 100, true),
        Preset::Table2 => ("table2", 500, true),
        Preset::Table3 => ("table3", 100, false),
        Preset::Table4 => ("table4", 500, false),
    };
    let mut cfg = SimConfig::reference(s.args.n.unwrap_or(default_n), s.seed());
    if let Some(r) = s.args.replicates {
        cfg.replicates = r;
    }
    let (text, csv) = if beta_table {
        let rep = run_beta_experiment(&cfg, &REFERENCE_MU_GRID, &REFERENCE_OMEGA_GRID, s.coverage())?;
        let mut buf = Vec::new();
        rep.write_csv(&mut buf)?;
        (rep.to_text(), buf)
    } else {
        let rep = run_baseline_experiment(&cfg, &reference_baseline_design())?;
        let mut buf = Vec::new();
        rep.write_csv(&mut buf)?;
        (rep.to_text(), buf)
    };
    match &s.args.out {
        Some(dir) => {
            write_text(dir, &format!("{name}.txt"), &text)?;
            write_file(dir, &format!("{name}.csv"), |b| {
                b.extend_from_slice(&csv);
                Ok(())
            })?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_hpd(s: &Settings) -> Result<()> {
    let mean = s
        .args
        .mean
        .ok_or_else(|| Error::InvalidConfig("hpd needs --mean".into()))?;
    let sd = s.args.sd.ok_or_else(|| Error::InvalidConfig("hpd needs --sd".into()))?;
    let h = hpd_truncated_normal(mean, sd, s.coverage())?;
    println!(
        "b_l = {}  b_u = {}  sigma_hat = {}",
        format_sig(h.lower, 6),
        format_sig(h.upper, 6),
        format_sig(sigma_hat(&h), 6)
    );
    Ok(())
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    exit_code: i32,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = |args: RunArgs, f: fn(&Settings) -> Result<()>| Settings::resolve(args).and_then(|s| f(&s));
    let outcome = match cli.command {
        Command::Fit(a) => run(a, cmd_fit),
        Command::Baseline(a) => run(a, cmd_baseline),
        Command::Simulate(a) => run(a, cmd_simulate),
        Command::Hpd(a) => run(a, cmd_hpd),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = ErrorRecord {
                error: e.code(),
                exit_code: e.exit_code(),
                message: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&record).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

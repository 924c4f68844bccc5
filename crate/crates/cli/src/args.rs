use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ginibre_core::{Beta, Statistic};
use serde::{Serialize, Serializer};

#[derive(Parser, Debug)]
#[command(
    name = "ginibre",
    version,
    about = "Extreme-eigenvalue tails of Ginibre matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Large deviation rate I_beta(t)
    Rate(RateArgs),
    /// Exact tail of the complex-ensemble spectral radius
    ExactTail(QueryArgs),
    /// Expected number of eigenvalues beyond the threshold
    ExpectedCount(QueryArgs),
    /// First-moment bracket on the tail probability
    TailBracket(QueryArgs),
    /// Monte Carlo tail estimate
    Mc(McArgs),
    /// -(1/n) log P along a list of sizes
    LdpCurve(LdpArgs),
    /// log P / (n d_n^2) on an (n, t) grid
    MdpScaling(MdpArgs),
    /// Distance of the centered edge law from its Gumbel limit
    Gumbel(GumbelArgs),
    /// Real versus complex exceedances in the real ensemble
    Saturn(SaturnArgs),
    /// Dump sampled eigenvalues
    Sample(SampleArgs),
}

fn ser_beta<S: Serializer>(b: &Beta, s: S) -> Result<S::Ok, S::Error> {
    b.serialize(s)
}

fn ser_stat<S: Serializer>(st: &Statistic, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(st.name())
}

pub fn parse_ensemble(s: &str) -> Result<Beta, String> {
    match s {
        "real" | "1" => Ok(Beta::Real),
        "complex" | "2" => Ok(Beta::Complex),
        _ => Err(format!("unknown ensemble '{s}' (real or complex)")),
    }
}

fn parse_beta(s: &str) -> Result<Beta, String> {
    let v: u8 = s
        .parse()
        .map_err(|_| format!("beta must be 1 or 2, got '{s}'"))?;
    Beta::try_from(v).map_err(|e| e.to_string())
}

fn parse_stat(s: &str) -> Result<Statistic, String> {
    s.parse().map_err(|e: ginibre_core::Error| e.to_string())
}

#[derive(Args, Debug, Serialize)]
pub struct RateArgs {
    #[arg(long, value_parser = parse_beta)]
    #[serde(serialize_with = "ser_beta")]
    pub beta: Beta,
    #[arg(long)]
    pub t: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct QueryArgs {
    #[arg(long, value_parser = parse_ensemble)]
    #[serde(serialize_with = "ser_beta")]
    pub ensemble: Beta,
    #[arg(long = "stat", value_parser = parse_stat)]
    #[serde(serialize_with = "ser_stat")]
    pub statistic: Statistic,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub t: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct RunArgs {
    #[arg(long = "seed", default_value_t = 0, alias = "master-seed")]
    pub master_seed: u64,
    /// Worker threads (default: $WORKERS, else all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// CSV destination (default: stdout, with the summary on stderr)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum McRoute {
    Matrix,
    Kostlan,
}

#[derive(Args, Debug, Serialize)]
pub struct McArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub query: QueryArgs,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = McRoute::Matrix)]
    pub route: McRoute,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct LdpArgs {
    #[arg(long, value_parser = parse_ensemble)]
    #[serde(serialize_with = "ser_beta")]
    pub ensemble: Beta,
    #[arg(long = "stat", value_parser = parse_stat)]
    #[serde(serialize_with = "ser_stat")]
    pub statistic: Statistic,
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<u64>,
    /// Trials per size; required when there is no exact route
    #[arg(long)]
    pub trials: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct MdpArgs {
    #[arg(long, value_parser = parse_ensemble)]
    #[serde(serialize_with = "ser_beta")]
    pub ensemble: Beta,
    #[arg(long = "stat", value_parser = parse_stat)]
    #[serde(serialize_with = "ser_stat")]
    pub statistic: Statistic,
    #[arg(long, default_value_t = 0.25)]
    pub d_exponent: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub t_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GumbelModeArg {
    ExactCdf,
    Mc,
}

#[derive(Args, Debug, Serialize)]
pub struct GumbelArgs {
    #[arg(long, value_parser = parse_ensemble, default_value = "complex")]
    #[serde(serialize_with = "ser_beta")]
    pub ensemble: Beta,
    #[arg(long = "stat", value_parser = parse_stat, default_value = "radius")]
    #[serde(serialize_with = "ser_stat")]
    pub statistic: Statistic,
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value_t = GumbelModeArg::ExactCdf)]
    pub mode: GumbelModeArg,
    #[arg(long)]
    pub trials: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct SaturnArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub trials: u64,
    /// Defaults to 1 + 3/sqrt(n)
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_ensemble)]
    #[serde(serialize_with = "ser_beta")]
    pub ensemble: Beta,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub row_cap: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
}

mod commands;
mod error;
mod ingest;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use bayes_core::Seed;
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use error::{CliError, CliResult};
use output::Format;
use parse::PriorArg;

const SEED_ENV: &str = "BAYES_PRIMER_SEED";

#[derive(Parser, Debug)]
#[command(name = "bayes-primer", version, about = "Bayesian inference from the command line", arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bayes' rule on finite supports
    #[command(subcommand, arg_required_else_help = true)]
    Discrete(DiscreteCmd),
    /// Beta-binomial updating, elicitation, intervals and prediction
    #[command(subcommand, arg_required_else_help = true)]
    Beta(BetaCmd),
    /// Normal mean with known sampling sd
    #[command(subcommand, arg_required_else_help = true)]
    Normal(NormalCmd),
    /// Gibbs and random-walk Metropolis samplers
    #[command(subcommand, arg_required_else_help = true)]
    Mcmc(McmcCmd),
    /// Sample a model script
    #[command(subcommand, arg_required_else_help = true)]
    Model(ModelCmd),
    /// Exchangeable models for several proportions or means
    #[command(subcommand, arg_required_else_help = true)]
    Hier(HierCmd),
    /// Linear and logistic regression
    #[command(subcommand, arg_required_else_help = true)]
    Reg(RegCmd),
    /// Bayes factors, predictive checks and prior sensitivity
    #[command(subcommand, arg_required_else_help = true)]
    Eval(EvalCmd),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Random seed [default: $BAYES_PRIMER_SEED, else generated and echoed]
    #[arg(long, value_parser = parse::count)]
    seed: Option<u64>,
    /// Output format [default: csv for sampler draws, json otherwise]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Worker threads for parallel steps (results do not depend on it)
    #[arg(long, value_parser = parse::size)]
    threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct Chain {
    /// Total iterations, burn-in included
    #[arg(long, default_value = "10000", value_parser = parse::size)]
    iters: usize,
    /// Discarded initial iterations [default: 10% of --iters]
    #[arg(long, value_parser = parse::size)]
    burn_in: Option<usize>,
}

/// One set of observations for conjugate or discrete models.
#[derive(Args, Debug, Clone)]
pub struct Obs {
    /// Successes (binomial data)
    #[arg(long, value_parser = parse::count)]
    y: Option<u64>,
    /// Trials (binomial) or sample size (normal)
    #[arg(long, value_parser = parse::count)]
    n: Option<u64>,
    /// Sample mean (normal data)
    #[arg(long)]
    ybar: Option<f64>,
    /// Known sampling sd (normal data)
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum DiscreteCmd {
    /// Update a discrete prior on one parameter
    Update(DiscreteUpdate),
    /// Compare two proportions on a grid of pairs
    Grid2p(Grid2p),
}

#[derive(Args, Debug)]
pub struct DiscreteUpdate {
    /// Prior support: list `0.1,0.3,0.5` or grid `lo:hi:step`
    #[arg(long, allow_hyphen_values = true, value_parser = parse::grid_values, required_unless_present = "prior_file", conflicts_with = "prior_file")]
    values: Option<parse::Values>,
    /// Prior weights for --values, normalized [default: uniform]
    #[arg(long, allow_hyphen_values = true, value_parser = parse::list_values, requires = "values")]
    probs: Option<parse::Values>,
    /// Prior table CSV with columns point_1[,point_2],prob
    #[arg(long)]
    prior_file: Option<PathBuf>,
    /// Successes; repeat with --n for sequential updates
    #[arg(long, value_parser = parse::count)]
    y: Vec<u64>,
    /// Trials (binomial) or sample size (normal); repeat with --y
    #[arg(long, value_parser = parse::count)]
    n: Vec<u64>,
    /// Sample mean of normal data, with --n and --sigma
    #[arg(long)]
    ybar: Option<f64>,
    /// Known sampling sd of normal data
    #[arg(long)]
    sigma: Option<f64>,
    /// Likelihood value at each support point, in order
    #[arg(long, allow_hyphen_values = true, value_parser = parse::list_values)]
    likelihood: Option<parse::Values>,
    /// Also draw this many values from the posterior
    #[arg(long, value_parser = parse::size)]
    sample: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct Grid2p {
    /// Values of p1: list or `lo:hi:step`
    #[arg(long, allow_hyphen_values = true, value_parser = parse::grid_values, default_value = "0.05:0.95:0.05")]
    p1_grid: parse::Values,
    /// Values of p2: list or `lo:hi:step`
    #[arg(long, allow_hyphen_values = true, value_parser = parse::grid_values, default_value = "0.05:0.95:0.05")]
    p2_grid: parse::Values,
    /// Prior probability placed on the diagonal p1 = p2
    #[arg(long, default_value = "0")]
    diagonal_mass: f64,
    #[arg(long, value_parser = parse::count)]
    y1: u64,
    #[arg(long, value_parser = parse::count)]
    n1: u64,
    #[arg(long, value_parser = parse::count)]
    y2: u64,
    #[arg(long, value_parser = parse::count)]
    n2: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
pub enum BetaCmd {
    /// Posterior shapes after binomial data
    Update(BetaUpdate),
    /// Beta prior matching two percentiles
    Select(BetaSelect),
    /// Equal-tail credible interval
    Interval(BetaInterval),
    /// Predictive distribution of future successes
    Predict(BetaPredict),
}

#[derive(Args, Debug)]
pub struct BetaUpdate {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, value_parser = parse::count)]
    y: u64,
    #[arg(long, value_parser = parse::count)]
    n: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct BetaSelect {
    /// Lower percentile level
    #[arg(long)]
    q1: f64,
    /// Value at the lower percentile
    #[arg(long)]
    x1: f64,
    /// Upper percentile level
    #[arg(long)]
    q2: f64,
    /// Value at the upper percentile
    #[arg(long)]
    x2: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IntervalMethodArg {
    Exact,
    Simulation,
}

#[derive(Args, Debug)]
pub struct BetaInterval {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, default_value = "0.9")]
    level: f64,
    #[arg(long, value_enum, default_value = "exact")]
    method: IntervalMethodArg,
    /// Simulation size for --method simulation
    #[arg(long, default_value = "10000", value_parser = parse::size)]
    draws: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct BetaPredict {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    /// Future trials
    #[arg(long, value_parser = parse::count)]
    m: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
pub enum NormalCmd {
    /// Posterior of the mean under a normal prior
    Update(NormalUpdate),
    /// Predictive distribution of one future observation
    Predict(NormalPredict),
}

#[derive(Args, Debug)]
pub struct NormalUpdate {
    /// Prior mean
    #[arg(long)]
    m0: f64,
    /// Prior sd
    #[arg(long)]
    s0: f64,
    #[arg(long)]
    ybar: f64,
    #[arg(long, value_parser = parse::count)]
    n: u64,
    /// Known sampling sd
    #[arg(long)]
    sigma: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct NormalPredict {
    /// Posterior mean
    #[arg(long)]
    mean: f64,
    /// Posterior sd (0 for a known mean)
    #[arg(long)]
    sd: f64,
    /// Sampling sd
    #[arg(long)]
    sigma: f64,
    /// Also simulate this many future observations by composition
    #[arg(long, value_parser = parse::size)]
    draws: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
pub enum McmcCmd {
    /// Gibbs sampler for a normal mean and variance under the prior 1/sigma2
    GibbsNormal(GibbsNormal),
    /// Random-walk Metropolis on a named distribution
    Metropolis(Metropolis),
}

#[derive(Args, Debug)]
pub struct GibbsNormal {
    /// CSV file of observations
    #[arg(long)]
    data: PathBuf,
    /// Column holding the observations
    #[arg(long, default_value = "y")]
    column: String,
    /// Starting mu [default: sample mean]
    #[arg(long)]
    init_mu: Option<f64>,
    /// Starting sigma2 [default: sample variance]
    #[arg(long)]
    init_sigma2: Option<f64>,
    #[command(flatten)]
    chain: Chain,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct Metropolis {
    /// Target, e.g. `beta(5,9)`, `normal(0,1)`, `gamma(2,1)`, `student-t(5,0,1)`
    #[arg(long, value_parser = parse::distribution)]
    target: bayes_core::Distribution,
    /// Proposal sd
    #[arg(long)]
    scale: f64,
    /// Starting point [default: target median]
    #[arg(long)]
    init: Option<f64>,
    /// Rescale by pilot runs until acceptance is in [0.2, 0.5]
    #[arg(long)]
    tune: bool,
    #[command(flatten)]
    chain: Chain,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
pub enum ModelCmd {
    /// Parse, compile and sample a .bmodel script
    Run(ModelRun),
}

#[derive(Args, Debug)]
pub struct ModelRun {
    /// Model script
    script: PathBuf,
    /// Data as JSON (object of numbers and arrays) or CSV (one column per array)
    #[arg(long)]
    data: Option<PathBuf>,
    /// Proposal sd for an unknown, `name=value`; give all or none
    #[arg(long, value_parser = parse::assignment)]
    scale: Vec<(String, f64)>,
    /// Starting value for an unknown, `name=value`
    #[arg(long, value_parser = parse::assignment)]
    init: Vec<(String, f64)>,
    #[command(flatten)]
    chain: Chain,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
pub enum HierCmd {
    /// Beta-binomial model for several proportions (CSV columns group,y,n)
    Props(HierProps),
    /// Normal model for several means (CSV columns group,ybar,n)
    Means(HierMeans),
}

#[derive(Args, Debug)]
pub struct HierProps {
    #[arg(long)]
    data: PathBuf,
    /// Proposal sd for logit(eta)
    #[arg(long, default_value = "1.0")]
    eta_scale: f64,
    /// Proposal sd for log(K)
    #[arg(long, default_value = "1.5")]
    logk_scale: f64,
    #[command(flatten)]
    chain: Chain,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct HierMeans {
    #[arg(long)]
    data: PathBuf,
    /// Known sampling sd of individual observations
    #[arg(long)]
    sigma: f64,
    /// Proposal sd for log(tau_sd)
    #[arg(long, default_value = "1.0")]
    scale: f64,
    #[command(flatten)]
    chain: Chain,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
pub enum RegCmd {
    /// Exact simulation under the noninformative prior
    Linear(RegLinear),
    /// Logistic regression by random-walk Metropolis
    Logistic(RegLogistic),
}

#[derive(Args, Debug)]
pub struct Design {
    /// CSV file
    #[arg(long)]
    data: PathBuf,
    /// Response column
    #[arg(long, default_value = "y")]
    response: String,
    /// Covariate columns [default: every other column]
    #[arg(long, value_delimiter = ',')]
    covariates: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct RegLinear {
    #[command(flatten)]
    design: Design,
    /// Number of simulated draws
    #[arg(long, default_value = "10000", value_parser = parse::size)]
    draws: usize,
    /// Add the q percentile intercept + z_q * sigma as a column
    #[arg(long)]
    percentile: Option<f64>,
    /// Add covariate / sigma as a column
    #[arg(long)]
    effect: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct RegLogistic {
    #[command(flatten)]
    design: Design,
    /// Prior sd of every coefficient
    #[arg(long, default_value = "10")]
    prior_sd: f64,
    /// Proposal sds, one per coefficient [default: from the Laplace approximation]
    #[arg(long, allow_hyphen_values = true, value_parser = parse::list_values)]
    scale: Option<parse::Values>,
    #[command(flatten)]
    chain: Chain,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
pub enum EvalCmd {
    /// Bayes factor of two priors on the same data
    Bf(EvalBf),
    /// Posterior predictive check
    Ppc(EvalPpc),
    /// Posterior summary under alternative priors
    Sensitivity(EvalSensitivity),
}

#[derive(Args, Debug)]
pub struct EvalBf {
    /// First model: `beta(a,b)`, `normal(m,s)` or `point(p)`
    #[arg(long, value_parser = parse::prior)]
    model1: PriorArg,
    /// Second model
    #[arg(long, value_parser = parse::prior)]
    model2: PriorArg,
    #[command(flatten)]
    obs: Obs,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Binomial,
    Normal,
}

#[derive(Args, Debug)]
pub struct EvalPpc {
    /// Posterior as a distribution, e.g. `beta(5,9)`
    #[arg(long, value_parser = parse::distribution, required_unless_present = "draws", conflicts_with = "draws")]
    posterior: Option<bayes_core::Distribution>,
    /// Posterior draws CSV (as written by the samplers)
    #[arg(long)]
    draws: Option<PathBuf>,
    /// Draw columns to use: the probability, or the mean [and sd]
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// Sampling model
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Observed data CSV
    #[arg(long)]
    data: PathBuf,
    /// Column of observations
    #[arg(long, default_value = "y")]
    column: String,
    /// Trials per observation (binomial) from this column
    #[arg(long, conflicts_with = "trials")]
    trials_column: Option<String>,
    /// Trials per observation (binomial), the same for all
    #[arg(long, value_parser = parse::count)]
    trials: Option<u64>,
    /// Known sampling sd (normal); otherwise the second parameter is the sd
    #[arg(long)]
    sd: Option<f64>,
    /// Test statistic: mean, variance, min, max or n
    #[arg(long, default_value = "mean")]
    stat: String,
    #[arg(long, default_value = "1000", value_parser = parse::size)]
    replicates: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SummaryArg {
    Mean,
    Lower,
    Upper,
    ProbAbove,
}

#[derive(Args, Debug)]
pub struct EvalSensitivity {
    /// Base prior: `beta(a,b)`, `normal(m,s)` or `point(p)`
    #[arg(long, value_parser = parse::prior)]
    base: PriorArg,
    /// Alternative prior; repeat for several
    #[arg(long, value_parser = parse::prior)]
    alt: Vec<PriorArg>,
    /// Posterior summary to compare
    #[arg(long, value_enum, default_value = "mean")]
    summary: SummaryArg,
    /// Interval level for lower/upper
    #[arg(long, default_value = "0.9")]
    level: f64,
    /// Threshold for prob-above
    #[arg(long, default_value = "0.5")]
    threshold: f64,
    #[command(flatten)]
    obs: Obs,
    #[command(flatten)]
    common: Common,
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn resolve_seed(flag: Option<u64>) -> CliResult<Seed> {
    if let Some(s) = flag {
        return Ok(Seed(s));
    }
    if let Ok(v) = std::env::var(SEED_ENV) {
        return parse::count(v.trim())
            .map(Seed)
            .map_err(|e| CliError::usage(format!("{SEED_ENV}: {e}")));
    }
    let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0);
    // keep seeds below 2^53 so they survive a JSON round trip
    let seed = Seed(mix(nanos ^ u64::from(std::process::id()).rotate_left(32)) >> 11);
    eprintln!("seed: {seed}");
    Ok(seed)
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Discrete(DiscreteCmd::Update(a)) => &a.common,
        Command::Discrete(DiscreteCmd::Grid2p(a)) => &a.common,
        Command::Beta(BetaCmd::Update(a)) => &a.common,
        Command::Beta(BetaCmd::Select(a)) => &a.common,
        Command::Beta(BetaCmd::Interval(a)) => &a.common,
        Command::Beta(BetaCmd::Predict(a)) => &a.common,
        Command::Normal(NormalCmd::Update(a)) => &a.common,
        Command::Normal(NormalCmd::Predict(a)) => &a.common,
        Command::Mcmc(McmcCmd::GibbsNormal(a)) => &a.common,
        Command::Mcmc(McmcCmd::Metropolis(a)) => &a.common,
        Command::Model(ModelCmd::Run(a)) => &a.common,
        Command::Hier(HierCmd::Props(a)) => &a.common,
        Command::Hier(HierCmd::Means(a)) => &a.common,
        Command::Reg(RegCmd::Linear(a)) => &a.common,
        Command::Reg(RegCmd::Logistic(a)) => &a.common,
        Command::Eval(EvalCmd::Bf(a)) => &a.common,
        Command::Eval(EvalCmd::Ppc(a)) => &a.common,
        Command::Eval(EvalCmd::Sensitivity(a)) => &a.common,
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let common = common_of(&cli.command).clone();
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot start {t} threads: {e}")))?;
    }
    let seed = resolve_seed(common.seed)?;
    let report = commands::dispatch(cli.command, seed)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let bytes = report.render(common.format.unwrap_or(report.default_format), seed)?;
    output::write_out(&bytes, common.output.as_deref())
}

/// Lets `--m0 -1.5` parse as a value at every level.
fn allow_negative(cmd: clap::Command) -> clap::Command {
    cmd.allow_negative_numbers(true).mut_subcommands(allow_negative)
}

fn main() -> ExitCode {
    let parsed = allow_negative(Cli::command())
        .try_get_matches()
        .and_then(|mut m| Cli::from_arg_matches_mut(&mut m));
    let cli = match parsed {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        allow_negative(Cli::command()).debug_assert();
    }

    #[test]
    fn seeds_resolve_from_the_flag_first() {
        assert_eq!(resolve_seed(Some(42)).unwrap(), Seed(42));
    }
}

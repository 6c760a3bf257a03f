//! Command-line front end.
//!
//! Exit status is `0` on success, `1` on usage errors and `2` when an input
//! file or value fails validation. The environment variable
//! `EVENTODIST_PRECISION` (`double` or `rational`) selects the numeric mode
//! of the Binomial commands; Poisson commands always use `double`.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::binomial::BinomialMv;
use crate::error::Error;
use crate::events::{EventSet, EventologicalDistribution};
use crate::json::{parse_distribution, parse_intensities, ParseOptions};
use crate::lattice::ConstraintSystem;
use crate::output::{format_g17, Cell, Destination, Format, OutputTable};
use crate::poisson::{convergence_report, PoissonMv};
use crate::real::Real;
use crate::sampler::{BernoulliSampler, PoissonSampler, RandomStream};

pub const PRECISION_ENV: &str = "EVENTODIST_PRECISION";

#[derive(Parser, Debug)]
#[command(
    name = "eventodist",
    version,
    about = "Multivariate Binomial and Poisson laws of dependent events"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multivariate Binomial probabilities.
    #[command(subcommand)]
    Binomial(BinomialCommand),
    /// Multivariate Poisson probabilities and the Binomial-to-Poisson limit.
    #[command(subcommand)]
    Poisson(PoissonCommand),
    /// Random draws.
    #[command(subcommand)]
    Sample(SampleCommand),
    /// Mean vector and covariance matrix.
    #[command(subcommand)]
    Moments(MomentsCommand),
    /// Terrace-count lattice diagnostics.
    #[command(subcommand)]
    Lattice(LatticeCommand),
}

#[derive(Subcommand, Debug)]
enum BinomialCommand {
    /// Probability of one count vector.
    Pmf {
        #[command(flatten)]
        dist: DistArgs,
        /// Number of trials n.
        #[arg(long)]
        trials: u64,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Probabilities of every cell of [0, n]^N.
    Table {
        #[command(flatten)]
        dist: DistArgs,
        /// Number of trials n.
        #[arg(long)]
        trials: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
enum PoissonCommand {
    /// Probability of one count vector.
    Pmf {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Probabilities of every cell of [0, K]^N.
    Table {
        #[command(flatten)]
        lambda: LambdaArgs,
        /// Largest count per event; the box is [0, K]^N.
        #[arg(long = "box")]
        box_max: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sup-distance between Binomial (p = lambda/n) and Poisson over a box.
    Converge {
        #[command(flatten)]
        lambda: LambdaArgs,
        /// Comma-separated trial counts.
        #[arg(long, value_delimiter = ',', required = true)]
        trials: Vec<u64>,
        /// Largest count per event; the box is [0, K]^N.
        #[arg(long = "box")]
        box_max: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
enum SampleCommand {
    /// Count vectors of the multivariate Bernoulli scheme.
    Bernoulli {
        #[command(flatten)]
        dist: DistArgs,
        /// Number of trials n.
        #[arg(long)]
        trials: u64,
        #[command(flatten)]
        draw: DrawArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Multivariate Poisson count vectors.
    Poisson {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[command(flatten)]
        draw: DrawArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
enum MomentsCommand {
    Binomial {
        #[command(flatten)]
        dist: DistArgs,
        /// Number of trials n.
        #[arg(long)]
        trials: u64,
        /// Covariance of the centred and normalized counts instead.
        #[arg(long)]
        standardized: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    Poisson {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCommand {
    /// Number of terrace-count vectors with the given marginals.
    Count {
        /// Comma-separated event labels.
        #[arg(long, value_delimiter = ',', required = true)]
        events: Vec<String>,
        /// Counts n_x in canonical (sorted) label order.
        #[arg(long)]
        target: String,
        /// Total trial count n; omit for the uncapped (Poisson) system.
        #[arg(long)]
        cap: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct DistArgs {
    /// Distribution JSON file, `-` for stdin.
    #[arg(long)]
    dist: PathBuf,
    #[command(flatten)]
    parse: ParseFlags,
}

#[derive(Args, Debug)]
struct LambdaArgs {
    /// Intensity JSON file, `-` for stdin.
    #[arg(long)]
    lambda: PathBuf,
    /// Missing subset keys default to 0.
    #[arg(long)]
    lenient: bool,
}

#[derive(Args, Debug)]
struct ParseFlags {
    /// Missing subset keys default to 0.
    #[arg(long)]
    lenient: bool,
    /// Rescale probabilities to sum to 1.
    #[arg(long)]
    renormalize: bool,
}

impl ParseFlags {
    fn options(&self) -> ParseOptions {
        ParseOptions {
            lenient: self.lenient,
            renormalize: self.renormalize,
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct AtArgs {
    /// Counts in canonical (sorted) event order, e.g. "1,1".
    #[arg(long)]
    at: Option<String>,
    /// Counts by label, e.g. "x=1,y=1".
    #[arg(long)]
    at_named: Option<String>,
}

#[derive(Args, Debug)]
struct DrawArgs {
    #[arg(long)]
    reps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Precision {
    Double,
    Rational,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(format!("i/o error: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Standard streams used by [`run_with`].
pub struct Streams<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs with the process environment and standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let precision = std::env::var(PRECISION_ENV).ok();
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut streams = Streams {
        stdin: &mut stdin.lock(),
        stdout: &mut stdout.lock(),
        stderr: &mut stderr.lock(),
    };
    run_with(argv, precision.as_deref(), &mut streams)
}

/// Runs with an explicit precision setting and streams; returns the exit
/// status.
pub fn run_with<I, T>(argv: I, precision: Option<&str>, streams: &mut Streams<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(streams.stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(streams.stderr, "{text}");
                    1
                }
            };
        }
    };
    let outcome = parse_precision(precision).and_then(|p| dispatch(cli.command, p, streams));
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(streams.stderr, "error: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(streams.stderr, "error: {msg}");
            2
        }
    }
}

fn parse_precision(value: Option<&str>) -> CliResult<Precision> {
    match value.map(str::trim) {
        None | Some("") | Some("double") => Ok(Precision::Double),
        Some("rational") => Ok(Precision::Rational),
        Some(other) => Err(Failure::Input(format!(
            "{PRECISION_ENV} must be `double` or `rational`, got `{other}`"
        ))),
    }
}

fn dispatch(command: Command, precision: Precision, io: &mut Streams<'_>) -> CliResult<()> {
    match command {
        Command::Binomial(BinomialCommand::Pmf { dist, trials, at }) => match precision {
            Precision::Double => binomial_pmf::<f64>(&dist, trials, &at, io),
            Precision::Rational => binomial_pmf::<BigRational>(&dist, trials, &at, io),
        },
        Command::Binomial(BinomialCommand::Table { dist, trials, out }) => match precision {
            Precision::Double => binomial_table::<f64>(&dist, trials, &out, io),
            Precision::Rational => binomial_table::<BigRational>(&dist, trials, &out, io),
        },
        Command::Poisson(PoissonCommand::Pmf { lambda, at }) => {
            let spec = load_poisson(&lambda, io)?;
            let counts = parse_at(&at, spec.intensities().events())?;
            let p = spec.pmf(&counts)?;
            writeln!(io.stdout, "{}", format_g17(p))?;
            Ok(())
        }
        Command::Poisson(PoissonCommand::Table {
            lambda,
            box_max,
            out,
        }) => {
            let spec = load_poisson(&lambda, io)?;
            let events = spec.intensities().events();
            let mut table = OutputTable::new(count_headers(events));
            for (cell, p) in spec.table(&vec![box_max; events.len()])? {
                table.push(count_row(&cell, Cell::Real(p)))?;
            }
            write_table(&table, &out, io)
        }
        Command::Poisson(PoissonCommand::Converge {
            lambda,
            trials,
            box_max,
            out,
        }) => {
            let spec = load_poisson(&lambda, io)?;
            let mut table = OutputTable::new(["n", "sup_deviation"]);
            for row in convergence_report(spec.intensities(), &trials, box_max)? {
                table.push(vec![Cell::Count(row.trials), Cell::Real(row.sup_deviation)])?;
            }
            write_table(&table, &out, io)
        }
        Command::Sample(SampleCommand::Bernoulli {
            dist,
            trials,
            draw,
            out,
        }) => {
            let d: EventologicalDistribution<f64> = load_dist(&dist, io)?;
            let spec = BinomialMv::new(d, trials)?;
            let mut sampler = BernoulliSampler::new(&spec, RandomStream::new(draw.seed));
            let mut table = OutputTable::new(spec.distribution().events().labels().to_vec());
            for _ in 0..draw.reps {
                let counts = sampler.sample_counts();
                table.push(counts.iter().map(|&c| Cell::Count(c)).collect())?;
            }
            write_table(&table, &out, io)
        }
        Command::Sample(SampleCommand::Poisson { lambda, draw, out }) => {
            let spec = load_poisson(&lambda, io)?;
            let mut sampler = PoissonSampler::new(&spec, RandomStream::new(draw.seed));
            let mut table = OutputTable::new(spec.intensities().events().labels().to_vec());
            for _ in 0..draw.reps {
                let counts = sampler.sample();
                table.push(counts.iter().map(|&c| Cell::Count(c)).collect())?;
            }
            write_table(&table, &out, io)
        }
        Command::Moments(MomentsCommand::Binomial {
            dist,
            trials,
            standardized,
            out,
        }) => match (precision, standardized) {
            (_, true) => {
                let d: EventologicalDistribution<f64> = load_dist(&dist, io)?;
                let spec = BinomialMv::new(d, trials)?;
                let cov = spec.standardized_covariance_matrix()?;
                let mean = vec![0.0; spec.event_count()];
                let table = moments_table(
                    spec.distribution().events(),
                    &mean,
                    |i, j| Cell::Real(cov[(i, j)]),
                    |v| Cell::Real(*v),
                )?;
                write_table(&table, &out, io)
            }
            (Precision::Double, false) => binomial_moments::<f64>(&dist, trials, &out, io),
            (Precision::Rational, false) => {
                binomial_moments::<BigRational>(&dist, trials, &out, io)
            }
        },
        Command::Moments(MomentsCommand::Poisson { lambda, out }) => {
            let spec = load_poisson(&lambda, io)?;
            let cov = spec.covariance_matrix();
            let table = moments_table(
                spec.intensities().events(),
                &spec.mean_vector(),
                |i, j| Cell::Real(cov[(i, j)]),
                |v| Cell::Real(*v),
            )?;
            write_table(&table, &out, io)
        }
        Command::Lattice(LatticeCommand::Count {
            events,
            target,
            cap,
        }) => {
            let events = EventSet::new(events)?;
            let counts = parse_counts(&target, events.len())?;
            let cs = ConstraintSystem::new(&counts, cap)?;
            writeln!(io.stdout, "{}", cs.solution_count())?;
            Ok(())
        }
    }
}

/// Text form of a probability in either numeric mode.
trait Printable: Real {
    fn cell(&self) -> Cell;
}

impl Printable for f64 {
    fn cell(&self) -> Cell {
        Cell::Real(*self)
    }
}

impl Printable for BigRational {
    fn cell(&self) -> Cell {
        Cell::Exact(self.to_string())
    }
}

fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Real(v) => format_g17(*v),
        Cell::Count(c) => c.to_string(),
        Cell::Exact(s) | Cell::Text(s) => s.clone(),
    }
}

fn binomial_pmf<T: Printable>(
    dist: &DistArgs,
    trials: u64,
    at: &AtArgs,
    io: &mut Streams<'_>,
) -> CliResult<()> {
    let d: EventologicalDistribution<T> = load_dist(dist, io)?;
    let counts = parse_at(at, d.events())?;
    let spec = BinomialMv::new(d, trials)?;
    let p = spec.pmf(&counts)?;
    writeln!(io.stdout, "{}", cell_text(&p.cell()))?;
    Ok(())
}

fn binomial_table<T: Printable>(
    dist: &DistArgs,
    trials: u64,
    out: &OutArgs,
    io: &mut Streams<'_>,
) -> CliResult<()> {
    let d: EventologicalDistribution<T> = load_dist(dist, io)?;
    let spec = BinomialMv::new(d, trials)?;
    let mut table = OutputTable::new(count_headers(spec.distribution().events()));
    for (cell, p) in spec.table()? {
        table.push(count_row(&cell, p.cell()))?;
    }
    write_table(&table, out, io)
}

fn binomial_moments<T: Printable>(
    dist: &DistArgs,
    trials: u64,
    out: &OutArgs,
    io: &mut Streams<'_>,
) -> CliResult<()> {
    let d: EventologicalDistribution<T> = load_dist(dist, io)?;
    let spec = BinomialMv::new(d, trials)?;
    let cov = spec.covariance_matrix();
    let table = moments_table(
        spec.distribution().events(),
        &spec.mean_vector(),
        |i, j| cov[(i, j)].cell(),
        |v| v.cell(),
    )?;
    write_table(&table, out, io)
}

fn moments_table<V>(
    events: &EventSet,
    mean: &[V],
    cov: impl Fn(usize, usize) -> Cell,
    cell: impl Fn(&V) -> Cell,
) -> CliResult<OutputTable> {
    let mut headers = vec!["event".to_string(), "mean".to_string()];
    headers.extend(events.labels().iter().cloned());
    let mut table = OutputTable::new(headers);
    for (i, label) in events.labels().iter().enumerate() {
        let mut row = vec![Cell::Text(label.clone()), cell(&mean[i])];
        row.extend((0..events.len()).map(|j| cov(i, j)));
        table.push(row)?;
    }
    Ok(table)
}

fn count_headers(events: &EventSet) -> Vec<String> {
    let mut headers = events.labels().to_vec();
    headers.push("probability".into());
    headers
}

fn count_row(counts: &[u64], p: Cell) -> Vec<Cell> {
    let mut row: Vec<Cell> = counts.iter().map(|&c| Cell::Count(c)).collect();
    row.push(p);
    row
}

fn write_table(table: &OutputTable, out: &OutArgs, io: &mut Streams<'_>) -> CliResult<()> {
    let format = match out.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    match &out.output {
        None => table.write(format, &mut io.stdout)?,
        Some(path) => crate::output::emit(table, format, &Destination::File(path.clone()))?,
    }
    Ok(())
}

fn read_input(path: &PathBuf, io: &mut Streams<'_>) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io.stdin.read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
    }
}

fn load_dist<T: Real>(
    args: &DistArgs,
    io: &mut Streams<'_>,
) -> CliResult<EventologicalDistribution<T>> {
    let text = read_input(&args.dist, io)?;
    parse_distribution(&text, args.parse.options())
        .map_err(|e| Failure::Input(format!("{}: {e}", args.dist.display())))
}

fn load_poisson(args: &LambdaArgs, io: &mut Streams<'_>) -> CliResult<PoissonMv> {
    let text = read_input(&args.lambda, io)?;
    let options = ParseOptions {
        lenient: args.lenient,
        renormalize: false,
    };
    let li = parse_intensities(&text, options)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.lambda.display())))?;
    Ok(PoissonMv::new(li))
}

fn parse_counts(text: &str, expected: usize) -> CliResult<Vec<u64>> {
    let counts = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Failure::Input(format!("`{s}` is not a nonnegative integer count")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if counts.len() != expected {
        return Err(Failure::Input(format!(
            "expected {expected} counts, got {}",
            counts.len()
        )));
    }
    Ok(counts)
}

fn parse_at(at: &AtArgs, events: &EventSet) -> CliResult<Vec<u64>> {
    match (&at.at, &at.at_named) {
        (Some(text), _) => parse_counts(text, events.len()),
        (None, Some(named)) => {
            let mut counts: Vec<Option<u64>> = vec![None; events.len()];
            for pair in named.split(',') {
                let (label, value) = pair.split_once('=').ok_or_else(|| {
                    Failure::Input(format!("`{pair}` is not of the form label=count"))
                })?;
                let i = events.index_of(label.trim())?;
                let v = value.trim().parse::<u64>().map_err(|_| {
                    Failure::Input(format!("`{value}` is not a nonnegative integer count"))
                })?;
                if counts[i].replace(v).is_some() {
                    return Err(Failure::Input(format!("label `{label}` given twice")));
                }
            }
            counts
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    c.ok_or_else(|| {
                        Failure::Input(format!("missing count for `{}`", events.labels()[i]))
                    })
                })
                .collect()
        }
        (None, None) => Err(Failure::Usage(
            "one of --at or --at-named is required".into(),
        )),
    }
}

use std::io::{self, BufWriter, Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zn_ap::enumerate::{visit_ap_partitions, visit_dissections, visit_spaced_subsets};
use zn_ap::format::{parse_partition, to_json, BlockOrder};
use zn_ap::verify::{self, IntRange, SweepSpec, Theorem};
use zn_ap::{
    cyclic_multinomial, generalized_kaplansky, head_profiles, kaplansky, msun_count,
    separate_traced, starting_points, APPartition, CycleElement, EnumerationBudget, Error,
    OnExceed, PartitionType,
};

const EXIT_PRECONDITION: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "znap", version, about = "Partitions of Z_n into arithmetic-progression blocks")]
struct Cli {
    /// Search-node cap for enumerations.
    #[arg(long, global = true, env = "ZNAP_MAX_NODES")]
    max_nodes: Option<u64>,

    /// Stop at the node cap and report a truncated result instead of failing.
    #[arg(long, global = true)]
    truncate: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact closed-form counts.
    #[command(subcommand)]
    Count(CountCmd),
    /// Brute-force enumeration.
    #[command(subcommand)]
    Enumerate(EnumerateCmd),
    /// Map a partition to another difference with the separation algorithm.
    Separate(SeparateArgs),
    /// Show type, g-values and starting points of a partition.
    Inspect(InspectArgs),
    /// Check a theorem across a parameter sweep.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum CountCmd {
    Kaplansky {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    Generalized {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        k: usize,
    },
    Msun {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        k: usize,
    },
    CyclicMultinomial {
        #[arg(long)]
        n: usize,
        /// Type as comma-separated size^mult terms, e.g. 1^4,2^1,3^2.
        #[arg(long = "type")]
        ptype: PartitionType,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum LineFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum EnumerateCmd {
    Partitions {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long = "type")]
        ptype: PartitionType,
        #[arg(long)]
        count_only: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: LineFormat,
    },
    Dissections {
        #[arg(long)]
        n: usize,
        #[arg(long = "type")]
        ptype: PartitionType,
        #[arg(long)]
        count_only: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: LineFormat,
    },
    Subsets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Args)]
struct PartitionInput {
    /// Partition line (text or JSON); read from stdin when omitted.
    partition: Option<String>,
    /// Accept blocks in any order and reorder them by head.
    #[arg(long)]
    normalize: bool,
}

impl PartitionInput {
    fn read(&self) -> Result<APPartition, Error> {
        let text = match &self.partition {
            Some(s) => s.clone(),
            None => {
                let mut buf = String::new();
                io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
                buf
            }
        };
        let order = if self.normalize {
            BlockOrder::Normalize
        } else {
            BlockOrder::Strict
        };
        parse_partition(&text, order)
    }
}

#[derive(Args)]
struct SeparateArgs {
    #[command(flatten)]
    input: PartitionInput,
    /// Target difference.
    #[arg(long = "to")]
    to: usize,
    /// Starting point; must be a head of maximal g-value.
    #[arg(long)]
    start: Option<usize>,
    /// Print the head-by-head construction to stderr.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: LineFormat,
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    input: PartitionInput,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ReportFormat {
    Human,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = parse_theorem)]
    theorem: Theorem,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 1)]
    m_min: usize,
    #[arg(long, default_value_t = 4)]
    m_max: usize,
    #[arg(long, default_value_t = 1)]
    mprime_min: usize,
    /// Defaults to --m-max.
    #[arg(long)]
    mprime_max: Option<usize>,
    #[arg(long, default_value_t = 1)]
    p_min: usize,
    #[arg(long, default_value_t = 3)]
    p_max: usize,
    #[arg(long, default_value_t = 1)]
    k_min: usize,
    #[arg(long, default_value_t = 3)]
    k_max: usize,
    /// Skip partition types heavier than this.
    #[arg(long)]
    type_weight_max: Option<usize>,
    /// Worker threads for independent sweep cells.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "human")]
    format: ReportFormat,
    /// Include wall time in the report (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Lib(Error),
    Falsified,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn budget(cli: &Cli) -> Result<EnumerationBudget, Error> {
    match cli.max_nodes {
        None if !cli.truncate => Ok(EnumerationBudget::unlimited()),
        None => Err(Error::InvalidArgument("--truncate needs --max-nodes".into())),
        Some(max) => {
            let policy = if cli.truncate {
                OnExceed::Truncate
            } else {
                OnExceed::Fail
            };
            EnumerationBudget::new(max, policy)
        }
    }
}

fn run_count(cmd: &CountCmd, out: &mut impl Write) -> Result<(), Failure> {
    let value = match cmd {
        CountCmd::Kaplansky { n, k } => kaplansky(*n, *k)?,
        CountCmd::Generalized { n, p, k } => generalized_kaplansky(*n, *p, *k)?,
        CountCmd::Msun { n, m, p, k } => msun_count(*n, *m, *p, *k)?,
        CountCmd::CyclicMultinomial { n, ptype } => cyclic_multinomial(*n, ptype)?,
    };
    writeln!(out, "{value}")?;
    Ok(())
}

fn partition_line(p: &APPartition, format: LineFormat) -> String {
    match format {
        LineFormat::Text => p.to_string(),
        LineFormat::Json => to_json(p),
    }
}

fn run_enumerate(cmd: &EnumerateCmd, budget: EnumerationBudget, out: &mut impl Write) -> Result<(), Failure> {
    let mut io_err = None;
    let mut emit = |line: String| {
        if io_err.is_none() {
            if let Err(e) = writeln!(out, "{line}") {
                io_err = Some(e);
            }
        }
    };
    let (results, truncated) = match cmd {
        EnumerateCmd::Partitions {
            n,
            m,
            ptype,
            count_only,
            format,
        } => {
            let stats = visit_ap_partitions(*n, *m, ptype, budget, |blocks| {
                if !count_only {
                    let p = APPartition::new_unchecked(*n, *m, blocks.to_vec());
                    emit(partition_line(&p, *format));
                }
            })?;
            (stats.results, stats.truncated)
        }
        EnumerateCmd::Dissections {
            n,
            ptype,
            count_only,
            format,
        } => {
            let stats = visit_dissections(*n, ptype, budget, |blocks| {
                if !count_only {
                    let p = APPartition::new_unchecked(*n, 1, blocks.to_vec());
                    emit(partition_line(&p, *format));
                }
            })?;
            (stats.results, stats.truncated)
        }
        EnumerateCmd::Subsets {
            n,
            m,
            p,
            k,
            count_only,
        } => {
            let count = visit_spaced_subsets(*n, *m, *p, *k, |s: &[CycleElement]| {
                if !count_only {
                    let items: Vec<String> = s.iter().map(|e| e.to_string()).collect();
                    emit(format!("{{{}}}", items.join(",")));
                }
            })?;
            (count, false)
        }
    };
    if let Some(e) = io_err {
        return Err(e.into());
    }
    let count_only = match cmd {
        EnumerateCmd::Partitions { count_only, .. }
        | EnumerateCmd::Dissections { count_only, .. }
        | EnumerateCmd::Subsets { count_only, .. } => *count_only,
    };
    if count_only {
        writeln!(out, "{results}")?;
    }
    if truncated {
        eprintln!("warning: enumeration truncated at the node budget; {results} results so far");
    }
    Ok(())
}

fn run_separate(args: &SeparateArgs, out: &mut impl Write) -> Result<(), Failure> {
    let p = args.input.read()?;
    let start = match args.start {
        Some(h) => CycleElement::new(h, p.n())
            .ok_or_else(|| Error::InvalidArgument(format!("start {h} is not in Z_{}", p.n())))?,
        None => starting_points(&p)?[0],
    };
    let (q, trace) = separate_traced(&p, args.to, start)?;
    if args.trace {
        let source_order: Vec<CycleElement> = trace.steps.iter().map(|s| s.source_head).collect();
        let target_order: Vec<CycleElement> = trace.steps.iter().map(|s| s.new_head).collect();
        eprint!("{trace}");
        eprintln!("{}", p.sequence_notation(&source_order));
        eprintln!("{}", q.sequence_notation(&target_order));
    }
    writeln!(out, "{}", partition_line(&q, args.format))?;
    Ok(())
}

fn run_inspect(args: &InspectArgs, out: &mut impl Write) -> Result<(), Failure> {
    let p = args.input.read()?;
    let t = p.type_of()?;
    writeln!(out, "{p}")?;
    writeln!(out, "type {t}")?;
    if t.is_mixed() {
        for h in head_profiles(&p)? {
            let kind = if h.is_singleton { "singleton" } else { "block" };
            writeln!(out, "head {} {kind} g={}", h.head, h.g)?;
        }
        let starts: Vec<String> = starting_points(&p)?.iter().map(|s| s.to_string()).collect();
        writeln!(out, "starting points {}", starts.join(","))?;
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs, budget: EnumerationBudget, out: &mut impl Write) -> Result<(), Failure> {
    let spec = SweepSpec {
        n_range: IntRange::new(args.n_min, args.n_max)?,
        m_range: IntRange::new(args.m_min, args.m_max)?,
        m_prime_range: IntRange::new(args.mprime_min, args.mprime_max.unwrap_or(args.m_max))?,
        p_range: IntRange::new(args.p_min, args.p_max)?,
        k_range: IntRange::new(args.k_min, args.k_max)?,
        type_weight_max: args.type_weight_max.unwrap_or(usize::MAX),
        budget,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let started = Instant::now();
    let mut report = pool.install(|| verify::run(args.theorem, &spec))?;
    if args.timings {
        report.elapsed_ms = Some(started.elapsed().as_millis());
    }
    match args.format {
        ReportFormat::Human => write!(out, "{report}")?,
        ReportFormat::Json => {
            let json = serde_json::to_string_pretty(&report).map_err(io::Error::other)?;
            writeln!(out, "{json}")?;
        }
    }
    if report.all_pass {
        Ok(())
    } else {
        Err(Failure::Falsified)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = budget(&cli).map_err(Failure::from).and_then(|budget| match &cli.command {
        Command::Count(cmd) => run_count(cmd, &mut out),
        Command::Enumerate(cmd) => run_enumerate(cmd, budget, &mut out),
        Command::Separate(args) => run_separate(args, &mut out),
        Command::Inspect(args) => run_inspect(args, &mut out),
        Command::Verify(args) => run_verify(args, budget, &mut out),
    });
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::FAILURE,
        Err(Failure::Falsified) => {
            eprintln!("error: verification failed");
            ExitCode::from(EXIT_INVARIANT)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                Error::InvariantViolation(_) => EXIT_INVARIANT,
                _ => EXIT_PRECONDITION,
            })
        }
    }
}

use std::error::Error as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info, LevelFilter};
use mesonet::config::{named_path, parse_planted_spec, InputFormat, PipelineConfig};
use mesonet::fsutil::{read_text, write_atomic};
use mesonet::pipeline::{self, write_analysis};
use mesonet::{emit, pajek, Error, Result};
use mesonet_core::analysis::{analyze, Context};

#[derive(Parser)]
#[command(name = "mesonet", version, about = "Mesoscopic analysis of co-authorship networks")]
struct Cli {
    /// More log output (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Errors only.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, filter and write a canonical corpus.
    Ingest {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "tabular", value_parser = parse_format)]
        format: InputFormat,
        #[arg(long)]
        out: PathBuf,
        /// Country alias table (`variant,country` lines).
        #[arg(long)]
        aliases: Option<PathBuf>,
    },
    /// Build the co-author network of a corpus as a Pajek NET file.
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Drop authors with a single paper.
        #[arg(long)]
        reduced: bool,
        /// Keep only the largest connected component.
        #[arg(long)]
        giant: bool,
    },
    /// Partition a network into clusters and write a CLU file.
    Cluster {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Node roles and cluster properties.
    Metrics(AnalysisArgs),
    /// Classify inter-cluster connections; writes everything `report` reads.
    Classify {
        #[command(flatten)]
        args: AnalysisArgs,
        /// Neighborhood diagrams for this many of the largest clusters.
        #[arg(long, default_value_t = 0)]
        neighborhoods: usize,
    },
    /// Field report over one or more classify outputs (`[NAME=]DIR`).
    Report {
        #[arg(long, required = true)]
        analysis: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a planted corpus with ground truth.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the seed of the spec file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// The whole pipeline, configured by a `key = value` file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Reuse artifacts of a previous run.
        #[arg(long)]
        resume: bool,
        /// Use this clustering instead of computing one.
        #[arg(long)]
        clu: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AnalysisArgs {
    #[arg(long)]
    net: PathBuf,
    #[arg(long)]
    clu: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Corpus for paper counts, publications, ages and geography.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Country to continent table (`country,continent` lines).
    #[arg(long)]
    continents: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    slices: usize,
}

fn parse_format(s: &str) -> std::result::Result<InputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn analysis(args: &AnalysisArgs, full: Option<usize>) -> Result<()> {
    let corpus = args.corpus.as_deref().map(pipeline::load_corpus).transpose()?;
    let net = pipeline::load_network(&args.net, corpus.as_ref())?;
    let clustering = pipeline::load_clu(&args.clu, &net)?;
    let countries = pipeline::load_countries(args.continents.as_deref())?;
    let ctx = Context { corpus: corpus.as_ref(), countries: &countries, slice_count: args.slices };
    let a = analyze(&net, &clustering, ctx)?;
    match full {
        Some(neighborhoods) => write_analysis(&args.out, &net, &clustering, &a, neighborhoods),
        None => {
            write_atomic(&args.out.join("nodes.csv"), emit::nodes_csv(&net, &a).as_bytes())?;
            write_atomic(&args.out.join("clusters.csv"), emit::clusters_csv(&a.clusters).as_bytes())
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Ingest { input, format, out, aliases } => {
            let aliases = pipeline::load_aliases(aliases.as_deref())?;
            let ingested = pipeline::ingest(&input, format, &aliases, None)?;
            let f = ingested.filter;
            info!(
                "kept {} records; removed {} with fewer than two authors and {} with at most one reference",
                f.kept, f.too_few_authors, f.single_reference
            );
            pipeline::write_corpus(&out, &ingested.corpus)
        }
        Command::Build { corpus, out, reduced, giant } => {
            let corpus = pipeline::load_corpus(&corpus)?;
            let built = pipeline::build(&corpus, reduced, giant)?;
            for (k, v) in &built.summary {
                info!("{k}: {v}");
            }
            write_atomic(&out, pajek::network_to_net(&built.network).as_bytes())
        }
        Command::Cluster { net, seed, trials, out } => {
            let net = pipeline::load_network(&net, None)?;
            let clustering = pipeline::cluster(&net, seed, trials)?;
            write_atomic(&out, pajek::write_clu(clustering.assignment()).as_bytes())
        }
        Command::Metrics(args) => analysis(&args, None),
        Command::Classify { args, neighborhoods } => analysis(&args, Some(neighborhoods)),
        Command::Report { analysis, out } => {
            let fields: Vec<(String, PathBuf)> = analysis
                .iter()
                .map(|a| {
                    let (name, path) = named_path(a);
                    let name = name.unwrap_or_else(|| {
                        path.file_name().map_or_else(|| "field".to_string(), |n| n.to_string_lossy().into_owned())
                    });
                    (name, path)
                })
                .collect();
            pipeline::write_report(&fields, &out).map(|_| ())
        }
        Command::Synth { spec, seed, out } => {
            let mut planted = parse_planted_spec(&read_text(&spec)?).map_err(|e| e.in_file(&spec))?;
            if let Some(seed) = seed {
                planted.seed = seed;
            }
            let truth = mesonet::synth::write_planted(&planted, &out)?;
            info!("{} authors in {} groups, {} planted events", truth.members.len(), truth.leaders.len(), truth.events.len());
            Ok(())
        }
        Command::Run { config, resume, clu } => {
            let mut c = PipelineConfig::parse(&read_text(&config)?).map_err(|e| e.in_file(&config))?;
            c.resume |= resume;
            if clu.is_some() {
                c.clu = clu;
            }
            pipeline::run(&c)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match (cli.quiet, cli.verbose) {
        (true, _) => LevelFilter::Error,
        (false, 0) => LevelFilter::Warn,
        (false, 1) => LevelFilter::Info,
        (false, _) => LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut message = e.to_string();
            let mut source = e.source();
            while let Some(s) = source {
                if !message.contains(&s.to_string()) {
                    message.push_str(&format!(": {s}"));
                }
                source = s.source();
            }
            error!("{message}");
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

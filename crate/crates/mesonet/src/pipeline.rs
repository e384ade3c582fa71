//! Pipeline stages and the end-to-end run.
//!
//! Each stage reads and writes the artifacts of a run directory, so the
//! command line can run them one at a time and `run` can resume from
//! whatever a previous run left behind.

use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use mesonet_core::analysis::{analyze, Analysis, Context};
use mesonet_core::cluster::{detect_communities, Clustering};
use mesonet_core::cohort::{comparative_crosstabs, field_report, FieldInput};
use mesonet_core::geo::CountryTable;
use mesonet_core::graph::{growth_curve, CoauthorNetwork};
use mesonet_core::ingest::{corpus_stats, filter_corpus, Corpus, FilterReport, PublicationRecord, YearSpan};
use mesonet_core::meso::{extract_neighborhood, ClusterLevelNetwork, LinkType};
use mesonet_core::stats;

use crate::config::{builtin_country_table, parse_country_table, InputFormat, PipelineConfig};
use crate::dot::{cluster_network_dot, neighborhood_dot};
use crate::emit::{self, fixed};
use crate::error::{Error, Result};
use crate::fsutil::{read_text, write_atomic};
use crate::pajek::{self, PajekGraph};
use crate::report::{self, ReportRow};
use crate::tabular;
use crate::wos::{parse_field_tagged, CountryAliases};

pub const FAILED_MARKER: &str = "FAILED";

/// Parsed and filtered input.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub corpus: Corpus,
    pub parse_warnings: usize,
    pub filter: FilterReport,
}

pub fn load_aliases(path: Option<&Path>) -> Result<CountryAliases> {
    match path {
        Some(p) => CountryAliases::parse(&read_text(p)?).map_err(|e| e.in_file(p)),
        None => Ok(CountryAliases::builtin()),
    }
}

pub fn load_countries(path: Option<&Path>) -> Result<CountryTable> {
    match path {
        Some(p) => parse_country_table(&read_text(p)?).map_err(|e| e.in_file(p)),
        None => Ok(builtin_country_table()),
    }
}

/// Parses raw records without filtering.
/// Reads records in either input format; countries are folded through
/// `aliases` in both.
pub fn parse_records(path: &Path, format: InputFormat, aliases: &CountryAliases) -> Result<(Vec<PublicationRecord>, usize)> {
    let text = read_text(path)?;
    Ok(match format {
        InputFormat::Wos => {
            let parsed = parse_field_tagged(&text, aliases);
            (parsed.records, parsed.warnings.len())
        }
        InputFormat::Tabular => {
            let mut parsed = tabular::read_corpus(text.as_bytes()).map_err(|e| e.in_file(path))?;
            for record in &mut parsed.records {
                for country in &mut record.countries {
                    *country = aliases.resolve(country);
                }
            }
            (parsed.records, parsed.warnings.len())
        }
    })
}

/// Parses and filters an input file; `years` restricts the corpus to a span.
pub fn ingest(path: &Path, format: InputFormat, aliases: &CountryAliases, years: Option<YearSpan>) -> Result<Ingested> {
    let (records, parse_warnings) = parse_records(path, format, aliases)?;
    let (corpus, filter) = filter_corpus(records);
    let corpus = match years {
        Some(span) => Corpus::with_span(corpus.records, span),
        None => corpus,
    };
    info!("ingested {} ({parse_warnings} parse warnings)", corpus_stats(&corpus));
    Ok(Ingested { corpus, parse_warnings, filter })
}

/// Reads a canonical corpus file as written by the ingest stage.
pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let parsed = tabular::read_corpus(read_text(path)?.as_bytes()).map_err(|e| e.in_file(path))?;
    Ok(Corpus::new(parsed.records))
}

pub fn write_corpus(path: &Path, corpus: &Corpus) -> Result<()> {
    write_atomic(path, tabular::corpus_to_string(&corpus.records).as_bytes())
}

/// Network stage result: the giant component of the reduced network and
/// headline figures.
#[derive(Debug, Clone)]
pub struct Built {
    pub network: CoauthorNetwork,
    pub summary: Vec<(&'static str, String)>,
}

/// Builds the co-author network, drops single-paper authors and keeps the
/// giant component.
pub fn build(corpus: &Corpus, reduced: bool, giant: bool) -> Result<Built> {
    let stats = corpus_stats(corpus);
    let full = CoauthorNetwork::build(corpus);
    let net = if reduced { full.reduce_single_paper_authors() } else { full };
    let mut summary = vec![
        ("records", stats.records.to_string()),
        ("authors", stats.authors.to_string()),
        ("mean_authors_per_paper", fixed(stats.mean_authors_per_paper)),
        ("median_authors_per_paper", fixed(stats.median_authors_per_paper)),
        ("network_authors", net.node_count().to_string()),
    ];
    let network = if giant {
        let g = net.giant_component()?;
        summary.push(("giant_authors", g.network.node_count().to_string()));
        summary.push(("giant_relative_size", fixed(g.relative_size)));
        g.network
    } else if net.is_empty() {
        return Err(mesonet_core::Error::EmptyNetwork.into());
    } else {
        net
    };
    info!("network: {} authors, {} edges", network.node_count(), network.edge_count());
    Ok(Built { network, summary })
}

/// Reads a NET file; with a corpus, paper counts and years are restored.
pub fn load_network(path: &Path, corpus: Option<&Corpus>) -> Result<CoauthorNetwork> {
    let mut net = pajek::net_to_network(&read_text(path)?).map_err(|e| e.in_file(path))?;
    if let Some(c) = corpus {
        net.attach_provenance(c);
    }
    Ok(net)
}

pub fn load_clu(path: &Path, net: &CoauthorNetwork) -> Result<Clustering> {
    pajek::load_clustering(&read_text(path)?, net).map_err(|e| e.in_file(path))
}

pub fn cluster(net: &CoauthorNetwork, seed: u64, trials: usize) -> Result<Clustering> {
    let c = detect_communities(net, seed, trials)?;
    info!("{} clusters, code length {:.4} bits", c.cluster_count(), c.quality());
    Ok(c)
}

fn cluster_level_net(net: &ClusterLevelNetwork) -> String {
    let index = |c: u32| net.nodes.binary_search(&c).expect("endpoint is a node");
    pajek::write_net(&PajekGraph {
        labels: net.nodes.iter().map(u32::to_string).collect(),
        edges: net
            .edges
            .iter()
            .map(|e| (index(e.cluster_pair.0), index(e.cluster_pair.1), e.total_weight.min(u64::from(u32::MAX)) as u32))
            .collect(),
    })
}

/// Files written by [`write_analysis`].
pub const ANALYSIS_FILES: [&str; 7] = [
    "nodes.csv",
    "clusters.csv",
    "connections.csv",
    "transfer.net",
    "collaboration.net",
    "transfer.dot",
    "collaboration.dot",
];

/// Node roles, cluster properties, classified connections and the two
/// cluster-level networks.
pub fn write_analysis(dir: &Path, net: &CoauthorNetwork, clustering: &Clustering, analysis: &Analysis, neighborhoods: usize) -> Result<()> {
    write_atomic(&dir.join("nodes.csv"), emit::nodes_csv(net, analysis).as_bytes())?;
    write_atomic(&dir.join("clusters.csv"), emit::clusters_csv(&analysis.clusters).as_bytes())?;
    write_atomic(&dir.join("connections.csv"), emit::connections_csv(&analysis.connections).as_bytes())?;
    for (kind, cl) in [(LinkType::Transfer, &analysis.transfer), (LinkType::Collaboration, &analysis.collaboration)] {
        write_atomic(&dir.join(format!("{}.net", kind.label())), cluster_level_net(cl).as_bytes())?;
        write_atomic(&dir.join(format!("{}.dot", kind.label())), cluster_network_dot(cl, &analysis.clusters).as_bytes())?;
    }
    for id in 1..=neighborhoods.min(clustering.cluster_count()) as u32 {
        let n = extract_neighborhood(net, clustering, id)?;
        write_atomic(&dir.join("neighborhoods").join(format!("cluster_{id}.dot")), neighborhood_dot(&n).as_bytes())?;
    }
    Ok(())
}

/// Field input recovered from an analysis directory.
pub fn read_field(name: &str, dir: &Path) -> Result<(FieldInput, Vec<(String, String)>)> {
    let read = |f: &str| -> Result<String> { read_text(&dir.join(f)) };
    let clusters = emit::read_cluster_records(&read("clusters.csv")?).map_err(|e| e.in_file(dir.join("clusters.csv")))?;
    let connections = emit::read_connections(&read("connections.csv")?).map_err(|e| e.in_file(dir.join("connections.csv")))?;
    let roles = emit::read_role_distribution(&read("nodes.csv")?).map_err(|e| e.in_file(dir.join("nodes.csv")))?;
    let summary_path = dir.join("summary.csv");
    let mut summary = if summary_path.exists() {
        emit::read_summary(&read_text(&summary_path)?).map_err(|e| e.in_file(&summary_path))?
    } else {
        Vec::new()
    };
    let sizes: Vec<f64> = clusters.iter().map(|c| c.size as f64).collect();
    summary.push(("clusters_mean_size".into(), fixed(stats::mean(&sizes))));
    summary.push(("clusters_median_size".into(), fixed(stats::median(&sizes))));
    let transfer = ClusterLevelNetwork::build(&connections, LinkType::Transfer);
    let collaboration = ClusterLevelNetwork::build(&connections, LinkType::Collaboration);
    let (total, links) = (clusters.len(), connections.len());
    let input = FieldInput {
        name: name.to_string(),
        transfer_links: transfer.edges.len(),
        collaboration_links: collaboration.edges.len(),
        roles: Some(roles),
        transfer_network: Some(transfer.stats(total, links)),
        collaboration_network: Some(collaboration.stats(total, links)),
        clusters,
    };
    Ok((input, summary))
}

/// Report over one or more analysis directories, written as `report.csv`
/// and `report.txt` under `out`.
pub fn write_report(fields: &[(String, PathBuf)], out: &Path) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    let mut inputs = Vec::new();
    for (name, dir) in fields {
        let (input, summary) = read_field(name, dir)?;
        rows.extend(report::field_rows(&field_report(&input), &summary));
        inputs.push(input);
    }
    if inputs.len() > 1 {
        rows.extend(report::comparative_rows(&comparative_crosstabs(&inputs)));
    }
    write_atomic(&out.join("report.csv"), report::rows_csv(&rows).as_bytes())?;
    write_atomic(&out.join("report.txt"), report::rows_text(&rows).as_bytes())?;
    Ok(rows)
}

fn stage<T>(name: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    info!("stage {name}");
    f().map_err(|e| Error::Stage { stage: name, source: Box::new(e) })
}

fn all_exist(dir: &Path, files: &[&str]) -> bool {
    files.iter().all(|f| dir.join(f).exists())
}

/// Runs ingest, build, cluster, analyze and report into `config.output`.
/// On failure the stage name and cause are written to a `FAILED` marker
/// next to whatever was already produced.
pub fn run(config: &PipelineConfig) -> Result<()> {
    config.validate()?;
    let out = config.output.as_path();
    crate::fsutil::create_dir(out)?;
    let marker = out.join(FAILED_MARKER);
    if marker.exists() {
        fs::remove_file(&marker).map_err(|source| Error::Io { path: marker.clone(), source })?;
    }
    let result = run_stages(config, out);
    if let Err(e) = &result {
        let stage = match e {
            Error::Stage { stage, .. } => *stage,
            _ => "setup",
        };
        write_atomic(&marker, format!("stage={stage}\nerror={e}\n").as_bytes())?;
    }
    result
}

fn run_stages(config: &PipelineConfig, out: &Path) -> Result<()> {
    let resume = |files: &[&str]| config.resume && all_exist(out, files);

    let corpus = stage("ingest", || {
        let path = out.join("corpus.csv");
        if resume(&["corpus.csv"]) {
            info!("reusing {}", path.display());
            return load_corpus(&path);
        }
        let aliases = load_aliases(config.aliases.as_deref())?;
        let ingested = ingest(&config.input, config.format, &aliases, config.years)?;
        write_corpus(&path, &ingested.corpus)?;
        Ok(ingested.corpus)
    })?;

    let net = stage("build", || {
        if resume(&["net.net", "summary.csv"]) {
            return load_network(&out.join("net.net"), Some(&corpus));
        }
        let built = build(&corpus, true, true)?;
        write_atomic(&out.join("net.net"), pajek::network_to_net(&built.network).as_bytes())?;
        write_atomic(&out.join("summary.csv"), emit::summary_csv(&built.summary).as_bytes())?;
        match growth_curve(&corpus, config.slice_count) {
            Ok(points) => write_atomic(&out.join("growth.csv"), emit::growth_csv(&points).as_bytes())?,
            Err(e) => warn!("no growth curve: {e}"),
        }
        let mut net = built.network;
        net.attach_provenance(&corpus);
        Ok(net)
    })?;

    let clustering = stage("cluster", || {
        let path = out.join("net.clu");
        let clustering = if let Some(clu) = &config.clu {
            info!("clustering read from {}", clu.display());
            load_clu(clu, &net)?
        } else if resume(&["net.clu"]) {
            return load_clu(&path, &net);
        } else {
            cluster(&net, config.seed, config.trials)?
        };
        write_atomic(&path, pajek::write_clu(clustering.assignment()).as_bytes())?;
        Ok(clustering)
    })?;

    stage("analyze", || {
        if resume(&ANALYSIS_FILES) && config.clu.is_none() {
            return Ok(());
        }
        let countries = load_countries(config.continents.as_deref())?;
        let ctx = Context { corpus: Some(&corpus), countries: &countries, slice_count: config.slice_count };
        let analysis = analyze(&net, &clustering, ctx)?;
        write_analysis(out, &net, &clustering, &analysis, config.neighborhoods)
    })?;

    stage("report", || write_report(&[(config.field.clone(), out.to_path_buf())], &out.join("report")).map(|_| ()))
}

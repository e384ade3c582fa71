//! CSV artifacts: per-node roles, per-cluster properties, inter-cluster
//! connections and growth curves, with readers for the ones the report
//! stage consumes.

use std::collections::BTreeMap;

use mesonet_core::analysis::{Analysis, ClusterRow};
use mesonet_core::cohort::{AgeClass, AgeCohort, ClusterRecord};
use mesonet_core::graph::{CoauthorNetwork, GrowthPoint};
use mesonet_core::meso::{InterClusterConnection, LinkType, Pattern};
use mesonet_core::metrics::{HubnessKind, Role, RoleDistribution};

use crate::error::{Error, Result};

pub(crate) fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

pub fn nodes_csv(net: &CoauthorNetwork, analysis: &Analysis) -> String {
    let mut w = writer();
    w.write_record(["key", "cluster", "k_in", "k", "z", "P", "role", "isolated"]).unwrap();
    for (node, p) in net.nodes().iter().zip(&analysis.profiles) {
        w.write_record([
            node.key.as_str(),
            &p.cluster.to_string(),
            &p.internal_degree.to_string(),
            &p.degree.to_string(),
            &fixed(p.z),
            &fixed(p.participation),
            p.role.code(),
            &p.isolated.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

pub const CLUSTER_COLUMNS: [&str; 16] = [
    "id",
    "size",
    "publications",
    "size_category",
    "internal_edges",
    "principal_investigator",
    "degree_centralization",
    "closeness_centralization",
    "betweenness_centralization",
    "centralization_partial",
    "hub_count",
    "hubness",
    "age",
    "age_gap",
    "geography",
    "collaborating",
];

pub fn clusters_csv(rows: &[ClusterRow]) -> String {
    let mut w = writer();
    w.write_record(CLUSTER_COLUMNS).unwrap();
    for r in rows {
        let c = r.centralization.map(|c| c.indices);
        let opt = |f: fn(&mesonet_core::metrics::CentralizationIndices) -> f64| c.as_ref().map_or(String::new(), |c| fixed(f(c)));
        w.write_record([
            r.id.to_string(),
            r.size.to_string(),
            r.publications.to_string(),
            r.size_category.label().to_string(),
            r.internal_edges.to_string(),
            r.principal_investigator.clone(),
            opt(|c| c.degree),
            opt(|c| c.closeness),
            opt(|c| c.betweenness),
            r.centralization.map_or(String::new(), |c| c.largest_component_only.to_string()),
            r.hub_count.to_string(),
            r.hubness.label().to_string(),
            r.age.map_or(String::new(), |a| a.cohort.label().to_string()),
            r.age.map_or(String::new(), |a| a.gap.to_string()),
            r.geography.to_string(),
            r.in_collaboration.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

pub fn connections_csv(connections: &[InterClusterConnection]) -> String {
    let mut w = writer();
    w.write_record(["cluster_a", "cluster_b", "separator", "link_type", "pattern", "bridge_edges", "weight"]).unwrap();
    for c in connections {
        w.write_record([
            c.cluster_pair.0.to_string(),
            c.cluster_pair.1.to_string(),
            c.separator_size.to_string(),
            c.link_type.label().to_string(),
            c.pattern.label().to_string(),
            c.bridge_edges.len().to_string(),
            c.total_weight.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

pub fn growth_csv(points: &[GrowthPoint]) -> String {
    let mut w = writer();
    w.write_record(["slice", "authors", "reduced_authors", "giant_fraction", "unreduced_giant_fraction"]).unwrap();
    for p in points {
        w.write_record([
            p.slice.to_string(),
            p.authors.to_string(),
            p.reduced_authors.to_string(),
            fixed(p.giant_fraction),
            fixed(p.unreduced_giant_fraction),
        ])
        .unwrap();
    }
    finish(w)
}

/// `statistic,value` rows.
pub fn summary_csv(rows: &[(&str, String)]) -> String {
    let mut w = writer();
    w.write_record(["statistic", "value"]).unwrap();
    for (k, v) in rows {
        w.write_record([*k, v.as_str()]).unwrap();
    }
    finish(w)
}

/// Rows of a headed CSV as column-name maps.
fn read_rows(text: &str) -> Result<Vec<(usize, BTreeMap<String, String>)>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        out.push((line, header.iter().cloned().zip(row.iter().map(|c| c.trim().to_string())).collect()));
    }
    Ok(out)
}

fn field<'a>(row: &'a BTreeMap<String, String>, name: &str) -> Result<&'a str> {
    row.get(name).map(String::as_str).ok_or_else(|| Error::MissingColumn(name.to_string()))
}

fn parse_field<T: std::str::FromStr>(line: usize, row: &BTreeMap<String, String>, name: &str) -> Result<T> {
    let v = field(row, name)?;
    v.parse().map_err(|_| Error::syntax(line, format!("invalid {name} `{v}`")))
}

pub fn read_summary(text: &str) -> Result<Vec<(String, String)>> {
    read_rows(text)?
        .into_iter()
        .map(|(_, row)| Ok((field(&row, "statistic")?.to_string(), field(&row, "value")?.to_string())))
        .collect()
}

pub fn read_cluster_records(text: &str) -> Result<Vec<ClusterRecord>> {
    read_rows(text)?
        .into_iter()
        .map(|(line, row)| {
            let hubness = field(&row, "hubness")?;
            let age = match field(&row, "age")? {
                "" => None,
                label => Some(AgeClass {
                    cohort: AgeCohort::from_label(label).ok_or_else(|| Error::syntax(line, format!("unknown age `{label}`")))?,
                    gap: parse_field(line, &row, "age_gap")?,
                }),
            };
            Ok(ClusterRecord {
                id: parse_field(line, &row, "id")?,
                size: parse_field(line, &row, "size")?,
                publications: parse_field(line, &row, "publications")?,
                age,
                hubness: HubnessKind::from_label(hubness)
                    .ok_or_else(|| Error::syntax(line, format!("unknown hubness `{hubness}`")))?,
                in_collaboration: parse_field(line, &row, "collaborating")?,
            })
        })
        .collect()
}

/// Connections as recorded; bridge edges themselves are not stored.
pub fn read_connections(text: &str) -> Result<Vec<InterClusterConnection>> {
    read_rows(text)?
        .into_iter()
        .map(|(line, row)| {
            let lt = field(&row, "link_type")?;
            let pt = field(&row, "pattern")?;
            Ok(InterClusterConnection {
                cluster_pair: (parse_field(line, &row, "cluster_a")?, parse_field(line, &row, "cluster_b")?),
                bridge_edges: Vec::new(),
                separator_size: parse_field(line, &row, "separator")?,
                link_type: LinkType::from_label(lt).ok_or_else(|| Error::syntax(line, format!("unknown link type `{lt}`")))?,
                pattern: Pattern::from_label(pt).ok_or_else(|| Error::syntax(line, format!("unknown pattern `{pt}`")))?,
                total_weight: parse_field(line, &row, "weight")?,
            })
        })
        .collect()
}

pub fn read_role_distribution(text: &str) -> Result<RoleDistribution> {
    let mut counts = [0usize; 7];
    let rows = read_rows(text)?;
    for (line, row) in &rows {
        let code = field(row, "role")?;
        let role = Role::from_code(code).ok_or_else(|| Error::syntax(*line, format!("unknown role `{code}`")))?;
        counts[role.index()] += 1;
    }
    let total = rows.len().max(1) as f64;
    Ok(RoleDistribution { counts, fractions: counts.map(|c| c as f64 / total) })
}

//! One pass over a clustered network producing every per-node and
//! per-cluster property the reports draw on.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cluster::{cluster_aggregates, Clustering};
use crate::cohort::{age_cohort, cluster_activity, AgeClass, ClusterRecord, FieldInput, SizeCategory};
use crate::geo::{cluster_country_counts, continent_affiliation, CountryTable, GeoLabel};
use crate::graph::{time_slices, CoauthorNetwork};
use crate::ingest::Corpus;
use crate::meso::{classify_all, principal_investigator, ClusterLevelNetwork, InterClusterConnection, LinkType};
use crate::metrics::{
    centralization, cluster_hubness, node_profiles, role_distribution, Centralization, DegreeMode, HubnessKind,
    NodeRoleProfile,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRow {
    pub id: u32,
    pub size: usize,
    /// Zero without a corpus.
    pub publications: usize,
    pub size_category: SizeCategory,
    pub internal_edges: usize,
    pub principal_investigator: String,
    /// `None` below three members.
    pub centralization: Option<Centralization>,
    pub hub_count: usize,
    pub hubness: HubnessKind,
    /// `None` without a corpus or unless three slices are used.
    pub age: Option<AgeClass>,
    pub geography: GeoLabel,
    pub in_collaboration: bool,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub profiles: Vec<NodeRoleProfile>,
    pub clusters: Vec<ClusterRow>,
    pub connections: Vec<InterClusterConnection>,
    pub transfer: ClusterLevelNetwork,
    pub collaboration: ClusterLevelNetwork,
}

/// Optional inputs: the corpus (publications, activity, geography) and the
/// country table.
#[derive(Debug, Clone, Copy)]
pub struct Context<'a> {
    pub corpus: Option<&'a Corpus>,
    pub countries: &'a CountryTable,
    pub slice_count: usize,
}

/// Analyzes a clustered network. Pass a network carrying provenance
/// (see [`CoauthorNetwork::attach_provenance`]) for paper-count based
/// leaders and cluster ages.
pub fn analyze(net: &CoauthorNetwork, clustering: &Clustering, ctx: Context<'_>) -> Result<Analysis> {
    let profiles = node_profiles(net, clustering, DegreeMode::Unweighted)?;
    let connections = classify_all(net, clustering);
    let transfer = ClusterLevelNetwork::build(&connections, LinkType::Transfer);
    let collaboration = ClusterLevelNetwork::build(&connections, LinkType::Collaboration);
    let empty = Corpus::default();
    let (infos, _) = cluster_aggregates(net, clustering, ctx.corpus.unwrap_or(&empty));
    let slices = match ctx.corpus.and_then(|c| c.time_span) {
        Some(span) if ctx.slice_count == 3 => time_slices(span, 3).ok(),
        _ => None,
    };
    let clusters = infos
        .into_iter()
        .map(|info| {
            let hubness = cluster_hubness(&info.members, &profiles);
            let pi = principal_investigator(net, &info.members).expect("clusters are non-empty");
            let age = slices
                .as_ref()
                .and_then(|s| age_cohort(&cluster_activity(net, &info.members, s)).ok());
            let geography = match ctx.corpus {
                Some(corpus) => continent_affiliation(&cluster_country_counts(net, &info.members, corpus), ctx.countries),
                None => GeoLabel::Unknown,
            };
            ClusterRow {
                id: info.id,
                size: info.size,
                publications: info.publications,
                size_category: info.size_category,
                internal_edges: info.internal_edge_count,
                principal_investigator: String::from(net.node(pi).key.as_str()),
                centralization: centralization(&info.subgraph(net)).ok(),
                hub_count: hubness.hub_count,
                hubness: hubness.kind,
                age,
                geography,
                in_collaboration: collaboration.nodes.binary_search(&info.id).is_ok(),
            }
        })
        .collect();
    Ok(Analysis { profiles, clusters, connections, transfer, collaboration })
}

impl Analysis {
    /// Report input for one field.
    pub fn field_input(&self, name: &str) -> FieldInput {
        let total = self.clusters.len();
        let links = self.connections.len();
        FieldInput {
            name: String::from(name),
            clusters: self.clusters.iter().map(ClusterRow::record).collect(),
            transfer_links: self.transfer.edges.len(),
            collaboration_links: self.collaboration.edges.len(),
            roles: Some(role_distribution(&self.profiles)),
            transfer_network: Some(self.transfer.stats(total, links)),
            collaboration_network: Some(self.collaboration.stats(total, links)),
        }
    }
}

impl ClusterRow {
    pub fn record(&self) -> ClusterRecord {
        ClusterRecord {
            id: self.id,
            size: self.size,
            publications: self.publications,
            age: self.age,
            hubness: self.hubness,
            in_collaboration: self.in_collaboration,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::Continent;
    use crate::ingest::{key, PublicationRecord};
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn two_star_groups_with_a_migrant() {
        let rec = |id: &str, year: i32, authors: &[&str], country: &str| {
            PublicationRecord::new(id, year, authors.iter().map(|a| key(a)), vec![country.to_string()], 5)
        };
        let mut records = Vec::new();
        for (g, country, years) in [("A", "FRANCE", [1991, 2000, 2008]), ("B", "JAPAN", [1999, 2001, 2007])] {
            for (k, year) in years.into_iter().enumerate() {
                for m in 1..=3 {
                    records.push(rec(&alloc::format!("{g}{k}{m}"), year, &[&alloc::format!("{g}0_X"), &alloc::format!("{g}{m}_X")], country));
                }
            }
        }
        records.push(rec("x1", 2005, &["A1_X", "B0_X"], "JAPAN"));
        let corpus = Corpus::new(records);
        let mut net = CoauthorNetwork::build(&corpus);
        net.attach_provenance(&corpus);
        let labels: Vec<u8> = net.nodes().iter().map(|n| n.key.as_str().as_bytes()[0]).collect();
        let clustering = Clustering::from_labels(&net, &labels, 0).unwrap();
        let countries: CountryTable =
            [("FRANCE".to_string(), Continent::Europe), ("JAPAN".to_string(), Continent::Asia)].into_iter().collect();
        let a = analyze(&net, &clustering, Context { corpus: Some(&corpus), countries: &countries, slice_count: 3 }).unwrap();
        assert_eq!(a.connections.len(), 1);
        assert_eq!(a.connections[0].link_type, LinkType::Transfer);
        assert_eq!(a.clusters.len(), 2);
        let row_a = a.clusters.iter().find(|r| r.principal_investigator == "A0_X").unwrap();
        assert_eq!(row_a.size, 4);
        assert_eq!(row_a.publications, 10);
        assert_eq!(row_a.geography, GeoLabel::Single(Continent::Europe));
        assert_eq!(row_a.age.unwrap().cohort, crate::cohort::AgeCohort::Continuous);
        let row_b = a.clusters.iter().find(|r| r.principal_investigator == "B0_X").unwrap();
        assert_eq!(row_b.age.unwrap().cohort, crate::cohort::AgeCohort::Recent);
        assert!(!row_a.in_collaboration);
        let field = a.field_input("toy");
        assert_eq!((field.transfer_links, field.collaboration_links), (1, 0));
    }
}

//! Inter-cluster connections: bridge edges, minimum author separators,
//! transfer/collaboration classification and the cluster-level networks.
//!
//! Two clusters count as linked by a *transfer* when deleting at most two
//! authors removes every co-author edge running directly between them; any
//! other connection is a *collaboration*. Only the direct bridge edges
//! matter, not paths through third clusters, and edge weights play no role
//! in the separator.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cluster::Clustering;
use crate::graph::{CoauthorNetwork, DisjointSets};
use crate::stats;
use crate::{Error, Result};

/// A co-author edge between two clusters. `a` is the author in the cluster
/// with the smaller id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BridgeEdge {
    pub a: usize,
    pub b: usize,
    pub weight: u32,
}

/// Groups every inter-cluster edge by its `(lower id, higher id)` pair.
pub fn bridge_edges(net: &CoauthorNetwork, clustering: &Clustering) -> BTreeMap<(u32, u32), Vec<BridgeEdge>> {
    let mut out: BTreeMap<(u32, u32), Vec<BridgeEdge>> = BTreeMap::new();
    for (x, y, weight) in net.edges() {
        let (cx, cy) = (clustering.cluster_of(x), clustering.cluster_of(y));
        if cx == cy {
            continue;
        }
        let edge = if cx < cy { BridgeEdge { a: x, b: y, weight } } else { BridgeEdge { a: y, b: x, weight } };
        out.entry((cx.min(cy), cx.max(cy))).or_default().push(edge);
    }
    for edges in out.values_mut() {
        edges.sort_unstable();
    }
    out
}

/// Minimum number of authors whose removal deletes every bridge edge.
///
/// The bridge graph is bipartite, so this is its maximum matching size.
pub fn separator_size(bridge: &[BridgeEdge]) -> usize {
    let left: Vec<usize> = bridge.iter().map(|e| e.a).collect::<BTreeSet<_>>().into_iter().collect();
    let right: Vec<usize> = bridge.iter().map(|e| e.b).collect::<BTreeSet<_>>().into_iter().collect();
    let mut adj = vec![Vec::new(); left.len()];
    for e in bridge {
        let l = left.binary_search(&e.a).expect("left endpoint indexed");
        let r = right.binary_search(&e.b).expect("right endpoint indexed");
        adj[l].push(r);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let mut matched_right: Vec<Option<usize>> = vec![None; right.len()];
    let mut matching = 0;
    for l in 0..left.len() {
        let mut visited = vec![false; right.len()];
        if augment(l, &adj, &mut visited, &mut matched_right) {
            matching += 1;
        }
    }
    matching
}

fn augment(l: usize, adj: &[Vec<usize>], visited: &mut [bool], matched_right: &mut [Option<usize>]) -> bool {
    for &r in &adj[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if matched_right[r].is_none_or(|other| augment(other, adj, visited, matched_right)) {
            matched_right[r] = Some(l);
            return true;
        }
    }
    false
}

/// Principal investigator of a cluster: most papers, then highest degree,
/// then smallest author key.
pub fn principal_investigator(net: &CoauthorNetwork, members: &[usize]) -> Option<usize> {
    members.iter().copied().min_by(|&x, &y| {
        let (nx, ny) = (net.node(x), net.node(y));
        ny.paper_count
            .cmp(&nx.paper_count)
            .then(net.degree(y).cmp(&net.degree(x)))
            .then(nx.key.cmp(&ny.key))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkType {
    Transfer,
    Collaboration,
}

impl LinkType {
    pub fn label(self) -> &'static str {
        match self {
            LinkType::Transfer => "transfer",
            LinkType::Collaboration => "collaboration",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        [LinkType::Transfer, LinkType::Collaboration].into_iter().find(|l| l.label() == s)
    }

    pub fn from_separator(separator: usize) -> Self {
        if separator <= 2 {
            LinkType::Transfer
        } else {
            LinkType::Collaboration
        }
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Structural subtype of a connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    /// A single edge.
    OneOne,
    /// One author on either side carries every bridge edge.
    OneMany,
    /// Two authors carry every bridge edge.
    TwoBy,
    /// Three or more authors needed, with a direct edge between the PIs.
    MmA,
    /// Three or more authors needed, no PI-PI edge.
    MmB,
}

impl Pattern {
    pub fn label(self) -> &'static str {
        match self {
            Pattern::OneOne => "one_one",
            Pattern::OneMany => "one_many",
            Pattern::TwoBy => "two_by",
            Pattern::MmA => "mm_A",
            Pattern::MmB => "mm_B",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        [Pattern::OneOne, Pattern::OneMany, Pattern::TwoBy, Pattern::MmA, Pattern::MmB]
            .into_iter()
            .find(|p| p.label() == s)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterClusterConnection {
    /// `(a, b)` with `a < b`.
    pub cluster_pair: (u32, u32),
    pub bridge_edges: Vec<BridgeEdge>,
    pub separator_size: usize,
    pub link_type: LinkType,
    pub pattern: Pattern,
    pub total_weight: u64,
}

/// Classifies one bridge given the PIs of its two clusters.
pub fn classify_bridge(cluster_pair: (u32, u32), bridge: Vec<BridgeEdge>, pi_a: usize, pi_b: usize) -> InterClusterConnection {
    let separator = separator_size(&bridge);
    let pattern = match separator {
        0 | 1 if bridge.len() == 1 => Pattern::OneOne,
        0 | 1 => Pattern::OneMany,
        2 => Pattern::TwoBy,
        _ if bridge.iter().any(|e| (e.a, e.b) == (pi_a, pi_b)) => Pattern::MmA,
        _ => Pattern::MmB,
    };
    InterClusterConnection {
        cluster_pair,
        total_weight: bridge.iter().map(|e| u64::from(e.weight)).sum(),
        bridge_edges: bridge,
        separator_size: separator,
        link_type: LinkType::from_separator(separator),
        pattern,
    }
}

/// Classifies the connection between two clusters, given their members.
pub fn classify_connection(
    net: &CoauthorNetwork,
    cluster_pair: (u32, u32),
    bridge: Vec<BridgeEdge>,
    members_a: &[usize],
    members_b: &[usize],
) -> InterClusterConnection {
    let pi_a = principal_investigator(net, members_a).unwrap_or(usize::MAX);
    let pi_b = principal_investigator(net, members_b).unwrap_or(usize::MAX);
    classify_bridge(cluster_pair, bridge, pi_a, pi_b)
}

/// Every inter-cluster connection of a clustered network, ordered by pair.
pub fn classify_all(net: &CoauthorNetwork, clustering: &Clustering) -> Vec<InterClusterConnection> {
    let members = clustering.members();
    let pis: Vec<usize> = members
        .iter()
        .map(|m| principal_investigator(net, m).expect("clusters are non-empty"))
        .collect();
    bridge_edges(net, clustering)
        .into_iter()
        .map(|((a, b), bridge)| classify_bridge((a, b), bridge, pis[a as usize - 1], pis[b as usize - 1]))
        .collect()
}

/// Clusters as nodes, connections of one link type as edges.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLevelNetwork {
    pub kind: LinkType,
    /// Participating cluster ids, ascending.
    pub nodes: Vec<u32>,
    pub edges: Vec<InterClusterConnection>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterNetworkStats {
    pub participating_clusters: usize,
    /// Share of all clusters that have at least one edge of this kind.
    pub participating_fraction: f64,
    pub edge_count: usize,
    /// Share of all classified connections that are of this kind.
    pub link_fraction: f64,
    pub mean_degree: f64,
    pub median_degree: f64,
    pub max_degree: usize,
    pub components: usize,
    pub largest_component: usize,
    /// The largest component holds more than half the participating clusters.
    pub has_giant_component: bool,
}

impl ClusterLevelNetwork {
    pub fn build(connections: &[InterClusterConnection], kind: LinkType) -> Self {
        let edges: Vec<InterClusterConnection> =
            connections.iter().filter(|c| c.link_type == kind).cloned().collect();
        let nodes: BTreeSet<u32> = edges.iter().flat_map(|c| [c.cluster_pair.0, c.cluster_pair.1]).collect();
        Self { kind, nodes: nodes.into_iter().collect(), edges }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            for c in [e.cluster_pair.0, e.cluster_pair.1] {
                deg[self.nodes.binary_search(&c).expect("endpoint is a node")] += 1;
            }
        }
        deg
    }

    pub fn stats(&self, total_clusters: usize, total_connections: usize) -> ClusterNetworkStats {
        let deg: Vec<f64> = self.degrees().into_iter().map(|d| d as f64).collect();
        let mut sets = DisjointSets::new(self.nodes.len());
        for e in &self.edges {
            let a = self.nodes.binary_search(&e.cluster_pair.0).expect("endpoint is a node");
            let b = self.nodes.binary_search(&e.cluster_pair.1).expect("endpoint is a node");
            sets.union(a, b);
        }
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..self.nodes.len() {
            *sizes.entry(sets.find(i)).or_insert(0) += 1;
        }
        let largest = sizes.values().copied().max().unwrap_or(0);
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        ClusterNetworkStats {
            participating_clusters: self.nodes.len(),
            participating_fraction: ratio(self.nodes.len(), total_clusters),
            edge_count: self.edges.len(),
            link_fraction: ratio(self.edges.len(), total_connections),
            mean_degree: stats::mean(&deg),
            median_degree: stats::median(&deg),
            max_degree: deg.iter().copied().fold(0.0, f64::max) as usize,
            components: sizes.len(),
            largest_component: largest,
            has_giant_component: largest * 2 > self.nodes.len() && !self.nodes.is_empty(),
        }
    }
}

/// Author-level subnetwork around one cluster.
#[derive(Debug, Clone)]
pub struct Neighborhood {
    pub network: CoauthorNetwork,
    /// Cluster id of each vertex of `network`.
    pub cluster_of: Vec<u32>,
    /// The seed followed by every cluster sharing a bridge edge with it.
    pub clusters: Vec<u32>,
}

/// Induced subnetwork on the seed cluster and every cluster directly linked to it.
pub fn extract_neighborhood(net: &CoauthorNetwork, clustering: &Clustering, seed: u32) -> Result<Neighborhood> {
    if seed == 0 || seed as usize > clustering.cluster_count() {
        return Err(Error::UnknownCluster(seed));
    }
    let mut linked = BTreeSet::new();
    for i in 0..net.node_count() {
        if clustering.cluster_of(i) != seed {
            continue;
        }
        for &(j, _) in net.neighbors(i) {
            let c = clustering.cluster_of(j as usize);
            if c != seed {
                linked.insert(c);
            }
        }
    }
    let keep: Vec<usize> = (0..net.node_count())
        .filter(|&i| {
            let c = clustering.cluster_of(i);
            c == seed || linked.contains(&c)
        })
        .collect();
    let mut clusters = vec![seed];
    clusters.extend(linked);
    Ok(Neighborhood {
        cluster_of: keep.iter().map(|&i| clustering.cluster_of(i)).collect(),
        network: net.induced(&keep),
        clusters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AuthorNode;
    use crate::ingest::key;
    use alloc::format;

    fn e(a: usize, b: usize) -> BridgeEdge {
        BridgeEdge { a, b, weight: 1 }
    }

    #[test]
    fn separator_examples() {
        assert_eq!(separator_size(&[e(1, 10)]), 1);
        assert_eq!(separator_size(&[e(1, 10), e(1, 11), e(1, 12)]), 1);
        let biclique: Vec<_> = (0..3).flat_map(|a| (10..13).map(move |b| e(a, b))).collect();
        assert_eq!(separator_size(&biclique), 3);
        assert_eq!(separator_size(&[e(1, 10), e(1, 11), e(2, 12), e(2, 13)]), 2);
    }

    #[test]
    fn classification_examples() {
        let c = classify_bridge((1, 2), vec![e(5, 6)], 0, 1);
        assert_eq!((c.link_type, c.pattern), (LinkType::Transfer, Pattern::OneOne));
        let c = classify_bridge((1, 2), vec![e(5, 6), e(5, 7), e(8, 9), e(8, 10)], 0, 1);
        assert_eq!((c.link_type, c.pattern, c.separator_size), (LinkType::Transfer, Pattern::TwoBy, 2));
        let biclique: Vec<_> = (0..3).flat_map(|a| (10..13).map(move |b| e(a, b))).collect();
        let c = classify_bridge((1, 2), biclique.clone(), 0, 10);
        assert_eq!((c.link_type, c.pattern), (LinkType::Collaboration, Pattern::MmA));
        assert_eq!(c.total_weight, 9);
        let c = classify_bridge((1, 2), biclique, 0, 99);
        assert_eq!(c.pattern, Pattern::MmB);
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> CoauthorNetwork {
        let nodes = (0..n).map(|i| AuthorNode::bare(key(&format!("N{i:03}")))).collect();
        CoauthorNetwork::from_parts(nodes, edges.iter().map(|&(a, b)| (a, b, 1))).unwrap()
    }

    #[test]
    fn bridges_and_neighborhoods() {
        // Three triangles, pairwise linked, plus an isolated fourth triangle.
        let mut edges = Vec::new();
        for o in [0, 3, 6, 9] {
            edges.extend([(o, o + 1), (o + 1, o + 2), (o, o + 2)]);
        }
        edges.extend([(0, 3), (3, 6), (6, 0)]);
        let net = graph(12, &edges);
        let c = Clustering::from_labels(&net, &[1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4], 0).unwrap();
        let bridges = bridge_edges(&net, &c);
        assert_eq!(bridges.len(), 3);
        assert!(bridges.values().all(|b| b.len() == 1));

        let hood = extract_neighborhood(&net, &c, 1).unwrap();
        assert_eq!(hood.clusters, [1, 2, 3]);
        assert_eq!(hood.network.node_count(), 9);
        let lonely = extract_neighborhood(&net, &c, 4).unwrap();
        assert_eq!(lonely.network.node_count(), 3);
        assert!(extract_neighborhood(&net, &c, 5).is_err());

        let none = Clustering::from_labels(&net, &[1; 12], 0).unwrap();
        assert!(bridge_edges(&net, &none).is_empty());
    }

    #[test]
    fn cluster_network_stats() {
        let conns = [
            classify_bridge((1, 2), vec![e(0, 1)], 0, 1),
            classify_bridge((2, 3), vec![e(0, 1)], 0, 1),
        ];
        let collab = ClusterLevelNetwork::build(&conns, LinkType::Collaboration);
        assert!(collab.nodes.is_empty() && collab.edges.is_empty());
        let transfer = ClusterLevelNetwork::build(&conns, LinkType::Transfer);
        let s = transfer.stats(4, 2);
        assert_eq!(s.participating_clusters, 3);
        assert_eq!(s.participating_fraction, 0.75);
        assert_eq!(s.link_fraction, 1.0);
        assert_eq!((s.median_degree, s.max_degree, s.components), (1.0, 2, 1));
        assert!(s.has_giant_component);
    }
}

//! Cluster-internal structure: Freeman centralization, within-module degree
//! z-scores, participation coefficients and the seven node roles.
//!
//! Degrees are unweighted (edge multiplicity ignored) unless
//! [`DegreeMode::Weighted`] is requested explicitly.
//!
//! The participation coefficient uses squared shares,
//! `P = 1 - sum_s (k_s / k)^2`. The unsquared sum of shares is identically one,
//! which would make every `P` zero and the role thresholds meaningless.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cluster::Clustering;
use crate::graph::CoauthorNetwork;
use crate::{Error, Result};

/// Hub threshold on the within-module z-score (inclusive).
pub const HUB_Z: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralizationIndices {
    pub degree: f64,
    pub closeness: f64,
    pub betweenness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centralization {
    pub indices: CentralizationIndices,
    /// Set when the input was disconnected and only its largest component
    /// was measured.
    pub largest_component_only: bool,
}

fn simple_adjacency(net: &CoauthorNetwork) -> Vec<Vec<usize>> {
    (0..net.node_count())
        .map(|i| net.neighbors(i).iter().map(|&(j, _)| j as usize).collect())
        .collect()
}

fn bfs_distances(adj: &[Vec<usize>], source: usize, dist: &mut [usize]) {
    dist.iter_mut().for_each(|d| *d = usize::MAX);
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Exact betweenness of an undirected unweighted graph by Brandes
/// accumulation. Each unordered pair `{s, t}` is counted once.
pub fn betweenness(adj: &[Vec<usize>]) -> Vec<f64> {
    let n = adj.len();
    let mut bc = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack = Vec::with_capacity(n);
    for s in 0..n {
        for v in 0..n {
            sigma[v] = 0.0;
            dist[v] = usize::MAX;
            delta[v] = 0.0;
            preds[v].clear();
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }
    bc.iter_mut().for_each(|b| *b /= 2.0);
    bc
}

fn freeman(values: &[f64], max_sum: f64) -> f64 {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = values.iter().map(|&c| top - c).sum();
    (sum / max_sum).clamp(0.0, 1.0)
}

/// Freeman degree, closeness and betweenness centralization of an
/// (unweighted view of a) cluster subgraph.
///
/// Each index is `sum_i (C* - C_i)` over normalized centralities divided by
/// the largest value that sum can take on `n` vertices, which the star
/// attains: `n - 2` for degree, `(n - 1)(n - 2) / (2n - 3)` for closeness and
/// `n - 1` for betweenness.
pub fn centralization(net: &CoauthorNetwork) -> Result<Centralization> {
    let comps = net.components();
    let largest_component_only = comps.len() > 1;
    let owned;
    let graph = if largest_component_only {
        owned = net.giant_component()?.network;
        &owned
    } else {
        net
    };
    let n = graph.node_count();
    if n < 3 {
        return Err(Error::CentralizationUndefined(n));
    }
    let adj = simple_adjacency(graph);
    let nf = n as f64;

    let degree: Vec<f64> = adj.iter().map(|a| a.len() as f64 / (nf - 1.0)).collect();

    let mut dist = vec![0usize; n];
    let closeness: Vec<f64> = (0..n)
        .map(|i| {
            bfs_distances(&adj, i, &mut dist);
            (nf - 1.0) / dist.iter().sum::<usize>() as f64
        })
        .collect();

    let pairs = (nf - 1.0) * (nf - 2.0) / 2.0;
    let between: Vec<f64> = betweenness(&adj).into_iter().map(|b| b / pairs).collect();

    Ok(Centralization {
        indices: CentralizationIndices {
            degree: freeman(&degree, nf - 2.0),
            closeness: freeman(&closeness, (nf - 1.0) * (nf - 2.0) / (2.0 * nf - 3.0)),
            betweenness: freeman(&between, nf - 1.0),
        },
        largest_component_only,
    })
}

/// How edges are counted for z and P.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeMode {
    #[default]
    Unweighted,
    Weighted,
}

fn edge_value(w: u32, mode: DegreeMode) -> f64 {
    match mode {
        DegreeMode::Unweighted => 1.0,
        DegreeMode::Weighted => f64::from(w),
    }
}

/// Node roles by within-module degree and participation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    UltraPeripheral,
    Peripheral,
    SatelliteConnector,
    Kinless,
    ProvincialHub,
    ConnectorHub,
    GlobalHub,
}

impl Role {
    pub const ALL: [Role; 7] = [
        Role::UltraPeripheral,
        Role::Peripheral,
        Role::SatelliteConnector,
        Role::Kinless,
        Role::ProvincialHub,
        Role::ConnectorHub,
        Role::GlobalHub,
    ];

    /// `R1` .. `R7`.
    pub fn code(self) -> &'static str {
        ["R1", "R2", "R3", "R4", "R5", "R6", "R7"][self.index()]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_hub(self) -> bool {
        self >= Role::ProvincialHub
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.code() == code)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Role from within-module z-score and participation coefficient.
///
/// Hubs have `z >= 2.5`. Non-hubs split at `P` = 0.05, 0.62, 0.8 and hubs at
/// `P` = 0.30, 0.75, every upper bound inclusive.
pub fn assign_role(z: f64, p: f64) -> Result<Role> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParticipationOutOfRange(p));
    }
    if !z.is_finite() {
        return Err(Error::NonFiniteZ);
    }
    Ok(if z >= HUB_Z {
        match p {
            p if p <= 0.30 => Role::ProvincialHub,
            p if p <= 0.75 => Role::ConnectorHub,
            _ => Role::GlobalHub,
        }
    } else {
        match p {
            p if p <= 0.05 => Role::UltraPeripheral,
            p if p <= 0.62 => Role::Peripheral,
            p if p <= 0.8 => Role::SatelliteConnector,
            _ => Role::Kinless,
        }
    })
}

/// `P = 1 - sum_s (k_s / k)^2` over all clusters `s`, the node's own included.
/// Returns `(0, true)` for an isolated node.
pub fn participation_coefficient(
    net: &CoauthorNetwork,
    clustering: &Clustering,
    node: usize,
    mode: DegreeMode,
) -> (f64, bool) {
    let mut per_cluster: Vec<(u32, f64)> = net
        .neighbors(node)
        .iter()
        .map(|&(j, w)| (clustering.cluster_of(j as usize), edge_value(w, mode)))
        .collect();
    per_cluster.sort_by_key(|&(c, _)| c);
    let k: f64 = per_cluster.iter().map(|&(_, v)| v).sum();
    if k == 0.0 {
        return (0.0, true);
    }
    let mut sum_sq = 0.0;
    let mut i = 0;
    while i < per_cluster.len() {
        let c = per_cluster[i].0;
        let mut ks = 0.0;
        while i < per_cluster.len() && per_cluster[i].0 == c {
            ks += per_cluster[i].1;
            i += 1;
        }
        sum_sq += (ks / k) * (ks / k);
    }
    ((1.0 - sum_sq).clamp(0.0, 1.0), false)
}

fn internal_degree(net: &CoauthorNetwork, clustering: &Clustering, node: usize, mode: DegreeMode) -> f64 {
    let c = clustering.cluster_of(node);
    net.neighbors(node)
        .iter()
        .filter(|&&(j, _)| clustering.cluster_of(j as usize) == c)
        .map(|&(_, w)| edge_value(w, mode))
        .sum()
}

fn z_scores(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = libm::sqrt(var);
    if sd <= 1e-12 * (1.0 + mean.abs()) {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - mean) / sd).collect()
}

/// Within-module degree z-score with population standard deviation over the
/// node's cluster; zero when every member has the same internal degree.
pub fn within_module_z(net: &CoauthorNetwork, clustering: &Clustering, node: usize, mode: DegreeMode) -> f64 {
    let c = clustering.cluster_of(node);
    let members: Vec<usize> = (0..net.node_count()).filter(|&i| clustering.cluster_of(i) == c).collect();
    let k_in: Vec<f64> = members.iter().map(|&i| internal_degree(net, clustering, i, mode)).collect();
    let pos = members.iter().position(|&i| i == node).expect("node belongs to its cluster");
    z_scores(&k_in)[pos]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeRoleProfile {
    pub cluster: u32,
    pub internal_degree: f64,
    pub degree: f64,
    pub z: f64,
    pub participation: f64,
    pub role: Role,
    /// No links at all; `participation` is zero by convention.
    pub isolated: bool,
}

/// Profiles every vertex of a clustered network.
pub fn node_profiles(net: &CoauthorNetwork, clustering: &Clustering, mode: DegreeMode) -> Result<Vec<NodeRoleProfile>> {
    if clustering.len() != net.node_count() {
        return Err(Error::ClusteringSizeMismatch { expected: net.node_count(), got: clustering.len() });
    }
    let k_in: Vec<f64> = (0..net.node_count()).map(|i| internal_degree(net, clustering, i, mode)).collect();
    let mut z = vec![0.0; net.node_count()];
    for members in clustering.members() {
        let values: Vec<f64> = members.iter().map(|&i| k_in[i]).collect();
        for (&i, zi) in members.iter().zip(z_scores(&values)) {
            z[i] = zi;
        }
    }
    (0..net.node_count())
        .map(|i| {
            let (participation, isolated) = participation_coefficient(net, clustering, i, mode);
            let degree = net.neighbors(i).iter().map(|&(_, w)| edge_value(w, mode)).sum();
            Ok(NodeRoleProfile {
                cluster: clustering.cluster_of(i),
                internal_degree: k_in[i],
                degree,
                z: z[i],
                participation,
                role: assign_role(z[i], participation)?,
                isolated,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoleDistribution {
    /// Indexed by [`Role::index`].
    pub counts: [usize; 7],
    pub fractions: [f64; 7],
}

pub fn role_distribution(profiles: &[NodeRoleProfile]) -> RoleDistribution {
    let mut counts = [0usize; 7];
    for p in profiles {
        counts[p.role.index()] += 1;
    }
    let total = profiles.len().max(1) as f64;
    RoleDistribution { counts, fractions: counts.map(|c| c as f64 / total) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HubnessKind {
    NoHub,
    SingleHub,
    MultiHub,
}

impl HubnessKind {
    pub const ALL: [HubnessKind; 3] = [HubnessKind::NoHub, HubnessKind::SingleHub, HubnessKind::MultiHub];

    pub fn label(self) -> &'static str {
        match self {
            HubnessKind::NoHub => "no-hub",
            HubnessKind::SingleHub => "single-hub",
            HubnessKind::MultiHub => "multi-hub",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|h| h.label() == label)
    }
}

impl fmt::Display for HubnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hubness {
    pub kind: HubnessKind,
    pub hub_count: usize,
}

impl Hubness {
    pub fn from_count(hub_count: usize) -> Self {
        let kind = match hub_count {
            0 => HubnessKind::NoHub,
            1 => HubnessKind::SingleHub,
            _ => HubnessKind::MultiHub,
        };
        Self { kind, hub_count }
    }
}

/// Counts members with `z >= 2.5`.
pub fn cluster_hubness(members: &[usize], profiles: &[NodeRoleProfile]) -> Hubness {
    Hubness::from_count(members.iter().filter(|&&i| profiles[i].z >= HUB_Z).count())
}

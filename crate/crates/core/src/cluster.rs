//! Community detection by minimum description length of a random walk.
//!
//! The objective is the two-level map equation for undirected integer-weighted
//! networks: a walker moves along edges with probability proportional to
//! their weight, and a partition is scored by the expected number of bits per
//! step needed to describe the walk with one codebook per cluster plus an
//! index codebook for cluster changes. With node visit rates `p_a`, cluster
//! exit rates `q_i` and `p_i = sum of p_a over cluster i`:
//!
//! ```text
//! L = plogp(sum q_i) - 2 sum plogp(q_i) - sum plogp(p_a) + sum plogp(q_i + p_i)
//! ```
//!
//! Search starts from singletons, greedily merges the pair of adjacent
//! clusters that shortens `L` the most, then moves single nodes between
//! neighboring clusters until no move helps. The two phases alternate until
//! the code length stops improving. Every accepted step strictly shortens `L`,
//! and moves that would disconnect a cluster are rejected, so clusters are
//! connected by construction.

use alloc::collections::{BTreeMap, BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohort::SizeCategory;
use crate::graph::CoauthorNetwork;
use crate::ingest::Corpus;
use crate::stats::{self, Percentiles};
use crate::{Error, Result};

/// Improvements smaller than this many bits are treated as ties.
const IMPROVEMENT_EPS: f64 = 1e-10;
const MAX_ROUNDS: usize = 32;
const MAX_SWEEPS: usize = 200;

/// Total assignment of network vertices to clusters `1..=k`, numbered by
/// descending size with ties broken by smallest member key.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    assignment: Vec<u32>,
    quality: f64,
    seed: u64,
}

impl Clustering {
    /// Relabels arbitrary per-vertex labels to the dense ordered convention
    /// and scores the result with [`codelength`].
    pub fn from_labels<L: Ord + Clone>(net: &CoauthorNetwork, labels: &[L], seed: u64) -> Result<Self> {
        if labels.len() != net.node_count() {
            return Err(Error::ClusteringSizeMismatch { expected: net.node_count(), got: labels.len() });
        }
        let mut groups: BTreeMap<&L, Vec<usize>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(i);
        }
        let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
        // Members are pushed in index order, and index order is key order.
        groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut assignment = vec![0u32; labels.len()];
        for (id, members) in groups.iter().enumerate() {
            for &m in members {
                assignment[m] = id as u32 + 1;
            }
        }
        let quality = codelength(net, &assignment);
        Ok(Self { assignment, quality, seed })
    }

    /// Cluster id of vertex `i`.
    pub fn cluster_of(&self, i: usize) -> u32 {
        self.assignment[i]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn cluster_count(&self) -> usize {
        self.assignment.iter().copied().max().unwrap_or(0) as usize
    }

    /// Members per cluster; entry `k` holds cluster `k + 1`, sorted ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cluster_count()];
        for (i, &c) in self.assignment.iter().enumerate() {
            out[c as usize - 1].push(i);
        }
        out
    }

    /// Map-equation code length in bits per step.
    pub fn quality(&self) -> f64 {
        self.quality
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Fails with the first cluster whose induced subgraph is disconnected.
    pub fn check_connected(&self, net: &CoauthorNetwork) -> Result<()> {
        for (k, members) in self.members().iter().enumerate() {
            if !net.induced(members).is_connected() {
                return Err(Error::DisconnectedCluster(k as u32 + 1));
            }
        }
        Ok(())
    }
}

#[inline]
fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * libm::log2(x)
    } else {
        0.0
    }
}

/// Two-level map-equation code length of `assignment` (any labels) on `net`.
/// Zero for networks without edges.
pub fn codelength(net: &CoauthorNetwork, assignment: &[u32]) -> f64 {
    let total = net.total_weight();
    if total == 0 {
        return 0.0;
    }
    let norm = 1.0 / (2 * total) as f64;
    let mut exit: BTreeMap<u32, u64> = BTreeMap::new();
    let mut flow: BTreeMap<u32, u64> = BTreeMap::new();
    let mut node_term = 0.0;
    for i in 0..net.node_count() {
        let s = net.strength(i);
        node_term += plogp(s as f64 * norm);
        *flow.entry(assignment[i]).or_insert(0) += s;
        let out: u64 = net
            .neighbors(i)
            .iter()
            .filter(|&&(j, _)| assignment[j as usize] != assignment[i])
            .map(|&(_, w)| u64::from(w))
            .sum();
        *exit.entry(assignment[i]).or_insert(0) += out;
    }
    let exit_total: u64 = exit.values().sum();
    let mut l = plogp(exit_total as f64 * norm) - node_term;
    for (m, &e) in &exit {
        let q = e as f64 * norm;
        l += plogp(q + flow[m] as f64 * norm) - 2.0 * plogp(q);
    }
    l
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    delta: f64,
    tie: u64,
    a: u32,
    b: u32,
    stamp_a: u32,
    stamp_b: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.delta
            .total_cmp(&other.delta)
            .then(self.tie.cmp(&other.tie))
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
    }
}

/// Search state over one connected network.
struct MapEquation<'a> {
    net: &'a CoauthorNetwork,
    norm: f64,
    strength: Vec<u64>,
    module_of: Vec<u32>,
    exit: Vec<u64>,
    flow: Vec<u64>,
    size: Vec<u32>,
    exit_total: u64,
    node_term: f64,
}

impl<'a> MapEquation<'a> {
    fn singletons(net: &'a CoauthorNetwork) -> Self {
        let n = net.node_count();
        let norm = 1.0 / (2 * net.total_weight()) as f64;
        let strength: Vec<u64> = (0..n).map(|i| net.strength(i)).collect();
        let node_term = strength.iter().map(|&s| plogp(s as f64 * norm)).sum();
        Self {
            net,
            norm,
            module_of: (0..n as u32).collect(),
            exit: strength.clone(),
            flow: strength.clone(),
            size: vec![1; n],
            exit_total: strength.iter().sum(),
            strength,
            node_term,
        }
    }

    fn codelength(&self) -> f64 {
        let mut l = plogp(self.exit_total as f64 * self.norm) - self.node_term;
        for m in 0..self.exit.len() {
            if self.size[m] > 0 {
                let q = self.exit[m] as f64 * self.norm;
                l += plogp(q + self.flow[m] as f64 * self.norm) - 2.0 * plogp(q);
            }
        }
        l
    }

    fn merge_delta(&self, a: usize, b: usize, w_ab: u64) -> f64 {
        let n = self.norm;
        let (qa, qb) = (self.exit[a] as f64 * n, self.exit[b] as f64 * n);
        let (pa, pb) = (self.flow[a] as f64 * n, self.flow[b] as f64 * n);
        let q_new = (self.exit[a] + self.exit[b] - 2 * w_ab) as f64 * n;
        let total = self.exit_total as f64 * n;
        let total_new = (self.exit_total - 2 * w_ab) as f64 * n;
        plogp(total_new) - plogp(total) - 2.0 * (plogp(q_new) - plogp(qa) - plogp(qb))
            + plogp(q_new + pa + pb)
            - plogp(qa + pa)
            - plogp(qb + pb)
    }

    /// Change in code length when node `v` leaves `a` for `b`, given its
    /// link weight into each.
    fn move_delta(&self, v: usize, a: usize, b: usize, w_va: u64, w_vb: u64) -> f64 {
        let n = self.norm;
        let s = self.strength[v];
        let exit_a = self.exit[a] + 2 * w_va - s;
        let exit_b = self.exit[b] + s - 2 * w_vb;
        let total_new = self.exit_total - self.exit[a] - self.exit[b] + exit_a + exit_b;
        let (qa, qb) = (self.exit[a] as f64 * n, self.exit[b] as f64 * n);
        let (qa2, qb2) = (exit_a as f64 * n, exit_b as f64 * n);
        let (pa, pb) = (self.flow[a] as f64 * n, self.flow[b] as f64 * n);
        let (pa2, pb2) = ((self.flow[a] - s) as f64 * n, (self.flow[b] + s) as f64 * n);
        plogp(total_new as f64 * n) - plogp(self.exit_total as f64 * n)
            - 2.0 * (plogp(qa2) + plogp(qb2) - plogp(qa) - plogp(qb))
            + plogp(qa2 + pa2)
            + plogp(qb2 + pb2)
            - plogp(qa + pa)
            - plogp(qb + pb)
    }

    /// Greedy agglomeration of adjacent modules, best merge first.
    fn merge_phase(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let m = self.exit.len();
        let mut links: Vec<BTreeMap<u32, u64>> = vec![BTreeMap::new(); m];
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); m];
        for v in 0..self.net.node_count() {
            let a = self.module_of[v];
            members[a as usize].push(v as u32);
            for &(u, w) in self.net.neighbors(v) {
                let b = self.module_of[u as usize];
                if a != b {
                    *links[a as usize].entry(b).or_insert(0) += u64::from(w);
                }
            }
        }
        let mut stamp = vec![0u32; m];
        let mut heap = BinaryHeap::new();
        for (a, row) in links.iter().enumerate() {
            for (&b, &w) in row {
                if (a as u32) < b {
                    heap.push(Reverse(Candidate {
                        delta: self.merge_delta(a, b as usize, w),
                        tie: rng.random(),
                        a: a as u32,
                        b,
                        stamp_a: 0,
                        stamp_b: 0,
                    }));
                }
            }
        }
        let mut merged = false;
        while let Some(Reverse(c)) = heap.pop() {
            let (a, b) = (c.a as usize, c.b as usize);
            if self.size[a] == 0 || self.size[b] == 0 || stamp[a] != c.stamp_a || stamp[b] != c.stamp_b {
                continue;
            }
            let w_ab = links[a][&c.b];
            let delta = self.merge_delta(a, b, w_ab);
            if delta > c.delta + 1e-12 {
                heap.push(Reverse(Candidate { delta, ..c }));
                continue;
            }
            if delta >= -IMPROVEMENT_EPS {
                continue;
            }
            // Fold the module with fewer neighbors into the other.
            let (keep, gone) = if links[a].len() >= links[b].len() { (a, b) } else { (b, a) };
            let gone_links = core::mem::take(&mut links[gone]);
            for (&c2, &w) in &gone_links {
                let c2u = c2 as usize;
                links[c2u].remove(&(gone as u32));
                if c2u != keep {
                    *links[keep].entry(c2).or_insert(0) += w;
                    *links[c2u].entry(keep as u32).or_insert(0) += w;
                }
            }
            links[keep].remove(&(gone as u32));
            self.exit[keep] = self.exit[a] + self.exit[b] - 2 * w_ab;
            self.exit[gone] = 0;
            self.flow[keep] += self.flow[gone];
            self.flow[gone] = 0;
            self.size[keep] += self.size[gone];
            self.size[gone] = 0;
            self.exit_total -= 2 * w_ab;
            let moved = core::mem::take(&mut members[gone]);
            for &v in &moved {
                self.module_of[v as usize] = keep as u32;
            }
            members[keep].extend(moved);
            stamp[keep] += 1;
            merged = true;
            for (&c2, &w) in &links[keep] {
                let (lo, hi) = if (keep as u32) < c2 { (keep as u32, c2) } else { (c2, keep as u32) };
                heap.push(Reverse(Candidate {
                    delta: self.merge_delta(keep, c2 as usize, w),
                    tie: rng.random(),
                    a: lo,
                    b: hi,
                    stamp_a: stamp[lo as usize],
                    stamp_b: stamp[hi as usize],
                }));
            }
        }
        merged
    }

    /// Whether module `a` stays connected once `v` leaves it.
    fn stays_connected_without(&self, v: usize, a: u32, seen: &mut [u32], epoch: u32) -> bool {
        let remaining = self.size[a as usize] as usize - 1;
        if remaining == 0 {
            return true;
        }
        let Some(start) = self
            .net
            .neighbors(v)
            .iter()
            .map(|&(u, _)| u as usize)
            .find(|&u| self.module_of[u] == a)
        else {
            return false;
        };
        let mut queue = VecDeque::from([start]);
        seen[start] = epoch;
        seen[v] = epoch;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &(u, _) in self.net.neighbors(x) {
                let u = u as usize;
                if seen[u] != epoch && self.module_of[u] == a {
                    seen[u] = epoch;
                    reached += 1;
                    queue.push_back(u);
                }
            }
        }
        reached == remaining
    }

    /// Moves single nodes to the neighboring module that shortens the code
    /// length most, until a sweep makes no move.
    fn refine_phase(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let n = self.net.node_count();
        let mut order: Vec<usize> = (0..n).collect();
        let mut link_to = vec![0u64; self.exit.len()];
        let mut touched: Vec<u32> = Vec::new();
        let mut seen = vec![0u32; n];
        let mut epoch = 0u32;
        let mut moved_any = false;
        for _ in 0..MAX_SWEEPS {
            order.shuffle(rng);
            let mut moved = false;
            for &v in &order {
                let a = self.module_of[v];
                for &(u, w) in self.net.neighbors(v) {
                    let m = self.module_of[u as usize];
                    if link_to[m as usize] == 0 {
                        touched.push(m);
                    }
                    link_to[m as usize] += u64::from(w);
                }
                let w_va = link_to[a as usize];
                let mut best: Option<(f64, u32)> = None;
                for &b in &touched {
                    if b == a {
                        continue;
                    }
                    let d = self.move_delta(v, a as usize, b as usize, w_va, link_to[b as usize]);
                    if d < -IMPROVEMENT_EPS && best.is_none_or(|(bd, _)| d < bd) {
                        best = Some((d, b));
                    }
                }
                if let Some((_, b)) = best {
                    epoch += 1;
                    if self.stays_connected_without(v, a, &mut seen, epoch) {
                        let w_vb = link_to[b as usize];
                        let s = self.strength[v];
                        let (a, b) = (a as usize, b as usize);
                        let new_a = self.exit[a] + 2 * w_va - s;
                        let new_b = self.exit[b] + s - 2 * w_vb;
                        self.exit_total = self.exit_total - self.exit[a] - self.exit[b] + new_a + new_b;
                        self.exit[a] = new_a;
                        self.exit[b] = new_b;
                        self.flow[a] -= s;
                        self.flow[b] += s;
                        self.size[a] -= 1;
                        self.size[b] += 1;
                        self.module_of[v] = b as u32;
                        moved = true;
                    }
                }
                for &m in &touched {
                    link_to[m as usize] = 0;
                }
                touched.clear();
            }
            moved_any |= moved;
            if !moved {
                break;
            }
        }
        moved_any
    }

    fn optimize(&mut self, rng: &mut ChaCha8Rng) {
        let mut best = self.codelength();
        for _ in 0..MAX_ROUNDS {
            let merged = self.merge_phase(rng);
            let moved = self.refine_phase(rng);
            let l = self.codelength();
            if !(merged || moved) || l > best - IMPROVEMENT_EPS {
                break;
            }
            best = l;
        }
        // All-in-one is always connected here; keep it if it is shorter.
        let one_module = -self.node_term;
        if one_module < self.codelength() - IMPROVEMENT_EPS {
            self.module_of.iter_mut().for_each(|m| *m = 0);
        }
    }
}

fn trial_rng(seed: u64, trial: usize, component: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((trial as u64) << 32) | component as u64);
    rng
}

/// Partitions `net` into clusters minimizing the map-equation code length.
///
/// Each connected component is optimized on its own, `trials` times with
/// independently seeded restarts; the shortest restart wins, ties going to
/// the earliest. The result is a deterministic function of
/// `(net, seed, trials)`.
pub fn detect_communities(net: &CoauthorNetwork, seed: u64, trials: usize) -> Result<Clustering> {
    if net.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let mut labels = vec![(0usize, 0u32); net.node_count()];
    for (ci, comp) in net.components().iter().enumerate() {
        if comp.len() == 1 {
            labels[comp[0]] = (ci, 0);
            continue;
        }
        let sub = net.induced(comp);
        let mut best: Option<(f64, Vec<u32>)> = None;
        for t in 0..trials {
            let mut rng = trial_rng(seed, t, ci);
            let mut state = MapEquation::singletons(&sub);
            state.optimize(&mut rng);
            let l = codelength(&sub, &state.module_of);
            if best.as_ref().is_none_or(|(bl, _)| l < *bl - IMPROVEMENT_EPS) {
                best = Some((l, state.module_of));
            }
        }
        let (_, modules) = best.expect("trials >= 1");
        for (local, &global) in comp.iter().enumerate() {
            labels[global] = (ci, modules[local]);
        }
    }
    let clustering = Clustering::from_labels(net, &labels, seed)?;
    clustering.check_connected(net)?;
    Ok(clustering)
}

/// Normalized mutual information `2 I(A;B) / (H(A) + H(B))` between two
/// labelings of the same vertices. Two single-cluster labelings score 1.
pub fn normalized_mutual_information(a: &[u32], b: &[u32]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must cover the same vertices");
    let n = a.len() as f64;
    if a.is_empty() {
        return 1.0;
    }
    let mut joint: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    let mut ca: BTreeMap<u32, f64> = BTreeMap::new();
    let mut cb: BTreeMap<u32, f64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_insert(0.0) += 1.0;
        *ca.entry(x).or_insert(0.0) += 1.0;
        *cb.entry(y).or_insert(0.0) += 1.0;
    }
    let entropy = |m: &BTreeMap<u32, f64>| -m.values().map(|&c| plogp(c / n)).sum::<f64>();
    let (ha, hb) = (entropy(&ca), entropy(&cb));
    if ha + hb == 0.0 {
        return 1.0;
    }
    let mi: f64 = joint
        .iter()
        .map(|(&(x, y), &c)| {
            let pxy = c / n;
            pxy * libm::log2(pxy / ((ca[&x] / n) * (cb[&y] / n)))
        })
        .sum();
    (2.0 * mi / (ha + hb)).clamp(0.0, 1.0)
}

/// Derived properties of one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterInfo {
    pub id: u32,
    /// Vertex indices, ascending.
    pub members: Vec<usize>,
    pub size: usize,
    /// Distinct records with at least one member author.
    pub publications: usize,
    pub size_category: SizeCategory,
    pub internal_edge_count: usize,
    pub internal_weight: u64,
}

impl ClusterInfo {
    pub fn subgraph(&self, net: &CoauthorNetwork) -> CoauthorNetwork {
        net.induced(&self.members)
    }
}

/// Field-level view of a cluster population.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSummary {
    pub cluster_count: usize,
    pub mean_size: f64,
    pub median_size: f64,
    pub size_percentiles: Percentiles,
}

pub fn cluster_aggregates(
    net: &CoauthorNetwork,
    clustering: &Clustering,
    corpus: &Corpus,
) -> (Vec<ClusterInfo>, ClusterSummary) {
    let members = clustering.members();
    let mut publications = vec![0usize; members.len()];
    let mut touched: Vec<u32> = Vec::new();
    for record in &corpus.records {
        touched.clear();
        touched.extend(record.authors.iter().filter_map(|a| net.index_of(a)).map(|i| clustering.cluster_of(i)));
        touched.sort_unstable();
        touched.dedup();
        for &c in &touched {
            publications[c as usize - 1] += 1;
        }
    }
    let mut internal = vec![(0usize, 0u64); members.len()];
    for (a, b, w) in net.edges() {
        let (ca, cb) = (clustering.cluster_of(a), clustering.cluster_of(b));
        if ca == cb {
            internal[ca as usize - 1].0 += 1;
            internal[ca as usize - 1].1 += u64::from(w);
        }
    }
    let infos: Vec<ClusterInfo> = members
        .into_iter()
        .enumerate()
        .map(|(k, members)| ClusterInfo {
            id: k as u32 + 1,
            size: members.len(),
            size_category: SizeCategory::of(members.len()),
            members,
            publications: publications[k],
            internal_edge_count: internal[k].0,
            internal_weight: internal[k].1,
        })
        .collect();
    let sizes: Vec<f64> = infos.iter().map(|c| c.size as f64).collect();
    let summary = ClusterSummary {
        cluster_count: infos.len(),
        mean_size: stats::mean(&sizes),
        median_size: stats::median(&sizes),
        size_percentiles: Percentiles::of(&sizes),
    };
    (infos, summary)
}

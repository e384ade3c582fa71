//! The weighted co-author network and its structural reductions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ingest::{AuthorKey, Corpus, YearSpan};
use crate::{Error, Result};

/// An author vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorNode {
    pub key: AuthorKey,
    /// Records the author appears on. Zero for networks read from files that
    /// carry no provenance.
    pub paper_count: u32,
    /// Distinct publication years, ascending.
    pub years: Vec<i32>,
    /// Record ids of every paper the author is on, ascending.
    pub records: Vec<String>,
}

impl AuthorNode {
    /// A vertex without provenance.
    pub fn bare(key: AuthorKey) -> Self {
        Self { key, paper_count: 0, years: Vec::new(), records: Vec::new() }
    }

    pub fn active_slices(&self, slices: &[YearSpan]) -> SliceMask {
        let mut mask = SliceMask::default();
        for &y in &self.years {
            if let Some(i) = slices.iter().position(|s| s.contains(y)) {
                mask.set(i);
            }
        }
        mask
    }
}

/// Bit set over (at most 32) time slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SliceMask(pub u32);

impl SliceMask {
    pub fn set(&mut self, slice: usize) {
        self.0 |= 1 << slice;
    }

    pub fn get(&self, slice: usize) -> bool {
        self.0 & (1 << slice) != 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn to_vec(self, slices: usize) -> Vec<bool> {
        (0..slices).map(|i| self.get(i)).collect()
    }
}

/// Undirected graph of authors with integer edge weights counting joint papers.
///
/// Vertices are kept sorted by [`AuthorKey`], so vertex indices are stable
/// and coincide with the 1-based numbering of the Pajek writer.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoauthorNetwork {
    nodes: Vec<AuthorNode>,
    adjacency: Vec<Vec<(u32, u32)>>,
    edge_count: usize,
    total_weight: u64,
}

impl CoauthorNetwork {
    /// Every author of the corpus becomes a vertex; every record adds one to
    /// the weight of each unordered pair of its authors.
    pub fn build(corpus: &Corpus) -> Self {
        let mut nodes: BTreeMap<&AuthorKey, AuthorNode> = BTreeMap::new();
        for record in &corpus.records {
            for author in &record.authors {
                let node = nodes.entry(author).or_insert_with(|| AuthorNode::bare(author.clone()));
                node.paper_count += 1;
                node.years.push(record.year);
                node.records.push(record.record_id.clone());
            }
        }
        let index: BTreeMap<&AuthorKey, u32> =
            nodes.keys().enumerate().map(|(i, k)| (*k, i as u32)).collect();
        let mut weights: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        let mut ids = Vec::new();
        for record in &corpus.records {
            ids.clear();
            ids.extend(record.authors.iter().map(|a| index[a]));
            ids.sort_unstable();
            ids.dedup();
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    *weights.entry((a, b)).or_insert(0) += 1;
                }
            }
        }
        let nodes: Vec<AuthorNode> = nodes
            .into_values()
            .map(|mut n| {
                n.years.sort_unstable();
                n.years.dedup();
                n.records.sort();
                n.records.dedup();
                n
            })
            .collect();
        Self::assemble(nodes, weights.into_iter().map(|((a, b), w)| (a, b, w)))
    }

    // Edges must be valid: a < b, no duplicates.
    fn assemble(nodes: Vec<AuthorNode>, edges: impl Iterator<Item = (u32, u32, u32)>) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut edge_count = 0;
        let mut total_weight = 0u64;
        for (a, b, w) in edges {
            adjacency[a as usize].push((b, w));
            adjacency[b as usize].push((a, w));
            edge_count += 1;
            total_weight += u64::from(w);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self { nodes, adjacency, edge_count, total_weight }
    }

    /// Builds a network from explicit vertices and `(a, b, weight)` edges
    /// indexed into `nodes`. Vertices are re-sorted by key.
    pub fn from_parts(
        nodes: Vec<AuthorNode>,
        edges: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<Self> {
        let n = nodes.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| nodes[a].key.cmp(&nodes[b].key));
        if order.windows(2).any(|w| nodes[w[0]].key == nodes[w[1]].key) {
            return Err(Error::DuplicateAuthor);
        }
        let mut new_index = vec![0u32; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new as u32;
        }
        let mut weights: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidEdge { a, b, reason: "vertex out of range" });
            }
            if a == b {
                return Err(Error::InvalidEdge { a, b, reason: "self-loop" });
            }
            if w == 0 {
                return Err(Error::InvalidEdge { a, b, reason: "zero weight" });
            }
            let (x, y) = (new_index[a], new_index[b]);
            let pair = (x.min(y), x.max(y));
            if weights.insert(pair, w).is_some() {
                return Err(Error::InvalidEdge { a, b, reason: "duplicate edge" });
            }
        }
        let mut slots: Vec<Option<AuthorNode>> = nodes.into_iter().map(Some).collect();
        let nodes = order.iter().map(|&old| slots[old].take().expect("each vertex moved once")).collect();
        Ok(Self::assemble(nodes, weights.into_iter().map(|((a, b), w)| (a, b, w))))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn nodes(&self) -> &[AuthorNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &AuthorNode {
        &self.nodes[i]
    }

    pub fn index_of(&self, key: &AuthorKey) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.key.cmp(key)).ok()
    }

    /// `(neighbor, weight)` pairs sorted by neighbor.
    pub fn neighbors(&self, i: usize) -> &[(u32, u32)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Weighted degree.
    pub fn strength(&self, i: usize) -> u64 {
        self.adjacency[i].iter().map(|&(_, w)| u64::from(w)).sum()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<u32> {
        let list = &self.adjacency[a];
        list.binary_search_by_key(&(b as u32), |&(n, _)| n).ok().map(|i| list[i].1)
    }

    /// Edges as `(a, b, weight)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(a, list)| {
            list.iter()
                .filter(move |&&(b, _)| (b as usize) > a)
                .map(move |&(b, w)| (a, b as usize, w))
        })
    }

    /// Subnetwork induced by `keep` (indices into `self`, any order).
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_index = vec![u32::MAX; self.nodes.len()];
        for (new, &old) in keep.iter().enumerate() {
            new_index[old] = new as u32;
        }
        let nodes = keep.iter().map(|&i| self.nodes[i].clone()).collect();
        let edges = keep.iter().flat_map(|&a| {
            let new_index = &new_index;
            self.adjacency[a].iter().filter_map(move |&(b, w)| {
                let (x, y) = (new_index[a], new_index[b as usize]);
                (y != u32::MAX && x < y).then_some((x, y, w))
            })
        });
        let edges: Vec<_> = edges.collect();
        Self::assemble(nodes, edges.into_iter())
    }

    /// Drops every author with a single paper, once. Authors left isolated by
    /// the removal keep their vertex.
    pub fn reduce_single_paper_authors(&self) -> Self {
        let keep: Vec<usize> = (0..self.nodes.len()).filter(|&i| self.nodes[i].paper_count >= 2).collect();
        self.induced(&keep)
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut sets = DisjointSets::new(self.nodes.len());
        for (a, b, _) in self.edges() {
            sets.union(a, b);
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.nodes.len() {
            by_root.entry(sets.find(i)).or_default().push(i);
        }
        let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Largest connected component. Equal sizes resolve to the component
    /// holding the smallest author key.
    pub fn giant_component(&self) -> Result<GiantComponent> {
        let comps = self.components();
        let best = comps
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
            .map(|(_, c)| c)
            .ok_or(Error::EmptyNetwork)?;
        Ok(GiantComponent {
            network: self.induced(best),
            relative_size: best.len() as f64 / self.nodes.len() as f64,
            members: best.clone(),
        })
    }

    /// Replaces paper counts, years and record lists with those implied by
    /// `corpus`. Used for networks read back from files.
    pub fn attach_provenance(&mut self, corpus: &Corpus) {
        for node in &mut self.nodes {
            node.paper_count = 0;
            node.years.clear();
            node.records.clear();
        }
        for record in &corpus.records {
            for author in &record.authors {
                if let Some(i) = self.index_of(author) {
                    let node = &mut self.nodes[i];
                    node.paper_count += 1;
                    node.years.push(record.year);
                    node.records.push(record.record_id.clone());
                }
            }
        }
        for node in &mut self.nodes {
            node.years.sort_unstable();
            node.years.dedup();
            node.records.sort();
            node.records.dedup();
        }
    }
}

#[derive(Debug, Clone)]
pub struct GiantComponent {
    pub network: CoauthorNetwork,
    /// Fraction of the parent's vertices inside the component.
    pub relative_size: f64,
    /// Vertex indices in the parent network.
    pub members: Vec<usize>,
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Splits a span into `count` consecutive slices of near-equal length; the
/// earlier slices absorb the remainder.
pub fn time_slices(span: YearSpan, count: usize) -> Result<Vec<YearSpan>> {
    let years = span.years();
    if count == 0 || (years as usize) < count {
        return Err(Error::TooFewYears { years, slices: count });
    }
    let base = years as usize / count;
    let extra = years as usize % count;
    let mut first = span.first;
    Ok((0..count)
        .map(|i| {
            let len = (base + usize::from(i < extra)) as i32;
            let s = YearSpan::new(first, first + len - 1);
            first += len;
            s
        })
        .collect())
}

/// One cumulative point of network growth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthPoint {
    pub slice: YearSpan,
    /// Distinct authors on records up to the end of the slice.
    pub authors: usize,
    /// Authors left after dropping single-paper authors.
    pub reduced_authors: usize,
    /// Giant component share of the reduced network (0 when empty).
    pub giant_fraction: f64,
    /// Giant component share of the unreduced network, for diagnostics.
    pub unreduced_giant_fraction: f64,
}

/// Cumulative author count and giant-component share at the end of each slice.
pub fn growth_curve(corpus: &Corpus, slice_count: usize) -> Result<Vec<GrowthPoint>> {
    let span = corpus.time_span.ok_or(Error::TooFewYears { years: 0, slices: slice_count })?;
    let slices = time_slices(span, slice_count)?;
    Ok(slices
        .iter()
        .map(|slice| {
            let upto = Corpus::with_span(corpus.records.clone(), YearSpan::new(span.first, slice.last));
            let full = CoauthorNetwork::build(&upto);
            let reduced = full.reduce_single_paper_authors();
            let fraction = |net: &CoauthorNetwork| net.giant_component().map_or(0.0, |g| g.relative_size);
            GrowthPoint {
                slice: *slice,
                authors: full.node_count(),
                reduced_authors: reduced.node_count(),
                giant_fraction: fraction(&reduced),
                unreduced_giant_fraction: fraction(&full),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{key, PublicationRecord};

    fn corpus(papers: &[&[&str]]) -> Corpus {
        Corpus::new(
            papers
                .iter()
                .enumerate()
                .map(|(i, authors)| {
                    PublicationRecord::new(
                        alloc::format!("P{}", i + 1),
                        2000 + i as i32,
                        authors.iter().map(|a| key(a)),
                        Vec::new(),
                        5,
                    )
                })
                .collect(),
        )
    }

    fn w(net: &CoauthorNetwork, a: &str, b: &str) -> Option<u32> {
        net.weight(net.index_of(&key(a))?, net.index_of(&key(b))?)
    }

    #[test]
    fn build_and_reduce() {
        let net = CoauthorNetwork::build(&corpus(&[&["A", "B", "C"], &["A", "B"]]));
        assert_eq!(net.node_count(), 3);
        assert_eq!(w(&net, "A", "B"), Some(2));
        assert_eq!(w(&net, "A", "C"), Some(1));
        assert_eq!(w(&net, "B", "C"), Some(1));
        let counts: Vec<u32> = net.nodes().iter().map(|n| n.paper_count).collect();
        assert_eq!(counts, [2, 2, 1]);
        assert_eq!(net.total_weight(), 4);

        let reduced = net.reduce_single_paper_authors();
        assert_eq!(reduced.node_count(), 2);
        assert_eq!(reduced.edge_count(), 1);
        assert_eq!(w(&reduced, "A", "B"), Some(2));

        let single = CoauthorNetwork::build(&corpus(&[&["A", "B"]]));
        assert_eq!(single.edges().collect::<Vec<_>>(), [(0, 1, 1)]);
        assert!(single.reduce_single_paper_authors().is_empty());
    }

    #[test]
    fn reduction_is_single_pass() {
        // D has two papers, both with single-paper authors: D stays, isolated.
        let net = CoauthorNetwork::build(&corpus(&[&["D", "X"], &["D", "Y"], &["A", "B"], &["A", "B"]]));
        let reduced = net.reduce_single_paper_authors();
        let d = reduced.index_of(&key("D")).unwrap();
        assert_eq!(reduced.degree(d), 0);
        assert_eq!(reduced.components().len(), 2);
    }

    #[test]
    fn components_and_giant() {
        let net = CoauthorNetwork::build(&corpus(&[&["A", "B"], &["C", "D"]]));
        assert_eq!(net.components().len(), 2);
        // Tie: component with smallest key wins.
        let g = net.giant_component().unwrap();
        assert_eq!(g.network.nodes()[0].key, key("A"));
        assert_eq!(g.relative_size, 0.5);

        let net = CoauthorNetwork::build(&corpus(&[
            &["A", "B", "C"],
            &["C", "D", "E"],
            &["X", "Y", "Z"],
        ]));
        let g = net.giant_component().unwrap();
        assert_eq!(g.network.node_count(), 5);
        assert_eq!(g.relative_size, 0.625);
        let again = g.network.giant_component().unwrap();
        assert_eq!(again.network, g.network);
        assert_eq!(again.relative_size, 1.0);

        assert_eq!(CoauthorNetwork::default().giant_component().unwrap_err(), Error::EmptyNetwork);
    }

    #[test]
    fn from_parts_validates() {
        let nodes = || alloc::vec![AuthorNode::bare(key("B")), AuthorNode::bare(key("A"))];
        let net = CoauthorNetwork::from_parts(nodes(), [(0, 1, 3)]).unwrap();
        assert_eq!(net.nodes()[0].key, key("A"));
        assert_eq!(net.weight(0, 1), Some(3));
        assert!(CoauthorNetwork::from_parts(nodes(), [(0, 0, 1)]).is_err());
        assert!(CoauthorNetwork::from_parts(nodes(), [(0, 2, 1)]).is_err());
        assert!(CoauthorNetwork::from_parts(nodes(), [(0, 1, 1), (1, 0, 1)]).is_err());
    }

    #[test]
    fn slices() {
        let s = time_slices(YearSpan::new(1991, 2008), 3).unwrap();
        assert_eq!(s, [YearSpan::new(1991, 1996), YearSpan::new(1997, 2002), YearSpan::new(2003, 2008)]);
        let s = time_slices(YearSpan::new(1987, 2008), 3).unwrap();
        assert_eq!(s, [YearSpan::new(1987, 1994), YearSpan::new(1995, 2001), YearSpan::new(2002, 2008)]);
        let lens: Vec<u32> = s.iter().map(YearSpan::years).collect();
        assert_eq!(lens, [8, 7, 7]);
        assert!(time_slices(YearSpan::new(2000, 2001), 3).is_err());
    }

    #[test]
    fn growth() {
        let c = corpus(&[&["A", "B"], &["A", "B"], &["C", "D"], &["C", "E"], &["C", "D"], &["A", "C"]]);
        let points = growth_curve(&c, 3).unwrap();
        assert_eq!(points.len(), 3);
        assert!(points.windows(2).all(|w| w[0].authors <= w[1].authors));
        assert_eq!(points[2].authors, 5);
        let whole = growth_curve(&c, 1).unwrap();
        let net = CoauthorNetwork::build(&c).reduce_single_paper_authors();
        assert_eq!(whole[0].reduced_authors, net.node_count());
        assert_eq!(whole[0].giant_fraction, net.giant_component().unwrap().relative_size);
    }
}

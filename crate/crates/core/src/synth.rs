//! Synthetic corpora and networks with planted ground truth.
//!
//! [`generate`] writes papers for a set of research groups and then replays
//! planted inter-group events: a *migration* sends one group member to
//! publish with another group (a single-author bridge), a *collaboration*
//! has three authors from each side co-write papers together (a bridge no
//! two authors can cut), optionally including both group leaders.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{AuthorNode, CoauthorNetwork};
use crate::ingest::{AuthorKey, Corpus, PublicationRecord, YearSpan};
use crate::meso::LinkType;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupStructure {
    /// The leader is on every paper.
    Star,
    /// Three sub-leaders with their own teams; the first one co-signs most of
    /// the other teams' papers.
    MultiHub,
    /// Papers are random pairs and triples.
    Hubless,
}

impl GroupStructure {
    pub fn label(self) -> &'static str {
        match self {
            GroupStructure::Star => "star",
            GroupStructure::MultiHub => "multi_hub",
            GroupStructure::Hubless => "hubless",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [GroupStructure::Star, GroupStructure::MultiHub, GroupStructure::Hubless]
            .into_iter()
            .find(|g| g.label() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub size: usize,
    pub structure: GroupStructure,
    /// Minimum number of internal papers; coverage and cohesion papers may
    /// add a few more.
    pub papers: usize,
    pub country: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantedEvent {
    Migration { from: usize, to: usize },
    Collaboration { a: usize, b: usize, pi_edge: bool },
}

impl PlantedEvent {
    pub fn groups(&self) -> (usize, usize) {
        match *self {
            PlantedEvent::Migration { from, to } => (from, to),
            PlantedEvent::Collaboration { a, b, .. } => (a, b),
        }
    }

    pub fn expected_link_type(&self) -> LinkType {
        match self {
            PlantedEvent::Migration { .. } => LinkType::Transfer,
            PlantedEvent::Collaboration { .. } => LinkType::Collaboration,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedSpec {
    pub groups: Vec<GroupSpec>,
    pub events: Vec<PlantedEvent>,
    pub years: YearSpan,
    pub seed: u64,
}

const COUNTRIES: [&str; 8] = ["GERMANY", "USA", "JAPAN", "FRANCE", "CHINA", "UNITED KINGDOM", "CANADA", "SOUTH KOREA"];

impl PlantedSpec {
    /// Groups with sizes drawn uniformly from `sizes`, structures cycling
    /// through `structures`, and countries cycling through a fixed list.
    pub fn new(
        group_count: usize,
        sizes: core::ops::RangeInclusive<usize>,
        structures: &[GroupStructure],
        papers_per_member: usize,
        years: YearSpan,
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let groups = (0..group_count)
            .map(|g| {
                let size = rng.random_range(sizes.clone());
                GroupSpec {
                    size,
                    structure: structures[g % structures.len().max(1)],
                    papers: size * papers_per_member,
                    country: String::from(COUNTRIES[g % COUNTRIES.len()]),
                }
            })
            .collect();
        Self { groups, events: Vec::new(), years, seed }
    }

    /// Adds `migrations` and `collaborations` events on distinct, randomly
    /// chosen group pairs. Collaborations only join groups with a leader
    /// (star or multi-hub); a `pi_fraction` share of them includes both leaders.
    /// Event pairs run along a random spanning tree of the groups first, then
    /// over arbitrary pairs.
    pub fn with_random_events(mut self, migrations: usize, collaborations: usize, pi_fraction: f64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed_e7e7);
        let g = self.groups.len();
        let led = |i: usize| self.groups[i].structure != GroupStructure::Hubless;
        let mut used: BTreeSet<(usize, usize)> = self.events.iter().map(|e| ordered(e.groups())).collect();
        // Pairs along a random spanning tree come first, so that enough
        // events join every group into one component.
        let mut order: Vec<usize> = (0..g).collect();
        order.shuffle(&mut rng);
        let mut tree: Vec<(usize, usize)> =
            (1..g).map(|i| ordered((order[i], order[rng.random_range(0..i)]))).collect();
        tree.shuffle(&mut rng);
        let mut rest: Vec<(usize, usize)> = (0..g)
            .flat_map(|a| (a + 1..g).map(move |b| (a, b)))
            .filter(|p| !tree.contains(p))
            .collect();
        rest.shuffle(&mut rng);
        let all_pairs: Vec<(usize, usize)> = tree.into_iter().chain(rest).filter(|p| !used.contains(p)).collect();
        let with_pi = libm::round(collaborations as f64 * pi_fraction) as usize;
        let (mut collab_left, mut migration_left) = (collaborations, migrations);
        for (a, b) in all_pairs {
            if collab_left > 0 && led(a) && led(b) {
                let pi_edge = collaborations - collab_left < with_pi;
                self.events.push(PlantedEvent::Collaboration { a, b, pi_edge });
                collab_left -= 1;
            } else if migration_left > 0 {
                let (from, to) = if rng.random_bool(0.7) { (a, b) } else { (b, a) };
                self.events.push(PlantedEvent::Migration { from, to });
                migration_left -= 1;
            } else {
                continue;
            }
            used.insert((a, b));
        }
        if collab_left + migration_left > 0 {
            return Err(Error::InconsistentSpec(format!(
                "no room for {collab_left} collaborations and {migration_left} migrations"
            )));
        }
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.groups.is_empty() {
            return Err(Error::InconsistentSpec("no groups".into()));
        }
        for (i, g) in self.groups.iter().enumerate() {
            let min = match g.structure {
                GroupStructure::MultiHub => 9,
                _ => 4,
            };
            if g.size < min {
                return Err(Error::InconsistentSpec(format!("group {i} needs at least {min} members")));
            }
        }
        let mut pairs = BTreeSet::new();
        for e in &self.events {
            let (a, b) = e.groups();
            if a >= self.groups.len() || b >= self.groups.len() {
                return Err(Error::InconsistentSpec(format!("event references missing group {}", a.max(b))));
            }
            if a == b {
                return Err(Error::InconsistentSpec(format!("event joins group {a} to itself")));
            }
            if !pairs.insert(ordered((a, b))) {
                return Err(Error::InconsistentSpec(format!("two events on groups {a} and {b}")));
            }
        }
        Ok(())
    }
}

fn ordered((a, b): (usize, usize)) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// An event as replayed, with the authors it involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthEvent {
    pub event: PlantedEvent,
    pub authors: Vec<AuthorKey>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    /// Every generated author with its group index, sorted by key.
    pub members: Vec<(AuthorKey, usize)>,
    /// Designated leader of each group.
    pub leaders: Vec<AuthorKey>,
    pub events: Vec<TruthEvent>,
}

impl GroundTruth {
    pub fn group_of(&self, key: &AuthorKey) -> Option<usize> {
        self.members.binary_search_by(|(k, _)| k.cmp(key)).ok().map(|i| self.members[i].1)
    }
}

pub fn author_key(group: usize, member: usize) -> AuthorKey {
    AuthorKey::new(&format!("G{group:04}M{member:03}"), "X").expect("non-empty surname")
}

struct Writer {
    rng: ChaCha8Rng,
    records: Vec<PublicationRecord>,
}

impl Writer {
    fn paper(&mut self, id: String, year: i32, authors: Vec<AuthorKey>, countries: Vec<String>) {
        let refs = self.rng.random_range(5..=40);
        self.records.push(PublicationRecord::new(id, year, authors, countries, refs));
    }
}

/// Team papers around `lead`: each member is covered twice, then random
/// teams fill up to `papers`.
fn team_papers(rng: &mut ChaCha8Rng, lead: usize, team: &[usize], papers: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for _ in 0..2 {
        let mut order = team.to_vec();
        order.shuffle(rng);
        for chunk in order.chunks(3) {
            let mut p = vec![lead];
            p.extend_from_slice(chunk);
            out.push(p);
        }
    }
    while out.len() < papers {
        let k = rng.random_range(2..=4).min(team.len());
        let mut p = vec![lead];
        p.extend(team.choose_multiple(rng, k).copied());
        out.push(p);
    }
    out
}

fn group_papers(rng: &mut ChaCha8Rng, spec: &GroupSpec) -> Vec<Vec<usize>> {
    let n = spec.size;
    match spec.structure {
        GroupStructure::Star => {
            let team: Vec<usize> = (1..n).collect();
            team_papers(rng, 0, &team, spec.papers)
        }
        GroupStructure::MultiHub => {
            let hubs = [0, 1, 2];
            let teams: Vec<Vec<usize>> = (0..3).map(|h| (3..n).filter(|m| m % 3 == h).collect()).collect();
            let per_team = spec.papers / 3;
            let mut out = Vec::new();
            for (h, team) in teams.iter().enumerate() {
                for mut p in team_papers(rng, hubs[h], team, per_team) {
                    if h != 0 && rng.random_bool(0.75) {
                        p.push(0);
                    }
                    // Guests from the other teams keep the group
                    // one cohesive unit.
                    if rng.random_bool(0.7) {
                        let other = &teams[(h + rng.random_range(1..3)) % 3];
                        p.extend(other.choose(rng));
                    }
                    out.push(p);
                }
            }
            // Sub-leaders meet the leader regularly.
            for _ in 0..6 {
                out.push(vec![0, 1, 2]);
            }
            out
        }
        GroupStructure::Hubless => {
            // One ring of triples covers everyone; random teams then mix the
            // ring so it does not read as a chain of subgroups.
            let mut out: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n, (i + 2) % n]).collect();
            while out.len() < spec.papers.max(3 * n) {
                let k = rng.random_range(2..=3);
                out.push((0..n).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect());
            }
            // The designated leader stays the most productive member.
            for _ in 0..4 {
                let other = rng.random_range(1..n);
                out.push(vec![0, other]);
            }
            out
        }
    }
}

/// Writes the corpus described by `spec` and the ground truth it plants.
pub fn generate(spec: &PlantedSpec) -> Result<(Corpus, GroundTruth)> {
    spec.validate()?;
    let mut w = Writer { rng: ChaCha8Rng::seed_from_u64(spec.seed), records: Vec::new() };
    let span = spec.years;
    let windows: Vec<YearSpan> = spec
        .groups
        .iter()
        .map(|_| {
            let len = span.years() as i32;
            let start = span.first + w.rng.random_range(0..(len * 2 / 3).max(1));
            let end = w.rng.random_range(start..=span.last);
            if w.rng.random_bool(0.7) {
                YearSpan::new(start, span.last)
            } else {
                YearSpan::new(start, end)
            }
        })
        .collect();

    let mut truth = GroundTruth::default();
    for (g, group) in spec.groups.iter().enumerate() {
        truth.leaders.push(author_key(g, 0));
        truth.members.extend((0..group.size).map(|m| (author_key(g, m), g)));
        let papers = group_papers(&mut w.rng, group);
        for (k, members) in papers.into_iter().enumerate() {
            let year = w.rng.random_range(windows[g].first..=windows[g].last);
            let authors: Vec<AuthorKey> = members.iter().map(|&m| author_key(g, m)).collect();
            let countries = vec![group.country.clone(); authors.len()];
            w.paper(format!("S{g:04}-{k:04}"), year, authors, countries);
        }
    }

    let mut busy: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (e, event) in spec.events.iter().enumerate() {
        let (ga, gb) = event.groups();
        let year_span = YearSpan::new(windows[ga].first.max(windows[gb].first), windows[ga].last.min(windows[gb].last));
        let year_span = if year_span.first <= year_span.last && windows[ga].first <= windows[gb].last && windows[gb].first <= windows[ga].last {
            year_span
        } else {
            windows[gb]
        };
        let free = |g: usize, busy: &BTreeSet<(usize, usize)>| -> Vec<usize> {
            (1..spec.groups[g].size).filter(|&m| !busy.contains(&(g, m))).collect()
        };
        match *event {
            PlantedEvent::Migration { from, to } => {
                let migrant = *free(from, &busy)
                    .choose(&mut w.rng)
                    .ok_or_else(|| Error::InconsistentSpec(format!("group {from} has no free member")))?;
                busy.insert((from, migrant));
                let hosts = free(to, &busy);
                for k in 0..2 {
                    let mut authors = vec![author_key(from, migrant), author_key(to, 0)];
                    let extra = w.rng.random_range(1..=2);
                    authors.extend(hosts.choose_multiple(&mut w.rng, extra).map(|&m| author_key(to, m)));
                    let countries = vec![spec.groups[to].country.clone(); authors.len()];
                    let year = w.rng.random_range(year_span.first..=year_span.last);
                    w.paper(format!("E{e:03}-{k}"), year, authors, countries);
                }
                truth.events.push(TruthEvent { event: *event, authors: vec![author_key(from, migrant)] });
            }
            PlantedEvent::Collaboration { a, b, pi_edge } => {
                let side = |g: usize, busy: &mut BTreeSet<(usize, usize)>, rng: &mut ChaCha8Rng| -> Result<Vec<usize>> {
                    let pool = free(g, busy);
                    let take = if pi_edge { 2 } else { 3 };
                    if pool.len() < take {
                        return Err(Error::InconsistentSpec(format!("group {g} too small for a collaboration")));
                    }
                    let mut chosen: Vec<usize> = pool.choose_multiple(rng, take).copied().collect();
                    if pi_edge {
                        chosen.insert(0, 0);
                    }
                    for &m in &chosen {
                        if m != 0 {
                            busy.insert((g, m));
                        }
                    }
                    Ok(chosen)
                };
                let side_a = side(a, &mut busy, &mut w.rng)?;
                let side_b = side(b, &mut busy, &mut w.rng)?;
                let authors: Vec<AuthorKey> = side_a
                    .iter()
                    .map(|&m| author_key(a, m))
                    .chain(side_b.iter().map(|&m| author_key(b, m)))
                    .collect();
                for k in 0..2 {
                    let countries = side_a
                        .iter()
                        .map(|_| spec.groups[a].country.clone())
                        .chain(side_b.iter().map(|_| spec.groups[b].country.clone()))
                        .collect();
                    let year = w.rng.random_range(year_span.first..=year_span.last);
                    w.paper(format!("E{e:03}-{k}"), year, authors.clone(), countries);
                }
                truth.events.push(TruthEvent { event: *event, authors });
            }
        }
    }
    truth.members.sort();
    Ok((Corpus::with_span(w.records, span), truth))
}

/// Planted-partition graph: `groups` blocks of `size` vertices, each internal
/// pair linked with probability `p_in` on top of a spanning ring, plus
/// single-edge bridges between consecutive blocks and `extra_bridges` more
/// between random blocks. Returns the network and the block of each vertex.
pub fn planted_partition(
    groups: usize,
    size: usize,
    p_in: f64,
    extra_bridges: usize,
    seed: u64,
) -> (CoauthorNetwork, Vec<u32>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = groups * size;
    let nodes = (0..n).map(|i| AuthorNode::bare(author_key(i / size, i % size))).collect();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for g in 0..groups {
        let base = g * size;
        for i in 0..size {
            if size > 1 {
                let j = (i + 1) % size;
                if i != j {
                    edges.insert(ordered((base + i, base + j)));
                }
            }
            for j in i + 1..size {
                if rng.random_bool(p_in) {
                    edges.insert((base + i, base + j));
                }
            }
        }
    }
    let bridge = |a: usize, b: usize, rng: &mut ChaCha8Rng, edges: &mut BTreeSet<(usize, usize)>| {
        let x = a * size + rng.random_range(0..size);
        let y = b * size + rng.random_range(0..size);
        edges.insert(ordered((x, y)));
    };
    if groups > 1 {
        for g in 0..groups {
            bridge(g, (g + 1) % groups, &mut rng, &mut edges);
        }
        for _ in 0..extra_bridges {
            let a = rng.random_range(0..groups);
            let b = rng.random_range(0..groups);
            if a != b {
                bridge(a, b, &mut rng, &mut edges);
            }
        }
    }
    let net = CoauthorNetwork::from_parts(nodes, edges.into_iter().map(|(a, b)| (a, b, 1)))
        .expect("generated edges are valid");
    let truth = (0..n).map(|i| (i / size) as u32).collect();
    (net, truth)
}

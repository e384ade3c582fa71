//! Continent-level geographic labels for clusters.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::CoauthorNetwork;
use crate::ingest::Corpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Continent {
    Africa,
    Asia,
    Europe,
    NorthAmerica,
    Oceania,
    SouthAmerica,
}

impl Continent {
    pub const ALL: [Continent; 6] = [
        Continent::Africa,
        Continent::Asia,
        Continent::Europe,
        Continent::NorthAmerica,
        Continent::Oceania,
        Continent::SouthAmerica,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Continent::Africa => "Africa",
            Continent::Asia => "Asia",
            Continent::Europe => "Europe",
            Continent::NorthAmerica => "NorthAmerica",
            Continent::Oceania => "Oceania",
            Continent::SouthAmerica => "SouthAmerica",
        }
    }

    /// Case-insensitive; spaces and underscores ignored.
    pub fn parse(s: &str) -> Option<Self> {
        let norm: String = s.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_lowercase).collect();
        Self::ALL.into_iter().find(|c| c.name().to_lowercase() == norm)
    }
}

impl fmt::Display for Continent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Country name to continent. Lookups are case-insensitive.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountryTable {
    map: BTreeMap<String, Continent>,
}

fn country_key(name: &str) -> String {
    let mut out = String::new();
    for word in name.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_uppercase));
    }
    out
}

impl CountryTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, country: &str, continent: Continent) {
        self.map.insert(country_key(country), continent);
    }

    /// `None` routes the country to the unknown bucket.
    pub fn continent(&self, country: &str) -> Option<Continent> {
        self.map.get(&country_key(country)).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl FromIterator<(String, Continent)> for CountryTable {
    fn from_iter<I: IntoIterator<Item = (String, Continent)>>(iter: I) -> Self {
        let mut t = Self::new();
        for (c, k) in iter {
            t.insert(&c, k);
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeoLabel {
    Single(Continent),
    /// Two distinct continents in alphabetical order.
    Mixed(Continent, Continent),
    Unknown,
}

impl GeoLabel {
    pub fn mixed(a: Continent, b: Continent) -> Self {
        if a == b {
            GeoLabel::Single(a)
        } else {
            GeoLabel::Mixed(a.min(b), a.max(b))
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s.eq_ignore_ascii_case("unknown") {
            return Some(GeoLabel::Unknown);
        }
        match s.split_once('-') {
            Some((a, b)) => Some(GeoLabel::mixed(Continent::parse(a)?, Continent::parse(b)?)),
            None => Continent::parse(s).map(GeoLabel::Single),
        }
    }
}

impl fmt::Display for GeoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeoLabel::Single(c) => write!(f, "{c}"),
            GeoLabel::Mixed(a, b) => write!(f, "{a}-{b}"),
            GeoLabel::Unknown => f.write_str("unknown"),
        }
    }
}

/// Country counts over every record with at least one member author. Each
/// record contributes its full country multiset once, however many members
/// it lists.
pub fn cluster_country_counts(net: &CoauthorNetwork, members: &[usize], corpus: &Corpus) -> BTreeMap<String, u64> {
    let keys: Vec<&crate::ingest::AuthorKey> = members.iter().map(|&i| &net.node(i).key).collect();
    let mut sorted = keys;
    sorted.sort();
    let mut counts = BTreeMap::new();
    for record in &corpus.records {
        if record.authors.iter().any(|a| sorted.binary_search(&a).is_ok()) {
            for country in &record.countries {
                *counts.entry(country_key(country)).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Continent label from country counts.
///
/// Countries without a continent are ignored. The most listed country gives
/// the continent; if the runner-up is listed at least half as often and sits
/// on another continent, the label is the mixed pair. Equal counts are
/// ordered by country name.
pub fn continent_affiliation(counts: &BTreeMap<String, u64>, table: &CountryTable) -> GeoLabel {
    let mut ranked: Vec<(u64, &str, Continent)> = counts
        .iter()
        .filter(|(_, &n)| n > 0)
        .filter_map(|(c, &n)| table.continent(c).map(|k| (n, c.as_str(), k)))
        .collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)));
    match ranked.as_slice() {
        [] => GeoLabel::Unknown,
        [(_, _, k)] => GeoLabel::Single(*k),
        [(top, _, k1), (second, _, k2), ..] => {
            if 2 * second >= *top && k1 != k2 {
                GeoLabel::mixed(*k1, *k2)
            } else {
                GeoLabel::Single(*k1)
            }
        }
    }
}

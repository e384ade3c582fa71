//! Publication records, author keys and the corpus-level filters.
//!
//! Author identity is a normalized `Surname_INITIALS` string. No attempt is
//! made to split homonyms or to merge spelling variants beyond whitespace and
//! initials normalization.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Normalized author identity, stored in its canonical `Surname_INITIALS` form.
///
/// Ordering is the byte order of the canonical string, which is also the
/// vertex order used by the Pajek writer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuthorKey(String);

const ANON: &str = "ANON";

fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

fn normalize_initials(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric() || *c == '-')
        .flat_map(char::to_uppercase)
        .collect()
}

impl AuthorKey {
    /// Builds a key from its two parts. Returns `None` when the surname is
    /// empty after normalization.
    pub fn new(surname: &str, initials: &str) -> Option<Self> {
        let surname = collapse_whitespace(surname).replace('_', " ");
        if surname.is_empty() {
            return None;
        }
        let initials = normalize_initials(initials);
        let mut key = surname;
        if !initials.is_empty() {
            key.push('_');
            key.push_str(&initials);
        }
        Some(Self(key))
    }

    /// Parses a field-tagged author entry such as `Smith, J` or `Smith, J. K.`.
    pub fn from_listing(raw: &str) -> Option<Self> {
        match raw.split_once(',') {
            Some((surname, initials)) => Self::new(surname, initials),
            None => Self::new(raw, ""),
        }
    }

    /// Parses the canonical `Surname_INITIALS` form (as written by the
    /// tabular corpus format and the Pajek writer).
    pub fn from_canonical(raw: &str) -> Option<Self> {
        let raw = raw.trim();
        match raw.rsplit_once('_') {
            Some((surname, initials)) => Self::new(surname, initials),
            None => Self::new(raw, ""),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn surname(&self) -> &str {
        self.0.rsplit_once('_').map_or(&self.0, |(s, _)| s)
    }

    pub fn initials(&self) -> &str {
        self.0.rsplit_once('_').map_or("", |(_, i)| i)
    }

    /// `Anon` placeholder used by the bibliographic database for unknown authors.
    pub fn is_anonymous(&self) -> bool {
        self.initials().is_empty() && self.surname().eq_ignore_ascii_case(ANON)
    }
}

impl fmt::Display for AuthorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicationRecord {
    pub record_id: String,
    pub year: i32,
    /// Distinct authors in listing order.
    pub authors: Vec<AuthorKey>,
    /// Country of every address line, duplicates kept.
    pub countries: Vec<String>,
    pub n_references: u32,
}

impl PublicationRecord {
    /// Creates a record, collapsing repeated authors to their first occurrence.
    pub fn new(
        record_id: impl Into<String>,
        year: i32,
        authors: impl IntoIterator<Item = AuthorKey>,
        countries: impl IntoIterator<Item = String>,
        n_references: u32,
    ) -> Self {
        let mut seen = BTreeSet::new();
        let authors = authors
            .into_iter()
            .filter(|a| seen.insert(a.clone()))
            .collect();
        Self {
            record_id: record_id.into(),
            year,
            authors,
            countries: countries.into_iter().collect(),
            n_references,
        }
    }
}

/// Inclusive range of calendar years.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearSpan {
    pub first: i32,
    pub last: i32,
}

impl YearSpan {
    pub fn new(first: i32, last: i32) -> Self {
        Self { first: first.min(last), last: first.max(last) }
    }

    pub fn years(&self) -> u32 {
        (self.last - self.first + 1) as u32
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.first..=self.last).contains(&year)
    }
}

impl fmt::Display for YearSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.first, self.last)
    }
}

/// A filtered set of records together with the span of years it covers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    pub records: Vec<PublicationRecord>,
    /// `None` only for an empty corpus.
    pub time_span: Option<YearSpan>,
}

impl Corpus {
    /// Wraps records, deriving the span from the smallest and largest year.
    pub fn new(records: Vec<PublicationRecord>) -> Self {
        let time_span = records
            .iter()
            .map(|r| r.year)
            .fold(None, |acc: Option<YearSpan>, y| match acc {
                None => Some(YearSpan::new(y, y)),
                Some(s) => Some(YearSpan::new(s.first.min(y), s.last.max(y))),
            });
        Self { records, time_span }
    }

    /// Wraps records under a declared span. Records outside the span are dropped.
    pub fn with_span(records: Vec<PublicationRecord>, span: YearSpan) -> Self {
        let records = records.into_iter().filter(|r| span.contains(r.year)).collect();
        Self { records, time_span: Some(span) }
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Every distinct author key in the corpus, sorted.
    pub fn authors(&self) -> BTreeSet<AuthorKey> {
        self.records.iter().flat_map(|r| r.authors.iter().cloned()).collect()
    }
}

/// Number of records removed by each filter rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FilterReport {
    pub kept: usize,
    /// Fewer than two named authors left once `Anon` placeholders are dropped.
    pub too_few_authors: usize,
    /// At most one cited reference.
    pub single_reference: usize,
}

/// Drops records that are not collaborative original research: fewer than two
/// named (non-`Anon`) authors, or at most one reference. Surviving records
/// lose their `Anon` entries. A record failing both rules is counted under
/// the author rule.
pub fn filter_corpus(records: Vec<PublicationRecord>) -> (Corpus, FilterReport) {
    let mut report = FilterReport::default();
    let mut kept = Vec::with_capacity(records.len());
    for mut record in records {
        record.authors.retain(|a| !a.is_anonymous());
        if record.authors.len() < 2 {
            report.too_few_authors += 1;
        } else if record.n_references <= 1 {
            report.single_reference += 1;
        } else {
            kept.push(record);
        }
    }
    report.kept = kept.len();
    (Corpus::new(kept), report)
}

/// Headline numbers of a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CorpusStats {
    pub records: usize,
    pub authors: usize,
    pub mean_authors_per_paper: f64,
    pub median_authors_per_paper: f64,
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    if corpus.is_empty() {
        return CorpusStats::default();
    }
    let counts: Vec<f64> = corpus.records.iter().map(|r| r.authors.len() as f64).collect();
    CorpusStats {
        records: corpus.len(),
        authors: corpus.authors().len(),
        mean_authors_per_paper: crate::stats::mean(&counts),
        median_authors_per_paper: crate::stats::median(&counts),
    }
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} records, {} authors, {:.1} authors per paper (median {:.1})",
            self.records, self.authors, self.mean_authors_per_paper, self.median_authors_per_paper
        )
    }
}

/// Convenience for tests and generators: `key("Smith_J")`.
pub fn key(canonical: &str) -> AuthorKey {
    AuthorKey::from_canonical(canonical).unwrap_or_else(|| AuthorKey(canonical.to_string()))
}

//! Reader for field-tagged bibliographic exports.
//!
//! Records are blocks of lines starting with a two-letter tag; a line that
//! starts with whitespace continues the previous tag. The reader uses `AU`
//! (one author per line), `PY`, `C1` (address lines), `NR`, `UT` (record id)
//! and `ER` (end of record) and ignores every other tag.

use std::collections::{BTreeMap, BTreeSet};

use log::warn;
use mesonet_core::ingest::{AuthorKey, PublicationRecord};

use crate::error::Result;
use crate::table::parse_pairs;

const BUILTIN_ALIASES: &str = include_str!("../data/country_aliases.txt");

/// Maps address-line country variants to the name they are counted under.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountryAliases {
    map: BTreeMap<String, String>,
}

impl CountryAliases {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self {
            map: parse_pairs(text)?.into_iter().map(|(k, v)| (normalize(&k), normalize(&v))).collect(),
        })
    }

    /// The table shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_ALIASES).expect("bundled alias table is well-formed")
    }

    pub fn resolve(&self, country: &str) -> String {
        let c = normalize(country);
        self.map.get(&c).cloned().unwrap_or(c)
    }
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_uppercase()
}

/// Country of one address line: its last comma-separated token. US
/// addresses end in `STATE ZIP USA`, which reduces to `USA`.
pub fn address_country(line: &str, aliases: &CountryAliases) -> Option<String> {
    let line = match line.trim_start().strip_prefix('[') {
        Some(rest) => rest.split_once(']').map_or(rest, |(_, tail)| tail),
        None => line,
    };
    let token = normalize(line.rsplit(',').next()?.trim().trim_end_matches('.'));
    if token.is_empty() {
        return None;
    }
    let token = match token.rsplit_once(' ') {
        Some((_, "USA")) => "USA".to_string(),
        _ => token,
    };
    Some(aliases.resolve(&token))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WosParse {
    pub records: Vec<PublicationRecord>,
    pub warnings: Vec<ParseWarning>,
}

#[derive(Default)]
struct Block {
    start: usize,
    id: Option<String>,
    authors: Vec<AuthorKey>,
    year: Option<String>,
    addresses: Vec<String>,
    refs: Option<String>,
}

impl Block {
    fn is_empty(&self) -> bool {
        self.start == 0
    }
}

struct Parser<'a> {
    aliases: &'a CountryAliases,
    out: WosParse,
    ids: BTreeSet<String>,
    blocks: usize,
}

impl Parser<'_> {
    fn warn(&mut self, line: usize, message: String) {
        warn!("line {line}: {message}");
        self.out.warnings.push(ParseWarning { line, message });
    }

    fn finish(&mut self, block: Block) {
        if block.is_empty() {
            return;
        }
        self.blocks += 1;
        let line = block.start;
        let Some(year) = block.year else {
            return self.warn(line, "record without PY skipped".into());
        };
        if block.authors.is_empty() {
            return self.warn(line, "record without AU skipped".into());
        }
        let Ok(year) = year.parse::<i32>() else {
            return self.warn(line, format!("unparseable year `{year}`; record skipped"));
        };
        let n_references = match block.refs.as_deref().map(str::parse::<u32>) {
            None => 0,
            Some(Ok(n)) => n,
            Some(Err(_)) => {
                self.warn(line, "unparseable NR read as 0".into());
                0
            }
        };
        let id = block.id.unwrap_or_else(|| format!("record-{:06}", self.blocks));
        if !self.ids.insert(id.clone()) {
            return self.warn(line, format!("duplicate record id `{id}`; record skipped"));
        }
        let countries: Vec<String> =
            block.addresses.iter().filter_map(|a| address_country(a, self.aliases)).collect();
        self.out.records.push(PublicationRecord::new(id, year, block.authors, countries, n_references));
    }
}

/// Parses every record of `text`. Malformed records are skipped and listed
/// in the returned warnings; a final record without `ER` is still emitted.
pub fn parse_field_tagged(text: &str, aliases: &CountryAliases) -> WosParse {
    let mut p = Parser { aliases, out: WosParse::default(), ids: BTreeSet::new(), blocks: 0 };
    let mut block = Block::default();
    let mut tag = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches(['\r', '\u{feff}']);
        let line = line.strip_prefix('\u{feff}').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let value = if line.starts_with(char::is_whitespace) {
            line.trim()
        } else {
            let (t, rest) = line.split_at(line.char_indices().nth(2).map_or(line.len(), |(k, _)| k));
            if !rest.is_empty() && !rest.starts_with(' ') {
                p.warn(line_no, format!("unrecognized line `{line}`"));
                continue;
            }
            tag = t.to_string();
            rest.trim()
        };
        match tag.as_str() {
            "FN" | "VR" | "EF" => continue,
            "ER" => {
                p.finish(std::mem::take(&mut block));
                continue;
            }
            _ => {}
        }
        if block.is_empty() {
            block.start = line_no;
        }
        match tag.as_str() {
            "AU" => block.authors.extend(AuthorKey::from_listing(value)),
            "PY" => block.year = Some(value.to_string()),
            "C1" => block.addresses.push(value.to_string()),
            "NR" => block.refs = Some(value.to_string()),
            "UT" => block.id = Some(value.to_string()),
            _ => {}
        }
    }
    p.finish(block);
    p.out
}

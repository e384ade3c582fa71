//! Configuration files: the continent table, flat `key = value` files and
//! planted-corpus specifications.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use mesonet_core::geo::{Continent, CountryTable};
use mesonet_core::ingest::YearSpan;
use mesonet_core::synth::{GroupSpec, GroupStructure, PlantedEvent, PlantedSpec};

use crate::error::{Error, Result};
use crate::table::parse_pairs;

const BUILTIN_CONTINENTS: &str = include_str!("../data/continents.txt");

pub fn parse_country_table(text: &str) -> Result<CountryTable> {
    let mut table = CountryTable::new();
    for (country, continent) in parse_pairs(text)? {
        let c = Continent::parse(&continent).ok_or_else(|| Error::Config(format!("unknown continent `{continent}`")))?;
        table.insert(&country, c);
    }
    Ok(table)
}

pub fn builtin_country_table() -> CountryTable {
    parse_country_table(BUILTIN_CONTINENTS).expect("bundled continent table is well-formed")
}

/// Parses `key = value` lines in order; blank lines and `#` comments are
/// skipped. Keys may repeat.
pub fn parse_key_values(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::syntax(i + 1, "expected `key = value`"))?;
        out.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::syntax(line, format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::syntax(line, format!("invalid value `{value}` for `{key}`"))),
    }
}

fn parse_span(line: usize, value: &str) -> Result<YearSpan> {
    let (a, b) = value.split_once('-').ok_or_else(|| Error::syntax(line, "years must read `first-last`"))?;
    let span = YearSpan::new(parse_value(line, "years", a.trim())?, parse_value(line, "years", b.trim())?);
    if span.first > span.last {
        return Err(Error::syntax(line, "first year after last year"));
    }
    Ok(span)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    Wos,
    #[default]
    Tabular,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wos" => Ok(InputFormat::Wos),
            "tabular" => Ok(InputFormat::Tabular),
            _ => Err(Error::Config(format!("unknown input format `{s}` (expected wos or tabular)"))),
        }
    }
}

/// Settings of a full pipeline run.
///
/// | key | default |
/// |---|---|
/// | `input` | required |
/// | `format` | `tabular` |
/// | `output` | required |
/// | `field` | `field` |
/// | `slice_count` | `3` |
/// | `seed` | `42` |
/// | `trials` | `10` |
/// | `years` | span of the input |
/// | `continents` | bundled table |
/// | `aliases` | bundled table |
/// | `clu` | none (cluster the network) |
/// | `neighborhoods` | `3` |
/// | `resume` | `false` |
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    pub output: PathBuf,
    pub field: String,
    pub slice_count: usize,
    pub seed: u64,
    pub trials: usize,
    pub years: Option<YearSpan>,
    pub continents: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub clu: Option<PathBuf>,
    /// Neighborhood diagrams written for this many of the largest clusters.
    pub neighborhoods: usize,
    pub resume: bool,
}

impl PipelineConfig {
    pub fn new(input: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            format: InputFormat::default(),
            output: output.into(),
            field: "field".to_string(),
            slice_count: 3,
            seed: 42,
            trials: 10,
            years: None,
            continents: None,
            aliases: None,
            clu: None,
            neighborhoods: 3,
            resume: false,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut input = None;
        let mut output = None;
        let mut c = Self::new("", "");
        for (line, key, value) in parse_key_values(text)? {
            match key.as_str() {
                "input" => input = Some(PathBuf::from(&value)),
                "output" => output = Some(PathBuf::from(&value)),
                "format" => c.format = value.parse().map_err(|e: Error| Error::syntax(line, e.to_string()))?,
                "field" => c.field = value,
                "slice_count" => c.slice_count = parse_value(line, &key, &value)?,
                "seed" => c.seed = parse_value(line, &key, &value)?,
                "trials" => c.trials = parse_value(line, &key, &value)?,
                "years" => c.years = Some(parse_span(line, &value)?),
                "continents" => c.continents = Some(value.into()),
                "aliases" => c.aliases = Some(value.into()),
                "clu" => c.clu = Some(value.into()),
                "neighborhoods" => c.neighborhoods = parse_value(line, &key, &value)?,
                "resume" => c.resume = parse_bool(line, &key, &value)?,
                _ => return Err(Error::syntax(line, format!("unknown key `{key}`"))),
            }
        }
        c.input = input.ok_or_else(|| Error::Config("`input` is required".into()))?;
        c.output = output.ok_or_else(|| Error::Config("`output` is required".into()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.slice_count == 0 || self.slice_count > 32 {
            return Err(Error::Config("slice_count must be between 1 and 32".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.field.is_empty() || self.field.contains([',', '\n']) {
            return Err(Error::Config("field name must be non-empty without commas".into()));
        }
        Ok(())
    }
}

fn parse_structures(line: usize, value: &str) -> Result<Vec<GroupStructure>> {
    value
        .split(',')
        .map(|s| GroupStructure::parse(s.trim()).ok_or_else(|| Error::syntax(line, format!("unknown group structure `{s}`"))))
        .collect()
}

/// Reads a planted-corpus specification.
///
/// ```text
/// seed = 7
/// years = 1991-2008
/// # either explicit groups: size structure country [papers]
/// group = 12 star GERMANY
/// # or generated ones: count min_size-max_size structures papers_per_member
/// groups = 24 10-25 star,multi_hub 2
/// migration = 0 1
/// collaboration = 0 2 pi
/// random_events = 20 10 0.5
/// ```
pub fn parse_planted_spec(text: &str) -> Result<PlantedSpec> {
    let mut seed = 0u64;
    let mut years = YearSpan::new(1991, 2008);
    let mut explicit: Vec<GroupSpec> = Vec::new();
    let mut generated: Option<(usize, usize, usize, Vec<GroupStructure>, usize, usize)> = None;
    let mut events = Vec::new();
    let mut random: Option<(usize, usize, f64, usize)> = None;
    for (line, key, value) in parse_key_values(text)? {
        let words: Vec<&str> = value.split_whitespace().collect();
        let num = |i: usize| -> Result<usize> {
            parse_value(line, &key, words.get(i).ok_or_else(|| Error::syntax(line, format!("`{key}` needs more fields")))?)
        };
        match key.as_str() {
            "seed" => seed = parse_value(line, &key, &value)?,
            "years" => years = parse_span(line, &value)?,
            "group" => {
                let size = num(0)?;
                let structure = parse_structures(line, words.get(1).copied().unwrap_or(""))?[0];
                let country = words.get(2).map_or("UNKNOWN".to_string(), |c| c.replace('_', " "));
                let papers = if words.len() > 3 { num(3)? } else { 2 * size };
                explicit.push(GroupSpec { size, structure, papers, country });
            }
            "groups" => {
                let (lo, hi) = words
                    .get(1)
                    .and_then(|r| r.split_once('-'))
                    .ok_or_else(|| Error::syntax(line, "sizes must read `min-max`"))?;
                let lo: usize = parse_value(line, &key, lo)?;
                let hi: usize = parse_value(line, &key, hi)?;
                if lo > hi {
                    return Err(Error::syntax(line, "minimum size above maximum"));
                }
                let structures = parse_structures(line, words.get(2).copied().unwrap_or(""))?;
                generated = Some((num(0)?, lo, hi, structures, num(3)?, line));
            }
            "migration" => events.push(PlantedEvent::Migration { from: num(0)?, to: num(1)? }),
            "collaboration" => {
                let pi_edge = match words.get(2) {
                    None => false,
                    Some(&"pi") => true,
                    Some(w) => return Err(Error::syntax(line, format!("unexpected `{w}`"))),
                };
                events.push(PlantedEvent::Collaboration { a: num(0)?, b: num(1)?, pi_edge });
            }
            "random_events" => {
                let fraction: f64 = parse_value(line, &key, words.get(2).copied().unwrap_or(""))?;
                if !(0.0..=1.0).contains(&fraction) {
                    return Err(Error::syntax(line, "leader fraction must lie in [0, 1]"));
                }
                random = Some((num(0)?, num(1)?, fraction, line));
            }
            _ => return Err(Error::syntax(line, format!("unknown key `{key}`"))),
        }
    }
    let mut spec = match generated {
        Some((_, _, _, _, _, line)) if !explicit.is_empty() => {
            return Err(Error::syntax(line, "`groups` and `group` cannot be combined"));
        }
        Some((count, lo, hi, structures, per_member, _)) => PlantedSpec::new(count, lo..=hi, &structures, per_member, years, seed),
        None => PlantedSpec { groups: explicit, events: Vec::new(), years, seed },
    };
    spec.events = events;
    if let Some((migrations, collaborations, fraction, line)) = random {
        spec = spec
            .with_random_events(migrations, collaborations, fraction)
            .map_err(|e| Error::syntax(line, e.to_string()))?;
    }
    Ok(spec)
}

/// Writes a spec in explicit form: every group and event listed.
pub fn write_planted_spec(spec: &PlantedSpec) -> String {
    let mut out = String::new();
    writeln!(out, "seed = {}", spec.seed).unwrap();
    writeln!(out, "years = {}", spec.years).unwrap();
    for g in &spec.groups {
        writeln!(out, "group = {} {} {} {}", g.size, g.structure.label(), g.country.replace(' ', "_"), g.papers).unwrap();
    }
    for e in &spec.events {
        match *e {
            PlantedEvent::Migration { from, to } => writeln!(out, "migration = {from} {to}").unwrap(),
            PlantedEvent::Collaboration { a, b, pi_edge } => {
                writeln!(out, "collaboration = {a} {b}{}", if pi_edge { " pi" } else { "" }).unwrap()
            }
        }
    }
    out
}

/// Parses the `NAME=PATH` or `PATH` form used to name analysis directories.
pub fn named_path(arg: &str) -> (Option<String>, PathBuf) {
    match arg.split_once('=') {
        Some((name, path)) if !name.is_empty() => (Some(name.to_string()), PathBuf::from(path)),
        _ => (None, PathBuf::from(arg)),
    }
}

//! Canonical corpus format: comma-separated with a mandatory header
//! `record_id,year,authors,countries,n_references`; the two list columns
//! pack their entries with `;`.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use log::warn;
use mesonet_core::ingest::{AuthorKey, PublicationRecord};

use crate::error::{Error, Result};
use crate::wos::ParseWarning;

pub const COLUMNS: [&str; 5] = ["record_id", "year", "authors", "countries", "n_references"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TabularParse {
    pub records: Vec<PublicationRecord>,
    pub warnings: Vec<ParseWarning>,
}

fn split_list(cell: &str) -> impl Iterator<Item = &str> {
    cell.split(';').map(str::trim).filter(|s| !s.is_empty())
}

/// Reads a corpus. A missing column is an error; rows with an unusable
/// year, reference count or author list, or a repeated id, are skipped with
/// a warning. Line numbers in warnings count the header as line 1.
pub fn read_corpus<R: Read>(input: R) -> Result<TabularParse> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let header = reader.headers()?.clone();
    let mut index = [0usize; 5];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
    }
    let mut out = TabularParse::default();
    let mut ids = BTreeSet::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let cell = |k: usize| row.get(index[k]).unwrap_or("").trim();
        let mut skip = |message: String| {
            warn!("line {line}: {message}");
            out.warnings.push(ParseWarning { line, message });
        };
        let id = cell(0);
        let Ok(year) = cell(1).parse::<i32>() else {
            skip(format!("unparseable year `{}`; row skipped", cell(1)));
            continue;
        };
        let Ok(refs) = cell(4).parse::<u32>() else {
            skip(format!("unparseable n_references `{}`; row skipped", cell(4)));
            continue;
        };
        let authors: Vec<AuthorKey> = split_list(cell(2)).filter_map(AuthorKey::from_canonical).collect();
        if authors.is_empty() {
            skip("no authors; row skipped".into());
            continue;
        }
        if id.is_empty() || !ids.insert(id.to_string()) {
            skip(format!("missing or repeated record id `{id}`; row skipped"));
            continue;
        }
        let countries = split_list(cell(3)).map(str::to_string);
        out.records.push(PublicationRecord::new(id, year, authors, countries, refs));
    }
    Ok(out)
}

/// Writes records in the given order, `\n`-terminated.
pub fn write_corpus<W: Write>(output: W, records: &[PublicationRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(output);
    w.write_record(COLUMNS)?;
    for r in records {
        let authors: Vec<&str> = r.authors.iter().map(AuthorKey::as_str).collect();
        w.write_record([
            r.record_id.as_str(),
            &r.year.to_string(),
            &authors.join(";"),
            &r.countries.join(";"),
            &r.n_references.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn corpus_to_string(records: &[PublicationRecord]) -> String {
    let mut buf = Vec::new();
    write_corpus(&mut buf, records).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

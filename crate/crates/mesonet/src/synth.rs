//! Writing planted corpora and their ground truth.

use std::path::{Path, PathBuf};

use mesonet_core::ingest::AuthorKey;
use mesonet_core::synth::{generate, GroundTruth, PlantedEvent, PlantedSpec};

use crate::error::Result;
use crate::fsutil::write_atomic;
use crate::tabular;

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

/// `author,group,leader` rows.
pub fn members_csv(truth: &GroundTruth) -> String {
    let mut w = writer();
    w.write_record(["author", "group", "leader"]).unwrap();
    for (key, g) in &truth.members {
        let leader = truth.leaders.get(*g) == Some(key);
        w.write_record([key.as_str(), &g.to_string(), &leader.to_string()]).unwrap();
    }
    finish(w)
}

/// One row per planted event with the link type it should produce.
pub fn events_csv(truth: &GroundTruth) -> String {
    let mut w = writer();
    w.write_record(["event", "kind", "group_a", "group_b", "leader_edge", "expected_link_type", "authors"]).unwrap();
    for (i, e) in truth.events.iter().enumerate() {
        let (kind, pi_edge) = match e.event {
            PlantedEvent::Migration { .. } => ("migration", false),
            PlantedEvent::Collaboration { pi_edge, .. } => ("collaboration", pi_edge),
        };
        let (a, b) = e.event.groups();
        let authors: Vec<&str> = e.authors.iter().map(AuthorKey::as_str).collect();
        w.write_record([
            &i.to_string(),
            kind,
            &a.to_string(),
            &b.to_string(),
            &pi_edge.to_string(),
            e.event.expected_link_type().label(),
            &authors.join(";"),
        ])
        .unwrap();
    }
    finish(w)
}

/// Ground-truth files written next to a corpus: `<stem>.members.csv` and
/// `<stem>.events.csv`.
pub fn truth_paths(corpus: &Path) -> (PathBuf, PathBuf) {
    let stem = corpus.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    (corpus.with_file_name(format!("{stem}.members.csv")), corpus.with_file_name(format!("{stem}.events.csv")))
}

/// Generates the corpus of `spec` and writes it with its ground truth.
pub fn write_planted(spec: &PlantedSpec, corpus_path: &Path) -> Result<GroundTruth> {
    let (corpus, truth) = generate(spec)?;
    write_atomic(corpus_path, tabular::corpus_to_string(&corpus.records).as_bytes())?;
    let (members, events) = truth_paths(corpus_path);
    write_atomic(&members, members_csv(&truth).as_bytes())?;
    write_atomic(&events, events_csv(&truth).as_bytes())?;
    Ok(truth)
}

//! Pajek NET and CLU files.
//!
//! A NET file is `*Vertices N`, then `i "label"` lines numbered from 1,
//! then `*Edges` and one `i j w` line per undirected edge. A CLU file lists
//! one cluster id per vertex, in vertex order, after an optional
//! `*Vertices N` header.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use mesonet_core::cluster::Clustering;
use mesonet_core::graph::{AuthorNode, CoauthorNetwork};
use mesonet_core::ingest::AuthorKey;

use crate::error::{Error, Result};

/// A labeled undirected weighted graph as stored in a NET file. Vertex
/// indices are 0-based; edges have `a < b` and are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PajekGraph {
    pub labels: Vec<String>,
    pub edges: Vec<(usize, usize, u32)>,
}

impl PajekGraph {
    pub fn from_network(net: &CoauthorNetwork) -> Self {
        Self {
            labels: net.nodes().iter().map(|n| n.key.as_str().to_string()).collect(),
            edges: net.edges().collect(),
        }
    }

    /// Builds an author network; labels are read as author keys and the
    /// vertices re-sorted by key.
    pub fn into_network(self) -> Result<CoauthorNetwork> {
        let mut nodes = Vec::with_capacity(self.labels.len());
        for (i, label) in self.labels.iter().enumerate() {
            let key = AuthorKey::from_canonical(label)
                .ok_or_else(|| Error::syntax(i + 2, format!("vertex {} has an empty label", i + 1)))?;
            nodes.push(AuthorNode::bare(key));
        }
        Ok(CoauthorNetwork::from_parts(nodes, self.edges)?)
    }
}

pub fn write_net(graph: &PajekGraph) -> String {
    let mut out = String::new();
    writeln!(out, "*Vertices {}", graph.labels.len()).unwrap();
    for (i, label) in graph.labels.iter().enumerate() {
        writeln!(out, "{} \"{}\"", i + 1, label).unwrap();
    }
    out.push_str("*Edges\n");
    let mut edges: Vec<(usize, usize, u32)> = graph.edges.iter().map(|&(a, b, w)| (a.min(b), a.max(b), w)).collect();
    edges.sort_unstable();
    for (a, b, w) in edges {
        writeln!(out, "{} {} {}", a + 1, b + 1, w).unwrap();
    }
    out
}

pub fn network_to_net(net: &CoauthorNetwork) -> String {
    write_net(&PajekGraph::from_network(net))
}

enum Section {
    None,
    Vertices,
    Edges,
}

fn parse_index(token: Option<&str>, n: usize, line: usize) -> Result<usize> {
    let token = token.ok_or_else(|| Error::syntax(line, "missing vertex index"))?;
    let i: usize = token.parse().map_err(|_| Error::syntax(line, format!("bad vertex index `{token}`")))?;
    if i == 0 || i > n {
        return Err(Error::syntax(line, format!("vertex index {i} out of range 1..={n}")));
    }
    Ok(i - 1)
}

/// Parses a NET file. Edge weights default to 1. Errors carry the 1-based
/// line number.
pub fn read_net(text: &str) -> Result<PajekGraph> {
    let mut section = Section::None;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    let mut header_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(header) = line.strip_prefix('*') {
            let mut parts = header.split_whitespace();
            let name = parts.next().unwrap_or("").to_ascii_lowercase();
            match name.as_str() {
                "vertices" if matches!(section, Section::None) => {
                    let n = parts
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| Error::syntax(line_no, "`*Vertices` needs a vertex count"))?;
                    labels = vec![None; n];
                    header_line = line_no;
                    section = Section::Vertices;
                }
                "edges" if !matches!(section, Section::None) => section = Section::Edges,
                _ => return Err(Error::syntax(line_no, format!("unexpected section `{line}`"))),
            }
            continue;
        }
        let n = labels.len();
        match section {
            Section::None => return Err(Error::syntax(line_no, "data before `*Vertices`")),
            Section::Vertices => {
                let (idx, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                let v = parse_index(Some(idx), n, line_no)?;
                let rest = rest.trim();
                let label = match rest.strip_prefix('"') {
                    Some(quoted) => quoted
                        .rfind('"')
                        .map(|end| &quoted[..end])
                        .ok_or_else(|| Error::syntax(line_no, "unterminated label"))?,
                    None => rest.split_whitespace().next().unwrap_or(""),
                };
                if labels[v].replace(label.to_string()).is_some() {
                    return Err(Error::syntax(line_no, format!("vertex {} declared twice", v + 1)));
                }
            }
            Section::Edges => {
                let mut parts = line.split_whitespace();
                let a = parse_index(parts.next(), n, line_no)?;
                let b = parse_index(parts.next(), n, line_no)?;
                let w = match parts.next() {
                    None => 1,
                    Some(t) => t
                        .parse::<u32>()
                        .ok()
                        .filter(|&w| w > 0)
                        .ok_or_else(|| Error::syntax(line_no, format!("bad edge weight `{t}`")))?,
                };
                if a == b {
                    return Err(Error::syntax(line_no, "self-loop"));
                }
                let (a, b) = (a.min(b), a.max(b));
                if !seen.insert((a, b)) {
                    return Err(Error::syntax(line_no, format!("duplicate edge {} {}", a + 1, b + 1)));
                }
                edges.push((a, b, w));
            }
        }
    }
    if matches!(section, Section::None) {
        return Err(Error::syntax(1, "missing `*Vertices` header"));
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| Error::syntax(header_line, format!("vertex {} has no label line", v + 1))))
        .collect::<Result<Vec<_>>>()?;
    edges.sort_unstable();
    Ok(PajekGraph { labels, edges })
}

pub fn net_to_network(text: &str) -> Result<CoauthorNetwork> {
    read_net(text)?.into_network()
}

pub fn write_clu(assignment: &[u32]) -> String {
    let mut out = String::new();
    writeln!(out, "*Vertices {}", assignment.len()).unwrap();
    for c in assignment {
        writeln!(out, "{c}").unwrap();
    }
    out
}

/// Parses a CLU file. Ids may be separated by newlines, spaces or commas;
/// when the header is present its count must match.
pub fn read_clu(text: &str) -> Result<Vec<u32>> {
    let mut declared = None;
    let mut ids = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(header) = line.strip_prefix('*') {
            let mut parts = header.split_whitespace();
            if !parts.next().is_some_and(|p| p.eq_ignore_ascii_case("vertices")) || declared.is_some() || !ids.is_empty() {
                return Err(Error::syntax(i + 1, format!("unexpected section `{line}`")));
            }
            declared = Some(
                parts
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::syntax(i + 1, "`*Vertices` needs a vertex count"))?,
            );
            continue;
        }
        for token in line.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
            ids.push(token.parse::<u32>().map_err(|_| Error::syntax(i + 1, format!("bad cluster id `{token}`")))?);
        }
    }
    if let Some(n) = declared.filter(|&n| n != ids.len()) {
        return Err(Error::Config(format!("CLU header declares {n} vertices but lists {}", ids.len())));
    }
    Ok(ids)
}

/// Reads a clustering positionally against the network's vertex order (the
/// order the NET writer uses) and relabels it densely.
pub fn load_clustering(text: &str, net: &CoauthorNetwork) -> Result<Clustering> {
    let ids = read_clu(text)?;
    if ids.len() != net.node_count() {
        return Err(mesonet_core::Error::ClusteringSizeMismatch { expected: net.node_count(), got: ids.len() }.into());
    }
    Ok(Clustering::from_labels(net, &ids, 0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mesonet_core::ingest::key;

    fn two() -> CoauthorNetwork {
        CoauthorNetwork::from_parts(vec![AuthorNode::bare(key("B")), AuthorNode::bare(key("A"))], [(0, 1, 2)]).unwrap()
    }

    #[test]
    fn net_format() {
        assert_eq!(network_to_net(&two()), "*Vertices 2\n1 \"A\"\n2 \"B\"\n*Edges\n1 2 2\n");
        let empty = CoauthorNetwork::from_parts(Vec::new(), []).unwrap();
        assert_eq!(network_to_net(&empty), "*Vertices 0\n*Edges\n");
        assert_eq!(net_to_network(&network_to_net(&two())).unwrap().edges().collect::<Vec<_>>(), [(0, 1, 2)]);
    }

    #[test]
    fn net_errors_carry_lines() {
        let line = |t: &str| match read_net(t) {
            Err(Error::Syntax { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("*Vertices 2\n1 \"A\"\n2 \"B\"\n*Arcs\n"), 4);
        assert_eq!(line("*Vertices 2\n1 \"A\"\n3 \"B\"\n"), 3);
        assert_eq!(line("*Vertices 2\n1 \"A\"\n2 \"B\"\n*Edges\n1 2\n2 1 3\n"), 6);
        assert_eq!(line("*Vertices 2\n1 \"A\"\n2 \"B\"\n*Edges\n1 2 0\n"), 5);
        assert_eq!(line("*Vertices 2\n1 \"A\"\n*Edges\n"), 1);
    }

    #[test]
    fn clu_examples() {
        let net = CoauthorNetwork::from_parts(
            ["A", "B", "C"].iter().map(|k| AuthorNode::bare(key(k))).collect(),
            [(0, 1, 1), (1, 2, 1)],
        )
        .unwrap();
        assert_eq!(load_clustering("1,1,2", &net).unwrap().assignment(), [1, 1, 2]);
        assert_eq!(load_clustering("*Vertices 3\n7\n7\n9\n", &net).unwrap().assignment(), [1, 1, 2]);
        assert!(load_clustering("1\n1\n", &net).is_err());
        assert!(read_clu("*Vertices 3\n1\n").is_err());
        assert_eq!(read_clu(&write_clu(&[3, 1, 2])).unwrap(), [3, 1, 2]);
    }
}

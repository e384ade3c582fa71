//! Graphviz DOT renderings of cluster-level networks and author
//! neighborhoods.

use std::fmt::Write as _;

use mesonet_core::analysis::ClusterRow;
use mesonet_core::geo::{Continent, GeoLabel};
use mesonet_core::meso::{ClusterLevelNetwork, Neighborhood};

/// Shape and fill of a cluster node by geographic label: single-continent
/// clusters are circles (Asia green, Europe blue, North America red), mixed
/// ones triangles (Asia-Europe light grey, Asia-North America dark grey,
/// Europe-North America black); everything else is white.
pub fn geo_style(label: GeoLabel) -> (&'static str, &'static str) {
    use Continent::*;
    match label {
        GeoLabel::Single(Asia) => ("circle", "green"),
        GeoLabel::Single(Europe) => ("circle", "blue"),
        GeoLabel::Single(NorthAmerica) => ("circle", "red"),
        GeoLabel::Single(_) | GeoLabel::Unknown => ("circle", "white"),
        GeoLabel::Mixed(Asia, Europe) => ("triangle", "gray80"),
        GeoLabel::Mixed(Asia, NorthAmerica) => ("triangle", "gray40"),
        GeoLabel::Mixed(Europe, NorthAmerica) => ("triangle", "black"),
        GeoLabel::Mixed(..) => ("triangle", "white"),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Clusters as nodes with size, hubness and geography attributes.
pub fn cluster_network_dot(net: &ClusterLevelNetwork, rows: &[ClusterRow]) -> String {
    let mut out = String::new();
    writeln!(out, "graph \"{}\" {{", net.kind.label()).unwrap();
    out.push_str("  node [style=filled, fontsize=10];\n");
    for &id in &net.nodes {
        let row = rows.iter().find(|r| r.id == id);
        let (size, hubness, geo) = row.map_or((0, "", GeoLabel::Unknown), |r| (r.size, r.hubness.label(), r.geography));
        let (shape, fill) = geo_style(geo);
        writeln!(
            out,
            "  c{id} [label=\"{id}\", size={size}, hubness=\"{hubness}\", geography=\"{geo}\", shape={shape}, fillcolor=\"{fill}\"];"
        )
        .unwrap();
    }
    for e in &net.edges {
        let (a, b) = e.cluster_pair;
        writeln!(
            out,
            "  c{a} -- c{b} [separator={}, pattern=\"{}\", weight={}];",
            e.separator_size,
            e.pattern.label(),
            e.total_weight
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Authors of a neighborhood, each cluster filled with its own grey shade
/// and the seed cluster darkest.
pub fn neighborhood_dot(n: &Neighborhood) -> String {
    let shade = |c: u32| {
        let k = n.clusters.iter().position(|&x| x == c).unwrap_or(0);
        let steps = n.clusters.len().max(2) - 1;
        20 + (k * 75) / steps
    };
    let mut out = String::new();
    writeln!(out, "graph \"neighborhood_{}\" {{", n.clusters.first().copied().unwrap_or(0)).unwrap();
    out.push_str("  node [shape=circle, style=filled, fontsize=8];\n");
    for (i, node) in n.network.nodes().iter().enumerate() {
        let c = n.cluster_of[i];
        let s = shade(c);
        let font = if s < 50 { "white" } else { "black" };
        writeln!(
            out,
            "  v{} [label=\"{}\", cluster={c}, fillcolor=\"gray{s}\", fontcolor=\"{font}\"];",
            i + 1,
            escape(node.key.as_str())
        )
        .unwrap();
    }
    for (a, b, w) in n.network.edges() {
        writeln!(out, "  v{} -- v{} [penwidth={w}];", a + 1, b + 1).unwrap();
    }
    out.push_str("}\n");
    out
}

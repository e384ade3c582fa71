//! Field report as `field,section,statistic,value` CSV rows plus a
//! plain-text mirror.

use std::fmt::Write as _;

use mesonet_core::cohort::{AgeCohort, CrossTab, FieldReport, SizeCategory};
use mesonet_core::meso::ClusterNetworkStats;
use mesonet_core::metrics::{HubnessKind, Role};
use mesonet_core::stats::ChiSquare;

use crate::emit::fixed;

/// p-value to four significant digits; anything below `1e-16` is reported
/// as `< 1e-16`.
pub fn format_p_value(p: f64) -> String {
    if p < 1e-16 {
        "< 1e-16".to_string()
    } else if p >= 1e-4 {
        let digits = (3 - p.log10().floor() as i32).max(0) as usize;
        format!("{p:.digits$}")
    } else {
        format!("{p:.3e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub field: String,
    pub section: String,
    pub statistic: String,
    pub value: String,
}

struct Rows<'a> {
    field: &'a str,
    out: &'a mut Vec<ReportRow>,
}

impl Rows<'_> {
    fn push(&mut self, section: &str, statistic: &str, value: String) {
        self.out.push(ReportRow {
            field: self.field.to_string(),
            section: section.to_string(),
            statistic: statistic.to_string(),
            value,
        });
    }

    fn shares(&mut self, section: &str, labels: &[&str], values: &[f64]) {
        for (l, v) in labels.iter().zip(values) {
            self.push(section, l, fixed(*v));
        }
    }

    fn network(&mut self, section: &str, s: &ClusterNetworkStats) {
        self.push(section, "participating_clusters", s.participating_clusters.to_string());
        self.push(section, "participating_fraction", fixed(s.participating_fraction));
        self.push(section, "edges", s.edge_count.to_string());
        self.push(section, "link_fraction", fixed(s.link_fraction));
        self.push(section, "mean_degree", fixed(s.mean_degree));
        self.push(section, "median_degree", fixed(s.median_degree));
        self.push(section, "max_degree", s.max_degree.to_string());
        self.push(section, "components", s.components.to_string());
        self.push(section, "largest_component", s.largest_component.to_string());
        self.push(section, "giant_component", s.has_giant_component.to_string());
    }

    fn crosstab(&mut self, t: &CrossTab) {
        let section = format!("crosstab:{}", t.name);
        for (r, row) in t.row_labels.iter().zip(&t.counts) {
            for (c, n) in t.col_labels.iter().zip(row) {
                self.push(&section, &format!("{r}|{c}"), n.to_string());
            }
        }
        match &t.chi_square {
            Some(ChiSquare { statistic, df, p_value, n }) => {
                self.push(&section, "n", n.to_string());
                self.push(&section, "chi_square", format!("{statistic:.4}"));
                self.push(&section, "df", df.to_string());
                self.push(&section, "p_value", format_p_value(*p_value));
            }
            None => self.push(&section, "chi_square", "n/a".to_string()),
        }
    }
}

fn labels<T: Copy>(items: &[T], f: fn(T) -> &'static str) -> Vec<&'static str> {
    items.iter().map(|&i| f(i)).collect()
}

/// Rows for one field. `summary` holds network-level figures recorded
/// when the network was built.
pub fn field_rows(report: &FieldReport, summary: &[(String, String)]) -> Vec<ReportRow> {
    let mut out = Vec::new();
    let mut rows = Rows { field: &report.field, out: &mut out };
    for (k, v) in summary {
        rows.push("network", k, v.clone());
    }
    rows.push("clusters", "count", report.cluster_count.to_string());
    rows.shares("size", &labels(&SizeCategory::ALL, SizeCategory::label), &report.size_shares);
    rows.shares("age", &labels(&AgeCohort::ALL, AgeCohort::label), &report.age_shares);
    rows.push("age", "gap_count", report.age_gap_count.to_string());
    rows.shares("hubness", &labels(&HubnessKind::ALL, HubnessKind::label), &report.hubness_shares);
    rows.shares("collaboration", &["participating", "not_participating"], &report.collaboration_participation);
    rows.shares("link_type", &["transfer", "collaboration"], &report.link_type_shares);
    for (name, v) in report.size_percentiles.as_array() {
        rows.push("size_percentiles", name, fixed(v));
    }
    let r = |x: Option<f64>| x.map_or("n/a".to_string(), fixed);
    rows.push("size_publications", "pearson_r", r(report.size_publication_r));
    rows.push("size_publications", "pearson_r_log", r(report.size_publication_r_log));
    if let Some(roles) = &report.roles {
        for role in Role::ALL {
            rows.push("roles", role.code(), fixed(roles.fractions[role.index()]));
        }
        for role in Role::ALL {
            rows.push("role_counts", role.code(), roles.counts[role.index()].to_string());
        }
    }
    if let Some(s) = &report.transfer_network {
        rows.network("transfer_network", s);
    }
    if let Some(s) = &report.collaboration_network {
        rows.network("collaboration_network", s);
    }
    for t in &report.crosstabs {
        rows.crosstab(t);
    }
    out
}

/// Rows for associations pooled across fields, under field `all`.
pub fn comparative_rows(tables: &[CrossTab]) -> Vec<ReportRow> {
    let mut out = Vec::new();
    let mut rows = Rows { field: "all", out: &mut out };
    for t in tables {
        rows.crosstab(t);
    }
    out
}

pub fn rows_csv(rows: &[ReportRow]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["field", "section", "statistic", "value"]).unwrap();
    for r in rows {
        w.write_record([&r.field, &r.section, &r.statistic, &r.value]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// Aligned text rendering of the same rows, grouped by field and section.
pub fn rows_text(rows: &[ReportRow]) -> String {
    let width = rows.iter().map(|r| r.statistic.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    let mut current: Option<(&str, &str)> = None;
    for r in rows {
        if current != Some((&r.field, &r.section)) {
            if current.is_some_and(|(f, _)| f != r.field) || current.is_none() {
                if current.is_some() {
                    out.push('\n');
                }
                writeln!(out, "== {} ==", r.field).unwrap();
            }
            writeln!(out, "[{}]", r.section).unwrap();
            current = Some((&r.field, &r.section));
        }
        writeln!(out, "  {:<width$}  {}", r.statistic, r.value).unwrap();
    }
    out
}

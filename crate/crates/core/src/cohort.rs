//! Cluster categories (size, age cohort) and the field-level comparison report.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{CoauthorNetwork, SliceMask};
use crate::ingest::YearSpan;
use crate::meso::ClusterNetworkStats;
use crate::metrics::{HubnessKind, RoleDistribution};
use crate::stats::{self, chi_square, ChiSquare, ContingencyTable, Percentiles};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SizeCategory {
    /// At most 10 authors.
    Small,
    /// 11 to 40 authors.
    Medium,
    /// More than 40 authors.
    Large,
}

impl SizeCategory {
    pub const ALL: [SizeCategory; 3] = [SizeCategory::Small, SizeCategory::Medium, SizeCategory::Large];

    pub fn of(n: usize) -> Self {
        match n {
            0..=10 => SizeCategory::Small,
            11..=40 => SizeCategory::Medium,
            _ => SizeCategory::Large,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SizeCategory::Small => "small",
            SizeCategory::Medium => "medium",
            SizeCategory::Large => "large",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }
}

impl fmt::Display for SizeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgeCohort {
    /// Active in all three slices.
    Continuous,
    /// Active in the last two slices only.
    Recent,
    /// Active in the last slice only.
    New,
    /// Not active in the last slice.
    Extinct,
}

impl AgeCohort {
    pub const ALL: [AgeCohort; 4] = [AgeCohort::Continuous, AgeCohort::Recent, AgeCohort::New, AgeCohort::Extinct];

    pub fn label(self) -> &'static str {
        match self {
            AgeCohort::Continuous => "continuous",
            AgeCohort::Recent => "recent",
            AgeCohort::New => "new",
            AgeCohort::Extinct => "extinct",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }
}

impl fmt::Display for AgeCohort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Cohort plus a flag for the first-and-last-only pattern, which is filed
/// under continuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgeClass {
    pub cohort: AgeCohort,
    pub gap: bool,
}

/// Cohort from per-slice activity over exactly three slices.
pub fn age_cohort(activity: &[bool]) -> Result<AgeClass> {
    let [first, second, last] = activity else {
        return Err(Error::SliceCountMismatch(activity.len()));
    };
    let (cohort, gap) = match (first, second, last) {
        (false, false, false) => return Err(Error::NoActivity),
        (true, true, true) => (AgeCohort::Continuous, false),
        (true, false, true) => (AgeCohort::Continuous, true),
        (false, true, true) => (AgeCohort::Recent, false),
        (false, false, true) => (AgeCohort::New, false),
        (_, _, false) => (AgeCohort::Extinct, false),
    };
    Ok(AgeClass { cohort, gap })
}

/// Per-slice activity of a cluster: any member published in the slice.
pub fn cluster_activity(net: &CoauthorNetwork, members: &[usize], slices: &[YearSpan]) -> Vec<bool> {
    let mask = members
        .iter()
        .fold(SliceMask::default(), |m, &i| m.union(net.node(i).active_slices(slices)));
    mask.to_vec(slices.len())
}

/// Per-cluster facts feeding the field report.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRecord {
    pub id: u32,
    pub size: usize,
    pub publications: usize,
    pub age: Option<AgeClass>,
    pub hubness: HubnessKind,
    pub in_collaboration: bool,
}

/// Everything known about one field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldInput {
    pub name: String,
    pub clusters: Vec<ClusterRecord>,
    pub transfer_links: usize,
    pub collaboration_links: usize,
    pub roles: Option<RoleDistribution>,
    pub transfer_network: Option<ClusterNetworkStats>,
    pub collaboration_network: Option<ClusterNetworkStats>,
}

/// Labeled counts, with a chi-square test when the table supports one.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossTab {
    pub name: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub chi_square: Option<ChiSquare>,
}

impl CrossTab {
    fn new(name: &str, row_labels: Vec<String>, col_labels: Vec<String>, counts: Vec<Vec<u64>>) -> Self {
        // Empty rows or columns carry no information and would zero a marginal.
        let keep_rows: Vec<usize> = (0..counts.len()).filter(|&i| counts[i].iter().any(|&c| c > 0)).collect();
        let keep_cols: Vec<usize> =
            (0..col_labels.len()).filter(|&j| counts.iter().any(|r| r[j] > 0)).collect();
        let chi_square = ContingencyTable::new(
            keep_rows.iter().map(|&i| row_labels[i].clone()).collect(),
            keep_cols.iter().map(|&j| col_labels[j].clone()).collect(),
            keep_rows.iter().map(|&i| keep_cols.iter().map(|&j| counts[i][j]).collect()).collect(),
        )
        .ok()
        .map(|t| chi_square(&t));
        Self { name: name.to_string(), row_labels, col_labels, counts, chi_square }
    }
}

/// One field's shares, percentiles and associations.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldReport {
    pub field: String,
    pub cluster_count: usize,
    /// small, medium, large.
    pub size_shares: [f64; 3],
    /// continuous, recent, new, extinct; over clusters with a known cohort.
    pub age_shares: [f64; 4],
    pub age_gap_count: usize,
    /// no-hub, single-hub, multi-hub.
    pub hubness_shares: [f64; 3],
    /// participating, not participating in the collaboration network.
    pub collaboration_participation: [f64; 2],
    /// transfer, collaboration.
    pub link_type_shares: [f64; 2],
    pub size_percentiles: Percentiles,
    /// Pearson r of cluster size against publications, raw values.
    pub size_publication_r: Option<f64>,
    /// Same on log-transformed values.
    pub size_publication_r_log: Option<f64>,
    pub roles: Option<RoleDistribution>,
    pub transfer_network: Option<ClusterNetworkStats>,
    pub collaboration_network: Option<ClusterNetworkStats>,
    pub crosstabs: Vec<CrossTab>,
}

/// Fractions of a count vector; all zeros when the total is zero.
pub fn shares<const N: usize>(counts: [usize; N]) -> [f64; N] {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return [0.0; N];
    }
    counts.map(|c| c as f64 / total as f64)
}

fn labels<T: fmt::Display>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn hub_index(h: HubnessKind) -> usize {
    h as usize
}

pub fn field_report(input: &FieldInput) -> FieldReport {
    let clusters = &input.clusters;
    let mut size = [0usize; 3];
    let mut age = [0usize; 4];
    let mut hub = [0usize; 3];
    let mut collab = [0usize; 2];
    let mut gaps = 0;
    let mut size_hub = vec![vec![0u64; 3]; 3];
    let mut small_hubless_age = vec![vec![0u64; 4]];
    let mut collab_size = vec![vec![0u64; 3]; 2];
    let mut collab_age = vec![vec![0u64; 4]; 2];
    let mut size_age = vec![vec![0u64; 4]; 3];
    for c in clusters {
        let s = SizeCategory::of(c.size) as usize;
        let h = hub_index(c.hubness);
        let k = usize::from(!c.in_collaboration);
        size[s] += 1;
        hub[h] += 1;
        collab[k] += 1;
        size_hub[s][h] += 1;
        collab_size[k][s] += 1;
        if let Some(a) = c.age {
            let ai = a.cohort as usize;
            age[ai] += 1;
            gaps += usize::from(a.gap);
            collab_age[k][ai] += 1;
            size_age[s][ai] += 1;
            if s == SizeCategory::Small as usize && c.hubness == HubnessKind::NoHub {
                small_hubless_age[0][ai] += 1;
            }
        }
    }

    let sizes: Vec<f64> = clusters.iter().map(|c| c.size as f64).collect();
    let pubs: Vec<f64> = clusters.iter().map(|c| c.publications as f64).collect();
    let log = |v: &[f64]| v.iter().map(|&x| libm::log(x.max(1.0))).collect::<Vec<_>>();

    let collab_rows = labels(&["collaborating", "non-collaborating"]);
    let crosstabs = vec![
        CrossTab::new("size_x_hubness", labels(&SizeCategory::ALL), labels(&HubnessKind::ALL), size_hub),
        CrossTab::new("size_x_age", labels(&SizeCategory::ALL), labels(&AgeCohort::ALL), size_age),
        CrossTab::new("small_hubless_x_age", labels(&["small no-hub"]), labels(&AgeCohort::ALL), small_hubless_age),
        CrossTab::new("collaborating_x_size", collab_rows.clone(), labels(&SizeCategory::ALL), collab_size),
        CrossTab::new("collaborating_x_age", collab_rows, labels(&AgeCohort::ALL), collab_age),
    ];

    FieldReport {
        field: input.name.clone(),
        cluster_count: clusters.len(),
        size_shares: shares(size),
        age_shares: shares(age),
        age_gap_count: gaps,
        hubness_shares: shares(hub),
        collaboration_participation: shares(collab),
        link_type_shares: shares([input.transfer_links, input.collaboration_links]),
        size_percentiles: Percentiles::of(&sizes),
        size_publication_r: stats::pearson_r(&sizes, &pubs).ok(),
        size_publication_r_log: stats::pearson_r(&log(&sizes), &log(&pubs)).ok(),
        roles: input.roles,
        transfer_network: input.transfer_network,
        collaboration_network: input.collaboration_network,
        crosstabs,
    }
}

/// Associations across fields: field by hubness, plus size by hubness and
/// size by age over the pooled clusters.
pub fn comparative_crosstabs(fields: &[FieldInput]) -> Vec<CrossTab> {
    let names: Vec<String> = fields.iter().map(|f| f.name.clone()).collect();
    let mut field_hub = vec![vec![0u64; 3]; fields.len()];
    let mut size_hub = vec![vec![0u64; 3]; 3];
    let mut size_age = vec![vec![0u64; 4]; 3];
    for (i, f) in fields.iter().enumerate() {
        for c in &f.clusters {
            let s = SizeCategory::of(c.size) as usize;
            field_hub[i][hub_index(c.hubness)] += 1;
            size_hub[s][hub_index(c.hubness)] += 1;
            if let Some(a) = c.age {
                size_age[s][a.cohort as usize] += 1;
            }
        }
    }
    vec![
        CrossTab::new("field_x_hubness", names, labels(&HubnessKind::ALL), field_hub),
        CrossTab::new("pooled_size_x_hubness", labels(&SizeCategory::ALL), labels(&HubnessKind::ALL), size_hub),
        CrossTab::new("pooled_size_x_age", labels(&SizeCategory::ALL), labels(&AgeCohort::ALL), size_age),
    ]
}

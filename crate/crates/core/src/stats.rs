//! Descriptive statistics, Pearson correlation and the Pearson chi-square test.

use alloc::vec::Vec;

use crate::{Error, Result};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Median with midpoint averaging for even lengths. Zero for empty input.
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Percentile `q` in `[0, 1]` with linear interpolation at rank `q (n + 1)`,
/// clamped to the sample range.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => 0.0,
        1 => sorted[0],
        n => {
            let rank = q * (n + 1) as f64;
            if rank <= 1.0 {
                return sorted[0];
            }
            if rank >= n as f64 {
                return sorted[n - 1];
            }
            let lo = libm::floor(rank) as usize;
            let frac = rank - lo as f64;
            sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1])
        }
    }
}

/// Minimum, 10 %, 25 %, median, 75 %, 90 % and maximum of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Percentiles {
    pub min: f64,
    pub p10: f64,
    pub p25: f64,
    pub median: f64,
    pub p75: f64,
    pub p90: f64,
    pub max: f64,
}

impl Percentiles {
    pub fn of(xs: &[f64]) -> Self {
        if xs.is_empty() {
            return Self::default();
        }
        let mut v = xs.to_vec();
        v.sort_by(f64::total_cmp);
        Self {
            min: v[0],
            p10: percentile(&v, 0.10),
            p25: percentile(&v, 0.25),
            median: median(&v),
            p75: percentile(&v, 0.75),
            p90: percentile(&v, 0.90),
            max: v[v.len() - 1],
        }
    }

    pub fn as_array(&self) -> [(&'static str, f64); 7] {
        [
            ("min", self.min),
            ("p10", self.p10),
            ("p25", self.p25),
            ("median", self.median),
            ("p75", self.p75),
            ("p90", self.p90),
            ("max", self.max),
        ]
    }
}

/// Product-moment correlation coefficient.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::SeriesLength(x.len(), y.len()));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateSeries);
    }
    Ok((sxy / (libm::sqrt(sxx) * libm::sqrt(syy))).clamp(-1.0, 1.0))
}

/// Rows by columns of non-negative counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub row_labels: Vec<alloc::string::String>,
    pub col_labels: Vec<alloc::string::String>,
    counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    /// Validates shape (at least 2 x 2, rectangular) and non-zero marginals.
    pub fn new(
        row_labels: Vec<alloc::string::String>,
        col_labels: Vec<alloc::string::String>,
        counts: Vec<Vec<u64>>,
    ) -> Result<Self> {
        let table = Self { row_labels, col_labels, counts };
        table.validate()?;
        Ok(table)
    }

    /// Unlabeled table, rows and columns numbered from 1.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        use alloc::string::ToString;
        let rows = (1..=counts.len()).map(|i| i.to_string()).collect();
        let cols = (1..=counts.first().map_or(0, Vec::len)).map(|i| i.to_string()).collect();
        Self::new(rows, cols, counts)
    }

    fn validate(&self) -> Result<()> {
        let r = self.counts.len();
        let c = self.counts.first().map_or(0, Vec::len);
        if r < 2 || c < 2 {
            return Err(Error::InvalidTable("need at least 2 x 2"));
        }
        if self.counts.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidTable("ragged rows"));
        }
        if self.row_labels.len() != r || self.col_labels.len() != c {
            return Err(Error::InvalidTable("label count does not match shape"));
        }
        if self.row_totals().contains(&0) || self.col_totals().contains(&0) {
            return Err(Error::InvalidTable("zero marginal"));
        }
        Ok(())
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        let c = self.counts.first().map_or(0, Vec::len);
        (0..c).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn total(&self) -> u64 {
        self.row_totals().iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    pub n: u64,
}

/// Pearson chi-square test of independence.
pub fn chi_square(table: &ContingencyTable) -> ChiSquare {
    let rows = table.row_totals();
    let cols = table.col_totals();
    let n = table.total() as f64;
    let mut statistic = 0.0;
    for (i, row) in table.counts().iter().enumerate() {
        for (j, &obs) in row.iter().enumerate() {
            let expected = rows[i] as f64 * cols[j] as f64 / n;
            let d = obs as f64 - expected;
            statistic += d * d / expected;
        }
    }
    let df = ((rows.len() - 1) * (cols.len() - 1)) as u32;
    ChiSquare { statistic, df, p_value: chi_square_sf(statistic, df), n: table.total() }
}

/// Survival function of the chi-square distribution.
pub fn chi_square_sf(x: f64, df: u32) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(df as f64 / 2.0, x / 2.0)
}

const GAMMA_EPS: f64 = 1e-16;
const GAMMA_MAX_ITER: usize = 10_000;

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_continued_fraction(a, x)
    }
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut term = sum;
    for _ in 0..GAMMA_MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * GAMMA_EPS {
            break;
        }
    }
    sum * libm::exp(-x + a * libm::log(x) - libm::lgamma(a))
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
fn gamma_continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < GAMMA_EPS {
            break;
        }
    }
    libm::exp(-x + a * libm::log(x) - libm::lgamma(a)) * h
}

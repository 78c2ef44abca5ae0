use std::collections::BTreeMap;

use aheft_core::stats::{summarize, Summary};
use aheft_core::training::{TheoryConstants, TrajectoryRecord};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryEntry {
    pub n: usize,
    pub l: usize,
    pub sigma_zero: f64,
    pub sigma_crit: f64,
    /// `Σ|c|` of the Hamiltonian, used as `B`.
    pub b: f64,
    #[serde(flatten)]
    pub constants: TheoryConstants,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub seed: usize,
    /// Sweep point, e.g. `"N=4,L=4,method=adaptive"`.
    pub key: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trajectory: Option<TrajectoryRecord>,
    pub finals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub key: String,
    pub metric: String,
    #[serde(flatten)]
    pub summary: Summary,
}

/// Welch comparison between two keys on one metric. Infinite values are
/// written as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestEntry {
    pub name: String,
    pub metric: String,
    pub a: String,
    pub b: String,
    pub t_stat: Option<f64>,
    pub dof: f64,
    pub log10_p: f64,
    pub p_floor_applied: bool,
    pub cohens_d: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Aggregates {
    pub summaries: Vec<SummaryEntry>,
    pub tests: Vec<TestEntry>,
    /// Derived scalars such as regression slopes.
    pub scalars: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub yerr: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub start_time: String,
    pub duration_s: f64,
    pub version: String,
    pub workers: usize,
    /// Free-form notes (estimator conventions, reference constants).
    pub notes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema_version: String,
    pub experiment_id: String,
    pub config: ExperimentConfig,
    pub theory_constants: Vec<TheoryEntry>,
    pub per_seed: Vec<SeedRecord>,
    pub aggregates: Aggregates,
    pub series: Vec<Series>,
    pub meta: Meta,
}

impl ExperimentResult {
    pub fn summary(&self, key: &str, metric: &str) -> Option<&Summary> {
        self.aggregates
            .summaries
            .iter()
            .find(|s| s.key == key && s.metric == metric)
            .map(|s| &s.summary)
    }

    /// Values of `metric` for `key`, in seed order.
    pub fn values(&self, key: &str, metric: &str) -> Vec<f64> {
        self.per_seed
            .iter()
            .filter(|r| r.key == key)
            .filter_map(|r| r.finals.get(metric).copied())
            .collect()
    }

    pub fn records(&self, key: &str) -> impl Iterator<Item = &SeedRecord> {
        let key = key.to_string();
        self.per_seed.iter().filter(move |r| r.key == key)
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.aggregates.scalars.get(name).copied()
    }

    pub fn test(&self, name: &str) -> Option<&TestEntry> {
        self.aggregates.tests.iter().find(|t| t.name == name)
    }

    /// The document without its runtime-metadata block.
    pub fn without_meta(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("result serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("meta");
        }
        v
    }
}

/// Summaries of every `(key, metric)` pair present in `records`, ordered by
/// key and metric. Values are taken in seed order, so any permutation of
/// `records` gives the same result.
pub fn summarize_records(records: &[SeedRecord]) -> Vec<SummaryEntry> {
    let mut sorted: Vec<&SeedRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.seed.cmp(&b.seed).then_with(|| a.key.cmp(&b.key)));
    let mut groups: BTreeMap<(&str, &str), Vec<f64>> = BTreeMap::new();
    for r in sorted {
        for (m, &v) in &r.finals {
            groups.entry((&r.key, m)).or_default().push(v);
        }
    }
    groups
        .into_iter()
        .filter_map(|((key, metric), xs)| {
            summarize(&xs).ok().map(|summary| SummaryEntry { key: key.into(), metric: metric.into(), summary })
        })
        .collect()
}

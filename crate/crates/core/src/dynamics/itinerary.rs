use serde::Serialize;

use super::orbit::{iterate_orbit, log10_distance, render_points, Orbit, OrbitScalar};
use crate::algebra::BirationalMap;
use crate::error::Result;
use crate::geometry::{Submersion, SubmersionKind};

/// Leaf labels `π(points[k])` for each registered submersion.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafItinerary<S> {
    pub orbit: Orbit<S>,
    /// `labels[s][k]` is the label of step `k` under submersion `s`.
    pub labels: Vec<Vec<Vec<S>>>,
    pub kinds: Vec<SubmersionKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelSummary {
    pub kind: SubmersionKind,
    pub dim: usize,
    /// Smallest `q` with `label[k + q] = label[k]` along the whole orbit.
    pub period: Option<usize>,
    pub distinct: usize,
    /// `log10` of the largest relative deviation from the first label.
    pub max_drift_log10: f64,
    pub description: String,
}

fn kind_name(kind: SubmersionKind) -> &'static str {
    match kind {
        SubmersionKind::Null => "null",
        SubmersionKind::Casimir => "symplectic",
        SubmersionKind::Projection => "base",
    }
}

impl<S: OrbitScalar> LeafItinerary<S> {
    /// Summaries of every label sequence. Labels closer than `10^tol_log10`
    /// count as equal; pass `-inf` for exact equality.
    pub fn summaries(&self, tol_log10: f64) -> Vec<LabelSummary> {
        let same = |a: &[S], b: &[S]| log10_distance(a, b) < tol_log10 || (tol_log10.is_infinite() && a == b);
        self.labels
            .iter()
            .zip(&self.kinds)
            .map(|(labels, &kind)| {
                let n = labels.len();
                let period = (1..n).find(|&q| (0..n - q).all(|k| same(&labels[k + q], &labels[k])));
                let window = period.unwrap_or(n);
                let mut distinct: Vec<&Vec<S>> = Vec::new();
                for l in &labels[..window] {
                    if !distinct.iter().any(|d| same(d, l)) {
                        distinct.push(l);
                    }
                }
                let max_drift_log10 = labels
                    .iter()
                    .map(|l| log10_distance(l, &labels[0]))
                    .fold(f64::NEG_INFINITY, f64::max);
                let name = kind_name(kind);
                let description = match period {
                    Some(1) => format!("stays in a single {name} leaf"),
                    Some(q) => format!("circulates between {q} distinct {name} leaves"),
                    None => format!("visits {} distinct {name} leaves without returning", distinct.len()),
                };
                LabelSummary {
                    kind,
                    dim: labels.first().map_or(0, Vec::len),
                    period,
                    distinct: distinct.len(),
                    max_drift_log10,
                    description,
                }
            })
            .collect()
    }

    pub fn to_json(&self, tol_log10: f64) -> serde_json::Value {
        serde_json::json!({
            "schema": crate::io::SCHEMA_VERSION,
            "mode": self.orbit.mode(),
            "points": render_points(&self.orbit.points),
            "labels": self.labels.iter().map(|l| render_points(l)).collect::<Vec<_>>(),
            "summaries": self.summaries(tol_log10),
        })
    }
}

pub fn leaf_itinerary<S: OrbitScalar>(
    phi: &BirationalMap,
    submersions: &[Submersion],
    x0: &[S],
    n: usize,
) -> Result<LeafItinerary<S>> {
    let orbit = iterate_orbit(phi, x0, n)?;
    let labels = submersions
        .iter()
        .map(|s| orbit.points.iter().map(|p| s.map.evaluate(p)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(LeafItinerary {
        orbit,
        labels,
        kinds: submersions.iter().map(|s| s.kind).collect(),
    })
}

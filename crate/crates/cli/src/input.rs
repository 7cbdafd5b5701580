//! Resolution of command-line references to matrices, maps and submersions.
//!
//! A reference is either a path to a JSON file or `fixture:NAME`, with
//! `fixture:NAME#K` picking the `K`-th matrix (1-based) of a list fixture.

use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use cluster_reduce::algebra::{parse_rational, BirationalMap, Real};
use cluster_reduce::fixtures::{fixture, Fixture, FixtureValue};
use cluster_reduce::geometry::{ReducedSystemRepr, Submersion, SubmersionRepr};
use cluster_reduce::lattice::IntMatrix;
use cluster_reduce::quiver::{cluster_map, detect_period, DEFAULT_MAX_PERIOD};
use num_rational::BigRational;
use serde_json::Value;

enum Source {
    Fixture { name: String, index: Option<usize> },
    File(Value),
}

fn resolve(reference: &str) -> Result<Source> {
    if let Some(rest) = reference.strip_prefix("fixture:") {
        let (name, index) = match rest.split_once('#') {
            Some((n, k)) => {
                let k: usize = k.parse().with_context(|| format!("bad fixture index in {reference:?}"))?;
                if k == 0 {
                    bail!("fixture indices start at 1");
                }
                (n, Some(k))
            }
            None => (rest, None),
        };
        return Ok(Source::Fixture {
            name: name.to_string(),
            index,
        });
    }
    let text = fs::read_to_string(reference).with_context(|| format!("cannot read {reference}"))?;
    let value = serde_json::from_str(&text).with_context(|| format!("{reference} is not valid JSON"))?;
    Ok(Source::File(value))
}

fn matrix_from_fixture(f: Fixture, index: Option<usize>) -> Result<IntMatrix> {
    match (f.value, index) {
        (FixtureValue::Matrix { matrix }, None | Some(1)) => Ok(matrix),
        (FixtureValue::MatrixList { matrices }, Some(k)) => matrices
            .into_iter()
            .nth(k - 1)
            .ok_or_else(|| anyhow!("fixture {} has no matrix #{k}", f.name)),
        (FixtureValue::MatrixList { matrices }, None) => {
            bail!("fixture {} holds {} matrices; pick one with #K", f.name, matrices.len())
        }
        _ => bail!("fixture {} is not a matrix", f.name),
    }
}

fn int_rows(value: &Value) -> Result<Vec<Vec<i64>>> {
    Ok(serde_json::from_value(value.clone())?)
}

pub fn matrix(reference: &str) -> Result<IntMatrix> {
    match resolve(reference)? {
        Source::Fixture { name, index } => matrix_from_fixture(fixture(&name)?, index),
        Source::File(v) if v.is_array() => Ok(IntMatrix::from_rows(&int_rows(&v)?)),
        Source::File(v) if v.get("type").is_some() => matrix_from_fixture(serde_json::from_value(v)?, None),
        Source::File(v) => serde_json::from_value(v).with_context(|| format!("{reference} is not a matrix")),
    }
}

/// Exponent rows, from an exponents fixture or a JSON array of integer rows.
pub fn rows(reference: &str) -> Result<Vec<Vec<i64>>> {
    let value = match resolve(reference)? {
        Source::Fixture { name, .. } => serde_json::to_value(fixture(&name)?)?,
        Source::File(v) => v,
    };
    if value.is_array() {
        return int_rows(&value);
    }
    match serde_json::from_value::<Fixture>(value)?.value {
        FixtureValue::Exponents { rows } => Ok(rows),
        _ => bail!("{reference} does not hold exponent rows"),
    }
}

/// A self-map: a map document, the `psi` of a reduced system, or the
/// cluster map of a quiver fixture.
pub fn map(reference: &str) -> Result<BirationalMap> {
    match resolve(reference)? {
        Source::Fixture { name, index } => {
            let b = matrix_from_fixture(fixture(&name)?, index)?;
            let cert = detect_period(&b, DEFAULT_MAX_PERIOD)?
                .ok_or_else(|| anyhow!("fixture {name} is not mutation-periodic"))?;
            Ok(cluster_map(&b, &cert)?)
        }
        Source::File(v) => {
            if v.get("psi").is_some() {
                let r: ReducedSystemRepr = serde_json::from_value(v)?;
                return Ok(BirationalMap::parse(&r.psi, None)?);
            }
            serde_json::from_value(v).with_context(|| format!("{reference} is not a map"))
        }
    }
}

/// A submersion document, or the `pi` of a reduced system.
pub fn submersion(reference: &str, dim_in: usize) -> Result<Submersion> {
    let v = match resolve(reference)? {
        Source::File(v) => v,
        Source::Fixture { .. } => bail!("submersions are read from files written by `reduce`"),
    };
    let repr: SubmersionRepr = match v.get("pi") {
        Some(pi) => serde_json::from_value(pi.clone())?,
        None => serde_json::from_value(v).with_context(|| format!("{reference} is not a submersion"))?,
    };
    Ok(repr.to_submersion(dim_in)?)
}

pub fn exact_point(text: &str) -> Result<Vec<BigRational>> {
    text.split(',')
        .map(|t| parse_rational(t).ok_or_else(|| anyhow!("not a rational number: {:?}", t.trim())))
        .collect()
}

pub fn float_point(text: &str, digits: usize) -> Result<Vec<Real>> {
    Ok(exact_point(text)?.iter().map(|q| Real::with_digits(q, digits)).collect())
}

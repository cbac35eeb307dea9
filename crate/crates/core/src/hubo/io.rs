//! JSON instance files.
//!
//! ```json
//! {
//!   "n": 3,
//!   "seed": 7,
//!   "metadata": { ... },
//!   "linear": [[0, 0.25], [2, -1.0]],
//!   "quadratic": [[0, 1, 0.5]],
//!   "cubic": [[0, 1, 2, -0.75]]
//! }
//! ```
//!
//! `seed` and `metadata` are optional provenance. On parse, term indices
//! written in any order are sorted, and distinct permutations of the same
//! index set are summed. Repeating the identical index tuple twice, repeating
//! an index inside one term, or referencing an index `>= n` is an error.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::generate::InstanceSpec;
use super::problem::HuboProblem;
use crate::error::{Error, Result};

/// Provenance recorded by the generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMetadata {
    pub generator: InstanceSpec,
    /// Free-form remark, e.g. that the coefficient range is a default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A problem plus optional provenance, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDocument {
    pub problem: HuboProblem,
    pub seed: Option<u64>,
    pub metadata: Option<InstanceMetadata>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    n: usize,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    metadata: Option<InstanceMetadata>,
    #[serde(default)]
    linear: Vec<(usize, f64)>,
    #[serde(default)]
    quadratic: Vec<(usize, usize, f64)>,
    #[serde(default)]
    cubic: Vec<(usize, usize, usize, f64)>,
}

impl InstanceDocument {
    pub fn new(problem: HuboProblem) -> Self {
        Self {
            problem,
            seed: None,
            metadata: None,
        }
    }

    pub fn generated(problem: HuboProblem, spec: &InstanceSpec) -> Self {
        Self {
            problem,
            seed: Some(spec.seed),
            metadata: Some(InstanceMetadata {
                generator: spec.clone(),
                note: Some(
                    "coefficient distribution is the generator default; \
                     the reference instances do not specify one"
                        .into(),
                ),
            }),
        }
    }
}

/// Accumulates one term, enforcing the duplicate/permutation rules.
fn insert_term<K: Ord + Copy>(
    map: &mut BTreeMap<K, (f64, Vec<Vec<usize>>)>,
    key: K,
    written: Vec<usize>,
    c: f64,
) -> Result<()> {
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert((c, vec![written]));
        }
        Entry::Occupied(mut o) => {
            let (sum, seen) = o.get_mut();
            if seen.contains(&written) {
                return Err(Error::Parse(format!("duplicate term {written:?}")));
            }
            *sum += c;
            seen.push(written);
        }
    }
    Ok(())
}

fn canonical(n: usize, written: &[usize], c: f64) -> Result<Vec<usize>> {
    if !c.is_finite() {
        return Err(Error::Parse(format!(
            "non-finite coefficient in {written:?}"
        )));
    }
    if let Some(&bad) = written.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, n });
    }
    let mut idx = written.to_vec();
    idx.sort_unstable();
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse(format!("repeated index in term {written:?}")));
    }
    Ok(idx)
}

/// Parses an instance document.
pub fn parse(text: &str) -> Result<InstanceDocument> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = raw.n;

    let mut lin = BTreeMap::new();
    for (i, c) in raw.linear {
        let idx = canonical(n, &[i], c)?;
        insert_term(&mut lin, idx[0], vec![i], c)?;
    }
    let mut quad = BTreeMap::new();
    for (i, j, c) in raw.quadratic {
        let idx = canonical(n, &[i, j], c)?;
        insert_term(&mut quad, (idx[0], idx[1]), vec![i, j], c)?;
    }
    let mut cub = BTreeMap::new();
    for (i, j, k, c) in raw.cubic {
        let idx = canonical(n, &[i, j, k], c)?;
        insert_term(&mut cub, (idx[0], idx[1], idx[2]), vec![i, j, k], c)?;
    }

    let problem = HuboProblem::new(
        n,
        lin.into_iter().map(|(k, (c, _))| (k, c)).collect(),
        quad.into_iter().map(|(k, (c, _))| (k, c)).collect(),
        cub.into_iter().map(|(k, (c, _))| (k, c)).collect(),
    )?;
    Ok(InstanceDocument {
        problem,
        seed: raw.seed,
        metadata: raw.metadata,
    })
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serialises")
}

fn write_terms(out: &mut String, name: &str, rows: Vec<String>, last: bool) {
    if rows.is_empty() {
        let _ = write!(out, "  \"{name}\": []");
    } else {
        let _ = writeln!(out, "  \"{name}\": [");
        let body: Vec<String> = rows.into_iter().map(|r| format!("    {r}")).collect();
        out.push_str(&body.join(",\n"));
        out.push_str("\n  ]");
    }
    out.push_str(if last { "\n" } else { ",\n" });
}

/// Serialises a document, one term per line. Coefficients are written in
/// shortest round-trip form, so `parse(serialize(d)) == d`.
pub fn serialize(doc: &InstanceDocument) -> String {
    let p = &doc.problem;
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"n\": {},", p.n());
    if let Some(seed) = doc.seed {
        let _ = writeln!(out, "  \"seed\": {seed},");
    }
    if let Some(meta) = &doc.metadata {
        let _ = writeln!(out, "  \"metadata\": {},", json(meta));
    }
    write_terms(
        &mut out,
        "linear",
        p.linear().iter().map(|&(i, c)| json(&(i, c))).collect(),
        false,
    );
    write_terms(
        &mut out,
        "quadratic",
        p.quadratic()
            .iter()
            .map(|&([i, j], c)| json(&(i, j, c)))
            .collect(),
        false,
    );
    write_terms(
        &mut out,
        "cubic",
        p.cubic()
            .iter()
            .map(|&([i, j, k], c)| json(&(i, j, k, c)))
            .collect(),
        true,
    );
    out.push_str("}\n");
    out
}

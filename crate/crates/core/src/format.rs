//! Poset and result files.
//!
//! A poset file is either JSON `{"n": 4, "relations": [[0, 1], [1, 3]]}` or an
//! edge list whose first line is `n m` followed by `m` lines `u v`. Each pair
//! puts `u` below `v`; the closure is taken on load.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::driver::{Branch, ExtractionResult};
use crate::error::{Error, Result};
use crate::multiorder::{HomogeneousResult, Relation};
use crate::poset::{ElementId, Poset};
use crate::real::Real;

/// Largest integer every JSON reader holds exactly.
const EXACT_LIMIT: u64 = 1 << 53;

#[derive(Debug, Serialize, Deserialize)]
struct PosetJson {
    n: usize,
    relations: Vec<[ElementId; 2]>,
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    if text.trim_start().starts_with('{') {
        let doc: PosetJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let pairs: Vec<(ElementId, ElementId)> =
            doc.relations.iter().map(|&[u, v]| (u, v)).collect();
        return Poset::new(doc.n, &pairs);
    }
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty());
    let numbers = |(i, line): (usize, &str)| -> Result<(usize, usize)> {
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
            _ => Err(Error::Parse(format!(
                "line {}: expected two nonnegative integers",
                i + 1
            ))),
        }
    };
    let (n, m) = numbers(
        lines
            .next()
            .ok_or_else(|| Error::Parse("empty file".into()))?,
    )?;
    let pairs = lines.map(numbers).collect::<Result<Vec<_>>>()?;
    if pairs.len() != m {
        return Err(Error::Parse(format!(
            "header promises {m} relations, found {}",
            pairs.len()
        )));
    }
    Poset::new(n, &pairs)
}

/// JSON poset file listing the cover relations.
pub fn poset_to_json(poset: &Poset) -> String {
    let doc = PosetJson {
        n: poset.len(),
        relations: poset.covers().into_iter().map(|(u, v)| [u, v]).collect(),
    };
    let mut out = serde_json::to_string(&doc).expect("plain data serializes");
    out.push('\n');
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub l: Option<usize>,
    pub gamma: Option<Value>,
    pub lambda: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEntry {
    pub index: usize,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    /// `set_chain` or `incomparable`.
    pub kind: String,
    /// `ascending` or `descending`, chains only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    pub sets: Vec<Vec<ElementId>>,
    pub params: Params,
    pub guarantee: Option<f64>,
    pub achieved: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<OrderEntry>>,
    /// Per-level set counts `k_1..k_h` of a multi-order run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<Value>>,
}

impl ResultFile {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plain data serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<ResultFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Integers up to 2^53 as numbers, larger ones as decimal strings.
pub fn json_integer(v: &BigInt) -> Value {
    match u64::try_from(v) {
        Ok(u) if u <= EXACT_LIMIT => Value::from(u),
        _ => Value::String(v.to_string()),
    }
}

/// Exact integers via [`json_integer`], other rationals as `"p/q"`, floats
/// as numbers.
pub fn json_real(r: &Real) -> Value {
    match r {
        Real::Exact(q) if q.is_integer() => json_integer(&q.to_integer()),
        Real::Exact(q) => Value::String(q.to_string()),
        Real::Float(f) => Value::from(*f),
    }
}

pub fn extraction_file(result: &ExtractionResult) -> ResultFile {
    let (kind, direction) = match result.branch {
        Branch::DescendingSetChain => ("set_chain", Some("descending".to_string())),
        Branch::TotallyIncomparable => ("incomparable", None),
    };
    ResultFile {
        kind: kind.into(),
        direction,
        sets: result.sets.sets.clone(),
        params: Params {
            l: Some(result.ell),
            gamma: result.gamma.as_ref().map(json_real),
            lambda: result.lambda.as_ref().map(json_real),
        },
        guarantee: result.guaranteed_size,
        achieved: result.achieved_size,
        orders: None,
        schedule: None,
    }
}

pub fn homogeneous_file(result: &HomogeneousResult, schedule: Vec<Value>) -> ResultFile {
    let (kind, direction) = match result.relations[0] {
        Relation::Ascending => ("set_chain", Some("ascending".to_string())),
        Relation::Descending => ("set_chain", Some("descending".to_string())),
        Relation::Incomparable => ("incomparable", None),
    };
    ResultFile {
        kind: kind.into(),
        direction,
        sets: result.sets.sets.clone(),
        params: Params {
            l: result.levels.first().map(|l| l.ell),
            gamma: None,
            lambda: None,
        },
        guarantee: None,
        achieved: result.sets.min_size(),
        orders: Some(
            result
                .relations
                .iter()
                .enumerate()
                .map(|(index, r)| OrderEntry {
                    index,
                    relation: r.name().into(),
                })
                .collect(),
        ),
        schedule: Some(schedule),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_and_json_agree() {
        let a = parse_poset("3 2\n0 1\n1 2\n").unwrap();
        let b = parse_poset(r#"{"n": 3, "relations": [[0, 1], [1, 2]]}"#).unwrap();
        assert_eq!(a, b);
        assert!(a.less(0, 2));
        assert_eq!(parse_poset(&poset_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_poset("3 2\n0 1\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_poset("2 1\n0 x\n"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_poset("2 2\n0 1\n1 0\n"),
            Err(Error::Cycle { .. })
        ));
        assert!(matches!(
            parse_poset("2 1\n0 5\n"),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn large_integers_become_strings() {
        assert_eq!(json_integer(&BigInt::from(12u64)), Value::from(12u64));
        let big = BigInt::from(1u64 << 53) + 1;
        assert_eq!(json_integer(&big), Value::String("9007199254740993".into()));
        assert_eq!(json_real(&Real::ratio(15, 8)), Value::String("15/8".into()));
    }
}

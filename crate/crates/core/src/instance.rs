//! JSON instance files.
//!
//! ```json
//! {
//!   "name": "Z4",
//!   "m": 2,
//!   "n": 2,
//!   "carrier": ["0", "1", "2", "3"],
//!   "zero": "0",
//!   "one": "1",
//!   "h": [{"args": ["0", "0"], "out": ["0"]}, ...],
//!   "k": [{"args": ["0", "0"], "out": "0"}, ...],
//!   "ideals": {"Q": ["0", "2"]},
//!   "expansions": {"half": [{"ideal": ["0"], "image": ["0", "2"]}, ...]}
//! }
//! ```
//!
//! Every sorted tuple must appear exactly once in `h` and `k`; argument order
//! inside an entry is free. `ideals` and `expansions` are optional.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expansion::{validate_expansion, Expansion, DELTA0, DELTA1, DELTA_R};
use crate::ideal::require_ideal;
use crate::ring::{HyperOpTable, Hyperring, HyperringTable, NaryOpTable};
use crate::subset::Subset;
use crate::Elem;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    name: Option<String>,
    m: usize,
    n: usize,
    carrier: Vec<String>,
    zero: String,
    #[serde(default)]
    one: Option<String>,
    h: Vec<RawH>,
    k: Vec<RawK>,
    #[serde(default)]
    ideals: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    expansions: BTreeMap<String, Vec<RawPair>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawH {
    args: Vec<String>,
    out: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawK {
    args: Vec<String>,
    out: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    ideal: Vec<String>,
    image: Vec<String>,
}

/// A parsed file whose tables have not been axiom-checked yet.
#[derive(Debug, Clone)]
pub struct TableFile {
    pub table: HyperringTable,
    pub ideals: Vec<(String, Subset)>,
    pub expansions: Vec<(String, Vec<(Subset, Subset)>)>,
}

/// A loaded instance: validated ring, named subsets and validated
/// expansions from the file.
#[derive(Debug)]
pub struct Instance {
    pub ring: Hyperring,
    pub ideals: Vec<(String, Subset)>,
    pub expansions: Vec<Expansion>,
}

struct Labels<'a> {
    index: HashMap<&'a str, Elem>,
}

impl<'a> Labels<'a> {
    fn get(&self, field: &str, label: &str) -> Result<Elem> {
        self.index.get(label).copied().ok_or_else(|| Error::load(field, format!("unknown label {label:?}")))
    }

    fn set(&self, field: &str, size: usize, labels: &[String]) -> Result<Subset> {
        let mut s = Subset::empty(size);
        for l in labels {
            s.insert(self.get(field, l)?);
        }
        Ok(s)
    }

    fn tuple(&self, field: &str, arity: usize, labels: &[String]) -> Result<Vec<Elem>> {
        if labels.len() != arity {
            return Err(Error::load(field, format!("expected {arity} arguments, got {}", labels.len())));
        }
        let mut t = labels.iter().map(|l| self.get(field, l)).collect::<Result<Vec<_>>>()?;
        t.sort_unstable();
        Ok(t)
    }
}

fn fill<T: Clone>(field: &str, entries: Vec<(Vec<Elem>, T)>, carrier: usize, arity: usize) -> Result<HashMap<Vec<Elem>, T>> {
    let mut map = HashMap::with_capacity(entries.len());
    for (i, (args, out)) in entries.into_iter().enumerate() {
        if map.insert(args.clone(), out).is_some() {
            return Err(Error::load(format!("{field}[{i}]"), format!("tuple {args:?} listed twice")));
        }
    }
    let mut missing = None;
    crate::ring::for_each_multiset(carrier, arity, |t| {
        if missing.is_none() && !map.contains_key(t) {
            missing = Some(t.to_vec());
        }
    });
    if let Some(t) = missing {
        return Err(Error::load(field, format!("missing entry for sorted tuple {t:?}")));
    }
    Ok(map)
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

/// Parses instance text without checking the axioms.
pub fn parse_table(text: &str) -> Result<TableFile> {
    let raw: RawFile = serde_json::from_str(text).map_err(parse_error)?;
    if raw.m < 2 || raw.n < 2 {
        return Err(Error::load("m/n", "arities must be at least 2"));
    }
    let size = raw.carrier.len();
    if size == 0 {
        return Err(Error::load("carrier", "carrier is empty"));
    }
    let mut index = HashMap::new();
    for (i, l) in raw.carrier.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(Error::load("carrier", format!("duplicate label {l:?}")));
        }
    }
    let labels = Labels { index };
    let zero = labels.get("zero", &raw.zero)?;
    let one = raw.one.as_deref().map(|o| labels.get("one", o)).transpose()?;

    let h_entries = raw
        .h
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let field = format!("h[{i}]");
            let args = labels.tuple(&field, raw.m, &e.args)?;
            let out = labels.set(&field, size, &e.out)?;
            if out.is_empty() {
                return Err(Error::load(field, "empty output"));
            }
            Ok((args, out))
        })
        .collect::<Result<Vec<_>>>()?;
    let k_entries = raw
        .k
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let field = format!("k[{i}]");
            Ok((labels.tuple(&field, raw.n, &e.args)?, labels.get(&field, &e.out)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let h_map = fill("h", h_entries, size, raw.m)?;
    let k_map = fill("k", k_entries, size, raw.n)?;
    let h = HyperOpTable::from_fn(size, raw.m, |t| h_map[t].clone());
    let k = NaryOpTable::from_fn(size, raw.n, |t| k_map[t]);
    let table = HyperringTable::new(raw.name.unwrap_or_else(|| "unnamed".into()), raw.carrier.clone(), h, k, zero, one)?;

    let ideals = raw
        .ideals
        .iter()
        .map(|(name, ls)| Ok((name.clone(), labels.set(&format!("ideals.{name}"), size, ls)?)))
        .collect::<Result<Vec<_>>>()?;
    let expansions = raw
        .expansions
        .iter()
        .map(|(name, pairs)| {
            if [DELTA0, DELTA1, DELTA_R].contains(&name.as_str()) {
                return Err(Error::load(format!("expansions.{name}"), "name is reserved for a built-in"));
            }
            let field = format!("expansions.{name}");
            let pairs = pairs
                .iter()
                .map(|p| Ok((labels.set(&field, size, &p.ideal)?, labels.set(&field, size, &p.image)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok((name.clone(), pairs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableFile { table, ideals, expansions })
}

impl TableFile {
    /// Checks the axioms, the named ideals and the expansion tables.
    pub fn into_instance(self) -> Result<Instance> {
        let ring = self.table.into_validated()?;
        for (name, s) in &self.ideals {
            require_ideal(&ring, s).map_err(|e| Error::load(format!("ideals.{name}"), e.to_string()))?;
        }
        let expansions = self
            .expansions
            .iter()
            .map(|(name, pairs)| {
                let d = Expansion::from_pairs(&ring, name, pairs)?;
                let report = validate_expansion(&d);
                if !report.verdict {
                    let detail = report.witness.map(|w| w.detail).unwrap_or_default();
                    return Err(Error::Expansion { name: name.clone(), reason: detail });
                }
                Ok(d)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance { ring, ideals: self.ideals, expansions })
    }
}

pub fn read_table(path: &Path) -> Result<TableFile> {
    parse_table(&std::fs::read_to_string(path)?)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_table(text)?.into_instance()
}

pub fn load(path: &Path) -> Result<Instance> {
    read_table(path)?.into_instance()
}

impl Instance {
    pub fn ideal(&self, name: &str) -> Option<&Subset> {
        self.ideals.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    /// A built-in by its reserved name, or an expansion defined in the file.
    pub fn expansion(&self, name: &str) -> Result<Expansion> {
        if let Some(d) = self.expansions.iter().find(|d| d.name() == name) {
            return Ok(d.clone());
        }
        Expansion::builtin(name, &self.ring)
    }

    /// Resolves a named ideal, or a comma-separated label list.
    pub fn resolve_subset(&self, text: &str) -> Result<Subset> {
        if let Some(s) = self.ideal(text) {
            return Ok(s.clone());
        }
        let mut s = self.ring.empty_set();
        for l in text.split(',').map(str::trim).filter(|l| !l.is_empty()) {
            let e = self.ring.elem(l).ok_or_else(|| Error::load("ideal", format!("unknown label or ideal name {l:?}")))?;
            s.insert(e);
        }
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        let extras = Extras { ideals: &self.ideals, expansions: &self.expansions };
        write_json(&self.ring, Some(extras))
    }
}

struct Extras<'a> {
    ideals: &'a [(String, Subset)],
    expansions: &'a [Expansion],
}

fn quoted(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn label_list(t: &HyperringTable, elems: impl IntoIterator<Item = Elem>) -> String {
    let parts: Vec<String> = elems.into_iter().map(|e| quoted(t.label(e))).collect();
    format!("[{}]", parts.join(", "))
}

/// Serializes tables in the instance format, one table entry per line.
pub fn table_to_json(t: &HyperringTable) -> String {
    write_json(t, None)
}

fn write_json(t: &HyperringTable, extras: Option<Extras<'_>>) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"name\": {},", quoted(&t.name));
    let _ = writeln!(s, "  \"m\": {},", t.m());
    let _ = writeln!(s, "  \"n\": {},", t.n());
    let _ = writeln!(s, "  \"carrier\": {},", label_list(t, 0..t.size()));
    let _ = writeln!(s, "  \"zero\": {},", quoted(t.label(t.zero())));
    if let Some(o) = t.one() {
        let _ = writeln!(s, "  \"one\": {},", quoted(t.label(o)));
    }
    let h: Vec<String> = t
        .h_table()
        .entries()
        .into_iter()
        .map(|(args, out)| format!("    {{\"args\": {}, \"out\": {}}}", label_list(t, args), label_list(t, out.iter())))
        .collect();
    let _ = writeln!(s, "  \"h\": [\n{}\n  ],", h.join(",\n"));
    let k: Vec<String> = t
        .k_table()
        .entries()
        .into_iter()
        .map(|(args, out)| format!("    {{\"args\": {}, \"out\": {}}}", label_list(t, args), quoted(t.label(out))))
        .collect();
    let _ = write!(s, "  \"k\": [\n{}\n  ]", k.join(",\n"));
    if let Some(x) = extras {
        if !x.ideals.is_empty() {
            let items: Vec<String> = x
                .ideals
                .iter()
                .map(|(name, set)| format!("    {}: {}", quoted(name), label_list(t, set.iter())))
                .collect();
            let _ = write!(s, ",\n  \"ideals\": {{\n{}\n  }}", items.join(",\n"));
        }
        if !x.expansions.is_empty() {
            let items: Vec<String> = x
                .expansions
                .iter()
                .map(|d| {
                    let pairs: Vec<String> = d
                        .pairs()
                        .map(|(i, img)| {
                            format!("      {{\"ideal\": {}, \"image\": {}}}", label_list(t, i.iter()), label_list(t, img.iter()))
                        })
                        .collect();
                    format!("    {}: [\n{}\n    ]", quoted(d.name()), pairs.join(",\n"))
                })
                .collect();
            let _ = write!(s, ",\n  \"expansions\": {{\n{}\n  }}", items.join(",\n"));
        }
    }
    s.push_str("\n}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn same_tables(a: &HyperringTable, b: &HyperringTable) -> bool {
        a.labels() == b.labels()
            && a.m() == b.m()
            && a.n() == b.n()
            && a.zero() == b.zero()
            && a.one() == b.one()
            && a.h_table().entries() == b.h_table().entries()
            && a.k_table().entries() == b.k_table().entries()
    }

    #[test]
    fn round_trip_every_builder() {
        for t in fixtures::builtin_corpus() {
            let text = table_to_json(&t);
            let back = parse_table(&text).unwrap().table;
            assert!(same_tables(&t, &back), "{}", t.name);
            assert_eq!(back.name, t.name);
            assert_eq!(table_to_json(&back), text);
        }
    }

    #[test]
    fn argument_order_is_free() {
        let text = r#"{"m":2,"n":2,"carrier":["0","1"],"zero":"0","one":"1",
            "h":[{"args":["0","0"],"out":["0"]},{"args":["1","0"],"out":["1"]},{"args":["1","1"],"out":["0","1"]}],
            "k":[{"args":["0","0"],"out":"0"},{"args":["1","0"],"out":"0"},{"args":["1","1"],"out":"1"}]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.ring.size(), 2);
        assert_eq!(inst.ring.name, "unnamed");
    }

    #[test]
    fn missing_and_duplicate_entries() {
        let missing = r#"{"m":2,"n":2,"carrier":["0","1"],"zero":"0",
            "h":[{"args":["0","0"],"out":["0"]},{"args":["0","1"],"out":["1"]}],
            "k":[{"args":["0","0"],"out":"0"},{"args":["0","1"],"out":"0"},{"args":["1","1"],"out":"1"}]}"#;
        let err = parse_table(missing).unwrap_err();
        assert!(matches!(&err, Error::Load { field, .. } if field == "h"), "{err}");
        let dup = missing.replace(r#"{"args":["0","1"],"out":["1"]}"#, r#"{"args":["0","1"],"out":["1"]},{"args":["1","0"],"out":["1"]}"#);
        let err = parse_table(&dup).unwrap_err();
        assert!(matches!(&err, Error::Load { field, .. } if field == "h[2]"), "{err}");
    }

    #[test]
    fn truncated_file_reports_position() {
        let text = table_to_json(&fixtures::zn(4));
        let cut = &text[..text.len() / 2];
        match parse_table(cut).unwrap_err() {
            Error::Parse { line, .. } => assert!(line > 1),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn named_ideals_and_expansions() {
        let z4 = fixtures::zn(4).into_validated().unwrap();
        let d1 = Expansion::delta1(&z4).unwrap().renamed("rad");
        let inst = Instance { ideals: vec![("Q".into(), z4.set_of([0, 2]))], expansions: vec![d1], ring: z4 };
        let text = inst.to_json();
        let back = parse_instance(&text).unwrap();
        assert_eq!(back.ideal("Q").unwrap().to_vec(), vec![0, 2]);
        let rad = back.expansion("rad").unwrap();
        assert_eq!(rad.apply(&back.ring.zero_set()).unwrap().to_vec(), vec![0, 2]);
        assert_eq!(back.resolve_subset("0, 2").unwrap().to_vec(), vec![0, 2]);
        assert!(back.expansion("delta9").is_err());
        assert_eq!(back.to_json(), text);

        let non_monotone = text.replace(r#"{"ideal": ["0"], "image": ["0", "2"]}"#, r#"{"ideal": ["0"], "image": ["0", "1", "2", "3"]}"#);
        assert!(matches!(parse_instance(&non_monotone), Err(Error::Expansion { .. })));
    }

    #[test]
    fn non_ideal_named_subset_is_rejected() {
        let mut text = table_to_json(&fixtures::zn(4));
        text.truncate(text.trim_end().len() - 1);
        text.push_str(",\n  \"ideals\": {\"bad\": [\"0\", \"1\"]}\n}\n");
        assert!(matches!(parse_instance(&text), Err(Error::Load { field, .. }) if field == "ideals.bad"));
    }
}

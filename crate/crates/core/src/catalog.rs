//! The theorem registry: one record per vanishing claim, stored as JSON
//! lines, plus sweep configuration and instantiation under `gcd(p, t) = 1`.
//!
//! A family record reads
//!
//! ```text
//! {"id":"vcres2.0","kind":"family","families":["X","Z"],"a_mult":1,"b_mult":2,"s":5,"k":15,"u":2,"v":1,"p":5,"c":2}
//! ```
//!
//! and claims that every listed family with parameters
//! `(a_mult*t, b_mult*t, s*ell, k*ell, u, v)` vanishes at `p*n + c*t`.
//! A legacy record names a fixed product and its residues mod `p`:
//!
//! ```text
//! {"id":"hirschhorn-a","kind":"legacy","series":"hirschhorn-a","p":5,"residues":[2,4]}
//! ```
//!
//! Either kind may carry `"corrects": "<id>"` when it replaces a printed
//! statement that does not hold as written. Blank lines and lines starting
//! with `#` are ignored.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{Family, FamilySpec, LegacySeries};

const DEFAULT_CATALOG: &str = include_str!("../data/catalog.jsonl");

/// Labels of the printed results; each must appear exactly once.
pub const PAPER_LABELS: [&str; 41] = [
    "vcres2.0",
    "vcres2.1",
    "vcres2.2",
    "vcres2.3",
    "vcres2.4",
    "vcres2.5",
    "vcres2.6",
    "vcres2.7",
    "vcres2.8",
    "vcres2.9",
    "vcres2.10",
    "vcres2.11",
    "vcres2.12",
    "vcres2.13",
    "vcres2.14",
    "vcres2.15",
    "vcres2.16",
    "vcres2.17",
    "vcres2.20",
    "vcres1.1",
    "vcres1.2",
    "vcres1.3",
    "vcres1.4",
    "vcres1.5",
    "vcres1.6",
    "vcres1.7",
    "vcres1.8",
    "vcres1.9",
    "vcres1.10",
    "vcres1.11",
    "vcres1.12",
    "vcres1.13",
    "vcres1.14",
    "vcres1.15",
    "vcres1.16",
    "vcres1.17",
    "vcres1.18",
    "vcres1.19",
    "vcres1.20",
    "vcres1.21",
    "vcres1.11.25",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Claim {
    Family {
        families: Vec<Family>,
        a_mult: i64,
        b_mult: i64,
        s: i64,
        k: i64,
        u: u32,
        v: u32,
        p: u32,
        c: i64,
    },
    Legacy {
        #[serde(serialize_with = "ser_legacy", deserialize_with = "de_legacy")]
        series: LegacySeries,
        p: u32,
        residues: Vec<i64>,
    },
}

fn ser_legacy<S: Serializer>(l: &LegacySeries, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(l)
}

fn de_legacy<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<LegacySeries, D::Error> {
    let name = String::deserialize(d)?;
    name.parse().map_err(serde::de::Error::custom)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremEntry {
    pub id: String,
    #[serde(flatten)]
    pub claim: Claim,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrects: Option<String>,
}

impl TheoremEntry {
    pub fn modulus(&self) -> u32 {
        match self.claim {
            Claim::Family { p, .. } | Claim::Legacy { p, .. } => p,
        }
    }

    pub fn is_legacy(&self) -> bool {
        matches!(self.claim, Claim::Legacy { .. })
    }

    /// True for the statements as printed (not legacy, not corrections).
    pub fn is_printed(&self) -> bool {
        !self.is_legacy() && self.corrects.is_none()
    }

    /// Exponents leave the positive range: `a_mult*t >= s*ell` or
    /// `b_mult*t >= k*ell`.
    pub fn is_degenerate_t(&self, ell: i64, t: u32) -> bool {
        match self.claim {
            Claim::Family {
                a_mult, b_mult, s, k, ..
            } => a_mult * t as i64 >= s * ell || b_mult * t as i64 >= k * ell,
            Claim::Legacy { .. } => false,
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("empty id".into());
        }
        match &self.claim {
            Claim::Family {
                families,
                a_mult,
                b_mult,
                s,
                k,
                p,
                ..
            } => {
                if families.is_empty() {
                    return Err("no families listed".into());
                }
                if *a_mult < 1 || *b_mult < 1 || *s < 1 || *k < 1 {
                    return Err("template multipliers must be positive".into());
                }
                if *p < 1 {
                    return Err("modulus must be positive".into());
                }
            }
            Claim::Legacy { p, residues, .. } => {
                if *p < 1 {
                    return Err("modulus must be positive".into());
                }
                if residues.is_empty() {
                    return Err("no residues listed".into());
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for TheoremEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.claim {
            Claim::Family {
                families,
                a_mult,
                b_mult,
                s,
                k,
                u,
                v,
                p,
                c,
            } => {
                let names: Vec<String> = families.iter().map(|f| f.to_string()).collect();
                write!(
                    f,
                    "{}: {}_{{{a_mult}t,{b_mult}t,{s}l,{k}l,{u},{v}}}({p}n+{c}t) = 0",
                    self.id,
                    names.join("=")
                )
            }
            Claim::Legacy { series, p, residues } => {
                let rs: Vec<String> = residues.iter().map(|r| format!("{p}n+{r}")).collect();
                write!(f, "{}: {series} vanishes at {}", self.id, rs.join(", "))
            }
        }
    }
}

/// Parses JSON-lines catalog text.
pub fn load_catalog(source: &str) -> Result<Vec<TheoremEntry>> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let entry: TheoremEntry = serde_json::from_str(trimmed).map_err(|e| Error::Catalog {
            line: line_no,
            msg: e.to_string(),
        })?;
        entry.validate().map_err(|msg| Error::Catalog { line: line_no, msg })?;
        if !seen.insert(entry.id.clone()) {
            return Err(Error::Catalog {
                line: line_no,
                msg: format!("duplicate id `{}`", entry.id),
            });
        }
        entries.push(entry);
    }
    if entries.is_empty() {
        return Err(Error::Catalog {
            line: 0,
            msg: "catalog has no entries".into(),
        });
    }
    Ok(entries)
}

pub fn serialize_catalog(entries: &[TheoremEntry]) -> Result<String> {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(e)?);
        out.push('\n');
    }
    Ok(out)
}

/// The built-in catalog: the printed results, the historical results, and
/// corrected forms of the printed results that fail as written.
pub fn default_catalog() -> Vec<TheoremEntry> {
    load_catalog(DEFAULT_CATALOG).expect("built-in catalog parses")
}

/// Checks that every printed label appears exactly once among the
/// uncorrected family entries.
pub fn check_manifest(entries: &[TheoremEntry]) -> Result<()> {
    for label in PAPER_LABELS {
        let n = entries.iter().filter(|e| e.is_printed() && e.id == label).count();
        if n != 1 {
            return Err(Error::Catalog {
                line: 0,
                msg: format!("label `{label}` appears {n} times"),
            });
        }
    }
    Ok(())
}

pub fn find_entry<'a>(entries: &'a [TheoremEntry], id: &str) -> Result<&'a TheoremEntry> {
    entries
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))
}

/// One family at one `(ell, t)`, with the progression `p*n + residue`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instance {
    pub spec: FamilySpec,
    pub p: u32,
    pub residue: i64,
}

pub fn instantiate(entry: &TheoremEntry, ell: i64, t: u32) -> Result<Vec<Instance>> {
    let Claim::Family {
        ref families,
        a_mult,
        b_mult,
        s,
        k,
        u,
        v,
        p,
        c,
    } = entry.claim
    else {
        return Err(Error::InvalidParameters(format!(
            "`{}` has fixed parameters and cannot be instantiated",
            entry.id
        )));
    };
    if ell < 1 || t < 1 {
        return Err(Error::InvalidParameters(format!(
            "ell and t must be positive, got ell={ell}, t={t}"
        )));
    }
    if p.gcd(&t) != 1 {
        return Err(Error::SideCondition { p, t });
    }
    let residue = (c * t as i64).rem_euclid(p as i64);
    Ok(families
        .iter()
        .map(|&family| Instance {
            spec: FamilySpec {
                family,
                a: a_mult * t as i64,
                b: b_mult * t as i64,
                s,
                k,
                ell,
                u,
                v,
            },
            p,
            residue,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub ell_values: Vec<i64>,
    /// Explicit `t` values; when absent, `1..=t_max` (or `1..=2p`).
    pub t_values: Option<Vec<u32>>,
    pub t_max: Option<u32>,
    pub order: i64,
    pub allow_degenerate_t: bool,
}

impl Default for SweepConfig {
    fn default() -> SweepConfig {
        SweepConfig {
            ell_values: vec![1, 2],
            t_values: None,
            t_max: None,
            order: 500,
            allow_degenerate_t: false,
        }
    }
}

impl SweepConfig {
    pub fn with_order(order: i64) -> SweepConfig {
        SweepConfig {
            order,
            ..SweepConfig::default()
        }
    }

    /// Candidate `t` for an entry, filtered by `gcd(p, t) = 1`.
    pub fn admissible_t(&self, entry: &TheoremEntry) -> Vec<u32> {
        let p = entry.modulus();
        let candidates: Vec<u32> = match &self.t_values {
            Some(ts) => ts.clone(),
            None => (1..=self.t_max.unwrap_or(2 * p)).collect(),
        };
        candidates.into_iter().filter(|t| p.gcd(t) == 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_catalog_contents() {
        let cat = default_catalog();
        assert!(cat.len() >= 51);
        assert_eq!(cat.iter().filter(|e| e.is_printed()).count(), 41);
        assert!(cat.iter().filter(|e| e.is_legacy()).count() >= 10);
        check_manifest(&cat).unwrap();
    }

    #[test]
    fn mixed_modulus_entry() {
        let cat = default_catalog();
        let e = find_entry(&cat, "vcres1.11.25").unwrap();
        assert_eq!(
            e.claim,
            Claim::Family {
                families: vec![Family::X, Family::Y],
                a_mult: 5,
                b_mult: 6,
                s: 11,
                k: 33,
                u: 2,
                v: 5,
                p: 11,
                c: 9,
            }
        );
    }

    #[test]
    fn instantiation() {
        let cat = default_catalog();
        let e = find_entry(&cat, "vcres2.0").unwrap();
        let inst = instantiate(e, 1, 1).unwrap();
        assert_eq!(inst.len(), 2);
        assert_eq!(inst[0].spec.family, Family::X);
        assert_eq!(inst[1].spec.family, Family::Z);
        let sp = inst[0].spec;
        assert_eq!(
            (sp.a, sp.b, sp.s * sp.ell, sp.k * sp.ell, sp.u, sp.v),
            (1, 2, 5, 15, 2, 1)
        );
        assert_eq!((inst[0].p, inst[0].residue), (5, 2));
        assert!(matches!(instantiate(e, 1, 5), Err(Error::SideCondition { p: 5, t: 5 })));

        let e = find_entry(&cat, "vcres1.18").unwrap();
        let inst = instantiate(e, 2, 3).unwrap();
        let sp = inst[0].spec;
        assert_eq!(
            (sp.a, sp.b, sp.s * sp.ell, sp.k * sp.ell, sp.u, sp.v),
            (24, 9, 34, 34, 1, 8)
        );
        assert_eq!((inst[0].p, inst[0].residue), (17, 14));
    }

    #[test]
    fn load_errors() {
        assert!(matches!(load_catalog(""), Err(Error::Catalog { line: 0, .. })));
        assert!(matches!(load_catalog("# nothing\n\n"), Err(Error::Catalog { .. })));
        let row = r#"{"id":"x","kind":"legacy","series":"hirschhorn-a","p":5,"residues":[2]}"#;
        let dup = format!("{row}\n{row}\n");
        assert!(matches!(load_catalog(&dup), Err(Error::Catalog { line: 2, .. })));
        assert!(matches!(load_catalog("{not json"), Err(Error::Catalog { line: 1, .. })));
        let bad_series = r#"{"id":"x","kind":"legacy","series":"nope","p":5,"residues":[2]}"#;
        assert!(load_catalog(bad_series).is_err());
        let no_fams =
            r#"{"id":"x","kind":"family","families":[],"a_mult":1,"b_mult":2,"s":5,"k":15,"u":2,"v":1,"p":5,"c":2}"#;
        assert!(load_catalog(no_fams).is_err());
    }

    #[test]
    fn round_trip() {
        let cat = default_catalog();
        let text = serialize_catalog(&cat).unwrap();
        assert_eq!(load_catalog(&text).unwrap(), cat);
    }

    #[test]
    fn sweep_t_values() {
        let cat = default_catalog();
        let e = find_entry(&cat, "vcres2.0").unwrap();
        let cfg = SweepConfig::default();
        assert_eq!(cfg.admissible_t(e), vec![1, 2, 3, 4, 6, 7, 8, 9]);
        assert!(e.is_degenerate_t(1, 5));
        assert!(!e.is_degenerate_t(1, 4));
        assert!(e.is_degenerate_t(1, 8));
    }

    #[test]
    fn legacy_cannot_instantiate() {
        let cat = default_catalog();
        let e = find_entry(&cat, "hirschhorn-a").unwrap();
        assert!(instantiate(e, 1, 1).is_err());
    }
}

//! Ring-spec parsing and the fixture catalog.
//!
//! Grammar:
//!
//! ```text
//! spec := "Zn:" n | "M" k ":" spec | "T" k ":" spec
//!       | "prod:" spec ("+" spec)+ | "op:" spec
//! ```
//!
//! A `prod` absorbs every following `+`, so `prod:Zn:2+M2:Zn:2` has two
//! factors.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{FiniteRing, DEFAULT_MAX_SIZE};

fn ring_cache() -> &'static Mutex<HashMap<String, Arc<FiniteRing>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<FiniteRing>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Parses and builds a ring, memoized by spec string.
pub fn parse_ring_spec(s: &str) -> Result<Arc<FiniteRing>> {
    parse_ring_spec_capped(s, DEFAULT_MAX_SIZE)
}

pub fn parse_ring_spec_capped(s: &str, cap: usize) -> Result<Arc<FiniteRing>> {
    let key = format!("{cap}|{s}");
    if let Some(r) = ring_cache().lock().expect("ring cache poisoned").get(&key) {
        return Ok(r.clone());
    }
    let mut p = SpecParser {
        src: s,
        pos: 0,
        cap,
    };
    let ring = p.spec()?;
    if p.pos != s.len() {
        return Err(p.error("trailing input"));
    }
    let ring = Arc::new(ring);
    ring_cache()
        .lock()
        .expect("ring cache poisoned")
        .insert(key, ring.clone());
    Ok(ring)
}

struct SpecParser<'a> {
    src: &'a str,
    pos: usize,
    cap: usize,
}

impl SpecParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a positive integer"));
        }
        let start = self.pos;
        let n: usize = self.src[start..start + digits]
            .parse()
            .map_err(|_| self.error("integer too large"))?;
        if n == 0 {
            return Err(self.error("expected a positive integer"));
        }
        self.pos += digits;
        Ok(n)
    }

    fn spec(&mut self) -> Result<FiniteRing> {
        if self.eat("Zn:") {
            let n = self.number()?;
            return FiniteRing::zmod_capped(n, self.cap);
        }
        if self.eat("op:") {
            return Ok(self.spec()?.opposite());
        }
        if self.eat("prod:") {
            let mut factors = vec![self.spec()?];
            while self.eat("+") {
                factors.push(self.spec()?);
            }
            if factors.len() < 2 {
                return Err(self.error("a product needs at least two factors"));
            }
            let refs: Vec<&FiniteRing> = factors.iter().collect();
            return FiniteRing::product_capped(&refs, self.cap);
        }
        let triangular = match self.rest().as_bytes().first() {
            Some(b'M') => false,
            Some(b'T') => true,
            _ => return Err(self.error("expected `Zn:`, `M<k>:`, `T<k>:`, `prod:` or `op:`")),
        };
        self.pos += 1;
        let k = self.number()?;
        self.expect(":")?;
        let base = self.spec()?;
        if triangular {
            FiniteRing::triangular_capped(k, &base, self.cap)
        } else {
            FiniteRing::matrix_capped(k, &base, self.cap)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Stated for this ring in the literature.
    Paper,
    /// Established by this tool's exhaustive computation.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tag {
    pub label: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub spec: String,
    pub tags: Vec<Tag>,
}

impl CatalogEntry {
    fn new(spec: &str, tags: &[(&str, Provenance)]) -> Self {
        CatalogEntry {
            spec: spec.to_string(),
            tags: tags
                .iter()
                .map(|&(label, provenance)| Tag {
                    label: label.to_string(),
                    provenance,
                })
                .collect(),
        }
    }

    pub fn has_tag(&self, label: &str) -> bool {
        self.tags.iter().any(|t| t.label == label)
    }

    /// Builds the ring and recomputes every tag, failing on the first
    /// disagreement.
    pub fn load(&self) -> Result<Arc<FiniteRing>> {
        let ring = parse_ring_spec(&self.spec)?;
        for tag in &self.tags {
            let (negated, label) = match tag.label.strip_prefix("not-") {
                Some(l) => (true, l),
                None => (false, tag.label.as_str()),
            };
            let holds = match label {
                "ssp" => ring.is_ssp().holds,
                "sip" => ring.is_sip().holds,
                "ic" => ring.is_ic().holds,
                "sr1" => ring.has_stable_range_1().holds,
                "abelian" => ring.is_abelian().holds,
                "unit-regular" => ring.every_element_unit_regular().holds,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "{}: unknown catalog tag `{}`",
                        self.spec, tag.label
                    )))
                }
            };
            if holds == negated {
                return Err(Error::Invariant(format!(
                    "{}: catalog tag `{}` contradicts the recomputed verdict",
                    self.spec, tag.label
                )));
            }
        }
        Ok(ring)
    }
}

pub fn default_catalog() -> Vec<CatalogEntry> {
    use Provenance::{Derived, Paper};
    let mut out: Vec<CatalogEntry> = [1, 2, 3, 4, 6, 8, 9, 12]
        .iter()
        .map(|n| {
            CatalogEntry::new(
                &format!("Zn:{n}"),
                &[("abelian", Paper), ("ssp", Derived), ("ic", Derived)],
            )
        })
        .collect();
    for n in [2, 3] {
        out.push(CatalogEntry::new(
            &format!("M2:Zn:{n}"),
            &[
                ("unit-regular", Paper),
                ("ssp", Derived),
                ("ic", Derived),
                ("not-abelian", Derived),
            ],
        ));
    }
    out.push(CatalogEntry::new(
        "T2:Zn:3",
        &[("sr1", Paper), ("not-ssp", Derived), ("ic", Derived)],
    ));
    out.push(CatalogEntry::new(
        "prod:Zn:2+Zn:3",
        &[("abelian", Derived), ("ssp", Derived), ("ic", Derived)],
    ));
    out.push(CatalogEntry::new(
        "op:T2:Zn:3",
        &[("not-ssp", Derived), ("ic", Derived)],
    ));
    out
}

/// Reads a catalog from a JSON array of entries.
pub fn load_catalog_file(path: &Path) -> Result<Vec<CatalogEntry>> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_ring_spec("Zn:6").unwrap().size(), 6);
        let t = parse_ring_spec("T2:Zn:3").unwrap();
        assert_eq!((t.size(), t.spec()), (27, "T2:Zn:3"));
        let p = parse_ring_spec("prod:Zn:2+Zn:3").unwrap();
        assert_eq!(p.size(), 6);
        assert_eq!(p.spec(), "prod:Zn:2+Zn:3");
        assert_eq!(parse_ring_spec("op:T2:Zn:3").unwrap().spec(), "op:T2:Zn:3");
        assert_eq!(parse_ring_spec("M2:prod:Zn:2+Zn:2").unwrap().size(), 256);
    }

    #[test]
    fn memoized() {
        let a = parse_ring_spec("M2:Zn:2").unwrap();
        let b = parse_ring_spec("M2:Zn:2").unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let pos = |s: &str| match parse_ring_spec(s) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("Zx:3"), 0);
        assert_eq!(pos("Zn:"), 3);
        assert_eq!(pos("Zn:0"), 3);
        assert_eq!(pos("M2Zn:3"), 2);
        assert_eq!(pos("Zn:3x"), 4);
        assert_eq!(pos("prod:Zn:2"), 9);
        assert_eq!(pos("T:Zn:2"), 1);
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(
            parse_ring_spec("M3:Zn:3"),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            parse_ring_spec_capped("M2:Zn:3", 64),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn default_catalog_contents() {
        let cat = default_catalog();
        let find = |s: &str| cat.iter().find(|e| e.spec == s).unwrap();
        assert!(find("T2:Zn:3").has_tag("not-ssp"));
        assert!(find("M2:Zn:2").has_tag("ssp") && find("M2:Zn:2").has_tag("ic"));
        assert!(cat.iter().any(|e| e.spec == "Zn:1"));
    }

    #[test]
    fn small_entries_verify() {
        for e in default_catalog() {
            if e.spec != "M2:Zn:3" {
                e.load().unwrap();
            }
        }
    }

    #[test]
    fn wrong_tag_fails_loudly() {
        let bad = CatalogEntry::new("T2:Zn:3", &[("ssp", Provenance::Derived)]);
        assert!(matches!(bad.load(), Err(Error::Invariant(_))));
        let unknown = CatalogEntry::new("Zn:2", &[("noetherian", Provenance::Derived)]);
        assert!(matches!(unknown.load(), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn catalog_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cat.json");
        let cat = default_catalog();
        std::fs::write(&path, serde_json::to_string(&cat).unwrap()).unwrap();
        assert_eq!(load_catalog_file(&path).unwrap(), cat);
        let v = serde_json::to_value(&cat[0]).unwrap();
        assert_eq!(
            v["tags"][0],
            serde_json::json!({"label": "abelian", "provenance": "paper"})
        );
    }
}

//! Equivalence suites. Each suite evaluates the numbered conditions of one
//! result independently and then checks the claimed equivalence pattern,
//! reporting every condition so that a failure localizes the direction
//! that broke.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{
    CancellationOutcome, OneSidedVariants, ProductVerdict, Verdict, DEFAULT_ARITY_BOUND,
    DEFAULT_CANCELLATION_BOUND,
};
use crate::error::{Error, Result};
use crate::ring::FiniteRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "T2.4")]
    T24,
    #[serde(rename = "T2.9")]
    T29,
    #[serde(rename = "C2.10")]
    C210,
    #[serde(rename = "R2.5")]
    R25,
    #[serde(rename = "C2.6")]
    C26,
    #[serde(rename = "L2.3")]
    L23,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::T24,
        Suite::T29,
        Suite::C210,
        Suite::R25,
        Suite::C26,
        Suite::L23,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::T24 => "T2.4",
            Suite::T29 => "T2.9",
            Suite::C210 => "C2.10",
            Suite::R25 => "R2.5",
            Suite::C26 => "C2.6",
            Suite::L23 => "L2.3",
        }
    }

    /// Parses a suite name, or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s.eq_ignore_ascii_case("all") {
            Ok(Suite::ALL.to_vec())
        } else {
            Ok(vec![s.parse()?])
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteStatus {
    Holds,
    Fails,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub result: Suite,
    pub ring: String,
    pub hypothesis_met: bool,
    pub conditions: BTreeMap<String, bool>,
    pub equivalent: bool,
    pub status: SuiteStatus,
    pub witnesses: BTreeMap<String, Value>,
}

impl SuiteReport {
    /// The assertion passed, or did not apply.
    pub fn passed(&self) -> bool {
        self.status != SuiteStatus::Fails
    }
}

/// Lazily computed verdicts for one ring, shared between suites.
pub struct RingAnalysis {
    ring: Arc<FiniteRing>,
    ssp: OnceLock<Verdict>,
    ic: OnceLock<Verdict>,
    idem_sr: OnceLock<Verdict>,
    regular_special: OnceLock<Verdict>,
    products: OnceLock<Result<Vec<ProductVerdict>, String>>,
    one_sided: OnceLock<Result<OneSidedVariants, String>>,
    cancellation: OnceLock<Result<CancellationOutcome, String>>,
    all_unit_regular: OnceLock<Verdict>,
    all_special: OnceLock<Verdict>,
}

fn witness_json(v: &Verdict) -> Value {
    serde_json::to_value(&v.witness).expect("witness serializes")
}

impl RingAnalysis {
    pub fn new(ring: Arc<FiniteRing>) -> Self {
        RingAnalysis {
            ring,
            ssp: OnceLock::new(),
            ic: OnceLock::new(),
            idem_sr: OnceLock::new(),
            regular_special: OnceLock::new(),
            products: OnceLock::new(),
            one_sided: OnceLock::new(),
            cancellation: OnceLock::new(),
            all_unit_regular: OnceLock::new(),
            all_special: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ssp(&self) -> &Verdict {
        self.ssp.get_or_init(|| self.ring.is_ssp())
    }

    pub fn ic(&self) -> &Verdict {
        self.ic.get_or_init(|| self.ring.is_ic())
    }

    pub fn idem_sr(&self) -> &Verdict {
        self.idem_sr.get_or_init(|| self.ring.idem_sr_condition())
    }

    pub fn regular_special(&self) -> &Verdict {
        self.regular_special
            .get_or_init(|| self.ring.every_regular_special_clean())
    }

    /// Product verdicts for arities `2..=DEFAULT_ARITY_BOUND`.
    pub fn products(&self) -> Result<&[ProductVerdict]> {
        self.products
            .get_or_init(|| {
                (2..=DEFAULT_ARITY_BOUND)
                    .map(|k| self.ring.product_regular_condition(k))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| e.to_string())
            })
            .as_deref()
            .map_err(|e| Error::Invariant(e.clone()))
    }

    pub fn one_sided(&self) -> Result<&OneSidedVariants> {
        self.one_sided
            .get_or_init(|| self.ring.one_sided_variants().map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Invariant(e.clone()))
    }

    pub fn cancellation(&self) -> Result<&CancellationOutcome> {
        self.cancellation
            .get_or_init(|| {
                self.ring
                    .cancellation_check_bounded(DEFAULT_CANCELLATION_BOUND)
                    .map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| Error::Invariant(e.clone()))
    }

    pub fn all_unit_regular(&self) -> &Verdict {
        self.all_unit_regular
            .get_or_init(|| self.ring.every_element_unit_regular())
    }

    pub fn all_special(&self) -> &Verdict {
        self.all_special
            .get_or_init(|| self.ring.every_element_special_clean())
    }

    pub fn run(&self, suite: Suite) -> Result<SuiteReport> {
        let mut witnesses = BTreeMap::new();
        let mut conditions = BTreeMap::new();
        let mut cond = |key: &str, v: &Verdict, witnesses: &mut BTreeMap<String, Value>| {
            conditions.insert(key.to_string(), v.holds);
            if !v.holds {
                witnesses.insert(key.to_string(), witness_json(v));
            }
        };
        let mut hypothesis_met = true;
        let mut extra_agreement = true;
        match suite {
            Suite::T24 => {
                hypothesis_met = self.ssp().holds;
                if !hypothesis_met {
                    witnesses.insert("hypothesis".into(), witness_json(self.ssp()));
                }
                cond("1", self.ic(), &mut witnesses);
                cond("2", self.idem_sr(), &mut witnesses);
                cond("3", self.regular_special(), &mut witnesses);
            }
            Suite::T29 => {
                let products = self.products()?;
                let ssp_ic = self.ssp_and_ic();
                cond("1", &ssp_ic, &mut witnesses);
                cond("2", &products[0].unit_regular, &mut witnesses);
                cond("3", &products[0].special_clean, &mut witnesses);
            }
            Suite::C210 => {
                let products = self.products()?;
                let ssp_ic = self.ssp_and_ic();
                cond("1", &ssp_ic, &mut witnesses);
                let first_fail = |pick: fn(&ProductVerdict) -> &Verdict| {
                    products
                        .iter()
                        .map(pick)
                        .find(|v| !v.holds)
                        .cloned()
                        .unwrap_or_else(|| pick(&products[0]).clone())
                };
                cond("2", &first_fail(|p| &p.unit_regular), &mut witnesses);
                cond("3", &first_fail(|p| &p.special_clean), &mut witnesses);
                let by_arity: BTreeMap<String, Value> = products
                    .iter()
                    .map(|p| {
                        (
                            p.arity.to_string(),
                            json!({"unit_regular": p.unit_regular.holds, "special_clean": p.special_clean.holds}),
                        )
                    })
                    .collect();
                extra_agreement = products
                    .iter()
                    .all(|p| p.unit_regular.holds == products[0].unit_regular.holds)
                    && products
                        .iter()
                        .all(|p| p.special_clean.holds == products[0].special_clean.holds);
                witnesses.insert("by_arity".into(), json!(by_arity));
                let literal = self.all_special();
                witnesses.insert(
                    "literal_reading".into(),
                    json!({"every_product_special_clean": literal.holds, "witness": literal.witness}),
                );
            }
            Suite::R25 => {
                hypothesis_met = self.ssp().holds;
                if !hypothesis_met {
                    witnesses.insert("hypothesis".into(), witness_json(self.ssp()));
                }
                let variants = self.one_sided()?;
                cond("1", self.ic(), &mut witnesses);
                cond("2", &variants.annihilator, &mut witnesses);
                cond("3", &variants.opposite, &mut witnesses);
                witnesses.insert("hypotheses".into(), json!(variants.hypotheses));
                witnesses.insert(
                    "translated_checks".into(),
                    json!(variants.translated_checks),
                );
            }
            Suite::C26 => {
                cond("1", self.all_unit_regular(), &mut witnesses);
                cond("2", self.all_special(), &mut witnesses);
            }
            Suite::L23 => {
                cond("1", self.ic(), &mut witnesses);
                match self.cancellation()? {
                    CancellationOutcome::Checked(v) => cond("2", v, &mut witnesses),
                    skipped @ CancellationOutcome::Skipped { .. } => {
                        hypothesis_met = false;
                        witnesses.insert("hypothesis".into(), json!(skipped));
                    }
                }
            }
        }
        let mut values = conditions.values();
        let first = values.next().copied().unwrap_or(true);
        let equivalent = values.all(|&v| v == first) && extra_agreement;
        let status = if !hypothesis_met {
            SuiteStatus::NotApplicable
        } else if equivalent {
            SuiteStatus::Holds
        } else {
            SuiteStatus::Fails
        };
        Ok(SuiteReport {
            result: suite,
            ring: self.ring.spec().to_string(),
            hypothesis_met,
            conditions,
            equivalent,
            status,
            witnesses,
        })
    }

    fn ssp_and_ic(&self) -> Verdict {
        let (s, i) = (self.ssp(), self.ic());
        Verdict {
            holds: s.holds && i.holds,
            scanned: s.scanned + i.scanned,
            witness: if !s.holds {
                s.witness.clone()
            } else {
                i.witness.clone()
            },
        }
    }
}

pub fn theorem_suite(ring: Arc<FiniteRing>, suite: Suite) -> Result<SuiteReport> {
    RingAnalysis::new(ring).run(suite)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(r: Result<FiniteRing>) -> Arc<FiniteRing> {
        Arc::new(r.unwrap())
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), json!(s.name()));
        }
        assert_eq!(Suite::parse_list("all").unwrap().len(), 6);
        assert!("T9.9".parse::<Suite>().is_err());
    }

    #[test]
    fn t24_on_m22() {
        let base = FiniteRing::zmod(2).unwrap();
        let r = theorem_suite(ring(FiniteRing::matrix(2, &base)), Suite::T24).unwrap();
        assert!(r.hypothesis_met);
        assert!(r.conditions.values().all(|&v| v));
        assert_eq!(r.status, SuiteStatus::Holds);
    }

    #[test]
    fn t29_on_t23() {
        let base = FiniteRing::zmod(3).unwrap();
        let r = theorem_suite(ring(FiniteRing::triangular(2, &base)), Suite::T29).unwrap();
        assert!(r.conditions.values().all(|&v| !v));
        assert!(r.equivalent);
        assert_eq!(r.status, SuiteStatus::Holds);
        assert!(r.witnesses.contains_key("2"));
    }

    #[test]
    fn t24_not_applicable_on_non_ssp() {
        let base = FiniteRing::zmod(3).unwrap();
        let r = theorem_suite(ring(FiniteRing::triangular(2, &base)), Suite::T24).unwrap();
        assert!(!r.hypothesis_met);
        assert_eq!(r.status, SuiteStatus::NotApplicable);
        assert_eq!(r.conditions.len(), 3);
    }

    #[test]
    fn zero_ring_all_true() {
        let analysis = RingAnalysis::new(ring(FiniteRing::zmod(1)));
        for s in Suite::ALL {
            let r = analysis.run(s).unwrap();
            assert!(r.conditions.values().all(|&v| v), "{s}");
            assert_eq!(r.status, SuiteStatus::Holds);
        }
    }

    #[test]
    fn report_json_keys() {
        let r = theorem_suite(ring(FiniteRing::zmod(6)), Suite::T24).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["result"], "T2.4");
        assert_eq!(v["ring"], "Zn:6");
        assert_eq!(v["conditions"], json!({"1": true, "2": true, "3": true}));
        assert_eq!(v["equivalent"], true);
    }
}

//! Command runners and report rendering shared by the CLI and tests.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{ResultCache, TOOL_VERSION};
use crate::catalog::{parse_ring_spec, CatalogEntry};
use crate::classify::{RingProfile, Verdict, Witness};
use crate::construct::{ConstructionTrace, TraceReport};
use crate::error::{Error, Result};
use crate::hunt::{hunt, HuntResult};
use crate::ring::{Elem, FiniteRing};
use crate::suite::{RingAnalysis, Suite, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
    pub cache_hits: usize,
    pub cache_misses: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeRecord {
    pub ring: String,
    pub element: String,
    pub b: String,
    pub idempotent: String,
    pub unit: String,
    pub trace: ConstructionTrace,
    pub verification: TraceReport,
}

/// A failure that is reported rather than aborting the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub ring: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub tool_version: String,
    pub passed: bool,
    pub profiles: Vec<RingProfile>,
    pub suites: Vec<SuiteReport>,
    pub traces: Vec<DecomposeRecord>,
    pub hunt: Option<HuntResult>,
    pub failures: Vec<Failure>,
    pub timing: Timing,
}

impl RunReport {
    fn new(command: &[String]) -> Self {
        RunReport {
            command: command.to_vec(),
            tool_version: TOOL_VERSION.to_string(),
            passed: true,
            profiles: Vec::new(),
            suites: Vec::new(),
            traces: Vec::new(),
            hunt: None,
            failures: Vec::new(),
            timing: Timing::default(),
        }
    }

    fn finish(mut self, start: Instant) -> Self {
        self.passed = self.failures.is_empty()
            && self.suites.iter().all(SuiteReport::passed)
            && self.traces.iter().all(|t| t.verification.passed);
        self.timing.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// The JSON rendering with timing removed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        RunReport {
            timing: Timing::default(),
            ..self.clone()
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Table => Ok(self.render_table()),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        for p in &self.profiles {
            let ring = parse_ring_spec(&p.ring_spec).ok();
            let _ = writeln!(
                out,
                "{}: {} elements, {} units, {} idempotents, {} regular",
                p.ring_spec, p.size, p.units, p.idempotents, p.regular
            );
            let _ = writeln!(
                out,
                "  {:<28} {:<6} {:>10}  witness",
                "property", "holds", "scanned"
            );
            for (name, v) in profile_rows(p) {
                let _ = writeln!(
                    out,
                    "  {:<28} {:<6} {:>10}  {}",
                    name,
                    yes_no(v.holds),
                    v.scanned,
                    ring.as_deref()
                        .map(|r| verdict_witness(r, v))
                        .unwrap_or_default()
                );
            }
        }
        if !self.suites.is_empty() {
            let _ = writeln!(
                out,
                "{:<16} {:<6} {:<10} {:<22} status",
                "ring", "suite", "hypothesis", "conditions"
            );
            for s in &self.suites {
                let conds: Vec<String> = s
                    .conditions
                    .iter()
                    .map(|(k, v)| format!("{k}:{}", if *v { "T" } else { "F" }))
                    .collect();
                let _ = writeln!(
                    out,
                    "{:<16} {:<6} {:<10} {:<22} {}",
                    s.ring,
                    s.result.name(),
                    yes_no(s.hypothesis_met),
                    conds.join(" "),
                    status_name(s)
                );
            }
        }
        for t in &self.traces {
            let ok = t.verification.checks.iter().filter(|c| c.passed).count();
            let _ = writeln!(out, "ring        {}", t.ring);
            let _ = writeln!(out, "element     {}", t.element);
            let _ = writeln!(out, "b           {}", t.b);
            let _ = writeln!(out, "idempotent  {}", t.idempotent);
            let _ = writeln!(out, "unit        {}", t.unit);
            let _ = writeln!(
                out,
                "checks      {ok}/{} passed",
                t.verification.checks.len()
            );
            for name in t.verification.failed() {
                let _ = writeln!(out, "  FAILED    {name}");
            }
        }
        if let Some(h) = &self.hunt {
            let _ = writeln!(
                out,
                "{} over {} rings of size <= {}: {} matches",
                h.expression,
                h.candidates,
                h.max_size,
                h.matches.len()
            );
            for m in &h.matches {
                let _ = writeln!(out, "  {m}");
            }
        }
        for f in &self.failures {
            let _ = writeln!(out, "FAILURE {}: {}", f.ring, f.message);
        }
        let _ = writeln!(out, "{}", if self.passed { "PASS" } else { "FAIL" });
        out
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::InvalidArgument(e.to_string());
        if !self.profiles.is_empty() {
            w.write_record(["ring", "property", "holds", "scanned", "witness"])
                .map_err(csv_err)?;
            for p in &self.profiles {
                let ring = parse_ring_spec(&p.ring_spec).ok();
                for (name, v) in profile_rows(p) {
                    let witness = ring
                        .as_deref()
                        .map(|r| verdict_witness(r, v))
                        .unwrap_or_default();
                    w.write_record([
                        p.ring_spec.as_str(),
                        name,
                        &v.holds.to_string(),
                        &v.scanned.to_string(),
                        &witness,
                    ])
                    .map_err(csv_err)?;
                }
            }
        } else if !self.suites.is_empty() {
            w.write_record([
                "ring",
                "suite",
                "hypothesis_met",
                "conditions",
                "equivalent",
                "status",
            ])
            .map_err(csv_err)?;
            for s in &self.suites {
                let conds: Vec<String> = s
                    .conditions
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                w.write_record([
                    s.ring.as_str(),
                    s.result.name(),
                    &s.hypothesis_met.to_string(),
                    &conds.join(";"),
                    &s.equivalent.to_string(),
                    status_name(s),
                ])
                .map_err(csv_err)?;
            }
        } else if !self.traces.is_empty() {
            w.write_record(["ring", "element", "b", "idempotent", "unit", "verified"])
                .map_err(csv_err)?;
            for t in &self.traces {
                w.write_record([
                    t.ring.as_str(),
                    &t.element,
                    &t.b,
                    &t.idempotent,
                    &t.unit,
                    &t.verification.passed.to_string(),
                ])
                .map_err(csv_err)?;
            }
        } else if let Some(h) = &self.hunt {
            w.write_record(["expression", "match"]).map_err(csv_err)?;
            for m in &h.matches {
                w.write_record([h.expression.as_str(), m])
                    .map_err(csv_err)?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn status_name(s: &SuiteReport) -> &'static str {
    match s.status {
        crate::suite::SuiteStatus::Holds => "holds",
        crate::suite::SuiteStatus::Fails => "FAILS",
        crate::suite::SuiteStatus::NotApplicable => "n/a",
    }
}

fn profile_rows(p: &RingProfile) -> [(&'static str, &Verdict); 8] {
    [
        ("ssp", &p.ssp),
        ("sip", &p.sip),
        ("ic", &p.ic),
        ("abelian", &p.abelian),
        ("sr1", &p.sr1),
        ("idem_sr_condition", &p.idem_sr_condition),
        (
            "products_unit_regular",
            &p.product_regular_condition.unit_regular,
        ),
        (
            "products_special_clean",
            &p.product_regular_condition.special_clean,
        ),
    ]
}

/// Renders a verdict's witness with element literals.
pub fn verdict_witness(ring: &FiniteRing, v: &Verdict) -> String {
    let r = |a: Elem| ring.render(a);
    match &v.witness {
        None => "-".into(),
        Some(Witness::IdempotentPair { e, f }) => format!("e={} f={}", r(*e), r(*f)),
        Some(Witness::Element { a }) => format!("a={}", r(*a)),
        Some(Witness::NonCentral { e, a }) => format!("e={} a={}", r(*e), r(*a)),
        Some(Witness::Pair { a, b, .. }) => format!("a={} b={}", r(*a), r(*b)),
        Some(Witness::Factors { factors, product }) => {
            let fs: Vec<String> = factors.iter().map(|&x| r(x)).collect();
            format!("{} = {}", fs.join("*"), r(*product))
        }
        Some(Witness::Cancellation { a1, b, a2, c }) => {
            format!("a1={} b={} a2={} c={}", r(*a1), r(*b), r(*a2), r(*c))
        }
    }
}

pub fn run_classify(command: &[String], spec: &str, cache: &mut ResultCache) -> Result<RunReport> {
    let start = Instant::now();
    let ring = parse_ring_spec(spec)?;
    let mut report = RunReport::new(command);
    let profile = match cache.get::<RingProfile>(ring.spec(), "classify") {
        Some(p) => {
            report.timing.cache_hits += 1;
            p
        }
        None => {
            report.timing.cache_misses += 1;
            let p = ring.profile()?;
            cache.put(ring.spec(), "classify", &p)?;
            p
        }
    };
    report.profiles.push(profile);
    Ok(report.finish(start))
}

pub fn run_decompose(
    command: &[String],
    spec: &str,
    element: &str,
    b: Option<&str>,
    cache: &mut ResultCache,
) -> Result<RunReport> {
    let start = Instant::now();
    let ring = parse_ring_spec(spec)?;
    let a = ring.parse_element(element)?;
    let b = match b {
        Some(lit) => ring.parse_element(lit)?,
        None => ring.minus_one(),
    };
    let mut report = RunReport::new(command);
    let op = format!("decompose:{a}:{b}");
    let trace = match cache.get::<ConstructionTrace>(ring.spec(), &op) {
        Some(t) => {
            report.timing.cache_hits += 1;
            Some(t)
        }
        None => {
            report.timing.cache_misses += 1;
            match ring.solve_unimodular(a, b) {
                Ok(t) => {
                    cache.put(ring.spec(), &op, &t)?;
                    Some(t)
                }
                Err(e @ Error::Construction { .. }) => {
                    report.failures.push(Failure {
                        ring: ring.spec().to_string(),
                        message: e.to_string(),
                    });
                    None
                }
                Err(e) => return Err(e),
            }
        }
    };
    if let Some(trace) = trace {
        let verification = ring.verify_trace(&trace);
        report.traces.push(DecomposeRecord {
            ring: ring.spec().to_string(),
            element: ring.render(a),
            b: ring.render(b),
            idempotent: ring.render(trace.idempotent),
            unit: ring.render(trace.unit),
            trace,
            verification,
        });
    }
    Ok(report.finish(start))
}

enum EntryOutcome {
    Reports(Vec<(SuiteReport, bool)>),
    Failed(Failure),
}

pub fn run_verify(
    command: &[String],
    suites: &[Suite],
    catalog: &[CatalogEntry],
    cache: &mut ResultCache,
) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new(command);
    let shared: &ResultCache = cache;
    let outcomes: Vec<Result<EntryOutcome>> = catalog
        .par_iter()
        .map(|entry| {
            let ring = match entry.load() {
                Ok(r) => r,
                Err(e @ Error::Invariant(_)) => {
                    return Ok(EntryOutcome::Failed(Failure {
                        ring: entry.spec.clone(),
                        message: e.to_string(),
                    }))
                }
                Err(e) => return Err(e),
            };
            let analysis = RingAnalysis::new(ring.clone());
            suites
                .iter()
                .map(|&s| {
                    let op = format!("verify:{}", s.name());
                    match shared.get::<SuiteReport>(ring.spec(), &op) {
                        Some(r) => Ok((r, true)),
                        None => analysis.run(s).map(|r| (r, false)),
                    }
                })
                .collect::<Result<Vec<_>>>()
                .map(EntryOutcome::Reports)
        })
        .collect();
    for outcome in outcomes {
        match outcome? {
            EntryOutcome::Failed(f) => report.failures.push(f),
            EntryOutcome::Reports(rs) => {
                for (r, hit) in rs {
                    if hit {
                        report.timing.cache_hits += 1;
                    } else {
                        report.timing.cache_misses += 1;
                        cache.put(&r.ring, &format!("verify:{}", r.result.name()), &r)?;
                    }
                    report.suites.push(r);
                }
            }
        }
    }
    Ok(report.finish(start))
}

pub fn run_hunt(command: &[String], expression: &str, max_size: usize) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new(command);
    report.hunt = Some(hunt(expression, max_size)?);
    Ok(report.finish(start))
}

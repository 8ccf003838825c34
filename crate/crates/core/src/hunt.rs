//! Property expressions over ring verdicts and the search for rings that
//! satisfy them.
//!
//! ```text
//! expr := term (("|" | "∨") term)*
//! term := factor (("&" | "∧") factor)*
//! factor := ("!" | "¬") factor | "(" expr ")" | atom
//! atom := ssp | sip | ic | sr1 | abelian
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{default_catalog, parse_ring_spec_capped};
use crate::error::{Error, Result};
use crate::ring::FiniteRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Ssp,
    Sip,
    Ic,
    Sr1,
    Abelian,
}

impl Property {
    fn name(self) -> &'static str {
        match self {
            Property::Ssp => "ssp",
            Property::Sip => "sip",
            Property::Ic => "ic",
            Property::Sr1 => "sr1",
            Property::Abelian => "abelian",
        }
    }

    pub fn evaluate(self, ring: &FiniteRing) -> bool {
        match self {
            Property::Ssp => ring.is_ssp().holds,
            Property::Sip => ring.is_sip().holds,
            Property::Ic => ring.is_ic().holds,
            Property::Sr1 => ring.has_stable_range_1().holds,
            Property::Abelian => ring.is_abelian().holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertyExpr {
    Atom(Property),
    Not(Box<PropertyExpr>),
    And(Box<PropertyExpr>, Box<PropertyExpr>),
    Or(Box<PropertyExpr>, Box<PropertyExpr>),
}

impl PropertyExpr {
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = ExprParser { src: s, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected input"));
        }
        Ok(e)
    }

    /// Short-circuits, so only the properties needed are computed.
    pub fn evaluate(&self, ring: &FiniteRing) -> bool {
        match self {
            PropertyExpr::Atom(p) => p.evaluate(ring),
            PropertyExpr::Not(e) => !e.evaluate(ring),
            PropertyExpr::And(a, b) => a.evaluate(ring) && b.evaluate(ring),
            PropertyExpr::Or(a, b) => a.evaluate(ring) || b.evaluate(ring),
        }
    }
}

impl fmt::Display for PropertyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyExpr::Atom(p) => f.write_str(p.name()),
            PropertyExpr::Not(e) => write!(f, "!{e}"),
            PropertyExpr::And(a, b) => write!(f, "({a} & {b})"),
            PropertyExpr::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat_any(&mut self, tokens: &[&str]) -> bool {
        self.skip_ws();
        for t in tokens {
            if self.src[self.pos..].starts_with(t) {
                self.pos += t.len();
                return true;
            }
        }
        false
    }

    fn expr(&mut self) -> Result<PropertyExpr> {
        let mut lhs = self.term()?;
        while self.eat_any(&["|", "∨"]) {
            lhs = PropertyExpr::Or(Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<PropertyExpr> {
        let mut lhs = self.factor()?;
        while self.eat_any(&["&", "∧"]) {
            lhs = PropertyExpr::And(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<PropertyExpr> {
        if self.eat_any(&["!", "¬"]) {
            return Ok(PropertyExpr::Not(Box::new(self.factor()?)));
        }
        if self.eat_any(&["("]) {
            let e = self.expr()?;
            if !self.eat_any(&[")"]) {
                return Err(self.error("expected `)`"));
            }
            return Ok(e);
        }
        self.skip_ws();
        let word: String = self.src[self.pos..]
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric())
            .collect();
        let atom = match word.as_str() {
            "ssp" => Property::Ssp,
            "sip" => Property::Sip,
            "ic" => Property::Ic,
            "sr1" => Property::Sr1,
            "abelian" => Property::Abelian,
            _ => return Err(self.error("expected one of ssp, sip, ic, sr1, abelian")),
        };
        self.pos += word.len();
        Ok(PropertyExpr::Atom(atom))
    }
}

fn int_root(max: usize, exp: u32) -> usize {
    (1..)
        .take_while(|&n: &usize| n.checked_pow(exp).is_some_and(|v| v <= max))
        .last()
        .unwrap_or(0)
}

/// Catalog specs followed by generated `Zn`, `M_k`, `T_k`, `op:T_k` and
/// two-factor product specs, each of size at most `max_size`, deduplicated
/// in first-seen order.
pub fn candidate_specs(max_size: usize) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |s: String| {
        if seen.insert(s.clone()) {
            out.push(s);
        }
    };
    for e in default_catalog() {
        push(e.spec);
    }
    for n in 1..=max_size {
        push(format!("Zn:{n}"));
    }
    for k in 2..=3u32 {
        for n in 2..=int_root(max_size, k * k) {
            push(format!("M{k}:Zn:{n}"));
        }
        let tri = k * (k + 1) / 2;
        for n in 2..=int_root(max_size, tri) {
            push(format!("T{k}:Zn:{n}"));
            push(format!("op:T{k}:Zn:{n}"));
        }
    }
    for a in 2..=max_size {
        for b in a..=max_size / a {
            push(format!("prod:Zn:{a}+Zn:{b}"));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuntResult {
    pub expression: String,
    pub max_size: usize,
    pub candidates: usize,
    pub matches: Vec<String>,
}

pub fn hunt(expression: &str, max_size: usize) -> Result<HuntResult> {
    let expr = PropertyExpr::parse(expression)?;
    let specs = candidate_specs(max_size);
    let rings: Vec<Arc<FiniteRing>> = specs
        .iter()
        .filter_map(|s| match parse_ring_spec_capped(s, max_size) {
            Ok(r) => Some(Ok(r)),
            Err(Error::Capacity { .. }) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    let hits: Vec<bool> = rings.par_iter().map(|r| expr.evaluate(r)).collect();
    Ok(HuntResult {
        expression: expr.to_string(),
        max_size,
        candidates: rings.len(),
        matches: rings
            .iter()
            .zip(hits)
            .filter(|(_, h)| *h)
            .map(|(r, _)| r.spec().to_string())
            .collect(),
    })
}

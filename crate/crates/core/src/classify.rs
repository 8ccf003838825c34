//! Ring-level properties decided by exhaustive scans. Every negative
//! verdict carries a concrete counterexample and every positive verdict
//! records how many cases the completed scan examined.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, FiniteRing};

pub const DEFAULT_ARITY_BOUND: usize = 4;
pub const DEFAULT_CANCELLATION_BOUND: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub scanned: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    fn from_scan(scanned: usize, witness: Option<Witness>) -> Self {
        Verdict {
            holds: witness.is_none(),
            scanned,
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Idempotents whose summands have a sum (or intersection) that is not
    /// a summand.
    IdempotentPair { e: Elem, f: Elem },
    /// A regular element with no unit inner inverse.
    Element { a: Elem },
    /// An idempotent and an element it does not commute with.
    NonCentral { e: Elem, a: Elem },
    /// A pair satisfying the hypothesis for which every candidate in
    /// `exhausted` failed.
    Pair {
        a: Elem,
        b: Elem,
        exhausted: Vec<Elem>,
    },
    /// Factors whose product fails the condition.
    Factors { factors: Vec<Elem>, product: Elem },
    /// `R = A1 ⊕ B = A2 ⊕ C` with `A1 ≅ A2` but `B ≇ C`, each summand named
    /// by its least generating idempotent.
    Cancellation {
        a1: Elem,
        b: Elem,
        a2: Elem,
        c: Elem,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductVerdict {
    pub arity: usize,
    /// Every product of `arity` regular elements is unit-regular.
    pub unit_regular: Verdict,
    /// Every product of `arity` regular elements is special clean.
    pub special_clean: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisComparison {
    /// Regular pairs with `Ra + Rb = R`.
    pub unimodular_pairs: usize,
    /// Regular pairs with `r(a) ∩ r(b) = 0`.
    pub annihilator_pairs: usize,
    /// Regular pairs satisfying exactly one of the two hypotheses.
    pub differing_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneSidedVariants {
    /// Hypothesis `r(a) ∩ r(b) = 0`, conclusion as in the unimodular form.
    pub annihilator: Verdict,
    /// `aR + bR = R` implies an idempotent `e` with `a + be` a unit and
    /// `Ra ⊕ Re = R`; evaluated on the opposite ring.
    pub opposite: Verdict,
    /// Witnesses from the opposite ring re-checked as left-sided
    /// statements in the original ring.
    pub translated_checks: usize,
    pub hypotheses: HypothesisComparison,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CancellationOutcome {
    Checked(Verdict),
    Skipped { size: usize, bound: usize },
}

impl CancellationOutcome {
    pub fn verdict(&self) -> Option<&Verdict> {
        match self {
            CancellationOutcome::Checked(v) => Some(v),
            CancellationOutcome::Skipped { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingProfile {
    pub ring_spec: String,
    pub size: usize,
    pub units: usize,
    pub idempotents: usize,
    pub regular: usize,
    pub ssp: Verdict,
    pub sip: Verdict,
    pub ic: Verdict,
    pub abelian: Verdict,
    pub sr1: Verdict,
    pub idem_sr_condition: Verdict,
    pub product_regular_condition: ProductVerdict,
}

/// Precomputed principal one-sided ideals, as bitsets.
struct Principals {
    right: Vec<FixedBitSet>,
    right_len: Vec<usize>,
    left: Vec<FixedBitSet>,
}

impl Principals {
    fn new(ring: &FiniteRing) -> Self {
        let n = ring.size();
        let mut right = Vec::with_capacity(n);
        let mut left = Vec::with_capacity(n);
        for a in ring.elements() {
            let mut r = FixedBitSet::with_capacity(n);
            let mut l = FixedBitSet::with_capacity(n);
            for x in ring.elements() {
                r.insert(ring.mul(a, x));
                l.insert(ring.mul(x, a));
            }
            right.push(r);
            left.push(l);
        }
        let right_len = right.iter().map(|b| b.count_ones(..)).collect();
        Principals {
            right,
            right_len,
            left,
        }
    }

    /// `Ra + Rb = R`, tested as `1 ∈ Ra + Rb`.
    fn left_unimodular(&self, ring: &FiniteRing, a: Elem, b: Elem) -> bool {
        self.left[a]
            .ones()
            .any(|x| self.left[b].contains(ring.sub(ring.one(), x)))
    }

    /// `aR + bR = R`.
    fn right_unimodular(&self, ring: &FiniteRing, a: Elem, b: Elem) -> bool {
        self.right[a]
            .ones()
            .any(|x| self.right[b].contains(ring.sub(ring.one(), x)))
    }

    /// `aR ⊕ eR = R`.
    fn right_complementary(&self, ring: &FiniteRing, a: Elem, e: Elem) -> bool {
        self.right_len[a] * self.right_len[e] == ring.size()
            && self.right[a].is_disjoint_except_zero(&self.right[e])
    }

    /// `Ra ⊕ Re = R`.
    fn left_complementary(&self, ring: &FiniteRing, a: Elem, e: Elem) -> bool {
        self.left[a].count_ones(..) * self.left[e].count_ones(..) == ring.size()
            && self.left[a].is_disjoint_except_zero(&self.left[e])
    }
}

trait ZeroMeet {
    fn is_disjoint_except_zero(&self, other: &Self) -> bool;
}

impl ZeroMeet for FixedBitSet {
    fn is_disjoint_except_zero(&self, other: &Self) -> bool {
        self.intersection(other).all(|x| x == 0)
    }
}

/// Runs `row` for every `a` in parallel and merges in index order: counts
/// are summed and the witness from the least failing row is kept.
fn scan_rows<F>(rows: &[Elem], row: F) -> Verdict
where
    F: Fn(Elem) -> (usize, Option<Witness>) + Sync,
{
    let results: Vec<(usize, Option<Witness>)> = rows.par_iter().map(|&a| row(a)).collect();
    let scanned = results.iter().map(|r| r.0).sum();
    let witness = results.into_iter().find_map(|r| r.1);
    Verdict::from_scan(scanned, witness)
}

impl FiniteRing {
    fn summand_pair_scan(
        &self,
        combine: impl Fn(&FixedBitSet, &FixedBitSet) -> FixedBitSet,
    ) -> Verdict {
        let idems = self.idempotents();
        let summand_bits: Vec<FixedBitSet> = idems
            .iter()
            .map(|&e| self.principal(e).bits().clone())
            .collect();
        let sizes: Vec<usize> = summand_bits.iter().map(|b| b.count_ones(..)).collect();
        let is_summand = |bits: &FixedBitSet| {
            let len = bits.count_ones(..);
            sizes
                .iter()
                .zip(&summand_bits)
                .any(|(&s, b)| s == len && b.is_subset(bits))
        };
        let mut scanned = 0;
        for (i, &e) in idems.iter().enumerate() {
            for (j, &f) in idems.iter().enumerate() {
                scanned += 1;
                let c = combine(&summand_bits[i], &summand_bits[j]);
                if !is_summand(&c) {
                    return Verdict::from_scan(scanned, Some(Witness::IdempotentPair { e, f }));
                }
            }
        }
        Verdict::from_scan(scanned, None)
    }

    /// `eR + fR` is a direct summand for all idempotents `e, f`.
    pub fn is_ssp(&self) -> Verdict {
        self.summand_pair_scan(|a, b| {
            let mut sum = FixedBitSet::with_capacity(self.size());
            for x in a.ones() {
                for y in b.ones() {
                    sum.insert(self.add(x, y));
                }
            }
            sum
        })
    }

    /// `eR ∩ fR` is a direct summand for all idempotents `e, f`.
    pub fn is_sip(&self) -> Verdict {
        self.summand_pair_scan(|a, b| {
            let mut meet = a.clone();
            meet.intersect_with(b);
            meet
        })
    }

    /// Every regular element is unit-regular.
    pub fn is_ic(&self) -> Verdict {
        let regular = self.regular_elements();
        let witness = regular
            .iter()
            .find(|&&a| self.unit_regular_witness(a).is_none())
            .map(|&a| Witness::Element { a });
        Verdict::from_scan(regular.len(), witness)
    }

    /// `Ra + Rb = R` implies `a + zb` is a unit for some `z`.
    pub fn has_stable_range_1(&self) -> Verdict {
        let p = Principals::new(self);
        let all: Vec<Elem> = self.elements().collect();
        scan_rows(&all, |a| {
            let mut count = 0;
            for b in self.elements() {
                if !p.left_unimodular(self, a, b) {
                    continue;
                }
                count += 1;
                if !self
                    .elements()
                    .any(|z| self.is_unit(self.add(a, self.mul(z, b))))
                {
                    return (
                        count,
                        Some(Witness::Pair {
                            a,
                            b,
                            exhausted: all.clone(),
                        }),
                    );
                }
            }
            (count, None)
        })
    }

    /// Every idempotent is central.
    pub fn is_abelian(&self) -> Verdict {
        let idems = self.idempotents();
        let witness = idems.iter().find_map(|&e| {
            self.elements()
                .find(|&a| self.mul(e, a) != self.mul(a, e))
                .map(|a| Witness::NonCentral { e, a })
        });
        Verdict::from_scan(idems.len() * self.size(), witness)
    }

    /// Least idempotent `e` with `a + eb` a unit and `aR ⊕ eR = R`.
    pub fn idem_sr_witness(&self, a: Elem, b: Elem) -> Option<Elem> {
        let p = Principals::new(self);
        self.idem_sr_witness_with(&p, a, b)
    }

    fn idem_sr_witness_with(&self, p: &Principals, a: Elem, b: Elem) -> Option<Elem> {
        self.idempotents().iter().copied().find(|&e| {
            self.is_unit(self.add(a, self.mul(e, b))) && p.right_complementary(self, a, e)
        })
    }

    fn idem_sr_scan(
        &self,
        p: &Principals,
        hypothesis: impl Fn(Elem, Elem) -> bool + Sync,
    ) -> Verdict {
        let regular = self.regular_elements();
        scan_rows(&regular, |a| {
            let mut count = 0;
            for &b in &regular {
                if !hypothesis(a, b) {
                    continue;
                }
                count += 1;
                if self.idem_sr_witness_with(p, a, b).is_none() {
                    return (
                        count,
                        Some(Witness::Pair {
                            a,
                            b,
                            exhausted: self.idempotents().to_vec(),
                        }),
                    );
                }
            }
            (count, None)
        })
    }

    /// For regular `a, b` with `Ra + Rb = R` there is an idempotent `e`
    /// with `a + eb` a unit and `aR ⊕ eR = R`.
    pub fn idem_sr_condition(&self) -> Verdict {
        let p = Principals::new(self);
        self.idem_sr_scan(&p, |a, b| p.left_unimodular(self, a, b))
    }

    /// `r(a) ∩ r(b) = 0`.
    pub fn annihilators_meet_trivially(&self, a: Elem, b: Elem) -> bool {
        self.elements().all(|r| {
            r == self.zero() || self.mul(a, r) != self.zero() || self.mul(b, r) != self.zero()
        })
    }

    /// Least idempotent `e` with `a + be` a unit and `Ra ⊕ Re = R`, found
    /// by the unimodular search in the opposite ring and re-checked here.
    pub fn right_sided_witness(&self, opposite: &FiniteRing, a: Elem, b: Elem) -> Option<Elem> {
        opposite.idem_sr_witness(a, b)
    }

    pub fn one_sided_variants(&self) -> Result<OneSidedVariants> {
        let p = Principals::new(self);
        let regular = self.regular_elements();
        let annihilator = self.idem_sr_scan(&p, |a, b| self.annihilators_meet_trivially(a, b));

        let op = self.opposite();
        let op_p = Principals::new(&op);
        let opposite = op.idem_sr_scan(&op_p, |a, b| op_p.left_unimodular(&op, a, b));

        // Replay every opposite-ring witness as the left-sided statement in R.
        let mut translated_checks = 0;
        for &a in &regular {
            for &b in &regular {
                if !p.right_unimodular(self, a, b) {
                    continue;
                }
                if let Some(e) = op.idem_sr_witness_with(&op_p, a, b) {
                    let ok = self.is_idempotent(e)
                        && self.is_unit(self.add(a, self.mul(b, e)))
                        && p.left_complementary(self, a, e);
                    if !ok {
                        return Err(Error::Invariant(format!(
                            "{}: opposite-ring witness e={e} for (a={a}, b={b}) fails the left-sided statement",
                            self.spec()
                        )));
                    }
                    translated_checks += 1;
                }
            }
        }

        let mut hypotheses = HypothesisComparison {
            unimodular_pairs: 0,
            annihilator_pairs: 0,
            differing_pairs: 0,
        };
        for &a in &regular {
            for &b in &regular {
                let u = p.left_unimodular(self, a, b);
                let n = self.annihilators_meet_trivially(a, b);
                hypotheses.unimodular_pairs += u as usize;
                hypotheses.annihilator_pairs += n as usize;
                hypotheses.differing_pairs += (u != n) as usize;
            }
        }

        Ok(OneSidedVariants {
            annihilator,
            opposite,
            translated_checks,
            hypotheses,
        })
    }

    pub(crate) fn special_clean_flags(&self) -> &[bool] {
        self.special_clean_flags
            .get_or_init(|| self.elements().map(|a| self.is_special_clean(a)).collect())
    }

    /// Every product of `arity` regular elements is unit-regular; the
    /// special clean form is evaluated alongside. Counterexamples are the
    /// lexicographically least failing factor tuple.
    pub fn product_regular_condition(&self, arity: usize) -> Result<ProductVerdict> {
        self.product_regular_condition_bounded(arity, DEFAULT_ARITY_BOUND)
    }

    pub fn product_regular_condition_bounded(
        &self,
        arity: usize,
        bound: usize,
    ) -> Result<ProductVerdict> {
        if arity < 2 || arity > bound {
            return Err(Error::ArityBound { arity, bound });
        }
        let regular = self.regular_elements();
        // products[m] = set of products of m regular elements
        let mut products: Vec<Vec<Elem>> = vec![vec![self.one()]];
        for m in 1..=arity {
            let mut bits = FixedBitSet::with_capacity(self.size());
            for &r in &regular {
                for &t in &products[m - 1] {
                    bits.insert(self.mul(r, t));
                }
            }
            products.push(bits.ones().collect());
        }
        let full = &products[arity];
        let flags = self.special_clean_flags();
        let not_unit_regular = |x: Elem| self.unit_regular_witness(x).is_none();
        let not_special_clean = |x: Elem| !flags[x];
        let verdict = |bad: &dyn Fn(Elem) -> bool| {
            let witness = full.iter().any(|&x| bad(x)).then(|| {
                let mut prefix = self.one();
                let mut factors = Vec::with_capacity(arity);
                for i in 0..arity {
                    let rest = &products[arity - i - 1];
                    let r = *regular
                        .iter()
                        .find(|&&r| {
                            let p = self.mul(prefix, r);
                            rest.iter().any(|&t| bad(self.mul(p, t)))
                        })
                        .expect("a failing extension exists");
                    factors.push(r);
                    prefix = self.mul(prefix, r);
                }
                Witness::Factors {
                    factors,
                    product: prefix,
                }
            });
            Verdict::from_scan(full.len(), witness)
        };
        Ok(ProductVerdict {
            arity,
            unit_regular: verdict(&not_unit_regular),
            special_clean: verdict(&not_special_clean),
        })
    }

    /// Every element is special clean; the literal reading of the
    /// "product of finitely many elements" condition, since `1` is a factor
    /// of every element.
    pub fn every_element_special_clean(&self) -> Verdict {
        let flags = self.special_clean_flags();
        let witness = self
            .elements()
            .find(|&a| !flags[a])
            .map(|a| Witness::Element { a });
        Verdict::from_scan(self.size(), witness)
    }

    pub fn every_element_unit_regular(&self) -> Verdict {
        let witness = self
            .elements()
            .find(|&a| self.unit_regular_witness(a).is_none())
            .map(|a| Witness::Element { a });
        Verdict::from_scan(self.size(), witness)
    }

    pub fn every_regular_special_clean(&self) -> Verdict {
        let flags = self.special_clean_flags();
        let regular = self.regular_elements();
        let witness = regular
            .iter()
            .find(|&&a| !flags[a])
            .map(|&a| Witness::Element { a });
        Verdict::from_scan(regular.len(), witness)
    }

    /// Direct-sum cancellation: over all decompositions `R = A ⊕ B`,
    /// isomorphic first components force isomorphic complements.
    /// Isomorphism is certified by homomorphism search.
    pub fn cancellation_check(&self) -> Result<CancellationOutcome> {
        self.cancellation_check_bounded(DEFAULT_CANCELLATION_BOUND)
    }

    pub fn cancellation_check_bounded(&self, bound: usize) -> Result<CancellationOutcome> {
        if self.size() > bound {
            return Ok(CancellationOutcome::Skipped {
                size: self.size(),
                bound,
            });
        }
        let summands = self.summands();
        // isomorphism class of each summand
        let mut class = vec![usize::MAX; summands.len()];
        let mut next = 0;
        for i in 0..summands.len() {
            if class[i] != usize::MAX {
                continue;
            }
            class[i] = next;
            for j in i + 1..summands.len() {
                if class[j] == usize::MAX
                    && self
                        .first_hom(&summands[i].1, &summands[j].1, true)?
                        .is_some()
                {
                    class[j] = next;
                }
            }
            next += 1;
        }
        let mut decompositions: Vec<(usize, usize)> = Vec::new();
        for (i, (_, a)) in summands.iter().enumerate() {
            for (j, (_, b)) in summands.iter().enumerate() {
                if self.is_internal_direct_sum(a, b) {
                    decompositions.push((i, j));
                }
            }
        }
        let mut scanned = 0;
        for &(a1, b) in &decompositions {
            for &(a2, c) in &decompositions {
                if class[a1] != class[a2] {
                    continue;
                }
                scanned += 1;
                if class[b] != class[c] {
                    let w = Witness::Cancellation {
                        a1: summands[a1].0,
                        b: summands[b].0,
                        a2: summands[a2].0,
                        c: summands[c].0,
                    };
                    return Ok(CancellationOutcome::Checked(Verdict::from_scan(
                        scanned,
                        Some(w),
                    )));
                }
            }
        }
        Ok(CancellationOutcome::Checked(Verdict::from_scan(
            scanned, None,
        )))
    }

    pub fn profile(&self) -> Result<RingProfile> {
        Ok(RingProfile {
            ring_spec: self.spec().to_string(),
            size: self.size(),
            units: self.units().len(),
            idempotents: self.idempotents().len(),
            regular: self.regular_elements().len(),
            ssp: self.is_ssp(),
            sip: self.is_sip(),
            ic: self.is_ic(),
            abelian: self.is_abelian(),
            sr1: self.has_stable_range_1(),
            idem_sr_condition: self.idem_sr_condition(),
            product_regular_condition: self.product_regular_condition(2)?,
        })
    }
}

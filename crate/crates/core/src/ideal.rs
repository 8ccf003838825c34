//! Right ideals of a finite ring, viewed as submodules of `R_R`.
//!
//! Ideals are stored extensionally as a bitset over element indices plus
//! the generator list they were built from. Equality is extensional.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, FiniteRing};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "IdealRepr", try_from = "IdealRepr")]
pub struct RightIdeal {
    ring: Arc<str>,
    members: FixedBitSet,
    generators: Vec<Elem>,
}

#[derive(Serialize, Deserialize)]
struct IdealRepr {
    ring: String,
    generators: Vec<Elem>,
    members: Vec<Elem>,
}

impl From<RightIdeal> for IdealRepr {
    fn from(ideal: RightIdeal) -> Self {
        IdealRepr {
            ring: ideal.ring.to_string(),
            members: ideal.members().collect(),
            generators: ideal.generators,
        }
    }
}

impl TryFrom<IdealRepr> for RightIdeal {
    type Error = String;

    fn try_from(repr: IdealRepr) -> std::result::Result<Self, String> {
        let len = repr.members.iter().max().map_or(1, |m| m + 1);
        let mut members = FixedBitSet::with_capacity(len);
        for m in repr.members {
            members.insert(m);
        }
        if !members.contains(0) {
            return Err("right ideal must contain 0".into());
        }
        Ok(RightIdeal {
            ring: repr.ring.into(),
            members,
            generators: repr.generators,
        })
    }
}

impl PartialEq for RightIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.members.ones().eq(other.members.ones())
    }
}

impl Eq for RightIdeal {}

impl RightIdeal {
    pub fn ring_spec(&self) -> &str {
        &self.ring
    }

    pub fn members(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.ones()
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.members.contains(a)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_zero(&self) -> bool {
        self.len() == 1
    }

    /// Always false: a right ideal contains at least `0`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn is_subset(&self, other: &RightIdeal) -> bool {
        self.members().all(|m| other.contains(m))
    }

    /// Sort key for the deterministic ordering of ideals: the ascending
    /// member list compared lexicographically.
    pub fn order_key(&self) -> Vec<Elem> {
        self.members().collect()
    }

    pub(crate) fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub(crate) fn same_ring(&self, other: &RightIdeal) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            })
        }
    }
}

impl FiniteRing {
    pub(crate) fn check_ideal_ring(&self, ideal: &RightIdeal) -> Result<()> {
        if *ideal.ring == *self.spec() {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.spec().to_string(),
                right: ideal.ring.to_string(),
            })
        }
    }

    fn ideal_from_bits(&self, members: FixedBitSet, generators: Vec<Elem>) -> RightIdeal {
        RightIdeal {
            ring: self.spec_arc(),
            members,
            generators,
        }
    }

    /// Additive subgroup generated by `seeds`, by worklist saturation.
    pub(crate) fn additive_closure(&self, seeds: &[Elem]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.size());
        bits.insert(self.zero());
        let mut gens: Vec<Elem> = Vec::new();
        for &s in seeds {
            if !bits.contains(s) {
                gens.push(s);
                // Saturate with the new generator before continuing.
                let mut queue: Vec<Elem> = bits.ones().collect();
                let mut i = 0;
                while i < queue.len() {
                    let x = queue[i];
                    i += 1;
                    for &g in &gens {
                        let y = self.add(x, g);
                        if !bits.contains(y) {
                            bits.insert(y);
                            queue.push(y);
                        }
                    }
                }
            }
        }
        bits
    }

    /// The right ideal generated by `generators`.
    pub fn right_ideal(&self, generators: &[Elem]) -> RightIdeal {
        let mut products = FixedBitSet::with_capacity(self.size());
        let mut seeds = Vec::new();
        for &g in generators {
            for r in self.elements() {
                let p = self.mul(g, r);
                if !products.contains(p) {
                    products.insert(p);
                    seeds.push(p);
                }
            }
        }
        seeds.sort_unstable();
        self.ideal_from_bits(self.additive_closure(&seeds), generators.to_vec())
    }

    /// `aR`.
    pub fn principal(&self, a: Elem) -> RightIdeal {
        let mut bits = FixedBitSet::with_capacity(self.size());
        for r in self.elements() {
            bits.insert(self.mul(a, r));
        }
        self.ideal_from_bits(bits, vec![a])
    }

    /// `r(a) = { r : a r = 0 }`.
    pub fn right_annihilator(&self, a: Elem) -> RightIdeal {
        let mut bits = FixedBitSet::with_capacity(self.size());
        for r in self.elements() {
            if self.mul(a, r) == self.zero() {
                bits.insert(r);
            }
        }
        let generators = self.minimal_generators(&bits);
        self.ideal_from_bits(bits, generators)
    }

    pub fn zero_ideal(&self) -> RightIdeal {
        self.principal(self.zero())
    }

    pub fn whole_ideal(&self) -> RightIdeal {
        self.principal(self.one())
    }

    /// Least-index greedy generating subset of a right ideal given by its
    /// members: each member not already in the ideal generated so far is
    /// taken as a generator.
    pub(crate) fn minimal_generators(&self, members: &FixedBitSet) -> Vec<Elem> {
        let target = members.count_ones(..);
        let mut gens = Vec::new();
        let mut current = FixedBitSet::with_capacity(self.size());
        current.insert(self.zero());
        for m in members.ones() {
            if current.count_ones(..) == target {
                break;
            }
            if !current.contains(m) {
                gens.push(m);
                current = self.right_ideal(&gens).members;
            }
        }
        gens
    }

    pub fn ideal_sum(&self, a: &RightIdeal, b: &RightIdeal) -> Result<RightIdeal> {
        self.check_ideal_ring(a)?;
        a.same_ring(b)?;
        let mut bits = FixedBitSet::with_capacity(self.size());
        let bs: Vec<Elem> = b.members().collect();
        for x in a.members() {
            for &y in &bs {
                bits.insert(self.add(x, y));
            }
        }
        let mut generators = a.generators.clone();
        generators.extend_from_slice(&b.generators);
        Ok(self.ideal_from_bits(bits, generators))
    }

    pub fn ideal_intersect(&self, a: &RightIdeal, b: &RightIdeal) -> Result<RightIdeal> {
        self.check_ideal_ring(a)?;
        a.same_ring(b)?;
        let mut bits = FixedBitSet::with_capacity(self.size());
        for x in a.members().filter(|&x| b.contains(x)) {
            bits.insert(x);
        }
        let generators = self.minimal_generators(&bits);
        Ok(self.ideal_from_bits(bits, generators))
    }

    /// Checks closure under addition and right multiplication and that `0`
    /// is a member.
    pub fn is_right_ideal(&self, ideal: &RightIdeal) -> bool {
        if !ideal.contains(self.zero()) || ideal.members().any(|m| m >= self.size()) {
            return false;
        }
        let ms: Vec<Elem> = ideal.members().collect();
        ms.iter().all(|&x| {
            ms.iter().all(|&y| ideal.contains(self.add(x, y)))
                && self.elements().all(|r| ideal.contains(self.mul(x, r)))
        })
    }

    /// `a ∩ b = 0` and `a + b = target`.
    pub fn is_direct_sum_of(&self, a: &RightIdeal, b: &RightIdeal, target: &RightIdeal) -> bool {
        let disjoint = a.members().all(|x| x == self.zero() || !b.contains(x));
        disjoint && a.len() * b.len() == target.len() && a.is_subset(target) && b.is_subset(target)
    }

    /// `R = a ⊕ b`.
    pub fn is_internal_direct_sum(&self, a: &RightIdeal, b: &RightIdeal) -> bool {
        let disjoint = a.members().all(|x| x == self.zero() || !b.contains(x));
        disjoint && a.len() * b.len() == self.size()
    }

    /// Least-index idempotent `e` with `eR = ideal`, if the ideal is a
    /// direct summand.
    pub fn summand_idempotent(&self, ideal: &RightIdeal) -> Option<Elem> {
        let size = ideal.len();
        self.idempotents().iter().copied().find(|&e| {
            ideal.contains(e) && {
                let er = self.principal(e);
                er.len() == size && er.is_subset(ideal)
            }
        })
    }

    /// Distinct direct summands `eR`, each tagged with its least generating
    /// idempotent, in idempotent order.
    pub fn summands(&self) -> Vec<(Elem, RightIdeal)> {
        let mut out: Vec<(Elem, RightIdeal)> = Vec::new();
        for &e in self.idempotents() {
            let er = self.principal(e);
            if !out.iter().any(|(_, s)| *s == er) {
                out.push((e, er));
            }
        }
        out
    }

    /// Every `B` with `R = A ⊕ B`, ordered by least generating idempotent.
    /// Complements of a summand are themselves summands, so scanning the
    /// principal ideals of idempotents is exhaustive.
    pub fn direct_complements(&self, ideal: &RightIdeal) -> Vec<RightIdeal> {
        if self.check_ideal_ring(ideal).is_err() || self.summand_idempotent(ideal).is_none() {
            return Vec::new();
        }
        self.summands()
            .into_iter()
            .filter(|(_, b)| self.is_internal_direct_sum(ideal, b))
            .map(|(_, b)| b)
            .collect()
    }

    /// All right ideals of the ring, sorted by member list. Intended for
    /// small rings only.
    pub fn all_right_ideals(&self) -> Vec<RightIdeal> {
        let mut found: Vec<RightIdeal> = vec![self.zero_ideal()];
        let mut i = 0;
        while i < found.len() {
            let current = found[i].clone();
            i += 1;
            for x in self.elements() {
                if current.contains(x) {
                    continue;
                }
                let mut gens = self.minimal_generators(current.bits());
                gens.push(x);
                let next = self.right_ideal(&gens);
                if !found.contains(&next) {
                    found.push(next);
                }
            }
        }
        for ideal in &mut found {
            ideal.generators = self.minimal_generators(&ideal.members);
        }
        found.sort_by_key(|i| i.order_key());
        found
    }

    /// The idempotent projecting onto `onto` along `along`, when
    /// `R = onto ⊕ along`: the `onto`-component of `1`.
    pub fn projection_idempotent(&self, onto: &RightIdeal, along: &RightIdeal) -> Option<Elem> {
        if !self.is_internal_direct_sum(onto, along) {
            return None;
        }
        onto.members()
            .find(|&c| along.contains(self.sub(self.one(), c)))
    }
}

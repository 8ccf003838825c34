//! Right-module homomorphisms between right ideals.
//!
//! A homomorphism is determined by the images of a generating set; the
//! search enumerates candidate images in the target and extends each
//! candidate additively, rejecting candidates that are not well defined.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::RightIdeal;
use crate::ring::{Elem, FiniteRing};

pub const DEFAULT_CANDIDATE_LIMIT: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleHom {
    pub source: RightIdeal,
    pub target: RightIdeal,
    /// `(s, h(s))` for every member `s` of the source, sorted by `s`.
    pub pairs: Vec<(Elem, Elem)>,
}

impl ModuleHom {
    pub fn apply(&self, s: Elem) -> Option<Elem> {
        self.pairs
            .binary_search_by_key(&s, |p| p.0)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen: Vec<Elem> = self.pairs.iter().map(|p| p.1).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.pairs.len() == self.target.len()
    }
}

impl FiniteRing {
    /// Exhaustive pointwise check that `h` is a total, additive,
    /// right-equivariant map from its source into its target.
    pub fn is_homomorphism(&self, h: &ModuleHom) -> bool {
        let src: Vec<Elem> = h.source.members().collect();
        if h.pairs.len() != src.len() || h.pairs.iter().zip(&src).any(|(p, &s)| p.0 != s) {
            return false;
        }
        if h.pairs.iter().any(|&(_, t)| !h.target.contains(t)) {
            return false;
        }
        let at = |s: Elem| h.apply(s);
        h.pairs.iter().all(|&(s, hs)| {
            h.pairs
                .iter()
                .all(|&(t, ht)| at(self.add(s, t)) == Some(self.add(hs, ht)))
                && self
                    .elements()
                    .all(|r| at(self.mul(s, r)) == Some(self.mul(hs, r)))
        })
    }

    /// The map `x ↦ left · x` restricted to `source`, provided it lands in
    /// `target`.
    pub fn left_multiplication(
        &self,
        left: Elem,
        source: &RightIdeal,
        target: &RightIdeal,
    ) -> Option<ModuleHom> {
        let pairs: Vec<(Elem, Elem)> = source.members().map(|s| (s, self.mul(left, s))).collect();
        if pairs.iter().all(|&(_, t)| target.contains(t)) {
            Some(ModuleHom {
                source: source.clone(),
                target: target.clone(),
                pairs,
            })
        } else {
            None
        }
    }

    pub fn identity_hom(&self, ideal: &RightIdeal) -> ModuleHom {
        self.left_multiplication(self.one(), ideal, ideal)
            .expect("identity maps an ideal into itself")
    }

    /// All homomorphisms `a → b` (only bijective ones with `require_iso`),
    /// in lexicographic order of generator images.
    pub fn hom_search(
        &self,
        a: &RightIdeal,
        b: &RightIdeal,
        require_iso: bool,
    ) -> Result<Vec<ModuleHom>> {
        self.hom_search_limited(a, b, require_iso, DEFAULT_CANDIDATE_LIMIT, usize::MAX)
    }

    /// Least homomorphism in the [`hom_search`](Self::hom_search) order.
    pub fn first_hom(
        &self,
        a: &RightIdeal,
        b: &RightIdeal,
        require_iso: bool,
    ) -> Result<Option<ModuleHom>> {
        Ok(self
            .hom_search_limited(a, b, require_iso, DEFAULT_CANDIDATE_LIMIT, 1)?
            .pop())
    }

    pub fn hom_search_limited(
        &self,
        a: &RightIdeal,
        b: &RightIdeal,
        require_iso: bool,
        candidate_limit: u128,
        max_results: usize,
    ) -> Result<Vec<ModuleHom>> {
        self.check_ideal_ring(a)?;
        a.same_ring(b)?;
        if require_iso && a.len() != b.len() {
            return Ok(Vec::new());
        }
        let gens = self.minimal_generators(a.bits());
        let targets: Vec<Elem> = b.members().collect();
        let candidates = (targets.len() as u128)
            .checked_pow(gens.len() as u32)
            .unwrap_or(u128::MAX);
        if candidates > candidate_limit {
            return Err(Error::SearchLimit {
                candidates,
                limit: candidate_limit,
            });
        }
        let ext = Extender::new(self, &gens);
        let mut out = Vec::new();
        let mut odometer = vec![0usize; gens.len()];
        loop {
            let images: Vec<Elem> = odometer.iter().map(|&i| targets[i]).collect();
            if let Some(dense) = ext.extend(self, &images) {
                let pairs: Vec<(Elem, Elem)> = a.members().map(|s| (s, dense[s] as Elem)).collect();
                let h = ModuleHom {
                    source: a.clone(),
                    target: b.clone(),
                    pairs,
                };
                if !require_iso || h.is_bijective() {
                    debug_assert!(self.is_homomorphism(&h));
                    out.push(h);
                    if out.len() >= max_results {
                        break;
                    }
                }
            }
            // advance, last generator fastest
            let mut pos = gens.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < targets.len() {
                    break;
                }
                odometer[pos] = 0;
            }
        }
        Ok(out)
    }

    /// Two-element certificate for `eR ≅ fR`: `u ∈ eRf`, `v ∈ fRe` with
    /// `uv = e` and `vu = f`. Returns the least such pair.
    pub fn equivalent_idempotents(&self, e: Elem, f: Elem) -> Option<(Elem, Elem)> {
        let erf: Vec<Elem> = {
            let mut bits = FixedBitSet::with_capacity(self.size());
            for r in self.elements() {
                bits.insert(self.mul3(e, r, f));
            }
            bits.ones().collect()
        };
        let fre: Vec<Elem> = {
            let mut bits = FixedBitSet::with_capacity(self.size());
            for r in self.elements() {
                bits.insert(self.mul3(f, r, e));
            }
            bits.ones().collect()
        };
        erf.iter().find_map(|&u| {
            fre.iter()
                .find(|&&v| self.mul(u, v) == e && self.mul(v, u) == f)
                .map(|&v| (u, v))
        })
    }

    /// Isomorphism `eR → fR` built from the two-element certificate as left
    /// multiplication by `v`.
    pub fn summand_isomorphism(&self, e: Elem, f: Elem) -> Option<ModuleHom> {
        let (_, v) = self.equivalent_idempotents(e, f)?;
        self.left_multiplication(v, &self.principal(e), &self.principal(f))
    }

    /// `{ x + φ(x) }`, rejected when it is not a right ideal.
    pub fn graph_module(&self, phi: &ModuleHom) -> Result<RightIdeal> {
        self.check_ideal_ring(&phi.source)?;
        let seeds: Vec<Elem> = phi.pairs.iter().map(|&(s, t)| self.add(s, t)).collect();
        let mut bits = FixedBitSet::with_capacity(self.size());
        for &g in &seeds {
            bits.insert(g);
        }
        for &x in &seeds {
            for &y in &seeds {
                if !bits.contains(self.add(x, y)) {
                    return Err(Error::InvalidGraph(format!(
                        "not closed under addition at {x} + {y}"
                    )));
                }
            }
            for r in self.elements() {
                if !bits.contains(self.mul(x, r)) {
                    return Err(Error::InvalidGraph(format!(
                        "not closed under right multiplication at {x} * {r}"
                    )));
                }
            }
        }
        let gens = self.minimal_generators(&bits);
        let graph = self.right_ideal(&gens);
        debug_assert_eq!(
            graph.bits().ones().collect::<Vec<_>>(),
            bits.ones().collect::<Vec<_>>()
        );
        Ok(graph)
    }

    /// Least idempotent `e` with `eR = a` such that `x ↦ e x` maps `b`
    /// bijectively onto `a`, with that restriction. Such an `e` exists
    /// exactly when `a` and `b` have a common direct complement, namely
    /// `(1 - e)R`.
    pub fn common_complement_idempotent(
        &self,
        a: &RightIdeal,
        b: &RightIdeal,
    ) -> Result<Option<(Elem, ModuleHom)>> {
        self.check_ideal_ring(a)?;
        a.same_ring(b)?;
        if a.len() != b.len() {
            return Ok(None);
        }
        for &e in self.idempotents() {
            if !a.contains(e) || self.principal(e) != *a {
                continue;
            }
            if let Some(h) = self.left_multiplication(e, b, a) {
                if h.is_bijective() {
                    return Ok(Some((e, h)));
                }
            }
        }
        Ok(None)
    }

    /// Converse direction: given `e`, returns `(1 - e)R` when it is a
    /// complement of both `a` and `b` and `eR = a`.
    pub fn common_complement_from_idempotent(
        &self,
        e: Elem,
        a: &RightIdeal,
        b: &RightIdeal,
    ) -> Option<RightIdeal> {
        if !self.is_idempotent(e) || self.principal(e) != *a {
            return None;
        }
        let comp = self.principal(self.sub(self.one(), e));
        (self.is_internal_direct_sum(a, &comp) && self.is_internal_direct_sum(b, &comp))
            .then_some(comp)
    }
}

/// Additive extension of generator images over a fixed source ideal.
struct Extender {
    gens: Vec<Elem>,
    /// Additive generators of the source, each as `g_i · r`.
    additive: Vec<(usize, Elem)>,
    /// Every `g_i · r`, with its generator index and multiplier.
    seeds: Vec<(Elem, usize, Elem)>,
}

impl Extender {
    fn new(ring: &FiniteRing, gens: &[Elem]) -> Self {
        let mut seeds = Vec::new();
        for (i, &g) in gens.iter().enumerate() {
            for r in ring.elements() {
                seeds.push((ring.mul(g, r), i, r));
            }
        }
        let mut span = FixedBitSet::with_capacity(ring.size());
        span.insert(ring.zero());
        let mut additive = Vec::new();
        let mut chosen: Vec<Elem> = Vec::new();
        for &(s, i, r) in &seeds {
            if !span.contains(s) {
                chosen.push(s);
                additive.push((i, r));
                span = ring.additive_closure(&chosen);
            }
        }
        Extender {
            gens: gens.to_vec(),
            additive,
            seeds,
        }
    }

    fn extend(&self, ring: &FiniteRing, images: &[Elem]) -> Option<Vec<u32>> {
        const UNSET: u32 = u32::MAX;
        let mut map = vec![UNSET; ring.size()];
        map[ring.zero()] = ring.zero() as u32;
        let steps: Vec<(Elem, Elem)> = self
            .additive
            .iter()
            .map(|&(i, r)| (ring.mul(self.gens[i], r), ring.mul(images[i], r)))
            .collect();
        let mut queue = vec![ring.zero()];
        let mut k = 0;
        while k < queue.len() {
            let x = queue[k];
            k += 1;
            let hx = map[x] as Elem;
            for &(s, hs) in &steps {
                let y = ring.add(x, s);
                let hy = ring.add(hx, hs) as u32;
                if map[y] == UNSET {
                    map[y] = hy;
                    queue.push(y);
                } else if map[y] != hy {
                    return None;
                }
            }
        }
        for &(s, i, r) in &self.seeds {
            if map[s] != ring.mul(images[i], r) as u32 {
                return None;
            }
        }
        Some(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteRing {
        FiniteRing::zmod(n).unwrap()
    }

    #[test]
    fn identity_is_found() {
        let r = z(12);
        for ideal in r.all_right_ideals() {
            let homs = r.hom_search(&ideal, &ideal, true).unwrap();
            assert!(homs.contains(&r.identity_hom(&ideal)));
        }
    }

    #[test]
    fn cardinality_obstruction() {
        let r = z(6);
        assert!(r
            .hom_search(&r.principal(3), &r.principal(2), true)
            .unwrap()
            .is_empty());
        // only the zero map between {0,3} and {0,2,4}
        let homs = r
            .hom_search(&r.principal(3), &r.principal(2), false)
            .unwrap();
        assert_eq!(homs.len(), 1);
        assert!(homs[0].pairs.iter().all(|p| p.1 == 0));
    }

    #[test]
    fn endomorphisms_of_regular_module_are_left_multiplications() {
        let r = FiniteRing::triangular(2, &z(2)).unwrap();
        let whole = r.whole_ideal();
        let homs = r.hom_search(&whole, &whole, false).unwrap();
        assert_eq!(homs.len(), r.size());
        for h in &homs {
            assert!(r.is_homomorphism(h));
            let c = h.apply(r.one()).unwrap();
            assert_eq!(Some(h), r.left_multiplication(c, &whole, &whole).as_ref());
        }
    }

    #[test]
    fn search_limit_aborts() {
        let r = z(12);
        let w = r.whole_ideal();
        let err = r
            .hom_search_limited(&w, &w, false, 5, usize::MAX)
            .unwrap_err();
        assert!(matches!(
            err,
            Error::SearchLimit {
                candidates: 12,
                limit: 5
            }
        ));
    }

    #[test]
    fn two_element_criterion_agrees_with_search() {
        for r in [
            FiniteRing::matrix(2, &z(2)).unwrap(),
            FiniteRing::triangular(2, &z(3)).unwrap(),
            z(6),
        ] {
            for &e in r.idempotents() {
                for &f in r.idempotents() {
                    let fast = r.equivalent_idempotents(e, f).is_some();
                    let slow = r
                        .first_hom(&r.principal(e), &r.principal(f), true)
                        .unwrap()
                        .is_some();
                    assert_eq!(fast, slow, "{} e={e} f={f}", r.spec());
                    if let Some(h) = r.summand_isomorphism(e, f) {
                        assert!(h.is_bijective() && r.is_homomorphism(&h));
                    }
                }
            }
        }
    }

    #[test]
    fn graph_of_zero_and_identity() {
        let r = z(6);
        let zero = r.zero_ideal();
        assert!(r.graph_module(&r.identity_hom(&zero)).unwrap().is_zero());
        let a = r.principal(2);
        let g = r.graph_module(&r.identity_hom(&a)).unwrap();
        let doubled: Vec<Elem> = {
            let mut v: Vec<Elem> = a.members().map(|x| r.add(x, x)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        assert_eq!(g.order_key(), doubled);
    }

    #[test]
    fn non_equivariant_graph_is_rejected() {
        let r = FiniteRing::matrix(2, &z(2)).unwrap();
        let top = r.principal(r.parse_element("[[1,0],[0,0]]").unwrap());
        let bottom = r.principal(r.parse_element("[[0,0],[0,1]]").unwrap());
        // [[a,b],[0,0]] -> [[0,0],[b,a]] is additive but not equivariant
        // index = 8a + 4b + 2c + d for [[a,b],[c,d]]
        let swap = |x: Elem| 2 * ((x >> 2) & 1) + ((x >> 3) & 1);
        let bad = ModuleHom {
            source: top.clone(),
            target: bottom,
            pairs: top.members().map(|x| (x, swap(x))).collect(),
        };
        assert!(!r.is_homomorphism(&bad));
        assert!(matches!(r.graph_module(&bad), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn common_complement_trivial_cases() {
        let r = z(6);
        let zero = r.zero_ideal();
        let (e, h) = r
            .common_complement_idempotent(&zero, &zero)
            .unwrap()
            .unwrap();
        assert_eq!(e, 0);
        assert_eq!(h.pairs, vec![(0, 0)]);
        let a = r.principal(3);
        let (e, h) = r.common_complement_idempotent(&a, &a).unwrap().unwrap();
        assert_eq!(e, 3);
        assert_eq!(h, r.identity_hom(&a));
        assert_eq!(
            r.common_complement_from_idempotent(e, &a, &a),
            Some(r.principal(4))
        );
    }

    #[test]
    fn json_pairs_sorted() {
        let r = z(6);
        let a = r.principal(3);
        let json = serde_json::to_value(r.identity_hom(&a)).unwrap();
        assert_eq!(json["pairs"], serde_json::json!([[0, 0], [3, 3]]));
    }
}

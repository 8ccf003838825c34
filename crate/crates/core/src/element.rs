//! Element-level classification with witnesses: regular, unit-regular,
//! clean and special clean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, FiniteRing};

/// `a = a x a`, stored in reflexive form so that also `x = x a x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityWitness {
    pub element: Elem,
    pub inner_inverse: Elem,
    pub reflexive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanDecomposition {
    pub element: Elem,
    pub idem: Elem,
    pub unit: Elem,
    /// Whether `aR ∩ eR = 0` holds.
    pub special: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementClassification {
    pub element: Elem,
    pub regular: bool,
    pub unit_regular: bool,
    pub clean: bool,
    pub special_clean: bool,
    pub witnesses: ElementWitnesses,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementWitnesses {
    pub inner_inverse: Option<Elem>,
    pub unit_inner_inverse: Option<Elem>,
    pub clean: Option<(Elem, Elem)>,
    pub special_clean: Vec<(Elem, Elem)>,
}

impl FiniteRing {
    fn inner_inverse_table(&self) -> &[Option<Elem>] {
        self.inner_inverses.get_or_init(|| {
            self.elements()
                .map(|a| self.elements().find(|&x| self.mul3(a, x, a) == a))
                .collect()
        })
    }

    fn unit_inner_inverse_table(&self) -> &[Option<Elem>] {
        self.unit_inner_inverses.get_or_init(|| {
            let units = &self.units().members;
            self.elements()
                .map(|a| units.iter().copied().find(|&u| self.mul3(a, u, a) == a))
                .collect()
        })
    }

    pub fn is_regular(&self, a: Elem) -> bool {
        self.inner_inverse_table()[a].is_some()
    }

    pub fn regular_elements(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_regular(a)).collect()
    }

    /// Least `x` with `a = a x a`, upgraded to `x a x`.
    pub fn regular_witness(&self, a: Elem) -> Option<RegularityWitness> {
        let x = self.inner_inverse_table()[a]?;
        let x = self.mul3(x, a, x);
        debug_assert_eq!(self.mul3(a, x, a), a);
        Some(RegularityWitness {
            element: a,
            inner_inverse: x,
            reflexive: self.mul3(x, a, x) == x,
        })
    }

    /// Least unit `u` with `a = a u a`.
    pub fn unit_regular_witness(&self, a: Elem) -> Option<Elem> {
        self.unit_inner_inverse_table()[a]
    }

    /// `aR ∩ eR = 0`.
    pub fn principal_ideals_disjoint(&self, a: Elem, e: Elem) -> bool {
        let ar = self.principal(a);
        self.elements().all(|r| {
            let x = self.mul(e, r);
            x == self.zero() || !ar.contains(x)
        })
    }

    /// Every special clean decomposition `a = e + u`, ordered by `e`.
    pub fn special_clean_witnesses(&self, a: Elem) -> Vec<CleanDecomposition> {
        let ar = self.principal(a);
        self.idempotents()
            .iter()
            .filter_map(|&e| {
                let u = self.sub(a, e);
                if !self.is_unit(u) {
                    return None;
                }
                let disjoint = self.elements().all(|r| {
                    let x = self.mul(e, r);
                    x == self.zero() || !ar.contains(x)
                });
                disjoint.then_some(CleanDecomposition {
                    element: a,
                    idem: e,
                    unit: u,
                    special: true,
                })
            })
            .collect()
    }

    pub fn is_special_clean(&self, a: Elem) -> bool {
        !self.special_clean_witnesses(a).is_empty()
    }

    /// Least clean decomposition, ignoring the disjointness condition. The
    /// `special` flag reports whether this particular one happens to be
    /// special.
    pub fn is_clean(&self, a: Elem) -> Option<CleanDecomposition> {
        self.idempotents().iter().find_map(|&e| {
            let u = self.sub(a, e);
            self.is_unit(u).then(|| CleanDecomposition {
                element: a,
                idem: e,
                unit: u,
                special: self.principal_ideals_disjoint(a, e),
            })
        })
    }

    /// Replays the derivation that a special clean element is unit-regular:
    /// `a u⁻¹ e` lies in `aR ∩ eR` and so vanishes, whence `a u⁻¹ a = a`.
    /// Returns `u⁻¹`, the unit inner inverse.
    pub fn unit_inverse_from_special_clean(&self, d: &CleanDecomposition) -> Result<Elem> {
        let fail = |what: &str| {
            Err(Error::Invariant(format!(
                "{}: decomposition {} = {} + {}: {what}",
                self.spec(),
                d.element,
                d.idem,
                d.unit
            )))
        };
        let (a, e, u) = (d.element, d.idem, d.unit);
        if !d.special {
            return fail("decomposition is not flagged special");
        }
        if !self.is_idempotent(e) {
            return fail("idempotent part is not idempotent");
        }
        let Some(u_inv) = self.units().inverse(u) else {
            return fail("unit part is not a unit");
        };
        if self.add(e, u) != a {
            return fail("a != e + u");
        }
        if !self.principal_ideals_disjoint(a, e) {
            return fail("aR and eR intersect nontrivially");
        }
        // a u⁻¹ = e u⁻¹ + 1
        if self.mul(a, u_inv) != self.add(self.mul(e, u_inv), self.one()) {
            return fail("a u^-1 != e u^-1 + 1");
        }
        let t = self.mul3(a, u_inv, e);
        let in_ar = self.principal(a).contains(t);
        let in_er = self.principal(e).contains(t);
        if !(in_ar && in_er) {
            return fail("a u^-1 e not in aR ∩ eR");
        }
        if t != self.zero() {
            return fail("a u^-1 e != 0");
        }
        if self.mul3(a, u_inv, self.sub(a, u)) != self.zero() {
            return fail("a u^-1 (a - u) != 0");
        }
        if self.mul3(a, u_inv, a) != a {
            return fail("a u^-1 a != a");
        }
        Ok(u_inv)
    }

    pub fn classify_element(&self, a: Elem) -> ElementClassification {
        let inner = self.regular_witness(a).map(|w| w.inner_inverse);
        let unit_inner = self.unit_regular_witness(a);
        let clean = self.is_clean(a).map(|d| (d.idem, d.unit));
        let special: Vec<(Elem, Elem)> = self
            .special_clean_witnesses(a)
            .into_iter()
            .map(|d| (d.idem, d.unit))
            .collect();
        ElementClassification {
            element: a,
            regular: inner.is_some(),
            unit_regular: unit_inner.is_some(),
            clean: clean.is_some(),
            special_clean: !special.is_empty(),
            witnesses: ElementWitnesses {
                inner_inverse: inner,
                unit_inner_inverse: unit_inner,
                clean,
                special_clean: special,
            },
        }
    }
}

//! Constructive solution of the idempotent stable-range condition in SSP
//! rings with internal cancellation.
//!
//! Given regular `a, b` with `Ra + Rb = R`, [`FiniteRing::solve_unimodular`]
//! builds an idempotent `e` with `a + eb` a unit and `aR ⊕ eR = R`, one
//! step at a time, recording every intermediate ideal and map in a
//! [`ConstructionTrace`]. With `b = -1` this yields special clean
//! decompositions.
//!
//! Step outline:
//!
//! 1. `x`: reflexive inner inverse of `a`.
//! 2. `K = r(a)`, `D = xaR`, `I = aR`, `C = (1 - ax)R`; `R = K ⊕ D = C ⊕ I`.
//! 3. `b` is injective on `K`.
//! 4. `bK = b(1 - xa)R` is a summand `fR`.
//! 5. `g = 1 - ax`, so `gR = C ≅ K ≅ bK = fR`.
//! 6. `L`: least complement of `fR ∩ gR`.
//! 7. `φ : fR ∩ L → gR ∩ L`: least isomorphism, by search.
//! 8. `E = { y + φ(y) }`, with `fR + gR = fR ⊕ E = gR ⊕ E`.
//! 9. `F`: least complement of `fR + gR`.
//! 10. `e`: projection onto `C` along `E ⊕ F`, a common complement of `C`
//!     and `bK`.
//! 11. `a + eb`, checked invertible by table lookup.

use serde::{Deserialize, Serialize};

use crate::element::CleanDecomposition;
use crate::error::{Error, Result};
use crate::hom::ModuleHom;
use crate::ideal::RightIdeal;
use crate::ring::{Elem, FiniteRing};

pub const TRACE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub trace_version: u32,
    pub ring: String,
    pub a: Elem,
    pub b: Elem,
    /// `x` with `a = axa`, `x = xax`.
    pub reflexive_inverse: Elem,
    /// `K = r(a)`.
    pub annihilator: RightIdeal,
    /// `D = xaR`.
    pub coimage: RightIdeal,
    /// `I = aR`.
    pub image: RightIdeal,
    /// `C = (1 - ax)R`.
    pub image_complement: RightIdeal,
    /// `bK`.
    pub b_image: RightIdeal,
    /// `f` with `fR = bK`.
    pub b_image_idempotent: Elem,
    /// `g = 1 - ax`, so `gR = C`.
    pub complement_idempotent: Elem,
    /// `fR ∩ gR`.
    pub meet: RightIdeal,
    /// `L` with `R = (fR ∩ gR) ⊕ L`.
    pub meet_complement: RightIdeal,
    /// `φ : fR ∩ L → gR ∩ L`.
    pub transfer: ModuleHom,
    /// `E`, the graph of `φ`.
    pub graph: RightIdeal,
    /// `fR + gR`.
    pub join: RightIdeal,
    /// `F` with `R = (fR + gR) ⊕ F`.
    pub join_complement: RightIdeal,
    /// `E ⊕ F`.
    pub common_complement: RightIdeal,
    pub idempotent: Elem,
    /// `y ↦ e y` on `bK`, onto `C`.
    pub restriction: ModuleHom,
    /// `a + eb`.
    pub unit: Elem,
    pub metadata: TraceMetadata,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceMetadata {
    /// How `φ` was obtained.
    pub transfer_source: String,
    /// Whether `(1 - ax)R` and `(1 - xa)R` coincide as sets.
    pub c_equals_k: bool,
    /// Two-element certificate `(1 - ax)R ≅ (1 - xa)R`.
    pub c_k_equivalence: Option<(Elem, Elem)>,
    /// Two-element certificate `fR ≅ gR`.
    pub f_g_equivalence: Option<(Elem, Elem)>,
    /// Two-element certificate `(1 - f)R ≅ (1 - g)R`.
    pub complement_equivalence: Option<(Elem, Elem)>,
    /// Least idempotent from the common-complement scan of `(C, bK)`,
    /// independent of the chosen `E ⊕ F`.
    pub least_common_complement_idempotent: Option<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub passed: bool,
    pub checks: Vec<TraceCheck>,
}

impl TraceReport {
    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

fn step_failure(step: u8, reason: impl Into<String>) -> Error {
    Error::Construction {
        step,
        reason: reason.into(),
    }
}

impl FiniteRing {
    /// `Ra + Rb = R`.
    pub fn is_left_unimodular(&self, a: Elem, b: Elem) -> bool {
        let rb: Vec<bool> = {
            let mut v = vec![false; self.size()];
            for s in self.elements() {
                v[self.mul(s, b)] = true;
            }
            v
        };
        self.elements()
            .any(|r| rb[self.sub(self.one(), self.mul(r, a))])
    }

    /// `{ left · s : s ∈ source }` as a right ideal.
    fn image_under(&self, left: Elem, source: &RightIdeal) -> RightIdeal {
        let gens: Vec<Elem> = source
            .generators()
            .iter()
            .map(|&s| self.mul(left, s))
            .collect();
        self.right_ideal(&gens)
    }

    /// Runs the construction. The ring is expected to be SSP with internal
    /// cancellation; on other rings some step may find no candidate, which
    /// is reported with its step number.
    pub fn solve_unimodular(&self, a: Elem, b: Elem) -> Result<ConstructionTrace> {
        let n = self.size();
        if a >= n || b >= n {
            return Err(Error::InvalidArgument(format!(
                "element index out of range for {}",
                self.spec()
            )));
        }
        let wa = self
            .regular_witness(a)
            .ok_or_else(|| Error::Hypothesis(format!("a = {} is not regular", self.render(a))))?;
        if !self.is_regular(b) {
            return Err(Error::Hypothesis(format!(
                "b = {} is not regular",
                self.render(b)
            )));
        }
        if !self.is_left_unimodular(a, b) {
            return Err(Error::Hypothesis("Ra + Rb != R".into()));
        }
        let one = self.one();

        // 1
        let x = wa.inner_inverse;
        let ax = self.mul(a, x);
        let xa = self.mul(x, a);

        // 2
        let annihilator = self.right_annihilator(a);
        let coimage = self.principal(xa);
        let image = self.principal(a);
        let image_complement = self.principal(self.sub(one, ax));
        if !self.is_internal_direct_sum(&annihilator, &coimage)
            || !self.is_internal_direct_sum(&image_complement, &image)
        {
            return Err(step_failure(2, "R = K ⊕ D = C ⊕ I does not hold"));
        }
        if !self
            .left_multiplication(a, &coimage, &image)
            .is_some_and(|h| h.is_bijective())
        {
            return Err(step_failure(
                2,
                "a does not restrict to an isomorphism D → I",
            ));
        }

        // 3
        if annihilator
            .members()
            .any(|k| k != self.zero() && self.mul(b, k) == self.zero())
        {
            return Err(step_failure(3, "K ∩ r(b) != 0"));
        }
        let b_image = self.image_under(b, &annihilator);

        // 4
        let one_minus_xa = self.sub(one, xa);
        let bg = self.mul(b, one_minus_xa);
        if !self.is_regular(bg) {
            return Err(step_failure(4, "b(1 - xa) is not regular"));
        }
        if self.principal(bg) != b_image {
            return Err(step_failure(4, "bK != b(1 - xa)R"));
        }
        let f = self
            .summand_idempotent(&b_image)
            .ok_or_else(|| step_failure(4, "bK is not a direct summand"))?;
        let f_r = self.principal(f);

        // 5
        let g = self.sub(one, ax);
        let g_r = self.principal(g);

        // 6
        let meet = self.ideal_intersect(&f_r, &g_r)?;
        let meet_complement = self
            .direct_complements(&meet)
            .into_iter()
            .next()
            .ok_or_else(|| step_failure(6, "fR ∩ gR is not a direct summand"))?;

        // 7
        let source = self.ideal_intersect(&f_r, &meet_complement)?;
        let target = self.ideal_intersect(&g_r, &meet_complement)?;
        let transfer = self
            .first_hom(&source, &target, true)?
            .ok_or_else(|| step_failure(7, "fR ∩ L and gR ∩ L are not isomorphic"))?;

        // 8
        let graph = self
            .graph_module(&transfer)
            .map_err(|e| step_failure(8, e.to_string()))?;
        let join = self.ideal_sum(&f_r, &g_r)?;
        if !self.is_direct_sum_of(&f_r, &graph, &join)
            || !self.is_direct_sum_of(&g_r, &graph, &join)
        {
            return Err(step_failure(8, "fR + gR = fR ⊕ E = gR ⊕ E does not hold"));
        }

        // 9
        let join_complement = self
            .direct_complements(&join)
            .into_iter()
            .next()
            .ok_or_else(|| step_failure(9, "fR + gR is not a direct summand"))?;

        // 10
        let common_complement = self.ideal_sum(&graph, &join_complement)?;
        if !self.is_internal_direct_sum(&b_image, &common_complement) {
            return Err(step_failure(10, "E ⊕ F does not complement bK"));
        }
        let e = self
            .projection_idempotent(&image_complement, &common_complement)
            .ok_or_else(|| step_failure(10, "E ⊕ F does not complement C"))?;
        let restriction = self
            .left_multiplication(e, &b_image, &image_complement)
            .filter(|h| h.is_bijective())
            .ok_or_else(|| step_failure(10, "e does not map bK isomorphically onto C"))?;

        // 11
        let unit = self.add(a, self.mul(e, b));
        if !self.is_unit(unit) {
            return Err(step_failure(
                11,
                format!("a + eb = {} is not a unit", self.render(unit)),
            ));
        }

        let metadata = TraceMetadata {
            transfer_source: "least isomorphism from exhaustive homomorphism search".into(),
            c_equals_k: image_complement == self.principal(one_minus_xa),
            c_k_equivalence: self.equivalent_idempotents(g, one_minus_xa),
            f_g_equivalence: self.equivalent_idempotents(f, g),
            complement_equivalence: self.equivalent_idempotents(self.sub(one, f), self.sub(one, g)),
            least_common_complement_idempotent: self
                .common_complement_idempotent(&image_complement, &b_image)?
                .map(|(e, _)| e),
        };

        Ok(ConstructionTrace {
            trace_version: TRACE_VERSION,
            ring: self.spec().to_string(),
            a,
            b,
            reflexive_inverse: x,
            annihilator,
            coimage,
            image,
            image_complement,
            b_image,
            b_image_idempotent: f,
            complement_idempotent: g,
            meet,
            meet_complement,
            transfer,
            graph,
            join,
            join_complement,
            common_complement,
            idempotent: e,
            restriction,
            unit,
            metadata,
        })
    }

    /// Special clean decomposition `a = e + (a - e)` from the construction
    /// with `b = -1`.
    pub fn special_clean_decompose(&self, a: Elem) -> Result<CleanDecomposition> {
        let trace = self.solve_unimodular(a, self.minus_one())?;
        let d = CleanDecomposition {
            element: a,
            idem: trace.idempotent,
            unit: self.sub(a, trace.idempotent),
            special: true,
        };
        debug_assert_eq!(d.unit, trace.unit);
        if !self.special_clean_witnesses(a).contains(&d) {
            return Err(Error::Invariant(format!(
                "{}: constructed decomposition {} = {} + {} is not special clean",
                self.spec(),
                self.render(a),
                self.render(d.idem),
                self.render(d.unit)
            )));
        }
        Ok(d)
    }

    /// The unique special clean decomposition of a regular element of an
    /// abelian ring, with uniqueness confirmed by exhaustive count.
    pub fn unique_special_clean_abelian(&self, a: Elem) -> Result<CleanDecomposition> {
        if let Some(w) = self.is_abelian().witness {
            return Err(Error::Hypothesis(format!(
                "{} is not abelian ({w:?})",
                self.spec()
            )));
        }
        if !self.is_regular(a) {
            return Err(Error::Hypothesis(format!(
                "{} is not regular",
                self.render(a)
            )));
        }
        let ws = self.special_clean_witnesses(a);
        match ws.as_slice() {
            [only] => Ok(*only),
            _ => Err(Error::Invariant(format!(
                "{}: {} has {} special clean decompositions in an abelian ring",
                self.spec(),
                self.render(a),
                ws.len()
            ))),
        }
    }

    /// Re-validates every invariant of a trace from scratch.
    pub fn verify_trace(&self, t: &ConstructionTrace) -> TraceReport {
        let mut checks = Vec::new();
        let mut check = |name: &str, passed: bool| {
            checks.push(TraceCheck {
                name: name.to_string(),
                passed,
            })
        };
        let n = self.size();
        let in_range = [
            t.a,
            t.b,
            t.reflexive_inverse,
            t.idempotent,
            t.unit,
            t.b_image_idempotent,
            t.complement_idempotent,
        ]
        .iter()
        .all(|&v| v < n);
        check(
            "ring_matches",
            t.ring == self.spec() && t.trace_version == TRACE_VERSION,
        );
        check("elements_in_range", in_range);
        if !in_range {
            return finish(checks);
        }
        let ideals = [
            &t.annihilator,
            &t.coimage,
            &t.image,
            &t.image_complement,
            &t.b_image,
            &t.meet,
            &t.meet_complement,
            &t.graph,
            &t.join,
            &t.join_complement,
            &t.common_complement,
        ];
        check(
            "ideals_closed",
            ideals
                .iter()
                .all(|i| i.ring_spec() == self.spec() && self.is_right_ideal(i)),
        );

        let one = self.one();
        let (a, b, x, e, f, g) = (
            t.a,
            t.b,
            t.reflexive_inverse,
            t.idempotent,
            t.b_image_idempotent,
            t.complement_idempotent,
        );
        let ax = self.mul(a, x);
        let xa = self.mul(x, a);

        check(
            "hypothesis_regular",
            self.is_regular(a) && self.is_regular(b),
        );
        check("hypothesis_unimodular", self.is_left_unimodular(a, b));
        check("x_inner_inverse", self.mul3(a, x, a) == a);
        check("x_reflexive", self.mul3(x, a, x) == x);
        check(
            "k_is_annihilator",
            t.annihilator == self.right_annihilator(a),
        );
        check("d_is_xa_r", t.coimage == self.principal(xa));
        check("i_is_a_r", t.image == self.principal(a));
        check(
            "c_is_one_minus_ax_r",
            t.image_complement == self.principal(self.sub(one, ax)),
        );
        check(
            "r_is_k_plus_d",
            self.is_internal_direct_sum(&t.annihilator, &t.coimage),
        );
        check(
            "r_is_c_plus_i",
            self.is_internal_direct_sum(&t.image_complement, &t.image),
        );
        check(
            "a_maps_d_onto_i",
            self.left_multiplication(a, &t.coimage, &t.image)
                .is_some_and(|h| h.is_bijective()),
        );
        check(
            "b_injective_on_k",
            t.annihilator
                .members()
                .all(|k| k == self.zero() || self.mul(b, k) != self.zero()),
        );
        let bk: Vec<Elem> = {
            let mut v: Vec<Elem> = t.annihilator.members().map(|k| self.mul(b, k)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        check("bk_is_image_of_k", t.b_image.order_key() == bk);
        check(
            "b_one_minus_xa_regular",
            self.is_regular(self.mul(b, self.sub(one, xa))),
        );
        check(
            "bk_is_f_r",
            self.is_idempotent(f) && self.principal(f) == t.b_image,
        );
        check(
            "g_is_one_minus_ax",
            g == self.sub(one, ax) && self.principal(g) == t.image_complement,
        );
        let f_r = self.principal(f);
        let g_r = self.principal(g);
        check(
            "meet_is_fr_cap_gr",
            self.ideal_intersect(&f_r, &g_r).is_ok_and(|m| m == t.meet),
        );
        check(
            "r_is_meet_plus_l",
            self.is_internal_direct_sum(&t.meet, &t.meet_complement),
        );
        let source = self.ideal_intersect(&f_r, &t.meet_complement).ok();
        let target = self.ideal_intersect(&g_r, &t.meet_complement).ok();
        check(
            "transfer_is_isomorphism",
            source.as_ref() == Some(&t.transfer.source)
                && target.as_ref() == Some(&t.transfer.target)
                && self.is_homomorphism(&t.transfer)
                && t.transfer.is_bijective(),
        );
        let graph: Vec<Elem> = {
            let mut v: Vec<Elem> = t
                .transfer
                .pairs
                .iter()
                .map(|&(s, h)| self.add(s, h))
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        check("e_is_graph", t.graph.order_key() == graph);
        check(
            "join_is_fr_plus_gr",
            self.ideal_sum(&f_r, &g_r).is_ok_and(|j| j == t.join),
        );
        check(
            "join_is_fr_plus_e",
            self.is_direct_sum_of(&f_r, &t.graph, &t.join),
        );
        check(
            "join_is_gr_plus_e",
            self.is_direct_sum_of(&g_r, &t.graph, &t.join),
        );
        check(
            "r_is_join_plus_f",
            self.is_internal_direct_sum(&t.join, &t.join_complement),
        );
        check(
            "common_complement_is_e_plus_f",
            self.is_direct_sum_of(&t.graph, &t.join_complement, &t.common_complement),
        );
        check(
            "r_is_bk_plus_ef",
            self.is_internal_direct_sum(&t.b_image, &t.common_complement),
        );
        check(
            "r_is_c_plus_ef",
            self.is_internal_direct_sum(&t.image_complement, &t.common_complement),
        );
        check("e_idempotent", self.is_idempotent(e));
        check("e_r_is_c", self.principal(e) == t.image_complement);
        check(
            "one_minus_e_r_is_ef",
            self.principal(self.sub(one, e)) == t.common_complement,
        );
        check(
            "e_maps_bk_onto_c",
            self.left_multiplication(e, &t.b_image, &t.image_complement)
                .is_some_and(|h| h.is_bijective() && h == t.restriction),
        );
        check(
            "a_r_plus_e_r",
            self.is_internal_direct_sum(&t.image, &self.principal(e)),
        );
        let h = self.sub(one, xa);
        check(
            "c_isomorphic_to_k",
            t.metadata.c_k_equivalence.is_some_and(|(u, v)| {
                self.mul3(g, u, h) == u
                    && self.mul3(h, v, g) == v
                    && self.mul(u, v) == g
                    && self.mul(v, u) == h
            }),
        );
        check("unit_is_a_plus_eb", t.unit == self.add(a, self.mul(e, b)));
        check("unit_invertible", self.is_unit(t.unit));
        finish(checks)
    }
}

fn finish(checks: Vec<TraceCheck>) -> TraceReport {
    TraceReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

//! Brute-force oracles. Everything here is recomputed from `add`/`mul`
//! table lookups alone and shares no code with the library's scans.

#![allow(dead_code)]

use ringlab::{Elem, FiniteRing};

pub struct Oracle<'a> {
    pub r: &'a FiniteRing,
    pub n: usize,
    pub one: Elem,
    pub units: Vec<bool>,
    pub inverse: Vec<Option<Elem>>,
    pub idempotents: Vec<Elem>,
    /// `right[a][x]` iff `x ∈ aR`.
    pub right: Vec<Vec<bool>>,
    /// `left[a][x]` iff `x ∈ Ra`.
    pub left: Vec<Vec<bool>>,
    pub regular: Vec<bool>,
}

impl<'a> Oracle<'a> {
    pub fn new(r: &'a FiniteRing) -> Self {
        let n = r.size();
        let one = r.one();
        let inverse: Vec<Option<Elem>> = (0..n)
            .map(|a| (0..n).find(|&b| r.mul(a, b) == one && r.mul(b, a) == one))
            .collect();
        let units = inverse.iter().map(Option::is_some).collect();
        let idempotents = (0..n).filter(|&e| r.mul(e, e) == e).collect();
        let mut right = vec![vec![false; n]; n];
        let mut left = vec![vec![false; n]; n];
        for a in 0..n {
            for s in 0..n {
                right[a][r.mul(a, s)] = true;
                left[a][r.mul(s, a)] = true;
            }
        }
        let regular = (0..n)
            .map(|a| (0..n).any(|x| r.mul(r.mul(a, x), a) == a))
            .collect();
        Oracle {
            r,
            n,
            one,
            units,
            inverse,
            idempotents,
            right,
            left,
            regular,
        }
    }

    pub fn unit(&self, a: Elem) -> bool {
        self.units[a]
    }

    pub fn regular_elements(&self) -> Vec<Elem> {
        (0..self.n).filter(|&a| self.regular[a]).collect()
    }

    pub fn unit_regular(&self, a: Elem) -> bool {
        (0..self.n).any(|u| self.units[u] && self.r.mul(self.r.mul(a, u), a) == a)
    }

    fn count(set: &[bool]) -> usize {
        set.iter().filter(|&&b| b).count()
    }

    /// `X ⊕ Y = R` for additive subgroups given as indicator vectors.
    pub fn complementary(&self, x: &[bool], y: &[bool]) -> bool {
        let meet = (1..self.n).all(|t| !(x[t] && y[t]));
        meet && Self::count(x) * Self::count(y) == self.n
    }

    pub fn meet_zero(&self, x: &[bool], y: &[bool]) -> bool {
        (1..self.n).all(|t| !(x[t] && y[t]))
    }

    /// Every special clean decomposition of `a`, as idempotents.
    pub fn special_clean(&self, a: Elem) -> Vec<Elem> {
        self.idempotents
            .iter()
            .copied()
            .filter(|&e| {
                self.unit(self.r.sub(a, e)) && self.meet_zero(&self.right[a], &self.right[e])
            })
            .collect()
    }

    /// `Ra + Rb = R`.
    pub fn left_unimodular(&self, a: Elem, b: Elem) -> bool {
        (0..self.n).any(|x| self.left[a][x] && self.left[b][self.r.sub(self.one, x)])
    }

    /// `aR + bR = R`.
    pub fn right_unimodular(&self, a: Elem, b: Elem) -> bool {
        (0..self.n).any(|x| self.right[a][x] && self.right[b][self.r.sub(self.one, x)])
    }

    /// `{ e : a + eb unit, aR ⊕ eR = R }`.
    pub fn idem_sr_set(&self, a: Elem, b: Elem) -> Vec<Elem> {
        self.idempotents
            .iter()
            .copied()
            .filter(|&e| {
                self.unit(self.r.add(a, self.r.mul(e, b)))
                    && self.complementary(&self.right[a], &self.right[e])
            })
            .collect()
    }

    /// `{ e : a + be unit, Ra ⊕ Re = R }`.
    pub fn idem_sr_left_set(&self, a: Elem, b: Elem) -> Vec<Elem> {
        self.idempotents
            .iter()
            .copied()
            .filter(|&e| {
                self.unit(self.r.add(a, self.r.mul(b, e)))
                    && self.complementary(&self.left[a], &self.left[e])
            })
            .collect()
    }

    pub fn right_annihilators_meet_trivially(&self, a: Elem, b: Elem) -> bool {
        (1..self.n).all(|t| self.r.mul(a, t) != 0 || self.r.mul(b, t) != 0)
    }

    /// Every regular element is unit-regular.
    pub fn ic(&self) -> bool {
        (0..self.n).all(|a| !self.regular[a] || self.unit_regular(a))
    }

    /// The sum of any two summands `eR + fR` is again some `gR`.
    pub fn ssp(&self) -> bool {
        let summands: Vec<&Vec<bool>> = self.idempotents.iter().map(|&e| &self.right[e]).collect();
        summands.iter().all(|x| {
            summands.iter().all(|y| {
                let mut sum = vec![false; self.n];
                for s in (0..self.n).filter(|&s| x[s]) {
                    for t in (0..self.n).filter(|&t| y[t]) {
                        sum[self.r.add(s, t)] = true;
                    }
                }
                summands.iter().any(|z| **z == sum)
            })
        })
    }

    /// Every idempotent commutes with every element.
    pub fn abelian(&self) -> bool {
        self.idempotents
            .iter()
            .all(|&e| (0..self.n).all(|a| self.r.mul(e, a) == self.r.mul(a, e)))
    }

    /// For every regular unimodular pair some idempotent works.
    pub fn idem_sr(&self) -> bool {
        let reg = self.regular_elements();
        reg.iter().all(|&a| {
            reg.iter()
                .all(|&b| !self.left_unimodular(a, b) || !self.idem_sr_set(a, b).is_empty())
        })
    }

    /// `Ra + Rb = R` implies `a + zb` is a unit for some `z`.
    pub fn stable_range_1(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                !self.left_unimodular(a, b)
                    || (0..self.n).any(|z| self.unit(self.r.add(a, self.r.mul(z, b))))
            })
        })
    }

    /// The set of products of two regular elements.
    pub fn products_of_two_regulars(&self) -> Vec<Elem> {
        let reg = self.regular_elements();
        let mut seen = vec![false; self.n];
        for &a in &reg {
            for &b in &reg {
                seen[self.r.mul(a, b)] = true;
            }
        }
        (0..self.n).filter(|&x| seen[x]).collect()
    }
}

pub fn ring(spec: &str) -> std::sync::Arc<FiniteRing> {
    ringlab::catalog::parse_ring_spec(spec).unwrap()
}

//! Finite unital rings as explicit operation tables.
//!
//! Every ring is built from a construction (integers mod n, full or
//! upper-triangular matrices, direct products, opposite rings) and carries
//! its canonical spec string. Elements are indices into a fixed canonical
//! ordering, so witnesses found by least-index scans are reproducible.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::shape::{decode, encode, matrix_positions, Shape};

/// Index of an element in its ring's canonical ordering.
pub type Elem = usize;

pub const DEFAULT_MAX_SIZE: usize = 4096;

/// The units of a ring together with their two-sided inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSet {
    pub members: Vec<Elem>,
    inverse: Vec<Option<Elem>>,
}

impl UnitSet {
    pub fn contains(&self, a: Elem) -> bool {
        self.inverse[a].is_some()
    }

    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        self.inverse[a]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct FiniteRing {
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: Elem,
    one: Elem,
    spec: Arc<str>,
    shape: Shape,
    units: OnceLock<UnitSet>,
    idempotents: OnceLock<Vec<Elem>>,
    pub(crate) inner_inverses: OnceLock<Vec<Option<Elem>>>,
    pub(crate) unit_inner_inverses: OnceLock<Vec<Option<Elem>>>,
    pub(crate) special_clean_flags: OnceLock<Vec<bool>>,
}

fn check_cap(would_be: Option<u128>, cap: usize) -> Result<usize> {
    match would_be {
        Some(n) if n <= cap as u128 => Ok(n as usize),
        Some(n) => Err(Error::Capacity { would_be: n, cap }),
        None => Err(Error::Capacity {
            would_be: u128::MAX,
            cap,
        }),
    }
}

impl FiniteRing {
    fn from_tables(
        size: usize,
        add: Vec<u32>,
        mul: Vec<u32>,
        one: Elem,
        spec: String,
        shape: Shape,
    ) -> Self {
        let mut neg = vec![0u32; size];
        for a in 0..size {
            neg[a] = (0..size)
                .find(|&b| add[a * size + b] == 0)
                .expect("additive inverse exists") as u32;
        }
        FiniteRing {
            size,
            add,
            mul,
            neg,
            zero: 0,
            one,
            spec: spec.into(),
            shape,
            units: OnceLock::new(),
            idempotents: OnceLock::new(),
            inner_inverses: OnceLock::new(),
            unit_inner_inverses: OnceLock::new(),
            special_clean_flags: OnceLock::new(),
        }
    }

    fn tabulate(size: usize, op: impl Fn(Elem, Elem) -> Elem) -> Vec<u32> {
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                table.push(op(a, b) as u32);
            }
        }
        table
    }

    /// The integers modulo `n`.
    pub fn zmod(n: usize) -> Result<Self> {
        Self::zmod_capped(n, DEFAULT_MAX_SIZE)
    }

    pub fn zmod_capped(n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Zn requires n >= 1".into()));
        }
        check_cap(Some(n as u128), cap)?;
        let add = Self::tabulate(n, |a, b| (a + b) % n);
        let mul = Self::tabulate(n, |a, b| (a * b) % n);
        Ok(Self::from_tables(
            n,
            add,
            mul,
            1 % n,
            format!("Zn:{n}"),
            Shape::Zn(n),
        ))
    }

    /// Full `k`×`k` matrices over `base`.
    pub fn matrix(k: usize, base: &FiniteRing) -> Result<Self> {
        Self::matrix_ring(k, base, false, DEFAULT_MAX_SIZE)
    }

    pub fn matrix_capped(k: usize, base: &FiniteRing, cap: usize) -> Result<Self> {
        Self::matrix_ring(k, base, false, cap)
    }

    /// Upper-triangular `k`×`k` matrices over `base`.
    pub fn triangular(k: usize, base: &FiniteRing) -> Result<Self> {
        Self::matrix_ring(k, base, true, DEFAULT_MAX_SIZE)
    }

    pub fn triangular_capped(k: usize, base: &FiniteRing, cap: usize) -> Result<Self> {
        Self::matrix_ring(k, base, true, cap)
    }

    fn matrix_ring(k: usize, base: &FiniteRing, triangular: bool, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("matrix size k must be >= 1".into()));
        }
        let positions = matrix_positions(k, triangular);
        let slots = positions.len();
        let size = check_cap(
            u32::try_from(slots)
                .ok()
                .and_then(|s| (base.size as u128).checked_pow(s)),
            cap,
        )?;
        let radices = vec![base.size; slots];
        let mut slot_index = vec![None; k * k];
        for (s, &(i, j)) in positions.iter().enumerate() {
            slot_index[i * k + j] = Some(s);
        }
        let entries: Vec<Vec<Elem>> = (0..size).map(|x| decode(x, &radices)).collect();
        let add = Self::tabulate(size, |a, b| {
            let sum: Vec<Elem> = entries[a]
                .iter()
                .zip(&entries[b])
                .map(|(&x, &y)| base.add(x, y))
                .collect();
            encode(&sum, &radices)
        });
        let mul = Self::tabulate(size, |a, b| {
            let (ea, eb) = (&entries[a], &entries[b]);
            let entry = |m: &Vec<Elem>, i: usize, j: usize| {
                slot_index[i * k + j].map_or(base.zero, |s| m[s])
            };
            let prod: Vec<Elem> = positions
                .iter()
                .map(|&(i, j)| {
                    (0..k).fold(base.zero, |acc, l| {
                        base.add(acc, base.mul(entry(ea, i, l), entry(eb, l, j)))
                    })
                })
                .collect();
            encode(&prod, &radices)
        });
        let identity: Vec<Elem> = positions
            .iter()
            .map(|&(i, j)| if i == j { base.one } else { base.zero })
            .collect();
        let one = encode(&identity, &radices);
        let tag = if triangular { 'T' } else { 'M' };
        let spec = format!("{tag}{k}:{}", base.spec);
        let shape = Shape::Matrix {
            k,
            triangular,
            base: Box::new(base.shape.clone()),
            base_size: base.size,
        };
        Ok(Self::from_tables(size, add, mul, one, spec, shape))
    }

    /// Direct product with componentwise operations, first factor most
    /// significant in the element ordering.
    pub fn product(factors: &[&FiniteRing]) -> Result<Self> {
        Self::product_capped(factors, DEFAULT_MAX_SIZE)
    }

    pub fn product_capped(factors: &[&FiniteRing], cap: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument(
                "product needs at least one factor".into(),
            ));
        }
        let size = check_cap(
            factors
                .iter()
                .try_fold(1u128, |acc, f| acc.checked_mul(f.size as u128)),
            cap,
        )?;
        let radices: Vec<usize> = factors.iter().map(|f| f.size).collect();
        let coords: Vec<Vec<Elem>> = (0..size).map(|x| decode(x, &radices)).collect();
        let combine = |a: Elem, b: Elem, op: &dyn Fn(&FiniteRing, Elem, Elem) -> Elem| {
            let digits: Vec<Elem> = factors
                .iter()
                .enumerate()
                .map(|(i, f)| op(f, coords[a][i], coords[b][i]))
                .collect();
            encode(&digits, &radices)
        };
        let add = Self::tabulate(size, |a, b| combine(a, b, &|f, x, y| f.add(x, y)));
        let mul = Self::tabulate(size, |a, b| combine(a, b, &|f, x, y| f.mul(x, y)));
        let ones: Vec<Elem> = factors.iter().map(|f| f.one).collect();
        let one = encode(&ones, &radices);
        let specs: Vec<&str> = factors.iter().map(|f| f.spec()).collect();
        let spec = format!("prod:{}", specs.join("+"));
        let shape = Shape::Product(factors.iter().map(|f| (f.shape.clone(), f.size)).collect());
        Ok(Self::from_tables(size, add, mul, one, spec, shape))
    }

    /// Same additive group, multiplication reversed.
    pub fn opposite(&self) -> Self {
        let n = self.size;
        let mul = Self::tabulate(n, |a, b| self.mul(b, a));
        Self::from_tables(
            n,
            self.add.clone(),
            mul,
            self.one,
            format!("op:{}", self.spec),
            Shape::Opposite(Box::new(self.shape.clone())),
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub(crate) fn spec_arc(&self) -> Arc<str> {
        self.spec.clone()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    /// The additive inverse of the identity. Equals `one` in characteristic 2.
    pub fn minus_one(&self) -> Elem {
        self.neg(self.one)
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a * self.size + b] as Elem
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.size + b] as Elem
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a] as Elem
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul3(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        self.mul(self.mul(a, b), c)
    }

    pub fn render(&self, a: Elem) -> String {
        self.shape.render(a)
    }

    pub fn parse_element(&self, literal: &str) -> Result<Elem> {
        self.shape.parse(literal)
    }

    /// True when both rings have identical operation tables.
    pub fn same_tables(&self, other: &FiniteRing) -> bool {
        self.size == other.size
            && self.add == other.add
            && self.mul == other.mul
            && self.one == other.one
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn units(&self) -> &UnitSet {
        self.units.get_or_init(|| {
            let mut inverse = vec![None; self.size];
            for a in self.elements() {
                if inverse[a].is_some() {
                    continue;
                }
                if let Some(b) = self
                    .elements()
                    .find(|&b| self.mul(a, b) == self.one && self.mul(b, a) == self.one)
                {
                    inverse[a] = Some(b);
                    inverse[b] = Some(a);
                }
            }
            let members = self.elements().filter(|&a| inverse[a].is_some()).collect();
            UnitSet { members, inverse }
        })
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.units().contains(a)
    }

    pub fn idempotents(&self) -> &[Elem] {
        self.idempotents
            .get_or_init(|| self.elements().filter(|&e| self.mul(e, e) == e).collect())
    }

    pub fn is_idempotent(&self, e: Elem) -> bool {
        self.mul(e, e) == e
    }

    /// Exhaustive check of the ring axioms; returns the first violation.
    pub fn verify_axioms(&self) -> Result<()> {
        let fail = |what: String| Err(Error::Invariant(format!("{}: {what}", self.spec)));
        let n = self.size;
        for a in 0..n {
            if self.add(a, self.zero) != a || self.add(self.zero, a) != a {
                return fail(format!("zero is not an additive identity for {a}"));
            }
            if self.add(a, self.neg(a)) != self.zero {
                return fail(format!("{a} has no additive inverse"));
            }
            if self.mul(a, self.one) != a || self.mul(self.one, a) != a {
                return fail(format!("one is not a two-sided identity for {a}"));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return fail(format!("addition not commutative at ({a},{b})"));
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail(format!("addition not associative at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail(format!("multiplication not associative at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail(format!("left distributivity fails at ({a},{b},{c})"));
                    }
                    if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
                        return fail(format!("right distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

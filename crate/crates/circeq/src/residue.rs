//! Residue sets modulo `n`, their difference multisets, and affine
//! equivalence.
//!
//! A 0/1 circulant of order `n` corresponds to the set of residues carried on
//! its top row, so equivalence questions about circulants become questions
//! about subsets of `Z/nZ`. The affine maps `x ↦ ux + v` with `gcd(u, n) = 1`
//! act on those subsets; this module decides that action's orbit questions by
//! exhaustive sweep over all `φ(n)·n` maps, with an early rejection through
//! difference multisets (which transform by `Δ ↦ uΔ`, dropping `v`).

use crate::arith::{is_unit, mul_mod, reduce_i64, units};
use crate::error::{CircError, Result};
use crate::Verdict;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// A set of distinct residues modulo `n`, kept sorted and reduced.
///
/// The textual form is `a1,...,ak/n` (empty left side for the empty set), as
/// in `0,1,3/7`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueSet {
    modulus: u64,
    elements: Vec<u64>,
}

/// An affine map `x ↦ ux + v` on `Z/nZ` with `u` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    pub modulus: u64,
    pub u: u64,
    pub v: u64,
}

/// The multiset of the `k²` ordered pairwise differences of a residue set,
/// stored as a dense count vector indexed by residue.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DifferenceMultiset {
    modulus: u64,
    counts: Vec<u64>,
}

impl ResidueSet {
    /// Build from arbitrary signed representatives; duplicates after
    /// reduction are rejected.
    pub fn new(modulus: u64, raw: &[i64]) -> Result<Self> {
        if modulus == 0 {
            return Err(CircError::BadArgument("modulus must be at least 1".into()));
        }
        let mut elements: Vec<u64> = raw.iter().map(|&a| reduce_i64(a, modulus)).collect();
        elements.sort_unstable();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(CircError::BadArgument(format!(
                    "duplicate residue {} modulo {}",
                    w[0], modulus
                )));
            }
        }
        Ok(ResidueSet { modulus, elements })
    }

    /// Internal constructor for already-reduced, sorted, distinct elements.
    fn from_sorted(modulus: u64, elements: Vec<u64>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.iter().all(|&a| a < modulus));
        ResidueSet { modulus, elements }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn weight(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn contains(&self, a: u64) -> bool {
        self.elements.binary_search(&(a % self.modulus)).is_ok()
    }

    /// Image under an affine map, which is again a set of the same size
    /// because `u` is invertible.
    pub fn apply_affine(&self, m: &AffineMap) -> Result<ResidueSet> {
        if m.modulus != self.modulus {
            return Err(CircError::ModulusMismatch { left: self.modulus, right: m.modulus });
        }
        if !is_unit(m.u, self.modulus) {
            return Err(CircError::NotAUnit(m.u, self.modulus));
        }
        let n = self.modulus;
        let mut elements: Vec<u64> = self
            .elements
            .iter()
            .map(|&a| (mul_mod(m.u, a, n) + m.v % n) % n)
            .collect();
        elements.sort_unstable();
        Ok(ResidueSet::from_sorted(n, elements))
    }

    /// The multiset of ordered differences `a - b` over all element pairs.
    pub fn delta(&self) -> DifferenceMultiset {
        let n = self.modulus;
        let mut counts = vec![0u64; n as usize];
        for &a in &self.elements {
            for &b in &self.elements {
                counts[((a + n - b) % n) as usize] += 1;
            }
        }
        DifferenceMultiset { modulus: n, counts }
    }

    /// Lexicographically least image of the set under all affine maps.
    ///
    /// Two sets are affinely equivalent exactly when their canonical forms
    /// coincide, so this doubles as a class representative. The sweep only
    /// materialises, per unit `u`, the `k` translates of `uS` that start at 0:
    /// any lexicographically minimal image must start at 0, and each such
    /// translate is a rotation of the sorted `uS`, so no re-sorting is needed.
    pub fn canonical_affine_form(&self) -> ResidueSet {
        let n = self.modulus;
        let k = self.elements.len();
        if k == 0 {
            return self.clone();
        }
        let mut best: Option<Vec<u64>> = None;
        let mut scaled = vec![0u64; k];
        let mut candidate = vec![0u64; k];
        for u in units(n) {
            for (dst, &a) in scaled.iter_mut().zip(&self.elements) {
                *dst = mul_mod(u, a, n);
            }
            scaled.sort_unstable();
            for i in 0..k {
                let anchor = scaled[i];
                for j in 0..k {
                    let x = scaled[(i + j) % k];
                    candidate[j] = (x + n - anchor) % n;
                }
                if best.as_deref().is_none_or(|b| candidate.as_slice() < b) {
                    best = Some(candidate.clone());
                }
            }
        }
        ResidueSet::from_sorted(n, best.unwrap())
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "/{}", self.modulus)
    }
}

impl FromStr for ResidueSet {
    type Err = CircError;

    fn from_str(text: &str) -> Result<Self> {
        let err = |msg: &str| CircError::ParseSet(text.to_string(), msg.to_string());
        let (left, right) = text
            .split_once('/')
            .ok_or_else(|| err("expected `a1,...,ak/n`"))?;
        if right.contains('/') {
            return Err(err("more than one `/`"));
        }
        let modulus: u64 = right
            .trim()
            .parse()
            .map_err(|_| err("modulus is not a positive integer"))?;
        let mut raw = Vec::new();
        let left = left.trim();
        if !left.is_empty() {
            for part in left.split(',') {
                let a: i64 = part
                    .trim()
                    .parse()
                    .map_err(|_| err("element is not an integer"))?;
                raw.push(a);
            }
        }
        ResidueSet::new(modulus, &raw)
            .map_err(|e| CircError::ParseSet(text.to_string(), e.to_string()))
    }
}

impl Serialize for ResidueSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ResidueSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl AffineMap {
    pub fn new(modulus: u64, u: u64, v: u64) -> Result<Self> {
        if !is_unit(u % modulus.max(1), modulus) {
            return Err(CircError::NotAUnit(u, modulus));
        }
        Ok(AffineMap { modulus, u: u % modulus, v: v % modulus })
    }

    pub fn identity(modulus: u64) -> Self {
        AffineMap { modulus, u: 1 % modulus, v: 0 }
    }

    /// The map `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        if self.modulus != other.modulus {
            return Err(CircError::ModulusMismatch { left: self.modulus, right: other.modulus });
        }
        let n = self.modulus;
        Ok(AffineMap {
            modulus: n,
            u: mul_mod(self.u, other.u, n),
            v: (mul_mod(self.u, other.v, n) + self.v) % n,
        })
    }

    pub fn inverse(&self) -> AffineMap {
        let n = self.modulus;
        let u_inv = crate::arith::inverse_mod(self.u, n).expect("u is a unit by construction");
        AffineMap {
            modulus: n,
            u: u_inv,
            v: (n - mul_mod(u_inv, self.v, n)) % n,
        }
    }
}

impl DifferenceMultiset {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Count of a given difference value.
    pub fn count(&self, d: u64) -> u64 {
        self.counts[(d % self.modulus) as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total count, always `k²` for the difference multiset of a `k`-set.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The multiset `u·Δ` obtained by scaling every difference by a unit.
    pub fn scale(&self, u: u64) -> Result<DifferenceMultiset> {
        let n = self.modulus;
        if !is_unit(u, n) {
            return Err(CircError::NotAUnit(u, n));
        }
        let mut counts = vec![0u64; n as usize];
        for (d, &c) in self.counts.iter().enumerate() {
            counts[mul_mod(u, d as u64, n) as usize] += c;
        }
        Ok(DifferenceMultiset { modulus: n, counts })
    }

    /// Lexicographically least count vector among all unit multiples; equal
    /// canonical forms mean the multisets are related by a unit scaling.
    pub fn canonical_scaling_form(&self) -> DifferenceMultiset {
        let n = self.modulus;
        let mut best: Option<Vec<u64>> = None;
        for u in units(n) {
            let scaled = self.scale(u).expect("u is a unit");
            if best.as_deref().is_none_or(|b| scaled.counts.as_slice() < b) {
                best = Some(scaled.counts);
            }
        }
        DifferenceMultiset { modulus: n, counts: best.unwrap() }
    }
}

/// Decide whether `S = uT + v` for some affine map, sweeping all `φ(n)·n`
/// maps after a difference-multiset rejection test. The returned witness `m`
/// satisfies `apply_affine(T, m) = S`.
pub fn affine_equivalent(s: &ResidueSet, t: &ResidueSet) -> Result<Verdict<AffineMap>> {
    if s.modulus != t.modulus {
        return Err(CircError::ModulusMismatch { left: s.modulus, right: t.modulus });
    }
    if s.weight() != t.weight() {
        return Ok(Verdict::Inequivalent);
    }
    let n = s.modulus;
    // An affine map scales the difference multiset by its unit part, so a
    // failed scaling test rules out equivalence without sweeping translations.
    if !delta_linear_equivalent(&s.delta(), &t.delta())?.is_equivalent() {
        return Ok(Verdict::Inequivalent);
    }
    for u in units(n) {
        for v in 0..n {
            let m = AffineMap { modulus: n, u, v };
            let image = t.apply_affine(&m)?;
            if &image == s {
                let ok = t.apply_affine(&m)? == *s;
                return Ok(Verdict::equivalent_checked(m, ok));
            }
        }
    }
    Ok(Verdict::Inequivalent)
}

/// Decide whether `S = uT` for some unit `u` (translation part fixed to 0).
pub fn linear_equivalent(s: &ResidueSet, t: &ResidueSet) -> Result<Verdict<u64>> {
    if s.modulus != t.modulus {
        return Err(CircError::ModulusMismatch { left: s.modulus, right: t.modulus });
    }
    if s.weight() != t.weight() {
        return Ok(Verdict::Inequivalent);
    }
    let n = s.modulus;
    for u in units(n) {
        let m = AffineMap { modulus: n, u, v: 0 };
        if &t.apply_affine(&m)? == s {
            let ok = t.apply_affine(&m)? == *s;
            return Ok(Verdict::equivalent_checked(u, ok));
        }
    }
    Ok(Verdict::Inequivalent)
}

/// Decide whether `D1 = u·D2` for some unit `u`.
pub fn delta_linear_equivalent(
    d1: &DifferenceMultiset,
    d2: &DifferenceMultiset,
) -> Result<Verdict<u64>> {
    if d1.modulus != d2.modulus {
        return Err(CircError::ModulusMismatch { left: d1.modulus, right: d2.modulus });
    }
    if d1.total() != d2.total() {
        return Ok(Verdict::Inequivalent);
    }
    for u in units(d1.modulus) {
        let scaled = d2.scale(u)?;
        if &scaled == d1 {
            let ok = d2.scale(u)? == *d1;
            return Ok(Verdict::equivalent_checked(u, ok));
        }
    }
    Ok(Verdict::Inequivalent)
}

/// Canonical representatives of every affine class of weight-`k` subsets of
/// `Z/nZ`, in ascending order.
pub fn affine_class_representatives(n: u64, k: usize) -> Vec<ResidueSet> {
    let mut reps = BTreeSet::new();
    let mut current = Vec::with_capacity(k);
    enumerate_subsets(n, k, 0, &mut current, &mut |elements| {
        let set = ResidueSet::from_sorted(n, elements.to_vec());
        reps.insert(set.canonical_affine_form());
    });
    reps.into_iter().collect()
}

/// Call `f` on every sorted `k`-subset of `[0, n)`.
fn enumerate_subsets(n: u64, k: usize, start: u64, current: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if current.len() == k {
        f(current);
        return;
    }
    let remaining = (k - current.len()) as u64;
    if start + remaining > n {
        return;
    }
    for a in start..=(n - remaining) {
        current.push(a);
        enumerate_subsets(n, k, a + 1, current, f);
        current.pop();
    }
}

/// A pair of affinely inequivalent weight-`k` sets whose difference multisets
/// agree up to a unit scaling, i.e. a counterexample to the statement that
/// equal difference multisets force affine equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdaViolation {
    pub s: ResidueSet,
    pub t: ResidueSet,
    /// Unit with `Δ(S) = u·Δ(T)`.
    pub delta_unit: u64,
}

/// Search all weight-`k` affine classes modulo `n` for pairs of distinct
/// classes whose difference multisets agree up to a unit. Returns the sorted
/// list of violating pairs (canonical representatives, `s < t`).
pub fn sda_check(n: u64, k: usize) -> Vec<SdaViolation> {
    let reps = affine_class_representatives(n, k);
    // Group class representatives by the scaling-canonical form of their
    // difference multisets; distinct classes in a group violate the claim.
    let mut groups: std::collections::BTreeMap<DifferenceMultiset, Vec<&ResidueSet>> =
        std::collections::BTreeMap::new();
    for rep in &reps {
        groups.entry(rep.delta().canonical_scaling_form()).or_default().push(rep);
    }
    let mut out = Vec::new();
    for members in groups.values() {
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                let (s, t) = (members[i].clone(), members[j].clone());
                let unit = match delta_linear_equivalent(&s.delta(), &t.delta()) {
                    Ok(Verdict::Equivalent(u)) => u,
                    _ => unreachable!("grouped by scaling-canonical form"),
                };
                out.push(SdaViolation { s, t, delta_unit: unit });
            }
        }
    }
    out.sort_by(|a, b| (&a.s, &a.t).cmp(&(&b.s, &b.t)));
    out
}

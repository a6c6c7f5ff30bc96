//! Exact arithmetic with roots of unity.
//!
//! Sums of `n`-th roots of unity are represented as integer coefficient
//! vectors over the exponents (a group-ring element) and compared through
//! their canonical form: the remainder modulo the `n`-th cyclotomic
//! polynomial, a vector of length `φ(n)`. Because `Φ_n` is the minimal
//! polynomial of a primitive root, two sums are equal as complex numbers
//! exactly when their canonical forms agree — no floating point is involved
//! anywhere.
//!
//! The module also classifies minimal vanishing sums of small weight: a
//! vanishing sum none of whose proper sub-multisets vanishes. Up to rotation
//! (multiplying through by a common root), every minimal sum of weight less
//! than six turns out to be the full set of `d`-th roots of unity for a prime
//! `d`; [`verify_small_weight_structure`] re-proves that mechanically for a
//! range of `n`, together with the prime bound on the orders involved.

use crate::arith::{lcm, primorial, root_order};
use crate::coeff::{Coeff, FromBigInt};
use crate::error::{CircError, Result};
use crate::poly::IntPolynomial;
use crate::report::{ReportBuilder, VerificationReport};
use num_bigint::BigInt;
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

/// Largest total weight accepted by the vanishing-sum minimality analysis.
pub const MAX_VANISHING_WEIGHT: usize = 12;

static PHI_CACHE: Lazy<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// The `n`-th cyclotomic polynomial, computed by exact division of `x^n - 1`
/// by the cyclotomic polynomials of the proper divisors of `n`.
///
/// Results are memoized process-wide; the cache is populated under a lock, so
/// concurrent callers are safe.
pub fn cyclotomic_polynomial<T: Coeff>(n: u64) -> IntPolynomial<T> {
    let coeffs = cyclotomic_coeffs(n);
    IntPolynomial::from_i64_coeffs(&coeffs)
}

fn cyclotomic_coeffs(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let mut cache = PHI_CACHE.lock().expect("cyclotomic cache poisoned");
    if let Some(hit) = cache.get(&n) {
        return hit.clone();
    }
    // Fill the cache bottom-up over the divisors so each polynomial is
    // computed exactly once. The arithmetic runs in arbitrary precision and
    // is narrowed afterwards; coefficients of these polynomials are tiny at
    // every modulus this crate handles.
    for d in crate::arith::divisors(n) {
        if cache.contains_key(&d) {
            continue;
        }
        let mut quotient: IntPolynomial<BigInt> = IntPolynomial::x_pow_minus_one(d as usize);
        for e in crate::arith::divisors(d) {
            if e == d {
                continue;
            }
            let phi_e = IntPolynomial::from_i64_coeffs(&cache[&e]);
            quotient = quotient.div_exact_monic(&phi_e);
        }
        let narrowed: Vec<i64> = quotient.coeffs().iter().map(i64::from_bigint).collect();
        cache.insert(d, Arc::new(narrowed));
    }
    cache[&n].clone()
}

/// Reduction context for sums of `n`-th roots of unity over the scalar `T`.
///
/// Holds the canonical form of every power `ζ^j`, so reducing an element is a
/// sparse sum of table rows.
#[derive(Debug, Clone)]
pub struct CyclotomicRing<T = crate::Int> {
    n: u64,
    phi_degree: usize,
    root_table: Vec<Vec<T>>,
}

impl<T: Coeff + FromBigInt> CyclotomicRing<T> {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let phi: IntPolynomial<BigInt> = cyclotomic_polynomial(n);
        let deg = phi.degree().expect("cyclotomic polynomial is nonzero");
        // Iteratively reduce x^j: multiply by x and fold the overflowing
        // leading term back through the monic modulus.
        let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(n as usize);
        let mut cur = vec![BigInt::from(0); deg.max(1)];
        if deg > 0 {
            cur[0] = BigInt::from(1);
        }
        // For n = 1, Φ_1 = x - 1 has degree 1 and ζ = 1 reduces to [1].
        for _ in 0..n {
            table.push(cur.clone());
            let carry = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::from(0);
            if carry != BigInt::from(0) {
                for i in 0..deg {
                    cur[i] -= &carry * phi.coeff(i);
                }
            }
        }
        let root_table = table
            .into_iter()
            .map(|row| row.iter().map(T::from_bigint).collect())
            .collect();
        CyclotomicRing { n, phi_degree: deg, root_table }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// Degree of the reduction modulus, `φ(n)`.
    pub fn degree(&self) -> usize {
        self.phi_degree
    }

    /// Canonical form of `ζ^j`.
    pub fn root_power(&self, j: u64) -> &[T] {
        &self.root_table[(j % self.n) as usize]
    }

    /// Canonical form of a group-ring element.
    pub fn reduce(&self, elem: &GroupRingElement<T>) -> CanonicalCyclotomic<T> {
        assert_eq!(elem.modulus, self.n, "group-ring element from a different modulus");
        let mut coeffs = vec![T::zero(); self.phi_degree];
        for (j, c) in elem.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &self.root_table[j];
            if c.is_one() {
                for (dst, src) in coeffs.iter_mut().zip(row) {
                    *dst += src;
                }
            } else if (-c.clone()).is_one() {
                for (dst, src) in coeffs.iter_mut().zip(row) {
                    *dst -= src;
                }
            } else {
                for (dst, src) in coeffs.iter_mut().zip(row) {
                    let prod = c.clone() * src.clone();
                    *dst += &prod;
                }
            }
        }
        CanonicalCyclotomic { modulus: self.n, coeffs }
    }

    /// Canonical form of `Σ ζ^{e}` over an exponent multiset.
    pub fn reduce_exponents(&self, exponents: &[u64]) -> CanonicalCyclotomic<T> {
        let mut coeffs = vec![T::zero(); self.phi_degree];
        for &e in exponents {
            for (dst, src) in coeffs.iter_mut().zip(&self.root_table[(e % self.n) as usize]) {
                *dst += src;
            }
        }
        CanonicalCyclotomic { modulus: self.n, coeffs }
    }

    /// Canonical form of an integer constant.
    pub fn constant(&self, c: i64) -> CanonicalCyclotomic<T> {
        let mut coeffs = vec![T::zero(); self.phi_degree];
        coeffs[0] = T::of(c);
        CanonicalCyclotomic { modulus: self.n, coeffs }
    }

    /// Complex conjugate, i.e. the image under `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self, x: &CanonicalCyclotomic<T>) -> CanonicalCyclotomic<T> {
        assert_eq!(x.modulus, self.n);
        let mut elem = GroupRingElement::zero(self.n);
        for (j, c) in x.coeffs.iter().enumerate() {
            elem.coeffs[((self.n - j as u64) % self.n) as usize] = c.clone();
        }
        self.reduce(&elem)
    }
}

/// An integer combination of the formal exponents `ζ^0, ..., ζ^{n-1}`,
/// before reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement<T = crate::Int> {
    modulus: u64,
    coeffs: Vec<T>,
}

impl<T: Coeff> GroupRingElement<T> {
    pub fn zero(modulus: u64) -> Self {
        GroupRingElement { modulus, coeffs: vec![T::zero(); modulus as usize] }
    }

    /// One summand per listed exponent (repeats accumulate).
    pub fn from_exponents(modulus: u64, exponents: &[u64]) -> Self {
        let mut e = Self::zero(modulus);
        for &x in exponents {
            e.coeffs[(x % modulus) as usize] += &T::one();
        }
        e
    }

    pub fn from_counts(modulus: u64, counts: &[u64]) -> Self {
        assert_eq!(counts.len(), modulus as usize);
        GroupRingElement {
            modulus,
            coeffs: counts.iter().map(|&c| T::of(c as i64)).collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeff_mut(&mut self, exponent: u64) -> &mut T {
        &mut self.coeffs[(exponent % self.modulus) as usize]
    }
}

/// The canonical form of a sum of `n`-th roots of unity: its remainder
/// modulo `Φ_n`, a coefficient vector of length `φ(n)`. Equality of canonical
/// forms is equality of the complex numbers they denote.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCyclotomic<T = crate::Int> {
    modulus: u64,
    coeffs: Vec<T>,
}

impl<T: Coeff> CanonicalCyclotomic<T> {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when the value is the rational integer `c` (canonical form has
    /// everything in the constant coefficient).
    pub fn is_integer(&self, c: i64) -> bool {
        self.coeffs[0] == T::of(c) && self.coeffs[1..].iter().all(|x| x.is_zero())
    }

    pub fn to_i64_coeffs(&self) -> Result<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| {
                num_traits::ToPrimitive::to_i64(c)
                    .ok_or_else(|| CircError::BadArgument("coefficient exceeds i64".into()))
            })
            .collect()
    }
}

/// Does the sum of roots `Σ ζ^{e}` over the exponent multiset vanish?
pub fn is_vanishing<T: Coeff + FromBigInt>(ring: &CyclotomicRing<T>, exponents: &[u64]) -> bool {
    ring.reduce_exponents(exponents).is_zero()
}

/// Is the sum vanishing with no proper nonempty vanishing sub-multiset?
///
/// Weight is capped at [`MAX_VANISHING_WEIGHT`] because the sub-multiset
/// sweep is exponential in it.
pub fn is_minimal_vanishing<T: Coeff + FromBigInt>(
    ring: &CyclotomicRing<T>,
    exponents: &[u64],
) -> Result<bool> {
    let w = exponents.len();
    if w > MAX_VANISHING_WEIGHT {
        return Err(CircError::WeightBound(w, MAX_VANISHING_WEIGHT));
    }
    if w == 0 || !is_vanishing(ring, exponents) {
        return Ok(false);
    }
    // Collapse to (value, multiplicity) and walk the odometer of proper
    // nonempty sub-multisets.
    let mut grouped: BTreeMap<u64, usize> = BTreeMap::new();
    for &e in exponents {
        *grouped.entry(e % ring.modulus()).or_insert(0) += 1;
    }
    let values: Vec<u64> = grouped.keys().copied().collect();
    let mults: Vec<usize> = grouped.values().copied().collect();
    let mut take = vec![0usize; values.len()];
    let mut sub = Vec::with_capacity(w);
    loop {
        // advance the odometer
        let mut i = 0;
        loop {
            if i == take.len() {
                return Ok(true); // exhausted without finding a vanishing subset
            }
            take[i] += 1;
            if take[i] <= mults[i] {
                break;
            }
            take[i] = 0;
            i += 1;
        }
        let total: usize = take.iter().sum();
        if total == w {
            continue; // the full multiset is not a *proper* subset
        }
        sub.clear();
        for (j, &c) in take.iter().enumerate() {
            for _ in 0..c {
                sub.push(values[j]);
            }
        }
        if is_vanishing(ring, &sub) {
            return Ok(false);
        }
    }
}

/// Lexicographically least rotation of an exponent multiset: the canonical
/// representative of its class under multiplication by a common root.
pub fn rotation_canonical(n: u64, exponents: &[u64]) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for s in 0..n {
        let mut shifted: Vec<u64> = exponents.iter().map(|&e| (e + s) % n).collect();
        shifted.sort_unstable();
        if best.as_deref().is_none_or(|b| shifted.as_slice() < b) {
            best = Some(shifted);
        }
    }
    best.unwrap_or_default()
}

/// All minimal vanishing sums of `n`-th roots with weight up to `max_weight`,
/// one representative per rotation class, sorted. Exponent multisets are
/// returned sorted ascending.
pub fn enumerate_minimal_vanishing(n: u64, max_weight: usize) -> Result<Vec<Vec<u64>>> {
    if max_weight > MAX_VANISHING_WEIGHT {
        return Err(CircError::WeightBound(max_weight, MAX_VANISHING_WEIGHT));
    }
    let ring: CyclotomicRing<i64> = CyclotomicRing::new(n);
    let mut classes: BTreeSet<Vec<u64>> = BTreeSet::new();
    // Every rotation class of a nonempty multiset has a member containing
    // exponent 0, so anchoring the first exponent at 0 loses nothing.
    let mut current = vec![0u64];
    for w in 1..=max_weight {
        enumerate_sorted_multisets(n, w, &mut current, &mut |exps| {
            if is_vanishing(&ring, exps)
                && is_minimal_vanishing(&ring, exps).expect("weight within bound")
            {
                classes.insert(rotation_canonical(n, exps));
            }
        });
    }
    Ok(classes.into_iter().collect())
}

/// Extend `current` (which starts as `[0]`) to all sorted multisets of total
/// weight `w` with entries in `[0, n)`.
fn enumerate_sorted_multisets(
    n: u64,
    w: usize,
    current: &mut Vec<u64>,
    f: &mut impl FnMut(&[u64]),
) {
    if current.len() == w {
        f(current);
        return;
    }
    let lo = *current.last().expect("anchored at 0");
    for e in lo..n {
        current.push(e);
        enumerate_sorted_multisets(n, w, current, f);
        current.pop();
    }
}

/// Re-prove, for every `n ≤ n_bound`, that each minimal vanishing sum of
/// weight `< 6` is a rotation of the full set of `d`-th roots of unity with
/// `d` prime, and that the least common multiple of the orders appearing in
/// its 0-anchored representative divides the product of the primes `≤ d`.
pub fn verify_small_weight_structure(n_bound: u64) -> VerificationReport {
    let mut report = ReportBuilder::new("small-vanishing-structure");
    report.param("n_bound", n_bound);
    let mut classes_checked = 0u64;
    for n in 1..=n_bound {
        let classes = enumerate_minimal_vanishing(n, 5).expect("weight 5 within bound");
        for class in classes {
            classes_checked += 1;
            let d = class.len() as u64;
            let mut problems = Vec::new();
            if !crate::arith::is_prime(d) {
                problems.push(format!("weight {d} is not prime"));
            }
            if n % d != 0 {
                problems.push(format!("weight {d} does not divide n"));
            } else {
                let full_roots: Vec<u64> = (0..d).map(|j| j * (n / d)).collect();
                if class != rotation_canonical(n, &full_roots) {
                    problems.push("not a rotation of the full set of d-th roots".into());
                }
            }
            // Mann's bound: orders in the 0-anchored representative divide
            // the product of primes up to the weight.
            let order_lcm = class.iter().fold(1u64, |acc, &e| lcm(acc, root_order(n, e)));
            if primorial(d) % order_lcm != 0 {
                problems.push(format!(
                    "lcm of orders {order_lcm} exceeds the primorial bound {}",
                    primorial(d)
                ));
            }
            if !problems.is_empty() {
                report.violation(serde_json::json!({
                    "n": n,
                    "class": class,
                    "problems": problems,
                }));
            }
        }
    }
    report.param("classes_checked", classes_checked);
    report.finish()
}

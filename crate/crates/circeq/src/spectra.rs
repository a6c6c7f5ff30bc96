//! Exact eigenvalue multisets of circulant autocorrelations.
//!
//! For a residue set `S = {a_1, ..., a_k}` modulo `n`, the autocorrelation
//! `AAᵀ` of the corresponding circulant is itself circulant, and its
//! eigenvalues are the `n` sums `Σ_{i,j} ζ^{(a_i - a_j) r}` for
//! `r = 0, ..., n-1`. Each eigenvalue is a sum of roots of unity and is held
//! exactly as a canonical cyclotomic form; the spectrum is the sorted
//! multiset of those forms. No floating point is involved, so spectral
//! equality decided here is genuine equality of complex multisets.

use crate::coeff::{Coeff, FromBigInt};
use crate::cyclotomic::{CanonicalCyclotomic, CyclotomicRing};
use crate::error::{CircError, Result};
use crate::residue::ResidueSet;
use sha2::{Digest, Sha256};
use std::fmt;

/// Sorted multiset of the `n` exact eigenvalues of an autocorrelation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spectrum<T = crate::Int> {
    modulus: u64,
    entries: Vec<CanonicalCyclotomic<T>>,
}

impl<T: Coeff> Spectrum<T> {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The sorted eigenvalue multiset.
    pub fn entries(&self) -> &[CanonicalCyclotomic<T>] {
        &self.entries
    }

    /// Multiplicity of the rational integer `c` in the spectrum.
    pub fn count_integer(&self, c: i64) -> u64 {
        self.entries.iter().filter(|e| e.is_integer(c)).count() as u64
    }

    /// Entries grouped as (multiplicity, value), sorted by value.
    pub fn grouped(&self) -> Vec<(u64, &CanonicalCyclotomic<T>)> {
        let mut out: Vec<(u64, &CanonicalCyclotomic<T>)> = Vec::new();
        for e in &self.entries {
            match out.last_mut() {
                Some((count, prev)) if *prev == e => *count += 1,
                _ => out.push((1, e)),
            }
        }
        out
    }
}

/// Stable digest of a spectrum, usable as a grouping key across runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint(pub [u8; 32]);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// The exact eigenvalue multiset of `AAᵀ` for the circulant of `S`.
///
/// Computed from the difference multiset: the eigenvalue at `r` is
/// `Σ_d Δ(S)[d] · ζ^{dr}`. The `r = 0` entry is the rational integer `k²`.
pub fn autocorrelation_spectrum<T: Coeff + FromBigInt>(
    ring: &CyclotomicRing<T>,
    s: &ResidueSet,
) -> Spectrum<T> {
    assert_eq!(ring.modulus(), s.modulus(), "ring and set modulus must agree");
    let n = ring.modulus();
    let delta = s.delta();
    let k2 = (s.weight() * s.weight()) as i64;
    let mut entries = Vec::with_capacity(n as usize);
    for r in 0..n {
        let mut elem = crate::cyclotomic::GroupRingElement::<T>::zero(n);
        for (d, &c) in delta.counts().iter().enumerate() {
            if c > 0 {
                *elem.coeff_mut(crate::arith::mul_mod(d as u64, r, n)) += &T::of(c as i64);
            }
        }
        let value = ring.reduce(&elem);
        if r == 0 {
            debug_assert!(value.is_integer(k2), "r = 0 eigenvalue must be k²");
        }
        entries.push(value);
    }
    entries.sort_unstable();
    Spectrum { modulus: n, entries }
}

/// The exact eigenvalue multiset of the circulant of `S` itself:
/// `{Σ_{a ∈ S} ζ^{ar} : 0 ≤ r < n}`. Invariant under conjugation by any
/// permutation, so unequal multisets rule out `B = PAP⁻¹`.
pub fn circulant_eigenvalues<T: Coeff + FromBigInt>(
    ring: &CyclotomicRing<T>,
    s: &ResidueSet,
) -> Spectrum<T> {
    assert_eq!(ring.modulus(), s.modulus());
    let n = ring.modulus();
    let mut entries = Vec::with_capacity(n as usize);
    let mut exps = Vec::with_capacity(s.weight());
    for r in 0..n {
        exps.clear();
        exps.extend(s.elements().iter().map(|&a| crate::arith::mul_mod(a, r, n)));
        entries.push(ring.reduce_exponents(&exps));
    }
    entries.sort_unstable();
    Spectrum { modulus: n, entries }
}

/// Are the two eigenvalue multisets equal? Errors on modulus mismatch, since
/// spectra over different cyclotomic fields are not comparable entrywise.
pub fn spectra_equal<T: Coeff>(a: &Spectrum<T>, b: &Spectrum<T>) -> Result<bool> {
    if a.modulus != b.modulus {
        return Err(CircError::ModulusMismatch { left: a.modulus, right: b.modulus });
    }
    Ok(a.entries == b.entries)
}

/// Multiplicity of the maximal eigenvalue `k²` in the autocorrelation
/// spectrum of `S`.
///
/// Computed spectrally, then cross-asserted against the closed form
/// `gcd(n, all pairwise differences)` (with the empty gcd equal to `n`);
/// a disagreement would mean one of the two routes is broken, so it aborts.
pub fn k2_multiplicity<T: Coeff + FromBigInt>(ring: &CyclotomicRing<T>, s: &ResidueSet) -> u64 {
    let n = ring.modulus();
    let spectral = autocorrelation_spectrum(ring, s)
        .count_integer((s.weight() * s.weight()) as i64);
    let by_gcd = s
        .elements()
        .iter()
        .flat_map(|&a| s.elements().iter().map(move |&b| (a + n - b) % n))
        .fold(n, crate::arith::gcd);
    assert_eq!(spectral, by_gcd, "spectral count and gcd formula disagree for {s}");
    spectral
}

/// SHA-256 digest over a canonical text encoding of the spectrum. Equal
/// spectra produce equal digests on every platform and instantiation (the
/// encoding renders coefficients in decimal).
pub fn spectrum_fingerprint<T: Coeff>(sp: &Spectrum<T>) -> Fingerprint {
    fingerprint_canonical_list(sp.modulus, &sp.entries)
}

/// Digest of any sorted list of canonical cyclotomic values.
///
/// The hash covers the modulus and the decimal text of every coefficient, so
/// it is stable across scalar instantiations and process runs.
pub fn fingerprint_canonical_list<T: Coeff>(
    modulus: u64,
    entries: &[CanonicalCyclotomic<T>],
) -> Fingerprint {
    let mut hasher = Sha256::new();
    hasher.update(modulus.to_string());
    hasher.update(";");
    for e in entries {
        for c in e.coeffs() {
            hasher.update(c.to_string());
            hasher.update(",");
        }
        hasher.update("|");
    }
    Fingerprint(hasher.finalize().into())
}

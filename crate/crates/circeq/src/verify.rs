//! Re-verification suites for the classification claims behind the deciders.
//!
//! Each function here re-derives one published-style claim from scratch and
//! packages the outcome as a [`VerificationReport`]:
//!
//! * agreement of the four equivalence conditions (affine, `PAQ`, similarity
//!   of autocorrelations, exact spectra) over exhaustive class enumerations,
//! * the weight-2 class count `τ(n) − 1` with pairwise-distinct spectra,
//! * the power-spectrum classification of conjugate-closed root-of-unity
//!   sextuples built from triples with product 1,
//! * exact rational linear algebra for the difference-multiset systems at
//!   weights 4 and 5 (denominator prime sets, integer-span membership),
//! * the case list of conjugate-closed sextuple pairs with equal sums.
//!
//! Every enumeration order is deterministic, so re-running a suite with the
//! same parameters reproduces the same report content.

use crate::arith::{factorize, gcd, is_prime, lcm, mul_mod, tau, units};
use crate::cyclotomic::{CanonicalCyclotomic, CyclotomicRing};
use crate::linalg::{hnf_rows, in_lattice, minimal_denominator, row_space_kernel};
use crate::matgraph::{perm_similar, pq_equivalent, BinaryMatrix, IntMatrix};
use crate::report::{ReportBuilder, VerificationReport};
use crate::residue::{affine_class_representatives, affine_equivalent, AffineMap, ResidueSet};
use crate::spectra::{autocorrelation_spectrum, fingerprint_canonical_list, Fingerprint, Spectrum};
use itertools::Itertools;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Check that the four equivalence conditions agree on every pair of
/// weight-`≤ 3` affine class representatives with modulus up to `n_max`.
pub fn verify_theorem1(n_max: u64) -> VerificationReport {
    verify_equivalence_agreement("four-conditions-agree-weight-le-3", 1, n_max, 0, 3, None)
}

/// Exhaustive agreement check of the four conditions over a parameter box.
///
/// For every modulus in `n_lo..=n_hi` and weight in `k_lo..=k_hi`, all pairs
/// of affine class representatives (including each representative with
/// itself) are run through all four deciders; any disagreement is recorded.
/// Additionally, one nontrivial affine image of each representative is
/// checked to exercise the implication chain on genuinely equivalent pairs.
pub fn verify_equivalence_agreement(
    claim: &str,
    n_lo: u64,
    n_hi: u64,
    k_lo: usize,
    k_hi: usize,
    budget: Option<u64>,
) -> VerificationReport {
    let budget = budget.unwrap_or(crate::DEFAULT_NODE_BUDGET);
    let mut b = ReportBuilder::new(claim);
    b.param("n-min", n_lo);
    b.param("n-max", n_hi);
    b.param("k-min", k_lo);
    b.param("k-max", k_hi);
    b.param("budget", budget);
    let mut pairs = 0u64;
    for n in n_lo..=n_hi {
        let ring: CyclotomicRing<i64> = CyclotomicRing::new(n);
        for k in k_lo..=k_hi.min(n as usize) {
            let reps = affine_class_representatives(n, k);
            let mats: Vec<BinaryMatrix> = reps
                .iter()
                .map(|s| BinaryMatrix::circulant(s).expect("modulus within matrix cap"))
                .collect();
            let autos: Vec<IntMatrix> = mats.iter().map(|m| m.autocorrelation()).collect();
            let specs: Vec<Spectrum<i64>> =
                reps.iter().map(|s| autocorrelation_spectrum(&ring, s)).collect();
            for i in 0..reps.len() {
                for j in i..reps.len() {
                    pairs += 1;
                    check_four_conditions(
                        &mut b,
                        budget,
                        (&reps[i], &mats[i], &autos[i], &specs[i]),
                        (&reps[j], &mats[j], &autos[j], &specs[j]),
                    );
                }
                // a nontrivial affine image of the representative: the chain
                // must come back all-true
                let u = *units(n).last().expect("unit group nonempty");
                let map = AffineMap::new(n, u, 1 % n).expect("u is a unit");
                let image = reps[i].apply_affine(&map).expect("same modulus");
                let im_mat = BinaryMatrix::circulant(&image).expect("modulus within cap");
                let im_auto = im_mat.autocorrelation();
                let im_spec = autocorrelation_spectrum(&ring, &image);
                pairs += 1;
                check_four_conditions(
                    &mut b,
                    budget,
                    (&reps[i], &mats[i], &autos[i], &specs[i]),
                    (&image, &im_mat, &im_auto, &im_spec),
                );
            }
        }
    }
    b.param("pairs-checked", pairs);
    b.finish()
}

type Instance<'a> = (&'a ResidueSet, &'a BinaryMatrix, &'a IntMatrix, &'a Spectrum<i64>);

fn check_four_conditions(b: &mut ReportBuilder, budget: u64, x: Instance, y: Instance) {
    let affine = affine_equivalent(x.0, y.0)
        .expect("same modulus")
        .decided()
        .expect("affine decider is exhaustive");
    let spectral = x.3 == y.3;
    let pq = pq_equivalent(x.1, y.1, budget).expect("same order");
    let similar = perm_similar(x.2, y.2, budget).expect("same order");
    let (Some(pq), Some(similar)) = (pq.decided(), similar.decided()) else {
        b.mark_inconclusive();
        return;
    };
    if !(affine == pq && pq == similar && similar == spectral) {
        b.violation(json!({
            "s": x.0.to_string(),
            "t": y.0.to_string(),
            "affine": affine,
            "pq": pq,
            "autocorrelation-similar": similar,
            "spectral": spectral,
        }));
    }
}

/// Canonical representatives of the weight-2 affine classes mod `n`.
///
/// Every weight-2 set is a translate of some `{0, e}`, so canonicalizing
/// those `n − 1` sets covers every class.
pub fn weight2_class_representatives(n: u64) -> Vec<ResidueSet> {
    let mut canon: BTreeSet<ResidueSet> = BTreeSet::new();
    for e in 1..n {
        let s = ResidueSet::new(n, &[0, e as i64]).expect("distinct residues");
        canon.insert(s.canonical_affine_form());
    }
    canon.into_iter().collect()
}

/// For every `n ≤ n_max`: the weight-2 affine class count equals `τ(n) − 1`
/// and distinct classes have unequal exact spectra.
pub fn verify_weight2_count(n_max: u64) -> VerificationReport {
    let mut b = ReportBuilder::new("weight2-class-count-and-spectra");
    b.param("n-max", n_max);
    for n in 2..=n_max {
        let reps = weight2_class_representatives(n);
        let expected = tau(n) - 1;
        if reps.len() as u64 != expected {
            b.violation(json!({
                "n": n,
                "classes": reps.len(),
                "expected": expected,
            }));
        }
        let ring: CyclotomicRing<i64> = CyclotomicRing::new(n);
        let specs: Vec<Spectrum<i64>> =
            reps.iter().map(|s| autocorrelation_spectrum(&ring, s)).collect();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if specs[i] == specs[j] {
                    b.violation(json!({
                        "n": n,
                        "s": reps[i].to_string(),
                        "t": reps[j].to_string(),
                        "reason": "distinct classes share a spectrum",
                    }));
                }
            }
        }
    }
    b.finish()
}

/// The power-spectrum classification for conjugate-closed sextuples built
/// from exponent triples summing to zero mod `n`.
///
/// For each triple `(a1, a2, a3)` with `a1 + a2 + a3 ≡ 0` the sextuple is
/// the exponent multiset `{±a1, ±a2, ±a3}`. Its power spectrum is the
/// multiset of exact sums `Σ ζ^{er}` over `1 ≤ r ≤ n`. Triples are grouped
/// by spectrum; within every group, each pair must be related by a unit
/// scaling `u` of the exponents.
pub fn verify_k3_spectral(n: u64) -> VerificationReport {
    k3_spectral_groups(n, true, true).0
}

/// Run [`verify_k3_spectral`] at `n` and at every divisor of `n`, merging
/// the outcomes into one report.
pub fn verify_k3_spectral_with_divisors(n: u64) -> VerificationReport {
    let mut b = ReportBuilder::new("triple-power-spectrum-classification-with-divisors");
    let moduli = crate::arith::divisors(n);
    b.param("n", n);
    b.param("moduli", &moduli);
    for &d in &moduli {
        let r = verify_k3_spectral(d);
        if r.status == crate::report::VerifyStatus::Inconclusive {
            b.mark_inconclusive();
        }
        for w in r.witnesses {
            b.violation(w);
        }
    }
    b.finish()
}

/// Variant of [`verify_k3_spectral`] with the period shortcut and the
/// triple-symmetry reduction individually switchable, returning the grouped
/// triples for cross-checking the shortcuts against the plain enumeration.
pub fn k3_spectral_groups(
    n: u64,
    period_shortcut: bool,
    symmetry_reduce: bool,
) -> (VerificationReport, BTreeSet<Vec<[u64; 3]>>) {
    let mut b = ReportBuilder::new("triple-power-spectrum-classification");
    b.param("n", n);
    b.param("period-shortcut", period_shortcut);
    b.param("symmetry-reduce", symmetry_reduce);

    let mut triples: Vec<[u64; 3]> = Vec::new();
    if symmetry_reduce {
        // one sorted triple per orbit under relabeling and global negation
        for a in 0..n {
            for b2 in a..n {
                let c = (2 * n - a - b2) % n;
                if b2 <= c {
                    let t = [a, b2, c];
                    if t == canonical_triple(n, t) {
                        triples.push(t);
                    }
                }
            }
        }
    } else {
        for a in 0..n {
            for b2 in 0..n {
                triples.push([a, b2, (2 * n - a - b2) % n]);
            }
        }
    }

    let mut rings: HashMap<u64, CyclotomicRing<i64>> = HashMap::new();
    let mut groups: BTreeMap<(u64, Fingerprint), Vec<[u64; 3]>> = BTreeMap::new();
    for &t in &triples {
        let (m, entries) = triple_spectrum(&mut rings, n, t, period_shortcut);
        let key = (m, fingerprint_canonical_list(m, &entries));
        groups.entry(key).or_default().push(t);
    }

    let us = units(n);
    let mut multi: BTreeSet<Vec<[u64; 3]>> = BTreeSet::new();
    for ((_m, _fp), members) in &groups {
        let set: BTreeSet<[u64; 3]> =
            members.iter().map(|&t| canonical_triple(n, t)).collect();
        if set.len() < 2 {
            continue;
        }
        // guard against digest collisions: confirm the actual entry lists
        // coincide before asserting anything about the group
        let mut confirmed: Vec<(Vec<CanonicalCyclotomic<i64>>, Vec<[u64; 3]>)> = Vec::new();
        for &t in &set {
            let (_, entries) = triple_spectrum(&mut rings, n, t, period_shortcut);
            match confirmed.iter_mut().find(|(e, _)| *e == entries) {
                Some((_, ts)) => ts.push(t),
                None => confirmed.push((entries, vec![t])),
            }
        }
        for (_, ts) in &confirmed {
            if ts.len() < 2 {
                continue;
            }
            multi.insert(ts.clone());
            for pair in ts.iter().combinations(2) {
                let (t1, t2) = (*pair[0], *pair[1]);
                let e1 = sextuple_exponents(n, t1);
                let found = us.iter().any(|&u| {
                    let mut mapped: Vec<u64> =
                        sextuple_exponents(n, t2).iter().map(|&e| mul_mod(e, u, n)).collect();
                    mapped.sort_unstable();
                    mapped == e1
                });
                if !found {
                    b.violation(json!({
                        "n": n,
                        "a": t1,
                        "b": t2,
                        "reason": "equal power spectra but no unit scaling",
                    }));
                }
            }
        }
    }
    b.param("triples", triples.len());
    b.param("spectrum-groups", groups.len());
    (b.finish(), multi)
}

fn canonical_triple(n: u64, t: [u64; 3]) -> [u64; 3] {
    let mut s = t;
    s.sort_unstable();
    let mut neg = [(n - t[0] % n) % n, (n - t[1] % n) % n, (n - t[2] % n) % n];
    neg.sort_unstable();
    s.min(neg)
}

fn sextuple_exponents(n: u64, t: [u64; 3]) -> Vec<u64> {
    let mut e: Vec<u64> = t
        .iter()
        .flat_map(|&a| [a % n, (n - a % n) % n])
        .collect();
    e.sort_unstable();
    e
}

/// Sorted power-spectrum entries for one triple, together with the period
/// actually used. With the shortcut the spectrum is computed in the ring of
/// order `m` (the lcm of the element orders); the full spectrum over `n` is
/// `n/m` copies of it.
fn triple_spectrum(
    rings: &mut HashMap<u64, CyclotomicRing<i64>>,
    n: u64,
    t: [u64; 3],
    period_shortcut: bool,
) -> (u64, Vec<CanonicalCyclotomic<i64>>) {
    let g = t.iter().fold(n, |acc, &a| gcd(acc, a));
    let (m, exps): (u64, Vec<u64>) = if period_shortcut {
        let m = n / g;
        (m, sextuple_exponents(n, t).iter().map(|&e| e / g).collect())
    } else {
        (n, sextuple_exponents(n, t))
    };
    let ring = rings.entry(m).or_insert_with(|| CyclotomicRing::new(m));
    let mut entries: Vec<CanonicalCyclotomic<i64>> = (1..=m)
        .map(|r| {
            let powered: Vec<u64> = exps.iter().map(|&e| mul_mod(e, r, m)).collect();
            ring.reduce_exponents(&powered)
        })
        .collect();
    entries.sort_unstable();
    (m, entries)
}

/// A permutation of the 2-subset slots together with a sign per slot.
///
/// The slots index the `k(k−1)/2` unordered pairs `{i, j}` in lexicographic
/// order; the system's equation for slot `A` is
/// `x_{min A} − x_{max A} = σ(A)·(y_{min π(A)} − y_{max π(A)})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedPermutationSystem {
    pub k: usize,
    pub pi: Vec<usize>,
    pub sigma: Vec<i8>,
}

fn pair_slots(k: usize) -> Vec<(usize, usize)> {
    (0..k).tuple_combinations().collect()
}

impl SignedPermutationSystem {
    pub fn identity(k: usize) -> Self {
        let slots = pair_slots(k).len();
        SignedPermutationSystem { k, pi: (0..slots).collect(), sigma: vec![1; slots] }
    }

    /// The equation rows as integer vectors over `(x_0.., y_0..)`.
    pub fn rows(&self) -> Vec<Vec<i64>> {
        let slots = pair_slots(self.k);
        slots
            .iter()
            .enumerate()
            .map(|(a, &(i, j))| {
                let mut row = vec![0i64; 2 * self.k];
                row[i] += 1;
                row[j] -= 1;
                let (pi, pj) = slots[self.pi[a]];
                let s = self.sigma[a] as i64;
                row[self.k + pi] -= s;
                row[self.k + pj] += s;
                row
            })
            .collect()
    }

    /// Normal form under relabeling of the `y` variables and the global sign
    /// flip: the first slot maps to itself with sign `+1`. Both moves are
    /// unimodular changes of variables, so solvability and denominators are
    /// invariant; sweeping normal forms therefore covers every system.
    pub fn normalize(&self) -> SignedPermutationSystem {
        let slots = pair_slots(self.k);
        let (a0, b0) = slots[self.pi[0]];
        // relabel y so that the image of slot 0 becomes {0, 1}
        let mut tau = vec![usize::MAX; self.k];
        tau[a0] = 0;
        tau[b0] = 1;
        let mut next = 2;
        for v in 0..self.k {
            if tau[v] == usize::MAX {
                tau[v] = next;
                next += 1;
            }
        }
        let slot_index: BTreeMap<(usize, usize), usize> =
            slots.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut pi = Vec::with_capacity(self.pi.len());
        let mut sigma = Vec::with_capacity(self.sigma.len());
        for (a, &img) in self.pi.iter().enumerate() {
            let (u, v) = slots[img];
            let (tu, tv) = (tau[u], tau[v]);
            // a sign flips exactly when the relabeling reverses the pair order
            let flip = if tu > tv { -1 } else { 1 };
            let key = (tu.min(tv), tu.max(tv));
            pi.push(slot_index[&key]);
            sigma.push(self.sigma[a] * flip);
        }
        if sigma[0] < 0 {
            // global sign flip (y ↦ −y)
            for s in sigma.iter_mut() {
                *s = -*s;
            }
        }
        SignedPermutationSystem { k: self.k, pi, sigma }
    }
}

/// Outcome of solving one signed permutation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemOutcome {
    /// A choice of `(ρ, c)` whose targets all lie in the rational row span,
    /// with the lcm of the minimal denominators; `None` if no choice works.
    pub qualified: Option<(Vec<usize>, i64, u64)>,
    /// True when no qualifying choice has a power-of-two denominator.
    pub odd_denominator: bool,
}

/// Search the `(ρ, c)` candidates for one whose target equations
/// `x_i − x_{k−1} = c·(y_{ρ(i)} − y_{ρ(k−1)})` all lie in the rational row
/// span, preferring power-of-two denominators, then smallest denominators.
/// The preferred denominator is a function of the achievable-denominator
/// multiset, which is invariant under variable relabeling.
pub fn evaluate_system(sys: &SignedPermutationSystem, rhos: &[Vec<usize>]) -> SystemOutcome {
    let k = sys.k;
    let rows = sys.rows();
    let kernel = row_space_kernel(&rows);
    let basis = hnf_rows(rows);
    let mut best: Option<(Vec<usize>, i64, u64)> = None;
    'outer: for c in [1i64, -1] {
        for rho in rhos {
            // span membership is orthogonality to the kernel; the targets
            // have only four nonzero entries, so test them directly
            let in_span = kernel.iter().all(|v| {
                (0..k - 1).all(|i| {
                    v[i] - v[k - 1] - c * (v[k + rho[i]] - v[k + rho[k - 1]]) == 0
                })
            });
            if !in_span {
                continue;
            }
            let mut denom = 1u64;
            for i in 0..k - 1 {
                let mut t = vec![0i64; 2 * k];
                t[i] += 1;
                t[k - 1] -= 1;
                t[k + rho[i]] -= c;
                t[k + rho[k - 1]] += c;
                let d = minimal_denominator(&basis, &t)
                    .expect("kernel test certified span membership");
                denom = lcm(denom, d.unsigned_abs());
            }
            let better = match &best {
                None => true,
                Some((_, _, d0)) => {
                    (!denom.is_power_of_two(), denom) < (!d0.is_power_of_two(), *d0)
                }
            };
            if better {
                best = Some((rho.clone(), c, denom));
                if denom == 1 {
                    break 'outer;
                }
            }
        }
    }
    let odd = best.as_ref().is_some_and(|(_, _, d)| !d.is_power_of_two());
    SystemOutcome { qualified: best, odd_denominator: odd }
}

fn check_system(
    b: &mut ReportBuilder,
    sys: &SignedPermutationSystem,
    rhos: &[Vec<usize>],
    allowed_primes: &[u64],
    prime_union: &mut BTreeSet<u64>,
    odd_count: &mut u64,
) {
    let out = evaluate_system(sys, rhos);
    match out.qualified {
        None => b.violation(json!({
            "system": sys,
            "reason": "no target system lies in the rational row span",
        })),
        Some((rho, c, d)) => {
            let primes: Vec<u64> = factorize(d).iter().map(|&(p, _)| p).collect();
            prime_union.extend(primes.iter().copied());
            if primes.iter().any(|p| !allowed_primes.contains(p)) {
                b.violation(json!({
                    "system": sys,
                    "rho": rho,
                    "c": c,
                    "denominator": d,
                }));
            }
            if out.odd_denominator {
                *odd_count += 1;
                if sys.k == 4 {
                    // these systems must still pin every scaled difference
                    // 13(v_i − v_j) inside the integer row lattice
                    let basis = hnf_rows(sys.rows());
                    for block in [0usize, 4] {
                        for i in 0..4 {
                            for j in i + 1..4 {
                                let mut t = vec![0i64; 8];
                                t[block + i] = 13;
                                t[block + j] = -13;
                                if !in_lattice(&basis, &t) {
                                    b.violation(json!({
                                        "system": sys,
                                        "reason": "13-scaled difference outside integer span",
                                        "difference": [block + i, block + j],
                                    }));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Full sweep of all `6!·2⁶ = 46080` signed permutation systems at weight 4:
/// every system must admit a qualifying `(ρ, c)` with denominator primes in
/// `{2, 13}`, and the systems that force a factor 13 must keep the scaled
/// differences `13(v_i − v_j)` inside the integer row span.
pub fn verify_sda4_algebra() -> VerificationReport {
    let mut b = ReportBuilder::new("difference-system-denominators");
    b.param("k", 4);
    b.param("allowed-primes", [2, 13]);
    let rhos: Vec<Vec<usize>> = (0..4).permutations(4).collect();
    let mut prime_union = BTreeSet::new();
    let mut odd_count = 0u64;
    let mut systems = 0u64;
    for pi in (0..6).permutations(6) {
        for mask in 0..64u32 {
            let sigma: Vec<i8> =
                (0..6).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let sys = SignedPermutationSystem { k: 4, pi: pi.clone(), sigma };
            systems += 1;
            check_system(&mut b, &sys, &rhos, &[2, 13], &mut prime_union, &mut odd_count);
        }
    }
    b.param("systems-checked", systems);
    b.param("denominator-primes", &prime_union);
    b.param("thirteen-denominator-systems", odd_count);
    b.finish()
}

/// How to cover the `10!·2¹⁰` weight-5 system space.
#[derive(Debug, Clone, Copy)]
pub enum Sda5Mode {
    /// Seeded uniform sample over the full space.
    Sample { count: u64, seed: u64 },
    /// Sweep normal forms (first slot fixed, sign positive) up to `budget`
    /// systems; exhausting the budget yields an inconclusive report.
    Full { budget: u64 },
}

/// Weight-5 analogue of [`verify_sda4_algebra`] with allowed primes `{2, 5}`.
pub fn verify_sda5_algebra(mode: Sda5Mode) -> VerificationReport {
    let mut b = ReportBuilder::new("difference-system-denominators");
    b.param("k", 5);
    b.param("allowed-primes", [2, 5]);
    let rhos: Vec<Vec<usize>> = (0..5).permutations(5).collect();
    let mut prime_union = BTreeSet::new();
    let mut odd_count = 0u64;
    let mut systems = 0u64;
    match mode {
        Sda5Mode::Sample { count, seed } => {
            b.param("mode", "sample");
            b.param("sample-count", count);
            b.param("seed", seed);
            let mut rng = StdRng::seed_from_u64(seed);
            for _ in 0..count {
                let mut pi: Vec<usize> = (0..10).collect();
                pi.shuffle(&mut rng);
                let sigma: Vec<i8> =
                    (0..10).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
                let sys = SignedPermutationSystem { k: 5, pi, sigma };
                systems += 1;
                check_system(&mut b, &sys, &rhos, &[2, 5], &mut prime_union, &mut odd_count);
            }
        }
        Sda5Mode::Full { budget } => {
            b.param("mode", "full");
            b.param("budget", budget);
            // normal forms only: pi[0] = 0 and sigma[0] = +1 (see
            // `SignedPermutationSystem::normalize` for why this suffices)
            let total: u64 = (1..=9u64).product::<u64>() * 512;
            b.param("normal-forms-total", total);
            'sweep: for rest in (1..10usize).permutations(9) {
                for mask in 0..512u32 {
                    if systems == budget {
                        b.mark_inconclusive();
                        break 'sweep;
                    }
                    let mut pi = vec![0usize];
                    pi.extend(&rest);
                    let mut sigma = vec![1i8];
                    sigma.extend((0..9).map(|i| if mask >> i & 1 == 1 { -1i8 } else { 1 }));
                    let sys = SignedPermutationSystem { k: 5, pi, sigma };
                    systems += 1;
                    check_system(&mut b, &sys, &rhos, &[2, 5], &mut prime_union, &mut odd_count);
                }
            }
        }
    }
    b.param("systems-checked", systems);
    b.param("denominator-primes", &prime_union);
    b.param("odd-denominator-systems", odd_count);
    b.finish()
}

/// Agreement of the four conditions for weight `k ∈ {4, 5}` at a single
/// modulus, intended for prime `n` with every prime factor above `2k(k−1)`.
/// Out-of-hypothesis moduli run anyway and report their violations.
pub fn verify_large_prime_theorem(k: usize, n: u64, budget: Option<u64>) -> VerificationReport {
    let mut report =
        verify_equivalence_agreement("four-conditions-agree-large-prime", n, n, k, k, budget);
    let bound = 2 * (k as u64) * (k as u64 - 1);
    report
        .params
        .insert("hypothesis-met".into(), json!(is_prime(n) && n > bound));
    report.params.insert("prime-bound".into(), json!(bound));
    report
}

/// Exponents of the elements of exact multiplicative order `order` in the
/// ring of `n`-th roots.
fn roots_of_order(n: u64, order: u64) -> Vec<u64> {
    assert_eq!(n % order, 0, "order must divide the ring modulus");
    (1..=order).filter(|&t| gcd(t, order) == 1).map(|t| (n / order) * t).collect()
}

/// The classification of conjugate-closed sextuple pairs with equal sums.
///
/// Every case is instantiated over all admissible primitive-root choices;
/// free parameters range over all roots of order dividing
/// `free_order_bound`. For each instance the builder's structural facts are
/// re-checked (positions 4–6 are the conjugates of 1–3, the first triple has
/// product 1) and the two sextuple sums are compared exactly.
pub fn verify_section6_cases(free_order_bound: u64) -> VerificationReport {
    let mut b = ReportBuilder::new("paired-sextuple-sum-classification");
    b.param("free-order-bound", free_order_bound);
    let mut instances = 0u64;

    // shared-parameter family: {α, −ᾱ, −1, ᾱ, −α, −1} always sums to −2
    {
        let n = lcm(free_order_bound, 2);
        let ring: CyclotomicRing<i64> = CyclotomicRing::new(n);
        let h = n / 2;
        let step = n / free_order_bound;
        let mut exps = Vec::new();
        for t in 0..free_order_bound {
            let a = t * step;
            let e = [a, (h + cj(n, a)) % n, h, cj(n, a), (h + a) % n, h];
            check_structure(&mut b, &ring, "free-parameter-family", &e);
            if ring.reduce_exponents(&e) != ring.constant(-2) {
                b.violation(json!({"case": "free-parameter-family", "exponents": e}));
            }
            instances += 1;
            exps.push(e);
        }
        // any two instances form a valid pair: both sums are −2
        if exps.len() >= 2 {
            check_pair(&mut b, &ring, "free-parameter-family", &exps[0], &exps[exps.len() - 1]);
        }
    }

    // fixed-order cases; names follow the enumeration order of the case list
    for (label, n, a_exps, b_exps) in fixed_case_instances() {
        let ring: CyclotomicRing<i64> = CyclotomicRing::new(n);
        check_structure(&mut b, &ring, label, &a_exps);
        check_structure(&mut b, &ring, label, &b_exps);
        check_pair(&mut b, &ring, label, &a_exps, &b_exps);
        // the identical-pair case is always admissible
        check_pair(&mut b, &ring, label, &a_exps, &a_exps);
        instances += 1;
    }

    // the three sum-(−1) sextuples, each verified in its own ring
    let mut minus_one: Vec<(u64, [u64; 6])> = Vec::new();
    for s in roots_of_order(7, 7) {
        let e = [s, 2 * s % 7, cj(7, 3 * s % 7), cj(7, s), cj(7, 2 * s % 7), 3 * s % 7];
        minus_one.push((7, e));
    }
    for i4 in roots_of_order(12, 4) {
        for w in roots_of_order(12, 3) {
            let e = [
                (i4 + w) % 12,
                (i4 + 6 + w) % 12,
                w,
                (i4 + 6 + 2 * w) % 12,
                (i4 + 2 * w) % 12,
                2 * w % 12,
            ];
            minus_one.push((12, e));
        }
    }
    let mut phi_variants: Vec<(u64, u64, [u64; 6])> = Vec::new();
    for w in roots_of_order(30, 3) {
        for f in roots_of_order(30, 5) {
            let e = [
                (15 + w + f) % 30,
                (15 + 2 * w + f) % 30,
                cj(30, 2 * f % 30),
                (15 + 2 * w + cj(30, f)) % 30,
                (15 + w + cj(30, f)) % 30,
                2 * f % 30,
            ];
            minus_one.push((30, e));
            phi_variants.push((w, f, e));
        }
    }
    for &(n, e) in &minus_one {
        let ring: CyclotomicRing<i64> = CyclotomicRing::new(n);
        check_structure(&mut b, &ring, "sum-minus-one-family", &e);
        if ring.reduce_exponents(&e) != ring.constant(-1) {
            b.violation(json!({"case": "sum-minus-one-family", "modulus": n, "exponents": e}));
        }
        instances += 1;
    }
    // cross-ring pairing: lift every pair into the common ring and compare
    {
        let big: CyclotomicRing<i64> = CyclotomicRing::new(420);
        let lift = |n: u64, e: &[u64; 6]| -> [u64; 6] {
            let f = 420 / n;
            [e[0] * f, e[1] * f, e[2] * f, e[3] * f, e[4] * f, e[5] * f]
        };
        for (x, y) in minus_one.iter().tuple_combinations() {
            check_pair(&mut b, &big, "sum-minus-one-family", &lift(x.0, &x.1), &lift(y.0, &y.1));
        }
    }
    // the order-30 family genuinely yields distinct multisets for distinct
    // choices of the order-5 root, the only case needing unequal choices
    let distinct_pairs = phi_variants
        .iter()
        .tuple_combinations()
        .filter(|(x, y)| {
            let sorted = |e: &[u64; 6]| {
                let mut v = *e;
                v.sort_unstable();
                v
            };
            x.0 == y.0 && x.1 != y.1 && sorted(&x.2) != sorted(&y.2)
        })
        .count();
    if distinct_pairs == 0 {
        b.violation(json!({
            "case": "sum-minus-one-family",
            "reason": "no distinct multisets under different order-5 roots",
        }));
    }
    b.param("distinct-order5-pairings", distinct_pairs);
    b.param("instances", instances);
    b.finish()
}

fn cj(n: u64, e: u64) -> u64 {
    (n - e % n) % n
}

fn check_structure(b: &mut ReportBuilder, ring: &CyclotomicRing<i64>, label: &str, e: &[u64; 6]) {
    let n = ring.modulus();
    for i in 0..3 {
        if e[3 + i] != cj(n, e[i]) {
            b.violation(json!({
                "case": label,
                "exponents": e,
                "reason": "positions 4-6 are not the conjugates of 1-3",
            }));
            return;
        }
    }
    if (e[0] + e[1] + e[2]) % n != 0 {
        b.violation(json!({
            "case": label,
            "exponents": e,
            "reason": "first triple does not have product 1",
        }));
    }
}

fn check_pair(
    b: &mut ReportBuilder,
    ring: &CyclotomicRing<i64>,
    label: &str,
    a: &[u64; 6],
    bb: &[u64; 6],
) {
    if ring.reduce_exponents(a) != ring.reduce_exponents(bb) {
        b.violation(json!({
            "case": label,
            "a": a,
            "b": bb,
            "reason": "sextuple sums differ",
        }));
    }
}

/// The fixed-order case instances: `(label, ring, 𝒜 exponents, ℬ exponents)`
/// over every admissible choice of the primitive roots involved.
fn fixed_case_instances() -> Vec<(&'static str, u64, [u64; 6], [u64; 6])> {
    let mut out = Vec::new();
    // order-8 against order-3: ring 24
    for m in roots_of_order(24, 8) {
        for w in roots_of_order(24, 3) {
            let n = 24;
            let a = [
                m,
                (m + 12) % n,
                (12 + cj(n, 2 * m % n)) % n,
                cj(n, m),
                (cj(n, m) + 12) % n,
                (12 + 2 * m) % n,
            ];
            let bset = [w, 2 * w % n, 0, 2 * w % n, w, 0];
            out.push(("order8-vs-order3", n, a, bset));
        }
    }
    // order-5 powers against mixed order-15 terms: ring 30
    for f in roots_of_order(30, 5) {
        for w in roots_of_order(30, 3) {
            let n = 30;
            let a = [
                f,
                2 * f % n,
                cj(n, 3 * f % n),
                cj(n, f),
                cj(n, 2 * f % n),
                3 * f % n,
            ];
            let bset = [
                w,
                (15 + w + 2 * f) % n,
                (15 + w + cj(n, 2 * f % n)) % n,
                2 * w % n,
                (15 + 2 * w + cj(n, 2 * f % n)) % n,
                (15 + 2 * w + 2 * f) % n,
            ];
            out.push(("order5-vs-order15", n, a, bset));
        }
    }
    // order-21 terms against order-42 terms: ring 42
    for w in roots_of_order(42, 3) {
        for s in roots_of_order(42, 7) {
            let n = 42;
            let a = [
                w,
                (3 * s + w) % n,
                (cj(n, 3 * s % n) + w) % n,
                2 * w % n,
                (cj(n, 3 * s % n) + 2 * w) % n,
                (3 * s + 2 * w) % n,
            ];
            let bset = [
                (21 + s + w) % n,
                (21 + s + 2 * w) % n,
                cj(n, 2 * s % n),
                (21 + cj(n, s) + 2 * w) % n,
                (21 + cj(n, s) + w) % n,
                2 * s % n,
            ];
            out.push(("order21-vs-order42", n, a, bset));
        }
    }
    // order-16 against order-48 terms: ring 48
    for v in roots_of_order(48, 16) {
        for w in roots_of_order(48, 3) {
            let n = 48;
            let a = [
                v,
                (v + 24) % n,
                (24 + cj(n, 2 * v % n)) % n,
                cj(n, v),
                (cj(n, v) + 24) % n,
                (24 + 2 * v) % n,
            ];
            let bset = [
                (w + 2 * v) % n,
                (2 * w + 2 * v) % n,
                cj(n, 4 * v % n),
                (2 * w + cj(n, 2 * v % n)) % n,
                (w + cj(n, 2 * v % n)) % n,
                4 * v % n,
            ];
            out.push(("order16-vs-order48", n, a, bset));
        }
    }
    // order-15 terms against order-20 terms: ring 60
    for w in roots_of_order(60, 3) {
        for f in roots_of_order(60, 5) {
            for i4 in roots_of_order(60, 4) {
                let n = 60;
                let a = [
                    w,
                    (w + 2 * f) % n,
                    (w + cj(n, 2 * f % n)) % n,
                    2 * w % n,
                    (2 * w + cj(n, 2 * f % n)) % n,
                    (2 * w + 2 * f) % n,
                ];
                let bset = [
                    f,
                    (i4 + 2 * f) % n,
                    (30 + i4 + cj(n, 3 * f % n)) % n,
                    cj(n, f),
                    (30 + i4 + cj(n, 2 * f % n)) % n,
                    (i4 + 3 * f) % n,
                ];
                out.push(("order15-vs-order20", n, a, bset));
            }
        }
    }
    out
}

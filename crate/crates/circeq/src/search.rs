//! Checkpointable sweep for circulant pairs that are `PAQ`-equivalent while
//! affinely inequivalent.
//!
//! The sweep enumerates one canonical representative per affine class at a
//! given modulus and weight, groups them by autocorrelation-spectrum digest
//! (re-comparing full spectra inside each group so a digest collision can
//! never merge genuinely different spectra), and runs the full `PAQ` decider
//! on every within-group pair. Everything is deterministic: the same `(n, k,
//! budget)` always produces the same pair order and the same findings.
//!
//! Progress persists through a versioned JSON checkpoint written atomically
//! (temp file + rename) every few pairs. Resuming replays the recorded
//! findings first and then continues at the recorded cursor, so the output
//! of an interrupted-and-resumed run is byte-identical to an uninterrupted
//! one.

use crate::cyclotomic::CyclotomicRing;
use crate::error::{CircError, Result};
use crate::matgraph::{pq_equivalent, BinaryMatrix};
use crate::residue::{affine_class_representatives, ResidueSet};
use crate::spectra::{autocorrelation_spectrum, spectrum_fingerprint, Fingerprint, Spectrum};
use crate::Verdict;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

/// Format version of the checkpoint file; loading any other version fails.
pub const CHECKPOINT_VERSION: u32 = 1;

/// How a within-group pair resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingStatus {
    /// `B = PAQ` holds; the witness permutations are recorded.
    PqEquivalent,
    /// Equal exact spectra but provably no `PAQ` relation.
    SpectralOnly,
    /// The decider gave up within its node budget.
    Inconclusive,
}

/// One emitted search result: a pair of affinely inequivalent class
/// representatives with equal spectra, and what the decider concluded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub s: String,
    pub t: String,
    pub status: FindingStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<usize>>,
}

/// Persistent search state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    pub version: u32,
    pub n: u64,
    pub k: usize,
    pub budget: u64,
    /// Number of pairs fully processed.
    pub cursor: usize,
    pub findings: Vec<Finding>,
}

/// The deterministic pair schedule for one `(n, k)` search.
pub struct SearchTask {
    pairs: Vec<(ResidueSet, ResidueSet)>,
}

impl SearchTask {
    /// Enumerate affine class representatives, group them by spectrum, and
    /// lay out every within-group pair in a reproducible order.
    pub fn new(n: u64, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(CircError::BadArgument("modulus must be at least 1".into()));
        }
        let reps = affine_class_representatives(n, k);
        let ring: CyclotomicRing<i64> = CyclotomicRing::new(n);
        let spectra: Vec<Spectrum<i64>> =
            reps.iter().map(|s| autocorrelation_spectrum(&ring, s)).collect();
        let mut groups: BTreeMap<Fingerprint, Vec<usize>> = BTreeMap::new();
        for (i, sp) in spectra.iter().enumerate() {
            groups.entry(spectrum_fingerprint(sp)).or_default().push(i);
        }
        let mut pairs = Vec::new();
        for members in groups.values() {
            // split digest groups by true spectrum equality; order subgroups
            // by their first member so the schedule stays deterministic
            let mut subgroups: Vec<(usize, Vec<usize>)> = Vec::new();
            for &i in members {
                match subgroups.iter_mut().find(|(rep, _)| spectra[*rep] == spectra[i]) {
                    Some((_, g)) => g.push(i),
                    None => subgroups.push((i, vec![i])),
                }
            }
            for (_, g) in subgroups {
                for a in 0..g.len() {
                    for b in a + 1..g.len() {
                        pairs.push((reps[g[a]].clone(), reps[g[b]].clone()));
                    }
                }
            }
        }
        Ok(SearchTask { pairs })
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    fn decide(&self, i: usize, budget: u64) -> Result<Finding> {
        let (s, t) = &self.pairs[i];
        let ma = BinaryMatrix::circulant(s)?;
        let mb = BinaryMatrix::circulant(t)?;
        let finding = match pq_equivalent(&ma, &mb, budget)? {
            Verdict::Equivalent((p, q)) => Finding {
                s: s.to_string(),
                t: t.to_string(),
                status: FindingStatus::PqEquivalent,
                p: Some(p.images().to_vec()),
                q: Some(q.images().to_vec()),
            },
            Verdict::Inequivalent => Finding {
                s: s.to_string(),
                t: t.to_string(),
                status: FindingStatus::SpectralOnly,
                p: None,
                q: None,
            },
            Verdict::Inconclusive { .. } => Finding {
                s: s.to_string(),
                t: t.to_string(),
                status: FindingStatus::Inconclusive,
                p: None,
                q: None,
            },
        };
        Ok(finding)
    }
}

/// Load a checkpoint and insist it belongs to this `(n, k, budget)` search.
fn load_checkpoint(path: &Path, n: u64, k: usize, budget: u64) -> Result<SearchCheckpoint> {
    let text = fs::read_to_string(path)?;
    let raw: serde_json::Value = serde_json::from_str(&text)?;
    let version = raw
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| CircError::CheckpointMismatch("missing version field".into()))?;
    if version != CHECKPOINT_VERSION as u64 {
        return Err(CircError::CheckpointVersion {
            found: version as u32,
            expected: CHECKPOINT_VERSION,
        });
    }
    let cp: SearchCheckpoint = serde_json::from_value(raw)?;
    if cp.n != n || cp.k != k {
        return Err(CircError::CheckpointMismatch(format!(
            "checkpoint is for n={} k={}, requested n={n} k={k}",
            cp.n, cp.k
        )));
    }
    if cp.budget != budget {
        return Err(CircError::CheckpointMismatch(format!(
            "checkpoint was written with budget {}, requested {budget}",
            cp.budget
        )));
    }
    Ok(cp)
}

/// Write the checkpoint atomically: temp file in the same directory, then
/// rename over the target.
fn store_checkpoint(path: &Path, cp: &SearchCheckpoint) -> Result<()> {
    let mut tmp: PathBuf = path.to_path_buf();
    let mut name = tmp.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    tmp.set_file_name(name);
    fs::write(&tmp, serde_json::to_string_pretty(cp)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Outcome of one [`run_search`] invocation.
#[derive(Debug)]
pub struct SearchOutcome {
    /// Everything emitted, including findings replayed from a checkpoint.
    pub findings: Vec<Finding>,
    pub pairs_total: usize,
    /// False when `stop_after` halted the run before the schedule ended.
    pub completed: bool,
}

/// Run (or resume) the sweep, streaming each finding through `emit` in
/// schedule order.
///
/// With `resume`, an existing checkpoint is loaded (replaying its findings
/// through `emit` first) and progress is persisted there every
/// `checkpoint_every` pairs and at the end. `stop_after` limits how many
/// further pairs this invocation processes before checkpointing and
/// returning; it exists so interruption can be exercised deterministically.
pub fn run_search(
    n: u64,
    k: usize,
    budget: u64,
    resume: Option<&Path>,
    checkpoint_every: usize,
    stop_after: Option<usize>,
    emit: &mut dyn FnMut(&Finding),
) -> Result<SearchOutcome> {
    let task = SearchTask::new(n, k)?;
    let mut cp = match resume {
        Some(path) if path.exists() => {
            let cp = load_checkpoint(path, n, k, budget)?;
            if cp.cursor > task.pair_count() {
                return Err(CircError::CheckpointMismatch(format!(
                    "cursor {} exceeds the {}-pair schedule",
                    cp.cursor,
                    task.pair_count()
                )));
            }
            cp
        }
        _ => SearchCheckpoint {
            version: CHECKPOINT_VERSION,
            n,
            k,
            budget,
            cursor: 0,
            findings: Vec::new(),
        },
    };
    for f in &cp.findings {
        emit(f);
    }

    let every = checkpoint_every.max(1);
    let mut processed = 0usize;
    let mut halted = false;
    while cp.cursor < task.pair_count() {
        if stop_after.is_some_and(|limit| processed >= limit) {
            halted = true;
            break;
        }
        let finding = task.decide(cp.cursor, budget)?;
        emit(&finding);
        cp.findings.push(finding);
        cp.cursor += 1;
        processed += 1;
        if let Some(path) = resume {
            if cp.cursor % every == 0 || cp.cursor == task.pair_count() {
                store_checkpoint(path, &cp)?;
            }
        }
    }
    if halted {
        if let Some(path) = resume {
            store_checkpoint(path, &cp)?;
        }
    }
    Ok(SearchOutcome {
        findings: cp.findings,
        pairs_total: task.pair_count(),
        completed: !halted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_NODE_BUDGET;
    use tempfile::tempdir;

    fn collect(
        n: u64,
        k: usize,
        resume: Option<&Path>,
        stop_after: Option<usize>,
    ) -> (Vec<Finding>, bool) {
        let mut out = Vec::new();
        let r = run_search(n, k, DEFAULT_NODE_BUDGET, resume, 2, stop_after, &mut |f| {
            out.push(f.clone())
        })
        .unwrap();
        (out, r.completed)
    }

    #[test]
    fn weight3_schedule_is_empty_through_24() {
        for n in 1..=24u64 {
            let (found, done) = collect(n, 3, None, None);
            assert!(done);
            assert!(found.is_empty(), "n={n}: {found:?}");
        }
    }

    #[test]
    fn order16_weight6_finds_the_known_pair() {
        let (found, done) = collect(16, 6, None, None);
        assert!(done);
        let hit = found.iter().any(|f| {
            f.status == FindingStatus::PqEquivalent
                && ((f.s.contains("0,1,2,5,8,10") && f.t.contains("0,2,3,7,8,10"))
                    || (f.s.contains("0,2,3,7,8,10") && f.t.contains("0,1,2,5,8,10")))
        });
        // the canonical representatives of the two classes need not be the
        // textbook members, so fall back to affine-class membership
        let prize: ResidueSet = "0,1,2,5,8,10/16".parse().unwrap();
        let partner: ResidueSet = "0,2,3,7,8,10/16".parse().unwrap();
        let canonical_hit = found.iter().any(|f| {
            f.status == FindingStatus::PqEquivalent
                && {
                    let s: ResidueSet = f.s.parse().unwrap();
                    let t: ResidueSet = f.t.parse().unwrap();
                    let cs = prize.canonical_affine_form();
                    let ct = partner.canonical_affine_form();
                    (s == cs && t == ct) || (s == ct && t == cs)
                }
        });
        assert!(hit || canonical_hit, "known pair missing: {found:#?}");
        // every equivalent finding carries a witness
        for f in &found {
            if f.status == FindingStatus::PqEquivalent {
                assert!(f.p.is_some() && f.q.is_some());
            }
        }
    }

    #[test]
    fn interrupted_run_replays_identically() {
        let dir = tempdir().unwrap();
        let cp = dir.path().join("state.json");
        let task = SearchTask::new(16, 6).unwrap();
        assert!(task.pair_count() > 3, "need a multi-pair schedule for this test");
        let (reference, done) = collect(16, 6, None, None);
        assert!(done);
        assert!(!reference.is_empty());

        // process a couple of pairs at a time until the schedule finishes
        let mut last = Vec::new();
        for _ in 0..task.pair_count() {
            let (out, done) = collect(16, 6, Some(&cp), Some(2));
            last = out;
            if done {
                break;
            }
        }
        assert_eq!(last, reference, "resumed output differs from uninterrupted output");
    }

    #[test]
    fn checkpoint_mismatches_are_rejected() {
        let dir = tempdir().unwrap();
        let cp = dir.path().join("state.json");
        collect(12, 4, Some(&cp), Some(1));
        assert!(cp.exists());

        // other parameters refuse the file
        let err = run_search(13, 4, DEFAULT_NODE_BUDGET, Some(&cp), 2, None, &mut |_| {})
            .unwrap_err();
        assert!(matches!(err, CircError::CheckpointMismatch(_)), "{err}");
        let err = run_search(12, 4, 99, Some(&cp), 2, None, &mut |_| {}).unwrap_err();
        assert!(matches!(err, CircError::CheckpointMismatch(_)), "{err}");

        // a bumped version number is a version error
        let mut doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&cp).unwrap()).unwrap();
        doc["version"] = serde_json::json!(999);
        fs::write(&cp, doc.to_string()).unwrap();
        let err = run_search(12, 4, DEFAULT_NODE_BUDGET, Some(&cp), 2, None, &mut |_| {})
            .unwrap_err();
        assert!(matches!(err, CircError::CheckpointVersion { found: 999, .. }), "{err}");
    }

    #[test]
    fn spectral_only_pairs_are_reported() {
        // {0,1,2,6} and {0,2,3,6} mod 12 share spectra without being
        // PAQ-equivalent, so the weight-4 sweep at 12 must list them
        let (found, _) = collect(12, 4, None, None);
        let a: ResidueSet = "0,1,2,6/12".parse().unwrap();
        let b: ResidueSet = "0,2,3,6/12".parse().unwrap();
        let (ca, cb) = (a.canonical_affine_form(), b.canonical_affine_form());
        let hit = found.iter().any(|f| {
            f.status == FindingStatus::SpectralOnly && {
                let s: ResidueSet = f.s.parse().unwrap();
                let t: ResidueSet = f.t.parse().unwrap();
                (s == ca && t == cb) || (s == cb && t == ca)
            }
        });
        assert!(hit, "{found:#?}");
    }
}

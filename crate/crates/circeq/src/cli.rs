//! Command-line surface: one-shot equivalence queries, verification suites,
//! and the checkpointed pair search.
//!
//! Every subcommand writes JSON to stdout and a one-line human summary to
//! stderr (`--json` silences the latter). Exit codes are uniform across
//! subcommands: `0` when the claim holds or the pair is equivalent, `1` when
//! a counterexample exists or the pair is inequivalent, `2` for usage or
//! internal errors, `3` when a search budget ran out before a verdict.

use crate::error::{CircError, Result};
use crate::families;
use crate::matgraph::{perm_similar, ppinv_equivalent, pq_equivalent, BinaryMatrix};
use crate::report::{VerificationReport, VerifyStatus};
use crate::residue::{affine_equivalent, linear_equivalent, sda_check, ResidueSet};
use crate::search::{run_search, Finding, FindingStatus};
use crate::spectra::autocorrelation_spectrum;
use crate::verify;
use crate::{cyclotomic::CyclotomicRing, Int, Verdict};
use clap::{Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "circeq",
    version,
    about = "Exact equivalence deciders and verification suites for sparse 0/1 circulants",
    after_help = "Exit codes: 0 claim holds / equivalent, 1 counterexample / inequivalent, \
                  2 usage or internal error, 3 inconclusive (budget exhausted)."
)]
struct Cli {
    /// Node budget for isomorphism searches (overrides CIRCEQ_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    json: bool,

    /// Unlock verifications that may run for many minutes.
    #[arg(long, global = true)]
    long_running: bool,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ordered difference multiset of a residue set.
    Delta {
        /// Residue set literal, e.g. 0,1,4,7/8
        set: String,
    },
    /// Decide one equivalence relation for a pair of residue sets.
    #[command(subcommand)]
    Equiv(EquivCmd),
    /// Print the exact autocorrelation spectrum of a residue set.
    Spectrum {
        /// Residue set literal, e.g. 0,1,4,7/8
        set: String,
    },
    /// List pairs of distinct affine classes whose difference multisets
    /// agree up to a unit scaling.
    Sda { n: u64, k: usize },
    /// Re-run one of the verification suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Checkpointable searches over affine-class pairs.
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Subcommand)]
enum EquivCmd {
    /// x ↦ ux + v carrying one set onto the other.
    Affine { s: String, t: String },
    /// x ↦ ux carrying one set onto the other.
    Linear { s: String, t: String },
    /// B = PAQ for permutation matrices P and Q.
    Pq {
        s: String,
        t: String,
        /// Also try the transpose of the second circulant.
        #[arg(long)]
        allow_transpose: bool,
    },
    /// Permutation similarity of the autocorrelation matrices A·Aᵀ.
    Permsim { s: String, t: String },
    /// Equality of the exact autocorrelation eigenvalue multisets.
    Spectral { s: String, t: String },
    /// B = PAP⁻¹ for a permutation matrix P.
    Ppinv { s: String, t: String },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Agreement of all four equivalence conditions at weight ≤ 3.
    Theorem1 {
        #[arg(long, default_value_t = 24)]
        n_max: u64,
    },
    /// Weight-2 class counts and pairwise-distinct spectra.
    Weight2 {
        #[arg(long, default_value_t = 200)]
        n_max: u64,
    },
    /// Power-spectrum classification of zero-sum triples at n and all its
    /// divisors (n > 200 needs --long-running).
    K3 {
        #[arg(long, default_value_t = 90)]
        n: u64,
    },
    /// Full sweep of the 46080 weight-4 signed permutation systems.
    Sda4,
    /// Weight-5 signed permutation systems: seeded sample, or the full
    /// normal-form sweep with --full (needs --long-running).
    Sda5 {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        full: bool,
        /// Stop the full sweep after this many systems.
        #[arg(long, default_value_t = u64::MAX)]
        max_systems: u64,
    },
    /// The case list of conjugate-closed sextuple pairs with equal sums.
    Section6 {
        #[arg(long, default_value_t = 24)]
        free_order_bound: u64,
    },
    /// One point of the shifted-block family (default n = 2k + 11).
    Family {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Recompute every expectation of the named-pair catalog.
    Catalog,
    /// The explicit affine/conjugation chain mod 8 and the weight-6
    /// bridge sweep mod 16.
    AdamChain,
    /// Every suite above at its default parameters.
    All,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Stream PAQ-equivalent but affinely inequivalent class pairs.
    BipartiteAdam {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        /// Checkpoint file to create or continue from.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Write the checkpoint after every this many pairs.
        #[arg(long, default_value_t = 16)]
        checkpoint_every: usize,
        /// Stop after this many additional pairs (test hook).
        #[arg(long, hide = true)]
        stop_after_pairs: Option<usize>,
    },
}

/// Parse `argv` and execute; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_HOLDS };
            let _ = e.print();
            return code;
        }
    };
    let out = Output { json_only: cli.json };
    let env_budget = match std::env::var(crate::BUDGET_ENV_VAR) {
        Ok(v) => match v.parse::<u64>() {
            Ok(b) => Some(b),
            Err(_) => {
                eprintln!("error: {} must be an integer, got {v:?}", crate::BUDGET_ENV_VAR);
                return EXIT_ERROR;
            }
        },
        Err(_) => None,
    };
    let budget = cli.budget.or(env_budget).unwrap_or(crate::DEFAULT_NODE_BUDGET);
    match dispatch(cli, budget, &out) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_ERROR
        }
    }
}

struct Output {
    json_only: bool,
}

impl Output {
    /// Pretty JSON document on stdout.
    fn doc(&self, v: &serde_json::Value) {
        println!("{}", serde_json::to_string_pretty(v).expect("value serializes"));
    }

    /// Compact single-line JSON on stdout (for streams).
    fn line(&self, v: &serde_json::Value) {
        println!("{v}");
    }

    fn note(&self, msg: &str) {
        if !self.json_only {
            eprintln!("{msg}");
        }
    }

    fn report(&self, r: &VerificationReport) {
        println!("{}", r.to_json());
        self.note(&r.summary());
    }

    fn report_line(&self, r: &VerificationReport) {
        println!(
            "{}",
            serde_json::to_string(&serde_json::to_value(r).expect("report serializes"))
                .expect("report serializes")
        );
        self.note(&r.summary());
    }
}

fn status_exit(status: VerifyStatus) -> i32 {
    match status {
        VerifyStatus::Verified => EXIT_HOLDS,
        VerifyStatus::Violated => EXIT_COUNTEREXAMPLE,
        VerifyStatus::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn worst_exit(codes: impl IntoIterator<Item = i32>) -> i32 {
    // counterexamples dominate, then inconclusive, then success
    let mut worst = EXIT_HOLDS;
    for c in codes {
        if c == EXIT_COUNTEREXAMPLE {
            return EXIT_COUNTEREXAMPLE;
        }
        if c == EXIT_INCONCLUSIVE {
            worst = EXIT_INCONCLUSIVE;
        }
    }
    worst
}

fn dispatch(cli: Cli, budget: u64, out: &Output) -> Result<i32> {
    match cli.cmd {
        Command::Delta { set } => {
            let s: ResidueSet = set.parse()?;
            let delta = s.delta();
            out.doc(&json!({
                "set": s.to_string(),
                "modulus": s.modulus(),
                "weight": s.weight(),
                "counts": delta.counts(),
                "total": delta.total(),
            }));
            out.note(&format!(
                "Δ({s}) has {} ordered differences over {} residues",
                delta.total(),
                s.modulus()
            ));
            Ok(EXIT_HOLDS)
        }
        Command::Spectrum { set } => {
            let s: ResidueSet = set.parse()?;
            let ring: CyclotomicRing<Int> = CyclotomicRing::new(s.modulus());
            let sp = autocorrelation_spectrum(&ring, &s);
            let entries: Vec<serde_json::Value> = sp
                .grouped()
                .iter()
                .map(|(count, e)| {
                    json!({
                        "multiplicity": count,
                        "coefficients":
                            e.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            out.doc(&json!({
                "set": s.to_string(),
                "modulus": s.modulus(),
                "distinct-entries": entries.len(),
                "entries": entries,
            }));
            out.note(&format!(
                "exact spectrum of Δ({s}): {} distinct eigenvalues",
                entries.len()
            ));
            Ok(EXIT_HOLDS)
        }
        Command::Equiv(cmd) => run_equiv(cmd, budget, out),
        Command::Sda { n, k } => {
            let violations = sda_check(n, k);
            out.doc(&json!({
                "n": n,
                "k": k,
                "violations": violations,
            }));
            if violations.is_empty() {
                out.note(&format!("no distinct weight-{k} classes mod {n} share a scaled Δ"));
                Ok(EXIT_HOLDS)
            } else {
                out.note(&format!("{} violating class pairs", violations.len()));
                Ok(EXIT_COUNTEREXAMPLE)
            }
        }
        Command::Verify(cmd) => run_verify(cmd, budget, cli.long_running, out),
        Command::Search(SearchCmd::BipartiteAdam {
            n,
            k,
            resume,
            checkpoint_every,
            stop_after_pairs,
        }) => {
            if n > crate::matgraph::MAX_ORDER as u64 / 2 {
                return Err(CircError::BadArgument(format!(
                    "search supports n ≤ {}, got {n}",
                    crate::matgraph::MAX_ORDER / 2
                )));
            }
            if k as u64 > n {
                return Err(CircError::BadArgument(format!(
                    "weight {k} exceeds the modulus {n}"
                )));
            }
            let mut codes = Vec::new();
            let outcome = run_search(
                n,
                k,
                budget,
                resume.as_deref(),
                checkpoint_every,
                stop_after_pairs,
                &mut |f: &Finding| {
                    codes.push(match f.status {
                        FindingStatus::PqEquivalent => EXIT_COUNTEREXAMPLE,
                        FindingStatus::Inconclusive => EXIT_INCONCLUSIVE,
                        FindingStatus::SpectralOnly => EXIT_HOLDS,
                    });
                    out.line(&serde_json::to_value(f).expect("finding serializes"));
                },
            )?;
            out.note(&format!(
                "{} findings over {} scheduled pairs{}",
                outcome.findings.len(),
                outcome.pairs_total,
                if outcome.completed { "" } else { " (stopped early)" }
            ));
            Ok(worst_exit(codes))
        }
    }
}

fn run_equiv(cmd: EquivCmd, budget: u64, out: &Output) -> Result<i32> {
    let (relation, s_text, t_text) = match &cmd {
        EquivCmd::Affine { s, t } => ("affine", s, t),
        EquivCmd::Linear { s, t } => ("linear", s, t),
        EquivCmd::Pq { s, t, .. } => ("pq", s, t),
        EquivCmd::Permsim { s, t } => ("permsim", s, t),
        EquivCmd::Spectral { s, t } => ("spectral", s, t),
        EquivCmd::Ppinv { s, t } => ("ppinv", s, t),
    };
    let s: ResidueSet = s_text.parse()?;
    let t: ResidueSet = t_text.parse()?;

    // verdict plus, for equivalences, a witness that carries S onto T
    let (verdict, witness): (&str, Option<serde_json::Value>) = match cmd {
        EquivCmd::Affine { .. } => match affine_equivalent(&s, &t)? {
            Verdict::Equivalent(m) => {
                let fwd = m.inverse();
                assert_eq!(s.apply_affine(&fwd)?, t, "witness must re-verify");
                ("equivalent", Some(json!({"u": fwd.u, "v": fwd.v})))
            }
            Verdict::Inequivalent => ("inequivalent", None),
            Verdict::Inconclusive { .. } => ("inconclusive", None),
        },
        EquivCmd::Linear { .. } => match linear_equivalent(&s, &t)? {
            Verdict::Equivalent(u) => {
                let fwd = crate::residue::AffineMap::new(s.modulus(), u, 0)?.inverse();
                assert_eq!(s.apply_affine(&fwd)?, t, "witness must re-verify");
                ("equivalent", Some(json!({"u": fwd.u})))
            }
            Verdict::Inequivalent => ("inequivalent", None),
            Verdict::Inconclusive { .. } => ("inconclusive", None),
        },
        EquivCmd::Pq { allow_transpose, .. } => {
            let a = BinaryMatrix::circulant(&s)?;
            let b = BinaryMatrix::circulant(&t)?;
            let direct = pq_equivalent(&a, &b, budget)?;
            match direct {
                Verdict::Equivalent((p, q)) => (
                    "equivalent",
                    Some(json!({"p": p.images(), "q": q.images()})),
                ),
                other if allow_transpose => {
                    match pq_equivalent(&a, &b.transpose(), budget)? {
                        Verdict::Equivalent((p, q)) => (
                            "equivalent",
                            Some(json!({
                                "p": p.images(),
                                "q": q.images(),
                                "transposed": true,
                            })),
                        ),
                        Verdict::Inequivalent if other == Verdict::Inequivalent => {
                            ("inequivalent", None)
                        }
                        _ => ("inconclusive", None),
                    }
                }
                Verdict::Inequivalent => ("inequivalent", None),
                Verdict::Inconclusive { .. } => ("inconclusive", None),
            }
        }
        EquivCmd::Permsim { .. } => {
            let a = BinaryMatrix::circulant(&s)?.autocorrelation();
            let b = BinaryMatrix::circulant(&t)?.autocorrelation();
            match perm_similar(&a, &b, budget)? {
                Verdict::Equivalent(p) => ("equivalent", Some(json!({"p": p.images()}))),
                Verdict::Inequivalent => ("inequivalent", None),
                Verdict::Inconclusive { .. } => ("inconclusive", None),
            }
        }
        EquivCmd::Spectral { .. } => {
            if s.modulus() != t.modulus() {
                return Err(CircError::ModulusMismatch {
                    left: s.modulus(),
                    right: t.modulus(),
                });
            }
            let ring: CyclotomicRing<Int> = CyclotomicRing::new(s.modulus());
            let equal =
                autocorrelation_spectrum(&ring, &s) == autocorrelation_spectrum(&ring, &t);
            (if equal { "equivalent" } else { "inequivalent" }, None)
        }
        EquivCmd::Ppinv { .. } => {
            let a = BinaryMatrix::circulant(&s)?;
            let b = BinaryMatrix::circulant(&t)?;
            match ppinv_equivalent(&a, &b, budget)? {
                Verdict::Equivalent(p) => ("equivalent", Some(json!({"p": p.images()}))),
                Verdict::Inequivalent => ("inequivalent", None),
                Verdict::Inconclusive { .. } => ("inconclusive", None),
            }
        }
    };

    let mut doc = json!({
        "relation": relation,
        "s": s.to_string(),
        "t": t.to_string(),
        "verdict": verdict,
    });
    if let Some(w) = witness {
        doc["witness"] = w;
    }
    out.doc(&doc);
    out.note(&format!("{relation}: {s} and {t} are {verdict}"));
    Ok(match verdict {
        "equivalent" => EXIT_HOLDS,
        "inequivalent" => EXIT_COUNTEREXAMPLE,
        _ => EXIT_INCONCLUSIVE,
    })
}

fn run_verify(cmd: VerifyCmd, budget: u64, long_running: bool, out: &Output) -> Result<i32> {
    match cmd {
        VerifyCmd::Theorem1 { n_max } => {
            let r = verify::verify_theorem1(n_max);
            out.report(&r);
            Ok(status_exit(r.status))
        }
        VerifyCmd::Weight2 { n_max } => {
            let r = verify::verify_weight2_count(n_max);
            out.report(&r);
            Ok(status_exit(r.status))
        }
        VerifyCmd::K3 { n } => {
            if n > 200 && !long_running {
                return Err(CircError::BadArgument(format!(
                    "k3 verification at n = {n} may run for minutes; pass --long-running"
                )));
            }
            let r = verify::verify_k3_spectral_with_divisors(n);
            out.report(&r);
            Ok(status_exit(r.status))
        }
        VerifyCmd::Sda4 => {
            let r = verify::verify_sda4_algebra();
            out.report(&r);
            Ok(status_exit(r.status))
        }
        VerifyCmd::Sda5 { samples, seed, full, max_systems } => {
            let mode = if full {
                if !long_running && max_systems == u64::MAX {
                    return Err(CircError::BadArgument(
                        "the full weight-5 sweep runs for hours; pass --long-running or \
                         bound it with --max-systems"
                            .into(),
                    ));
                }
                verify::Sda5Mode::Full { budget: max_systems }
            } else {
                verify::Sda5Mode::Sample { count: samples, seed }
            };
            let r = verify::verify_sda5_algebra(mode);
            out.report(&r);
            Ok(status_exit(r.status))
        }
        VerifyCmd::Section6 { free_order_bound } => {
            let r = verify::verify_section6_cases(free_order_bound);
            out.report(&r);
            Ok(status_exit(r.status))
        }
        VerifyCmd::Family { k, n } => {
            let n = n.unwrap_or(2 * k + 11);
            let r = families::verify_family(k, n, budget)?;
            out.report(&r);
            Ok(status_exit(r.status))
        }
        VerifyCmd::Catalog => {
            let r = families::verify_catalog(budget)?;
            out.report(&r);
            Ok(status_exit(r.status))
        }
        VerifyCmd::AdamChain => {
            let (links, chain) = families::adam_chain(budget)?;
            let sweep = families::weight6_no_adam_bridge(budget)?;
            out.doc(&json!({
                "links": links,
                "chain": serde_json::to_value(&chain)?,
                "bridge-sweep": serde_json::to_value(&sweep)?,
            }));
            out.note(&chain.summary());
            out.note(&sweep.summary());
            Ok(worst_exit([status_exit(chain.status), status_exit(sweep.status)]))
        }
        VerifyCmd::All => {
            let mut codes = Vec::new();
            let mut emit = |r: VerificationReport| {
                codes.push(status_exit(r.status));
                out.report_line(&r);
            };
            emit(verify::verify_theorem1(24));
            emit(verify::verify_weight2_count(200));
            emit(verify::verify_k3_spectral_with_divisors(90));
            emit(verify::verify_k3_spectral_with_divisors(132));
            emit(verify::verify_sda4_algebra());
            emit(verify::verify_sda5_algebra(verify::Sda5Mode::Sample {
                count: 20_000,
                seed: 1,
            }));
            emit(verify::verify_section6_cases(24));
            for k in 6..=12 {
                emit(families::verify_family(k, 2 * k + 11, budget)?);
            }
            emit(families::verify_catalog(budget)?);
            let (_, chain) = families::adam_chain(budget)?;
            emit(chain);
            emit(families::weight6_no_adam_bridge(budget)?);
            let code = worst_exit(codes);
            out.note(&format!(
                "verify all: {}",
                match code {
                    EXIT_HOLDS => "every claim verified",
                    EXIT_COUNTEREXAMPLE => "violations found",
                    _ => "inconclusive",
                }
            ));
            Ok(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_aggregation() {
        assert_eq!(worst_exit([]), EXIT_HOLDS);
        assert_eq!(worst_exit([EXIT_HOLDS, EXIT_HOLDS]), EXIT_HOLDS);
        assert_eq!(worst_exit([EXIT_HOLDS, EXIT_INCONCLUSIVE]), EXIT_INCONCLUSIVE);
        assert_eq!(
            worst_exit([EXIT_INCONCLUSIVE, EXIT_COUNTEREXAMPLE, EXIT_HOLDS]),
            EXIT_COUNTEREXAMPLE
        );
    }

    #[test]
    fn status_exit_mapping() {
        assert_eq!(status_exit(VerifyStatus::Verified), EXIT_HOLDS);
        assert_eq!(status_exit(VerifyStatus::Violated), EXIT_COUNTEREXAMPLE);
        assert_eq!(status_exit(VerifyStatus::Inconclusive), EXIT_INCONCLUSIVE);
    }

    #[test]
    fn cli_arguments_parse() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

//! Claim-by-claim verification suites. Every instance (a composition, a
//! pointed partition, a sample) becomes one [`ClaimReport`]; instances run
//! in parallel and each is timed on its own.

mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::caps::Caps;
use crate::error::{Error, Result};

pub use suites::{alternating_permutations, homology_signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    /// The statement being checked.
    pub anchor: String,
    pub status: Status,
    pub witness: Value,
    /// Seconds.
    pub wall_time: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub max_n: usize,
    pub claims: Vec<ClaimReport>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ClaimReport> {
        self.claims.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn count(&self, status: Status) -> usize {
        self.claims.iter().filter(|c| c.status == status).count()
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimReport> {
        self.claims.iter().find(|c| c.claim_id == id)
    }

    /// Aligned plain-text rendering, failures with their witness.
    pub fn to_table(&self) -> String {
        let width = self.claims.iter().map(|c| c.claim_id.chars().count()).max().unwrap_or(5).max(5);
        let mut out = format!("{:<width$}  {:<7}  {:>9}  statement\n", "claim", "status", "seconds");
        for c in &self.claims {
            out.push_str(&format!("{:<width$}  {:<7}  {:>9.4}  {}\n", c.claim_id, c.status, c.wall_time, c.anchor));
            if c.status == Status::Fail {
                out.push_str(&format!("{:width$}  witness: {}\n", "", c.witness));
            }
        }
        out.push_str(&format!(
            "{} claims: {} pass, {} fail, {} skipped\n",
            self.claims.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        ));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Mobius,
    Homology,
    Morse,
    Cycles,
    Specht,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Mobius, Suite::Homology, Suite::Morse, Suite::Cycles, Suite::Specht];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Mobius => "mobius",
            Suite::Homology => "homology",
            Suite::Morse => "morse",
            Suite::Cycles => "cycles",
            Suite::Specht => "specht",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub max_n: usize,
    /// Seed for the sampled claims.
    pub seed: u64,
    pub caps: Caps,
}

impl VerifyOptions {
    pub fn new(max_n: usize) -> Self {
        VerifyOptions { max_n, seed: 0, caps: Caps::default() }
    }
}

/// Pass/fail with a witness, or an error that fails the claim.
pub(crate) type Outcome = Result<(bool, Value)>;

pub(crate) struct Job {
    id: String,
    anchor: String,
    run: Box<dyn Fn() -> Outcome + Send + Sync>,
}

impl Job {
    pub(crate) fn new(
        id: impl Into<String>,
        anchor: impl Into<String>,
        run: impl Fn() -> Outcome + Send + Sync + 'static,
    ) -> Self {
        Job { id: id.into(), anchor: anchor.into(), run: Box::new(run) }
    }

    fn execute(&self) -> ClaimReport {
        let start = Instant::now();
        let (status, witness) = match (self.run)() {
            Ok((true, w)) => (Status::Pass, w),
            Ok((false, w)) => (Status::Fail, w),
            Err(Error::CapExceeded { what, n, cap }) => {
                (Status::Skipped, serde_json::json!({ "reason": format!("{what}: n = {n} exceeds cap {cap}") }))
            }
            Err(e) => (Status::Fail, serde_json::json!({ "error": e.to_string() })),
        };
        ClaimReport {
            claim_id: self.id.clone(),
            anchor: self.anchor.clone(),
            status,
            witness,
            wall_time: start.elapsed().as_secs_f64(),
        }
    }
}

/// Runs one suite (or all of them) for every instance with `n ≤ max_n`.
/// Fails with `CapExceeded` when `max_n` is beyond what the suite can
/// materialize under `caps`.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerificationReport> {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut jobs = Vec::new();
    for s in suites {
        suites::check_caps(s, opts)?;
        jobs.extend(suites::jobs(s, opts));
    }
    let claims = jobs.par_iter().map(Job::execute).collect();
    Ok(VerificationReport { suite: suite.name().to_string(), max_n: opts.max_n, claims })
}

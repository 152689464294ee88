//! Executable checks of the structure theorems.
//!
//! Each backend module turns a claim into an [`Outcome`] per instance (and
//! per subgroup where the claim quantifies over one). [`run_suite`] runs
//! every check on the generated stream of [`generate`].

pub mod finite;
pub mod generate;
pub mod padic;
pub mod report;
pub mod shift;

use rayon::prelude::*;
use serde::Serialize;

pub use report::{parse_selection, Outcome, SkipReason, Status, Tag, VerificationReport};

use crate::error::{Error, Result};
use crate::instance::{GroupInstance, Loaded};

/// Run the selected checks on one instance, over its generated family of
/// subgroups.
pub fn check_instance(inst: &GroupInstance, tags: &[Tag]) -> Vec<VerificationReport> {
    let key = inst.key();
    let r = match inst {
        GroupInstance::Finite(f) => finite::check(f, &key, None, tags),
        GroupInstance::Padic(p) => padic::check(p, &key, None, tags),
        GroupInstance::Shift(s) => shift::check(s, &key, None, tags),
    };
    r.unwrap_or_else(|e| errored(&key, tags, &e))
}

/// Like [`check_instance`], using the file's `H` when it has one.
pub fn check_loaded(l: &Loaded, tags: &[Tag]) -> Vec<VerificationReport> {
    let key = l.instance().key();
    let r = match l {
        Loaded::Finite { inst, h, .. } => finite::check(inst, &key, h.as_ref().map(std::slice::from_ref), tags),
        Loaded::Padic { inst, h, .. } => padic::check(inst, &key, h.as_ref().map(std::slice::from_ref), tags),
        Loaded::Shift { inst, h, .. } => shift::check(inst, &key, h.as_ref().map(std::slice::from_ref), tags),
    };
    r.unwrap_or_else(|e| errored(&key, tags, &e))
}

fn errored(key: &str, tags: &[Tag], e: &Error) -> Vec<VerificationReport> {
    tags.iter().map(|&t| Outcome::error(e).into_report(t, key, None, Default::default())).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub records: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub summary: Summary,
    pub records: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn new(seed: u64, instances: usize, mut records: Vec<VerificationReport>) -> SuiteReport {
        records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        let summary = Summary {
            instances,
            records: records.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            skipped: count(Status::Skipped),
        };
        SuiteReport { seed, summary, records }
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Check every instance of a list on `jobs` threads (0: one per core).
pub fn run_instances(instances: &[GroupInstance], tags: &[Tag], jobs: usize, seed: u64) -> Result<SuiteReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::NotComputable(format!("thread pool: {e}")))?;
    let records: Vec<VerificationReport> =
        pool.install(|| instances.par_iter().flat_map_iter(|i| check_instance(i, tags)).collect());
    Ok(SuiteReport::new(seed, instances.len(), records))
}

/// The whole generated stream.
pub fn run_suite(seed: u64, tags: &[Tag], jobs: usize) -> Result<SuiteReport> {
    let instances = generate::generate(seed)?;
    run_instances(&instances, tags, jobs, seed)
}

//! Executes jobs and writes report bundles.

use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::manifest::{CheckKind, Job, RUN_SCHEMA_VERSION};
use crate::algebra::Algebra;
use crate::budget::{Budget, Caps};
use crate::ehp::{theorem_a_report, TheoremOptions};
use crate::error::{Error, Result};
use crate::nil::{
    nil_bound, nil_degree, solv_verify, weak_nil, Mode, NilOptions, Verdict,
};
use crate::zoo;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Completed,
    Refuted,
    ResourceCap,
    Skipped,
    Error,
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub mode: Mode,
    pub caps: Caps,
    pub timing: bool,
    pub workers: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            mode: Mode::Exact,
            caps: Caps::default(),
            timing: false,
            workers: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub index: usize,
    pub group: String,
    pub check: &'static str,
    pub algebra: String,
    pub outcome: Outcome,
}

impl Entry {
    pub fn file_name(&self) -> String {
        format!("{:02}_{}.json", self.index, self.check)
    }

    pub fn to_json(&self, timing: bool) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(RUN_SCHEMA_VERSION));
        m.insert("engine_version".into(), json!(crate::ENGINE_VERSION));
        m.insert("index".into(), json!(self.index));
        m.insert("label".into(), json!(self.group));
        m.insert("check".into(), json!(self.check));
        m.insert("algebra".into(), json!(self.algebra));
        m.insert("status".into(), json!(self.outcome.status));
        m.insert("result".into(), self.outcome.result.clone());
        if timing {
            m.insert("elapsed_ms".into(), json!(self.outcome.elapsed_ms as u64));
        }
        Value::Object(m)
    }
}

#[derive(Clone, Debug)]
pub struct Bundle {
    pub source: String,
    pub mode: Mode,
    pub caps: Caps,
    pub entries: Vec<Entry>,
    pub table: Option<Value>,
    pub timing: bool,
    pub elapsed_ms: u128,
}

impl Bundle {
    /// 0 when everything certified or completed, 1 on a refutation, 2 on an
    /// engine error, 3 on a resource cap.
    pub fn exit_code(&self) -> i32 {
        let has = |s: Status| self.entries.iter().any(|e| e.outcome.status == s);
        if has(Status::Error) {
            2
        } else if has(Status::ResourceCap) {
            3
        } else if has(Status::Refuted) {
            1
        } else {
            0
        }
    }

    pub fn summary(&self) -> Value {
        let mut counts = Map::new();
        for s in [
            Status::Certified,
            Status::Completed,
            Status::Refuted,
            Status::ResourceCap,
            Status::Skipped,
            Status::Error,
        ] {
            let n = self.entries.iter().filter(|e| e.outcome.status == s).count();
            counts.insert(serde_json::to_value(s).unwrap().as_str().unwrap().into(), json!(n));
        }
        let checks: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "index": e.index,
                    "label": e.group,
                    "check": e.check,
                    "algebra": e.algebra,
                    "status": e.outcome.status,
                    "file": e.file_name(),
                })
            })
            .collect();
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(RUN_SCHEMA_VERSION));
        m.insert("engine_version".into(), json!(crate::ENGINE_VERSION));
        m.insert("source".into(), json!(self.source));
        m.insert("mode".into(), mode_json(self.mode));
        m.insert("caps".into(), json!(self.caps));
        m.insert("counts".into(), Value::Object(counts));
        m.insert("checks".into(), Value::Array(checks));
        m.insert("exit_code".into(), json!(self.exit_code()));
        if let Some(t) = &self.table {
            m.insert("table".into(), t.clone());
        }
        if self.timing {
            m.insert("elapsed_ms".into(), json!(self.elapsed_ms as u64));
        }
        Value::Object(m)
    }

    /// Writes one file per check plus `summary.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for e in &self.entries {
            write_json(&dir.join(e.file_name()), &e.to_json(self.timing))?;
        }
        write_json(&dir.join("summary.json"), &self.summary())
    }
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn mode_json(mode: Mode) -> Value {
    match mode {
        Mode::Exact => json!({"kind": "exact"}),
        Mode::Modular { trials, seed } => json!({
            "kind": "modular",
            "label": "probabilistic",
            "prime": crate::ring::DEFAULT_PRIME,
            "trials": trials,
            "seed": seed,
        }),
    }
}

fn cert_status(v: &Verdict) -> Status {
    match v {
        Verdict::Certified => Status::Certified,
        Verdict::Degenerate => Status::Completed,
        _ => Status::Refuted,
    }
}

/// Flags, grading and fingerprint of an algebra.
pub fn describe(a: &Algebra) -> Value {
    json!({
        "schema_version": RUN_SCHEMA_VERSION,
        "algebra": a.display_name(),
        "dim": a.dim(),
        "basis": a.labels(),
        "fingerprint": a.fingerprint(),
        "flags": a.flags(),
        "grading": a.grading().map(|g| json!({
            "rank": g.rank(),
            "parity_rank": g.parity_rank(),
            "grades": g.grades().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "product_degree": g.product_degree().to_string(),
        })),
        "involution": a.involution().is_some(),
    })
}

fn execute(job: &Job, settings: &Settings, budget: &Budget) -> Result<(Status, Value)> {
    let nil = NilOptions {
        mode: settings.mode,
        paren: job.paren,
        budget: budget.clone(),
        ..NilOptions::default()
    };
    Ok(match &job.check {
        CheckKind::NilBound { subject, k, s } => {
            let c = nil_bound(subject, *k, *s, &nil)?;
            (cert_status(&c.verdict), c.to_json())
        }
        CheckKind::NilDegree { subject, k, s_max } => {
            let c = nil_degree(subject, *k, *s_max, &nil)?;
            (cert_status(&c.verdict), c.to_json())
        }
        CheckKind::WeakNil { subject, k, s } => {
            let c = weak_nil(subject, *k, *s, &nil)?;
            (cert_status(&c.verdict), c.to_json())
        }
        CheckKind::Solv { subject, parts, k, s, weak } => {
            let c = solv_verify(subject, parts, *k, *s, *weak, &nil)?;
            (cert_status(&c.verdict), c.to_json())
        }
        CheckKind::TheoremA { premise, n, lambda, shift, shape } => {
            let opts = TheoremOptions {
                nil,
                lambda: lambda.clone(),
                shape: *shape,
            };
            let r = theorem_a_report(&job.algebra, &job.split, premise, n, shift.as_ref(), &opts)?;
            let status = if r.premise_certified() {
                Status::Certified
            } else {
                Status::Refuted
            };
            (status, r.to_json())
        }
        CheckKind::Flags => (Status::Completed, describe(&job.algebra)),
        CheckKind::CdInclusion { k, p, q, l } => {
            let m = zoo::cd_block_inclusion(*k, *p, *q, *l)?;
            let ok = m.status().is_verified() && m.is_injective();
            let status = if ok { Status::Certified } else { Status::Refuted };
            (status, m.to_json())
        }
        CheckKind::ZeroDivisor { bound } => {
            let found = zoo::find_zero_divisor(&job.algebra, *bound);
            let verified = found.as_ref().is_some_and(|z| z.verify(&job.algebra));
            let status = if verified {
                Status::Certified
            } else {
                Status::Completed
            };
            (
                status,
                json!({
                    "bound": bound,
                    "found": found.is_some(),
                    "verified": verified,
                    "pair": found.map(|z| z.to_json()),
                }),
            )
        }
    })
}

/// Runs every job, concurrently up to the worker budget; entries follow
/// job order. After a resource cap, jobs not yet started are skipped.
pub fn run_jobs(source: &str, jobs: &[Job], settings: &Settings) -> Result<Bundle> {
    let start = Instant::now();
    let budget = Budget::new(settings.caps.clone());
    let aborted = AtomicBool::new(false);
    let work = || {
        jobs.par_iter()
            .enumerate()
            .map(|(index, job)| {
                let t0 = Instant::now();
                let (status, result) = if aborted.load(Ordering::SeqCst) {
                    (Status::Skipped, json!({"reason": "resource cap reached by an earlier check"}))
                } else {
                    match execute(job, settings, &budget) {
                        Ok(x) => x,
                        Err(e) if e.is_resource_cap() => {
                            aborted.store(true, Ordering::SeqCst);
                            (Status::ResourceCap, error_json(&e))
                        }
                        Err(e) => (Status::Error, error_json(&e)),
                    }
                };
                Entry {
                    index,
                    group: job.group.clone(),
                    check: job.check.name(),
                    algebra: job.algebra.display_name(),
                    outcome: Outcome {
                        status,
                        result,
                        elapsed_ms: t0.elapsed().as_millis(),
                    },
                }
            })
            .collect::<Vec<_>>()
    };
    let entries = match settings.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::invalid(format!("worker pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(Bundle {
        source: source.to_string(),
        mode: settings.mode,
        caps: settings.caps.clone(),
        entries,
        table: None,
        timing: settings.timing,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn error_json(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("error".into(), json!(e.to_string()));
    if let Error::ResourceCap { resource, limit, estimate } = e {
        m.insert("resource".into(), json!(resource));
        m.insert("limit".into(), json!(limit));
        m.insert("estimate".into(), json!(estimate));
    }
    Value::Object(m)
}

//! Built-in suites reproducing the standard example families.

use std::sync::Arc;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

use super::manifest::{CheckKind, Job};
use super::run::{Bundle, Status};
use crate::algebra::{direct_sum, linalg, Algebra, Grade, ModuleSplit, Submodule};
use crate::ehp::{Condition, GradePremise, Premise, PowerShape};
use crate::error::Result;
use crate::nil::ParenPolicy;
use crate::ring::rational;
use crate::zoo;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Suite {
    Table1,
    Table2Bracket,
    AbstractExamples,
    CdTower,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Table1 => "table1",
            Suite::Table2Bracket => "table2_bracket",
            Suite::AbstractExamples => "abstract_examples",
            Suite::CdTower => "cd_tower",
        }
    }
}

fn job(group: &str, a: &Arc<Algebra>, check: CheckKind) -> Job {
    Job {
        group: group.to_string(),
        algebra: Arc::clone(a),
        split: ModuleSplit::whole(a),
        paren: ParenPolicy::Auto,
        check,
    }
}

fn theorem(premise: Premise, n: Vec<usize>, shift: Option<Grade>) -> CheckKind {
    CheckKind::TheoremA {
        premise,
        n,
        lambda: rational::one(),
        shift,
        shape: PowerShape::RightNested,
    }
}

/// Degree, the `(1,2)` bound and the threshold report for a bracket algebra.
fn bracket_family(jobs: &mut Vec<Job>, a: Algebra) {
    let a = Arc::new(a);
    let g = a.display_name();
    let full = Submodule::full(&a);
    jobs.push(job(&g, &a, CheckKind::NilDegree { subject: full.clone(), k: 1, s_max: 3 }));
    jobs.push(job(&g, &a, CheckKind::NilBound { subject: full, k: 1, s: 2 }));
    jobs.push(job(&g, &a, theorem(Premise::simple(Condition::G1, 1, 2), (3..=7).collect(), None)));
}

fn sum(a: Algebra, b: Algebra) -> Result<Algebra> {
    direct_sum(&a, &b)
}

pub fn suite_jobs(suite: Suite) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    match suite {
        Suite::Table1 => {
            for a in [
                zoo::so(2)?,
                zoo::so(3)?,
                zoo::u(1)?,
                zoo::u(2)?,
                zoo::su(2)?,
                zoo::sp(1)?,
                zoo::u_pq(1, 1)?,
            ] {
                bracket_family(&mut jobs, a);
            }
        }
        Suite::Table2Bracket => {
            for a in [
                sum(zoo::so(2)?, zoo::so(2)?)?,
                sum(zoo::so(3)?, zoo::so(3)?)?,
                zoo::u_pq(1, 1)?,
                zoo::su_pq(1, 1)?,
                sum(zoo::u(1)?, zoo::u(1)?)?,
                sum(zoo::su(2)?, zoo::su(2)?)?,
            ] {
                bracket_family(&mut jobs, a);
            }
        }
        Suite::AbstractExamples => abstract_examples(&mut jobs)?,
        Suite::CdTower => {
            let gamma = rational::rat(-1);
            for l in 0..=4 {
                let a = Arc::new(zoo::cd_tower(l, &gamma)?);
                jobs.push(job(&format!("l={l}"), &a, CheckKind::Flags));
                if l == 4 {
                    jobs.push(job(&format!("l={l}"), &a, CheckKind::ZeroDivisor { bound: 2 }));
                }
            }
            for l in 1..=2 {
                let base = Arc::new(zoo::cd_tower(l, &gamma)?);
                jobs.push(job(&format!("inclusion l={l}"), &base, CheckKind::CdInclusion { k: 1, p: 1, q: 0, l }));
            }
        }
    }
    Ok(jobs)
}

fn abstract_examples(jobs: &mut Vec<Job>) -> Result<()> {
    // Even form degree: any Lie algebra is (k,1)-nil.
    for a in [zoo::so(3)?, zoo::u(2)?] {
        let a = Arc::new(a);
        let g = format!("{} k=2", a.display_name());
        jobs.push(job(&g, &a, CheckKind::NilBound { subject: Submodule::full(&a), k: 2, s: 1 }));
    }

    let st = Arc::new(zoo::super_translation(2, 2)?);
    jobs.push(job(&st.display_name(), &st, CheckKind::WeakNil { subject: Submodule::full(&st), k: 2, s: 1 }));

    let ab = Arc::new(zoo::abelian(3)?);
    let g = ab.display_name();
    jobs.push(job(&g, &ab, CheckKind::NilDegree { subject: Submodule::full(&ab), k: 1, s_max: 3 }));
    jobs.push(job(&g, &ab, theorem(Premise::simple(Condition::G1, 1, 1), (3..=6).collect(), None)));

    // Translations and rotations: (1,1)-nil coframe part with a witness below
    // the trivial threshold.
    let iso = Arc::new(zoo::iso_pq(3, 0)?);
    let t: Vec<_> = (0..3).map(|i| linalg::unit_vector(6, i)).collect();
    let r: Vec<_> = (3..6).map(|i| linalg::unit_vector(6, i)).collect();
    let mut j = job(&iso.display_name(), &iso, theorem(Premise::simple(Condition::G1, 1, 1), (3..=6).collect(), None));
    j.split = ModuleSplit::new(&iso, t, r)?;
    jobs.push(j);

    // Graded case with a degree shift.
    let h = Arc::new(zoo::heisenberg(1)?);
    let g = h.display_name();
    let graded = |grade: i64| GradePremise {
        grade: Some(Grade::int(grade)),
        k: 1,
        s: 2,
        parts: Vec::new(),
        weak: true,
    };
    let premise = Premise {
        condition: Condition::G2,
        grades: vec![graded(1), graded(2)],
    };
    jobs.push(job(&g, &h, CheckKind::WeakNil { subject: Submodule::full(&h), k: 1, s: 2 }));
    jobs.push(job(&g, &h, theorem(premise, (3..=6).collect(), Some(Grade::int(1)))));

    // Antisymmetric matrices under the plain matrix product.
    let m = Arc::new(zoo::mat(3)?);
    let anti = Submodule::new(&m, zoo::antisymmetric_vectors(3))?;
    jobs.push(job("antisymmetric 3x3 (matrix product)", &m, CheckKind::NilDegree { subject: anti, k: 1, s_max: 4 }));
    Ok(())
}

fn status_str(s: Status) -> Value {
    serde_json::to_value(s).expect("status serializes")
}

/// One row per group, with the salient field of each check merged in.
pub fn summarize(bundle: &Bundle) -> Value {
    let mut rows: Vec<(String, Map<String, Value>)> = Vec::new();
    for e in &bundle.entries {
        let pos = match rows.iter().position(|(g, _)| *g == e.group) {
            Some(p) => p,
            None => {
                let mut m = Map::new();
                m.insert("family".into(), json!(e.group));
                m.insert("algebra".into(), json!(e.algebra));
                rows.push((e.group.clone(), m));
                rows.len() - 1
            }
        };
        let row = &mut rows[pos].1;
        let r = &e.outcome.result;
        let status = e.outcome.status;
        match e.check {
            "nil_degree" => {
                row.insert("nil_degree".into(), r.get("degree").cloned().unwrap_or(Value::Null));
            }
            "nil_bound" | "weak_nil" => {
                let key = format!(
                    "{}({},{})",
                    e.check,
                    r.get("k").cloned().unwrap_or(Value::Null),
                    r.get("s").cloned().unwrap_or(Value::Null)
                );
                row.insert(key, status_str(status));
            }
            "theorem_a" => {
                let an = r.get("analysis");
                let get = |k: &str| an.and_then(|a| a.get(k)).cloned().unwrap_or(Value::Null);
                row.insert("premise_certified".into(), get("premise_certified"));
                row.insert("k".into(), get("k"));
                row.insert("s".into(), get("s"));
                let th = get("thresholds");
                row.insert(
                    "thresholds".into(),
                    json!([th.get("homogeneous").cloned(), th.get("trivial").cloned()]),
                );
                if let Some(per_n) = an.and_then(|a| a.get("per_n")).and_then(Value::as_array) {
                    let nonzero: Vec<Value> = per_n
                        .iter()
                        .filter(|v| v.get("alpha_vanishes") == Some(&json!(false)))
                        .filter_map(|v| v.get("n").cloned())
                        .collect();
                    row.insert("alpha_nonzero_at".into(), Value::Array(nonzero));
                }
            }
            "flags" => {
                row.insert("dim".into(), r.get("dim").cloned().unwrap_or(Value::Null));
                if let Some(f) = r.get("flags").and_then(Value::as_object) {
                    for (k, v) in f {
                        row.insert(k.clone(), v.get("holds").cloned().unwrap_or(Value::Null));
                    }
                }
            }
            "zero_divisor" => {
                row.insert("zero_divisor".into(), r.get("verified").cloned().unwrap_or(Value::Null));
            }
            "cd_inclusion" => {
                row.insert("inclusion".into(), status_str(status));
                row.insert("injective".into(), r.get("injective").cloned().unwrap_or(Value::Null));
            }
            _ => {
                row.insert(e.check.into(), status_str(status));
            }
        }
        if !matches!(status, Status::Certified | Status::Completed | Status::Refuted) {
            row.insert(format!("{}_status", e.check), status_str(status));
        }
    }
    Value::Array(rows.into_iter().map(|(_, m)| Value::Object(m)).collect())
}

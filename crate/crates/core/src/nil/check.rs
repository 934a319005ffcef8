//! Deciding vanishing of powers and mixed products of generic forms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::cert::{
    CertKind, ComponentVerdict, Mode, ModeRecord, NilCertificate, Subject, Verdict, Witness,
    CERT_SCHEMA_VERSION,
};
use crate::algebra::linalg::{self, SpanSolver};
use crate::algebra::{Algebra, Grade, Submodule};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::forms::{
    generic_form, generic_form_fp, graded_generic_form, Form, ParenTree, WedgeOptions,
    PAREN_ENUMERATION_CAP,
};
use crate::ring::{rational, Coefficient, Fp};

pub const QUOTIENT_ANNOTATION: &str = "quotient-representative only";

/// Which bracketings of a repeated product are checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParenPolicy {
    /// Right-nested for associative parents; every bracketing up to the
    /// enumeration cap otherwise, then right-nested with an annotation.
    #[default]
    Auto,
    RightNested,
    All,
}

#[derive(Clone, Debug, Default)]
pub struct NilOptions {
    pub mode: Mode,
    pub paren: ParenPolicy,
    pub wedge: WedgeOptions,
    pub budget: Budget,
    /// Generators beyond the sufficient count `k (s + 1)`.
    pub extra_generators: usize,
}

impl NilOptions {
    pub fn exact() -> Self {
        NilOptions::default()
    }

    pub fn modular(trials: u32, seed: u64) -> Self {
        NilOptions {
            mode: Mode::Modular { trials, seed },
            ..NilOptions::default()
        }
    }
}

/// Bracketings to check for a `t`-fold product, with an annotation when the
/// set does not cover every bracketing.
pub fn trees_for(
    parent: &Algebra,
    t: usize,
    policy: ParenPolicy,
) -> Result<(Vec<ParenTree>, Option<&'static str>)> {
    if t <= 2 {
        return Ok((vec![ParenTree::right_nested(t)], None));
    }
    let associative = parent.is_associative();
    match policy {
        ParenPolicy::All => Ok((ParenTree::all_capped(t)?, None)),
        ParenPolicy::RightNested => Ok((
            vec![ParenTree::right_nested(t)],
            (!associative).then_some(QUOTIENT_ANNOTATION),
        )),
        ParenPolicy::Auto => {
            if associative {
                Ok((vec![ParenTree::right_nested(t)], None))
            } else if t <= PAREN_ENUMERATION_CAP {
                Ok((ParenTree::all(t), None))
            } else {
                Ok((vec![ParenTree::right_nested(t)], Some(QUOTIENT_ANNOTATION)))
            }
        }
    }
}

struct Job {
    tuple: Vec<usize>,
    tree: ParenTree,
}

fn evaluate<C: Coefficient>(
    comps: &[Form<C>],
    job: &Job,
    labels: &[String],
    opts: &NilOptions,
    trial: Option<u32>,
) -> Result<Option<Witness>> {
    let factors: Vec<&Form<C>> = job.tuple.iter().map(|&i| &comps[i]).collect();
    let prod = Form::product_tree(&factors, &job.tree, opts.wedge, &opts.budget)?;
    let names = job.tuple.iter().map(|&i| labels[i].clone()).collect();
    Ok(Witness::from_form(&prod, names, job.tree.to_string(), trial))
}

/// Runs every job on the generic form of `v` (or its graded components).
/// With `stop_first`, stops at the first nonzero product.
fn run_jobs(
    v: &Submodule,
    k: usize,
    n: usize,
    grades: Option<&[Grade]>,
    jobs: &[Job],
    opts: &NilOptions,
    stop_first: bool,
) -> Result<Vec<Option<Witness>>> {
    let labels: Vec<String> = match grades {
        Some(gs) => gs.iter().map(|g| format!("a{g}")).collect(),
        None => vec!["a".to_string()],
    };
    let mut results: Vec<Option<Witness>> = vec![None; jobs.len()];
    match opts.mode {
        Mode::Exact => {
            let alpha = match grades {
                Some(_) => graded_generic_form(v, k, n, "a")?,
                None => generic_form(v, k, n, "a")?,
            };
            let comps = split_components(&alpha, grades)?;
            for (slot, job) in results.iter_mut().zip(jobs) {
                opts.budget.check_time()?;
                *slot = evaluate(&comps, job, &labels, opts, None)?;
                if stop_first && slot.is_some() {
                    break;
                }
            }
        }
        Mode::Modular { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for trial in 0..trials {
                let alpha = generic_form_fp(v, k, n, grades.is_some(), "a", &mut |_| {
                    Fp::random(&mut rng)
                })?;
                let comps = split_components(&alpha, grades)?;
                for (slot, job) in results.iter_mut().zip(jobs) {
                    if slot.is_some() {
                        continue;
                    }
                    opts.budget.check_time()?;
                    *slot = evaluate(&comps, job, &labels, opts, Some(trial))?;
                    if stop_first && slot.is_some() {
                        return Ok(results);
                    }
                }
            }
        }
    }
    Ok(results)
}

fn split_components<C: Coefficient>(alpha: &Form<C>, grades: Option<&[Grade]>) -> Result<Vec<Form<C>>> {
    match grades {
        None => Ok(vec![alpha.clone()]),
        Some(gs) => gs.iter().map(|g| alpha.component(g)).collect(),
    }
}

fn base_certificate(kind: CertKind, v: &Submodule, k: usize, s: usize, n: usize, opts: &NilOptions) -> NilCertificate {
    NilCertificate {
        schema_version: CERT_SCHEMA_VERSION,
        engine_version: crate::ENGINE_VERSION,
        kind,
        subject: Subject::of(v),
        k,
        s,
        generators: n,
        mode: ModeRecord::new(opts.mode, s + 1),
        verdict: Verdict::Certified,
        paren_trees: Vec::new(),
        annotation: None,
        degree: None,
        nonvanishing_witness: None,
        components: Vec::new(),
        parts: Vec::new(),
    }
}

fn check_params(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("form degree k must be at least 1"));
    }
    Ok(())
}

/// Certifies `∧^(s+1) α = 0` for every `V`-valued `k`-form `α`.
pub fn nil_bound(v: &Submodule, k: usize, s: usize, opts: &NilOptions) -> Result<NilCertificate> {
    check_params(k)?;
    let t = s + 1;
    let n = k * t + opts.extra_generators;
    opts.budget.check_generators(n)?;
    let (trees, annotation) = trees_for(v.parent(), t, opts.paren)?;
    let jobs: Vec<Job> = trees
        .iter()
        .map(|tree| Job {
            tuple: vec![0; t],
            tree: tree.clone(),
        })
        .collect();
    let results = run_jobs(v, k, n, None, &jobs, opts, true)?;
    let mut cert = base_certificate(CertKind::NilBound, v, k, s, n, opts);
    cert.paren_trees = trees.iter().map(ToString::to_string).collect();
    cert.annotation = annotation;
    if let Some(w) = results.into_iter().flatten().next() {
        cert.verdict = Verdict::Refuted { witness: Box::new(w) };
    }
    Ok(cert)
}

/// Smallest `s <= s_max` with `∧^(s+1) = 0`, plus a nonzero term of `∧^s`.
pub fn nil_degree(v: &Submodule, k: usize, s_max: usize, opts: &NilOptions) -> Result<NilCertificate> {
    check_params(k)?;
    if s_max == 0 {
        return Err(Error::invalid("s_max must be at least 1"));
    }
    opts.budget.check_generators(k)?;
    let first = generic_form(v, k, k, "a")?;
    let Some(mut lower) = Witness::from_form(&first, vec!["a".into()], "x".into(), None) else {
        let mut cert = base_certificate(CertKind::NilDegree, v, k, 0, k, opts);
        cert.verdict = Verdict::Degenerate;
        cert.paren_trees = vec!["x".into()];
        return Ok(cert);
    };
    let mut last = None;
    for s in 1..=s_max {
        let bound = nil_bound(v, k, s, opts)?;
        match bound.verdict {
            Verdict::Certified => {
                let mut cert = bound;
                cert.kind = CertKind::NilDegree;
                cert.degree = Some(s);
                cert.nonvanishing_witness = Some(lower);
                return Ok(cert);
            }
            Verdict::Refuted { ref witness } => {
                lower = (**witness).clone();
                last = Some(bound);
            }
            _ => unreachable!("nil_bound yields certified or refuted"),
        }
    }
    let mut cert = last.expect("s_max >= 1");
    cert.kind = CertKind::NilDegree;
    cert.verdict = Verdict::Exceeded {
        s_max,
        witness: Box::new(lower),
    };
    Ok(cert)
}

const WEAK_NIL_JOB_CAP: usize = 200_000;

/// Certifies that every product of `s+1` graded components of a generic
/// `k`-form vanishes, for every bracketing in the policy.
pub fn weak_nil(v: &Submodule, k: usize, s: usize, opts: &NilOptions) -> Result<NilCertificate> {
    check_params(k)?;
    if v.parent().grading().is_none() {
        return Err(Error::NotGraded(v.parent().display_name()));
    }
    let comps = v.components()?;
    let grades: Vec<Grade> = comps.iter().map(|(g, _)| g.clone()).collect();
    let t = s + 1;
    let n = k * t + opts.extra_generators;
    opts.budget.check_generators(n)?;
    let (trees, annotation) = trees_for(v.parent(), t, opts.paren)?;
    let c = grades.len();
    let tuples = c.checked_pow(t as u32).unwrap_or(usize::MAX);
    if tuples.saturating_mul(trees.len()) > WEAK_NIL_JOB_CAP {
        return Err(Error::ResourceCap {
            resource: "component products",
            limit: WEAK_NIL_JOB_CAP as u64,
            estimate: tuples.saturating_mul(trees.len()) as u64,
        });
    }
    let mut jobs = Vec::new();
    for idx in 0..tuples {
        let mut tuple = Vec::with_capacity(t);
        let mut r = idx;
        for _ in 0..t {
            tuple.push(r % c.max(1));
            r /= c.max(1);
        }
        tuple.reverse();
        for tree in &trees {
            jobs.push(Job {
                tuple: tuple.clone(),
                tree: tree.clone(),
            });
        }
    }
    let mut cert = base_certificate(CertKind::WeakNil, v, k, s, n, opts);
    cert.paren_trees = trees.iter().map(ToString::to_string).collect();
    cert.annotation = annotation;
    if c == 0 {
        return Ok(cert);
    }
    let results = run_jobs(v, k, n, Some(&grades), &jobs, opts, false)?;
    for (job, res) in jobs.iter().zip(&results) {
        cert.components.push(ComponentVerdict {
            components: job.tuple.iter().map(|&i| grades[i].to_string()).collect(),
            tree: job.tree.to_string(),
            vanishes: res.is_none(),
        });
    }
    if let Some(w) = results.into_iter().flatten().next() {
        cert.verdict = Verdict::Refuted { witness: Box::new(w) };
    }
    Ok(cert)
}

/// Certifies that `parts` span `V` and each part is `(k, s)`-nil (or weakly
/// so when `weak`).
pub fn solv_verify(
    v: &Submodule,
    parts: &[Submodule],
    k: usize,
    s: usize,
    weak: bool,
    opts: &NilOptions,
) -> Result<NilCertificate> {
    check_params(k)?;
    for p in parts {
        if *p.parent() != *v.parent() {
            return Err(Error::ContextMismatch);
        }
    }
    let n = k * (s + 1) + opts.extra_generators;
    let mut cert = base_certificate(CertKind::Solv, v, k, s, n, opts);
    let all: Vec<_> = parts.iter().flat_map(|p| p.basis().to_vec()).collect();
    let span = linalg::span_basis(&all);
    let solver = SpanSolver::new(&span, v.parent().dim())?;
    if let Some(missing) = v.basis().iter().find(|b| !solver.contains(b)) {
        cert.verdict = Verdict::SpanFailure {
            missing: missing.iter().map(rational::to_text).collect(),
        };
        return Ok(cert);
    }
    let part_certs = parts
        .par_iter()
        .map(|p| {
            if weak {
                weak_nil(p, k, s, opts)
            } else {
                nil_bound(p, k, s, opts)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = part_certs.iter().find(|c| !c.is_certified()) {
        cert.verdict = bad.verdict.clone();
    }
    cert.parts = part_certs;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::int_vector;
    use crate::zoo;
    use std::sync::Arc;

    fn full(a: Algebra) -> Submodule {
        Submodule::full(&Arc::new(a))
    }

    #[test]
    fn abelian_bounds() {
        let v = full(zoo::abelian(3).unwrap());
        assert!(nil_bound(&v, 1, 1, &NilOptions::exact()).unwrap().is_certified());
        let d = nil_degree(&v, 1, 3, &NilOptions::exact()).unwrap();
        assert_eq!(d.degree, Some(1));
        assert!(d.nonvanishing_witness.is_some());
    }

    #[test]
    fn so3_bracket() {
        let v = full(zoo::so(3).unwrap());
        let b1 = nil_bound(&v, 1, 1, &NilOptions::exact()).unwrap();
        assert!(matches!(b1.verdict, Verdict::Refuted { .. }));
        let b2 = nil_bound(&v, 1, 2, &NilOptions::exact()).unwrap();
        assert!(b2.is_certified());
        assert_eq!(b2.paren_trees.len(), 2);
        assert_eq!(nil_degree(&v, 1, 4, &NilOptions::exact()).unwrap().degree, Some(2));
    }

    #[test]
    fn zero_module_is_degenerate() {
        let a = Arc::new(zoo::so(3).unwrap());
        let z = Submodule::zero(&a);
        assert_eq!(nil_degree(&z, 1, 2, &NilOptions::exact()).unwrap().verdict, Verdict::Degenerate);
    }

    #[test]
    fn exceeded() {
        let a = Arc::new(zoo::mat(2).unwrap());
        // The identity matrix: every power is nonzero.
        let v = Submodule::new(&a, vec![int_vector(&[1, 0, 0, 1])]).unwrap();
        let d = nil_degree(&v, 2, 2, &NilOptions::exact()).unwrap();
        // Even-degree forms commute, so a 1-dimensional span of an idempotent
        // never vanishes in the free model.
        assert!(matches!(d.verdict, Verdict::Exceeded { s_max: 2, .. }));
    }

    #[test]
    fn weak_nil_super_translation() {
        let v = full(zoo::super_translation(2, 2).unwrap());
        let c = weak_nil(&v, 2, 1, &NilOptions::exact()).unwrap();
        assert!(c.is_certified());
        assert_eq!(c.components.len(), 4);
    }

    #[test]
    fn weak_nil_requires_grading() {
        let v = full(zoo::so(3).unwrap());
        assert!(matches!(weak_nil(&v, 1, 1, &NilOptions::exact()), Err(Error::NotGraded(_))));
    }

    #[test]
    fn solv_cases() {
        let a = Arc::new(crate::algebra::direct_sum(&zoo::so(3).unwrap(), &zoo::so(3).unwrap()).unwrap());
        let v = Submodule::full(&a);
        let p0 = Submodule::coordinate(&a, &[0, 1, 2]).unwrap();
        let p1 = Submodule::coordinate(&a, &[3, 4, 5]).unwrap();
        let c = solv_verify(&v, &[p0.clone(), p1], 1, 2, false, &NilOptions::exact()).unwrap();
        assert!(c.is_certified());
        assert_eq!(c.parts.len(), 2);
        let short = solv_verify(&v, &[p0], 1, 2, false, &NilOptions::exact()).unwrap();
        assert!(matches!(short.verdict, Verdict::SpanFailure { .. }));
    }

    #[test]
    fn modular_agrees_on_so3() {
        let v = full(zoo::so(3).unwrap());
        let m = NilOptions::modular(20, 7);
        assert!(nil_bound(&v, 1, 2, &m).unwrap().is_certified());
        assert!(!nil_bound(&v, 1, 1, &m).unwrap().is_certified());
    }

    #[test]
    fn explicit_all_policy_cap() {
        let v = full(zoo::so(3).unwrap());
        let opts = NilOptions {
            paren: ParenPolicy::All,
            ..NilOptions::default()
        };
        assert!(matches!(nil_bound(&v, 1, 5, &opts), Err(Error::ParenEnumerationCap { .. })));
    }
}

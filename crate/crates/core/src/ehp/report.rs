//! Threshold reports: verified premises, the obstruction core, per-`n` verdicts.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::hp::{hp_parts, ConnectionData, GradingUse, HpParams, PowerShape};
use crate::algebra::{shift_grading, Algebra, FlagCheck, Grade, ModuleSplit, Submodule};
use crate::error::{Error, Result};
use crate::forms::{generic_form_fp, graded_generic_form, generic_form, Form, WedgeOptions};
use crate::nil::{solv_verify, trees_for, Mode, ModeRecord, NilCertificate, NilOptions, Witness};
use crate::ring::{rational, Coefficient, Fp, Rational};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Which module carries the premise: `A₀` as a subalgebra (G1) or all of
/// `A` (G2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    G1,
    G2,
}

/// Claimed `(k, s)` for one grade, with the decomposition that proves it.
#[derive(Clone, Debug)]
pub struct GradePremise {
    /// `None` for an ungraded premise on the whole module.
    pub grade: Option<Grade>,
    pub k: usize,
    pub s: usize,
    /// Parts spanning the subject; empty means the subject itself.
    pub parts: Vec<Submodule>,
    pub weak: bool,
}

#[derive(Clone, Debug)]
pub struct Premise {
    pub condition: Condition,
    pub grades: Vec<GradePremise>,
}

impl Premise {
    /// A single ungraded `(k, s)` claim with the trivial decomposition.
    pub fn simple(condition: Condition, k: usize, s: usize) -> Self {
        Premise {
            condition,
            grades: vec![GradePremise {
                grade: None,
                k,
                s,
                parts: Vec::new(),
                weak: false,
            }],
        }
    }

    /// The same premise over `parent = A[-shift]`.
    pub fn rebase(&self, parent: &Arc<Algebra>, shift: &Grade) -> Result<Premise> {
        let grades = self
            .grades
            .iter()
            .map(|g| {
                Ok(GradePremise {
                    grade: g.grade.as_ref().map(|x| x.sub(shift)).transpose()?,
                    k: g.k,
                    s: g.s,
                    parts: g.parts.iter().map(|p| p.rebase(parent)).collect::<Result<_>>()?,
                    weak: g.weak,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Premise {
            condition: self.condition,
            grades,
        })
    }
}

#[derive(Clone, Debug)]
pub struct TheoremOptions {
    pub nil: NilOptions,
    pub lambda: Rational,
    pub shape: PowerShape,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        TheoremOptions {
            nil: NilOptions::default(),
            lambda: rational::one(),
            shape: PowerShape::RightNested,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PremiseRecord {
    pub grade: Option<String>,
    pub k: usize,
    pub s: usize,
    pub weak: bool,
    pub certificate: NilCertificate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    /// `k + s + 1`: the `∧ⁿ e` term vanishes from here on.
    pub homogeneous: usize,
    /// `k + s + 3`: the whole form vanishes from here on.
    pub trivial: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoreCheck {
    pub power: usize,
    pub generators: usize,
    pub paren_trees: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotation: Option<&'static str>,
    pub vanishes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NVerdict {
    pub n: usize,
    pub generators: usize,
    pub inhomogeneous_vanishes: bool,
    pub alpha_vanishes: bool,
    pub at_homogeneous_threshold: bool,
    pub at_trivial_threshold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inhomogeneous_witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_witness: Option<Witness>,
}

/// Everything computed about the (possibly shifted) algebra. Two reports
/// describing the same degree-zero computation have equal analyses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Analysis {
    pub algebra: String,
    pub fingerprint: String,
    pub split: Value,
    pub condition: Condition,
    pub mode: ModeRecord,
    pub lambda: String,
    pub shape: PowerShape,
    pub grading_use: GradingUse,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part0_subalgebra: Option<FlagCheck>,
    pub premise: Vec<PremiseRecord>,
    pub premise_certified: bool,
    pub k: Option<usize>,
    pub s: Option<usize>,
    pub thresholds: Option<Thresholds>,
    pub core: Option<CoreCheck>,
    pub per_n: Vec<NVerdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EhpReport {
    pub schema_version: u32,
    pub engine_version: &'static str,
    pub source_algebra: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<String>,
    pub analysis: Analysis,
}

impl EhpReport {
    pub fn premise_certified(&self) -> bool {
        self.analysis.premise_certified
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Checks the premise, the vanishing of `∧^{k+s+1} e`, and the
/// Hilbert-Palatini form for each `n` in `n_range`.
///
/// A nonzero `shift` first regrades `A` to `A[-l]` and runs the degree-zero
/// analysis there. Premise grades are given in the original grading.
pub fn theorem_a_report(
    a: &Arc<Algebra>,
    split: &ModuleSplit,
    premise: &Premise,
    n_range: &[usize],
    shift: Option<&Grade>,
    opts: &TheoremOptions,
) -> Result<EhpReport> {
    if **split.parent() != **a {
        return Err(Error::ContextMismatch);
    }
    let analysis = match shift {
        Some(l) if !l.is_zero() => {
            let shifted = Arc::new(shift_grading(a, l)?);
            let split = split.rebase(&shifted)?;
            let premise = premise.rebase(&shifted, l)?;
            analyze(&shifted, &split, &premise, n_range, opts)?
        }
        _ => analyze(a, split, premise, n_range, opts)?,
    };
    Ok(EhpReport {
        schema_version: REPORT_SCHEMA_VERSION,
        engine_version: crate::ENGINE_VERSION,
        source_algebra: a.display_name(),
        shift: shift.map(ToString::to_string),
        analysis,
    })
}

fn premise_subject(a: &Arc<Algebra>, split: &ModuleSplit, cond: Condition, grade: Option<&Grade>) -> Result<Submodule> {
    let base = match cond {
        Condition::G1 => split.part0().clone(),
        Condition::G2 => Submodule::full(a),
    };
    match grade {
        None => Ok(base),
        Some(g) => base.component(g),
    }
}

fn validate_premise(a: &Arc<Algebra>, split: &ModuleSplit, premise: &Premise) -> Result<()> {
    if premise.grades.is_empty() {
        return Err(Error::invalid("premise lists no grades"));
    }
    let graded = premise.grades[0].grade.is_some();
    if premise.grades.iter().any(|g| g.grade.is_some() != graded) {
        return Err(Error::invalid("premise mixes graded and ungraded entries"));
    }
    for g in &premise.grades {
        if g.k == 0 {
            return Err(Error::invalid("premise form degree must be at least 1"));
        }
    }
    if !graded {
        if premise.grades.len() != 1 {
            return Err(Error::invalid("an ungraded premise has exactly one entry"));
        }
        return Ok(());
    }
    let base = premise_subject(a, split, premise.condition, None)?;
    if !base.is_graded()? {
        return Err(Error::NotGraded("premise module is not a sum of homogeneous components".into()));
    }
    for (g, comp) in base.components()? {
        if comp.dim() > 0 && !premise.grades.iter().any(|p| p.grade.as_ref() == Some(&g)) {
            return Err(Error::invalid(format!("premise has no entry for grade {g}")));
        }
    }
    Ok(())
}

fn analyze(
    a: &Arc<Algebra>,
    split: &ModuleSplit,
    premise: &Premise,
    n_range: &[usize],
    opts: &TheoremOptions,
) -> Result<Analysis> {
    validate_premise(a, split, premise)?;
    if let Some(&n) = n_range.iter().find(|&&n| n < 2) {
        return Err(Error::invalid(format!("spacetime dimension {n} below 2")));
    }
    let grading_use = if a.grading().is_some() {
        GradingUse::Graded
    } else {
        GradingUse::Ungraded
    };
    let max_n = n_range.iter().copied().max().unwrap_or(2);
    let mut analysis = Analysis {
        algebra: a.display_name(),
        fingerprint: a.fingerprint(),
        split: split.to_json(),
        condition: premise.condition,
        mode: ModeRecord::new(opts.nil.mode, max_n),
        lambda: rational::to_text(&opts.lambda),
        shape: opts.shape,
        grading_use,
        part0_subalgebra: None,
        premise: Vec::new(),
        premise_certified: false,
        k: None,
        s: None,
        thresholds: None,
        core: None,
        per_n: Vec::new(),
    };

    let mut certified = true;
    if premise.condition == Condition::G1 {
        let sub = split.part0().subalgebra_check();
        certified &= sub.holds;
        analysis.part0_subalgebra = Some(sub);
    }
    for g in &premise.grades {
        let subject = premise_subject(a, split, premise.condition, g.grade.as_ref())?;
        let parts = if g.parts.is_empty() {
            vec![subject.clone()]
        } else {
            g.parts.clone()
        };
        let cert = solv_verify(&subject, &parts, g.k, g.s, g.weak, &opts.nil)?;
        certified &= cert.is_certified();
        analysis.premise.push(PremiseRecord {
            grade: g.grade.as_ref().map(ToString::to_string),
            k: g.k,
            s: g.s,
            weak: g.weak,
            certificate: cert,
        });
    }
    analysis.premise_certified = certified;
    if !certified {
        return Ok(analysis);
    }

    let (k, s) = premise
        .grades
        .iter()
        .map(|g| (g.k, g.s))
        .min_by_key(|&(k, s)| (k + s, k))
        .expect("nonempty premise");
    let th = Thresholds {
        homogeneous: k + s + 1,
        trivial: k + s + 3,
    };
    analysis.k = Some(k);
    analysis.s = Some(s);
    analysis.thresholds = Some(th);

    let core = core_check(split, th.homogeneous, grading_use, opts)?;
    if !core.vanishes {
        return Err(Error::Soundness(format!(
            "premise certified at ({k},{s}) but the {}-fold power of e is nonzero",
            th.homogeneous
        )));
    }
    analysis.core = Some(core);

    let per_n = n_range
        .par_iter()
        .map(|&n| n_verdict(split, n, th, grading_use, opts))
        .collect::<Result<Vec<_>>>()?;
    for v in &per_n {
        if v.at_homogeneous_threshold && !v.inhomogeneous_vanishes {
            return Err(Error::Soundness(format!(
                "premise certified at ({k},{s}) but the top power of e is nonzero at n = {}",
                v.n
            )));
        }
        if v.at_trivial_threshold && !v.alpha_vanishes {
            return Err(Error::Soundness(format!(
                "premise certified at ({k},{s}) but the Hilbert-Palatini form is nonzero at n = {}",
                v.n
            )));
        }
    }
    analysis.per_n = per_n;
    Ok(analysis)
}

fn witness_of<C: Coefficient>(f: &Form<C>, label: &str, tree: String, trial: Option<u32>) -> Option<Witness> {
    Witness::from_form(f, vec![label.to_string()], tree, trial)
}

fn core_check(split: &ModuleSplit, t: usize, grading: GradingUse, opts: &TheoremOptions) -> Result<CoreCheck> {
    let budget = &opts.nil.budget;
    budget.check_generators(t)?;
    let (trees, annotation) = trees_for(split.parent(), t, opts.nil.paren)?;
    let v = split.part0();
    let mut witness = None;
    match opts.nil.mode {
        Mode::Exact => {
            let e = match grading {
                GradingUse::Graded => graded_generic_form(v, 1, t, "e")?,
                GradingUse::Ungraded => generic_form(v, 1, t, "e")?,
            };
            for tree in &trees {
                let p = e.wedge_power_with(t, tree, WedgeOptions::default(), budget)?;
                if let Some(w) = witness_of(&p, "e", tree.to_string(), None) {
                    witness = Some(w);
                    break;
                }
            }
        }
        Mode::Modular { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            'trials: for trial in 0..trials {
                let e = generic_form_fp(v, 1, t, grading == GradingUse::Graded, "e", &mut |_| {
                    Fp::random(&mut rng)
                })?;
                for tree in &trees {
                    let p = e.wedge_power_with(t, tree, WedgeOptions::default(), budget)?;
                    if let Some(w) = witness_of(&p, "e", tree.to_string(), Some(trial)) {
                        witness = Some(w);
                        break 'trials;
                    }
                }
            }
        }
    }
    Ok(CoreCheck {
        power: t,
        generators: t,
        paren_trees: trees.iter().map(ToString::to_string).collect(),
        annotation,
        vanishes: witness.is_none(),
        witness,
    })
}

fn n_verdict(
    split: &ModuleSplit,
    n: usize,
    th: Thresholds,
    grading: GradingUse,
    opts: &TheoremOptions,
) -> Result<NVerdict> {
    let params = HpParams {
        shape: opts.shape,
        ..HpParams::new(n, opts.lambda.clone())?
    };
    let generators = params.generators();
    let budget = &opts.nil.budget;
    budget.check_generators(generators)?;
    let tree = opts.shape.tree(n).to_string();
    let mut inh = None;
    let mut alpha = None;
    match opts.nil.mode {
        Mode::Exact => {
            let data = ConnectionData::generic(split, generators, grading)?;
            let parts = hp_parts(&data, &params, budget)?;
            inh = witness_of(&parts.inhomogeneous, "e", tree.clone(), None);
            alpha = witness_of(&parts.alpha, "alpha", tree.clone(), None);
        }
        Mode::Modular { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(n as u64);
            for trial in 0..trials {
                let data = ConnectionData::generic_fp(split, generators, grading, &mut |_| {
                    Fp::random(&mut rng)
                })?;
                let parts = hp_parts(&data, &params, budget)?;
                if inh.is_none() {
                    inh = witness_of(&parts.inhomogeneous, "e", tree.clone(), Some(trial));
                }
                if alpha.is_none() {
                    alpha = witness_of(&parts.alpha, "alpha", tree.clone(), Some(trial));
                }
                if inh.is_some() && alpha.is_some() {
                    break;
                }
            }
        }
    }
    Ok(NVerdict {
        n,
        generators,
        inhomogeneous_vanishes: inh.is_none(),
        alpha_vanishes: alpha.is_none(),
        at_homogeneous_threshold: n >= th.homogeneous,
        at_trivial_threshold: n >= th.trivial,
        inhomogeneous_witness: inh,
        alpha_witness: alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::unit_vector;
    use crate::zoo;

    fn so3_whole() -> (Arc<Algebra>, ModuleSplit) {
        let a = Arc::new(zoo::so(3).unwrap());
        let s = ModuleSplit::whole(&a);
        (a, s)
    }

    #[test]
    fn so3_thresholds() {
        let (a, split) = so3_whole();
        let r = theorem_a_report(&a, &split, &Premise::simple(Condition::G1, 1, 2), &[3, 4, 5, 6, 7], None, &TheoremOptions::default()).unwrap();
        let an = &r.analysis;
        assert!(an.premise_certified);
        assert_eq!(an.thresholds, Some(Thresholds { homogeneous: 4, trivial: 6 }));
        assert!(an.core.as_ref().unwrap().vanishes);
        assert!(an.per_n.iter().all(|v| v.inhomogeneous_vanishes));
    }

    #[test]
    fn refuted_premise_skips_conclusions() {
        let (a, split) = so3_whole();
        let r = theorem_a_report(&a, &split, &Premise::simple(Condition::G1, 1, 1), &[4], None, &TheoremOptions::default()).unwrap();
        assert!(!r.premise_certified());
        assert!(r.analysis.per_n.is_empty());
        assert!(r.analysis.core.is_none());
    }

    #[test]
    fn iso3_below_threshold_witness() {
        let a = Arc::new(zoo::iso_pq(3, 0).unwrap());
        let t: Vec<_> = (0..3).map(|i| unit_vector(6, i)).collect();
        let r: Vec<_> = (3..6).map(|i| unit_vector(6, i)).collect();
        let split = ModuleSplit::new(&a, t, r).unwrap();
        let rep = theorem_a_report(&a, &split, &Premise::simple(Condition::G1, 1, 1), &[3, 4, 5], None, &TheoremOptions::default()).unwrap();
        let an = &rep.analysis;
        assert_eq!(an.thresholds.unwrap().homogeneous, 3);
        assert!(!an.per_n[0].alpha_vanishes);
        assert!(an.per_n[0].alpha_witness.is_some());
        assert!(an.per_n[2].alpha_vanishes);
    }

    #[test]
    fn modular_matches_exact() {
        let (a, split) = so3_whole();
        let exact = theorem_a_report(&a, &split, &Premise::simple(Condition::G1, 1, 2), &[3, 4], None, &TheoremOptions::default()).unwrap();
        let opts = TheoremOptions {
            nil: NilOptions::modular(20, 3),
            ..TheoremOptions::default()
        };
        let modular = theorem_a_report(&a, &split, &Premise::simple(Condition::G1, 1, 2), &[3, 4], None, &opts).unwrap();
        for (x, y) in exact.analysis.per_n.iter().zip(&modular.analysis.per_n) {
            assert_eq!(x.alpha_vanishes, y.alpha_vanishes);
            assert_eq!(x.inhomogeneous_vanishes, y.inhomogeneous_vanishes);
        }
    }

    #[test]
    fn shift_equals_shifted_algebra() {
        let a = Arc::new(zoo::heisenberg(1).unwrap());
        let split = ModuleSplit::whole(&a);
        let l = Grade::int(1);
        let premise = Premise {
            condition: Condition::G2,
            grades: vec![
                GradePremise { grade: Some(Grade::int(1)), k: 1, s: 2, parts: vec![], weak: true },
                GradePremise { grade: Some(Grade::int(2)), k: 1, s: 2, parts: vec![], weak: true },
            ],
        };
        let opts = TheoremOptions::default();
        let shifted = theorem_a_report(&a, &split, &premise, &[4, 5], Some(&l), &opts).unwrap();
        let b = Arc::new(shift_grading(&a, &l).unwrap());
        let direct = theorem_a_report(&b, &split.rebase(&b).unwrap(), &premise.rebase(&b, &l).unwrap(), &[4, 5], None, &opts).unwrap();
        assert_eq!(
            serde_json::to_string(&shifted.analysis).unwrap(),
            serde_json::to_string(&direct.analysis).unwrap()
        );
    }

    #[test]
    fn missing_grade_rejected() {
        let a = Arc::new(zoo::heisenberg(1).unwrap());
        let split = ModuleSplit::whole(&a);
        let premise = Premise {
            condition: Condition::G2,
            grades: vec![GradePremise { grade: Some(Grade::int(1)), k: 1, s: 2, parts: vec![], weak: false }],
        };
        assert!(theorem_a_report(&a, &split, &premise, &[4], None, &TheoremOptions::default()).is_err());
    }
}

//! Generic forms: every coefficient an independent indeterminate.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::form::Form;
use super::mono::GMono;
use crate::algebra::{ModuleSplit, Submodule, Vector};
use crate::error::{Error, Result};
use crate::ring::modular::failure_bound_log2;
use crate::ring::{Coefficient, Fp, MultiPoly, Rational, VarId};

/// Variable `x_{tag, μ, j}` with indices `[μ..., j]`.
pub fn generic_var(tag: &str, mono: GMono, j: usize) -> VarId {
    let mut idx: Vec<u32> = mono.indices().into_iter().map(|i| i as u32).collect();
    idx.push(j as u32);
    VarId::new(tag, idx)
}

/// Basis vectors of `V` in the order used for variable numbering: the
/// user's basis, or the concatenated homogeneous component bases.
fn basis_for(v: &Submodule, graded: bool) -> Result<Vec<Vector>> {
    if !graded {
        return Ok(v.basis().to_vec());
    }
    let comps = v.components()?;
    let total: usize = comps.iter().map(|(_, c)| c.dim()).sum();
    if total != v.dim() {
        return Err(Error::NotGraded(format!(
            "submodule of {} is not a sum of homogeneous components",
            v.parent().display_name()
        )));
    }
    Ok(comps
        .into_iter()
        .flat_map(|(_, c)| c.basis().to_vec())
        .collect())
}

fn check_degree(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::invalid(format!(
            "form degree {k} exceeds the generator count {n}"
        )));
    }
    if n > 63 {
        return Err(Error::ResourceCap {
            resource: "grassmann generators",
            limit: 63,
            estimate: n as u64,
        });
    }
    Ok(())
}

fn build<C: Coefficient>(
    parent: &Arc<crate::algebra::Algebra>,
    basis: &[Vector],
    k: usize,
    n: usize,
    mut coeff: impl FnMut(GMono, usize, &Rational) -> Result<C>,
) -> Result<Form<C>> {
    check_degree(k, n)?;
    let mut terms = Vec::new();
    for mono in GMono::all_of_degree(n, k) {
        for (j, v) in basis.iter().enumerate() {
            for (i, c) in v.iter().enumerate() {
                if num_traits::Zero::is_zero(c) {
                    continue;
                }
                terms.push(((mono, i), coeff(mono, j, c)?));
            }
        }
    }
    Form::from_terms(parent, n, terms)
}

/// `Σ_{μ, j} x_{tag,μ,j} · μ ⊗ v_j` over all degree-`k` monomials in `n`
/// generators and all basis vectors `v_j` of `V`.
pub fn generic_form(v: &Submodule, k: usize, n: usize, tag: &str) -> Result<Form<MultiPoly>> {
    let basis = basis_for(v, false)?;
    build(v.parent(), &basis, k, n, |m, j, c| {
        Ok(MultiPoly::var(generic_var(tag, m, j)).scale(c))
    })
}

/// Like [`generic_form`] with variables attached to homogeneous basis
/// vectors, so each graded component is an independent generic form.
pub fn graded_generic_form(v: &Submodule, k: usize, n: usize, tag: &str) -> Result<Form<MultiPoly>> {
    if v.parent().grading().is_none() {
        return Err(Error::NotGraded(v.parent().display_name()));
    }
    let basis = basis_for(v, true)?;
    build(v.parent(), &basis, k, n, |m, j, c| {
        Ok(MultiPoly::var(generic_var(tag, m, j)).scale(c))
    })
}

/// Graded generic form valued in one part of a split.
pub fn split_generic_form(
    split: &ModuleSplit,
    part: usize,
    k: usize,
    n: usize,
    tag: &str,
) -> Result<Form<MultiPoly>> {
    graded_generic_form(split.part(part), k, n, tag)
}

/// Image of the generic form under an assignment of its variables in `F_p`.
///
/// `value` is called once per variable in the same order the exact
/// construction creates them.
pub fn generic_form_fp(
    v: &Submodule,
    k: usize,
    n: usize,
    graded: bool,
    tag: &str,
    value: &mut dyn FnMut(&VarId) -> Fp,
) -> Result<Form<Fp>> {
    if graded && v.parent().grading().is_none() {
        return Err(Error::NotGraded(v.parent().display_name()));
    }
    let basis = basis_for(v, graded)?;
    let mut drawn: BTreeMap<VarId, Fp> = BTreeMap::new();
    build(v.parent(), &basis, k, n, |m, j, c| {
        let id = generic_var(tag, m, j);
        let x = *drawn.entry(id.clone()).or_insert_with(|| value(&id));
        let s = Fp::from_rational(c).ok_or_else(|| {
            Error::ModularUnsupported(format!("basis coordinate {c} not invertible mod p"))
        })?;
        Ok(x * s)
    })
}

/// Randomized vanishing test outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProbeOutcome {
    Refuted {
        trial: u32,
        monomial: Vec<usize>,
        basis: String,
        value: String,
    },
    ConsistentWithZero {
        prime: u64,
        trials: u32,
        seed: u64,
        failure_bound_log2: f64,
    },
}

impl ProbeOutcome {
    pub fn is_refuted(&self) -> bool {
        matches!(self, ProbeOutcome::Refuted { .. })
    }
}

/// Evaluates every coefficient of `f` at `trials` independent uniform points
/// of `F_prime`; refutes on the first nonzero value.
pub fn probe(f: &Form<MultiPoly>, prime: u64, trials: u32, seed: u64) -> Result<ProbeOutcome> {
    if !crate::ring::modular::is_prime_u64(prime) {
        return Err(Error::invalid(format!("{prime} is not prime")));
    }
    let mut vars = std::collections::BTreeSet::new();
    let mut degree = 0;
    for c in f.terms().values() {
        vars.extend(c.variables());
        degree = degree.max(c.total_degree());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let assignment: BTreeMap<VarId, u64> = vars
            .iter()
            .map(|v| (v.clone(), rand::Rng::gen_range(&mut rng, 0..prime)))
            .collect();
        for ((m, i), c) in f.terms() {
            let val = c.mod_eval(&assignment, prime)?;
            if val != 0 {
                return Ok(ProbeOutcome::Refuted {
                    trial,
                    monomial: m.indices(),
                    basis: f.algebra().label(*i).to_string(),
                    value: val.to_string(),
                });
            }
        }
    }
    Ok(ProbeOutcome::ConsistentWithZero {
        prime,
        trials,
        seed,
        failure_bound_log2: failure_bound_log2(degree.max(1), prime, trials),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::int_vector;
    use crate::forms::ParenTree;
    use crate::ring::DEFAULT_PRIME;
    use crate::zoo;

    #[test]
    fn variable_counts() {
        let a = Arc::new(zoo::abelian(3).unwrap());
        let line = Submodule::new(&a, vec![int_vector(&[0, 1, 0])]).unwrap();
        assert_eq!(generic_form(&line, 1, 2, "x").unwrap().len(), 2);
        let full = Submodule::full(&a);
        let f = generic_form(&full, 1, 3, "x").unwrap();
        let vars: std::collections::BTreeSet<_> =
            f.terms().values().flat_map(|c| c.variables()).collect();
        assert_eq!(vars.len(), 9);
        let plane = Submodule::coordinate(&a, &[0, 2]).unwrap();
        let g = generic_form(&plane, 2, 4, "y").unwrap();
        let vars: std::collections::BTreeSet<_> =
            g.terms().values().flat_map(|c| c.variables()).collect();
        assert_eq!(vars.len(), 12);
        assert!(generic_form(&plane, 3, 2, "y").is_err());
    }

    #[test]
    fn so3_powers() {
        let a = Arc::new(zoo::so(3).unwrap());
        let v = Submodule::full(&a);
        let f = generic_form(&v, 1, 3, "x").unwrap();
        let sq = f.wedge_power(2, &ParenTree::right_nested(2)).unwrap();
        assert!(!sq.is_zero());
        assert!(probe(&sq, DEFAULT_PRIME, 5, 1).unwrap().is_refuted());
        let cube = f.wedge_power(3, &ParenTree::right_nested(3)).unwrap();
        assert!(cube.is_zero());
        assert!(!probe(&cube, DEFAULT_PRIME, 5, 1).unwrap().is_refuted());
    }

    #[test]
    fn concentrated_grading_matches_plain() {
        let a = Arc::new(
            zoo::from_spec(
                &serde_json::json!({"zoo": "so", "n": 3, "grading_rank": 1, "grades": [[0], [0], [0]]}),
                "a",
            )
            .unwrap(),
        );
        let v = Submodule::full(&a);
        assert_eq!(
            generic_form(&v, 1, 3, "x").unwrap(),
            graded_generic_form(&v, 1, 3, "x").unwrap()
        );
    }

    #[test]
    fn components_partition_the_form() {
        let a = Arc::new(zoo::heisenberg(1).unwrap());
        let v = Submodule::full(&a);
        let f = graded_generic_form(&v, 1, 2, "x").unwrap();
        let comps = f.graded_components().unwrap();
        assert_eq!(comps.len(), 2);
        let mut sum = Form::zero(v.parent(), 2);
        for (g, c) in &comps {
            let grades = a.grading().unwrap().grades();
            assert!(c.terms().keys().all(|(_, i)| grades[*i] == *g));
            sum = sum.add(c).unwrap();
        }
        assert_eq!(sum, f);
    }

    #[test]
    fn fp_instance_is_evaluation() {
        let a = Arc::new(zoo::so(3).unwrap());
        let v = Submodule::full(&a);
        let exact = generic_form(&v, 1, 2, "x").unwrap();
        let mut counter = 0u64;
        let mut values = BTreeMap::new();
        let fp = generic_form_fp(&v, 1, 2, false, "x", &mut |id| {
            counter += 7;
            values.insert(id.clone(), Fp::new(counter));
            Fp::new(counter)
        })
        .unwrap();
        for (key, c) in exact.terms() {
            let val = c.eval_fp(&|id| values.get(id).copied()).unwrap();
            assert_eq!(fp.terms().get(key).copied().unwrap_or(Fp::zero()), val);
        }
    }
}

//! Curvature, torsion and the Hilbert-Palatini form over generic connections.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{ModuleSplit, Submodule};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::forms::{
    generic_form, generic_form_fp, graded_generic_form, Form, ParenTree, WedgeOptions,
};
use crate::ring::{rational, Coefficient, Fp, MultiPoly, Rational};

/// Bracketing used for the repeated products of `e`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerShape {
    #[default]
    RightNested,
    LeftNested,
}

impl PowerShape {
    pub fn tree(self, t: usize) -> ParenTree {
        match self {
            PowerShape::RightNested => ParenTree::right_nested(t),
            PowerShape::LeftNested => ParenTree::left_nested(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HpParams {
    pub n: usize,
    pub lambda: Rational,
    pub shape: PowerShape,
}

impl HpParams {
    pub fn new(n: usize, lambda: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("spacetime dimension {n} below 2")));
        }
        Ok(HpParams {
            n,
            lambda,
            shape: PowerShape::RightNested,
        })
    }

    /// Generators allocated for the generic construction.
    pub fn generators(&self) -> usize {
        self.n + 2
    }
}

/// Whether generic forms attach variables to homogeneous basis vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingUse {
    #[default]
    Ungraded,
    Graded,
}

/// Coframe `e` in `A₀`, connection `ω` in `A₁` and formal derivatives.
#[derive(Clone, Debug)]
pub struct ConnectionData<C: Coefficient> {
    pub e: Form<C>,
    pub omega: Form<C>,
    pub d_e: Form<C>,
    pub d_omega: Form<C>,
}

fn require_degree<C: Coefficient>(f: &Form<C>, k: usize, what: &'static str) -> Result<()> {
    match f.degree_range() {
        None => Ok(()),
        Some((lo, hi)) if lo == k && hi == k => Ok(()),
        Some((lo, hi)) => Err(Error::DimensionMismatch {
            what,
            expected: k,
            found: if lo != k { lo } else { hi },
        }),
    }
}

/// True when every coefficient slice of `f` lies in `v`.
pub fn valued_in(f: &Form<MultiPoly>, v: &Submodule) -> bool {
    let dim = v.parent().dim();
    let mut slices: BTreeMap<_, Vec<Rational>> = BTreeMap::new();
    for ((m, i), c) in f.terms() {
        for (pm, pc) in c.terms() {
            let slot = slices
                .entry((*m, pm.clone()))
                .or_insert_with(|| vec![rational::zero(); dim]);
            slot[*i] += pc;
        }
    }
    slices.values().all(|x| v.contains(x))
}

impl ConnectionData<MultiPoly> {
    /// Checked constructor: degrees 1, 1, 2, 2 and values in the split parts.
    pub fn new(
        split: &ModuleSplit,
        e: Form<MultiPoly>,
        omega: Form<MultiPoly>,
        d_e: Form<MultiPoly>,
        d_omega: Form<MultiPoly>,
    ) -> Result<Self> {
        for f in [&omega, &d_e, &d_omega] {
            if !e.same_context(f) {
                return Err(Error::ContextMismatch);
            }
        }
        if **e.algebra() != **split.parent() {
            return Err(Error::ContextMismatch);
        }
        require_degree(&e, 1, "e")?;
        require_degree(&omega, 1, "omega")?;
        require_degree(&d_e, 2, "de")?;
        require_degree(&d_omega, 2, "d omega")?;
        for (f, part, what) in [
            (&e, 0, "e"),
            (&d_e, 0, "de"),
            (&omega, 1, "omega"),
            (&d_omega, 1, "d omega"),
        ] {
            if !valued_in(f, split.part(part)) {
                return Err(Error::invalid(format!("{what} is not valued in part {part}")));
            }
        }
        Ok(ConnectionData { e, omega, d_e, d_omega })
    }

    /// Generic data on `n` generators with independent variables for each
    /// of `e`, `ω`, `de` and `dω`.
    pub fn generic(split: &ModuleSplit, n: usize, grading: GradingUse) -> Result<Self> {
        let make = |v: &Submodule, k: usize, tag: &str| match grading {
            GradingUse::Ungraded => generic_form(v, k, n, tag),
            GradingUse::Graded => graded_generic_form(v, k, n, tag),
        };
        Ok(ConnectionData {
            e: make(split.part0(), 1, "e")?,
            omega: make(split.part1(), 1, "w")?,
            d_e: make(split.part0(), 2, "de")?,
            d_omega: make(split.part1(), 2, "dw")?,
        })
    }
}

impl ConnectionData<Fp> {
    /// Evaluation of [`ConnectionData::generic`] at values drawn by `value`.
    pub fn generic_fp(
        split: &ModuleSplit,
        n: usize,
        grading: GradingUse,
        value: &mut dyn FnMut(&crate::ring::VarId) -> Fp,
    ) -> Result<Self> {
        let graded = grading == GradingUse::Graded;
        Ok(ConnectionData {
            e: generic_form_fp(split.part0(), 1, n, graded, "e", value)?,
            omega: generic_form_fp(split.part1(), 1, n, graded, "w", value)?,
            d_e: generic_form_fp(split.part0(), 2, n, graded, "de", value)?,
            d_omega: generic_form_fp(split.part1(), 2, n, graded, "dw", value)?,
        })
    }
}

/// `Ω = dω + ω ∧ ω`.
pub fn curvature<C: Coefficient>(omega: &Form<C>, d_omega: &Form<C>) -> Result<Form<C>> {
    require_degree(omega, 1, "omega")?;
    require_degree(d_omega, 2, "d omega")?;
    d_omega.add(&omega.wedge(omega)?)
}

/// `Θ = de + ω ∧ e`.
pub fn torsion<C: Coefficient>(e: &Form<C>, d_e: &Form<C>, omega: &Form<C>) -> Result<Form<C>> {
    require_degree(e, 1, "e")?;
    require_degree(d_e, 2, "de")?;
    require_degree(omega, 1, "omega")?;
    d_e.add(&omega.wedge(e)?)
}

/// The pieces of `α = ∧^{n-2} e ∧ Ω + Λ/(n-1)! ∧ⁿ e`.
#[derive(Clone, Debug)]
pub struct HpParts<C: Coefficient> {
    pub curvature: Form<C>,
    /// `∧^{n-2} e ∧ Ω`.
    pub homogeneous: Form<C>,
    /// `∧ⁿ e`, without the `Λ/(n-1)!` factor.
    pub inhomogeneous: Form<C>,
    pub alpha: Form<C>,
}

fn power<C: Coefficient>(
    e: &Form<C>,
    t: usize,
    shape: PowerShape,
    budget: &Budget,
) -> Result<Form<C>> {
    e.wedge_power_with(t, &shape.tree(t), WedgeOptions::default(), budget)
}

pub fn hp_parts<C: Coefficient>(
    data: &ConnectionData<C>,
    params: &HpParams,
    budget: &Budget,
) -> Result<HpParts<C>> {
    let n = params.n;
    if n < 2 {
        return Err(Error::invalid(format!("spacetime dimension {n} below 2")));
    }
    let omega_2 = curvature(&data.omega, &data.d_omega)?;
    let homogeneous = if n == 2 {
        omega_2.clone()
    } else {
        let p = power(&data.e, n - 2, params.shape, budget)?;
        let out = p.wedge(&omega_2)?;
        budget.check_terms(out.weight())?;
        out
    };
    let inhomogeneous = power(&data.e, n, params.shape, budget)?;
    let factor = rational::ratio(1, 1) / rational::factorial((n - 1) as u32);
    let alpha = homogeneous.add(&inhomogeneous.scale(&(params.lambda.clone() * factor))?)?;
    Ok(HpParts {
        curvature: omega_2,
        homogeneous,
        inhomogeneous,
        alpha,
    })
}

/// Generic Hilbert-Palatini form on `n + 2` generators.
pub fn hp_form(
    split: &ModuleSplit,
    params: &HpParams,
    grading: GradingUse,
    budget: &Budget,
) -> Result<Form<MultiPoly>> {
    let n = params.generators();
    budget.check_generators(n)?;
    let data = ConnectionData::generic(split, n, grading)?;
    Ok(hp_parts(&data, params, budget)?.alpha)
}

/// Left-hand sides `e ∧ Ω + Λ/(n-1)! ∧³ e` and `e ∧ Θ`.
pub fn ep_equation_forms<C: Coefficient>(
    data: &ConnectionData<C>,
    params: &HpParams,
) -> Result<(Form<C>, Form<C>)> {
    let omega_2 = curvature(&data.omega, &data.d_omega)?;
    let theta = torsion(&data.e, &data.d_e, &data.omega)?;
    let cube = data
        .e
        .wedge_power(3, &params.shape.tree(3))?
        .scale(&(params.lambda.clone() / rational::factorial((params.n - 1) as u32)))?;
    let first = data.e.wedge(&omega_2)?.add(&cube)?;
    let second = data.e.wedge(&theta)?;
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::ring::rational::rat;
    use crate::zoo;
    use std::sync::Arc;

    fn whole(a: Algebra) -> ModuleSplit {
        ModuleSplit::whole(&Arc::new(a))
    }

    fn iso3_split() -> ModuleSplit {
        let a = Arc::new(zoo::iso_pq(3, 0).unwrap());
        let t: Vec<_> = (0..3).map(|i| crate::algebra::linalg::unit_vector(6, i)).collect();
        let r: Vec<_> = (3..6).map(|i| crate::algebra::linalg::unit_vector(6, i)).collect();
        ModuleSplit::new(&a, t, r).unwrap()
    }

    #[test]
    fn curvature_cases() {
        let split = iso3_split();
        let d = ConnectionData::generic(&split, 4, GradingUse::Ungraded).unwrap();
        let zero = Form::zero(d.omega.algebra(), 4);
        assert_eq!(curvature(&zero, &d.d_omega).unwrap(), d.d_omega);
        let full = curvature(&d.omega, &d.d_omega).unwrap();
        let sq = d.omega.wedge(&d.omega).unwrap();
        assert!(!sq.is_zero());
        // Disjoint variables: term count adds up.
        let quad = full.terms().values().map(|c| c.len()).sum::<usize>();
        let lin = d.d_omega.terms().values().map(|c| c.len()).sum::<usize>();
        let sqn = sq.terms().values().map(|c| c.len()).sum::<usize>();
        assert_eq!(quad, lin + sqn);
        assert!(curvature(&d.d_omega, &d.omega).is_err());
    }

    #[test]
    fn torsion_cases() {
        let split = iso3_split();
        let d = ConnectionData::generic(&split, 4, GradingUse::Ungraded).unwrap();
        let zero = Form::zero(d.omega.algebra(), 4);
        assert_eq!(torsion(&d.e, &d.d_e, &zero).unwrap(), d.d_e);
        // Rotations act on translations.
        assert!(!d.omega.wedge(&d.e).unwrap().is_zero());

        let ext = Arc::new(zoo::split_extension(&zoo::so(3).unwrap(), 3).unwrap());
        let t: Vec<_> = (0..3).map(|i| crate::algebra::linalg::unit_vector(6, i)).collect();
        let r: Vec<_> = (3..6).map(|i| crate::algebra::linalg::unit_vector(6, i)).collect();
        let split = ModuleSplit::new(&ext, t, r).unwrap();
        let d = ConnectionData::generic(&split, 4, GradingUse::Ungraded).unwrap();
        assert!(d.omega.wedge(&d.e).unwrap().is_zero());
        assert_eq!(torsion(&d.e, &d.d_e, &d.omega).unwrap(), d.d_e);
    }

    #[test]
    fn hp_small_cases() {
        let split = iso3_split();
        let b = Budget::unlimited();
        let d = ConnectionData::generic(&split, 4, GradingUse::Ungraded).unwrap();
        let p = hp_parts(&d, &HpParams::new(2, rat(3)).unwrap(), &b).unwrap();
        let expect = p
            .curvature
            .add(&d.e.wedge(&d.e).unwrap().scale(&rat(3)).unwrap())
            .unwrap();
        assert_eq!(p.alpha, expect);
        let p0 = hp_parts(&d, &HpParams::new(2, rat(0)).unwrap(), &b).unwrap();
        assert_eq!(p0.alpha, p0.homogeneous);
        assert!(HpParams::new(1, rat(0)).is_err());
    }

    #[test]
    fn abelian_inhomogeneous_vanishes() {
        let split = whole(zoo::abelian(2).unwrap());
        let b = Budget::unlimited();
        let d = ConnectionData::generic(&split, 6, GradingUse::Ungraded).unwrap();
        let p = hp_parts(&d, &HpParams::new(4, rat(5)).unwrap(), &b).unwrap();
        assert!(p.inhomogeneous.is_zero());
        assert_eq!(p.alpha, p.homogeneous);
    }

    #[test]
    fn ep_forms() {
        // Translations square to zero, so the cubic term drops out.
        let split = iso3_split();
        let d = ConnectionData::generic(&split, 6, GradingUse::Ungraded).unwrap();
        let (first, _) = ep_equation_forms(&d, &HpParams::new(4, rat(2)).unwrap()).unwrap();
        let omega_2 = curvature(&d.omega, &d.d_omega).unwrap();
        assert!(!first.is_zero());
        assert_eq!(first, d.e.wedge(&omega_2).unwrap());

        let split = whole(zoo::so(3).unwrap());
        let d = ConnectionData::generic(&split, 6, GradingUse::Ungraded).unwrap();
        let (_, second) = ep_equation_forms(&d, &HpParams::new(4, rat(0)).unwrap()).unwrap();
        assert!(!second.is_zero());
        let no_de = ConnectionData {
            d_e: Form::zero(d.e.algebra(), 6),
            ..d.clone()
        };
        assert!(ep_equation_forms(&no_de, &HpParams::new(4, rat(0)).unwrap())
            .unwrap()
            .1
            .is_zero());
    }

    #[test]
    fn checked_constructor() {
        let split = iso3_split();
        let d = ConnectionData::generic(&split, 4, GradingUse::Ungraded).unwrap();
        assert!(ConnectionData::new(&split, d.e.clone(), d.omega.clone(), d.d_e.clone(), d.d_omega.clone()).is_ok());
        assert!(ConnectionData::new(&split, d.omega.clone(), d.omega.clone(), d.d_e.clone(), d.d_omega.clone()).is_err());
        assert!(ConnectionData::new(&split, d.e.clone(), d.omega.clone(), d.d_omega.clone(), d.d_omega.clone()).is_err());
    }
}

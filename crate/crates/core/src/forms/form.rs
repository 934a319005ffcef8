//! Algebra-valued elements of the free Grassmann algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::mono::GMono;
use super::paren::ParenTree;
use crate::algebra::{Algebra, Grade};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ring::{Coefficient, Rational};

/// Options for the induced product on forms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WedgeOptions {
    /// Extra sign `(-1)^(p(a) |ν|)` when an algebra element of parity `p(a)`
    /// moves past a form monomial `ν`. Off by default.
    pub parity_sign: bool,
}

pub type TermKey = (GMono, usize);

/// Sum of terms `coeff · μ ⊗ e_i` over an algebra on `N` generators.
#[derive(Clone, Debug)]
pub struct Form<C: Coefficient> {
    algebra: Arc<Algebra>,
    generators: usize,
    terms: BTreeMap<TermKey, C>,
}

impl<C: Coefficient> PartialEq for Form<C> {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
            && self.terms == other.terms
            && (Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra)
    }
}

/// Structure constants converted into the coefficient ring's scalars.
pub(crate) struct ScalarTable<S> {
    dim: usize,
    entries: Vec<Vec<(usize, S)>>,
    parity: Option<Vec<bool>>,
}

impl<S: Clone> ScalarTable<S> {
    pub(crate) fn new<C: Coefficient<Scalar = S>>(a: &Algebra, opts: WedgeOptions) -> Result<Self> {
        let n = a.dim();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let row = a
                    .product(i, j)
                    .iter()
                    .map(|(k, c)| {
                        C::scalar(c).map(|s| (*k, s)).ok_or_else(|| {
                            Error::ModularUnsupported(format!(
                                "structure constant c_{i}{j}^{k} has no image in the coefficient ring"
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                entries.push(row);
            }
        }
        let parity = if opts.parity_sign {
            a.grading()
                .filter(|g| g.parity_rank() > 0)
                .map(|g| g.grades().iter().map(|x| x.total_parity() == 1).collect())
        } else {
            None
        };
        Ok(ScalarTable {
            dim: n,
            entries,
            parity,
        })
    }
}

fn add_into<C: Coefficient>(map: &mut BTreeMap<TermKey, C>, key: TermKey, c: C) {
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            e.get_mut().add_assign_ref(&c);
        }
    }
}

impl<C: Coefficient> Form<C> {
    pub fn zero(algebra: &Arc<Algebra>, generators: usize) -> Self {
        Form {
            algebra: Arc::clone(algebra),
            generators,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from terms, summing repeats and dropping zeros.
    pub fn from_terms(
        algebra: &Arc<Algebra>,
        generators: usize,
        terms: impl IntoIterator<Item = (TermKey, C)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((m, i), c) in terms {
            if m.span() > generators {
                return Err(Error::IndexOutOfRange {
                    what: "grassmann generator",
                    index: m.span() - 1,
                    bound: generators,
                });
            }
            if i >= algebra.dim() {
                return Err(Error::IndexOutOfRange {
                    what: "algebra basis",
                    index: i,
                    bound: algebra.dim(),
                });
            }
            add_into(&mut map, (m, i), c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Form {
            algebra: Arc::clone(algebra),
            generators,
            terms: map,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact vanishing: the canonical term map is empty.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total number of stored coefficient terms.
    pub fn weight(&self) -> u64 {
        self.terms.values().map(|c| c.weight() as u64).sum()
    }

    /// Smallest and largest monomial degree present.
    pub fn degree_range(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|(m, _)| m.degree());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    pub fn same_context(&self, other: &Form<C>) -> bool {
        self.generators == other.generators
            && (Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra)
    }

    fn require_context(&self, other: &Form<C>) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Form<C>) -> Result<Form<C>> {
        self.require_context(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            add_into(&mut terms, *k, c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Form {
            algebra: Arc::clone(&self.algebra),
            generators: self.generators,
            terms,
        })
    }

    pub fn neg(&self) -> Form<C> {
        Form {
            algebra: Arc::clone(&self.algebra),
            generators: self.generators,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg_ref())).collect(),
        }
    }

    pub fn sub(&self, other: &Form<C>) -> Result<Form<C>> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Result<Form<C>> {
        let s = C::scalar(r).ok_or_else(|| {
            Error::ModularUnsupported(format!("scalar {r} has no image in the coefficient ring"))
        })?;
        let mut terms: BTreeMap<TermKey, C> =
            self.terms.iter().map(|(k, c)| (*k, c.scale(&s))).collect();
        terms.retain(|_, c| !c.is_zero());
        Ok(Form {
            algebra: Arc::clone(&self.algebra),
            generators: self.generators,
            terms,
        })
    }

    /// Terms whose algebra basis vector has grade `g`.
    pub fn component(&self, g: &Grade) -> Result<Form<C>> {
        let grading = self
            .algebra
            .grading()
            .ok_or_else(|| Error::NotGraded(self.algebra.display_name()))?;
        Ok(Form {
            algebra: Arc::clone(&self.algebra),
            generators: self.generators,
            terms: self
                .terms
                .iter()
                .filter(|((_, i), _)| grading.grades()[*i] == *g)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        })
    }

    /// Nonzero graded components, sorted by grade.
    pub fn graded_components(&self) -> Result<Vec<(Grade, Form<C>)>> {
        let grading = self
            .algebra
            .grading()
            .ok_or_else(|| Error::NotGraded(self.algebra.display_name()))?;
        let mut out = Vec::new();
        for g in grading.support() {
            let c = self.component(&g)?;
            if !c.is_zero() {
                out.push((g, c));
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Form<C>) -> Result<Form<C>> {
        self.wedge_with(other, WedgeOptions::default())
    }

    pub fn wedge_with(&self, other: &Form<C>, opts: WedgeOptions) -> Result<Form<C>> {
        self.require_context(other)?;
        let table = ScalarTable::new::<C>(&self.algebra, opts)?;
        Ok(self.wedge_table(other, &table))
    }

    /// Product using pre-converted structure constants.
    pub(crate) fn wedge_table(&self, other: &Form<C>, table: &ScalarTable<C::Scalar>) -> Form<C> {
        let left: Vec<(&TermKey, &C)> = self.terms.iter().collect();
        let right: Vec<(&TermKey, &C)> = other.terms.iter().collect();
        let work = |chunk: &[(&TermKey, &C)]| {
            let mut acc: BTreeMap<TermKey, C> = BTreeMap::new();
            for ((mu, i), cf) in chunk {
                for ((nu, j), cg) in &right {
                    let row = &table.entries[i * table.dim + j];
                    if row.is_empty() {
                        continue;
                    }
                    let Some((mut negative, m)) = mu.wedge(*nu) else {
                        continue;
                    };
                    if let Some(par) = &table.parity {
                        if par[*i] && nu.degree() % 2 == 1 {
                            negative = !negative;
                        }
                    }
                    let mut prod = cf.mul_ref(cg);
                    if negative {
                        prod = prod.neg_ref();
                    }
                    for (k, s) in row {
                        add_into(&mut acc, (m, *k), prod.scale(s));
                    }
                }
            }
            acc
        };
        let cost = left.len().saturating_mul(right.len());
        let mut terms = if cost > 4096 && left.len() > 1 {
            let chunk = left.len().div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
            let parts: Vec<BTreeMap<TermKey, C>> = left.par_chunks(chunk).map(work).collect();
            let mut it = parts.into_iter();
            let mut acc = it.next().unwrap_or_default();
            for p in it {
                for (k, c) in p {
                    add_into(&mut acc, k, c);
                }
            }
            acc
        } else {
            work(&left)
        };
        terms.retain(|_, c| !c.is_zero());
        Form {
            algebra: Arc::clone(&self.algebra),
            generators: self.generators,
            terms,
        }
    }

    /// Product of `factors` bracketed by `tree`; leaves consume factors in order.
    pub fn product_tree(
        factors: &[&Form<C>],
        tree: &ParenTree,
        opts: WedgeOptions,
        budget: &Budget,
    ) -> Result<Form<C>> {
        if tree.leaves() != factors.len() {
            return Err(Error::LeafMismatch {
                expected: factors.len(),
                found: tree.leaves(),
            });
        }
        let first = factors
            .first()
            .ok_or_else(|| Error::invalid("product of zero factors"))?;
        for f in factors {
            first.require_context(f)?;
        }
        let table = ScalarTable::new::<C>(&first.algebra, opts)?;
        fn eval<C: Coefficient>(
            factors: &[&Form<C>],
            tree: &ParenTree,
            table: &ScalarTable<C::Scalar>,
            budget: &Budget,
        ) -> Result<Form<C>> {
            match tree.split() {
                None => Ok(factors[0].clone()),
                Some((l, r)) => {
                    let nl = l.leaves();
                    let lf = eval(&factors[..nl], l, table, budget)?;
                    if lf.is_zero() {
                        return Ok(lf);
                    }
                    let rf = eval(&factors[nl..], r, table, budget)?;
                    let out = lf.wedge_table(&rf, table);
                    budget.check_terms(out.weight())?;
                    budget.check_time()?;
                    Ok(out)
                }
            }
        }
        eval(factors, tree, &table, budget)
    }

    /// `t`-fold product of `self` with itself bracketed by `tree`.
    pub fn wedge_power(&self, t: usize, tree: &ParenTree) -> Result<Form<C>> {
        self.wedge_power_with(t, tree, WedgeOptions::default(), &Budget::unlimited())
    }

    pub fn wedge_power_with(
        &self,
        t: usize,
        tree: &ParenTree,
        opts: WedgeOptions,
        budget: &Budget,
    ) -> Result<Form<C>> {
        if t == 0 {
            return Err(Error::invalid("wedge power needs t >= 1"));
        }
        if tree.leaves() != t {
            return Err(Error::LeafMismatch {
                expected: t,
                found: tree.leaves(),
            });
        }
        let factors: Vec<&Form<C>> = vec![self; t];
        Form::product_tree(&factors, tree, opts, budget)
    }

    /// First term in canonical order, if any.
    pub fn first_term(&self) -> Option<(&TermKey, &C)> {
        self.terms.iter().next()
    }

    /// Canonical JSON: terms sorted by monomial, then basis index.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((m, i), c)| {
                    json!({
                        "monomial": m.indices(),
                        "basis": self.algebra.label(*i),
                        "coeff": c.to_json(),
                    })
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::rat;
    use crate::ring::{MultiPoly, VarId};
    use crate::zoo;

    fn shared(a: Algebra) -> Arc<Algebra> {
        Arc::new(a)
    }

    fn x(i: u32) -> MultiPoly {
        MultiPoly::var(VarId::new("x", vec![i]))
    }

    #[test]
    fn zero_annihilates() {
        let a = shared(zoo::so(3).unwrap());
        let f = Form::from_terms(&a, 2, [((GMono::generator(0), 0), x(0))]).unwrap();
        let z = Form::<MultiPoly>::zero(&a, 2);
        assert!(f.wedge(&z).unwrap().is_zero());
    }

    #[test]
    fn bracket_of_pure_terms() {
        // (θ0 ⊗ M01) ∧ (θ1 ⊗ M02) = θ0θ1 ⊗ [M01, M02]
        let a = shared(zoo::so(3).unwrap());
        let f = Form::from_terms(&a, 2, [((GMono::generator(0), 0), x(0))]).unwrap();
        let g = Form::from_terms(&a, 2, [((GMono::generator(1), 1), x(1))]).unwrap();
        let w = f.wedge(&g).unwrap();
        let m01 = GMono::from_indices(&[0, 1]);
        for (k, c) in a.product(0, 1) {
            assert_eq!(w.terms()[&(m01, *k)], x(0).mul_ref(&x(1)).scale(c));
        }
        assert_eq!(w.len(), a.product(0, 1).len());
    }

    #[test]
    fn abelian_square_vanishes() {
        let a = shared(zoo::abelian(2).unwrap());
        let f = Form::from_terms(
            &a,
            2,
            [((GMono::generator(0), 0), x(0)), ((GMono::generator(1), 1), x(1))],
        )
        .unwrap();
        assert!(f.wedge(&f).unwrap().is_zero());
    }

    #[test]
    fn leaf_mismatch() {
        let a = shared(zoo::so(3).unwrap());
        let f = Form::<MultiPoly>::zero(&a, 2);
        assert!(matches!(
            f.wedge_power(3, &ParenTree::right_nested(2)),
            Err(Error::LeafMismatch { .. })
        ));
    }

    #[test]
    fn context_mismatch() {
        let a = shared(zoo::so(3).unwrap());
        let f = Form::<MultiPoly>::zero(&a, 2);
        let g = Form::<MultiPoly>::zero(&a, 3);
        assert!(matches!(f.wedge(&g), Err(Error::ContextMismatch)));
    }

    #[test]
    fn scaling_by_zero() {
        let a = shared(zoo::so(3).unwrap());
        let f = Form::from_terms(&a, 2, [((GMono::generator(0), 0), x(0))]).unwrap();
        assert!(f.scale(&rat(0)).unwrap().is_zero());
    }
}

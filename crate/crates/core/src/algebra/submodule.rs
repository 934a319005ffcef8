//! Submodules of an algebra and two-part module decompositions.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::grade::Grade;
use super::linalg::{self, SpanSolver, Vector};
use super::structure::{Algebra, FlagCheck};
use crate::error::{Error, Result};
use crate::ring::rational;

/// Linearly independent family of vectors in a parent algebra.
#[derive(Clone, Debug)]
pub struct Submodule {
    parent: Arc<Algebra>,
    basis: Vec<Vector>,
    solver: SpanSolver,
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
            && (Arc::ptr_eq(&self.parent, &other.parent) || *self.parent == *other.parent)
    }
}

impl Submodule {
    pub fn new(parent: &Arc<Algebra>, generators: Vec<Vector>) -> Result<Self> {
        let n = parent.dim();
        for g in &generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "generator length",
                    expected: n,
                    found: g.len(),
                });
            }
        }
        let solver = SpanSolver::new(&generators, n)?;
        Ok(Submodule {
            parent: Arc::clone(parent),
            basis: generators,
            solver,
        })
    }

    /// The whole algebra with its standard basis.
    pub fn full(parent: &Arc<Algebra>) -> Self {
        let n = parent.dim();
        let basis = (0..n).map(|i| linalg::unit_vector(n, i)).collect();
        Submodule::new(parent, basis).expect("standard basis is independent")
    }

    /// Span of a subset of the standard basis.
    pub fn coordinate(parent: &Arc<Algebra>, indices: &[usize]) -> Result<Self> {
        let n = parent.dim();
        let mut basis = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange {
                    what: "basis index",
                    index: i,
                    bound: n,
                });
            }
            basis.push(linalg::unit_vector(n, i));
        }
        Submodule::new(parent, basis)
    }

    pub fn zero(parent: &Arc<Algebra>) -> Self {
        Submodule::new(parent, Vec::new()).expect("empty family is independent")
    }

    pub fn parent(&self) -> &Arc<Algebra> {
        &self.parent
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[rational::Rational]) -> bool {
        self.solver.contains(v)
    }

    pub fn coordinates(&self, v: &[rational::Rational]) -> Option<Vector> {
        self.solver.coordinates(v)
    }

    /// `V * V ⊂ V`; witness is a pair of basis indices of `V`.
    pub fn subalgebra_check(&self) -> FlagCheck {
        for (a, x) in self.basis.iter().enumerate() {
            for (b, y) in self.basis.iter().enumerate() {
                if !self.contains(&self.parent.mul(x, y)) {
                    return FlagCheck {
                        holds: false,
                        witness: Some(vec![a, b]),
                    };
                }
            }
        }
        FlagCheck {
            holds: true,
            witness: None,
        }
    }

    /// Two-sided ideal test; witness is `[basis index of V, parent basis index]`.
    pub fn ideal_check(&self) -> FlagCheck {
        let n = self.parent.dim();
        for (a, x) in self.basis.iter().enumerate() {
            for j in 0..n {
                let e = linalg::unit_vector(n, j);
                if !self.contains(&self.parent.mul(x, &e)) || !self.contains(&self.parent.mul(&e, x))
                {
                    return FlagCheck {
                        holds: false,
                        witness: Some(vec![a, j]),
                    };
                }
            }
        }
        FlagCheck {
            holds: true,
            witness: None,
        }
    }

    /// Whether all products of elements of `V` vanish; witness pair on failure.
    pub fn square_zero_check(&self) -> FlagCheck {
        for (a, x) in self.basis.iter().enumerate() {
            for (b, y) in self.basis.iter().enumerate() {
                if !linalg::is_zero_vector(&self.parent.mul(x, y)) {
                    return FlagCheck {
                        holds: false,
                        witness: Some(vec![a, b]),
                    };
                }
            }
        }
        FlagCheck {
            holds: true,
            witness: None,
        }
    }

    /// Intersection with the homogeneous component of grade `g`.
    pub fn component(&self, g: &Grade) -> Result<Submodule> {
        let grading = self
            .parent
            .grading()
            .ok_or_else(|| Error::NotGraded(self.parent.display_name()))?;
        let n = self.parent.dim();
        let homogeneous: Vec<Vector> = grading
            .grades()
            .iter()
            .enumerate()
            .filter(|(_, h)| *h == g)
            .map(|(i, _)| linalg::unit_vector(n, i))
            .collect();
        let basis = if self.basis.iter().all(|v| is_supported_in(v, grading.grades(), g)) {
            // Keep the user's basis when it already lies in the component.
            self.basis.clone()
        } else {
            linalg::intersect(&self.basis, &homogeneous, n)
        };
        let basis = basis
            .into_iter()
            .filter(|v| is_supported_in(v, grading.grades(), g))
            .collect();
        Submodule::new(&self.parent, basis)
    }

    /// Nonzero homogeneous components `V ∩ A^m`, sorted by grade.
    pub fn components(&self) -> Result<Vec<(Grade, Submodule)>> {
        let grading = self
            .parent
            .grading()
            .ok_or_else(|| Error::NotGraded(self.parent.display_name()))?;
        let mut out = Vec::new();
        for g in grading.support() {
            let c = self.component(&g)?;
            if c.dim() > 0 {
                out.push((g, c));
            }
        }
        Ok(out)
    }

    /// `V` equals the sum of its homogeneous components.
    pub fn is_graded(&self) -> Result<bool> {
        let total: usize = self.components()?.iter().map(|(_, c)| c.dim()).sum();
        Ok(total == self.dim())
    }

    /// Same vectors viewed in another algebra on the same module.
    pub fn rebase(&self, parent: &Arc<Algebra>) -> Result<Submodule> {
        Submodule::new(parent, self.basis.clone())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .basis
            .iter()
            .map(|v| Value::Array(v.iter().map(|c| json!(rational::to_text(c))).collect()))
            .collect();
        Value::Array(rows)
    }
}

fn is_supported_in(v: &[rational::Rational], grades: &[Grade], g: &Grade) -> bool {
    v.iter()
        .zip(grades)
        .all(|(c, h)| num_traits::Zero::is_zero(c) || h == g)
}

/// Decomposition `A = A0 ⊕ A1` with computed closure properties of `A0`.
#[derive(Clone, Debug)]
pub struct ModuleSplit {
    part0: Submodule,
    part1: Submodule,
    report: SplitReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub dim0: usize,
    pub dim1: usize,
    pub part0_subalgebra: FlagCheck,
    pub part0_ideal: FlagCheck,
    pub part1_subalgebra: FlagCheck,
}

impl ModuleSplit {
    pub fn new(parent: &Arc<Algebra>, gens0: Vec<Vector>, gens1: Vec<Vector>) -> Result<Self> {
        let part0 = Submodule::new(parent, gens0)?;
        let part1 = Submodule::new(parent, gens1)?;
        ModuleSplit::from_parts(part0, part1)
    }

    pub fn from_parts(part0: Submodule, part1: Submodule) -> Result<Self> {
        if *part0.parent() != *part1.parent() {
            return Err(Error::ContextMismatch);
        }
        let parent_dim = part0.parent().dim();
        let all: Vec<Vector> = part0
            .basis()
            .iter()
            .chain(part1.basis())
            .cloned()
            .collect();
        let rank = linalg::rank(&all);
        if rank != parent_dim || part0.dim() + part1.dim() != parent_dim {
            return Err(Error::NotComplementary {
                dim0: part0.dim(),
                dim1: part1.dim(),
                rank,
                parent_dim,
            });
        }
        let report = SplitReport {
            dim0: part0.dim(),
            dim1: part1.dim(),
            part0_subalgebra: part0.subalgebra_check(),
            part0_ideal: part0.ideal_check(),
            part1_subalgebra: part1.subalgebra_check(),
        };
        Ok(ModuleSplit {
            part0,
            part1,
            report,
        })
    }

    /// `A0 = A`, `A1 = 0`.
    pub fn whole(parent: &Arc<Algebra>) -> Self {
        ModuleSplit::from_parts(Submodule::full(parent), Submodule::zero(parent))
            .expect("trivial split is complementary")
    }

    pub fn parent(&self) -> &Arc<Algebra> {
        self.part0.parent()
    }

    pub fn part0(&self) -> &Submodule {
        &self.part0
    }

    pub fn part1(&self) -> &Submodule {
        &self.part1
    }

    pub fn part(&self, which: usize) -> &Submodule {
        if which == 0 {
            &self.part0
        } else {
            &self.part1
        }
    }

    pub fn report(&self) -> &SplitReport {
        &self.report
    }

    /// Same split over another algebra on the same module.
    pub fn rebase(&self, parent: &Arc<Algebra>) -> Result<ModuleSplit> {
        ModuleSplit::from_parts(self.part0.rebase(parent)?, self.part1.rebase(parent)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "part0": self.part0.to_json(),
            "part1": self.part1.to_json(),
            "properties": self.report,
        })
    }
}

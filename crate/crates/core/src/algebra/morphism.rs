//! Linear maps between algebras with checked multiplicativity.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::grade::Grade;
use super::linalg::QMatrix;
use super::structure::Algebra;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MorphismStatus {
    Verified,
    Refuted { witness: (usize, usize) },
    Unchecked,
}

impl MorphismStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, MorphismStatus::Verified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GradingStatus {
    Verified,
    /// `f(e_basis)` has a component outside grade `grade(basis) + l`.
    Refuted { basis: usize },
    NotApplicable,
}

/// Linear map `source -> target`; column `j` of `matrix` is the image of `e_j`.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    matrix: QMatrix,
    shift: Option<Grade>,
    status: MorphismStatus,
    grading: GradingStatus,
}

impl AlgebraMorphism {
    /// Wraps a matrix without checking anything.
    pub fn unchecked(
        source: &Arc<Algebra>,
        target: &Arc<Algebra>,
        matrix: QMatrix,
        shift: Option<Grade>,
    ) -> Result<Self> {
        if matrix.cols() != source.dim() || matrix.rows() != target.dim() {
            return Err(Error::DimensionMismatch {
                what: "morphism matrix shape (rows = target dim, cols = source dim)",
                expected: target.dim() * source.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        Ok(AlgebraMorphism {
            source: Arc::clone(source),
            target: Arc::clone(target),
            matrix,
            shift,
            status: MorphismStatus::Unchecked,
            grading: GradingStatus::NotApplicable,
        })
    }

    /// Builds the map and decides multiplicativity and the grading shift.
    pub fn check(
        matrix: QMatrix,
        source: &Arc<Algebra>,
        target: &Arc<Algebra>,
        shift: Option<Grade>,
    ) -> Result<Self> {
        let mut m = AlgebraMorphism::unchecked(source, target, matrix, shift)?;
        m.status = m.multiplicativity();
        m.grading = m.grading_check()?;
        Ok(m)
    }

    fn multiplicativity(&self) -> MorphismStatus {
        let n = self.source.dim();
        let images = self.matrix.columns();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.matrix.mul_vec(&self.source.basis_product_dense(i, j));
                let rhs = self.target.mul(&images[i], &images[j]);
                if lhs != rhs {
                    return MorphismStatus::Refuted { witness: (i, j) };
                }
            }
        }
        MorphismStatus::Verified
    }

    fn grading_check(&self) -> Result<GradingStatus> {
        let (Some(gs), Some(gt)) = (self.source.grading(), self.target.grading()) else {
            return Ok(GradingStatus::NotApplicable);
        };
        let l = self
            .shift
            .clone()
            .unwrap_or_else(|| Grade::zero(gs.rank(), gs.parity_rank()));
        for j in 0..self.source.dim() {
            let want = gs.grades()[j].add(&l)?;
            for k in 0..self.target.dim() {
                if !num_traits::Zero::is_zero(self.matrix.get(k, j)) && gt.grades()[k] != want {
                    return Ok(GradingStatus::Refuted { basis: j });
                }
            }
        }
        Ok(GradingStatus::Verified)
    }

    pub fn identity(a: &Arc<Algebra>) -> Self {
        AlgebraMorphism::check(QMatrix::identity(a.dim()), a, a, None).expect("square identity")
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn shift(&self) -> Option<&Grade> {
        self.shift.as_ref()
    }

    pub fn status(&self) -> &MorphismStatus {
        &self.status
    }

    pub fn grading_status(&self) -> &GradingStatus {
        &self.grading
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim()
    }

    /// `other ∘ self`, rechecked.
    pub fn then(&self, other: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if *self.target != *other.source {
            return Err(Error::ContextMismatch);
        }
        let matrix = other.matrix.mul(&self.matrix)?;
        let shift = match (&self.shift, &other.shift) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        AlgebraMorphism::check(matrix, &self.source, &other.target, shift)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.display_name(),
            "target": self.target.display_name(),
            "matrix": self.matrix.to_json(),
            "shift": self.shift.as_ref().map(Grade::to_json),
            "multiplicative": self.status,
            "grading": self.grading,
            "injective": self.is_injective(),
        })
    }
}

/// Functional form of [`AlgebraMorphism::check`].
pub fn morphism_check(
    matrix: QMatrix,
    source: &Arc<Algebra>,
    target: &Arc<Algebra>,
    shift: Option<Grade>,
) -> Result<AlgebraMorphism> {
    AlgebraMorphism::check(matrix, source, target, shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::structure::AlgebraSpec;
    use crate::ring::rational::rat;

    fn complex() -> Arc<Algebra> {
        Algebra::new(AlgebraSpec {
            labels: vec!["1".into(), "i".into()],
            products: vec![
                (0, 0, vec![(0, rat(1))]),
                (0, 1, vec![(1, rat(1))]),
                (1, 0, vec![(1, rat(1))]),
                (1, 1, vec![(0, rat(-1))]),
            ],
            ..Default::default()
        })
        .unwrap()
        .into_shared()
    }

    /// 2x2 real matrices, basis E00, E01, E10, E11 (row-major).
    fn mat2() -> Arc<Algebra> {
        let labels = ["E00", "E01", "E10", "E11"].map(String::from).to_vec();
        Algebra::from_fn(None, labels, |x, y| {
            let (a, b) = (x / 2, x % 2);
            let (c, d) = (y / 2, y % 2);
            let mut v = vec![rat(0); 4];
            if b == c {
                v[2 * a + d] = rat(1);
            }
            v
        })
        .unwrap()
        .into_shared()
    }

    #[test]
    fn identity_and_zero_are_multiplicative() {
        let c = complex();
        assert!(AlgebraMorphism::identity(&c).status().is_verified());
        let z = morphism_check(QMatrix::zeros(2, 2), &c, &c, None).unwrap();
        assert!(z.status().is_verified());
    }

    #[test]
    fn complex_into_real_matrices() {
        // a + bi -> [[a, -b], [b, a]]
        let m = QMatrix::from_ints(&[&[1, 0], &[0, -1], &[0, 1], &[1, 0]]);
        let f = morphism_check(m, &complex(), &mat2(), None).unwrap();
        assert!(f.status().is_verified());
        assert!(f.is_injective());
    }

    #[test]
    fn conjugation_on_matrices_fails() {
        let m = QMatrix::from_ints(&[&[1, 0], &[0, 1], &[0, 1], &[1, 0]]);
        let f = morphism_check(m, &complex(), &mat2(), None).unwrap();
        assert!(matches!(f.status(), MorphismStatus::Refuted { .. }));
    }

    #[test]
    fn shape_mismatch_is_error() {
        assert!(morphism_check(QMatrix::zeros(3, 2), &complex(), &mat2(), None).is_err());
    }
}

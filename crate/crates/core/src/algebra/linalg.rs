//! Dense linear algebra over the rationals.

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring::{rational, Rational};

pub type Vector = Vec<Rational>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn int_vector(v: &[i64]) -> Vector {
    v.iter().map(|&x| rational::rat(x)).collect()
}

pub fn axpy(acc: &mut [Rational], a: &Rational, x: &[Rational]) {
    if a.is_zero() {
        return;
    }
    for (t, xi) in acc.iter_mut().zip(x) {
        if !xi.is_zero() {
            *t += a * xi;
        }
    }
}

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    what: "matrix row length",
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(QMatrix { rows: r, cols: c, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = QMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    what: "matrix column length",
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(rows.iter().map(|r| int_vector(r)).collect())
            .expect("rectangular integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                what: "matrix product inner dimension",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == QMatrix::identity(self.rows)
    }

    pub fn rank(&self) -> usize {
        rank(&self.row_vectors())
    }

    /// Row-major entries flattened into one vector.
    pub fn flatten(&self) -> Vector {
        self.data.clone()
    }

    pub fn unflatten(rows: usize, cols: usize, v: Vector) -> QMatrix {
        assert_eq!(v.len(), rows * cols);
        QMatrix { rows, cols, data: v }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|r| {
                    Value::Array(
                        self.row(r)
                            .iter()
                            .map(|x| Value::from(rational::to_text(x)))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, location: &str) -> Result<QMatrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::parse(location, "matrix must be an array of rows"))?;
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::parse(format!("{location}[{i}]"), "row must be an array"))?;
            out.push(
                row.iter()
                    .map(|x| parse_scalar(x, location))
                    .collect::<Result<Vector>>()?,
            );
        }
        QMatrix::from_rows(out)
    }
}

/// Accepts `"num/den"` strings or JSON integers.
pub fn parse_scalar(v: &Value, location: &str) -> Result<Rational> {
    if let Some(s) = v.as_str() {
        rational::parse(s)
    } else if let Some(i) = v.as_i64() {
        Ok(rational::rat(i))
    } else {
        Err(Error::parse(location, "expected a rational string or an integer"))
    }
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(rows: &mut [Vector]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    rref_limited(rows, ncols)
}

/// Reduced row echelon form pivoting only in the first `pivot_cols` columns.
fn rref_limited(rows: &mut [Vector], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vector]) -> usize {
    let mut rows = vectors.to_vec();
    rref(&mut rows).len()
}

/// Basis of `{x : A x = 0}` where `A` has the given rows and `ncols` columns.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zero_vector(ncols);
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Canonical basis (nonzero RREF rows) of the span of `vectors`.
pub fn span_basis(vectors: &[Vector]) -> Vec<Vector> {
    let mut rows = vectors.to_vec();
    let pivots = rref(&mut rows);
    rows.truncate(pivots.len());
    rows
}

/// Basis of `span(a) ∩ span(b)`, in reduced row echelon form.
pub fn intersect(a: &[Vector], b: &[Vector], ambient: usize) -> Vec<Vector> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve sum x_i a_i - sum y_j b_j = 0 over the coordinates.
    let na = a.len();
    let nb = b.len();
    let rows: Vec<Vector> = (0..ambient)
        .map(|t| {
            a.iter()
                .map(|v| v[t].clone())
                .chain(b.iter().map(|v| -v[t].clone()))
                .collect()
        })
        .collect();
    let sols = nullspace(&rows, na + nb);
    let vecs: Vec<Vector> = sols
        .iter()
        .map(|x| {
            let mut v = zero_vector(ambient);
            for (i, ai) in a.iter().enumerate() {
                axpy(&mut v, &x[i], ai);
            }
            v
        })
        .collect();
    span_basis(&vecs)
}

/// Coordinates with respect to a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    ambient: usize,
    reduced: Vec<Vector>,
    pivots: Vec<usize>,
    transform: Vec<Vector>,
}

impl SpanSolver {
    pub fn new(basis: &[Vector], ambient: usize) -> Result<Self> {
        let m = basis.len();
        for v in basis {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    what: "vector length",
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        let mut rows: Vec<Vector> = basis
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut row = v.clone();
                row.extend(unit_vector(m, i));
                row
            })
            .collect();
        let pivots = rref_limited(&mut rows, ambient);
        if pivots.len() < m {
            return Err(Error::DependentGenerators {
                rank: pivots.len(),
                count: m,
            });
        }
        let (reduced, transform) = rows
            .into_iter()
            .map(|mut r| {
                let t = r.split_off(ambient);
                (r, t)
            })
            .unzip();
        Ok(SpanSolver {
            ambient,
            reduced,
            pivots,
            transform,
        })
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Coordinates of `v` in the original family, or `None` if `v` is not
    /// in its span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        debug_assert_eq!(v.len(), self.ambient);
        let mut residual = v.to_vec();
        let mut r = Vec::with_capacity(self.pivots.len());
        for (row, &p) in self.reduced.iter().zip(&self.pivots) {
            let c = residual[p].clone();
            if !c.is_zero() {
                let neg = -c.clone();
                axpy(&mut residual, &neg, row);
            }
            r.push(c);
        }
        if !is_zero_vector(&residual) {
            return None;
        }
        let mut coords = zero_vector(self.pivots.len());
        for (ri, t) in r.iter().zip(&self.transform) {
            axpy(&mut coords, ri, t);
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::rat;

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![int_vector(&[1, 2, 3]), int_vector(&[2, 4, 6]), int_vector(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot: Rational = r.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert_eq!(dot, rat(0));
        }
    }

    #[test]
    fn intersection_of_planes() {
        let a = vec![int_vector(&[1, 0, 0]), int_vector(&[0, 1, 0])];
        let b = vec![int_vector(&[0, 1, 0]), int_vector(&[0, 0, 1])];
        let i = intersect(&a, &b, 3);
        assert_eq!(i, vec![int_vector(&[0, 1, 0])]);
    }

    #[test]
    fn span_solver_coordinates() {
        let basis = vec![int_vector(&[1, 1, 0]), int_vector(&[0, 1, 1])];
        let s = SpanSolver::new(&basis, 3).unwrap();
        let v = int_vector(&[2, 5, 3]);
        assert_eq!(s.coordinates(&v).unwrap(), int_vector(&[2, 3]));
        assert!(s.coordinates(&int_vector(&[1, 0, 0])).is_none());
        let dep = vec![int_vector(&[1, 1]), int_vector(&[2, 2])];
        assert!(matches!(
            SpanSolver::new(&dep, 2),
            Err(Error::DependentGenerators { rank: 1, count: 2 })
        ));
    }

    #[test]
    fn matrix_product() {
        let a = QMatrix::from_ints(&[&[0, -1], &[1, 0]]);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq, QMatrix::identity(2).scale(&rat(-1)));
        assert_eq!(a.rank(), 2);
    }
}

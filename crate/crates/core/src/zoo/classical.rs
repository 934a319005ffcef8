//! Classical matrix Lie algebras and other small builtin families.

use crate::algebra::construct::semidirect;
use crate::algebra::linalg::{self, QMatrix, SpanSolver};
use crate::algebra::structure::{sparse_from_dense, Algebra, AlgebraSpec, Grading};
use crate::algebra::Grade;
use crate::error::{Error, Result};
use crate::ring::rational::rat;

/// Product used when turning a family of matrices into an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductMode {
    Bracket,
    Matrix,
}

/// Algebra spanned by `basis` under the commutator or the matrix product.
///
/// Errors with [`Error::NotClosed`] if a product leaves the span.
pub fn matrix_algebra(
    name: impl Into<String>,
    labels: Vec<String>,
    basis: &[QMatrix],
    mode: ProductMode,
) -> Result<Algebra> {
    if labels.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            what: "labels for matrix basis",
            expected: basis.len(),
            found: labels.len(),
        });
    }
    if basis.is_empty() {
        return Err(Error::invalid("matrix algebra needs a nonempty basis"));
    }
    let size = basis[0].rows() * basis[0].cols();
    let flat: Vec<_> = basis.iter().map(QMatrix::flatten).collect();
    let solver = SpanSolver::new(&flat, size)?;
    let mut products = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let xy = x.mul(y)?;
            let p = match mode {
                ProductMode::Matrix => xy,
                ProductMode::Bracket => xy.sub(&y.mul(x)?),
            };
            let coords = solver.coordinates(&p.flatten()).ok_or(Error::NotClosed {
                what: "matrix span",
                witness: (i, j),
            })?;
            let s = sparse_from_dense(&coords);
            if !s.is_empty() {
                products.push((i, j, s));
            }
        }
    }
    Algebra::new(AlgebraSpec {
        name: Some(name.into()),
        labels,
        products,
        grading: None,
        involution: None,
    })
}

fn unit(n: usize, a: usize, b: usize) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    m.set(a, b, rat(1));
    m
}

fn check_positive(what: &str, n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::invalid(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

/// Signature diagonal: `p` entries `+1` followed by `q` entries `-1`.
pub fn signature(p: usize, q: usize) -> Vec<i64> {
    std::iter::repeat_n(1, p).chain(std::iter::repeat_n(-1, q)).collect()
}

/// Full real matrix algebra `Mat(n, R)`, basis `E_ab` row-major.
pub fn mat(n: usize) -> Result<Algebra> {
    check_positive("matrix size", n)?;
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for a in 0..n {
        for b in 0..n {
            labels.push(format!("E{a}{b}"));
            basis.push(unit(n, a, b));
        }
    }
    matrix_algebra(format!("Mat({n})"), labels, &basis, ProductMode::Matrix)
}

/// Matrices `E_ab - η_a η_b E_ba` (a < b) spanning `so(p, q)` inside `Mat(p+q)`.
pub fn so_matrices(eta: &[i64]) -> Vec<(String, QMatrix)> {
    let n = eta.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let m = unit(n, a, b).sub(&unit(n, b, a).scale(&rat(eta[a] * eta[b])));
            out.push((format!("M{a}{b}"), m));
        }
    }
    out
}

pub fn so_pq(p: usize, q: usize) -> Result<Algebra> {
    let n = p + q;
    if n < 2 {
        return Err(Error::invalid("so(p,q) needs p + q >= 2"));
    }
    let (labels, basis): (Vec<_>, Vec<_>) = so_matrices(&signature(p, q)).into_iter().unzip();
    let name = if q == 0 { format!("so({p})") } else { format!("so({p},{q})") };
    matrix_algebra(name, labels, &basis, ProductMode::Bracket)
}

pub fn so(n: usize) -> Result<Algebra> {
    so_pq(n, 0)
}

/// Real form of a complex matrix: entry `x + iy` becomes `[[x, -y], [y, x]]`.
fn complex_real(n: usize, entries: &[(usize, usize, i64, i64)]) -> QMatrix {
    let mut m = QMatrix::zeros(2 * n, 2 * n);
    for &(a, b, x, y) in entries {
        let add = |m: &mut QMatrix, r: usize, c: usize, v: i64| {
            let cur = m.get(r, c).clone();
            m.set(r, c, cur + rat(v));
        };
        add(&mut m, 2 * a, 2 * b, x);
        add(&mut m, 2 * a, 2 * b + 1, -y);
        add(&mut m, 2 * a + 1, 2 * b, y);
        add(&mut m, 2 * a + 1, 2 * b + 1, x);
    }
    m
}

/// `u(p, q)` realified: `X^† η + η X = 0`.
///
/// Basis: for a < b, `E_ab - η_aη_b E_ba` and `i(E_ab + η_aη_b E_ba)`;
/// then `i E_aa` (or traceless combinations for `su`).
fn unitary_family(p: usize, q: usize, traceless: bool) -> Result<(Vec<String>, Vec<QMatrix>)> {
    let n = p + q;
    check_positive("matrix size", n)?;
    let eta = signature(p, q);
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let s = eta[a] * eta[b];
            labels.push(format!("R{a}{b}"));
            basis.push(complex_real(n, &[(a, b, 1, 0), (b, a, -s, 0)]));
            labels.push(format!("I{a}{b}"));
            basis.push(complex_real(n, &[(a, b, 0, 1), (b, a, 0, s)]));
        }
    }
    if traceless {
        for a in 0..n.saturating_sub(1) {
            labels.push(format!("H{a}"));
            basis.push(complex_real(n, &[(a, a, 0, 1), (a + 1, a + 1, 0, -1)]));
        }
    } else {
        for a in 0..n {
            labels.push(format!("D{a}"));
            basis.push(complex_real(n, &[(a, a, 0, 1)]));
        }
    }
    Ok((labels, basis))
}

pub fn u_pq(p: usize, q: usize) -> Result<Algebra> {
    let (labels, basis) = unitary_family(p, q, false)?;
    let name = if q == 0 { format!("u({p})") } else { format!("u({p},{q})") };
    matrix_algebra(name, labels, &basis, ProductMode::Bracket)
}

pub fn u(n: usize) -> Result<Algebra> {
    u_pq(n, 0)
}

pub fn su_pq(p: usize, q: usize) -> Result<Algebra> {
    if p + q < 2 {
        return Err(Error::invalid("su(p,q) needs p + q >= 2"));
    }
    let (labels, basis) = unitary_family(p, q, true)?;
    let name = if q == 0 { format!("su({p})") } else { format!("su({p},{q})") };
    matrix_algebra(name, labels, &basis, ProductMode::Bracket)
}

pub fn su(n: usize) -> Result<Algebra> {
    su_pq(n, 0)
}

/// Hamilton quaternion product on the basis 1, i, j, k as (sign, index).
fn hamilton(x: usize, y: usize) -> (i64, usize) {
    const T: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    T[x][y]
}

/// Real `4n x 4n` form of a quaternionic matrix with unit entries `(a, b, sign, unit)`.
fn quaternion_real(n: usize, entries: &[(usize, usize, i64, usize)]) -> QMatrix {
    let mut m = QMatrix::zeros(4 * n, 4 * n);
    for &(a, b, s, q) in entries {
        // Left multiplication by the unit q: column t is q * e_t.
        for t in 0..4 {
            let (sg, r) = hamilton(q, t);
            let cur = m.get(4 * a + r, 4 * b + t).clone();
            m.set(4 * a + r, 4 * b + t, cur + rat(s * sg));
        }
    }
    m
}

/// Compact `sp(n)`: quaternionic anti-Hermitian `n x n` matrices, realified.
pub fn sp(n: usize) -> Result<Algebra> {
    check_positive("sp rank", n)?;
    let units = ["i", "j", "k"];
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            labels.push(format!("R{a}{b}"));
            basis.push(quaternion_real(n, &[(a, b, 1, 0), (b, a, -1, 0)]));
            for (qi, qn) in units.iter().enumerate() {
                labels.push(format!("{}{a}{b}", qn.to_uppercase()));
                basis.push(quaternion_real(n, &[(a, b, 1, qi + 1), (b, a, 1, qi + 1)]));
            }
        }
    }
    for a in 0..n {
        for (qi, qn) in units.iter().enumerate() {
            labels.push(format!("{}{a}", qn.to_uppercase()));
            basis.push(quaternion_real(n, &[(a, a, 1, qi + 1)]));
        }
    }
    matrix_algebra(format!("sp({n})"), labels, &basis, ProductMode::Bracket)
}

pub fn gl(n: usize) -> Result<Algebra> {
    check_positive("matrix size", n)?;
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for a in 0..n {
        for b in 0..n {
            labels.push(format!("E{a}{b}"));
            basis.push(unit(n, a, b));
        }
    }
    matrix_algebra(format!("gl({n},R)"), labels, &basis, ProductMode::Bracket)
}

pub fn gl_complex(n: usize) -> Result<Algebra> {
    check_positive("matrix size", n)?;
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for a in 0..n {
        for b in 0..n {
            labels.push(format!("E{a}{b}"));
            basis.push(complex_real(n, &[(a, b, 1, 0)]));
            labels.push(format!("iE{a}{b}"));
            basis.push(complex_real(n, &[(a, b, 0, 1)]));
        }
    }
    matrix_algebra(format!("gl({n},C)"), labels, &basis, ProductMode::Bracket)
}

/// Heisenberg algebra `[P_i, Q_i] = Z`, Z-graded with `P, Q` in degree 1 and
/// `Z` in degree 2.
pub fn heisenberg(n: usize) -> Result<Algebra> {
    check_positive("heisenberg rank", n)?;
    let dim = 2 * n + 1;
    let mut labels: Vec<String> = (0..n).map(|i| format!("P{i}")).collect();
    labels.extend((0..n).map(|i| format!("Q{i}")));
    labels.push("Z".into());
    let mut products = Vec::new();
    for i in 0..n {
        products.push((i, n + i, vec![(dim - 1, rat(1))]));
        products.push((n + i, i, vec![(dim - 1, rat(-1))]));
    }
    let mut grades = vec![Grade::int(1); 2 * n];
    grades.push(Grade::int(2));
    Algebra::new(AlgebraSpec {
        name: Some(format!("heis({n})")),
        labels,
        products,
        grading: Some(Grading::new(1, 0, grades)?),
        involution: None,
    })
}

pub fn abelian(k: usize) -> Result<Algebra> {
    check_positive("dimension", k)?;
    Algebra::new(AlgebraSpec {
        name: Some(format!("R^{k}")),
        labels: (0..k).map(|i| format!("e{i}")).collect(),
        ..Default::default()
    })
}

/// `R^{p,q} ⋊ so(p, q)` with the defining representation.
pub fn iso_pq(p: usize, q: usize) -> Result<Algebra> {
    let h = so_pq(p, q)?;
    let rho: Vec<QMatrix> = so_matrices(&signature(p, q))
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    let name = if q == 0 { format!("iso({p})") } else { format!("iso({p},{q})") };
    Ok(semidirect(&h, &rho)?.with_name(name))
}

/// Abelian superalgebra `R^{k|l}`: `k` even and `l` odd generators.
pub fn super_translation(k: usize, l: usize) -> Result<Algebra> {
    check_positive("dimension", k + l)?;
    let mut labels: Vec<String> = (0..k).map(|i| format!("t{i}")).collect();
    labels.extend((0..l).map(|i| format!("s{i}")));
    let grades = (0..k + l).map(|i| Grade::odd(i >= k)).collect();
    Algebra::new(AlgebraSpec {
        name: Some(format!("R^{{{k}|{l}}}")),
        labels,
        grading: Some(Grading::new(0, 1, grades)?),
        ..Default::default()
    })
}

/// Span of the antisymmetric matrices inside [`mat`], as coordinate vectors.
pub fn antisymmetric_vectors(n: usize) -> Vec<linalg::Vector> {
    so_matrices(&signature(n, 0))
        .into_iter()
        .map(|(_, m)| m.flatten())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(so(3).unwrap().dim(), 3);
        assert_eq!(so(4).unwrap().dim(), 6);
        assert_eq!(so_pq(2, 1).unwrap().dim(), 3);
        assert_eq!(u(2).unwrap().dim(), 4);
        assert_eq!(u_pq(1, 1).unwrap().dim(), 4);
        assert_eq!(su(2).unwrap().dim(), 3);
        assert_eq!(su(3).unwrap().dim(), 8);
        assert_eq!(sp(1).unwrap().dim(), 3);
        assert_eq!(sp(2).unwrap().dim(), 10);
        assert_eq!(gl(2).unwrap().dim(), 4);
        assert_eq!(gl_complex(2).unwrap().dim(), 8);
        assert_eq!(heisenberg(2).unwrap().dim(), 5);
        assert_eq!(iso_pq(3, 0).unwrap().dim(), 6);
        assert_eq!(iso_pq(3, 1).unwrap().dim(), 10);
        assert_eq!(mat(3).unwrap().dim(), 9);
    }

    #[test]
    fn lie_flags() {
        for a in [so(3), u(2), su(2), sp(1), so_pq(2, 1), u_pq(1, 1), iso_pq(3, 0), heisenberg(1)] {
            let a = a.unwrap();
            let f = a.flags();
            assert!(f.anticommutative.holds, "{}", a.display_name());
            assert!(f.jacobi.holds, "{}", a.display_name());
        }
    }

    #[test]
    fn abelian_is_zero() {
        let a = abelian(3).unwrap();
        assert!(a.is_zero_product());
        let f = a.flags();
        assert!(f.associative.holds && f.commutative.holds && f.jacobi.holds && f.alternative.holds);
    }

    #[test]
    fn u1_is_abelian() {
        assert!(u(1).unwrap().is_zero_product());
        assert!(so(2).unwrap().is_zero_product());
    }

    #[test]
    fn so_matrices_are_not_closed_under_product() {
        let (labels, basis): (Vec<_>, Vec<_>) = so_matrices(&signature(3, 0)).into_iter().unzip();
        let err = matrix_algebra("x", labels, &basis, ProductMode::Matrix).unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }));
    }

    #[test]
    fn super_translation_grading() {
        let a = super_translation(2, 2).unwrap();
        let g = a.grading().unwrap();
        assert_eq!(g.parity_rank(), 1);
        assert_eq!(g.grades()[3].total_parity(), 1);
        assert_eq!(g.grades()[0].total_parity(), 0);
    }

    #[test]
    fn hamilton_table_is_associative() {
        for x in 0..4 {
            for y in 0..4 {
                for z in 0..4 {
                    let (s1, xy) = hamilton(x, y);
                    let (s2, l) = hamilton(xy, z);
                    let (s3, yz) = hamilton(y, z);
                    let (s4, r) = hamilton(x, yz);
                    assert_eq!((s1 * s2, l), (s3 * s4, r));
                }
            }
        }
    }
}

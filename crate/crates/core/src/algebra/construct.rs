//! Constructions producing new algebras from old ones.

use num_traits::Zero;

use super::grade::Grade;
use super::linalg::{self, QMatrix, Vector};
use super::structure::{Algebra, AlgebraSpec, Grading};
use crate::error::{Error, Result};

/// Bracket algebra `[x, y] = x*y - y*x` on the same module.
///
/// Grading and involution carry over: both are compatible with the bracket.
pub fn commutator_algebra(a: &Algebra) -> Result<Algebra> {
    let n = a.dim();
    let mut products = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut out: Vec<_> = a.product(i, j).clone();
            out.extend(a.product(j, i).iter().map(|(k, c)| (*k, -c.clone())));
            if !out.is_empty() {
                products.push((i, j, out));
            }
        }
    }
    Algebra::new(AlgebraSpec {
        name: a.name().map(|s| format!("[{s}]")),
        labels: a.labels().to_vec(),
        products,
        grading: a.grading().cloned(),
        involution: a.involution().cloned(),
    })
}

fn block_diagonal(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let (n, m) = (a.rows(), b.rows());
    let mut out = QMatrix::zeros(n + m, a.cols() + b.cols());
    for r in 0..n {
        for c in 0..a.cols() {
            out.set(r, c, a.get(r, c).clone());
        }
    }
    for r in 0..m {
        for c in 0..b.cols() {
            out.set(n + r, a.cols() + c, b.get(r, c).clone());
        }
    }
    out
}

/// `A ⊕ B` with componentwise product.
///
/// Gradings are concatenated when both are present with the same shape and
/// product degree; otherwise the sum is ungraded. Likewise for involutions.
pub fn direct_sum(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    let n = a.dim();
    let mut products = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = a.product(i, j);
            if !p.is_empty() {
                products.push((i, j, p.clone()));
            }
        }
    }
    for i in 0..b.dim() {
        for j in 0..b.dim() {
            let p = b.product(i, j);
            if !p.is_empty() {
                products.push((n + i, n + j, p.iter().map(|(k, c)| (n + k, c.clone())).collect()));
            }
        }
    }
    let grading = match (a.grading(), b.grading()) {
        (Some(ga), Some(gb))
            if ga.rank() == gb.rank()
                && ga.parity_rank() == gb.parity_rank()
                && ga.product_degree() == gb.product_degree() =>
        {
            let grades = ga.grades().iter().chain(gb.grades()).cloned().collect();
            Some(Grading::with_product_degree(
                ga.rank(),
                ga.parity_rank(),
                grades,
                ga.product_degree().clone(),
            )?)
        }
        _ => None,
    };
    let involution = match (a.involution(), b.involution()) {
        (Some(sa), Some(sb)) => Some(block_diagonal(sa, sb)),
        _ => None,
    };
    let mut labels: Vec<String> = a.labels().to_vec();
    labels.extend(b.labels().iter().cloned());
    let labels = disambiguate(labels);
    let name = match (a.name(), b.name()) {
        (Some(x), Some(y)) => Some(format!("{x}+{y}")),
        _ => None,
    };
    Algebra::new(AlgebraSpec {
        name,
        labels,
        products,
        grading,
        involution,
    })
}

/// Appends `'`, `''`, ... to repeated labels.
fn disambiguate(labels: Vec<String>) -> Vec<String> {
    let mut seen: Vec<String> = Vec::with_capacity(labels.len());
    for l in labels {
        let mut cand = l.clone();
        while seen.contains(&cand) {
            cand.push('\'');
        }
        seen.push(cand);
    }
    seen
}

/// `R^k ⋊ h` for a representation given by one `k x k` matrix per basis
/// vector of `h`.
///
/// Basis: translations `T0..T(k-1)` followed by the basis of `h`.
/// `[(v, X), (w, Y)] = (ρ(X)w - ρ(Y)v, [X, Y])`.
pub fn semidirect(h: &Algebra, rho: &[QMatrix]) -> Result<Algebra> {
    if !h.flags().jacobi.holds || !h.flags().anticommutative.holds {
        return Err(Error::invalid(format!(
            "semidirect product needs a Lie algebra; {} is not one",
            h.display_name()
        )));
    }
    if rho.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            what: "number of representation matrices",
            expected: h.dim(),
            found: rho.len(),
        });
    }
    let k = rho.first().map_or(0, QMatrix::rows);
    for m in rho {
        if m.rows() != k || m.cols() != k {
            return Err(Error::DimensionMismatch {
                what: "representation matrix size",
                expected: k,
                found: m.rows().max(m.cols()),
            });
        }
    }
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let mut lhs = QMatrix::zeros(k, k);
            for (t, c) in h.product(i, j) {
                lhs = lhs.add(&rho[*t].scale(c));
            }
            let rhs = rho[i].mul(&rho[j])?.sub(&rho[j].mul(&rho[i])?);
            if lhs != rhs {
                return Err(Error::RepresentationInvalid { witness: (i, j) });
            }
        }
    }
    let mut products = Vec::new();
    for (i, r) in rho.iter().enumerate() {
        for a in 0..k {
            let img: Vec<_> = (0..k)
                .filter(|&b| !r.get(b, a).is_zero())
                .map(|b| (b, r.get(b, a).clone()))
                .collect();
            if img.is_empty() {
                continue;
            }
            products.push((k + i, a, img.clone()));
            products.push((a, k + i, img.into_iter().map(|(b, c)| (b, -c)).collect()));
        }
    }
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let p = h.product(i, j);
            if !p.is_empty() {
                products.push((k + i, k + j, p.iter().map(|(t, c)| (k + t, c.clone())).collect()));
            }
        }
    }
    let mut labels: Vec<String> = (0..k).map(|a| format!("T{a}")).collect();
    labels.extend(h.labels().iter().cloned());
    Algebra::new(AlgebraSpec {
        name: h.name().map(|s| format!("R^{k}x{s}")),
        labels: disambiguate(labels),
        products,
        grading: None,
        involution: None,
    })
}

/// Product on `E` transported from `A` along a projection and a section:
/// `x *' y = s(π(x) * π(y))`.
///
/// `pi` is `dim A x dim E`, `section` is `dim E x dim A`, and `π ∘ s` must be
/// the identity.
pub fn pushforward_product(
    labels: Vec<String>,
    a: &Algebra,
    pi: &QMatrix,
    section: &QMatrix,
) -> Result<Algebra> {
    let e = labels.len();
    if pi.rows() != a.dim() || pi.cols() != e {
        return Err(Error::DimensionMismatch {
            what: "projection shape",
            expected: a.dim() * e,
            found: pi.rows() * pi.cols(),
        });
    }
    if section.rows() != e || section.cols() != a.dim() {
        return Err(Error::DimensionMismatch {
            what: "section shape",
            expected: a.dim() * e,
            found: section.rows() * section.cols(),
        });
    }
    let comp = pi.mul(section)?;
    for j in 0..a.dim() {
        if comp.column(j) != linalg::unit_vector(a.dim(), j) {
            return Err(Error::SectionInvalid { basis: j });
        }
    }
    let proj: Vec<Vector> = pi.columns();
    Algebra::from_fn(
        a.name().map(|s| format!("ext({s})")),
        labels,
        |i, j| section.mul_vec(&a.mul(&proj[i], &proj[j])),
    )
}

/// `A[-l]`: every grade moves by `-l`, the product degree by `+l`.
pub fn shift_grading(a: &Algebra, l: &Grade) -> Result<Algebra> {
    let g = a
        .grading()
        .ok_or_else(|| Error::NotGraded(a.display_name()))?;
    let grades = g
        .grades()
        .iter()
        .map(|x| x.sub(l))
        .collect::<Result<Vec<_>>>()?;
    let pd = g.product_degree().add(l)?;
    let shifted = Grading::with_product_degree(g.rank(), g.parity_rank(), grades, pd)?;
    a.rebuild(Some(shifted), a.involution().cloned())
}

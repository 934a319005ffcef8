//! Cayley-Dickson doubling, unitary matrix algebras over its tower, and the
//! block inclusions between them.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::classical::{signature, ProductMode};
use crate::algebra::linalg::{self, QMatrix, SpanSolver, Vector};
use crate::algebra::morphism::AlgebraMorphism;
use crate::algebra::structure::{sparse_from_dense, Algebra, AlgebraSpec};
use crate::error::{Error, Result};
use crate::ring::rational::{self, rat, Rational};

/// Highest tower level built by default.
pub const CD_TOWER_MAX: u32 = 5;

/// The reals with the identity involution.
pub fn reals() -> Algebra {
    Algebra::new(AlgebraSpec {
        name: Some("R".into()),
        labels: vec!["e0".into()],
        products: vec![(0, 0, vec![(0, rat(1))])],
        grading: None,
        involution: Some(QMatrix::identity(1)),
    })
    .expect("reals are valid")
}

/// `A ⊕ A` with `(a,b)(c,d) = (ac + γ d̄b, da + bc̄)` and `(a,b)̄ = (ā, -b)`.
pub fn cayley_dickson(a: &Algebra, gamma: &Rational) -> Result<Algebra> {
    let sigma = a.involution().ok_or(Error::MissingInvolution)?;
    let n = a.dim();
    let half = |v: &[Rational]| (v[..n].to_vec(), v[n..].to_vec());
    let e = |i: usize| linalg::unit_vector(2 * n, i);
    let product = |i: usize, j: usize| {
        let (x0, x1) = half(&e(i));
        let (y0, y1) = half(&e(j));
        let conj = |v: &[Rational]| sigma.mul_vec(v);
        let mut first = a.mul(&x0, &y0);
        let t = a.mul(&conj(&y1), &x1);
        linalg::axpy(&mut first, gamma, &t);
        let mut second = a.mul(&y1, &x0);
        let t = a.mul(&x1, &conj(&y0));
        linalg::axpy(&mut second, &Rational::one(), &t);
        first.extend(second);
        first
    };
    let mut labels: Vec<String> = a.labels().to_vec();
    labels.extend(a.labels().iter().map(|l| format!("{l}'")));
    let doubled = Algebra::from_fn(
        Some(format!("CD({})", a.display_name())),
        labels,
        product,
    )?;
    let mut inv = QMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            inv.set(r, c, sigma.get(r, c).clone());
        }
        inv.set(n + r, n + r, rat(-1));
    }
    doubled.rebuild(None, Some(inv))
}

fn tower_name(l: u32) -> String {
    match l {
        0 => "R".into(),
        1 => "C".into(),
        2 => "H".into(),
        3 => "O".into(),
        4 => "S".into(),
        _ => format!("CD^{l}"),
    }
}

/// `CD^l(R)` with basis `e0..e(2^l - 1)`.
pub fn cd_tower(l: u32, gamma: &Rational) -> Result<Algebra> {
    cd_tower_capped(l, gamma, CD_TOWER_MAX)
}

pub fn cd_tower_capped(l: u32, gamma: &Rational, cap: u32) -> Result<Algebra> {
    if l > cap {
        // Flag checks are cubic in the dimension 2^l.
        return Err(Error::ResourceCap {
            resource: "cayley-dickson level (flag checks cost 8^l)",
            limit: cap as u64,
            estimate: l as u64,
        });
    }
    let mut a = reals();
    for _ in 0..l {
        a = cayley_dickson(&a, gamma)?;
    }
    relabel_tower(a, l, gamma)
}

fn relabel_tower(a: Algebra, l: u32, gamma: &Rational) -> Result<Algebra> {
    let n = a.dim();
    let mut products = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !a.product(i, j).is_empty() {
                products.push((i, j, a.product(i, j).clone()));
            }
        }
    }
    let name = if *gamma == rat(-1) {
        tower_name(l)
    } else {
        format!("CD^{l}[{}]", rational::to_text(gamma))
    };
    Algebra::new(AlgebraSpec {
        name: Some(name),
        labels: (0..n).map(|i| format!("e{i}")).collect(),
        products,
        grading: None,
        involution: a.involution().cloned(),
    })
}

/// Matrix algebra data: size, signature diagonal, base algebra and product.
#[derive(Clone, Debug)]
pub struct UnitarySpec {
    eta: Vec<i64>,
    base: Arc<Algebra>,
    mode: ProductMode,
}

impl UnitarySpec {
    pub fn new(k: usize, p: usize, q: usize, base: Arc<Algebra>, mode: ProductMode) -> Result<Self> {
        if p + q != k {
            return Err(Error::invalid(format!(
                "signature ({p},{q}) does not add up to the matrix size {k}"
            )));
        }
        UnitarySpec::with_eta(signature(p, q), base, mode)
    }

    /// Arbitrary diagonal signature, e.g. `diag(η, η)` for block targets.
    pub fn with_eta(eta: Vec<i64>, base: Arc<Algebra>, mode: ProductMode) -> Result<Self> {
        if eta.is_empty() {
            return Err(Error::invalid("matrix size must be positive"));
        }
        if eta.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("signature entries must be +1 or -1"));
        }
        if base.involution().is_none() {
            return Err(Error::MissingInvolution);
        }
        Ok(UnitarySpec { eta, base, mode })
    }

    pub fn k(&self) -> usize {
        self.eta.len()
    }

    pub fn eta(&self) -> &[i64] {
        &self.eta
    }

    pub fn base(&self) -> &Arc<Algebra> {
        &self.base
    }

    pub fn mode(&self) -> ProductMode {
        self.mode
    }

    pub fn signature(&self) -> (usize, usize) {
        let p = self.eta.iter().filter(|&&s| s == 1).count();
        (p, self.eta.len() - p)
    }

    /// `k (d - f) + C(k, 2) d` where `f` is the dimension fixed by the involution.
    pub fn expected_dim(&self) -> usize {
        let d = self.base.dim();
        let sigma = self.base.involution().expect("checked at construction");
        let minus = minus_one_eigenspace(sigma).len();
        let k = self.k();
        k * minus + k * (k - 1) / 2 * d
    }
}

fn minus_one_eigenspace(sigma: &QMatrix) -> Vec<Vector> {
    let plus = sigma.add(&QMatrix::identity(sigma.rows()));
    linalg::span_basis(&linalg::nullspace(&plus.row_vectors(), sigma.cols()))
}

/// Realified module of anti-Hermitian matrices (`X^† = -η X η`).
struct UnitaryModule {
    k: usize,
    base: Arc<Algebra>,
    labels: Vec<String>,
    basis: Vec<Vector>,
    solver: SpanSolver,
}

impl UnitaryModule {
    fn new(spec: &UnitarySpec) -> Result<Self> {
        let k = spec.k();
        let base = Arc::clone(&spec.base);
        let d = base.dim();
        let sigma = base.involution().expect("checked");
        let size = k * k * d;
        let slot = |a: usize, b: usize, t: usize| (a * k + b) * d + t;
        let mut labels = Vec::new();
        let mut basis = Vec::new();
        for a in 0..k {
            for b in a..k {
                if a == b {
                    for (idx, v) in minus_one_eigenspace(sigma).into_iter().enumerate() {
                        let mut x = linalg::zero_vector(size);
                        for (t, c) in v.into_iter().enumerate() {
                            x[slot(a, a, t)] = c;
                        }
                        labels.push(format!("D{a}.{idx}"));
                        basis.push(x);
                    }
                } else {
                    let s = rat(-spec.eta[a] * spec.eta[b]);
                    for t in 0..d {
                        let mut x = linalg::zero_vector(size);
                        x[slot(a, b, t)] = Rational::one();
                        let img = sigma.column(t);
                        for (u, c) in img.iter().enumerate() {
                            x[slot(b, a, u)] = &s * c;
                        }
                        labels.push(format!("X{a}{b}.{t}"));
                        basis.push(x);
                    }
                }
            }
        }
        let solver = SpanSolver::new(&basis, size)?;
        Ok(UnitaryModule {
            k,
            base,
            labels,
            basis,
            solver,
        })
    }

    /// Matrix product over the base, in realified coordinates.
    fn matmul(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let (k, d) = (self.k, self.base.dim());
        let mut out = linalg::zero_vector(k * k * d);
        for a in 0..k {
            for b in 0..k {
                let xab = &x[(a * k + b) * d..(a * k + b + 1) * d];
                if linalg::is_zero_vector(xab) {
                    continue;
                }
                for c in 0..k {
                    let ybc = &y[(b * k + c) * d..(b * k + c + 1) * d];
                    if linalg::is_zero_vector(ybc) {
                        continue;
                    }
                    let p = self.base.mul(xab, ybc);
                    let off = (a * k + c) * d;
                    for (t, v) in p.into_iter().enumerate() {
                        out[off + t] += v;
                    }
                }
            }
        }
        out
    }

    fn algebra(&self, name: String, mode: ProductMode) -> Result<Algebra> {
        let mut products = Vec::new();
        for (i, x) in self.basis.iter().enumerate() {
            for (j, y) in self.basis.iter().enumerate() {
                let mut p = self.matmul(x, y);
                if mode == ProductMode::Bracket {
                    let q = self.matmul(y, x);
                    linalg::axpy(&mut p, &rat(-1), &q);
                }
                let coords = self.solver.coordinates(&p).ok_or(Error::NotClosed {
                    what: "anti-Hermitian matrices",
                    witness: (i, j),
                })?;
                let s = sparse_from_dense(&coords);
                if !s.is_empty() {
                    products.push((i, j, s));
                }
            }
        }
        Algebra::new(AlgebraSpec {
            name: Some(name),
            labels: self.labels.clone(),
            products,
            grading: None,
            involution: None,
        })
    }
}

fn unitary_name(spec: &UnitarySpec) -> String {
    let (p, q) = spec.signature();
    let sig = if q == 0 { format!("{p}") } else { format!("{p},{q}") };
    let m = match spec.mode {
        ProductMode::Bracket => "",
        ProductMode::Matrix => ",mat",
    };
    format!("u({sig};{}{m})", spec.base.display_name())
}

/// Realified anti-Hermitian `k x k` matrices over the base.
pub fn unitary_cd(spec: &UnitarySpec) -> Result<Algebra> {
    let module = UnitaryModule::new(spec)?;
    module.algebra(unitary_name(spec), spec.mode)
}

/// `U(k; CD^l) -> U(2k; CD^(l-1))`, entry `(a, b) ↦ [[a, -b], [b̄, ā]]` with
/// the two blocks placed at row offsets `0` and `k`.
pub fn cd_block_inclusion(k: usize, p: usize, q: usize, l: u32) -> Result<AlgebraMorphism> {
    if p + q != k {
        return Err(Error::invalid(format!(
            "signature ({p},{q}) does not add up to the matrix size {k}"
        )));
    }
    cd_block_inclusion_eta(&signature(p, q), l)
}

pub fn cd_block_inclusion_eta(eta: &[i64], l: u32) -> Result<AlgebraMorphism> {
    if l == 0 {
        return Err(Error::invalid("block inclusion needs l >= 1"));
    }
    let gamma = rat(-1);
    let upper = Arc::new(cd_tower(l, &gamma)?);
    let lower = Arc::new(cd_tower(l - 1, &gamma)?);
    let k = eta.len();
    let src_spec = UnitarySpec::with_eta(eta.to_vec(), Arc::clone(&upper), ProductMode::Bracket)?;
    let doubled: Vec<i64> = eta.iter().chain(eta).copied().collect();
    let tgt_spec = UnitarySpec::with_eta(doubled, Arc::clone(&lower), ProductMode::Bracket)?;
    let src_mod = UnitaryModule::new(&src_spec)?;
    let tgt_mod = UnitaryModule::new(&tgt_spec)?;
    let source = Arc::new(src_mod.algebra(unitary_name(&src_spec), ProductMode::Bracket)?);
    let target = Arc::new(tgt_mod.algebra(unitary_name(&tgt_spec), ProductMode::Bracket)?);
    let dl = lower.dim();
    let sigma = lower.involution().expect("tower has involution");
    let k2 = 2 * k;
    let mut columns = Vec::with_capacity(src_mod.basis.len());
    for x in &src_mod.basis {
        let mut y = linalg::zero_vector(k2 * k2 * dl);
        let mut put = |r: usize, c: usize, v: &[Rational]| {
            let off = (r * k2 + c) * dl;
            for (t, val) in v.iter().enumerate() {
                y[off + t] += val;
            }
        };
        for a in 0..k {
            for b in 0..k {
                let entry = &x[(a * k + b) * 2 * dl..(a * k + b + 1) * 2 * dl];
                let (re, im) = entry.split_at(dl);
                let neg_im: Vector = im.iter().map(|c| -c.clone()).collect();
                put(a, b, re);
                put(a, k + b, &neg_im);
                put(k + a, b, &sigma.mul_vec(im));
                put(k + a, k + b, &sigma.mul_vec(re));
            }
        }
        columns.push(tgt_mod.solver.coordinates(&y).ok_or(Error::NotInSpan)?);
    }
    let matrix = QMatrix::from_columns(tgt_mod.basis.len(), &columns)?;
    AlgebraMorphism::check(matrix, &source, &target, None)
}

/// Real `2^l x 2^l` matrix of an element of `CD^l(R)`, built recursively
/// from the doubling formula with conjugation "negate all but e0".
fn real_block(x: &[Rational]) -> QMatrix {
    let n = x.len();
    if n == 1 {
        return QMatrix::from_rows(vec![vec![x[0].clone()]]).expect("1x1");
    }
    let h = n / 2;
    let conj = |v: &[Rational]| -> Vector {
        v.iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { c.clone() } else { -c.clone() })
            .collect()
    };
    let (a, b) = x.split_at(h);
    let neg_b: Vector = b.iter().map(|c| -c.clone()).collect();
    let blocks = [
        [real_block(a), real_block(&neg_b)],
        [real_block(&conj(b)), real_block(&conj(a))],
    ];
    let mut m = QMatrix::zeros(n, n);
    for (br, row) in blocks.iter().enumerate() {
        for (bc, blk) in row.iter().enumerate() {
            for r in 0..h {
                for c in 0..h {
                    m.set(br * h + r, bc * h + c, blk.get(r, c).clone());
                }
            }
        }
    }
    m
}

fn bit_reverse(mut v: usize, bits: u32) -> usize {
    let mut r = 0;
    for _ in 0..bits {
        r = (r << 1) | (v & 1);
        v >>= 1;
    }
    r
}

/// `U(k; CD^l) -> U(2^l k; R)` computed in one step from [`real_block`].
///
/// The composite of `l` single-step inclusions places the level-`m` block
/// bit at weight `2^(m-1) k`; `real_block` orders bits the other way, hence
/// the bit reversal.
pub fn direct_realification(eta: &[i64], l: u32) -> Result<AlgebraMorphism> {
    let gamma = rat(-1);
    let upper = Arc::new(cd_tower(l, &gamma)?);
    let k = eta.len();
    let n = 1usize << l;
    let big_eta: Vec<i64> = (0..n).flat_map(|_| eta.iter().copied()).collect();
    let src_spec = UnitarySpec::with_eta(eta.to_vec(), Arc::clone(&upper), ProductMode::Bracket)?;
    let tgt_spec =
        UnitarySpec::with_eta(big_eta, Arc::new(reals()), ProductMode::Bracket)?;
    let src_mod = UnitaryModule::new(&src_spec)?;
    let tgt_mod = UnitaryModule::new(&tgt_spec)?;
    let kk = n * k;
    let mut columns = Vec::new();
    for x in &src_mod.basis {
        let mut y = linalg::zero_vector(kk * kk);
        for a in 0..k {
            for b in 0..k {
                let entry = &x[(a * k + b) * n..(a * k + b + 1) * n];
                if linalg::is_zero_vector(entry) {
                    continue;
                }
                let blk = real_block(entry);
                for r in 0..n {
                    for c in 0..n {
                        let row = bit_reverse(r, l) * k + a;
                        let col = bit_reverse(c, l) * k + b;
                        y[row * kk + col] += blk.get(r, c);
                    }
                }
            }
        }
        columns.push(tgt_mod.solver.coordinates(&y).ok_or(Error::NotInSpan)?);
    }
    let source = Arc::new(src_mod.algebra(unitary_name(&src_spec), ProductMode::Bracket)?);
    let target = Arc::new(tgt_mod.algebra(unitary_name(&tgt_spec), ProductMode::Bracket)?);
    let matrix = QMatrix::from_columns(tgt_mod.basis.len(), &columns)?;
    AlgebraMorphism::check(matrix, &source, &target, None)
}

/// Two nonzero elements with zero product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroDivisor {
    #[serde(serialize_with = "ser_vec")]
    pub x: Vector,
    #[serde(serialize_with = "ser_vec")]
    pub y: Vector,
}

fn ser_vec<S: serde::Serializer>(v: &Vector, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::to_text))
}

impl ZeroDivisor {
    /// Recomputes the product exactly.
    pub fn verify(&self, a: &Algebra) -> bool {
        !linalg::is_zero_vector(&self.x)
            && !linalg::is_zero_vector(&self.y)
            && linalg::is_zero_vector(&a.mul(&self.x, &self.y))
    }

    pub fn to_json(&self) -> Value {
        json!(self)
    }
}

/// Vectors with at most `bound` nonzero coordinates, each `±1`, first
/// nonzero coordinate `+1`.
fn sign_candidates(dim: usize, bound: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = Vec::new();
    fn rec(start: usize, dim: usize, size: usize, combo: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if combo.len() == size {
            out.push(combo.clone());
            return;
        }
        for i in start..dim {
            combo.push(i);
            rec(i + 1, dim, size, combo, out);
            combo.pop();
        }
    }
    for size in 1..=bound.min(dim) {
        let mut supports = Vec::new();
        rec(0, dim, size, &mut combo, &mut supports);
        for s in supports {
            for signs in 0..(1u32 << (size - 1)) {
                let mut v = linalg::zero_vector(dim);
                for (pos, &i) in s.iter().enumerate() {
                    let neg = pos > 0 && (signs >> (pos - 1)) & 1 == 1;
                    v[i] = if neg { rat(-1) } else { rat(1) };
                }
                out.push(v);
            }
        }
    }
    out
}

/// First zero-divisor pair among signed sums of at most `bound` basis vectors.
pub fn find_zero_divisor(a: &Algebra, bound: usize) -> Option<ZeroDivisor> {
    let cands = sign_candidates(a.dim(), bound);
    for x in &cands {
        for y in &cands {
            if a.mul(x, y).iter().all(Zero::is_zero) {
                let z = ZeroDivisor {
                    x: x.clone(),
                    y: y.clone(),
                };
                debug_assert!(z.verify(a));
                return Some(z);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::classical;

    fn m1() -> Rational {
        rat(-1)
    }

    #[test]
    fn tower_flags() {
        let expect = [
            (1, true, true, true),
            (2, true, true, true),
            (4, false, true, true),
            (8, false, false, true),
            (16, false, false, false),
        ];
        for (l, (dim, comm, assoc, alt)) in expect.into_iter().enumerate() {
            let a = cd_tower(l as u32, &m1()).unwrap();
            assert_eq!(a.dim(), dim);
            let f = a.flags();
            assert_eq!(f.commutative.holds, comm, "l={l}");
            assert_eq!(f.associative.holds, assoc, "l={l}");
            assert_eq!(f.alternative.holds, alt, "l={l}");
        }
    }

    #[test]
    fn quaternion_table() {
        let h = cd_tower(2, &m1()).unwrap();
        // e1 e2 = e3, e2 e3 = e1, e3 e1 = e2, e1 e1 = -1
        assert_eq!(h.product(1, 2), &vec![(3, rat(1))]);
        assert_eq!(h.product(2, 3), &vec![(1, rat(1))]);
        assert_eq!(h.product(3, 1), &vec![(2, rat(1))]);
        assert_eq!(h.product(1, 1), &vec![(0, rat(-1))]);
        assert_eq!(h.flags().commutative.witness, Some(vec![1, 2]));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(cd_tower(6, &m1()).unwrap_err().is_resource_cap());
    }

    #[test]
    fn missing_involution() {
        let a = classical::abelian(2).unwrap();
        assert!(matches!(cayley_dickson(&a, &m1()), Err(Error::MissingInvolution)));
    }

    #[test]
    fn unitary_small_cases() {
        let c = Arc::new(cd_tower(1, &m1()).unwrap());
        let r = Arc::new(reals());
        let u1 = unitary_cd(&UnitarySpec::new(1, 1, 0, c.clone(), ProductMode::Bracket).unwrap()).unwrap();
        assert_eq!(u1.dim(), 1);
        assert!(u1.is_zero_product());
        let so2 = unitary_cd(&UnitarySpec::new(2, 2, 0, r.clone(), ProductMode::Bracket).unwrap()).unwrap();
        assert_eq!(so2.dim(), 1);
        let u11 = UnitarySpec::new(2, 1, 1, c, ProductMode::Bracket).unwrap();
        assert_eq!(unitary_cd(&u11).unwrap().dim(), u11.expected_dim());
        assert_eq!(u11.expected_dim(), 4);
        assert!(UnitarySpec::new(1, 1, 1, r, ProductMode::Bracket).is_err());
    }

    #[test]
    fn unitary_over_reals_is_so() {
        let r = Arc::new(reals());
        for k in 2..=4 {
            let a = unitary_cd(&UnitarySpec::new(k, k, 0, r.clone(), ProductMode::Bracket).unwrap()).unwrap();
            let b = classical::so(k).unwrap();
            assert_eq!(a.dim(), b.dim());
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    assert_eq!(a.product(i, j), b.product(i, j));
                }
            }
        }
    }

    #[test]
    fn matrix_mode_rejects_unclosed() {
        let r = Arc::new(reals());
        let err = unitary_cd(&UnitarySpec::new(3, 3, 0, r, ProductMode::Matrix).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }));
    }

    #[test]
    fn inclusions_are_injective_and_multiplicative() {
        for l in 1..=2 {
            let f = cd_block_inclusion(1, 1, 0, l).unwrap();
            assert!(f.status().is_verified(), "l={l}");
            assert!(f.is_injective());
        }
    }

    #[test]
    fn composite_matches_direct() {
        let step2 = cd_block_inclusion_eta(&[1], 2).unwrap();
        let step1 = cd_block_inclusion_eta(&[1, 1], 1).unwrap();
        let comp = step2.then(&step1).unwrap();
        let direct = direct_realification(&[1], 2).unwrap();
        assert_eq!(comp.matrix(), direct.matrix());
    }

    #[test]
    fn zero_divisors() {
        let h = cd_tower(2, &m1()).unwrap();
        assert!(find_zero_divisor(&h, 4).is_none());
        let s = cd_tower(4, &m1()).unwrap();
        let z = find_zero_divisor(&s, 2).unwrap();
        assert!(z.verify(&s));
        let ab = classical::abelian(2).unwrap();
        assert!(find_zero_divisor(&ab, 1).is_some());
    }
}

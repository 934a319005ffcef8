//! Finite-dimensional algebras presented by structure constants.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use super::grade::Grade;
use super::linalg::{self, QMatrix, Vector};
use crate::error::{Error, Result};
use crate::ring::{rational, Rational};

/// Sorted sparse vector without zero entries.
pub type SparseVec = Vec<(usize, Rational)>;

pub const MANIFEST_SCHEMA_VERSION: u64 = 1;

fn normalize(mut v: Vec<(usize, Rational)>) -> SparseVec {
    v.sort_by_key(|(k, _)| *k);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc += c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

/// Grades of the basis vectors plus the degree of the product itself.
///
/// The product has degree `product_degree`: a nonzero `c_ij^k` requires
/// `grade(k) = grade(i) + grade(j) + product_degree`. Ordinary graded
/// algebras have product degree zero; shifting by `l` produces degree `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    rank: usize,
    parity_rank: usize,
    grades: Vec<Grade>,
    product_degree: Grade,
}

impl Grading {
    pub fn new(rank: usize, parity_rank: usize, grades: Vec<Grade>) -> Result<Self> {
        Grading::with_product_degree(rank, parity_rank, grades, Grade::zero(rank, parity_rank))
    }

    pub fn with_product_degree(
        rank: usize,
        parity_rank: usize,
        grades: Vec<Grade>,
        product_degree: Grade,
    ) -> Result<Self> {
        for g in grades.iter().chain(std::iter::once(&product_degree)) {
            if g.rank() != rank || g.parity_rank() != parity_rank {
                return Err(Error::invalid(format!(
                    "grade {g} does not have shape Z^{rank} x (Z/2)^{parity_rank}"
                )));
            }
        }
        Ok(Grading {
            rank,
            parity_rank,
            grades,
            product_degree,
        })
    }

    /// Every basis vector in the zero grade.
    pub fn concentrated(dim: usize, rank: usize, parity_rank: usize) -> Self {
        Grading {
            rank,
            parity_rank,
            grades: vec![Grade::zero(rank, parity_rank); dim],
            product_degree: Grade::zero(rank, parity_rank),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn parity_rank(&self) -> usize {
        self.parity_rank
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    pub fn product_degree(&self) -> &Grade {
        &self.product_degree
    }

    /// Distinct grades in sorted order.
    pub fn support(&self) -> Vec<Grade> {
        let mut g = self.grades.clone();
        g.sort();
        g.dedup();
        g
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl FlagCheck {
    fn from_witness(w: Option<Vec<usize>>) -> Self {
        FlagCheck {
            holds: w.is_none(),
            witness: w,
        }
    }
}

/// Polynomial identities decided exhaustively on basis tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub associative: FlagCheck,
    pub commutative: FlagCheck,
    pub anticommutative: FlagCheck,
    pub jacobi: FlagCheck,
    pub alternative: FlagCheck,
}

/// `(i, j, [(k, c_ij^k)])`.
pub type ProductEntry = (usize, usize, Vec<(usize, Rational)>);

/// Input to [`Algebra::new`].
#[derive(Clone, Debug, Default)]
pub struct AlgebraSpec {
    pub name: Option<String>,
    pub labels: Vec<String>,
    /// Entries `(i, j, [(k, c_ij^k)])`; repeated pairs are summed, omitted pairs are zero.
    pub products: Vec<ProductEntry>,
    pub grading: Option<Grading>,
    /// Matrix of the involution: column `j` is the image of `e_j`.
    pub involution: Option<QMatrix>,
}

/// Algebra over the rationals given by structure constants.
///
/// Immutable after construction. The flag record is computed on first use
/// and cached.
pub struct Algebra {
    name: Option<String>,
    labels: Vec<String>,
    table: Vec<SparseVec>,
    grading: Option<Grading>,
    involution: Option<QMatrix>,
    flags: OnceLock<Flags>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        let flags = OnceLock::new();
        if let Some(f) = self.flags.get() {
            let _ = flags.set(f.clone());
        }
        Algebra {
            name: self.name.clone(),
            labels: self.labels.clone(),
            table: self.table.clone(),
            grading: self.grading.clone(),
            involution: self.involution.clone(),
            flags,
        }
    }
}

impl PartialEq for Algebra {
    /// Structural equality; the display name is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.table == other.table
            && self.grading == other.grading
            && self.involution == other.involution
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("labels", &self.labels)
            .finish()
    }
}

impl Algebra {
    pub fn new(spec: AlgebraSpec) -> Result<Algebra> {
        let dim = spec.labels.len();
        if dim == 0 {
            return Err(Error::invalid("algebra dimension must be positive"));
        }
        let mut raw: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); dim * dim];
        for (i, j, out) in spec.products {
            for (idx, what) in [(i, "product left index"), (j, "product right index")] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange {
                        what,
                        index: idx,
                        bound: dim,
                    });
                }
            }
            for (k, c) in out {
                if k >= dim {
                    return Err(Error::IndexOutOfRange {
                        what: "product output index",
                        index: k,
                        bound: dim,
                    });
                }
                raw[i * dim + j].push((k, c));
            }
        }
        let table: Vec<SparseVec> = raw.into_iter().map(normalize).collect();
        let alg = Algebra {
            name: spec.name,
            labels: spec.labels,
            table,
            grading: spec.grading,
            involution: spec.involution,
            flags: OnceLock::new(),
        };
        alg.validate_grading()?;
        alg.validate_involution()?;
        Ok(alg)
    }

    /// Builds an algebra from a full product function on basis pairs.
    pub fn from_fn(
        name: Option<String>,
        labels: Vec<String>,
        mut product: impl FnMut(usize, usize) -> Vector,
    ) -> Result<Algebra> {
        let dim = labels.len();
        let mut products = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let v = product(i, j);
                let s = sparse_from_dense(&v);
                if !s.is_empty() {
                    products.push((i, j, s));
                }
            }
        }
        Algebra::new(AlgebraSpec {
            name,
            labels,
            products,
            grading: None,
            involution: None,
        })
    }

    fn validate_grading(&self) -> Result<()> {
        let Some(g) = &self.grading else {
            return Ok(());
        };
        if g.grades.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "number of grades",
                expected: self.dim(),
                found: g.grades.len(),
            });
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let expected = g.grades[i].add(&g.grades[j])?.add(&g.product_degree)?;
                for (k, _) in self.product(i, j) {
                    if g.grades[*k] != expected {
                        return Err(Error::GradingIncompatible { i, j, k: *k });
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_involution(&self) -> Result<()> {
        let Some(s) = &self.involution else {
            return Ok(());
        };
        let n = self.dim();
        if s.rows() != n || s.cols() != n {
            return Err(Error::DimensionMismatch {
                what: "involution size",
                expected: n,
                found: s.rows(),
            });
        }
        let sq = s.mul(s)?;
        for j in 0..n {
            if sq.column(j) != linalg::unit_vector(n, j) {
                return Err(Error::InvolutionInvalid {
                    reason: "does not square to the identity",
                    witness: (j, j),
                });
            }
        }
        let images: Vec<Vector> = s.columns();
        for i in 0..n {
            for j in 0..n {
                let lhs = s.mul_vec(&self.basis_product_dense(i, j));
                let rhs = self.mul(&images[j], &images[i]);
                if lhs != rhs {
                    return Err(Error::InvolutionInvalid {
                        reason: "does not reverse products",
                        witness: (i, j),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("algebra[{}]", self.dim()))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn grade(&self, i: usize) -> Option<&Grade> {
        self.grading.as_ref().map(|g| &g.grades[i])
    }

    pub fn involution(&self) -> Option<&QMatrix> {
        self.involution.as_ref()
    }

    /// Structure constants `c_ij^k` as a sparse vector over `k`.
    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_product_dense(&self, i: usize, j: usize) -> Vector {
        let mut v = linalg::zero_vector(self.dim());
        for (k, c) in self.product(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        linalg::unit_vector(self.dim(), i)
    }

    /// True when every structure constant vanishes.
    pub fn is_zero_product(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    /// Product of two elements given in coordinates.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let n = self.dim();
        let mut out = linalg::zero_vector(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, s) in self.product(i, j) {
                    out[*k] += &c * s;
                }
            }
        }
        out
    }

    pub fn conjugate(&self, x: &[Rational]) -> Option<Vector> {
        self.involution.as_ref().map(|s| s.mul_vec(x))
    }

    /// Lazily computed identity flags.
    pub fn flags(&self) -> &Flags {
        self.flags.get_or_init(|| self.compute_flags())
    }

    pub fn is_associative(&self) -> bool {
        self.flags().associative.holds
    }

    fn triple_left(&self, i: usize, j: usize, k: usize) -> Vector {
        // (e_i e_j) e_k
        let mut out = linalg::zero_vector(self.dim());
        for (m, c) in self.product(i, j) {
            for (t, d) in self.product(*m, k) {
                out[*t] += c * d;
            }
        }
        out
    }

    fn triple_right(&self, i: usize, j: usize, k: usize) -> Vector {
        // e_i (e_j e_k)
        let mut out = linalg::zero_vector(self.dim());
        for (m, c) in self.product(j, k) {
            for (t, d) in self.product(i, *m) {
                out[*t] += c * d;
            }
        }
        out
    }

    fn associator(&self, i: usize, j: usize, k: usize) -> Vector {
        let l = self.triple_left(i, j, k);
        let r = self.triple_right(i, j, k);
        l.iter().zip(&r).map(|(a, b)| a - b).collect()
    }

    fn compute_flags(&self) -> Flags {
        let n = self.dim();
        let mut commutative = None;
        let mut anticommutative = None;
        for i in 0..n {
            for j in i..n {
                let a = self.product(i, j);
                let b = self.product(j, i);
                if commutative.is_none() && a != b {
                    commutative = Some(vec![i, j]);
                }
                if anticommutative.is_none() {
                    let ok = if i == j {
                        a.is_empty()
                    } else {
                        normalize(
                            a.iter()
                                .cloned()
                                .chain(b.iter().cloned())
                                .collect(),
                        )
                        .is_empty()
                    };
                    if !ok {
                        anticommutative = Some(vec![i, j]);
                    }
                }
            }
        }
        let mut associative = None;
        let mut jacobi = None;
        let mut alternative = None;
        let zero = linalg::zero_vector(n);
        'outer: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if associative.is_none() && self.associator(i, j, k) != zero {
                        associative = Some(vec![i, j, k]);
                    }
                    if jacobi.is_none() {
                        let mut s = self.triple_right(i, j, k);
                        for (x, y) in s.iter_mut().zip(self.triple_right(j, k, i)) {
                            *x += y;
                        }
                        for (x, y) in s.iter_mut().zip(self.triple_right(k, i, j)) {
                            *x += y;
                        }
                        if s != zero {
                            jacobi = Some(vec![i, j, k]);
                        }
                    }
                    if alternative.is_none() {
                        // Linearized left and right alternative laws.
                        let a = self.associator(i, j, k);
                        let left: Vector = a
                            .iter()
                            .zip(self.associator(j, i, k))
                            .map(|(x, y)| x + y)
                            .collect();
                        let right: Vector = a
                            .iter()
                            .zip(self.associator(i, k, j))
                            .map(|(x, y)| x + y)
                            .collect();
                        if left != zero || right != zero {
                            alternative = Some(vec![i, j, k]);
                        }
                    }
                    if associative.is_some() && jacobi.is_some() && alternative.is_some() {
                        break 'outer;
                    }
                }
            }
        }
        Flags {
            associative: FlagCheck::from_witness(associative),
            commutative: FlagCheck::from_witness(commutative),
            anticommutative: FlagCheck::from_witness(anticommutative),
            jacobi: FlagCheck::from_witness(jacobi),
            alternative: FlagCheck::from_witness(alternative),
        }
    }

    /// Canonical manifest JSON.
    pub fn to_manifest(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(MANIFEST_SCHEMA_VERSION));
        if let Some(name) = &self.name {
            m.insert("name".into(), json!(name));
        }
        m.insert("basis".into(), json!(self.labels));
        let (rank, prank) = self
            .grading
            .as_ref()
            .map_or((0, 0), |g| (g.rank, g.parity_rank));
        m.insert("grading_rank".into(), json!(rank));
        m.insert("parity_rank".into(), json!(prank));
        if let Some(g) = &self.grading {
            m.insert(
                "grades".into(),
                Value::Array(g.grades.iter().map(Grade::to_json).collect()),
            );
            if !g.product_degree.is_zero() {
                m.insert("product_degree".into(), g.product_degree.to_json());
            }
        }
        let n = self.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = self.product(i, j);
                if p.is_empty() {
                    continue;
                }
                let out: Vec<Value> = p
                    .iter()
                    .map(|(k, c)| json!([k, rational::to_text(c)]))
                    .collect();
                products.push(json!([i, j, out]));
            }
        }
        m.insert("product".into(), Value::Array(products));
        if let Some(s) = &self.involution {
            m.insert("involution".into(), s.to_json());
        }
        Value::Object(m)
    }

    pub fn from_manifest(v: &Value) -> Result<Algebra> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::parse("algebra", "manifest must be a JSON object"))?;
        let labels: Vec<String> = obj
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("algebra.basis", "missing array of labels"))?
            .iter()
            .enumerate()
            .map(|(i, l)| {
                l.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::parse(format!("algebra.basis[{i}]"), "label must be a string"))
            })
            .collect::<Result<_>>()?;
        let rank = obj.get("grading_rank").and_then(Value::as_u64).unwrap_or(0) as usize;
        let prank = obj.get("parity_rank").and_then(Value::as_u64).unwrap_or(0) as usize;
        let grading = match obj.get("grades") {
            Some(gs) => {
                let arr = gs
                    .as_array()
                    .ok_or_else(|| Error::parse("algebra.grades", "must be an array"))?;
                let grades = arr
                    .iter()
                    .enumerate()
                    .map(|(i, g)| Grade::from_json(g, rank, prank, &format!("algebra.grades[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let pd = match obj.get("product_degree") {
                    Some(p) => Grade::from_json(p, rank, prank, "algebra.product_degree")?,
                    None => Grade::zero(rank, prank),
                };
                Some(Grading::with_product_degree(rank, prank, grades, pd)?)
            }
            None if rank + prank > 0 => {
                return Err(Error::parse(
                    "algebra.grades",
                    "grading_rank or parity_rank is positive but no grades were given",
                ))
            }
            None => None,
        };
        let mut products = Vec::new();
        if let Some(ps) = obj.get("product") {
            let arr = ps
                .as_array()
                .ok_or_else(|| Error::parse("algebra.product", "must be an array"))?;
            for (t, entry) in arr.iter().enumerate() {
                let loc = format!("algebra.product[{t}]");
                let e = entry
                    .as_array()
                    .filter(|e| e.len() == 3)
                    .ok_or_else(|| Error::parse(&loc, "entry must be [i, j, [[k, c]...]]"))?;
                let i = e[0]
                    .as_u64()
                    .ok_or_else(|| Error::parse(&loc, "i must be a non-negative integer"))?
                    as usize;
                let j = e[1]
                    .as_u64()
                    .ok_or_else(|| Error::parse(&loc, "j must be a non-negative integer"))?
                    as usize;
                let outs = e[2]
                    .as_array()
                    .ok_or_else(|| Error::parse(&loc, "output must be an array of [k, c]"))?;
                let mut sv = Vec::new();
                for o in outs {
                    let pair = o
                        .as_array()
                        .filter(|p| p.len() == 2)
                        .ok_or_else(|| Error::parse(&loc, "output entry must be [k, c]"))?;
                    let k = pair[0]
                        .as_u64()
                        .ok_or_else(|| Error::parse(&loc, "k must be a non-negative integer"))?
                        as usize;
                    let c = linalg::parse_scalar(&pair[1], &loc)?;
                    sv.push((k, c));
                }
                if i >= labels.len() || j >= labels.len() {
                    return Err(Error::parse(
                        &loc,
                        format!("index out of range for dimension {}", labels.len()),
                    ));
                }
                if let Some((k, _)) = sv.iter().find(|(k, _)| *k >= labels.len()) {
                    return Err(Error::parse(
                        &loc,
                        format!("output index {k} out of range for dimension {}", labels.len()),
                    ));
                }
                products.push((i, j, sv));
            }
        }
        let involution = match obj.get("involution") {
            Some(Value::Null) | None => None,
            Some(m) => Some(QMatrix::from_json(m, "algebra.involution")?),
        };
        Algebra::new(AlgebraSpec {
            name: obj.get("name").and_then(Value::as_str).map(str::to_string),
            labels,
            products,
            grading,
            involution,
        })
    }

    /// SHA-256 of the canonical manifest, hex encoded.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(&self.to_manifest()).expect("manifest serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn into_shared(self) -> Arc<Algebra> {
        Arc::new(self)
    }

    pub(crate) fn rebuild(
        &self,
        grading: Option<Grading>,
        involution: Option<QMatrix>,
    ) -> Result<Algebra> {
        let alg = Algebra {
            name: self.name.clone(),
            labels: self.labels.clone(),
            table: self.table.clone(),
            grading,
            involution,
            flags: OnceLock::new(),
        };
        alg.validate_grading()?;
        alg.validate_involution()?;
        Ok(alg)
    }
}

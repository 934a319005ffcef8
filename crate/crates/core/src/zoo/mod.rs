//! Builtin algebra families, addressable by name from JSON.

pub mod cd;
pub mod classical;

use std::sync::Arc;

use serde_json::Value;

pub use cd::{
    cayley_dickson, cd_block_inclusion, cd_block_inclusion_eta, cd_tower, cd_tower_capped,
    direct_realification, find_zero_divisor, reals, unitary_cd, UnitarySpec, ZeroDivisor,
    CD_TOWER_MAX,
};
pub use classical::{
    abelian, antisymmetric_vectors, gl, gl_complex, heisenberg, iso_pq, mat, matrix_algebra, so,
    so_pq, sp, su, su_pq, super_translation, u, u_pq, ProductMode,
};

use crate::algebra::construct::{commutator_algebra, direct_sum, pushforward_product};
use crate::algebra::linalg::QMatrix;
use crate::algebra::structure::{Algebra, Grading};
use crate::algebra::Grade;
use crate::error::{Error, Result};
use crate::ring::rational::{self, Rational};

struct Params<'a> {
    obj: &'a serde_json::Map<String, Value>,
    loc: String,
}

impl<'a> Params<'a> {
    fn usize_opt(&self, key: &str) -> Result<Option<usize>> {
        match self.obj.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|x| Some(x as usize))
                .ok_or_else(|| Error::parse(format!("{}.{key}", self.loc), "expected a non-negative integer")),
        }
    }

    fn usize(&self, key: &str) -> Result<usize> {
        self.usize_opt(key)?
            .ok_or_else(|| Error::parse(format!("{}.{key}", self.loc), "missing parameter"))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.usize_opt(key)?.unwrap_or(default))
    }

    fn rational_or(&self, key: &str, default: Rational) -> Result<Rational> {
        match self.obj.get(key) {
            None => Ok(default),
            Some(v) => crate::algebra::linalg::parse_scalar(v, &format!("{}.{key}", self.loc)),
        }
    }

    /// `n`, or `p` and optional `q`.
    fn signature(&self) -> Result<(usize, usize)> {
        if let Some(n) = self.usize_opt("n")? {
            return Ok((n, 0));
        }
        Ok((self.usize("p")?, self.usize_or("q", 0)?))
    }

    fn mode(&self) -> Result<ProductMode> {
        match self.obj.get("mode").and_then(Value::as_str) {
            None | Some("bracket") => Ok(ProductMode::Bracket),
            Some("matrix") => Ok(ProductMode::Matrix),
            Some(other) => Err(Error::parse(
                format!("{}.mode", self.loc),
                format!("unknown product mode {other:?} (bracket | matrix)"),
            )),
        }
    }
}

/// Names accepted in the `"zoo"` field.
pub const ZOO_NAMES: &[&str] = &[
    "so",
    "u",
    "su",
    "sp",
    "gl",
    "gl_c",
    "heisenberg",
    "abelian",
    "iso",
    "super_translation",
    "mat",
    "reals",
    "cd_tower",
    "unitary_cd",
    "direct_sum",
    "commutator",
    "split_extension",
];

/// Builds an algebra from `{"zoo": name, ...params}`.
///
/// Any spec may also carry `"grades"` (with `"grading_rank"` and
/// `"parity_rank"`) to impose a grading, and `"name"` to rename.
pub fn from_spec(v: &Value, loc: &str) -> Result<Algebra> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse(loc, "zoo spec must be an object"))?;
    let name = obj
        .get("zoo")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse(format!("{loc}.zoo"), "missing constructor name"))?;
    let p = Params {
        obj,
        loc: loc.to_string(),
    };
    let minus_one = rational::rat(-1);
    let a = match name {
        "so" => {
            let (p_, q) = p.signature()?;
            so_pq(p_, q)?
        }
        "u" => {
            let (p_, q) = p.signature()?;
            u_pq(p_, q)?
        }
        "su" => {
            let (p_, q) = p.signature()?;
            su_pq(p_, q)?
        }
        "sp" => sp(p.usize("n")?)?,
        "gl" => gl(p.usize("n")?)?,
        "gl_c" => gl_complex(p.usize("n")?)?,
        "heisenberg" => heisenberg(p.usize("n")?)?,
        "abelian" => abelian(p.usize("k")?)?,
        "iso" => {
            let (p_, q) = p.signature()?;
            iso_pq(p_, q)?
        }
        "super_translation" => super_translation(p.usize("k")?, p.usize("l")?)?,
        "mat" => mat(p.usize("n")?)?,
        "reals" => reals(),
        "cd_tower" => {
            let l = p.usize("l")? as u32;
            cd_tower(l, &p.rational_or("gamma", minus_one.clone())?)?
        }
        "unitary_cd" => {
            let k = p.usize("k")?;
            let pp = p.usize_or("p", k)?;
            let q = p.usize_or("q", 0)?;
            let l = p.usize("l")? as u32;
            let base = cd_tower(l, &p.rational_or("gamma", minus_one.clone())?)?;
            unitary_cd(&UnitarySpec::new(k, pp, q, Arc::new(base), p.mode()?)?)?
        }
        "direct_sum" => {
            let parts = obj
                .get("summands")
                .and_then(Value::as_array)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| Error::parse(format!("{loc}.summands"), "expected a nonempty array"))?;
            let mut acc = from_spec(&parts[0], &format!("{loc}.summands[0]"))?;
            for (i, s) in parts.iter().enumerate().skip(1) {
                acc = direct_sum(&acc, &from_spec(s, &format!("{loc}.summands[{i}]"))?)?;
            }
            acc
        }
        "commutator" => {
            let inner = obj
                .get("of")
                .ok_or_else(|| Error::parse(format!("{loc}.of"), "missing inner algebra"))?;
            commutator_algebra(&from_spec(inner, &format!("{loc}.of"))?)?
        }
        "split_extension" => {
            let inner = obj
                .get("of")
                .ok_or_else(|| Error::parse(format!("{loc}.of"), "missing inner algebra"))?;
            let a = from_spec(inner, &format!("{loc}.of"))?;
            split_extension(&a, p.usize("translations")?)?
        }
        other => {
            return Err(Error::parse(
                format!("{loc}.zoo"),
                format!("unknown constructor {other:?}; known: {}", ZOO_NAMES.join(", ")),
            ))
        }
    };
    let a = match obj.get("grades") {
        None => a,
        Some(gs) => {
            let rank = p.usize_or("grading_rank", 0)?;
            let prank = p.usize_or("parity_rank", 0)?;
            let arr = gs
                .as_array()
                .ok_or_else(|| Error::parse(format!("{loc}.grades"), "must be an array"))?;
            let grades = arr
                .iter()
                .enumerate()
                .map(|(i, g)| Grade::from_json(g, rank, prank, &format!("{loc}.grades[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            a.rebuild(Some(Grading::new(rank, prank, grades)?), a.involution().cloned())?
        }
    };
    Ok(match obj.get("name").and_then(Value::as_str) {
        Some(n) => a.with_name(n),
        None => a,
    })
}

/// `E = R^k ⊕ A` with the product pushed forward from `A` along the
/// projection onto `A` and the inclusion as section. Translations come first.
pub fn split_extension(a: &Algebra, k: usize) -> Result<Algebra> {
    let n = a.dim();
    let mut pi = QMatrix::zeros(n, k + n);
    let mut s = QMatrix::zeros(k + n, n);
    for i in 0..n {
        pi.set(i, k + i, rational::one());
        s.set(k + i, i, rational::one());
    }
    let mut labels: Vec<String> = (0..k).map(|i| format!("T{i}")).collect();
    labels.extend(a.labels().iter().cloned());
    let e = pushforward_product(labels, a, &pi, &s)?;
    Ok(e.with_name(format!("R^{k}+{}", a.display_name())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn spec_parsing() {
        assert_eq!(from_spec(&json!({"zoo": "so", "n": 3}), "a").unwrap().dim(), 3);
        assert_eq!(from_spec(&json!({"zoo": "iso", "p": 3, "q": 1}), "a").unwrap().dim(), 10);
        assert_eq!(from_spec(&json!({"zoo": "cd_tower", "l": 3}), "a").unwrap().dim(), 8);
        let ds = json!({"zoo": "direct_sum", "summands": [{"zoo": "so", "n": 3}, {"zoo": "so", "n": 3}]});
        assert_eq!(from_spec(&ds, "a").unwrap().dim(), 6);
        let uc = json!({"zoo": "unitary_cd", "k": 2, "p": 1, "q": 1, "l": 1});
        assert_eq!(from_spec(&uc, "a").unwrap().dim(), 4);
        let err = from_spec(&json!({"zoo": "g2"}), "algebra").unwrap_err();
        assert!(err.to_string().contains("algebra.zoo"));
    }

    #[test]
    fn imposed_grading() {
        let v = json!({"zoo": "abelian", "k": 2, "grading_rank": 1, "grades": [[0], [1]]});
        let a = from_spec(&v, "a").unwrap();
        assert_eq!(a.grading().unwrap().support().len(), 2);
        let bad = json!({"zoo": "so", "n": 3, "grading_rank": 1, "grades": [[1], [1], [1]]});
        assert!(matches!(from_spec(&bad, "a"), Err(Error::GradingIncompatible { .. })));
    }

    #[test]
    fn split_extension_of_so3() {
        let e = split_extension(&so(3).unwrap(), 3).unwrap();
        assert_eq!(e.dim(), 6);
        assert!(e.flags().jacobi.holds);
    }
}

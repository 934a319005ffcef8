//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::modular::{add_mod, mul_mod, pow_mod, rational_mod};
use super::{rational, Fp, Rational, VarId};
use crate::error::{Error, Result};

/// Power product of variables, sorted by variable with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(id: VarId) -> Self {
        Monomial(vec![(id, 1)])
    }

    /// Builds a monomial from arbitrary factors, merging repeats.
    pub fn from_factors(factors: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    /// Graded order: total degree first, then lexicographic on the sorted
    /// `(variable, exponent)` list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial in canonical form: no zero coefficients, keys unique.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(id: VarId) -> Self {
        let mut p = MultiPoly::zero();
        p.terms.insert(Monomial::var(id), Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &MultiPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_ref(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Evaluates in Z/prime. Requires every variable to be assigned.
    pub fn mod_eval(&self, assignment: &BTreeMap<VarId, u64>, prime: u64) -> Result<u64> {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut term = rational_mod(c, prime).ok_or_else(|| {
                Error::ModularUnsupported(format!(
                    "coefficient {} has denominator divisible by {prime}",
                    rational::to_text(c)
                ))
            })?;
            for (v, e) in &m.0 {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| Error::UnassignedVariable(v.clone()))?;
                term = mul_mod(term, pow_mod(*x, *e as u64, prime), prime);
            }
            acc = add_mod(acc, term, prime);
        }
        Ok(acc)
    }

    /// Evaluation in the default field with a lookup function.
    pub fn eval_fp(&self, lookup: &dyn Fn(&VarId) -> Option<Fp>) -> Result<Fp> {
        let mut acc = Fp::zero();
        for (m, c) in &self.terms {
            let mut term = Fp::from_rational(c).ok_or_else(|| {
                Error::ModularUnsupported(format!(
                    "coefficient {} not invertible mod p",
                    rational::to_text(c)
                ))
            })?;
            for (v, e) in &m.0 {
                let x = lookup(v).ok_or_else(|| Error::UnassignedVariable(v.clone()))?;
                for _ in 0..*e {
                    term = term.mul(x);
                }
            }
            acc = acc.add(term);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(m, c)| term_json(m, c)).collect())
    }

    pub fn from_json(v: &Value) -> Result<MultiPoly> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::parse("polynomial", "expected an array of terms"))?;
        let mut out = MultiPoly::zero();
        for (t, term) in arr.iter().enumerate() {
            let loc = format!("polynomial term {t}");
            let coeff = term
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::parse(&loc, "missing string field 'coeff'"))?;
            let coeff = rational::parse(coeff)?;
            let vars = term
                .get("vars")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(&loc, "missing array field 'vars'"))?;
            let mut factors = Vec::new();
            for f in vars {
                let pair = f
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::parse(&loc, "var entry must be [[tag, indices...], exponent]"))?;
                let id = pair[0]
                    .as_array()
                    .ok_or_else(|| Error::parse(&loc, "variable must be [tag, indices...]"))?;
                let tag = id
                    .first()
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::parse(&loc, "variable tag must be a string"))?;
                let indices = id[1..]
                    .iter()
                    .map(|x| x.as_u64().map(|x| x as u32))
                    .collect::<Option<Vec<u32>>>()
                    .ok_or_else(|| Error::parse(&loc, "variable indices must be integers"))?;
                let e = pair[1]
                    .as_u64()
                    .ok_or_else(|| Error::parse(&loc, "exponent must be a non-negative integer"))?;
                factors.push((VarId::new(tag, indices), e as u32));
            }
            out.add_term(Monomial::from_factors(factors), coeff);
        }
        Ok(out)
    }
}

pub(crate) fn term_json(m: &Monomial, c: &Rational) -> Value {
    let vars: Vec<Value> = m
        .0
        .iter()
        .map(|(v, e)| {
            let mut id = vec![Value::from(v.tag())];
            id.extend(v.indices().iter().map(|i| Value::from(*i)));
            json!([id, e])
        })
        .collect();
    json!({ "coeff": rational::to_text(c), "vars": vars })
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({})*{:?}", rational::to_text(c), m))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.mul_ref(rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::modular::DEFAULT_PRIME;
    use crate::ring::rational::{rat, ratio};
    use proptest::prelude::*;

    fn x() -> MultiPoly {
        MultiPoly::var(VarId::new("x", vec![0, 0]))
    }
    fn y() -> MultiPoly {
        MultiPoly::var(VarId::new("y", vec![]))
    }
    fn c(n: i64) -> MultiPoly {
        MultiPoly::constant(rat(n))
    }

    #[test]
    fn make_var_laws() {
        let v = x();
        assert_eq!(v.len(), 1);
        assert_eq!(v.total_degree(), 1);
        assert_eq!(&v + &v, v.scale(&rat(2)));
        let d = &v - &v;
        assert!(d.is_zero());
        assert_eq!(d.terms().count(), 0);
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&x() + &y()) * &(&x() - &y());
        let rhs = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scale_by_zero() {
        assert!(x().scale(&rat(0)).is_zero());
    }

    #[test]
    fn binomial_cube() {
        let p = (&x() + &c(1)).pow(3);
        let x2 = &x() * &x();
        let x3 = &x2 * &x();
        let expected = &(&(&x3 + &x2.scale(&rat(3))) + &x().scale(&rat(3))) + &c(1);
        assert_eq!(p, expected);
    }

    #[test]
    fn mod_eval_examples() {
        let p = &(&x() * &x()) + &c(1);
        let xid = VarId::new("x", vec![0, 0]);
        let yid = VarId::new("y", vec![]);
        let mut a = BTreeMap::new();
        a.insert(xid.clone(), 0);
        assert_eq!(p.mod_eval(&a, DEFAULT_PRIME).unwrap(), 1);
        assert_eq!(MultiPoly::zero().mod_eval(&a, DEFAULT_PRIME).unwrap(), 0);
        let xy = &x() * &y();
        a.insert(xid, 123_456_789_012);
        a.insert(yid.clone(), 987_654_321_098);
        assert_eq!(
            xy.mod_eval(&a, DEFAULT_PRIME).unwrap(),
            mul_mod(123_456_789_012, 987_654_321_098, DEFAULT_PRIME)
        );
        a.remove(&yid);
        match xy.mod_eval(&a, DEFAULT_PRIME) {
            Err(Error::UnassignedVariable(v)) => assert_eq!(v, yid),
            other => panic!("expected unassigned variable error, got {other:?}"),
        }
    }

    #[test]
    fn json_layout() {
        let p = &x().scale(&ratio(-1, 2)) + &c(3);
        let s = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(
            s,
            r#"[{"coeff":"3/1","vars":[]},{"coeff":"-1/2","vars":[[["x",0,0],1]]}]"#
        );
        assert_eq!(MultiPoly::from_json(&p.to_json()).unwrap(), p);
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        let term = (
            -5i64..=5,
            1i64..=3,
            proptest::collection::vec((0u32..3, 0u32..3), 0..3),
        );
        proptest::collection::vec(term, 0..5).prop_map(|terms| {
            let mut p = MultiPoly::zero();
            for (n, d, vars) in terms {
                let m = Monomial::from_factors(
                    vars.into_iter().map(|(v, e)| (VarId::new("v", vec![v]), e)),
                );
                p.add_term(m, ratio(n, d));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_laws(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert!((&p - &p).is_zero());
            for (_, c) in (&p * &q).terms() {
                prop_assert!(!c.is_zero());
            }
        }

        #[test]
        fn mod_eval_is_homomorphism(p in arb_poly(), q in arb_poly(), vals in proptest::collection::vec(0u64..DEFAULT_PRIME, 3)) {
            let mut a = BTreeMap::new();
            for (i, v) in vals.iter().enumerate() {
                a.insert(VarId::new("v", vec![i as u32]), *v);
            }
            let pq = (&p * &q).mod_eval(&a, DEFAULT_PRIME).unwrap();
            let pv = p.mod_eval(&a, DEFAULT_PRIME).unwrap();
            let qv = q.mod_eval(&a, DEFAULT_PRIME).unwrap();
            prop_assert_eq!(pq, mul_mod(pv, qv, DEFAULT_PRIME));
            let s = (&p + &q).mod_eval(&a, DEFAULT_PRIME).unwrap();
            prop_assert_eq!(s, add_mod(pv, qv, DEFAULT_PRIME));
        }

        #[test]
        fn canonical_form_unique(p in arb_poly(), q in arb_poly()) {
            let json_eq = p.to_json() == q.to_json();
            prop_assert_eq!(json_eq, (&p - &q).is_zero());
        }
    }
}

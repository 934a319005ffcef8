//! Coefficient rings: exact rationals, sparse polynomials and a prime field.

pub mod modular;
pub mod poly;
pub mod rational;
mod var;

pub use modular::{Fp, DEFAULT_PRIME};
pub use poly::{Monomial, MultiPoly};
pub use rational::Rational;
pub use var::VarId;

use num_traits::Zero;

/// Ring in which form coefficients live.
///
/// The structure constants of an algebra are rationals; `Scalar` is their
/// image in the coefficient ring, computed once per product.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    type Scalar: Clone + Send + Sync;

    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scalar(r: &Rational) -> Option<Self::Scalar>;
    fn scale(&self, s: &Self::Scalar) -> Self;
    /// Number of stored terms, used for resource accounting.
    fn weight(&self) -> usize;
    fn to_json(&self) -> serde_json::Value;
}

impl Coefficient for MultiPoly {
    type Scalar = Rational;

    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        MultiPoly::add_assign_ref(self, rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        MultiPoly::mul_ref(self, rhs)
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scalar(r: &Rational) -> Option<Rational> {
        Some(r.clone())
    }
    fn scale(&self, s: &Rational) -> Self {
        MultiPoly::scale(self, s)
    }
    fn weight(&self) -> usize {
        self.len()
    }
    fn to_json(&self) -> serde_json::Value {
        MultiPoly::to_json(self)
    }
}

impl Coefficient for Fp {
    type Scalar = Fp;

    fn zero() -> Self {
        Fp::zero()
    }
    fn is_zero(&self) -> bool {
        Fp::is_zero(*self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = *self + *rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg_ref(&self) -> Self {
        -*self
    }
    fn scalar(r: &Rational) -> Option<Fp> {
        Fp::from_rational(r)
    }
    fn scale(&self, s: &Fp) -> Self {
        *self * *s
    }
    fn weight(&self) -> usize {
        1
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.value().to_string())
    }
}

impl Coefficient for Rational {
    type Scalar = Rational;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn scalar(r: &Rational) -> Option<Rational> {
        Some(r.clone())
    }
    fn scale(&self, s: &Rational) -> Self {
        self * s
    }
    fn weight(&self) -> usize {
        1
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(rational::to_text(self))
    }
}

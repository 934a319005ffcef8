//! Prime-field arithmetic for randomized refutation of vanishing claims.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::Rational;

/// The Mersenne prime 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - (b % p) as u128) % p as u128) as u64
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse by Fermat; `p` must be prime and `a` nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let m = n.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits in u64")
}

/// Image of a rational in Z/p, or `None` when the denominator vanishes mod p.
pub fn rational_mod(r: &Rational, p: u64) -> Option<u64> {
    let num = bigint_mod(r.numer(), p);
    let den = bigint_mod(r.denom(), p);
    inv_mod(den, p).map(|d| mul_mod(num, d, p))
}

/// Element of Z/p for the fixed prime [`DEFAULT_PRIME`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub const MODULUS: u64 = DEFAULT_PRIME;

    pub fn new(v: u64) -> Self {
        Fp(v % Self::MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn zero() -> Self {
        Fp(0)
    }

    pub fn one() -> Self {
        Fp(1)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn from_rational(r: &Rational) -> Option<Fp> {
        rational_mod(r, Self::MODULUS).map(Fp)
    }

    pub fn from_i64(v: i64) -> Fp {
        let m = Self::MODULUS as i128;
        Fp((((v as i128) % m + m) % m) as u64)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Fp {
        Fp(rng.gen_range(0..Self::MODULUS))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Miller-Rabin with the deterministic base set for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// log2 of the Schwartz-Zippel failure probability `(degree / prime)^trials`.
pub fn failure_bound_log2(degree: u32, prime: u64, trials: u32) -> f64 {
    if degree == 0 {
        return f64::NEG_INFINITY;
    }
    trials as f64 * ((degree as f64).log2() - (prime as f64).log2())
}

impl std::ops::Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= Self::MODULUS { s - Self::MODULUS } else { s })
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(Self::MODULUS - self.0)
        }
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        self + -o
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp(mul_mod(self.0, o.0, Self::MODULUS))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::ratio;

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert!(!is_prime_u64(DEFAULT_PRIME - 1));
        assert!(!is_prime_u64(1 << 61));
        assert!(is_prime_u64(1_000_000_007));
    }

    #[test]
    fn field_ops() {
        let a = Fp::new(DEFAULT_PRIME - 1);
        assert_eq!(a + Fp::one(), Fp::zero());
        assert_eq!(a * a, Fp::one());
        assert_eq!(Fp::from_i64(-1), a);
    }

    #[test]
    fn rational_image() {
        let half = Fp::from_rational(&ratio(1, 2)).unwrap();
        assert_eq!(half + half, Fp::one());
        let neg = Fp::from_rational(&ratio(-3, 1)).unwrap();
        assert_eq!(neg + Fp::new(3), Fp::zero());
    }

    #[test]
    fn failure_bound() {
        let b = failure_bound_log2(4, DEFAULT_PRIME, 20);
        assert!(b < -1100.0);
    }
}

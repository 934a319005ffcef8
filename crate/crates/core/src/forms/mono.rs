//! Monomials of the free Grassmann algebra on at most 63 generators.

use std::cmp::Ordering;
use std::fmt;

/// Strictly increasing set of generator indices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GMono(u64);

impl GMono {
    pub const ONE: GMono = GMono(0);

    pub fn from_bits(bits: u64) -> Self {
        GMono(bits)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        GMono(indices.iter().fold(0, |acc, &i| acc | (1u64 << i)))
    }

    pub fn generator(i: usize) -> Self {
        GMono(1u64 << i)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut b = self.0;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            out.push(i);
            b &= b - 1;
        }
        out
    }

    /// Highest generator index plus one (0 for the unit).
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// `self * other` as `(sign, product)`, or `None` if they share a generator.
    pub fn wedge(self, other: GMono) -> Option<(bool, GMono)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Count pairs (i in self, j in other) with i > j.
        let mut inversions = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            inversions += (self.0 >> j).count_ones();
            b &= b - 1;
        }
        Some((inversions % 2 == 1, GMono(self.0 | other.0)))
    }

    /// All monomials of degree `k` in `n` generators, in increasing order.
    pub fn all_of_degree(n: usize, k: usize) -> Vec<GMono> {
        let mut out = Vec::new();
        let mut combo = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, combo: &mut Vec<usize>, out: &mut Vec<GMono>) {
            if combo.len() == k {
                out.push(GMono::from_indices(combo));
                return;
            }
            for i in start..n {
                if n - i < k - combo.len() {
                    break;
                }
                combo.push(i);
                rec(i + 1, n, k, combo, out);
                combo.pop();
            }
        }
        rec(0, n, k, &mut combo, &mut out);
        out
    }
}

impl Ord for GMono {
    /// Degree first, then lexicographic on the increasing index sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for GMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| format!("θ{i}")).collect();
        write!(f, "{}", parts.concat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Sign by explicit bubble sort of the concatenated index list.
    fn sign_oracle(a: &[usize], b: &[usize]) -> Option<bool> {
        let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
        let mut swaps = 0;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] == v[j + 1] {
                    return None;
                }
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(swaps % 2 == 1)
    }

    #[test]
    fn basic_signs() {
        let t0 = GMono::generator(0);
        let t1 = GMono::generator(1);
        assert_eq!(t0.wedge(t1), Some((false, GMono::from_indices(&[0, 1]))));
        assert_eq!(t1.wedge(t0), Some((true, GMono::from_indices(&[0, 1]))));
        assert_eq!(t0.wedge(t0), None);
    }

    #[test]
    fn ordering() {
        let a = GMono::from_indices(&[0, 2]);
        let b = GMono::from_indices(&[1, 2]);
        let c = GMono::from_indices(&[3]);
        assert!(a < b);
        assert!(c < a);
        let all = GMono::all_of_degree(4, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    proptest! {
        #[test]
        fn sign_matches_oracle(a in 0u64..256, b in 0u64..256) {
            let (ma, mb) = (GMono::from_bits(a), GMono::from_bits(b));
            let got = ma.wedge(mb).map(|(s, _)| s);
            prop_assert_eq!(got, sign_oracle(&ma.indices(), &mb.indices()));
        }

        #[test]
        fn order_is_lexicographic_within_degree(a in 0u64..1024, b in 0u64..1024) {
            let (ma, mb) = (GMono::from_bits(a), GMono::from_bits(b));
            let expect = ma.degree().cmp(&mb.degree()).then(ma.indices().cmp(&mb.indices()));
            prop_assert_eq!(ma.cmp(&mb), expect);
        }
    }
}

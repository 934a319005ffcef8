use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};

/// Element of Z^d x (Z/2)^e.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Grade {
    ints: Vec<i64>,
    parity: Vec<u8>,
}

impl Grade {
    pub fn new(ints: Vec<i64>, parity: Vec<u8>) -> Self {
        Grade {
            ints,
            parity: parity.into_iter().map(|p| p & 1).collect(),
        }
    }

    pub fn zero(rank: usize, parity_rank: usize) -> Self {
        Grade::new(vec![0; rank], vec![0; parity_rank])
    }

    pub fn int(v: i64) -> Self {
        Grade::new(vec![v], Vec::new())
    }

    pub fn odd(bit: bool) -> Self {
        Grade::new(Vec::new(), vec![bit as u8])
    }

    pub fn rank(&self) -> usize {
        self.ints.len()
    }

    pub fn parity_rank(&self) -> usize {
        self.parity.len()
    }

    pub fn ints(&self) -> &[i64] {
        &self.ints
    }

    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    /// Total parity: sum of the Z/2 components.
    pub fn total_parity(&self) -> u8 {
        self.parity.iter().fold(0, |a, b| a ^ b)
    }

    pub fn is_zero(&self) -> bool {
        self.ints.iter().all(|&x| x == 0) && self.parity.iter().all(|&x| x == 0)
    }

    fn check_shape(&self, other: &Grade) -> Result<()> {
        if self.rank() != other.rank() || self.parity_rank() != other.parity_rank() {
            return Err(Error::invalid(format!(
                "grade shapes differ: {self} vs {other}"
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Grade) -> Result<Grade> {
        self.check_shape(other)?;
        Ok(Grade {
            ints: self.ints.iter().zip(&other.ints).map(|(a, b)| a + b).collect(),
            parity: self.parity.iter().zip(&other.parity).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn neg(&self) -> Grade {
        Grade {
            ints: self.ints.iter().map(|a| -a).collect(),
            parity: self.parity.clone(),
        }
    }

    pub fn sub(&self, other: &Grade) -> Result<Grade> {
        self.add(&other.neg())
    }

    /// Flat JSON form: integer components followed by parity bits.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.ints
                .iter()
                .map(|&x| Value::from(x))
                .chain(self.parity.iter().map(|&x| Value::from(x)))
                .collect(),
        )
    }

    pub fn from_json(v: &Value, rank: usize, parity_rank: usize, location: &str) -> Result<Grade> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::parse(location, "grade must be an array of integers"))?;
        if arr.len() != rank + parity_rank {
            return Err(Error::parse(
                location,
                format!("grade has {} entries, expected {}", arr.len(), rank + parity_rank),
            ));
        }
        let nums = arr
            .iter()
            .map(Value::as_i64)
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(|| Error::parse(location, "grade entries must be integers"))?;
        let parity = nums[rank..]
            .iter()
            .map(|&p| {
                if p == 0 || p == 1 {
                    Ok(p as u8)
                } else {
                    Err(Error::parse(location, "parity entries must be 0 or 1"))
                }
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Grade::new(nums[..rank].to_vec(), parity))
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.ints.iter().map(i64::to_string).collect();
        parts.extend(self.parity.iter().map(|p| format!("{p}~")));
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_laws() {
        let a = Grade::new(vec![1, -2], vec![1]);
        let b = Grade::new(vec![3, 0], vec![1]);
        let z = Grade::zero(2, 1);
        assert_eq!(a.add(&z).unwrap(), a);
        assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        assert_eq!(a.add(&b).unwrap().parity(), &[0]);
        assert!(a.sub(&a).unwrap().is_zero());
        assert!(a.add(&Grade::int(1)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = Grade::new(vec![4], vec![1, 0]);
        let back = Grade::from_json(&a.to_json(), 1, 2, "g").unwrap();
        assert_eq!(a, back);
        assert!(Grade::from_json(&a.to_json(), 2, 2, "g").is_err());
        let b = Grade::new(vec![4, -1], vec![]);
        assert!(Grade::from_json(&b.to_json(), 1, 1, "g").is_err());
    }
}

use std::fmt;
use std::sync::Arc;

/// Name of a polynomial indeterminate: a family tag plus a small index tuple.
///
/// Ordered lexicographically on the tag, then on the indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    tag: Arc<str>,
    indices: Vec<u32>,
}

impl VarId {
    pub fn new(tag: impl AsRef<str>, indices: impl Into<Vec<u32>>) -> Self {
        VarId {
            tag: Arc::from(tag.as_ref()),
            indices: indices.into(),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        if !self.indices.is_empty() {
            let parts: Vec<String> = self.indices.iter().map(u32::to_string).collect();
            write!(f, "[{}]", parts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_tag_then_indices() {
        let a = VarId::new("a", vec![9]);
        let b0 = VarId::new("b", vec![0, 5]);
        let b1 = VarId::new("b", vec![1]);
        let mut v = vec![b1.clone(), a.clone(), b0.clone()];
        v.sort();
        assert_eq!(v, vec![a, b0, b1]);
    }

    #[test]
    fn display() {
        assert_eq!(VarId::new("x", vec![0, 2]).to_string(), "x[0,2]");
    }
}

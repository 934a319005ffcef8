//! Resource caps for exact expansion.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};

pub const ENV_MAX_GENERATORS: &str = "EHPCERT_MAX_GENERATORS";
pub const ENV_MAX_TERMS: &str = "EHPCERT_MAX_TERMS";
pub const ENV_WALL_CLOCK_SECS: &str = "EHPCERT_WALL_CLOCK_SECS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub max_generators: usize,
    /// Upper bound on stored coefficient terms of any intermediate form.
    pub max_terms: u64,
    pub wall_clock_secs: Option<u64>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_generators: 16,
            max_terms: 20_000_000,
            wall_clock_secs: Some(1800),
        }
    }
}

impl Caps {
    pub fn unlimited() -> Self {
        Caps {
            max_generators: 63,
            max_terms: u64::MAX,
            wall_clock_secs: None,
        }
    }

    /// Defaults overridden by the `EHPCERT_*` environment variables.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        let read = |key: &str| -> Result<Option<u64>> {
            match std::env::var(key) {
                Ok(v) => v
                    .trim()
                    .parse::<u64>()
                    .map(Some)
                    .map_err(|_| Error::parse(key, format!("expected a non-negative integer, got {v:?}"))),
                Err(_) => Ok(None),
            }
        };
        if let Some(g) = read(ENV_MAX_GENERATORS)? {
            caps.max_generators = g as usize;
        }
        if let Some(t) = read(ENV_MAX_TERMS)? {
            caps.max_terms = t;
        }
        if let Some(s) = read(ENV_WALL_CLOCK_SECS)? {
            caps.wall_clock_secs = if s == 0 { None } else { Some(s) };
        }
        Ok(caps)
    }
}

/// Caps plus a start time; checked at every expansion step.
#[derive(Clone, Debug)]
pub struct Budget {
    caps: Caps,
    deadline: Option<Instant>,
}

impl Budget {
    pub fn new(caps: Caps) -> Self {
        let deadline = caps
            .wall_clock_secs
            .map(|s| Instant::now() + Duration::from_secs(s));
        Budget { caps, deadline }
    }

    pub fn unlimited() -> Self {
        Budget::new(Caps::unlimited())
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn check_generators(&self, n: usize) -> Result<()> {
        // Grassmann monomials are u64 bitmasks.
        let limit = self.caps.max_generators.min(63);
        if n > limit {
            return Err(Error::ResourceCap {
                resource: "grassmann generators",
                limit: limit as u64,
                estimate: n as u64,
            });
        }
        Ok(())
    }

    pub fn check_terms(&self, terms: u64) -> Result<()> {
        if terms > self.caps.max_terms {
            return Err(Error::ResourceCap {
                resource: "polynomial terms",
                limit: self.caps.max_terms,
                estimate: terms,
            });
        }
        Ok(())
    }

    pub fn check_time(&self) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(Error::ResourceCap {
                    resource: "wall clock seconds",
                    limit: self.caps.wall_clock_secs.unwrap_or(0),
                    estimate: self.caps.wall_clock_secs.unwrap_or(0) + 1,
                });
            }
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Caps::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_cap() {
        let b = Budget::new(Caps {
            max_generators: 4,
            ..Caps::default()
        });
        assert!(b.check_generators(4).is_ok());
        assert!(b.check_generators(5).unwrap_err().is_resource_cap());
    }

    #[test]
    fn term_cap() {
        let b = Budget::new(Caps {
            max_terms: 10,
            ..Caps::default()
        });
        assert!(b.check_terms(10).is_ok());
        assert!(b.check_terms(11).is_err());
    }

    #[test]
    fn zero_deadline_trips() {
        let b = Budget::new(Caps {
            wall_clock_secs: Some(0),
            ..Caps::default()
        });
        std::thread::sleep(Duration::from_millis(5));
        assert!(b.check_time().is_err());
    }
}

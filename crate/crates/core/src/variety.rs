use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

/// The threefold `X = P(O(a0) + O(a1))` over the projective plane.
///
/// Only the smooth, ample case `0 < a0 <= a1` is representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct Variety {
    a0: i64,
    a1: i64,
}

impl Variety {
    pub fn new(a0: i64, a1: i64) -> Result<Self> {
        if a0 < 1 || a1 < a0 {
            return Err(EngineError::InvalidVariety { a0, a1 });
        }
        Ok(Variety { a0, a1 })
    }

    pub fn a0(&self) -> i64 {
        self.a0
    }

    pub fn a1(&self) -> i64 {
        self.a1
    }

    /// `c = a0 + a1`.
    pub fn c(&self) -> i64 {
        self.a0 + self.a1
    }

    /// `a0 * a1`, the constant term of the quadratic Chow relation.
    pub fn product(&self) -> i64 {
        self.a0 * self.a1
    }

    /// `H^3 = c^2 - a0 a1`.
    pub fn degree(&self) -> i64 {
        self.c() * self.c() - self.product()
    }

    /// `(a, b)` with `omega_X = O(a H + b F)`.
    pub fn canonical_twist(&self) -> (i64, i64) {
        (-2, self.c() - 3)
    }

    /// All varieties with `1 <= a0 <= a1 <= max`.
    pub fn all_up_to(max: i64) -> Vec<Variety> {
        let mut out = Vec::new();
        for a0 in 1..=max {
            for a1 in a0..=max {
                out.push(Variety { a0, a1 });
            }
        }
        out
    }
}

impl TryFrom<(i64, i64)> for Variety {
    type Error = EngineError;

    fn try_from((a0, a1): (i64, i64)) -> Result<Self> {
        Variety::new(a0, a1)
    }
}

impl From<Variety> for (i64, i64) {
    fn from(v: Variety) -> Self {
        (v.a0, v.a1)
    }
}

impl std::fmt::Display for Variety {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.a0, self.a1)
    }
}

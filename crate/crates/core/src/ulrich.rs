//! Ulrich and regularity predicates on `X`, polarized by `O_X(1, 0)`.
//!
//! The working definition is: `H^i(E(-t, 0)) = 0` for all `i` and `t = 1, 2, 3`.
//! The count `h0(E) = deg(X) rank(E)` and initializedness are then forced and are
//! checked as internal consistency.

pub mod vanishing;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::p2::P2Expr;
use crate::threefold::SheafExpr;
use crate::variety::Variety;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UlrichVerdict {
    pub is_initialized: bool,
    pub vanishing_ok: bool,
    pub h0: u64,
    pub expected_h0: u64,
    pub is_ulrich: bool,
}

/// `h0(E(-1, 0)) = 0` and `h0(E) != 0`.
pub fn is_initialized(s: &SheafExpr, variety: &Variety) -> Result<bool> {
    Ok(s.twist(-1, 0).cohomology(variety)?.h(0) == 0 && s.cohomology(variety)?.h(0) != 0)
}

fn expected_h0(s: &SheafExpr, variety: &Variety) -> Result<u64> {
    (variety.degree() as u64)
        .checked_mul(s.rank())
        .ok_or(EngineError::Overflow("deg * rank"))
}

pub fn is_ulrich(s: &SheafExpr, variety: &Variety) -> Result<UlrichVerdict> {
    let first = s.twist(-1, 0).cohomology(variety)?;
    let mut vanishing_ok = !s.is_zero() && first.is_zero();
    for t in 2..=3 {
        if !vanishing_ok {
            break;
        }
        vanishing_ok = s.twist(-t, 0).cohomology(variety)?.is_zero();
    }
    let h0 = s.cohomology(variety)?.h(0);
    let expected = expected_h0(s, variety)?;
    let initialized = first.h(0) == 0 && h0 != 0;
    if vanishing_ok && (h0 != expected || !initialized) {
        return Err(EngineError::InconsistentUlrich { h0, expected });
    }
    Ok(UlrichVerdict {
        is_initialized: initialized,
        vanishing_ok,
        h0,
        expected_h0: expected,
        is_ulrich: vanishing_ok,
    })
}

/// `H^i(E(-i)) = 0` for `i > 0` and `H^i(E(-i-1)) = 0` for `i < 3`.
pub fn satisfies_diagonal_vanishing(s: &SheafExpr, variety: &Variety) -> Result<bool> {
    for i in 1..=3usize {
        if s.twist(-(i as i64), 0).cohomology(variety)?.h(i) != 0 {
            return Ok(false);
        }
    }
    for i in 0..3usize {
        if s.twist(-(i as i64) - 1, 0).cohomology(variety)?.h(i) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `E^* (x) O(2, c-3)`; Ulrich exactly when `E` is.
pub fn ulrich_dual(s: &SheafExpr, variety: &Variety) -> SheafExpr {
    s.dual().twist(2, variety.c() - 3)
}

/// The five vanishings defining `(p,q)`-regularity.
pub fn is_pq_regular(s: &SheafExpr, variety: &Variety, p: i64, q: i64) -> Result<bool> {
    let c = variety.c();
    let f = s.twist(p, q);
    let checks: [(i64, i64, usize); 5] = [
        (-1, c - 1, 1),
        (-1, c - 2, 2),
        (-1, c - 3, 3),
        (0, -1, 1),
        (0, -2, 2),
    ];
    for (da, db, i) in checks {
        if f.twist(da, db).cohomology(variety)?.h(i) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a windowed regularity search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regularity {
    /// Least `p` in the window with `(p, 0)`-regularity, strictly above the floor.
    Least { p: i64 },
    /// Nothing certified. `unbounded_below` is set when the sheaf is already
    /// regular at the window floor, so the true regularity may be `-infinity`.
    NotFound {
        lower_bound: i64,
        unbounded_below: bool,
    },
}

pub fn regularity(s: &SheafExpr, variety: &Variety, window: i64) -> Result<Regularity> {
    let window = window.max(1);
    for p in -window..=window {
        if is_pq_regular(s, variety, p, 0)? {
            if p == -window {
                return Ok(Regularity::NotFound {
                    lower_bound: p,
                    unbounded_below: true,
                });
            }
            return Ok(Regularity::Least { p });
        }
    }
    Ok(Regularity::NotFound {
        lower_bound: -window,
        unbounded_below: false,
    })
}

/// Ulrich on the Veronese surface `(P^2, d H)`.
pub fn is_ulrich_veronese(g: &P2Expr, d: i64) -> Result<bool> {
    if g.is_zero() || d < 1 {
        return Ok(false);
    }
    let once = g.twist(-d).cohomology()?;
    let twice = g.twist(-2 * d).cohomology()?;
    if !once.is_zero() || !twice.is_zero() {
        return Ok(false);
    }
    let h0 = g.cohomology()?.0[0];
    Ok(h0 == (d * d) as u64 * g.rank())
}

//! Cohomological vanishing ranges satisfied by Ulrich bundles, as data.
//!
//! Each [`VanishingRule`] says `H^degree(E (x) W (-k, t)) = 0` for all `t` inside a
//! half-line (or outside a gap), with `W` either `O` or `Omega_pi`. Two rule sets
//! are provided: the general ranges ([`general_rules`]) and the sharper rational
//! bounds on the extreme degrees ([`sharpened_rules`]). Bounds are compared as
//! exact rationals.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::threefold::{Atom, SheafExpr};
use crate::variety::Variety;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Set of `t` on which a vanishing is asserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    AtLeast(BigRational),
    AtMost(BigRational),
    /// `t <= at_most` or `t >= at_least`; the gap in between is not asserted.
    Outside {
        at_most: BigRational,
        at_least: BigRational,
    },
}

impl Bound {
    pub fn contains(&self, t: i64) -> bool {
        let t = q(t);
        match self {
            Bound::AtLeast(x) => t >= *x,
            Bound::AtMost(x) => t <= *x,
            Bound::Outside { at_most, at_least } => t <= *at_most || t >= *at_least,
        }
    }
}

impl Bound {
    /// `t` sits exactly on a finite endpoint of the asserted set.
    pub fn is_endpoint(&self, t: i64) -> bool {
        let t = q(t);
        match self {
            Bound::AtLeast(x) | Bound::AtMost(x) => t == *x,
            Bound::Outside { at_most, at_least } => t == *at_most || t == *at_least,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtLeast(x) => write!(f, "t >= {x}"),
            Bound::AtMost(x) => write!(f, "t <= {x}"),
            Bound::Outside { at_most, at_least } => write!(f, "t <= {at_most} or t >= {at_least}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingRule {
    pub label: String,
    pub degree: usize,
    pub with_omega: bool,
    /// `k` in the twist `(-k, t)`.
    pub k: i64,
    pub bound: Bound,
}

impl VanishingRule {
    fn new(
        label: impl Into<String>,
        degree: usize,
        with_omega: bool,
        k: i64,
        bound: Bound,
    ) -> Self {
        VanishingRule {
            label: label.into(),
            degree,
            with_omega,
            k,
            bound,
        }
    }
}

impl fmt::Display for VanishingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = if self.with_omega { " (x) Om" } else { "" };
        write!(
            f,
            "[{}] H^{}(E{w}(-{}, t)) = 0 for {}",
            self.label, self.degree, self.k, self.bound
        )
    }
}

/// A twist at which a rule that should hold does not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingFailure {
    pub rule: String,
    pub t: i64,
    pub dimension: u64,
}

impl VanishingFailure {
    /// Whether the failing `t` equals the rule's bound, i.e. the strict version still holds.
    pub fn on_boundary(&self, rules: &[VanishingRule]) -> bool {
        rules
            .iter()
            .find(|r| r.label == self.rule)
            .is_some_and(|r| r.bound.is_endpoint(self.t))
    }
}

/// Vanishing ranges for `E` and `E (x) Om` in degrees 3, 2, 1, 0.
pub fn general_rules(variety: &Variety) -> Vec<VanishingRule> {
    use Bound::*;
    let a0 = variety.a0();
    let c = variety.c();
    let mut rules = Vec::new();
    for k in 0..=3 {
        rules.push(VanishingRule::new(
            format!("a.1 k={k}"),
            3,
            false,
            k,
            AtLeast(q((k - 3) * a0)),
        ));
        rules.push(VanishingRule::new(
            format!("a.2 k={k}"),
            3,
            true,
            k,
            AtLeast(q(2 + (k - 3) * a0)),
        ));
    }
    for k in 0..=2 {
        rules.push(VanishingRule::new(
            format!("b.1 k={k}"),
            2,
            false,
            k,
            AtLeast(q((k - 2) * a0)),
        ));
        rules.push(VanishingRule::new(
            format!("b.2 k={k}"),
            2,
            true,
            k,
            AtLeast(q(2 + (k - 2) * a0)),
        ));
    }
    rules.push(VanishingRule::new(
        "b.3",
        2,
        false,
        3,
        Outside {
            at_most: q(0),
            at_least: q(c),
        },
    ));
    rules.push(VanishingRule::new(
        "b.4",
        2,
        true,
        3,
        Outside {
            at_most: q(1),
            at_least: q(2 + c),
        },
    ));
    for k in 1..=3 {
        if k != 3 {
            rules.push(VanishingRule::new(
                format!("c.1 k={k}"),
                1,
                false,
                k,
                AtMost(q((k - 2) * c)),
            ));
        }
        if k != 1 {
            rules.push(VanishingRule::new(
                format!("c.3 k={k}"),
                1,
                true,
                k,
                AtMost(q((k - 2) * a0 + 1)),
            ));
        }
    }
    rules.push(VanishingRule::new("c.2", 1, false, 3, AtMost(q(a0))));
    for k in 0..=1 {
        rules.push(VanishingRule::new(
            format!("c.4 k={k}"),
            1,
            false,
            k,
            AtLeast(q((k - 1) * a0)),
        ));
        rules.push(VanishingRule::new(
            format!("c.5 k={k}"),
            1,
            true,
            k,
            AtLeast(q(2 + (k - 1) * a0)),
        ));
    }
    for k in 1..=4 {
        rules.push(VanishingRule::new(
            format!("d.1 k={k}"),
            0,
            false,
            k,
            AtMost(q((k - 1) * a0)),
        ));
        rules.push(VanishingRule::new(
            format!("d.2 k={k}"),
            0,
            true,
            k,
            AtMost(q(1 + (k - 1) * a0)),
        ));
    }
    rules.push(VanishingRule::new("d.3", 0, true, 0, AtMost(q(1 - c))));
    rules
}

/// Sharper bounds for `H^0` and `H^3`, with the case split on
/// `2 a0 a1 <= a1^2 - a0^2 + 3c`.
pub fn sharpened_rules(variety: &Variety) -> Vec<VanishingRule> {
    use Bound::*;
    let a0 = variety.a0();
    let a1 = variety.a1();
    let c = variety.c();
    let p = variety.product();
    let small = 2 * p <= a1 * a1 - a0 * a0 + 3 * c;
    let one = q(1);
    let two = q(2);
    let mut rules = Vec::new();

    for k in 3..=4 {
        let b = frac(((2 * k - 3) * c + 3) * c - 2 * (k - 1) * p, 2 * c);
        rules.push(VanishingRule::new(
            format!("h0 k={k}"),
            0,
            false,
            k,
            AtMost(b.clone()),
        ));
        rules.push(VanishingRule::new(
            format!("h0 Om k={k}"),
            0,
            true,
            k,
            AtMost(b + &one),
        ));
    }
    let b2 = if small {
        frac(c * (c + 3) - 2 * p, 2 * c)
    } else {
        q(a0)
    };
    rules.push(VanishingRule::new(
        "h0 k=2",
        0,
        false,
        2,
        AtMost(b2.clone()),
    ));
    rules.push(VanishingRule::new(
        "h0 Om k=2",
        0,
        true,
        2,
        AtMost(b2 + &one),
    ));
    rules.push(VanishingRule::new("h0 k=1", 0, false, 1, AtMost(q(0))));
    rules.push(VanishingRule::new("h0 Om k=1", 0, true, 1, AtMost(q(1))));

    for k in 0..=1 {
        let b = frac(2 * (3 - k) * p - ((5 - 2 * k) * c + 3) * c, 2 * c);
        rules.push(VanishingRule::new(
            format!("h3 k={k}"),
            3,
            false,
            k,
            AtLeast(b.clone()),
        ));
        rules.push(VanishingRule::new(
            format!("h3 Om k={k}"),
            3,
            true,
            k,
            AtLeast(b + &two),
        ));
    }
    let b2 = if small {
        frac(2 * p - c * (c + 3), 2 * c)
    } else {
        q(-a0)
    };
    rules.push(VanishingRule::new(
        "h3 k=2",
        3,
        false,
        2,
        AtLeast(b2.clone()),
    ));
    rules.push(VanishingRule::new(
        "h3 Om k=2",
        3,
        true,
        2,
        AtLeast(b2 + &two),
    ));
    rules.push(VanishingRule::new("h3 k=3", 3, false, 3, AtLeast(q(0))));
    rules.push(VanishingRule::new("h3 Om k=3", 3, true, 3, AtLeast(q(2))));
    rules
}

/// `[-3c - 6, 3c + 6]`.
pub fn default_sweep(variety: &Variety) -> RangeInclusive<i64> {
    let c = variety.c();
    -3 * c - 6..=3 * c + 6
}

/// Evaluate every rule at every `t` in `ts` where it applies.
pub fn sweep(
    e: &SheafExpr,
    variety: &Variety,
    rules: &[VanishingRule],
    ts: RangeInclusive<i64>,
) -> Result<Vec<VanishingFailure>> {
    let with_omega = e.tensor(&SheafExpr::atom(Atom::om(0, 0)))?;
    let mut failures = Vec::new();
    for rule in rules {
        let base = if rule.with_omega { &with_omega } else { e };
        for t in ts.clone() {
            if !rule.bound.contains(t) {
                continue;
            }
            let dim = base.twist(-rule.k, t).cohomology(variety)?.h(rule.degree);
            if dim != 0 {
                failures.push(VanishingFailure {
                    rule: rule.label.clone(),
                    t,
                    dimension: dim,
                });
            }
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a0: i64, a1: i64) -> Variety {
        Variety::new(a0, a1).unwrap()
    }

    #[test]
    fn bounds_compare_exactly() {
        let b = Bound::AtMost(frac(14, 3));
        assert!(b.contains(4));
        assert!(!b.contains(5));
        let gap = Bound::Outside {
            at_most: q(0),
            at_least: q(3),
        };
        assert!(gap.contains(0) && gap.contains(3) && !gap.contains(1) && !gap.contains(2));
    }

    #[test]
    fn sharpened_h0_bound_for_c_three() {
        // on (1,2) the k = 3 bound is 28/6, so h0(E(-3, t)) = 0 for t <= 4
        let rules = sharpened_rules(&v(1, 2));
        let r = rules.iter().find(|r| r.label == "h0 k=3").unwrap();
        assert_eq!(r.bound, Bound::AtMost(frac(14, 3)));
    }

    #[test]
    fn line_bundles_against_both_rule_sets() {
        let var = v(1, 1);
        let ts = default_sweep(&var);
        for s in ["O(0,1)", "O(2,-2)"] {
            let e: SheafExpr = s.parse().unwrap();
            assert_eq!(
                sweep(&e, &var, &general_rules(&var), ts.clone()).unwrap(),
                vec![]
            );
        }
        // both k = 2 bounds are attained on (1,1): O(2,-2)(-2,2) is O_X and
        // O(0,1)(-2,-2) is the canonical sheaf
        let e: SheafExpr = "O(2,-2)".parse().unwrap();
        assert_eq!(
            sweep(&e, &var, &sharpened_rules(&var), ts.clone()).unwrap(),
            vec![VanishingFailure {
                rule: "h0 k=2".into(),
                t: 2,
                dimension: 1
            }]
        );
        let e: SheafExpr = "O(0,1)".parse().unwrap();
        assert_eq!(
            sweep(&e, &var, &sharpened_rules(&var), ts).unwrap(),
            vec![VanishingFailure {
                rule: "h3 k=2".into(),
                t: -2,
                dimension: 1
            }]
        );
    }

    #[test]
    fn first_h1_failure_sits_just_past_a0() {
        let e: SheafExpr = "O(0,1)".parse().unwrap();
        let var = v(1, 1);
        assert_eq!(e.twist(-3, 2).cohomology(&var).unwrap().h(1), 2);
        assert_eq!(e.twist(-3, 1).cohomology(&var).unwrap().h(1), 0);
    }

    #[test]
    fn non_ulrich_input_is_caught() {
        let var = v(1, 1);
        let e: SheafExpr = "O(0,2)".parse().unwrap();
        let failures = sweep(&e, &var, &general_rules(&var), default_sweep(&var)).unwrap();
        assert!(!failures.is_empty());
    }
}

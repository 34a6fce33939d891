//! Exhaustive searches for Ulrich line bundles, twisted `Omega_pi` and twisted
//! pullbacks, compared against the closed-form criteria.
//!
//! Searches run in parallel; every list in a report is sorted, so output does
//! not depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::p2::{Kind, P2Expr, P2Sheaf};
use crate::threefold::{Atom, SheafExpr};
use crate::ulrich::{is_ulrich, is_ulrich_veronese, ulrich_dual};
use crate::variety::Variety;

/// Closed integer interval; empty when `min > max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntRange {
    pub min: i64,
    pub max: i64,
}

impl IntRange {
    pub fn new(min: i64, max: i64) -> Self {
        IntRange { min, max }
    }

    pub fn is_empty(&self) -> bool {
        self.min > self.max
    }

    pub fn contains(&self, x: i64) -> bool {
        self.min <= x && x <= self.max
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.min..=self.max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBox {
    pub a0: IntRange,
    pub a1: IntRange,
    pub a: IntRange,
    pub b: IntRange,
    #[serde(default = "default_rank_cap")]
    pub rank_cap: u64,
}

fn default_rank_cap() -> u64 {
    3
}

impl SearchBox {
    /// `1 <= a0 <= a1 <= max_a1`, `a` in `[-a_abs, a_abs]`, `b` in `[-b_abs, b_abs]`.
    pub fn standard(max_a1: i64, a_abs: i64, b_abs: i64) -> Self {
        SearchBox {
            a0: IntRange::new(1, max_a1),
            a1: IntRange::new(1, max_a1),
            a: IntRange::new(-a_abs, a_abs),
            b: IntRange::new(-b_abs, b_abs),
            rank_cap: 3,
        }
    }

    /// Valid varieties in the box (pairs with `a1 < a0` or `a0 < 1` are skipped).
    pub fn varieties(&self) -> Vec<Variety> {
        let mut out = Vec::new();
        for a0 in self.a0.iter() {
            for a1 in self.a1.iter() {
                if let Ok(v) = Variety::new(a0, a1) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &Variety, a: i64, b: i64) -> bool {
        self.a0.contains(v.a0())
            && self.a1.contains(v.a1())
            && self.a.contains(a)
            && self.b.contains(b)
    }

    fn tuples(&self) -> Vec<(Variety, i64, i64)> {
        let mut out = Vec::new();
        for v in self.varieties() {
            for a in self.a.iter() {
                for b in self.b.iter() {
                    out.push((v, a, b));
                }
            }
        }
        out
    }
}

/// One parameter tuple of a search, with the sheaf it names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Hit {
    pub variety: Variety,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<P2Expr>,
    pub a: i64,
    pub b: i64,
    pub sheaf: SheafExpr,
}

impl Hit {
    /// `(a0, a1, a, b)`.
    pub fn tuple(&self) -> (i64, i64, i64, i64) {
        (self.variety.a0(), self.variety.a1(), self.a, self.b)
    }
}

/// A tuple where the direct check and the criterion disagree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub hit: Hit,
    pub direct: bool,
    pub predicted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub checked: usize,
    pub hits: Vec<Hit>,
    pub predicted: Vec<Hit>,
    pub agreement: bool,
    pub counterexamples: Vec<Counterexample>,
    /// Every hit whose Ulrich dual has parameters in the box has its dual among the hits.
    pub dual_closed: bool,
    /// Nothing was searched.
    pub vacuous: bool,
}

impl ClassificationReport {
    fn assemble(checked: usize, mut rows: Vec<(Hit, bool, bool)>, dual_closed: bool) -> Self {
        rows.sort();
        let hits: Vec<Hit> = rows.iter().filter(|r| r.1).map(|r| r.0.clone()).collect();
        let predicted: Vec<Hit> = rows.iter().filter(|r| r.2).map(|r| r.0.clone()).collect();
        let counterexamples: Vec<Counterexample> = rows
            .into_iter()
            .filter(|r| r.1 != r.2)
            .map(|(hit, direct, predicted)| Counterexample {
                hit,
                direct,
                predicted,
            })
            .collect();
        ClassificationReport {
            checked,
            agreement: counterexamples.is_empty(),
            hits,
            predicted,
            counterexamples,
            dual_closed,
            vacuous: checked == 0,
        }
    }

    pub fn hit_tuples(&self) -> Vec<(i64, i64, i64, i64)> {
        self.hits.iter().map(Hit::tuple).collect()
    }
}

/// Search single atoms `kind(a, b)` over the box and compare with `predicted`.
fn search_atoms(
    search: &SearchBox,
    kind: Kind,
    predicted: &[(i64, i64, i64, i64)],
) -> Result<ClassificationReport> {
    let tuples = search.tuples();
    let mut rows: Vec<(Hit, bool, bool)> = tuples
        .par_iter()
        .map(|&(variety, a, b)| -> Result<Option<(Hit, bool, bool)>> {
            let sheaf = SheafExpr::atom(Atom::new(kind, a, b));
            let direct = is_ulrich(&sheaf, &variety)?.is_ulrich;
            let expected = predicted.contains(&(variety.a0(), variety.a1(), a, b));
            if !direct && !expected {
                return Ok(None);
            }
            Ok(Some((
                Hit {
                    variety,
                    g: None,
                    a,
                    b,
                    sheaf,
                },
                direct,
                expected,
            )))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rows.sort();

    let hits: Vec<&Hit> = rows.iter().filter(|r| r.1).map(|r| &r.0).collect();
    let mut dual_closed = true;
    for hit in &hits {
        let dual = ulrich_dual(&hit.sheaf, &hit.variety);
        let atom = *dual.atoms().next().expect("dual of an atom is an atom");
        if search.contains(&hit.variety, atom.a, atom.b)
            && !hits
                .iter()
                .any(|h| h.variety == hit.variety && h.sheaf == dual)
        {
            dual_closed = false;
        }
    }
    Ok(ClassificationReport::assemble(
        tuples.len(),
        rows,
        dual_closed,
    ))
}

/// Line bundles `O(a, b)`; the criterion predicts exactly `(1,1,0,1)` and `(1,1,2,-2)`.
pub fn search_line_bundles(search: &SearchBox) -> Result<ClassificationReport> {
    search_atoms(search, Kind::O, &[(1, 1, 0, 1), (1, 1, 2, -2)])
}

/// Twisted `Omega_pi(a, b)`; predicted `(2,2,0,5)`, `(1,1,1,1)`, `(2,2,2,-1)`.
pub fn search_omega_twists(search: &SearchBox) -> Result<ClassificationReport> {
    search_atoms(
        search,
        Kind::Omega,
        &[(2, 2, 0, 5), (1, 1, 1, 1), (2, 2, 2, -1)],
    )
}

/// `pi^* g (x) O(a, b)`.
pub fn pullback(g: &P2Expr, a: i64, b: i64) -> SheafExpr {
    SheafExpr::from_terms(g.terms().map(|(s, m)| (Atom::new(s.kind, a, s.d + b), *m)))
}

/// The criterion for `pi^* g (x) O(a, b)` to be Ulrich, with the twist of `g`
/// folded into the Veronese test:
/// `a = 0, a0 = a1` and `g(b - c + a0)` Ulrich on `(P^2, a0 H)`;
/// `a = 1` and `g(b + c)` Ulrich on `(P^2, c H)`;
/// `a = 2, a0 = a1` and `g(b + 2 a0)` Ulrich on `(P^2, a0 H)`.
pub fn pullback_criterion(g: &P2Expr, variety: &Variety, a: i64, b: i64) -> Result<bool> {
    let (a0, c) = (variety.a0(), variety.c());
    let square = variety.a0() == variety.a1();
    match a {
        0 if square => is_ulrich_veronese(&g.twist(b - c + a0), a0),
        1 => is_ulrich_veronese(&g.twist(b + c), c),
        2 if square => is_ulrich_veronese(&g.twist(b + 2 * a0), a0),
        _ => Ok(false),
    }
}

/// `O(d)` and `Omega(d)` for `|d| <= max_abs`, and their direct sums of rank at most `rank_cap`.
pub fn default_g_family(max_abs: i64, rank_cap: u64) -> Vec<P2Expr> {
    let atoms: Vec<P2Sheaf> = [Kind::O, Kind::Omega]
        .into_iter()
        .flat_map(|k| (-max_abs..=max_abs).map(move |d| P2Sheaf::new(k, d)))
        .collect();
    let mut out: Vec<P2Expr> = Vec::new();
    // multisets of atoms, built in nondecreasing index order
    fn extend(
        atoms: &[P2Sheaf],
        start: usize,
        current: &mut Vec<P2Sheaf>,
        rank: u64,
        cap: u64,
        out: &mut Vec<P2Expr>,
    ) {
        for i in start..atoms.len() {
            let r = rank + atoms[i].rank();
            if r > cap {
                continue;
            }
            current.push(atoms[i]);
            out.push(P2Expr::from_terms(current.iter().map(|s| (*s, 1))));
            extend(atoms, i, current, r, cap, out);
            current.pop();
        }
    }
    extend(&atoms, 0, &mut Vec::new(), 0, rank_cap, &mut out);
    out.sort();
    out
}

/// Compare direct Ulrich checks on every `pi^* g (x) O(a, b)` with [`pullback_criterion`].
pub fn classify_pullbacks(
    variety: &Variety,
    g_family: &[P2Expr],
    a_range: IntRange,
    b_range: IntRange,
) -> Result<ClassificationReport> {
    let jobs: Vec<(&P2Expr, i64, i64)> = g_family
        .iter()
        .flat_map(|g| {
            a_range
                .iter()
                .flat_map(move |a| b_range.iter().map(move |b| (g, a, b)))
        })
        .collect();
    let rows: Vec<(Hit, bool, bool)> = jobs
        .par_iter()
        .map(|&(g, a, b)| -> Result<Option<(Hit, bool, bool)>> {
            let sheaf = pullback(g, a, b);
            let direct = is_ulrich(&sheaf, variety)?.is_ulrich;
            let expected = pullback_criterion(g, variety, a, b)?;
            if !direct && !expected {
                return Ok(None);
            }
            let hit = Hit {
                variety: *variety,
                g: Some(g.clone()),
                a,
                b,
                sheaf,
            };
            Ok(Some((hit, direct, expected)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut hits: Vec<&SheafExpr> = rows.iter().filter(|r| r.1).map(|r| &r.0.sheaf).collect();
    hits.sort();
    hits.dedup();
    // a dual of a pullback is a pullback; only demand it when it is nameable in the family
    let mut dual_closed = true;
    for s in &hits {
        let dual = ulrich_dual(s, variety);
        let nameable = jobs.iter().any(|&(g, a, b)| pullback(g, a, b) == dual);
        if nameable && hits.binary_search(&&dual).is_err() {
            dual_closed = false;
        }
    }
    Ok(ClassificationReport::assemble(
        jobs.len(),
        rows,
        dual_closed,
    ))
}

/// A witness Ulrich bundle per variety, if the family contains one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WildnessEvidence {
    pub variety: Variety,
    pub witness: Option<Hit>,
}

/// For each variety, the first Ulrich pullback from `g_family` with `a` in `{0, 1, 2}`.
pub fn wildness_evidence(
    varieties: &[Variety],
    g_family: &[P2Expr],
    b_range: IntRange,
) -> Result<Vec<WildnessEvidence>> {
    varieties
        .par_iter()
        .map(|v| {
            let report = classify_pullbacks(v, g_family, IntRange::new(0, 2), b_range)?;
            Ok(WildnessEvidence {
                variety: *v,
                witness: report.hits.into_iter().next(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a0: i64, a1: i64) -> Variety {
        Variety::new(a0, a1).unwrap()
    }

    #[test]
    fn line_bundles_small_box() {
        let r = search_line_bundles(&SearchBox::standard(3, 3, 9)).unwrap();
        assert_eq!(r.hit_tuples(), vec![(1, 1, 0, 1), (1, 1, 2, -2)]);
        assert!(r.agreement && r.dual_closed && !r.vacuous);
    }

    #[test]
    fn line_bundles_away_from_the_quadric_scroll() {
        let mut sb = SearchBox::standard(3, 3, 9);
        sb.a1 = IntRange::new(2, 3);
        let r = search_line_bundles(&sb).unwrap();
        assert!(r.hits.is_empty() && r.agreement);
    }

    #[test]
    fn degenerate_box() {
        let sb = SearchBox {
            a0: IntRange::new(1, 1),
            a1: IntRange::new(1, 1),
            a: IntRange::new(0, 0),
            b: IntRange::new(0, 0),
            rank_cap: 1,
        };
        let r = search_line_bundles(&sb).unwrap();
        assert!(r.hits.is_empty() && r.agreement && r.checked == 1);
        let empty = SearchBox {
            b: IntRange::new(1, 0),
            ..sb
        };
        assert!(search_line_bundles(&empty).unwrap().vacuous);
    }

    #[test]
    fn omega_twists_small_box() {
        let r = search_omega_twists(&SearchBox::standard(3, 3, 9)).unwrap();
        assert_eq!(
            r.hit_tuples(),
            vec![(1, 1, 1, 1), (2, 2, 0, 5), (2, 2, 2, -1)]
        );
        assert!(r.agreement && r.dual_closed);
    }

    #[test]
    fn pullbacks_of_cotangent_on_2_2() {
        let g = P2Expr::single(P2Sheaf::new(Kind::Omega, 3));
        let r = classify_pullbacks(&v(2, 2), &[g], IntRange::new(-3, 3), IntRange::new(-12, 12))
            .unwrap();
        let ab: Vec<(i64, i64)> = r.hits.iter().map(|h| (h.a, h.b)).collect();
        assert_eq!(ab, vec![(0, 2), (2, -4)]);
        assert!(r.agreement);
    }

    #[test]
    fn pullbacks_of_trivial_on_1_1() {
        let g = P2Expr::single(P2Sheaf::new(Kind::O, 0));
        let r = classify_pullbacks(&v(1, 1), &[g], IntRange::new(-3, 3), IntRange::new(-12, 12))
            .unwrap();
        let ab: Vec<(i64, i64)> = r.hits.iter().map(|h| (h.a, h.b)).collect();
        assert_eq!(ab, vec![(0, 1), (2, -2)]);
        assert!(r.agreement && r.dual_closed);
    }

    #[test]
    fn no_rank_one_ulrich_on_1_2() {
        let family: Vec<P2Expr> = (-6..=6)
            .map(|d| P2Expr::single(P2Sheaf::new(Kind::O, d)))
            .collect();
        let r = classify_pullbacks(
            &v(1, 2),
            &family,
            IntRange::new(-3, 3),
            IntRange::new(-12, 12),
        )
        .unwrap();
        assert!(r.hits.is_empty() && r.agreement);
        for d in -6..=6 {
            assert!(!is_ulrich_veronese(&P2Expr::single(P2Sheaf::new(Kind::O, d)), 3).unwrap());
        }
    }

    #[test]
    fn rank_three_witness_on_1_2() {
        // Sym^2 Omega(6) is Ulrich on (P^2, 3H), outside the default family
        let g = P2Expr::single(P2Sheaf::new(Kind::Sym2Omega, 6));
        let var = v(1, 2);
        let r =
            classify_pullbacks(&var, &[g], IntRange::new(-3, 3), IntRange::new(-12, 12)).unwrap();
        let ab: Vec<(i64, i64)> = r.hits.iter().map(|h| (h.a, h.b)).collect();
        assert_eq!(ab, vec![(1, -3)]);
        assert!(r.agreement);
        // its Beilinson data needs Sym^2 Omega (x) Omega, outside the tensor closure
        let e = &r.hits[0].sheaf;
        assert!(matches!(
            crate::beilinson::resolution_lowc(e, &var, &Default::default()),
            Err(crate::error::EngineError::UnsupportedTensor { .. })
        ));
    }

    #[test]
    fn witnesses_per_variety() {
        let fam = default_g_family(6, 3);
        let ev = wildness_evidence(&Variety::all_up_to(3), &fam, IntRange::new(-12, 12)).unwrap();
        let with: Vec<Variety> = ev
            .iter()
            .filter(|w| w.witness.is_some())
            .map(|w| w.variety)
            .collect();
        assert_eq!(with, vec![v(1, 1), v(2, 2)]);
    }

    #[test]
    fn family_shape() {
        let fam = default_g_family(6, 3);
        // 26 atoms, 91 + 169 pairs of rank <= 3, 455 triples of line bundles
        assert_eq!(fam.len(), 26 + 91 + 169 + 455);
        assert!(fam.iter().all(|g| g.rank() <= 3));
        assert_eq!(default_g_family(0, 1).len(), 1);
        assert_eq!(default_g_family(0, 2).len(), 3);
    }

    #[test]
    fn reports_are_deterministic() {
        let sb = SearchBox::standard(2, 2, 6);
        let a = serde_json::to_string(&search_omega_twists(&sb).unwrap()).unwrap();
        let b = serde_json::to_string(&search_omega_twists(&sb).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

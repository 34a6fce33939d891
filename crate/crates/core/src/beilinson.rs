//! Beilinson tables against the exceptional collection
//!
//! ```text
//! E5 = O(-1,c-2)[-2]  E4 = Om(-1,c)[-2]  E3 = O(-1,c-1)[-2]  E2 = O(0,-1)  E1 = Om(0,1)  E0 = O
//! F5 = O(-1,-1)       F4 = O(-1,0)       F3 = O(-1,1)        F2 = O(0,-2) F1 = O(0,-1) F0 = O
//! ```
//!
//! Cell `(q, j)` of a table holds `h^{q + k_j}(E (x) E_j)`, and contributes
//! `F_j` to the Beilinson complex in degree `q - j`. Only dimensions are produced;
//! exactness is certified through rank, Chern character and Euler characteristics
//! on a box of twists.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::chow::{ChowClass, ChowRing};
use crate::error::{EngineError, Result};
use crate::threefold::{Atom, SheafExpr};
use crate::ulrich::is_ulrich;
use crate::variety::Variety;

pub const SIZE: usize = 6;

/// Rectangle of twists `(a, b)` used for Euler-characteristic checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistBox {
    pub a_min: i64,
    pub a_max: i64,
    pub b_min: i64,
    pub b_max: i64,
}

impl TwistBox {
    pub fn square(r: i64) -> Self {
        TwistBox {
            a_min: -r,
            a_max: r,
            b_min: -r,
            b_max: r,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.a_min..=self.a_max).flat_map(move |a| (self.b_min..=self.b_max).map(move |b| (a, b)))
    }
}

impl Default for TwistBox {
    fn default() -> Self {
        TwistBox::square(4)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollectionMember {
    pub index: usize,
    pub exceptional: SheafExpr,
    pub shift: i64,
    pub dual: SheafExpr,
}

pub fn collection(variety: &Variety) -> Vec<CollectionMember> {
    let c = variety.c();
    let rows = [
        (Atom::o(0, 0), 0, Atom::o(0, 0)),
        (Atom::om(0, 1), 0, Atom::o(0, -1)),
        (Atom::o(0, -1), 0, Atom::o(0, -2)),
        (Atom::o(-1, c - 1), -2, Atom::o(-1, 1)),
        (Atom::om(-1, c), -2, Atom::o(-1, 0)),
        (Atom::o(-1, c - 2), -2, Atom::o(-1, -1)),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(index, (e, shift, f))| CollectionMember {
            index,
            exceptional: SheafExpr::atom(e),
            shift,
            dual: SheafExpr::atom(f),
        })
        .collect()
}

/// A `(i, j, k)` where the pairing `h^{k + k_i}(E_i (x) F_j)` differs from `[i = j = k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrthogonalityDefect {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub dimension: u64,
}

/// Check the pairing between the two collections for every `i, j` and `k` in `0..=5`.
pub fn orthogonality_defects(variety: &Variety) -> Result<Vec<OrthogonalityDefect>> {
    let members = collection(variety);
    let mut defects = Vec::new();
    for ei in &members {
        for fj in &members {
            let h = ei.exceptional.tensor(&fj.dual)?.cohomology(variety)?;
            for k in 0..SIZE {
                let degree = k as i64 + ei.shift;
                let dim = if (0..=3).contains(&degree) {
                    h.h(degree as usize)
                } else {
                    0
                };
                let expected = u64::from(ei.index == fj.index && fj.index == k);
                if dim != expected {
                    defects.push(OrthogonalityDefect {
                        i: ei.index,
                        j: fj.index,
                        k,
                        dimension: dim,
                    });
                }
            }
        }
    }
    Ok(defects)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeilinsonTable {
    pub variety: Variety,
    pub input: SheafExpr,
    /// `grid[q][j] = h^{q + k_j}(input (x) E_j)`.
    pub grid: [[u64; SIZE]; SIZE],
    pub members: Vec<CollectionMember>,
}

impl BeilinsonTable {
    pub fn entry(&self, q: usize, j: usize) -> u64 {
        self.grid[q][j]
    }

    /// Nonzero cells as `(q, j)`.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for q in 0..SIZE {
            for j in 0..SIZE {
                if self.grid[q][j] != 0 {
                    out.push((q, j));
                }
            }
        }
        out
    }

    /// Terms of the Beilinson complex keyed by cohomological degree `q - j`.
    pub fn complex(&self) -> BTreeMap<i64, SheafExpr> {
        let mut out: BTreeMap<i64, SheafExpr> = BTreeMap::new();
        for q in 0..SIZE {
            for (j, member) in self.members.iter().enumerate() {
                let m = self.grid[q][j];
                if m == 0 {
                    continue;
                }
                let slot = out.entry(q as i64 - j as i64).or_default();
                *slot = slot.plus(&member.dual.times(m));
            }
        }
        out
    }

    /// Alternating Chern character of the complex equals `ch(input)`. Holds for
    /// every coherent input, Ulrich or not.
    pub fn k_theory_ok(&self, ring: &ChowRing) -> bool {
        alternating_ch(ring, &self.complex()) == ring.chern_character(&self.input)
    }

    /// Markdown rendering in the usual layout: `F_j` header, rows `q = 5..0`,
    /// collection members as footer.
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let order: Vec<usize> = (0..SIZE).rev().collect();
        let header: Vec<String> = order
            .iter()
            .map(|&j| self.members[j].dual.to_string())
            .collect();
        let footer: Vec<String> = order
            .iter()
            .map(|&j| {
                let m = &self.members[j];
                if m.shift == 0 {
                    m.exceptional.to_string()
                } else {
                    format!("{}[{}]", m.exceptional, m.shift)
                }
            })
            .collect();
        let _ = writeln!(s, "| q | {} |", header.join(" | "));
        let _ = writeln!(s, "|---|{}", "---|".repeat(SIZE));
        for q in (0..SIZE).rev() {
            let cells: Vec<String> = order.iter().map(|&j| self.grid[q][j].to_string()).collect();
            let _ = writeln!(s, "| {q} | {} |", cells.join(" | "));
        }
        let _ = writeln!(s, "| E | {} |", footer.join(" | "));
        s
    }
}

pub fn beilinson_table(e: &SheafExpr, variety: &Variety) -> Result<BeilinsonTable> {
    let members = collection(variety);
    let mut grid = [[0u64; SIZE]; SIZE];
    for (j, member) in members.iter().enumerate() {
        let h = e.tensor(&member.exceptional)?.cohomology(variety)?;
        for (q, row) in grid.iter_mut().enumerate() {
            let degree = q as i64 + member.shift;
            if (0..=3).contains(&degree) {
                row[j] = h.h(degree as usize);
            }
        }
    }
    Ok(BeilinsonTable {
        variety: *variety,
        input: e.clone(),
        grid,
        members,
    })
}

fn alternating_ch(ring: &ChowRing, terms: &BTreeMap<i64, SheafExpr>) -> ChowClass {
    terms.iter().fold(ChowClass::zero(), |acc, (deg, s)| {
        let ch = ring.chern_character(s);
        if deg % 2 == 0 {
            &acc + &ch
        } else {
            &acc - &ch
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexShape {
    /// Four-term resolution from the table of `E`.
    Resolution,
    /// Three-term resolution from the table of `E(-1, 0)`, for `c <= 3`.
    LowC,
    /// Monad from the table of `E(-2, 0)`; `E` is its middle homology.
    Monad,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Multiplicity {
    pub label: String,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexTerm {
    pub position: i64,
    pub sheaf: SheafExpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexChecks {
    pub rank_ok: bool,
    pub ch_ok: bool,
    pub chi_grid_ok: bool,
    /// The Beilinson table has no nonzero cell outside the expected ones.
    pub pattern_ok: bool,
}

impl ComplexChecks {
    pub fn all(&self) -> bool {
        self.rank_ok && self.ch_ok && self.chi_grid_ok && self.pattern_ok
    }

    fn first_failure(&self) -> Option<&'static str> {
        [
            (self.pattern_ok, "table support"),
            (self.rank_ok, "rank identity"),
            (self.ch_ok, "Chern character identity"),
            (self.chi_grid_ok, "Euler characteristic grid"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    pub shape: ComplexShape,
    pub variety: Variety,
    pub input: SheafExpr,
    pub multiplicities: Vec<Multiplicity>,
    pub terms: Vec<ComplexTerm>,
    pub checks: ComplexChecks,
}

impl ResolutionReport {
    pub fn multiplicity_values(&self) -> Vec<u64> {
        self.multiplicities.iter().map(|m| m.value).collect()
    }

    pub fn term_map(&self) -> BTreeMap<i64, SheafExpr> {
        let mut out: BTreeMap<i64, SheafExpr> = BTreeMap::new();
        for t in &self.terms {
            let slot = out.entry(t.position).or_default();
            *slot = slot.plus(&t.sheaf);
        }
        out
    }
}

/// `h^i(E (x) W (j, k))` with `W = O` (an `a`-number) or `W = Om` (a `b`-number).
struct Numbers<'a> {
    e: &'a SheafExpr,
    e_om: SheafExpr,
    variety: &'a Variety,
}

impl<'a> Numbers<'a> {
    fn new(e: &'a SheafExpr, variety: &'a Variety) -> Result<Self> {
        Ok(Numbers {
            e,
            e_om: e.tensor(&SheafExpr::atom(Atom::om(0, 0)))?,
            variety,
        })
    }

    fn a(&self, i: usize, j: i64, k: i64) -> Result<Multiplicity> {
        Ok(Multiplicity {
            label: format!("a_{i}^{{{j},{k}}}"),
            value: self.e.twist(j, k).cohomology(self.variety)?.h(i),
        })
    }

    fn b(&self, i: usize, j: i64, k: i64) -> Result<Multiplicity> {
        Ok(Multiplicity {
            label: format!("b_{i}^{{{j},{k}}}"),
            value: self.e_om.twist(j, k).cohomology(self.variety)?.h(i),
        })
    }
}

/// Shape-specific data: multiplicities, which `F_j` (by twist) each feeds and
/// at what position, the twist applied to `E` before tabulating, and the
/// allowed table support.
struct Layout {
    shape: ComplexShape,
    pre_twist: i64,
    entries: Vec<(Multiplicity, (i64, i64), i64)>,
    allowed: Vec<(usize, usize)>,
}

fn layout(shape: ComplexShape, e: &SheafExpr, variety: &Variety) -> Result<Layout> {
    let n = Numbers::new(e, variety)?;
    let c = variety.c();
    Ok(match shape {
        ComplexShape::Resolution => Layout {
            shape,
            pre_twist: 0,
            entries: vec![
                (n.a(0, -1, c - 2)?, (-1, -1), -3),
                (n.b(0, -1, c)?, (-1, 0), -2),
                (n.a(0, 0, -1)?, (0, -2), -2),
                (n.a(0, -1, c - 1)?, (-1, 1), -1),
                (n.b(0, 0, 1)?, (0, -1), -1),
                (n.a(0, 0, 0)?, (0, 0), 0),
            ],
            allowed: vec![(2, 3), (2, 4), (2, 5), (0, 0), (0, 1), (0, 2)],
        },
        ComplexShape::LowC => Layout {
            shape,
            pre_twist: -1,
            entries: vec![
                (n.a(1, -2, c - 2)?, (-1, -1), -2),
                (n.b(1, -2, c)?, (-1, 0), -1),
                (n.a(1, -1, -1)?, (0, -2), -1),
                (n.a(1, -2, c - 1)?, (-1, 1), 0),
                (n.b(1, -1, 1)?, (0, -1), 0),
            ],
            allowed: vec![(3, 3), (3, 4), (3, 5), (1, 1), (1, 2)],
        },
        ComplexShape::Monad => Layout {
            shape,
            pre_twist: -2,
            entries: vec![
                (n.a(2, -3, c - 2)?, (-1, -1), -1),
                (n.b(2, -3, c)?, (-1, 0), 0),
                (n.a(2, -2, -1)?, (0, -2), 0),
                (n.a(2, -3, c - 1)?, (-1, 1), 1),
                (n.b(2, -2, 1)?, (0, -1), 1),
            ],
            allowed: vec![(4, 3), (4, 4), (4, 5), (2, 1), (2, 2)],
        },
    })
}

fn build(
    shape: ComplexShape,
    e: &SheafExpr,
    variety: &Variety,
    sample: &TwistBox,
) -> Result<ResolutionReport> {
    let lay = layout(shape, e, variety)?;
    let undo = -lay.pre_twist;
    let terms: Vec<ComplexTerm> = lay
        .entries
        .iter()
        .filter(|(m, _, _)| m.value > 0)
        .map(|(m, (fa, fb), pos)| ComplexTerm {
            position: *pos,
            sheaf: SheafExpr::atom(Atom::o(fa + undo, *fb)).times(m.value),
        })
        .collect();

    let ring = ChowRing::new(*variety);
    let mut report = ResolutionReport {
        shape: lay.shape,
        variety: *variety,
        input: e.clone(),
        multiplicities: lay.entries.iter().map(|(m, _, _)| m.clone()).collect(),
        terms,
        checks: ComplexChecks {
            rank_ok: false,
            ch_ok: false,
            chi_grid_ok: false,
            pattern_ok: false,
        },
    };
    let terms = report.term_map();

    let rank: i128 = terms
        .iter()
        .map(|(p, s)| {
            if p % 2 == 0 {
                s.rank() as i128
            } else {
                -(s.rank() as i128)
            }
        })
        .sum();
    report.checks.rank_ok = rank == e.rank() as i128;
    report.checks.ch_ok = alternating_ch(&ring, &terms) == ring.chern_character(e);

    let mut chi_ok = true;
    for (j, k) in sample.points() {
        let mut alt: i128 = 0;
        for (p, s) in &terms {
            let x = s.twist(j, k).chi(variety)?;
            alt += if p % 2 == 0 { x } else { -x };
        }
        if alt != e.twist(j, k).chi(variety)? {
            chi_ok = false;
            break;
        }
    }
    report.checks.chi_grid_ok = chi_ok;

    let table = beilinson_table(&e.twist(lay.pre_twist, 0), variety)?;
    let support_ok = table
        .support()
        .iter()
        .all(|cell| lay.allowed.contains(cell));
    let twisted_back: BTreeMap<i64, SheafExpr> = table
        .complex()
        .into_iter()
        .map(|(p, s)| (p, s.twist(undo, 0)))
        .collect();
    report.checks.pattern_ok = support_ok && twisted_back == terms;

    match report.checks.first_failure() {
        None => Ok(report),
        Some(which) => Err(EngineError::ConsistencyFailure(format!(
            "{which} for {e} on {variety} ({shape:?})"
        ))),
    }
}

fn require_ulrich(e: &SheafExpr, variety: &Variety) -> Result<()> {
    if is_ulrich(e, variety)?.is_ulrich {
        Ok(())
    } else {
        Err(EngineError::NotUlrich)
    }
}

/// Four-term resolution
/// `O(-1,-1)^. -> O(-1,0)^. + O(0,-2)^. -> O(-1,1)^. + O(0,-1)^. -> O^. -> E`.
pub fn resolution(e: &SheafExpr, variety: &Variety, sample: &TwistBox) -> Result<ResolutionReport> {
    require_ulrich(e, variety)?;
    build(ComplexShape::Resolution, e, variety, sample)
}

/// Three-term resolution
/// `O(0,-1)^. -> O^. + O(1,-2)^. -> O(0,1)^. + O(1,-1)^. -> E`, valid for `c <= 3`.
pub fn resolution_lowc(
    e: &SheafExpr,
    variety: &Variety,
    sample: &TwistBox,
) -> Result<ResolutionReport> {
    if variety.c() > 3 {
        return Err(EngineError::PreconditionFailed(format!(
            "c = {} > 3",
            variety.c()
        )));
    }
    require_ulrich(e, variety)?;
    build(ComplexShape::LowC, e, variety, sample)
}

/// Monad `O(1,-1)^. -> O(1,0)^. + O(2,-2)^. -> O(1,1)^. + O(2,-1)^.` with middle
/// homology `E`, when `a0 = a1` or `c = 3` and `h1(E(-3, c-1)) = 0`.
pub fn monad(e: &SheafExpr, variety: &Variety, sample: &TwistBox) -> Result<ResolutionReport> {
    if variety.a0() != variety.a1() && variety.c() != 3 {
        return Err(EngineError::PreconditionFailed(format!(
            "need a0 = a1 or c = 3, got {variety}"
        )));
    }
    require_ulrich(e, variety)?;
    let h1 = e.twist(-3, variety.c() - 1).cohomology(variety)?.h(1);
    if h1 != 0 {
        return Err(EngineError::PreconditionFailed(format!(
            "h1(E(-3, c-1)) = {h1} != 0"
        )));
    }
    build(ComplexShape::Monad, e, variety, sample)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a0: i64, a1: i64) -> Variety {
        Variety::new(a0, a1).unwrap()
    }

    fn e(s: &str) -> SheafExpr {
        s.parse().unwrap()
    }

    #[test]
    fn collection_is_dual_on_small_varieties() {
        for var in Variety::all_up_to(3) {
            assert_eq!(orthogonality_defects(&var).unwrap(), vec![], "{var}");
        }
    }

    #[test]
    fn table_for_o01() {
        let t = beilinson_table(&e("O(0,1)"), &v(1, 1)).unwrap();
        assert_eq!(t.support(), vec![(0, 0), (0, 1), (0, 2)]);
        assert_eq!((t.entry(0, 0), t.entry(0, 1), t.entry(0, 2)), (3, 3, 1));
    }

    #[test]
    fn table_for_o2m2() {
        let t = beilinson_table(&e("O(2,-2)"), &v(1, 1)).unwrap();
        assert_eq!(t.support(), vec![(0, 0), (2, 3)]);
        assert_eq!((t.entry(0, 0), t.entry(2, 3)), (3, 2));
    }

    #[test]
    fn resolution_examples() {
        let r = resolution(&e("O(0,1)"), &v(1, 1), &TwistBox::default()).unwrap();
        assert_eq!(r.multiplicity_values(), vec![0, 0, 1, 0, 3, 3]);
        // pullback of the Euler-type resolution of O(1) on the plane
        let expected: BTreeMap<i64, SheafExpr> =
            [(-2, e("O(0,-2)")), (-1, e("3*O(0,-1)")), (0, e("3*O(0,0)"))]
                .into_iter()
                .collect();
        assert_eq!(r.term_map(), expected);

        let r = resolution(&e("O(2,-2)"), &v(1, 1), &TwistBox::default()).unwrap();
        assert_eq!(r.multiplicity_values(), vec![0, 0, 0, 2, 0, 3]);
        assert!(r.checks.all());

        assert_eq!(
            resolution(&e("O(0,1)"), &v(1, 2), &TwistBox::default()),
            Err(EngineError::NotUlrich)
        );
    }

    #[test]
    fn lowc_and_monad_examples() {
        let var = v(1, 1);
        for s in ["O(0,1)", "O(2,-2)", "Om(1,1)"] {
            let r = resolution_lowc(&e(s), &var, &TwistBox::default()).unwrap();
            assert!(r.checks.all());
            let m = monad(&e(s), &var, &TwistBox::default()).unwrap();
            assert!(m.checks.all());
        }
        assert!(matches!(
            resolution_lowc(&e("Om(0,5)"), &v(2, 2), &TwistBox::default()),
            Err(EngineError::PreconditionFailed(_))
        ));
        assert!(matches!(
            monad(&e("Om(0,5)"), &v(2, 2), &TwistBox::default()),
            Err(EngineError::PreconditionFailed(_))
        ));
        assert!(monad(&e("Om(2,-1)"), &v(2, 2), &TwistBox::default()).is_ok());
    }

    #[test]
    fn k_theory_holds_for_arbitrary_inputs() {
        let var = v(1, 2);
        let ring = ChowRing::new(var);
        for s in ["O(3,-4)", "Om(-2,5) + O(1,1)", "2*O(-3,0)", "Om(0,0)"] {
            let t = beilinson_table(&e(s), &var).unwrap();
            assert!(t.k_theory_ok(&ring), "{s}");
        }
    }

    #[test]
    fn markdown_layout() {
        let t = beilinson_table(&e("O(0,1)"), &v(1, 1)).unwrap();
        let md = t.to_markdown();
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines.len(), 9);
        assert!(lines[0]
            .starts_with("| q | O(-1,-1) | O(-1,0) | O(-1,1) | O(0,-2) | O(0,-1) | O(0,0) |"));
        assert_eq!(lines[7], "| 0 | 0 | 0 | 0 | 1 | 3 | 3 |");
        assert!(lines[8].contains("O(-1,0)[-2]"));
    }
}

//! Split sheaf expressions on `X` and their cohomology.
//!
//! An [`Atom`] `(kind, a, b)` stands for `pi^*(K(b)) (x) O_X(a H)`, where `K` is
//! `O`, `Omega^1` or `Sym^2 Omega^1` on the plane. F-twists are folded into `b`.
//! Cohomology is pushed down to the plane: for `a >= 0` through
//! `Sym^a(O(a0) + O(a1))`, for `a = -1` it vanishes, and for `a <= -2` relative
//! duality moves it to `H^{3-i}` of `Sym^{-a-2}` against the dual on the plane.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::p2::{sym_decompose, Kind, P2Sheaf, PlaneCoh};
use crate::variety::Variety;

pub use parse::parse_expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub kind: Kind,
    pub a: i64,
    pub b: i64,
}

impl Atom {
    pub fn new(kind: Kind, a: i64, b: i64) -> Self {
        Atom { kind, a, b }
    }

    pub fn o(a: i64, b: i64) -> Self {
        Atom::new(Kind::O, a, b)
    }

    pub fn om(a: i64, b: i64) -> Self {
        Atom::new(Kind::Omega, a, b)
    }

    pub fn s2om(a: i64, b: i64) -> Self {
        Atom::new(Kind::Sym2Omega, a, b)
    }

    pub fn rank(&self) -> u64 {
        self.kind.rank()
    }

    pub fn twist(&self, da: i64, db: i64) -> Atom {
        Atom::new(self.kind, self.a + da, self.b + db)
    }

    pub fn dual(&self) -> Atom {
        Atom::new(self.kind, -self.a, self.kind.dual_offset() - self.b)
    }

    /// The plane sheaf `K(b)` this atom pulls back.
    pub fn base(&self) -> P2Sheaf {
        P2Sheaf::new(self.kind, self.b)
    }

    pub fn cohomology(&self, variety: &Variety) -> Result<CohTable> {
        let mut h = CohTable::ZERO;
        match self.a {
            a if a >= 0 => {
                for w in sym_decompose(variety, sym_power(a)?) {
                    let p = self.base().twist(w).cohomology()?;
                    h = h.checked_add(&CohTable::from_plane(&p, false))?;
                }
            }
            -1 => {}
            a => {
                let dual = self.base().dual().twist(variety.c() - 3);
                for w in sym_decompose(variety, sym_power(-a - 2)?) {
                    let p = dual.twist(w).cohomology()?;
                    h = h.checked_add(&CohTable::from_plane(&p, true))?;
                }
            }
        }
        Ok(h)
    }
}

fn sym_power(n: i64) -> Result<u32> {
    u32::try_from(n).map_err(|_| EngineError::Overflow("symmetric power exponent"))
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind.token(), self.a, self.b)
    }
}

/// `(h0, h1, h2, h3)` on `X`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohTable(pub [u64; 4]);

impl CohTable {
    pub const ZERO: CohTable = CohTable([0; 4]);

    /// Embed plane cohomology in degrees `0..=2`, or in `3..=1` when `top` is set.
    fn from_plane(p: &PlaneCoh, top: bool) -> CohTable {
        let [h0, h1, h2] = p.0;
        if top {
            CohTable([0, h2, h1, h0])
        } else {
            CohTable([h0, h1, h2, 0])
        }
    }

    pub fn chi(&self) -> i128 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &h)| if i % 2 == 0 { h as i128 } else { -(h as i128) })
            .sum()
    }

    pub fn reversed(&self) -> CohTable {
        let [a, b, c, d] = self.0;
        CohTable([d, c, b, a])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn h(&self, i: usize) -> u64 {
        self.0[i]
    }

    pub fn checked_add(&self, other: &CohTable) -> Result<CohTable> {
        let mut out = [0u64; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[i]
                .checked_add(other.0[i])
                .ok_or(EngineError::Overflow("cohomology sum"))?;
        }
        Ok(CohTable(out))
    }

    pub fn checked_scale(&self, m: u64) -> Result<CohTable> {
        let mut out = [0u64; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[i]
                .checked_mul(m)
                .ok_or(EngineError::Overflow("cohomology multiple"))?;
        }
        Ok(CohTable(out))
    }
}

impl fmt::Display for CohTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// A finite direct sum of atoms with positive multiplicities, kept sorted by
/// `(kind, a, b)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SheafExpr {
    summands: BTreeMap<Atom, u64>,
}

impl SheafExpr {
    pub fn zero() -> Self {
        SheafExpr::default()
    }

    pub fn atom(atom: Atom) -> Self {
        SheafExpr::from_terms([(atom, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Atom, u64)>) -> Self {
        let mut summands = BTreeMap::new();
        for (atom, m) in terms {
            if m > 0 {
                *summands.entry(atom).or_insert(0) += m;
            }
        }
        SheafExpr { summands }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &u64)> {
        self.summands.iter()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.summands.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn rank(&self) -> u64 {
        self.summands.iter().map(|(a, m)| a.rank() * m).sum()
    }

    pub fn plus(&self, other: &SheafExpr) -> SheafExpr {
        SheafExpr::from_terms(self.terms().chain(other.terms()).map(|(a, m)| (*a, *m)))
    }

    /// `self` repeated `m` times.
    pub fn times(&self, m: u64) -> SheafExpr {
        SheafExpr::from_terms(self.terms().map(|(a, k)| (*a, k * m)))
    }

    pub fn twist(&self, da: i64, db: i64) -> SheafExpr {
        SheafExpr::from_terms(self.terms().map(|(a, m)| (a.twist(da, db), *m)))
    }

    pub fn dual(&self) -> SheafExpr {
        SheafExpr::from_terms(self.terms().map(|(a, m)| (a.dual(), *m)))
    }

    /// Tensor product inside the closure `{O, Om, S2Om}`.
    ///
    /// `Om (x) Om` splits as `S2Om + O(0,-3)`; anything involving `S2Om` together with
    /// `Om` or `S2Om` is rejected.
    pub fn tensor(&self, other: &SheafExpr) -> Result<SheafExpr> {
        let mut out = Vec::new();
        for (x, m) in self.terms() {
            for (y, n) in other.terms() {
                let mult = m
                    .checked_mul(*n)
                    .ok_or(EngineError::Overflow("tensor multiplicity"))?;
                let (a, b) = (x.a + y.a, x.b + y.b);
                match (x.kind, y.kind) {
                    (Kind::O, k) | (k, Kind::O) => out.push((Atom::new(k, a, b), mult)),
                    (Kind::Omega, Kind::Omega) => {
                        out.push((Atom::s2om(a, b), mult));
                        out.push((Atom::o(a, b - 3), mult));
                    }
                    (l, r) => return Err(EngineError::UnsupportedTensor { left: l, right: r }),
                }
            }
        }
        Ok(SheafExpr::from_terms(out))
    }

    pub fn cohomology(&self, variety: &Variety) -> Result<CohTable> {
        let mut total = CohTable::ZERO;
        for (atom, m) in self.terms() {
            total = total.checked_add(&atom.cohomology(variety)?.checked_scale(*m)?)?;
        }
        Ok(total)
    }

    pub fn chi(&self, variety: &Variety) -> Result<i128> {
        Ok(self.cohomology(variety)?.chi())
    }

    /// `dual(self) (x) omega_X`, so that `h^i(self) = h^{3-i}(serre_dual_expr(self))`.
    pub fn serre_dual_expr(&self, variety: &Variety) -> SheafExpr {
        let (ka, kb) = variety.canonical_twist();
        self.dual().twist(ka, kb)
    }

    /// Whether every summand is `O` or `Om` (tensoring with `Om` then stays supported).
    pub fn is_omega_closed(&self) -> bool {
        self.atoms().all(|a| a.kind != Kind::Sym2Omega)
    }
}

impl fmt::Display for SheafExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        for (i, (atom, m)) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m != 1 {
                write!(f, "{m}*")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

impl FromStr for SheafExpr {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

impl Serialize for SheafExpr {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SheafExpr {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn twist(s: &SheafExpr, da: i64, db: i64) -> SheafExpr {
    s.twist(da, db)
}

pub fn dual(s: &SheafExpr) -> SheafExpr {
    s.dual()
}

pub fn tensor(s: &SheafExpr, t: &SheafExpr) -> Result<SheafExpr> {
    s.tensor(t)
}

pub fn cohomology(s: &SheafExpr, variety: &Variety) -> Result<CohTable> {
    s.cohomology(variety)
}

pub fn serre_dual_expr(s: &SheafExpr, variety: &Variety) -> SheafExpr {
    s.serre_dual_expr(variety)
}

fn chi_o(variety: &Variety, a: i64, b: i64) -> Result<i128> {
    Atom::o(a, b).cohomology(variety).map(|h| h.chi())
}

/// Euler characteristics add up across `0 -> O(-1,c) -> O(0,a0) + O(0,a1) -> O(1,0) -> 0`
/// twisted by `(a, b)`.
pub fn euler_identity_check(variety: &Variety, a: i64, b: i64) -> Result<bool> {
    let c = variety.c();
    let outer = chi_o(variety, a + 1, b)? + chi_o(variety, a - 1, b + c)?;
    let middle = chi_o(variety, a, b + variety.a0())? + chi_o(variety, a, b + variety.a1())?;
    Ok(outer == middle)
}

/// The same additivity for the pulled-back Euler sequence
/// `0 -> Om -> O(0,-1)^3 -> O -> 0` and its dual-side companion
/// `0 -> O(0,-3) -> O(0,-2)^3 -> Om -> 0`, twisted by `(a, b)`.
pub fn omega_sequence_checks(variety: &Variety, a: i64, b: i64) -> Result<(bool, bool)> {
    let om = Atom::om(a, b).cohomology(variety)?.chi();
    let euler = om + chi_o(variety, a, b)? == 3 * chi_o(variety, a, b - 1)?;
    let dual_euler = chi_o(variety, a, b - 3)? + om == 3 * chi_o(variety, a, b - 2)?;
    Ok((euler, dual_euler))
}

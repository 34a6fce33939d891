//! Intersection theory on `X` with rational coefficients.
//!
//! `A(X) = Z[h, f] / (f^3, h^2 - c h f + a0 a1 f^2)`. Classes are stored on the
//! basis `1 | h, f | hf, f^2 | hf^2`; `hf^2` is the point class. Riemann-Roch on
//! top of this ring gives an Euler characteristic that never touches the
//! cohomology engine.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{EngineError, Result};
use crate::p2::Kind;
use crate::threefold::{Atom, SheafExpr};
use crate::variety::Variety;

/// Exponents `(i, j)` of `h^i f^j` for each basis slot.
const BASIS: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 2)];
const POINT: usize = 5;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A class in `A(X) (x) Q`, always in normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChowClass {
    coeffs: [BigRational; 6],
}

impl ChowClass {
    pub fn zero() -> Self {
        ChowClass {
            coeffs: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn one() -> Self {
        ChowClass::scalar(q(1))
    }

    pub fn scalar(x: BigRational) -> Self {
        let mut out = ChowClass::zero();
        out.coeffs[0] = x;
        out
    }

    /// `x h + y f`.
    pub fn divisor(x: i64, y: i64) -> Self {
        ChowClass::from_ints([0, x, y, 0, 0, 0])
    }

    pub fn point() -> Self {
        ChowClass::from_ints([0, 0, 0, 0, 0, 1])
    }

    /// Coefficients on `1, h, f, hf, f^2, hf^2`.
    pub fn from_ints(c: [i64; 6]) -> Self {
        ChowClass { coeffs: c.map(q) }
    }

    pub fn from_coeffs(coeffs: [BigRational; 6]) -> Self {
        ChowClass { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational; 6] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The homogeneous part of codimension `k`.
    pub fn graded_part(&self, k: u32) -> ChowClass {
        let mut out = ChowClass::zero();
        for (slot, &(i, j)) in BASIS.iter().enumerate() {
            if i + j == k {
                out.coeffs[slot] = self.coeffs[slot].clone();
            }
        }
        out
    }

    /// Degree-zero coefficient (the rank, for a Chern character).
    pub fn rank_part(&self) -> BigRational {
        self.coeffs[0].clone()
    }

    pub fn scale(&self, x: &BigRational) -> ChowClass {
        ChowClass {
            coeffs: std::array::from_fn(|k| &self.coeffs[k] * x),
        }
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 6] = ["", "h", "f", "hf", "f^2", "hf^2"];
        let mut first = true;
        for (c, name) in self.coeffs.iter().zip(NAMES) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (name.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{name}")?,
                (false, false) => write!(f, "{a}*{name}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &ChowClass {
    type Output = ChowClass;

    fn add(self, rhs: &ChowClass) -> ChowClass {
        ChowClass {
            coeffs: std::array::from_fn(|k| &self.coeffs[k] + &rhs.coeffs[k]),
        }
    }
}

impl Sub for &ChowClass {
    type Output = ChowClass;

    fn sub(self, rhs: &ChowClass) -> ChowClass {
        ChowClass {
            coeffs: std::array::from_fn(|k| &self.coeffs[k] - &rhs.coeffs[k]),
        }
    }
}

impl Neg for &ChowClass {
    type Output = ChowClass;

    fn neg(self) -> ChowClass {
        ChowClass {
            coeffs: std::array::from_fn(|k| -&self.coeffs[k]),
        }
    }
}

/// Ring structure of `A(X) (x) Q` for one variety.
///
/// `point_degree` is `h^3` and equals `c^2 - a0 a1` for every ring built by
/// [`ChowRing::new`]. [`ChowRing::with_point_degree`] exists so that callers can
/// deliberately break that relation and watch the Riemann-Roch cross-check fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowRing {
    variety: Variety,
    point_degree: i64,
    // products of basis slots, precomputed
    table: Vec<Vec<ChowClass>>,
}

impl ChowRing {
    pub fn new(variety: Variety) -> Self {
        Self::with_point_degree(variety, variety.degree())
    }

    pub fn with_point_degree(variety: Variety, point_degree: i64) -> Self {
        let mut ring = ChowRing {
            variety,
            point_degree,
            table: Vec::new(),
        };
        ring.table = BASIS
            .iter()
            .map(|&(i1, j1)| {
                BASIS
                    .iter()
                    .map(|&(i2, j2)| ring.normal_form(i1 + i2, j1 + j2))
                    .collect()
            })
            .collect();
        ring
    }

    pub fn variety(&self) -> Variety {
        self.variety
    }

    /// Reduce `h^i f^j` to the basis.
    pub fn normal_form(&self, i: u32, j: u32) -> ChowClass {
        let c = self.variety.c();
        // h^2 = c hf - p f^2 forces h^3 = c^2 - p; read p back from the stored degree
        let p = c * c - self.point_degree;
        match (i, j) {
            (i, j) if i + j > 3 || j >= 3 => ChowClass::zero(),
            (0, 0) => ChowClass::from_ints([1, 0, 0, 0, 0, 0]),
            (1, 0) => ChowClass::from_ints([0, 1, 0, 0, 0, 0]),
            (0, 1) => ChowClass::from_ints([0, 0, 1, 0, 0, 0]),
            (1, 1) => ChowClass::from_ints([0, 0, 0, 1, 0, 0]),
            (0, 2) => ChowClass::from_ints([0, 0, 0, 0, 1, 0]),
            (2, 0) => ChowClass::from_ints([0, 0, 0, c, -p, 0]),
            (1, 2) => ChowClass::point(),
            (2, 1) => ChowClass::from_ints([0, 0, 0, 0, 0, c]),
            (3, 0) => ChowClass::from_ints([0, 0, 0, 0, 0, self.point_degree]),
            _ => unreachable!("degree <= 3 monomials are exhausted above"),
        }
    }

    pub fn mul(&self, x: &ChowClass, y: &ChowClass) -> ChowClass {
        let mut out = ChowClass::zero();
        for (s, xs) in x.coeffs.iter().enumerate() {
            if xs.is_zero() {
                continue;
            }
            for (t, yt) in y.coeffs.iter().enumerate() {
                if yt.is_zero() {
                    continue;
                }
                let w = xs * yt;
                out = &out + &self.table[s][t].scale(&w);
            }
        }
        out
    }

    /// Degree of the zero-cycle part.
    pub fn integrate(&self, x: &ChowClass) -> BigRational {
        x.coeffs[POINT].clone()
    }

    /// `exp(x)` truncated at codimension 3.
    pub fn exp(&self, x: &ChowClass) -> ChowClass {
        let x2 = self.mul(x, x);
        let x3 = self.mul(&x2, x);
        let sum = &ChowClass::one() + x;
        let sum = &sum + &x2.scale(&frac(1, 2));
        &sum + &x3.scale(&frac(1, 6))
    }

    /// `ch(Omega_pi) = 3 exp(-f) - 1`, from the pulled-back Euler sequence.
    fn ch_omega_untwisted(&self) -> ChowClass {
        let e = self.exp(&ChowClass::divisor(0, -1)).scale(&q(3));
        &e - &ChowClass::one()
    }

    pub fn ch_atom(&self, atom: &Atom) -> ChowClass {
        let twist = self.exp(&ChowClass::divisor(atom.a, atom.b));
        let base = match atom.kind {
            Kind::O => return twist,
            Kind::Omega => self.ch_omega_untwisted(),
            Kind::Sym2Omega => {
                // Omega (x) Omega = Sym^2 Omega + O(-3F)
                let om = self.ch_omega_untwisted();
                &self.mul(&om, &om) - &self.exp(&ChowClass::divisor(0, -3))
            }
        };
        self.mul(&base, &twist)
    }

    pub fn chern_character(&self, s: &SheafExpr) -> ChowClass {
        s.terms().fold(ChowClass::zero(), |acc, (atom, m)| {
            &acc + &self.ch_atom(atom).scale(&q(*m as i64))
        })
    }

    /// `(c1, c2)` of the tangent bundle.
    ///
    /// `ch(T_X) = ch(O(2h - c f)) + 3 exp(f) - 1`: the relative tangent line plus the
    /// pulled-back tangent of the plane.
    pub fn tangent_chern_classes(&self) -> (ChowClass, ChowClass) {
        let rel = self.exp(&ChowClass::divisor(2, -self.variety.c()));
        let base = &self.exp(&ChowClass::divisor(0, 1)).scale(&q(3)) - &ChowClass::one();
        let ch = &rel + &base;
        let c1 = ch.graded_part(1);
        let ch2 = ch.graded_part(2);
        let c2 = &self.mul(&c1, &c1).scale(&frac(1, 2)) - &ch2;
        (c1, c2)
    }

    /// `td(T_X) = 1 + c1/2 + (c1^2 + c2)/12 + c1 c2/24`.
    pub fn todd(&self) -> ChowClass {
        let (c1, c2) = self.tangent_chern_classes();
        let c1sq = self.mul(&c1, &c1);
        let mut td = &ChowClass::one() + &c1.scale(&frac(1, 2));
        td = &td + &(&c1sq + &c2).scale(&frac(1, 12));
        &td + &self.mul(&c1, &c2).scale(&frac(1, 24))
    }

    /// Euler characteristic by Hirzebruch-Riemann-Roch.
    pub fn chi_hrr(&self, s: &SheafExpr) -> Result<i128> {
        let value = self.integrate(&self.mul(&self.chern_character(s), &self.todd()));
        if !value.is_integer() {
            return Err(EngineError::NonIntegralEuler(value.to_string()));
        }
        value
            .to_integer()
            .to_i128()
            .ok_or(EngineError::Overflow("Riemann-Roch integral"))
    }
}

pub fn normal_form(i: u32, j: u32, variety: &Variety) -> ChowClass {
    ChowRing::new(*variety).normal_form(i, j)
}

pub fn integrate(x: &ChowClass, _variety: &Variety) -> BigRational {
    x.coeffs[POINT].clone()
}

pub fn chern_character(s: &SheafExpr, variety: &Variety) -> ChowClass {
    ChowRing::new(*variety).chern_character(s)
}

pub fn chi_hrr(s: &SheafExpr, variety: &Variety) -> Result<i128> {
    ChowRing::new(*variety).chi_hrr(s)
}

//! Exact cohomology, Ulrich checks and Beilinson resolutions for sheaves on
//! scroll threefolds `X = P(O(a0) + O(a1))` over the projective plane.

pub mod beilinson;
pub mod chow;
pub mod classify;
pub mod error;
pub mod p2;
pub mod suite;
pub mod threefold;
pub mod ulrich;
pub mod variety;

pub use beilinson::{
    beilinson_table, monad, resolution, resolution_lowc, BeilinsonTable, ResolutionReport, TwistBox,
};
pub use chow::{ChowClass, ChowRing};
pub use classify::{ClassificationReport, IntRange, SearchBox};
pub use error::{EngineError, Result};
pub use p2::{Kind, P2Expr, P2Sheaf, PlaneCoh};
pub use suite::{run_suite, SuitePlan, SuiteReport};
pub use threefold::{Atom, CohTable, SheafExpr};
pub use ulrich::{is_ulrich, Regularity, UlrichVerdict};
pub use variety::Variety;

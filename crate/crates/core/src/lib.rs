//! Expansions and contractions of abelian categories, computed on coherent
//! sheaves over weighted projective lines.
//!
//! The crate is organised bottom-up:
//!
//! - [`lgroup`]: the grading group `L(p)` and the injection `phi`.
//! - [`tubecat`]: finite-length sheaves at one point (tubes), with Hom and
//!   Ext¹ computed from nilpotent cyclic-quiver representations.
//! - [`expansion`]: the functors `i`, `i_λ`, `i_ρ` between tubes of rank
//!   `p - 1` and `p`, and the sequences attached to them.
//! - [`extquiver`]: valued Ext-quivers and their arrow/vertex rewrites.
//! - [`gradedmod`]: `L(p)`-graded modules on finite degree windows and the
//!   functors `F`, `F_λ`, `F_ρ`.
//! - [`planner`]: weight-reduction chains.
//! - [`checks`] and [`cli`]: invariant suites and the batch front end.

pub mod checks;
pub mod cli;
pub mod expansion;
pub mod extquiver;
pub mod field;
pub mod gradedmod;
pub mod lgroup;
pub mod linalg;
pub mod planner;
pub mod tubecat;

pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use lgroup::{GradingGroup, LElement, Phi, WeightSequence};

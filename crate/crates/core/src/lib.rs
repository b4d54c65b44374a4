//! Exact-arithmetic verification of the r-colored Clifford and Heisenberg
//! actions on the torus fixed points of moduli of framed torsion-free
//! sheaves, together with the boson-fermion correspondence they realize.
//!
//! Everything is computed over ℚ with no tolerances: partitions and hook
//! combinatorics ([`partition`]), factored products of integer linear forms
//! in ℚ\[b₁..b_r, ε\] ([`poly`]), the colored fermionic/bosonic Fock spaces
//! ([`fock`]), fixed-point Euler classes and localization structure
//! constants assembled into block matrices ([`geom`]), and the verification
//! suites that compare the geometric and algebraic operators ([`verify`]).

pub mod fock;
pub mod geom;
pub mod partition;
pub mod poly;
pub mod verify;

pub use fock::{BosonVector, FermionVector, FixedPoint};
pub use geom::{BlockError, BlockMatrix, Dir, GeometryContext, Half, OpAtom, TruncationWindow};
pub use partition::{Cell, Partition, StripCheck};
pub use poly::{ExpandedPoly, FactoredClass, LinearForm, Rat, RatioResult};
pub use verify::{Failure, OpWord, Suite, VerificationReport, WordAtom};

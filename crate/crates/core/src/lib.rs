//! Exact parametric machinery for proving extremality of cut-generating
//! functions in the single-row Gomory–Johnson model.

#![no_std]

extern crate alloc;

pub mod atom;
pub mod bfs;
pub mod cell;
pub mod error;
pub mod factor;
pub mod families;
pub mod field;
pub mod gj;
pub mod lp;
pub mod oracle;
pub mod param;
pub mod poly;
pub mod pwl;
pub mod ratfunc;
pub mod rational;

pub use atom::{Atom, ConstraintLedger, Rel};
pub use bfs::{bfs_complex, classify, SliceSpec, Stage};
pub use cell::{Cell, LinPolyhedron, MonomialMap};
pub use error::{Error, ParseError, Result};
pub use families::{Family, FamilySpec};
pub use field::OrderedField;
pub use gj::{extremality_test, minimality_test, Verdict};
pub use oracle::grid_oracle_extremality;
pub use param::{CompareOp, ParamContext, ParamElement};
pub use poly::{Monomial, MultiPoly};
pub use pwl::Pwl;
pub use ratfunc::RatFunc;
pub use rational::Rational;

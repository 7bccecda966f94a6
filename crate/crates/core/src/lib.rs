//! Torsion-free rank of the group of endotrivial modules for finite groups of
//! Lie type, by orbit-poset enumeration and by classification.

pub mod arith;
pub mod classify;
pub mod cli;
pub mod error;
pub mod field;
pub mod forms;
pub mod groups;
pub mod mat;
pub mod matgroup;
pub mod posetrank;
pub mod sylow;
pub mod witnesses;

pub use error::{Error, Result};
pub use field::{Field, FieldElem};

//! Exact (relative) cyclic subgroup commutativity degrees of finite groups.

pub mod bitset;
pub mod corpus;
pub mod degree;
pub mod degrees;
pub mod density;
pub mod formulas;
pub mod group;
pub mod lattice;
pub mod primes;
pub mod spec;
pub mod spectra;
pub mod verify;

pub use degree::Degree;
pub use group::{Elem, GroupError, GroupTable, Limits};
pub use lattice::{CyclicPoset, Subgroup, SubgroupLattice};

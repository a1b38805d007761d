//! Maximization of (possibly non-monotone) submodular functions under
//! matroid and p-set system constraints by growing two disjoint greedy
//! solutions at once.
//!
//! The crate is `no_std` with `alloc`. File formats, the command-line front
//! end and wall-clock timing live in the `twinopt` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod certify;
pub mod constraints;
pub mod error;
pub mod generators;
pub mod model;
pub mod objectives;
pub mod set;
pub mod solvers;

pub use constraints::{
    Constraint, IndependenceOracle, IndependenceSystem, IntersectionSystem, PartitionMatroid,
    SeedMatroid, UniformMatroid,
};
pub use error::{Error, Result};
pub use model::{GroundSet, InsertionLog, RunReport, SetFunction, Side, ValueOracle};
pub use objectives::{
    CutObjective, MarketingObjective, ModularObjective, RRSetCollection, WeightedGraph,
};
pub use set::ElementSet;
pub use solvers::{solve, Algorithm, SolverParams};

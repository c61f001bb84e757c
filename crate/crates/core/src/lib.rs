//! Exact solvers, polynomial special-case algorithms, ILP encodings, an
//! NP-hardness reduction, and an experiment harness for weighted envy-free
//! allocation of indivisible resources and houses.
//!
//! Fairness is judged under three concepts: classic sum-envy-freeness (SEF),
//! weighted avg-envy-freeness (AEF), and their disjunctive combination
//! sum-avg-envy-freeness (SAEF), under which an agent tolerates another's
//! bundle whenever either the unweighted or the weight-scaled comparison is
//! in its favor.

pub mod cli;
pub mod exact;
pub mod specialized;
pub mod gen;
pub mod hardness;
pub mod ilp;
pub mod model;

pub use exact::{ExistenceProfile, SearchOptions};
pub use model::{Allocation, FairnessConcept, Instance};

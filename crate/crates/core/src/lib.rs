//! Graph energy, weighted Laplacian energy and numerical verification of the
//! trace-norm bounds that relate them.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense symmetric eigensolver (cyclic Jacobi), singular values,
//!   matrix energy, PSD tests, matrix absolute value, direct sums.
//! * [`graph`]: vertex-weighted simple graphs, their adjacency and
//!   (signless) Laplacian matrices, structural predicates and JSON I/O.
//! * [`generate`]: seeded graph families.
//! * [`energy`]: mean deviation, variance, E(G) and LE_ω(G).
//! * [`theorems`]: bound checkers with equality classification.
//! * [`sweep`]: verification sweeps and their JSON/CSV reports.
//! * [`cli`]: the `graph-energy` command-line frontend.

pub mod cli;
pub mod energy;
pub mod error;
pub mod generate;
pub mod graph;
pub mod linalg;
pub mod rng;
pub mod sweep;
pub mod theorems;

pub use energy::{
    graph_energy, laplacian_energy, mean_deviation, variance, weight_stats, WeightStats,
};
pub use error::{Error, ParseError, Result};
pub use generate::{generate, Family, FamilyKind, WeightScheme};
pub use graph::{Bipartition, WeightRegime, WeightedGraph};
pub use linalg::{eigh, matrix_energy, singular_values, SingularValues, Spectrum, SymMatrix};
pub use sweep::{run_sweep, SweepConfig, SweepReport};
pub use theorems::{BoundReport, Equality, Theorem, Tolerances};

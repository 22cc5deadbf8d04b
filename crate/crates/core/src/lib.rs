//! Parity games: arenas, attractors, Zielonka's recursive algorithm and two
//! quasipolynomial variants of it, plus a brute-force oracle and game generators.

pub mod arena;
pub mod attractor;
pub mod generators;
pub mod oracle;
pub mod solution;
pub mod solvers;

pub use arena::{normalize, normalize_with, parse_pg, write_pg, Arena, NormalizeOptions, Player, PreprocessReport, VertexSet};
pub use solution::{parse_solution, write_solution, Solution, Strategy};
pub use solvers::{solve, Algorithm, OptFlags, Optimisation, SolveError, SolverConfig, SolverStats};

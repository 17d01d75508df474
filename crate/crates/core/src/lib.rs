//! Symmetric Nash equilibria in game networks.
//!
//! `n` players share one arena and move simultaneously. Each sees the
//! configuration through an observation template and pursues an LTL
//! objective; symmetry is given by a family of player permutations. The
//! solver enumerates finite-memory strategies `σ₀`, lets every player run
//! `σ₀` on its own view, and checks the outcome and all one-player deviations
//! explicitly.
//!
//! ```
//! use symnash::{fixtures, Budget, Constraints, Solver};
//!
//! let game = fixtures::toggle();
//! let solver = Solver::new(&game, Budget::default()).unwrap();
//! let sol = solver.find_symmetric_ne(&Constraints::positive(2), 1).unwrap().unwrap();
//! assert_eq!(sol.verdict.winners.len(), 2);
//! ```

pub mod arena;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod ltl;
pub mod network;
pub mod observation;
pub mod solver;
pub mod strategy;
pub mod symmetry;

pub use arena::{Arena, Configuration, Reachable};
pub use error::{Error, Result};
pub use ltl::{eval_lasso, parse, to_buchi, BuchiAutomaton, Formula, Lasso};
pub use network::{validate_network, Constraints, GameFile, GameNetwork};
pub use observation::{obs_key, KeySpace, ObsKey, ObsTemplate};
pub use solver::{Budget, ProfileCheck, Solution, Solver, Verdict, Witness, WitnessFile};
pub use strategy::{CandidateSpace, MooreStrategy, Profile};
pub use symmetry::{build_representation, desymmetrize, Permutation, SymmetricRepresentation};

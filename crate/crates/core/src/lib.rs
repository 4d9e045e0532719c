//! Exact solver for Containment, the Cops and Robbers variant where cops
//! occupy edges and win by occupying every edge at the robber's vertex, and
//! for classic vertex Cops and Robbers.
//!
//! - [`graph`]: graphs, named families, graph6, girth, domination.
//! - [`game`]: rules, positions, move generation and state keys.
//! - [`solver`]: retrograde solving, ξ(G) and c(G), strategies, audits.
//! - [`checks`]: named checks of the game's structural claims, with a
//!   JSON report.

pub mod checks;
pub mod game;
pub mod graph;
pub mod solver;

pub use game::{GameKind, GameState, Rules, Turn};
pub use graph::{FamilySpec, Graph, GraphError};
pub use solver::{solve, GameValue, SearchOutcome, SolveError, SolveResult, SolverConfig};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/game.md")]
    mod game {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/strategies.md")]
    mod strategies {}
    #[doc = include_str!("../../../book/src/checks.md")]
    mod checks {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}

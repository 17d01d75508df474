//! LTL objectives over configurations.
//!
//! The only atomic proposition is `at(k, s)`: player `k` is in local state
//! `s`. Player `i`'s objective is player 0's objective with every player index
//! sent through `π_{0,i}`.

mod buchi;
mod eval;
mod parse;

use std::fmt;

pub use buchi::{to_buchi, BuchiAutomaton, BuchiTransition, Label, Literal};
pub use eval::{eval_lasso, Lasso};
pub use parse::parse;

use crate::arena::{Arena, StateId};
use crate::symmetry::SymmetricRepresentation;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom { player: usize, state: StateId },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(player: usize, state: StateId) -> Self {
        Formula::Atom { player, state }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    /// Rebuilds the formula with every atom replaced by `f(player, state)`.
    pub fn map_atoms(&self, f: &mut dyn FnMut(usize, StateId) -> Formula) -> Formula {
        use Formula::*;
        match self {
            True => True,
            False => False,
            Atom { player, state } => f(*player, *state),
            Not(a) => Not(Box::new(a.map_atoms(f))),
            Next(a) => Next(Box::new(a.map_atoms(f))),
            Eventually(a) => Eventually(Box::new(a.map_atoms(f))),
            Always(a) => Always(Box::new(a.map_atoms(f))),
            And(a, b) => And(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Or(a, b) => Or(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Implies(a, b) => Implies(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Until(a, b) => Until(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Release(a, b) => Release(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
        }
    }

    /// Temporal nesting depth.
    pub fn temporal_depth(&self) -> usize {
        use Formula::*;
        match self {
            True | False | Atom { .. } => 0,
            Not(a) => a.temporal_depth(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.temporal_depth().max(b.temporal_depth()),
            Next(a) | Eventually(a) | Always(a) => 1 + a.temporal_depth(),
            Until(a, b) | Release(a, b) => 1 + a.temporal_depth().max(b.temporal_depth()),
        }
    }

    pub fn atoms(&self) -> Vec<(usize, StateId)> {
        let mut out = Vec::new();
        self.map_atoms(&mut |k, s| {
            out.push((k, s));
            Formula::True
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn display<'a>(&'a self, arena: &'a Arena) -> FormulaDisplay<'a> {
        FormulaDisplay { f: self, arena }
    }
}

/// `φ_i`: atoms `at(k, s)` become `at(π_{0,i}(k), s)`.
pub fn instantiate_for_player(phi0: &Formula, i: usize, rep: &SymmetricRepresentation) -> Formula {
    let p = rep.base(i);
    phi0.map_atoms(&mut |k, s| Formula::atom(p.apply(k), s))
}

pub struct FormulaDisplay<'a> {
    f: &'a Formula,
    arena: &'a Arena,
}

impl<'a> fmt::Display for FormulaDisplay<'a> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        let sub = |g: &'a Formula| FormulaDisplay { f: g, arena: self.arena };
        match self.f {
            True => write!(out, "true"),
            False => write!(out, "false"),
            Atom { player, state } => write!(out, "at({player},{})", self.arena.state_name(*state)),
            Not(a) => write!(out, "!{}", sub(a)),
            Next(a) => write!(out, "X {}", sub(a)),
            Eventually(a) => write!(out, "F {}", sub(a)),
            Always(a) => write!(out, "G {}", sub(a)),
            And(a, b) => write!(out, "({} & {})", sub(a), sub(b)),
            Or(a, b) => write!(out, "({} | {})", sub(a), sub(b)),
            Implies(a, b) => write!(out, "({} -> {})", sub(a), sub(b)),
            Until(a, b) => write!(out, "({} U {})", sub(a), sub(b)),
            Release(a, b) => write!(out, "({} R {})", sub(a), sub(b)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn instantiate_penny() {
        let g = fixtures::penny();
        let rep = g.representation();
        let ar = g.arena();
        let phi1 = instantiate_for_player(g.objective(), 1, &rep);
        let expected = parse("F (at(1,h) & at(0,t))", ar, 2).unwrap();
        assert_eq!(phi1, expected);
        assert_eq!(instantiate_for_player(g.objective(), 0, &rep), *g.objective());
    }

    #[test]
    fn instantiate_cards6() {
        let g = fixtures::cards6();
        let rep = g.representation();
        let s = g.arena().state("s").unwrap();
        let phi = Formula::atom(1, s);
        assert_eq!(instantiate_for_player(&phi, 1, &rep), Formula::atom(2, s));
    }

    #[test]
    fn display_round_trips() {
        let g = fixtures::toggle_blind();
        let ar = g.arena();
        let text = g.objective().display(ar).to_string();
        assert_eq!(text, "(F at(0,b) & G (at(0,b) -> X at(0,b)))");
        assert_eq!(parse(&text, ar, 2).unwrap(), *g.objective());
    }
}

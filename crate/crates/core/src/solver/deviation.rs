//! Profitable-deviation search.
//!
//! Everyone but the deviator follows the profile, so the deviation graph is a
//! one-player game whose nodes are profile states. Its product with the
//! deviator's objective automaton is explored on the fly; an accepting cycle
//! reachable from the start is a path satisfying the objective, found by
//! nested depth-first search with successors in canonical order (deviator
//! action first, then automaton transition).

use std::collections::HashMap;

use crate::arena::ActionId;
use crate::error::{Error, Result};
use crate::ltl::{BuchiAutomaton, Lasso};
use crate::strategy::{Profile, ProfileState};

/// A path of the deviator that satisfies its objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationWitness {
    pub player: usize,
    pub prefix_actions: Vec<ActionId>,
    pub cycle_actions: Vec<ActionId>,
    /// Configurations visited; `lasso.prefix[k]` is where
    /// `prefix_actions[k]` is played, likewise for the cycle.
    pub lasso: Lasso,
}

type Edge = (u32, ActionId);

struct Frame {
    node: u32,
    succs: Vec<Edge>,
    next: usize,
}

struct Product<'p, 'a> {
    profile: &'p Profile<'a>,
    player: usize,
    automaton: &'p BuchiAutomaton,
    nodes: Vec<(ProfileState, usize)>,
    ids: HashMap<(ProfileState, usize), u32>,
    budget: usize,
}

impl Product<'_, '_> {
    fn intern(&mut self, state: ProfileState, q: usize) -> Result<u32> {
        let key = (state, q);
        if let Some(&id) = self.ids.get(&key) {
            return Ok(id);
        }
        if self.nodes.len() >= self.budget {
            return Err(Error::BudgetExceeded(format!(
                "deviation product for player {} exceeds {} nodes",
                self.player, self.budget
            )));
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(key.clone());
        self.ids.insert(key, id);
        Ok(id)
    }

    fn frame(&mut self, node: u32) -> Result<Frame> {
        let (state, q) = self.nodes[node as usize].clone();
        let reach = self.profile.reach();
        let t = reach.config(state.config).clone();
        let arena = self.profile.game().arena();
        let mut succs = Vec::new();
        for &a in arena.mov(t.get(self.player)) {
            let next = self.profile.step(&state, Some((self.player, a)))?;
            for tr in self.automaton.transitions(q) {
                if tr.label.holds(&t) {
                    let id = self.intern(next.clone(), tr.target)?;
                    succs.push((id, a));
                }
            }
        }
        Ok(Frame { node, succs, next: 0 })
    }

    fn accepting(&self, node: u32) -> bool {
        self.automaton.is_accepting(self.nodes[node as usize].1)
    }
}

fn mark(v: &mut Vec<bool>, id: u32) -> bool {
    let i = id as usize;
    if v.len() <= i {
        v.resize(i + 1, false);
    }
    !std::mem::replace(&mut v[i], true)
}

pub(crate) fn search(
    profile: &Profile<'_>,
    player: usize,
    automaton: &BuchiAutomaton,
    node_budget: usize,
) -> Result<Option<DeviationWitness>> {
    let mut product =
        Product { profile, player, automaton, nodes: Vec::new(), ids: HashMap::new(), budget: node_budget };
    let mut outer_seen = Vec::new();
    let mut inner_seen = Vec::new();
    let mut state = profile.initial_state();
    // the deviator's own memory is irrelevant; pin it
    state.memory[player] = 0;
    let init = product.intern(state, automaton.initial())?;
    mark(&mut outer_seen, init);
    let mut stack = vec![product.frame(init)?];

    while let Some(top) = stack.last_mut() {
        if top.next < top.succs.len() {
            let (t, _) = top.succs[top.next];
            top.next += 1;
            if mark(&mut outer_seen, t) {
                let frame = product.frame(t)?;
                stack.push(frame);
            }
            continue;
        }
        let done = stack.pop().expect("non-empty");
        if product.accepting(done.node) {
            if let Some(cycle) = inner(&mut product, &mut inner_seen, done.node)? {
                return Ok(Some(witness(&product, &stack, done.node, &cycle)));
            }
        }
    }
    Ok(None)
}

/// Looks for a cycle back to `seed`; returns its frames (seed first) with the
/// edge taken from each.
fn inner(product: &mut Product<'_, '_>, seen: &mut Vec<bool>, seed: u32) -> Result<Option<Vec<Edge>>> {
    mark(seen, seed);
    let mut stack = vec![product.frame(seed)?];
    while let Some(top) = stack.last_mut() {
        if top.next < top.succs.len() {
            let (t, _) = top.succs[top.next];
            top.next += 1;
            if t == seed {
                return Ok(Some(stack.iter().map(|f| (f.node, f.succs[f.next - 1].1)).collect()));
            }
            if mark(seen, t) {
                let frame = product.frame(t)?;
                stack.push(frame);
            }
            continue;
        }
        stack.pop();
    }
    Ok(None)
}

fn witness(product: &Product<'_, '_>, path: &[Frame], seed: u32, cycle: &[Edge]) -> DeviationWitness {
    let reach = product.profile.reach();
    let config = |node: u32| reach.config(product.nodes[node as usize].0.config).clone();
    debug_assert_eq!(cycle.first().map(|e| e.0), Some(seed));
    DeviationWitness {
        player: product.player,
        prefix_actions: path.iter().map(|f| f.succs[f.next - 1].1).collect(),
        cycle_actions: cycle.iter().map(|e| e.1).collect(),
        lasso: Lasso::new(
            path.iter().map(|f| config(f.node)).collect(),
            cycle.iter().map(|e| config(e.0)).collect(),
        ),
    }
}

/// Plays the witness against the profile and returns the configurations of
/// `prefix · cycle · cycle`, plus whether the profile state closes the cycle.
pub fn replay_deviation(
    profile: &Profile<'_>,
    w: &DeviationWitness,
) -> Result<(Vec<crate::arena::Configuration>, bool)> {
    let mut state = profile.initial_state();
    state.memory[w.player] = 0;
    let mut out = Vec::new();
    let actions = w.prefix_actions.iter().chain(&w.cycle_actions).chain(&w.cycle_actions);
    let mut cycle_entry = None;
    for (k, &a) in actions.enumerate() {
        if k == w.prefix_actions.len() {
            cycle_entry = Some(state.clone());
        }
        out.push(profile.reach().config(state.config).clone());
        state = profile.step(&state, Some((w.player, a)))?;
    }
    // after two rounds of the cycle the profile state must be back at the entry
    Ok((out, cycle_entry.as_ref() == Some(&state)))
}

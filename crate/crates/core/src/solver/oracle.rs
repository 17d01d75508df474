//! Brute-force reference solver for small instances.
//!
//! Shares nothing with the main search beyond the arena, the observation
//! function and the objective automata. It materializes every strategy table,
//! simulates outcomes with its own bookkeeping, decides winners by running
//! the automaton on the outcome, and decides deviations by building the whole
//! product graph and looking for a reachable accepting node on a cycle.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::arena::{product_step, ActionId, Configuration};
use crate::error::{Error, Result};
use crate::ltl::{instantiate_for_player, to_buchi, BuchiAutomaton, Lasso};
use crate::network::{Constraints, GameNetwork};
use crate::observation::{obs_key, ObsKey};
use crate::strategy::{CellFile, StrategyFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_candidates: u64,
    /// Bound on reachable configurations and on deviation-graph nodes.
    pub max_nodes: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self { max_candidates: 64, max_nodes: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    /// Position in the canonical candidate order.
    pub index: u64,
    /// One table for a symmetric query, one per player otherwise.
    pub strategies: Vec<StrategyFile>,
    pub winners: BTreeSet<usize>,
    pub outcome: Lasso,
}

type Cell = (u32, ObsKey);
type Table = BTreeMap<Cell, (ActionId, u32)>;

struct Domain {
    keys: Vec<ObsKey>,
    allowed: Vec<Vec<ActionId>>,
}

struct Oracle<'g> {
    g: &'g GameNetwork,
    limits: OracleLimits,
    configs: Vec<Configuration>,
    index: HashMap<Configuration, usize>,
    automata: Vec<BuchiAutomaton>,
}

impl<'g> Oracle<'g> {
    fn new(g: &'g GameNetwork, limits: OracleLimits) -> Result<Self> {
        let ar = g.arena();
        let mut configs = vec![g.initial().clone()];
        let mut index = HashMap::from([(g.initial().clone(), 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            let t = configs[c].clone();
            let choices: Vec<&[ActionId]> = t.states().iter().map(|&s| ar.mov(s)).collect();
            for moves in cartesian(&choices) {
                let u = product_step(ar, &t, &moves)?;
                if !index.contains_key(&u) {
                    if configs.len() >= limits.max_nodes {
                        return Err(Error::OracleTooLarge("too many reachable configurations".into()));
                    }
                    index.insert(u.clone(), configs.len());
                    queue.push_back(configs.len());
                    configs.push(u);
                }
            }
        }
        let automata =
            (0..g.n()).map(|i| to_buchi(&instantiate_for_player(g.objective(), i, g.rep()))).collect();
        Ok(Self { g, limits, configs, index, automata })
    }

    fn key(&self, i: usize, t: &Configuration) -> ObsKey {
        obs_key(self.g, self.g.rep(), i, t).expect("player in range")
    }

    fn domain(&self, players: &[usize]) -> Result<Domain> {
        let ar = self.g.arena();
        let mut sets: BTreeMap<ObsKey, Vec<bool>> = BTreeMap::new();
        for &i in players {
            for t in &self.configs {
                let here: Vec<bool> =
                    (0..ar.num_actions() as ActionId).map(|a| ar.is_available(t.get(i), a)).collect();
                sets.entry(self.key(i, t))
                    .and_modify(|s| s.iter_mut().zip(&here).for_each(|(x, y)| *x &= *y))
                    .or_insert(here);
            }
        }
        let mut keys = Vec::new();
        let mut allowed = Vec::new();
        for (k, set) in sets {
            let acts: Vec<ActionId> = (0..set.len() as ActionId).filter(|&a| set[a as usize]).collect();
            if acts.is_empty() {
                return Err(Error::NoUniformAction(k.to_string()));
            }
            keys.push(k);
            allowed.push(acts);
        }
        Ok(Domain { keys, allowed })
    }

    /// Every total table with memory `m`, in canonical order.
    fn tables(&self, d: &Domain, m: u32) -> Result<Vec<Table>> {
        let mut cells: Vec<(Cell, Vec<(ActionId, u32)>)> = Vec::new();
        for q in 0..m {
            for (k, acts) in d.keys.iter().zip(&d.allowed) {
                let choices = acts.iter().flat_map(|&a| (0..m).map(move |n| (a, n))).collect();
                cells.push(((q, k.clone()), choices));
            }
        }
        let mut count: u64 = 1;
        for (_, c) in &cells {
            count = count.saturating_mul(c.len() as u64);
        }
        if count > self.limits.max_candidates {
            return Err(Error::OracleTooLarge(format!("{count} candidates")));
        }
        let choice_lists: Vec<&[(ActionId, u32)]> = cells.iter().map(|(_, c)| c.as_slice()).collect();
        Ok(cartesian(&choice_lists)
            .map(|pick| cells.iter().map(|(cell, _)| cell.clone()).zip(pick).collect())
            .collect())
    }

    fn step(
        &self,
        tables: &[&Table],
        c: usize,
        mem: &[u32],
        dev: Option<(usize, ActionId)>,
    ) -> Result<(usize, Vec<u32>)> {
        let t = &self.configs[c];
        let mut moves = Vec::new();
        let mut next_mem = Vec::new();
        for i in 0..self.g.n() {
            if let Some((d, a)) = dev.filter(|&(d, _)| d == i) {
                debug_assert_eq!(d, i);
                moves.push(a);
                next_mem.push(mem[i]);
                continue;
            }
            let &(a, q) = tables[i]
                .get(&(mem[i], self.key(i, t)))
                .ok_or_else(|| Error::UndefinedKey(self.key(i, t).to_string()))?;
            moves.push(a);
            next_mem.push(q);
        }
        let u = product_step(self.g.arena(), t, &moves)?;
        Ok((self.index[&u], next_mem))
    }

    fn outcome(&self, tables: &[&Table]) -> Result<Lasso> {
        let mut seen: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
        let mut trace = Vec::new();
        let mut state = (0usize, vec![0u32; self.g.n()]);
        while !seen.contains_key(&state) {
            seen.insert(state.clone(), trace.len());
            trace.push(self.configs[state.0].clone());
            state = self.step(tables, state.0, &state.1, None)?;
        }
        let cycle = trace.split_off(seen[&state]);
        Ok(Lasso::new(trace, cycle))
    }

    /// Whether player `i` can satisfy its objective against the others.
    fn has_deviation(&self, tables: &[&Table], i: usize) -> Result<bool> {
        let aut = &self.automata[i];
        type Node = (usize, Vec<u32>, usize);
        let mut ids: HashMap<Node, usize> = HashMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let start: Node = (0, vec![0; self.g.n()], aut.initial());
        ids.insert(start.clone(), 0);
        nodes.push(start);
        let mut k = 0;
        while k < nodes.len() {
            let (c, mem, q) = nodes[k].clone();
            let t = &self.configs[c];
            let mut out = Vec::new();
            for &a in self.g.arena().mov(t.get(i)) {
                let (c2, mem2) = self.step(tables, c, &mem, Some((i, a)))?;
                for tr in aut.transitions(q).iter().filter(|tr| tr.label.holds(t)) {
                    let node = (c2, mem2.clone(), tr.target);
                    let id = match ids.get(&node) {
                        Some(&id) => id,
                        None => {
                            if nodes.len() >= self.limits.max_nodes {
                                return Err(Error::OracleTooLarge("deviation graph too large".into()));
                            }
                            ids.insert(node.clone(), nodes.len());
                            nodes.push(node);
                            nodes.len() - 1
                        }
                    };
                    out.push(id);
                }
            }
            edges.push(out);
            k += 1;
        }
        // every node was discovered from the start, so all are reachable
        for (v, node) in nodes.iter().enumerate() {
            if aut.is_accepting(node.2) && reaches(&edges, v, v) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn accepts(&self, tables: &[&Table], cons: &Constraints) -> Result<Option<(BTreeSet<usize>, Lasso)>> {
        let outcome = self.outcome(tables)?;
        let winners: BTreeSet<usize> =
            (0..self.g.n()).filter(|&i| self.automata[i].accepts(&outcome)).collect();
        if !cons.winners.is_subset(&winners) || !cons.losers.is_disjoint(&winners) {
            return Ok(None);
        }
        for i in (0..self.g.n()).filter(|i| !winners.contains(i)) {
            if self.has_deviation(tables, i)? {
                return Ok(None);
            }
        }
        Ok(Some((winners, outcome)))
    }

    fn to_file(&self, table: &Table, m: u32) -> StrategyFile {
        let ar = self.g.arena();
        StrategyFile {
            memory: m,
            initial: 0,
            table: table
                .iter()
                .map(|((q, k), &(a, n))| {
                    (format!("{q},{k}"), CellFile { act: ar.action_name(a).to_string(), next: n })
                })
                .collect(),
        }
    }
}

/// One path of length at least one from `from` to `to`.
fn reaches(edges: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; edges.len()];
    let mut queue: VecDeque<usize> = edges[from].iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        if v == to {
            return true;
        }
        if !std::mem::replace(&mut seen[v], true) {
            queue.extend(edges[v].iter().copied());
        }
    }
    false
}

/// Cartesian product, last coordinate fastest.
fn cartesian<'a, T: Clone>(lists: &'a [&'a [T]]) -> impl Iterator<Item = Vec<T>> + 'a {
    let mut digits = vec![0usize; lists.len()];
    let mut done = lists.iter().any(|l| l.is_empty());
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let item = digits.iter().zip(lists).map(|(&d, l)| l[d].clone()).collect();
        done = true;
        for k in (0..lists.len()).rev() {
            digits[k] += 1;
            if digits[k] < lists[k].len() {
                done = false;
                break;
            }
            digits[k] = 0;
        }
        Some(item)
    })
}

/// First symmetric equilibrium with memory `m` meeting `cons`, by exhaustive
/// search.
pub fn oracle_find(
    g: &GameNetwork,
    cons: &Constraints,
    m: u32,
    limits: OracleLimits,
) -> Result<Option<OracleSolution>> {
    cons.validate(g.n())?;
    let o = Oracle::new(g, limits)?;
    let d = o.domain(&(0..g.n()).collect::<Vec<_>>())?;
    for (index, table) in o.tables(&d, m)?.iter().enumerate() {
        let tables = vec![table; g.n()];
        if let Some((winners, outcome)) = o.accepts(&tables, cons)? {
            return Ok(Some(OracleSolution {
                index: index as u64,
                strategies: vec![o.to_file(table, m)],
                winners,
                outcome,
            }));
        }
    }
    Ok(None)
}

/// Same for arbitrary profiles: each player picks its own table over its own
/// observation keys.
pub fn oracle_find_general(
    g: &GameNetwork,
    cons: &Constraints,
    m: u32,
    limits: OracleLimits,
) -> Result<Option<OracleSolution>> {
    cons.validate(g.n())?;
    let o = Oracle::new(g, limits)?;
    let per_player =
        (0..g.n()).map(|i| o.domain(&[i]).and_then(|d| o.tables(&d, m))).collect::<Result<Vec<_>>>()?;
    let total = per_player.iter().fold(1u64, |acc, t| acc.saturating_mul(t.len() as u64));
    if total > limits.max_candidates {
        return Err(Error::OracleTooLarge(format!("{total} joint candidates")));
    }
    let lists: Vec<&[Table]> = per_player.iter().map(Vec::as_slice).collect();
    let indices: Vec<Vec<usize>> = lists.iter().map(|l| (0..l.len()).collect()).collect();
    let index_lists: Vec<&[usize]> = indices.iter().map(Vec::as_slice).collect();
    for (index, pick) in cartesian(&index_lists).enumerate() {
        let tables: Vec<&Table> = pick.iter().zip(&lists).map(|(&p, l)| &l[p]).collect();
        if let Some((winners, outcome)) = o.accepts(&tables, cons)? {
            return Ok(Some(OracleSolution {
                index: index as u64,
                strategies: tables.iter().map(|t| o.to_file(t, m)).collect(),
                winners,
                outcome,
            }));
        }
    }
    Ok(None)
}

//! Finite-memory strategies fed with observation keys.
//!
//! A [`MooreStrategy`] reads one [`ObsKey`] per step: it plays
//! `act(q, key)` and moves to memory `upd(q, key)`. Since it never sees a raw
//! configuration, it is realisable by construction. One memory cell means
//! memoryless.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arena::{product_step, ActionId, Arena, Configuration, Reachable};
use crate::error::{Error, Result};
use crate::ltl::Lasso;
use crate::network::GameNetwork;
use crate::observation::{KeySpace, ObsKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub action: ActionId,
    pub next: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreStrategy {
    memory: u32,
    initial: u32,
    keys: Arc<[ObsKey]>,
    /// `cells[q * keys.len() + k]`
    cells: Vec<Option<Cell>>,
}

impl MooreStrategy {
    /// A strategy over `keys`; `cells` is indexed memory-major.
    pub fn new(memory: u32, initial: u32, keys: Arc<[ObsKey]>, cells: Vec<Option<Cell>>) -> Result<Self> {
        if memory == 0 || initial >= memory {
            return Err(Error::BadStrategy("memory must be >= 1 and contain the initial cell".into()));
        }
        if cells.len() != memory as usize * keys.len() {
            return Err(Error::LengthMismatch { expected: memory as usize * keys.len(), got: cells.len() });
        }
        if cells.iter().flatten().any(|c| c.next >= memory) {
            return Err(Error::BadStrategy("memory update out of range".into()));
        }
        Ok(Self { memory, initial, keys, cells })
    }

    /// Memoryless strategy from one action per key.
    pub fn memoryless(keys: Arc<[ObsKey]>, actions: &[ActionId]) -> Result<Self> {
        let cells = actions.iter().map(|&action| Some(Cell { action, next: 0 })).collect();
        Self::new(1, 0, keys, cells)
    }

    pub fn memory(&self) -> u32 {
        self.memory
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn keys(&self) -> &[ObsKey] {
        &self.keys
    }

    pub(crate) fn shares_keys(&self, ks: &KeySpace) -> bool {
        *self.keys == *ks.keys()
    }

    pub fn cell(&self, q: u32, k: usize) -> Result<Cell> {
        self.cells
            .get(q as usize * self.keys.len() + k)
            .copied()
            .flatten()
            .ok_or_else(|| Error::UndefinedKey(self.keys.get(k).map_or_else(String::new, |k| k.to_string())))
    }

    pub fn lookup(&self, q: u32, key: &ObsKey) -> Result<Cell> {
        let k = self.keys.binary_search(key).map_err(|_| Error::UndefinedKey(key.to_string()))?;
        self.cell(q, k)
    }

    /// Action played at the end of an observation stream.
    pub fn action_after(&self, history: &[ObsKey]) -> Result<ActionId> {
        let (last, earlier) =
            history.split_last().ok_or_else(|| Error::BadStrategy("empty history".into()))?;
        let mut q = self.initial;
        for key in earlier {
            q = self.lookup(q, key)?.next;
        }
        Ok(self.lookup(q, last)?.action)
    }

    /// Number of table entries, `m · #keys` for a total strategy.
    pub fn table_size(&self) -> usize {
        self.cells.iter().flatten().count()
    }

    pub fn to_file(&self, arena: &Arena) -> StrategyFile {
        let nk = self.keys.len();
        let table = self
            .cells
            .iter()
            .enumerate()
            .filter_map(|(idx, c)| {
                let c = c.as_ref()?;
                let (q, k) = (idx / nk, idx % nk);
                Some((
                    format!("{q},{}", self.keys[k]),
                    CellFile { act: arena.action_name(c.action).to_string(), next: c.next },
                ))
            })
            .collect();
        StrategyFile { memory: self.memory, initial: self.initial, table }
    }

    /// Rebuilds a strategy over `space`'s keys from its file form, checking
    /// that every action is allowed in its information set.
    pub fn from_file(file: &StrategyFile, arena: &Arena, space: &KeySpace) -> Result<Self> {
        let nk = space.len();
        let mut cells = vec![None; file.memory as usize * nk];
        for (entry, cell) in &file.table {
            let (q, key) = entry
                .split_once(',')
                .ok_or_else(|| Error::BadStrategy(format!("bad table key `{entry}`")))?;
            let q: u32 =
                q.parse().map_err(|_| Error::BadStrategy(format!("bad memory index in `{entry}`")))?;
            if q >= file.memory {
                return Err(Error::BadStrategy(format!("memory index out of range in `{entry}`")));
            }
            let k = space
                .position(&ObsKey::new(key))
                .ok_or_else(|| Error::BadStrategy(format!("observation `{key}` is not in the domain")))?;
            let action = arena.action(&cell.act).ok_or_else(|| Error::UnknownAction(cell.act.clone()))?;
            if !space.allowed(k).contains(&action) {
                return Err(Error::BadStrategy(format!(
                    "action `{}` is not available throughout `{key}`",
                    cell.act
                )));
            }
            cells[q as usize * nk + k] = Some(Cell { action, next: cell.next });
        }
        Self::new(file.memory, file.initial, space.shared_keys(), cells)
    }
}

/// `{ "memory": m, "initial": q0, "table": { "q,obskey": {"act": a, "next": q'} } }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub memory: u32,
    pub initial: u32,
    pub table: BTreeMap<String, CellFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellFile {
    pub act: String,
    pub next: u32,
}

/// All total strategies with memory `m` over a key space, in canonical order.
///
/// Cells are ordered memory-major, then by key; each cell's choices are
/// ordered by action (declared order) and then by memory target. The stream
/// is lexicographic in the cell tuple with the first cell most significant.
#[derive(Debug, Clone)]
pub struct CandidateSpace {
    memory: u32,
    keys: Arc<[ObsKey]>,
    allowed: Vec<Vec<ActionId>>,
    count: Option<u64>,
}

impl CandidateSpace {
    pub fn new(space: &KeySpace, memory: u32) -> Result<Self> {
        if memory == 0 {
            return Err(Error::BadStrategy("memory must be >= 1".into()));
        }
        let allowed: Vec<Vec<ActionId>> = (0..space.len()).map(|k| space.allowed(k).to_vec()).collect();
        let count = (0..memory)
            .flat_map(|_| allowed.iter())
            .try_fold(1u64, |acc, a| acc.checked_mul(a.len() as u64 * memory as u64));
        Ok(Self { memory, keys: space.shared_keys(), allowed, count })
    }

    /// Exact number of candidates, `None` when it does not fit in `u64`.
    pub fn count(&self) -> Option<u64> {
        self.count
    }

    fn radix(&self, cell: usize) -> u64 {
        self.allowed[cell % self.keys.len()].len() as u64 * self.memory as u64
    }

    pub fn decode(&self, mut index: u64) -> MooreStrategy {
        let nk = self.keys.len();
        let total = self.memory as usize * nk;
        let mut cells = vec![None; total];
        for cell in (0..total).rev() {
            let radix = self.radix(cell);
            let choice = index % radix;
            index /= radix;
            let m = self.memory as u64;
            cells[cell] = Some(Cell {
                action: self.allowed[cell % nk][(choice / m) as usize],
                next: (choice % m) as u32,
            });
        }
        MooreStrategy { memory: self.memory, initial: 0, keys: Arc::clone(&self.keys), cells }
    }

    pub fn iter(&self) -> impl Iterator<Item = MooreStrategy> + '_ {
        (0..self.count.expect("candidate count fits in u64")).map(move |i| self.decode(i))
    }
}

/// Candidate stream for symmetric profiles.
pub fn enumerate_strategies(space: &KeySpace, m: u32) -> Result<CandidateSpace> {
    CandidateSpace::new(space, m)
}

pub fn candidate_count(space: &KeySpace, m: u32) -> Result<Option<u64>> {
    Ok(CandidateSpace::new(space, m)?.count())
}

/// Joint state of a profile run: configuration plus every player's memory.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProfileState {
    /// Index into the reachable configurations.
    pub config: u32,
    pub memory: Vec<u32>,
}

/// A strategy profile where player `i` runs `members[i]` on its own
/// observation keys.
#[derive(Debug, Clone)]
pub struct Profile<'a> {
    game: &'a GameNetwork,
    reach: &'a Reachable,
    members: Vec<(&'a MooreStrategy, &'a KeySpace)>,
}

impl<'a> Profile<'a> {
    /// Every player runs `sigma0` on its own view.
    pub fn symmetric(
        game: &'a GameNetwork,
        reach: &'a Reachable,
        sigma0: &'a MooreStrategy,
        space: &'a KeySpace,
    ) -> Result<Self> {
        if !sigma0.shares_keys(space) {
            return Err(Error::BadStrategy("strategy is not defined over this key space".into()));
        }
        Ok(Self { game, reach, members: vec![(sigma0, space); game.n()] })
    }

    pub fn general(
        game: &'a GameNetwork,
        reach: &'a Reachable,
        strategies: &'a [MooreStrategy],
        spaces: &'a [KeySpace],
    ) -> Result<Self> {
        let n = game.n();
        if strategies.len() != n || spaces.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: strategies.len() });
        }
        if strategies.iter().zip(spaces).any(|(s, ks)| !s.shares_keys(ks)) {
            return Err(Error::BadStrategy("strategy is not defined over its player's key space".into()));
        }
        Ok(Self { game, reach, members: strategies.iter().zip(spaces).collect() })
    }

    pub fn game(&self) -> &'a GameNetwork {
        self.game
    }

    pub fn reach(&self) -> &'a Reachable {
        self.reach
    }

    pub fn initial_state(&self) -> ProfileState {
        self.state_at(self.reach.index_of(self.game.initial()).expect("initial is reachable"))
    }

    pub fn state_at(&self, config: u32) -> ProfileState {
        ProfileState { config, memory: self.members.iter().map(|(s, _)| s.initial()).collect() }
    }

    fn cell(&self, i: usize, state: &ProfileState) -> Result<Cell> {
        let (strategy, space) = self.members[i];
        let k = space.key_of(i, state.config).ok_or(Error::IndexOutOfRange(i))?;
        strategy.cell(state.memory[i], k)
    }

    /// Action of player `i` in `state`.
    pub fn action(&self, i: usize, state: &ProfileState) -> Result<ActionId> {
        Ok(self.cell(i, state)?.action)
    }

    /// One step of the profile; a deviator plays the given action and its
    /// memory stays frozen.
    pub fn step(&self, state: &ProfileState, deviation: Option<(usize, ActionId)>) -> Result<ProfileState> {
        let n = self.game.n();
        let mut moves = Vec::with_capacity(n);
        let mut memory = Vec::with_capacity(n);
        for i in 0..n {
            match deviation {
                Some((d, a)) if d == i => {
                    moves.push(a);
                    memory.push(state.memory[i]);
                }
                _ => {
                    let c = self.cell(i, state)?;
                    moves.push(c.action);
                    memory.push(c.next);
                }
            }
        }
        let next = product_step(self.game.arena(), self.reach.config(state.config), &moves)?;
        let config =
            self.reach.index_of(&next).expect("successors of reachable configurations are reachable");
        Ok(ProfileState { config, memory })
    }

    /// The unique play from `from`, cut where a profile state repeats.
    pub fn outcome_from(&self, from: &Configuration) -> Result<Lasso> {
        let start = self
            .reach
            .index_of(from)
            .ok_or_else(|| Error::BadInitial("configuration is not reachable".into()))?;
        let mut seen: HashMap<ProfileState, usize> = HashMap::new();
        let mut trace: Vec<u32> = Vec::new();
        let mut state = self.state_at(start);
        loop {
            if let Some(&loop_start) = seen.get(&state) {
                let configs: Vec<Configuration> =
                    trace.iter().map(|&c| self.reach.config(c).clone()).collect();
                let (prefix, cycle) = configs.split_at(loop_start);
                return Ok(Lasso::new(prefix.to_vec(), cycle.to_vec()));
            }
            seen.insert(state.clone(), trace.len());
            trace.push(state.config);
            state = self.step(&state, None)?;
        }
    }

    pub fn outcome(&self) -> Result<Lasso> {
        self.outcome_from(self.game.initial())
    }
}

/// Outcome of the symmetric profile generated by `sigma0` from `from`.
pub fn outcome_lasso(
    g: &GameNetwork,
    reach: &Reachable,
    space: &KeySpace,
    sigma0: &MooreStrategy,
    from: &Configuration,
) -> Result<Lasso> {
    Profile::symmetric(g, reach, sigma0, space)?.outcome_from(from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::observation::obs_key;
    use std::collections::HashSet;

    struct Setup {
        g: GameNetwork,
        reach: Reachable,
        space: KeySpace,
    }

    fn setup(g: GameNetwork) -> Setup {
        let reach = g.reachable(1000).unwrap();
        let space = KeySpace::symmetric(&g, g.rep(), &reach).unwrap();
        Setup { g, reach, space }
    }

    fn key(s: &Setup, names: &[&str]) -> usize {
        let t = Configuration::from_names(s.g.arena(), names).unwrap();
        s.space.position(&obs_key(&s.g, s.g.rep(), 0, &t).unwrap()).unwrap()
    }

    /// Memoryless strategy playing `default` except on the listed keys.
    fn memoryless(s: &Setup, default: &str, overrides: &[(&[&str], &str)]) -> MooreStrategy {
        let ar = s.g.arena();
        let mut acts = vec![ar.action(default).unwrap(); s.space.len()];
        for (cfg, a) in overrides {
            acts[key(s, cfg)] = ar.action(a).unwrap();
        }
        MooreStrategy::memoryless(s.space.shared_keys(), &acts).unwrap()
    }

    fn names(s: &Setup, configs: &[Configuration]) -> Vec<String> {
        configs.iter().map(|c| c.names(s.g.arena()).concat()).collect()
    }

    #[test]
    fn candidate_counts() {
        let s = setup(fixtures::toggle());
        assert_eq!(s.space.len(), 4);
        assert_eq!(candidate_count(&s.space, 1).unwrap(), Some(16));
        let s = setup(fixtures::toggle_blind());
        assert_eq!(s.space.len(), 1);
        assert_eq!(candidate_count(&s.space, 1).unwrap(), Some(2));
        assert_eq!(candidate_count(&s.space, 2).unwrap(), Some(16));
    }

    #[test]
    fn enumeration_is_complete_and_unique() {
        for (g, m) in [
            (fixtures::toggle(), 1),
            (fixtures::toggle_blind(), 1),
            (fixtures::toggle_blind(), 2),
            (fixtures::penny(), 2),
        ] {
            let s = setup(g);
            let cands = enumerate_strategies(&s.space, m).unwrap();
            let all: Vec<_> = cands.iter().map(|c| c.cells.clone()).collect();
            assert_eq!(all.len() as u64, cands.count().unwrap());
            let unique: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(unique.len(), all.len());
            for c in cands.iter() {
                for (idx, cell) in c.cells.iter().enumerate() {
                    let cell = cell.unwrap();
                    assert!(s.space.allowed(idx % s.space.len()).contains(&cell.action));
                    assert!(cell.next < m);
                }
            }
        }
    }

    #[test]
    fn first_candidate_uses_first_choices() {
        let s = setup(fixtures::toggle_blind());
        let cands = enumerate_strategies(&s.space, 2).unwrap();
        let stay = s.g.arena().action("stay").unwrap();
        let first = cands.decode(0);
        assert_eq!(first.cell(0, 0).unwrap(), Cell { action: stay, next: 0 });
        assert_eq!(first.cell(1, 0).unwrap(), Cell { action: stay, next: 0 });
        // last cell varies fastest
        let second = cands.decode(1);
        assert_eq!(second.cell(1, 0).unwrap(), Cell { action: stay, next: 1 });
    }

    #[test]
    fn toggle_diagonal_go() {
        let s = setup(fixtures::toggle());
        let sigma = memoryless(&s, "stay", &[(&["a", "a"], "go")]);
        let w = outcome_lasso(&s.g, &s.reach, &s.space, &sigma, s.g.initial()).unwrap();
        assert_eq!(names(&s, &w.prefix), ["aa"]);
        assert_eq!(names(&s, &w.cycle), ["bb"]);
    }

    #[test]
    fn penny_heads_on_diagonal() {
        let s = setup(fixtures::penny());
        let sigma = memoryless(&s, "stay", &[(&["i", "i"], "H")]);
        let w = outcome_lasso(&s.g, &s.reach, &s.space, &sigma, s.g.initial()).unwrap();
        assert_eq!(names(&s, &w.prefix), ["ii"]);
        assert_eq!(names(&s, &w.cycle), ["hh"]);
    }

    #[test]
    fn blind_go_then_stay() {
        let s = setup(fixtures::toggle_blind());
        let ar = s.g.arena();
        let (stay, go) = (ar.action("stay").unwrap(), ar.action("go").unwrap());
        let sigma = MooreStrategy::new(
            2,
            0,
            s.space.shared_keys(),
            vec![Some(Cell { action: go, next: 1 }), Some(Cell { action: stay, next: 1 })],
        )
        .unwrap();
        let w = outcome_lasso(&s.g, &s.reach, &s.space, &sigma, s.g.initial()).unwrap();
        assert_eq!(names(&s, &w.prefix), ["aa"]);
        assert_eq!(names(&s, &w.cycle), ["bb"]);
        assert_eq!(sigma.action_after(&[ObsKey::new("")]).unwrap(), go);
        assert_eq!(sigma.action_after(&[ObsKey::new(""), ObsKey::new("")]).unwrap(), stay);
    }

    #[test]
    fn outcome_closes_its_cycle() {
        let s = setup(fixtures::toggle());
        let cands = enumerate_strategies(&s.space, 1).unwrap();
        for sigma in cands.iter() {
            let profile = Profile::symmetric(&s.g, &s.reach, &sigma, &s.space).unwrap();
            let w = profile.outcome().unwrap();
            // replay prefix · cycle · cycle
            let mut state = profile.initial_state();
            let expected = w.unroll(w.prefix.len() + 2 * w.cycle.len());
            for t in &expected {
                assert_eq!(s.reach.config(state.config), t);
                state = profile.step(&state, None).unwrap();
            }
            assert!(w.len() <= s.reach.len());
        }
    }

    #[test]
    fn file_round_trip_and_errors() {
        let s = setup(fixtures::toggle_blind());
        let cands = enumerate_strategies(&s.space, 2).unwrap();
        let sigma = cands.decode(11);
        let file = sigma.to_file(s.g.arena());
        assert_eq!(file.table.len(), 2);
        let text = serde_json::to_string_pretty(&file).unwrap();
        let back: StrategyFile = serde_json::from_str(&text).unwrap();
        let again = MooreStrategy::from_file(&back, s.g.arena(), &s.space).unwrap();
        assert_eq!(again, sigma);
        assert_eq!(serde_json::to_string_pretty(&again.to_file(s.g.arena())).unwrap(), text);

        let mut bad = file.clone();
        bad.table.insert("0,id:[a]".into(), CellFile { act: "go".into(), next: 0 });
        assert!(matches!(MooreStrategy::from_file(&bad, s.g.arena(), &s.space), Err(Error::BadStrategy(_))));
        let mut bad = file;
        bad.table.get_mut("1,").unwrap().next = 5;
        assert!(MooreStrategy::from_file(&bad, s.g.arena(), &s.space).is_err());
    }

    #[test]
    fn missing_entry_is_undefined_key() {
        let s = setup(fixtures::toggle());
        let sigma = MooreStrategy::new(1, 0, s.space.shared_keys(), vec![None; 4]).unwrap();
        let profile = Profile::symmetric(&s.g, &s.reach, &sigma, &s.space).unwrap();
        assert_eq!(profile.outcome(), Err(Error::UndefinedKey("id:[a,a]".into())));
    }

    #[test]
    fn table_size_is_memory_times_keys() {
        let s = setup(fixtures::toggle());
        for m in 1..=3 {
            let sigma = enumerate_strategies(&s.space, m).unwrap().decode(0);
            assert_eq!(sigma.table_size(), m as usize * s.space.len());
        }
    }
}

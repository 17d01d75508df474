//! Game networks and their JSON description.
//!
//! ```json
//! { "arena": { "states": [...], "actions": [...],
//!              "mov": { "s": ["a", ...] }, "tab": { "s": { "a": "s'" } } },
//!   "players": 2, "base_perms": [[0,1],[1,0]],
//!   "observation": [{"type":"id","players":[0,1]}],
//!   "objective": "F at(0,b)", "initial": ["a","a"],
//!   "winners": [], "losers": [] }
//! ```
//!
//! Unknown keys are rejected. A player's available actions are read off its
//! own local state: `Mov'(t, i) = Mov(t[i])`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, Configuration, Reachable, StateTag};
use crate::error::{Error, Result};
use crate::ltl::{self, Formula};
use crate::observation::{ObsAtom, ObsTemplate};
use crate::symmetry::{build_representation, SymmetricRepresentation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaFile {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub mov: BTreeMap<String, Vec<String>>,
    pub tab: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<BTreeMap<String, TagFile>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagFile {
    pub base: String,
    pub copy: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum AtomFile {
    Id { players: Vec<usize> },
    Count { players: Vec<usize> },
    Copy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub arena: ArenaFile,
    pub players: usize,
    pub base_perms: Vec<Vec<usize>>,
    pub observation: Vec<AtomFile>,
    pub objective: String,
    pub initial: Vec<String>,
    #[serde(default)]
    pub winners: Vec<usize>,
    #[serde(default)]
    pub losers: Vec<usize>,
}

impl GameFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("game file serializes");
        s.push('\n');
        s
    }
}

/// A validated game network.
#[derive(Debug, Clone)]
pub struct GameNetwork {
    arena: Arena,
    n: usize,
    base_perms: Vec<Vec<usize>>,
    rep: SymmetricRepresentation,
    observation: ObsTemplate,
    objective: Formula,
    initial: Configuration,
    winners: BTreeSet<usize>,
    losers: BTreeSet<usize>,
}

impl GameNetwork {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        arena: Arena,
        n: usize,
        base_perms: Vec<Vec<usize>>,
        observation: ObsTemplate,
        objective: Formula,
        initial: Configuration,
        winners: BTreeSet<usize>,
        losers: BTreeSet<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGame);
        }
        let rep = build_representation(n, &base_perms).map_err(|e| match e {
            Error::NotABijection(i) | Error::BaseAnchorViolated(i) => Error::BadPermutation(i),
            Error::LengthMismatch { got, .. } => Error::BadPermutation(got.min(n)),
            other => other,
        })?;
        observation.validate(&arena, n)?;
        if let Some(&(k, _)) = objective.atoms().iter().find(|(k, _)| *k >= n) {
            return Err(Error::PlayerIndexOutOfRange(k));
        }
        if initial.len() != n {
            return Err(Error::BadInitial(format!("expected {n} states, got {}", initial.len())));
        }
        if let Some(&k) = winners.iter().chain(&losers).find(|&&k| k >= n) {
            return Err(Error::IndexOutOfRange(k));
        }
        if !winners.is_disjoint(&losers) {
            return Err(Error::ConflictingConstraints);
        }
        Ok(Self { arena, n, base_perms, rep, observation, objective, initial, winners, losers })
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_perms(&self) -> &[Vec<usize>] {
        &self.base_perms
    }

    pub fn representation(&self) -> SymmetricRepresentation {
        self.rep.clone()
    }

    pub fn rep(&self) -> &SymmetricRepresentation {
        &self.rep
    }

    pub fn observation(&self) -> &ObsTemplate {
        &self.observation
    }

    /// Player 0's objective.
    pub fn objective(&self) -> &Formula {
        &self.objective
    }

    pub fn initial(&self) -> &Configuration {
        &self.initial
    }

    pub fn winners(&self) -> &BTreeSet<usize> {
        &self.winners
    }

    pub fn losers(&self) -> &BTreeSet<usize> {
        &self.losers
    }

    pub fn constraints(&self) -> Constraints {
        Constraints { winners: self.winners.clone(), losers: self.losers.clone() }
    }

    pub fn reachable(&self, budget: usize) -> Result<Reachable> {
        Reachable::explore(&self.arena, &self.initial, budget)
    }

    pub fn to_file(&self) -> GameFile {
        let ar = &self.arena;
        let mov = (0..ar.num_states() as u32)
            .map(|s| {
                let acts = ar.mov(s).iter().map(|&a| ar.action_name(a).to_string()).collect();
                (ar.state_name(s).to_string(), acts)
            })
            .collect();
        let tab = (0..ar.num_states() as u32)
            .map(|s| {
                let row = ar
                    .mov(s)
                    .iter()
                    .map(|&a| {
                        let t = ar.tab(s, a).expect("total");
                        (ar.action_name(a).to_string(), ar.state_name(t).to_string())
                    })
                    .collect();
                (ar.state_name(s).to_string(), row)
            })
            .collect();
        let tags = ar.tags().map(|tags| {
            tags.iter()
                .enumerate()
                .map(|(s, t)| {
                    (ar.state_name(s as u32).to_string(), TagFile { base: t.base.clone(), copy: t.copy })
                })
                .collect()
        });
        GameFile {
            arena: ArenaFile {
                states: ar.state_names().to_vec(),
                actions: ar.action_names().to_vec(),
                mov,
                tab,
                tags,
            },
            players: self.n,
            base_perms: self.base_perms.clone(),
            observation: self
                .observation
                .atoms()
                .iter()
                .map(|a| match a {
                    ObsAtom::Id(p) => AtomFile::Id { players: p.clone() },
                    ObsAtom::Count(p) => AtomFile::Count { players: p.clone() },
                    ObsAtom::Copy => AtomFile::Copy,
                })
                .collect(),
            objective: self.objective.display(ar).to_string(),
            initial: self.initial.names(ar).into_iter().map(String::from).collect(),
            winners: self.winners.iter().copied().collect(),
            losers: self.losers.iter().copied().collect(),
        }
    }
}

/// Required winners `W` and losers `L`; other players are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Constraints {
    pub winners: BTreeSet<usize>,
    pub losers: BTreeSet<usize>,
}

impl Constraints {
    pub fn new(winners: impl IntoIterator<Item = usize>, losers: impl IntoIterator<Item = usize>) -> Self {
        Self { winners: winners.into_iter().collect(), losers: losers.into_iter().collect() }
    }

    /// `W = [n]`.
    pub fn positive(n: usize) -> Self {
        Self::new(0..n, [])
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if let Some(&k) = self.winners.iter().chain(&self.losers).find(|&&k| k >= n) {
            return Err(Error::IndexOutOfRange(k));
        }
        if !self.winners.is_disjoint(&self.losers) {
            return Err(Error::ConflictingConstraints);
        }
        Ok(())
    }
}

/// Checks every well-formedness clause of a raw description.
pub fn validate_network(raw: &GameFile) -> Result<GameNetwork> {
    let a = &raw.arena;
    for s in a.mov.keys().chain(a.tab.keys()) {
        if !a.states.contains(s) {
            return Err(Error::UnknownState(s.clone()));
        }
    }
    // states absent from `mov` get an empty move set
    let mov = a.states.iter().map(|s| {
        (s.as_str(), a.mov.get(s).map(|v| v.iter().map(String::as_str).collect()).unwrap_or_default())
    });
    let tab = a
        .tab
        .iter()
        .flat_map(|(s, row)| row.iter().map(move |(act, t)| (s.as_str(), act.as_str(), t.as_str())));
    let mut arena = Arena::new(a.states.clone(), a.actions.clone(), mov, tab)?;
    if let Some(tags) = &a.tags {
        let list = a
            .states
            .iter()
            .map(|s| {
                tags.get(s)
                    .map(|t| StateTag { base: t.base.clone(), copy: t.copy })
                    .ok_or_else(|| Error::BadObservation(format!("state `{s}` has no tag")))
            })
            .collect::<Result<Vec<_>>>()?;
        if tags.len() != a.states.len() {
            return Err(Error::BadObservation("tags name unknown states".into()));
        }
        arena = arena.with_tags(list)?;
    }

    let n = raw.players;
    if n == 0 {
        return Err(Error::EmptyGame);
    }
    if raw.base_perms.len() != n {
        return Err(Error::BadPermutation(raw.base_perms.len().min(n)));
    }
    let observation = ObsTemplate::new(
        raw.observation
            .iter()
            .map(|atom| match atom {
                AtomFile::Id { players } => ObsAtom::Id(players.clone()),
                AtomFile::Count { players } => ObsAtom::Count(players.clone()),
                AtomFile::Copy => ObsAtom::Copy,
            })
            .collect(),
    );
    let objective = ltl::parse(&raw.objective, &arena, n)?;
    if raw.initial.len() != n {
        return Err(Error::BadInitial(format!("expected {n} states, got {}", raw.initial.len())));
    }
    let initial = raw
        .initial
        .iter()
        .map(|s| arena.state(s).ok_or_else(|| Error::BadInitial(format!("unknown state `{s}`"))))
        .collect::<Result<Vec<_>>>()
        .map(Configuration)?;
    GameNetwork::new(
        arena,
        n,
        raw.base_perms.clone(),
        observation,
        objective,
        initial,
        raw.winners.iter().copied().collect(),
        raw.losers.iter().copied().collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn toggle_is_accepted() {
        let raw = GameFile::from_json(fixtures::TOGGLE_JSON).unwrap();
        let g = validate_network(&raw).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.arena().num_states(), 2);
        assert_eq!(g.initial().names(g.arena()), ["a", "a"]);
    }

    #[test]
    fn empty_move_set() {
        let mut raw = GameFile::from_json(fixtures::TOGGLE_JSON).unwrap();
        raw.arena.mov.insert("a".into(), vec![]);
        raw.arena.tab.remove("a");
        assert_eq!(validate_network(&raw).unwrap_err(), Error::EmptyMoveSet("a".into()));
    }

    #[test]
    fn penny_identity_base_perm() {
        let mut raw = GameFile::from_json(fixtures::PENNY_JSON).unwrap();
        raw.base_perms[1] = vec![0, 1];
        assert_eq!(validate_network(&raw).unwrap_err(), Error::BadPermutation(1));
    }

    #[test]
    fn other_clauses() {
        let base = GameFile::from_json(fixtures::TOGGLE_JSON).unwrap();

        let mut raw = base.clone();
        raw.arena.tab.get_mut("b").unwrap().remove("go");
        assert_eq!(validate_network(&raw).unwrap_err(), Error::PartialTransition("b".into(), "go".into()));

        let mut raw = base.clone();
        raw.initial = vec!["a".into()];
        assert!(matches!(validate_network(&raw), Err(Error::BadInitial(_))));

        let mut raw = base.clone();
        raw.initial = vec!["a".into(), "zz".into()];
        assert!(matches!(validate_network(&raw), Err(Error::BadInitial(_))));

        let mut raw = base.clone();
        raw.winners = vec![0];
        raw.losers = vec![0, 1];
        assert_eq!(validate_network(&raw).unwrap_err(), Error::ConflictingConstraints);

        let mut raw = base.clone();
        raw.observation = vec![AtomFile::Id { players: vec![2] }];
        assert!(matches!(validate_network(&raw), Err(Error::BadObservation(_))));

        let mut raw = base.clone();
        raw.observation = vec![AtomFile::Copy];
        assert!(matches!(validate_network(&raw), Err(Error::BadObservation(_))));

        let mut raw = base;
        raw.objective = "F at(2,b)".into();
        assert_eq!(validate_network(&raw).unwrap_err(), Error::PlayerIndexOutOfRange(2));
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = fixtures::TOGGLE_JSON.replacen("\"players\"", "\"extra\": 1, \"players\"", 1);
        assert!(matches!(GameFile::from_json(&text), Err(Error::Json(_))));
    }

    #[test]
    fn file_round_trip() {
        for g in fixtures::all() {
            let file = g.to_file();
            let again = validate_network(&GameFile::from_json(&file.to_json()).unwrap()).unwrap();
            assert_eq!(again.to_file(), file);
            assert_eq!(again.objective(), g.objective());
        }
    }
}

//! One-player arenas, configurations and the product-game semantics.
//!
//! Every player runs a private copy of the same [`Arena`]. A
//! [`Configuration`] holds one local state per player, and the product game
//! moves all components independently: player `k`'s next state depends only
//! on its own state and its own action.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

pub type StateId = u32;
pub type ActionId = u32;

/// Copy tag attached to states of a desymmetrized arena.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateTag {
    pub base: String,
    pub copy: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    states: Vec<String>,
    actions: Vec<String>,
    state_index: HashMap<String, StateId>,
    action_index: HashMap<String, ActionId>,
    /// Available actions per state, in declared action order.
    mov: Vec<Vec<ActionId>>,
    /// `tab[s][a]`, defined exactly where `a ∈ mov(s)`.
    tab: Vec<Vec<Option<StateId>>>,
    tags: Option<Vec<StateTag>>,
}

pub(crate) fn check_identifier(id: &str) -> Result<()> {
    let ok =
        !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '@' | '.' | '-'));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidIdentifier(id.to_string()))
    }
}

fn index_of(names: &[String]) -> Result<HashMap<String, u32>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        check_identifier(name)?;
        if index.insert(name.clone(), i as u32).is_some() {
            return Err(Error::DuplicateIdentifier(name.clone()));
        }
    }
    Ok(index)
}

impl Arena {
    /// Builds an arena from named parts.
    ///
    /// `mov` and `tab` are keyed by names. A state missing from `mov` counts as
    /// having an empty move set.
    pub fn new<'a>(
        states: Vec<String>,
        actions: Vec<String>,
        mov: impl IntoIterator<Item = (&'a str, Vec<&'a str>)>,
        tab: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyGame);
        }
        let state_index = index_of(&states)?;
        let action_index = index_of(&actions)?;
        let lookup_state =
            |s: &str| state_index.get(s).copied().ok_or_else(|| Error::UnknownState(s.to_string()));
        let lookup_action =
            |a: &str| action_index.get(a).copied().ok_or_else(|| Error::UnknownAction(a.to_string()));

        let mut available = vec![vec![false; actions.len()]; states.len()];
        for (s, acts) in mov {
            let s = lookup_state(s)?;
            for a in acts {
                available[s as usize][lookup_action(a)? as usize] = true;
            }
        }
        let mov: Vec<Vec<ActionId>> = available
            .iter()
            .map(|row| (0..actions.len() as ActionId).filter(|&a| row[a as usize]).collect())
            .collect();
        for (s, acts) in mov.iter().enumerate() {
            if acts.is_empty() {
                return Err(Error::EmptyMoveSet(states[s].clone()));
            }
        }

        let mut table = vec![vec![None; actions.len()]; states.len()];
        for (s, a, t) in tab {
            let (si, ai, ti) = (lookup_state(s)?, lookup_action(a)?, lookup_state(t)?);
            if !available[si as usize][ai as usize] {
                return Err(Error::SpuriousTransition(s.to_string(), a.to_string()));
            }
            table[si as usize][ai as usize] = Some(ti);
        }
        for (s, acts) in mov.iter().enumerate() {
            for &a in acts {
                if table[s][a as usize].is_none() {
                    return Err(Error::PartialTransition(states[s].clone(), actions[a as usize].clone()));
                }
            }
        }

        Ok(Self { states, actions, state_index, action_index, mov, tab: table, tags: None })
    }

    pub(crate) fn with_tags(mut self, tags: Vec<StateTag>) -> Result<Self> {
        if tags.len() != self.states.len() {
            return Err(Error::LengthMismatch { expected: self.states.len(), got: tags.len() });
        }
        for tag in &tags {
            check_identifier(&tag.base)?;
        }
        self.tags = Some(tags);
        Ok(self)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s as usize]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a as usize]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn action_names(&self) -> &[String] {
        &self.actions
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn action(&self, name: &str) -> Option<ActionId> {
        self.action_index.get(name).copied()
    }

    /// Available actions in declared order.
    pub fn mov(&self, s: StateId) -> &[ActionId] {
        &self.mov[s as usize]
    }

    pub fn is_available(&self, s: StateId, a: ActionId) -> bool {
        self.mov[s as usize].contains(&a)
    }

    pub fn tab(&self, s: StateId, a: ActionId) -> Option<StateId> {
        self.tab.get(s as usize).and_then(|row| row.get(a as usize)).copied().flatten()
    }

    pub fn tags(&self) -> Option<&[StateTag]> {
        self.tags.as_deref()
    }

    pub fn tag(&self, s: StateId) -> Option<&StateTag> {
        self.tags.as_ref().map(|t| &t[s as usize])
    }
}

/// One local state per player; position `k` is player `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(pub Vec<StateId>);

impl Configuration {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: usize) -> StateId {
        self.0[k]
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    pub fn from_names(arena: &Arena, names: &[&str]) -> Result<Self> {
        names
            .iter()
            .map(|s| arena.state(s).ok_or_else(|| Error::UnknownState(s.to_string())))
            .collect::<Result<Vec<_>>>()
            .map(Configuration)
    }

    pub fn names<'a>(&self, arena: &'a Arena) -> Vec<&'a str> {
        self.0.iter().map(|&s| arena.state_name(s)).collect()
    }

    pub fn display<'a>(&'a self, arena: &'a Arena) -> ConfigDisplay<'a> {
        ConfigDisplay { config: self, arena }
    }
}

pub struct ConfigDisplay<'a> {
    config: &'a Configuration,
    arena: &'a Arena,
}

impl fmt::Display for ConfigDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, &s) in self.config.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.arena.state_name(s))?;
        }
        write!(f, ")")
    }
}

/// `Mov'(t, i) = Mov(t[i])`: a player's options depend on its own local state.
pub fn product_moves<'a>(arena: &'a Arena, t: &Configuration, i: usize) -> Result<&'a [ActionId]> {
    if i >= t.len() {
        return Err(Error::IndexOutOfRange(i));
    }
    Ok(arena.mov(t.get(i)))
}

/// Componentwise successor of `t` under the move vector `moves`.
pub fn product_step(arena: &Arena, t: &Configuration, moves: &[ActionId]) -> Result<Configuration> {
    if moves.len() != t.len() {
        return Err(Error::LengthMismatch { expected: t.len(), got: moves.len() });
    }
    t.0.iter()
        .zip(moves)
        .enumerate()
        .map(|(k, (&s, &a))| arena.tab(s, a).ok_or(Error::IllegalMove(k)))
        .collect::<Result<Vec<_>>>()
        .map(Configuration)
}

/// Configurations reachable from an initial one under all legal move vectors.
#[derive(Debug, Clone)]
pub struct Reachable {
    configs: Vec<Configuration>,
    index: HashMap<Configuration, u32>,
}

impl Reachable {
    /// Breadth-first closure. Successors are generated by the move vectors in
    /// odometer order over the declared action order, so indices are stable.
    pub fn explore(arena: &Arena, initial: &Configuration, budget: usize) -> Result<Self> {
        let mut configs = vec![initial.clone()];
        let mut index = HashMap::from([(initial.clone(), 0u32)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(ci) = queue.pop_front() {
            let t = configs[ci].clone();
            for succ in successors(arena, &t) {
                if !index.contains_key(&succ) {
                    if configs.len() >= budget {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {budget} reachable configurations"
                        )));
                    }
                    index.insert(succ.clone(), configs.len() as u32);
                    queue.push_back(configs.len());
                    configs.push(succ);
                }
            }
        }
        Ok(Self { configs, index })
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn config(&self, idx: u32) -> &Configuration {
        &self.configs[idx as usize]
    }

    pub fn index_of(&self, t: &Configuration) -> Option<u32> {
        self.index.get(t).copied()
    }
}

/// All successors of `t`, one per legal move vector, in odometer order.
pub fn successors<'a>(arena: &'a Arena, t: &'a Configuration) -> impl Iterator<Item = Configuration> + 'a {
    let n = t.len();
    let mut digits = vec![0usize; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let next = Configuration(
            (0..n)
                .map(|k| {
                    let s = t.get(k);
                    let a = arena.mov(s)[digits[k]];
                    arena.tab(s, a).expect("available actions have transitions")
                })
                .collect(),
        );
        // advance odometer, last player fastest
        done = true;
        for k in (0..n).rev() {
            digits[k] += 1;
            if digits[k] < arena.mov(t.get(k)).len() {
                done = false;
                break;
            }
            digits[k] = 0;
        }
        Some(next)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toggle() -> Arena {
        Arena::new(
            vec!["a".into(), "b".into()],
            vec!["stay".into(), "go".into()],
            [("a", vec!["stay", "go"]), ("b", vec!["stay", "go"])],
            [("a", "stay", "a"), ("a", "go", "b"), ("b", "stay", "b"), ("b", "go", "a")],
        )
        .unwrap()
    }

    fn penny() -> Arena {
        Arena::new(
            vec!["i".into(), "h".into(), "t".into()],
            vec!["H".into(), "T".into(), "stay".into()],
            [("i", vec!["H", "T"]), ("h", vec!["stay"]), ("t", vec!["stay"])],
            [("i", "H", "h"), ("i", "T", "t"), ("h", "stay", "h"), ("t", "stay", "t")],
        )
        .unwrap()
    }

    fn names(arena: &Arena, acts: &[ActionId]) -> Vec<String> {
        acts.iter().map(|&a| arena.action_name(a).to_string()).collect()
    }

    #[test]
    fn moves_read_own_component() {
        let ar = toggle();
        let t = Configuration::from_names(&ar, &["a", "a"]).unwrap();
        assert_eq!(names(&ar, product_moves(&ar, &t, 0).unwrap()), ["stay", "go"]);

        let ar = penny();
        let t = Configuration::from_names(&ar, &["h", "t"]).unwrap();
        assert_eq!(names(&ar, product_moves(&ar, &t, 1).unwrap()), ["stay"]);
        let t = Configuration::from_names(&ar, &["i", "i"]).unwrap();
        assert_eq!(names(&ar, product_moves(&ar, &t, 0).unwrap()), ["H", "T"]);
        assert_eq!(product_moves(&ar, &t, 2), Err(Error::IndexOutOfRange(2)));
    }

    #[test]
    fn step_is_componentwise() {
        let ar = toggle();
        let t = Configuration::from_names(&ar, &["a", "a"]).unwrap();
        let go = ar.action("go").unwrap();
        let stay = ar.action("stay").unwrap();
        let next = product_step(&ar, &t, &[go, stay]).unwrap();
        assert_eq!(next.names(&ar), ["b", "a"]);

        let ar = penny();
        let t = Configuration::from_names(&ar, &["i", "i"]).unwrap();
        let (h, tt, stay) = (ar.action("H").unwrap(), ar.action("T").unwrap(), ar.action("stay").unwrap());
        assert_eq!(product_step(&ar, &t, &[h, tt]).unwrap().names(&ar), ["h", "t"]);
        let ht = Configuration::from_names(&ar, &["h", "t"]).unwrap();
        assert_eq!(product_step(&ar, &ht, &[h, stay]), Err(Error::IllegalMove(0)));
    }

    #[test]
    fn arena_errors() {
        let err = Arena::new(
            vec!["a".into(), "b".into()],
            vec!["stay".into(), "go".into()],
            [("a", vec![]), ("b", vec!["stay"])],
            [("b", "stay", "b")],
        );
        assert_eq!(err, Err(Error::EmptyMoveSet("a".into())));

        let err = Arena::new(
            vec!["a".into()],
            vec!["stay".into(), "go".into()],
            [("a", vec!["stay", "go"])],
            [("a", "stay", "a")],
        );
        assert_eq!(err, Err(Error::PartialTransition("a".into(), "go".into())));

        let err = Arena::new(
            vec!["a".into()],
            vec!["stay".into(), "go".into()],
            [("a", vec!["stay"])],
            [("a", "stay", "a"), ("a", "go", "a")],
        );
        assert_eq!(err, Err(Error::SpuriousTransition("a".into(), "go".into())));

        let err = Arena::new(vec!["a b".into()], vec!["x".into()], [], []);
        assert_eq!(err, Err(Error::InvalidIdentifier("a b".into())));
    }

    #[test]
    fn reachable_closure_is_bounded() {
        let ar = penny();
        let init = Configuration::from_names(&ar, &["i", "i"]).unwrap();
        let reach = Reachable::explore(&ar, &init, 1000).unwrap();
        assert_eq!(reach.len(), 5);
        assert!(reach.len() <= ar.num_states().pow(2));
        assert!(matches!(Reachable::explore(&ar, &init, 3), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn successors_cover_all_move_vectors() {
        let ar = toggle();
        let t = Configuration::from_names(&ar, &["a", "b"]).unwrap();
        let all: Vec<_> = successors(&ar, &t).map(|c| c.names(&ar).join("")).collect();
        assert_eq!(all, ["ab", "aa", "bb", "ba"]);
    }
}

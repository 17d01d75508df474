//! Observation templates and information sets.
//!
//! Only player 0's template is stored. Player `i` observes a configuration
//! `t` exactly as player 0 would observe `t(π_{0,i})`, so the observation
//! relations of all players are compatible with the symmetry by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::arena::{ActionId, Arena, Configuration, Reachable};
use crate::error::{Error, Result};
use crate::network::GameNetwork;
use crate::symmetry::{permute_config, SymmetricRepresentation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ObsAtom {
    /// Exact local states of the listed positions.
    Id(Vec<usize>),
    /// Per-state occurrence counts over the listed positions.
    Count(Vec<usize>),
    /// Copy index of the observer's own state (tagged arenas only).
    Copy,
}

impl ObsAtom {
    fn players(&self) -> &[usize] {
        match self {
            ObsAtom::Id(p) | ObsAtom::Count(p) => p,
            ObsAtom::Copy => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ObsTemplate {
    atoms: Vec<ObsAtom>,
}

impl ObsTemplate {
    /// Player sets are normalized to ascending order without duplicates.
    pub fn new(atoms: Vec<ObsAtom>) -> Self {
        let norm = |p: Vec<usize>| p.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let atoms = atoms
            .into_iter()
            .map(|a| match a {
                ObsAtom::Id(p) => ObsAtom::Id(norm(p)),
                ObsAtom::Count(p) => ObsAtom::Count(norm(p)),
                ObsAtom::Copy => ObsAtom::Copy,
            })
            .collect();
        Self { atoms }
    }

    pub fn atoms(&self) -> &[ObsAtom] {
        &self.atoms
    }

    pub(crate) fn validate(&self, arena: &Arena, n: usize) -> Result<()> {
        for atom in &self.atoms {
            if let Some(&k) = atom.players().iter().find(|&&k| k >= n) {
                return Err(Error::BadObservation(format!("player {k} out of range")));
            }
            if *atom == ObsAtom::Copy && arena.tags().is_none() {
                return Err(Error::BadObservation("`copy` atom requires a tagged arena".into()));
            }
        }
        Ok(())
    }

    /// Player 0's observation of `view`.
    pub fn key(&self, arena: &Arena, view: &Configuration) -> ObsKey {
        let mut out = String::new();
        for (idx, atom) in self.atoms.iter().enumerate() {
            if idx > 0 {
                out.push(';');
            }
            match atom {
                ObsAtom::Id(players) => {
                    out.push_str("id:[");
                    for (j, &k) in players.iter().enumerate() {
                        if j > 0 {
                            out.push(',');
                        }
                        out.push_str(arena.state_name(view.get(k)));
                    }
                    out.push(']');
                }
                ObsAtom::Count(players) => {
                    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
                    for &k in players {
                        let s = view.get(k);
                        let label = match arena.tag(s) {
                            Some(tag) => tag.base.as_str(),
                            None => arena.state_name(s),
                        };
                        *counts.entry(label).or_default() += 1;
                    }
                    out.push_str("cnt:{");
                    for (j, (s, c)) in counts.iter().enumerate() {
                        if j > 0 {
                            out.push(',');
                        }
                        out.push_str(&format!("{s}:{c}"));
                    }
                    out.push('}');
                }
                ObsAtom::Copy => {
                    let copy = arena.tag(view.get(0)).map_or(0, |t| t.copy);
                    out.push_str(&format!("copy:{copy}"));
                }
            }
        }
        ObsKey(out)
    }
}

/// Canonical serialization of an information set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObsKey(String);

impl ObsKey {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObsKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn obs_key(
    g: &GameNetwork,
    rep: &SymmetricRepresentation,
    i: usize,
    t: &Configuration,
) -> Result<ObsKey> {
    if i >= g.n() {
        return Err(Error::IndexOutOfRange(i));
    }
    let view = permute_config(t, rep.base(i))?;
    Ok(g.observation().key(g.arena(), &view))
}

pub fn equiv(
    g: &GameNetwork,
    rep: &SymmetricRepresentation,
    i: usize,
    t: &Configuration,
    u: &Configuration,
) -> Result<bool> {
    Ok(obs_key(g, rep, i, t)? == obs_key(g, rep, i, u)?)
}

/// Actions available in every reachable configuration of player `i`'s
/// information set `k`.
pub fn allowed_actions_for_class(
    g: &GameNetwork,
    rep: &SymmetricRepresentation,
    reach: &Reachable,
    i: usize,
    k: &ObsKey,
) -> Result<Vec<ActionId>> {
    let mut allowed: Option<Vec<ActionId>> = None;
    for t in reach.configs() {
        if obs_key(g, rep, i, t)? == *k {
            let mov = g.arena().mov(t.get(i));
            allowed = Some(match allowed {
                None => mov.to_vec(),
                Some(prev) => prev.into_iter().filter(|a| mov.contains(a)).collect(),
            });
        }
    }
    match allowed {
        Some(a) if !a.is_empty() => Ok(a),
        _ => Err(Error::NoUniformAction(k.to_string())),
    }
}

/// Indexed information sets over the reachable configurations, for a chosen
/// set of players sharing one key domain.
#[derive(Debug, Clone)]
pub struct KeySpace {
    keys: Arc<[ObsKey]>,
    allowed: Vec<Vec<ActionId>>,
    /// `lookup[i][c]`: key index of player `i` at reachable config `c`,
    /// `u32::MAX` when player `i` is not covered by this space.
    lookup: Vec<Vec<u32>>,
}

impl KeySpace {
    /// Shared domain for a symmetric profile: every player's view of every
    /// reachable configuration, folded onto player 0's template.
    pub fn symmetric(g: &GameNetwork, rep: &SymmetricRepresentation, reach: &Reachable) -> Result<Self> {
        Self::build(g, rep, reach, &(0..g.n()).collect::<Vec<_>>())
    }

    /// Domain of a single player's own strategy.
    pub fn for_player(
        g: &GameNetwork,
        rep: &SymmetricRepresentation,
        reach: &Reachable,
        i: usize,
    ) -> Result<Self> {
        if i >= g.n() {
            return Err(Error::IndexOutOfRange(i));
        }
        Self::build(g, rep, reach, &[i])
    }

    fn build(
        g: &GameNetwork,
        rep: &SymmetricRepresentation,
        reach: &Reachable,
        players: &[usize],
    ) -> Result<Self> {
        let n = g.n();
        let mut raw: Vec<Vec<Option<ObsKey>>> = vec![vec![None; reach.len()]; n];
        let mut classes: BTreeMap<ObsKey, Option<Vec<ActionId>>> = BTreeMap::new();
        for &i in players {
            for (c, t) in reach.configs().iter().enumerate() {
                let key = obs_key(g, rep, i, t)?;
                let mov = g.arena().mov(t.get(i));
                let slot = classes.entry(key.clone()).or_insert(None);
                *slot = Some(match slot.take() {
                    None => mov.to_vec(),
                    Some(prev) => prev.into_iter().filter(|a| mov.contains(a)).collect(),
                });
                raw[i][c] = Some(key);
            }
        }
        let mut keys = Vec::with_capacity(classes.len());
        let mut allowed = Vec::with_capacity(classes.len());
        for (key, acts) in classes {
            let acts = acts.unwrap_or_default();
            if acts.is_empty() {
                return Err(Error::NoUniformAction(key.to_string()));
            }
            keys.push(key);
            allowed.push(acts);
        }
        let keys: Arc<[ObsKey]> = keys.into();
        let lookup = raw
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|k| match k {
                        Some(k) => keys.binary_search(&k).expect("key collected") as u32,
                        None => u32::MAX,
                    })
                    .collect()
            })
            .collect();
        Ok(Self { keys, allowed, lookup })
    }

    pub fn keys(&self) -> &[ObsKey] {
        &self.keys
    }

    pub fn shared_keys(&self) -> Arc<[ObsKey]> {
        Arc::clone(&self.keys)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn allowed(&self, k: usize) -> &[ActionId] {
        &self.allowed[k]
    }

    pub fn position(&self, key: &ObsKey) -> Option<usize> {
        self.keys.binary_search(key).ok()
    }

    /// Key index of player `i` at reachable configuration `config`.
    pub fn key_of(&self, i: usize, config: u32) -> Option<usize> {
        match *self.lookup.get(i)?.get(config as usize)? {
            u32::MAX => None,
            k => Some(k as usize),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cfg(g: &GameNetwork, names: &[&str]) -> Configuration {
        Configuration::from_names(g.arena(), names).unwrap()
    }

    #[test]
    fn toggle_keys() {
        let g = fixtures::toggle();
        let rep = g.representation();
        let t = cfg(&g, &["a", "b"]);
        assert_eq!(obs_key(&g, &rep, 0, &t).unwrap().as_str(), "id:[a,b]");
        assert_eq!(obs_key(&g, &rep, 1, &t).unwrap().as_str(), "id:[b,a]");
    }

    #[test]
    fn id_plus_count_key() {
        let arena = Arena::new(
            vec!["off".into(), "on".into()],
            vec!["x".into()],
            [("off", vec!["x"]), ("on", vec!["x"])],
            [("off", "x", "off"), ("on", "x", "on")],
        )
        .unwrap();
        let tpl = ObsTemplate::new(vec![ObsAtom::Id(vec![0]), ObsAtom::Count(vec![1, 2])]);
        let t = Configuration::from_names(&arena, &["on", "off", "on"]).unwrap();
        assert_eq!(tpl.key(&arena, &t).as_str(), "id:[on];cnt:{off:1,on:1}");
    }

    #[test]
    fn equivalence_examples() {
        let g = fixtures::toggle();
        let rep = g.representation();
        let (ab, ba) = (cfg(&g, &["a", "b"]), cfg(&g, &["b", "a"]));
        assert!(equiv(&g, &rep, 0, &ab, &ab).unwrap());
        assert!(!equiv(&g, &rep, 0, &ab, &ba).unwrap());

        let g = fixtures::toggle_blind();
        let rep = g.representation();
        assert!(equiv(&g, &rep, 0, &ab, &ba).unwrap());
        assert_eq!(obs_key(&g, &rep, 0, &ab).unwrap().as_str(), "");
    }

    #[test]
    fn allowed_actions() {
        let g = fixtures::toggle();
        let rep = g.representation();
        let reach = g.reachable(1000).unwrap();
        let k = obs_key(&g, &rep, 0, &cfg(&g, &["a", "a"])).unwrap();
        let acts = allowed_actions_for_class(&g, &rep, &reach, 0, &k).unwrap();
        assert_eq!(acts.len(), 2);

        let g = fixtures::toggle_blind();
        let rep = g.representation();
        let reach = g.reachable(1000).unwrap();
        let acts = allowed_actions_for_class(&g, &rep, &reach, 0, &ObsKey::new("")).unwrap();
        assert_eq!(acts.len(), 2);
    }

    #[test]
    fn blind_penny_has_no_uniform_action() {
        // the blind class mixes `i` (H, T) with `h`/`t` (stay)
        let g = fixtures::penny_blind();
        let rep = g.representation();
        let reach = g.reachable(1000).unwrap();
        assert_eq!(
            allowed_actions_for_class(&g, &rep, &reach, 0, &ObsKey::new("")),
            Err(Error::NoUniformAction(String::new()))
        );
        assert!(matches!(KeySpace::symmetric(&g, &rep, &reach), Err(Error::NoUniformAction(_))));
    }

    #[test]
    fn symmetric_keyspace_covers_all_views() {
        let g = fixtures::toggle();
        let rep = g.representation();
        let reach = g.reachable(1000).unwrap();
        let ks = KeySpace::symmetric(&g, &rep, &reach).unwrap();
        let names: Vec<_> = ks.keys().iter().map(ObsKey::as_str).collect();
        assert_eq!(names, ["id:[a,a]", "id:[a,b]", "id:[b,a]", "id:[b,b]"]);
        for c in 0..reach.len() as u32 {
            for i in 0..2 {
                let k = ks.key_of(i, c).unwrap();
                assert_eq!(ks.keys()[k], obs_key(&g, &rep, i, reach.config(c)).unwrap());
            }
        }
    }
}

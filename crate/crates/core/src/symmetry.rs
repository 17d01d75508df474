//! Player permutations and symmetric representations.
//!
//! Only the base permutations `π_{0,i}` are supplied; the whole family is
//! derived as `π_{i,j} = π_{0,j} ∘ π_{0,i}⁻¹`, which makes the identity and
//! composition laws hold by construction. They are still checked on every
//! build.

use std::fmt;

use crate::arena::{Arena, Configuration, StateTag};
use crate::error::{Error, Result};
use crate::ltl::Formula;
use crate::network::GameNetwork;
use crate::observation::{obs_key, ObsAtom, ObsKey, ObsTemplate};
use crate::strategy::MooreStrategy;

/// A permutation of `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Option<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v] = k;
        }
        Self(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| k == v)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// The family `π_{i,j}` for all pairs of players.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricRepresentation {
    n: usize,
    family: Vec<Permutation>,
}

impl SymmetricRepresentation {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `π_{i,j}`.
    pub fn get(&self, i: usize, j: usize) -> &Permutation {
        &self.family[i * self.n + j]
    }

    /// `π_{0,i}`: maps roles relative to player 0 onto roles relative to `i`.
    pub fn base(&self, i: usize) -> &Permutation {
        self.get(0, i)
    }

    /// Exhaustively checks identity, composition and anchoring laws.
    /// Returns the first violating triple.
    pub fn check_laws(&self) -> std::result::Result<(), (usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            if !self.get(i, i).is_identity() {
                return Err((i, i, i));
            }
            for j in 0..n {
                if self.get(i, j).apply(i) != j {
                    return Err((i, j, j));
                }
                for k in 0..n {
                    if self.get(k, j).compose(self.get(i, k)) != *self.get(i, j) {
                        return Err((i, j, k));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn build_representation(n: usize, base_perms: &[Vec<usize>]) -> Result<SymmetricRepresentation> {
    if base_perms.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: base_perms.len() });
    }
    let mut base = Vec::with_capacity(n);
    for (i, image) in base_perms.iter().enumerate() {
        if image.len() != n {
            return Err(Error::NotABijection(i));
        }
        let p = Permutation::new(image.clone()).ok_or(Error::NotABijection(i))?;
        if p.apply(0) != i {
            return Err(Error::BaseAnchorViolated(i));
        }
        base.push(p);
    }
    if !base[0].is_identity() {
        return Err(Error::BaseAnchorViolated(0));
    }
    let inverses: Vec<Permutation> = base.iter().map(Permutation::inverse).collect();
    let mut family = Vec::with_capacity(n * n);
    for inv_i in &inverses {
        for base_j in &base {
            family.push(base_j.compose(inv_i));
        }
    }
    let rep = SymmetricRepresentation { n, family };
    if let Err((i, _, _)) = rep.check_laws() {
        // unreachable for derived families; kept as a hard check
        return Err(Error::BadPermutation(i));
    }
    Ok(rep)
}

/// `t(π)[k] = t[π(k)]`.
pub fn permute_config(t: &Configuration, p: &Permutation) -> Result<Configuration> {
    if t.len() != p.len() {
        return Err(Error::LengthMismatch { expected: p.len(), got: t.len() });
    }
    Ok(Configuration(p.image().iter().map(|&k| t.get(k)).collect()))
}

pub fn permute_play(play: &[Configuration], p: &Permutation) -> Result<Vec<Configuration>> {
    play.iter().map(|t| permute_config(t, p)).collect()
}

/// Action of player `i` after `history` in the symmetric profile generated by
/// `sigma0`: player `i` runs `sigma0` on its own observation stream, which is
/// player 0's observation of the permuted history `ρ(π_{0,i})`.
pub fn derive_profile_action(
    g: &GameNetwork,
    rep: &SymmetricRepresentation,
    sigma0: &MooreStrategy,
    i: usize,
    history: &[Configuration],
) -> Result<u32> {
    if i >= g.n() {
        return Err(Error::IndexOutOfRange(i));
    }
    let keys: Vec<ObsKey> = history.iter().map(|t| obs_key(g, rep, i, t)).collect::<Result<_>>()?;
    sigma0.action_after(&keys)
}

pub fn copy_state_name(base: &str, copy: usize) -> String {
    format!("{base}@{copy}")
}

/// Splits every player onto its own disconnected copy of the arena.
///
/// States become `s@c`; player `i` starts on copy `i` and can never leave it.
/// Objective atoms `at(k, s)` become the disjunction over copies of
/// `at(k, s@c)`. The observation template is kept, with count atoms counting
/// base states, plus a `copy` atom so that each player knows which copy (and
/// hence which player) it is.
pub fn desymmetrize(g: &GameNetwork) -> Result<GameNetwork> {
    let arena = g.arena();
    let n = g.n();
    let base_states = arena.num_states();
    let name = |s: u32, c: usize| copy_state_name(arena.state_name(s), c);

    let mut states = Vec::with_capacity(base_states * n);
    let mut tags = Vec::with_capacity(base_states * n);
    for c in 0..n {
        for s in 0..base_states as u32 {
            states.push(name(s, c));
            tags.push(StateTag { base: arena.state_name(s).to_string(), copy: c });
        }
    }
    let mut mov = Vec::new();
    let mut tab = Vec::new();
    for c in 0..n {
        for s in 0..base_states as u32 {
            let acts: Vec<String> = arena.mov(s).iter().map(|&a| arena.action_name(a).to_string()).collect();
            for &a in arena.mov(s) {
                let t = arena.tab(s, a).expect("total on available actions");
                tab.push((name(s, c), arena.action_name(a).to_string(), name(t, c)));
            }
            mov.push((name(s, c), acts));
        }
    }
    let new_arena = Arena::new(
        states,
        arena.action_names().to_vec(),
        mov.iter().map(|(s, acts)| (s.as_str(), acts.iter().map(String::as_str).collect())),
        tab.iter().map(|(s, a, t)| (s.as_str(), a.as_str(), t.as_str())),
    )?
    .with_tags(tags)?;

    let to_copy = |s: u32, c: usize| c as u32 * base_states as u32 + s;
    let initial =
        Configuration(g.initial().states().iter().enumerate().map(|(i, &s)| to_copy(s, i)).collect());
    let objective = g.objective().map_atoms(&mut |k, s| {
        (0..n)
            .map(|c| Formula::Atom { player: k, state: to_copy(s, c) })
            .reduce(|a, b| Formula::Or(Box::new(a), Box::new(b)))
            .expect("at least one player")
    });
    let mut atoms = g.observation().atoms().to_vec();
    if !atoms.contains(&ObsAtom::Copy) {
        atoms.push(ObsAtom::Copy);
    }
    GameNetwork::new(
        new_arena,
        n,
        g.base_perms().to_vec(),
        ObsTemplate::new(atoms),
        objective,
        initial,
        g.winners().clone(),
        g.losers().clone(),
    )
}

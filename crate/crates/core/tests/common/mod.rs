//! Random small two-player networks shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use symnash::arena::Configuration;
use symnash::network::{ArenaFile, AtomFile, GameFile};
use symnash::{validate_network, Formula, GameNetwork, Lasso};

/// The three observation templates of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Obs {
    Both,
    Own,
    Blind,
}

impl Obs {
    pub const ALL: [Obs; 3] = [Obs::Both, Obs::Own, Obs::Blind];

    fn atoms(self) -> Vec<AtomFile> {
        match self {
            Obs::Both => vec![AtomFile::Id { players: vec![0, 1] }],
            Obs::Own => vec![AtomFile::Id { players: vec![0] }],
            Obs::Blind => vec![],
        }
    }
}

/// Formula over `at(p, s)` with `p < 2`, `s < states`, using F, G, X, &, |, !
/// with temporal depth at most `depth` and at most `atoms` atoms.
pub fn formula(rng: &mut StdRng, states: u32, depth: usize, atoms: usize) -> Formula {
    let atom = |rng: &mut StdRng| Formula::atom(rng.gen_range(0..2), rng.gen_range(0..states));
    let pick = rng.gen_range(0..10);
    match pick {
        0..=2 if depth > 0 => {
            let inner = formula(rng, states, depth - 1, atoms);
            match pick {
                0 => Formula::eventually(inner),
                1 => Formula::always(inner),
                _ => Formula::next(inner),
            }
        }
        3 | 4 if atoms >= 2 => {
            let a = formula(rng, states, depth, 1);
            let b = formula(rng, states, depth, 1);
            if pick == 3 {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        5 => Formula::not(formula(rng, states, depth, atoms)),
        _ => atom(rng),
    }
}

pub fn atom_count(f: &Formula) -> usize {
    f.atoms().len()
}

/// A random game file of the family: two players, at most three states and
/// two actions.
pub fn game_file(rng: &mut StdRng, obs: Obs) -> GameFile {
    let ns = rng.gen_range(1..=3u32);
    let na = rng.gen_range(1..=2u32);
    let states: Vec<String> = (0..ns).map(|s| format!("s{s}")).collect();
    let actions: Vec<String> = (0..na).map(|a| format!("a{a}")).collect();
    let mut mov = BTreeMap::new();
    let mut tab = BTreeMap::new();
    for s in &states {
        let mut avail: Vec<String> = actions.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        if avail.is_empty() {
            avail.push(actions.choose(rng).unwrap().clone());
        }
        let row: BTreeMap<String, String> =
            avail.iter().map(|a| (a.clone(), states.choose(rng).unwrap().clone())).collect();
        mov.insert(s.clone(), avail);
        tab.insert(s.clone(), row);
    }
    let phi = loop {
        let f = formula(rng, ns, 2, 2);
        if f.temporal_depth() <= 2 && atom_count(&f) <= 2 {
            break f;
        }
    };
    let arena_file = ArenaFile { states: states.clone(), actions, mov, tab, tags: None };
    // render the objective through a throwaway network for its state names
    let initial = vec![states.choose(rng).unwrap().clone(), states.choose(rng).unwrap().clone()];
    let mut file = GameFile {
        arena: arena_file,
        players: 2,
        base_perms: vec![vec![0, 1], vec![1, 0]],
        observation: obs.atoms(),
        objective: "true".into(),
        initial,
        winners: vec![],
        losers: vec![],
    };
    let scratch = validate_network(&file).expect("generated arena is valid");
    file.objective = phi.display(scratch.arena()).to_string();
    file
}

pub fn game(rng: &mut StdRng, obs: Obs) -> GameNetwork {
    validate_network(&game_file(rng, obs)).expect("generated game is valid")
}

/// Every lasso over `alphabet` with `|prefix| + |cycle| <= max_len`.
pub fn lassos(alphabet: &[Configuration], max_len: usize) -> Vec<Lasso> {
    let mut words: Vec<Vec<Configuration>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max_len {
        words = words
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |t| {
                    let mut w = w.clone();
                    w.push(t.clone());
                    w
                })
            })
            .collect();
        for w in &words {
            for split in 0..w.len() {
                all.push(Lasso::new(w[..split].to_vec(), w[split..].to_vec()));
            }
        }
    }
    all
}

/// Both players' payoff as a bit vector, player 0 first.
pub fn payoff_bits(winners: &std::collections::BTreeSet<usize>, n: usize) -> Vec<u8> {
    (0..n).map(|i| u8::from(winners.contains(&i))).collect()
}

//! Canonical instances shipped with the crate.
//!
//! - `TOGGLE`: two players flipping between `a` and `b`; each wants to visit `b`.
//! - `PENNY`: one-shot choice of heads or tails; player 0 wants `(h, t)`.
//! - `TOGGLE-BLIND`: `TOGGLE` without observation; each wants to reach `b`
//!   and stay there, which needs memory.
//! - `CARDS6`: six players at two tables of three; each knows its own state
//!   and the state counts of its two neighbours.

use crate::network::{validate_network, GameFile, GameNetwork};

pub const TOGGLE_JSON: &str = include_str!("../fixtures/toggle.json");
pub const PENNY_JSON: &str = include_str!("../fixtures/penny.json");
pub const TOGGLE_BLIND_JSON: &str = include_str!("../fixtures/toggle_blind.json");
pub const CARDS6_JSON: &str = include_str!("../fixtures/cards6.json");

fn load(text: &str) -> GameNetwork {
    validate_network(&GameFile::from_json(text).expect("fixture parses")).expect("fixture is valid")
}

pub fn toggle() -> GameNetwork {
    load(TOGGLE_JSON)
}

pub fn penny() -> GameNetwork {
    load(PENNY_JSON)
}

pub fn toggle_blind() -> GameNetwork {
    load(TOGGLE_BLIND_JSON)
}

pub fn cards6() -> GameNetwork {
    load(CARDS6_JSON)
}

/// `PENNY` with an empty template: the single information set mixes `i`
/// (where only `H`/`T` are available) with `h`/`t` (only `stay`).
pub fn penny_blind() -> GameNetwork {
    let mut raw = GameFile::from_json(PENNY_JSON).expect("fixture parses");
    raw.observation.clear();
    validate_network(&raw).expect("fixture is valid")
}

pub fn cards6_base_perms() -> Vec<Vec<usize>> {
    GameFile::from_json(CARDS6_JSON).expect("fixture parses").base_perms
}

/// The four named fixtures.
pub fn all() -> Vec<GameNetwork> {
    vec![toggle(), penny(), toggle_blind(), cards6()]
}

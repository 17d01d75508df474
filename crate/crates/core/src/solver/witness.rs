//! JSON form of an equilibrium witness.
//!
//! ```json
//! { "memory": 1, "initial": 0, "table": { "0,id:[a,a]": {"act": "go", "next": 0} },
//!   "winners": [0, 1], "outcome": { "prefix": [["a","a"]], "cycle": [["b","b"]] } }
//! ```
//!
//! A general (non-symmetric) witness carries `strategies` instead of the
//! top-level `memory`/`initial`/`table`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Solution, Solver, Witness};
use crate::arena::{Arena, Configuration};
use crate::error::{Error, Result};
use crate::ltl::Lasso;
use crate::strategy::{CellFile, MooreStrategy, StrategyFile};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeFile {
    pub prefix: Vec<Vec<String>>,
    pub cycle: Vec<Vec<String>>,
}

impl OutcomeFile {
    pub fn from_lasso(w: &Lasso, arena: &Arena) -> Self {
        let names = |ts: &[Configuration]| {
            ts.iter().map(|t| t.names(arena).into_iter().map(String::from).collect()).collect()
        };
        Self { prefix: names(&w.prefix), cycle: names(&w.cycle) }
    }

    pub fn to_lasso(&self, arena: &Arena) -> Result<Lasso> {
        let configs = |rows: &[Vec<String>]| {
            rows.iter()
                .map(|r| Configuration::from_names(arena, &r.iter().map(String::as_str).collect::<Vec<_>>()))
                .collect::<Result<Vec<_>>>()
        };
        if self.cycle.is_empty() {
            return Err(Error::BadStrategy("outcome cycle is empty".into()));
        }
        Ok(Lasso::new(configs(&self.prefix)?, configs(&self.cycle)?))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<BTreeMap<String, CellFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategies: Option<Vec<StrategyFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winners: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<OutcomeFile>,
}

impl WitnessFile {
    pub fn from_solution(sol: &Solution, arena: &Arena) -> Self {
        let mut file = Self::from_witness(&sol.witness, arena);
        file.winners = Some(sol.verdict.winners.iter().copied().collect());
        file.outcome = Some(OutcomeFile::from_lasso(&sol.verdict.outcome, arena));
        file
    }

    pub fn from_witness(w: &Witness, arena: &Arena) -> Self {
        match w {
            Witness::Symmetric(s) => {
                let f = s.to_file(arena);
                Self {
                    memory: Some(f.memory),
                    initial: Some(f.initial),
                    table: Some(f.table),
                    ..Self::default()
                }
            }
            Witness::General(list) => {
                Self { strategies: Some(list.iter().map(|s| s.to_file(arena)).collect()), ..Self::default() }
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("witness serializes");
        s.push('\n');
        s
    }

    /// Rebuilds the strategies over the solver's key spaces.
    pub fn to_witness(&self, solver: &Solver<'_>) -> Result<Witness> {
        let arena = solver.game().arena();
        match (&self.table, &self.strategies) {
            (Some(table), None) => {
                let file = StrategyFile {
                    memory: self.memory.unwrap_or(1),
                    initial: self.initial.unwrap_or(0),
                    table: table.clone(),
                };
                let space = solver.symmetric_space()?;
                Ok(Witness::Symmetric(MooreStrategy::from_file(&file, arena, &space)?))
            }
            (None, Some(list)) => {
                if self.memory.is_some() || self.initial.is_some() {
                    return Err(Error::BadStrategy("`memory`/`initial` belong inside `strategies`".into()));
                }
                let spaces = solver.player_spaces()?;
                if list.len() != spaces.len() {
                    return Err(Error::LengthMismatch { expected: spaces.len(), got: list.len() });
                }
                list.iter()
                    .zip(&spaces)
                    .map(|(f, ks)| MooreStrategy::from_file(f, arena, ks))
                    .collect::<Result<Vec<_>>>()
                    .map(Witness::General)
            }
            _ => Err(Error::BadStrategy("a witness has either `table` or `strategies`".into())),
        }
    }
}

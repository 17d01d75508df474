//! Equilibrium search.
//!
//! A candidate profile is checked in three steps: compute its unique outcome
//! and the resulting winners, compare against the required winners and
//! losers, then make sure no losing player has a deviation satisfying its
//! objective. Candidates are scanned in canonical order and the first one
//! accepted is reported, whatever the number of workers.

mod deviation;
pub mod oracle;
mod witness;

use std::collections::BTreeSet;

use rayon::prelude::*;

pub use deviation::{replay_deviation, DeviationWitness};
pub use witness::{OutcomeFile, WitnessFile};

use crate::arena::Reachable;
use crate::error::{Error, Result};
use crate::ltl::{eval_lasso, instantiate_for_player, to_buchi, BuchiAutomaton, Formula, Lasso};
use crate::network::{Constraints, GameNetwork};
use crate::observation::KeySpace;
use crate::strategy::{CandidateSpace, MooreStrategy, Profile};

/// Resource limits for a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub candidates: u64,
    pub nodes: usize,
    pub jobs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { candidates: 1_000_000, nodes: 10_000_000, jobs: 1 }
    }
}

/// Winners of a profile's outcome. Payoff is 1 exactly for winners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub winners: BTreeSet<usize>,
    pub outcome: Lasso,
}

impl Verdict {
    pub fn payoff(&self, i: usize) -> u8 {
        u8::from(self.winners.contains(&i))
    }

    pub fn payoffs(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.payoff(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// σ₀; every player runs it on its own view.
    Symmetric(MooreStrategy),
    /// One strategy per player.
    General(Vec<MooreStrategy>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub witness: Witness,
    pub verdict: Verdict,
    /// Losers for which the deviation product has no reachable accepting cycle.
    pub no_deviation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// Required winners that lose.
    MissingWinners(Vec<usize>),
    /// Required losers that win.
    LosersWin(Vec<usize>),
    Deviation(DeviationWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileCheck {
    Accept { verdict: Verdict, no_deviation: Vec<usize> },
    Reject { verdict: Verdict, reason: Rejection },
}

impl ProfileCheck {
    pub fn is_accept(&self) -> bool {
        matches!(self, ProfileCheck::Accept { .. })
    }

    pub fn verdict(&self) -> &Verdict {
        match self {
            ProfileCheck::Accept { verdict, .. } | ProfileCheck::Reject { verdict, .. } => verdict,
        }
    }
}

/// Game data shared by every candidate check: reachable configurations, the
/// per-player objectives and their automata.
#[derive(Debug)]
pub struct Solver<'g> {
    game: &'g GameNetwork,
    reach: Reachable,
    objectives: Vec<Formula>,
    automata: Vec<BuchiAutomaton>,
    budget: Budget,
}

impl<'g> Solver<'g> {
    pub fn new(game: &'g GameNetwork, budget: Budget) -> Result<Self> {
        let reach = game.reachable(budget.nodes)?;
        let objectives: Vec<Formula> =
            (0..game.n()).map(|i| instantiate_for_player(game.objective(), i, game.rep())).collect();
        let automata = objectives.iter().map(to_buchi).collect();
        Ok(Self { game, reach, objectives, automata, budget })
    }

    pub fn game(&self) -> &'g GameNetwork {
        self.game
    }

    pub fn reach(&self) -> &Reachable {
        &self.reach
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// `φ_i`.
    pub fn objective(&self, i: usize) -> &Formula {
        &self.objectives[i]
    }

    pub fn automaton(&self, i: usize) -> &BuchiAutomaton {
        &self.automata[i]
    }

    pub fn symmetric_space(&self) -> Result<KeySpace> {
        KeySpace::symmetric(self.game, self.game.rep(), &self.reach)
    }

    pub fn player_spaces(&self) -> Result<Vec<KeySpace>> {
        (0..self.game.n()).map(|i| KeySpace::for_player(self.game, self.game.rep(), &self.reach, i)).collect()
    }

    pub fn symmetric_profile<'s>(
        &'s self,
        sigma0: &'s MooreStrategy,
        space: &'s KeySpace,
    ) -> Result<Profile<'s>> {
        Profile::symmetric(self.game, &self.reach, sigma0, space)
    }

    pub fn general_profile<'s>(
        &'s self,
        strategies: &'s [MooreStrategy],
        spaces: &'s [KeySpace],
    ) -> Result<Profile<'s>> {
        Profile::general(self.game, &self.reach, strategies, spaces)
    }

    pub fn winners(&self, profile: &Profile<'_>) -> Result<Verdict> {
        let outcome = profile.outcome()?;
        let winners = (0..self.game.n()).filter(|&i| eval_lasso(&self.objectives[i], &outcome)).collect();
        Ok(Verdict { winners, outcome })
    }

    /// A path of player `i` against the rest of the profile that satisfies
    /// `φ_i`, if any.
    pub fn check_deviation(&self, profile: &Profile<'_>, i: usize) -> Result<Option<DeviationWitness>> {
        if i >= self.game.n() {
            return Err(Error::IndexOutOfRange(i));
        }
        deviation::search(profile, i, &self.automata[i], self.budget.nodes)
    }

    pub fn check_profile(&self, profile: &Profile<'_>, constraints: &Constraints) -> Result<ProfileCheck> {
        constraints.validate(self.game.n())?;
        let verdict = self.winners(profile)?;
        let missing: Vec<usize> = constraints.winners.difference(&verdict.winners).copied().collect();
        if !missing.is_empty() {
            return Ok(ProfileCheck::Reject { verdict, reason: Rejection::MissingWinners(missing) });
        }
        let winning_losers: Vec<usize> = constraints.losers.intersection(&verdict.winners).copied().collect();
        if !winning_losers.is_empty() {
            return Ok(ProfileCheck::Reject { verdict, reason: Rejection::LosersWin(winning_losers) });
        }
        let mut no_deviation = Vec::new();
        for i in (0..self.game.n()).filter(|i| !verdict.winners.contains(i)) {
            if let Some(w) = self.check_deviation(profile, i)? {
                return Ok(ProfileCheck::Reject { verdict, reason: Rejection::Deviation(w) });
            }
            no_deviation.push(i);
        }
        Ok(ProfileCheck::Accept { verdict, no_deviation })
    }

    fn accept(check: ProfileCheck, witness: Witness) -> Option<Solution> {
        match check {
            ProfileCheck::Accept { verdict, no_deviation } => {
                Some(Solution { witness, verdict, no_deviation })
            }
            ProfileCheck::Reject { .. } => None,
        }
    }

    /// First candidate index (in canonical order) for which `probe` yields
    /// something, scanning in parallel when more than one job is allowed.
    fn scan<T: Send>(
        &self,
        count: u64,
        probe: impl Fn(u64) -> Result<Option<T>> + Sync,
    ) -> Result<Option<T>> {
        if count > self.budget.candidates {
            return Err(Error::BudgetExceeded(format!(
                "{count} candidates exceed the budget of {}",
                self.budget.candidates
            )));
        }
        if self.budget.jobs <= 1 {
            for idx in 0..count {
                if let Some(found) = probe(idx)? {
                    return Ok(Some(found));
                }
            }
            return Ok(None);
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.budget.jobs)
            .build()
            .map_err(|e| Error::BudgetExceeded(format!("cannot start workers: {e}")))?;
        pool.install(|| (0..count).into_par_iter().find_map_first(|idx| probe(idx).transpose()).transpose())
    }

    pub fn symmetric_candidates(&self, m: u32) -> Result<(KeySpace, CandidateSpace)> {
        let space = self.symmetric_space()?;
        let cands = CandidateSpace::new(&space, m)?;
        Ok((space, cands))
    }

    pub fn find_symmetric_ne(&self, constraints: &Constraints, m: u32) -> Result<Option<Solution>> {
        constraints.validate(self.game.n())?;
        let (space, cands) = self.symmetric_candidates(m)?;
        let count = cands.count().ok_or_else(|| Error::BudgetExceeded("candidate count overflows".into()))?;
        self.scan(count, |idx| {
            let sigma0 = cands.decode(idx);
            let profile = self.symmetric_profile(&sigma0, &space)?;
            let check = self.check_profile(&profile, constraints)?;
            Ok(Self::accept(check, Witness::Symmetric(sigma0.clone())))
        })
    }

    /// Non-symmetric search: one strategy per player, each over its own
    /// observation keys.
    pub fn find_ne_general(&self, constraints: &Constraints, m: u32) -> Result<Option<Solution>> {
        constraints.validate(self.game.n())?;
        let spaces = self.player_spaces()?;
        let per_player = spaces.iter().map(|s| CandidateSpace::new(s, m)).collect::<Result<Vec<_>>>()?;
        let counts = per_player
            .iter()
            .map(|c| c.count())
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| Error::BudgetExceeded("candidate count overflows".into()))?;
        let total = counts
            .iter()
            .try_fold(1u64, |acc, &c| acc.checked_mul(c))
            .ok_or_else(|| Error::BudgetExceeded("candidate count overflows".into()))?;
        self.scan(total, |idx| {
            let strategies = decode_joint(&per_player, &counts, idx);
            let profile = self.general_profile(&strategies, &spaces)?;
            let check = self.check_profile(&profile, constraints)?;
            Ok(Self::accept(check, Witness::General(strategies.clone())))
        })
    }

    /// Re-checks a stored witness.
    pub fn check_witness(&self, witness: &Witness, constraints: &Constraints) -> Result<ProfileCheck> {
        match witness {
            Witness::Symmetric(sigma0) => {
                let space = self.symmetric_space()?;
                let sigma0 = rebase(sigma0, &space)?;
                self.check_profile(&self.symmetric_profile(&sigma0, &space)?, constraints)
            }
            Witness::General(strategies) => {
                let spaces = self.player_spaces()?;
                let strategies = strategies
                    .iter()
                    .zip(&spaces)
                    .map(|(s, ks)| rebase(s, ks))
                    .collect::<Result<Vec<_>>>()?;
                self.check_profile(&self.general_profile(&strategies, &spaces)?, constraints)
            }
        }
    }
}

/// Joint index → one strategy per player, player 0 most significant.
fn decode_joint(per_player: &[CandidateSpace], counts: &[u64], mut idx: u64) -> Vec<MooreStrategy> {
    let mut digits = vec![0u64; counts.len()];
    for i in (0..counts.len()).rev() {
        digits[i] = idx % counts[i];
        idx /= counts[i];
    }
    per_player.iter().zip(digits).map(|(c, d)| c.decode(d)).collect()
}

/// Re-expresses a strategy over another key space with the same keys.
fn rebase(s: &MooreStrategy, space: &KeySpace) -> Result<MooreStrategy> {
    if s.keys() == space.keys() {
        return Ok(s.clone());
    }
    let mut cells = Vec::with_capacity(s.memory() as usize * space.len());
    for q in 0..s.memory() {
        for key in space.keys() {
            cells.push(s.lookup(q, key).ok());
        }
    }
    MooreStrategy::new(s.memory(), s.initial(), space.shared_keys(), cells)
}

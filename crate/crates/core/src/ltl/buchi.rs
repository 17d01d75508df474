//! Tableau translation from LTL to non-deterministic Büchi automata.
//!
//! Formulas are put in negation normal form. An automaton state is the set of
//! obligations that must hold from the current position on, paired with a
//! degeneralization counter over the until-subformulas. Expanding a state
//! yields transitions labelled by a conjunction of literals (what must hold
//! at the current letter) and the obligations passed to the next position. A
//! transition postpones `a U b` when it chose `a ∧ X(a U b)`; a run is
//! accepting when no until is postponed forever, which the counter turns into
//! a plain Büchi condition.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use super::{Formula, Lasso};
use crate::arena::{Arena, Configuration, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Nnf {
    True,
    False,
    Lit(Literal),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Next(Box<Nnf>),
    Until(Box<Nnf>, Box<Nnf>),
    Release(Box<Nnf>, Box<Nnf>),
}

fn nnf(f: &Formula, negated: bool) -> Nnf {
    use Formula as F;
    let b = |f: &Formula, neg| Box::new(nnf(f, neg));
    match (f, negated) {
        (F::True, false) | (F::False, true) => Nnf::True,
        (F::True, true) | (F::False, false) => Nnf::False,
        (F::Atom { player, state }, neg) => {
            Nnf::Lit(Literal { player: *player, state: *state, positive: !neg })
        }
        (F::Not(a), neg) => nnf(a, !neg),
        (F::And(x, y), false) | (F::Or(x, y), true) => Nnf::And(b(x, negated), b(y, negated)),
        (F::Or(x, y), false) | (F::And(x, y), true) => Nnf::Or(b(x, negated), b(y, negated)),
        (F::Implies(x, y), false) => Nnf::Or(b(x, true), b(y, false)),
        (F::Implies(x, y), true) => Nnf::And(b(x, false), b(y, true)),
        (F::Next(a), neg) => Nnf::Next(b(a, neg)),
        (F::Eventually(a), false) | (F::Always(a), true) => Nnf::Until(Box::new(Nnf::True), b(a, negated)),
        (F::Always(a), false) | (F::Eventually(a), true) => Nnf::Release(Box::new(Nnf::False), b(a, negated)),
        (F::Until(x, y), false) => Nnf::Until(b(x, false), b(y, false)),
        (F::Until(x, y), true) => Nnf::Release(b(x, true), b(y, true)),
        (F::Release(x, y), false) => Nnf::Release(b(x, false), b(y, false)),
        (F::Release(x, y), true) => Nnf::Until(b(x, true), b(y, true)),
    }
}

fn collect_untils(f: &Nnf, out: &mut BTreeSet<Nnf>) {
    match f {
        Nnf::True | Nnf::False | Nnf::Lit(_) => {}
        Nnf::Next(a) => collect_untils(a, out),
        Nnf::And(a, b) | Nnf::Or(a, b) | Nnf::Release(a, b) => {
            collect_untils(a, out);
            collect_untils(b, out);
        }
        Nnf::Until(a, b) => {
            out.insert(f.clone());
            collect_untils(a, out);
            collect_untils(b, out);
        }
    }
}

/// `at(player, state)` or its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub player: usize,
    pub state: StateId,
    pub positive: bool,
}

impl Literal {
    pub fn holds(&self, t: &Configuration) -> bool {
        (t.get(self.player) == self.state) == self.positive
    }
}

/// Conjunction of literals; the empty conjunction is `true`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Label {
    pub literals: Vec<Literal>,
}

impl Label {
    pub fn holds(&self, t: &Configuration) -> bool {
        self.literals.iter().all(|l| l.holds(t))
    }

    pub fn display(&self, arena: &Arena) -> String {
        if self.literals.is_empty() {
            return "true".into();
        }
        self.literals
            .iter()
            .map(|l| {
                let neg = if l.positive { "" } else { "!" };
                format!("{neg}at({},{})", l.player, arena.state_name(l.state))
            })
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiTransition {
    pub label: Label,
    pub target: usize,
}

#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    initial: usize,
    accepting: Vec<bool>,
    transitions: Vec<Vec<BuchiTransition>>,
}

impl BuchiAutomaton {
    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn transitions(&self, q: usize) -> &[BuchiTransition] {
        &self.transitions[q]
    }

    /// Membership of `prefix · cycle^ω`: an accepting product node that is
    /// reachable from the start and lies on a cycle.
    pub fn accepts(&self, w: &Lasso) -> bool {
        let width = self.num_states();
        let node = |p: usize, q: usize| p * width + q;
        let succs = |id: usize| -> Vec<usize> {
            let (p, q) = (id / width, id % width);
            let t = w.at(p);
            self.transitions[q]
                .iter()
                .filter(|tr| tr.label.holds(t))
                .map(|tr| node(w.succ(p), tr.target))
                .collect()
        };
        let total = w.len() * width;
        let reach_from = |start: &[usize]| {
            let mut seen = vec![false; total];
            let mut queue: VecDeque<usize> = start.iter().copied().collect();
            for &s in start {
                seen[s] = true;
            }
            while let Some(v) = queue.pop_front() {
                for s in succs(v) {
                    if !seen[s] {
                        seen[s] = true;
                        queue.push_back(s);
                    }
                }
            }
            seen
        };
        let reachable = reach_from(&[node(0, self.initial)]);
        (0..total).filter(|&v| reachable[v] && self.accepting[v % width]).any(|v| reach_from(&succs(v))[v])
    }

    pub fn to_dot(&self, arena: &Arena) -> String {
        let mut out = String::from("digraph buchi {\n  rankdir=LR;\n  init [shape=point];\n");
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{q} [shape={shape}];");
        }
        let _ = writeln!(out, "  init -> q{};", self.initial);
        for (q, trs) in self.transitions.iter().enumerate() {
            for tr in trs {
                let _ = writeln!(out, "  q{q} -> q{} [label=\"{}\"];", tr.target, tr.label.display(arena));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Cover {
    label: BTreeSet<Literal>,
    next: BTreeSet<Nnf>,
    postponed: BTreeSet<Nnf>,
}

/// All ways of satisfying `todo` at the current position.
fn expand(todo: Vec<Nnf>, cover: Cover, out: &mut BTreeSet<Cover>) {
    let mut todo = todo;
    let mut cover = cover;
    while let Some(f) = todo.pop() {
        match f {
            Nnf::True => {}
            Nnf::False => return,
            Nnf::Lit(l) => {
                if cover.label.contains(&Literal { positive: !l.positive, ..l }) {
                    return;
                }
                cover.label.insert(l);
            }
            Nnf::And(a, b) => {
                todo.push(*b);
                todo.push(*a);
            }
            Nnf::Or(a, b) => {
                let mut left = todo.clone();
                left.push(*a);
                expand(left, cover.clone(), out);
                todo.push(*b);
            }
            Nnf::Next(a) => {
                cover.next.insert(*a);
            }
            Nnf::Until(ref a, ref b) => {
                let mut now = todo.clone();
                now.push((**b).clone());
                expand(now, cover.clone(), out);
                todo.push((**a).clone());
                cover.next.insert(f.clone());
                cover.postponed.insert(f);
            }
            Nnf::Release(ref a, ref b) => {
                let mut both = todo.clone();
                both.push((**a).clone());
                both.push((**b).clone());
                expand(both, cover.clone(), out);
                todo.push((**b).clone());
                cover.next.insert(f);
            }
        }
    }
    out.insert(cover);
}

pub fn to_buchi(phi: &Formula) -> BuchiAutomaton {
    let root = nnf(phi, false);
    let mut untils = BTreeSet::new();
    collect_untils(&root, &mut untils);
    let untils: Vec<Nnf> = untils.into_iter().collect();
    let k = untils.len();

    let mut memo: HashMap<BTreeSet<Nnf>, Vec<Cover>> = HashMap::new();
    let mut ids: HashMap<(BTreeSet<Nnf>, usize), usize> = HashMap::new();
    let mut queue: VecDeque<(BTreeSet<Nnf>, usize)> = VecDeque::new();
    let mut accepting = Vec::new();
    let mut transitions: Vec<Vec<BuchiTransition>> = Vec::new();

    let start = (BTreeSet::from([root]), 0);
    ids.insert(start.clone(), 0);
    accepting.push(k == 0);
    transitions.push(Vec::new());
    queue.push_back(start);

    while let Some((obligations, level)) = queue.pop_front() {
        let src = ids[&(obligations.clone(), level)];
        let covers = memo
            .entry(obligations.clone())
            .or_insert_with(|| {
                let mut out = BTreeSet::new();
                let empty =
                    Cover { label: BTreeSet::new(), next: BTreeSet::new(), postponed: BTreeSet::new() };
                expand(obligations.iter().cloned().collect(), empty, &mut out);
                out.into_iter().collect()
            })
            .clone();
        let mut outgoing: Vec<BuchiTransition> = Vec::new();
        for cover in covers {
            let mut next_level = if level == k { 0 } else { level };
            while next_level < k && !cover.postponed.contains(&untils[next_level]) {
                next_level += 1;
            }
            let key = (cover.next, next_level);
            let target = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = accepting.len();
                    ids.insert(key.clone(), id);
                    accepting.push(next_level == k);
                    transitions.push(Vec::new());
                    queue.push_back(key);
                    id
                }
            };
            let tr = BuchiTransition { label: Label { literals: cover.label.into_iter().collect() }, target };
            if !outgoing.contains(&tr) {
                outgoing.push(tr);
            }
        }
        transitions[src] = outgoing;
    }

    BuchiAutomaton { initial: 0, accepting, transitions }
}

use super::Formula;
use crate::arena::Configuration;

/// The ultimately periodic play `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub prefix: Vec<Configuration>,
    pub cycle: Vec<Configuration>,
}

impl Lasso {
    pub fn new(prefix: Vec<Configuration>, cycle: Vec<Configuration>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be non-empty");
        Self { prefix, cycle }
    }

    /// Number of distinct positions `|prefix| + |cycle|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn at(&self, pos: usize) -> &Configuration {
        if pos < self.prefix.len() {
            &self.prefix[pos]
        } else {
            &self.cycle[(pos - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor position, wrapping from the last cycle entry to the first.
    pub fn succ(&self, pos: usize) -> usize {
        if pos + 1 < self.len() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// The first `k` letters of the infinite word.
    pub fn unroll(&self, k: usize) -> Vec<Configuration> {
        (0..k).map(|p| self.at(p).clone()).collect()
    }
}

/// Decides `prefix · cycle^ω ⊨ φ` by labelling every position with the truth
/// value of every subformula. Until is a least fixpoint and release a greatest
/// one over the wrapped position graph.
pub fn eval_lasso(phi: &Formula, w: &Lasso) -> bool {
    label(phi, w)[0]
}

fn label(phi: &Formula, w: &Lasso) -> Vec<bool> {
    use Formula::*;
    let len = w.len();
    let positions = 0..len;
    match phi {
        True => vec![true; len],
        False => vec![false; len],
        Atom { player, state } => positions.map(|p| w.at(p).get(*player) == *state).collect(),
        Not(a) => label(a, w).into_iter().map(|v| !v).collect(),
        And(a, b) => zip(label(a, w), label(b, w), |x, y| x && y),
        Or(a, b) => zip(label(a, w), label(b, w), |x, y| x || y),
        Implies(a, b) => zip(label(a, w), label(b, w), |x, y| !x || y),
        Next(a) => {
            let la = label(a, w);
            positions.map(|p| la[w.succ(p)]).collect()
        }
        Eventually(a) => until(&vec![true; len], &label(a, w), w),
        Always(a) => release(&vec![false; len], &label(a, w), w),
        Until(a, b) => until(&label(a, w), &label(b, w), w),
        Release(a, b) => release(&label(a, w), &label(b, w), w),
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

fn until(a: &[bool], b: &[bool], w: &Lasso) -> Vec<bool> {
    let mut val = vec![false; w.len()];
    loop {
        let mut changed = false;
        for p in (0..w.len()).rev() {
            let v = b[p] || (a[p] && val[w.succ(p)]);
            if v != val[p] {
                val[p] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}

fn release(a: &[bool], b: &[bool], w: &Lasso) -> Vec<bool> {
    let mut val = vec![true; w.len()];
    loop {
        let mut changed = false;
        for p in (0..w.len()).rev() {
            let v = b[p] && (a[p] || val[w.succ(p)]);
            if v != val[p] {
                val[p] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ltl::parse;

    fn lasso(prefix: &[[u32; 2]], cycle: &[[u32; 2]]) -> Lasso {
        Lasso::new(
            prefix.iter().map(|c| Configuration(c.to_vec())).collect(),
            cycle.iter().map(|c| Configuration(c.to_vec())).collect(),
        )
    }

    const A: u32 = 0;
    const B: u32 = 1;

    #[test]
    fn examples() {
        let g = fixtures::toggle();
        let ar = g.arena();
        let p = |s| parse(s, ar, 2).unwrap();
        assert!(eval_lasso(&p("F at(0,b)"), &lasso(&[[A, A]], &[[B, B]])));
        assert!(!eval_lasso(&p("G at(0,a)"), &lasso(&[], &[[A, A], [B, B]])));
        let phi = p("F at(0,b) & G (at(0,b) -> X at(0,b))");
        assert!(!eval_lasso(&phi, &lasso(&[[A, A]], &[[B, B], [A, A]])));
        assert!(eval_lasso(&phi, &lasso(&[[A, A]], &[[B, B]])));
    }

    #[test]
    fn wraps_on_cycle() {
        let g = fixtures::toggle();
        let ar = g.arena();
        let p = |s| parse(s, ar, 2).unwrap();
        let w = lasso(&[[B, B]], &[[A, A], [B, A]]);
        assert!(eval_lasso(&p("G F at(0,b)"), &w));
        assert!(!eval_lasso(&p("F G at(0,b)"), &w));
        assert!(eval_lasso(&p("G F at(0,a)"), &w));
        assert!(eval_lasso(&p("X X X at(0,a)"), &w));
        assert!(eval_lasso(&p("at(1,a) R X at(1,a)"), &w));
        assert!(!eval_lasso(&p("at(0,b) U at(1,b)"), &lasso(&[], &[[B, A]])));
    }

    #[test]
    fn unroll_follows_cycle() {
        let w = lasso(&[[A, A]], &[[B, B], [A, B]]);
        let u = w.unroll(5);
        assert_eq!(u[3], Configuration(vec![B, B]));
        assert_eq!(u[4], Configuration(vec![A, B]));
    }
}

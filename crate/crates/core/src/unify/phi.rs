//! Augmented sub-strategies and the termination measure.

use std::collections::{HashMap, HashSet, VecDeque};
use std::rc::Rc;

use serde::Serialize;

use super::pre::Memory;
use crate::strategy::{DepthMeasure, Kind, Strategy};

/// Successors of `s` in the sub-strategy relation, where a fixed point
/// `mu X. B` also reaches its one-step unrolling `B[X := mu X. B]`.
fn successors(s: &Strategy) -> Vec<Strategy> {
    match s.kind() {
        Kind::Mu(x, body) => vec![body.subst(x, s), body.clone()],
        _ => s.children().into_iter().cloned().collect(),
    }
}

/// `Φ(S)`: every sub-strategy of `S`, including those of the unrolled bodies of
/// its fixed points. Computed as a reachability closure, so it is finite.
pub fn phi(s: &Strategy) -> HashSet<Strategy> {
    let mut seen: HashSet<Strategy> = HashSet::new();
    let mut queue = VecDeque::from([s.clone()]);
    while let Some(cur) = queue.pop_front() {
        if seen.insert(cur.clone()) {
            queue.extend(successors(&cur).into_iter().filter(|n| !seen.contains(n)));
        }
    }
    seen
}

/// `Φ_μ(S)`: the fixed-point sub-strategies of `S`, without unrolling.
pub fn phi_mu(s: &Strategy) -> HashSet<Strategy> {
    fn walk(s: &Strategy, out: &mut HashSet<Strategy>) {
        if s.is_mu() {
            out.insert(s.clone());
        }
        s.children().into_iter().for_each(|c| walk(c, out));
    }
    let mut out = HashSet::new();
    walk(s, &mut out);
    out
}

/// `(Λ, Δ(left), Δ(right))`, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MeasureTriple {
    pub lambda: usize,
    pub delta_left: DepthMeasure,
    pub delta_right: DepthMeasure,
}

struct PhiSets {
    all: HashSet<Strategy>,
    /// The fixed points of `all`. Unlike [`phi_mu`] this includes fixed points
    /// that only appear after unrolling, which makes the set shrink along
    /// every engine step.
    mu: HashSet<Strategy>,
}

/// Memoized `Φ` and `Φ_μ` per strategy.
#[derive(Default)]
pub struct PhiCache {
    sets: HashMap<Strategy, Rc<PhiSets>>,
}

impl PhiCache {
    fn get(&mut self, s: &Strategy) -> Rc<PhiSets> {
        if let Some(p) = self.sets.get(s) {
            return p.clone();
        }
        let all = phi(s);
        let mu = all.iter().filter(|x| x.is_mu()).cloned().collect();
        let p = Rc::new(PhiSets { all, mu });
        self.sets.insert(s.clone(), p.clone());
        p
    }

    /// `Λ(S, R, M)`: the number of pairs of `Φ_μ(S) × Φ(R)` and of
    /// `Φ(S) × Φ_μ(R)` that the memory does not hold yet.
    pub fn lambda(&mut self, left: &Strategy, right: &Strategy, mem: &Memory) -> usize {
        let l = self.get(left);
        let r = self.get(right);
        let mut remembered_left = 0;
        let mut remembered_right = 0;
        for m in mem.iter() {
            if m.left.is_mu() {
                if l.mu.contains(&m.left) && r.all.contains(&m.right) {
                    remembered_left += 1;
                }
            } else if l.all.contains(&m.left) && r.mu.contains(&m.right) {
                remembered_right += 1;
            }
        }
        (l.mu.len() * r.all.len() - remembered_left) + (l.all.len() * r.mu.len() - remembered_right)
    }

    pub fn measure(&mut self, left: &Strategy, right: &Strategy, mem: &Memory) -> MeasureTriple {
        MeasureTriple {
            lambda: self.lambda(left, right, mem),
            delta_left: DepthMeasure::of(left),
            delta_right: DepthMeasure::of(right),
        }
    }
}

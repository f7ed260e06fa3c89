//! Exact triangle covers of pair multigraphs by backtracking.
//!
//! The engine answers one question: given a multigraph on `{0, …, v−1}` described
//! by a pair-multiplicity map, can its edge multiset be partitioned into
//! triangles? The same routine powers leftover decomposition after Hamiltonian
//! cycles are removed, pooled three-copy leftovers (multiplicities up to 3), the
//! threefold fallback, and the brute-force design oracle (multiplicities up to λ).
//!
//! Branching always happens on the lexicographically least pair (a, b) of positive
//! multiplicity. Any third point c must then satisfy c > b: pairs below (a, b) are
//! already exhausted, so a candidate with c < b would need a positive pair smaller
//! than the least one. This keeps the branch factor small without any heuristics.
//! When the same pair is completed several times in a row (multiplicity ≥ 2), the
//! chosen third points are forced to be non-decreasing, which removes permutations
//! of identical block multisets from the search space.
//!
//! Search cost is capped by a node budget shared along the whole recursion; the
//! caller decides how to react to exhaustion (give up, restart with another seed,
//! or report failure).

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::{Triple, Vertex};

/// Pair multiplicity map over vertices `0..v`.
#[derive(Clone)]
pub(crate) struct PairMap {
    v: usize,
    mult: Vec<u8>,
    total: u64,
}

impl PairMap {
    pub fn new(v: u32) -> Self {
        let v = v as usize;
        PairMap { v, mult: vec![0; v * v], total: 0 }
    }

    /// The complete multigraph `mu`·K_v.
    pub fn complete(v: u32, mu: u8) -> Self {
        let mut map = PairMap::new(v);
        for a in 0..v {
            for b in a + 1..v {
                map.add(a, b, mu);
            }
        }
        map
    }

    pub fn v(&self) -> u32 {
        self.v as u32
    }

    fn idx(&self, a: Vertex, b: Vertex) -> usize {
        debug_assert!(a < b && (b as usize) < self.v);
        a as usize * self.v + b as usize
    }

    pub fn get(&self, a: Vertex, b: Vertex) -> u8 {
        self.mult[self.idx(a.min(b), a.max(b))]
    }

    pub fn add(&mut self, a: Vertex, b: Vertex, by: u8) {
        let i = self.idx(a.min(b), a.max(b));
        self.mult[i] += by;
        self.total += u64::from(by);
    }

    pub fn sub(&mut self, a: Vertex, b: Vertex, by: u8) {
        let i = self.idx(a.min(b), a.max(b));
        debug_assert!(self.mult[i] >= by, "multiplicity underflow at ({a},{b})");
        self.mult[i] -= by;
        self.total -= u64::from(by);
    }

    /// Total remaining edge multiplicity.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Sum of multiplicities at `x` (counts a double edge twice).
    pub fn degree(&self, x: Vertex) -> u32 {
        (0..self.v as Vertex).filter(|&y| y != x).map(|y| u32::from(self.get(x, y))).sum()
    }

    /// Removes one copy of every edge of `triple`. The caller guarantees all
    /// three multiplicities are positive.
    pub(crate) fn remove_triple(&mut self, t: Triple) {
        for (a, b) in t.pairs() {
            self.sub(a, b, 1);
        }
    }

    fn restore_triple(&mut self, t: Triple) {
        for (a, b) in t.pairs() {
            self.add(a, b, 1);
        }
    }

    /// Least positive pair at or after the flat index `from`, with its flat index.
    /// Along one branch of the search the least positive pair never moves backwards,
    /// so passing the parent's index keeps the scan amortised linear.
    fn first_positive(&self, from: usize) -> Option<(Vertex, Vertex, usize)> {
        self.mult[from..].iter().position(|&m| m > 0).map(|off| {
            let i = from + off;
            ((i / self.v) as Vertex, (i % self.v) as Vertex, i)
        })
    }
}

/// Result of an exact-cover search.
pub(crate) enum CoverOutcome {
    /// A partition into triangles, in the order the search placed them.
    Found(Vec<Triple>),
    /// The whole space below the budget was explored; no cover exists.
    Exhausted,
    /// The node budget ran out before the space was exhausted.
    OutOfBudget,
}

/// Partitions the edge multiset of `map` into triangles, or proves there is no
/// partition, within `budget` search nodes. With `rng`, candidate third points
/// are tried in a shuffled order (used for randomised restarts); without it the
/// order is ascending and the search is deterministic.
pub(crate) fn exact_cover(
    map: &mut PairMap,
    budget: &mut u64,
    mut rng: Option<&mut ChaCha8Rng>,
) -> CoverOutcome {
    if map.total() % 3 != 0 {
        return CoverOutcome::Exhausted;
    }
    let mut out = Vec::with_capacity((map.total() / 3) as usize);
    match cover_rec(map, 0, None, budget, &mut rng, &mut out) {
        Step::Done => CoverOutcome::Found(out),
        Step::DeadEnd => CoverOutcome::Exhausted,
        Step::Budget => CoverOutcome::OutOfBudget,
    }
}

enum Step {
    Done,
    DeadEnd,
    Budget,
}

fn cover_rec(
    map: &mut PairMap,
    from: usize,
    same_pair_floor: Option<(Vertex, Vertex, Vertex)>,
    budget: &mut u64,
    rng: &mut Option<&mut ChaCha8Rng>,
    out: &mut Vec<Triple>,
) -> Step {
    if *budget == 0 {
        return Step::Budget;
    }
    *budget -= 1;

    let Some((a, b, at)) = map.first_positive(from) else {
        return Step::Done;
    };

    // Third points necessarily exceed b; see module docs.
    let floor = match same_pair_floor {
        Some((fa, fb, fc)) if (fa, fb) == (a, b) => fc,
        _ => b + 1,
    };
    let mut candidates: Vec<Vertex> = (floor..map.v())
        .filter(|&c| map.get(a, c) > 0 && map.get(b, c) > 0)
        .collect();
    if let Some(r) = rng.as_deref_mut() {
        // A shuffled candidate order explores different covers per restart. The
        // non-decreasing floor per repeated pair stays sound under any order:
        // every cover admits a listing whose repeated completions ascend.
        candidates.shuffle(r);
    }

    for c in candidates {
        let t = Triple::new(a, b, c);
        map.remove_triple(t);
        out.push(t);
        match cover_rec(map, at, Some((a, b, c)), budget, rng, out) {
            Step::Done => return Step::Done,
            Step::Budget => {
                out.pop();
                map.restore_triple(t);
                return Step::Budget;
            }
            Step::DeadEnd => {
                out.pop();
                map.restore_triple(t);
            }
        }
    }
    Step::DeadEnd
}

/// Finds a Hamiltonian cycle in the simple graph held by `map` (multiplicities
/// above one are ignored) by depth-first search with shuffled neighbour order.
/// Returns the vertex sequence, or `None` if none was found within `budget`
/// nodes. The edges are *not* removed from the map.
pub(crate) fn find_ham_cycle(
    map: &PairMap,
    rng: &mut ChaCha8Rng,
    budget: &mut u64,
) -> Option<Vec<Vertex>> {
    let v = map.v();
    if v < 3 || (0..v).any(|x| map.degree(x) < 2) {
        return None;
    }
    let mut path = Vec::with_capacity(v as usize);
    path.push(0);
    let mut used = vec![false; v as usize];
    used[0] = true;
    ham_rec(map, &mut path, &mut used, rng, budget).then_some(path)
}

fn ham_rec(
    map: &PairMap,
    path: &mut Vec<Vertex>,
    used: &mut [bool],
    rng: &mut ChaCha8Rng,
    budget: &mut u64,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let last = *path.last().expect("path starts non-empty");
    let v = map.v();
    if path.len() == v as usize {
        return map.get(last, 0) > 0;
    }
    let mut next: Vec<Vertex> = (1..v)
        .filter(|&x| !used[x as usize] && map.get(last, x) > 0)
        .collect();
    next.shuffle(rng);
    for x in next {
        path.push(x);
        used[x as usize] = true;
        if ham_rec(map, path, used, rng, budget) {
            return true;
        }
        path.pop();
        used[x as usize] = false;
    }
    false
}

/// If the graph in `map` is exactly one Hamiltonian cycle (2-regular, simple,
/// connected, spanning), returns its vertex sequence without consuming it.
pub(crate) fn as_single_cycle(map: &PairMap) -> Option<Vec<Vertex>> {
    let v = map.v();
    if v < 3 || (0..v).any(|x| map.degree(x) != 2) {
        return None;
    }
    let mut path = Vec::with_capacity(v as usize);
    let mut prev = 0;
    let mut here = (1..v).find(|&x| map.get(0, x) > 0)?;
    path.push(prev);
    while here != 0 {
        path.push(here);
        let next = (0..v).find(|&x| x != prev && x != here && map.get(here, x) > 0)?;
        prev = here;
        here = next;
    }
    // A double edge would have sent the walk straight back and tripped the
    // `x != prev` filter above, so reaching 0 with all vertices seen means a
    // genuine spanning cycle.
    (path.len() == v as usize).then_some(path)
}

/// Extracts `count` Hamiltonian cycles from `map`, removing their edges. In
/// `exact` mode the map must end up empty: the final cycle is taken only if the
/// remainder *is* a single spanning cycle, which makes the endgame a cheap
/// deterministic check instead of a blind search.
pub(crate) fn extract_cycles(
    map: &mut PairMap,
    count: u32,
    exact: bool,
    rng: &mut ChaCha8Rng,
    budget: &mut u64,
) -> Option<Vec<Vec<Vertex>>> {
    let mut out = Vec::with_capacity(count as usize);
    for i in 0..count {
        let cycle = if exact && i + 1 == count {
            as_single_cycle(map)?
        } else {
            find_ham_cycle(map, rng, budget)?
        };
        let v = cycle.len();
        for w in 0..v {
            map.sub(cycle[w], cycle[(w + 1) % v], 1);
        }
        out.push(cycle);
    }
    Some(out)
}

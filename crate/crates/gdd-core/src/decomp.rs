//! Decompositions of complete graphs into Hamiltonian cycles, one optional
//! 1-factor, and triangles.
//!
//! Every construction scheme in [`crate::builder`] consumes K_v (or three copies
//! of it) carved into *starrable* pieces: a Hamiltonian cycle starred from an
//! outside point contributes 2 to that point's cross-pair count, a 1-factor
//! contributes 1, and leftover triangles become ordinary blocks. This module
//! produces those carvings.
//!
//! # Feasibility
//!
//! K_v with odd v splits into k Hamiltonian cycles and triangles exactly when
//! 0 ≤ k ≤ (v−1)/2 and 3 | v(v−1)/2 − kv; with even v, into h cycles, **one**
//! perfect matching and triangles exactly when 0 ≤ h ≤ (v−2)/2 and
//! 3 | v(v−1)/2 − hv − v/2. By residue of v mod 6 the divisibility part reads:
//!
//! | v mod 6 | 0   | 1         | 2         | 3   | 4                   | 5                   |
//! |---------|-----|-----------|-----------|-----|---------------------|---------------------|
//! | allowed | all | k ≡ 0 (3) | h ≡ 0 (3) | all | h ≡ 1 (3), h ≥ 1    | k ≡ 2 (3), k ≥ 2    |
//!
//! [`feasible_mixed`] decides this; [`decompose_mixed`] constructs a witness.
//!
//! # Machinery
//!
//! Five layers, tried in order:
//!
//! 1. **Difference classes.** Label K_v by Z_v; edges of difference d form a
//!    class of v edges (v/2 for the median class of even v, which is exactly the
//!    1-factor). A class with gcd(d, v) = 1 is a Hamiltonian circulant cycle; a
//!    class with v = 3d is a disjoint union of v/3 triangles; and three classes
//!    {a, b, c} with a + b = c or a + b + c = v tile into the v triangles
//!    {x, x+a, x+a+b}. [`difference_partition`] searches for a partition of all
//!    classes into those roles and [`DifferencePartition::realize`] expands it.
//! 2. **Triple systems.** With no cycles requested, Steiner systems answer
//!    directly: odd v uses an STS(v); even v takes an STS(v+1) and deletes one
//!    point, whose incident triples collapse into the perfect matching.
//! 3. **Class teams and hybrids.** Classes with gcd(d, v) > 1 are not cycles on
//!    their own, but a *team* of classes whose joint gcd with v is 1 forms a
//!    connected 2·|team|-regular circulant, which is carved into |team|
//!    Hamiltonian cycles by a small depth-first search. When 3 | v and the
//!    leftover is not a whole number of families (its class count is ≡ 2 mod 3,
//!    e.g. v = 15, k = 5), no plan at class granularity exists at all; a
//!    *hybrid* of s classes is then carved into s − 2 Hamiltonian cycles plus
//!    triangles, realigning the residue. The carve itself is structured: a
//!    *frame* of two base triangles, anchored at residue classes mod 3 and
//!    translated by multiples of 3, consumes six whole thirds of the union,
//!    and the frame's balance conditions make the leftover a uniform-degree
//!    graph that splits into the cycles with little or no search.
//! 4. **Zigzag sacrifice.** Start from the full zigzag (Walecki) Hamiltonian
//!    decomposition, keep k of its cycles and melt the other t into triangles
//!    with the exact-cover engine, trying t-subsets in lexicographic order.
//!    Unions of several whole cycles are rich and usually cover quickly.
//! 5. **Random extraction.** Peel k Hamiltonian cycles off K_v (minus a random
//!    perfect matching for even v) by randomised depth-first search, then cover
//!    the leftover with triangles, restarting on fresh seeds until the node
//!    budget is spent.
//!
//! The threefold variants ([`decompose_threefold`]) treat 3·K_v. Normally the
//! three copies are handled independently through [`split_across_copies`]; when
//! no per-copy split exists (possible only for odd v with k ≡ 0 (mod 3) too
//! small to feed all copies), the triangle leftovers of all copies are pooled
//! into one multigraph with multiplicities up to 3 and decomposed together.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::search::{exact_cover, extract_cycles, CoverOutcome, PairMap};
use crate::{mix_seed, triples, Triple, Vertex};

/// Default backtracking budget, in search nodes, for one copy of K_v.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

// ---------------------------------------------------------------------------
// Pieces
// ---------------------------------------------------------------------------

/// A cycle through distinct vertices; edges run between consecutive entries and
/// wrap around. All cycles produced by this module are Hamiltonian in their K_v.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cycle {
    vertices: Vec<Vertex>,
}

impl Cycle {
    /// A cycle visiting `vertices` in order. Requires at least 3 distinct vertices.
    pub fn new(vertices: Vec<Vertex>) -> Self {
        assert!(vertices.len() >= 3, "a cycle needs at least 3 vertices");
        debug_assert!(
            {
                let mut sorted = vertices.clone();
                sorted.sort_unstable();
                sorted.windows(2).all(|w| w[0] < w[1])
            },
            "cycle vertices must be distinct: {vertices:?}"
        );
        Cycle { vertices }
    }

    /// Number of vertices (= number of edges).
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// The edges of the cycle, each normalised as (low, high).
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            (a.min(b), a.max(b))
        })
    }

    /// The same cycle with every vertex renamed through `f`.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Self {
        Cycle::new(self.vertices.iter().map(|&x| f(x)).collect())
    }
}

/// A perfect matching: disjoint pairs covering every vertex of its K_v.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OneFactor {
    pairs: Vec<(Vertex, Vertex)>,
}

impl OneFactor {
    /// A 1-factor from the given pairs; each is normalised and the list sorted.
    pub fn new(pairs: Vec<(Vertex, Vertex)>) -> Self {
        let mut pairs: Vec<(Vertex, Vertex)> =
            pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        debug_assert!(
            {
                let mut seen: Vec<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] < w[1])
            },
            "1-factor pairs must be disjoint: {pairs:?}"
        );
        OneFactor { pairs }
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    /// The same matching with every vertex renamed through `f`.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Self {
        OneFactor::new(self.pairs.iter().map(|&(a, b)| (f(a), f(b))).collect())
    }
}

/// K_v carved into Hamiltonian cycles, an optional perfect matching (present
/// exactly for even v), and triangles, together covering every edge once.
#[derive(Clone, Debug)]
pub struct MixedDecomposition {
    pub v: u32,
    pub cycles: Vec<Cycle>,
    pub one_factor: Option<OneFactor>,
    pub triangles: Vec<Triple>,
}

/// 3·K_v carved the same way: `one_factors` holds one matching per copy (three
/// in total) for even v and is empty for odd v. Cycles may repeat — the three
/// copies are indistinguishable, and pooled leftovers may even reuse one
/// circulant twice.
#[derive(Clone, Debug)]
pub struct ThreefoldDecomposition {
    pub v: u32,
    pub cycles: Vec<Cycle>,
    pub one_factors: Vec<OneFactor>,
    pub triangles: Vec<Triple>,
}

// ---------------------------------------------------------------------------
// Feasibility
// ---------------------------------------------------------------------------

/// Largest number of Hamiltonian cycles K_v can shed: (v−1)/2, or (v−2)/2 when
/// a 1-factor is also reserved.
pub fn max_cycles(v: u32, with_factor: bool) -> u32 {
    if with_factor {
        v.saturating_sub(2) / 2
    } else {
        v.saturating_sub(1) / 2
    }
}

/// Whether K_v splits into `k` Hamiltonian cycles, a 1-factor exactly when
/// `with_factor` (which requires even v), and triangles for the rest.
pub fn feasible_mixed(v: u32, k: u32, with_factor: bool) -> bool {
    if v < 3 || with_factor != (v % 2 == 0) || k > max_cycles(v, with_factor) {
        return false;
    }
    let pairs = u64::from(v) * u64::from(v - 1) / 2;
    let used = u64::from(k) * u64::from(v) + if with_factor { u64::from(v / 2) } else { 0 };
    (pairs - used) % 3 == 0
}

fn infeasibility_reason(v: u32, k: u32, with_factor: bool) -> String {
    if v < 3 {
        return format!("K_{v} has no triangles or Hamiltonian cycles");
    }
    if with_factor != (v % 2 == 0) {
        return if with_factor {
            format!("K_{v} has odd order, so it has no perfect matching")
        } else {
            format!("K_{v} has even order, so triangles cannot absorb its odd degrees without a matching")
        };
    }
    let cap = max_cycles(v, with_factor);
    if k > cap {
        return format!("at most {cap} Hamiltonian cycles fit");
    }
    format!("the leftover edge count is not divisible by 3 (v mod 6 = {}, k mod 3 = {})", v % 6, k % 3)
}

/// Failure to decompose or to prove a decomposition within budget.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum DecompError {
    /// The requested shape fails the counting conditions; no witness exists.
    #[error("no decomposition of K_{v} into {k} Hamiltonian cycles plus remainder exists: {reason}")]
    Infeasible { v: u32, k: u32, with_factor: bool, reason: String },
    /// The shape passes counting but the search budget ran out first.
    #[error("search budget of {budget} nodes exhausted decomposing K_{v} (k = {k}, seed = {seed})")]
    SearchExhausted { v: u32, k: u32, budget: u64, seed: u64 },
}

// ---------------------------------------------------------------------------
// Zigzag (Walecki) Hamiltonian decompositions
// ---------------------------------------------------------------------------

/// The classical Hamiltonian decomposition of K_v for odd v: (v−1)/2 cycles,
/// each zigzagging around the ring Z_{v−1} from a hub. Their edges partition K_v.
pub fn walecki_cycles(v: u32) -> Vec<Cycle> {
    assert!(v >= 3 && v % 2 == 1, "walecki_cycles requires odd v >= 3, got {v}");
    zigzag_cycles(v, (v - 1) / 2)
}

/// For even v: (v−2)/2 zigzag Hamiltonian cycles whose complement in K_v is a
/// perfect matching, returned alongside them.
fn walecki_with_factor(v: u32) -> (Vec<Cycle>, OneFactor) {
    assert!(v >= 4 && v % 2 == 0);
    let cycles = zigzag_cycles(v, (v - 2) / 2);
    let mut covered = PairMap::new(v);
    for cy in &cycles {
        for (a, b) in cy.edges() {
            covered.add(a, b, 1);
        }
    }
    let mut pairs = Vec::with_capacity(v as usize / 2);
    for a in 0..v {
        for b in a + 1..v {
            match covered.get(a, b) {
                0 => pairs.push((a, b)),
                1 => {}
                _ => unreachable!("zigzag cycles are edge-disjoint"),
            }
        }
    }
    (cycles, OneFactor::new(pairs))
}

/// Cycles i = 0, …, count−1 over ring Z_{v−1} plus hub v−1; cycle i visits
/// hub, i, i+1, i−1, i+2, i−2, … so that consecutive differences around the
/// ring take every value exactly twice.
fn zigzag_cycles(v: u32, count: u32) -> Vec<Cycle> {
    let r = v - 1;
    let hub = v - 1;
    (0..count)
        .map(|i| {
            let mut seq = Vec::with_capacity(v as usize);
            seq.push(hub);
            seq.push(i);
            for t in 1..r {
                let x = if t % 2 == 1 { (i + t.div_ceil(2)) % r } else { (i + r - t / 2) % r };
                seq.push(x);
            }
            Cycle::new(seq)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Difference-class partitions
// ---------------------------------------------------------------------------

/// A decomposition plan in terms of difference classes of Z_v; see the module
/// docs for how each role expands. In pooled (three-copy) plans, classes may
/// repeat across roles up to three times in total.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DifferencePartition {
    pub v: u32,
    /// Classes realised as circulant Hamiltonian cycles (gcd(d, v) = 1).
    pub cycle_classes: Vec<u32>,
    /// The median class v/2 of even v, realised as the perfect matching.
    pub factor_class: Option<u32>,
    /// Class triples {a ≤ b ≤ c} with a+b = c or a+b+c = v, realised as the
    /// triangles {x, x+a, x+a+b} for all x in Z_v.
    pub triple_families: Vec<[u32; 3]>,
    /// Classes d with v = 3d, realised as the v/3 disjoint triangles
    /// {x, x+d, x+2d}; listed once per copy consumed.
    pub direct_classes: Vec<u32>,
}

impl DifferencePartition {
    /// Expands the plan into explicit cycles, matching, and triangles.
    pub fn realize(&self) -> MixedDecomposition {
        let v = self.v;
        let cycles = self.cycle_classes.iter().map(|&d| circulant_cycle(v, d)).collect();
        let one_factor = self.factor_class.map(|_| median_factor(v));
        let mut triangles = Vec::new();
        for &d in &self.direct_classes {
            direct_triangles(v, d, &mut triangles);
        }
        for &fam in &self.triple_families {
            family_triangles(v, fam, &mut triangles);
        }
        MixedDecomposition { v, cycles, one_factor, triangles }
    }
}

/// The Hamiltonian cycle 0, d, 2d, … of a class with gcd(d, v) = 1.
fn circulant_cycle(v: u32, d: u32) -> Cycle {
    debug_assert_eq!(num_integer::gcd(d, v), 1);
    Cycle::new((0..v).map(|i| ((u64::from(i) * u64::from(d)) % u64::from(v)) as Vertex).collect())
}

/// The median class v/2 of even v as a perfect matching {x, x + v/2}.
fn median_factor(v: u32) -> OneFactor {
    debug_assert_eq!(v % 2, 0);
    let h = v / 2;
    OneFactor::new((0..h).map(|x| (x, x + h)).collect())
}

/// The v/3 disjoint triangles {x, x+d, x+2d} of a class with v = 3d.
fn direct_triangles(v: u32, d: u32, out: &mut Vec<Triple>) {
    debug_assert_eq!(v, 3 * d);
    for x in 0..d {
        out.push(Triple::new(x, x + d, x + 2 * d));
    }
}

/// The v triangles {x, x+a, x+a+b} tiling a valid family {a, b, c}.
fn family_triangles(v: u32, [a, b, c]: [u32; 3], out: &mut Vec<Triple>) {
    debug_assert!(a + b == c || a + b + c == v);
    for x in 0..v {
        out.push(Triple::new(x, (x + a) % v, (x + a + b) % v));
    }
}

/// Adds every edge of difference class `d` (one copy) to the map.
fn add_class(map: &mut PairMap, v: u32, d: u32) {
    debug_assert!(d >= 1 && d < v.div_ceil(2), "median and zero classes are not teamable");
    for x in 0..v {
        let y = (x + d) % v;
        map.add(x.min(y), x.max(y), 1);
    }
}

/// Searches for a difference-class plan for K_v with `k` cycles (single copy).
/// Deterministic; returns `None` when classes cannot be partitioned this way,
/// which does not preclude an unstructured decomposition.
pub fn difference_partition(v: u32, k: u32, with_factor: bool) -> Option<DifferencePartition> {
    if !feasible_mixed(v, k, with_factor) {
        return None;
    }
    partition_classes(v, k, with_factor, 1)
}

/// Pooled plan over 3·K_v (odd v): every class carries multiplicity 3.
fn difference_partition_pooled(v: u32, k: u32) -> Option<DifferencePartition> {
    debug_assert!(v % 2 == 1);
    partition_classes(v, k, false, 3)
}

fn partition_classes(v: u32, k: u32, with_factor: bool, copies: u8) -> Option<DifferencePartition> {
    // Non-factor classes; the median class of even v is reserved for matchings.
    let top = if v % 2 == 0 { v / 2 - 1 } else { v / 2 };
    let mut mult: BTreeMap<u32, u8> = (1..=top).map(|d| (d, copies)).collect();
    let coprime: Vec<u32> = (1..=top).filter(|&d| num_integer::gcd(d, v) == 1).collect();
    let ctx = ClassContext { v, top };
    let mut chosen = Vec::new();
    let (cycle_classes, triple_families, direct_classes) =
        choose_cycles(&ctx, &coprime, &mut mult, 0, k, &mut chosen)?;
    Some(DifferencePartition {
        v,
        cycle_classes,
        factor_class: with_factor.then_some(v / 2),
        triple_families,
        direct_classes,
    })
}

struct ClassContext {
    v: u32,
    top: u32,
}

type ClassPlan = (Vec<u32>, Vec<[u32; 3]>, Vec<u32>);

/// Picks a multiset of `need` coprime classes as cycles (ascending with
/// repetition), then partitions whatever remains into triple families and
/// direct classes.
fn choose_cycles(
    ctx: &ClassContext,
    coprime: &[u32],
    mult: &mut BTreeMap<u32, u8>,
    start: usize,
    need: u32,
    chosen: &mut Vec<u32>,
) -> Option<ClassPlan> {
    if need == 0 {
        let mut families = Vec::new();
        let mut directs = Vec::new();
        if partition_triples(ctx, mult, &mut families, &mut directs) {
            return Some((chosen.clone(), families, directs));
        }
        return None;
    }
    for idx in start..coprime.len() {
        let d = coprime[idx];
        if mult[&d] == 0 {
            continue;
        }
        *mult.get_mut(&d).unwrap() -= 1;
        chosen.push(d);
        if let Some(plan) = choose_cycles(ctx, coprime, mult, idx, need - 1, chosen) {
            return Some(plan);
        }
        chosen.pop();
        *mult.get_mut(&d).unwrap() += 1;
    }
    None
}

/// Partitions the remaining class multiset into valid triple families and
/// direct classes. Branches on the least remaining class.
fn partition_triples(
    ctx: &ClassContext,
    mult: &mut BTreeMap<u32, u8>,
    families: &mut Vec<[u32; 3]>,
    directs: &mut Vec<u32>,
) -> bool {
    let Some((&d, _)) = mult.iter().find(|&(_, &m)| m > 0) else {
        return true;
    };
    for e in d..=ctx.top {
        // Candidate third classes keeping {d, e, f} valid and sorted; the sum
        // candidate comes second so plans prefer the low-difference family.
        let mut cands = [0u32; 2];
        let mut len = 0;
        let f1 = d + e;
        if f1 <= ctx.top {
            cands[len] = f1;
            len += 1;
        }
        if let Some(f2) = ctx.v.checked_sub(d + e) {
            if f2 <= ctx.top && f2 != f1 {
                cands[len] = f2;
                len += 1;
            }
        }
        for &f in &cands[..len] {
            if f < e {
                continue; // its sorted form is enumerated at a smaller e
            }
            let trio = [d, e, f];
            let enough = trio.iter().all(|&x| {
                let need = trio.iter().filter(|&&y| y == x).count() as u8;
                mult.get(&x).copied().unwrap_or(0) >= need
            });
            if !enough {
                continue;
            }
            for x in trio {
                *mult.get_mut(&x).unwrap() -= 1;
            }
            families.push(trio);
            if partition_triples(ctx, mult, families, directs) {
                return true;
            }
            families.pop();
            for x in trio {
                *mult.get_mut(&x).unwrap() += 1;
            }
        }
    }
    if ctx.v == 3 * d {
        *mult.get_mut(&d).unwrap() -= 1;
        directs.push(d);
        if partition_triples(ctx, mult, families, directs) {
            return true;
        }
        directs.pop();
        *mult.get_mut(&d).unwrap() += 1;
    }
    false
}

// ---------------------------------------------------------------------------
// Mixed decomposition of one copy
// ---------------------------------------------------------------------------

/// Decomposes K_v into `k` Hamiltonian cycles, a 1-factor exactly when
/// `with_factor`, and triangles, using the default node budget.
/// Deterministic for a fixed seed.
pub fn decompose_mixed(
    v: u32,
    k: u32,
    with_factor: bool,
    seed: u64,
) -> Result<MixedDecomposition, DecompError> {
    decompose_mixed_with_budget(v, k, with_factor, seed, DEFAULT_NODE_BUDGET)
}

/// [`decompose_mixed`] with an explicit backtracking budget in search nodes.
pub fn decompose_mixed_with_budget(
    v: u32,
    k: u32,
    with_factor: bool,
    seed: u64,
    budget: u64,
) -> Result<MixedDecomposition, DecompError> {
    if !feasible_mixed(v, k, with_factor) {
        return Err(DecompError::Infeasible {
            v,
            k,
            with_factor,
            reason: infeasibility_reason(v, k, with_factor),
        });
    }
    if let Some(plan) = difference_partition(v, k, with_factor) {
        return Ok(plan.realize());
    }
    if k == 0 {
        // Pure triangle shapes come straight from Steiner systems.
        if !with_factor {
            let ts = triples::steiner_triple_system(v)
                .expect("odd v with k = 0 feasible only for v = 1, 3 (mod 6)");
            return Ok(MixedDecomposition { v, cycles: vec![], one_factor: None, triangles: ts.triples });
        }
        return Ok(sts_minus_point(v));
    }
    if k == max_cycles(v, with_factor) {
        // No triangles at all: the zigzag decomposition is the answer.
        let (cycles, one_factor) = if v % 2 == 1 {
            (walecki_cycles(v), None)
        } else {
            let (c, f) = walecki_with_factor(v);
            (c, Some(f))
        };
        return Ok(MixedDecomposition { v, cycles, one_factor, triangles: vec![] });
    }

    let salt = (u64::from(v) << 33) | (u64::from(k) << 1) | u64::from(with_factor);
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, salt));
    let mut remaining = budget;

    // Class teams and hybrids: deterministic plans, searched realisations.
    // Plans are visited round-robin in thin slices so that a hybrid whose
    // carve happens to be hopeless cannot starve a workable one. Plans whose
    // hybrid has a carve frame go first; the frameless ones are left to the
    // randomised carve, which succeeds far more rarely.
    let mut plans = team_plans(v, k, with_factor, PLAN_CAP);
    plans.sort_by_cached_key(|p| match &p.hybrid {
        None => 0u8,
        Some(h) if !frames(v, &h.classes).is_empty() => 1,
        Some(_) => 2,
    });
    let mut plan_budget = (budget / 2).min(remaining);
    while plan_budget > 0 && remaining > 0 && !plans.is_empty() {
        for plan in &plans {
            let mut nodes = (budget / 512).max(64).min(plan_budget).min(remaining);
            if nodes == 0 {
                break;
            }
            let before = nodes;
            let found = realize_team_plan(plan, &mut rng, &mut nodes);
            let used = (before - nodes).max(1);
            plan_budget = plan_budget.saturating_sub(used);
            remaining = remaining.saturating_sub(used);
            if let Some(d) = found {
                return Ok(d);
            }
        }
    }

    // Zigzag sacrifice: keep k whole cycles, melt the other t into triangles.
    if remaining > 0 {
        if let Some(d) = sacrifice_attempts(v, k, budget, &mut remaining) {
            return Ok(d);
        }
    }

    // Random extraction with restarts.
    while remaining > 0 {
        let mut nodes = (budget / 16).max(1).min(remaining);
        let before = nodes;
        let found = extraction_attempt(v, k, with_factor, &mut rng, &mut nodes);
        remaining -= (before - nodes).max(1).min(remaining);
        if let Some(d) = found {
            return Ok(d);
        }
    }
    Err(DecompError::SearchExhausted { v, k, budget, seed })
}

/// Caps keeping the deterministic stages a bounded slice of the whole search.
const PLAN_CAP: usize = 64;
const SACRIFICE_CAP: usize = 160;

/// A decomposition plan whose cycle fuel may include classes that are not
/// circulant cycles on their own: each team's classes jointly span Z_v and its
/// union graph is carved into |team| Hamiltonian cycles by search. A plan may
/// also name a *hybrid* set of classes whose union is carved into cycles plus
/// triangles — the only way to realise leftovers that are not a whole number
/// of families.
struct TeamPlan {
    v: u32,
    with_factor: bool,
    teams: Vec<Vec<u32>>,
    hybrid: Option<Hybrid>,
    triple_families: Vec<[u32; 3]>,
    direct_classes: Vec<u32>,
}

/// A set of classes whose union is carved by search into `cycles` Hamiltonian
/// cycles plus triangles. Absorbing |classes| − cycles ≡ 2 (mod 3) classes as
/// triangles realigns leftovers that are not a whole number of families.
#[derive(Clone)]
struct Hybrid {
    classes: Vec<u32>,
    cycles: u32,
}

/// Enumerates up to `cap` team plans: k classes of cycle fuel (at least one of
/// them non-coprime, the rest is [`difference_partition`]'s ground) whose
/// leftover still partitions into families and directs. When those run out,
/// hybrid plans follow: four classes carved into two cycles plus triangles,
/// then three classes carved into one cycle plus triangles, the rest being
/// ordinary fuel and families.
fn team_plans(v: u32, k: u32, with_factor: bool, cap: usize) -> Vec<TeamPlan> {
    let top = if v % 2 == 0 { v / 2 - 1 } else { v / 2 };
    if k == 0 || u64::from(k) > u64::from(top) {
        return Vec::new();
    }
    let ctx = ClassContext { v, top };
    let mut plans = Vec::new();
    let mut fuel = Vec::with_capacity(k as usize);
    fuel_plans(&ctx, with_factor, 1, k, &mut fuel, &mut plans, cap);
    drop(fuel);
    for (size, cycles) in [(4u32, 2u32), (3, 1)] {
        if k >= cycles {
            hybrid_plans(&ctx, with_factor, size, cycles, k - cycles, &mut plans, cap);
        }
    }
    plans
}

fn fuel_plans(
    ctx: &ClassContext,
    with_factor: bool,
    from: u32,
    need: u32,
    fuel: &mut Vec<u32>,
    plans: &mut Vec<TeamPlan>,
    cap: usize,
) {
    if plans.len() >= cap {
        return;
    }
    if need == 0 {
        let v = ctx.v;
        if fuel.iter().all(|&d| num_integer::gcd(d, v) == 1) {
            return; // pure singles: already exhausted by difference_partition
        }
        let Some(teams) = group_into_teams(v, fuel) else {
            return;
        };
        let mut mult: BTreeMap<u32, u8> =
            (1..=ctx.top).filter(|d| !fuel.contains(d)).map(|d| (d, 1)).collect();
        let mut families = Vec::new();
        let mut directs = Vec::new();
        if partition_triples(ctx, &mut mult, &mut families, &mut directs) {
            plans.push(TeamPlan {
                v,
                with_factor,
                teams,
                hybrid: None,
                triple_families: families,
                direct_classes: directs,
            });
        }
        return;
    }
    for d in from..=ctx.top {
        if ctx.top - d + 1 < need {
            break;
        }
        fuel.push(d);
        fuel_plans(ctx, with_factor, d + 1, need - 1, fuel, plans, cap);
        fuel.pop();
    }
}

/// Enumerates plans built around a hybrid: `size` classes carved jointly into
/// `cycles` Hamiltonian cycles plus triangles, `fuel_need` more classes as
/// ordinary cycle fuel, families and directs for the rest. Hybrids are chosen
/// in the outer loop, ascending, so the type-rich unions of small classes —
/// the ones whose triangle mix can track a roughly even spread of cycle edges
/// across classes — come first. Unlike plain fuel, all-coprime fuel is allowed
/// here: the hybrid itself is beyond [`difference_partition`]'s reach.
fn hybrid_plans(
    ctx: &ClassContext,
    with_factor: bool,
    size: u32,
    cycles: u32,
    fuel_need: u32,
    plans: &mut Vec<TeamPlan>,
    cap: usize,
) {
    let mut hybrid = Vec::with_capacity(size as usize);
    choose_hybrid(ctx, with_factor, cycles, fuel_need, 1, size, &mut hybrid, plans, cap);
}

/// Picks the hybrid classes (ascending), keeps those that pass
/// [`hybrid_viable`], then fills in the fuel from the complement.
#[allow(clippy::too_many_arguments)]
fn choose_hybrid(
    ctx: &ClassContext,
    with_factor: bool,
    cycles: u32,
    fuel_need: u32,
    from: u32,
    need: u32,
    hybrid: &mut Vec<u32>,
    plans: &mut Vec<TeamPlan>,
    cap: usize,
) {
    if plans.len() >= cap {
        return;
    }
    if need == 0 {
        if !hybrid_viable(ctx.v, hybrid) {
            return;
        }
        let rest: Vec<u32> = (1..=ctx.top).filter(|d| !hybrid.contains(d)).collect();
        let mut fuel = Vec::with_capacity(fuel_need as usize);
        choose_fuel(ctx, with_factor, cycles, hybrid, &rest, 0, fuel_need, &mut fuel, plans, cap);
        return;
    }
    for d in from..=ctx.top {
        if ctx.top - d + 1 < need {
            break;
        }
        hybrid.push(d);
        choose_hybrid(ctx, with_factor, cycles, fuel_need, d + 1, need - 1, hybrid, plans, cap);
        hybrid.pop();
    }
}

/// Picks the cycle-fuel classes from the hybrid's complement; a choice sticks
/// when the fuel groups into teams and the rest partitions into triangles.
#[allow(clippy::too_many_arguments)]
fn choose_fuel(
    ctx: &ClassContext,
    with_factor: bool,
    cycles: u32,
    hybrid: &[u32],
    rest: &[u32],
    from: usize,
    need: u32,
    fuel: &mut Vec<u32>,
    plans: &mut Vec<TeamPlan>,
    cap: usize,
) {
    if plans.len() >= cap {
        return;
    }
    if need == 0 {
        let v = ctx.v;
        let Some(teams) = group_into_teams(v, fuel) else {
            return;
        };
        let mut mult: BTreeMap<u32, u8> = rest
            .iter()
            .copied()
            .filter(|d| !fuel.contains(d))
            .map(|d| (d, 1))
            .collect();
        let mut families = Vec::new();
        let mut directs = Vec::new();
        if partition_triples(ctx, &mut mult, &mut families, &mut directs) {
            plans.push(TeamPlan {
                v,
                with_factor,
                teams,
                hybrid: Some(Hybrid { classes: hybrid.to_vec(), cycles }),
                triple_families: families,
                direct_classes: directs,
            });
        }
        return;
    }
    for idx in from..rest.len() {
        if rest.len() - idx < need as usize {
            break;
        }
        fuel.push(rest[idx]);
        choose_fuel(ctx, with_factor, cycles, hybrid, rest, idx + 1, need - 1, fuel, plans, cap);
        fuel.pop();
    }
}

/// Whether a class set can plausibly carve into Hamiltonian cycles plus
/// triangles. The union must be connected (joint gcd 1) and admit at least two
/// distinct triangle types touching every class: with a single type, the
/// complement of any triangle set is forced into triangles of the same type
/// and can never be a cycle.
fn hybrid_viable(v: u32, h: &[u32]) -> bool {
    if h.iter().fold(v, |acc, &d| num_integer::gcd(acc, d)) != 1 {
        return false;
    }
    let mut types = 0;
    let mut touched = vec![false; h.len()];
    for i in 0..h.len() {
        for j in i..h.len() {
            for l in j..h.len() {
                let (a, b, c) = (h[i], h[j], h[l]);
                if a + b == c || a + b + c == v {
                    types += 1;
                    touched[i] = true;
                    touched[j] = true;
                    touched[l] = true;
                }
            }
        }
    }
    types >= 2 && touched.iter().all(|&t| t)
}

/// Groups cycle-fuel classes into teams whose joint gcd with v is 1: coprime
/// classes stand alone unless borrowed, non-coprime ones pair or triple up with
/// partners (coprime or not) until everyone is placed.
fn group_into_teams(v: u32, fuel: &[u32]) -> Option<Vec<Vec<u32>>> {
    let rough: Vec<u32> = fuel.iter().copied().filter(|&d| num_integer::gcd(d, v) > 1).collect();
    let smooth: Vec<u32> = fuel.iter().copied().filter(|&d| num_integer::gcd(d, v) == 1).collect();
    place_rough(v, &rough, &smooth).map(|mut teams| {
        for team in &mut teams {
            team.sort_unstable();
        }
        teams.sort_unstable();
        teams
    })
}

/// Places the first non-coprime class into a team, recursing on the rest. The
/// lists are a handful of classes, so cloning per branch is cheap.
fn place_rough(v: u32, rough: &[u32], smooth: &[u32]) -> Option<Vec<Vec<u32>>> {
    let Some((&c, rest)) = rough.split_first() else {
        return Some(smooth.iter().map(|&s| vec![s]).collect());
    };
    // Pair with another non-coprime class.
    for (i, &d) in rest.iter().enumerate() {
        if num_integer::gcd(num_integer::gcd(c, d), v) == 1 {
            let mut sub = rest.to_vec();
            sub.remove(i);
            if let Some(mut teams) = place_rough(v, &sub, smooth) {
                teams.push(vec![c, d]);
                return Some(teams);
            }
        }
    }
    // Borrow a coprime single; any one is as good as another for grouping.
    if let Some((&s, keep)) = smooth.split_last() {
        if let Some(mut teams) = place_rough(v, rest, keep) {
            teams.push(vec![c, s]);
            return Some(teams);
        }
    }
    // Triple with two other non-coprime classes.
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let g = num_integer::gcd(num_integer::gcd(c, rest[i]), rest[j]);
            if num_integer::gcd(g, v) == 1 {
                let mut sub = rest.to_vec();
                sub.remove(j);
                sub.remove(i);
                if let Some(mut teams) = place_rough(v, &sub, smooth) {
                    teams.push(vec![c, rest[i], rest[j]]);
                    return Some(teams);
                }
            }
        }
    }
    None
}

/// Expands a team plan: singleton teams are circulant cycles, larger teams are
/// split into Hamiltonian cycles by search (retrying within the node budget).
fn realize_team_plan(
    plan: &TeamPlan,
    rng: &mut ChaCha8Rng,
    nodes: &mut u64,
) -> Option<MixedDecomposition> {
    let v = plan.v;
    let mut cycles = Vec::new();
    for team in &plan.teams {
        if team.len() == 1 {
            cycles.push(circulant_cycle(v, team[0]));
            continue;
        }
        cycles.extend(split_team(v, team, rng, nodes)?);
    }
    let mut triangles = Vec::new();
    if let Some(h) = &plan.hybrid {
        let (carved, tris) = carve_hybrid(v, h, rng, nodes)?;
        cycles.extend(carved);
        triangles = tris;
    }
    let one_factor = plan.with_factor.then(|| median_factor(v));
    for &d in &plan.direct_classes {
        direct_triangles(v, d, &mut triangles);
    }
    for &fam in &plan.triple_families {
        family_triangles(v, fam, &mut triangles);
    }
    Some(MixedDecomposition { v, cycles, one_factor, triangles })
}

/// A triangle anchored at a residue class mod 3, given as vertex offsets
/// `[0, a, a+b]` from the anchor. Its orbit under translation by 3 — one
/// triangle per vertex of the anchor class — consumes three whole *thirds*
/// of the circulant's edge supply, where the third (d, r) is the set of
/// class-d edges whose lower endpoint (in canonical orientation) is ≡ r.
#[derive(Clone, Copy)]
struct BaseTriangle {
    offsets: [u32; 3],
    anchor: u32,
}

impl BaseTriangle {
    /// The (class, residue) third consumed by each of the three edges.
    fn slots(&self, v: u32) -> [(u32, u32); 3] {
        let mut out = [(0, 0); 3];
        for (slot, (i, j)) in out.iter_mut().zip([(0usize, 1usize), (1, 2), (0, 2)]) {
            let (lo, hi) = (self.offsets[i], self.offsets[j]);
            let d = hi - lo;
            *slot = if d * 2 <= v {
                (d, (self.anchor + lo) % 3)
            } else {
                (v - d, (self.anchor + hi) % 3)
            };
        }
        out
    }
}

/// Carve frames for `3 | v`: pairs of anchored base triangles over the given
/// classes whose six consumed thirds are all distinct and whose six vertices
/// hit every residue class mod 3 exactly twice. Removing such a pair's orbits
/// from the class union leaves a graph of uniform degree `2(s-2)` — for a
/// hybrid of `s` classes carved into `s-2` cycles, exactly the cycles' worth.
fn frames(v: u32, classes: &[u32]) -> Vec<[BaseTriangle; 2]> {
    if v % 3 != 0 {
        return Vec::new();
    }
    let mut items = Vec::new();
    for &a in classes {
        for &b in classes {
            let span = a + b;
            if span >= v || !classes.contains(&span.min(v - span)) {
                continue;
            }
            // The equilateral triangle on {0, v/3, 2v/3} is fixed by
            // translation by v/3; when 9 | v that shift lies in the orbit
            // group and the orbit degenerates, so skip the shape.
            if a == b && a * 3 == v && a % 3 == 0 {
                continue;
            }
            for anchor in 0..3 {
                items.push(BaseTriangle { offsets: [0, a, span], anchor });
            }
        }
    }
    let mut out = Vec::new();
    for p in 0..items.len() {
        for q in p + 1..items.len() {
            let (s, t) = (items[p], items[q]);
            let mut slots = Vec::with_capacity(6);
            slots.extend(s.slots(v));
            slots.extend(t.slots(v));
            slots.sort_unstable();
            slots.dedup();
            if slots.len() != 6 {
                continue;
            }
            let mut residues = [0u32; 3];
            for base in [s, t] {
                for o in base.offsets {
                    residues[((base.anchor + o) % 3) as usize] += 1;
                }
            }
            if residues == [2, 2, 2] {
                out.push([s, t]);
            }
        }
    }
    out
}

/// Carves the union of a hybrid's classes into its cycles plus triangles:
/// peel off a carve frame's triangle orbits and split the leftover into
/// Hamiltonian cycles, or failing that, extract random cycles and
/// triangle-cover the remainder, retrying within the node budget.
fn carve_hybrid(
    v: u32,
    h: &Hybrid,
    rng: &mut ChaCha8Rng,
    nodes: &mut u64,
) -> Option<(Vec<Cycle>, Vec<Triple>)> {
    // Anchored frames first. Removing a frame's orbits leaves a third-aligned
    // graph of exactly the cycles' edge count, so only the split into
    // Hamiltonian cycles remains to check — and for one cycle the check is
    // deterministic.
    for frame in frames(v, &h.classes) {
        if *nodes == 0 {
            return None;
        }
        *nodes -= 1;
        let mut map = PairMap::new(v);
        for &d in &h.classes {
            add_class(&mut map, v, d);
        }
        let mut triangles = Vec::with_capacity(2 * v as usize / 3);
        for base in frame {
            for x in (base.anchor..v).step_by(3) {
                let t = Triple::new(x, (x + base.offsets[1]) % v, (x + base.offsets[2]) % v);
                map.remove_triple(t);
                triangles.push(t);
            }
        }
        if let Some(seqs) = extract_cycles(&mut map, h.cycles, true, rng, nodes) {
            return Some((seqs.into_iter().map(Cycle::new).collect(), triangles));
        }
    }
    // Randomised fallback for hybrids without a frame: extract random cycles,
    // triangle-cover whatever they leave.
    while *nodes > 0 {
        let mut map = PairMap::new(v);
        for &d in &h.classes {
            add_class(&mut map, v, d);
        }
        let Some(seqs) = extract_cycles(&mut map, h.cycles, false, rng, nodes) else {
            continue;
        };
        if let CoverOutcome::Found(triangles) = exact_cover(&mut map, nodes, Some(rng)) {
            return Some((seqs.into_iter().map(Cycle::new).collect(), triangles));
        }
    }
    None
}

/// Carves the union of a team's classes into |team| Hamiltonian cycles.
fn split_team(v: u32, team: &[u32], rng: &mut ChaCha8Rng, nodes: &mut u64) -> Option<Vec<Cycle>> {
    while *nodes > 0 {
        let mut map = PairMap::new(v);
        for &d in team {
            add_class(&mut map, v, d);
        }
        if let Some(seqs) = extract_cycles(&mut map, team.len() as u32, true, rng, nodes) {
            return Some(seqs.into_iter().map(Cycle::new).collect());
        }
    }
    None
}

/// Keeps k cycles of the zigzag decomposition and melts the other t into
/// triangles, trying subsets of sacrificed cycles in lexicographic order.
fn sacrifice_attempts(
    v: u32,
    k: u32,
    budget: u64,
    remaining: &mut u64,
) -> Option<MixedDecomposition> {
    let (all, factor) = if v % 2 == 1 {
        (walecki_cycles(v), None)
    } else {
        let (c, f) = walecki_with_factor(v);
        (c, Some(f))
    };
    let n = all.len();
    let t = n - k as usize;
    debug_assert!(t >= 1, "k = max is answered before the search stages");
    let mut subset: Vec<usize> = (0..t).collect();
    for _ in 0..SACRIFICE_CAP {
        let mut map = PairMap::new(v);
        for &i in &subset {
            for (a, b) in all[i].edges() {
                map.add(a, b, 1);
            }
        }
        let cap = (budget / 64).max(1).min(*remaining);
        let mut nodes = cap;
        let outcome = exact_cover(&mut map, &mut nodes, None);
        *remaining -= (cap - nodes).max(1).min(*remaining);
        if let CoverOutcome::Found(triangles) = outcome {
            let cycles =
                (0..n).filter(|i| !subset.contains(i)).map(|i| all[i].clone()).collect();
            return Some(MixedDecomposition { v, cycles, one_factor: factor, triangles });
        }
        if *remaining == 0 || !next_combination(&mut subset, n) {
            return None;
        }
    }
    None
}

/// Advances a sorted index combination to its lexicographic successor within
/// 0..n; returns false when the last combination has been passed.
fn next_combination(ix: &mut [usize], n: usize) -> bool {
    let t = ix.len();
    let mut i = t;
    while i > 0 {
        i -= 1;
        if ix[i] < n - t + i {
            ix[i] += 1;
            for j in i + 1..t {
                ix[j] = ix[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// One randomised go: peel k Hamiltonian cycles off K_v (minus a random perfect
/// matching for even v), then triangle-cover whatever is left.
fn extraction_attempt(
    v: u32,
    k: u32,
    with_factor: bool,
    rng: &mut ChaCha8Rng,
    nodes: &mut u64,
) -> Option<MixedDecomposition> {
    let mut map = PairMap::complete(v, 1);
    let one_factor = with_factor.then(|| {
        let mut perm: Vec<Vertex> = (0..v).collect();
        perm.shuffle(rng);
        let pairs: Vec<(Vertex, Vertex)> = perm.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        for &(a, b) in &pairs {
            map.sub(a.min(b), a.max(b), 1);
        }
        OneFactor::new(pairs)
    });
    let seqs = extract_cycles(&mut map, k, false, rng, nodes)?;
    let cycles: Vec<Cycle> = seqs.into_iter().map(Cycle::new).collect();
    match exact_cover(&mut map, nodes, Some(rng)) {
        CoverOutcome::Found(triangles) => {
            Some(MixedDecomposition { v, cycles, one_factor, triangles })
        }
        _ => None,
    }
}

/// K_v (even v ≡ 0, 2 mod 6) as triangles plus one perfect matching: build an
/// STS(v+1) and delete the last point; its triples shed the matching.
fn sts_minus_point(v: u32) -> MixedDecomposition {
    debug_assert!(v % 2 == 0 && matches!(v % 6, 0 | 2));
    let ts = triples::steiner_triple_system(v + 1).expect("v+1 = 1 or 3 (mod 6)");
    let mut pairs = Vec::with_capacity(v as usize / 2);
    let mut triangles = Vec::new();
    for t in ts.triples {
        let [a, b, c] = t.points();
        if c == v {
            pairs.push((a, b));
        } else {
            triangles.push(t);
        }
    }
    MixedDecomposition { v, cycles: vec![], one_factor: Some(OneFactor::new(pairs)), triangles }
}

// ---------------------------------------------------------------------------
// Splitting across three copies
// ---------------------------------------------------------------------------

/// No way to apportion the cycles of 3·K_v copy by copy.
#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
#[error("no feasible division of {k_total} Hamiltonian cycles over three copies of K_{v} exists")]
pub struct SplitError {
    pub v: u32,
    pub k_total: u32,
    pub with_factor: bool,
}

/// Apportions `k_total` cycles over the three copies of K_v so every copy gets
/// a feasible count (each copy also keeps its own 1-factor when `with_factor`).
/// Returns the lexicographically largest split a₁ ≥ a₂ ≥ a₃.
pub fn split_across_copies(v: u32, k_total: u32, with_factor: bool) -> Result<[u32; 3], SplitError> {
    let err = SplitError { v, k_total, with_factor };
    if v < 3 || with_factor != (v % 2 == 0) {
        return Err(err);
    }
    let cap = max_cycles(v, with_factor);
    for a1 in (0..=k_total.min(cap)).rev() {
        if !feasible_mixed(v, a1, with_factor) {
            continue;
        }
        let rest = k_total - a1;
        if rest > 2 * a1 {
            break; // a2, a3 ≤ a1 can no longer reach the sum
        }
        for a2 in (0..=a1.min(rest)).rev() {
            if !feasible_mixed(v, a2, with_factor) {
                continue;
            }
            let a3 = rest - a2;
            if a3 > a2 {
                break; // shrinking a2 only grows a3
            }
            if feasible_mixed(v, a3, with_factor) {
                return Ok([a1, a2, a3]);
            }
        }
    }
    Err(err)
}

/// Splits an even cycle into its two alternating perfect matchings (on the
/// cycle's own vertex set).
pub fn cycle_to_two_factors(cycle: &Cycle) -> Result<(OneFactor, OneFactor), OddCycleError> {
    if cycle.order() % 2 != 0 {
        return Err(OddCycleError { order: cycle.order() });
    }
    let edges: Vec<(Vertex, Vertex)> = cycle.edges().collect();
    let first = edges.iter().step_by(2).copied().collect();
    let second = edges.iter().skip(1).step_by(2).copied().collect();
    Ok((OneFactor::new(first), OneFactor::new(second)))
}

/// Only even cycles split into two 1-factors.
#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
#[error("only even cycles split into two 1-factors (this cycle has {order} vertices)")]
pub struct OddCycleError {
    pub order: usize,
}

// ---------------------------------------------------------------------------
// Threefold decompositions
// ---------------------------------------------------------------------------

/// Decomposes 3·K_v into `k_total` Hamiltonian cycles, one 1-factor per copy
/// exactly when `with_factor`, and triangles; default budget per copy.
pub fn decompose_threefold(
    v: u32,
    k_total: u32,
    with_factor: bool,
    seed: u64,
) -> Result<ThreefoldDecomposition, DecompError> {
    decompose_threefold_with_budget(v, k_total, with_factor, seed, DEFAULT_NODE_BUDGET)
}

/// [`decompose_threefold`] with an explicit per-copy node budget.
pub fn decompose_threefold_with_budget(
    v: u32,
    k_total: u32,
    with_factor: bool,
    seed: u64,
    budget: u64,
) -> Result<ThreefoldDecomposition, DecompError> {
    let infeasible = |reason: String| DecompError::Infeasible {
        v,
        k: k_total,
        with_factor,
        reason,
    };
    if v < 3 || with_factor != (v % 2 == 0) {
        return Err(infeasible(infeasibility_reason(v, k_total, with_factor)));
    }
    if k_total > 3 * max_cycles(v, with_factor) {
        return Err(infeasible(format!(
            "at most {} Hamiltonian cycles fit in three copies",
            3 * max_cycles(v, with_factor)
        )));
    }
    let pairs = 3 * u64::from(v) * u64::from(v - 1) / 2;
    let used =
        u64::from(k_total) * u64::from(v) + if with_factor { 3 * u64::from(v / 2) } else { 0 };
    if (pairs - used) % 3 != 0 {
        return Err(infeasible("the pooled leftover edge count is not divisible by 3".into()));
    }

    if let Ok(split) = split_across_copies(v, k_total, with_factor) {
        let mut out = ThreefoldDecomposition { v, cycles: vec![], one_factors: vec![], triangles: vec![] };
        for (i, &a) in split.iter().enumerate() {
            let copy =
                decompose_mixed_with_budget(v, a, with_factor, mix_seed(seed, 0x10 + i as u64), budget)?;
            out.cycles.extend(copy.cycles);
            out.one_factors.extend(copy.one_factor);
            out.triangles.extend(copy.triangles);
        }
        return Ok(out);
    }
    // Only odd v with k ≡ 0 (mod 3) too small for three copies lands here;
    // even orders always split whenever the pooled count is divisible.
    if with_factor {
        return Err(infeasible("no per-copy split exists".into()));
    }
    pooled_threefold(v, k_total, seed, budget)
}

/// Pools the triangle leftovers of all three copies into one multigraph.
fn pooled_threefold(
    v: u32,
    k_total: u32,
    seed: u64,
    budget: u64,
) -> Result<ThreefoldDecomposition, DecompError> {
    if let Some(plan) = difference_partition_pooled(v, k_total) {
        let d = plan.realize();
        return Ok(ThreefoldDecomposition {
            v,
            cycles: d.cycles,
            one_factors: vec![],
            triangles: d.triangles,
        });
    }
    // Greedy per-copy cycle counts within capacity, zigzag prefixes per copy,
    // pooled multigraph cover with randomised restarts.
    let cap = max_cycles(v, false);
    let a1 = k_total.min(cap);
    let a2 = (k_total - a1).min(cap);
    let a3 = k_total - a1 - a2;
    debug_assert!(a3 <= cap);
    let counts = [a1, a2, a3];

    let mut remaining = budget;
    let salt = (u64::from(v) << 33) | (u64::from(k_total) << 1) | 1 << 63;
    let mut master = ChaCha8Rng::seed_from_u64(mix_seed(seed, salt));
    let base_cycles = walecki_cycles(v);
    while remaining > 0 {
        let mut cycles = Vec::with_capacity(k_total as usize);
        let mut map = PairMap::complete(v, 3);
        for &a in &counts {
            let mut perm: Vec<Vertex> = (0..v).collect();
            perm.shuffle(&mut master);
            for cy in base_cycles[..a as usize].iter() {
                let cy = cy.relabel(|x| perm[x as usize]);
                for (x, y) in cy.edges() {
                    map.sub(x, y, 1);
                }
                cycles.push(cy);
            }
        }
        let mut cover_rng = ChaCha8Rng::seed_from_u64(master.next_u64());
        let cap_nodes = (budget / 16).max(1).min(remaining);
        let mut nodes = cap_nodes;
        let outcome = exact_cover(&mut map, &mut nodes, Some(&mut cover_rng));
        remaining -= (cap_nodes - nodes).max(1).min(remaining);
        if let CoverOutcome::Found(triangles) = outcome {
            return Ok(ThreefoldDecomposition { v, cycles, one_factors: vec![], triangles });
        }
    }
    Err(DecompError::SearchExhausted { v, k: k_total, budget, seed })
}

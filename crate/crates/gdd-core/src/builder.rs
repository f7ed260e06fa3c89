//! Explicit block lists for every constructible parameter triple.
//!
//! All five schemes assemble a design from the same material. Three copies of
//! the complete graph on a group are carved into Hamiltonian cycles, perfect
//! matchings, and triangles ([`crate::decomp`]). Triangles become blocks as
//! they are; each cycle or matching becomes blocks by *starring* it from a
//! point outside the group — `{hub, a, b}` for every edge `(a, b)`. A starred
//! Hamiltonian cycle gives the hub exactly two pairs with every group vertex,
//! a starred matching exactly one, so handing each outside point material
//! worth λ meets the cross-pair count, while the triangles and the untouched
//! copies keep same-group pairs at three.
//!
//! * **odd-odd** and **even-odd** star pieces of `3·K_m` from every point of
//!   the smaller group and finish its internal pairs with a threefold triple
//!   system. Even m has odd λ, so the three per-copy matchings (plus spare
//!   cycles converted two-matchings-apiece) supply the odd part.
//! * **dual-star** runs the same engine at λ−2, then reverses the roles once:
//!   `3·K_n` sheds one Hamiltonian cycle per M-point, and starring it adds
//!   the two missing cross pairs.
//! * **pull-one** and **pull-three** serve even n, where no matching of the
//!   odd-order `K_m` exists. One or three points are pulled out of the larger
//!   group; a small even-odd sub-design on the smaller group and the pulled
//!   points covers everything they touch, and the remaining core has even
//!   order, whose copy matchings (and reserved cycles) restore the pulled
//!   points' three pairs into the core.

use crate::decomp::{
    cycle_to_two_factors, decompose_threefold_with_budget, Cycle, DecompError, OneFactor,
    ThreefoldDecomposition, DEFAULT_NODE_BUDGET,
};
use crate::feasibility::{classify, in_feasible_set, Classification, Method, ParameterError};
use crate::triples::{threefold_triple_system, TripleSystemError};
use crate::{mix_seed, Triple, Vertex};

// Seed salts keeping the independent decomposition searches uncorrelated.
const SALT_OUTER: u64 = 1;
const SALT_STAR_SIDE: u64 = 2;
const SALT_SUB: u64 = 3;
const SALT_CORE: u64 = 4;

// ---------------------------------------------------------------------------
// The finished design
// ---------------------------------------------------------------------------

/// An explicit design: blocks of size three over `0..m` (group M) and
/// `m..m + n` (group N), with every same-group pair in exactly three blocks
/// and every cross pair in exactly `lambda`.
///
/// Blocks are sorted; building twice with the same seed yields identical
/// lists. Repeated blocks are legitimate and counted with multiplicity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GddDesign {
    pub m: u32,
    pub n: u32,
    pub lambda: u32,
    /// Seed that steered the decomposition searches.
    pub seed: u64,
    pub blocks: Vec<Triple>,
}

impl GddDesign {
    /// Total number of points, `m + n`.
    pub fn order(&self) -> u32 {
        self.m + self.n
    }
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A star was asked to absorb an edge touching its own hub or a loop.
#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
#[error("cannot star edge ({a}, {b}) from hub {hub}")]
pub struct StarError {
    pub hub: Vertex,
    pub a: Vertex,
    pub b: Vertex,
}

/// Why a build did not produce a design.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum BuildError {
    /// The parameters are rejected or open; no scheme applies.
    #[error("no construction scheme applies: the parameters are {classification}")]
    NotConstructible { classification: Classification },
    /// A scheme was invoked directly on parameters outside its service range.
    #[error("the {method:?} scheme does not serve these parameters: {reason}")]
    PreconditionViolated { method: Method, reason: String },
    #[error(transparent)]
    Parameter(#[from] ParameterError),
    #[error(transparent)]
    Decomposition(#[from] DecompError),
    #[error(transparent)]
    TripleSystem(#[from] TripleSystemError),
    #[error(transparent)]
    Star(#[from] StarError),
}

fn ensure(cond: bool, method: Method, reason: impl FnOnce() -> String) -> Result<(), BuildError> {
    if cond {
        Ok(())
    } else {
        Err(BuildError::PreconditionViolated { method, reason: reason() })
    }
}

// ---------------------------------------------------------------------------
// Starring
// ---------------------------------------------------------------------------

/// Blocks `{hub, a, b}` for every edge `(a, b)`; the hub must avoid the edges.
pub fn star(
    hub: Vertex,
    edges: impl IntoIterator<Item = (Vertex, Vertex)>,
) -> Result<Vec<Triple>, StarError> {
    let mut out = Vec::new();
    star_into(hub, edges, &mut out)?;
    Ok(out)
}

fn star_into(
    hub: Vertex,
    edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    out: &mut Vec<Triple>,
) -> Result<(), StarError> {
    for (a, b) in edges {
        if a == b || a == hub || b == hub {
            return Err(StarError { hub, a, b });
        }
        out.push(Triple::new(hub, a, b));
    }
    Ok(())
}

/// The material one outside point stars: each matching is worth one pair with
/// every group vertex, each cycle two.
struct PointBundle {
    factors: Vec<OneFactor>,
    cycles: Vec<Cycle>,
}

fn star_bundle(hub: Vertex, bundle: &PointBundle, out: &mut Vec<Triple>) -> Result<(), BuildError> {
    for factor in &bundle.factors {
        star_into(hub, factor.pairs().iter().copied(), out)?;
    }
    for cycle in &bundle.cycles {
        star_into(hub, cycle.edges(), out)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// The shared engine: 3·K_v feeding `points` outside hubs
// ---------------------------------------------------------------------------

/// Carves `3·K_v` into triangles plus one bundle worth `lambda_eff` cross
/// pairs for each of `points` outside points.
///
/// Odd v: every bundle is `lambda_eff / 2` Hamiltonian cycles. Even v: the
/// carving reserves the three per-copy matchings; with a single outside point
/// they all go to it along with every cycle, otherwise `(points − 3) / 2`
/// cycles are converted into two matchings each so that every point gets one
/// matching plus `(lambda_eff − 1) / 2` cycles.
fn outer_side(
    v: u32,
    points: u32,
    lambda_eff: u32,
    seed: u64,
    budget: u64,
) -> Result<(Vec<Triple>, Vec<PointBundle>), BuildError> {
    let with_factor = v % 2 == 0;
    debug_assert!(points >= 1);
    debug_assert_eq!(
        lambda_eff % 2 == 0,
        !with_factor,
        "cycle-only bundles need even material, matchings odd"
    );
    debug_assert!(!with_factor || points % 2 == 1);
    let k1 = if with_factor { (points * lambda_eff - 3) / 2 } else { points * lambda_eff / 2 };
    let d = decompose_threefold_with_budget(v, k1, with_factor, seed, budget)?;
    let ThreefoldDecomposition { cycles, one_factors, triangles, .. } = d;
    let mut cycles = cycles.into_iter();
    let bundles: Vec<PointBundle> = if !with_factor {
        let per = (lambda_eff / 2) as usize;
        (0..points)
            .map(|_| PointBundle { factors: Vec::new(), cycles: cycles.by_ref().take(per).collect() })
            .collect()
    } else if points == 1 {
        vec![PointBundle { factors: one_factors, cycles: cycles.by_ref().collect() }]
    } else {
        let mut factors = one_factors;
        for _ in 0..(points - 3) / 2 {
            let cycle = cycles.next().expect("conversion cycles are part of the cycle count");
            let (a, b) = cycle_to_two_factors(&cycle).expect("v is even");
            factors.push(a);
            factors.push(b);
        }
        let per = ((lambda_eff - 1) / 2) as usize;
        let mut factors = factors.into_iter();
        (0..points)
            .map(|_| PointBundle {
                factors: vec![factors.next().expect("one matching per outside point")],
                cycles: cycles.by_ref().take(per).collect(),
            })
            .collect()
    };
    debug_assert!(cycles.next().is_none(), "every cycle is assigned");
    debug_assert_eq!(bundles.len(), points as usize);
    Ok((triangles, bundles))
}

/// The odd-odd / even-odd core: 3·K_m feeds the n outside points at strength
/// `lambda_eff`, and nothing else touches group N.
fn grouped(
    m: u32,
    n: u32,
    lambda_eff: u32,
    seed: u64,
    budget: u64,
) -> Result<Vec<Triple>, BuildError> {
    let (mut blocks, bundles) = outer_side(m, n, lambda_eff, mix_seed(seed, SALT_OUTER), budget)?;
    for (j, bundle) in bundles.iter().enumerate() {
        star_bundle(m + j as Vertex, bundle, &mut blocks)?;
    }
    Ok(blocks)
}

/// Hands every N-point one matching (from `n / 2` converted cycles) plus
/// `(lambda − 1) / 2` cycles, starring everything.
fn feed_outside_points(
    m: u32,
    n: u32,
    lambda: u32,
    cycles: &mut std::vec::IntoIter<Cycle>,
    blocks: &mut Vec<Triple>,
) -> Result<(), BuildError> {
    let mut factors = Vec::with_capacity(n as usize);
    for _ in 0..n / 2 {
        let cycle = cycles.next().expect("conversion cycles are part of the cycle count");
        let (a, b) = cycle_to_two_factors(&cycle).expect("the core has even order");
        factors.push(a);
        factors.push(b);
    }
    let per = ((lambda - 1) / 2) as usize;
    for (j, factor) in factors.iter().enumerate() {
        let hub = m + j as Vertex;
        star_into(hub, factor.pairs().iter().copied(), blocks)?;
        for cycle in cycles.by_ref().take(per) {
            star_into(hub, cycle.edges(), blocks)?;
        }
    }
    Ok(())
}

fn finish(m: u32, n: u32, lambda: u32, seed: u64, mut blocks: Vec<Triple>) -> GddDesign {
    blocks.sort_unstable();
    GddDesign { m, n, lambda, seed, blocks }
}

// ---------------------------------------------------------------------------
// The five schemes
// ---------------------------------------------------------------------------

fn common_preconditions(method: Method, m: u32, n: u32, lambda: u32) -> Result<(), BuildError> {
    ensure(m > n && n >= 1, method, || {
        format!("group sizes must satisfy m > n >= 1, got m = {m}, n = {n}")
    })?;
    ensure(lambda >= 4, method, || format!("lambda must be at least 4, got {lambda}"))?;
    ensure(in_feasible_set(m, n, lambda), method, || {
        format!("({m}, {n}, {lambda}) fails a divisibility or parity condition")
    })
}

fn odd_odd(m: u32, n: u32, lambda: u32, seed: u64, budget: u64) -> Result<GddDesign, BuildError> {
    let method = Method::OddOdd;
    common_preconditions(method, m, n, lambda)?;
    ensure(m % 2 == 1 && n % 2 == 1, method, || {
        format!("both groups must have odd order, got m = {m}, n = {n}")
    })?;
    ensure(u64::from(lambda) * u64::from(n) <= 3 * u64::from(m - 1), method, || {
        format!("lambda = {lambda} exceeds 3(m - 1)/n = {}", 3 * (m - 1) / n)
    })?;
    let mut blocks = grouped(m, n, lambda, seed, budget)?;
    let inner = threefold_triple_system(n)?;
    blocks.extend(inner.triples.iter().map(|t| t.relabel(|x| x + m)));
    Ok(finish(m, n, lambda, seed, blocks))
}

fn even_odd(m: u32, n: u32, lambda: u32, seed: u64, budget: u64) -> Result<GddDesign, BuildError> {
    let method = Method::EvenOdd;
    common_preconditions(method, m, n, lambda)?;
    ensure(m % 2 == 0 && n % 2 == 1, method, || {
        format!("m must be even and n odd, got m = {m}, n = {n}")
    })?;
    ensure(u64::from(lambda) * u64::from(n) <= 3 * u64::from(m - 1), method, || {
        format!("lambda = {lambda} exceeds 3(m - 1)/n = {}", 3 * (m - 1) / n)
    })?;
    let mut blocks = grouped(m, n, lambda, seed, budget)?;
    let inner = threefold_triple_system(n)?;
    blocks.extend(inner.triples.iter().map(|t| t.relabel(|x| x + m)));
    Ok(finish(m, n, lambda, seed, blocks))
}

fn dual_star(m: u32, n: u32, lambda: u32, seed: u64, budget: u64) -> Result<GddDesign, BuildError> {
    let method = Method::DualStar;
    common_preconditions(method, m, n, lambda)?;
    ensure(n % 2 == 1, method, || format!("n must be odd, got {n}"))?;
    ensure(u64::from(lambda - 2) * u64::from(n) <= 3 * u64::from(m - 1), method, || {
        format!("lambda - 2 = {} exceeds 3(m - 1)/n = {}", lambda - 2, 3 * (m - 1) / n)
    })?;
    ensure(2 * m <= 3 * (n - 1), method, || {
        format!("3·K_{n} cannot shed {m} Hamiltonian cycles: 2m = {} > 3(n - 1) = {}", 2 * m, 3 * (n - 1))
    })?;
    // M side at reduced strength, leaving two cross pairs per (M, N) pair open.
    let mut blocks = grouped(m, n, lambda - 2, seed, budget)?;
    // N side: 3·K_n sheds one Hamiltonian cycle per M-point; starring it from
    // that point closes the gap, and the triangles cover group N internally.
    let star_side = decompose_threefold_with_budget(n, m, false, mix_seed(seed, SALT_STAR_SIDE), budget)?;
    debug_assert_eq!(star_side.cycles.len(), m as usize);
    blocks.extend(star_side.triangles.iter().map(|t| t.relabel(|x| x + m)));
    for (i, cycle) in star_side.cycles.iter().enumerate() {
        let shifted = cycle.relabel(|x| x + m);
        star_into(i as Vertex, shifted.edges(), &mut blocks)?;
    }
    Ok(finish(m, n, lambda, seed, blocks))
}

fn pull_one(m: u32, n: u32, lambda: u32, seed: u64, budget: u64) -> Result<GddDesign, BuildError> {
    let method = Method::PullOne;
    common_preconditions(method, m, n, lambda)?;
    ensure(n % 2 == 0, method, || format!("n must be even, got {n}"))?;
    ensure(m % 6 == 1 || m % 6 == 5, method, || {
        format!("m must be 1 or 5 (mod 6), got m = {m}")
    })?;
    ensure(u64::from(lambda) * u64::from(n) <= 3 * u64::from(m - 3), method, || {
        format!("lambda = {lambda} exceeds 3(m - 3)/n = {}", 3 * (m - 3) / n)
    })?;
    ensure(lambda <= 3 * (n - 1), method, || {
        format!("lambda = {lambda} exceeds the sub-design bound 3(n - 1) = {}", 3 * (n - 1))
    })?;
    let pulled = m - 1;
    // The sub-design covers group N internally and ties the pulled point to it.
    let sub = even_odd(n, 1, lambda, mix_seed(seed, SALT_SUB), budget)?;
    let mut blocks: Vec<Triple> = sub
        .blocks
        .iter()
        .map(|t| t.relabel(|x| if x < n { m + x } else { pulled }))
        .collect();
    // The core K_{m-1} has even order; its three copy matchings, starred from
    // the pulled point, restore that point's three pairs into the core.
    let k1 = n * lambda / 2;
    let core =
        decompose_threefold_with_budget(m - 1, k1, true, mix_seed(seed, SALT_CORE), budget)?;
    let ThreefoldDecomposition { cycles, one_factors, triangles, .. } = core;
    blocks.extend(triangles);
    for factor in &one_factors {
        star_into(pulled, factor.pairs().iter().copied(), &mut blocks)?;
    }
    let mut cycles = cycles.into_iter();
    feed_outside_points(m, n, lambda, &mut cycles, &mut blocks)?;
    debug_assert!(cycles.next().is_none(), "every cycle is assigned");
    Ok(finish(m, n, lambda, seed, blocks))
}

fn pull_three(m: u32, n: u32, lambda: u32, seed: u64, budget: u64) -> Result<GddDesign, BuildError> {
    let method = Method::PullThree;
    common_preconditions(method, m, n, lambda)?;
    ensure(n % 2 == 0, method, || format!("n must be even, got {n}"))?;
    ensure(m % 6 == 3, method, || format!("m must be 3 (mod 6), got m = {m}"))?;
    ensure(m >= 7, method, || format!("m must be at least 7, got {m}"))?;
    ensure(u64::from(lambda) * u64::from(n) <= 3 * u64::from(m - 7), method, || {
        format!("lambda = {lambda} exceeds 3(m - 7)/n = {}", 3 * (m - 7) / n)
    })?;
    ensure(lambda < n, method, || {
        format!("lambda = {lambda} exceeds the sub-design bound n - 1 = {}", n - 1)
    })?;
    let base = m - 3;
    // The sub-design covers group N, the three pulled points' mutual pairs,
    // and all (N, pulled) cross pairs.
    let sub = even_odd(n, 3, lambda, mix_seed(seed, SALT_SUB), budget)?;
    let mut blocks: Vec<Triple> = sub
        .blocks
        .iter()
        .map(|t| t.relabel(|x| if x < n { m + x } else { base + (x - n) }))
        .collect();
    // The core K_{m-3} is even; each pulled point stars one copy matching plus
    // one reserved Hamiltonian cycle, worth its three pairs into the core.
    let k1 = n * lambda / 2 + 3;
    let core =
        decompose_threefold_with_budget(base, k1, true, mix_seed(seed, SALT_CORE), budget)?;
    let ThreefoldDecomposition { cycles, one_factors, triangles, .. } = core;
    blocks.extend(triangles);
    let mut cycles = cycles.into_iter();
    debug_assert_eq!(one_factors.len(), 3);
    for (i, factor) in one_factors.iter().enumerate() {
        let hub = base + i as Vertex;
        star_into(hub, factor.pairs().iter().copied(), &mut blocks)?;
        let reserved = cycles.next().expect("three reserved cycles lead the count");
        star_into(hub, reserved.edges(), &mut blocks)?;
    }
    feed_outside_points(m, n, lambda, &mut cycles, &mut blocks)?;
    debug_assert!(cycles.next().is_none(), "every cycle is assigned");
    Ok(finish(m, n, lambda, seed, blocks))
}

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

/// Builds a design for any constructible triple, dispatching on
/// [`classify`]; rejected and open parameters return
/// [`BuildError::NotConstructible`].
pub fn build(m: u32, n: u32, lambda: u32, seed: u64) -> Result<GddDesign, BuildError> {
    build_with_budget(m, n, lambda, seed, DEFAULT_NODE_BUDGET)
}

/// [`build`] with an explicit node budget for the decomposition searches.
pub fn build_with_budget(
    m: u32,
    n: u32,
    lambda: u32,
    seed: u64,
    budget: u64,
) -> Result<GddDesign, BuildError> {
    match classify(m, n, lambda)? {
        Classification::Constructible { method } => match method {
            Method::OddOdd => odd_odd(m, n, lambda, seed, budget),
            Method::EvenOdd => even_odd(m, n, lambda, seed, budget),
            Method::DualStar => dual_star(m, n, lambda, seed, budget),
            Method::PullOne => pull_one(m, n, lambda, seed, budget),
            Method::PullThree => pull_three(m, n, lambda, seed, budget),
        },
        classification => Err(BuildError::NotConstructible { classification }),
    }
}

/// The odd-odd scheme directly: m, n odd, λ ≤ 3(m−1)/n.
pub fn build_odd_odd(m: u32, n: u32, lambda: u32, seed: u64) -> Result<GddDesign, BuildError> {
    odd_odd(m, n, lambda, seed, DEFAULT_NODE_BUDGET)
}

/// The even-odd scheme directly: m even, n odd, λ ≤ 3(m−1)/n.
pub fn build_even_odd(m: u32, n: u32, lambda: u32, seed: u64) -> Result<GddDesign, BuildError> {
    even_odd(m, n, lambda, seed, DEFAULT_NODE_BUDGET)
}

/// The dual-star scheme directly: n odd, λ−2 ≤ 3(m−1)/n, 2m ≤ 3(n−1).
pub fn build_dual_star(m: u32, n: u32, lambda: u32, seed: u64) -> Result<GddDesign, BuildError> {
    dual_star(m, n, lambda, seed, DEFAULT_NODE_BUDGET)
}

/// The pull-one scheme directly: n even, m ≡ 1, 5 (mod 6), λ ≤ 3(m−3)/n,
/// λ ≤ 3(n−1).
pub fn build_pull_one(m: u32, n: u32, lambda: u32, seed: u64) -> Result<GddDesign, BuildError> {
    pull_one(m, n, lambda, seed, DEFAULT_NODE_BUDGET)
}

/// The pull-three scheme directly: n even, m ≡ 3 (mod 6), m ≥ 7,
/// λ ≤ 3(m−7)/n, λ ≤ n−1.
pub fn build_pull_three(m: u32, n: u32, lambda: u32, seed: u64) -> Result<GddDesign, BuildError> {
    pull_three(m, n, lambda, seed, DEFAULT_NODE_BUDGET)
}

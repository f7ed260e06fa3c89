//! Independent verification by exhaustive pair counting, plus a brute-force
//! existence oracle for tiny parameter sets.
//!
//! The verifiers share nothing with the construction pipeline: they recount
//! every pair straight from the raw blocks (or cycles, matchings, and
//! triangles) and compare the tallies with what the definition demands — two
//! points in the same group must appear together in exactly 3 blocks, points
//! from different groups in exactly λ. [`brute_force_gdd`] settles tiny
//! instances by exhaustive backtracking and either returns a design, proves
//! none exists, or reports that its node budget ran out.

use crate::builder::GddDesign;
use crate::decomp::{Cycle, MixedDecomposition, OneFactor, ThreefoldDecomposition};
use crate::search::{exact_cover, CoverOutcome, PairMap};
use crate::{Triple, Vertex};

/// Dense pair counting is quadratic in the point count; refuse inputs whose
/// declared order would make the tally itself unreasonable.
const ORDER_LIMIT: u64 = 2048;

/// One pair whose multiplicity differs from the definition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PairViolation {
    pub a: Vertex,
    pub b: Vertex,
    pub expected: u64,
    pub observed: u64,
}

/// Outcome of recounting a block list against the GDD definition.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub m: u32,
    pub n: u32,
    pub lambda: u32,
    pub block_count: u64,
    /// Total pair slots divided by 3, when that is an integer: the only block
    /// count a correct design can have.
    pub expected_block_count: Option<u64>,
    pub violations: Vec<PairViolation>,
    pub ok: bool,
}

/// Input that cannot even be counted.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("block {index} {points:?} is malformed: {reason}")]
    MalformedBlock { index: usize, points: [Vertex; 3], reason: String },
    #[error("{kind} {index} is malformed: {reason}")]
    MalformedComponent { kind: String, index: usize, reason: String },
    #[error("order {v} exceeds the verifier limit of {limit} points")]
    TooLarge { v: u64, limit: u64 },
}

/// Flat index of the pair (a, b), a < b, among all pairs of 0..v.
fn pair_index(v: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < v);
    a * v - a * (a + 1) / 2 + b - a - 1
}

/// Recounts raw blocks against the GDD(m, n; 3, λ) definition: group M is the
/// points 0..m, group N is m..m+n, same-group pairs must occur exactly 3
/// times and cross pairs exactly λ times. Nothing about the blocks is assumed
/// beyond three distinct in-range points each.
pub fn verify_gdd(
    m: u32,
    n: u32,
    lambda: u32,
    blocks: &[[Vertex; 3]],
) -> Result<VerifyReport, VerifyError> {
    let v = u64::from(m) + u64::from(n);
    if v > ORDER_LIMIT {
        return Err(VerifyError::TooLarge { v, limit: ORDER_LIMIT });
    }
    let vu = v as usize;
    let mut counts = vec![0u64; vu * vu.saturating_sub(1) / 2];
    for (index, &points) in blocks.iter().enumerate() {
        let [a, b, c] = points;
        if a == b || a == c || b == c {
            return Err(VerifyError::MalformedBlock {
                index,
                points,
                reason: "points are not distinct".into(),
            });
        }
        for p in points {
            if u64::from(p) >= v {
                return Err(VerifyError::MalformedBlock {
                    index,
                    points,
                    reason: format!("point {p} is outside 0..{v}"),
                });
            }
        }
        for (x, y) in [(a, b), (a, c), (b, c)] {
            counts[pair_index(vu, x.min(y) as usize, x.max(y) as usize)] += 1;
        }
    }

    let mut violations = Vec::new();
    for a in 0..vu {
        for b in a + 1..vu {
            let same_group = (a < m as usize) == (b < m as usize);
            let expected = if same_group { 3 } else { u64::from(lambda) };
            let observed = counts[pair_index(vu, a, b)];
            if observed != expected {
                violations.push(PairViolation {
                    a: a as Vertex,
                    b: b as Vertex,
                    expected,
                    observed,
                });
            }
        }
    }

    let m128 = u128::from(m);
    let n128 = u128::from(n);
    let slots =
        3 * (m128 * (m128.max(1) - 1) / 2 + n128 * (n128.max(1) - 1) / 2)
            + u128::from(lambda) * m128 * n128;
    let expected_block_count = (slots % 3 == 0).then_some((slots / 3) as u64);
    let ok = violations.is_empty();
    Ok(VerifyReport {
        m,
        n,
        lambda,
        block_count: blocks.len() as u64,
        expected_block_count,
        violations,
        ok,
    })
}

/// [`verify_gdd`] applied to a built design's own parameters and blocks.
pub fn verify_design(design: &GddDesign) -> Result<VerifyReport, VerifyError> {
    let blocks: Vec<[Vertex; 3]> = design.blocks.iter().map(Triple::points).collect();
    verify_gdd(design.m, design.n, design.lambda, &blocks)
}

/// Outcome of recounting a carved K_v (or 3·K_v) edge by edge.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub v: u32,
    pub violations: Vec<String>,
    pub ok: bool,
}

/// Checks that cycles are Hamiltonian, the matching is present exactly for
/// even v and perfect, and every edge of K_v is covered exactly once.
pub fn verify_decomposition(d: &MixedDecomposition) -> Result<DecompositionReport, VerifyError> {
    let factors: &[OneFactor] = d.one_factor.as_slice();
    let expected_factors = if d.v % 2 == 0 { 1 } else { 0 };
    verify_cover(d.v, 1, &d.cycles, factors, &d.triangles, expected_factors)
}

/// The same for 3·K_v: every edge three times, one matching per copy of even v.
pub fn verify_threefold_decomposition(
    d: &ThreefoldDecomposition,
) -> Result<DecompositionReport, VerifyError> {
    let expected_factors = if d.v % 2 == 0 { 3 } else { 0 };
    verify_cover(d.v, 3, &d.cycles, &d.one_factors, &d.triangles, expected_factors)
}

fn verify_cover(
    v: u32,
    mu: u64,
    cycles: &[Cycle],
    factors: &[OneFactor],
    triangles: &[Triple],
    expected_factors: usize,
) -> Result<DecompositionReport, VerifyError> {
    if u64::from(v) > ORDER_LIMIT {
        return Err(VerifyError::TooLarge { v: u64::from(v), limit: ORDER_LIMIT });
    }
    let vu = v as usize;
    let mut violations = Vec::new();
    let mut counts = vec![0u64; vu * vu.saturating_sub(1) / 2];
    let count = |a: Vertex, b: Vertex, counts: &mut Vec<u64>| {
        counts[pair_index(vu, a.min(b) as usize, a.max(b) as usize)] += 1;
    };

    if factors.len() != expected_factors {
        violations.push(format!(
            "expected {expected_factors} perfect matchings, found {}",
            factors.len()
        ));
    }

    for (index, cycle) in cycles.iter().enumerate() {
        let verts = cycle.vertices();
        for &x in verts {
            if x >= v {
                return Err(VerifyError::MalformedComponent {
                    kind: "cycle".into(),
                    index,
                    reason: format!("vertex {x} is outside 0..{v}"),
                });
            }
        }
        if verts.len() != vu {
            violations.push(format!(
                "cycle {index} has {} vertices, expected {v}",
                verts.len()
            ));
        }
        let mut seen = vec![false; vu];
        for &x in verts {
            if seen[x as usize] {
                violations.push(format!("cycle {index} repeats vertex {x}"));
            }
            seen[x as usize] = true;
        }
        for (a, b) in cycle.edges() {
            if a == b {
                violations.push(format!("cycle {index} has a degenerate edge at {a}"));
            } else {
                count(a, b, &mut counts);
            }
        }
    }

    for (index, factor) in factors.iter().enumerate() {
        let mut incidence = vec![0u32; vu];
        for &(a, b) in factor.pairs() {
            for x in [a, b] {
                if x >= v {
                    return Err(VerifyError::MalformedComponent {
                        kind: "matching".into(),
                        index,
                        reason: format!("vertex {x} is outside 0..{v}"),
                    });
                }
                incidence[x as usize] += 1;
            }
            if a == b {
                violations.push(format!("matching {index} has a degenerate pair at {a}"));
            } else {
                count(a, b, &mut counts);
            }
        }
        for (x, &c) in incidence.iter().enumerate() {
            if c != 1 {
                violations.push(format!(
                    "matching {index} touches vertex {x} {c} times, expected 1"
                ));
            }
        }
    }

    for (index, t) in triangles.iter().enumerate() {
        for p in t.points() {
            if p >= v {
                return Err(VerifyError::MalformedComponent {
                    kind: "triangle".into(),
                    index,
                    reason: format!("vertex {p} is outside 0..{v}"),
                });
            }
        }
        for (a, b) in t.pairs() {
            count(a, b, &mut counts);
        }
    }

    for a in 0..vu {
        for b in a + 1..vu {
            let observed = counts[pair_index(vu, a, b)];
            if observed != mu {
                violations.push(format!(
                    "edge ({a}, {b}) is covered {observed} times, expected {mu}"
                ));
            }
        }
    }

    let ok = violations.is_empty();
    Ok(DecompositionReport { v, violations, ok })
}

/// Result of the exhaustive search for a design.
#[derive(Clone, Debug)]
pub enum BruteForceOutcome {
    /// A design was found; its blocks are sorted and its seed is 0.
    Found(GddDesign),
    /// The whole search space was exhausted: no design exists.
    Nonexistent,
    /// The node budget ran out before the space was exhausted.
    BudgetExhausted,
}

/// Searches for any GDD(m, n; 3, λ) by exhaustive backtracking over block
/// multisets. Only sensible for tiny orders; the search space grows brutally.
pub fn brute_force_gdd(m: u32, n: u32, lambda: u32, node_budget: u64) -> BruteForceOutcome {
    let v = m + n;
    assert!(v <= 64, "brute force is for tiny orders, got m + n = {v}");
    assert!(lambda <= u32::from(u8::MAX), "brute force multiplicities are u8, got λ = {lambda}");
    let mut map = PairMap::new(v);
    for a in 0..v {
        for b in a + 1..v {
            let same_group = (a < m) == (b < m);
            let mult = if same_group { 3 } else { lambda as u8 };
            map.add(a, b, mult);
        }
    }
    let mut nodes = node_budget;
    match exact_cover(&mut map, &mut nodes, None) {
        CoverOutcome::Found(mut blocks) => {
            blocks.sort_unstable();
            BruteForceOutcome::Found(GddDesign { m, n, lambda, seed: 0, blocks })
        }
        CoverOutcome::Exhausted => BruteForceOutcome::Nonexistent,
        CoverOutcome::OutOfBudget => BruteForceOutcome::BudgetExhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    /// Three copies of {0, 1, 2} form a valid GDD(2, 1; 3, 3).
    fn tiny_blocks() -> Vec<[Vertex; 3]> {
        vec![[0, 1, 2]; 3]
    }

    #[test]
    fn tiny_design_verifies() {
        let report = verify_gdd(2, 1, 3, &tiny_blocks()).unwrap();
        assert!(report.ok);
        assert_eq!(report.block_count, 3);
        assert_eq!(report.expected_block_count, Some(3));
        assert!(report.violations.is_empty());
    }

    #[test]
    fn missing_block_is_flagged_pair_by_pair() {
        let report = verify_gdd(2, 1, 3, &tiny_blocks()[..2]).unwrap();
        assert!(!report.ok);
        assert_eq!(report.block_count, 2);
        assert_eq!(
            report.violations,
            vec![
                PairViolation { a: 0, b: 1, expected: 3, observed: 2 },
                PairViolation { a: 0, b: 2, expected: 3, observed: 2 },
                PairViolation { a: 1, b: 2, expected: 3, observed: 2 },
            ]
        );
    }

    #[test]
    fn uneven_counts_name_the_offending_pairs() {
        // A 7-block list for (3, 1; 3, 4) with one block swapped: several pairs
        // drift off their targets and each drift is reported.
        let blocks =
            vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3], [0, 1, 3], [0, 2, 3], [0, 1, 3]];
        let report = verify_gdd(3, 1, 4, &blocks).unwrap();
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| (v.a, v.b) == (2, 3) && v.expected == 4 && v.observed == 3));
        assert!(report
            .violations
            .iter()
            .any(|v| (v.a, v.b) == (0, 1) && v.expected == 3 && v.observed == 4));
    }

    #[test]
    fn malformed_blocks_are_errors_not_violations() {
        let dup = vec![[0, 1, 1]];
        assert!(matches!(
            verify_gdd(2, 1, 3, &dup),
            Err(VerifyError::MalformedBlock { index: 0, .. })
        ));
        let range = vec![[0, 1, 7]];
        assert!(matches!(
            verify_gdd(2, 1, 3, &range),
            Err(VerifyError::MalformedBlock { index: 0, .. })
        ));
    }

    #[test]
    fn impossible_block_counts_are_reported() {
        // m = 3, n = 2, λ = 4: slot total 3·(3+1) + 24 = 36, so 12 blocks
        // would be needed; an empty list is flagged with the expectation.
        let report = verify_gdd(3, 2, 4, &[]).unwrap();
        assert!(!report.ok);
        assert_eq!(report.expected_block_count, Some(12));
        assert_eq!(report.block_count, 0);
    }

    fn base_design() -> &'static GddDesign {
        static CELL: OnceLock<GddDesign> = OnceLock::new();
        CELL.get_or_init(|| match brute_force_gdd(3, 1, 4, 1 << 24) {
            BruteForceOutcome::Found(d) => d,
            other => panic!("GDD(3,1;3,4) should exist, got {other:?}"),
        })
    }

    #[test]
    fn brute_force_finds_and_design_verifies() {
        let d = base_design();
        assert_eq!(d.blocks.len(), 7);
        let report = verify_design(d).unwrap();
        assert!(report.ok, "{:?}", report.violations);
        assert_eq!(report.expected_block_count, Some(7));
    }

    #[test]
    fn brute_force_proves_nonexistence() {
        // 3 does not divide λmn = 20, so the slot total is not divisible by 3.
        assert!(matches!(brute_force_gdd(5, 1, 4, 1 << 20), BruteForceOutcome::Nonexistent));
        // Divisibility holds but parity forbids it; exhaustion proves it.
        assert!(matches!(brute_force_gdd(3, 2, 4, 1 << 24), BruteForceOutcome::Nonexistent));
    }

    #[test]
    fn brute_force_respects_budget() {
        assert!(matches!(brute_force_gdd(3, 1, 6, 0), BruteForceOutcome::BudgetExhausted));
    }

    #[test]
    fn dropping_any_block_is_flagged() {
        let d = base_design();
        for skip in 0..d.blocks.len() {
            let blocks: Vec<[Vertex; 3]> = d
                .blocks
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, t)| t.points())
                .collect();
            let report = verify_gdd(d.m, d.n, d.lambda, &blocks).unwrap();
            assert!(!report.ok, "dropping block {skip} went unnoticed");
        }
    }

    #[test]
    fn decomposition_tampering_is_flagged() {
        use crate::decomp::{decompose_mixed, decompose_threefold};

        let mut d = decompose_mixed(9, 1, false, 0).unwrap();
        assert!(verify_decomposition(&d).unwrap().ok);
        let dropped = d.triangles.pop().unwrap();
        let report = verify_decomposition(&d).unwrap();
        assert!(!report.ok);
        assert!(!report.violations.is_empty());
        d.triangles.push(dropped);
        d.cycles[0] = Cycle::new(vec![0, 1, 2]);
        let report = verify_decomposition(&d).unwrap();
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.contains("cycle 0 has 3 vertices")));

        let mut t = decompose_threefold(8, 3, true, 0).unwrap();
        assert!(verify_threefold_decomposition(&t).unwrap().ok);
        t.one_factors.pop();
        let report = verify_threefold_decomposition(&t).unwrap();
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.contains("expected 3 perfect matchings")));
    }

    proptest! {
        /// Rewriting one point of one block never goes unnoticed: the result
        /// is either malformed or fails pair counting. (Replacing a point with
        /// itself is skipped — that is not a tamper.)
        #[test]
        fn single_point_tampering_is_flagged(
            block in 0usize..7,
            slot in 0usize..3,
            replacement in 0u32..4,
        ) {
            let d = base_design();
            let mut blocks: Vec<[Vertex; 3]> = d.blocks.iter().map(Triple::points).collect();
            prop_assume!(blocks[block][slot] != replacement);
            blocks[block][slot] = replacement;
            match verify_gdd(d.m, d.n, d.lambda, &blocks) {
                Err(VerifyError::MalformedBlock { .. }) => {}
                Ok(report) => prop_assert!(!report.ok, "tamper passed verification"),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }
}

//! Arithmetic feasibility and classification of GDD(m, n; 3, λ) parameters.
//!
//! Three necessary conditions follow from counting. Write V = m + n for the point
//! count; a design has (3·m(m−1) + 3·n(n−1) + 2λmn)/6 blocks, every point of M has
//! degree 3(m−1) + λn in the pair multigraph it must resolve, and every point of N
//! has degree 3(n−1) + λm. Hence:
//!
//! * **divisibility** — the block count is an integer, which reduces to 3 | λmn;
//! * **parity** — each point sees an even number of pair slots besides each block's
//!   two, i.e. n−1+λm and m−1+λn are both even;
//! * **capacity** — cross pairs cannot outnumber what triangles through both groups
//!   can absorb: λmn ≤ 3·(m(m−1) + n(n−1)).
//!
//! Divisibility and parity only depend on residues mod 6. The admissible λ by
//! (m mod 6, n mod 6) are:
//!
//! | m \ n (mod 6) | 0      | 1, 5        | 2, 4        | 3      |
//! |---------------|--------|-------------|-------------|--------|
//! | **0**         | —      | λ odd       | —           | λ odd  |
//! | **1, 5**      | λ odd  | λ ≡ 0 (6)   | λ ≡ 3 (6)   | λ even |
//! | **2, 4**      | —      | λ ≡ 3 (6)   | —           | λ odd  |
//! | **3**         | λ odd  | λ even      | λ odd       | λ even |
//!
//! One corollary is used throughout the builders: for parameters passing both
//! conditions, λ is even exactly when m and n are both odd.
//!
//! [`classify`] goes further and sorts parameters with m > n ≥ 1 and λ ≥ 4 into
//! three bins: [`Rejected`] (some necessary condition fails), [`Constructible`]
//! (one of the five schemes in [`crate::builder`] applies), or [`Open`] (feasible
//! by arithmetic but outside every scheme). All arithmetic is exact and integral;
//! products are taken in `u128`, and the bound ⌊3(m−1)/n⌋ uses floor division.
//!
//! [`Rejected`]: Classification::Rejected
//! [`Constructible`]: Classification::Constructible
//! [`Open`]: Classification::Open

use std::collections::BTreeSet;
use std::fmt;

use crate::decomp::{max_cycles, split_across_copies};

/// One of the three arithmetic requirements every GDD(m, n; 3, λ) must satisfy.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NecessaryCondition {
    /// 3 must divide λ·m·n, else the block count is fractional.
    Divisibility,
    /// n−1+λm and m−1+λn must both be even, else some point has odd degree.
    Parity,
    /// λ·m·n ≤ 3·(m(m−1) + n(n−1)), else cross pairs exceed triangle capacity.
    Capacity,
}

impl fmt::Display for NecessaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NecessaryCondition::Divisibility => {
                write!(f, "divisibility: 3 must divide lambda*m*n")
            }
            NecessaryCondition::Parity => {
                write!(f, "parity: n-1+lambda*m and m-1+lambda*n must both be even")
            }
            NecessaryCondition::Capacity => {
                write!(f, "capacity: lambda*m*n may not exceed 3*(m*(m-1) + n*(n-1))")
            }
        }
    }
}

/// Which necessary conditions fail for (m, n, λ). Empty means all three hold.
///
/// Accepts any m, n, λ ≥ 1; it does not require m > n.
pub fn check_necessary(m: u32, n: u32, lambda: u32) -> BTreeSet<NecessaryCondition> {
    let (m, n, l) = (u128::from(m), u128::from(n), u128::from(lambda));
    let mut out = BTreeSet::new();
    if (l * m * n) % 3 != 0 {
        out.insert(NecessaryCondition::Divisibility);
    }
    if (n - 1 + l * m) % 2 != 0 || (m - 1 + l * n) % 2 != 0 {
        out.insert(NecessaryCondition::Parity);
    }
    if l * m * n > 3 * (m * (m - 1) + n * (n - 1)) {
        out.insert(NecessaryCondition::Capacity);
    }
    out
}

/// Whether (m, n, λ) passes divisibility **and** parity (capacity not included).
pub fn in_feasible_set(m: u32, n: u32, lambda: u32) -> bool {
    !check_necessary(m, n, lambda)
        .iter()
        .any(|c| matches!(c, NecessaryCondition::Divisibility | NecessaryCondition::Parity))
}

/// Whether λ·m·n ≤ 3·(m(m−1) + n(n−1)) — the capacity condition alone.
pub fn capacity_holds(m: u32, n: u32, lambda: u32) -> bool {
    let (m, n, l) = (u128::from(m), u128::from(n), u128::from(lambda));
    l * m * n <= 3 * (m * (m - 1) + n * (n - 1))
}

/// One cell of the admissible-λ table: the congruence class (if any) that λ
/// must fall in for a given pair of group-size residues mod 6.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LambdaConstraint {
    /// λ must be odd.
    Odd,
    /// λ must be even.
    Even,
    /// λ ≡ 0 (mod 6).
    ZeroMod6,
    /// λ ≡ 3 (mod 6).
    ThreeMod6,
    /// Empty cell: no λ whatsoever passes divisibility and parity.
    NoneAllowed,
}

impl LambdaConstraint {
    /// Whether `lambda` satisfies this constraint.
    pub fn admits(self, lambda: u32) -> bool {
        match self {
            LambdaConstraint::Odd => lambda % 2 == 1,
            LambdaConstraint::Even => lambda % 2 == 0,
            LambdaConstraint::ZeroMod6 => lambda % 6 == 0,
            LambdaConstraint::ThreeMod6 => lambda % 6 == 3,
            LambdaConstraint::NoneAllowed => false,
        }
    }
}

impl fmt::Display for LambdaConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            LambdaConstraint::Odd => "lambda odd",
            LambdaConstraint::Even => "lambda even",
            LambdaConstraint::ZeroMod6 => "lambda = 0 (mod 6)",
            LambdaConstraint::ThreeMod6 => "lambda = 3 (mod 6)",
            LambdaConstraint::NoneAllowed => "no lambda admissible",
        };
        write!(f, "{text}")
    }
}

/// The cell of the admissible-λ table (see the module docs) for group sizes
/// with the given residues mod 6. The table collapses {1, 5} and {2, 4} into
/// single rows and columns, so only the class of each residue matters.
///
/// # Panics
/// Panics unless both arguments are in 0..=5.
pub fn residue_constraint(m_mod6: u32, n_mod6: u32) -> LambdaConstraint {
    assert!(m_mod6 < 6 && n_mod6 < 6, "residues must be reduced mod 6");
    // Collapse to the four table rows/columns: 0, {1,5}, {2,4}, 3.
    let class = |r: u32| match r {
        0 => 0,
        1 | 5 => 1,
        2 | 4 => 2,
        _ => 3,
    };
    use LambdaConstraint::*;
    match (class(m_mod6), class(n_mod6)) {
        (0, 0) | (0, 2) | (2, 0) | (2, 2) => NoneAllowed,
        (0, 1) | (0, 3) | (1, 0) | (3, 0) | (2, 3) | (3, 2) => Odd,
        (1, 1) => ZeroMod6,
        (1, 2) | (2, 1) => ThreeMod6,
        (1, 3) | (3, 1) | (3, 3) => Even,
        _ => unreachable!("classes are in 0..=3"),
    }
}

/// The largest λ ≥ 1 passing all three necessary conditions, if any.
pub fn lambda_max(m: u32, n: u32) -> Option<u32> {
    let upper = (3 * (u128::from(m) * u128::from(m - 1) + u128::from(n) * u128::from(n - 1)))
        / (u128::from(m) * u128::from(n));
    let upper = u32::try_from(upper).unwrap_or(u32::MAX);
    (1..=upper).rev().find(|&l| in_feasible_set(m, n, l))
}

/// All λ passing every necessary condition that also exceed the group bound
/// ⌊3(m−1)/n⌋ — the λ that no construction resolving cross pairs through K_m
/// alone can reach. Requires m > n ≥ 1; such λ are automatically ≥ 4.
pub fn gamma_set(m: u32, n: u32) -> BTreeSet<u32> {
    assert!(m > n && n >= 1, "gamma_set requires m > n >= 1");
    let bound = 3 * (m - 1) / n;
    let Some(top) = lambda_max(m, n) else {
        return BTreeSet::new();
    };
    (bound + 1..=top).filter(|&l| in_feasible_set(m, n, l)).collect()
}

/// The five construction schemes. Names describe the shape of the build:
/// which group parities they serve and how cross pairs are carried.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Method {
    /// m, n both odd; all cross pairs ride on Hamiltonian cycles of 3·K_m.
    OddOdd,
    /// m even, n odd; three 1-factors of 3·K_m absorb the odd per-point share.
    EvenOdd,
    /// n odd, λ just past the group bound: both sides contribute starred cycles.
    DualStar,
    /// n even, m ≡ 1, 5 (mod 6): one point of M is pulled into a sub-design.
    PullOne,
    /// n even, m ≡ 3 (mod 6): three points of M are pulled into a sub-design.
    PullThree,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Method::OddOdd => "odd-odd",
            Method::EvenOdd => "even-odd",
            Method::DualStar => "dual-star",
            Method::PullOne => "pull-one",
            Method::PullThree => "pull-three",
        };
        write!(f, "{name}")
    }
}

/// Where an open (feasible but unconstructed) triple sits relative to the
/// parameter landscape. Tags are assigned in the order listed here; the first
/// that applies wins.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OpenCase {
    /// λ equals the largest feasible value for (m, n).
    AtLambdaMax,
    /// λ equals that maximum minus two.
    TwoBelowLambdaMax,
    /// λ equals that maximum minus four, inside the narrow window where such
    /// triples remain unresolved: (3m ≤ (n−2)² with 6 ≤ n ≤ 16) or
    /// (m, n) ∈ {(21, 6), (27, 6)}.
    FourBelowLambdaMax,
    /// n even and λ exceeds what star factors through the pulled points can
    /// carry: λ > 3(n−1) when m ≡ 1, 5 (mod 6), λ > n−1 when m ≡ 3 (mod 6).
    BeyondStarCapacity,
    /// None of the recognised descriptions apply.
    Unclassified,
}

impl fmt::Display for OpenCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OpenCase::AtLambdaMax => "at-lambda-max",
            OpenCase::TwoBelowLambdaMax => "two-below-lambda-max",
            OpenCase::FourBelowLambdaMax => "four-below-lambda-max",
            OpenCase::BeyondStarCapacity => "beyond-star-capacity",
            OpenCase::Unclassified => "unclassified",
        };
        write!(f, "{name}")
    }
}

/// Verdict of [`classify`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Classification {
    /// Some necessary condition fails; no design exists.
    Rejected { violated: BTreeSet<NecessaryCondition> },
    /// A construction scheme applies; [`crate::builder::build`] will succeed.
    Constructible { method: Method },
    /// All necessary conditions hold but no scheme covers the parameters.
    Open { case: OpenCase },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Rejected { violated } => {
                write!(f, "rejected")?;
                for v in violated {
                    write!(f, "; {v}")?;
                }
                Ok(())
            }
            Classification::Constructible { method } => {
                write!(f, "constructible via the {method} scheme")
            }
            Classification::Open { case } => write!(f, "open ({case})"),
        }
    }
}

/// Input outside the domain this crate decides.
#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
pub enum ParameterError {
    #[error("group sizes must satisfy m > n >= 1 (got m = {m}, n = {n})")]
    GroupOrder { m: u32, n: u32 },
    #[error("lambda must be at least 4 (got {lambda}); smaller cross indices are classical")]
    LambdaTooSmall { lambda: u32 },
}

/// Sorts (m, n, λ) with m > n ≥ 1 and λ ≥ 4 into rejected / constructible / open.
///
/// The scheme gates are exactly the conditions under which the corresponding
/// builder succeeds:
///
/// * n odd, λ ≤ ⌊3(m−1)/n⌋ → odd-odd or even-odd by the parity of m;
/// * n odd, λ−2 ≤ ⌊3(m−1)/n⌋, 2m ≤ 3(n−1), and both threefold graphs split
///   across their three copies → dual-star;
/// * n even (then m is odd by parity), m ≡ 1, 5 (mod 6), λ ≤ ⌊3(m−3)/n⌋ and
///   λ ≤ 3(n−1) → pull-one;
/// * n even, m ≡ 3 (mod 6), λ ≤ ⌊3(m−7)/n⌋ and λ ≤ n−1 → pull-three.
///
/// Everything feasible that no gate accepts is reported [`Open`] with a tag
/// describing where it sits; see [`OpenCase`].
///
/// [`Open`]: Classification::Open
pub fn classify(m: u32, n: u32, lambda: u32) -> Result<Classification, ParameterError> {
    if m <= n || n == 0 {
        return Err(ParameterError::GroupOrder { m, n });
    }
    if lambda < 4 {
        return Err(ParameterError::LambdaTooSmall { lambda });
    }
    let violated = check_necessary(m, n, lambda);
    if !violated.is_empty() {
        return Ok(Classification::Rejected { violated });
    }
    let bound = 3 * (m - 1) / n;
    if n % 2 == 1 {
        if lambda <= bound {
            let method = if m % 2 == 1 { Method::OddOdd } else { Method::EvenOdd };
            return Ok(Classification::Constructible { method });
        }
        if lambda - 2 <= bound && 2 * m <= 3 * (n - 1) && dual_star_splits_ok(m, n, lambda) {
            return Ok(Classification::Constructible { method: Method::DualStar });
        }
    } else {
        // n even forces m, λ odd by parity.
        debug_assert!(m % 2 == 1 && lambda % 2 == 1);
        match m % 6 {
            1 | 5 => {
                if m >= 3 && lambda <= 3 * (m - 3) / n && lambda <= 3 * (n - 1) {
                    return Ok(Classification::Constructible { method: Method::PullOne });
                }
            }
            3 => {
                if m >= 7 && lambda <= 3 * (m - 7) / n && lambda < n {
                    return Ok(Classification::Constructible { method: Method::PullThree });
                }
            }
            _ => unreachable!("m is odd"),
        }
    }
    Ok(Classification::Open { case: open_case(m, n, lambda) })
}

/// Both split-feasibility gates of the dual-star scheme: the M side must split
/// its k₁ cycles across the three copies of K_m (with the 1-factors exactly when
/// m is even), and the N side must split m cycles across the three copies of K_n.
fn dual_star_splits_ok(m: u32, n: u32, lambda: u32) -> bool {
    let reduced = lambda - 2;
    let m_even = m % 2 == 0;
    let k1 = if m_even { (n * reduced - 3) / 2 } else { n * reduced / 2 };
    if k1 > 3 * max_cycles(m, m_even) || m > 3 * max_cycles(n, false) {
        return false;
    }
    split_across_copies(m, k1, m_even).is_ok() && split_across_copies(n, m, false).is_ok()
}

/// Tags a feasible-but-unconstructed triple; see [`OpenCase`] for the order.
fn open_case(m: u32, n: u32, lambda: u32) -> OpenCase {
    let top = lambda_max(m, n).expect("a feasible lambda exists for an open triple");
    if lambda == top {
        return OpenCase::AtLambdaMax;
    }
    if top >= 2 && lambda == top - 2 {
        return OpenCase::TwoBelowLambdaMax;
    }
    let narrow_window = (6..=16).contains(&n) && 3 * u64::from(m) <= u64::from(n - 2) * u64::from(n - 2);
    if top >= 4 && lambda == top - 4 && (narrow_window || (m, n) == (21, 6) || (m, n) == (27, 6)) {
        return OpenCase::FourBelowLambdaMax;
    }
    if n % 2 == 0 {
        let star_bound = match m % 6 {
            1 | 5 => 3 * (n - 1),
            _ => n - 1,
        };
        if lambda > star_bound {
            return OpenCase::BeyondStarCapacity;
        }
    }
    OpenCase::Unclassified
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent statement of the residue table from the module docs.
    /// `None` means no λ is admissible for this residue pair.
    fn table_allows(m_mod6: u32, n_mod6: u32, lambda: u32) -> bool {
        let odd = lambda % 2 == 1;
        let even = !odd;
        match (m_mod6, n_mod6) {
            (0, 0) | (0, 2) | (0, 4) => false,
            (0, 1) | (0, 5) | (0, 3) => odd,
            (1, 0) | (5, 0) => odd,
            (1, 1) | (1, 5) | (5, 1) | (5, 5) => lambda % 6 == 0,
            (1, 2) | (1, 4) | (5, 2) | (5, 4) => lambda % 6 == 3,
            (1, 3) | (5, 3) => even,
            (2, 0) | (4, 0) | (2, 2) | (2, 4) | (4, 2) | (4, 4) => false,
            (2, 1) | (2, 5) | (4, 1) | (4, 5) => lambda % 6 == 3,
            (2, 3) | (4, 3) => odd,
            (3, 0) => odd,
            (3, 1) | (3, 5) => even,
            (3, 2) | (3, 4) => odd,
            (3, 3) => even,
            _ => unreachable!(),
        }
    }

    #[test]
    fn feasible_set_matches_residue_table() {
        for m in 1..=42 {
            for n in 1..=42 {
                for lambda in 1..=36 {
                    assert_eq!(
                        in_feasible_set(m, n, lambda),
                        table_allows(m % 6, n % 6, lambda),
                        "disagreement at m={m} n={n} lambda={lambda}"
                    );
                }
            }
        }
    }

    #[test]
    fn residue_constraint_cell_examples() {
        assert_eq!(residue_constraint(1, 1), LambdaConstraint::ZeroMod6);
        assert_eq!(residue_constraint(3, 0), LambdaConstraint::Odd);
        assert_eq!(residue_constraint(0, 0), LambdaConstraint::NoneAllowed);
        assert_eq!(residue_constraint(5, 4), LambdaConstraint::ThreeMod6);
        assert_eq!(residue_constraint(3, 3), LambdaConstraint::Even);
    }

    #[test]
    fn residue_constraint_agrees_with_feasible_set() {
        for m in 1..=50 {
            for n in 1..=50 {
                for lambda in 1..=30 {
                    assert_eq!(
                        in_feasible_set(m, n, lambda),
                        residue_constraint(m % 6, n % 6).admits(lambda),
                        "disagreement at m={m} n={n} lambda={lambda}"
                    );
                }
            }
        }
    }

    #[test]
    fn parity_corollary_lambda_even_iff_both_groups_odd() {
        for m in 1..=40 {
            for n in 1..=40 {
                for lambda in 1..=24 {
                    if in_feasible_set(m, n, lambda) {
                        assert_eq!(
                            lambda % 2 == 0,
                            m % 2 == 1 && n % 2 == 1,
                            "m={m} n={n} lambda={lambda}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn necessary_condition_examples() {
        use NecessaryCondition::*;
        assert!(check_necessary(7, 3, 6).is_empty());
        assert_eq!(check_necessary(5, 1, 4), BTreeSet::from([Divisibility]));
        assert_eq!(check_necessary(3, 2, 4), BTreeSet::from([Parity]));
        assert_eq!(check_necessary(3, 2, 7), BTreeSet::from([Capacity]));
        assert_eq!(check_necessary(4, 2, 4), BTreeSet::from([Divisibility, Parity]));
    }

    #[test]
    fn lambda_max_examples() {
        assert_eq!(lambda_max(9, 5), Some(6));
        assert_eq!(lambda_max(21, 6), Some(9));
        assert_eq!(lambda_max(3, 3), Some(4));
    }

    #[test]
    fn lambda_max_is_maximal_and_feasible() {
        for m in 1..=30 {
            for n in 1..=30 {
                let top = lambda_max(m, n);
                if let Some(top) = top {
                    assert!(in_feasible_set(m, n, top) && capacity_holds(m, n, top));
                }
                // Nothing above it is fully feasible.
                let from = top.map_or(1, |t| t + 1);
                for l in from..=from + 40 {
                    assert!(!(in_feasible_set(m, n, l) && capacity_holds(m, n, l)));
                }
            }
        }
    }

    #[test]
    fn gamma_set_examples() {
        assert_eq!(gamma_set(9, 5), BTreeSet::from([6]));
        assert_eq!(gamma_set(7, 3), BTreeSet::new());
        assert_eq!(gamma_set(9, 7), BTreeSet::from([4]));
    }

    #[test]
    fn classify_rejects_out_of_scope_parameters() {
        assert_eq!(classify(3, 3, 4), Err(ParameterError::GroupOrder { m: 3, n: 3 }));
        assert_eq!(classify(3, 7, 4), Err(ParameterError::GroupOrder { m: 3, n: 7 }));
        assert_eq!(classify(7, 0, 4), Err(ParameterError::GroupOrder { m: 7, n: 0 }));
        assert_eq!(classify(7, 3, 3), Err(ParameterError::LambdaTooSmall { lambda: 3 }));
    }

    #[test]
    fn classify_method_examples() {
        let method = |m, n, l| match classify(m, n, l).unwrap() {
            Classification::Constructible { method } => method,
            other => panic!("expected constructible for ({m},{n},{l}), got {other}"),
        };
        assert_eq!(method(7, 3, 6), Method::OddOdd);
        assert_eq!(method(5, 1, 6), Method::OddOdd);
        assert_eq!(method(8, 3, 5), Method::EvenOdd);
        assert_eq!(method(9, 7, 4), Method::DualStar);
        assert_eq!(method(13, 6, 5), Method::PullOne);
        assert_eq!(method(21, 8, 5), Method::PullThree);
    }

    #[test]
    fn classify_open_examples() {
        assert_eq!(
            classify(9, 5, 6).unwrap(),
            Classification::Open { case: OpenCase::AtLambdaMax }
        );
        assert_eq!(
            classify(21, 6, 9).unwrap(),
            Classification::Open { case: OpenCase::AtLambdaMax }
        );
        assert_eq!(
            classify(21, 6, 7).unwrap(),
            Classification::Open { case: OpenCase::TwoBelowLambdaMax }
        );
    }

    #[test]
    fn classify_rejected_examples() {
        let violated = |m, n, l| match classify(m, n, l).unwrap() {
            Classification::Rejected { violated } => violated,
            other => panic!("expected rejection for ({m},{n},{l}), got {other}"),
        };
        assert!(violated(5, 1, 4).contains(&NecessaryCondition::Divisibility));
        assert!(violated(3, 2, 4).contains(&NecessaryCondition::Parity));
        assert!(violated(3, 2, 7).contains(&NecessaryCondition::Capacity));
    }

    #[test]
    fn classify_agrees_with_necessary_conditions() {
        for m in 2..=24 {
            for n in 1..m {
                for lambda in 4..=30 {
                    let cls = classify(m, n, lambda).unwrap();
                    let fully_feasible =
                        in_feasible_set(m, n, lambda) && capacity_holds(m, n, lambda);
                    assert_eq!(
                        matches!(cls, Classification::Rejected { .. }),
                        !fully_feasible,
                        "m={m} n={n} lambda={lambda}"
                    );
                }
            }
        }
    }
}

//! Constructions and verification for group divisible designs with block size three.
//!
//! A *group divisible design* GDD(m, n; 3, λ) places blocks of size three on a point
//! set that is split into two groups M and N with |M| = m and |N| = n, so that
//!
//! * every pair of points from the **same** group lies in exactly **3** blocks, and
//! * every pair of points from **different** groups lies in exactly **λ** blocks.
//!
//! Points are canonical throughout the crate: M = {0, …, m−1} and N = {m, …, m+n−1}.
//! Counting pair slots shows such a design has exactly
//! (3·m(m−1) + 3·n(n−1) + 2λmn) / 6 blocks.
//!
//! The crate is organised as a pipeline:
//!
//! * [`feasibility`] decides from integer arithmetic alone whether parameters are
//!   impossible (`Rejected`), covered by one of five explicit construction schemes
//!   (`Constructible`), or outside both (`Open`).
//! * [`decomp`] decomposes complete graphs into Hamiltonian cycles, an optional
//!   1-factor, and triangles: the raw material every scheme consumes.
//! * [`triples`] builds Steiner and threefold triple systems for the inner groups.
//! * [`builder`] assembles explicit block lists from those pieces.
//! * [`verify`] independently re-checks any block list by exact pair counting and
//!   offers a brute-force existence oracle for tiny parameter sets.
//!
//! All randomness is deterministic: every search takes an explicit seed, and equal
//! seeds reproduce identical designs block for block.

pub mod builder;
pub mod decomp;
pub mod feasibility;
mod search;
pub mod triples;
pub mod verify;

/// Point identifier. Designs handled here have at most a few hundred points.
pub type Vertex = u32;

/// A block or triangle: three distinct points, stored in increasing order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Triple([Vertex; 3]);

impl Triple {
    /// Canonical triple on `{a, b, c}`. The three points must be pairwise distinct.
    ///
    /// # Panics
    /// Panics if two of the points coincide.
    pub fn new(a: Vertex, b: Vertex, c: Vertex) -> Self {
        let mut p = [a, b, c];
        p.sort_unstable();
        assert!(p[0] < p[1] && p[1] < p[2], "triple points must be distinct: {p:?}");
        Triple(p)
    }

    /// Canonical triple, or `None` when the points are not pairwise distinct.
    pub fn try_new(a: Vertex, b: Vertex, c: Vertex) -> Option<Self> {
        let mut p = [a, b, c];
        p.sort_unstable();
        (p[0] < p[1] && p[1] < p[2]).then_some(Triple(p))
    }

    /// The three points in increasing order.
    pub fn points(&self) -> [Vertex; 3] {
        self.0
    }

    /// The three pairs contained in this triple, each in increasing order.
    pub fn pairs(&self) -> [(Vertex, Vertex); 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    /// A new triple with every point renamed through `f`.
    ///
    /// # Panics
    /// Panics if `f` maps two points of the triple to the same value.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Self {
        let [a, b, c] = self.0;
        Triple::new(f(a), f(b), f(c))
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{{{a}, {b}, {c}}}")
    }
}

/// Derives an independent stream seed from a master seed and a fixed salt,
/// so that the sub-searches of one build cannot correlate.
pub(crate) fn mix_seed(seed: u64, salt: u64) -> u64 {
    // SplitMix64 finaliser.
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

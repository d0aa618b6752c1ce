//! Tait₀ as a sum over face-sign vectors α ∈ {−1, +1}^F.
//!
//! Each α induces edge weights `x_e = α(F'_e) + α(F''_e)` over F3. The term for
//! α is read off the weighted Laplacian `L(G; x)`: with `r` its rank and
//! `det_r` any nonzero principal minor of order `r`, terms with odd `r`
//! contribute nothing, and terms with even `r` contribute
//! `(det_r / 3) / (-3)^(r/2)`. The contracted graph `G/W*` has `r + 1`
//! vertices, so "even rank" is the same filter as "odd number of vertices".
//!
//! The sum is accumulated exactly at the fixed scale `3^⌊(n-1)/2⌋`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::gf3linalg::{laplacian, laplacian_into, legendre, sym_rank_certificate, EliminationScratch, SymF3Matrix, F3};
use crate::triangulation::{Triangulation, WeightedGraph};

/// Default cap on the number of faces enumerated (2^28 terms).
pub const DEFAULT_MAX_FACES: usize = 28;
/// Hard limit imposed by the 64-bit α mask.
pub const MASK_LIMIT_FACES: usize = 62;

const CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphaError {
    #[error("{faces} faces exceeds the enumeration budget of {max} (2^{faces} terms)")]
    BudgetExceeded { faces: usize, max: usize },
    #[error("internal error: accumulated sum {scaled_sum}/3^{scale} is not an integer")]
    NotIntegral { scaled_sum: String, scale: u32 },
    #[error("internal error: accumulated sum {0} is negative")]
    Negative(String),
}

/// A sign per face. Stored as F3 values, each `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaAssignment {
    signs: Vec<F3>,
}

impl AlphaAssignment {
    /// Bit `f` of `mask` set means `α(f) = -1`.
    pub fn from_mask(mask: u64, faces: usize) -> Self {
        assert!(faces <= 64);
        let signs = (0..faces)
            .map(|f| if mask >> f & 1 == 1 { F3::MINUS_ONE } else { F3::ONE })
            .collect();
        AlphaAssignment { signs }
    }

    /// `None` if any sign is zero.
    pub fn from_signs(signs: Vec<F3>) -> Option<Self> {
        signs.iter().all(|s| !s.is_zero()).then_some(AlphaAssignment { signs })
    }

    pub fn sign(&self, face: usize) -> F3 {
        self.signs[face]
    }

    pub fn signs(&self) -> &[F3] {
        &self.signs
    }

    pub fn negated(&self) -> Self {
        AlphaAssignment {
            signs: self.signs.iter().map(|&s| -s).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// `x_e = α(F'_e) + α(F''_e)`: equal signs `s, s` give `2s = -s`, mixed give 0.
pub fn edge_weights_from_alpha(g: &Triangulation, alpha: &AlphaAssignment) -> Vec<F3> {
    assert_eq!(alpha.len(), g.face_count(), "alpha must cover every face");
    (0..g.edge_count())
        .map(|e| {
            let (a, b) = g.edge_faces(e);
            alpha.sign(a) + alpha.sign(b)
        })
        .collect()
}

/// Fills `x` from a face mask without materialising the assignment.
#[inline]
fn edge_weights_from_mask(edge_faces: &[(u32, u32)], mask: u64, x: &mut [F3]) {
    for (xe, &(a, b)) in x.iter_mut().zip(edge_faces) {
        let (sa, sb) = (mask >> a & 1, mask >> b & 1);
        *xe = match (sa, sb) {
            (0, 0) => F3::MINUS_ONE,
            (1, 1) => F3::ONE,
            _ => F3::ZERO,
        };
    }
}

/// A weight `sign · (-1)^k · 3^(-k)`, i.e. `sign / (-3)^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactWeight {
    sign: i8,
    halfrank: u32,
}

impl ExactWeight {
    pub const ZERO: ExactWeight = ExactWeight { sign: 0, halfrank: 0 };

    pub fn new(sign: i8, halfrank: u32) -> Self {
        assert!((-1..=1).contains(&sign));
        if sign == 0 {
            Self::ZERO
        } else {
            ExactWeight { sign, halfrank }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn halfrank(&self) -> u32 {
        self.halfrank
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Numerator over `3^halfrank`.
    pub fn numerator(&self) -> i64 {
        let parity = if self.halfrank.is_multiple_of(2) { 1 } else { -1 };
        self.sign as i64 * parity
    }

    pub fn denominator(&self) -> BigInt {
        BigInt::from(3u8).pow(self.halfrank)
    }
}

impl std::fmt::Display for ExactWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.numerator(), self.halfrank) {
            (0, _) => write!(f, "0"),
            (n, 0) => write!(f, "{n}"),
            (n, _) => write!(f, "{n}/{}", self.denominator()),
        }
    }
}

/// The weight of one term: zero for odd rank, otherwise the Legendre symbol of
/// the certificate minor over `(-3)^(r/2)`.
pub fn term_weight<G: WeightedGraph>(g: &G, x: &[F3]) -> ExactWeight {
    let cert = sym_rank_certificate(&laplacian(g, x));
    weight_from_rank(cert.rank(), cert.det)
}

#[inline]
fn weight_from_rank(rank: usize, det: F3) -> ExactWeight {
    if rank % 2 == 1 {
        ExactWeight::ZERO
    } else {
        ExactWeight::new(legendre(det), (rank / 2) as u32)
    }
}

/// The minimal contraction set `W*` read off a rank certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionWitness {
    pub w_star: Vec<usize>,
    pub contracted_vertices: usize,
    /// `s(G/W*; x)`.
    pub tree_sum: F3,
}

/// `W* = V \ S` for the certificate pivot set `S`; `G/W*` has `r + 1` vertices.
pub fn contraction_witness<G: WeightedGraph>(g: &G, x: &[F3]) -> ContractionWitness {
    let n = g.vertex_count();
    let cert = sym_rank_certificate(&laplacian(g, x));
    let mut in_s = vec![false; n];
    for &i in &cert.pivots {
        in_s[i] = true;
    }
    let w_star: Vec<usize> = (0..n).filter(|&v| !in_s[v]).collect();
    let contracted_vertices = if w_star.is_empty() { n } else { n - w_star.len() + 1 };
    ContractionWitness {
        w_star,
        contracted_vertices,
        tree_sum: cert.det,
    }
}

/// Exact sum of [`ExactWeight`]s at the fixed scale `3^scale`.
///
/// Terms are tallied per weight class in the hot loop and the scaled sum is
/// materialised as a big integer on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAccumulator {
    scale: u32,
    // index k: [count of sign -1, count of sign +1]
    tallies: Vec<[u64; 2]>,
}

impl WeightAccumulator {
    /// Accumulator for a graph on `vertices` vertices: scale `⌊(n-1)/2⌋`.
    pub fn for_vertices(vertices: usize) -> Self {
        let scale = (vertices.saturating_sub(1) / 2) as u32;
        WeightAccumulator {
            scale,
            tallies: vec![[0; 2]; scale as usize + 1],
        }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    #[inline]
    pub fn add(&mut self, w: ExactWeight) {
        self.add_many(w, 1);
    }

    #[inline]
    pub fn add_many(&mut self, w: ExactWeight, count: u64) {
        if w.is_zero() {
            return;
        }
        assert!(w.halfrank <= self.scale, "weight {w} finer than accumulator scale 3^-{}", self.scale);
        self.tallies[w.halfrank as usize][usize::from(w.sign > 0)] += count;
    }

    pub fn merge(&mut self, other: &WeightAccumulator) {
        assert_eq!(self.scale, other.scale);
        for (a, b) in self.tallies.iter_mut().zip(&other.tallies) {
            a[0] += b[0];
            a[1] += b[1];
        }
    }

    /// Every nonzero weight class and how often it was added.
    pub fn classes(&self) -> impl Iterator<Item = (ExactWeight, u64)> + '_ {
        self.tallies.iter().enumerate().flat_map(|(k, &[neg, pos])| {
            [(-1i8, neg), (1, pos)]
                .into_iter()
                .filter(|&(_, c)| c > 0)
                .map(move |(s, c)| (ExactWeight::new(s, k as u32), c))
        })
    }

    /// The accumulated value times `3^scale`.
    pub fn scaled_sum(&self) -> BigInt {
        let three = BigInt::from(3u8);
        self.classes().fold(BigInt::zero(), |acc, (w, count)| {
            acc + BigInt::from(w.numerator()) * BigInt::from(count) * three.pow(self.scale - w.halfrank)
        })
    }

    /// The accumulated value, which must be a non-negative integer.
    pub fn integer_value(&self) -> Result<BigInt, AlphaError> {
        let scaled = self.scaled_sum();
        let denom = BigInt::from(3u8).pow(self.scale);
        if !(&scaled % &denom).is_zero() {
            return Err(AlphaError::NotIntegral {
                scaled_sum: scaled.to_string(),
                scale: self.scale,
            });
        }
        let value = scaled / denom;
        if value.is_negative() {
            return Err(AlphaError::Negative(value.to_string()));
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaOptions {
    pub threads: usize,
    pub max_faces: usize,
    /// Enumerate only α with `α(face 0) = +1` and double: `x(-α) = -x(α)`
    /// keeps the rank and, for even rank, the weight.
    pub sign_symmetry: bool,
}

impl Default for AlphaOptions {
    fn default() -> Self {
        AlphaOptions {
            threads: 1,
            max_faces: DEFAULT_MAX_FACES,
            sign_symmetry: false,
        }
    }
}

/// One weight class in the per-run breakdown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightClass {
    pub rank: usize,
    pub weight: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaOutcome {
    pub tait0: u64,
    /// Number of α vectors covered (always `2^|F|`).
    pub terms: u64,
    /// Laplacian rank → number of α with that rank.
    pub rank_histogram: BTreeMap<usize, u64>,
    /// Nonzero contributions by weight.
    pub contributions: Vec<WeightClass>,
}

#[derive(Debug, Clone)]
struct Tally {
    ranks: Vec<u64>,
    acc: WeightAccumulator,
}

impl Tally {
    fn new(vertices: usize) -> Self {
        Tally {
            ranks: vec![0; vertices + 1],
            acc: WeightAccumulator::for_vertices(vertices),
        }
    }

    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.ranks.iter_mut().zip(&other.ranks) {
            *a += b;
        }
        self.acc.merge(&other.acc);
    }

    fn doubled(&self) -> Tally {
        let mut out = self.clone();
        out.merge(self);
        out
    }
}

/// Sequential evaluation with default options.
pub fn tait0_alpha(g: &Triangulation) -> Result<AlphaOutcome, AlphaError> {
    tait0_alpha_with(g, &AlphaOptions::default())
}

/// Parallel evaluation on `threads` workers; the result is independent of the
/// thread count.
pub fn parallel_driver(g: &Triangulation, threads: usize) -> Result<AlphaOutcome, AlphaError> {
    tait0_alpha_with(
        g,
        &AlphaOptions {
            threads,
            ..AlphaOptions::default()
        },
    )
}

pub fn tait0_alpha_with(g: &Triangulation, opts: &AlphaOptions) -> Result<AlphaOutcome, AlphaError> {
    let faces = g.face_count();
    let max = opts.max_faces.min(MASK_LIMIT_FACES);
    if faces > max {
        return Err(AlphaError::BudgetExceeded { faces, max });
    }
    let n = g.vertex_count();
    let edge_faces: Vec<(u32, u32)> = (0..g.edge_count())
        .map(|e| {
            let (a, b) = g.edge_faces(e);
            (a as u32, b as u32)
        })
        .collect();

    // with sign symmetry, index i stands for mask i << 1 (face 0 has sign +1)
    let (count, shift) = if opts.sign_symmetry {
        (1u64 << (faces - 1), 1)
    } else {
        (1u64 << faces, 0)
    };
    let threads = opts.threads.max(1);
    let next = AtomicU64::new(0);

    let worker = || {
        let mut tally = Tally::new(n);
        let mut x = vec![F3::ZERO; edge_faces.len()];
        let mut lap = SymF3Matrix::zeros(n);
        let mut scratch = EliminationScratch::new();
        loop {
            let start = next.fetch_add(CHUNK, Ordering::Relaxed);
            if start >= count {
                break;
            }
            for i in start..(start + CHUNK).min(count) {
                edge_weights_from_mask(&edge_faces, i << shift, &mut x);
                laplacian_into(g, &x, &mut lap);
                let (rank, det) = scratch.certify(&lap);
                tally.ranks[rank] += 1;
                tally.acc.add(weight_from_rank(rank, det));
            }
        }
        tally
    };

    let mut total = Tally::new(n);
    if threads == 1 {
        total = worker();
    } else {
        let parts: Vec<Tally> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads).map(|_| s.spawn(worker)).collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for part in &parts {
            total.merge(part);
        }
    }
    if opts.sign_symmetry {
        total = total.doubled();
    }

    let value = total.acc.integer_value()?;
    let tait0 = value.to_u64().expect("Tait count bounded by 2^|F|");
    let rank_histogram = total
        .ranks
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(r, &c)| (r, c))
        .collect();
    let contributions = total
        .acc
        .classes()
        .map(|(w, count)| WeightClass {
            rank: 2 * w.halfrank() as usize,
            weight: w.to_string(),
            count,
        })
        .collect();
    Ok(AlphaOutcome {
        tait0,
        terms: 1u64 << faces,
        rank_histogram,
        contributions,
    })
}

//! Check suites that pit the fast path against the oracles. Each returns a
//! [`CheckReport`] with a case count and the first failing case, if any.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::alpharep::{contraction_witness, edge_weights_from_alpha, tait0_alpha_with, AlphaAssignment, AlphaError, AlphaOptions};
use crate::gf3linalg::{determinant, laplacian, legendre, principal_minor_det, sym_rank_certificate, SymF3Matrix, F3};
use crate::oracles::{
    check_gau_closed_form, check_gau_identity, check_minor_tree_sum, gau_closed_form, gau_exact, heawood_count,
    row_reduction_rank, spanning_tree_sum, tait_brute, CyclotomicInt, OracleError,
};
use crate::triangulation::{Triangulation, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Alpha(#[from] AlphaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub subject: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl CheckReport {
    fn new(check: &str, subject: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            subject: subject.into(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} [{}] {}: {} cases, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.check,
            self.subject,
            self.cases,
            self.failures
        )?;
        if let Some(first) = &self.first_failure {
            write!(f, "; first failure: {first}")?;
        }
        Ok(())
    }
}

pub fn random_symmetric(rng: &mut impl Rng, order: usize) -> SymF3Matrix {
    let values: Vec<F3> = (0..order * (order + 1) / 2)
        .map(|_| F3::new(rng.gen_range(-1..=1)))
        .collect();
    SymF3Matrix::from_upper_triangle(order, &values)
}

/// A uniformly random invertible matrix, row-major.
pub fn random_invertible(rng: &mut impl Rng, order: usize) -> Vec<F3> {
    loop {
        let p: Vec<F3> = (0..order * order).map(|_| F3::new(rng.gen_range(-1..=1))).collect();
        if !determinant(&mut p.clone(), order).is_zero() {
            return p;
        }
    }
}

fn masks(g: &Triangulation) -> impl Iterator<Item = (u64, Vec<F3>)> + '_ {
    let faces = g.face_count();
    (0..1u64 << faces).map(move |mask| (mask, edge_weights_from_alpha(g, &AlphaAssignment::from_mask(mask, faces))))
}

/// Closed form for every symmetric matrix of order `1..=max_order`.
pub fn gauss_exhaustive(max_order: usize) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new("gauss", format!("all symmetric matrices, order <= {max_order}"));
    for order in 1..=max_order {
        for c in SymF3Matrix::enumerate_all(order) {
            let ok = check_gau_closed_form(&c)?;
            report.record(ok, || format!("order {order}:\n{c}"));
        }
    }
    Ok(report)
}

/// Closed form on `samples` random matrices per order.
pub fn gauss_random(orders: &[usize], samples: u64, seed: u64) -> Result<CheckReport, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("gauss", format!("{samples} random matrices per order {orders:?}, seed {seed}"));
    for &order in orders {
        for _ in 0..samples {
            let c = random_symmetric(&mut rng, order);
            let ok = check_gau_closed_form(&c)?;
            report.record(ok, || format!("order {order}:\n{c}"));
        }
    }
    Ok(report)
}

/// Certificate rank against plain row reduction.
pub fn rank_oracle(max_order: usize, samples: u64, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("rank", format!("orders 1..={max_order}, {samples} samples each, seed {seed}"));
    for order in 1..=max_order {
        for _ in 0..samples {
            let c = random_symmetric(&mut rng, order);
            let cert = sym_rank_certificate(&c);
            let ok = cert.rank() == row_reduction_rank(&c) && principal_minor_det(&c, &cert.pivots) == cert.det;
            report.record(ok, || format!("{c}"));
        }
    }
    report
}

/// `Gau(PᵀCP) = Gau(C)` and the closed form is unchanged, for random `C`, `P`.
pub fn congruence(orders: &[usize], samples: u64, seed: u64) -> Result<CheckReport, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("congruence", format!("{samples} pairs per order {orders:?}, seed {seed}"));
    for &order in orders {
        for _ in 0..samples {
            let c = random_symmetric(&mut rng, order);
            let p = random_invertible(&mut rng, order);
            let a = c.congruent(&p);
            let ok = gau_exact(&a)? == gau_exact(&c)?
                && sym_rank_certificate(&a).rank() == sym_rank_certificate(&c).rank()
                && gau_closed_form(&a) == gau_closed_form(&c);
            report.record(ok, || format!("C =\n{c}PᵀCP =\n{a}"));
        }
    }
    Ok(report)
}

/// Every nonsingular principal minor of maximal order has the same Legendre
/// symbol, for every symmetric matrix of order `1..=max_order`.
pub fn minor_choice(max_order: usize) -> CheckReport {
    let mut report = CheckReport::new("minor-choice", format!("all symmetric matrices, order <= {max_order}"));
    for order in 1..=max_order {
        for c in SymF3Matrix::enumerate_all(order) {
            let cert = sym_rank_certificate(&c);
            let want = legendre(cert.det);
            let mut ok = true;
            for mask in 0u32..1 << order {
                if mask.count_ones() as usize != cert.rank() {
                    continue;
                }
                let s: Vec<usize> = (0..order).filter(|i| mask >> i & 1 == 1).collect();
                let d = principal_minor_det(&c, &s);
                if !d.is_zero() && legendre(d) != want {
                    ok = false;
                }
            }
            report.record(ok, || format!("{c}"));
        }
    }
    report
}

/// For odd rank, `Gau(L(x(α))) + Gau(L(x(-α))) = 0`, and the sum over all
/// odd-rank α vanishes.
pub fn odd_rank_cancellation(g: &Triangulation, subject: &str) -> Result<CheckReport, VerifyError> {
    let faces = g.face_count();
    let full = if faces == 64 { u64::MAX } else { (1u64 << faces) - 1 };
    let mut report = CheckReport::new("odd-rank", subject);
    let mut total = CyclotomicInt::ZERO;
    for (mask, x) in masks(g) {
        let l = laplacian(g, &x);
        if sym_rank_certificate(&l).rank().is_multiple_of(2) {
            continue;
        }
        let gau = gau_exact(&l)?;
        total += gau;
        let partner = mask ^ full;
        if mask < partner {
            let xn = edge_weights_from_alpha(g, &AlphaAssignment::from_mask(partner, faces));
            let pair = gau + gau_exact(&laplacian(g, &xn))?;
            report.record(pair.is_zero(), || format!("α mask {mask:#b}: pair sum {pair}"));
        }
    }
    report.record(total.is_zero(), || format!("sum over odd-rank α is {total}"));
    Ok(report)
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..1 << n).map(move |m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
}

/// Principal minor on `V \ W` equals the tree sum of `G/W`, for every α and
/// every nonempty `W`.
pub fn minor_tree(g: &Triangulation, subject: &str) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new("minor-tree", subject);
    for (mask, x) in masks(g) {
        for w in nonempty_subsets(g.vertex_count()) {
            let ok = check_minor_tree_sum(g, &x, &w)?;
            report.record(ok, || format!("α mask {mask:#b}, W = {w:?}"));
        }
    }
    Ok(report)
}

/// `G/W*` has a nonzero tree sum equal to the certificate minor, and no
/// contraction with more vertices does.
pub fn witness_minimality(g: &Triangulation, subject: &str) -> Result<CheckReport, VerifyError> {
    let n = g.vertex_count();
    let mut report = CheckReport::new("witness-minimality", subject);
    for (mask, x) in masks(g) {
        let witness = contraction_witness(g, &x);
        let s_star = spanning_tree_sum(&g.contract(&witness.w_star), &x)?;
        let mut ok = s_star == witness.tree_sum && !s_star.is_zero();
        for m in 0u64..1 << n {
            let w: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
            let h = g.contract(&w);
            if h.vertex_count() > witness.contracted_vertices && !spanning_tree_sum(&h, &x)?.is_zero() {
                ok = false;
            }
        }
        report.record(ok, || format!("α mask {mask:#b}, W* = {:?}", witness.w_star));
    }
    Ok(report)
}

/// Spin count times three equals the number of Tait colorings.
pub fn heawood(g: &Triangulation, subject: &str) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new("heawood", subject);
    let (spins, colorings) = (heawood_count(g)?, tait_brute(g)?);
    report.record(3 * spins == colorings, || format!("heawood {spins}, brute {colorings}"));
    Ok(report)
}

/// `Σ_α Gau(L(x(α))) / 3^|V|` equals the spin count.
pub fn gau_identity(g: &Triangulation, subject: &str) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new("gau-identity", subject);
    let id = check_gau_identity(g)?;
    report.record(id.holds, || format!("Σ Gau = {}, heawood {}", id.gau_sum, id.heawood));
    Ok(report)
}

/// The α-sum against the spin count and (when within budget) brute force.
pub fn theorem(g: &Triangulation, subject: &str, opts: &AlphaOptions, with_brute: bool) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new("theorem", subject);
    let alpha = tait0_alpha_with(g, opts)?.tait0;
    let spins = heawood_count(g)?;
    report.record(alpha == spins, || format!("alpha {alpha}, heawood {spins}"));
    if with_brute {
        let brute = tait_brute(g)?;
        report.record(3 * alpha == brute, || format!("alpha {alpha}, brute {brute}"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{generate, Family};

    #[test]
    fn small_suites_pass() {
        assert!(gauss_exhaustive(2).unwrap().passed());
        assert!(minor_choice(3).passed());
        assert!(rank_oracle(6, 50, 1).passed());
        assert!(congruence(&[2, 3, 4], 50, 7).unwrap().passed());
        let k4 = generate(Family::K4).unwrap();
        assert!(odd_rank_cancellation(&k4, "k4").unwrap().passed());
        assert!(witness_minimality(&k4, "k4").unwrap().passed());
        assert!(heawood(&k4, "k4").unwrap().passed());
    }

    #[test]
    fn report_records_first_failure() {
        let mut r = CheckReport::new("x", "y");
        r.record(true, || unreachable!());
        r.record(false, || "first".into());
        r.record(false, || "second".into());
        assert_eq!((r.cases, r.failures), (3, 2));
        assert_eq!(r.first_failure.as_deref(), Some("first"));
        assert!(r.to_string().starts_with("FAIL [x] y: 3 cases, 2 failures"));
    }

    #[test]
    fn random_invertible_is_invertible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for order in 1..6 {
            let p = random_invertible(&mut rng, order);
            assert!(!determinant(&mut p.clone(), order).is_zero());
        }
    }
}

//! Exact arithmetic over F3 and the symmetric linear algebra behind the
//! Gaussian-sum closed form: weighted Laplacians, rank certificates built from
//! principal pivots, and principal minors.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::triangulation::WeightedGraph;

/// An element of F3, stored as `-1`, `0` or `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct F3(i8);

impl F3 {
    pub const ZERO: F3 = F3(0);
    pub const ONE: F3 = F3(1);
    pub const MINUS_ONE: F3 = F3(-1);
    pub const ALL: [F3; 3] = [F3::MINUS_ONE, F3::ZERO, F3::ONE];

    /// Reduces any integer mod 3 into the balanced representation.
    pub const fn new(value: i64) -> F3 {
        match value.rem_euclid(3) {
            0 => F3(0),
            1 => F3(1),
            _ => F3(-1),
        }
    }

    pub const fn value(self) -> i8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse; every nonzero element of F3 is its own inverse.
    pub fn inv(self) -> Option<F3> {
        (!self.is_zero()).then_some(self)
    }

    #[inline]
    const fn normalize(s: i8) -> F3 {
        match s {
            2 => F3(-1),
            -2 => F3(1),
            s => F3(s),
        }
    }
}

impl From<i8> for F3 {
    fn from(v: i8) -> Self {
        F3::new(v as i64)
    }
}

impl fmt::Display for F3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for F3 {
    type Output = F3;
    #[inline]
    fn add(self, rhs: F3) -> F3 {
        F3::normalize(self.0 + rhs.0)
    }
}

impl Sub for F3 {
    type Output = F3;
    #[inline]
    fn sub(self, rhs: F3) -> F3 {
        F3::normalize(self.0 - rhs.0)
    }
}

impl Mul for F3 {
    type Output = F3;
    #[inline]
    fn mul(self, rhs: F3) -> F3 {
        F3(self.0 * rhs.0)
    }
}

impl Neg for F3 {
    type Output = F3;
    #[inline]
    fn neg(self) -> F3 {
        F3(-self.0)
    }
}

impl AddAssign for F3 {
    fn add_assign(&mut self, rhs: F3) {
        *self = *self + rhs;
    }
}

impl SubAssign for F3 {
    fn sub_assign(&mut self, rhs: F3) {
        *self = *self - rhs;
    }
}

impl MulAssign for F3 {
    fn mul_assign(&mut self, rhs: F3) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for F3 {
    fn sum<I: Iterator<Item = F3>>(iter: I) -> F3 {
        iter.fold(F3::ZERO, Add::add)
    }
}

impl std::iter::Product for F3 {
    fn product<I: Iterator<Item = F3>>(iter: I) -> F3 {
        iter.fold(F3::ONE, Mul::mul)
    }
}

/// Legendre symbol `(x/3)`. In the balanced representation it is the value itself.
pub fn legendre(x: F3) -> i8 {
    x.value()
}

/// Dense symmetric matrix over F3. Symmetry is maintained by every mutator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymF3Matrix {
    order: usize,
    entries: Vec<F3>,
}

impl SymF3Matrix {
    pub fn zeros(order: usize) -> Self {
        SymF3Matrix {
            order,
            entries: vec![F3::ZERO; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, F3::ONE);
        }
        m
    }

    /// Builds from row-major rows; `None` if ragged or not symmetric.
    pub fn from_rows(rows: &[Vec<F3>]) -> Option<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return None;
        }
        let entries: Vec<F3> = rows.iter().flatten().copied().collect();
        let m = SymF3Matrix { order, entries };
        (0..order)
            .all(|i| (0..i).all(|j| m.get(i, j) == m.get(j, i)))
            .then_some(m)
    }

    /// Fills the upper triangle (diagonal included) row by row from `values`.
    pub fn from_upper_triangle(order: usize, values: &[F3]) -> Self {
        assert_eq!(values.len(), order * (order + 1) / 2);
        let mut m = Self::zeros(order);
        let mut it = values.iter();
        for i in 0..order {
            for j in i..order {
                m.set(i, j, *it.next().unwrap());
            }
        }
        m
    }

    /// Every symmetric matrix of the given order, `3^(n(n+1)/2)` of them.
    pub fn enumerate_all(order: usize) -> impl Iterator<Item = SymF3Matrix> {
        let slots = order * (order + 1) / 2;
        let total = 3u64.pow(slots as u32);
        (0..total).map(move |mut code| {
            let values: Vec<F3> = (0..slots)
                .map(|_| {
                    let d = code % 3;
                    code /= 3;
                    F3::new(d as i64)
                })
                .collect();
            SymF3Matrix::from_upper_triangle(order, &values)
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F3 {
        self.entries[i * self.order + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F3) {
        self.entries[i * self.order + j] = v;
        self.entries[j * self.order + i] = v;
    }

    #[inline]
    fn add_to(&mut self, i: usize, j: usize, v: F3) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[F3] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn row_sum(&self, i: usize) -> F3 {
        (0..self.order).map(|j| self.get(i, j)).sum()
    }

    pub fn neg(&self) -> SymF3Matrix {
        SymF3Matrix {
            order: self.order,
            entries: self.entries.iter().map(|&x| -x).collect(),
        }
    }

    /// `Pᵀ C P` for a square `P` given row-major.
    pub fn congruent(&self, p: &[F3]) -> SymF3Matrix {
        let n = self.order;
        assert_eq!(p.len(), n * n);
        // cp = C P
        let mut cp = vec![F3::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                cp[i * n + j] = (0..n).map(|k| self.get(i, k) * p[k * n + j]).sum();
            }
        }
        let mut out = SymF3Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = (0..n).map(|k| p[k * n + i] * cp[k * n + j]).sum();
                out.set(i, j, v);
            }
        }
        out
    }

    /// `yᵀ C y`.
    pub fn quadratic_form(&self, y: &[F3]) -> F3 {
        let n = self.order;
        let mut acc = 0i64;
        for i in 0..n {
            if y[i].is_zero() {
                continue;
            }
            let row: i64 = y.iter().enumerate().map(|(j, &yj)| (self.get(i, j) * yj).value() as i64).sum();
            acc += row * y[i].value() as i64;
        }
        F3::new(acc)
    }
}

impl fmt::Display for SymF3Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|j| format!("{:>2}", self.get(i, j).value())).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Oriented incidence matrix `B` together with the edge weights `Λ`.
///
/// Column `e` carries `+1` at its tail and `-1` at its head, so `B Λ Bᵀ` is the
/// weighted Laplacian.
#[derive(Debug, Clone)]
pub struct OrientedIncidence {
    vertices: usize,
    columns: Vec<(usize, usize)>,
    weights: Vec<F3>,
}

impl OrientedIncidence {
    pub fn new<G: WeightedGraph>(g: &G, x: &[F3]) -> Self {
        let mut columns = Vec::new();
        let mut weights = Vec::new();
        for (u, v, id) in g.weighted_edges() {
            columns.push((u, v));
            weights.push(x[id]);
        }
        OrientedIncidence {
            vertices: g.vertex_count(),
            columns,
            weights,
        }
    }

    /// Entry `B[v][e]`.
    pub fn entry(&self, v: usize, e: usize) -> F3 {
        let (tail, head) = self.columns[e];
        if v == tail {
            F3::ONE
        } else if v == head {
            F3::MINUS_ONE
        } else {
            F3::ZERO
        }
    }

    pub fn column_sum(&self, e: usize) -> F3 {
        (0..self.vertices).map(|v| self.entry(v, e)).sum()
    }

    /// `B Λ Bᵀ` by straight matrix multiplication.
    pub fn laplacian(&self) -> SymF3Matrix {
        let n = self.vertices;
        let mut out = SymF3Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = (0..self.columns.len())
                    .map(|e| self.entry(i, e) * self.weights[e] * self.entry(j, e))
                    .sum();
                out.set(i, j, v);
            }
        }
        out
    }
}

/// Weighted Laplace–Kirchhoff matrix `L(G; x)`; `x` is indexed by edge id.
pub fn laplacian<G: WeightedGraph>(g: &G, x: &[F3]) -> SymF3Matrix {
    let mut l = SymF3Matrix::zeros(g.vertex_count());
    laplacian_into(g, x, &mut l);
    l
}

/// [`laplacian`] writing into an existing buffer of the right order.
pub fn laplacian_into<G: WeightedGraph>(g: &G, x: &[F3], out: &mut SymF3Matrix) {
    assert_eq!(out.order, g.vertex_count());
    out.entries.fill(F3::ZERO);
    for (u, v, id) in g.weighted_edges() {
        let w = x[id];
        if w.is_zero() {
            continue;
        }
        out.add_to(u, u, w);
        out.add_to(v, v, w);
        out.add_to(u, v, -w);
    }
}

/// A nonsingular principal submatrix of maximal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotCertificate {
    /// Principal index set `S`, ascending.
    pub pivots: Vec<usize>,
    /// Determinant of the principal submatrix on `S`; `1` when `S` is empty.
    pub det: F3,
}

impl PivotCertificate {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reusable buffers for [`sym_rank_certificate`] on a hot path.
#[derive(Debug, Default, Clone)]
pub struct EliminationScratch {
    work: Vec<F3>,
    active: Vec<usize>,
    pivots: Vec<usize>,
}

impl EliminationScratch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rank and pivot determinant of `c`; the pivot set is left in
    /// [`EliminationScratch::pivots`] in elimination order.
    pub fn certify(&mut self, c: &SymF3Matrix) -> (usize, F3) {
        let n = c.order();
        self.work.clear();
        self.work.extend_from_slice(c.entries());
        self.active.clear();
        self.active.extend(0..n);
        self.pivots.clear();
        let a = &mut self.work;
        let active = &mut self.active;
        let mut det = F3::ONE;

        loop {
            if let Some(pos) = active.iter().position(|&i| !a[i * n + i].is_zero()) {
                let i = active.remove(pos);
                let d = a[i * n + i];
                det *= d;
                self.pivots.push(i);
                let dinv = d; // self-inverse in F3
                for (x, &j) in active.iter().enumerate() {
                    let aji = a[j * n + i];
                    if aji.is_zero() {
                        continue;
                    }
                    let f = aji * dinv;
                    for &k in &active[x..] {
                        let v = a[j * n + k] - f * a[i * n + k];
                        a[j * n + k] = v;
                        a[k * n + j] = v;
                    }
                }
                continue;
            }
            // all remaining diagonals vanish: pivot on a 2x2 block [[0, c], [c, 0]]
            let mut block = None;
            'scan: for (x, &i) in active.iter().enumerate() {
                for (y, &j) in active.iter().enumerate().skip(x + 1) {
                    if !a[i * n + j].is_zero() {
                        block = Some((x, y));
                        break 'scan;
                    }
                }
            }
            let Some((x, y)) = block else { break };
            let j = active.remove(y);
            let i = active.remove(x);
            let cij = a[i * n + j];
            // det [[0, c], [c, 0]] = -c^2 = -1
            det *= F3::MINUS_ONE;
            self.pivots.push(i);
            self.pivots.push(j);
            // Schur complement: a_kl -= c (a_ki a_jl + a_kj a_il), since the
            // block inverse is [[0, c], [c, 0]]
            for (p, &k) in active.iter().enumerate() {
                let (aki, akj) = (a[k * n + i], a[k * n + j]);
                if aki.is_zero() && akj.is_zero() {
                    continue;
                }
                for &l in &active[p..] {
                    let delta = cij * (aki * a[j * n + l] + akj * a[i * n + l]);
                    let v = a[k * n + l] - delta;
                    a[k * n + l] = v;
                    a[l * n + k] = v;
                }
            }
        }
        (self.pivots.len(), det)
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

/// Rank of a symmetric matrix together with a principal index set realising it.
///
/// Symmetric elimination: take the first nonzero diagonal entry as a pivot;
/// when every remaining diagonal entry is zero take the first nonzero
/// off-diagonal pair as a 2x2 block, whose determinant is `-1`. Every step is a
/// congruence, so the chosen indices form a principal submatrix of the input
/// whose determinant is the product of the pivot determinants.
pub fn sym_rank_certificate(c: &SymF3Matrix) -> PivotCertificate {
    let mut scratch = EliminationScratch::new();
    let (_, det) = scratch.certify(c);
    let mut pivots = scratch.pivots;
    pivots.sort_unstable();
    PivotCertificate { pivots, det }
}

/// Determinant over F3 of the principal submatrix on `s` (empty set gives 1).
/// Plain Gaussian elimination with row swaps, independent of the symmetric
/// pivoting above.
pub fn principal_minor_det(c: &SymF3Matrix, s: &[usize]) -> F3 {
    let m = s.len();
    let mut a: Vec<F3> = Vec::with_capacity(m * m);
    for &i in s {
        for &j in s {
            a.push(c.get(i, j));
        }
    }
    determinant(&mut a, m)
}

/// Determinant of an `m x m` row-major matrix, destroying it.
pub(crate) fn determinant(a: &mut [F3], m: usize) -> F3 {
    let mut det = F3::ONE;
    for col in 0..m {
        let Some(p) = (col..m).find(|&r| !a[r * m + col].is_zero()) else {
            return F3::ZERO;
        };
        if p != col {
            for k in 0..m {
                a.swap(p * m + k, col * m + k);
            }
            det = -det;
        }
        let pivot = a[col * m + col];
        det *= pivot;
        for r in col + 1..m {
            let f = a[r * m + col] * pivot;
            if f.is_zero() {
                continue;
            }
            for k in col..m {
                let v = a[r * m + k] - f * a[col * m + k];
                a[r * m + k] = v;
            }
        }
    }
    det
}

//! Finite-dimensional harmonic theory for a declared inner product.
//!
//! Adjoints are taken with respect to per-bidegree Gram matrices. The harmonic spaces
//! `H_r` are built inductively from pseudo-Laplacians with Green-type inverses, and
//! compared with the spectral pages, the Bott-Chern/Aeppli groups and the star towers.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bca::{d_closed, ererbar_closed_space, ererbar_exact_space};
use crate::bicomplex::{Bidegree, DoubleComplex, Grid};
use crate::linalg::{Matrix, Rational, Subspace};
use crate::spectral::towers::{self, Op, Operators};

#[derive(Debug, Error)]
pub enum HodgeError {
    #[error("Gram matrix at {at} is not {expected}x{expected}")]
    GramShape { at: Bidegree, expected: usize },
    #[error("Gram matrix at {at} is not symmetric")]
    NotSymmetric { at: Bidegree },
    #[error("Gram matrix at {at} is not positive definite")]
    NotPositive { at: Bidegree },
    #[error("Gram matrix given at {0}, outside the grid")]
    OutsideGrid(Bidegree),
    #[error("bad Gram file: {0}")]
    Parse(String),
    #[error("{what} at {at} on page {r}: expected dimension {expected}, found {found}")]
    DimensionMismatch { what: &'static str, r: usize, at: Bidegree, expected: usize, found: usize },
    #[error("{what} at {at} on page {r} fails")]
    Check { what: &'static str, r: usize, at: Bidegree },
    #[error("page index must be at least 1")]
    PageIndex,
}

/// Per-bidegree Gram matrices; missing entries mean the declared basis is orthonormal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InnerProduct {
    grams: BTreeMap<Bidegree, Matrix>,
}

/// Signs of the pivots of a symmetric elimination: positive definite iff all are positive.
fn is_positive_definite(g: &Matrix) -> bool {
    let n = g.rows();
    let mut a = g.clone();
    for k in 0..n {
        let pivot = a[(k, k)].clone();
        if !pivot.is_positive() {
            return false;
        }
        for i in k + 1..n {
            let factor = &a[(i, k)] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let delta = &factor * &a[(k, j)];
                a[(i, j)] -= delta;
            }
        }
    }
    true
}

impl InnerProduct {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Checks shape, symmetry and positive definiteness of every Gram matrix.
    pub fn from_grams(c: &DoubleComplex, grams: BTreeMap<Bidegree, Matrix>) -> Result<Self, HodgeError> {
        for (&b, g) in &grams {
            if !c.grid().contains(b) {
                return Err(HodgeError::OutsideGrid(b));
            }
            let n = c.dim(b);
            if g.shape() != (n, n) {
                return Err(HodgeError::GramShape { at: b, expected: n });
            }
            if g.transpose() != *g {
                return Err(HodgeError::NotSymmetric { at: b });
            }
            if !is_positive_definite(g) {
                return Err(HodgeError::NotPositive { at: b });
            }
        }
        Ok(InnerProduct { grams })
    }

    /// Parses `{"p,q": [[entries]]}`.
    pub fn from_json(c: &DoubleComplex, text: &str) -> Result<Self, HodgeError> {
        let raw: BTreeMap<String, Matrix> = serde_json::from_str(text).map_err(|e| HodgeError::Parse(e.to_string()))?;
        let grams = raw
            .into_iter()
            .map(|(k, m)| {
                Bidegree::parse_key(&k).map(|b| (b, m)).ok_or_else(|| HodgeError::Parse(format!("bad bidegree key {k:?}")))
            })
            .collect::<Result<_, _>>()?;
        Self::from_grams(c, grams)
    }

    /// `I + MᵀM` with a random small integer `M` at every nonzero component.
    pub fn random(c: &DoubleComplex, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grams = c
            .grid()
            .bidegrees()
            .filter(|&b| c.dim(b) > 0)
            .map(|b| {
                let n = c.dim(b);
                let entries: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-2..=2)).collect();
                let m = Matrix::from_i64(n, n, &entries);
                (b, &Matrix::identity(n) + &(&m.transpose() * &m))
            })
            .collect();
        InnerProduct { grams }
    }

    pub fn gram(&self, b: Bidegree, n: usize) -> Matrix {
        self.grams.get(&b).cloned().unwrap_or_else(|| Matrix::identity(n))
    }

    pub fn inner(&self, b: Bidegree, x: &[Rational], y: &[Rational]) -> Rational {
        let g = self.gram(b, x.len());
        x.iter().zip(g.mul_vec(y)).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// `G_src⁻¹ · mᵀ · G_dst`, the adjoint of `m : src → dst`.
pub fn adjoint(m: &Matrix, gram_src: &Matrix, gram_dst: &Matrix) -> Matrix {
    let inv = gram_src.inverse().expect("Gram matrices are invertible");
    &(&inv * &m.transpose()) * gram_dst
}

/// Structure maps of a complex with adjoints for an inner product.
pub struct Metric<'a> {
    pub complex: &'a DoubleComplex,
    pub ip: &'a InnerProduct,
}

impl<'a> Metric<'a> {
    pub fn new(complex: &'a DoubleComplex, ip: &'a InnerProduct) -> Self {
        Metric { complex, ip }
    }

    fn gram(&self, b: Bidegree) -> Matrix {
        self.ip.gram(b, self.complex.dim(b))
    }

    /// Adjoint of `m : src → dst`.
    pub fn adjoint_between(&self, m: &Matrix, src: Bidegree, dst: Bidegree) -> Matrix {
        adjoint(m, &self.gram(src), &self.gram(dst))
    }

    /// Orthogonal projection onto `s` at `b`.
    pub fn projection(&self, s: &Subspace, b: Bidegree) -> Matrix {
        let n = s.ambient_dim();
        if s.is_zero() {
            return Matrix::zeros(n, n);
        }
        let basis = s.basis();
        let g = self.gram(b);
        let bt_g = &basis.transpose() * &g;
        let inner = (&bt_g * &basis).inverse().expect("Gram restricted to a subspace is invertible");
        &(&basis * &inner) * &bt_g
    }

    pub fn orthogonal_complement(&self, s: &Subspace, b: Bidegree) -> Subspace {
        s.orthogonal_complement(&self.gram(b))
    }

    pub fn orthogonal(&self, a: &Subspace, c: &Subspace, b: Bidegree) -> bool {
        a.vectors().iter().all(|x| c.vectors().iter().all(|y| self.ip.inner(b, x, y).is_zero()))
    }

    /// Inverse of a self-adjoint `l` on the orthogonal complement of its kernel, zero on
    /// the kernel.
    pub fn green_inverse(&self, l: &Matrix, b: Bidegree) -> Matrix {
        let n = l.rows();
        let kernel = l.kernel();
        let complement = self.orthogonal_complement(&kernel, b);
        if complement.is_zero() {
            return Matrix::zeros(n, n);
        }
        let g = self.gram(b);
        let basis = complement.basis();
        let lb = l * &basis;
        let lbt_g = &lb.transpose() * &g;
        let normal = (&lbt_g * &lb).inverse().expect("l is injective on the complement of its kernel");
        let off_kernel = &Matrix::identity(n) - &self.projection(&kernel, b);
        &(&(&basis * &normal) * &lbt_g) * &off_kernel
    }
}

impl Operators for Metric<'_> {
    fn dim(&self, b: Bidegree) -> usize {
        self.complex.dim(b)
    }

    fn op(&self, op: Op, b: Bidegree) -> Matrix {
        match op {
            Op::D1 => self.complex.d1(b).into_owned(),
            Op::D2 => self.complex.d2(b).into_owned(),
            Op::D1Adj => {
                let src = b.shift(-1, 0);
                self.adjoint_between(&self.complex.d1(src), src, b)
            }
            Op::D2Adj => {
                let src = b.shift(0, -1);
                self.adjoint_between(&self.complex.d2(src), src, b)
            }
        }
    }
}

/// Harmonic spaces and the operators that build them, for pages `1..=r_max`.
#[derive(Clone, Debug)]
pub struct HarmonicTower {
    pub grid: Grid,
    pub r_max: usize,
    /// `harmonic[r−1][b]`.
    harmonic: Vec<BTreeMap<Bidegree, Subspace>>,
    projections: Vec<BTreeMap<Bidegree, Matrix>>,
    /// `D_{r−1}` at `b`, mapping to `b + (r−1)(1,−1)`.
    d_lower: Vec<BTreeMap<Bidegree, Matrix>>,
    /// `d_r^{(ω)}` at `b`, mapping to `b + (r, 1−r)`.
    d_r: Vec<BTreeMap<Bidegree, Matrix>>,
    laplacians: Vec<BTreeMap<Bidegree, Matrix>>,
    /// `ker Δ̃^{(r)} = H_r` for every computed page.
    pub laplacian_route_agrees: bool,
}

impl HarmonicTower {
    pub fn harmonic(&self, r: usize, b: Bidegree) -> Subspace {
        self.harmonic[r - 1].get(&b).cloned().unwrap_or_else(|| Subspace::zero(0))
    }

    pub fn projection(&self, r: usize, b: Bidegree) -> &Matrix {
        &self.projections[r - 1][&b]
    }

    pub fn d_lower(&self, r: usize, b: Bidegree) -> &Matrix {
        &self.d_lower[r - 1][&b]
    }

    pub fn d_r(&self, r: usize, b: Bidegree) -> &Matrix {
        &self.d_r[r - 1][&b]
    }

    pub fn laplacian(&self, r: usize, b: Bidegree) -> &Matrix {
        &self.laplacians[r - 1][&b]
    }

    pub fn dims(&self, r: usize) -> Vec<Vec<usize>> {
        (0..self.grid.p_len as i32)
            .map(|p| (0..self.grid.q_len as i32).map(|q| self.harmonic(r, Bidegree::new(p, q)).dim()).collect())
            .collect()
    }
}

fn shift_by(b: Bidegree, k: i32, v: (i32, i32)) -> Bidegree {
    b.shift(k * v.0, k * v.1)
}

/// Builds `H_1, …, H_{r_max}` together with `p_r`, `D_{r−1}`, `d_r^{(ω)}` and `Δ̃^{(r)}`.
pub fn harmonic_tower(c: &DoubleComplex, ip: &InnerProduct, r_max: usize) -> HarmonicTower {
    let metric = Metric::new(c, ip);
    let grid = c.grid();
    let cells: Vec<Bidegree> = grid.bidegrees().collect();
    let zero_map = |rows: usize, cols: usize| Matrix::zeros(rows, cols);
    let dim = |b: Bidegree| c.dim(b);

    let first: BTreeMap<Bidegree, Matrix> = cells
        .par_iter()
        .map(|&b| {
            let down = b.shift(0, -1);
            let up = b.shift(0, 1);
            let l = &(&metric.op(Op::D2, down) * &metric.op(Op::D2Adj, b)) + &(&metric.op(Op::D2Adj, up) * &metric.op(Op::D2, b));
            (b, l)
        })
        .collect();
    let mut laplacians = vec![first];
    let mut harmonic: Vec<BTreeMap<Bidegree, Subspace>> =
        vec![laplacians[0].iter().map(|(&b, l)| (b, l.kernel())).collect()];
    let mut projections = Vec::new();
    let mut greens: Vec<BTreeMap<Bidegree, Matrix>> = Vec::new();
    let mut d_lower: Vec<BTreeMap<Bidegree, Matrix>> = Vec::new();
    let mut d_r: Vec<BTreeMap<Bidegree, Matrix>> = Vec::new();
    let mut agrees = true;
    let step = (1, -1);

    for r in 1..=r_max {
        let h = &harmonic[r - 1];
        let proj: BTreeMap<Bidegree, Matrix> = cells.par_iter().map(|&b| (b, metric.projection(&h[&b], b))).collect();
        let green: BTreeMap<Bidegree, Matrix> =
            cells.par_iter().map(|&b| (b, metric.green_inverse(&laplacians[r - 1][&b], b))).collect();
        greens.push(green);
        // D_{r−1} = F_1 ⋯ F_{r−1} with F_i = (Δ̃^{(i)})⁻¹ ∂̄* ∂, the last factor applied first.
        let lower: BTreeMap<Bidegree, Matrix> = cells
            .par_iter()
            .map(|&b| {
                let mut m = Matrix::identity(dim(b));
                for (k, i) in (1..r).rev().enumerate() {
                    let at = shift_by(b, k as i32, step);
                    let mid = at.shift(1, 0);
                    let to = shift_by(at, 1, step);
                    let factor = if grid.contains(to) {
                        &(&greens[i - 1][&to] * &metric.op(Op::D2Adj, mid)) * &metric.op(Op::D1, at)
                    } else {
                        zero_map(dim(to), dim(at))
                    };
                    m = &factor * &m;
                }
                (b, m)
            })
            .collect();
        let dr: BTreeMap<Bidegree, Matrix> = cells
            .par_iter()
            .map(|&b| {
                let mid = shift_by(b, r as i32 - 1, step);
                let tgt = mid.shift(1, 0);
                let m = if grid.contains(tgt) {
                    &(&(&proj[&tgt] * &metric.op(Op::D1, mid)) * &lower[&b]) * &proj[&b]
                } else {
                    zero_map(dim(tgt), dim(b))
                };
                (b, m)
            })
            .collect();
        if r < r_max {
            let next: BTreeMap<Bidegree, Subspace> = cells
                .par_iter()
                .map(|&b| {
                    let src = b.shift(-(r as i32), r as i32 - 1);
                    let mut rows: Vec<&Matrix> = Vec::new();
                    let forward = &dr[&b];
                    rows.push(forward);
                    let backward = if grid.contains(src) {
                        metric.adjoint_between(&dr[&src], src, b)
                    } else {
                        zero_map(0, dim(b))
                    };
                    rows.push(&backward);
                    let kill = Matrix::vstack(dim(b), &rows).kernel();
                    (b, kill.intersection(&h[&b]).expect("same ambient"))
                })
                .collect();
            // Δ̃^{(r+1)} = T T* + S* S + Δ̃^{(r)} with T = ∂ D_{r−1} p_r into b and S = p_r ∂ D_{r−1} out of b.
            let lap: BTreeMap<Bidegree, Matrix> = cells
                .par_iter()
                .map(|&b| {
                    let src = b.shift(-(r as i32), r as i32 - 1);
                    let mut l = laplacians[r - 1][&b].clone();
                    if grid.contains(src) {
                        let mid = shift_by(src, r as i32 - 1, step);
                        let t = &(&metric.op(Op::D1, mid) * &lower[&src]) * &proj[&src];
                        l = &l + &(&t * &metric.adjoint_between(&t, src, b));
                    }
                    let tgt = b.shift(r as i32, 1 - r as i32);
                    if grid.contains(tgt) {
                        let mid = shift_by(b, r as i32 - 1, step);
                        let s = &(&proj[&tgt] * &metric.op(Op::D1, mid)) * &lower[&b];
                        l = &l + &(&metric.adjoint_between(&s, b, tgt) * &s);
                    }
                    (b, l)
                })
                .collect();
            agrees &= cells.iter().all(|b| lap[b].kernel() == next[b]);
            laplacians.push(lap);
            harmonic.push(next);
        }
        projections.push(proj);
        d_lower.push(lower);
        d_r.push(dr);
    }
    HarmonicTower { grid, r_max, harmonic, projections, d_lower, d_r, laplacians, laplacian_route_agrees: agrees }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StarKind {
    /// `∂̄*α = 0, ∂*α = ∂̄*v_1, …`.
    ErStarClosed,
    /// The same with `∂` and `∂̄` exchanged.
    EbarStarClosed,
    /// Both star towers of length `r − 1`.
    ErErbarStarClosed,
}

pub fn star_tower_space(c: &DoubleComplex, ip: &InnerProduct, kind: StarKind, r: usize, b: Bidegree) -> Result<Subspace, HodgeError> {
    if r == 0 {
        return Err(HodgeError::PageIndex);
    }
    let m = Metric::new(c, ip);
    Ok(match kind {
        StarKind::ErStarClosed => towers::closed(&m, Op::D2Adj, Op::D1Adj, r, b),
        StarKind::EbarStarClosed => towers::closed(&m, Op::D1Adj, Op::D2Adj, r, b),
        StarKind::ErErbarStarClosed => towers::two_sided_closed(&m, Op::D1Adj, Op::D2Adj, r, b),
    })
}

/// `H_r ⊕ C_r ⊕ C*_r` at one bidegree.
#[derive(Clone, Debug)]
pub struct ThreeSpaces {
    pub harmonic: Subspace,
    /// `Im ∂̄ + ∂(E_{∂̄,r−1})`.
    pub exact: Subspace,
    /// `∂*(E_{∂̄*,r−1}) + Im ∂̄*`.
    pub coexact: Subspace,
}

/// Splits the component at `b` and checks orthogonality, the dimension count,
/// `exact = C_r` and `H_r ⊕ C_r = Z_r`.
pub fn three_space_decomposition(
    c: &DoubleComplex,
    ip: &InnerProduct,
    tower: &HarmonicTower,
    r: usize,
    b: Bidegree,
) -> Result<ThreeSpaces, HodgeError> {
    let m = Metric::new(c, ip);
    let harmonic = tower.harmonic(r, b);
    let exact = towers::exact(&m, Op::D2, Op::D1, r, b);
    let coexact = towers::exact(&m, Op::D2Adj, Op::D1Adj, r, b);
    let check = |ok: bool, what| if ok { Ok(()) } else { Err(HodgeError::Check { what, r, at: b }) };
    check(m.orthogonal(&harmonic, &exact, b), "H_r ⟂ C_r")?;
    check(m.orthogonal(&harmonic, &coexact, b), "H_r ⟂ C*_r")?;
    check(m.orthogonal(&exact, &coexact, b), "C_r ⟂ C*_r")?;
    let total = harmonic.dim() + exact.dim() + coexact.dim();
    if total != c.dim(b) {
        return Err(HodgeError::DimensionMismatch { what: "three-space sum", r, at: b, expected: c.dim(b), found: total });
    }
    check(exact == crate::spectral::towers::exact(c, Op::D2, Op::D1, r, b), "exact part = C_r")?;
    let z = towers::closed(c, Op::D2, Op::D1, r, b);
    check(harmonic.sum(&exact).expect("same ambient") == z && harmonic.dim() + exact.dim() == z.dim(), "H_r ⊕ C_r = Z_r")?;
    Ok(ThreeSpaces { harmonic, exact, coexact })
}

/// `H_{r,BC}` and `H_{r,A}` at `b`, with their dimensions checked against
/// `e_{r,BC}` and `e_{r,A}`.
pub fn bc_a_harmonic_spaces(c: &DoubleComplex, ip: &InnerProduct, r: usize, b: Bidegree) -> Result<(Subspace, Subspace), HodgeError> {
    if r == 0 {
        return Err(HodgeError::PageIndex);
    }
    let m = Metric::new(c, ip);
    let star = star_tower_space(c, ip, StarKind::ErErbarStarClosed, r, b)?;
    let bc = d_closed(c, b).intersection(&star).expect("same ambient");
    let coclosed = Matrix::vstack(c.dim(b), &[&m.op(Op::D1Adj, b), &m.op(Op::D2Adj, b)]).kernel();
    let closed = ererbar_closed_space(c, r, b).expect("r ≥ 1");
    let a = closed.intersection(&coclosed).expect("same ambient");
    let bc_basis = crate::bca::bott_chern_basis(c, r, b).expect("containments hold");
    let a_basis = crate::bca::aeppli_basis(c, r, b).expect("containments hold");
    if bc.dim() != bc_basis.dim() {
        return Err(HodgeError::DimensionMismatch { what: "H_{r,BC}", r, at: b, expected: bc_basis.dim(), found: bc.dim() });
    }
    if a.dim() != a_basis.dim() {
        return Err(HodgeError::DimensionMismatch { what: "H_{r,A}", r, at: b, expected: a_basis.dim(), found: a.dim() });
    }
    Ok((bc, a))
}

/// `E_r*Ē_r*`-closed elements are orthogonal to `E_rĒ_r`-exact ones.
pub fn star_orthogonality(c: &DoubleComplex, ip: &InnerProduct, r: usize, b: Bidegree) -> Result<bool, HodgeError> {
    let m = Metric::new(c, ip);
    let star = star_tower_space(c, ip, StarKind::ErErbarStarClosed, r, b)?;
    let exact = ererbar_exact_space(c, r, b).map_err(|_| HodgeError::PageIndex)?;
    Ok(m.orthogonal(&star, &exact, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_square, Shape, ZigzagShape};
    use crate::linalg::rat;
    use crate::spectral::page_dims;

    #[test]
    fn adjoint_is_an_involution_and_satisfies_the_defining_identity() {
        let m = Matrix::from_i64(2, 3, &[1, 2, 0, -1, 3, 4]);
        let gs = Matrix::from_i64(3, 3, &[2, 1, 0, 1, 2, 0, 0, 0, 1]);
        let gd = Matrix::from_i64(2, 2, &[3, 1, 1, 1]);
        let a = adjoint(&m, &gs, &gd);
        assert_eq!(adjoint(&a, &gd, &gs), m);
        assert_eq!(adjoint(&m, &Matrix::identity(3), &Matrix::identity(2)), m.transpose());
        let x = vec![rat(1), rat(-2), rat(3)];
        let y = vec![rat(2), rat(5)];
        let lhs: Rational = m.mul_vec(&x).iter().zip(gd.mul_vec(&y)).map(|(a, b)| a * b).sum();
        let rhs: Rational = x.iter().zip(gs.mul_vec(&a.mul_vec(&y))).map(|(a, b)| a * b).sum();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn positive_definiteness() {
        assert!(is_positive_definite(&Matrix::from_i64(2, 2, &[2, 1, 1, 2])));
        assert!(!is_positive_definite(&Matrix::from_i64(2, 2, &[1, 2, 2, 1])));
        let d = Shape::dot(Bidegree::new(0, 0)).build();
        let bad = BTreeMap::from([(Bidegree::new(0, 0), Matrix::from_i64(1, 1, &[-1]))]);
        assert!(matches!(InnerProduct::from_grams(&d, bad), Err(HodgeError::NotPositive { .. })));
    }

    #[test]
    fn length_two_zigzag_harmonics() {
        let z = Shape::Zigzag(ZigzagShape::new(Bidegree::new(0, 0), 1, false, true)).build();
        let t = harmonic_tower(&z, &InnerProduct::identity(), 2);
        let pages = page_dims(&z, 2);
        assert!(t.laplacian_route_agrees);
        assert_eq!(t.dims(1), pages.e_grid(1));
        assert_eq!(t.dims(2), pages.e_grid(2));
        assert_eq!(pages.e_sum(1), 2);
        assert_eq!(pages.e_sum(2), 0);
    }

    #[test]
    fn square_split_at_generator() {
        let sq = build_square(0, 0);
        let ip = InnerProduct::identity();
        let t = harmonic_tower(&sq, &ip, 1);
        let s = three_space_decomposition(&sq, &ip, &t, 1, Bidegree::new(0, 0)).unwrap();
        assert_eq!((s.harmonic.dim(), s.exact.dim(), s.coexact.dim()), (0, 0, 1));
    }

    #[test]
    fn metric_independent_dimensions() {
        let z = Shape::Zigzag(ZigzagShape::new(Bidegree::new(0, 2), 3, false, true)).build();
        let c = crate::bicomplex::direct_sum(&z, &build_square(0, 0));
        let ip = InnerProduct::random(&c, 3);
        let t = harmonic_tower(&c, &ip, 4);
        let pages = page_dims(&c, 4);
        assert!(t.laplacian_route_agrees);
        for r in 1..=4 {
            for b in c.grid().bidegrees() {
                assert_eq!(t.harmonic(r, b).dim(), pages.e(r, b), "r={r} {b}");
                three_space_decomposition(&c, &ip, &t, r, b).unwrap();
                if r <= 3 {
                    bc_a_harmonic_spaces(&c, &ip, r, b).unwrap();
                    assert!(star_orthogonality(&c, &ip, r, b).unwrap());
                }
            }
        }
    }
}

//! The spectral sequence of the column filtration.
//!
//! Page `r` at `(p,q)` is `Z_r / C_r` where `Z_r` (E_r-closed) and `C_r` (E_r-exact) are
//! computed from finite towers of linear equations. `d_r` has bidegree `(r, 1−r)`.

pub mod towers;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bicomplex::{de_rham_dims, total_complex, Bidegree, DoubleComplex, Grid};
use crate::linalg::{BlockSystem, LinalgError, Matrix, QuotientBasis, Rational, Subspace};

use towers::Op;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TowerKind {
    /// `Z_r`, the E_r-closed elements.
    ErClosed,
    /// `C_r`, the E_r-exact elements.
    ErExact,
    /// The conjugate closed space, with `d1` and `d2` exchanged.
    EbarClosed,
    EbarExact,
    /// Elements whose `d2`-image reaches zero in at most `s − 1` further steps.
    ReachesZero,
    /// As [`TowerKind::ReachesZero`] with `d1` and `d2` exchanged.
    ReachesZeroSwapped,
    /// Elements whose `d1`-image keeps running `s` times.
    Runs,
    RunsSwapped,
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("page index must be at least 1")]
    PageIndex,
    #[error("tower for a representative at {at} on page {r} has no solution")]
    Unsolvable { r: usize, at: Bidegree },
    #[error("image of a page-{r} representative at {at} is not closed on page {r}")]
    NotClosed { r: usize, at: Bidegree },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub fn tower_space(c: &DoubleComplex, kind: TowerKind, n: usize, b: Bidegree) -> Result<Subspace, SpectralError> {
    use TowerKind::*;
    if matches!(kind, ErClosed | ErExact | EbarClosed | EbarExact) && n == 0 {
        return Err(SpectralError::PageIndex);
    }
    Ok(match kind {
        ErClosed => towers::closed(c, Op::D2, Op::D1, n, b),
        ErExact => towers::exact(c, Op::D2, Op::D1, n, b),
        EbarClosed => towers::closed(c, Op::D1, Op::D2, n, b),
        EbarExact => towers::exact(c, Op::D1, Op::D2, n, b),
        ReachesZero => towers::reaches_zero(c, Op::D2, Op::D1, n, b),
        ReachesZeroSwapped => towers::reaches_zero(c, Op::D1, Op::D2, n, b),
        Runs => towers::runs(c, Op::D1, Op::D2, n, b),
        RunsSwapped => towers::runs(c, Op::D2, Op::D1, n, b),
    })
}

/// Per-page, per-bidegree dimensions of `E_r` and of its conjugate `Ē_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageTable {
    pub grid: Grid,
    pub r_max: usize,
    e: Vec<Vec<usize>>,
    ebar: Vec<Vec<usize>>,
}

impl PageTable {
    pub fn e(&self, r: usize, b: Bidegree) -> usize {
        self.grid.index(b).map_or(0, |i| self.e[r - 1][i])
    }

    pub fn ebar(&self, r: usize, b: Bidegree) -> usize {
        self.grid.index(b).map_or(0, |i| self.ebar[r - 1][i])
    }

    /// `Σ_{p+q=k} e_r^{p,q}`.
    pub fn e_total(&self, r: usize, k: i32) -> usize {
        self.grid.bidegrees().filter(|b| b.total() == k).map(|b| self.e(r, b)).sum()
    }

    pub fn e_sum(&self, r: usize) -> usize {
        self.e[r - 1].iter().sum()
    }

    pub fn ebar_sum(&self, r: usize) -> usize {
        self.ebar[r - 1].iter().sum()
    }

    /// Rows of `E_r` dimensions, one row per `p`.
    pub fn e_grid(&self, r: usize) -> Vec<Vec<usize>> {
        self.e[r - 1].chunks(self.grid.q_len.max(1)).map(<[usize]>::to_vec).collect()
    }

    pub fn ebar_grid(&self, r: usize) -> Vec<Vec<usize>> {
        self.ebar[r - 1].chunks(self.grid.q_len.max(1)).map(<[usize]>::to_vec).collect()
    }
}

fn page_dim(c: &DoubleComplex, close: Op, run: Op, r: usize, b: Bidegree) -> usize {
    let z = towers::closed(c, close, run, r, b);
    let e = towers::exact(c, close, run, r, b);
    z.quotient_dim(&e).expect("E_r-exact elements are E_r-closed")
}

/// `e_r^{p,q}` and `ē_r^{p,q}` for `1 ≤ r ≤ r_max`.
pub fn page_dims(c: &DoubleComplex, r_max: usize) -> PageTable {
    let grid = c.grid();
    let cells: Vec<Bidegree> = grid.bidegrees().collect();
    let compute = |close: Op, run: Op| -> Vec<Vec<usize>> {
        (1..=r_max)
            .map(|r| cells.par_iter().map(|&b| page_dim(c, close, run, r, b)).collect())
            .collect()
    };
    PageTable { grid, r_max, e: compute(Op::D2, Op::D1), ebar: compute(Op::D1, Op::D2) }
}

/// Page-`r` basis of `E_r` at `b`.
pub fn page_basis(c: &DoubleComplex, r: usize, b: Bidegree) -> QuotientBasis {
    QuotientBasis::new(towers::closed(c, Op::D2, Op::D1, r, b), towers::exact(c, Op::D2, Op::D1, r, b))
        .expect("E_r-exact elements are E_r-closed")
}

/// Page-`r` basis of `Ē_r` at `b`.
pub fn conjugate_page_basis(c: &DoubleComplex, r: usize, b: Bidegree) -> QuotientBasis {
    QuotientBasis::new(towers::closed(c, Op::D1, Op::D2, r, b), towers::exact(c, Op::D1, Op::D2, r, b))
        .expect("E_r-exact elements are E_r-closed")
}

/// One solution `(u_1, …, u_{r−1})` of the tower for `α ∈ Z_r(b)`, returned together with
/// `d1 u_{r−1}` (`d1 α` when `r = 1`).
pub fn tower_image(c: &DoubleComplex, r: usize, b: Bidegree, alpha: &[Rational]) -> Option<Vec<Rational>> {
    let at = |i: usize| b.shift(i as i32, -(i as i32));
    if r == 1 {
        if !c.d2(b).mul_vec(alpha).iter().all(num_traits::Zero::is_zero) {
            return None;
        }
        return Some(c.d1(b).mul_vec(alpha));
    }
    let dims: Vec<usize> = (0..r).map(|i| c.dim(at(i))).collect();
    let mut sys = BlockSystem::new(dims);
    sys.equation(c.dim(b.shift(0, 1)), vec![(0, c.d2(b).into_owned())]).ok()?;
    for i in 0..r - 1 {
        let target = at(i).shift(1, 0);
        sys.equation(c.dim(target), vec![(i, c.d1(at(i)).into_owned()), (i + 1, -&*c.d2(at(i + 1)))]).ok()?;
    }
    let sol = sys.solve_with(0, alpha)?;
    Some(c.d1(at(r - 1)).mul_vec(&sol[r - 1]))
}

/// `d_r : E_r^{p,q} → E_r^{p+r, q−r+1}` in the representative bases of [`page_basis`].
pub fn dr_matrix(c: &DoubleComplex, r: usize, b: Bidegree) -> Result<Matrix, SpectralError> {
    if r == 0 {
        return Err(SpectralError::PageIndex);
    }
    let source = page_basis(c, r, b);
    let tb = b.shift(r as i32, 1 - r as i32);
    let target = page_basis(c, r, tb);
    dr_between(c, r, b, &source, &target)
}

pub(crate) fn dr_between(
    c: &DoubleComplex,
    r: usize,
    b: Bidegree,
    source: &QuotientBasis,
    target: &QuotientBasis,
) -> Result<Matrix, SpectralError> {
    let mut columns = Vec::with_capacity(source.dim());
    for alpha in &source.reps {
        let y = tower_image(c, r, b, alpha).ok_or(SpectralError::Unsolvable { r, at: b })?;
        columns.push(target.class_of(&y).ok_or(SpectralError::NotClosed { r, at: b })?);
    }
    Ok(Matrix::from_columns(target.dim(), &columns))
}

/// Pages computed as cohomology of the previous page.
///
/// Keeps, per bidegree, a closed space and an exact space. Page `r+1` keeps the closed
/// elements whose `d_r`-image is exact on page `r`, and enlarges the exact space by all
/// `d_r`-images. Only dimensions of `E_r` are filled in; `Ē_r` is obtained the same way
/// on the swapped complex.
pub fn iterated_pages_oracle(c: &DoubleComplex, r_max: usize) -> Result<PageTable, SpectralError> {
    let e = iterate(c, r_max)?;
    let swapped = c.swapped();
    let ebar_t = iterate(&swapped, r_max)?;
    let grid = c.grid();
    let sg = swapped.grid();
    let ebar = ebar_t
        .iter()
        .map(|page| grid.bidegrees().map(|b| page[sg.index(Bidegree::new(b.q, b.p)).expect("in grid")]).collect())
        .collect();
    Ok(PageTable { grid, r_max, e, ebar })
}

fn iterate(c: &DoubleComplex, r_max: usize) -> Result<Vec<Vec<usize>>, SpectralError> {
    let grid = c.grid();
    let cells: Vec<Bidegree> = grid.bidegrees().collect();
    let mut closed: Vec<Subspace> = cells.par_iter().map(|&b| c.d2(b).kernel()).collect();
    let mut exact: Vec<Subspace> = cells.par_iter().map(|&b| c.d2(b.shift(0, -1)).image()).collect();
    let mut dims = Vec::with_capacity(r_max);
    for r in 1..=r_max {
        dims.push(closed.iter().zip(&exact).map(|(z, b)| z.dim() - b.dim()).collect());
        if r == r_max {
            break;
        }
        let images: Vec<Vec<Vec<Rational>>> = cells
            .par_iter()
            .zip(closed.par_iter())
            .map(|(&b, z)| {
                z.vectors()
                    .iter()
                    .map(|v| tower_image(c, r, b, v).ok_or(SpectralError::Unsolvable { r, at: b }))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let next_closed: Vec<Subspace> = cells
            .par_iter()
            .enumerate()
            .map(|(i, &b)| {
                let tb = b.shift(r as i32, 1 - r as i32);
                let z = &closed[i];
                let target_exact = match grid.index(tb) {
                    Some(j) => exact[j].clone(),
                    None => Subspace::zero(0),
                };
                let map = Matrix::from_columns(target_exact.ambient_dim(), &images[i]);
                let keep = Subspace::preimage(&map, &target_exact)?;
                Ok(Subspace::span(c.dim(b), keep.vectors().iter().map(|k| z.basis().mul_vec(k))))
            })
            .collect::<Result<_, LinalgError>>()?;
        let next_exact: Vec<Subspace> = cells
            .par_iter()
            .enumerate()
            .map(|(j, &tb)| {
                let sb = tb.shift(-(r as i32), r as i32 - 1);
                match grid.index(sb) {
                    Some(i) => Subspace::span(c.dim(tb), exact[j].vectors().iter().chain(&images[i]).cloned()),
                    None => exact[j].clone(),
                }
            })
            .collect();
        closed = next_closed;
        exact = next_exact;
    }
    Ok(dims)
}

/// Smallest `r` such that every `d_s` with `s ≥ r` vanishes, restricted to columns
/// `p ≤ max_p` when given.
pub fn degeneration_page_within(c: &DoubleComplex, max_p: Option<i32>) -> usize {
    let r_max = c.grid().default_rmax() + 1;
    let table = page_dims(c, r_max);
    let relevant: Vec<Bidegree> =
        c.grid().bidegrees().filter(|b| max_p.is_none_or(|m| b.p <= m)).collect();
    (1..=r_max)
        .find(|&r| relevant.iter().all(|&b| table.e(r, b) == table.e(r_max, b)))
        .expect("the last page is stable")
}

/// Smallest `r` with `E_r = E_∞`.
pub fn degeneration_page(c: &DoubleComplex) -> usize {
    degeneration_page_within(c, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EinftyReport {
    /// `(k, Σ_{p+q=k} e_∞^{p,q}, b_k)`.
    pub degrees: Vec<(i32, usize, usize)>,
    pub holds: bool,
}

/// Compares `Σ_{p+q=k} e_∞^{p,q}` with the Betti numbers of the total complex.
pub fn einfty_check(c: &DoubleComplex) -> EinftyReport {
    let r_inf = c.grid().default_rmax();
    let table = page_dims(c, r_inf);
    let betti = de_rham_dims(&total_complex(c));
    let degrees: Vec<(i32, usize, usize)> = c
        .grid()
        .total_degrees()
        .map(|k| (k, table.e_total(r_inf, k), betti[k as usize]))
        .collect();
    let holds = degrees.iter().all(|(_, e, b)| e == b);
    EinftyReport { degrees, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_square, Shape, ZigzagShape};

    #[test]
    fn square_has_no_closed_generator() {
        let sq = build_square(0, 0);
        assert!(tower_space(&sq, TowerKind::ErClosed, 1, Bidegree::new(0, 0)).unwrap().is_zero());
        let t = page_dims(&sq, 3);
        assert!((1..=3).all(|r| t.e_sum(r) == 0 && t.ebar_sum(r) == 0));
    }

    #[test]
    fn length_two_zigzag() {
        let z = Shape::Zigzag(ZigzagShape::new(Bidegree::new(0, 0), 1, false, true)).build();
        let t = page_dims(&z, 3);
        assert_eq!(t.e(1, Bidegree::new(0, 0)), 1);
        assert_eq!(t.e(1, Bidegree::new(1, 0)), 1);
        assert_eq!(t.e_sum(2), 0);
        let d1 = dr_matrix(&z, 1, Bidegree::new(0, 0)).unwrap();
        assert_eq!(d1.shape(), (1, 1));
        assert!(!d1.is_zero());
    }

    #[test]
    fn dot_pages() {
        let d = Shape::dot(Bidegree::new(1, 1)).build();
        let t = page_dims(&d, 4);
        assert!((1..=4).all(|r| t.e(r, Bidegree::new(1, 1)) == 1));
        assert_eq!(iterated_pages_oracle(&d, 4).unwrap(), t);
        assert_eq!(degeneration_page(&d), 1);
        assert!(einfty_check(&d).holds);
    }

    #[test]
    fn page_index_zero_is_rejected() {
        let d = Shape::dot(Bidegree::new(0, 0)).build();
        assert!(matches!(tower_space(&d, TowerKind::ErClosed, 0, Bidegree::new(0, 0)), Err(SpectralError::PageIndex)));
        assert!(tower_space(&d, TowerKind::Runs, 0, Bidegree::new(0, 0)).unwrap().is_full());
    }
}

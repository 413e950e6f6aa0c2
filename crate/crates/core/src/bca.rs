//! Higher-page Bott-Chern and Aeppli cohomology and the page-`(r−1)` ∂∂̄ criteria.
//!
//! `E_{r,BC} = (ker d1 ∩ ker d2) / D_r` and `E_{r,A} = Z_{r,two-sided} / (Im d1 + Im d2)`,
//! where `D_r` and the two-sided closed space are the two-sided towers of
//! [`crate::spectral::towers`].

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bicomplex::{total_complex, Bidegree, DoubleComplex, Grid, TotalComplex};
use crate::linalg::{LinalgError, Matrix, QuotientBasis, Rational, Subspace};
use crate::spectral::towers::{self, Op};
use crate::spectral::{page_dims, PageTable};
use crate::zigzag::{structure_verdict, ShapeInventory};

#[derive(Debug, Error)]
pub enum BcaError {
    #[error("page index must be at least 1")]
    PageIndex,
    #[error("containment failed at {at} on page {r}: {source}")]
    Containment { r: usize, at: Bidegree, source: LinalgError },
    #[error("canonical map {map} is not defined at {at} on page {r}")]
    Undefined { r: usize, at: Bidegree, map: &'static str },
    #[error("criteria disagree on page {r}: {summary}")]
    Inconsistent { r: usize, summary: String, verdict: Box<PageDdbarVerdict> },
}

/// `E_rĒ_r`-closed elements at `b`.
pub fn ererbar_closed_space(c: &DoubleComplex, r: usize, b: Bidegree) -> Result<Subspace, BcaError> {
    if r == 0 {
        return Err(BcaError::PageIndex);
    }
    Ok(towers::two_sided_closed(c, Op::D1, Op::D2, r, b))
}

/// `E_rĒ_r`-exact elements at `b`.
pub fn ererbar_exact_space(c: &DoubleComplex, r: usize, b: Bidegree) -> Result<Subspace, BcaError> {
    if r == 0 {
        return Err(BcaError::PageIndex);
    }
    Ok(towers::two_sided_exact(c, Op::D1, Op::D2, r, b))
}

/// `ker d1 ∩ ker d2` at `b`.
pub fn d_closed(c: &DoubleComplex, b: Bidegree) -> Subspace {
    let both = Matrix::vstack(c.dim(b), &[&c.d1(b), &c.d2(b)]);
    both.kernel()
}

/// `Im d1 + Im d2` at `b`.
pub fn d1_plus_d2_images(c: &DoubleComplex, b: Bidegree) -> Subspace {
    let from1 = b.shift(-1, 0);
    let from2 = b.shift(0, -1);
    Matrix::hstack(c.dim(b), &[&c.d1(from1), &c.d2(from2)]).image()
}

pub fn bott_chern_basis(c: &DoubleComplex, r: usize, b: Bidegree) -> Result<QuotientBasis, BcaError> {
    let exact = ererbar_exact_space(c, r, b)?;
    QuotientBasis::new(d_closed(c, b), exact).map_err(|source| BcaError::Containment { r, at: b, source })
}

pub fn aeppli_basis(c: &DoubleComplex, r: usize, b: Bidegree) -> Result<QuotientBasis, BcaError> {
    let closed = ererbar_closed_space(c, r, b)?;
    QuotientBasis::new(closed, d1_plus_d2_images(c, b)).map_err(|source| BcaError::Containment { r, at: b, source })
}

/// Dimensions `e_{r,BC}^{p,q}` and `e_{r,A}^{p,q}` for `1 ≤ r ≤ r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BcaTable {
    pub grid: Grid,
    pub r_max: usize,
    bc: Vec<Vec<usize>>,
    a: Vec<Vec<usize>>,
}

impl BcaTable {
    pub fn bc(&self, r: usize, b: Bidegree) -> usize {
        self.grid.index(b).map_or(0, |i| self.bc[r - 1][i])
    }

    pub fn a(&self, r: usize, b: Bidegree) -> usize {
        self.grid.index(b).map_or(0, |i| self.a[r - 1][i])
    }

    /// `e_{r,BC}^k`.
    pub fn bc_total(&self, r: usize, k: i32) -> usize {
        self.grid.bidegrees().filter(|b| b.total() == k).map(|b| self.bc(r, b)).sum()
    }

    /// `e_{r,A}^k`.
    pub fn a_total(&self, r: usize, k: i32) -> usize {
        self.grid.bidegrees().filter(|b| b.total() == k).map(|b| self.a(r, b)).sum()
    }

    pub fn bc_sum(&self, r: usize) -> usize {
        self.bc[r - 1].iter().sum()
    }

    pub fn a_sum(&self, r: usize) -> usize {
        self.a[r - 1].iter().sum()
    }

    pub fn bc_grid(&self, r: usize) -> Vec<Vec<usize>> {
        self.bc[r - 1].chunks(self.grid.q_len.max(1)).map(<[usize]>::to_vec).collect()
    }

    pub fn a_grid(&self, r: usize) -> Vec<Vec<usize>> {
        self.a[r - 1].chunks(self.grid.q_len.max(1)).map(<[usize]>::to_vec).collect()
    }
}

pub fn bca_dims(c: &DoubleComplex, r_max: usize) -> Result<BcaTable, BcaError> {
    let grid = c.grid();
    let cells: Vec<Bidegree> = grid.bidegrees().collect();
    let mut bc = Vec::with_capacity(r_max);
    let mut a = Vec::with_capacity(r_max);
    for r in 1..=r_max {
        let row: Vec<(usize, usize)> = cells
            .par_iter()
            .map(|&b| Ok((bott_chern_basis(c, r, b)?.dim(), aeppli_basis(c, r, b)?.dim())))
            .collect::<Result<_, BcaError>>()?;
        bc.push(row.iter().map(|x| x.0).collect());
        a.push(row.iter().map(|x| x.1).collect());
    }
    Ok(BcaTable { grid, r_max, bc, a })
}

/// The maps induced by the identity between the cohomologies at one bidegree.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalMaps {
    pub r: usize,
    pub at: Bidegree,
    pub bc_to_e: Matrix,
    pub bc_to_ebar: Matrix,
    pub bc_to_a: Matrix,
    pub e_to_a: Matrix,
    pub ebar_to_a: Matrix,
    pub bc_to_dr: Matrix,
    /// Projection of de Rham classes of degree `p+q` onto the `(p,q)` component.
    pub dr_to_a: Matrix,
    /// `E_{1,BC} → E_{r,BC}` is onto.
    pub bc_surjection: bool,
    /// `E_{r,A} → E_{1,A}` is one-to-one.
    pub a_injection: bool,
    /// The three routes from `E_{r,BC}` to `E_{r,A}` agree.
    pub commutes: bool,
}

impl CanonicalMaps {
    pub fn bc_to_a_is_iso(&self) -> bool {
        self.bc_to_a.is_square() && self.bc_to_a.rank() == self.bc_to_a.rows()
    }

    pub fn bc_to_a_is_injective(&self) -> bool {
        self.bc_to_a.rank() == self.bc_to_a.cols()
    }
}

fn de_rham_basis(t: &TotalComplex, k: i32) -> QuotientBasis {
    let k = k as usize;
    QuotientBasis::new(t.cocycles(k), t.coboundaries(k)).expect("coboundaries are cocycles")
}

fn canonical_maps_with(c: &DoubleComplex, t: &TotalComplex, r: usize, b: Bidegree) -> Result<CanonicalMaps, BcaError> {
    let undefined = |map| BcaError::Undefined { r, at: b, map };
    let bc = bott_chern_basis(c, r, b)?;
    let a = aeppli_basis(c, r, b)?;
    let e = crate::spectral::page_basis(c, r, b);
    let ebar = crate::spectral::conjugate_page_basis(c, r, b);
    let dr = de_rham_basis(t, b.total());
    let bc_to_e = e.induced_from(&bc).ok_or_else(|| undefined("BC → E_r"))?;
    let bc_to_ebar = ebar.induced_from(&bc).ok_or_else(|| undefined("BC → Ē_r"))?;
    let bc_to_a = a.induced_from(&bc).ok_or_else(|| undefined("BC → A"))?;
    let e_to_a = a.induced_from(&e).ok_or_else(|| undefined("E_r → A"))?;
    let ebar_to_a = a.induced_from(&ebar).ok_or_else(|| undefined("Ē_r → A"))?;
    let bc_to_dr = dr.induced_by(&bc, |v| t.embed(b, v)).ok_or_else(|| undefined("BC → dR"))?;
    let dr_to_a = a.induced_by(&dr, |v| t.component(b, v)).ok_or_else(|| undefined("dR → A"))?;
    let commutes =
        &e_to_a * &bc_to_e == bc_to_a && &ebar_to_a * &bc_to_ebar == bc_to_a && &dr_to_a * &bc_to_dr == bc_to_a;
    let (bc_surjection, a_injection) = if r == 1 {
        (true, true)
    } else {
        let bc1 = bott_chern_basis(c, 1, b)?;
        let a1 = aeppli_basis(c, 1, b)?;
        let onto = bc.induced_from(&bc1).ok_or_else(|| undefined("E_{1,BC} → E_{r,BC}"))?;
        let into = a1.induced_from(&a).ok_or_else(|| undefined("E_{r,A} → E_{1,A}"))?;
        (onto.rank() == bc.dim(), into.rank() == a.dim())
    };
    Ok(CanonicalMaps {
        r,
        at: b,
        bc_to_e,
        bc_to_ebar,
        bc_to_a,
        e_to_a,
        ebar_to_a,
        bc_to_dr,
        dr_to_a,
        bc_surjection,
        a_injection,
        commutes,
    })
}

pub fn canonical_maps(c: &DoubleComplex, r: usize, b: Bidegree) -> Result<CanonicalMaps, BcaError> {
    canonical_maps_with(c, &total_complex(c), r, b)
}

/// Canonical maps at every bidegree of the grid.
pub fn all_canonical_maps(c: &DoubleComplex, r: usize) -> Result<Vec<CanonicalMaps>, BcaError> {
    let t = total_complex(c);
    let cells: Vec<Bidegree> = c.grid().bidegrees().collect();
    cells.par_iter().map(|&b| canonical_maps_with(c, &t, r, b)).collect()
}

/// Which exactness notions a witness separates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    /// d-closed and `E_r`-exact but not d-exact.
    ErExactNotDExact,
    /// d-closed and `Ē_r`-exact but not d-exact.
    EbarExactNotDExact,
    /// d-exact but not `E_rĒ_r`-exact.
    DExactNotErErbarExact,
    /// `E_r`-exact, `Ē_r`-exact and d-exact but not `E_rĒ_r`-exact.
    ExactNotErErbarExact,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub at: Bidegree,
    pub variant: Variant,
    pub kind: WitnessKind,
    #[serde(serialize_with = "serialize_vector")]
    pub vector: Vec<Rational>,
}

fn serialize_vector<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::linalg::format_rational))
}

#[derive(Clone, Debug, Serialize)]
pub struct PageDdbarVerdict {
    pub r: usize,
    pub verdict: bool,
    /// (B) `E_{r,BC} → E_{r,A}` is an isomorphism.
    pub iso: bool,
    /// (C) `e_{r,BC}^k = e_{r,A}^k` for all `k`.
    pub equal_dims: bool,
    /// (D) `E_{r,BC} → E_{r,A}` is injective.
    pub injective: bool,
    /// (E) on d-closed elements, d-exact, `E_r`-exact, `Ē_r`-exact and `E_rĒ_r`-exact agree.
    pub exactness: bool,
    /// (F) `Im(d1 d2) = d1(Z_r)` and `C_r ∩ ker d = Im d` everywhere.
    pub identities: bool,
    /// From a unique shape inventory, when one was supplied.
    pub structure: Option<bool>,
    pub witness: Option<Witness>,
    /// Bidegrees where (B) fails.
    pub failing_bidegrees: Vec<Bidegree>,
}

impl PageDdbarVerdict {
    /// Named sub-verdicts in a fixed order.
    pub fn criteria(&self) -> Vec<(&'static str, bool)> {
        let mut out = vec![
            ("B", self.iso),
            ("C", self.equal_dims),
            ("D", self.injective),
            ("E", self.exactness),
            ("F", self.identities),
        ];
        if let Some(s) = self.structure {
            out.push(("structure", s));
        }
        out
    }

    pub fn consistent(&self) -> bool {
        self.criteria().iter().all(|&(_, v)| v == self.verdict)
    }
}

struct ExactnessCheck {
    holds: bool,
    witness: Option<Witness>,
}

fn exactness_at(c: &DoubleComplex, t: &TotalComplex, r: usize, b: Bidegree) -> Result<ExactnessCheck, BcaError> {
    let closed = d_closed(c, b);
    let meet = |s: Subspace| s.intersection(&closed).expect("same ambient");
    let d_exact = t.pure_exact(b);
    let er = meet(towers::exact(c, Op::D2, Op::D1, r, b));
    let ebar = meet(towers::exact(c, Op::D1, Op::D2, r, b));
    let two_sided = ererbar_exact_space(c, r, b)?;
    let outside = |big: &Subspace, small: &Subspace| big.vectors().iter().find(|v| !small.contains_vector(v)).cloned();
    let found = outside(&er, &d_exact)
        .map(|v| (WitnessKind::ErExactNotDExact, v))
        .or_else(|| outside(&ebar, &d_exact).map(|v| (WitnessKind::EbarExactNotDExact, v)))
        .or_else(|| {
            let all_three = er.intersection(&ebar).and_then(|s| s.intersection(&d_exact)).expect("same ambient");
            outside(&all_three, &two_sided).map(|v| (WitnessKind::ExactNotErErbarExact, v))
        })
        .or_else(|| outside(&d_exact, &two_sided).map(|v| (WitnessKind::DExactNotErErbarExact, v)));
    let holds = er == d_exact && ebar == d_exact && two_sided == d_exact;
    Ok(ExactnessCheck { holds, witness: found.map(|(kind, vector)| Witness { at: b, variant: Variant::Complex, kind, vector }) })
}

fn identities_at(c: &DoubleComplex, t: &TotalComplex, r: usize, b: Bidegree) -> bool {
    let from = b.shift(-1, 0);
    let d1z = towers::closed(c, Op::D2, Op::D1, r, from).map(&c.d1(from)).expect("shapes agree");
    let corner = b.shift(-1, -1);
    let ddbar = (&*c.d1(corner.shift(0, 1)) * &*c.d2(corner)).image();
    let closed_exact = towers::exact(c, Op::D2, Op::D1, r, b).intersection(&d_closed(c, b)).expect("same ambient");
    d1z == ddbar && closed_exact == t.pure_exact(b)
}

/// Page-`(r−1)` ∂∂̄ verdict by criteria (B)–(F), plus the structure criterion when a unique
/// inventory is supplied. Disagreement between criteria is an error.
pub fn page_ddbar_verdict(
    c: &DoubleComplex,
    r: usize,
    inventory: Option<&ShapeInventory>,
) -> Result<PageDdbarVerdict, BcaError> {
    if r == 0 {
        return Err(BcaError::PageIndex);
    }
    let verdict = evaluate(c, r, inventory)?;
    if verdict.consistent() {
        Ok(verdict)
    } else {
        let summary = verdict.criteria().iter().map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(", ");
        Err(BcaError::Inconsistent { r, summary, verdict: Box::new(verdict) })
    }
}

struct OneSided {
    maps: Vec<CanonicalMaps>,
    exactness: bool,
    witness: Option<Witness>,
    identities: bool,
}

fn one_sided(c: &DoubleComplex, r: usize) -> Result<OneSided, BcaError> {
    let t = total_complex(c);
    let cells: Vec<Bidegree> = c.grid().bidegrees().collect();
    let maps: Vec<CanonicalMaps> = cells.par_iter().map(|&b| canonical_maps_with(c, &t, r, b)).collect::<Result<_, _>>()?;
    let checks: Vec<ExactnessCheck> = cells.par_iter().map(|&b| exactness_at(c, &t, r, b)).collect::<Result<_, _>>()?;
    let exactness = checks.iter().all(|x| x.holds);
    let witness = checks.into_iter().find_map(|x| x.witness);
    let identities = cells.par_iter().all(|&b| identities_at(c, &t, r, b));
    Ok(OneSided { maps, exactness, witness, identities })
}

/// Where a witness vector lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Complex,
    /// The reflected dual.
    Dual,
    /// The complex with `d1` and `d2` exchanged.
    Swapped,
    SwappedDual,
}

/// Evaluates every criterion without requiring agreement.
///
/// (B) and (C) are read on `c`. (D), (E) and (F) are read on `c`, its reflected dual and
/// the `d1`/`d2` swaps of both, which supplies the duality and conjugation symmetry that a
/// general complex lacks.
pub fn evaluate(c: &DoubleComplex, r: usize, inventory: Option<&ShapeInventory>) -> Result<PageDdbarVerdict, BcaError> {
    if r == 0 {
        return Err(BcaError::PageIndex);
    }
    let dual = c.reflected_dual();
    let variants = [
        (Variant::Complex, c.clone()),
        (Variant::Dual, dual.clone()),
        (Variant::Swapped, c.swapped()),
        (Variant::SwappedDual, dual.swapped()),
    ];
    let sides: Vec<(Variant, OneSided)> =
        variants.iter().map(|(v, x)| Ok((*v, one_sided(x, r)?))).collect::<Result<_, BcaError>>()?;
    let own = &sides[0].1;
    let failing_bidegrees: Vec<Bidegree> = own.maps.iter().filter(|m| !m.bc_to_a_is_iso()).map(|m| m.at).collect();
    let iso = failing_bidegrees.is_empty();
    let injective = sides.iter().all(|(_, s)| s.maps.iter().all(CanonicalMaps::bc_to_a_is_injective));
    let table = bca_dims(c, r)?;
    let equal_dims = c.grid().total_degrees().all(|k| table.bc_total(r, k) == table.a_total(r, k));
    let witness = sides.iter().find_map(|(v, s)| s.witness.clone().map(|w| Witness { variant: *v, ..w }));
    let structure = inventory.map(|inv| structure_verdict(inv, r));
    Ok(PageDdbarVerdict {
        r,
        verdict: iso,
        iso,
        equal_dims,
        injective,
        exactness: sides.iter().all(|(_, s)| s.exactness),
        identities: sides.iter().all(|(_, s)| s.identities),
        structure,
        witness,
        failing_bidegrees,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub r: usize,
    /// `Σ e_{r,A} + Σ e_{r,BC}`.
    pub bc_plus_a: usize,
    /// `Σ e_r + Σ ē_r`.
    pub e_plus_ebar: usize,
    /// `2 Σ b_k`.
    pub twice_betti: usize,
    pub chain_holds: bool,
    pub verdict: bool,
    /// `bc_plus_a = twice_betti`.
    pub outer_equal: bool,
}

impl InequalityReport {
    /// The chain holds, and the outer terms agree whenever the verdict is true.
    pub fn holds(&self) -> bool {
        self.chain_holds && (!self.verdict || self.outer_equal)
    }
}

pub fn inequality_check(c: &DoubleComplex, r: usize) -> Result<InequalityReport, BcaError> {
    if r == 0 {
        return Err(BcaError::PageIndex);
    }
    let bca = bca_dims(c, r)?;
    let pages: PageTable = page_dims(c, r);
    let betti: usize = crate::bicomplex::de_rham_dims(&total_complex(c)).iter().sum();
    let bc_plus_a = bca.bc_sum(r) + bca.a_sum(r);
    let e_plus_ebar = pages.e_sum(r) + pages.ebar_sum(r);
    let twice_betti = 2 * betti;
    let verdict = evaluate(c, r, None)?.verdict;
    Ok(InequalityReport {
        r,
        bc_plus_a,
        e_plus_ebar,
        twice_betti,
        chain_holds: bc_plus_a >= e_plus_ebar && e_plus_ebar >= twice_betti,
        verdict,
        outer_equal: bc_plus_a == twice_betti,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_square, Shape, ZigzagShape};

    fn zigzag(g: usize, left: bool, right: bool) -> DoubleComplex {
        Shape::Zigzag(ZigzagShape::new(Bidegree::new(0, g as i32), g, left, right)).build()
    }

    #[test]
    fn dot_maps_are_identities() {
        let d = Shape::dot(Bidegree::new(0, 0)).build();
        let m = canonical_maps(&d, 2, Bidegree::new(0, 0)).unwrap();
        assert_eq!(m.bc_to_a, Matrix::identity(1));
        assert_eq!(m.bc_to_e, Matrix::identity(1));
        assert_eq!(m.dr_to_a, Matrix::identity(1));
        assert!(m.commutes);
    }

    #[test]
    fn length_five_both_arrows() {
        let z = zigzag(2, true, true);
        let t = bca_dims(&z, 2).unwrap();
        assert_eq!(t.bc_sum(2), 3);
        assert_eq!(t.a_sum(2), 0);
    }

    #[test]
    fn length_four_verdicts() {
        let z = zigzag(2, false, true);
        let v2 = page_ddbar_verdict(&z, 2, None).unwrap();
        assert!(!v2.verdict);
        let v3 = page_ddbar_verdict(&z, 3, None).unwrap();
        assert!(v3.verdict);
    }

    #[test]
    fn equal_dimensions_without_isomorphism() {
        let odd_l = Shape::Zigzag(ZigzagShape::new(Bidegree::new(0, 0), 1, true, true));
        let odd_m = Shape::Zigzag(ZigzagShape::new(Bidegree::new(0, 1), 2, false, false));
        let grid = crate::bicomplex::Grid::new(2, 2);
        let c = crate::bicomplex::direct_sum(&odd_l.build_in(grid).unwrap(), &odd_m.build_in(grid).unwrap());
        let t = bca_dims(&c, 2).unwrap();
        assert_eq!(t.bc_grid(2), t.a_grid(2));
        let v = evaluate(&c, 2, None).unwrap();
        assert!(v.equal_dims && !v.iso && !v.injective);
        assert!(matches!(page_ddbar_verdict(&c, 2, None), Err(BcaError::Inconsistent { .. })));
    }

    #[test]
    fn length_three_remark() {
        let z = zigzag(1, true, true);
        let rep = inequality_check(&z, 2).unwrap();
        assert_eq!((rep.bc_plus_a, rep.e_plus_ebar, rep.twice_betti), (2, 2, 2));
        assert!(!rep.verdict);
        assert!(rep.holds());
    }

    #[test]
    fn square_is_trivial() {
        let sq = build_square(0, 0);
        let rep = inequality_check(&sq, 1).unwrap();
        assert_eq!((rep.bc_plus_a, rep.e_plus_ebar, rep.twice_betti), (0, 0, 0));
        assert!(page_ddbar_verdict(&sq, 1, None).unwrap().verdict);
    }
}

//! Bilinear pairings between complementary bidegrees and the pairings they induce on
//! spectral pages and on Bott-Chern/Aeppli groups.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bca::{self, BcaError};
use crate::bicomplex::{direct_sum, Bidegree, ComplexData, ComplexError, DoubleComplex, Grid};
use crate::linalg::{format_rational, Matrix, QuotientBasis, Rational, Subspace};
use crate::spectral::{page_basis, towers};

#[derive(Debug, Error)]
pub enum PairingError {
    #[error("pairing block at {at} should be {expected:?}, found {found:?}")]
    Shape { at: Bidegree, expected: (usize, usize), found: (usize, usize) },
    #[error("pairing block given at {0}, outside the grid")]
    OutsideGrid(Bidegree),
    #[error("top bidegree must be (n,n), found ({0},{1})")]
    TopDegree(i32, i32),
    #[error("bad pairing file: {0}")]
    Parse(String),
    #[error(transparent)]
    Bca(#[from] BcaError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("on page {r} the Bott-Chern self-pairing is {} but the page verdict is {verdict}", if *.nondegenerate { "non-degenerate" } else { "degenerate" })]
    Inconsistent { r: usize, nondegenerate: bool, verdict: bool },
}

/// `P(α, β) = αᵀ · P^{p,q} · β` for `α` at `(p,q)` and `β` at `(n−p, n−q)`; absent
/// blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityPairing {
    pub n: i32,
    blocks: BTreeMap<Bidegree, Matrix>,
}

#[derive(Serialize, Deserialize)]
struct PairingFile {
    n: [i32; 2],
    pairs: BTreeMap<String, Matrix>,
}

impl DualityPairing {
    pub fn new(c: &DoubleComplex, n: i32, blocks: BTreeMap<Bidegree, Matrix>) -> Result<Self, PairingError> {
        let pairing = DualityPairing { n, blocks };
        for (&b, m) in &pairing.blocks {
            if !c.grid().contains(b) {
                return Err(PairingError::OutsideGrid(b));
            }
            let expected = (c.dim(b), c.dim(pairing.partner(b)));
            if m.shape() != expected {
                return Err(PairingError::Shape { at: b, expected, found: m.shape() });
            }
        }
        Ok(pairing)
    }

    pub fn from_json(c: &DoubleComplex, text: &str) -> Result<Self, PairingError> {
        let file: PairingFile = serde_json::from_str(text).map_err(|e| PairingError::Parse(e.to_string()))?;
        let [n, m] = file.n;
        if n != m {
            return Err(PairingError::TopDegree(n, m));
        }
        let blocks = file
            .pairs
            .into_iter()
            .map(|(k, m)| Bidegree::parse_key(&k).map(|b| (b, m)).ok_or_else(|| PairingError::Parse(format!("bad bidegree key {k:?}"))))
            .collect::<Result<_, _>>()?;
        Self::new(c, n, blocks)
    }

    pub fn to_json(&self) -> String {
        let file = PairingFile { n: [self.n, self.n], pairs: self.blocks.iter().map(|(b, m)| (b.key(), m.clone())).collect() };
        serde_json::to_string_pretty(&file).expect("pairings serialize")
    }

    pub fn partner(&self, b: Bidegree) -> Bidegree {
        Bidegree::new(self.n - b.p, self.n - b.q)
    }

    pub fn block(&self, c: &DoubleComplex, b: Bidegree) -> Matrix {
        self.blocks.get(&b).cloned().unwrap_or_else(|| Matrix::zeros(c.dim(b), c.dim(self.partner(b))))
    }

    /// Gram matrix of the pairing between spans of `left` (at `b`) and `right` (at the partner).
    pub fn evaluate(&self, c: &DoubleComplex, b: Bidegree, left: &[Vec<Rational>], right: &[Vec<Rational>]) -> Matrix {
        let m = self.block(c, b);
        let mt = m.transpose();
        let entries = left
            .iter()
            .flat_map(|x| {
                let mx = mt.mul_vec(x);
                right.iter().map(move |y| dot(&mx, y)).collect::<Vec<_>>()
            })
            .collect();
        Matrix::from_flat(left.len(), right.len(), entries)
    }

    fn vanishes_on(&self, c: &DoubleComplex, b: Bidegree, left: &Subspace, right: &Subspace) -> bool {
        left.is_zero() || right.is_zero() || self.evaluate(c, b, left.vectors(), right.vectors()).is_zero()
    }
}

fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

fn sign(b: Bidegree) -> Rational {
    if b.total().rem_euclid(2) == 0 {
        Rational::from_integer(1.into())
    } else {
        Rational::from_integer((-1).into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    D1,
    D2,
}

/// A basis pair violating `P(dα, β) + (−1)^{|α|} P(α, dβ) = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct StokesViolation {
    pub differential: Which,
    /// Bidegree of `α`.
    pub at: Bidegree,
    pub alpha: usize,
    pub beta: usize,
    #[serde(serialize_with = "as_string")]
    pub value: Rational,
}

fn as_string<S: serde::Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub valid: bool,
    pub perfect: bool,
    /// Bidegrees whose block is not square and invertible.
    pub imperfect_at: Vec<Bidegree>,
    pub violations: Vec<StokesViolation>,
}

/// Checks both Stokes identities on all basis pairs and records perfectness.
pub fn validate_pairing(c: &DoubleComplex, pairing: &DualityPairing) -> PairingReport {
    let grid = c.grid();
    let cells: Vec<Bidegree> = grid.bidegrees().collect();
    let mut violations: Vec<StokesViolation> = cells
        .par_iter()
        .flat_map_iter(|&b| {
            let mut found = Vec::new();
            for (which, shift) in [(Which::D1, (1, 0)), (Which::D2, (0, 1))] {
                let next = b.shift(shift.0, shift.1);
                let other = pairing.partner(next);
                let map = |at: Bidegree| match which {
                    Which::D1 => c.d1(at).into_owned(),
                    Which::D2 => c.d2(at).into_owned(),
                };
                // dᵀ P^{b+shift} + (−1)^{|b|} P^b d, as a form on A^b × A^{other}.
                let lhs = &map(b).transpose() * &pairing.block(c, next);
                let rhs = (&pairing.block(c, b) * &map(other)).scale(&sign(b));
                let total = &lhs + &rhs;
                for i in 0..total.rows() {
                    for j in 0..total.cols() {
                        if !total[(i, j)].is_zero() {
                            found.push(StokesViolation { differential: which, at: b, alpha: i, beta: j, value: total[(i, j)].clone() });
                        }
                    }
                }
            }
            found
        })
        .collect();
    violations.sort_by_key(|v| (v.at, v.differential as u8, v.alpha, v.beta));
    let imperfect_at: Vec<Bidegree> = cells
        .into_iter()
        .filter(|&b| {
            let partner = pairing.partner(b);
            let (rows, cols) = (c.dim(b), c.dim(partner));
            if rows == 0 && cols == 0 {
                return false;
            }
            rows != cols || !grid.contains(partner) || pairing.block(c, b).inverse().is_none()
        })
        .collect();
    PairingReport { valid: violations.is_empty(), perfect: imperfect_at.is_empty(), imperfect_at, violations }
}

/// The dual of `c` reflected through `(n,n)`, with maps `(−1)^{p+q}·dᵀ` at `(p,q)`.
fn signed_dual(c: &DoubleComplex, n: i32) -> Result<DoubleComplex, ComplexError> {
    let grid = c.grid();
    let reflect = |b: Bidegree| Bidegree::new(n - b.p, n - b.q);
    let mut data = ComplexData::new(format!("{} (dual)", c.name()), grid, |b| c.dim(reflect(b)));
    for b in grid.bidegrees() {
        let r = reflect(b);
        data.set_d1(b, c.d1(r.shift(-1, 0)).transpose().scale(&sign(b)))?;
        data.set_d2(b, c.d2(r.shift(0, -1)).transpose().scale(&sign(b)))?;
    }
    data.into_complex()
}

/// `Z ⊕ Z^∨` on the smallest square grid containing `Z`, with the evaluation pairing
/// `P((z, φ), (z', φ')) = φ'(z) + (−1)^{p+q} φ(z')`.
pub fn dual_sum(z: &DoubleComplex) -> Result<(DoubleComplex, DualityPairing), PairingError> {
    let side = z.grid().p_len.max(z.grid().q_len);
    let grid = Grid::new(side, side);
    let z = z.regrid(grid)?;
    let n = side as i32 - 1;
    let dual = signed_dual(&z, n)?;
    let sum = direct_sum(&z, &dual).with_name(format!("{} ⊕ dual", z.name()));
    let blocks = grid
        .bidegrees()
        .filter_map(|b| {
            let partner = Bidegree::new(n - b.p, n - b.q);
            let (own, far) = (z.dim(b), z.dim(partner));
            if own + far == 0 {
                return None;
            }
            let mut m = Matrix::zeros(own + far, far + own);
            for i in 0..own {
                m[(i, far + i)] = Rational::from_integer(1.into());
            }
            for i in 0..far {
                m[(own + i, i)] = sign(b);
            }
            Some((b, m))
        })
        .collect();
    let pairing = DualityPairing::new(&sum, n, blocks)?;
    Ok((sum, pairing))
}

/// Gram matrix of an induced pairing between `left` at `at` and `right` at the partner.
#[derive(Clone, Debug, Serialize)]
pub struct InducedPairing {
    pub at: Bidegree,
    pub partner: Bidegree,
    pub gram: Matrix,
    pub rank: usize,
    /// The value does not change when either representative moves inside its class.
    pub well_defined: bool,
    /// `None` when the two dimensions differ.
    pub nondegenerate: Option<bool>,
}

impl InducedPairing {
    /// Square with full rank; a pairing between zero spaces counts.
    pub fn is_perfect(&self) -> bool {
        self.nondegenerate.unwrap_or(false)
    }
}

fn induced(
    c: &DoubleComplex,
    pairing: &DualityPairing,
    at: Bidegree,
    left: &QuotientBasis,
    right: &QuotientBasis,
) -> InducedPairing {
    let partner = pairing.partner(at);
    let gram = pairing.evaluate(c, at, &left.reps, &right.reps);
    let well_defined = pairing.vanishes_on(c, at, &left.big, &right.small) && pairing.vanishes_on(c, at, &left.small, &right.big);
    let rank = gram.rank();
    let nondegenerate = (gram.rows() == gram.cols()).then_some(rank == gram.rows());
    InducedPairing { at, partner, gram, rank, well_defined, nondegenerate }
}

fn zero_quotient(n: usize) -> QuotientBasis {
    QuotientBasis::new(Subspace::zero(n), Subspace::zero(n)).expect("zero in zero")
}

fn in_grid<T>(c: &DoubleComplex, b: Bidegree, f: impl FnOnce(Bidegree) -> T, empty: impl FnOnce() -> T) -> T {
    if c.grid().contains(b) {
        f(b)
    } else {
        empty()
    }
}

/// `E_r^{p,q} × E_r^{n−p,n−q} → ℚ` on page representatives.
pub fn induced_pairing_er(c: &DoubleComplex, pairing: &DualityPairing, r: usize, at: Bidegree) -> InducedPairing {
    let left = page_basis(c, r, at);
    let partner = pairing.partner(at);
    let right = in_grid(c, partner, |b| page_basis(c, r, b), || zero_quotient(0));
    induced(c, pairing, at, &left, &right)
}

/// `E_{r,BC}^{p,q} × E_{r,A}^{n−p,n−q} → ℚ`.
pub fn induced_pairing_bc_a(c: &DoubleComplex, pairing: &DualityPairing, r: usize, at: Bidegree) -> Result<InducedPairing, PairingError> {
    let left = bca::bott_chern_basis(c, r, at)?;
    let partner = pairing.partner(at);
    let right = if c.grid().contains(partner) { bca::aeppli_basis(c, r, partner)? } else { zero_quotient(0) };
    Ok(induced(c, pairing, at, &left, &right))
}

#[derive(Clone, Debug, Serialize)]
pub struct BcSelfPairing {
    pub r: usize,
    pub blocks: Vec<InducedPairing>,
    pub nondegenerate: bool,
    pub verdict: bool,
}

/// `E_{r,BC}^{p,q} × E_{r,BC}^{n−p,n−q} → ℚ` at every bidegree, compared with the page
/// verdict. A disagreement is an error only for a valid perfect pairing.
pub fn induced_pairing_bc_bc(c: &DoubleComplex, pairing: &DualityPairing, r: usize) -> Result<BcSelfPairing, PairingError> {
    let cells: Vec<Bidegree> = c.grid().bidegrees().collect();
    let blocks = cells
        .par_iter()
        .map(|&at| {
            let left = bca::bott_chern_basis(c, r, at)?;
            let partner = pairing.partner(at);
            let right = if c.grid().contains(partner) { bca::bott_chern_basis(c, r, partner)? } else { zero_quotient(0) };
            Ok(induced(c, pairing, at, &left, &right))
        })
        .collect::<Result<Vec<_>, PairingError>>()?;
    let nondegenerate = blocks.iter().all(InducedPairing::is_perfect);
    let verdict = bca::evaluate(c, r, None)?.verdict;
    let report = validate_pairing(c, pairing);
    if report.valid && report.perfect && nondegenerate != verdict {
        return Err(PairingError::Inconsistent { r, nondegenerate, verdict });
    }
    Ok(BcSelfPairing { r, blocks, nondegenerate, verdict })
}

/// `P` vanishes between `E_r`-exact elements at `at` and `E_r`-closed ones at the partner.
pub fn exact_closed_orthogonal(c: &DoubleComplex, pairing: &DualityPairing, r: usize, at: Bidegree) -> bool {
    let partner = pairing.partner(at);
    if !c.grid().contains(partner) {
        return true;
    }
    let exact = towers::exact(c, towers::Op::D2, towers::Op::D1, r, at);
    let closed = towers::closed(c, towers::Op::D2, towers::Op::D1, r, partner);
    pairing.vanishes_on(c, at, &exact, &closed)
}

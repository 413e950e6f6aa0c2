//! Bounded double complexes: data model, validation, constructions and the total complex.
//!
//! `d1` has bidegree (1,0) and `d2` has bidegree (0,1). The two differentials
//! anticommute. Components live on an explicit grid `0 ≤ p < P`, `0 ≤ q < Q`; every
//! component outside the grid is zero, so maps leaving the grid are zero maps.

mod io;
mod random;
mod total;

use std::borrow::Cow;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix};

pub use io::{ComplexFile, Convention};
pub use random::{random_complex, random_scrambled_sum, ScrambledSum};
pub use total::{de_rham_dims, total_complex, TotalComplex};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: i32,
    pub q: i32,
}

impl Bidegree {
    pub const fn new(p: i32, q: i32) -> Self {
        Bidegree { p, q }
    }

    pub fn total(self) -> i32 {
        self.p + self.q
    }

    pub fn shift(self, dp: i32, dq: i32) -> Self {
        Bidegree { p: self.p + dp, q: self.q + dq }
    }

    /// `"p,q"`, the key format of the file formats.
    pub fn key(self) -> String {
        format!("{},{}", self.p, self.q)
    }

    pub fn parse_key(s: &str) -> Option<Self> {
        let (p, q) = s.split_once(',')?;
        Some(Bidegree { p: p.trim().parse().ok()?, q: q.trim().parse().ok()? })
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Rectangle of bidegrees `0 ≤ p < p_len`, `0 ≤ q < q_len`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Grid {
    pub p_len: usize,
    pub q_len: usize,
}

impl Grid {
    pub const fn new(p_len: usize, q_len: usize) -> Self {
        Grid { p_len, q_len }
    }

    pub fn contains(&self, b: Bidegree) -> bool {
        b.p >= 0 && b.q >= 0 && (b.p as usize) < self.p_len && (b.q as usize) < self.q_len
    }

    pub fn index(&self, b: Bidegree) -> Option<usize> {
        self.contains(b).then(|| b.p as usize * self.q_len + b.q as usize)
    }

    pub fn len(&self) -> usize {
        self.p_len * self.q_len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All bidegrees in lexicographic order.
    pub fn bidegrees(self) -> impl Iterator<Item = Bidegree> {
        let (p_len, q_len) = (self.p_len as i32, self.q_len as i32);
        (0..p_len).flat_map(move |p| (0..q_len).map(move |q| Bidegree { p, q }))
    }

    /// Total degrees that occur on the grid.
    pub fn total_degrees(&self) -> std::ops::Range<i32> {
        if self.is_empty() {
            0..0
        } else {
            0..(self.p_len + self.q_len - 1) as i32
        }
    }

    /// Default number of pages worth computing: beyond it every `d_r` vanishes.
    pub fn default_rmax(&self) -> usize {
        self.p_len.max(self.q_len) + 1
    }

    pub fn union(&self, other: &Grid) -> Grid {
        Grid { p_len: self.p_len.max(other.p_len), q_len: self.q_len.max(other.q_len) }
    }
}

/// One of the two structure maps.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Differential {
    D1,
    D2,
}

impl Differential {
    pub fn shift(self) -> (i32, i32) {
        match self {
            Differential::D1 => (1, 0),
            Differential::D2 => (0, 1),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Differential::D1 => Differential::D2,
            Differential::D2 => Differential::D1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum IdentityKind {
    D1Squared,
    D2Squared,
    Anticommutation,
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentityKind::D1Squared => "d1∘d1 ≠ 0",
            IdentityKind::D2Squared => "d2∘d2 ≠ 0",
            IdentityKind::Anticommutation => "d1∘d2 + d2∘d1 ≠ 0",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: IdentityKind,
    pub at: Bidegree,
    pub product: Matrix,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| format!("{} at {}", v.kind, v.at)).collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("{map} at {at} should be {expected:?} but is {got:?}")]
    Shape { map: &'static str, at: Bidegree, expected: (usize, usize), got: (usize, usize) },
    #[error("bidegree {0} lies outside the grid")]
    OutsideGrid(Bidegree),
    #[error("complex fails validation: {0}")]
    Invalid(ValidationReport),
    #[error("basis change at {0} is not invertible")]
    SingularTransform(Bidegree),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("malformed complex file: {0}")]
    Format(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Unchecked complex data. Maps can be edited freely; [`ComplexData::validate`] reports
/// which identities fail, and [`DoubleComplex::new`] accepts only valid data.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexData {
    pub name: String,
    grid: Grid,
    dims: Vec<usize>,
    d1: Vec<Matrix>,
    d2: Vec<Matrix>,
    labels: Option<Vec<Vec<String>>>,
    certified_max_p: Option<i32>,
}

impl ComplexData {
    /// Zero maps on components of the given dimensions.
    pub fn new(name: impl Into<String>, grid: Grid, dim: impl Fn(Bidegree) -> usize) -> Self {
        let dims: Vec<usize> = grid.bidegrees().map(&dim).collect();
        let at = |b: Bidegree| grid.index(b).map_or(0, |i| dims[i]);
        let d1 = grid.bidegrees().map(|b| Matrix::zeros(at(b.shift(1, 0)), at(b))).collect();
        let d2 = grid.bidegrees().map(|b| Matrix::zeros(at(b.shift(0, 1)), at(b))).collect();
        ComplexData { name: name.into(), grid, dims, d1, d2, labels: None, certified_max_p: None }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        self.grid.index(b).map_or(0, |i| self.dims[i])
    }

    pub fn map(&self, which: Differential, b: Bidegree) -> Cow<'_, Matrix> {
        let (dp, dq) = which.shift();
        match self.grid.index(b) {
            Some(i) => Cow::Borrowed(match which {
                Differential::D1 => &self.d1[i],
                Differential::D2 => &self.d2[i],
            }),
            None => Cow::Owned(Matrix::zeros(self.dim(b.shift(dp, dq)), self.dim(b))),
        }
    }

    pub fn set_map(&mut self, which: Differential, b: Bidegree, m: Matrix) -> Result<(), ComplexError> {
        let i = self.grid.index(b).ok_or(ComplexError::OutsideGrid(b))?;
        let (dp, dq) = which.shift();
        let expected = (self.dim(b.shift(dp, dq)), self.dim(b));
        if m.shape() != expected {
            let map = match which {
                Differential::D1 => "d1",
                Differential::D2 => "d2",
            };
            return Err(ComplexError::Shape { map, at: b, expected, got: m.shape() });
        }
        match which {
            Differential::D1 => self.d1[i] = m,
            Differential::D2 => self.d2[i] = m,
        }
        Ok(())
    }

    pub fn set_d1(&mut self, b: Bidegree, m: Matrix) -> Result<(), ComplexError> {
        self.set_map(Differential::D1, b, m)
    }

    pub fn set_d2(&mut self, b: Bidegree, m: Matrix) -> Result<(), ComplexError> {
        self.set_map(Differential::D2, b, m)
    }

    /// Per-bidegree basis labels; each list must match the component dimension.
    pub fn set_labels(&mut self, labels: impl Fn(Bidegree) -> Vec<String>) -> Result<(), ComplexError> {
        let mut all = Vec::with_capacity(self.grid.len());
        for b in self.grid.bidegrees() {
            let l = labels(b);
            if l.len() != self.dim(b) {
                return Err(ComplexError::Format(format!(
                    "{} labels given for the {}-dimensional component at {b}",
                    l.len(),
                    self.dim(b)
                )));
            }
            all.push(l);
        }
        self.labels = Some(all);
        Ok(())
    }

    pub fn labels(&self, b: Bidegree) -> Option<&[String]> {
        let i = self.grid.index(b)?;
        self.labels.as_ref().map(|l| l[i].as_slice())
    }

    /// Largest column index `p` for which reported values are trustworthy, if limited.
    pub fn certified_max_p(&self) -> Option<i32> {
        self.certified_max_p
    }

    pub fn set_certified_max_p(&mut self, p: Option<i32>) {
        self.certified_max_p = p;
    }

    /// Checks `d1∘d1 = 0`, `d2∘d2 = 0` and `d1∘d2 + d2∘d1 = 0` on every bidegree.
    pub fn validate(&self) -> ValidationReport {
        use Differential::{D1, D2};
        let mut violations = Vec::new();
        for b in self.grid.bidegrees() {
            let checks = [
                (IdentityKind::D1Squared, &*self.map(D1, b.shift(1, 0)) * &self.map(D1, b)),
                (IdentityKind::D2Squared, &*self.map(D2, b.shift(0, 1)) * &self.map(D2, b)),
                (
                    IdentityKind::Anticommutation,
                    &(&*self.map(D1, b.shift(0, 1)) * &self.map(D2, b))
                        + &(&*self.map(D2, b.shift(1, 0)) * &self.map(D1, b)),
                ),
            ];
            for (kind, product) in checks {
                if !product.is_zero() {
                    violations.push(Violation { kind, at: b, product });
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn into_complex(self) -> Result<DoubleComplex, ComplexError> {
        DoubleComplex::new(self)
    }
}

/// A validated bounded double complex.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleComplex {
    data: ComplexData,
}

impl DoubleComplex {
    pub fn new(data: ComplexData) -> Result<Self, ComplexError> {
        let report = data.validate();
        if report.is_valid() {
            Ok(DoubleComplex { data })
        } else {
            Err(ComplexError::Invalid(report))
        }
    }

    pub fn zero(grid: Grid) -> Self {
        DoubleComplex { data: ComplexData::new("zero", grid, |_| 0) }
    }

    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.data.name = name.into();
        self
    }

    pub fn grid(&self) -> Grid {
        self.data.grid
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        self.data.dim(b)
    }

    pub fn total_dim(&self) -> usize {
        self.data.dims.iter().sum()
    }

    pub fn map(&self, which: Differential, b: Bidegree) -> Cow<'_, Matrix> {
        self.data.map(which, b)
    }

    pub fn d1(&self, b: Bidegree) -> Cow<'_, Matrix> {
        self.data.map(Differential::D1, b)
    }

    pub fn d2(&self, b: Bidegree) -> Cow<'_, Matrix> {
        self.data.map(Differential::D2, b)
    }

    /// `d1 ∘ d2` from `b` to `b + (1,1)`.
    pub fn d1d2(&self, b: Bidegree) -> Matrix {
        &*self.d1(b.shift(0, 1)) * &self.d2(b)
    }

    pub fn labels(&self, b: Bidegree) -> Option<&[String]> {
        self.data.labels(b)
    }

    pub fn certified_max_p(&self) -> Option<i32> {
        self.data.certified_max_p
    }

    pub fn data(&self) -> &ComplexData {
        &self.data
    }

    pub fn into_data(self) -> ComplexData {
        self.data
    }

    /// The complex with the roles of `d1` and `d2` exchanged, transposing the grid.
    pub fn swapped(&self) -> DoubleComplex {
        let g = self.grid();
        let grid = Grid::new(g.q_len, g.p_len);
        let flip = |b: Bidegree| Bidegree::new(b.q, b.p);
        let mut data = ComplexData::new(format!("{} (swapped)", self.name()), grid, |b| self.dim(flip(b)));
        for b in grid.bidegrees() {
            data.set_d1(b, self.d2(flip(b)).into_owned()).expect("shapes agree");
            data.set_d2(b, self.d1(flip(b)).into_owned()).expect("shapes agree");
        }
        DoubleComplex { data }
    }

    /// The dual complex reflected through the centre of the grid: the component at `(p,q)`
    /// is the dual of `A^{P−1−p, Q−1−q}` and both maps are transposes.
    pub fn reflected_dual(&self) -> DoubleComplex {
        let grid = self.grid();
        let reflect = |b: Bidegree| Bidegree::new(grid.p_len as i32 - 1 - b.p, grid.q_len as i32 - 1 - b.q);
        let mut data = ComplexData::new(format!("{} (dual)", self.name()), grid, |b| self.dim(reflect(b)));
        for b in grid.bidegrees() {
            let r = reflect(b);
            data.set_d1(b, self.d1(r.shift(-1, 0)).transpose()).expect("shapes agree");
            data.set_d2(b, self.d2(r.shift(0, -1)).transpose()).expect("shapes agree");
        }
        DoubleComplex { data }
    }

    /// Restricts the grid to `new_grid`, which must contain every nonzero component.
    pub fn regrid(&self, new_grid: Grid) -> Result<DoubleComplex, ComplexError> {
        for b in self.grid().bidegrees() {
            if self.dim(b) > 0 && !new_grid.contains(b) {
                return Err(ComplexError::OutsideGrid(b));
            }
        }
        let mut data = ComplexData::new(self.name(), new_grid, |b| self.dim(b));
        for b in new_grid.bidegrees() {
            data.set_d1(b, self.d1(b).into_owned())?;
            data.set_d2(b, self.d2(b).into_owned())?;
        }
        if self.data.labels.is_some() {
            data.set_labels(|b| self.labels(b).map(<[String]>::to_vec).unwrap_or_default())?;
        }
        data.certified_max_p = self.data.certified_max_p;
        Ok(DoubleComplex { data })
    }
}

/// Block-diagonal sum on the union of both grids; the basis of `a` comes first.
pub fn direct_sum(a: &DoubleComplex, b: &DoubleComplex) -> DoubleComplex {
    let grid = a.grid().union(&b.grid());
    let name = format!("{} ⊕ {}", a.name(), b.name());
    let mut data = ComplexData::new(name, grid, |x| a.dim(x) + b.dim(x));
    for x in grid.bidegrees() {
        for which in [Differential::D1, Differential::D2] {
            let (dp, dq) = which.shift();
            let y = x.shift(dp, dq);
            let mut m = Matrix::zeros(a.dim(y) + b.dim(y), a.dim(x) + b.dim(x));
            m.set_block(0, 0, &a.map(which, x));
            m.set_block(a.dim(y), a.dim(x), &b.map(which, x));
            data.set_map(which, x, m).expect("block shapes agree");
        }
    }
    DoubleComplex { data }
}

/// Direct sum of a list of complexes, on the union of their grids.
pub fn direct_sum_all<'a, I: IntoIterator<Item = &'a DoubleComplex>>(grid: Grid, parts: I) -> DoubleComplex {
    parts
        .into_iter()
        .fold(DoubleComplex::zero(grid), |acc, c| direct_sum(&acc, c))
}

/// Conjugates every map by the per-bidegree transforms: `d ↦ T_target · d · T_source⁻¹`.
///
/// `T_b` sends old coordinates at `b` to new ones, so its columns are the images of the old
/// basis vectors. Bidegrees missing from `transforms` keep their basis.
pub fn change_of_basis(
    c: &DoubleComplex,
    transforms: &dyn Fn(Bidegree) -> Option<Matrix>,
) -> Result<DoubleComplex, ComplexError> {
    let grid = c.grid();
    let mut forward = Vec::with_capacity(grid.len());
    let mut inverse = Vec::with_capacity(grid.len());
    for b in grid.bidegrees() {
        let n = c.dim(b);
        let t = transforms(b).unwrap_or_else(|| Matrix::identity(n));
        if t.shape() != (n, n) {
            return Err(ComplexError::Shape { map: "basis change", at: b, expected: (n, n), got: t.shape() });
        }
        let inv = t.inverse().ok_or(ComplexError::SingularTransform(b))?;
        forward.push(t);
        inverse.push(inv);
    }
    let mut data = c.data.clone();
    data.labels = None;
    for b in grid.bidegrees() {
        let i = grid.index(b).expect("in grid");
        for which in [Differential::D1, Differential::D2] {
            let (dp, dq) = which.shift();
            let Some(j) = grid.index(b.shift(dp, dq)) else {
                continue;
            };
            let m = &(&forward[j] * &c.map(which, b)) * &inverse[i];
            data.set_map(which, b, m)?;
        }
    }
    DoubleComplex::new(data)
}

/// Checks that every complex passed in validates; handy for tests and CLI ingestion.
pub fn validate(data: &ComplexData) -> ValidationReport {
    data.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn square_data() -> ComplexData {
        let grid = Grid::new(2, 2);
        let mut d = ComplexData::new("square", grid, |_| 1);
        let one = Matrix::identity(1);
        d.set_d1(Bidegree::new(0, 0), one.clone()).unwrap();
        d.set_d2(Bidegree::new(0, 0), one.clone()).unwrap();
        d.set_d1(Bidegree::new(0, 1), one.clone()).unwrap();
        d.set_d2(Bidegree::new(1, 0), -&one).unwrap();
        d
    }

    #[test]
    fn square_validates_and_sign_break_is_caught() {
        let d = square_data();
        assert!(d.validate().is_valid());
        let mut broken = d.clone();
        broken.set_d2(Bidegree::new(0, 0), -&Matrix::identity(1)).unwrap();
        let report = broken.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, IdentityKind::Anticommutation);
        assert_eq!(report.violations[0].at, Bidegree::new(0, 0));
        assert_eq!(report.violations[0].product, Matrix::from_i64(1, 1, &[-2]));
        assert!(matches!(broken.into_complex(), Err(ComplexError::Invalid(_))));
    }

    #[test]
    fn shapes_are_enforced() {
        let mut d = square_data();
        let err = d.set_d1(Bidegree::new(0, 0), Matrix::zeros(2, 1)).unwrap_err();
        assert!(matches!(err, ComplexError::Shape { .. }));
        assert!(d.set_d1(Bidegree::new(1, 0), Matrix::zeros(0, 1)).is_ok());
        assert!(matches!(d.set_d1(Bidegree::new(5, 0), Matrix::zeros(0, 0)), Err(ComplexError::OutsideGrid(_))));
    }

    #[test]
    fn basis_change_round_trip() {
        let c = square_data().into_complex().unwrap();
        let scaled = change_of_basis(&c, &|b| (b == Bidegree::new(0, 0)).then(|| Matrix::identity(1).scale(&rat(5)))).unwrap();
        assert_eq!(scaled.d1(Bidegree::new(0, 0)).into_owned(), Matrix::identity(1).scale(&crate::linalg::Rational::new(1.into(), 5.into())));
        let singular = change_of_basis(&c, &|_| Some(Matrix::zeros(1, 1)));
        assert!(matches!(singular, Err(ComplexError::SingularTransform(_))));
        let same = change_of_basis(&c, &|_| None).unwrap();
        assert_eq!(same.d2(Bidegree::new(1, 0)), c.d2(Bidegree::new(1, 0)));
    }

    #[test]
    fn swapping_twice_is_identity_up_to_name() {
        let c = square_data().into_complex().unwrap();
        let back = c.swapped().swapped();
        for b in c.grid().bidegrees() {
            assert_eq!(back.d1(b), c.d1(b));
            assert_eq!(back.d2(b), c.d2(b));
        }
    }
}

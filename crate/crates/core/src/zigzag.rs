//! Square and zigzag decompositions.
//!
//! Every bounded double complex is a direct sum of squares and zigzags. Multiplicities are
//! recovered from cohomological invariants by solving a linear system against the
//! closed-form invariants of each shape; an optional constructive splitter produces an
//! explicit basis certificate instead.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bca::{bca_dims, BcaError};
use crate::bicomplex::{Bidegree, ComplexData, DoubleComplex, Grid, ScrambledSum};
use crate::linalg::{rat, BlockSystem, Matrix, Rational, Subspace};
use crate::models::{Shape, ZigzagElement, ZigzagKind, ZigzagShape};
use crate::spectral::page_dims;

#[derive(Debug, Error)]
pub enum ZigzagError {
    #[error("no nonnegative integer combination of shapes matches the invariants")]
    Infeasible,
    #[error(transparent)]
    Bca(#[from] BcaError),
    #[error("no split embedding of {shape} found after {attempts} attempts")]
    NoSplitting { shape: Shape, attempts: usize },
    #[error("{remaining} dimensions are left after extracting the inventory")]
    Leftover { remaining: usize },
}

/// Every square and zigzag whose support lies in `grid`, sorted.
pub fn enumerate_shapes(grid: Grid) -> Vec<Shape> {
    let mut out: Vec<Shape> = grid.bidegrees().map(Shape::Square).filter(|s| s.fits(grid)).collect();
    for start in grid.bidegrees() {
        for g in 1..=grid.p_len.min(grid.q_len) {
            for (left, right) in [(false, false), (false, true), (true, false), (true, true)] {
                let s = Shape::Zigzag(ZigzagShape::new(start, g, left, right));
                if s.fits(grid) {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out
}

/// Closed-form invariants of one shape for pages `1..=r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedInvariants {
    pub shape: Shape,
    pub r_max: usize,
    pub dims: BTreeMap<Bidegree, usize>,
    /// Indexed by `r − 1`; each map lists the bidegrees where the value is 1.
    e: Vec<BTreeSet<Bidegree>>,
    ebar: Vec<BTreeSet<Bidegree>>,
    bc: Vec<BTreeSet<Bidegree>>,
    a: Vec<BTreeSet<Bidegree>>,
    /// Betti numbers by total degree.
    pub betti: BTreeMap<i32, usize>,
}

impl PredictedInvariants {
    pub fn e(&self, r: usize, b: Bidegree) -> usize {
        usize::from(self.e[r - 1].contains(&b))
    }

    pub fn ebar(&self, r: usize, b: Bidegree) -> usize {
        usize::from(self.ebar[r - 1].contains(&b))
    }

    pub fn bc(&self, r: usize, b: Bidegree) -> usize {
        usize::from(self.bc[r - 1].contains(&b))
    }

    pub fn a(&self, r: usize, b: Bidegree) -> usize {
        usize::from(self.a[r - 1].contains(&b))
    }

    pub fn e_sum(&self, r: usize) -> usize {
        self.e[r - 1].len()
    }

    pub fn ebar_sum(&self, r: usize) -> usize {
        self.ebar[r - 1].len()
    }

    pub fn bc_sum(&self, r: usize) -> usize {
        self.bc[r - 1].len()
    }

    pub fn a_sum(&self, r: usize) -> usize {
        self.a[r - 1].len()
    }
}

struct PageSupport {
    e: Vec<Bidegree>,
    ebar: Vec<Bidegree>,
    bc: Vec<Bidegree>,
    a: Vec<Bidegree>,
}

fn zigzag_support(z: &ZigzagShape, r: usize) -> PageSupport {
    let g = z.generators;
    let gen = |i: usize| z.position(ZigzagElement::Generator(i));
    let img = |i: usize| z.position(ZigzagElement::Image(i));
    let (e, ebar) = match z.kind() {
        ZigzagKind::Dot => (vec![gen(1)], vec![gen(1)]),
        ZigzagKind::OddM => (vec![gen(1)], vec![gen(g)]),
        ZigzagKind::OddL => (vec![img(g)], vec![img(0)]),
        ZigzagKind::EvenI if r <= g => (vec![gen(1), img(g)], vec![]),
        ZigzagKind::EvenII if r <= g => (vec![], vec![img(0), gen(g)]),
        ZigzagKind::EvenI | ZigzagKind::EvenII => (vec![], vec![]),
    };
    if z.is_dot() {
        return PageSupport { e, ebar, bc: vec![gen(1)], a: vec![gen(1)] };
    }
    let s = r - 1;
    let first = if z.left { 0 } else { 1 };
    let last = if z.right { g } else { g - 1 };
    let bc = (first..=last)
        .filter(|&j| !((!z.left && j <= s) || (!z.right && j + s >= g)))
        .map(img)
        .collect();
    let a = (1..=g).filter(|&i| (!z.right || i + s <= g) && (!z.left || i > s)).map(gen).collect();
    PageSupport { e, ebar, bc, a }
}

/// Closed-form `e_r`, `ē_r`, `e_{r,BC}`, `e_{r,A}` per bidegree and `b_k` per degree.
pub fn predicted_invariants(shape: &Shape, r_max: usize) -> PredictedInvariants {
    let dims: BTreeMap<Bidegree, usize> = shape.support().into_iter().map(|b| (b, 1)).collect();
    let mut out = PredictedInvariants {
        shape: *shape,
        r_max,
        dims,
        e: Vec::new(),
        ebar: Vec::new(),
        bc: Vec::new(),
        a: Vec::new(),
        betti: BTreeMap::new(),
    };
    for r in 1..=r_max {
        let support = match shape {
            Shape::Square(_) => PageSupport { e: vec![], ebar: vec![], bc: vec![], a: vec![] },
            Shape::Zigzag(z) => zigzag_support(z, r),
        };
        out.e.push(support.e.into_iter().collect());
        out.ebar.push(support.ebar.into_iter().collect());
        out.bc.push(support.bc.into_iter().collect());
        out.a.push(support.a.into_iter().collect());
    }
    if let Shape::Zigzag(z) = shape {
        match z.kind() {
            ZigzagKind::Dot | ZigzagKind::OddM => {
                out.betti.insert(z.degree(), 1);
            }
            ZigzagKind::OddL => {
                out.betti.insert(z.degree() + 1, 1);
            }
            ZigzagKind::EvenI | ZigzagKind::EvenII => {}
        }
    }
    out
}

/// Shapes with multiplicities, in shape order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeInventory {
    pub entries: Vec<(Shape, usize)>,
}

impl ShapeInventory {
    pub fn from_shapes<I: IntoIterator<Item = Shape>>(shapes: I) -> Self {
        let mut counts: BTreeMap<Shape, usize> = BTreeMap::new();
        for s in shapes {
            *counts.entry(s).or_insert(0) += 1;
        }
        ShapeInventory { entries: counts.into_iter().collect() }
    }

    pub fn multiplicity(&self, shape: &Shape) -> usize {
        self.entries.iter().find(|(s, _)| s == shape).map_or(0, |(_, m)| *m)
    }

    pub fn total_dim(&self) -> usize {
        self.entries.iter().map(|(s, m)| s.dim() * m).sum()
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        self.entries.iter().map(|(s, m)| m * s.support().iter().filter(|&&x| x == b).count()).sum()
    }

    pub fn count(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Each shape repeated by its multiplicity.
    pub fn shapes(&self) -> impl Iterator<Item = Shape> + '_ {
        self.entries.iter().flat_map(|(s, m)| std::iter::repeat_n(*s, *m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Multiplicities {
    Unique {
        inventory: ShapeInventory,
        /// Dimension of the rational solution space of the invariant system.
        nullity: usize,
    },
    Ambiguous {
        nullity: usize,
        /// Solutions of minimal support found by the bounded search.
        solutions: Vec<ShapeInventory>,
        /// The search stopped before exhausting all candidates.
        truncated: bool,
    },
}

impl Multiplicities {
    pub fn unique(&self) -> Option<&ShapeInventory> {
        match self {
            Multiplicities::Unique { inventory, .. } => Some(inventory),
            Multiplicities::Ambiguous { .. } => None,
        }
    }
}

const SEARCH_LIMIT: usize = 200_000;

/// Recovers shape multiplicities from dims, `e_r`, `ē_r`, `e_{r,BC}` and `e_{r,A}` for
/// `1 ≤ r ≤ r_max` at every bidegree.
pub fn multiplicity_solve(c: &DoubleComplex, r_max: usize) -> Result<Multiplicities, ZigzagError> {
    let grid = c.grid();
    let pages = page_dims(c, r_max);
    let bca = bca_dims(c, r_max)?;
    let cells: Vec<Bidegree> = grid.bidegrees().collect();

    let mut measured: Vec<usize> = Vec::new();
    for &b in &cells {
        measured.push(c.dim(b));
        for r in 1..=r_max {
            measured.extend([pages.e(r, b), pages.ebar(r, b), bca.bc(r, b), bca.a(r, b)]);
        }
    }
    let rows_per_cell = 1 + 4 * r_max;
    let shapes = enumerate_shapes(grid);
    let columns: Vec<Vec<usize>> = shapes
        .par_iter()
        .map(|s| {
            let p = predicted_invariants(s, r_max);
            let mut col = Vec::with_capacity(measured.len());
            for &b in &cells {
                col.push(p.dims.get(&b).copied().unwrap_or(0));
                for r in 1..=r_max {
                    col.extend([p.e(r, b), p.ebar(r, b), p.bc(r, b), p.a(r, b)]);
                }
            }
            col
        })
        .collect();
    debug_assert!(columns.iter().all(|c| c.len() == cells.len() * rows_per_cell));

    // A row with measured value zero rules out every shape contributing to it.
    let live: Vec<usize> = (0..shapes.len())
        .filter(|&j| columns[j].iter().zip(&measured).all(|(&x, &m)| x == 0 || m > 0))
        .collect();
    let rows: Vec<usize> = (0..measured.len()).filter(|&i| measured[i] > 0).collect();
    if rows.is_empty() {
        return Ok(Multiplicities::Unique { inventory: ShapeInventory::default(), nullity: 0 });
    }
    let system = Matrix::from_rows(
        rows.iter().map(|&i| live.iter().map(|&j| rat(columns[j][i] as i64)).collect()).collect(),
    );
    let rhs: Vec<Rational> = rows.iter().map(|&i| rat(measured[i] as i64)).collect();
    let width = live.len();
    if width == 0 {
        return Err(ZigzagError::Infeasible);
    }
    let particular = system.solve(&rhs).ok_or(ZigzagError::Infeasible)?;
    let kernel = system.kernel();
    let nullity = kernel.dim();
    let to_inventory = |x: &[usize]| ShapeInventory {
        entries: live.iter().zip(x).filter(|(_, &m)| m > 0).map(|(&j, &m)| (shapes[j], m)).collect(),
    };
    if nullity == 0 {
        let x = nonnegative_integers(&particular).ok_or(ZigzagError::Infeasible)?;
        return Ok(Multiplicities::Unique { inventory: to_inventory(&x), nullity: 0 });
    }

    let bounds: Vec<usize> = live
        .iter()
        .map(|&j| rows.iter().filter(|&&i| columns[j][i] > 0).map(|&i| measured[i] / columns[j][i]).min().unwrap_or(0))
        .collect();
    let (found, truncated) = enumerate_solutions(&system, &rhs, &bounds);
    match found.len() {
        0 if !truncated => Err(ZigzagError::Infeasible),
        1 if !truncated => Ok(Multiplicities::Unique { inventory: to_inventory(&found[0]), nullity }),
        _ => {
            let min_support = found.iter().map(|x| x.iter().filter(|&&m| m > 0).count()).min().unwrap_or(0);
            let solutions = found
                .iter()
                .filter(|x| x.iter().filter(|&&m| m > 0).count() == min_support)
                .map(|x| to_inventory(x))
                .collect();
            Ok(Multiplicities::Ambiguous { nullity, solutions, truncated })
        }
    }
}

fn nonnegative_integers(x: &[Rational]) -> Option<Vec<usize>> {
    x.iter().map(|v| if v.is_integer() && !v.is_negative() { v.to_integer().to_usize() } else { None }).collect()
}

/// All nonnegative integer solutions of `m x = rhs` with `x_j ≤ bounds[j]`, found by
/// enumerating the free variables of the reduced system.
fn enumerate_solutions(m: &Matrix, rhs: &[Rational], bounds: &[usize]) -> (Vec<Vec<usize>>, bool) {
    let aug = Matrix::hstack(m.rows(), &[m, &Matrix::from_columns(m.rows(), &[rhs.to_vec()])]);
    let reduced = aug.rref();
    let n = m.cols();
    let pivots: Vec<usize> = reduced.pivots.clone();
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let mut found = Vec::new();
    let mut visited = 0usize;
    let mut assignment = vec![0usize; free.len()];
    loop {
        visited += 1;
        if visited > SEARCH_LIMIT {
            return (found, true);
        }
        let mut x = vec![Rational::zero(); n];
        for (k, &f) in free.iter().enumerate() {
            x[f] = rat(assignment[k] as i64);
        }
        for (row, &p) in pivots.iter().enumerate() {
            let mut v = reduced.matrix[(row, n)].clone();
            for &f in &free {
                v -= &reduced.matrix[(row, f)] * &x[f];
            }
            x[p] = v;
        }
        if let Some(sol) = nonnegative_integers(&x) {
            if sol.iter().zip(bounds).all(|(v, b)| v <= b) {
                found.push(sol);
            }
        }
        let mut k = 0;
        loop {
            if k == free.len() {
                return (found, false);
            }
            if assignment[k] < bounds[free[k]] {
                assignment[k] += 1;
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

/// Page-`(r−1)` property read off a decomposition: no odd zigzag other than dots and no
/// even zigzag longer than `2(r−1)`.
pub fn structure_verdict(inventory: &ShapeInventory, r: usize) -> bool {
    inventory.entries.iter().all(|(s, _)| match s {
        Shape::Square(_) => true,
        Shape::Zigzag(z) => {
            let len = z.len();
            if len % 2 == 1 {
                len == 1
            } else {
                len <= 2 * (r - 1)
            }
        }
    })
}

/// One summand of a certificate: the shape and, for each bidegree of its support in
/// support order, the index of its basis vector there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateBlock {
    pub shape: Shape,
    pub positions: Vec<(Bidegree, usize)>,
}

/// A basis per bidegree (columns, in the complex's coordinates) together with the
/// assignment of basis vectors to summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    #[serde(with = "keyed_matrices")]
    pub bases: BTreeMap<Bidegree, Matrix>,
    pub blocks: Vec<CertificateBlock>,
}

mod keyed_matrices {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::bicomplex::Bidegree;
    use crate::linalg::Matrix;

    pub fn serialize<S: Serializer>(m: &BTreeMap<Bidegree, Matrix>, s: S) -> Result<S::Ok, S::Error> {
        let keyed: BTreeMap<String, &Matrix> = m.iter().map(|(b, x)| (b.key(), x)).collect();
        keyed.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Bidegree, Matrix>, D::Error> {
        let keyed: BTreeMap<String, Matrix> = BTreeMap::deserialize(d)?;
        keyed
            .into_iter()
            .map(|(k, m)| {
                Bidegree::parse_key(&k)
                    .map(|b| (b, m))
                    .ok_or_else(|| serde::de::Error::custom(format!("bad bidegree key {k:?}")))
            })
            .collect()
    }
}

/// Positions of each shape's basis vectors when the shapes are summed in order.
fn stacked_positions(shapes: &[Shape]) -> Vec<CertificateBlock> {
    let mut used: BTreeMap<Bidegree, usize> = BTreeMap::new();
    shapes
        .iter()
        .map(|s| {
            let positions = s
                .support()
                .into_iter()
                .map(|b| {
                    let slot = used.entry(b).or_insert(0);
                    *slot += 1;
                    (b, *slot - 1)
                })
                .collect();
            CertificateBlock { shape: *s, positions }
        })
        .collect()
}

impl DecompositionCertificate {
    /// The hidden decomposition of a scrambled sum.
    pub fn from_scrambled(sum: &ScrambledSum) -> Self {
        DecompositionCertificate { bases: sum.transforms.clone(), blocks: stacked_positions(&sum.shapes) }
    }

    pub fn inventory(&self) -> ShapeInventory {
        ShapeInventory::from_shapes(self.blocks.iter().map(|b| b.shape))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub accepted: bool,
    /// Index of the first failing block, when the failure is local to one block.
    pub failing_block: Option<usize>,
    pub reason: Option<String>,
}

impl CertificateReport {
    fn reject(block: Option<usize>, reason: String) -> Self {
        CertificateReport { accepted: false, failing_block: block, reason: Some(reason) }
    }
}

/// Checks that the certificate's bases are invertible, that they make both differentials
/// block diagonal, and that each block has exactly the arrows of its shape.
pub fn verify_certificate(c: &DoubleComplex, cert: &DecompositionCertificate) -> CertificateReport {
    let grid = c.grid();
    let mut inverses: BTreeMap<Bidegree, Matrix> = BTreeMap::new();
    for b in grid.bidegrees() {
        let n = c.dim(b);
        let basis = cert.bases.get(&b).cloned().unwrap_or_else(|| Matrix::identity(n));
        if basis.shape() != (n, n) {
            return CertificateReport::reject(None, format!("basis at {b} is not {n}x{n}"));
        }
        let Some(inv) = basis.inverse() else {
            return CertificateReport::reject(None, format!("basis at {b} is singular"));
        };
        inverses.insert(b, inv);
    }
    if let Some(b) = cert.bases.keys().find(|b| !grid.contains(**b)) {
        return CertificateReport::reject(None, format!("basis given at {b} outside the grid"));
    }
    let mut owner: BTreeMap<(Bidegree, usize), (usize, usize)> = BTreeMap::new();
    for (k, block) in cert.blocks.iter().enumerate() {
        let support = block.shape.support();
        if support.len() != block.positions.len()
            || support.iter().zip(&block.positions).any(|(s, (b, _))| s != b)
        {
            return CertificateReport::reject(Some(k), format!("block {k} does not follow the support of {}", block.shape));
        }
        for (slot, &(b, i)) in block.positions.iter().enumerate() {
            if i >= c.dim(b) {
                return CertificateReport::reject(Some(k), format!("block {k} uses a missing basis vector at {b}"));
            }
            if owner.insert((b, i), (k, slot)).is_some() {
                return CertificateReport::reject(Some(k), format!("basis vector {i} at {b} is claimed twice"));
            }
        }
    }
    let total: usize = grid.bidegrees().map(|b| c.dim(b)).sum();
    if owner.len() != total {
        return CertificateReport::reject(None, format!("{} of {total} basis vectors are assigned", owner.len()));
    }
    let basis_at = |b: Bidegree| cert.bases.get(&b).cloned().unwrap_or_else(|| Matrix::identity(c.dim(b)));
    for (k, block) in cert.blocks.iter().enumerate() {
        let model = block.shape.build();
        for (slot, &(b, i)) in block.positions.iter().enumerate() {
            for (map, shift) in [(&c.d1(b), (1, 0)), (&c.d2(b), (0, 1))] {
                let t = b.shift(shift.0, shift.1);
                let image = if grid.contains(t) {
                    inverses[&t].mul_vec(&map.mul_vec(&basis_at(b).column(i)))
                } else {
                    Vec::new()
                };
                let expected_slot = block.positions.iter().position(|&(x, _)| x == t);
                let arrow = expected_slot.map(|_| {
                    let m = if shift == (1, 0) { model.d1(support_at(block, slot)) } else { model.d2(support_at(block, slot)) };
                    !m.is_zero()
                });
                for (row, v) in image.iter().enumerate() {
                    let in_block = expected_slot.is_some_and(|s| block.positions[s].1 == row);
                    if in_block {
                        if v.is_zero() && arrow == Some(true) {
                            return CertificateReport::reject(Some(k), format!("block {k} is missing an arrow out of {b}"));
                        }
                        if !v.is_zero() && arrow == Some(false) {
                            return CertificateReport::reject(Some(k), format!("block {k} has an extra arrow out of {b}"));
                        }
                    } else if !v.is_zero() {
                        return CertificateReport::reject(Some(k), format!("block {k} leaks out of its block at {t}"));
                    }
                }
                if arrow == Some(true) && image.is_empty() {
                    return CertificateReport::reject(Some(k), format!("block {k} needs an arrow out of {b}"));
                }
            }
        }
    }
    CertificateReport { accepted: true, failing_block: None, reason: None }
}

fn support_at(block: &CertificateBlock, slot: usize) -> Bidegree {
    block.positions[slot].0
}

/// A complex given as a subcomplex of the input: `embed[b]` has the subcomplex basis as
/// columns.
struct Remainder {
    complex: DoubleComplex,
    embed: BTreeMap<Bidegree, Matrix>,
}

/// Chain maps `Z → A` from a shape with one-dimensional components, as vectors `v_x ∈ A^x`.
fn shape_homs(a: &DoubleComplex, model: &DoubleComplex, support: &[Bidegree]) -> Subspace {
    let mut sys = BlockSystem::new(support.iter().map(|&x| a.dim(x)).collect());
    for (i, &x) in support.iter().enumerate() {
        for (shift, a_map, z_map) in [((1, 0), a.d1(x), model.d1(x)), ((0, 1), a.d2(x), model.d2(x))] {
            let y = x.shift(shift.0, shift.1);
            let mut terms = vec![(i, a_map.into_owned())];
            if let Some(j) = support.iter().position(|&s| s == y) {
                let coeff = z_map[(0, 0)].clone();
                terms.push((j, Matrix::identity(a.dim(y)).scale(&-coeff)));
            }
            sys.equation(a.dim(y), terms).expect("shapes agree");
        }
    }
    sys.solutions()
}

/// Chain maps `g : A → Z` with `g ∘ f = id`, as row vectors `w_x`; `None` if `f` does not split.
fn splitting(
    a: &DoubleComplex,
    model: &DoubleComplex,
    support: &[Bidegree],
    f: &[Vec<Rational>],
) -> Option<Vec<Vec<Rational>>> {
    let grid = a.grid();
    let n = support.len();
    let mut dims: Vec<usize> = support.iter().map(|&x| a.dim(x)).collect();
    dims.push(1);
    let mut sys = BlockSystem::new(dims);
    let slot = |b: Bidegree| support.iter().position(|&s| s == b);
    for src in grid.bidegrees() {
        for (shift, is_d1) in [((1, 0), true), ((0, 1), false)] {
            let tgt = src.shift(shift.0, shift.1);
            let (s_slot, t_slot) = (slot(src), slot(tgt));
            if s_slot.is_none() && t_slot.is_none() {
                continue;
            }
            let a_map = if is_d1 { a.d1(src) } else { a.d2(src) };
            let mut terms = Vec::new();
            if let Some(t) = t_slot {
                terms.push((t, a_map.transpose()));
            }
            if let Some(s) = s_slot {
                let z = if is_d1 { model.d1(src) } else { model.d2(src) };
                if t_slot.is_some() && !z.is_zero() {
                    terms.push((s, Matrix::identity(a.dim(src)).scale(&-z[(0, 0)].clone())));
                }
            }
            if !terms.is_empty() {
                sys.equation(a.dim(src), terms).expect("shapes agree");
            }
        }
    }
    for (i, v) in f.iter().enumerate() {
        let row = Matrix::from_rows(vec![v.clone()]);
        sys.equation(1, vec![(i, row), (n, -&Matrix::identity(1))]).expect("shapes agree");
    }
    let mut sol = sys.solve_with(n, &[Rational::one()])?;
    sol.pop();
    Some(sol)
}

fn restrict(rem: &Remainder, keep: &BTreeMap<Bidegree, Matrix>) -> Remainder {
    let a = &rem.complex;
    let grid = a.grid();
    let basis = |b: Bidegree| keep.get(&b).cloned().unwrap_or_else(|| Matrix::identity(a.dim(b)));
    let mut data = ComplexData::new(a.name().to_string(), grid, |b| basis(b).cols());
    for b in grid.bidegrees() {
        for (shift, is_d1) in [((1, 0), true), ((0, 1), false)] {
            let t = b.shift(shift.0, shift.1);
            if !grid.contains(t) {
                continue;
            }
            let map = if is_d1 { a.d1(b) } else { a.d2(b) };
            let image = &*map * &basis(b);
            let coords = basis(t).solve_many(&image).expect("kernels of a chain map form a subcomplex");
            if is_d1 {
                data.set_d1(b, coords).expect("shapes agree");
            } else {
                data.set_d2(b, coords).expect("shapes agree");
            }
        }
    }
    let complex = DoubleComplex::new(data).expect("subcomplexes satisfy the identities");
    let embed = grid.bidegrees().map(|b| (b, &rem.embed[&b] * &basis(b))).collect();
    Remainder { complex, embed }
}

const SPLIT_ATTEMPTS: usize = 32;

/// Splits off the shapes of `inventory` one at a time through random split embeddings and
/// returns the resulting basis certificate.
pub fn constructive_decomposition(
    c: &DoubleComplex,
    inventory: &ShapeInventory,
    seed: u64,
) -> Result<DecompositionCertificate, ZigzagError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = c.grid();
    let mut rem = Remainder {
        complex: c.clone(),
        embed: grid.bidegrees().map(|b| (b, Matrix::identity(c.dim(b)))).collect(),
    };
    let mut columns: BTreeMap<Bidegree, Vec<Vec<Rational>>> = BTreeMap::new();
    let mut order = Vec::new();
    // Larger shapes first keeps the homomorphism spaces small.
    let mut shapes: Vec<Shape> = inventory.shapes().collect();
    shapes.sort_by_key(|s| std::cmp::Reverse(s.dim()));
    for shape in shapes {
        let model = shape.build_in(grid).map_err(|_| ZigzagError::Infeasible)?;
        let support = shape.support();
        let homs = shape_homs(&rem.complex, &model, &support);
        if homs.is_zero() {
            return Err(ZigzagError::NoSplitting { shape, attempts: 0 });
        }
        let dims: Vec<usize> = support.iter().map(|&x| rem.complex.dim(x)).collect();
        let mut split = None;
        for _ in 0..SPLIT_ATTEMPTS {
            let mut flat = vec![Rational::zero(); homs.ambient_dim()];
            for v in homs.vectors() {
                let k = rat(rng.gen_range(-3..=3));
                for (x, y) in flat.iter_mut().zip(v) {
                    *x += &k * y;
                }
            }
            let mut f = Vec::with_capacity(dims.len());
            let mut offset = 0;
            for &d in &dims {
                f.push(flat[offset..offset + d].to_vec());
                offset += d;
            }
            if let Some(g) = splitting(&rem.complex, &model, &support, &f) {
                split = Some((f, g));
                break;
            }
        }
        let (f, g) = split.ok_or(ZigzagError::NoSplitting { shape, attempts: SPLIT_ATTEMPTS })?;
        let mut keep: BTreeMap<Bidegree, Matrix> = BTreeMap::new();
        for (i, &x) in support.iter().enumerate() {
            columns.entry(x).or_default().push(rem.embed[&x].mul_vec(&f[i]));
            let w = Matrix::from_rows(vec![g[i].clone()]);
            keep.insert(x, w.kernel().basis());
        }
        order.push(shape);
        rem = restrict(&rem, &keep);
    }
    let remaining = rem.complex.total_dim();
    if remaining > 0 {
        return Err(ZigzagError::Leftover { remaining });
    }
    let bases = columns.into_iter().map(|(b, cols)| (b, Matrix::from_columns(c.dim(b), &cols))).collect();
    Ok(DecompositionCertificate { bases, blocks: stacked_positions(&order) })
}

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bicomplex::{Bidegree, ComplexData, ComplexError, DoubleComplex, Grid};
use crate::linalg::Matrix;

/// A zigzag generated by `a_1, …, a_g` on one antidiagonal, each generator one step
/// down-right of the previous: `a_i` sits at `start + (i−1)·(1,−1)`.
///
/// The images `t_i = d1 a_i = d2 a_{i+1}` (`1 ≤ i < g`) are nonzero. `left` adds
/// `t_0 = d2 a_1 ≠ 0` and `right` adds `t_g = d1 a_g ≠ 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ZigzagShape {
    pub start: Bidegree,
    pub generators: usize,
    pub left: bool,
    pub right: bool,
}

/// Classification of zigzags by their two outer arrows.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ZigzagKind {
    /// A single generator with no arrows.
    Dot,
    /// Even length, `d2 a_1 = 0` and `d1 a_g ≠ 0`.
    EvenI,
    /// Even length, `d2 a_1 ≠ 0` and `d1 a_g = 0`.
    EvenII,
    /// Odd length at least 3 with both outer arrows absent.
    OddM,
    /// Odd length at least 3 with both outer arrows present.
    OddL,
}

/// Basis element of a zigzag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ZigzagElement {
    /// `a_i`, `1 ≤ i ≤ g`.
    Generator(usize),
    /// `t_i`, `0 ≤ i ≤ g`.
    Image(usize),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ShapeError {
    #[error("a zigzag needs at least one generator")]
    Empty,
    #[error("generator {index} at {found} does not continue the staircase (expected {expected})")]
    Staircase { index: usize, found: Bidegree, expected: Bidegree },
    #[error("shape leaves the grid at {0}")]
    OutsideGrid(Bidegree),
}

impl ZigzagShape {
    pub fn new(start: Bidegree, generators: usize, left: bool, right: bool) -> Self {
        assert!(generators >= 1, "a zigzag needs at least one generator");
        ZigzagShape { start, generators, left, right }
    }

    pub fn dot(at: Bidegree) -> Self {
        Self::new(at, 1, false, false)
    }

    /// Builds a shape from explicit generator bidegrees, checking the staircase.
    pub fn from_generators(bidegrees: &[Bidegree], left: bool, right: bool) -> Result<Self, ShapeError> {
        let &start = bidegrees.first().ok_or(ShapeError::Empty)?;
        for (i, pair) in bidegrees.windows(2).enumerate() {
            let expected = pair[0].shift(1, -1);
            if pair[1] != expected {
                return Err(ShapeError::Staircase { index: i + 2, found: pair[1], expected });
            }
        }
        Ok(Self::new(start, bidegrees.len(), left, right))
    }

    pub fn len(&self) -> usize {
        2 * self.generators - 1 + usize::from(self.left) + usize::from(self.right)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_dot(&self) -> bool {
        self.len() == 1
    }

    pub fn kind(&self) -> ZigzagKind {
        match (self.left, self.right) {
            (false, false) if self.generators == 1 => ZigzagKind::Dot,
            (false, false) => ZigzagKind::OddM,
            (true, true) => ZigzagKind::OddL,
            (false, true) => ZigzagKind::EvenI,
            (true, false) => ZigzagKind::EvenII,
        }
    }

    /// Total degree of the generators.
    pub fn degree(&self) -> i32 {
        self.start.total()
    }

    pub fn generator_bidegrees(&self) -> Vec<Bidegree> {
        (0..self.generators as i32).map(|i| self.start.shift(i, -i)).collect()
    }

    pub fn position(&self, e: ZigzagElement) -> Bidegree {
        match e {
            ZigzagElement::Generator(i) => self.start.shift(i as i32 - 1, 1 - i as i32),
            ZigzagElement::Image(i) => self.start.shift(i as i32, 1 - i as i32),
        }
    }

    /// Basis elements, generators first then images, each in index order.
    pub fn elements(&self) -> Vec<ZigzagElement> {
        let g = self.generators;
        let mut out: Vec<ZigzagElement> = (1..=g).map(ZigzagElement::Generator).collect();
        if self.left {
            out.push(ZigzagElement::Image(0));
        }
        out.extend((1..g).map(ZigzagElement::Image));
        if self.right {
            out.push(ZigzagElement::Image(g));
        }
        out
    }
}

impl fmt::Display for ZigzagShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dot() {
            return write!(f, "dot at {}", self.start);
        }
        let kind = match self.kind() {
            ZigzagKind::EvenI => "even, right arrow",
            ZigzagKind::EvenII => "even, left arrow",
            ZigzagKind::OddM => "odd, no outer arrows",
            ZigzagKind::OddL => "odd, both outer arrows",
            ZigzagKind::Dot => unreachable!(),
        };
        write!(f, "zigzag of length {} from {} ({kind})", self.len(), self.start)
    }
}

/// An indecomposable bounded double complex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Generated by `a` at the given bidegree with `d1 d2 a ≠ 0`.
    Square(Bidegree),
    Zigzag(ZigzagShape),
}

impl Shape {
    pub fn dot(at: Bidegree) -> Self {
        Shape::Zigzag(ZigzagShape::dot(at))
    }

    /// Bidegrees of the one-dimensional components, in basis order.
    pub fn support(&self) -> Vec<Bidegree> {
        match self {
            Shape::Square(b) => vec![*b, b.shift(1, 0), b.shift(0, 1), b.shift(1, 1)],
            Shape::Zigzag(z) => z.elements().into_iter().map(|e| z.position(e)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::Square(_) => 4,
            Shape::Zigzag(z) => z.len(),
        }
    }

    pub fn fits(&self, grid: Grid) -> bool {
        self.support().into_iter().all(|b| grid.contains(b))
    }

    /// Smallest grid containing the shape, assuming nonnegative coordinates.
    pub fn min_grid(&self) -> Grid {
        let s = self.support();
        let p = s.iter().map(|b| b.p).max().unwrap_or(0).max(0) as usize + 1;
        let q = s.iter().map(|b| b.q).max().unwrap_or(0).max(0) as usize + 1;
        Grid::new(p, q)
    }

    /// Builds the shape on `grid`.
    pub fn build_in(&self, grid: Grid) -> Result<DoubleComplex, ShapeError> {
        if let Some(&b) = self.support().iter().find(|&&b| !grid.contains(b)) {
            return Err(ShapeError::OutsideGrid(b));
        }
        let support = self.support();
        let mut data = ComplexData::new(self.to_string(), grid, |b| usize::from(support.contains(&b)));
        let one = Matrix::identity(1);
        let mut set = |d1: bool, at: Bidegree, m: Matrix| -> Result<(), ComplexError> {
            if d1 {
                data.set_d1(at, m)
            } else {
                data.set_d2(at, m)
            }
        };
        match self {
            Shape::Square(b) => {
                set(true, *b, one.clone()).expect("square shapes agree");
                set(false, *b, one.clone()).expect("square shapes agree");
                set(true, b.shift(0, 1), one.clone()).expect("square shapes agree");
                set(false, b.shift(1, 0), -&one).expect("square shapes agree");
            }
            Shape::Zigzag(z) => {
                let g = z.generators;
                for i in 1..=g {
                    let a = z.position(ZigzagElement::Generator(i));
                    if i < g || z.right {
                        set(true, a, one.clone()).expect("zigzag shapes agree");
                    }
                    if i > 1 || z.left {
                        set(false, a, one.clone()).expect("zigzag shapes agree");
                    }
                }
            }
        }
        Ok(DoubleComplex::new(data).expect("indecomposables satisfy the identities"))
    }

    pub fn build(&self) -> DoubleComplex {
        self.build_in(self.min_grid()).expect("the minimal grid contains the shape")
    }

    fn sort_key(&self) -> (Vec<Bidegree>, usize, u8) {
        let mut s = self.support();
        s.sort();
        let tag = match self {
            Shape::Square(_) => 0,
            Shape::Zigzag(z) => 1 + u8::from(z.left) * 2 + u8::from(z.right),
        };
        (s, self.dim(), tag)
    }
}

impl PartialOrd for Shape {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Shape {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Square(b) => write!(f, "square at {b}"),
            Shape::Zigzag(z) => z.fmt(f),
        }
    }
}

/// The square generated at `(p,q)` on its minimal grid.
pub fn build_square(p: i32, q: i32) -> DoubleComplex {
    Shape::Square(Bidegree::new(p, q)).build()
}

pub fn build_zigzag(shape: ZigzagShape) -> DoubleComplex {
    Shape::Zigzag(shape).build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_and_kinds() {
        let s = Bidegree::new(0, 3);
        assert_eq!(ZigzagShape::dot(s).len(), 1);
        assert_eq!(ZigzagShape::new(s, 2, true, true).len(), 5);
        assert_eq!(ZigzagShape::new(s, 2, false, true).kind(), ZigzagKind::EvenI);
        assert_eq!(ZigzagShape::new(s, 2, false, false).kind(), ZigzagKind::OddM);
        assert_eq!(ZigzagShape::new(s, 1, true, false).len(), 2);
    }

    #[test]
    fn staircase_is_checked() {
        let ok = ZigzagShape::from_generators(&[Bidegree::new(0, 2), Bidegree::new(1, 1)], false, true).unwrap();
        assert_eq!(ok.generator_bidegrees(), vec![Bidegree::new(0, 2), Bidegree::new(1, 1)]);
        let bad = ZigzagShape::from_generators(&[Bidegree::new(0, 2), Bidegree::new(1, 2)], false, true);
        assert!(matches!(bad, Err(ShapeError::Staircase { index: 2, .. })));
        assert_eq!(ZigzagShape::from_generators(&[], false, false), Err(ShapeError::Empty));
    }

    #[test]
    fn built_shapes_have_expected_dimensions() {
        let sq = build_square(0, 0);
        assert_eq!(sq.total_dim(), 4);
        let z = build_zigzag(ZigzagShape::new(Bidegree::new(0, 2), 3, true, false));
        assert_eq!(z.total_dim(), 6);
        assert_eq!(z.dim(Bidegree::new(0, 3)), 1);
        let outside = Shape::Square(Bidegree::new(1, 1)).build_in(Grid::new(2, 2));
        assert!(matches!(outside, Err(ShapeError::OutsideGrid(_))));
    }
}

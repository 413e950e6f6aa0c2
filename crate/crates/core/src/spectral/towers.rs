//! Tower spaces shared by the spectral, Bott-Chern/Aeppli and harmonic computations.
//!
//! Every construction is phrased with two operators: `close` (the map whose kernel is
//! asked for, `d2` for the column filtration) and `run` (the map that has to keep running,
//! `d1`). Exchanging the two gives the conjugate versions, and substituting adjoints gives
//! the star versions.

use crate::bicomplex::{Bidegree, DoubleComplex};
use crate::linalg::{BlockSystem, Matrix, Subspace};

/// A structure map or its adjoint.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Op {
    D1,
    D2,
    D1Adj,
    D2Adj,
}

impl Op {
    pub fn shift(self) -> (i32, i32) {
        match self {
            Op::D1 => (1, 0),
            Op::D2 => (0, 1),
            Op::D1Adj => (-1, 0),
            Op::D2Adj => (0, -1),
        }
    }

    pub fn apply(self, b: Bidegree) -> Bidegree {
        let (dp, dq) = self.shift();
        b.shift(dp, dq)
    }

    pub fn unapply(self, b: Bidegree) -> Bidegree {
        let (dp, dq) = self.shift();
        b.shift(-dp, -dq)
    }
}

/// Anything that can supply component dimensions and the four operator matrices.
pub trait Operators: Sync {
    fn dim(&self, b: Bidegree) -> usize;
    /// Matrix of `op` from `b` to `op.apply(b)`.
    fn op(&self, op: Op, b: Bidegree) -> Matrix;
}

/// Structure maps of a complex, with adjoints taken for the standard inner product.
impl Operators for DoubleComplex {
    fn dim(&self, b: Bidegree) -> usize {
        DoubleComplex::dim(self, b)
    }

    fn op(&self, op: Op, b: Bidegree) -> Matrix {
        match op {
            Op::D1 => self.d1(b).into_owned(),
            Op::D2 => self.d2(b).into_owned(),
            Op::D1Adj => self.d1(b.shift(-1, 0)).transpose(),
            Op::D2Adj => self.d2(b.shift(0, -1)).transpose(),
        }
    }
}

fn step(close: Op, run: Op) -> (i32, i32) {
    let (a, b) = run.shift();
    let (c, d) = close.shift();
    (a - c, b - d)
}

/// Elements `α` at `b` with `close α = 0`, `run α = close u_1`, `run u_i = close u_{i+1}`,
/// the last equation involving `u_{r−1}`. For `r = 1` this is `ker close`.
pub fn closed<O: Operators + ?Sized>(ops: &O, close: Op, run: Op, r: usize, b: Bidegree) -> Subspace {
    assert!(r >= 1, "tower index starts at 1");
    let (dp, dq) = step(close, run);
    let at = |i: usize| b.shift(dp * i as i32, dq * i as i32);
    let dims: Vec<usize> = (0..r).map(|i| ops.dim(at(i))).collect();
    let mut sys = BlockSystem::new(dims);
    sys.equation(ops.dim(close.apply(b)), vec![(0, ops.op(close, b))]).expect("tower shapes agree");
    for i in 0..r - 1 {
        let target = run.apply(at(i));
        sys.equation(ops.dim(target), vec![(i, ops.op(run, at(i))), (i + 1, -&ops.op(close, at(i + 1)))])
            .expect("tower shapes agree");
    }
    sys.project(0).expect("block 0 exists")
}

/// Elements `α` at `b` for which `run α` keeps running `s` times:
/// `run α = close η_1`, `run η_j = close η_{j+1}` for `j < s`.
pub fn runs<O: Operators + ?Sized>(ops: &O, run: Op, close: Op, s: usize, b: Bidegree) -> Subspace {
    if s == 0 {
        return Subspace::full(ops.dim(b));
    }
    let (dp, dq) = step(close, run);
    let at = |i: usize| b.shift(dp * i as i32, dq * i as i32);
    let dims: Vec<usize> = (0..=s).map(|i| ops.dim(at(i))).collect();
    let mut sys = BlockSystem::new(dims);
    for i in 0..s {
        let target = run.apply(at(i));
        sys.equation(ops.dim(target), vec![(i, ops.op(run, at(i))), (i + 1, -&ops.op(close, at(i + 1)))])
            .expect("tower shapes agree");
    }
    sys.project(0).expect("block 0 exists")
}

/// Elements `ζ` at `b` for which `close ζ` reaches zero in at most `s − 1` further steps:
/// `close w_k = run w_{k+1}` for `k < s − 1` and `close w_{s−1} = 0`, with `w_0 = ζ`.
/// `s = 1` gives `ker close`; `s = 0` gives the zero space.
pub fn reaches_zero<O: Operators + ?Sized>(ops: &O, close: Op, run: Op, s: usize, b: Bidegree) -> Subspace {
    if s == 0 {
        return Subspace::zero(ops.dim(b));
    }
    let (dp, dq) = step(run, close);
    let at = |i: usize| b.shift(dp * i as i32, dq * i as i32);
    let dims: Vec<usize> = (0..s).map(|i| ops.dim(at(i))).collect();
    let mut sys = BlockSystem::new(dims);
    for k in 0..s - 1 {
        let target = close.apply(at(k));
        sys.equation(ops.dim(target), vec![(k, ops.op(close, at(k))), (k + 1, -&ops.op(run, at(k + 1)))])
            .expect("tower shapes agree");
    }
    sys.equation(ops.dim(close.apply(at(s - 1))), vec![(s - 1, ops.op(close, at(s - 1)))])
        .expect("tower shapes agree");
    sys.project(0).expect("block 0 exists")
}

/// `Im close + run(reaches_zero(close, run, r − 1))` at `b`.
pub fn exact<O: Operators + ?Sized>(ops: &O, close: Op, run: Op, r: usize, b: Bidegree) -> Subspace {
    assert!(r >= 1, "tower index starts at 1");
    let from_close = close.unapply(b);
    let mut space = ops.op(close, from_close).image();
    if r >= 2 {
        let from_run = run.unapply(b);
        let src = reaches_zero(ops, close, run, r - 1, from_run);
        let img = src.map(&ops.op(run, from_run)).expect("shapes agree");
        space = space.sum(&img).expect("same ambient");
    }
    space
}

/// Two-sided closedness: `ker(run ∘ close)` for `r = 1`, otherwise the intersection of
/// the two one-sided running conditions of length `r − 1`.
pub fn two_sided_closed<O: Operators + ?Sized>(ops: &O, a: Op, b_op: Op, r: usize, b: Bidegree) -> Subspace {
    assert!(r >= 1, "tower index starts at 1");
    if r == 1 {
        let composite = &ops.op(b_op, a.apply(b)) * &ops.op(a, b);
        return composite.kernel();
    }
    let first = runs(ops, a, b_op, r - 1, b);
    let second = runs(ops, b_op, a, r - 1, b);
    first.intersection(&second).expect("same ambient")
}

/// Two-sided exactness: `Im(a ∘ b_op)` plus, for `r ≥ 2`, `a(reaches_zero(b_op, a, r − 1))`
/// and `b_op(reaches_zero(a, b_op, r − 1))`.
pub fn two_sided_exact<O: Operators + ?Sized>(ops: &O, a: Op, b_op: Op, r: usize, b: Bidegree) -> Subspace {
    assert!(r >= 1, "tower index starts at 1");
    let corner = a.unapply(b_op.unapply(b));
    let composite = &ops.op(a, b_op.apply(corner)) * &ops.op(b_op, corner);
    let mut space = composite.image();
    if r >= 2 {
        let from_a = a.unapply(b);
        let za = reaches_zero(ops, b_op, a, r - 1, from_a).map(&ops.op(a, from_a)).expect("shapes agree");
        let from_b = b_op.unapply(b);
        let zb = reaches_zero(ops, a, b_op, r - 1, from_b).map(&ops.op(b_op, from_b)).expect("shapes agree");
        space = space.sum(&za).and_then(|s| s.sum(&zb)).expect("same ambient");
    }
    space
}

use crate::linalg::{Matrix, Rational, Subspace};

use super::{Bidegree, DoubleComplex};

/// The total complex `T^k = ⊕_{p+q=k} A^{p,q}` with `D = d1 + d2`.
///
/// Blocks inside each degree are ordered lexicographically in `(p,q)`.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    blocks: Vec<Vec<(Bidegree, usize, usize)>>,
    dims: Vec<usize>,
    differentials: Vec<Matrix>,
}

impl TotalComplex {
    pub fn degrees(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `D_k : T^k → T^{k+1}`.
    pub fn differential(&self, k: usize) -> Matrix {
        match self.differentials.get(k) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.dim(k + 1), self.dim(k)),
        }
    }

    /// `(bidegree, offset, dim)` of each block in degree `k`.
    pub fn blocks(&self, k: usize) -> &[(Bidegree, usize, usize)] {
        self.blocks.get(k).map_or(&[], Vec::as_slice)
    }

    /// Embeds a pure-type vector into its total degree.
    pub fn embed(&self, b: Bidegree, v: &[Rational]) -> Vec<Rational> {
        let k = b.total() as usize;
        let mut out = vec![num_traits::Zero::zero(); self.dim(k)];
        let &(_, off, d) = self.blocks(k).iter().find(|(x, _, _)| *x == b).expect("bidegree in grid");
        assert_eq!(v.len(), d, "vector length does not match component");
        out[off..off + d].clone_from_slice(v);
        out
    }

    /// The `(p,q)` component of a vector of total degree `p + q`.
    pub fn component(&self, b: Bidegree, v: &[Rational]) -> Vec<Rational> {
        let k = b.total() as usize;
        let &(_, off, d) = self.blocks(k).iter().find(|(x, _, _)| *x == b).expect("bidegree in grid");
        v[off..off + d].to_vec()
    }

    pub fn cocycles(&self, k: usize) -> Subspace {
        self.differential(k).kernel()
    }

    pub fn coboundaries(&self, k: usize) -> Subspace {
        if k == 0 {
            Subspace::zero(self.dim(0))
        } else {
            self.differential(k - 1).image()
        }
    }

    /// Pure-type `d`-exact vectors at `b`, i.e. `Im D ∩ A^{p,q}` in component coordinates.
    pub fn pure_exact(&self, b: Bidegree) -> Subspace {
        let k = b.total() as usize;
        let &(_, off, d) = self.blocks(k).iter().find(|(x, _, _)| *x == b).expect("bidegree in grid");
        let mut inclusion = Matrix::zeros(self.dim(k), d);
        for i in 0..d {
            inclusion[(off + i, i)] = num_traits::One::one();
        }
        Subspace::preimage(&inclusion, &self.coboundaries(k)).expect("shapes agree")
    }
}

pub fn total_complex(c: &DoubleComplex) -> TotalComplex {
    let grid = c.grid();
    let degrees = grid.total_degrees();
    let mut blocks: Vec<Vec<(Bidegree, usize, usize)>> = degrees.clone().map(|_| Vec::new()).collect();
    let mut dims = vec![0; blocks.len()];
    for b in grid.bidegrees() {
        let k = b.total() as usize;
        let d = c.dim(b);
        blocks[k].push((b, dims[k], d));
        dims[k] += d;
    }
    let differentials = degrees
        .map(|k| {
            let k = k as usize;
            let rows = dims.get(k + 1).copied().unwrap_or(0);
            let mut m = Matrix::zeros(rows, dims[k]);
            for &(b, col, _) in &blocks[k] {
                if let Some(next) = blocks.get(k + 1) {
                    for &(t, row, _) in next {
                        if t == b.shift(1, 0) {
                            m.set_block(row, col, &c.d1(b));
                        } else if t == b.shift(0, 1) {
                            m.set_block(row, col, &c.d2(b));
                        }
                    }
                }
            }
            m
        })
        .collect();
    let t = TotalComplex { blocks, dims, differentials };
    debug_assert!((0..t.degrees()).all(|k| (&t.differential(k + 1) * &t.differential(k)).is_zero()));
    t
}

/// Betti numbers `b_k = dim ker D_k − rank D_{k−1}` for every total degree on the grid.
pub fn de_rham_dims(t: &TotalComplex) -> Vec<usize> {
    let ranks: Vec<usize> = (0..t.degrees()).map(|k| t.differential(k).rank()).collect();
    (0..t.degrees())
        .map(|k| t.dim(k) - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] })
        .collect()
}

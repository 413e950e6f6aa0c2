use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{rat, Matrix};
use crate::models::Shape;
use crate::zigzag::enumerate_shapes;

use super::{change_of_basis, direct_sum_all, Bidegree, DoubleComplex, Grid};

/// A direct sum of known indecomposables hidden behind a random change of basis.
#[derive(Clone, Debug)]
pub struct ScrambledSum {
    pub complex: DoubleComplex,
    /// Summands in basis order.
    pub shapes: Vec<Shape>,
    /// Basis change applied to the plain direct sum, per bidegree.
    pub transforms: BTreeMap<Bidegree, Matrix>,
}

/// Invertible integer matrix `L·U` with unit diagonals and small entries.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut lower = Matrix::identity(n);
    let mut upper = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower[(i, j)] = rat(rng.gen_range(-2..=2));
            upper[(j, i)] = rat(rng.gen_range(-2..=2));
        }
    }
    &lower * &upper
}

/// Random sum of at most `max_shapes` squares, dots and zigzags fitting `grid` with all
/// components of dimension at most `max_dim`, scrambled by a random basis change.
pub fn random_scrambled_sum(grid: Grid, max_dim: usize, max_shapes: usize, seed: u64) -> ScrambledSum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = enumerate_shapes(grid);
    let squares: Vec<&Shape> = all.iter().filter(|s| matches!(s, Shape::Square(_))).collect();
    let dots: Vec<&Shape> = all.iter().filter(|s| matches!(s, Shape::Zigzag(z) if z.is_dot())).collect();
    let zigzags: Vec<&Shape> = all.iter().filter(|s| matches!(s, Shape::Zigzag(z) if !z.is_dot())).collect();
    let pools: Vec<&Vec<&Shape>> = [&squares, &dots, &zigzags].into_iter().filter(|p| !p.is_empty()).collect();
    let mut dims: BTreeMap<Bidegree, usize> = BTreeMap::new();
    let mut shapes = Vec::new();
    if max_dim > 0 && !pools.is_empty() {
        let target = rng.gen_range(0..=max_shapes);
        let mut attempts = 0;
        while shapes.len() < target && attempts < 8 * max_shapes.max(1) {
            attempts += 1;
            let pool = pools[rng.gen_range(0..pools.len())];
            let shape = *pool[rng.gen_range(0..pool.len())];
            if shape.support().iter().all(|b| dims.get(b).copied().unwrap_or(0) < max_dim) {
                for b in shape.support() {
                    *dims.entry(b).or_insert(0) += 1;
                }
                shapes.push(shape);
            }
        }
    }
    let parts: Vec<DoubleComplex> = shapes.iter().map(|s| s.build_in(grid).expect("enumerated shapes fit")).collect();
    let plain = direct_sum_all(grid, &parts);
    let transforms: BTreeMap<Bidegree, Matrix> = grid
        .bidegrees()
        .filter(|&b| plain.dim(b) > 0)
        .map(|b| (b, random_unimodular(&mut rng, plain.dim(b))))
        .collect();
    let complex = change_of_basis(&plain, &|b| transforms.get(&b).cloned())
        .expect("unimodular transforms are invertible")
        .with_name(format!("random sum (seed {seed})"));
    ScrambledSum { complex, shapes, transforms }
}

/// Deterministic random valid complex on `grid` with components of dimension at most
/// `max_dim`.
pub fn random_complex(grid: Grid, max_dim: usize, seed: u64) -> DoubleComplex {
    let max_shapes = 2 * grid.len();
    random_scrambled_sum(grid, max_dim, max_shapes, seed).complex.with_name(format!("random complex (seed {seed})"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        let g = Grid::new(4, 4);
        let a = random_complex(g, 3, 7);
        let b = random_complex(g, 3, 7);
        assert_eq!(a, b);
        assert!(g.bidegrees().all(|x| a.dim(x) <= 3));
        assert_eq!(random_complex(g, 0, 7).total_dim(), 0);
    }
}

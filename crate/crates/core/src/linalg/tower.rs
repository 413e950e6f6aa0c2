use super::{LinalgError, Matrix, Subspace};

/// A homogeneous linear system over stacked unknown blocks `x_0, …, x_{n-1}`.
///
/// Each equation is `Σ_j M_j · x_{b_j} = 0` with all `M_j` sharing one row count.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    block_dims: Vec<usize>,
    equations: Vec<(usize, Vec<(usize, Matrix)>)>,
}

impl BlockSystem {
    pub fn new(block_dims: Vec<usize>) -> Self {
        BlockSystem { block_dims, equations: Vec::new() }
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    /// Adds the equation `Σ terms = 0` whose values live in a space of dimension `height`.
    pub fn equation(&mut self, height: usize, terms: Vec<(usize, Matrix)>) -> Result<(), LinalgError> {
        for (block, m) in &terms {
            let Some(&width) = self.block_dims.get(*block) else {
                return Err(LinalgError::Shape(format!("equation refers to missing block {block}")));
            };
            if m.shape() != (height, width) {
                return Err(LinalgError::Shape(format!(
                    "block {block} expects a {height}x{width} coefficient, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        self.equations.push((height, terms));
        Ok(())
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.block_dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    /// The assembled coefficient matrix.
    pub fn assemble(&self) -> Matrix {
        let width: usize = self.block_dims.iter().sum();
        let height: usize = self.equations.iter().map(|(h, _)| h).sum();
        let offsets = self.offsets();
        let mut m = Matrix::zeros(height, width);
        let mut row = 0;
        for (h, terms) in &self.equations {
            for (block, coeff) in terms {
                for i in 0..*h {
                    for j in 0..coeff.cols() {
                        let x = &coeff[(i, j)];
                        if !num_traits::Zero::is_zero(x) {
                            m[(row + i, offsets[*block] + j)] += x;
                        }
                    }
                }
            }
            row += h;
        }
        m
    }

    /// Full solution space in stacked coordinates.
    pub fn solutions(&self) -> Subspace {
        self.assemble().kernel()
    }

    /// Projection of the solution space onto block `target`.
    pub fn project(&self, target: usize) -> Result<Subspace, LinalgError> {
        if target >= self.block_dims.len() {
            return Err(LinalgError::Shape(format!("projection onto missing block {target}")));
        }
        let offset = self.offsets()[target];
        let dim = self.block_dims[target];
        if self.equations.is_empty() {
            return Ok(Subspace::full(dim));
        }
        let k = self.solutions();
        Ok(Subspace::span(dim, k.vectors().iter().map(|v| v[offset..offset + dim].to_vec())))
    }

    /// One solution whose block `fixed` equals `value`, or `None` if there is none.
    pub fn solve_with(&self, fixed: usize, value: &[super::Rational]) -> Option<Vec<Vec<super::Rational>>> {
        let offsets = self.offsets();
        let width: usize = self.block_dims.iter().sum();
        let a = self.assemble();
        let free: Vec<usize> = (0..width)
            .filter(|&j| j < offsets[fixed] || j >= offsets[fixed] + self.block_dims[fixed])
            .collect();
        let mut rhs = vec![num_traits::Zero::zero(); a.rows()];
        for (k, x) in value.iter().enumerate() {
            if num_traits::Zero::is_zero(x) {
                continue;
            }
            for (i, r) in rhs.iter_mut().enumerate() {
                let c = &a[(i, offsets[fixed] + k)];
                if !num_traits::Zero::is_zero(c) {
                    *r -= c * x;
                }
            }
        }
        let sol = a.select_columns(&free).solve(&rhs)?;
        let mut full = vec![num_traits::Zero::zero(); width];
        for (idx, &j) in free.iter().enumerate() {
            full[j] = sol[idx].clone();
        }
        full[offsets[fixed]..offsets[fixed] + self.block_dims[fixed]].clone_from_slice(value);
        Some(
            offsets
                .iter()
                .zip(&self.block_dims)
                .map(|(&o, &d)| full[o..o + d].to_vec())
                .collect(),
        )
    }
}

/// Assembles the block system, computes its kernel and projects onto block `target`.
pub fn solve_tower(system: &BlockSystem, target: usize) -> Result<Subspace, LinalgError> {
    system.project(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn single_stage_is_a_kernel() {
        let m = Matrix::from_i64(1, 2, &[1, 1]);
        let mut s = BlockSystem::new(vec![2]);
        s.equation(1, vec![(0, m.clone())]).unwrap();
        assert_eq!(solve_tower(&s, 0).unwrap(), m.kernel());
    }

    #[test]
    fn shape_errors_are_reported() {
        let mut s = BlockSystem::new(vec![2, 1]);
        assert!(s.equation(1, vec![(1, Matrix::zeros(1, 2))]).is_err());
        assert!(s.equation(1, vec![(2, Matrix::zeros(1, 1))]).is_err());
    }

    #[test]
    fn solve_with_fixed_block() {
        // x0 - x1 = 0 over one-dimensional blocks.
        let mut s = BlockSystem::new(vec![1, 1]);
        s.equation(1, vec![(0, Matrix::identity(1)), (1, -&Matrix::identity(1))]).unwrap();
        let sol = s.solve_with(0, &[rat(3)]).unwrap();
        assert_eq!(sol, vec![vec![rat(3)], vec![rat(3)]]);
    }
}

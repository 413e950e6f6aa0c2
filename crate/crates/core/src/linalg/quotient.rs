use super::{LinalgError, Matrix, Rational, Subspace};

/// A quotient `big / small` with chosen representatives and a solver for classes.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    pub big: Subspace,
    pub small: Subspace,
    /// Representatives of a basis of the quotient, drawn from `big`.
    pub reps: Vec<Vec<Rational>>,
    solver: Matrix,
}

impl QuotientBasis {
    pub fn new(big: Subspace, small: Subspace) -> Result<Self, LinalgError> {
        let reps = big.complement_of(&small)?;
        let columns: Vec<Vec<Rational>> = reps.iter().chain(small.vectors()).cloned().collect();
        let solver = Matrix::from_columns(big.ambient_dim(), &columns);
        Ok(QuotientBasis { big, small, reps, solver })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of `v`, or `None` when `v` does not lie in `big`.
    pub fn class_of(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.big.contains_vector(v) {
            return None;
        }
        let x = self.solver.solve(v)?;
        Some(x[..self.reps.len()].to_vec())
    }

    /// Matrix sending each representative of `source` to its class here.
    pub fn induced_from(&self, source: &QuotientBasis) -> Option<Matrix> {
        self.induced_by(source, |v| v.to_vec())
    }

    /// Matrix of the map `[v] ↦ [f(v)]` on representatives of `source`.
    pub fn induced_by(&self, source: &QuotientBasis, f: impl Fn(&[Rational]) -> Vec<Rational>) -> Option<Matrix> {
        let columns = source.reps.iter().map(|v| self.class_of(&f(v))).collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_columns(self.dim(), &columns))
    }
}

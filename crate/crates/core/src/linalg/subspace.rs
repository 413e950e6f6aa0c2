use num_traits::Zero;

use super::matrix::rref_in_place;
use super::{LinalgError, Matrix, Rational};

/// A subspace of `ℚ^ambient`, stored as a column-reduced echelon basis.
///
/// Basis vector `k` has a 1 at coordinate `pivots[k]` and every other basis vector is 0
/// there. Pivots increase with `k`. The representation is unique.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    vectors: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, vectors: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let vectors = (0..ambient)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = num_traits::One::one();
                v
            })
            .collect();
        Subspace { ambient, vectors, pivots: (0..ambient).collect() }
    }

    /// Canonical basis of the span of `vectors`.
    pub fn span<I: IntoIterator<Item = Vec<Rational>>>(ambient: usize, vectors: I) -> Self {
        let mut rows: Vec<Vec<Rational>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient, "vector length does not match ambient dimension"))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let pivots = rref_in_place(&mut rows, ambient);
        rows.truncate(pivots.len());
        Subspace { ambient, vectors: rows, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn vector(&self, k: usize) -> Vec<Rational> {
        self.vectors[k].clone()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis as an `ambient × dim` matrix.
    pub fn basis(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.vectors)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(LinalgError::AmbientMismatch { left: self.ambient, right: other.ambient })
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        Ok(Subspace::span(self.ambient, self.vectors.iter().chain(&other.vectors).cloned()))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let a = self.basis();
        let b = other.basis();
        let k = Matrix::hstack(self.ambient, &[&a, &(-&b)]).kernel();
        let ka = self.dim();
        let vectors: Vec<Vec<Rational>> = k
            .vectors
            .iter()
            .map(|v| a.mul_vec(&v[..ka]))
            .collect();
        Ok(Subspace::span(self.ambient, vectors))
    }

    /// Coefficients of `v` in the stored basis, or `None` when `v` lies outside.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient dimension");
        let coeffs: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, b) in coeffs.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(b) {
                if !x.is_zero() {
                    *r -= c * x;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && other.vectors.iter().all(|v| self.contains_vector(v))
    }

    pub fn quotient_dim(&self, small: &Subspace) -> Result<usize, LinalgError> {
        self.check_ambient(small)?;
        if !self.contains(small) {
            return Err(LinalgError::NotContained { big: self.dim(), small: small.dim() });
        }
        Ok(self.dim() - small.dim())
    }

    /// Vectors of `self` completing a basis of `small` to one of `self`, chosen greedily
    /// from the canonical basis of `self`. They represent a basis of `self / small`.
    pub fn complement_of(&self, small: &Subspace) -> Result<Vec<Vec<Rational>>, LinalgError> {
        self.check_ambient(small)?;
        if !self.contains(small) {
            return Err(LinalgError::NotContained { big: self.dim(), small: small.dim() });
        }
        let mut acc = small.clone();
        let mut reps = Vec::new();
        for v in &self.vectors {
            if acc.dim() == self.dim() {
                break;
            }
            if !acc.contains_vector(v) {
                acc = Subspace::span(self.ambient, acc.vectors.iter().chain(std::iter::once(v)).cloned());
                reps.push(v.clone());
            }
        }
        Ok(reps)
    }

    /// Image of the subspace under `m`.
    pub fn map(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        if m.cols() != self.ambient {
            return Err(LinalgError::Shape(format!(
                "map with {} columns applied to a subspace of ambient dimension {}",
                m.cols(),
                self.ambient
            )));
        }
        Ok(Subspace::span(m.rows(), self.vectors.iter().map(|v| m.mul_vec(v))))
    }

    /// `{x : m x ∈ target}`.
    pub fn preimage(m: &Matrix, target: &Subspace) -> Result<Subspace, LinalgError> {
        if m.rows() != target.ambient {
            return Err(LinalgError::Shape(format!(
                "map with {} rows pulled back along a subspace of ambient dimension {}",
                m.rows(),
                target.ambient
            )));
        }
        let t = target.basis();
        let k = Matrix::hstack(m.rows(), &[m, &(-&t)]).kernel();
        Ok(Subspace::span(m.cols(), k.vectors.iter().map(|v| v[..m.cols()].to_vec())))
    }

    /// Orthogonal complement with respect to the symmetric form `gram`.
    pub fn orthogonal_complement(&self, gram: &Matrix) -> Subspace {
        assert_eq!(gram.shape(), (self.ambient, self.ambient), "Gram matrix shape mismatch");
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        (&self.basis().transpose() * gram).kernel()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = Subspace::span(3, [v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, [v(&[1, 2, 1]), v(&[2, 1, -1])]);
        assert_eq!(a, b);
        assert_eq!(a.pivots(), &[0, 1]);
    }

    #[test]
    fn two_lines_in_the_plane() {
        let a = Subspace::span(2, [v(&[1, 0])]);
        let b = Subspace::span(2, [v(&[1, 1])]);
        assert!(a.sum(&b).unwrap().is_full());
        assert!(a.intersection(&b).unwrap().is_zero());
        assert_eq!(a.sum(&Subspace::zero(2)).unwrap(), a);
        assert_eq!(a.intersection(&Subspace::full(2)).unwrap(), a);
    }

    #[test]
    fn quotient_requires_containment() {
        let plane = Subspace::full(2);
        let line = Subspace::span(2, [v(&[1, 2])]);
        assert_eq!(plane.quotient_dim(&line), Ok(1));
        assert_eq!(line.quotient_dim(&line), Ok(0));
        assert!(matches!(line.quotient_dim(&plane), Err(LinalgError::NotContained { .. })));
        assert!(matches!(line.quotient_dim(&Subspace::zero(3)), Err(LinalgError::AmbientMismatch { .. })));
    }

    #[test]
    fn complement_represents_quotient() {
        let big = Subspace::full(3);
        let small = Subspace::span(3, [v(&[1, 0, 0])]);
        let reps = big.complement_of(&small).unwrap();
        assert_eq!(reps, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn preimage_and_orthogonal_complement() {
        let m = Matrix::from_i64(2, 2, &[1, 0, 0, 0]);
        let target = Subspace::zero(2);
        assert_eq!(Subspace::preimage(&m, &target).unwrap(), Subspace::span(2, [v(&[0, 1])]));
        let line = Subspace::span(2, [v(&[1, 1])]);
        assert_eq!(line.orthogonal_complement(&Matrix::identity(2)), Subspace::span(2, [v(&[1, -1])]));
    }
}

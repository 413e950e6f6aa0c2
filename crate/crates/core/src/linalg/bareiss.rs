use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Matrix, Rational};

/// Clears denominators row by row, producing an integer matrix of the same rank.
fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect()
}

/// Fraction-free elimination; returns the rank and, when square and full rank, the
/// signed determinant of the integer-scaled matrix.
fn eliminate(mut a: Vec<Vec<BigInt>>, cols: usize) -> (usize, BigInt) {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = 1;
    for c in 0..cols {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        let pivot = a[rank][c].clone();
        for i in rank + 1..n {
            let (above, below) = a.split_at_mut(i);
            let (pivot_row, row) = (&above[rank], &mut below[0]);
            let lead = std::mem::replace(&mut row[c], BigInt::zero());
            for (x, y) in row[c + 1..].iter_mut().zip(&pivot_row[c + 1..]) {
                *x = (&*x * &pivot - &lead * y) / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    let det = if rank == n && n == cols { prev * sign } else { BigInt::zero() };
    (rank, det)
}

pub fn bareiss_rank(m: &Matrix) -> usize {
    eliminate(integer_rows(m), m.cols()).0
}

pub fn determinant(m: &Matrix) -> Rational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if m.rows() == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    for i in 0..m.rows() {
        scale *= m.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    }
    let (_, det) = eliminate(integer_rows(m), m.cols());
    Rational::new(det, scale)
}

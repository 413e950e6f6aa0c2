use frolicher::linalg::{bareiss_rank, determinant, format_rational, parse_rational, rat, Matrix, QuotientBasis, Subspace};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c).prop_map(move |e| Matrix::from_i64(r, c, &e))
    })
}

fn tall(rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (0..=max_cols).prop_flat_map(move |c| prop::collection::vec(-3i64..=3, rows * c).prop_map(move |e| Matrix::from_i64(rows, c, &e)))
}

fn square(max: usize) -> impl Strategy<Value = Matrix> {
    (0..=max).prop_flat_map(|n| prop::collection::vec(-3i64..=3, n * n).prop_map(move |e| Matrix::from_i64(n, n, &e)))
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix(5, 6)) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
        prop_assert_eq!(m.image().dim(), m.rank());
        prop_assert_eq!(bareiss_rank(&m), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn kernel_vectors_are_killed(m in matrix(5, 6)) {
        for v in m.kernel().vectors() {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn inverse_and_determinant(m in square(4)) {
        let det = determinant(&m);
        match m.inverse() {
            Some(inv) => {
                prop_assert!(det != rat(0));
                prop_assert_eq!(&m * &inv, Matrix::identity(m.rows()));
            }
            None => prop_assert_eq!(det, rat(0)),
        }
    }

    #[test]
    fn modular_law_for_dimensions(a in tall(5, 3), b in tall(5, 3)) {
        let (u, w) = (a.image(), b.image());
        let sum = u.sum(&w).unwrap();
        let meet = u.intersection(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(sum.contains(&u) && sum.contains(&w));
        prop_assert!(u.contains(&meet) && w.contains(&meet));
    }

    #[test]
    fn quotient_representatives_are_independent(a in tall(5, 4), b in tall(5, 2)) {
        let big = a.image().sum(&b.image()).unwrap();
        let small = b.image();
        let q = QuotientBasis::new(big.clone(), small.clone()).unwrap();
        prop_assert_eq!(q.dim(), big.dim() - small.dim());
        for (i, v) in q.reps.iter().enumerate() {
            let class = q.class_of(v).unwrap();
            for (j, x) in class.iter().enumerate() {
                prop_assert_eq!(x.clone(), rat((i == j) as i64));
            }
        }
        for v in small.vectors() {
            prop_assert!(q.class_of(v).unwrap().iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let x = rat(n) / rat(d);
        prop_assert_eq!(parse_rational(&format_rational(&x)), Some(x));
    }
}

#[test]
fn subspace_equality_ignores_spanning_set() {
    let a = Subspace::span(3, [vec![rat(1), rat(2), rat(3)], vec![rat(0), rat(1), rat(1)]]);
    let b = Subspace::span(3, [vec![rat(1), rat(3), rat(4)], vec![rat(1), rat(1), rat(2)]]);
    assert_eq!(a, b);
}

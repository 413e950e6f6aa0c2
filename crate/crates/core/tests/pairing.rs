use frolicher::bicomplex::{random_complex, Bidegree, Grid};
use frolicher::models::{Shape, ZigzagShape};
use frolicher::pairing::{
    dual_sum, exact_closed_orthogonal, induced_pairing_bc_a, induced_pairing_bc_bc, induced_pairing_er, validate_pairing,
};
use frolicher::zigzag::enumerate_shapes;
use proptest::prelude::*;

fn check_dualities(z: &frolicher::bicomplex::DoubleComplex, r_max: usize) {
    let (c, pairing) = dual_sum(z).unwrap();
    let report = validate_pairing(&c, &pairing);
    assert!(report.valid, "{}: {:?}", c.name(), report.violations.first());
    assert!(report.perfect, "{}", c.name());
    for r in 1..=r_max {
        for b in c.grid().bidegrees() {
            let e = induced_pairing_er(&c, &pairing, r, b);
            assert!(e.well_defined && e.is_perfect(), "{} E_{r} at {b}", c.name());
            let ba = induced_pairing_bc_a(&c, &pairing, r, b).unwrap();
            assert!(ba.well_defined && ba.is_perfect(), "{} BC×A r={r} at {b}", c.name());
            assert!(exact_closed_orthogonal(&c, &pairing, r, b));
        }
        let bb = induced_pairing_bc_bc(&c, &pairing, r).unwrap();
        assert_eq!(bb.nondegenerate, bb.verdict, "{} r={r}", c.name());
        assert!(bb.blocks.iter().all(|p| p.well_defined));
    }
}

#[test]
fn every_shape_with_its_dual() {
    for shape in enumerate_shapes(Grid::new(3, 3)) {
        check_dualities(&shape.build_in(Grid::new(3, 3)).unwrap(), 3);
    }
}

#[test]
fn length_four_zigzag_self_pairing() {
    let z = Shape::Zigzag(ZigzagShape::new(Bidegree::new(0, 2), 2, false, true)).build_in(Grid::new(4, 4)).unwrap();
    assert_eq!(z.total_dim(), 4);
    let (c, pairing) = dual_sum(&z).unwrap();
    let at_two = induced_pairing_bc_bc(&c, &pairing, 2).unwrap();
    assert!(!at_two.nondegenerate && !at_two.verdict);
    let at_three = induced_pairing_bc_bc(&c, &pairing, 3).unwrap();
    assert!(at_three.nondegenerate && at_three.verdict);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn random_complex_with_its_dual(seed in 0u64..10_000) {
        check_dualities(&random_complex(Grid::new(3, 3), 2, seed), 3);
    }
}

use frolicher::bicomplex::{random_scrambled_sum, Grid};
use frolicher::zigzag::{
    constructive_decomposition, multiplicity_solve, verify_certificate, DecompositionCertificate, ShapeInventory,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn multiplicities_are_recovered(seed in any::<u64>()) {
        let sum = random_scrambled_sum(Grid::new(4, 4), 5, 8, seed);
        let solved = multiplicity_solve(&sum.complex, 4).unwrap();
        let hidden = ShapeInventory::from_shapes(sum.shapes.iter().copied());
        prop_assert_eq!(solved.unique(), Some(&hidden));
    }

    #[test]
    fn known_and_constructed_certificates_verify(seed in any::<u64>()) {
        let sum = random_scrambled_sum(Grid::new(3, 3), 3, 5, seed);
        let known = DecompositionCertificate::from_scrambled(&sum);
        prop_assert!(verify_certificate(&sum.complex, &known).accepted);
        let inventory = ShapeInventory::from_shapes(sum.shapes.iter().copied());
        let built = constructive_decomposition(&sum.complex, &inventory, seed).unwrap();
        prop_assert!(verify_certificate(&sum.complex, &built).accepted);
        prop_assert_eq!(built.inventory(), inventory);
    }
}

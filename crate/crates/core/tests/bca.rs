use frolicher::bca::{all_canonical_maps, bca_dims, evaluate, inequality_check, page_ddbar_verdict};
use frolicher::bicomplex::{random_complex, random_scrambled_sum, Grid};
use frolicher::zigzag::{predicted_invariants, structure_verdict, ShapeInventory};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_maps_commute(seed in any::<u64>()) {
        let c = random_complex(Grid::new(4, 4), 3, seed);
        for r in 1..=3 {
            for m in all_canonical_maps(&c, r).unwrap() {
                prop_assert!(m.commutes && m.bc_surjection && m.a_injection, "r={} at {}", r, m.at);
            }
        }
    }

    #[test]
    fn bca_of_sums_adds_up_and_verdicts_agree(seed in any::<u64>()) {
        let sum = random_scrambled_sum(Grid::new(4, 4), 4, 8, seed);
        let inventory = ShapeInventory::from_shapes(sum.shapes.iter().copied());
        let table = bca_dims(&sum.complex, 4).unwrap();
        for r in 1..=4 {
            for b in sum.complex.grid().bidegrees() {
                let bc: usize = sum.shapes.iter().map(|s| predicted_invariants(s, 4).bc(r, b)).sum();
                let a: usize = sum.shapes.iter().map(|s| predicted_invariants(s, 4).a(r, b)).sum();
                prop_assert_eq!((table.bc(r, b), table.a(r, b)), (bc, a));
            }
            let v = evaluate(&sum.complex, r, Some(&inventory)).unwrap();
            prop_assert_eq!(v.verdict, structure_verdict(&inventory, r));
            prop_assert!(inequality_check(&sum.complex, r).unwrap().holds());
        }
    }

    /// (C) compares sums over total degrees, so it can hold by coincidence when (B) fails;
    /// the remaining criteria must agree exactly.
    #[test]
    fn random_verdicts_are_consistent(seed in any::<u64>()) {
        let c = random_complex(Grid::new(4, 4), 3, seed);
        for r in 1..=3 {
            let v = evaluate(&c, r, None).unwrap();
            prop_assert_eq!([v.injective, v.exactness, v.identities], [v.iso; 3], "r={}", r);
            prop_assert!(!v.iso || v.equal_dims, "r={}", r);
            if v.equal_dims == v.iso {
                prop_assert!(page_ddbar_verdict(&c, r, None).is_ok());
            }
        }
    }
}

use frolicher::bicomplex::{random_complex, random_scrambled_sum, Bidegree, Grid};
use frolicher::spectral::{degeneration_page, dr_matrix, einfty_check, iterated_pages_oracle, page_dims};
use frolicher::zigzag::predicted_invariants;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pages_shrink_and_match_the_oracle(seed in any::<u64>(), p in 1usize..=4, q in 1usize..=4) {
        let c = random_complex(Grid::new(p, q), 3, seed);
        let pages = page_dims(&c, 5);
        prop_assert_eq!(&pages, &iterated_pages_oracle(&c, 5).unwrap());
        for r in 1..5 {
            for b in c.grid().bidegrees() {
                prop_assert!(pages.e(r + 1, b) <= pages.e(r, b));
                prop_assert!(pages.ebar(r + 1, b) <= pages.ebar(r, b));
            }
        }
        prop_assert!(einfty_check(&c).holds);
    }

    #[test]
    fn conjugate_pages_are_pages_of_the_swap(seed in any::<u64>()) {
        let c = random_complex(Grid::new(3, 4), 3, seed);
        let pages = page_dims(&c, 4);
        let swapped = page_dims(&c.swapped(), 4);
        for r in 1..=4 {
            for b in c.grid().bidegrees() {
                prop_assert_eq!(pages.ebar(r, b), swapped.e(r, Bidegree::new(b.q, b.p)));
            }
        }
    }

    #[test]
    fn page_differentials_square_to_zero(seed in any::<u64>()) {
        let c = random_complex(Grid::new(4, 4), 3, seed);
        let pages = page_dims(&c, 4);
        for r in 1..=3 {
            for b in c.grid().bidegrees() {
                let d = dr_matrix(&c, r, b).unwrap();
                let next = b.shift(r as i32, 1 - r as i32);
                if c.grid().contains(next) {
                    let d_next = dr_matrix(&c, r, next).unwrap();
                    prop_assert!((&d_next * &d).is_zero());
                }
                let incoming = b.shift(-(r as i32), r as i32 - 1);
                let rank_in = if c.grid().contains(incoming) { dr_matrix(&c, r, incoming).unwrap().rank() } else { 0 };
                prop_assert_eq!(pages.e(r + 1, b), pages.e(r, b) - d.rank() - rank_in);
            }
        }
    }

    #[test]
    fn pages_of_sums_add_up(seed in any::<u64>()) {
        let sum = random_scrambled_sum(Grid::new(4, 4), 3, 6, seed);
        let pages = page_dims(&sum.complex, 4);
        for r in 1..=4 {
            for b in sum.complex.grid().bidegrees() {
                let expected: usize = sum.shapes.iter().map(|s| predicted_invariants(s, 4).e(r, b)).sum();
                prop_assert_eq!(pages.e(r, b), expected);
            }
        }
    }
}

#[test]
fn degeneration_of_a_long_zigzag() {
    use frolicher::models::{Shape, ZigzagShape};
    let z = Shape::Zigzag(ZigzagShape::new(Bidegree::new(0, 3), 3, false, true)).build();
    assert_eq!(degeneration_page(&z), 4);
}

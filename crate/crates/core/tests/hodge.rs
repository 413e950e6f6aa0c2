use frolicher::bca::bca_dims;
use frolicher::bicomplex::{random_complex, Bidegree, Grid};
use frolicher::hodge::{
    bc_a_harmonic_spaces, harmonic_tower, star_orthogonality, star_tower_space, three_space_decomposition, HodgeError,
    InnerProduct, StarKind,
};
use frolicher::spectral::{page_dims, tower_space, TowerKind};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn harmonic_dims_match_pages_for_any_metric(seed in 0u64..10_000, metric_seed in 0u64..10_000) {
        let c = random_complex(Grid::new(4, 4), 3, seed);
        let ip = InnerProduct::random(&c, metric_seed);
        let t = harmonic_tower(&c, &ip, 4);
        let pages = page_dims(&c, 4);
        let bca = bca_dims(&c, 3).unwrap();
        prop_assert!(t.laplacian_route_agrees);
        for r in 1..=4 {
            prop_assert_eq!(t.dims(r), pages.e_grid(r));
            for b in c.grid().bidegrees() {
                let split = three_space_decomposition(&c, &ip, &t, r, b).unwrap();
                prop_assert_eq!(split.harmonic.dim(), pages.e(r, b));
                if r <= 3 {
                    let (h_bc, h_a) = bc_a_harmonic_spaces(&c, &ip, r, b).unwrap();
                    prop_assert_eq!(h_bc.dim(), bca.bc(r, b));
                    prop_assert_eq!(h_a.dim(), bca.a(r, b));
                    prop_assert!(star_orthogonality(&c, &ip, r, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn star_towers_are_complements_of_exact_towers(seed in 0u64..10_000, metric_seed in 0u64..10_000) {
        let c = random_complex(Grid::new(4, 4), 3, seed);
        let ip = InnerProduct::random(&c, metric_seed);
        for r in 1..=3 {
            for b in c.grid().bidegrees() {
                let star = star_tower_space(&c, &ip, StarKind::ErStarClosed, r, b).unwrap();
                let exact = tower_space(&c, TowerKind::ErExact, r, b).unwrap();
                prop_assert_eq!(star.dim() + exact.dim(), c.dim(b));
                prop_assert!(star.intersection(&exact).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn gram_file_round_trip() {
    let c = random_complex(Grid::new(2, 2), 2, 7);
    let b = Bidegree::new(0, 0);
    let n = c.dim(b);
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let row: Vec<String> = (0..n).map(|j| if i == j { "\"2\"".into() } else if i + 1 == j || j + 1 == i { "\"1/2\"".into() } else { "0".into() }).collect();
            format!("[{}]", row.join(","))
        })
        .collect();
    let text = format!("{{\"0,0\": [{}]}}", rows.join(","));
    let ip = InnerProduct::from_json(&c, &text).unwrap();
    assert_eq!(ip.gram(b, n).rows(), n);
    let bad = "{\"0,0\": [[1]]}";
    if n != 1 {
        assert!(matches!(InnerProduct::from_json(&c, bad), Err(HodgeError::GramShape { .. })));
    }
    assert!(matches!(InnerProduct::from_json(&c, "{\"9,9\": []}"), Err(HodgeError::OutsideGrid(_))));
}

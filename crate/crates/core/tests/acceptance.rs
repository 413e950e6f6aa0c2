//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use frolicher::bca::{bca_dims, inequality_check, page_ddbar_verdict};
use frolicher::bicomplex::{random_complex, random_scrambled_sum, Bidegree, DoubleComplex, Grid, ScrambledSum};
use frolicher::hodge::{bc_a_harmonic_spaces, harmonic_tower, three_space_decomposition, InnerProduct};
use frolicher::models::{build_square, example_calabi_eckmann, Shape, ZigzagKind, ZigzagShape};
use frolicher::pairing::{dual_sum, induced_pairing_bc_a, induced_pairing_bc_bc, induced_pairing_er, validate_pairing};
use frolicher::spectral::{degeneration_page_within, einfty_check, iterated_pages_oracle, page_dims};
use frolicher::zigzag::{enumerate_shapes, multiplicity_solve, predicted_invariants, ShapeInventory};

const SUITE_SIZE: u64 = 100;
const RANDOM_GRID: Grid = Grid { p_len: 5, q_len: 5 };
const MAX_DIM: usize = 4;
const SUM_MAX_DIM: usize = 6;
const SUM_MAX_SHAPES: usize = 10;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

struct Suite {
    randoms: Vec<DoubleComplex>,
    sums: Vec<ScrambledSum>,
    /// Everything constructed along the way, for the convergence check.
    seen: Vec<DoubleComplex>,
}

fn zigzag(generators: usize, left: bool, right: bool) -> Shape {
    Shape::Zigzag(ZigzagShape::new(Bidegree::new(0, generators as i32), generators, left, right))
}

/// Squares, dots, even zigzags of length 2..8 in both orientations and odd zigzags of
/// length 3..7 of both types.
fn table_shapes() -> Vec<Shape> {
    let mut shapes = vec![Shape::Square(Bidegree::new(0, 0)), Shape::dot(Bidegree::new(0, 0))];
    for g in 1..=4 {
        shapes.push(zigzag(g, true, false));
        shapes.push(zigzag(g, false, true));
    }
    for l in 1..=3 {
        shapes.push(zigzag(l, true, true));
        shapes.push(zigzag(l + 1, false, false));
    }
    shapes
}

/// Totals `(e_{r,BC}, e_{r,A})` of an indecomposable, from its length and type alone.
fn closed_form_totals(shape: &Shape, r: usize) -> (usize, usize) {
    let r = r as i64;
    let clamp = |x: i64| x.max(0) as usize;
    match shape {
        Shape::Square(_) => (0, 0),
        Shape::Zigzag(z) => {
            let len = z.len() as i64;
            match z.kind() {
                ZigzagKind::Dot => (1, 1),
                ZigzagKind::OddL => {
                    let l = (len - 1) / 2;
                    (clamp(l + 1), clamp(l - 2 * (r - 1)))
                }
                ZigzagKind::OddM => {
                    let l = (len - 1) / 2;
                    (clamp(l - 2 * (r - 1)), clamp(l + 1))
                }
                ZigzagKind::EvenI | ZigzagKind::EvenII => {
                    let l = len / 2;
                    (clamp(l - r + 1), clamp(l - r + 1))
                }
            }
        }
    }
}

fn criterion_1(suite: &mut Suite) -> Outcome {
    let mut failures = Vec::new();
    for shape in table_shapes() {
        let c = shape.build();
        let table = bca_dims(&c, 4).expect("bca dims");
        let predicted = predicted_invariants(&shape, 4);
        for r in 1..=4 {
            let per_bidegree =
                c.grid().bidegrees().all(|b| table.bc(r, b) == predicted.bc(r, b) && table.a(r, b) == predicted.a(r, b));
            let totals = (table.bc_sum(r), table.a_sum(r)) == closed_form_totals(&shape, r);
            if !per_bidegree || !totals {
                failures.push(format!("{shape} r={r}"));
            }
        }
        suite.seen.push(c);
    }
    Outcome::new(failures.is_empty(), format!("{} shapes × r=1..4; mismatches: {failures:?}", table_shapes().len()))
}

fn criterion_2(suite: &mut Suite) -> Outcome {
    let ce11 = example_calabi_eckmann(1, 1, None).expect("CE(1,1)");
    let ce01 = example_calabi_eckmann(0, 1, None).expect("CE(0,1)");
    let p11 = page_dims(&ce11, 4);
    let p01 = page_dims(&ce01, 4);
    let b32 = Bidegree::new(3, 2);
    let b21 = Bidegree::new(2, 1);
    let d11 = degeneration_page_within(&ce11, ce11.certified_max_p());
    let d01 = degeneration_page_within(&ce01, ce01.certified_max_p());
    let e21: Vec<usize> = (1..=4).map(|r| p01.e(r, b21)).collect();
    let passed = p11.e(1, b32) == 1 && p11.e(2, b32) == 0 && d11 == 2 && d01 == 1 && e21 == [1, 1, 1, 1];
    let detail = format!(
        "(1,1): e_1^{{3,2}}={} e_2^{{3,2}}={} degeneration={d11}; (0,1): degeneration={d01} e_r^{{2,1}}={e21:?}",
        p11.e(1, b32),
        p11.e(2, b32)
    );
    suite.seen.push(ce11);
    suite.seen.push(ce01);
    Outcome::new(passed, detail)
}

fn criterion_3(suite: &mut Suite) -> Outcome {
    let mismatched: Vec<usize> = suite
        .randoms
        .iter()
        .enumerate()
        .filter(|(_, c)| iterated_pages_oracle(c, 5).expect("oracle") != page_dims(c, 5))
        .map(|(i, _)| i)
        .collect();
    Outcome::new(mismatched.is_empty(), format!("{} random complexes, r ≤ 5; mismatched seeds: {mismatched:?}", suite.randoms.len()))
}

fn criterion_4(suite: &mut Suite) -> Outcome {
    let mut failures = Vec::new();
    let inputs = suite.randoms.iter().chain(suite.sums.iter().map(|s| &s.complex));
    let mut checked = 0;
    for c in inputs {
        let solved = multiplicity_solve(c, 5).expect("multiplicity solve");
        let inventory = solved.unique();
        for r in 1..=4 {
            checked += 1;
            match page_ddbar_verdict(c, r, inventory) {
                Ok(v) if v.structure.is_some() => {}
                Ok(_) => failures.push(format!("{} r={r}: no unique inventory", c.name())),
                Err(e) => failures.push(format!("{} r={r}: {e}", c.name())),
            }
        }
    }
    Outcome::new(failures.is_empty(), format!("{checked} (complex, r) pairs; disagreements: {failures:?}"))
}

fn criterion_5(suite: &mut Suite) -> Outcome {
    let mut failures = Vec::new();
    for c in &suite.randoms {
        for r in 1..=4 {
            let rep = inequality_check(c, r).expect("inequality");
            if !rep.holds() {
                failures.push(format!("{} r={r}", c.name()));
            }
        }
    }
    let three = zigzag(1, true, true).build();
    let rep = inequality_check(&three, 2).expect("inequality");
    let remark = (rep.bc_plus_a, rep.e_plus_ebar, rep.twice_betti) == (2, 2, 2) && !rep.verdict;
    suite.seen.push(three);
    Outcome::new(
        failures.is_empty() && remark,
        format!("random failures: {failures:?}; length-3 zigzag at r=2: {} ≥ {} ≥ {}, verdict {}", rep.bc_plus_a, rep.e_plus_ebar, rep.twice_betti, rep.verdict),
    )
}

fn criterion_6(suite: &mut Suite) -> Outcome {
    let ip = InnerProduct::identity();
    let mut failures = Vec::new();
    for c in &suite.randoms {
        let tower = harmonic_tower(c, &ip, 3);
        let pages = page_dims(c, 3);
        let bca = bca_dims(c, 3).expect("bca dims");
        for r in 1..=3 {
            for b in c.grid().bidegrees() {
                let ok = tower.harmonic(r, b).dim() == pages.e(r, b)
                    && three_space_decomposition(c, &ip, &tower, r, b).is_ok()
                    && bc_a_harmonic_spaces(c, &ip, r, b).is_ok_and(|(h_bc, h_a)| h_bc.dim() == bca.bc(r, b) && h_a.dim() == bca.a(r, b));
                if !ok {
                    failures.push(format!("{} r={r} {b}", c.name()));
                }
            }
        }
        if !tower.laplacian_route_agrees {
            failures.push(format!("{}: Laplacian kernels differ from the inductive spaces", c.name()));
        }
    }
    Outcome::new(failures.is_empty(), format!("{} random complexes, r ≤ 3; failures: {failures:?}", suite.randoms.len()))
}

fn criterion_8(suite: &mut Suite) -> Outcome {
    let grid = Grid::new(4, 4);
    let mut inputs: Vec<DoubleComplex> = enumerate_shapes(grid).iter().map(|s| s.build_in(grid).expect("fits")).collect();
    inputs.extend((0..10).map(|seed| random_complex(Grid::new(3, 3), 2, seed)));
    let mut failures = Vec::new();
    for z in &inputs {
        let (c, pairing) = dual_sum(z).expect("dual sum");
        let report = validate_pairing(&c, &pairing);
        if !(report.valid && report.perfect) {
            failures.push(format!("{}: pairing invalid", c.name()));
        }
        for r in 1..=3 {
            for b in c.grid().bidegrees() {
                let er = induced_pairing_er(&c, &pairing, r, b);
                let ba = induced_pairing_bc_a(&c, &pairing, r, b).expect("BC×A");
                if !(er.well_defined && er.is_perfect() && ba.well_defined && ba.is_perfect()) {
                    failures.push(format!("{} r={r} {b}", c.name()));
                }
            }
            match induced_pairing_bc_bc(&c, &pairing, r) {
                Ok(bb) if bb.nondegenerate == bb.verdict => {}
                Ok(_) => failures.push(format!("{} r={r}: BC×BC disagrees with the verdict", c.name())),
                Err(e) => failures.push(format!("{} r={r}: {e}", c.name())),
            }
        }
        suite.seen.push(c);
    }
    let four = zigzag(2, false, true).build_in(grid).expect("fits");
    let (c, pairing) = dual_sum(&four).expect("dual sum");
    let at = |r| induced_pairing_bc_bc(&c, &pairing, r).expect("BC×BC");
    let (r2, r3) = (at(2), at(3));
    let example = !r2.nondegenerate && !r2.verdict && r3.nondegenerate && r3.verdict;
    Outcome::new(
        failures.is_empty() && example,
        format!(
            "{} dual sums, r ≤ 3; failures: {failures:?}; length-4 zigzag BC×BC non-degenerate at r=2: {}, r=3: {}",
            inputs.len(),
            r2.nondegenerate,
            r3.nondegenerate
        ),
    )
}

fn criterion_9(suite: &mut Suite) -> Outcome {
    let mut wrong = Vec::new();
    let mut ambiguous = 0;
    for sum in &suite.sums {
        match multiplicity_solve(&sum.complex, 5).expect("multiplicity solve").unique() {
            Some(found) if *found == ShapeInventory::from_shapes(sum.shapes.iter().copied()) => {}
            Some(_) => wrong.push(sum.complex.name().to_string()),
            None => ambiguous += 1,
        }
    }
    let rate = ambiguous as f64 / suite.sums.len() as f64;
    Outcome::new(
        wrong.is_empty() && ambiguous == 0,
        format!("{} scrambled sums; wrong: {wrong:?}; ambiguity rate {rate:.2}", suite.sums.len()),
    )
}

fn criterion_7(suite: &mut Suite) -> Outcome {
    suite.seen.push(build_square(0, 0));
    let all = suite.randoms.iter().chain(suite.sums.iter().map(|s| &s.complex)).chain(&suite.seen);
    let mut count = 0;
    let failing: Vec<String> = all
        .inspect(|_| count += 1)
        .filter(|c| !einfty_check(c).holds)
        .map(|c| c.name().to_string())
        .collect();
    Outcome::new(failing.is_empty(), format!("{count} complexes; failing: {failing:?}"))
}

fn main() -> ExitCode {
    let mut suite = Suite {
        randoms: (0..SUITE_SIZE).map(|seed| random_complex(RANDOM_GRID, MAX_DIM, seed)).collect(),
        sums: (0..SUITE_SIZE).map(|seed| random_scrambled_sum(RANDOM_GRID, SUM_MAX_DIM, SUM_MAX_SHAPES, seed)).collect(),
        seen: Vec::new(),
    };
    type Criterion = fn(&mut Suite) -> Outcome;
    let criteria: [(u8, &str, Criterion, Duration); 9] = [
        (1, "indecomposable table", criterion_1, Duration::from_secs(5)),
        (2, "Calabi-Eckmann pages", criterion_2, Duration::from_secs(30)),
        (3, "oracle equivalence", criterion_3, Duration::from_secs(120)),
        (4, "verdict agreement", criterion_4, Duration::from_secs(300)),
        (5, "inequality", criterion_5, Duration::from_secs(300)),
        (6, "harmonic isomorphisms", criterion_6, Duration::from_secs(300)),
        (8, "duality", criterion_8, Duration::from_secs(300)),
        (9, "decomposition round trip", criterion_9, Duration::from_secs(300)),
        // Runs last so that it sees every complex built above.
        (7, "convergence", criterion_7, Duration::from_secs(300)),
    ];
    let mut results = Vec::new();
    for (number, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run(&mut suite);
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = outcome.passed && in_time;
        let mark = if passed { "PASS" } else { "FAIL" };
        let timing = if in_time { String::new() } else { format!(" (over the {budget:?} budget)") };
        results.push((number, format!("criterion {number} [{mark}] {name} in {elapsed:.2?}{timing}: {}", outcome.detail), passed));
    }
    results.sort_by_key(|(n, _, _)| *n);
    for (_, line, _) in &results {
        println!("{line}");
    }
    if results.iter().all(|(_, _, p)| *p) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance gates for the whole pipeline: exact frozen oracle values,
//! cross-pipeline agreement, and bulk structural checks.  One test per
//! criterion, each ending in a single printed PASS line.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nervecoh::classifying::{
    bar_complex_of_product_group, bg_complex, bsemidirect_triple_complex, verify_equivalence,
    weinstein_equivariant_complex, weinstein_invariants_inclusion, DEFAULT_RESOURCE_CAP,
};
use nervecoh::group::{semidirect_product, Group, GroupAction, SemidirectProduct};
use nervecoh::homalg::{
    check_column_quasi_iso_total, smith_normal_form, DoubleComplexMap, RingSpec, SparseMatrix,
};
use nervecoh::identities::run_identity_suite;
use nervecoh::torus::{bt_double_complex, cartan_free_circle, weinstein_torus_complex};

const CAP: usize = DEFAULT_RESOURCE_CAP;

/// Z/n acted on by Z/2 through negation.
fn inversion_product(n: usize) -> SemidirectProduct {
    let g = Group::cyclic(n).unwrap();
    let h = Group::cyclic(2).unwrap();
    let identity: Vec<usize> = (0..n).collect();
    let inverse: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
    let action = GroupAction::new(h.clone(), g.clone(), vec![identity, inverse]).unwrap();
    semidirect_product(&g, &h, &action).unwrap()
}

fn trivial_product(g: Group, h: Group) -> SemidirectProduct {
    let action = GroupAction::trivial(h.clone(), g.clone());
    semidirect_product(&g, &h, &action).unwrap()
}

fn fp(p: u64) -> RingSpec {
    RingSpec::prime_field(p).unwrap()
}

#[test]
fn twisted_total_and_plain_bar_agree_on_the_small_product_zoo() {
    // Four products crossed with four coefficient rings, compared through
    // degree 4, with the known Betti tables of each group pinned as well.
    let cases: Vec<(&str, SemidirectProduct)> = vec![
        ("order 6 dihedral", inversion_product(3)),
        ("order 8 dihedral", inversion_product(4)),
        (
            "klein four-group",
            trivial_product(Group::cyclic(2).unwrap(), Group::cyclic(2).unwrap()),
        ),
        (
            "cyclic 3 with trivial actor",
            trivial_product(Group::cyclic(3).unwrap(), Group::trivial()),
        ),
    ];
    let rings = [RingSpec::Rationals, fp(2), fp(3), fp(5)];
    let point = vec![1, 0, 0, 0, 0];
    let oracles: [[&[usize]; 4]; 4] = [
        [&point, &[1, 1, 1, 1, 1], &[1, 0, 0, 1, 1], &point],
        [&point, &[1, 2, 3, 4, 5], &point, &point],
        [&point, &[1, 2, 3, 4, 5], &point, &point],
        [&point, &point, &[1, 1, 1, 1, 1], &point],
    ];
    let mut compared = 0;
    for (case_index, (label, sd)) in cases.iter().enumerate() {
        for (ring_index, &ring) in rings.iter().enumerate() {
            let start = Instant::now();
            let twisted = bsemidirect_triple_complex(sd, ring, 4, CAP)
                .unwrap()
                .betti_table(4)
                .unwrap();
            let bar = bar_complex_of_product_group(sd, ring, 4, CAP)
                .unwrap()
                .betti_table(4)
                .unwrap();
            assert!(
                twisted.same_groups(&bar),
                "{label} over {ring}: twisted {:?} vs bar {:?}",
                twisted.betti_numbers(),
                bar.betti_numbers()
            );
            assert_eq!(
                bar.betti_numbers(),
                oracles[case_index][ring_index],
                "{label} over {ring}"
            );
            let elapsed = start.elapsed().as_secs_f64();
            assert!(elapsed < 120.0, "{label} over {ring} took {elapsed:.1}s");
            compared += 1;
        }
    }
    println!("PASS: twisted-total and bar pipelines agree on {compared} (group, ring) cases through degree 4");
}

#[test]
fn invariant_model_joins_the_agreement_in_characteristic_three() {
    let sd = inversion_product(3);
    let report = verify_equivalence(&sd, fp(3), 5, CAP);
    assert!(report.in_hypothesis);
    assert_eq!(report.pipelines.len(), 3);
    for pipeline in &report.pipelines {
        let table = pipeline
            .outcome
            .as_ref()
            .unwrap_or_else(|e| panic!("{} failed: {e}", pipeline.id));
        assert_eq!(
            table.betti_numbers(),
            vec![1, 0, 0, 1, 1, 0],
            "{}",
            pipeline.id
        );
    }
    assert!(report.verdict);
    println!("PASS: all three pipelines report betti 1,0,0,1,1,0 over F3 through degree 5");
}

#[test]
fn integral_cohomology_of_the_order_six_product_is_four_periodic() {
    let sd = inversion_product(3);
    let start = Instant::now();
    let twisted = bsemidirect_triple_complex(&sd, RingSpec::Integers, 4, CAP)
        .unwrap()
        .betti_table(4)
        .unwrap();
    let bar = bar_complex_of_product_group(&sd, RingSpec::Integers, 4, CAP)
        .unwrap()
        .betti_table(4)
        .unwrap();
    let expected: [(usize, &[u64]); 5] = [
        (1, &[]),
        (0, &[]),
        (0, &[2]),
        (0, &[]),
        (0, &[6]),
    ];
    for (name, table) in [("twisted total", &twisted), ("bar", &bar)] {
        for (degree, (betti, torsion)) in expected.iter().enumerate() {
            let entry = table.degree(degree).unwrap();
            let torsion: Vec<BigInt> = torsion.iter().map(|&t| BigInt::from(t)).collect();
            assert_eq!(
                (entry.betti, entry.torsion.clone()),
                (*betti, torsion),
                "{name} degree {degree}"
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "integral run took {elapsed:.1}s");
    println!("PASS: both integral pipelines report Z, 0, Z/2, 0, Z/6 through degree 4");
}

#[test]
fn cyclic_groups_reproduce_the_periodic_resolution_tables() {
    for m in [2usize, 3, 4] {
        let group = Group::cyclic(m).unwrap();
        let table = bg_complex(&group, RingSpec::Integers, 4, CAP)
            .unwrap()
            .betti_table(4)
            .unwrap();
        for degree in 0..=4 {
            let entry = table.degree(degree).unwrap();
            let (betti, torsion): (usize, Vec<BigInt>) = match degree {
                0 => (1, vec![]),
                d if d % 2 == 0 => (0, vec![BigInt::from(m)]),
                _ => (0, vec![]),
            };
            assert_eq!(
                (entry.betti, entry.torsion.clone()),
                (betti, torsion),
                "m={m} degree {degree}"
            );
        }
    }
    println!("PASS: integral bar cohomology of Z/m is Z, 0, Z/m, 0, Z/m for m = 2, 3, 4");
}

#[test]
fn torus_models_match_the_polynomial_ring_dimensions() {
    let circle = bt_double_complex(1, 6, CAP).unwrap().betti_table(6).unwrap();
    assert_eq!(circle.betti_numbers(), vec![1, 0, 1, 0, 1, 0, 1]);

    let torus = bt_double_complex(2, 4, CAP).unwrap().betti_table(4).unwrap();
    assert_eq!(torus.degree(4).unwrap().betti, 3);

    let equivariant = weinstein_torus_complex(1, 6, CAP)
        .unwrap()
        .betti_table(6)
        .unwrap();
    assert_eq!(equivariant.betti_numbers(), vec![1, 0, 2, 0, 3, 0, 4]);
    println!("PASS: torus models report 1,0,1,0,1,0,1 (rank 1), degree-4 betti 3 (rank 2), and 1,0,2,0,3,0,4 (equivariant circle)");
}

#[test]
fn free_circle_model_has_the_cohomology_of_a_point() {
    let table = cartan_free_circle(6).unwrap().betti_table(6).unwrap();
    assert_eq!(table.betti_numbers(), vec![1, 0, 0, 0, 0, 0, 0]);
    println!("PASS: the free-circle model reports betti 1,0,0,0,0,0,0 through degree 6");
}

fn dense(m: &SparseMatrix) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![BigInt::zero(); m.cols()]; m.rows()];
    for (r, c, v) in m.entries() {
        out[*r as usize][*c as usize] = v.clone();
    }
    out
}

/// Laplace-expansion determinant; the matrices here are at most 5 x 5.
fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut det = BigInt::zero();
    for (col, pivot) in a[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(j, v)| (j != col).then(|| v.clone()))
                    .collect()
            })
            .collect();
        let term = pivot * determinant(&minor);
        if col % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

#[test]
fn structural_identities_snf_transforms_and_squares_hold_in_bulk() {
    // Ten thousand checks per identity family on the order-6 product, with
    // small spaces covered exhaustively by the suite's fill rule.
    let sd = inversion_product(3);
    let suite = run_identity_suite(sd.product(), Some(&sd), 4, 10_000, 0);
    assert_eq!(suite.reports.len(), 9);
    for report in &suite.reports {
        assert!(report.passed(), "{}: {:?}", report.name, report.witnesses);
        assert!(
            report.checks >= 10_000,
            "{} ran only {} checks",
            report.name,
            report.checks
        );
    }
    // Fully exhaustive sweeps on the smallest groups.
    for n in [1usize, 2] {
        let group = Group::cyclic(n).unwrap();
        let small = run_identity_suite(&group, None, 3, 2_000, 1);
        assert!(small.all_passed());
    }

    // d^2 = 0, checked explicitly on a fresh complex of every flavor (the
    // constructor also rejects violations on every build).
    let complexes = vec![
        bg_complex(sd.product(), RingSpec::Integers, 3, CAP).unwrap(),
        bsemidirect_triple_complex(&sd, RingSpec::Rationals, 3, CAP).unwrap(),
        weinstein_equivariant_complex(&sd, fp(3), 3, CAP).unwrap(),
        bt_double_complex(2, 4, CAP).unwrap(),
        weinstein_torus_complex(1, 5, CAP).unwrap(),
        cartan_free_circle(5).unwrap(),
    ];
    let mut squares = 0;
    for complex in &complexes {
        for n in 0..complex.dims().len().saturating_sub(1) {
            if let (Some(lower), Some(upper)) = (complex.differential(n), complex.differential(n + 1)) {
                let square = upper.matmul(lower).unwrap();
                assert!(square.entries().is_empty(), "d^2 != 0 at degree {n}");
                squares += 1;
            }
        }
    }

    // Smith normal form on 10^4 random small integer matrices: the recorded
    // transforms must be unimodular and reproduce the diagonal, and the
    // diagonal must be a nonnegative divisibility chain.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let trials = 10_000;
    for trial in 0..trials {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let mut triplets = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let value: i64 = rng.gen_range(-9..=9);
                if value != 0 {
                    triplets.push((r, c, BigInt::from(value)));
                }
            }
        }
        let matrix =
            SparseMatrix::from_triplets(RingSpec::Integers, rows, cols, triplets).unwrap();
        let snf = smith_normal_form(&matrix).unwrap();
        let product = snf.left.matmul(&matrix).unwrap().matmul(&snf.right).unwrap();
        let diagonal = SparseMatrix::from_triplets(
            RingSpec::Integers,
            rows,
            cols,
            snf.diagonal
                .iter()
                .enumerate()
                .map(|(i, d)| (i, i, d.clone())),
        )
        .unwrap();
        assert_eq!(product, diagonal, "trial {trial}");
        assert!(determinant(&dense(&snf.left)).abs().is_one(), "trial {trial}");
        assert!(determinant(&dense(&snf.right)).abs().is_one(), "trial {trial}");
        let mut seen_zero = false;
        for window in snf.diagonal.windows(2) {
            assert!(!window[0].is_negative() && !window[1].is_negative());
            if window[1].is_zero() {
                seen_zero = true;
            } else {
                assert!(!seen_zero, "zero before a nonzero in trial {trial}");
                assert!(
                    (&window[1] % &window[0]).is_zero(),
                    "broken divisibility chain in trial {trial}"
                );
            }
        }
    }
    println!(
        "PASS: {} identity checks, {squares} explicit d^2 = 0 products, {trials} SNF transform verifications, zero failures",
        suite.total_checks()
    );
}

#[test]
fn column_quasi_isomorphism_certificate_accepts_and_rejects_correctly() {
    let sd = inversion_product(3);
    let ring = fp(3);
    let inclusion = weinstein_invariants_inclusion(&sd, ring, 6, CAP).unwrap();
    let report = check_column_quasi_iso_total(&inclusion, 5).unwrap();
    assert!(report.all_columns_pass, "columns: {:?}", report.failing_columns());
    assert!(report.totals_agree);
    assert!(report.verdict());

    // Counter-instance: the zero map between the same columns is a chain
    // map whose totals still agree, but the per-column cones are no longer
    // acyclic; the certificate must flag it.
    let zero_blocks = inclusion
        .blocks
        .iter()
        .map(|(&at, block)| (at, SparseMatrix::zero(ring, block.rows(), block.cols())))
        .collect();
    let zero_map = DoubleComplexMap {
        source: inclusion.source.clone(),
        target: inclusion.target.clone(),
        blocks: zero_blocks,
    };
    let zero_report = check_column_quasi_iso_total(&zero_map, 5).unwrap();
    assert!(!zero_report.all_columns_pass);
    assert!(zero_report.failing_columns().contains(&0));
    assert!(zero_report.totals_agree);
    assert!(!zero_report.verdict());
    println!("PASS: column-wise cone certificate accepts the invariants inclusion and flags the zero-map counter-instance");
}

use std::sync::OnceLock;

use jordan_arcs::arc::*;
use jordan_arcs::cantor::{Address, ProductCantor, RatioSequence, SelfSimilarCantor};
use jordan_arcs::rational::{self, ratio};
use jordan_arcs::Rational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn factors(e: RatioSequence, y_ratio: Rational, copies: usize) -> ArcFactors {
    let y = ProductCantor::from_factor(SelfSimilarCantor::from_ratio(y_ratio).unwrap(), copies);
    ArcFactors::new(e, y)
}

fn planar_dyadic() -> &'static ArcApproximation {
    static ARC: OnceLock<ArcApproximation> = OnceLock::new();
    ARC.get_or_init(|| {
        ArcApproximation::build(factors(RatioSequence::dyadic(), ratio(1, 3), 1), 4).unwrap()
    })
}

#[test]
fn counts_through_depth_four() {
    let arc = planar_dyadic();
    for k in 1..=4u32 {
        let rep = arc.verify_structure(k).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        assert_eq!(rep.cells[k as usize], 1 << (2 * k));
        assert_eq!(rep.cumulative_connectors[k as usize], (1 << (2 * k)) - 1);
    }
}

#[test]
fn planar_dyadic_is_injective() {
    let arc = planar_dyadic();
    for k in 1..=4 {
        let rep = arc.verify_injectivity(k).unwrap();
        assert!(rep.passed(), "k={k}: {rep:?}");
    }
}

#[test]
fn containment_bound_decreases() {
    let arc = planar_dyadic();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let addrs: Vec<Address> = (0..100).map(|_| Address::random(2, 24, &mut rng)).collect();
    let mut last = f64::INFINITY;
    for k in 1..=4 {
        let rep = arc.verify_containment(k, &addrs).unwrap();
        assert!(rep.passed());
        assert!(rep.bound < last);
        last = rep.bound;
    }
}

#[test]
fn vertex_clouds_converge() {
    let arc = planar_dyadic();
    for k in 1..4 {
        let h = arc.vertex_hausdorff(k, k + 1).unwrap();
        assert!(h <= arc.cell_diameter(k).unwrap() + 1e-12, "k={k} h={h}");
    }
}

#[test]
fn modulus_holds_on_samples() {
    let arc = planar_dyadic();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for eps in [0.5, 0.2] {
        let m = arc.modulus_of_continuity(eps).unwrap();
        assert!(m.delta > 0.0 && m.delta <= m.delta_prime);
        let check = arc.check_modulus(&m, 2000, 4, &mut rng).unwrap();
        assert_eq!(check.violations, 0, "eps={eps}");
    }
}

#[test]
fn three_dimensional_arc() {
    let arc = ArcApproximation::build(factors(RatioSequence::dyadic(), ratio(1, 4), 2), 2).unwrap();
    assert_eq!(arc.complex(2).unwrap().len(), 64);
    assert!(arc.verify_injectivity(2).unwrap().passed());
    assert!(arc.verify_structure(2).unwrap().passed());
}

fn e_family() -> impl Strategy<Value = RatioSequence> {
    prop_oneof![
        Just(RatioSequence::dyadic()),
        Just(RatioSequence::harmonic()),
        (3i64..7).prop_map(|q| RatioSequence::geometric(ratio(1, q)).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_configurations_route_cleanly(e in e_family(), q in 3i64..8) {
        let arc = ArcApproximation::build(factors(e, ratio(1, q), 1), 3).unwrap();
        prop_assert!(arc.verify_structure(3).unwrap().passed());
        prop_assert!(arc.verify_injectivity(3).unwrap().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn refinement_moves_less_than_diameter(num in 0i64..=100_000) {
        let arc = planar_dyadic();
        let t = ratio(num, 100_000);
        for k in 0..4 {
            let a = arc.evaluate(&t, k).unwrap();
            let b = arc.evaluate(&t, k + 1).unwrap();
            let d = rational::distance_f64(&a.point, &b.point);
            prop_assert!(d <= arc.cell_diameter(k).unwrap() + 1e-12);
        }
    }

    #[test]
    fn evaluation_stays_in_unit_cube(num in 0i64..=10_000, k in 0u32..=4) {
        let e = planar_dyadic().evaluate(&ratio(num, 10_000), k).unwrap();
        for c in &e.point {
            prop_assert!(*c >= ratio(0, 1) && *c <= ratio(1, 1));
        }
    }
}

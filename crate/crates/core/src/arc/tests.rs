use super::*;
use crate::cantor::SelfSimilarCantor;
use crate::rational::ratio;

fn planar_dyadic() -> ArcFactors {
    let y = ProductCantor::from_factor(SelfSimilarCantor::from_ratio(ratio(1, 3)).unwrap(), 1);
    ArcFactors::new(RatioSequence::dyadic(), y)
}

fn b(lo: &[Rational], hi: &[Rational]) -> AxisBox {
    AxisBox::new(lo.to_vec(), hi.to_vec())
}

#[test]
fn first_generation_order() {
    let cx = build_first_generation(&planar_dyadic());
    assert_eq!(cx.len(), 4);
    let boxes: Vec<_> = cx.cells.iter().map(|c| c.cell_box.clone()).collect();
    assert_eq!(boxes[0], b(&[int(0), int(0)], &[ratio(1, 4), ratio(1, 3)]));
    assert_eq!(boxes[1], b(&[int(0), ratio(2, 3)], &[ratio(1, 4), int(1)]));
    assert_eq!(boxes[2], b(&[ratio(3, 4), int(0)], &[int(1), ratio(1, 3)]));
    assert_eq!(boxes[3], b(&[ratio(3, 4), ratio(2, 3)], &[int(1), int(1)]));
    assert_eq!(cx.cells[0].near_corner(), &vec![int(0), int(0)]);
    assert_eq!(
        cx.cells.iter().map(|c| c.rank).collect::<Vec<_>>(),
        vec![1, 2, 3, 4]
    );
}

#[test]
fn subdivision_counts() {
    let root = ParamInterval {
        depth: 0,
        index: 0,
        left: int(0),
        right: int(1),
        status: ParamStatus::Neglected { cell: 0 },
    };
    let kids = subdivide_param_interval(&root, 1);
    assert_eq!(kids.len(), 7);
    assert!(kids.iter().all(|k| k.length() == ratio(1, 7)));
    let neglected: Vec<usize> = (0..7).filter(|&i| !kids[i].is_used()).collect();
    assert_eq!(neglected, vec![0, 2, 4, 6]);
    assert_eq!(subdivide_param_interval(&root, 2).len(), 15);
    let n2_neglected = subdivide_param_interval(&root, 2)
        .iter()
        .filter(|k| !k.is_used())
        .count();
    assert_eq!(n2_neglected, 8);
}

#[test]
fn generation_counts() {
    let arc = ArcApproximation::build(planar_dyadic(), 3).unwrap();
    for (k, cells, conns, params) in [(1u32, 4, 3, 7), (2, 16, 15, 28), (3, 64, 63, 112)] {
        assert_eq!(arc.complex(k).unwrap().len(), cells);
        assert_eq!(arc.connectors_through(k).len(), conns);
        assert_eq!(arc.params(k).unwrap().len(), params);
    }
    let rep = arc.verify_structure(3).unwrap();
    assert!(rep.passed(), "{:?}", rep.violations);
}

#[test]
fn single_cell_needs_no_connectors() {
    let cx = build_first_generation(&planar_dyadic());
    let paths = route_connectors(
        &AxisBox::unit(2),
        &cx.cells[..1],
        &ClearancePolicy::default(),
    )
    .unwrap();
    assert!(paths.is_empty());
}

#[test]
fn first_generation_connectors_are_straight() {
    let arc = ArcApproximation::build(planar_dyadic(), 1).unwrap();
    let cs = arc.connectors();
    assert_eq!(cs.len(), 3);
    assert!(cs.iter().all(|c| c.vertices.len() == 2));
    assert_eq!(
        cs[0].vertices,
        vec![vec![ratio(1, 4), ratio(1, 3)], vec![int(0), ratio(2, 3)]]
    );
    assert_eq!(cs[0].param, (ratio(1, 7), ratio(2, 7)));
}

#[test]
fn evaluate_examples() {
    let arc = ArcApproximation::build(planar_dyadic(), 3).unwrap();
    // midpoint of the first used interval is the connector midpoint
    let mid = arc.evaluate(&ratio(3, 14), 1).unwrap();
    let c = &arc.connectors()[0];
    let expect: Point = c.vertices[0]
        .iter()
        .zip(&c.vertices[1])
        .map(|(a, b)| (a + b) / int(2))
        .collect();
    assert_eq!(mid.point, expect);
    assert_eq!(mid.error_bound, 0.0);

    for k in 0..=3 {
        let e = arc.evaluate(&int(0), k).unwrap();
        assert_eq!(e.point, vec![int(0), int(0)]);
        assert!((e.error_bound - arc.cell_diameter(k).unwrap()).abs() < 1e-15);
    }
    // t = 1 lands in the last cell
    let e = arc.evaluate(&int(1), 2).unwrap();
    assert_eq!(
        e.location,
        Location::Cell {
            generation: 2,
            index: 15
        }
    );

    // endpoints of used intervals hit the connector ends exactly
    let e = arc.evaluate(&ratio(2, 7), 3).unwrap();
    assert_eq!(e.point, c.vertices[1]);
    assert!(arc.evaluate(&ratio(3, 2), 1).is_err());
    assert!(arc.evaluate(&int(0), 4).is_err());
}

#[test]
fn evaluation_refines() {
    let arc = ArcApproximation::build(planar_dyadic(), 4).unwrap();
    for i in 0..=200 {
        let t = ratio(i, 200);
        for k in 0..4 {
            let a = arc.evaluate(&t, k).unwrap();
            let b = arc.evaluate(&t, k + 1).unwrap();
            let d = crate::rational::distance_f64(&a.point, &b.point);
            assert!(d <= arc.cell_diameter(k).unwrap() + 1e-15, "t={t} k={k}");
        }
    }
}

#[test]
fn injectivity_holds_and_detects_corruption() {
    let arc = ArcApproximation::build(planar_dyadic(), 2).unwrap();
    let rep = arc.verify_injectivity(2).unwrap();
    assert!(rep.passed(), "{rep:?}");

    // drag connector 1 through connector 0
    let mut parts = arc.into_parts();
    let c0 = parts.connectors[0].vertices.clone();
    let mid: Point = c0[0]
        .iter()
        .zip(&c0[1])
        .map(|(a, b)| (a + b) / int(2))
        .collect();
    let c1 = &mut parts.connectors[1];
    let end = c1.vertices.pop().unwrap();
    c1.vertices.push(mid);
    c1.vertices.push(end);
    let bad = ArcApproximation::from_parts(parts).unwrap();
    let rep = bad.verify_injectivity(2).unwrap();
    assert!(!rep.passed());
    assert!(rep.connector_crossings.contains(&(0, 1)));
}

#[test]
fn trivial_depth_is_vacuously_injective() {
    let arc = ArcApproximation::new(planar_dyadic());
    assert!(arc.verify_injectivity(0).unwrap().passed());
    assert!(arc.verify_structure(0).unwrap().passed());
}

#[test]
fn containment_corner_addresses() {
    let arc = ArcApproximation::build(planar_dyadic(), 3).unwrap();
    for k in 1..=3 {
        let rep = arc
            .verify_containment(k, &[Address::zeros(2, 20), Address::ones(2, 20)])
            .unwrap();
        assert_eq!(rep.distances[0], 0.0);
        assert!(rep.passed());
        assert!(rep.distances[1] <= rep.bound);
    }
}

#[test]
fn modulus_vacuous_for_large_epsilon() {
    let arc = ArcApproximation::build(planar_dyadic(), 1).unwrap();
    let m = arc.modulus_of_continuity(2f64.sqrt()).unwrap();
    assert_eq!(m.delta, 1.0);
    assert_eq!(m.generation, None);
    // needs depth K + 1 = 2
    assert!(matches!(
        arc.modulus_of_continuity(0.3),
        Err(ArcError::NotBuilt(_))
    ));
}

#[test]
fn modulus_just_above_first_diameter() {
    let arc = ArcApproximation::build(planar_dyadic(), 2).unwrap();
    let d1 = arc.cell_diameter(1).unwrap();
    let m = arc.modulus_of_continuity(d1 + 1e-9).unwrap();
    assert_eq!(m.generation, Some(1));
    assert!((m.delta_prime - 1.0 / 98.0).abs() < 1e-15);
    assert!((m.lipschitz - arc.lipschitz_bound(1)).abs() < 1e-15);
    assert!(m.delta <= m.delta_prime);
}

#[test]
fn three_dimensional_build() {
    let y = ProductCantor::product_for_dimension(1.0).unwrap();
    let arc = ArcApproximation::build(ArcFactors::new(RatioSequence::dyadic(), y), 2).unwrap();
    assert_eq!(arc.ambient_dim(), 3);
    assert_eq!(arc.complex(2).unwrap().len(), 64);
    assert_eq!(arc.connectors().len(), 63);
    assert!(arc.verify_structure(2).unwrap().passed());
    assert!(arc.verify_injectivity(2).unwrap().passed());
}

#[test]
fn budget_stops_build() {
    let mut arc = ArcApproximation::new(planar_dyadic()).with_cell_budget(16);
    arc.build_to(2).unwrap();
    assert!(matches!(
        arc.build_generation(3),
        Err(ArcError::BudgetExceeded { .. })
    ));
}

#[test]
fn traversal_is_continuous_and_ends_at_corners() {
    let arc = ArcApproximation::build(planar_dyadic(), 2).unwrap();
    let tr = arc.traversal(2).unwrap();
    assert_eq!(tr.first().unwrap(), &vec![int(0), int(0)]);
    assert_eq!(tr.last().unwrap(), &vec![int(1), int(1)]);
}

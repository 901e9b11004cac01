use jordan_arcs::metric::*;
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = f64> {
    0.0f64..=1.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn snowflake_triangle(eps in 0.05f64..=1.0, x in unit(), y in unit(), z in unit()) {
        let m = SnowflakeMetric::new(eps).unwrap();
        prop_assert!(m.dist(x, z) <= m.dist(x, y) + m.dist(y, z) + 1e-12);
        prop_assert_eq!(m.dist(x, y), m.dist(y, x));
    }

    #[test]
    fn rug_triangle(eps in 0.05f64..=1.0, p in (unit(), unit()), q in (unit(), unit()), s in (unit(), unit())) {
        let rug = RugSpace::snowflake(eps).unwrap();
        let (p, q, s) = ([p.0, p.1], [q.0, q.1], [s.0, s.1]);
        prop_assert!(rug_distance(&rug, &p, &s) <= rug_distance(&rug, &p, &q) + rug_distance(&rug, &q, &s) + 1e-12);
    }

    #[test]
    fn rug_dominates_factors(eps in 0.05f64..=1.0, p in (unit(), unit()), q in (unit(), unit())) {
        let rug = RugSpace::snowflake(eps).unwrap();
        let (p, q) = ([p.0, p.1], [q.0, q.1]);
        let d = rug_distance(&rug, &p, &q);
        let (a, b) = rug.factor_distances(&p, &q);
        prop_assert!(a <= d && b <= d);
        prop_assert!((b - (p[1] - q[1]).abs()).abs() == 0.0);
    }

    #[test]
    fn smaller_exponent_stretches(e1 in 0.05f64..1.0, frac in 0.01f64..0.99, x in unit(), y in unit()) {
        let e2 = e1 * frac;
        let t = (x - y).abs();
        prop_assume!(t > 1e-9 && t < 1.0 - 1e-9);
        prop_assert!(snowflake_distance(e2, x, y) > snowflake_distance(e1, x, y));
    }

    #[test]
    fn unit_separation_is_fixed(eps in 0.05f64..=1.0) {
        prop_assert_eq!(snowflake_distance(eps, 0.0, 1.0), 1.0);
    }
}

#[test]
fn flipping_second_factor_preserves_distances() {
    let rug = RugSpace::snowflake(VON_KOCH_EXPONENT).unwrap();
    let s = sample_rug(&rug, 4).unwrap();
    let flipped: Vec<Vec<f64>> = s.points.iter().map(|p| vec![p[0], 1.0 - p[1]]).collect();
    let multiset = |pts: &[Vec<f64>]| {
        let mut d: Vec<u64> = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                d.push((rug_distance(&rug, &pts[i], &pts[j]) * 1e12).round() as u64);
            }
        }
        d.sort_unstable();
        d
    };
    assert_eq!(multiset(&s.points), multiset(&flipped));
}

use cycleforge::permutahedron::{constants, dual_complex, OmegaSet, PermGeometry, RadialChart};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn direction(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n).prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-6)
}

fn angle(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / na / nb).clamp(-1.0, 1.0).acos()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chart_round_trip(n in 2usize..=5, raw in direction(5)) {
        let chart = RadialChart::new(n).unwrap();
        let u = raw[..n].to_vec();
        prop_assume!(u.iter().any(|x| x.abs() > 1e-3));
        let p = chart.h_inverse(&u).unwrap();
        let back = chart.h(&p).unwrap();
        let l = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (a, b) in back.iter().zip(&u) {
            prop_assert!((a - b / l).abs() < 1e-9);
        }
        let geom = PermGeometry::new(n).unwrap();
        let regions = chart.regions_containing(&u, 1e-12).unwrap();
        prop_assert!(!regions.is_empty());
        for w in regions {
            let lhs: f64 = w.coords().iter().map(|&i| p[i]).sum();
            prop_assert!((lhs - geom.facet_rhs(w) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn disjoint_regions_are_eps_apart(n in 2usize..=4, u in direction(4), v in direction(4)) {
        let chart = RadialChart::new(n).unwrap();
        let (u, v) = (&u[..n], &v[..n]);
        prop_assume!(u.iter().any(|x| x.abs() > 1e-3) && v.iter().any(|x| x.abs() > 1e-3));
        let ru = chart.regions_containing(u, 0.0).unwrap();
        let rv = chart.regions_containing(v, 0.0).unwrap();
        let disjoint = ru.iter().all(|a| rv.iter().all(|b| !a.comparable(*b)));
        if disjoint {
            prop_assert!(angle(u, v) >= chart.eps - 1e-9);
        }
    }

    #[test]
    fn exact_membership_matches_float(n in 2usize..=4, raw in prop::collection::vec(-20i64..=20, 5)) {
        let chart = RadialChart::new(n).unwrap();
        let d: Vec<i64> = raw[..=n].to_vec();
        let mean_free: Vec<i64> = d.iter().map(|x| x * (n as i64 + 1) - d.iter().sum::<i64>()).collect();
        prop_assume!(mean_free.iter().any(|&x| x != 0));
        let exact: Vec<BigRational> = mean_free.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        let ex = chart.regions_containing_exact(&exact).unwrap();
        let amb: Vec<f64> = mean_free.iter().map(|&x| x as f64).collect();
        let fl = chart.regions_containing(&chart.from_ambient(&amb), 1e-12).unwrap();
        for w in &ex {
            prop_assert!(fl.contains(w), "{:?} vs {:?}", ex, fl);
        }
    }
}

#[test]
fn dual_f_vectors_match_subdivided_simplex() {
    // f-vector of (∂Δⁿ)′: chains of proper nonempty faces.
    for n in 1..=5 {
        let d = dual_complex(n).unwrap();
        let facets: Vec<usize> = (1..=n).map(|k| OmegaSet::all(n).iter().filter(|w| w.size() == k).count()).collect();
        assert_eq!(d.complex.vertex_count(), facets.iter().sum::<usize>());
        assert_eq!(d.complex.len(), (1..=n + 1).product::<usize>());
    }
}

#[test]
fn constant_closed_forms() {
    for n in 1..=30usize {
        let c = constants(n).unwrap();
        let big_n = (n * (n + 1) * (n + 2)) as f64;
        assert!((c.eps.cos() - (big_n - 12.0) / big_n).abs() < 1e-12);
        assert!((c.circumradius * c.circumradius - big_n / 12.0).abs() < 1e-9 * big_n);
        assert!((c.facet_distance * c.facet_distance - (n * (n + 1)) as f64 / 4.0).abs() < 1e-9 * big_n);
    }
}

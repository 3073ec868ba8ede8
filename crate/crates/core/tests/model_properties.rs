use potts_core::model::raw;
use potts_core::stationary::{descend_to_minimum, newton_stationary, params};
use potts_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn simplex(floor: f64) -> impl Strategy<Value = [f64; 3]> {
    (floor..1.0, floor..1.0, floor..1.0).prop_map(|(a, b, c)| {
        let s = a + b + c;
        [a / s, b / s, c / s]
    })
}

proptest! {
    #[test]
    fn coordinate_round_trips(c in simplex(1e-3)) {
        let a = AprioriMeasure::from_array(c).unwrap();
        let back = AprioriMeasure::from_uv(a.to_uv()).unwrap();
        prop_assert!(a.xy_distance(&back) < 1e-12);
        let back = AprioriMeasure::from_pq(a.to_pq()).unwrap();
        prop_assert!(a.xy_distance(&back) < 1e-12);
        let back = AprioriMeasure::from_xy(a.to_xy()).unwrap();
        for i in 0..3 {
            prop_assert!((a[i] - back[i]).abs() < 1e-14);
        }
        let pq = a.to_pq();
        let uv = pq.to_uv().to_pq();
        prop_assert!((uv.p - pq.p).abs() < 1e-12 && (uv.q - pq.q).abs() < 1e-12);
    }

    #[test]
    fn permutations_act_as_pq_isometries(c in simplex(1e-3), d in simplex(1e-3), k in 0usize..6) {
        let sigma = Permutation::ALL[k];
        let (a, b) = (AprioriMeasure::from_array(c).unwrap(), AprioriMeasure::from_array(d).unwrap());
        let dist = |x: &AprioriMeasure, y: &AprioriMeasure| {
            let (px, py) = (x.to_pq(), y.to_pq());
            (px.p - py.p).hypot(px.q - py.q)
        };
        let before = dist(&a, &b);
        let after = dist(&a.permuted(sigma), &b.permuted(sigma));
        prop_assert!((before - after).abs() <= 1e-10 * (1.0 + before));
    }

    #[test]
    fn free_energy_is_permutation_invariant(beta in 0.1f64..5.0, c in simplex(1e-3), n in simplex(1e-3), k in 0usize..6) {
        let sigma = Permutation::ALL[k];
        let p = params(beta, c).unwrap();
        let nu = SpinDistribution::from_array(n).unwrap();
        let f = free_energy(&p, &nu);
        let g = free_energy(&p.permuted(sigma), &nu.permuted(sigma));
        prop_assert!((f - g).abs() <= 1e-12 * (1.0 + f.abs()));
    }

    #[test]
    fn catastrophe_map_makes_nu_stationary(beta in 0.1f64..5.0, n in simplex(1e-2)) {
        let nu = SpinDistribution::from_array(n).unwrap();
        let alpha = catastrophe_map(beta, &nu).unwrap();
        let g = gradient_local(&ModelParams::new(beta, alpha).unwrap(), &nu);
        prop_assert!(g[0].hypot(g[1]) <= 1e-11);
    }

    #[test]
    fn degeneracy_matches_hessian_determinant(beta in 0.1f64..5.0, n in simplex(1e-2)) {
        // det H = (3Pβ² − 2Sβ + 1)/P with P the product of the components.
        let nu = SpinDistribution::from_array(n).unwrap();
        let h = raw::hessian(beta, &n);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let prod = n[0] * n[1] * n[2];
        let lhs = degeneracy_lhs(beta, &nu);
        prop_assert!((det * prod - lhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn stationary_value_equals_free_energy_at_stationary_point(beta in 0.1f64..5.0, n in simplex(1e-2)) {
        let nu = SpinDistribution::from_array(n).unwrap();
        let alpha = catastrophe_map(beta, &nu).unwrap();
        let f = free_energy(&ModelParams::new(beta, alpha).unwrap(), &nu);
        let s = stationary_value(beta, &nu);
        prop_assert!((f - s).abs() <= 1e-10 * (1.0 + f.abs()));
    }
}

#[test]
fn validation_rejects_bad_input() {
    assert!(SpinDistribution::new(0.5, 0.5, 0.0).is_err());
    assert!(SpinDistribution::new(0.5, 0.6, 0.1).is_err());
    assert!(AprioriMeasure::new(f64::NAN, 0.5, 0.5).is_err());
    assert!(ModelParams::zero_field(-1.0).is_err());
    assert!(ModelParams::zero_field(f64::INFINITY).is_err());
    assert!(Permutation::new([0, 0, 1]).is_err());
}

#[test]
fn permutation_group_closes() {
    for a in Permutation::ALL {
        assert_eq!(a.compose(&a.inverse()), Permutation::IDENTITY);
        for b in Permutation::ALL {
            assert!(Permutation::ALL.contains(&a.compose(&b)));
        }
    }
}

/// Newton from a perturbed stationary point lands back on it.
#[test]
fn newton_recovers_constructed_stationary_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = ToleranceConfig::default();
    let mut checked = 0;
    while checked < 200 {
        let beta = rng.gen_range(0.5..4.0);
        let w = [rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0)];
        let nu = SpinDistribution::from_weights(w).unwrap();
        let h = raw::hessian(beta, &nu.components());
        if (h[0][0] * h[1][1] - h[0][1] * h[1][0]).abs() < 1e-2 {
            continue;
        }
        let p = ModelParams::new(beta, catastrophe_map(beta, &nu).unwrap()).unwrap();
        let c = nu.components();
        let start = [c[0] + 1e-5, c[1] - 1e-5, c[2]];
        let found = newton_stationary(&p, start, &tol).expect("newton converged");
        assert!(found.xy_distance(&nu) < 1e-9, "beta {beta}, nu {c:?}");
        checked += 1;
    }
}

/// Every local minimum the census reports is reached by descent from a
/// nearby start, and the census global value matches a brute-force grid.
#[test]
fn census_agrees_with_descent_and_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = ToleranceConfig::default();
    for _ in 0..30 {
        let beta = rng.gen_range(1.0..4.0);
        let w = [rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0)];
        let p = ModelParams::new(beta, AprioriMeasure::from_weights(w).unwrap()).unwrap();
        let c = census(&p).unwrap();
        for m in c.minima() {
            let n = m.nu.components();
            let end = descend_to_minimum(&p, [n[0] + 1e-4, n[1] - 1e-4, n[2]], &tol).unwrap();
            assert!(end.xy_distance(&m.nu) < 1e-7);
        }
        let brute = brute_force_global_min(&p, 400).unwrap();
        let bf = free_energy(&p, &brute);
        assert!((bf - c.global_value().unwrap()).abs() < 1e-10, "beta {beta}, w {w:?}");
    }
}

#[test]
fn census_is_equivariant_under_tilting() {
    let p = params(2.75, [0.34, 0.33, 0.33]).unwrap();
    let c = census(&p).unwrap();
    for sigma in Permutation::ALL {
        let q = census(&p.permuted(sigma)).unwrap();
        assert_eq!(q.n_local_minima, c.n_local_minima);
        assert_eq!(q.points.len(), c.points.len());
        for point in &c.points {
            let image = point.nu.permuted(sigma);
            let m = q.points.iter().find(|x| x.nu.xy_distance(&image) < 1e-8).expect("image found");
            assert_eq!(m.kind, point.kind);
            assert!((m.value - point.value).abs() < 1e-12);
        }
    }
}

/// Small tilts from the uniform field pick out a single global minimizer.
#[test]
fn tilting_selects_a_corner_phase() {
    let zero = census(&ModelParams::zero_field(3.5).unwrap()).unwrap();
    assert_eq!(zero.global_minimizers.len(), 3);
    let tilted = census(&params(3.5, [0.34, 0.33, 0.33]).unwrap()).unwrap();
    assert_eq!(tilted.global_minimizers.len(), 1);
    let g = tilted.global_minimizers[0].nu;
    assert!(g[0] > g[1] && g[0] > g[2]);
}

#[test]
fn morse_sum_on_fixed_sweep() {
    for beta in [0.5, 1.5, 2.2, 2.5, 2.62, 2.75, 2.9, 3.2, 3.5, 4.0] {
        for w in [[1.0, 1.0, 1.1], [1.0, 1.2, 0.9], [0.3, 1.0, 1.0], [2.0, 1.0, 0.5]] {
            let p = ModelParams::new(beta, AprioriMeasure::from_weights(w).unwrap()).unwrap();
            let c = census(&p).unwrap();
            if !c.degenerate_warning {
                assert_eq!(c.morse_index_sum(), 1, "beta {beta}, w {w:?}");
            }
        }
    }
}

#[test]
fn umbilic_point_is_flagged_degenerate() {
    let c = census(&ModelParams::zero_field(3.0).unwrap()).unwrap();
    assert!(c.degenerate_warning);
    assert_eq!(c.n_local_minima, 3);
}

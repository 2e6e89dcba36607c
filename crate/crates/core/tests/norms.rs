use fountain_core::spaces::sigma_norm;
use fountain_core::{GalerkinSpace, Subspace, Vector};
use proptest::prelude::*;

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n)
}

fn space_and_vector() -> impl Strategy<Value = (GalerkinSpace, Vec<f64>)> {
    (1usize..6, 3usize..10).prop_flat_map(|(dy, dz)| {
        let space = GalerkinSpace::new(dy, dz).unwrap();
        coords(dy + dz).prop_map(move |u| (space, u))
    })
}

fn norm(u: &[f64]) -> f64 {
    u.iter().map(|x| x * x).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tau_norm_is_sandwiched((space, u) in space_and_vector()) {
        let tau = space.tau_norm(&u);
        let q = norm(&u[space.dim_y()..]);
        prop_assert!(q <= tau + 1e-12);
        prop_assert!(tau <= norm(&u) + 1e-12);
    }

    #[test]
    fn sigma_norm_is_below_euclidean(u in coords(8)) {
        prop_assert!(sigma_norm(u.iter().copied()) <= norm(&u) + 1e-12);
    }

    #[test]
    fn level_norms_are_equivalent_on_yk(
        k in 2usize..7,
        raw in coords(20),
    ) {
        let space = GalerkinSpace::new(4, 8).unwrap();
        let f = space.filtration(k).unwrap();
        let u = f.embed_y(&raw[..f.dim_y_k()]);
        let tau = space.tau_norm(&u);
        let tau_k = space.tau_norm_k(&u, k).unwrap();
        prop_assert!(tau_k <= 1.5 * tau + 1e-12);
        prop_assert!(tau <= 2f64.powi(k as i32 + 1) * tau_k + 1e-12);
    }

    #[test]
    fn projections_are_linear_idempotent_and_symmetric(
        (space, u) in space_and_vector(),
        v_seed in coords(16),
        a in -3.0f64..3.0,
    ) {
        let n = space.dim();
        let u = Vector::from_vec(u);
        let v = Vector::from_vec(v_seed[..n].to_vec());
        for target in [Subspace::Y, Subspace::Z] {
            let pu = space.project(&u, target).unwrap();
            let ppu = space.project(&pu, target).unwrap();
            prop_assert_eq!(&pu, &ppu);
            let pv = space.project(&v, target).unwrap();
            let mut w = u.clone();
            w.axpy(a, &v);
            let pw = space.project(&w, target).unwrap();
            let mut lin = pu.clone();
            lin.axpy(a, &pv);
            prop_assert!(pw.distance(&lin) <= 1e-12 * (1.0 + w.norm()));
            prop_assert!((pu.dot(&v) - u.dot(&pv)).abs() <= 1e-9 * (1.0 + u.norm() * v.norm()));
        }
    }

    #[test]
    fn level_projection_is_tau_lipschitz(
        k in 2usize..7,
        u in coords(12),
        v in coords(12),
    ) {
        let space = GalerkinSpace::new(4, 8).unwrap();
        let (u, v) = (Vector::from_vec(u), Vector::from_vec(v));
        let pu = space.project(&u, Subspace::Yk(k)).unwrap();
        let pv = space.project(&v, Subspace::Yk(k)).unwrap();
        let lhs = space.tau_distance(pu.as_slice(), pv.as_slice());
        let rhs = 3.0 * 2f64.powi(k as i32) * space.tau_distance(u.as_slice(), v.as_slice());
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn tau_distance_is_tau_norm_of_difference((space, u) in space_and_vector(), s in coords(16)) {
        let v = &s[..u.len()];
        let d: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
        prop_assert!((space.tau_distance(&u, v) - space.tau_norm(&d)).abs() <= 1e-12);
    }
}

#[test]
fn coordinatewise_convergence_gives_tau_convergence() {
    let space = GalerkinSpace::new(3, 5).unwrap();
    let limit = [1.0, -2.0, 0.5, 3.0, 0.0, -1.0, 2.0, 0.25];
    let mut last = f64::INFINITY;
    for n in 1..40 {
        let h = 2f64.powi(-n);
        let un: Vec<f64> = limit.iter().enumerate().map(|(i, x)| x + h * (i as f64 + 1.0)).collect();
        let d = space.tau_distance(&un, &limit);
        assert!(d <= last);
        last = d;
    }
    assert!(last < 1e-10);
}

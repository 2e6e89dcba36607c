use fountain_core::functional::evenness_defect;
use fountain_core::schrodinger::{SchrodingerError, TrigProfile};
use fountain_core::{
    compute_geometry, grad_check, sampling, FountainConfig, FountainProblem, Functional,
    SchrodingerConfig, SchrodingerProblem, Subspace, Vector,
};
use proptest::prelude::*;

fn problem(modes: usize) -> SchrodingerProblem<f64> {
    SchrodingerProblem::new(SchrodingerConfig {
        modes,
        ..Default::default()
    })
    .unwrap()
}

#[test]
fn constant_potential_eigenvalues_are_shifted_squares() {
    let pb = problem(6);
    let ev = pb.eigenvalues();
    assert_eq!(pb.space().dim_y(), 3);
    // ordered by increasing |λ| within Y and Z
    let want: Vec<f64> = [-0.5, -0.5, -1.5]
        .into_iter()
        .chain((2..=6).flat_map(|j| [j as f64 * j as f64 - 1.5; 2]))
        .collect();
    assert_eq!(ev.len(), want.len());
    for (a, b) in ev.iter().zip(&want) {
        assert!((a - b).abs() < 1e-10, "{ev:?}");
    }
}

#[test]
fn zero_in_spectrum_is_a_gap_violation() {
    let r = SchrodingerProblem::<f64>::new(SchrodingerConfig {
        modes: 4,
        potential: TrigProfile::constant(-1.0),
        ..Default::default()
    });
    assert!(matches!(r, Err(SchrodingerError::GapViolation { .. })));
}

#[test]
fn default_functional_is_even_and_has_exact_gradient() {
    let pb = problem(16);
    assert!(evenness_defect(&pb, 100, 1) <= 1e-12);
    assert!(grad_check(&pb, 50, 1e-6, 2).unwrap() <= 1e-5);
    let zero = pb.space().zero();
    assert_eq!(pb.value(&zero), 0.0);
    assert_eq!(pb.gradient(&zero).norm(), 0.0);
}

#[test]
fn growth_bound_holds_with_amplitude_maximum() {
    let pb = SchrodingerProblem::<f64>::new(SchrodingerConfig {
        modes: 8,
        amplitude: TrigProfile::cosine(1.0, 0.5),
        ..Default::default()
    })
    .unwrap();
    for eps in [1e-3, 0.1, 1.0] {
        let rep = pb.growth_bound_check(500, eps, 4);
        assert!(rep.growth_holds && rep.superlinear_holds);
        assert_eq!(rep.c_eps, 1.5);
        assert!(rep.c_eps_needed <= rep.c_eps);
        assert!(rep.superlinear_defect.abs() <= 1e-12);
    }
}

#[test]
fn energy_tends_to_minus_infinity_along_yk_rays() {
    let pb = problem(8);
    let mut rng = sampling::rng(8);
    for k in 2..=4 {
        let range = pb.space().range(Subspace::Yk(k)).unwrap();
        for _ in 0..10 {
            let dir: Vec<f64> = sampling::sphere_point(&mut rng, range.len(), 1.0);
            let mut u = Vector::zeros(pb.space().dim());
            u[range.clone()].copy_from_slice(&dir);
            let base = pb.value(&u);
            let far = pb.value(&u.scaled(200.0));
            assert!(far < base - 1.0, "k = {k}: {far}");
        }
    }
}

#[test]
fn measured_b_k_respects_the_lower_bound() {
    let pb = problem(8);
    let cfg = FountainConfig::default();
    let (factor, _) = pb.lower_bound_coefficients();
    for k in 2..=4 {
        let g = compute_geometry(&pb, k, &cfg).unwrap();
        assert!(g.feasible);
        assert!(g.a_k <= 0.0 && g.b_k > 0.0);
        let c = pb.growth_constant();
        let closed = factor * (c * 4.0 * g.beta_k.powi(4)).powf(2.0 / (2.0 - 4.0));
        assert!((closed - g.b_lower_bound).abs() <= 1e-9 * closed);
        assert!(g.b_k >= closed - 1e-3, "k = {k}: {} < {closed}", g.b_k);
    }
}

#[test]
fn small_solve_returns_genuine_critical_points() {
    let pb = problem(8);
    let cfg = FountainConfig::default();
    let seq = pb.solve_multiplicity(&[2, 3, 4], &cfg);
    assert!(seq.points.len() >= 3);
    for cp in &seq.points {
        assert!(cp.energy > 0.0);
        assert!(cp.grad_norm <= cfg.crit_tol);
        assert!(cp.residual <= 10.0 * cfg.crit_tol);
        let (phi, moments) = pb.critical_value_identity(&cp.coords);
        assert!((phi - moments).abs() <= 1e-6);
    }
    for lvl in &seq.levels {
        let g = lvl.geometry.as_ref().unwrap();
        assert!(lvl.c_k_estimate.unwrap() >= g.b_k - cfg.minimax_tol);
    }
    // levels 2 and 3 reach translates of one solution
    let e = seq.level_energies();
    let (e2, e3, e4) = (e[0].unwrap(), e[1].unwrap(), e[2].unwrap());
    assert!((e2 - e3).abs() <= 1e-8 * e2);
    assert!(e4 > e3);
}

#[test]
fn transfer_round_trips_through_a_finer_truncation() {
    let coarse = problem(6);
    let fine = problem(12);
    let mut rng = sampling::rng(3);
    for _ in 0..10 {
        let u = Vector::from_vec(sampling::gaussian_vec::<f64, _>(&mut rng, coarse.space().dim()));
        let up = fine.transfer(&coarse, u.as_slice());
        let back = coarse.transfer(&fine, up.as_slice());
        assert!(back.distance(&u) <= 1e-10 * u.norm());
        assert!((fine.value(&up) - coarse.value(&u)).abs() <= 1e-8 * (1.0 + coarse.value(&u).abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_is_even(u in prop::collection::vec(-2.0f64..2.0, 13)) {
        let pb = problem(6);
        let u = Vector::from_vec(u);
        prop_assert!((pb.value(&u) - pb.value(&-&u)).abs() <= 1e-12 * (1.0 + pb.value(&u).abs()));
        prop_assert!((&pb.gradient(&u) + &pb.gradient(&-&u)).norm() <= 1e-12 * (1.0 + pb.gradient(&u).norm()));
    }
}

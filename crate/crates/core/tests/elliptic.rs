use fountain_core::functional::evenness_defect;
use fountain_core::{
    compute_geometry, grad_check, sampling, DirichletProblem, EllipticConfig, FountainConfig,
    FountainProblem, Functional, HModel, Subspace, Vector,
};
use proptest::prelude::*;

fn problem(n_modes: usize, h_model: HModel) -> DirichletProblem<f64> {
    DirichletProblem::new(EllipticConfig {
        n_modes,
        h_model,
        ..Default::default()
    })
    .unwrap()
}

#[test]
fn quadratic_part_without_h() {
    let pb = problem(5, HModel::Zero);
    let r = 1.7;
    let mut v = vec![0.0; 5];
    v[2] = r;
    assert!((pb.value(&pb.pair(&[0.0; 5], &v)) - 0.5 * r * r).abs() < 1e-14);
    assert!((pb.value(&pb.pair(&v, &[0.0; 5])) + 0.5 * r * r).abs() < 1e-14);
}

#[test]
fn both_models_have_exact_odd_gradients() {
    for model in [HModel::Decoupled, HModel::Coupled] {
        let pb = problem(12, model);
        assert!(grad_check(&pb, 50, 1e-6, 5).unwrap() <= 1e-5, "{model:?}");
        assert!(evenness_defect(&pb, 100, 6) <= 1e-12);
        assert_eq!(pb.gradient(&pb.space().zero()).norm(), 0.0);
    }
}

#[test]
fn z_sphere_lower_bound_on_samples() {
    let pb = problem(12, HModel::Decoupled);
    let c = pb.growth_constant();
    let omega = pb.config().length;
    let range = pb.space().range(Subspace::Z).unwrap();
    let mut rng = sampling::rng(12);
    for i in 0..200 {
        let r = 0.1 + 0.05 * i as f64;
        let dir: Vec<f64> = sampling::sphere_point(&mut rng, range.len(), r);
        let mut w = Vector::zeros(pb.space().dim());
        w[range.clone()].copy_from_slice(&dir);
        let lhs = pb.value(&w);
        let rhs = 0.5 * r * r - c * pb.lp_norm_pow(w.as_slice()) - c * omega;
        assert!(lhs >= rhs - 1e-12);
    }
}

#[test]
fn geometry_meets_the_level_bound() {
    let pb = problem(8, HModel::Decoupled);
    let cfg = FountainConfig::default();
    let c = pb.growth_constant();
    let omega = pb.config().length;
    for k in 2..=4 {
        let g = compute_geometry(&pb, k, &cfg).unwrap();
        assert!(g.feasible);
        let closed = 0.25 * (c * 4.0 * g.beta_k.powi(4)).powf(-1.0) - c * omega;
        assert!((closed - g.b_lower_bound).abs() <= 1e-9 * closed.abs().max(1.0));
        assert!(g.b_k >= closed - 1e-3, "k = {k}");
    }
}

#[test]
fn coercivity_report_for_each_model() {
    let dec = problem(8, HModel::Decoupled).coercivity_check(400, &[2, 3, 4], 1);
    assert!((dec.a1 - 0.25).abs() < 1e-12 && dec.a2 == 0.0);
    assert!(dec.bound_holds && dec.bound_tight && dec.coercive);

    let cou = problem(8, HModel::Coupled).coercivity_check(400, &[2, 3], 1);
    assert!((cou.a1 - 0.25).abs() < 1e-9 && cou.bound_holds && cou.coercive);

    let zero = problem(8, HModel::Zero).coercivity_check(50, &[2, 3], 1);
    assert!(!zero.coercive);
    assert!(zero.rays.iter().any(|r| !r.diverges_down));
}

#[test]
fn ray_values_follow_the_homogeneous_polynomial() {
    let pb = problem(8, HModel::Decoupled);
    let f = pb.space().filtration(3).unwrap();
    let mut rng = sampling::rng(21);
    for _ in 0..10 {
        let w = f.embed_y(&sampling::sphere_point::<f64, _>(&mut rng, f.dim_y_k(), 1.0));
        let (u, v) = pb.split(w.as_slice());
        let quad = 0.5 * (v.iter().map(|x| x * x).sum::<f64>() - u.iter().map(|x| x * x).sum::<f64>());
        let h = pb.psi().moments(w.as_slice()).0;
        assert!(h > 0.0);
        for t in [0.5, 1.0, 4.0, 32.0] {
            let want = quad * t * t - h * t.powi(4);
            assert!((pb.value(&w.scaled(t)) - want).abs() <= 1e-10 * want.abs().max(1.0));
        }
        // sign analysis: negative beyond the larger root
        let t_star = (quad.max(0.0) / h).sqrt();
        assert!(pb.value(&w.scaled(2.0 * t_star + 1.0)) < 0.0);
    }
}

#[test]
fn ps_bounds_on_solutions_driver_sequences_and_blowups() {
    let pb = problem(6, HModel::Decoupled);
    let cfg = FountainConfig::default();
    let seq = pb.solve_system(&[2, 3], &cfg).unwrap();
    let cp = &seq.points[0];

    let constant = vec![cp.coords.clone(); 5];
    let rep = pb.ps_boundedness_check(&constant, 1e-3);
    assert!(rep.hypothesis_ok);
    assert_eq!(rep.lp_bound_holds, Some(true));
    assert_eq!(rep.norm_bound_holds, Some(true));

    let driver: Vec<Vector<f64>> = seq
        .minimax
        .iter()
        .flat_map(|m| m.ps_points.iter().map(|p| p.point.clone()))
        .chain(seq.points.iter().map(|p| p.coords.clone()))
        .collect();
    let gate = driver.iter().map(|w| pb.gradient(w).norm()).fold(0.0, f64::max) + 1.0;
    let rep = pb.ps_boundedness_check(&driver, gate);
    assert!(rep.d1.is_finite() && rep.d2.is_finite());
    assert_eq!(rep.norm_bound_holds, Some(true));
    assert!(rep.max_norm <= rep.norm_bound);

    let scaled: Vec<Vector<f64>> = (1..6).map(|n| cp.coords.scaled(4f64.powi(n))).collect();
    let rep = pb.ps_boundedness_check(&scaled, 1e-3);
    assert!(!rep.hypothesis_ok);
    assert_eq!(rep.lp_bound_holds, None);
    assert_eq!(rep.norm_bound_holds, None);
}

#[test]
fn small_system_solve() {
    let pb = problem(6, HModel::Decoupled);
    let cfg = FountainConfig::default();
    let seq = pb.solve_system(&[2, 3, 4], &cfg).unwrap();
    assert!(seq.points.len() >= 3);
    assert!(seq.strictly_increasing());
    for cp in &seq.points {
        let (ru, rv) = pb.residuals(&cp.coords);
        assert!(ru.max(rv) <= 10.0 * cfg.crit_tol);
        assert!(cp.grad_norm <= cfg.crit_tol && cp.energy > 0.0);
    }
}

#[test]
fn coupled_system_solve() {
    let pb = problem(5, HModel::Coupled);
    let cfg = FountainConfig::default();
    let seq = pb.solve_system(&[2, 3], &cfg).unwrap();
    assert_eq!(seq.level_energies().iter().flatten().count(), 2);
    for cp in &seq.points {
        assert!(cp.grad_norm <= cfg.crit_tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_identity_integrated(w in prop::collection::vec(-3.0f64..3.0, 12), coupled in any::<bool>()) {
        let model = if coupled { HModel::Coupled } else { HModel::Decoupled };
        let pb = problem(6, model);
        let (h, euler) = pb.psi().moments(&w);
        prop_assert!((4.0 * h - euler).abs() <= 1e-10 * euler.abs().max(1.0));
    }

    #[test]
    fn transfer_pads_then_truncates_back(w in prop::collection::vec(-3.0f64..3.0, 10)) {
        let small = problem(5, HModel::Decoupled);
        let big = problem(9, HModel::Decoupled);
        let up = big.transfer(&small, &w);
        prop_assert_eq!(small.transfer(&big, up.as_slice()).into_vec(), w.clone());
        let wv = Vector::from_vec(w);
        prop_assert!((big.value(&up) - small.value(&wv)).abs() <= 1e-9 * small.value(&wv).abs().max(1.0));
    }
}

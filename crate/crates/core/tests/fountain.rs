use fountain_core::fountain::{
    compute_beta_k, compute_r_k, minimax_run, verify_linking, LinkingOptions,
};
use fountain_core::{
    compute_geometry, find_critical_sequence, sampling, EllipticConfig, FountainConfig,
    FountainProblem, Functional, GalerkinSpace, GeometryReport, IndefiniteFunctional, LinkingSets,
    SyntheticConfig, SyntheticProblem, Vector,
};
use fountain_core::{DirichletProblem, Scalar};
use rand::Rng;

fn synthetic() -> SyntheticProblem<f64> {
    SyntheticProblem::new(SyntheticConfig::default()).unwrap()
}

#[test]
fn synthetic_beta_and_radius_match_closed_forms() {
    let pb = synthetic();
    let cfg = FountainConfig::default();
    for k in 2..=6 {
        let b = compute_beta_k(&pb, k, &cfg).unwrap();
        assert!((b.beta - pb.exact_beta(k)).abs() < 1e-9, "k = {k}");
        assert!(b.confident);
        let r = compute_r_k(0.25, 4.0, b.beta);
        let exact = ((1 + k) as f64).sqrt();
        assert!((r - exact).abs() < 1e-8);
    }
}

#[test]
fn synthetic_geometry_hits_the_exact_level() {
    let pb = synthetic();
    let cfg = FountainConfig::default();
    let mut last = f64::NEG_INFINITY;
    for k in 2..=5 {
        let g = compute_geometry(&pb, k, &cfg).unwrap();
        assert!(g.feasible && g.r_k < g.rho_k && g.a_k <= 0.0);
        assert!((g.b_k - pb.exact_level(k)).abs() < 1e-8, "k = {k}: {}", g.b_k);
        assert!(g.b_k >= g.b_lower_bound - 1e-9);
        assert!(g.b_k > last);
        last = g.b_k;
    }
}

/// `|v|_p` on the unit circle of a two-dimensional `Z_k`, on a dense grid.
fn angular_beta<P: FountainProblem<f64>>(pb: &P, k: usize) -> f64 {
    let space = pb.space();
    let f = space.filtration(k).unwrap();
    assert_eq!(f.dim_z_k(), 2);
    let p = pb.exponent();
    (0..721)
        .map(|i| {
            let a = i as f64 * std::f64::consts::PI / 720.0;
            let u = f.embed_z(&[a.cos(), a.sin()]);
            pb.lp_norm_pow(&u).powf(1.0 / p)
        })
        .fold(0.0, f64::max)
}

#[test]
fn two_dimensional_beta_matches_angular_grid() {
    let pb = DirichletProblem::<f64>::new(EllipticConfig {
        n_modes: 6,
        ..Default::default()
    })
    .unwrap();
    let k = 4;
    let est = compute_beta_k(&pb, k, &FountainConfig::default()).unwrap();
    let grid = angular_beta(&pb, k);
    assert!((est.beta - grid).abs() < 1e-3, "{} vs {grid}", est.beta);
    assert!(est.beta >= grid - 1e-12);
}

#[test]
fn linking_for_identity_and_odd_perturbations() {
    let space = GalerkinSpace::new(2, 6).unwrap();
    let k = 2;
    let sets = LinkingSets::new(&space, k, 3.0, 1.0).unwrap();
    let opts = LinkingOptions::default();
    let id = |u: &Vector<f64>| u.clone();
    let w = verify_linking(&space, &sets, &id, &opts).unwrap();
    assert!(w.radius_error <= 1e-6 && w.projection_norm <= 1e-6);

    let n = space.dim();
    let mut rng = sampling::rng(31);
    for trial in 0..20 {
        let a: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| 0.15 * rng.random_range(-1.0..1.0)).collect())
            .collect();
        let c: Vec<f64> = (0..n).map(|_| 0.05 * rng.random_range(-1.0..1.0)).collect();
        let rho = sets.rho;
        let gamma = move |u: &Vector<f64>| {
            let s = (1.0 - u.norm_sq() / (rho * rho)).max(0.0);
            let mut out = u.clone();
            for i in 0..n {
                let lin: f64 = (0..n).map(|j| a[i][j] * u[j]).sum();
                out[i] += s * (lin + c[i] * u[i % 5].powi(3));
            }
            out
        };
        let w = verify_linking(&space, &sets, &gamma, &opts)
            .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        let img = gamma(&w.u0);
        assert!((img.norm() - sets.r).abs() <= 1e-6);
        assert!(img[..space.dim_y() + k].iter().map(|x| x * x).sum::<f64>().sqrt() <= 1e-6);
    }
}

#[test]
fn linking_rejects_maps_moving_the_boundary() {
    let space = GalerkinSpace::new(2, 6).unwrap();
    let sets = LinkingSets::new(&space, 2, 3.0, 1.0).unwrap();
    let shrink = |u: &Vector<f64>| u.scaled(0.5);
    assert!(verify_linking(&space, &sets, &shrink, &LinkingOptions::default()).is_err());
}

#[test]
fn zero_rounds_report_the_ball_sup() {
    let space = GalerkinSpace::new(2, 5).unwrap();
    let phi = IndefiniteFunctional::<f64>::quadratic(space);
    let rho = 2.0;
    let geom = GeometryReport {
        k: 2,
        beta_k: 0.0,
        r_k: 1.0,
        rho_k: rho,
        a_k: -0.5 * rho * rho,
        b_k: 0.5,
        d_k: 0.5 * rho * rho,
        b_lower_bound: 0.0,
        growth_constant: 0.0,
        exponent: 4.0,
        feasible: true,
        low_confidence: vec![],
    };
    let mut cfg = FountainConfig::default();
    cfg.minimax.max_rounds = 0;
    let (res, stall) = minimax_run(&phi, &geom, &cfg).unwrap();
    assert!(stall.is_none());
    assert_eq!(res.rounds, 0);
    assert!(res.c_k_estimate <= geom.d_k + 1e-12);
    assert!(res.c_k_estimate >= geom.d_k - 1e-2, "{}", res.c_k_estimate);
    assert!(res.c_k_estimate >= geom.b_k);
}

#[test]
fn empty_level_range_gives_no_points() {
    let seq = find_critical_sequence(&synthetic(), &[], &FountainConfig::default());
    assert!(seq.points.is_empty() && seq.levels.is_empty());
}

#[test]
fn synthetic_sequence_is_critical_and_increasing() {
    let pb = synthetic();
    let cfg = FountainConfig::default();
    let seq = find_critical_sequence(&pb, &[2, 3, 4], &cfg);
    assert_eq!(seq.points.len(), 3);
    assert!(seq.strictly_increasing());
    for (lvl, mm) in seq.levels.iter().zip(&seq.minimax) {
        let g = lvl.geometry.as_ref().unwrap();
        assert!(lvl.c_k_estimate.unwrap() >= g.b_k - cfg.minimax_tol);
        let sets = LinkingSets::new(&pb.space(), g.k, g.rho_k, g.r_k).unwrap();
        let gamma = |u: &Vector<f64>| mm.apply_gamma(&pb, u).unwrap();
        verify_linking(&pb.space(), &sets, &gamma, &LinkingOptions::default()).unwrap();
    }
    for cp in &seq.points {
        assert!(cp.grad_norm <= cfg.crit_tol);
        assert!(cp.residual <= 10.0 * cfg.crit_tol);
        // ± orbit: the mirror image is critical with the same energy
        let m = -&cp.coords;
        assert!((pb.value(&m) - cp.energy).abs() < 1e-12);
        assert!(pb.gradient(&m).norm() <= cfg.crit_tol);
    }
}

#[test]
fn single_precision_beta() {
    let pb = SyntheticProblem::<f32>::new(SyntheticConfig::default()).unwrap();
    let b = compute_beta_k(&pb, 3, &FountainConfig::default()).unwrap();
    assert!((b.beta.to_f64_lossy() - 4f64.powf(-0.25)).abs() < 1e-4);
}

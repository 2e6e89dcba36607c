//! Fountain geometry and minimax descent.
//!
//! For a level `k` the pipeline computes `β_k = sup{|v|_p : v ∈ Z_k, ‖v‖ = 1}`,
//! the radii `r_k < ρ_k`, the levels
//!
//! * `a_k = sup φ` on the sphere of radius `ρ_k` in `Y_k`,
//! * `b_k = inf φ` on the sphere of radius `r_k` in `Z_k`,
//! * `d_k = sup φ` on the ball `B_k` of radius `ρ_k` in `Y_k`,
//!
//! and then deforms the identity surface `B_k → X` by successive equivariant
//! deformations to approach `c_k = inf_γ sup_{B_k} φ∘γ ≥ b_k`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degree::{borsuk_ulam_zero, DegreeError, DegreeOptions, FiniteMap, Region};
use crate::deformation::{
    DeformationError, DeformationOptions, DeformationParams, DeformationStage, DistanceHint,
    PointCloud,
};
use crate::functional::Functional;
use crate::linalg::symmetric_pinv_solve;
use crate::optim::{ball_ascent, sphere_ascent, AscentOptions, AscentResult};
use crate::sampling;
use crate::scalar::{fmax, Scalar};
use crate::spaces::{norm, GalerkinSpace, LinkingSets, SpaceError, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FountainError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("fountain levels start at k = 2, got {k}")]
    LevelTooLow { k: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sup of phi on the Y_{k} sphere stayed above {target} up to rho = {rho} (a = {a})")]
    CoercivityNotObserved {
        k: usize,
        rho: f64,
        a: f64,
        target: f64,
    },
    #[error("geometry infeasible at k = {k}: {reason}")]
    Infeasible { k: usize, reason: String },
    #[error("linking search failed: {0}")]
    Linking(#[from] DegreeError),
    #[error("gamma does not fix the boundary of B_k (defect {defect:e})")]
    BoundaryNotFixed { defect: f64 },
    #[error("linking point misses N_k: radius error {radius_error:e}, projection {projection:e}")]
    LinkingInaccurate { radius_error: f64, projection: f64 },
    #[error(
        "minimax stalled at k = {k} after {rounds} rounds (sup {c_bar}, witness gradient {witness_grad:e})"
    )]
    Stall {
        k: usize,
        rounds: usize,
        c_bar: f64,
        witness_grad: f64,
    },
    #[error(transparent)]
    Deformation(#[from] DeformationError),
}

/// Data the fountain pipeline needs beyond the functional itself.
pub trait FountainProblem<S: Scalar>: Functional<S> {
    /// Exponent `p > 2` of the nonlinearity.
    fn exponent(&self) -> S;

    /// Constant `c` of the lower bound on `Z_k`; `r_k = (c p β_k^p)^{1/(2−p)}`.
    fn growth_constant(&self) -> S;

    /// `(factor, offset)` such that `b_k ≥ factor · r_k² − offset`.
    fn lower_bound_coefficients(&self) -> (S, S);

    /// `|u|_p^p`
    fn lp_norm_pow(&self, u: &[S]) -> S;

    fn lp_norm_pow_gradient(&self, u: &[S]) -> Vec<S>;

    /// Norm of the discrete Euler–Lagrange residual.
    fn euler_lagrange_residual(&self, u: &Vector<S>) -> S;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimaxConfig {
    /// Initial mesh size on `B_k`, counting antipodal pairs twice.
    pub mesh_n: usize,
    /// Extra points clustered around maximizers of `φ` on `B_k`.
    pub cluster_n: usize,
    /// Cluster spread as a fraction of `r_k`.
    pub cluster_radius: f64,
    pub max_rounds: usize,
    pub stall_rounds: usize,
    /// Largest number of antipodal pairs deformed per round.
    pub active_max: usize,
    pub refine_top: usize,
    pub refine_children: usize,
    /// Initial refinement spread as a fraction of `r_k`; shrinks each round.
    pub refine_radius: f64,
    pub refine_decay: f64,
    pub eps_min: f64,
    pub delta_frac: f64,
    /// Cloud size of each deformation stage.
    pub cloud_n: usize,
}

impl Default for MinimaxConfig {
    fn default() -> Self {
        Self {
            mesh_n: 4096,
            cluster_n: 64,
            cluster_radius: 0.05,
            max_rounds: 30,
            stall_rounds: 10,
            active_max: 32,
            refine_top: 4,
            refine_children: 4,
            refine_radius: 0.02,
            refine_decay: 0.85,
            eps_min: 1e-8,
            delta_frac: 0.1,
            cloud_n: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FountainConfig {
    pub seed: u64,
    pub beta_restarts: usize,
    pub beta_tol: f64,
    pub extremum_restarts: usize,
    pub extremum_tol: f64,
    pub ascent_max_iter: usize,
    pub ascent_tol: f64,
    pub a_target: f64,
    pub max_doublings: usize,
    pub crit_tol: f64,
    pub minimax_tol: f64,
    pub dedup_tol: f64,
    pub polish_max_iter: usize,
    pub polish_candidates: usize,
    pub minimax: MinimaxConfig,
}

impl Default for FountainConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            beta_restarts: 16,
            beta_tol: 1e-6,
            extremum_restarts: 12,
            extremum_tol: 1e-6,
            ascent_max_iter: 3000,
            ascent_tol: 1e-10,
            a_target: 0.0,
            max_doublings: 30,
            crit_tol: 1e-6,
            minimax_tol: 1e-4,
            dedup_tol: 1e-4,
            polish_max_iter: 60,
            polish_candidates: 6,
            minimax: MinimaxConfig::default(),
        }
    }
}

impl FountainConfig {
    fn ascent<S: Scalar>(&self) -> AscentOptions<S> {
        AscentOptions {
            max_iter: self.ascent_max_iter,
            grad_tol: S::lit(self.ascent_tol),
        }
    }
}

fn embed<S: Scalar>(n: usize, range: &std::ops::Range<usize>, x: &[S]) -> Vector<S> {
    let mut u = Vector::zeros(n);
    u[range.clone()].copy_from_slice(x);
    u
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaEstimate<S> {
    pub k: usize,
    pub beta: S,
    pub argmax: Vector<S>,
    /// Ascent runs ending within `beta_tol` of the best value.
    pub agreeing: usize,
    pub runs: usize,
    /// `false` when fewer than two runs reach the best value.
    pub confident: bool,
}

/// `β_k = sup{|v|_p : v ∈ Z_k, ‖v‖ = 1}` by multistart sphere ascent.
///
/// Starts are the basis vectors of `Z_k` and `beta_restarts` random points.
pub fn compute_beta_k<S: Scalar, P: FountainProblem<S> + ?Sized>(
    problem: &P,
    k: usize,
    cfg: &FountainConfig,
) -> Result<BetaEstimate<S>, FountainError> {
    let space = problem.space();
    space.check_level(k)?;
    let range = space.range(Subspace::Zk(k))?;
    let n = space.dim();
    let m = range.len();
    let p = problem.exponent();
    let obj = |x: &[S]| {
        let u = embed(n, &range, x);
        let v = problem.lp_norm_pow(&u);
        let g = problem.lp_norm_pow_gradient(&u);
        (v, g[range.clone()].to_vec())
    };
    let mut starts: Vec<Vec<S>> = (0..m)
        .map(|i| {
            let mut e = vec![S::zero(); m];
            e[i] = S::one();
            e
        })
        .collect();
    let mut rng = sampling::substream(cfg.seed, 0xbe7a_0000 + k as u64);
    for _ in 0..cfg.beta_restarts {
        starts.push(sampling::sphere_point(&mut rng, m, S::one()));
    }
    let opts = cfg.ascent();
    let runs: Vec<AscentResult<S>> = starts
        .iter()
        .map(|x0| sphere_ascent(obj, x0, S::one(), &opts))
        .collect();
    let best = runs
        .iter()
        .max_by(|a, b| a.value.total_cmp_s(&b.value))
        .expect("at least one start");
    let beta = best.value.powf(S::one() / p);
    let tol = S::lit(cfg.beta_tol);
    let agreeing = runs
        .iter()
        .filter(|r| beta - r.value.powf(S::one() / p) <= tol)
        .count();
    Ok(BetaEstimate {
        k,
        beta,
        argmax: embed(n, &range, &best.point),
        agreeing,
        runs: runs.len(),
        confident: agreeing >= 2,
    })
}

/// `r_k = (c p β^p)^{1/(2−p)}`
pub fn compute_r_k<S: Scalar>(c: S, p: S, beta: S) -> S {
    (c * p * beta.powf(p)).powf(S::one() / (S::lit(2.0) - p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    Sup,
    Inf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumEstimate<S> {
    pub value: S,
    pub point: Vector<S>,
    pub agreeing: usize,
    pub runs: usize,
    pub confident: bool,
    /// Distinct end points of the runs, best first (antipodes identified).
    #[serde(skip)]
    pub candidates: Vec<(S, Vector<S>)>,
}

trait TotalCmp {
    fn total_cmp_s(&self, other: &Self) -> Ordering;
}

impl<S: Scalar> TotalCmp for S {
    fn total_cmp_s(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or_else(|| {
            // NaN sorts lowest
            match (self.is_nan(), other.is_nan()) {
                (true, true) => Ordering::Equal,
                (true, false) => Ordering::Less,
                _ => Ordering::Greater,
            }
        })
    }
}

fn summarize<S: Scalar>(
    n: usize,
    range: &std::ops::Range<usize>,
    runs: Vec<AscentResult<S>>,
    sign: S,
    tol: S,
) -> ExtremumEstimate<S> {
    let mut ends: Vec<(S, Vector<S>)> = runs
        .into_iter()
        .map(|r| (sign * r.value, embed(n, range, &r.point)))
        .collect();
    // best first in the requested sense
    ends.sort_by(|a, b| (sign * b.0).total_cmp_s(&(sign * a.0)));
    let (value, point) = ends[0].clone();
    let scale = fmax(S::one(), value.abs());
    let agreeing = ends
        .iter()
        .filter(|(v, _)| (*v - value).abs() <= tol * scale)
        .count();
    let mut candidates: Vec<(S, Vector<S>)> = Vec::new();
    for (v, u) in ends.iter() {
        let dup = candidates.iter().any(|(_, w)| {
            let lim = S::lit(1e-6) * fmax(S::one(), w.norm());
            u.distance(w) <= lim || (u + w).norm() <= lim
        });
        if !dup {
            candidates.push((*v, u.clone()));
        }
    }
    ExtremumEstimate {
        value,
        point,
        agreeing,
        runs: ends.len(),
        confident: agreeing >= 2,
        candidates,
    }
}

fn starts_for<S: Scalar>(
    m: usize,
    radius: S,
    restarts: usize,
    both_signs: bool,
    rng: &mut sampling::SeededRng,
    interior: bool,
) -> Vec<Vec<S>> {
    let mut starts = Vec::new();
    let scale = if interior { S::lit(0.5) * radius } else { radius };
    for i in 0..m {
        let mut e = vec![S::zero(); m];
        e[i] = scale;
        starts.push(e.clone());
        if both_signs {
            e[i] = -scale;
            starts.push(e);
        }
    }
    for _ in 0..restarts {
        starts.push(if interior {
            sampling::ball_point(rng, m, radius)
        } else {
            sampling::sphere_point(rng, m, radius)
        });
    }
    starts
}

/// Extremum of `φ` on the sphere of radius `radius` in `target`
/// (`Y_k` or `Z_k`), by multistart Riemannian ascent.
pub fn estimate_sphere_extremum<S: Scalar, F: Functional<S> + ?Sized>(
    phi: &F,
    target: Subspace,
    radius: S,
    mode: Extremum,
    restarts: usize,
    cfg: &FountainConfig,
) -> Result<ExtremumEstimate<S>, FountainError> {
    if !(radius > S::zero()) {
        return Err(FountainError::InvalidParameter("radius must be positive".into()));
    }
    let space = phi.space();
    let range = space.range(target)?;
    let n = space.dim();
    let m = range.len();
    let sign = match mode {
        Extremum::Sup => S::one(),
        Extremum::Inf => -S::one(),
    };
    let obj = |x: &[S]| {
        let (v, g) = phi.value_and_gradient(&embed(n, &range, x));
        (sign * v, g[range.clone()].iter().map(|&gi| sign * gi).collect())
    };
    let tag = match target {
        Subspace::Yk(k) => 0x5900 + k as u64,
        Subspace::Zk(k) => 0x5a00 + k as u64,
        Subspace::Y => 0x59ff,
        Subspace::Z => 0x5aff,
    };
    let mut rng = sampling::substream(cfg.seed, tag);
    let starts = starts_for(m, radius, restarts, !phi.is_even(), &mut rng, false);
    let opts = cfg.ascent();
    let runs = starts
        .iter()
        .map(|x0| sphere_ascent(obj, x0, radius, &opts))
        .collect();
    Ok(summarize(n, &range, runs, sign, S::lit(cfg.extremum_tol)))
}

/// `d_k = sup φ` on the ball of radius `radius` in `Y_k`.
pub fn estimate_ball_sup<S: Scalar, F: Functional<S> + ?Sized>(
    phi: &F,
    k: usize,
    radius: S,
    restarts: usize,
    cfg: &FountainConfig,
) -> Result<ExtremumEstimate<S>, FountainError> {
    let space = phi.space();
    let range = space.range(Subspace::Yk(k))?;
    let n = space.dim();
    let m = range.len();
    let obj = |x: &[S]| {
        let (v, g) = phi.value_and_gradient(&embed(n, &range, x));
        (v, g[range.clone()].to_vec())
    };
    let mut rng = sampling::substream(cfg.seed, 0xba11 + k as u64);
    let starts = starts_for(m, radius, restarts, !phi.is_even(), &mut rng, true);
    let opts = cfg.ascent();
    let runs = starts
        .iter()
        .map(|x0| ball_ascent(obj, x0, radius, &opts))
        .collect();
    Ok(summarize(n, &range, runs, S::one(), S::lit(cfg.extremum_tol)))
}

/// Doubling search from `1.01·r_k` for a radius with `sup φ ≤ a_target` on
/// the `Y_k` sphere.
pub fn choose_rho_k<S: Scalar, F: Functional<S> + ?Sized>(
    phi: &F,
    k: usize,
    r_k: S,
    a_target: S,
    cfg: &FountainConfig,
) -> Result<(S, ExtremumEstimate<S>), FountainError> {
    if !(r_k > S::zero()) {
        return Err(FountainError::InvalidParameter("r_k must be positive".into()));
    }
    let mut rho = S::lit(1.01) * r_k;
    let mut last = S::infinity();
    for _ in 0..=cfg.max_doublings {
        let est = estimate_sphere_extremum(
            phi,
            Subspace::Yk(k),
            rho,
            Extremum::Sup,
            cfg.extremum_restarts,
            cfg,
        )?;
        if est.value <= a_target {
            return Ok((rho, est));
        }
        last = est.value;
        rho = rho + rho;
    }
    Err(FountainError::CoercivityNotObserved {
        k,
        rho: (rho / S::lit(2.0)).to_f64_lossy(),
        a: last.to_f64_lossy(),
        target: a_target.to_f64_lossy(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport<S> {
    pub k: usize,
    pub beta_k: S,
    pub r_k: S,
    pub rho_k: S,
    pub a_k: S,
    pub b_k: S,
    pub d_k: S,
    /// `factor · r_k² − offset`
    pub b_lower_bound: S,
    pub growth_constant: S,
    pub exponent: S,
    pub feasible: bool,
    /// Estimates whose restarts did not agree.
    pub low_confidence: Vec<String>,
}

pub fn compute_geometry<S: Scalar, P: FountainProblem<S> + ?Sized>(
    problem: &P,
    k: usize,
    cfg: &FountainConfig,
) -> Result<GeometryReport<S>, FountainError> {
    if k < 2 {
        return Err(FountainError::LevelTooLow { k });
    }
    let mut low = Vec::new();
    let beta = compute_beta_k(problem, k, cfg)?;
    if !beta.confident {
        low.push("beta_k".to_string());
    }
    let c = problem.growth_constant();
    let p = problem.exponent();
    let r = compute_r_k(c, p, beta.beta);
    let b = estimate_sphere_extremum(
        problem,
        Subspace::Zk(k),
        r,
        Extremum::Inf,
        cfg.extremum_restarts,
        cfg,
    )?;
    if !b.confident {
        low.push("b_k".to_string());
    }
    let (rho, a) = choose_rho_k(problem, k, r, S::lit(cfg.a_target), cfg)?;
    if !a.confident {
        low.push("a_k".to_string());
    }
    let d = estimate_ball_sup(problem, k, rho, cfg.extremum_restarts, cfg)?;
    let (factor, offset) = problem.lower_bound_coefficients();
    let feasible = a.value <= S::zero() && b.value > S::zero() && d.value.is_finite() && r < rho;
    Ok(GeometryReport {
        k,
        beta_k: beta.beta,
        r_k: r,
        rho_k: rho,
        a_k: a.value,
        b_k: b.value,
        d_k: d.value,
        b_lower_bound: factor * r * r - offset,
        growth_constant: c,
        exponent: p,
        feasible,
        low_confidence: low,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkingOptions {
    /// Radial scan resolution for the first exit from `‖γ‖ < r_k`.
    pub scan_steps: usize,
    /// Acceptance tolerance on `|‖γ(u₀)‖ − r_k|` and `‖P_{k−1}γ(u₀)‖`.
    pub tol: f64,
    pub boundary_samples: usize,
    pub degree: DegreeOptions,
}

impl Default for LinkingOptions {
    fn default() -> Self {
        Self {
            scan_steps: 64,
            tol: 1e-6,
            boundary_samples: 64,
            degree: DegreeOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkingWitness<S> {
    pub u0: Vector<S>,
    pub image: Vector<S>,
    pub radius_error: S,
    pub projection_norm: S,
}

/// Finds `u₀ ∈ B_k` with `γ(u₀) ∈ N_k`.
///
/// `U = {u ∈ B_k : ‖γ(u)‖ < r_k}` is parametrized by the first radial exit
/// `t*(d)·d` over unit directions `d` of `Y_k`; the odd map
/// `d ↦ P_{k−1}γ(t*(d)·d)` into `Y_{k−1}` has a zero by Borsuk–Ulam, located by
/// the degree engine.
pub fn verify_linking<S: Scalar>(
    space: &GalerkinSpace,
    linking: &LinkingSets<S>,
    gamma: &(dyn Fn(&Vector<S>) -> Vector<S> + Send + Sync),
    opts: &LinkingOptions,
) -> Result<LinkingWitness<S>, FountainError> {
    let f = space.filtration(linking.k)?;
    let m = f.dim_y_k();
    let (rho, r) = (linking.rho, linking.r);
    let n = space.dim();
    let yr = f.y_range();

    // γ must fix ∂B_k
    let mut rng = sampling::substream(opts.degree.seed, 0xb0d);
    let mut defect = S::zero();
    for _ in 0..opts.boundary_samples {
        let u = embed(n, &yr, &sampling::sphere_point(&mut rng, m, rho));
        defect = fmax(defect, gamma(&u).distance(&u));
    }
    if defect > S::lit(1e-9) * fmax(S::one(), rho) {
        return Err(FountainError::BoundaryNotFixed {
            defect: defect.to_f64_lossy(),
        });
    }

    let steps = opts.scan_steps.max(2);
    let exit = |d: &[S]| -> S {
        let at = |t: S| -> S {
            let x: Vec<S> = d.iter().map(|&v| t * v).collect();
            gamma(&embed(n, &f.y_range(), &x)).norm()
        };
        let mut lo = S::zero();
        let mut hi = rho;
        for i in 1..=steps {
            let t = rho * S::lit_usize(i) / S::lit_usize(steps);
            if at(t) >= r {
                hi = t;
                break;
            }
            lo = t;
        }
        for _ in 0..200 {
            let mid = S::lit(0.5) * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if at(mid) >= r {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let yr2 = f.y_range();
    let exit_ref = &exit;
    let map = FiniteMap::new(m, move |x: &[S]| {
        let nx = norm(x);
        if nx == S::zero() {
            return vec![S::zero(); m];
        }
        let d: Vec<S> = x.iter().map(|&v| v / nx).collect();
        let t = exit_ref(&d);
        let u: Vec<S> = d.iter().map(|&v| t * v).collect();
        let img = gamma(&embed(n, &yr2, &u));
        let mut out: Vec<S> = img[..m - 1].iter().map(|&v| nx * v).collect();
        out.push(S::zero());
        out
    });
    let ball = Region::unit_ball(m);
    let subspace: Vec<usize> = (0..m - 1).collect();
    let x = borsuk_ulam_zero(&map, &ball, &subspace, &opts.degree)?;
    let nx = norm(&x);
    let d: Vec<S> = x.iter().map(|&v| v / nx).collect();
    let t = exit(&d);
    let u0 = embed(n, &f.y_range(), &d.iter().map(|&v| t * v).collect::<Vec<_>>());
    let image = gamma(&u0);
    let radius_error = (image.norm() - r).abs();
    let projection_norm = norm(&image[..m - 1]);
    let tol = S::lit(opts.tol);
    if radius_error > tol || projection_norm > tol {
        return Err(FountainError::LinkingInaccurate {
            radius_error: radius_error.to_f64_lossy(),
            projection: projection_norm.to_f64_lossy(),
        });
    }
    Ok(LinkingWitness {
        u0,
        image,
        radius_error,
        projection_norm,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsPoint<S> {
    pub round: usize,
    pub point: Vector<S>,
    pub energy: S,
    pub grad_norm: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundLog<S> {
    pub round: usize,
    pub c_bar: S,
    pub eps: S,
    pub delta: S,
    pub active: usize,
    pub refined: usize,
    pub witness_grad: S,
    pub critical_hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaxResult<S> {
    pub k: usize,
    pub c_k_estimate: S,
    pub rounds: usize,
    pub ps_points: Vec<PsPoint<S>>,
    pub critical_point: Option<Vector<S>>,
    pub surface_log: Vec<RoundLog<S>>,
    pub mesh_size: usize,
    pub stalled: bool,
    /// Highest images of the final surface, best first.
    #[serde(skip)]
    pub top: Vec<Vector<S>>,
    /// The deformations composing `γ`, in application order.
    #[serde(skip)]
    pub stages: Vec<DeformationStage<S>>,
}

impl<S: Scalar> MinimaxResult<S> {
    /// `γ(u)` for the surface built by the descent.
    pub fn apply_gamma<F: Functional<S> + ?Sized>(
        &self,
        phi: &F,
        u: &Vector<S>,
    ) -> Result<Vector<S>, DeformationError> {
        replay(phi, &self.stages, u).map(|(v, _)| v)
    }
}

fn replay<S: Scalar, F: Functional<S> + ?Sized>(
    phi: &F,
    stages: &[DeformationStage<S>],
    u: &Vector<S>,
) -> Result<(Vector<S>, Option<Vector<S>>), DeformationError> {
    let mut y = u.clone();
    let mut hit = None;
    for st in stages {
        let p = &st.params;
        let e = phi.value(&y);
        if (e - p.level).abs() > p.eps + p.eps {
            continue;
        }
        if p.set.distance(&y) > p.delta + p.delta {
            continue;
        }
        let r = st.bind(phi).eta(S::one(), &y)?;
        if r.critical_hit.is_some() {
            hit = r.critical_hit;
        }
        y = r.endpoint;
    }
    Ok((y, hit))
}

struct Surface<S> {
    pre: Vec<Vector<S>>,
    img: Vec<Vector<S>>,
    energy: Vec<S>,
}

impl<S: Scalar> Surface<S> {
    fn push(&mut self, pre: Vector<S>, img: Vector<S>, energy: S) {
        self.pre.push(pre);
        self.img.push(img);
        self.energy.push(energy);
    }

    /// Indices sorted by decreasing energy.
    fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.energy.len()).collect();
        idx.sort_by(|&a, &b| self.energy[b].total_cmp_s(&self.energy[a]));
        idx
    }
}

fn project_to_ball<S: Scalar>(mut x: Vec<S>, radius: S) -> Vec<S> {
    let n = norm(&x);
    if n > radius {
        for v in &mut x {
            *v = *v * radius / n;
        }
    }
    x
}

/// Runs the minimax descent; a stall is reported as an error.
pub fn minimax_descend<S: Scalar, F: Functional<S> + ?Sized>(
    phi: &F,
    geometry: &GeometryReport<S>,
    cfg: &FountainConfig,
) -> Result<MinimaxResult<S>, FountainError> {
    let (res, stall) = minimax_run(phi, geometry, cfg)?;
    match stall {
        Some(e) => Err(e),
        None => Ok(res),
    }
}

/// The descent proper; a stall is returned alongside the partial result.
pub fn minimax_run<S: Scalar, F: Functional<S> + ?Sized>(
    phi: &F,
    geometry: &GeometryReport<S>,
    cfg: &FountainConfig,
) -> Result<(MinimaxResult<S>, Option<FountainError>), FountainError> {
    if !phi.is_even() {
        return Err(FountainError::InvalidParameter(
            "the minimax descent needs an even functional".into(),
        ));
    }
    let mc = &cfg.minimax;
    let k = geometry.k;
    let space = phi.space();
    let fil = space.filtration(k)?;
    let m = fil.dim_y_k();
    let (rho, r) = (geometry.rho_k, geometry.r_k);
    let a_k = geometry.a_k;
    let crit_tol = S::lit(cfg.crit_tol);
    let mut rng = sampling::substream(cfg.seed, 0x6d00 + k as u64);

    // identity surface: one representative per antipodal pair
    let mut surf = Surface {
        pre: Vec::new(),
        img: Vec::new(),
        energy: Vec::new(),
    };
    for x in sampling::halton(mc.mesh_n.div_ceil(2), m, &mut rng) {
        let u = fil.embed_y(&sampling::cube_to_ball(&x, rho));
        let e = phi.value(&u);
        surf.push(u.clone(), u, e);
    }
    let peaks = estimate_ball_sup(phi, k, rho, cfg.extremum_restarts, cfg)?;
    let n_peaks = peaks.candidates.len().clamp(1, 4);
    let per_peak = mc.cluster_n / n_peaks;
    let spread = S::lit(mc.cluster_radius) * r / S::lit_usize(m).sqrt();
    for (_, c) in peaks.candidates.iter().take(n_peaks) {
        let cy = c[fil.y_range()].to_vec();
        let e = phi.value(c);
        surf.push(c.clone(), c.clone(), e);
        for _ in 0..per_peak {
            let x: Vec<S> = cy
                .iter()
                .map(|&v| v + spread * sampling::normal::<S, _>(&mut rng))
                .collect();
            let u = fil.embed_y(&project_to_ball(x, rho));
            let e = phi.value(&u);
            surf.push(u.clone(), u, e);
        }
    }
    let mut stages: Vec<DeformationStage<S>> = Vec::new();
    let mut ps_points = Vec::new();
    let mut log = Vec::new();
    let mut critical_point = None;
    let mut best_c = S::infinity();
    let mut since_best = 0usize;
    let mut stall = None;
    let delta = S::lit(mc.delta_frac) * r;
    let mut refine_sigma = S::lit(mc.refine_radius) * r / S::lit_usize(m).sqrt();
    let mut round = 0usize;
    let c_final;
    loop {
        // local refinement around the current top preimages
        let mut refined = 0;
        if mc.refine_children > 0 {
            let rank = surf.ranking();
            for &i in rank.iter().take(mc.refine_top) {
                let base = surf.pre[i][fil.y_range()].to_vec();
                for _ in 0..mc.refine_children {
                    let x: Vec<S> = base
                        .iter()
                        .map(|&v| v + refine_sigma * sampling::normal::<S, _>(&mut rng))
                        .collect();
                    let q = fil.embed_y(&project_to_ball(x, rho));
                    let (img, hit) = replay(phi, &stages, &q)?;
                    if hit.is_some() {
                        critical_point = hit;
                    }
                    let e = phi.value(&img);
                    surf.push(q, img, e);
                    refined += 1;
                }
            }
            refine_sigma = refine_sigma * S::lit(mc.refine_decay);
        }

        let rank = surf.ranking();
        let c_bar = surf.energy[rank[0]];
        let e_m = surf.energy[rank[(mc.active_max.max(1) - 1).min(rank.len() - 1)]];
        let eps_min = S::lit(mc.eps_min);
        let quarter = (c_bar - a_k) / S::lit(4.0);
        let half_band = (c_bar - e_m) / S::lit(2.0);
        let eps = fmax(eps_min, if half_band < quarter { half_band } else { quarter });
        let floor = c_bar - eps - eps;
        let active: Vec<usize> = rank
            .iter()
            .copied()
            .take_while(|&i| surf.energy[i] >= floor)
            .collect();

        let (mut w_idx, mut w_grad) = (rank[0], S::infinity());
        for &i in &active {
            let g = phi.gradient(&surf.img[i]).norm();
            if g < w_grad {
                w_grad = g;
                w_idx = i;
            }
        }
        ps_points.push(PsPoint {
            round,
            point: surf.img[w_idx].clone(),
            energy: surf.energy[w_idx],
            grad_norm: w_grad,
        });

        if c_bar < best_c - S::lit(1e-12) * fmax(S::one(), c_bar.abs()) {
            best_c = c_bar;
            since_best = 0;
        } else {
            since_best += 1;
        }
        if w_grad <= crit_tol {
            critical_point = Some(surf.img[w_idx].clone());
            c_final = c_bar;
            break;
        }
        if round >= mc.max_rounds {
            c_final = c_bar;
            break;
        }
        if since_best > mc.stall_rounds {
            stall = Some(FountainError::Stall {
                k,
                rounds: round,
                c_bar: c_bar.to_f64_lossy(),
                witness_grad: w_grad.to_f64_lossy(),
            });
            c_final = c_bar;
            break;
        }

        let set = PointCloud::symmetric(active.iter().map(|&i| surf.img[i].clone()).collect());
        let params = DeformationParams {
            level: c_bar,
            eps,
            delta,
            set,
        };
        let dopts = DeformationOptions {
            cloud_n: mc.cloud_n,
            seed: cfg.seed ^ ((k as u64) << 32) ^ round as u64,
            ..Default::default()
        };
        let stage = DeformationStage::build_trusted(phi, params, dopts)?;
        let mut hits = 0;
        {
            let def = stage.bind(phi);
            for &i in &active {
                let start = surf.img[i].clone();
                let res = def.eta_hinted(
                    &start,
                    DistanceHint {
                        anchor: &start,
                        anchor_dist: S::zero(),
                    },
                )?;
                if let Some(h) = res.critical_hit {
                    hits += 1;
                    critical_point = Some(h);
                }
                surf.energy[i] = phi.value(&res.endpoint);
                surf.img[i] = res.endpoint;
            }
        }
        stages.push(stage);
        log.push(RoundLog {
            round,
            c_bar,
            eps,
            delta,
            active: active.len(),
            refined,
            witness_grad: w_grad,
            critical_hits: hits,
        });
        round += 1;
    }

    let rank = surf.ranking();
    let top = rank
        .iter()
        .take(cfg.polish_candidates)
        .map(|&i| surf.img[i].clone())
        .collect();
    Ok((
        MinimaxResult {
            k,
            c_k_estimate: c_final,
            rounds: round,
            ps_points,
            critical_point,
            surface_log: log,
            mesh_size: 2 * surf.pre.len(),
            stalled: stall.is_some(),
            top,
            stages,
        },
        stall,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolishResult<S> {
    pub point: Vector<S>,
    pub energy: S,
    pub grad_norm: S,
    pub iterations: usize,
    pub converged: bool,
}

/// Damped Newton iteration on `∇φ = 0` with a pseudo-inverse Hessian solve.
///
/// Steps are accepted when they reduce `‖∇φ‖`; the iteration keeps going
/// past `tol` until no further reduction is possible, then reports whether
/// `‖∇φ‖ ≤ tol`.
pub fn polish<S: Scalar, F: Functional<S> + ?Sized>(
    phi: &F,
    u0: &Vector<S>,
    tol: S,
    max_iter: usize,
) -> PolishResult<S> {
    let mut u = u0.clone();
    let mut g = phi.gradient(&u);
    let mut gn = g.norm();
    let mut it = 0;
    let floor = S::unit_roundoff() * S::lit(64.0);
    while it < max_iter {
        if gn <= floor * fmax(S::one(), u.norm()) {
            break;
        }
        it += 1;
        let h = phi.hessian(&u);
        let step = symmetric_pinv_solve(&h, &g, 1e-10);
        let mut lam = S::one();
        let mut moved = false;
        for _ in 0..40 {
            let cand = Vector::from_vec(u.iter().zip(&step).map(|(&a, &s)| a - lam * s).collect());
            let gc = phi.gradient(&cand);
            let gcn = gc.norm();
            if gcn < gn * (S::one() - S::lit(1e-4) * lam) {
                u = cand;
                g = gc;
                gn = gcn;
                moved = true;
                break;
            }
            lam = lam * S::lit(0.5);
        }
        if !moved {
            break;
        }
    }
    PolishResult {
        energy: phi.value(&u),
        point: u,
        grad_norm: gn,
        iterations: it,
        converged: gn <= tol,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoint<S> {
    pub level_k: usize,
    pub coords: Vector<S>,
    pub energy: S,
    pub grad_norm: S,
    pub residual: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelOutcome<S> {
    pub k: usize,
    pub geometry: Option<GeometryReport<S>>,
    pub c_k_estimate: Option<S>,
    pub rounds: usize,
    pub stalled: bool,
    /// Index into the point list, when this level produced a point.
    pub point: Option<usize>,
    /// Set when this level's point coincided with an earlier one.
    pub duplicate_of: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSequence<S> {
    /// Distinct critical points sorted by energy.
    pub points: Vec<CriticalPoint<S>>,
    pub levels: Vec<LevelOutcome<S>>,
    pub minimax: Vec<MinimaxResult<S>>,
}

impl<S: Scalar> CriticalSequence<S> {
    /// Energies of the per-level points, in level order.
    pub fn level_energies(&self) -> Vec<Option<S>> {
        self.levels
            .iter()
            .map(|l| {
                l.point
                    .or(l.duplicate_of)
                    .map(|i| self.points[i].energy)
            })
            .collect()
    }

    /// Whether every level produced a point and the energies strictly
    /// increase with `k`. Steps below `1e-8` relative count as ties.
    pub fn strictly_increasing(&self) -> bool {
        let e = self.level_energies();
        e.iter().all(Option::is_some)
            && e.windows(2).all(|w| {
                let (a, b) = (w[0].unwrap(), w[1].unwrap());
                b - a > S::lit(1e-8) * fmax(S::one(), a.abs())
            })
    }
}

fn same_orbit<S: Scalar>(u: &Vector<S>, v: &Vector<S>, tol: S) -> bool {
    let lim = tol * fmax(S::one(), u.norm());
    u.distance(v) <= lim || (u + v).norm() <= lim
}

/// Minimax descent and Newton polish for each level of `ks`.
///
/// A level whose geometry, descent or polish fails is recorded with its error;
/// the other levels are unaffected. A stalled descent still hands its best
/// witness to the polish.
pub fn find_critical_sequence<S: Scalar, P: FountainProblem<S> + ?Sized>(
    problem: &P,
    ks: &[usize],
    cfg: &FountainConfig,
) -> CriticalSequence<S> {
    let mut points: Vec<CriticalPoint<S>> = Vec::new();
    let mut levels = Vec::new();
    let mut minimax = Vec::new();
    for &k in ks {
        let mut out = LevelOutcome {
            k,
            geometry: None,
            c_k_estimate: None,
            rounds: 0,
            stalled: false,
            point: None,
            duplicate_of: None,
            error: None,
        };
        let geom = match compute_geometry(problem, k, cfg) {
            Ok(g) => g,
            Err(e) => {
                out.error = Some(e.to_string());
                levels.push(out);
                continue;
            }
        };
        out.geometry = Some(geom.clone());
        if !geom.feasible {
            out.error = Some(
                FountainError::Infeasible {
                    k,
                    reason: "need a_k <= 0 < b_k and r_k < rho_k".into(),
                }
                .to_string(),
            );
            levels.push(out);
            continue;
        }
        let (mm, stall) = match minimax_run(problem, &geom, cfg) {
            Ok(r) => r,
            Err(e) => {
                out.error = Some(e.to_string());
                levels.push(out);
                continue;
            }
        };
        out.c_k_estimate = Some(mm.c_k_estimate);
        out.rounds = mm.rounds;
        out.stalled = stall.is_some();

        let mut cands: Vec<Vector<S>> = Vec::new();
        if let Some(c) = &mm.critical_point {
            cands.push(c.clone());
        }
        if let Some(w) = mm.ps_points.last() {
            cands.push(w.point.clone());
        }
        cands.extend(mm.top.iter().cloned());
        let tol = S::lit(cfg.crit_tol);
        let floor = geom.b_k - S::lit(cfg.minimax_tol);
        let mut best: Option<PolishResult<S>> = None;
        for c in &cands {
            let pr = polish(problem, c, tol, cfg.polish_max_iter);
            if !pr.converged || pr.energy < floor || pr.energy <= S::zero() {
                continue;
            }
            let better = best.as_ref().is_none_or(|b| {
                (pr.energy - mm.c_k_estimate).abs() < (b.energy - mm.c_k_estimate).abs()
            });
            if better {
                best = Some(pr);
            }
        }
        match best {
            Some(pr) => {
                let cp = CriticalPoint {
                    level_k: k,
                    residual: problem.euler_lagrange_residual(&pr.point),
                    coords: pr.point,
                    energy: pr.energy,
                    grad_norm: pr.grad_norm,
                };
                let dedup = S::lit(cfg.dedup_tol);
                match points.iter().position(|q| same_orbit(&q.coords, &cp.coords, dedup)) {
                    Some(j) => out.duplicate_of = Some(j),
                    None => {
                        points.push(cp);
                        out.point = Some(points.len() - 1);
                    }
                }
            }
            None => {
                out.error = Some(format!(
                    "polish did not reach a critical point above b_k - {}",
                    cfg.minimax_tol
                ));
            }
        }
        if let (Some(e), None) = (&stall, &out.error) {
            out.error = Some(format!("{e} (witness polished)"));
        }
        levels.push(out);
        minimax.push(mm);
    }
    // sort by energy and remap level indices
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].energy.total_cmp_s(&points[b].energy));
    let mut new_index = vec![0; points.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    for l in &mut levels {
        l.point = l.point.map(|i| new_index[i]);
        l.duplicate_of = l.duplicate_of.map(|i| new_index[i]);
    }
    let points = order.into_iter().map(|i| points[i].clone()).collect();
    CriticalSequence {
        points,
        levels,
        minimax,
    }
}

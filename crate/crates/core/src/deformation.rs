//! Equivariant deformation flow.
//!
//! Near a level `c` the flow follows the field `f = ψ_cut · h̃` where
//! `w(u) = 2∇φ(u)/‖∇φ(u)‖²`, `h̃(u) = ½(w(u) − w(−u))` and `ψ_cut` is the
//! ratio `d(u, V∖A) / (d(u, V∖A) + d(u, B))` of τ-distances to
//!
//! * `A = φ^{-1}[c−2ε, c+2ε] ∩ S_{2δ}`,
//! * `B = φ^{-1}[c−ε, c+ε] ∩ S_δ`.
//!
//! The deformation is `η(t, u) = μ(2εt, u)` where `μ' = −f(μ)`.
//!
//! Distances to `V∖A` and `B` are the smaller of the distance to a sampled
//! point cloud of the set and a first-order witness: the τ-length of the
//! linearized step `(gap)·∇φ/‖∇φ‖²` that moves the energy onto the level set
//! bounding the set, plus the distance gap to the `S`-neighbourhood.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::functional::Functional;
use crate::ode::{dopri5, OdeError, OdeOptions};
use crate::sampling;
use crate::scalar::{fmax, fmin, Scalar};
use crate::spaces::{GalerkinSpace, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeformationError {
    #[error("invalid deformation parameters: {0}")]
    InvalidParams(String),
    #[error("invariant set is not symmetric although the functional is even")]
    AsymmetricSet,
    #[error("integration failed at eta-time {t}: {reason}")]
    Integration {
        t: f64,
        reason: String,
        partial: Vec<Vec<f64>>,
    },
}

/// Finite point set with nearest-point distance oracles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud<S> {
    points: Vec<Vector<S>>,
}

impl<S: Scalar> PointCloud<S> {
    pub fn new(points: Vec<Vector<S>>) -> Self {
        Self { points }
    }

    /// The set together with its antipodal image.
    pub fn symmetric(points: Vec<Vector<S>>) -> Self {
        let mut all = Vec::with_capacity(2 * points.len());
        for p in points {
            let m = -&p;
            all.push(p);
            all.push(m);
        }
        Self { points: all }
    }

    pub fn points(&self) -> &[Vector<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether every point's negation lies in the set, up to `tol`.
    pub fn is_symmetric(&self, tol: S) -> bool {
        self.points.iter().all(|p| {
            let m = -p;
            self.points.iter().any(|q| q.distance(&m) <= tol)
        })
    }

    /// Euclidean distance to the nearest point (`+∞` for the empty set).
    pub fn distance(&self, u: &[S]) -> S {
        let mut best2 = S::infinity();
        for p in &self.points {
            let mut acc = S::zero();
            for (&a, &b) in u.iter().zip(p.iter()) {
                acc += (a - b) * (a - b);
                if acc >= best2 {
                    break;
                }
            }
            if acc < best2 {
                best2 = acc;
            }
        }
        best2.sqrt()
    }

    /// τ-distance to the nearest point (`+∞` for the empty set).
    pub fn tau_distance(&self, space: &GalerkinSpace, u: &[S]) -> S {
        let dy = space.dim_y();
        let mut best = S::infinity();
        let two = S::lit(2.0);
        for p in &self.points {
            let mut w = S::lit(0.5);
            let mut ps = S::zero();
            for j in 0..dy {
                ps += w * (u[j] - p[j]).abs();
                w = w / two;
            }
            if ps >= best {
                continue;
            }
            let b2 = best * best;
            let mut q = S::zero();
            for j in dy..u.len() {
                let d = u[j] - p[j];
                q += d * d;
                if q >= b2 {
                    break;
                }
            }
            let d = fmax(ps, q.sqrt());
            if d < best {
                best = d;
            }
        }
        best
    }
}

/// `(c, ε, δ, S)`
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationParams<S> {
    pub level: S,
    pub eps: S,
    pub delta: S,
    pub set: PointCloud<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationOptions<S> {
    /// Size of each of the two sampled clouds (for `V∖A` and for `B`).
    pub cloud_n: usize,
    pub int_tol: S,
    pub max_steps: usize,
    /// Gradient norm below which a point inside `A` counts as critical.
    pub crit_grad: S,
    /// Clamp `‖w‖ ≤ δ/(4ε)`; inactive whenever `‖∇φ‖ ≥ 8ε/δ`.
    pub clamp: bool,
    /// Replace the cutoff by `1` everywhere (diagnostic).
    pub unit_cutoff: bool,
    /// Attempts per requested cloud point before giving up on filling it.
    pub attempts_per_point: usize,
    pub seed: u64,
}

impl<S: Scalar> Default for DeformationOptions<S> {
    fn default() -> Self {
        Self {
            cloud_n: 2048,
            int_tol: S::lit(1e-8),
            max_steps: 100_000,
            crit_grad: S::lit(1e-9),
            clamp: true,
            unit_cutoff: false,
            attempts_per_point: 8,
            seed: 0,
        }
    }
}

/// Sampled check of `‖∇φ‖ ≥ 8ε/δ` on `φ^{-1}[c−2ε, c+2ε] ∩ S_{2δ}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientBound<S> {
    pub required: S,
    pub min_observed: S,
    pub samples: usize,
    pub holds: bool,
}

/// Immutable data of one deformation: parameters, sampled clouds and the
/// gradient-bound check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationStage<S> {
    pub params: DeformationParams<S>,
    pub opts: DeformationOptions<S>,
    pub outside_cloud: PointCloud<S>,
    pub inner_cloud: PointCloud<S>,
    pub gradient_bound: GradientBound<S>,
    space: GalerkinSpace,
    even: bool,
}

/// Known upper bound on `dist(u, S)` from a point whose distance is known.
#[derive(Debug, Clone, Copy)]
pub struct DistanceHint<'a, S> {
    pub anchor: &'a [S],
    pub anchor_dist: S,
}

/// The field vanished inside the active region: `u` is (numerically) critical.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalHit<S> {
    pub point: Vector<S>,
    pub grad_norm: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowResult<S> {
    pub endpoint: Vector<S>,
    /// `(t, η(t, u))` at accepted integrator steps (η-time in `[0, t_end]`).
    pub trajectory: Vec<(S, Vector<S>)>,
    pub energy_profile: Vec<S>,
    pub displacement: S,
    /// Set when the flow stopped at a point with vanishing gradient.
    pub critical_hit: Option<Vector<S>>,
}

impl<S: Scalar> DeformationStage<S> {
    /// Validates the parameters, samples the clouds and checks the gradient
    /// bound.
    pub fn build<F: Functional<S> + ?Sized>(
        phi: &F,
        params: DeformationParams<S>,
        opts: DeformationOptions<S>,
    ) -> Result<Self, DeformationError> {
        Self::build_inner(phi, params, opts, true)
    }

    /// As [`build`](Self::build) for a set already known to be symmetric.
    pub(crate) fn build_trusted<F: Functional<S> + ?Sized>(
        phi: &F,
        params: DeformationParams<S>,
        opts: DeformationOptions<S>,
    ) -> Result<Self, DeformationError> {
        Self::build_inner(phi, params, opts, false)
    }

    fn build_inner<F: Functional<S> + ?Sized>(
        phi: &F,
        params: DeformationParams<S>,
        opts: DeformationOptions<S>,
        check_symmetry: bool,
    ) -> Result<Self, DeformationError> {
        if !(params.eps > S::zero() && params.delta > S::zero()) {
            return Err(DeformationError::InvalidParams(
                "eps and delta must be positive".into(),
            ));
        }
        if params.set.is_empty() {
            return Err(DeformationError::InvalidParams("invariant set is empty".into()));
        }
        let space = phi.space();
        if params.set.points().iter().any(|p| p.len() != space.dim()) {
            return Err(DeformationError::InvalidParams(
                "invariant set points have the wrong dimension".into(),
            ));
        }
        let even = phi.is_even();
        if even && check_symmetry && !params.set.is_symmetric(S::lit(1e-12)) {
            return Err(DeformationError::AsymmetricSet);
        }
        let mut stage = Self {
            gradient_bound: GradientBound {
                required: S::lit(8.0) * params.eps / params.delta,
                min_observed: S::infinity(),
                samples: 0,
                holds: true,
            },
            params,
            opts,
            outside_cloud: PointCloud::new(Vec::new()),
            inner_cloud: PointCloud::new(Vec::new()),
            space,
            even,
        };
        stage.sample_clouds(phi);
        Ok(stage)
    }

    pub fn space(&self) -> GalerkinSpace {
        self.space
    }

    pub fn bind<'a, F: Functional<S> + ?Sized>(&'a self, phi: &'a F) -> Deformation<'a, S, F> {
        Deformation { phi, stage: self }
    }

    fn sample_clouds<F: Functional<S> + ?Sized>(&mut self, phi: &F) {
        let p = &self.params;
        let n = self.space.dim();
        let per_side = if self.even {
            self.opts.cloud_n.div_ceil(2)
        } else {
            self.opts.cloud_n
        };
        let mut rng = sampling::substream(self.opts.seed, 0xc10d);
        let mut outside = Vec::new();
        let mut inner = Vec::new();
        let mut min_grad = S::infinity();
        let mut in_a = 0usize;
        let attempts = 2 * per_side * self.opts.attempts_per_point.max(1);
        for _ in 0..attempts {
            if outside.len() >= per_side && inner.len() >= per_side {
                break;
            }
            let s = &p.set.points()[rng.random_range(0..p.set.len())];
            let r = p.delta * sampling::uniform::<S, _>(&mut rng, 0.0, 3.0);
            let dir = sampling::sphere_point::<S, _>(&mut rng, n, S::one());
            let mut cand = s.clone();
            for (c, d) in cand.iter_mut().zip(dir) {
                *c += r * d;
            }
            let (e, g) = phi.value_and_gradient(&cand);
            let gap = (e - p.level).abs();
            let dist = if r <= p.delta {
                r
            } else {
                p.set.distance(&cand)
            };
            let energy_in_a = gap <= p.eps + p.eps;
            if energy_in_a && dist <= p.delta + p.delta {
                in_a += 1;
                min_grad = fmin(min_grad, g.norm());
            }
            if gap <= p.eps && dist <= p.delta {
                if inner.len() < per_side {
                    inner.push(cand);
                }
            } else if (!energy_in_a || dist > p.delta + p.delta) && outside.len() < per_side {
                outside.push(cand);
            }
        }
        // points of S inside the energy window are part of A (and of B when
        // they lie in the inner window)
        for s in p.set.points().iter().take(4 * per_side) {
            let (e, g) = phi.value_and_gradient(s);
            if (e - p.level).abs() <= p.eps + p.eps {
                in_a += 1;
                min_grad = fmin(min_grad, g.norm());
            }
        }
        let wrap = |pts: Vec<Vector<S>>| {
            if self.even {
                PointCloud::symmetric(pts)
            } else {
                PointCloud::new(pts)
            }
        };
        self.outside_cloud = wrap(outside);
        self.inner_cloud = wrap(inner);
        self.gradient_bound.samples = in_a;
        self.gradient_bound.min_observed = min_grad;
        self.gradient_bound.holds = in_a == 0 || min_grad >= self.gradient_bound.required;
    }
}

/// A deformation stage bound to its functional.
pub struct Deformation<'a, S: Scalar, F: ?Sized> {
    phi: &'a F,
    stage: &'a DeformationStage<S>,
}

struct Local<S> {
    energy: S,
    grad: Vector<S>,
    grad_norm: S,
}

impl<'a, S: Scalar, F: Functional<S> + ?Sized> Deformation<'a, S, F> {
    pub fn stage(&self) -> &DeformationStage<S> {
        self.stage
    }

    fn params(&self) -> &DeformationParams<S> {
        &self.stage.params
    }

    fn local(&self, u: &Vector<S>) -> Local<S> {
        let (energy, grad) = self.phi.value_and_gradient(u);
        let grad_norm = grad.norm();
        Local {
            energy,
            grad,
            grad_norm,
        }
    }

    /// Whether `u ∈ A`.
    pub fn in_active_region(&self, u: &Vector<S>) -> bool {
        let p = self.params();
        (self.phi.value(u) - p.level).abs() <= p.eps + p.eps
            && p.set.distance(u) <= p.delta + p.delta
    }

    /// `ψ_cut(u) ∈ [0, 1]`.
    pub fn cutoff(&self, u: &Vector<S>) -> S {
        let l = self.local(u);
        self.cutoff_at(u, &l, None)
    }

    fn cutoff_at(&self, u: &Vector<S>, l: &Local<S>, hint: Option<DistanceHint<'_, S>>) -> S {
        if self.stage.opts.unit_cutoff {
            return S::one();
        }
        let p = self.params();
        let (eps2, delta2) = (p.eps + p.eps, p.delta + p.delta);
        let gap = (l.energy - p.level).abs();
        if gap > eps2 {
            return S::zero();
        }
        let bound = hint.map(|h| {
            let d: S = u
                .iter()
                .zip(h.anchor)
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<S>()
                .sqrt();
            h.anchor_dist + d
        });
        let mut exact: Option<S> = None;
        let mut dist_s = |need_exact: bool| -> S {
            if !need_exact {
                if let Some(b) = bound {
                    return b;
                }
            }
            *exact.get_or_insert_with(|| p.set.distance(u))
        };
        // membership in A and B
        let s_upper = dist_s(false);
        let within_2delta = s_upper <= delta2 || dist_s(true) <= delta2;
        if !within_2delta {
            return S::zero();
        }
        let s_upper = dist_s(false);
        let within_delta = s_upper <= p.delta || dist_s(true) <= p.delta;
        if gap <= p.eps && within_delta {
            return S::one();
        }
        let space = &self.stage.space;
        // τ-length of the linearized step moving the energy by one unit
        let unit_step = if l.grad_norm > S::zero() {
            space.tau_norm(&l.grad) / (l.grad_norm * l.grad_norm)
        } else {
            S::infinity()
        };
        let out_cloud = self.stage.outside_cloud.tau_distance(space, u);
        let mut d_out = fmin(out_cloud, (eps2 - gap) * unit_step);
        // the S-gap candidate 2δ − dist(u, S) can only matter when it may be
        // below the other candidates
        if let Some(b) = bound {
            if delta2 - b < d_out {
                d_out = fmin(d_out, delta2 - dist_s(true));
            }
        } else {
            d_out = fmin(d_out, delta2 - dist_s(true));
        }
        let energy_in = fmax(gap - p.eps, S::zero()) * unit_step;
        let s_in = if within_delta {
            S::zero()
        } else {
            dist_s(true) - p.delta
        };
        let d_b = fmin(
            self.stage.inner_cloud.tau_distance(space, u),
            energy_in + s_in,
        );
        let d_out = fmax(d_out, S::zero());
        if d_out == S::zero() {
            return S::zero();
        }
        if !d_b.is_finite() {
            return S::zero();
        }
        d_out / (d_out + d_b)
    }

    fn w_of(&self, grad: &Vector<S>, grad_norm: S) -> Vector<S> {
        let p = self.params();
        let mut scale = S::lit(2.0) / (grad_norm * grad_norm);
        if self.stage.opts.clamp {
            let cap = p.delta / (S::lit(4.0) * p.eps);
            let w_norm = S::lit(2.0) / grad_norm;
            if w_norm > cap {
                scale = scale * cap / w_norm;
            }
        }
        grad.scaled(scale)
    }

    /// The symmetrized pseudo-gradient `h̃(u)` without the cutoff.
    pub fn symmetrized_field(&self, u: &Vector<S>) -> Result<Vector<S>, CriticalHit<S>> {
        let l = self.local(u);
        self.h_tilde(u, &l)
    }

    fn h_tilde(&self, u: &Vector<S>, l: &Local<S>) -> Result<Vector<S>, CriticalHit<S>> {
        let crit = self.stage.opts.crit_grad;
        if l.grad_norm <= crit {
            return Err(CriticalHit {
                point: u.clone(),
                grad_norm: l.grad_norm,
            });
        }
        let w = self.w_of(&l.grad, l.grad_norm);
        if !self.stage.even {
            return Ok(w);
        }
        let m = -u;
        let gm = self.phi.gradient(&m);
        let gm_norm = gm.norm();
        if gm_norm <= crit {
            return Err(CriticalHit {
                point: u.clone(),
                grad_norm: gm_norm,
            });
        }
        let wm = self.w_of(&gm, gm_norm);
        let half = S::lit(0.5);
        Ok(Vector::from_vec(
            w.iter().zip(wm.iter()).map(|(&a, &b)| half * (a - b)).collect(),
        ))
    }

    /// `f(u) = ψ_cut(u) · h̃(u)`.
    pub fn pseudo_gradient_field(&self, u: &Vector<S>) -> Result<Vector<S>, CriticalHit<S>> {
        self.field(u, None)
    }

    fn field(
        &self,
        u: &Vector<S>,
        hint: Option<DistanceHint<'_, S>>,
    ) -> Result<Vector<S>, CriticalHit<S>> {
        let l = self.local(u);
        let psi = self.cutoff_at(u, &l, hint);
        if psi == S::zero() {
            return Ok(Vector::zeros(u.len()));
        }
        let h = self.h_tilde(u, &l)?;
        Ok(h.scaled(psi))
    }

    /// Integrates the flow up to η-time `t_end ∈ [0, 1]`, recording the path.
    pub fn flow(&self, u0: &Vector<S>, t_end: S) -> Result<FlowResult<S>, DeformationError> {
        self.run(u0, t_end, None, true)
    }

    /// `η(t, u0)`, endpoint only.
    pub fn eta(&self, t: S, u0: &Vector<S>) -> Result<FlowResult<S>, DeformationError> {
        self.run(u0, t, None, false)
    }

    /// `η(1, u0)` for a start whose distance to `S` is bounded by the hint.
    pub fn eta_hinted(
        &self,
        u0: &Vector<S>,
        hint: DistanceHint<'_, S>,
    ) -> Result<FlowResult<S>, DeformationError> {
        self.run(u0, S::one(), Some(hint), false)
    }

    fn run(
        &self,
        u0: &Vector<S>,
        t_end: S,
        hint: Option<DistanceHint<'_, S>>,
        record: bool,
    ) -> Result<FlowResult<S>, DeformationError> {
        let p = self.params();
        let two_eps = p.eps + p.eps;
        let s_end = two_eps * t_end;
        let opts = OdeOptions {
            atol: self.stage.opts.int_tol,
            rtol: S::zero(),
            max_steps: self.stage.opts.max_steps,
            h_init: None,
            record,
        };
        let rhs = |y: &[S]| -> Result<Vec<S>, CriticalHit<S>> {
            let u = Vector::from_vec(y.to_vec());
            let f = self.field(&u, hint)?;
            Ok(f.into_vec().into_iter().map(|v| -v).collect())
        };
        let (traj, hit) = match dopri5(rhs, u0, s_end, &opts) {
            Ok(tr) => (tr, None),
            Err(OdeError::Stopped {
                signal, partial, ..
            }) => (partial, Some(signal.point)),
            Err(OdeError::StepSizeCollapse { t, partial }) => {
                return Err(DeformationError::Integration {
                    t: (t / two_eps).to_f64_lossy(),
                    reason: "step size collapse".into(),
                    partial: partial.y.iter().map(|y| to_f64(y)).collect(),
                })
            }
            Err(OdeError::MaxSteps { t, partial }) => {
                return Err(DeformationError::Integration {
                    t: (t / two_eps).to_f64_lossy(),
                    reason: "maximum number of steps".into(),
                    partial: partial.y.iter().map(|y| to_f64(y)).collect(),
                })
            }
        };
        let endpoint = Vector::from_vec(traj.last().to_vec());
        let displacement = endpoint.distance(u0);
        let (trajectory, energy_profile) = if record {
            let tr: Vec<(S, Vector<S>)> = traj
                .t
                .iter()
                .zip(traj.y)
                .map(|(&s, y)| (s / two_eps, Vector::from_vec(y)))
                .collect();
            let en = tr.iter().map(|(_, y)| self.phi.value(y)).collect();
            (tr, en)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(FlowResult {
            endpoint,
            trajectory,
            energy_profile,
            displacement,
            critical_hit: hit,
        })
    }

    /// Checks the deformation properties on random starts.
    ///
    /// Starts are drawn around random points of `S` at distance up to `2δ`;
    /// sublevel capture is checked on the points of `S` below `c + ε`.
    pub fn verify_properties(&self, sample_count: usize, seed: u64) -> PropertyReport<S> {
        let p = self.params();
        let n = self.stage.space.dim();
        let tol = self.stage.opts.int_tol;
        let mut rng = sampling::substream(seed, 0x7e57);
        let mut rep = PropertyReport::new(self.stage.gradient_bound.clone());
        let disp_tol = S::lit(1e-6);
        let mut starts = Vec::with_capacity(sample_count);
        for _ in 0..sample_count {
            let s = &p.set.points()[rng.random_range(0..p.set.len())];
            let r = p.delta * sampling::uniform::<S, _>(&mut rng, 0.0, 2.0);
            let dir = sampling::sphere_point::<S, _>(&mut rng, n, S::one());
            let mut u = s.clone();
            for (c, d) in u.iter_mut().zip(dir) {
                *c += r * d;
            }
            starts.push(u);
        }
        for u in &starts {
            // (i) at t = 0
            match self.flow(u, S::zero()) {
                Ok(r) => rep.identity.record(r.endpoint == *u, S::zero()),
                Err(e) => rep.errors.push(e.to_string()),
            }
            let res = match self.flow(u, S::one()) {
                Ok(r) => r,
                Err(e) => {
                    rep.errors.push(e.to_string());
                    continue;
                }
            };
            if res.critical_hit.is_some() {
                rep.critical_hits += 1;
            }
            if !self.in_active_region(u) {
                rep.identity.record(res.endpoint == *u, res.displacement);
            }
            // (iii)
            let half = S::lit(0.5);
            let mut worst = S::zero();
            for (t, y) in &res.trajectory {
                let excess = y.distance(u) - p.delta * half * *t;
                worst = fmax(worst, excess);
            }
            rep.displacement.record(worst <= disp_tol, worst);
            // (iv)
            let rise = res
                .energy_profile
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(S::zero(), fmax);
            rep.monotone.record(rise <= tol, rise);
            // (vii)
            if self.stage.even {
                match self.flow(&-u, S::one()) {
                    Ok(m) => {
                        let d = (&m.endpoint + &res.endpoint).norm();
                        rep.oddness.record(d <= tol, d);
                    }
                    Err(e) => rep.errors.push(e.to_string()),
                }
            }
            // continuity spot-check
            let dir = sampling::sphere_point::<S, _>(&mut rng, n, S::one());
            let h = S::lit(1e-7) * fmax(S::one(), u.norm());
            let mut v = u.clone();
            for (c, d) in v.iter_mut().zip(dir) {
                *c += h * d;
            }
            if let Ok(r2) = self.eta(S::one(), &v) {
                let ratio = r2.endpoint.distance(&res.endpoint) / h;
                rep.continuity.record(ratio.is_finite() && ratio <= S::lit(1e6), ratio);
            }
        }
        // (ii) only under the gradient bound
        if self.stage.gradient_bound.holds {
            let mut capture = PropertyCheck::default();
            let target = p.level - p.eps + S::lit(1e-6);
            for s in p.set.points().iter().take(sample_count.max(1)) {
                if self.phi.value(s) > p.level + p.eps {
                    continue;
                }
                match self.eta(S::one(), s) {
                    Ok(r) => {
                        let e = self.phi.value(&r.endpoint);
                        capture.record(e <= target, e - (p.level - p.eps));
                    }
                    Err(err) => rep.errors.push(err.to_string()),
                }
            }
            rep.sublevel_capture = Some(capture);
        }
        rep
    }
}

fn to_f64<S: Scalar>(y: &[S]) -> Vec<f64> {
    y.iter().map(|v| v.to_f64_lossy()).collect()
}

/// Pass count and worst observed value of one property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck<S> {
    pub checked: usize,
    pub failed: usize,
    pub worst: S,
}

impl<S: Scalar> Default for PropertyCheck<S> {
    fn default() -> Self {
        Self {
            checked: 0,
            failed: 0,
            worst: S::neg_infinity(),
        }
    }
}

impl<S: Scalar> PropertyCheck<S> {
    fn record(&mut self, ok: bool, value: S) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
        self.worst = fmax(self.worst, value);
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport<S> {
    pub gradient_bound: GradientBound<S>,
    /// (i): `η(0,u) = u`, and `η(t,u) = u` outside `A`.
    pub identity: PropertyCheck<S>,
    /// (ii): `η(1, φ^{c+ε} ∩ S) ⊂ φ^{c−ε}`; `None` when the gradient bound fails.
    pub sublevel_capture: Option<PropertyCheck<S>>,
    /// (iii): `‖η(t,u) − u‖ − δt/2`.
    pub displacement: PropertyCheck<S>,
    /// (iv): largest energy increase along a path.
    pub monotone: PropertyCheck<S>,
    /// (vii): `‖η(1,−u) + η(1,u)‖`.
    pub oddness: PropertyCheck<S>,
    /// (v)–(vi) hold automatically in finite dimensions; difference quotient
    /// of `η(1,·)` as a continuity spot-check.
    pub continuity: PropertyCheck<S>,
    pub critical_hits: usize,
    pub errors: Vec<String>,
}

impl<S: Scalar> PropertyReport<S> {
    fn new(gradient_bound: GradientBound<S>) -> Self {
        Self {
            gradient_bound,
            identity: PropertyCheck::default(),
            sublevel_capture: None,
            displacement: PropertyCheck::default(),
            monotone: PropertyCheck::default(),
            oddness: PropertyCheck::default(),
            continuity: PropertyCheck::default(),
            critical_hits: 0,
            errors: Vec::new(),
        }
    }

    /// All checked properties passed (sublevel capture only if asserted).
    pub fn all_passed(&self) -> bool {
        self.errors.is_empty()
            && self.identity.passed()
            && self.displacement.passed()
            && self.monotone.passed()
            && self.oddness.passed()
            && self.continuity.passed()
            && self.sublevel_capture.as_ref().is_none_or(PropertyCheck::passed)
    }
}

/// Symmetric point cloud on the sphere of radius `radius` in `Y_k`.
pub fn sphere_cloud<S: Scalar>(
    space: &GalerkinSpace,
    k: usize,
    radius: S,
    count: usize,
    seed: u64,
) -> Result<PointCloud<S>, crate::spaces::SpaceError> {
    let f = space.filtration(k)?;
    let mut rng = sampling::substream(seed, 0x5fe);
    let pts = (0..count.div_ceil(2))
        .map(|_| f.embed_y(&sampling::sphere_point::<S, _>(&mut rng, f.dim_y_k(), radius)))
        .collect();
    Ok(PointCloud::symmetric(pts))
}

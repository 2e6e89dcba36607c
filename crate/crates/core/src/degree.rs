//! Brouwer degree of maps `R^m → R^m` on balls and boxes.
//!
//! The degree is computed by enumerating the zeros inside the region with
//! multi-start damped Newton and summing the signs of the Jacobian
//! determinants. Degenerate zeros are handled by translating the map by a
//! small random vector, which leaves the degree unchanged. In two dimensions
//! the boundary winding number gives an independent check.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{determinant, lstsq, solve, Matrix};
use crate::sampling::{self, SeededRng};
use crate::scalar::{fmax, Scalar};
use crate::spaces::{dot, norm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DegreeError {
    #[error("map has a zero on the boundary near {point:?} (|f| = {residual:e})")]
    ZeroOnBoundary { point: Vec<f64>, residual: f64 },
    #[error("degenerate zero at {point:?} (|det J| = {det:e}) persists after perturbation retries")]
    UncertifiedDegeneracy { point: Vec<f64>, det: f64 },
    #[error("dimension mismatch: map acts on R^{map}, region lives in R^{region}")]
    DimensionMismatch { map: usize, region: usize },
    #[error("map declared odd violates f(-x) = -f(x) (discrepancy {discrepancy:e})")]
    NotOdd { discrepancy: f64 },
    #[error("region is not symmetric about the origin")]
    NotSymmetric,
    #[error("range of the map leaves the coordinate subspace (component {index}, value {value:e})")]
    RangeNotInSubspace { index: usize, value: f64 },
    #[error("target subspace must have codimension at least one")]
    NotProperSubspace,
    #[error("boundary zero search failed; best candidate {best:?} with |f| = {residual:e}")]
    SearchFailed { best: Vec<f64>, residual: f64 },
    #[error("degree is {degree} but no zero could be located")]
    RootFindingFailed { degree: i64 },
    #[error("homotopy has a boundary zero at t = {t}: {source}")]
    HomotopyBoundaryZero {
        t: f64,
        #[source]
        source: Box<DegreeError>,
    },
    #[error("winding number requires a two-dimensional region")]
    NotPlanar,
}

/// Open bounded region of `R^m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Region<S> {
    Ball { center: Vec<S>, radius: S },
    Box { center: Vec<S>, half_widths: Vec<S> },
}

impl<S: Scalar> Region<S> {
    pub fn ball(center: Vec<S>, radius: S) -> Self {
        assert!(radius > S::zero());
        Region::Ball { center, radius }
    }

    pub fn unit_ball(m: usize) -> Self {
        Region::Ball {
            center: vec![S::zero(); m],
            radius: S::one(),
        }
    }

    pub fn boxed(center: Vec<S>, half_widths: Vec<S>) -> Self {
        assert_eq!(center.len(), half_widths.len());
        assert!(half_widths.iter().all(|&h| h > S::zero()));
        Region::Box {
            center,
            half_widths,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Ball { center, .. } | Region::Box { center, .. } => center.len(),
        }
    }

    pub fn center(&self) -> &[S] {
        match self {
            Region::Ball { center, .. } | Region::Box { center, .. } => center,
        }
    }

    /// Characteristic size (radius or largest half-width).
    pub fn size(&self) -> S {
        match self {
            Region::Ball { radius, .. } => *radius,
            Region::Box { half_widths, .. } => {
                half_widths.iter().fold(S::zero(), |m, &h| fmax(m, h))
            }
        }
    }

    /// Signed gap to the boundary: positive inside, zero on `∂U`.
    pub fn gap(&self, x: &[S]) -> S {
        match self {
            Region::Ball { center, radius } => {
                let d: S = x
                    .iter()
                    .zip(center)
                    .map(|(&a, &c)| (a - c) * (a - c))
                    .sum();
                *radius - d.sqrt()
            }
            Region::Box {
                center,
                half_widths,
            } => x
                .iter()
                .zip(center)
                .zip(half_widths)
                .map(|((&a, &c), &h)| h - (a - c).abs())
                .fold(S::infinity(), |m, g| if g < m { g } else { m }),
        }
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.gap(x) > S::zero()
    }

    pub fn is_symmetric(&self) -> bool {
        self.center().iter().all(|&c| c == S::zero())
    }

    /// Point of `∂U` on the ray from the center in direction `d`.
    pub fn boundary_point(&self, d: &[S]) -> Vec<S> {
        match self {
            Region::Ball { center, radius } => {
                let n = norm(d);
                center
                    .iter()
                    .zip(d)
                    .map(|(&c, &di)| c + *radius * di / n)
                    .collect()
            }
            Region::Box {
                center,
                half_widths,
            } => {
                let s = d
                    .iter()
                    .zip(half_widths)
                    .map(|(&di, &h)| di.abs() / h)
                    .fold(S::zero(), fmax);
                center.iter().zip(d).map(|(&c, &di)| c + di / s).collect()
            }
        }
    }

    /// Maps a point of `[0,1)^m` into the closed region.
    pub fn from_unit_cube(&self, x: &[f64]) -> Vec<S> {
        match self {
            Region::Ball { center, radius } => sampling::cube_to_ball(x, *radius)
                .into_iter()
                .zip(center)
                .map(|(v, &c)| v + c)
                .collect(),
            Region::Box {
                center,
                half_widths,
            } => x
                .iter()
                .zip(center)
                .zip(half_widths)
                .map(|((&t, &c), &h)| c + h * S::lit(2.0 * t - 1.0))
                .collect(),
        }
    }

    fn random_interior(&self, rng: &mut SeededRng) -> Vec<S> {
        match self {
            Region::Ball { center, radius } => {
                sampling::ball_point::<S, _>(rng, center.len(), *radius)
                    .into_iter()
                    .zip(center)
                    .map(|(v, &c)| v + c)
                    .collect()
            }
            Region::Box { .. } => {
                let u: Vec<f64> = (0..self.dim()).map(|_| rng.random_range(0.0..1.0)).collect();
                self.from_unit_cube(&u)
            }
        }
    }

    fn random_boundary(&self, rng: &mut SeededRng) -> Vec<S> {
        let d = sampling::sphere_point::<S, _>(rng, self.dim(), S::one());
        self.boundary_point(&d)
    }
}

type MapFn<'a, S> = dyn Fn(&[S]) -> Vec<S> + Send + Sync + 'a;
type JacFn<'a, S> = dyn Fn(&[S]) -> Matrix<S> + Send + Sync + 'a;

/// A continuous map `R^m → R^m` with optional analytic Jacobian.
#[derive(Clone)]
pub struct FiniteMap<'a, S> {
    dim: usize,
    eval: Arc<MapFn<'a, S>>,
    jacobian: Option<Arc<JacFn<'a, S>>>,
    odd: bool,
}

impl<S: Scalar> std::fmt::Debug for FiniteMap<'_, S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteMap")
            .field("dim", &self.dim)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .field("odd", &self.odd)
            .finish()
    }
}

impl<'a, S: Scalar> FiniteMap<'a, S> {
    pub fn new(dim: usize, eval: impl Fn(&[S]) -> Vec<S> + Send + Sync + 'a) -> Self {
        Self {
            dim,
            eval: Arc::new(eval),
            jacobian: None,
            odd: false,
        }
    }

    pub fn with_jacobian(
        mut self,
        jacobian: impl Fn(&[S]) -> Matrix<S> + Send + Sync + 'a,
    ) -> Self {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    /// Declares `f(−x) = −f(x)`; the declaration is spot-checked.
    pub fn declare_odd(mut self) -> Result<Self, DegreeError> {
        let d = self.oddness_defect(32, 0x0dd);
        if d > S::lit(1e-9) {
            return Err(DegreeError::NotOdd {
                discrepancy: d.to_f64_lossy(),
            });
        }
        self.odd = true;
        Ok(self)
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(dim, |x: &[S]| x.to_vec()).with_jacobian(move |_| Matrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn eval(&self, x: &[S]) -> Vec<S> {
        (self.eval)(x)
    }

    /// Analytic Jacobian, or central differences.
    pub fn jacobian(&self, x: &[S]) -> Matrix<S> {
        if let Some(j) = &self.jacobian {
            return j(x);
        }
        let m = self.dim;
        let h = S::unit_roundoff().cbrt() * fmax(S::one(), norm(x));
        let mut jac = Matrix::zeros(m, m);
        let mut y = x.to_vec();
        for c in 0..m {
            let orig = y[c];
            y[c] = orig + h;
            let fp = self.eval(&y);
            y[c] = orig - h;
            let fm = self.eval(&y);
            y[c] = orig;
            for r in 0..m {
                jac[(r, c)] = (fp[r] - fm[r]) / (h + h);
            }
        }
        jac
    }

    /// `x ↦ f(x) − z`
    pub fn translated(&self, z: &[S]) -> Self {
        let inner = self.eval.clone();
        let z = z.to_vec();
        Self {
            dim: self.dim,
            eval: Arc::new(move |x| {
                let mut v = inner(x);
                for (a, &b) in v.iter_mut().zip(&z) {
                    *a -= b;
                }
                v
            }),
            jacobian: self.jacobian.clone(),
            odd: false,
        }
    }

    /// Largest relative `‖f(−x) + f(x)‖` over random samples.
    pub fn oddness_defect(&self, samples: usize, seed: u64) -> S {
        let mut rng = sampling::rng(seed);
        let mut worst = S::zero();
        for _ in 0..samples {
            let x = sampling::gaussian_vec::<S, _>(&mut rng, self.dim);
            let neg: Vec<S> = x.iter().map(|&v| -v).collect();
            let a = self.eval(&x);
            let b = self.eval(&neg);
            let s: Vec<S> = a.iter().zip(&b).map(|(&p, &q)| p + q).collect();
            worst = fmax(worst, norm(&s) / fmax(S::one(), norm(&a)));
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeMethod {
    SignCount,
    Winding2d,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocatedZero<S> {
    pub point: Vec<S>,
    pub sign: i8,
    pub det: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeResult<S> {
    pub degree: i64,
    pub zeros: Vec<LocatedZero<S>>,
    pub method: DegreeMethod,
    /// All zeros regular and well separated.
    pub certified: bool,
    /// Number of translate retries used to regularize degenerate zeros.
    pub retries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct DegreeOptions {
    pub tol_zero: f64,
    pub tol_boundary: f64,
    pub tol_singular: f64,
    pub tol_cluster: f64,
    pub grid_base: usize,
    pub max_grid_points: usize,
    pub random_restarts: usize,
    pub newton_max_iter: usize,
    pub perturb_eps: f64,
    pub max_retries: usize,
    pub boundary_samples: usize,
    pub seed: u64,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        Self {
            tol_zero: 1e-9,
            tol_boundary: 1e-7,
            tol_singular: 1e-8,
            tol_cluster: 1e-6,
            grid_base: 8,
            max_grid_points: 4096,
            random_restarts: 32,
            newton_max_iter: 80,
            perturb_eps: 1e-6,
            max_retries: 6,
            boundary_samples: 512,
            seed: 0,
        }
    }
}

fn to_f64(x: &[impl Scalar]) -> Vec<f64> {
    x.iter().map(|v| v.to_f64_lossy()).collect()
}

fn check_dims<S: Scalar>(f: &FiniteMap<'_, S>, u: &Region<S>) -> Result<(), DegreeError> {
    if f.dim() != u.dim() {
        return Err(DegreeError::DimensionMismatch {
            map: f.dim(),
            region: u.dim(),
        });
    }
    Ok(())
}

/// Samples `∂U` and rejects maps whose smallest sampled residual is below
/// `tol_boundary`.
fn check_boundary<S: Scalar>(
    f: &FiniteMap<'_, S>,
    u: &Region<S>,
    opts: &DegreeOptions,
    rng: &mut SeededRng,
) -> Result<(), DegreeError> {
    let m = u.dim();
    let tol = S::lit(opts.tol_boundary);
    let probe = |x: Vec<S>| -> Result<(), DegreeError> {
        let r = norm(&f.eval(&x));
        if r < tol {
            return Err(DegreeError::ZeroOnBoundary {
                point: to_f64(&x),
                residual: r.to_f64_lossy(),
            });
        }
        Ok(())
    };
    if m == 1 {
        probe(u.boundary_point(&[S::one()]))?;
        probe(u.boundary_point(&[-S::one()]))?;
        return Ok(());
    }
    if m == 2 {
        let n = opts.boundary_samples.max(64);
        for i in 0..n {
            let a = S::lit(std::f64::consts::TAU * i as f64 / n as f64);
            probe(u.boundary_point(&[a.cos(), a.sin()]))?;
        }
        return Ok(());
    }
    for _ in 0..opts.boundary_samples {
        probe(u.random_boundary(rng))?;
    }
    Ok(())
}

fn newton_step<S: Scalar>(jac: &Matrix<S>, fx: &[S]) -> Vec<S> {
    let rhs: Vec<S> = fx.iter().map(|&v| -v).collect();
    solve(jac, &rhs).unwrap_or_else(|| lstsq(jac, &rhs, 1e-12))
}

/// Damped Newton from `x0`; returns a point with `‖f‖ ≤ tol` if one is found
/// without leaving an enlarged copy of `U`.
fn newton<S: Scalar>(
    f: &FiniteMap<'_, S>,
    u: &Region<S>,
    x0: Vec<S>,
    tol: S,
    max_iter: usize,
) -> Option<Vec<S>> {
    let mut x = x0;
    let mut fx = f.eval(&x);
    let mut r = norm(&fx);
    let escape = -u.size() * S::lit(0.5);
    let floor = tol * S::lit(1e-4);
    for _ in 0..max_iter {
        if r <= floor {
            break;
        }
        let dx = newton_step(&f.jacobian(&x), &fx);
        let mut lam = S::one();
        let mut accepted = false;
        while lam > S::lit(1e-8) {
            let trial: Vec<S> = x.iter().zip(&dx).map(|(&a, &d)| a + lam * d).collect();
            let ft = f.eval(&trial);
            let rt = norm(&ft);
            if rt < (S::one() - S::lit(1e-4) * lam) * r {
                x = trial;
                fx = ft;
                r = rt;
                accepted = true;
                break;
            }
            lam = lam / S::lit(2.0);
        }
        if !accepted || u.gap(&x) < escape {
            break;
        }
    }
    (r <= tol).then_some(x)
}

fn starts<S: Scalar>(u: &Region<S>, opts: &DegreeOptions, rng: &mut SeededRng) -> Vec<Vec<S>> {
    let m = u.dim();
    let grid_n = (opts.grid_base as f64).powi(m as i32);
    let mut out = Vec::new();
    if grid_n <= opts.max_grid_points as f64 {
        let g = opts.grid_base;
        let total = g.pow(m as u32);
        for idx in 0..total {
            let mut rem = idx;
            let cell: Vec<f64> = (0..m)
                .map(|_| {
                    let c = rem % g;
                    rem /= g;
                    (c as f64 + 0.5) / g as f64
                })
                .collect();
            out.push(u.from_unit_cube(&cell));
        }
    } else {
        for p in sampling::halton(opts.max_grid_points, m, rng) {
            out.push(u.from_unit_cube(&p));
        }
    }
    for _ in 0..opts.random_restarts {
        out.push(u.random_interior(rng));
    }
    out.push(u.center().to_vec());
    out
}

fn lex_cmp<S: Scalar>(a: &[S], b: &[S]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Zeros of `f` in the closure of `U`, clustered and sorted lexicographically.
pub fn enumerate_zeros<S: Scalar>(
    f: &FiniteMap<'_, S>,
    u: &Region<S>,
    opts: &DegreeOptions,
    rng: &mut SeededRng,
) -> Vec<Vec<S>> {
    let tol = S::lit(opts.tol_zero);
    let mut found: Vec<Vec<S>> = Vec::new();
    for x0 in starts(u, opts, rng) {
        if let Some(z) = newton(f, u, x0, tol, opts.newton_max_iter) {
            if u.gap(&z) > -S::lit(opts.tol_boundary) {
                found.push(z);
            }
        }
    }
    found.sort_by(|a, b| lex_cmp(a, b));
    let ctol = S::lit(opts.tol_cluster);
    let mut clusters: Vec<Vec<S>> = Vec::new();
    for z in found {
        let dup = clusters.iter().any(|c| {
            let d: Vec<S> = c.iter().zip(&z).map(|(&a, &b)| a - b).collect();
            norm(&d) < ctol
        });
        if !dup {
            clusters.push(z);
        }
    }
    clusters
}

/// Brouwer degree by zero enumeration and sign counting.
pub fn brouwer_degree<S: Scalar>(
    f: &FiniteMap<'_, S>,
    u: &Region<S>,
    opts: &DegreeOptions,
) -> Result<DegreeResult<S>, DegreeError> {
    check_dims(f, u)?;
    let mut rng = sampling::rng(opts.seed);
    check_boundary(f, u, opts, &mut rng)?;
    let m = u.dim();
    let mut worst: Option<(Vec<S>, S)> = None;
    for attempt in 0..=opts.max_retries {
        let g = if attempt == 0 {
            f.clone()
        } else {
            let z = sampling::ball_point::<S, _>(&mut rng, m, S::lit(opts.perturb_eps));
            f.translated(&z)
        };
        let zeros = enumerate_zeros(&g, u, opts, &mut rng);
        let mut located = Vec::with_capacity(zeros.len());
        let mut degenerate = None;
        for z in zeros {
            if u.gap(&z) < S::lit(opts.tol_boundary) {
                return Err(DegreeError::ZeroOnBoundary {
                    residual: norm(&g.eval(&z)).to_f64_lossy(),
                    point: to_f64(&z),
                });
            }
            let det = determinant(&g.jacobian(&z));
            if det.abs() < S::lit(opts.tol_singular) {
                degenerate = Some((z, det));
                break;
            }
            located.push(LocatedZero {
                sign: if det > S::zero() { 1 } else { -1 },
                point: z,
                det,
            });
        }
        if let Some(d) = degenerate {
            worst = Some(d);
            continue;
        }
        let separated = located.iter().enumerate().all(|(i, a)| {
            located[i + 1..].iter().all(|b| {
                let d: Vec<S> = a.point.iter().zip(&b.point).map(|(&p, &q)| p - q).collect();
                norm(&d) >= S::lit(100.0 * opts.tol_cluster)
            })
        });
        return Ok(DegreeResult {
            degree: located.iter().map(|z| z.sign as i64).sum(),
            zeros: located,
            method: DegreeMethod::SignCount,
            certified: separated,
            retries: attempt,
        });
    }
    let (point, det) = worst.expect("degenerate zero recorded");
    Err(DegreeError::UncertifiedDegeneracy {
        point: to_f64(&point),
        det: det.to_f64_lossy(),
    })
}

fn wrap_angle(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let mut x = a % t;
    if x > std::f64::consts::PI {
        x -= t;
    } else if x < -std::f64::consts::PI {
        x += t;
    }
    x
}

/// Winding number of `f` along `∂U` for planar regions: the sampled argument
/// increment, refined until consecutive samples turn by less than π/8.
pub fn winding_number_2d<S: Scalar>(
    f: &FiniteMap<'_, S>,
    u: &Region<S>,
    opts: &DegreeOptions,
) -> Result<DegreeResult<S>, DegreeError> {
    check_dims(f, u)?;
    if u.dim() != 2 {
        return Err(DegreeError::NotPlanar);
    }
    let boundary = |s: f64| -> Vec<S> {
        match u {
            Region::Ball { .. } => {
                let a = std::f64::consts::TAU * s;
                u.boundary_point(&[S::lit(a.cos()), S::lit(a.sin())])
            }
            Region::Box {
                center,
                half_widths,
            } => {
                // perimeter walk, counterclockwise from the lower-left corner
                let (hx, hy) = (half_widths[0].to_f64_lossy(), half_widths[1].to_f64_lossy());
                let per = 4.0 * (hx + hy);
                let mut t = s * per;
                let (x, y) = if t < 2.0 * hx {
                    (-hx + t, -hy)
                } else if {
                    t -= 2.0 * hx;
                    t < 2.0 * hy
                } {
                    (hx, -hy + t)
                } else if {
                    t -= 2.0 * hy;
                    t < 2.0 * hx
                } {
                    (hx - t, hy)
                } else {
                    t -= 2.0 * hx;
                    (-hx, hy - t)
                };
                vec![center[0] + S::lit(x), center[1] + S::lit(y)]
            }
        }
    };
    let mut n = opts.boundary_samples.max(256);
    loop {
        let mut total = 0.0;
        let mut max_turn: f64 = 0.0;
        let mut prev = None;
        for i in 0..=n {
            let x = boundary(i as f64 / n as f64);
            let v = f.eval(&x);
            let r = norm(&v);
            if r < S::lit(opts.tol_boundary) {
                return Err(DegreeError::ZeroOnBoundary {
                    point: to_f64(&x),
                    residual: r.to_f64_lossy(),
                });
            }
            let ang = v[1].to_f64_lossy().atan2(v[0].to_f64_lossy());
            if let Some(p) = prev {
                let d = wrap_angle(ang - p);
                max_turn = max_turn.max(d.abs());
                total += d;
            }
            prev = Some(ang);
        }
        if max_turn < std::f64::consts::PI / 8.0 || n >= 1 << 20 {
            return Ok(DegreeResult {
                degree: (total / std::f64::consts::TAU).round() as i64,
                zeros: Vec::new(),
                method: DegreeMethod::Winding2d,
                certified: max_turn < std::f64::consts::PI / 8.0,
                retries: 0,
            });
        }
        n *= 4;
    }
}

/// Degrees of `h(t, ·)` at `t_samples` equally spaced parameters in `[0, 1]`.
pub fn homotopy_degree_constancy<'a, S: Scalar>(
    h: impl Fn(S) -> FiniteMap<'a, S>,
    u: &Region<S>,
    t_samples: usize,
    opts: &DegreeOptions,
) -> Result<Vec<i64>, DegreeError> {
    let mut out = Vec::with_capacity(t_samples);
    for i in 0..t_samples {
        let t = if t_samples <= 1 {
            0.0
        } else {
            i as f64 / (t_samples - 1) as f64
        };
        match brouwer_degree(&h(S::lit(t)), u, opts) {
            Ok(r) => out.push(r.degree),
            Err(e @ DegreeError::ZeroOnBoundary { .. }) => {
                return Err(DegreeError::HomotopyBoundaryZero {
                    t,
                    source: Box::new(e),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// A zero of `f` in `U` when the degree is nonzero, `None` when it is zero.
pub fn existence_from_degree<S: Scalar>(
    f: &FiniteMap<'_, S>,
    u: &Region<S>,
    opts: &DegreeOptions,
) -> Result<Option<Vec<S>>, DegreeError> {
    let res = brouwer_degree(f, u, opts)?;
    if res.degree == 0 {
        return Ok(None);
    }
    let tol = S::lit(opts.tol_zero);
    for z in &res.zeros {
        if let Some(x) = newton(f, u, z.point.clone(), tol, 200) {
            if u.gap(&x) > -S::lit(opts.tol_boundary) {
                return Ok(Some(x));
            }
        }
    }
    Err(DegreeError::RootFindingFailed { degree: res.degree })
}

/// Finds `u₀ ∈ ∂U` with `f(u₀) = 0` for an odd map whose range lies in the
/// coordinate subspace `proper_subspace` of codimension at least one.
pub fn borsuk_ulam_zero<S: Scalar>(
    f: &FiniteMap<'_, S>,
    u: &Region<S>,
    proper_subspace: &[usize],
    opts: &DegreeOptions,
) -> Result<Vec<S>, DegreeError> {
    check_dims(f, u)?;
    let m = u.dim();
    if !u.is_symmetric() {
        return Err(DegreeError::NotSymmetric);
    }
    if proper_subspace.len() >= m || proper_subspace.iter().any(|&i| i >= m) {
        return Err(DegreeError::NotProperSubspace);
    }
    let d = f.oddness_defect(32, opts.seed ^ 0x0dd);
    if d > S::lit(1e-9) {
        return Err(DegreeError::NotOdd {
            discrepancy: d.to_f64_lossy(),
        });
    }
    let mut rng = sampling::rng(opts.seed);
    let outside: Vec<usize> = (0..m).filter(|i| !proper_subspace.contains(i)).collect();
    for _ in 0..32 {
        let x = u.random_interior(&mut rng);
        let v = f.eval(&x);
        let scale = fmax(S::one(), norm(&v));
        for &i in &outside {
            if v[i].abs() > S::lit(1e-12) * scale {
                return Err(DegreeError::RangeNotInSubspace {
                    index: i,
                    value: v[i].to_f64_lossy(),
                });
            }
        }
    }

    let residual = |dir: &[S]| -> (Vec<S>, S) {
        let x = u.boundary_point(dir);
        let v = f.eval(&x);
        let r = norm(&v);
        (x, r)
    };
    let mut dirs: Vec<Vec<S>> = Vec::new();
    for i in 0..m {
        let mut e = vec![S::zero(); m];
        e[i] = S::one();
        dirs.push(e.clone());
        e[i] = -S::one();
        dirs.push(e);
    }
    for p in sampling::halton(16 * m, m, &mut rng) {
        let d: Vec<S> = p.iter().map(|&t| S::lit(2.0 * t - 1.0)).collect();
        if norm(&d) > S::lit(1e-6) {
            dirs.push(d);
        }
    }
    for _ in 0..4 * m {
        dirs.push(sampling::sphere_point(&mut rng, m, S::one()));
    }
    let mut scored: Vec<(S, Vec<S>)> = dirs
        .into_iter()
        .map(|d| {
            let n = norm(&d);
            let d: Vec<S> = d.iter().map(|&v| v / n).collect();
            (residual(&d).1, d)
        })
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    let tol = S::lit(opts.tol_zero);
    let mut best: Option<(Vec<S>, S)> = None;
    for (_, d0) in scored.into_iter().take(24) {
        let (x, r) = sphere_gauss_newton(f, u, &proper_subspace.to_vec(), d0, tol);
        if r <= tol {
            return Ok(x);
        }
        if best.as_ref().is_none_or(|b| r < b.1) {
            best = Some((x, r));
        }
    }
    let (x, r) = best.expect("at least one start");
    Err(DegreeError::SearchFailed {
        best: to_f64(&x),
        residual: r.to_f64_lossy(),
    })
}

/// Gauss–Newton for `g(x(d)) = 0` over unit directions `d`, where `x(d)` is
/// the boundary point of `U` along `d` and `g` the selected components of `f`.
fn sphere_gauss_newton<S: Scalar>(
    f: &FiniteMap<'_, S>,
    u: &Region<S>,
    comps: &[usize],
    mut d: Vec<S>,
    tol: S,
) -> (Vec<S>, S) {
    let m = d.len();
    let g = |dir: &[S]| -> Vec<S> {
        let v = f.eval(&u.boundary_point(dir));
        comps.iter().map(|&i| v[i]).collect()
    };
    let normalize = |v: Vec<S>| -> Vec<S> {
        let n = norm(&v);
        v.into_iter().map(|x| x / n).collect()
    };
    let mut gv = g(&d);
    let mut r = norm(&gv);
    let h = S::lit(1e-7);
    for _ in 0..200 {
        if r <= tol * S::lit(1e-2) {
            break;
        }
        let mut jac = Matrix::zeros(comps.len(), m);
        let mut y = d.clone();
        for c in 0..m {
            let orig = y[c];
            y[c] = orig + h;
            let gp = g(&y);
            y[c] = orig - h;
            let gm = g(&y);
            y[c] = orig;
            for (rr, (a, b)) in gp.iter().zip(&gm).enumerate() {
                jac[(rr, c)] = (*a - *b) / (h + h);
            }
        }
        // restrict to the tangent space at d
        let mut jt = jac.clone();
        for rr in 0..comps.len() {
            let row = jac.row(rr).to_vec();
            let proj = dot(&row, &d);
            for c in 0..m {
                jt[(rr, c)] = row[c] - proj * d[c];
            }
        }
        let rhs: Vec<S> = gv.iter().map(|&v| -v).collect();
        let step = lstsq(&jt, &rhs, 1e-13);
        let mut lam = S::one();
        let mut accepted = false;
        while lam > S::lit(1e-10) {
            let trial = normalize(d.iter().zip(&step).map(|(&a, &s)| a + lam * s).collect());
            let gt = g(&trial);
            let rt = norm(&gt);
            if rt < r {
                d = trial;
                gv = gt;
                r = rt;
                accepted = true;
                break;
            }
            lam = lam / S::lit(2.0);
        }
        if !accepted {
            break;
        }
    }
    let x = u.boundary_point(&d);
    let full = norm(&f.eval(&x));
    (x, full)
}
